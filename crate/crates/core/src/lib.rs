//! Finite machinery for intuitionistic propositional logic: degree-n type
//! spaces approximating the duals of free Heyting algebras, a contraction-free
//! sequent prover, and uniform interpolation with checkable certificates.

pub mod charform;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod formula;
pub mod generate;
pub mod interp;
pub mod kripke;
pub mod prover;
pub mod signature;
pub mod typespace;
pub mod witness;

pub use error::{Error, Result};
pub use formula::Formula;
pub use kripke::KripkeModel;
pub use signature::Signature;
