//! Degree-n types and the finite posets they form.

mod realize;
mod space;
mod store;

pub use realize::{realize, Component, Limits, Realization, Tuple};
pub use space::TypeSpace;
pub use store::{DegType, Distance, TypeStore};
