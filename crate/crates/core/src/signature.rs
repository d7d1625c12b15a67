//! Finite variable sets and valuations over them.
//!
//! A [`Signature`] is a sorted, duplicate-free list of variable names. A
//! valuation over a signature is a bitmask: bit `i` is set when the `i`-th
//! variable (in sorted order) is true.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// Largest number of variables a signature may carry (valuations are `u32` masks).
pub const MAX_VARS: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Arc<[Arc<str>]>);

impl Signature {
    pub fn new<I, S>(names: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<Arc<str>> = names.into_iter().map(|s| Arc::from(s.as_ref())).collect();
        if set.len() > MAX_VARS {
            return Err(Error::TooManyVariables(set.len()));
        }
        Ok(Signature(set.into_iter().collect()))
    }

    pub fn empty() -> Self {
        Signature(Arc::from(Vec::new()))
    }

    /// Parses a comma separated list such as `"p,q"`. Blank entries are ignored.
    pub fn parse_list(text: &str) -> Result<Self, Error> {
        Self::new(text.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[Arc<str>] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.binary_search_by(|n| n.as_ref().cmp(name)).ok()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Mask with every variable of the signature set.
    pub fn full_mask(&self) -> u32 {
        if self.0.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.0.len()) - 1
        }
    }

    pub fn is_subset_of(&self, other: &Signature) -> bool {
        self.0.iter().all(|n| other.contains(n))
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature::new(self.0.iter().chain(other.0.iter()).map(|s| s.as_ref()))
            .expect("union of two signatures exceeds the variable limit")
    }

    pub fn without(&self, name: &str) -> Signature {
        Signature(
            self.0
                .iter()
                .filter(|n| n.as_ref() != name)
                .cloned()
                .collect(),
        )
    }

    pub fn with(&self, name: &str) -> Result<Signature, Error> {
        Signature::new(
            self.0
                .iter()
                .map(|s| s.as_ref())
                .chain(std::iter::once(name)),
        )
    }

    /// Converts a set of names into a mask, failing on names outside the signature.
    pub fn mask_of<I, S>(&self, names: I) -> Result<u32, Error>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = 0;
        for name in names {
            let name = name.as_ref();
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    pub fn names_of(&self, mask: u32) -> Vec<Arc<str>> {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, n)| n.clone())
            .collect()
    }

    /// Re-expresses `mask` (over `self`) as a mask over `target`, dropping
    /// variables that `target` lacks.
    pub fn project(&self, mask: u32, target: &Signature) -> u32 {
        let mut out = 0;
        for (i, name) in self.0.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if let Some(j) = target.index_of(name) {
                    out |= 1 << j;
                }
            }
        }
        out
    }

    /// Renders a valuation as `{p,q}`.
    pub fn show_mask(&self, mask: u32) -> String {
        let names = self.names_of(mask);
        let names: Vec<&str> = names.iter().map(|n| n.as_ref()).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|n| n.as_ref()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Iterates over all submasks of `mask`, in increasing numeric order.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut subs = Vec::new();
    let mut s = mask;
    loop {
        subs.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    subs.reverse();
    subs.into_iter()
}
