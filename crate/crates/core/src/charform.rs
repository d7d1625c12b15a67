//! Characteristic formulas of type-space elements.
//!
//! For an element `t` of a level-n space, the positive formula defines the
//! up-set of `t` and the negative formula defines the complement of its
//! down-set, both with implication degree at most n. The construction goes
//! level by level:
//!
//! * level 0: `pos(t)` is the conjunction of the true variables and `neg(t)`
//!   the disjunction of the false ones;
//! * level k+1: a point satisfies `pos(u) -> neg(u)` exactly when `u` is not
//!   among its level-k successor types, so `pos(t)` conjoins that formula over
//!   every `u` outside the successors of `t`, and `neg(t)` disjoins it over the
//!   successors of `t`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::formula::{simplify, Formula};
use crate::typespace::{DegType, TypeSpace};

/// Memoized characteristic formulas over one type space tower.
pub struct CharForms<'a> {
    space: &'a TypeSpace,
    simplify: bool,
    memo: Mutex<HashMap<(u32, usize), (Formula, Formula)>>,
}

impl<'a> CharForms<'a> {
    pub fn new(space: &'a TypeSpace) -> Self {
        CharForms {
            space,
            simplify: false,
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Applies unit and idempotence rewriting to every emitted formula.
    pub fn simplified(mut self) -> Self {
        self.simplify = true;
        self
    }

    pub fn space(&self) -> &TypeSpace {
        self.space
    }

    fn finish(&self, f: Formula) -> Formula {
        if self.simplify {
            simplify(&f)
        } else {
            f
        }
    }

    fn pair(&self, level: u32, i: usize) -> (Formula, Formula) {
        if let Some(hit) = self.memo.lock().get(&(level, i)) {
            return hit.clone();
        }
        let space = self.space.at_level(level);
        let sig = space.signature();
        let out = match space.lower() {
            None => {
                let val = sig.full_mask();
                let mask = space.val(i);
                let pos = Formula::conj(sig.names_of(mask).iter().map(|n| Formula::var(n)));
                let neg = Formula::disj(sig.names_of(val & !mask).iter().map(|n| Formula::var(n)));
                (pos, neg)
            }
            Some(lower) => {
                let succ = successor_indices(space, lower, i);
                let excluded = |u: usize| {
                    let (p, n) = self.pair(level - 1, u);
                    Formula::imp(p, n)
                };
                let pos = Formula::conj(
                    (0..lower.len())
                        .filter(|u| !succ.contains(*u))
                        .map(excluded),
                );
                let neg = Formula::disj(succ.ones().map(excluded));
                (pos, neg)
            }
        };
        let out = (self.finish(out.0), self.finish(out.1));
        self.memo.lock().insert((level, i), out.clone());
        out
    }

    /// Defines the up-set of element `i`.
    pub fn pos(&self, i: usize) -> Formula {
        self.pair(self.space.level(), i).0
    }

    /// Defines the complement of the down-set of element `i`.
    pub fn neg(&self, i: usize) -> Formula {
        self.pair(self.space.level(), i).1
    }

    /// Defines the up-closed set `set` as the disjunction of the positive
    /// formulas of its minimal elements.
    pub fn upset(&self, set: &FixedBitSet) -> Result<Formula> {
        if !self.space.is_up_closed(set) {
            return Err(Error::NotUpClosed);
        }
        let f = Formula::disj(self.space.minimal(set).into_iter().map(|i| self.pos(i)));
        Ok(self.finish(f))
    }

    /// Defines the complement of the down-closure of `set`.
    pub fn avoid(&self, set: &FixedBitSet) -> Formula {
        let down = self.space.down_closure(set);
        let f = Formula::conj(self.space.maximal(&down).into_iter().map(|i| self.neg(i)));
        self.finish(f)
    }

    /// A formula true at element `i` and false at element `j`, of the least
    /// degree possible.
    pub fn distinguishing(&self, i: usize, j: usize) -> Result<Formula> {
        if self.space.leq(i, j) {
            return Err(Error::NoSeparator);
        }
        // the least level at which the truncations are already unordered
        let top = self.space.level();
        for k in 0..=top {
            let level = self.space.at_level(k);
            let proj = self.space.projection_to(k);
            let (a, b) = (proj[i], proj[j]);
            if level.leq(a, b) {
                continue;
            }
            let sig = level.signature();
            let f = match level.lower() {
                None => {
                    let extra = level.val(a) & !level.val(b);
                    Formula::var(&sig.names_of(extra)[0])
                }
                Some(lower) => {
                    let sa = successor_indices(level, lower, a);
                    let sb = successor_indices(level, lower, b);
                    let u = sb
                        .ones()
                        .find(|u| !sa.contains(*u))
                        .expect("unordered means a successor is missing");
                    let (p, n) = self.pair(k - 1, u);
                    Formula::imp(p, n)
                }
            };
            return Ok(simplify(&f));
        }
        unreachable!("leq fails at the top level")
    }
}

fn successor_indices(space: &TypeSpace, lower: &TypeSpace, i: usize) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(lower.len());
    out.extend(space.successors(i).iter().copied());
    out
}

/// Positive characteristic formula of `t` in `space`.
pub fn dejongh_pos(space: &TypeSpace, t: DegType) -> Result<Formula> {
    let i = space.index_of(t).ok_or(Error::NotInSpace)?;
    Ok(CharForms::new(space).pos(i))
}

/// Negative characteristic formula of `t` in `space`.
pub fn dejongh_neg(space: &TypeSpace, t: DegType) -> Result<Formula> {
    let i = space.index_of(t).ok_or(Error::NotInSpace)?;
    Ok(CharForms::new(space).neg(i))
}

pub fn upset_formula(space: &TypeSpace, set: &[DegType]) -> Result<Formula> {
    let mut bits = FixedBitSet::with_capacity(space.len());
    for &t in set {
        bits.insert(space.index_of(t).ok_or(Error::NotInSpace)?);
    }
    CharForms::new(space).upset(&bits)
}

pub fn distinguishing_formula(space: &TypeSpace, t: DegType, u: DegType) -> Result<Formula> {
    let i = space.index_of(t).ok_or(Error::NotInSpace)?;
    let j = space.index_of(u).ok_or(Error::NotInSpace)?;
    CharForms::new(space).distinguishing(i, j)
}
