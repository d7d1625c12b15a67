//! Formula generators used by the oracles: a canonical exhaustive enumerator
//! and a seeded random sampler.

use rand::Rng;

use crate::formula::Formula;
use crate::signature::Signature;

/// Enumerates formulas over `sig` with at most `max_size` nodes and
/// implication degree at most `max_degree`.
///
/// Leaves are the variables and `false` (`true` is reachable as
/// `false -> false`). Commutative connectives only appear with their
/// operands in strictly increasing canonical order, so `a & a` and `b & a`
/// (for `a < b`) are skipped. Output order is by size, then by the derived
/// ordering on [`Formula`].
pub fn enumerate_canonical(sig: &Signature, max_size: usize, max_degree: u32) -> Vec<Formula> {
    // by_size[s] holds every canonical formula with exactly s nodes
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return Vec::new();
    }
    let mut leaves: Vec<Formula> = sig.names().iter().map(|n| Formula::var(n)).collect();
    leaves.push(Formula::Bot);
    leaves.sort();
    by_size[1] = leaves;

    for size in 2..=max_size {
        let mut here = Vec::new();
        for left_size in 1..size - 1 {
            let right_size = size - 1 - left_size;
            for a in &by_size[left_size] {
                for b in &by_size[right_size] {
                    let ordered = (left_size, a) < (right_size, b);
                    let degree = a.impl_degree().max(b.impl_degree());
                    if ordered {
                        here.push(Formula::and(a.clone(), b.clone()));
                        here.push(Formula::or(a.clone(), b.clone()));
                    }
                    if degree < max_degree {
                        here.push(Formula::imp(a.clone(), b.clone()));
                    }
                }
            }
        }
        here.sort();
        by_size[size] = here;
    }
    by_size.into_iter().flatten().collect()
}

/// Samples a formula over `sig` with degree at most `max_degree` and roughly
/// at most `max_size` nodes.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    max_degree: u32,
    max_size: usize,
) -> Formula {
    let budget = rng.gen_range(1..=max_size.max(1));
    grow(rng, sig, max_degree, budget)
}

fn grow<R: Rng>(rng: &mut R, sig: &Signature, degree: u32, budget: usize) -> Formula {
    if budget < 3 {
        return leaf(rng, sig);
    }
    let rest = budget - 1;
    let left = rng.gen_range(1..rest);
    let right = rest - left;
    let choice = if degree == 0 {
        rng.gen_range(0..2)
    } else {
        rng.gen_range(0..3)
    };
    match choice {
        0 => Formula::and(grow(rng, sig, degree, left), grow(rng, sig, degree, right)),
        1 => Formula::or(grow(rng, sig, degree, left), grow(rng, sig, degree, right)),
        _ => Formula::imp(
            grow(rng, sig, degree - 1, left),
            grow(rng, sig, degree - 1, right),
        ),
    }
}

fn leaf<R: Rng>(rng: &mut R, sig: &Signature) -> Formula {
    let n = sig.len();
    // variables are drawn four times as often as each constant
    let pick = rng.gen_range(0..4 * n + 2);
    if pick < 4 * n {
        Formula::var(&sig.names()[pick / 4])
    } else if pick == 4 * n {
        Formula::Bot
    } else {
        Formula::Top
    }
}
