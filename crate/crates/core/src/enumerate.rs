//! Exhaustive enumeration of small Kripke models up to isomorphism.
//!
//! Posets are generated with natural labelings (`i < j` in the order implies
//! `i < j` as integers). A labeled model is emitted only when its own
//! encoding is the least among all natural relabelings of it, so each
//! isomorphism class appears exactly once.

use fixedbitset::FixedBitSet;

use crate::kripke::KripkeModel;
use crate::signature::{submasks, Signature};

/// Every model over `sig` with `1..=max_nodes` nodes, ordered by node count
/// and then by canonical code.
pub fn enumerate_models(sig: &Signature, max_nodes: usize) -> impl Iterator<Item = KripkeModel> {
    let sig = sig.clone();
    (1..=max_nodes).flat_map(move |n| models_of_size(&sig, n))
}

pub fn models_of_size(sig: &Signature, n: usize) -> Vec<KripkeModel> {
    assert!(n <= 8, "enumeration is only meant for tiny models");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut found: Vec<(Code, Vec<Vec<bool>>, Vec<u32>)> = Vec::new();
    for bits in 0u64..(1u64 << pairs.len()) {
        let mut lt = vec![vec![false; n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if bits & (1 << k) != 0 {
                lt[i][j] = true;
            }
        }
        if !transitive(&lt) {
            continue;
        }
        let extensions = linear_extensions(&lt);
        let mut vals = vec![0u32; n];
        assign(sig.full_mask(), &lt, 0, &mut vals, &mut |vals| {
            let own = encode(&lt, vals, &(0..n).collect::<Vec<_>>());
            if extensions.iter().all(|ext| encode(&lt, vals, ext) >= own) {
                found.push((own, lt.clone(), vals.to_vec()));
            }
        });
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found
        .into_iter()
        .map(|(_, lt, vals)| build(sig, &lt, vals))
        .collect()
}

type Code = (u64, Vec<u32>);

fn transitive(lt: &[Vec<bool>]) -> bool {
    let n = lt.len();
    for i in 0..n {
        for j in i + 1..n {
            if !lt[i][j] {
                continue;
            }
            for k in j + 1..n {
                if lt[j][k] && !lt[i][k] {
                    return false;
                }
            }
        }
    }
    true
}

fn linear_extensions(lt: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn go(
        lt: &[Vec<bool>],
        placed: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = lt.len();
        if placed.len() == n {
            out.push(placed.clone());
            return;
        }
        for v in 0..n {
            if used[v] || (0..n).any(|u| !used[u] && lt[u][v]) {
                continue;
            }
            used[v] = true;
            placed.push(v);
            go(lt, placed, used, out);
            placed.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    go(lt, &mut Vec::new(), &mut vec![false; lt.len()], &mut out);
    out
}

fn assign(
    full: u32,
    lt: &[Vec<bool>],
    j: usize,
    vals: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32]),
) {
    if j == lt.len() {
        emit(vals);
        return;
    }
    let required = (0..j).filter(|&i| lt[i][j]).fold(0, |acc, i| acc | vals[i]);
    for extra in submasks(full & !required) {
        vals[j] = required | extra;
        assign(full, lt, j + 1, vals, emit);
    }
}

/// Encoding of the model relabeled so that old node `order[k]` gets label `k`.
fn encode(lt: &[Vec<bool>], vals: &[u32], order: &[usize]) -> Code {
    let n = lt.len();
    let mut rel = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            rel = (rel << 1) | lt[order[i]][order[j]] as u64;
        }
    }
    (rel, order.iter().map(|&v| vals[v]).collect())
}

fn build(sig: &Signature, lt: &[Vec<bool>], vals: Vec<u32>) -> KripkeModel {
    let n = lt.len();
    let up = (0..n)
        .map(|i| {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(i);
            for j in 0..n {
                if lt[i][j] {
                    s.insert(j);
                }
            }
            s
        })
        .collect();
    let names = (0..n).map(|i| format!("w{i}")).collect();
    KripkeModel::from_closed(sig.clone(), names, up, vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_single_node() {
        let p = Signature::new(["p"]).unwrap();
        assert_eq!(enumerate_models(&p, 1).count(), 2);
    }

    #[test]
    fn unlabeled_posets_on_two_points() {
        assert_eq!(enumerate_models(&Signature::empty(), 2).count(), 3);
    }

    #[test]
    fn deterministic_order() {
        let p = Signature::new(["p"]).unwrap();
        let a: Vec<String> = enumerate_models(&p, 3).map(|m| m.to_json()).collect();
        let b: Vec<String> = enumerate_models(&p, 3).map(|m| m.to_json()).collect();
        assert_eq!(a, b);
    }
}
