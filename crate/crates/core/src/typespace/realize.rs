//! Saturation of realizable types.
//!
//! A rooted finite model is a root valuation placed below a finite family of
//! rooted models. Its level-L type depends only on that valuation and the
//! union of the children's successor sets, so the set of realizable types is
//! the least set closed under "new root over a family of already realized
//! roots". The saturation below computes it, for several (signature, level)
//! components at once, and records one witnessing family per result so that
//! every realized tuple is the root of an explicit finite DAG model.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::kripke::KripkeModel;
use crate::signature::{submasks, Signature};
use crate::typespace::store::{DegType, TypeStore};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub sig: Signature,
    pub level: u32,
}

impl Component {
    pub fn new(sig: Signature, level: u32) -> Self {
        Component { sig, level }
    }
}

#[derive(Debug, Clone)]
pub struct Limits {
    pub max_tuples: usize,
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tuples: 20_000,
            max_states: 400_000,
        }
    }
}

/// One realized point: its valuation over the model signature and its type
/// for every component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tuple {
    pub val: u32,
    pub types: Vec<DegType>,
}

pub struct Realization {
    pub tuples: Vec<Tuple>,
    /// Node `i` is a point whose component types are `tuples[i]`.
    pub model: Arc<KripkeModel>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct StateKey {
    // per component, the union of the children's successor sets (sorted)
    unions: Vec<Vec<DegType>>,
    meet: u32,
}

struct State {
    key: StateKey,
    family: Vec<usize>,
}

pub fn realize(
    store: &TypeStore,
    model_sig: &Signature,
    components: &[Component],
    limits: &Limits,
) -> Result<Realization> {
    for c in components {
        if !c.sig.is_subset_of(model_sig) {
            return Err(Error::SignatureMismatch);
        }
    }
    let mut tuples: Vec<Tuple> = Vec::new();
    let mut tuple_index: HashMap<Tuple, usize> = HashMap::new();
    let mut parents: Vec<Vec<usize>> = Vec::new();
    let mut states: Vec<State> = vec![State {
        key: StateKey {
            unions: vec![Vec::new(); components.len()],
            meet: model_sig.full_mask(),
        },
        family: Vec::new(),
    }];
    let mut state_index: HashMap<StateKey, usize> = HashMap::new();
    state_index.insert(states[0].key.clone(), 0);
    // next generator each state still has to be combined with
    let mut next_gen: Vec<usize> = vec![0];
    let mut emitted = 0;

    loop {
        let mut progress = false;
        while emitted < states.len() {
            let s = emitted;
            emitted += 1;
            progress = true;
            let towers: Vec<Vec<Vec<DegType>>> = components
                .iter()
                .zip(&states[s].key.unions)
                .map(|(c, u)| truncation_tower(store, u, c.level))
                .collect::<Result<_>>()?;
            for v in submasks(states[s].key.meet) {
                let types = components
                    .iter()
                    .zip(&towers)
                    .map(|(c, tower)| root_type(store, &c.sig, model_sig.project(v, &c.sig), tower))
                    .collect();
                let tuple = Tuple { val: v, types };
                if tuple_index.contains_key(&tuple) {
                    continue;
                }
                if tuples.len() >= limits.max_tuples {
                    return Err(Error::Resource(format!(
                        "more than {} realizable types",
                        limits.max_tuples
                    )));
                }
                tuple_index.insert(tuple.clone(), tuples.len());
                tuples.push(tuple);
                parents.push(states[s].family.clone());
            }
        }
        let mut s = 0;
        while s < states.len() {
            while next_gen[s] < tuples.len() {
                let g = next_gen[s];
                next_gen[s] += 1;
                let key = combine(store, components, &states[s].key, &tuples[g]);
                if state_index.contains_key(&key) {
                    continue;
                }
                if states.len() >= limits.max_states {
                    return Err(Error::Resource(format!(
                        "more than {} child families",
                        limits.max_states
                    )));
                }
                let mut family = states[s].family.clone();
                family.push(g);
                state_index.insert(key.clone(), states.len());
                states.push(State { key, family });
                next_gen.push(0);
                progress = true;
            }
            s += 1;
        }
        if !progress {
            break;
        }
    }

    let n = tuples.len();
    let mut up: Vec<FixedBitSet> = Vec::with_capacity(n);
    for (i, family) in parents.iter().enumerate() {
        let mut set = FixedBitSet::with_capacity(n);
        set.insert(i);
        for &c in family {
            set.union_with(&up[c]);
        }
        up.push(set);
    }
    let names = (0..n).map(|i| format!("t{i}")).collect();
    let vals = tuples.iter().map(|t| t.val).collect();
    let model = KripkeModel::from_closed(model_sig.clone(), names, up, vals);
    Ok(Realization {
        tuples,
        model: Arc::new(model),
    })
}

/// `tower[k]` is the level-k image of `union` (which lives at `level - 1`);
/// empty for level-0 components.
fn truncation_tower(store: &TypeStore, union: &[DegType], level: u32) -> Result<Vec<Vec<DegType>>> {
    if level == 0 {
        return Ok(Vec::new());
    }
    let mut tower = vec![Vec::new(); level as usize];
    tower[level as usize - 1] = union.to_vec();
    for k in (0..level as usize - 1).rev() {
        let mut next = tower[k + 1]
            .iter()
            .map(|&t| store.truncate(t))
            .collect::<Result<Vec<_>>>()?;
        next.sort_unstable();
        next.dedup();
        tower[k] = next;
    }
    Ok(tower)
}

/// Type of a root with valuation `v` whose strict successors contribute the
/// sets in `tower`.
fn root_type(store: &TypeStore, sig: &Signature, v: u32, tower: &[Vec<DegType>]) -> DegType {
    let mut t = store.leaf(sig, v);
    for (k, above) in tower.iter().enumerate() {
        let mut succ = above.clone();
        succ.push(t);
        t = store.intern_unchecked(sig, k as u32 + 1, v, succ);
    }
    t
}

fn combine(store: &TypeStore, components: &[Component], key: &StateKey, g: &Tuple) -> StateKey {
    let unions = components
        .iter()
        .zip(&key.unions)
        .zip(&g.types)
        .map(|((c, u), &t)| {
            if c.level == 0 {
                return Vec::new();
            }
            merge(u, &store.succ(t))
        })
        .collect();
    StateKey {
        unions,
        meet: key.meet & g.val,
    }
}

fn merge(a: &[DegType], b: &[DegType]) -> Vec<DegType> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
