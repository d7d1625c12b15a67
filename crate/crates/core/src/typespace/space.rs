use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::{escape, KripkeModel};
use crate::signature::Signature;
use crate::typespace::realize::{realize, Component, Limits};
use crate::typespace::store::{DegType, TypeStore};

/// The finite poset of all realizable level-n types over a signature,
/// together with the spaces below it and a model realizing every element.
///
/// Elements are indexed in canonical order: by valuation, then by the sorted
/// indices of their successors in the space one level down.
pub struct TypeSpace {
    sig: Signature,
    level: u32,
    elements: Vec<DegType>,
    index: HashMap<DegType, usize>,
    vals: Vec<u32>,
    // successor classes as indices into the space one level down
    succ: Vec<Vec<usize>>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    lower: Option<Arc<TypeSpace>>,
    to_lower: Vec<usize>,
    realizer: Arc<KripkeModel>,
    realizer_node: Vec<usize>,
}

impl TypeSpace {
    pub fn build(store: &TypeStore, sig: &Signature, level: u32) -> Result<Arc<TypeSpace>> {
        Self::build_with(store, sig, level, &Limits::default())
    }

    pub fn build_with(
        store: &TypeStore,
        sig: &Signature,
        level: u32,
        limits: &Limits,
    ) -> Result<Arc<TypeSpace>> {
        let r = realize(store, sig, &[Component::new(sig.clone(), level)], limits)?;
        let tops: Vec<(DegType, usize)> = r
            .tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.types[0], i))
            .collect();
        Self::from_realized(store, sig, level, tops, r.model)
    }

    /// Builds the tower from level-`level` types `tops`, each paired with a
    /// node of `model` that realizes it. The list must be closed under the
    /// successor relation (every successor's own element type is realized).
    pub(crate) fn from_realized(
        store: &TypeStore,
        sig: &Signature,
        level: u32,
        mut tops: Vec<(DegType, usize)>,
        model: Arc<KripkeModel>,
    ) -> Result<Arc<TypeSpace>> {
        let mut per_level: Vec<Vec<(DegType, usize)>> = vec![Vec::new(); level as usize + 1];
        dedup_keep_first(&mut tops);
        per_level[level as usize] = tops;
        for k in (0..level as usize).rev() {
            let mut below = per_level[k + 1]
                .iter()
                .map(|&(t, w)| Ok((store.truncate(t)?, w)))
                .collect::<Result<Vec<_>>>()?;
            dedup_keep_first(&mut below);
            per_level[k] = below;
        }

        let mut lower: Option<Arc<TypeSpace>> = None;
        for (k, items) in per_level.into_iter().enumerate() {
            let space = Self::one_level(store, sig, k as u32, items, lower.take(), model.clone())?;
            lower = Some(Arc::new(space));
        }
        Ok(lower.expect("at least level 0"))
    }

    fn one_level(
        store: &TypeStore,
        sig: &Signature,
        level: u32,
        items: Vec<(DegType, usize)>,
        lower: Option<Arc<TypeSpace>>,
        realizer: Arc<KripkeModel>,
    ) -> Result<TypeSpace> {
        let n = items.len();
        let mut keyed: Vec<((u32, Vec<usize>), DegType, usize, Option<FixedBitSet>)> =
            Vec::with_capacity(n);
        for (t, w) in items {
            let val = store.val(t);
            match &lower {
                None => keyed.push(((val, Vec::new()), t, w, None)),
                Some(lo) => {
                    let mut succ = store
                        .succ(t)
                        .iter()
                        .map(|s| lo.index.get(s).copied().ok_or(Error::NotInSpace))
                        .collect::<Result<Vec<_>>>()?;
                    succ.sort_unstable();
                    let mut bits = FixedBitSet::with_capacity(lo.len());
                    bits.extend(succ.iter().copied());
                    keyed.push(((val, succ), t, w, Some(bits)));
                }
            }
        }
        keyed.sort_by(|a, b| a.0.cmp(&b.0));

        let elements: Vec<DegType> = keyed.iter().map(|k| k.1).collect();
        let realizer_node = keyed.iter().map(|k| k.2).collect();
        let vals = keyed.iter().map(|k| k.0 .0).collect();
        let succ = keyed.iter().map(|k| k.0 .1.clone()).collect();
        let index: HashMap<DegType, usize> =
            elements.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                let le = match (&keyed[i].3, &keyed[j].3) {
                    (Some(si), Some(sj)) => sj.is_subset(si),
                    _ => keyed[i].0 .0 & !keyed[j].0 .0 == 0,
                };
                if le {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        let to_lower = match &lower {
            None => Vec::new(),
            Some(lo) => elements
                .iter()
                .map(|&t| {
                    lo.index
                        .get(&store.truncate(t)?)
                        .copied()
                        .ok_or(Error::NotInSpace)
                })
                .collect::<Result<_>>()?,
        };
        Ok(TypeSpace {
            sig: sig.clone(),
            level,
            elements,
            index,
            vals,
            succ,
            up,
            down,
            lower,
            to_lower,
            realizer,
            realizer_node,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[DegType] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> DegType {
        self.elements[i]
    }

    pub fn index_of(&self, t: DegType) -> Option<usize> {
        self.index.get(&t).copied()
    }

    /// Valuation of element `i`.
    pub fn val(&self, i: usize) -> u32 {
        self.vals[i]
    }

    /// Successor classes of element `i`, as sorted indices into
    /// [`TypeSpace::lower`]. Empty at level 0.
    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn up(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    pub fn down(&self, i: usize) -> &FixedBitSet {
        &self.down[i]
    }

    /// The space one level down, if any.
    pub fn lower(&self) -> Option<&Arc<TypeSpace>> {
        self.lower.as_ref()
    }

    /// The space at level `k <= level` of the same tower.
    pub fn at_level(&self, k: u32) -> &TypeSpace {
        assert!(k <= self.level);
        let mut s = self;
        while s.level > k {
            s = s.lower.as_ref().unwrap();
        }
        s
    }

    /// Index of the truncation of element `i` in the space one level down.
    pub fn truncation_index(&self, i: usize) -> usize {
        self.to_lower[i]
    }

    /// For every element, the index of its truncation at level `k`.
    pub fn projection_to(&self, k: u32) -> Vec<usize> {
        assert!(k <= self.level);
        let mut map: Vec<usize> = (0..self.len()).collect();
        let mut s = self;
        while s.level > k {
            for m in map.iter_mut() {
                *m = s.to_lower[*m];
            }
            s = s.lower.as_ref().unwrap();
        }
        map
    }

    /// The shared DAG model in which [`TypeSpace::realizer_node`] realizes
    /// each element.
    pub fn realizer(&self) -> &Arc<KripkeModel> {
        &self.realizer
    }

    pub fn realizer_node(&self, i: usize) -> usize {
        self.realizer_node[i]
    }

    /// A rooted finite model whose root has type `element(i)`.
    pub fn realize_element(&self, i: usize) -> (KripkeModel, usize) {
        self.realizer.generated_submodel(self.realizer_node[i])
    }

    /// Indices of the elements forcing `f`; always an up-set.
    pub fn classes_of(&self, f: &Formula) -> Result<FixedBitSet> {
        let degree = f.impl_degree();
        if degree > self.level {
            return Err(Error::DegreeExceedsLevel {
                degree,
                level: self.level,
            });
        }
        let truth = self.realizer.truth_set(f)?;
        let mut out = FixedBitSet::with_capacity(self.len());
        out.extend((0..self.len()).filter(|&i| truth.contains(self.realizer_node[i])));
        if !self.is_up_closed(&out) {
            return Err(Error::Inconsistent(format!(
                "classes of `{f}` are not up-closed"
            )));
        }
        Ok(out)
    }

    pub fn is_up_closed(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|i| self.up[i].is_subset(set))
    }

    pub fn up_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for i in set.ones() {
            out.union_with(&self.up[i]);
        }
        out
    }

    pub fn down_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for i in set.ones() {
            out.union_with(&self.down[i]);
        }
        out
    }

    pub fn minimal(&self, set: &FixedBitSet) -> Vec<usize> {
        set.ones()
            .filter(|&i| set.ones().all(|j| j == i || !self.leq(j, i)))
            .collect()
    }

    pub fn maximal(&self, set: &FixedBitSet) -> Vec<usize> {
        set.ones()
            .filter(|&i| set.ones().all(|j| j == i || !self.leq(i, j)))
            .collect()
    }

    /// Every up-set of the space, as bitsets. Exponential; only for small
    /// spaces.
    pub fn up_sets(&self) -> Vec<FixedBitSet> {
        // antichains generate up-sets bijectively
        let mut out = Vec::new();
        self.antichains_from(0, &mut Vec::new(), &mut out);
        out
    }

    fn antichains_from(&self, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<FixedBitSet>) {
        let mut set = FixedBitSet::with_capacity(self.len());
        for &c in chosen.iter() {
            set.union_with(&self.up[c]);
        }
        out.push(set);
        for i in start..self.len() {
            if chosen.iter().any(|&c| self.leq(c, i) || self.leq(i, c)) {
                continue;
            }
            chosen.push(i);
            self.antichains_from(i + 1, chosen, out);
            chosen.pop();
        }
    }

    /// `2 * |space| - 1`.
    pub fn r_bound(&self) -> usize {
        2 * self.len() - 1
    }

    /// Covering pairs `(lower, upper)`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.up[i].ones() {
                if j == i {
                    continue;
                }
                let between = self.up[i]
                    .ones()
                    .any(|k| k != i && k != j && self.leq(k, j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn label(&self, i: usize) -> String {
        format!("x{i}")
    }

    pub fn to_json(&self, store: &TypeStore) -> Value {
        let vars: Vec<&str> = self.sig.names().iter().map(|n| n.as_ref()).collect();
        let elements: Vec<Value> = (0..self.len())
            .map(|i| json!({ "id": self.label(i), "type": store.to_json(self.elements[i]) }))
            .collect();
        let order: Vec<Value> = self
            .hasse()
            .into_iter()
            .map(|(a, b)| json!([self.label(a), self.label(b)]))
            .collect();
        json!({ "vars": vars, "level": self.level, "elements": elements, "order": order })
    }

    pub fn to_dot(&self, store: &TypeStore) -> String {
        let mut out = String::from("digraph types {\n  rankdir=BT;\n  node [shape=box];\n");
        for i in 0..self.len() {
            let t = self.elements[i];
            let detail = if self.level <= 1 {
                store.show(t)
            } else {
                self.sig.show_mask(store.val(t))
            };
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\n{}\"];",
                self.label(i),
                self.label(i),
                escape(&detail)
            );
        }
        for (a, b) in self.hasse() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.label(a), self.label(b));
        }
        out.push_str("}\n");
        out
    }
}

fn dedup_keep_first(items: &mut Vec<(DegType, usize)>) {
    let mut seen = std::collections::HashSet::new();
    items.retain(|(t, _)| seen.insert(*t));
}
