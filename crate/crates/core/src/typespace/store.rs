//! Hash-consed degree-n types.
//!
//! A level-0 type is a valuation. A level-(n+1) type is a valuation together
//! with the set of level-n types of all points above (and including) the
//! point. Types are interned in a [`TypeStore`]; structurally equal types get
//! the same [`DegType`] handle, so equality is handle comparison.
//!
//! Handles are assigned in insertion order and are never part of any output:
//! everything user-visible is ordered by [`TypeStore::canonical_ranks`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::KripkeModel;
use crate::signature::Signature;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegType(u32);

impl fmt::Debug for DegType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(PartialEq, Eq, Hash)]
struct TypeNode {
    sig: u32,
    level: u32,
    val: u32,
    // sorted by handle
    succ: Arc<[DegType]>,
}

#[derive(Default)]
struct Inner {
    nodes: Vec<Arc<TypeNode>>,
    index: HashMap<Arc<TypeNode>, DegType>,
    sigs: Vec<Signature>,
    sig_index: HashMap<Signature, u32>,
    truncations: HashMap<DegType, DegType>,
    restrictions: HashMap<(DegType, u32), DegType>,
}

impl Inner {
    fn sig_id(&mut self, sig: &Signature) -> u32 {
        if let Some(&id) = self.sig_index.get(sig) {
            return id;
        }
        let id = self.sigs.len() as u32;
        self.sigs.push(sig.clone());
        self.sig_index.insert(sig.clone(), id);
        id
    }

    fn intern(&mut self, sig: u32, level: u32, val: u32, mut succ: Vec<DegType>) -> DegType {
        succ.sort_unstable();
        succ.dedup();
        let node = TypeNode {
            sig,
            level,
            val,
            succ: succ.into(),
        };
        if let Some(&t) = self.index.get(&node) {
            return t;
        }
        let t = DegType(self.nodes.len() as u32);
        let node = Arc::new(node);
        self.nodes.push(node.clone());
        self.index.insert(node, t);
        t
    }
}

/// Arena of interned types. Insertions are idempotent and the store may be
/// shared between threads.
#[derive(Default)]
pub struct TypeStore {
    inner: RwLock<Inner>,
}

/// The ultrametric between two types known to a finite level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    /// `2^-k`: the types first differ at level `k`.
    Exact(u32),
    /// The types agree up to level `m`, so the distance is below `2^-m`;
    /// treated as 0 at this resolution.
    Below(u32),
}

impl Distance {
    pub fn value(self) -> f64 {
        match self {
            Distance::Exact(k) => 0.5f64.powi(k as i32),
            Distance::Below(_) => 0.0,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(k) => write!(f, "2^-{k}"),
            Distance::Below(m) => write!(f, "<2^-{m}"),
        }
    }
}

impl TypeStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of interned types.
    pub fn len(&self) -> usize {
        self.inner.read().nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn node(&self, t: DegType) -> Arc<TypeNode> {
        self.inner.read().nodes[t.0 as usize].clone()
    }

    pub fn level(&self, t: DegType) -> u32 {
        self.node(t).level
    }

    pub fn val(&self, t: DegType) -> u32 {
        self.node(t).val
    }

    pub fn signature(&self, t: DegType) -> Signature {
        let inner = self.inner.read();
        inner.sigs[inner.nodes[t.0 as usize].sig as usize].clone()
    }

    /// Successor set (empty at level 0), in handle order.
    pub fn succ(&self, t: DegType) -> Arc<[DegType]> {
        self.node(t).succ.clone()
    }

    pub fn leaf(&self, sig: &Signature, val: u32) -> DegType {
        let mut inner = self.inner.write();
        let sig = inner.sig_id(sig);
        inner.intern(sig, 0, val, Vec::new())
    }

    /// Interns without checking the structural invariants.
    pub(crate) fn intern_unchecked(
        &self,
        sig: &Signature,
        level: u32,
        val: u32,
        succ: Vec<DegType>,
    ) -> DegType {
        let mut inner = self.inner.write();
        let sig = inner.sig_id(sig);
        inner.intern(sig, level, val, succ)
    }

    /// Builds the level-(n+1) type `(val, succ)` from level-n successors,
    /// checking monotonicity, self-membership and level consistency.
    pub fn compose(&self, sig: &Signature, val: u32, succ: Vec<DegType>) -> Result<DegType> {
        if val & !sig.full_mask() != 0 {
            return Err(Error::InvalidType("valuation outside the signature".into()));
        }
        let Some(&first) = succ.first() else {
            return Err(Error::InvalidType("empty successor set".into()));
        };
        let level = self.level(first);
        for &s in &succ {
            if self.level(s) != level {
                return Err(Error::InvalidType("successors of mixed levels".into()));
            }
            if self.signature(s) != *sig {
                return Err(Error::SignatureMismatch);
            }
            if val & !self.val(s) != 0 {
                return Err(Error::InvalidType(
                    "valuation not contained in a successor".into(),
                ));
            }
        }
        let t = self.intern_unchecked(sig, level + 1, val, succ);
        let own = self.truncate(t)?;
        if !self.succ(t).contains(&own) {
            return Err(Error::InvalidType(
                "successor set misses the type's own truncation".into(),
            ));
        }
        Ok(t)
    }

    /// One step of the truncation map from level n+1 to level n.
    pub fn truncate(&self, t: DegType) -> Result<DegType> {
        if let Some(&u) = self.inner.read().truncations.get(&t) {
            return Ok(u);
        }
        let node = self.node(t);
        let out = match node.level {
            0 => return Err(Error::LevelZero),
            1 => {
                let mut inner = self.inner.write();
                inner.intern(node.sig, 0, node.val, Vec::new())
            }
            _ => {
                let succ = node
                    .succ
                    .iter()
                    .map(|&s| self.truncate(s))
                    .collect::<Result<Vec<_>>>()?;
                let mut inner = self.inner.write();
                inner.intern(node.sig, node.level - 1, node.val, succ)
            }
        };
        self.inner.write().truncations.insert(t, out);
        Ok(out)
    }

    pub fn truncate_to(&self, mut t: DegType, level: u32) -> Result<DegType> {
        let have = self.level(t);
        if level > have {
            return Err(Error::LevelMismatch {
                left: have,
                right: level,
            });
        }
        for _ in level..have {
            t = self.truncate(t)?;
        }
        Ok(t)
    }

    /// `t <= u` in the degree-n order: at level 0 inclusion of valuations,
    /// above that reverse inclusion of successor sets.
    pub fn leq(&self, t: DegType, u: DegType) -> Result<bool> {
        let (a, b) = (self.node(t), self.node(u));
        if a.level != b.level {
            return Err(Error::LevelMismatch {
                left: a.level,
                right: b.level,
            });
        }
        if a.sig != b.sig {
            return Err(Error::SignatureMismatch);
        }
        if a.level == 0 {
            return Ok(a.val & !b.val == 0);
        }
        Ok(is_sorted_subset(&b.succ, &a.succ))
    }

    /// Number of level-n classes above a point of level-(n+1) type `t`.
    pub fn succ_count(&self, t: DegType) -> Result<usize> {
        let node = self.node(t);
        if node.level == 0 {
            return Err(Error::LevelZero);
        }
        Ok(node.succ.len())
    }

    /// Whether a point of type `t` forces `f`. Needs `|f| <= level(t)`.
    pub fn forces_type(&self, t: DegType, f: &Formula) -> Result<bool> {
        let node = self.node(t);
        let degree = f.impl_degree();
        if degree > node.level {
            return Err(Error::DegreeExceedsLevel {
                degree,
                level: node.level,
            });
        }
        let sig = self.signature(t);
        if let Some(v) = f.vars().into_iter().find(|v| !sig.contains(v)) {
            return Err(Error::UnknownVariable(v.to_string()));
        }
        Ok(self.eval(t, &sig, f))
    }

    fn eval(&self, t: DegType, sig: &Signature, f: &Formula) -> bool {
        match f {
            Formula::Var(v) => self.val(t) & (1 << sig.index_of(v).unwrap()) != 0,
            Formula::Bot => false,
            Formula::Top => true,
            Formula::And(a, b) => self.eval(t, sig, a) && self.eval(t, sig, b),
            Formula::Or(a, b) => self.eval(t, sig, a) || self.eval(t, sig, b),
            Formula::Imp(a, b) => self
                .succ(t)
                .iter()
                .all(|&s| !self.eval(s, sig, a) || self.eval(s, sig, b)),
        }
    }

    /// Image of `t` under forgetting the variables outside `keep`.
    pub fn restrict_vars(&self, t: DegType, keep: &Signature) -> Result<DegType> {
        let from = self.signature(t);
        if let Some(missing) = keep.names().iter().find(|n| !from.contains(n)) {
            return Err(Error::UnknownVariable(missing.to_string()));
        }
        let keep_id = self.inner.write().sig_id(keep);
        self.restrict_inner(t, &from, keep, keep_id)
    }

    fn restrict_inner(
        &self,
        t: DegType,
        from: &Signature,
        keep: &Signature,
        keep_id: u32,
    ) -> Result<DegType> {
        if let Some(&u) = self.inner.read().restrictions.get(&(t, keep_id)) {
            return Ok(u);
        }
        let node = self.node(t);
        let succ = node
            .succ
            .iter()
            .map(|&s| self.restrict_inner(s, from, keep, keep_id))
            .collect::<Result<Vec<_>>>()?;
        let mut inner = self.inner.write();
        let out = inner.intern(keep_id, node.level, from.project(node.val, keep), succ);
        inner.restrictions.insert((t, keep_id), out);
        Ok(out)
    }

    /// Ultrametric distance at the common resolution of the two types.
    pub fn distance(&self, t: DegType, u: DegType) -> Result<Distance> {
        let (a, b) = (self.node(t), self.node(u));
        if a.level != b.level {
            return Err(Error::LevelMismatch {
                left: a.level,
                right: b.level,
            });
        }
        if a.sig != b.sig {
            return Err(Error::SignatureMismatch);
        }
        let m = a.level;
        for k in 0..=m {
            if self.truncate_to(t, k)? != self.truncate_to(u, k)? {
                return Ok(Distance::Exact(k));
            }
        }
        Ok(Distance::Below(m))
    }

    /// Level-`n` types of every node of `m`.
    pub fn types_of(&self, m: &KripkeModel, n: u32) -> Vec<DegType> {
        let mut inner = self.inner.write();
        let sig = inner.sig_id(m.signature());
        let mut cur: Vec<DegType> = (0..m.len())
            .map(|w| inner.intern(sig, 0, m.val(w), Vec::new()))
            .collect();
        for level in 1..=n {
            cur = (0..m.len())
                .map(|w| {
                    let succ = m.up(w).ones().map(|v| cur[v]).collect();
                    inner.intern(sig, level, m.val(w), succ)
                })
                .collect();
        }
        cur
    }

    pub fn type_of(&self, m: &KripkeModel, w: usize, n: u32) -> Result<DegType> {
        if w >= m.len() {
            return Err(Error::UnknownNode(w.to_string()));
        }
        let (sub, root) = m.generated_submodel(w);
        Ok(self.types_of(&sub, n)[root])
    }

    /// Dense ranks ordering every type reachable from `roots` canonically:
    /// within one (signature, level) group types compare by valuation and
    /// then by the sorted ranks of their successors. Independent of handle
    /// assignment order.
    pub fn canonical_ranks(&self, roots: &[DegType]) -> HashMap<DegType, usize> {
        let mut seen = HashSet::new();
        let mut stack: Vec<DegType> = roots.to_vec();
        let mut by_level: BTreeMap<u32, Vec<DegType>> = BTreeMap::new();
        while let Some(t) = stack.pop() {
            if !seen.insert(t) {
                continue;
            }
            let node = self.node(t);
            by_level.entry(node.level).or_default().push(t);
            stack.extend(node.succ.iter().copied());
        }
        let mut ranks: HashMap<DegType, usize> = HashMap::new();
        for (_, types) in by_level {
            let mut keyed: Vec<((Signature, u32, Vec<usize>), DegType)> = types
                .into_iter()
                .map(|t| {
                    let node = self.node(t);
                    let mut succ: Vec<usize> = node.succ.iter().map(|s| ranks[s]).collect();
                    succ.sort_unstable();
                    ((self.signature(t), node.val, succ), t)
                })
                .collect();
            keyed.sort();
            let mut rank = 0;
            for i in 0..keyed.len() {
                if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                    rank += 1;
                }
                ranks.insert(keyed[i].1, rank);
            }
        }
        ranks
    }

    /// Total order independent of interning history.
    pub fn canonical_cmp(&self, t: DegType, u: DegType) -> Ordering {
        let ranks = self.canonical_ranks(&[t, u]);
        (self.level(t), self.signature(t), ranks[&t]).cmp(&(
            self.level(u),
            self.signature(u),
            ranks[&u],
        ))
    }

    /// Nested JSON: `{"val":[..]}` at level 0, `{"val":[..],"succ":[..]}`
    /// above, successors sorted canonically. Size grows with the level.
    pub fn to_json(&self, t: DegType) -> Value {
        let ranks = self.canonical_ranks(&[t]);
        self.to_json_ranked(t, &ranks)
    }

    fn to_json_ranked(&self, t: DegType, ranks: &HashMap<DegType, usize>) -> Value {
        let node = self.node(t);
        let sig = self.signature(t);
        let val: Vec<String> = sig
            .names_of(node.val)
            .iter()
            .map(|n| n.to_string())
            .collect();
        if node.level == 0 {
            return json!({ "val": val });
        }
        let mut succ: Vec<DegType> = node.succ.to_vec();
        succ.sort_by_key(|s| ranks[s]);
        let succ: Vec<Value> = succ
            .iter()
            .map(|&s| self.to_json_ranked(s, ranks))
            .collect();
        json!({ "val": val, "succ": succ })
    }

    /// Parses the nested encoding over `sig`, validating every invariant.
    pub fn from_json(&self, sig: &Signature, value: &Value) -> Result<DegType> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidType("expected an object".into()))?;
        let val = match obj.get("val") {
            Some(Value::Array(items)) => {
                let names = items
                    .iter()
                    .map(|v| {
                        v.as_str().ok_or_else(|| {
                            Error::InvalidType("variable names must be strings".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                sig.mask_of(names)?
            }
            _ => return Err(Error::InvalidType("missing `val` array".into())),
        };
        match obj.get("succ") {
            None => Ok(self.leaf(sig, val)),
            Some(Value::Array(items)) => {
                let succ = items
                    .iter()
                    .map(|v| self.from_json(sig, v))
                    .collect::<Result<Vec<_>>>()?;
                self.compose(sig, val, succ)
            }
            Some(_) => Err(Error::InvalidType("`succ` must be an array".into())),
        }
    }

    /// Compact JSON for a family of types: a table in which each entry lists
    /// its successors by table index, plus the indices of `roots`.
    pub fn to_json_table(&self, roots: &[DegType]) -> Value {
        let ranks = self.canonical_ranks(roots);
        let mut all: Vec<DegType> = ranks.keys().copied().collect();
        all.sort_by_key(|&t| (self.level(t), ranks[&t]));
        let pos: HashMap<DegType, usize> = all.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let table: Vec<Value> = all
            .iter()
            .map(|&t| {
                let node = self.node(t);
                let sig = self.signature(t);
                let val: Vec<String> = sig
                    .names_of(node.val)
                    .iter()
                    .map(|n| n.to_string())
                    .collect();
                let mut succ: Vec<usize> = node.succ.iter().map(|s| pos[s]).collect();
                succ.sort_unstable();
                json!({ "level": node.level, "val": val, "succ": succ })
            })
            .collect();
        let roots: Vec<usize> = roots.iter().map(|t| pos[t]).collect();
        json!({ "types": table, "roots": roots })
    }

    /// Decodes a table written by [`TypeStore::to_json_table`] over `sig`,
    /// returning every table entry and the roots.
    pub fn from_json_table(
        &self,
        sig: &Signature,
        value: &Value,
    ) -> Result<(Vec<DegType>, Vec<DegType>)> {
        let bad = |m: &str| Error::InvalidType(m.to_string());
        let entries = value["types"]
            .as_array()
            .ok_or_else(|| bad("missing `types` table"))?;
        let mut out: Vec<DegType> = Vec::with_capacity(entries.len());
        for entry in entries {
            let names = entry["val"]
                .as_array()
                .ok_or_else(|| bad("missing `val` array"))?;
            let names = names
                .iter()
                .map(|v| {
                    v.as_str()
                        .ok_or_else(|| bad("variable names must be strings"))
                })
                .collect::<Result<Vec<_>>>()?;
            let val = sig.mask_of(names)?;
            let level = entry["level"]
                .as_u64()
                .ok_or_else(|| bad("missing `level`"))?;
            let succ = entry["succ"]
                .as_array()
                .ok_or_else(|| bad("missing `succ` array"))?;
            let succ = succ
                .iter()
                .map(|i| {
                    i.as_u64()
                        .and_then(|i| out.get(i as usize).copied())
                        .ok_or_else(|| bad("successor must refer to an earlier entry"))
                })
                .collect::<Result<Vec<_>>>()?;
            let t = if level == 0 {
                if !succ.is_empty() {
                    return Err(bad("level-0 entry with successors"));
                }
                self.leaf(sig, val)
            } else {
                let t = self.compose(sig, val, succ)?;
                if self.level(t) as u64 != level {
                    return Err(bad("level does not match the successors"));
                }
                t
            };
            out.push(t);
        }
        let roots = value["roots"]
            .as_array()
            .ok_or_else(|| bad("missing `roots`"))?
            .iter()
            .map(|i| {
                i.as_u64()
                    .and_then(|i| out.get(i as usize).copied())
                    .ok_or_else(|| bad("root index out of range"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((out, roots))
    }

    /// Bracket notation such as `({},{{},{p}})`.
    pub fn show(&self, t: DegType) -> String {
        let ranks = self.canonical_ranks(&[t]);
        self.show_ranked(t, &ranks)
    }

    fn show_ranked(&self, t: DegType, ranks: &HashMap<DegType, usize>) -> String {
        let node = self.node(t);
        let val = self.signature(t).show_mask(node.val);
        if node.level == 0 {
            return val;
        }
        let mut succ: Vec<DegType> = node.succ.to_vec();
        succ.sort_by_key(|s| ranks[s]);
        let inner: Vec<String> = succ.iter().map(|&s| self.show_ranked(s, ranks)).collect();
        format!("({},{{{}}})", val, inner.join(","))
    }
}

/// Both slices sorted; is every element of `small` in `big`?
fn is_sorted_subset(small: &[DegType], big: &[DegType]) -> bool {
    let mut j = 0;
    for x in small {
        while j < big.len() && big[j] < *x {
            j += 1;
        }
        if j == big.len() || big[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Signature {
        Signature::new(["p"]).unwrap()
    }

    fn chain() -> KripkeModel {
        KripkeModel::from_json(r#"{"vars":["p"],"nodes":[{"id":"root"},{"id":"top","val":["p"]}],"order":[["root","top"]]}"#)
            .unwrap()
    }

    #[test]
    fn type_of_two_chain() {
        let store = TypeStore::new();
        let m = chain();
        let root = store.type_of(&m, 0, 1).unwrap();
        let top = store.type_of(&m, 1, 1).unwrap();
        assert_eq!(store.show(root), "({},{{},{p}})");
        assert_eq!(store.show(top), "({p},{{p}})");
        assert_eq!(store.type_of(&m, 0, 0).unwrap(), store.leaf(&p(), 0));
        assert!(matches!(
            store.type_of(&m, 9, 1),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn truncation_and_order() {
        let store = TypeStore::new();
        let m = chain();
        let root = store.type_of(&m, 0, 1).unwrap();
        let top = store.type_of(&m, 1, 1).unwrap();
        assert_eq!(store.truncate(root).unwrap(), store.leaf(&p(), 0));
        assert!(matches!(
            store.truncate(store.leaf(&p(), 0)),
            Err(Error::LevelZero)
        ));
        assert!(store.leq(root, top).unwrap());
        assert!(!store.leq(top, root).unwrap());
        assert!(store.leq(root, root).unwrap());
        let deep = store.type_of(&m, 0, 2).unwrap();
        assert_eq!(store.truncate(deep).unwrap(), root);
        assert!(matches!(
            store.leq(root, deep),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn forcing_on_types() {
        let store = TypeStore::new();
        let leaf_empty = store.compose(&p(), 0, vec![store.leaf(&p(), 0)]).unwrap();
        let neg = Formula::parse("~p").unwrap();
        assert!(store.forces_type(leaf_empty, &neg).unwrap());
        let root = store.type_of(&chain(), 0, 1).unwrap();
        assert!(!store.forces_type(root, &neg).unwrap());
        assert!(!store.forces_type(root, &Formula::var("p")).unwrap());
        assert!(matches!(
            store.forces_type(root, &Formula::parse("~~p").unwrap()),
            Err(Error::DegreeExceedsLevel {
                degree: 2,
                level: 1
            })
        ));
    }

    #[test]
    fn restriction_collapses_successors() {
        let store = TypeStore::new();
        let pq = Signature::new(["p", "q"]).unwrap();
        let q = Signature::new(["q"]).unwrap();
        let both = pq.full_mask();
        let t = store
            .compose(&pq, both, vec![store.leaf(&pq, both)])
            .unwrap();
        let r = store.restrict_vars(t, &q).unwrap();
        assert_eq!(store.show(r), "({q},{{q}})");

        let root = store.type_of(&chain(), 0, 1).unwrap();
        let r = store.restrict_vars(root, &Signature::empty()).unwrap();
        assert_eq!(store.show(r), "({},{{}})");
        assert!(store.restrict_vars(root, &q).is_err());
    }

    #[test]
    fn distances() {
        let store = TypeStore::new();
        let e = store.leaf(&p(), 0);
        let a = store.compose(&p(), 0, vec![e]).unwrap();
        let root = store.type_of(&chain(), 0, 1).unwrap();
        let top = store.type_of(&chain(), 1, 1).unwrap();
        assert_eq!(store.distance(a, root).unwrap(), Distance::Exact(1));
        assert_eq!(store.distance(a, top).unwrap(), Distance::Exact(0));
        assert_eq!(store.distance(a, a).unwrap(), Distance::Below(1));
        assert_eq!(Distance::Exact(1).value(), 0.5);
    }

    #[test]
    fn compose_rejects_malformed_types() {
        let store = TypeStore::new();
        let sig = p();
        let full = store.leaf(&sig, 1);
        // missing own truncation
        assert!(store.compose(&sig, 0, vec![full]).is_err());
        // valuation not below successor
        assert!(store.compose(&sig, 1, vec![store.leaf(&sig, 0)]).is_err());
        assert!(store.compose(&sig, 0, vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let store = TypeStore::new();
        let root = store.type_of(&chain(), 0, 2).unwrap();
        let json = store.to_json(root);
        assert_eq!(store.from_json(&p(), &json).unwrap(), root);
        let one = store.type_of(&chain(), 0, 1).unwrap();
        assert_eq!(
            store.to_json(one),
            json!({"val": [], "succ": [{"val": []}, {"val": ["p"]}]})
        );
    }

    #[test]
    fn table_round_trip() {
        let store = TypeStore::new();
        let m = chain();
        let roots = [
            store.type_of(&m, 0, 3).unwrap(),
            store.type_of(&m, 1, 3).unwrap(),
        ];
        let table = store.to_json_table(&roots);
        let other = TypeStore::new();
        let (_, back) = other.from_json_table(&p(), &table).unwrap();
        assert_eq!(other.show(back[0]), store.show(roots[0]));
        assert_eq!(other.show(back[1]), store.show(roots[1]));
    }

    #[test]
    fn canonical_order_ignores_interning_history() {
        let a = TypeStore::new();
        let b = TypeStore::new();
        let m = chain();
        let (ra, ta) = (a.type_of(&m, 0, 1).unwrap(), a.type_of(&m, 1, 1).unwrap());
        let (tb, rb) = (b.type_of(&m, 1, 1).unwrap(), b.type_of(&m, 0, 1).unwrap());
        assert_eq!(a.canonical_cmp(ra, ta), b.canonical_cmp(rb, tb));
    }
}
