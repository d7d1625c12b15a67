//! Finite Kripke models: loading, validation, forcing, p-morphisms and
//! export.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::signature::Signature;

/// The JSON model format:
/// `{"vars":["p","q"],"nodes":[{"id":"a","val":["p"]}],"order":[["a","b"]]}`.
///
/// `order` may be any relation; it is closed reflexively and transitively
/// before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub vars: Vec<String>,
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    #[serde(default)]
    pub val: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    DuplicateNode(String),
    UnknownNode(String),
    UnknownVariable {
        node: String,
        var: String,
    },
    /// Two distinct nodes below each other after closure.
    Antisymmetry {
        a: String,
        b: String,
    },
    /// `lower <= upper` but `val(lower)` is not contained in `val(upper)`.
    Monotonicity {
        lower: String,
        upper: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateNode(id) => write!(f, "duplicate node `{id}`"),
            Diagnostic::UnknownNode(id) => write!(f, "order mentions unknown node `{id}`"),
            Diagnostic::UnknownVariable { node, var } => {
                write!(
                    f,
                    "node `{node}` has variable `{var}` outside the signature"
                )
            }
            Diagnostic::Antisymmetry { a, b } => write!(f, "antisymmetry violated by ({a},{b})"),
            Diagnostic::Monotonicity { lower, upper } => {
                write!(f, "monotonicity violated by ({lower},{upper})")
            }
        }
    }
}

/// A finite poset with a monotone valuation into a signature.
///
/// `up[w]` is the principal up-set of `w` (reflexive).
#[derive(Clone, PartialEq, Eq)]
pub struct KripkeModel {
    sig: Signature,
    names: Vec<String>,
    up: Vec<FixedBitSet>,
    val: Vec<u32>,
}

impl fmt::Debug for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "KripkeModel {}",
            serde_json::to_string(&self.to_spec()).unwrap_or_default()
        )
    }
}

/// Checks a model description, reporting every violated condition.
pub fn validate(spec: &ModelSpec) -> Vec<Diagnostic> {
    match close(spec) {
        Ok(_) => Vec::new(),
        Err(diags) => diags,
    }
}

type Closed = (Signature, Vec<String>, Vec<FixedBitSet>, Vec<u32>);

fn close(spec: &ModelSpec) -> std::result::Result<Closed, Vec<Diagnostic>> {
    let sig = Signature::new(&spec.vars).map_err(|_| Vec::new())?;
    let mut diags = Vec::new();
    let mut index = HashMap::new();
    let mut names = Vec::new();
    let mut val = Vec::new();
    for node in &spec.nodes {
        if index.insert(node.id.clone(), names.len()).is_some() {
            diags.push(Diagnostic::DuplicateNode(node.id.clone()));
            continue;
        }
        let mut mask = 0;
        for v in &node.val {
            match sig.index_of(v) {
                Some(i) => mask |= 1 << i,
                None => diags.push(Diagnostic::UnknownVariable {
                    node: node.id.clone(),
                    var: v.clone(),
                }),
            }
        }
        names.push(node.id.clone());
        val.push(mask);
    }
    let mut edges = Vec::new();
    for (a, b) in &spec.order {
        match (index.get(a), index.get(b)) {
            (Some(&i), Some(&j)) => edges.push((i, j)),
            (None, _) => diags.push(Diagnostic::UnknownNode(a.clone())),
            (_, None) => diags.push(Diagnostic::UnknownNode(b.clone())),
        }
    }
    let up = closure(names.len(), &edges);
    diags.extend(order_diagnostics(&names, &up, &val));
    if diags.is_empty() {
        Ok((sig, names, up, val))
    } else {
        Err(diags)
    }
}

fn closure(n: usize, edges: &[(usize, usize)]) -> Vec<FixedBitSet> {
    let mut up: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(i);
            s
        })
        .collect();
    for &(i, j) in edges {
        up[i].insert(j);
    }
    for k in 0..n {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    up
}

fn order_diagnostics(names: &[String], up: &[FixedBitSet], val: &[u32]) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for i in 0..names.len() {
        for j in up[i].ones() {
            if j > i && up[j].contains(i) {
                diags.push(Diagnostic::Antisymmetry {
                    a: names[i].clone(),
                    b: names[j].clone(),
                });
            }
            if val[i] & !val[j] != 0 {
                diags.push(Diagnostic::Monotonicity {
                    lower: names[i].clone(),
                    upper: names[j].clone(),
                });
            }
        }
    }
    diags
}

impl KripkeModel {
    pub fn from_spec(spec: &ModelSpec) -> Result<KripkeModel> {
        if spec.vars.len() > crate::signature::MAX_VARS {
            return Err(Error::TooManyVariables(spec.vars.len()));
        }
        let (sig, names, up, val) = close(spec).map_err(Error::InvalidModel)?;
        Ok(KripkeModel {
            sig,
            names,
            up,
            val,
        })
    }

    pub fn from_json(text: &str) -> Result<KripkeModel> {
        let spec: ModelSpec = serde_json::from_str(text)?;
        KripkeModel::from_spec(&spec)
    }

    /// Builds a model from node indices: `edges` is closed reflexively and
    /// transitively, then validated.
    pub fn from_relation(
        sig: Signature,
        names: Vec<String>,
        edges: &[(usize, usize)],
        val: Vec<u32>,
    ) -> Result<KripkeModel> {
        assert_eq!(names.len(), val.len());
        let up = closure(names.len(), edges);
        let diags = order_diagnostics(&names, &up, &val);
        if !diags.is_empty() {
            return Err(Error::InvalidModel(diags));
        }
        Ok(KripkeModel {
            sig,
            names,
            up,
            val,
        })
    }

    /// Caller guarantees `up` is a reflexive, transitive, antisymmetric
    /// relation and `val` is monotone.
    pub(crate) fn from_closed(
        sig: Signature,
        names: Vec<String>,
        up: Vec<FixedBitSet>,
        val: Vec<u32>,
    ) -> KripkeModel {
        debug_assert!(order_diagnostics(&names, &up, &val).is_empty());
        KripkeModel {
            sig,
            names,
            up,
            val,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn val(&self, w: usize) -> u32 {
        self.val[w]
    }

    pub fn up(&self, w: usize) -> &FixedBitSet {
        &self.up[w]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// Nodes strictly above `w` with nothing in between.
    pub fn covers_of(&self, w: usize) -> Vec<usize> {
        self.up[w]
            .ones()
            .filter(|&v| v != w)
            .filter(|&v| {
                !self.up[w]
                    .ones()
                    .any(|u| u != w && u != v && self.up[u].contains(v))
            })
            .collect()
    }

    /// Set of nodes forcing `f`.
    pub fn truth_set(&self, f: &Formula) -> Result<FixedBitSet> {
        let n = self.len();
        Ok(match f {
            Formula::Var(v) => {
                let i = self
                    .sig
                    .index_of(v)
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))?;
                let mut s = FixedBitSet::with_capacity(n);
                for w in 0..n {
                    if self.val[w] & (1 << i) != 0 {
                        s.insert(w);
                    }
                }
                s
            }
            Formula::Bot => FixedBitSet::with_capacity(n),
            Formula::Top => {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert_range(..);
                s
            }
            Formula::And(a, b) => {
                let mut s = self.truth_set(a)?;
                s.intersect_with(&self.truth_set(b)?);
                s
            }
            Formula::Or(a, b) => {
                let mut s = self.truth_set(a)?;
                s.union_with(&self.truth_set(b)?);
                s
            }
            Formula::Imp(a, b) => {
                let mut bad = self.truth_set(a)?;
                bad.difference_with(&self.truth_set(b)?);
                let mut s = FixedBitSet::with_capacity(n);
                for w in 0..n {
                    if self.up[w].is_disjoint(&bad) {
                        s.insert(w);
                    }
                }
                s
            }
        })
    }

    pub fn forces(&self, w: usize, f: &Formula) -> Result<bool> {
        if w >= self.len() {
            return Err(Error::UnknownNode(w.to_string()));
        }
        Ok(self.truth_set(f)?.contains(w))
    }

    /// Same poset, valuations intersected with `keep`.
    pub fn forget(&self, keep: &Signature) -> Result<KripkeModel> {
        if !keep.is_subset_of(&self.sig) {
            let missing = keep.names().iter().find(|n| !self.sig.contains(n)).unwrap();
            return Err(Error::UnknownVariable(missing.to_string()));
        }
        Ok(KripkeModel {
            sig: keep.clone(),
            names: self.names.clone(),
            up: self.up.clone(),
            val: self
                .val
                .iter()
                .map(|&m| self.sig.project(m, keep))
                .collect(),
        })
    }

    /// The up-set of `w` as a model of its own; returns the model and the
    /// index of `w` in it.
    pub fn generated_submodel(&self, w: usize) -> (KripkeModel, usize) {
        let keep: Vec<usize> = self.up[w].ones().collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let up = keep
            .iter()
            .map(|&v| {
                let mut s = FixedBitSet::with_capacity(keep.len());
                for u in self.up[v].ones() {
                    s.insert(pos[&u]);
                }
                s
            })
            .collect();
        let model = KripkeModel {
            sig: self.sig.clone(),
            names: keep.iter().map(|&v| self.names[v].clone()).collect(),
            up,
            val: keep.iter().map(|&v| self.val[v]).collect(),
        };
        (model, pos[&w])
    }

    /// Disjoint union; node `w` of the `i`-th model is renamed `m{i}.{w}`.
    pub fn disjoint_union(models: &[KripkeModel]) -> Result<KripkeModel> {
        let sig = match models.first() {
            Some(m) => m.sig.clone(),
            None => Signature::empty(),
        };
        if models.iter().any(|m| m.sig != sig) {
            return Err(Error::SignatureMismatch);
        }
        let total: usize = models.iter().map(|m| m.len()).sum();
        let mut names = Vec::with_capacity(total);
        let mut up = Vec::with_capacity(total);
        let mut val = Vec::with_capacity(total);
        let mut offset = 0;
        for (i, m) in models.iter().enumerate() {
            for w in 0..m.len() {
                names.push(format!("m{i}.{}", m.names[w]));
                let mut s = FixedBitSet::with_capacity(total);
                for v in m.up[w].ones() {
                    s.insert(offset + v);
                }
                up.push(s);
                val.push(m.val[w]);
            }
            offset += m.len();
        }
        Ok(KripkeModel {
            sig,
            names,
            up,
            val,
        })
    }

    /// Covering pairs of the order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|w| self.covers_of(w).into_iter().map(move |v| (w, v)))
            .collect()
    }

    /// Exports with the order given by its covering pairs.
    pub fn to_spec(&self) -> ModelSpec {
        ModelSpec {
            vars: self.sig.names().iter().map(|n| n.to_string()).collect(),
            nodes: (0..self.len())
                .map(|w| NodeSpec {
                    id: self.names[w].clone(),
                    val: self
                        .sig
                        .names_of(self.val[w])
                        .iter()
                        .map(|n| n.to_string())
                        .collect(),
                })
                .collect(),
            order: self
                .covers()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("model serialization cannot fail")
    }

    /// Hasse diagram with valuation labels, bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph model {\n  rankdir=BT;\n  node [shape=box];\n");
        for w in 0..self.len() {
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\n{}\"];",
                escape(&self.names[w]),
                escape(&self.names[w]),
                self.sig.show_mask(self.val[w])
            );
        }
        for (a, b) in self.covers() {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\";",
                escape(&self.names[a]),
                escape(&self.names[b])
            );
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Frame condition only: `f` is monotone and maps each principal up-set of
/// `m` onto the principal up-set of the image.
pub fn is_p_morphism(f: &[usize], m: &KripkeModel, n: &KripkeModel) -> bool {
    if f.len() != m.len() || f.iter().any(|&v| v >= n.len()) {
        return false;
    }
    (0..m.len()).all(|w| {
        let image: BTreeSet<usize> = m.up[w].ones().map(|v| f[v]).collect();
        let target: BTreeSet<usize> = n.up[f[w]].ones().collect();
        image == target
    })
}

/// A p-morphism that also transports valuations: `val_n(f(w))` equals
/// `val_m(w)` restricted to the signature of `n`.
pub fn is_model_morphism(f: &[usize], m: &KripkeModel, n: &KripkeModel) -> bool {
    is_p_morphism(f, m, n) && (0..m.len()).all(|w| m.sig.project(m.val[w], &n.sig) == n.val[f[w]])
}

/// Checks `phi |= psi` over every model with at most `max_nodes` nodes.
pub fn semantic_consequence_bounded(
    phi: &Formula,
    psi: &Formula,
    vars: &Signature,
    max_nodes: usize,
) -> Result<bool> {
    for model in crate::enumerate::enumerate_models(vars, max_nodes) {
        let mut bad = model.truth_set(phi)?;
        bad.difference_with(&model.truth_set(psi)?);
        if !bad.is_clear() {
            return Ok(false);
        }
    }
    Ok(true)
}
