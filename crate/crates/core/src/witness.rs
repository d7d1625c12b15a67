//! Finite-probe check of the witness construction for uniform interpolants.
//!
//! A domain probe `P` (over `v ∪ {p}`) and a codomain probe `Q` (over `v`)
//! stand in for the universal models; forgetting `p` on `P` stands in for the
//! restriction map. Pairs of classes `(type_n(x), type_m(y))` that admit a
//! witness form a finite model `M` over `v ∪ {p}`, which is then checked
//! against its own level-m types.
//!
//! Quantification over points above `x` is exact on probes. Quantification
//! over points below `y` only ranges over what `Q` happens to contain, so
//! `M` may miss pairs; the report says so.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kripke::KripkeModel;
use crate::signature::Signature;
use crate::typespace::{DegType, TypeSpace, TypeStore};

pub struct ProbeContext {
    pub domain: KripkeModel,
    pub codomain: KripkeModel,
    /// The domain probe with the eliminated variables forgotten.
    pub forgotten: KripkeModel,
    pub vars: Signature,
    pub n: u32,
    pub m: u32,
    /// `2 * |X_n| - 1` over the domain signature.
    pub r_bound: u32,
    dom: Vec<Vec<DegType>>,
    forgot: Vec<Vec<DegType>>,
    cod: Vec<Vec<DegType>>,
    r: Vec<usize>,
}

/// All levels `0..=top` of the types of every node.
fn tower(store: &TypeStore, model: &KripkeModel, top: u32) -> Vec<Vec<DegType>> {
    (0..=top).map(|k| store.types_of(model, k)).collect()
}

impl ProbeContext {
    pub fn new(
        store: &TypeStore,
        domain: KripkeModel,
        codomain: KripkeModel,
        n: u32,
        m: u32,
    ) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::EmptyProbe("domain probe has no nodes".into()));
        }
        if codomain.is_empty() {
            return Err(Error::EmptyProbe("codomain probe has no nodes".into()));
        }
        if m < n {
            return Err(Error::LevelMismatch { left: n, right: m });
        }
        let vars = codomain.signature().clone();
        let forgotten = domain.forget(&vars)?;
        let r_bound = TypeSpace::build(store, domain.signature(), n)?.r_bound() as u32;
        let dom = tower(store, &domain, n + 1);
        let r: Vec<usize> = dom[n as usize + 1]
            .iter()
            .map(|&t| store.succ_count(t))
            .collect::<Result<_>>()?;
        let max_r = *r.iter().max().unwrap() as u32;
        let top = m.max(r_bound).max(2 * max_r - 1);
        let forgot = tower(store, &forgotten, top);
        let cod = tower(store, &codomain, top);
        Ok(ProbeContext {
            domain,
            codomain,
            forgotten,
            vars,
            n,
            m,
            r_bound,
            dom,
            forgot,
            cod,
            r,
        })
    }

    /// Probes made of the realizer models of `X_domain_level(v ∪ {p})` and
    /// `X_m(v)`.
    pub fn from_realizers(
        store: &TypeStore,
        vars: &Signature,
        p: &str,
        n: u32,
        m: u32,
        domain_level: u32,
    ) -> Result<Self> {
        let full = vars.with(p)?;
        let domain = TypeSpace::build(store, &full, domain_level.max(n + 1))?;
        let codomain = TypeSpace::build(store, vars, m)?;
        Self::new(
            store,
            (**domain.realizer()).clone(),
            (**codomain.realizer()).clone(),
            n,
            m,
        )
    }

    /// Number of level-n classes above `x`, read off its level-(n+1) type.
    pub fn r(&self, x: usize) -> usize {
        self.r[x]
    }

    fn same_image(&self, x: usize, y: usize, level: usize) -> bool {
        self.forgot[level][x] == self.cod[level][y]
    }

    /// Whether `(x2, y2)` witnesses `(x, y)`.
    pub fn is_witness(&self, x2: usize, y2: usize, x: usize, y: usize) -> bool {
        let r = self.r[x];
        let n = self.n as usize;
        self.domain.leq(x, x2)
            && self.codomain.leq(y2, y)
            && self.dom[n][x2] == self.dom[n][x]
            && self.same_image(x, y2, 2 * r - 1)
            && self.same_image(x2, y, 2 * r - 2)
    }

    /// The conditions on the two witness coordinates are independent, so
    /// existence splits into two searches.
    pub fn has_witness(&self, x: usize, y: usize) -> bool {
        let r = self.r[x];
        let n = self.n as usize;
        let up = self
            .domain
            .up(x)
            .ones()
            .any(|x2| self.dom[n][x2] == self.dom[n][x] && self.same_image(x2, y, 2 * r - 2));
        up && (0..self.codomain.len())
            .any(|y2| self.codomain.leq(y2, y) && self.same_image(x, y2, 2 * r - 1))
    }

    /// Whether `(x, y)` witnesses itself.
    pub fn self_witnessing(&self, x: usize, y: usize) -> bool {
        self.same_image(x, y, 2 * self.r[x] - 1)
    }

    pub fn domain_type(&self, x: usize) -> DegType {
        self.dom[self.n as usize][x]
    }

    pub fn codomain_type(&self, y: usize) -> DegType {
        self.cod[self.m as usize][y]
    }
}

/// The finite model of witnessed class pairs, ordered componentwise and
/// valued by the first component.
pub struct WitnessModel {
    pub pairs: Vec<(DegType, DegType)>,
    pub model: KripkeModel,
}

impl WitnessModel {
    fn from_pairs(
        store: &TypeStore,
        sig: &Signature,
        pairs: Vec<(DegType, DegType)>,
    ) -> Result<Self> {
        let n = pairs.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                if store.leq(pairs[i].0, pairs[j].0)? && store.leq(pairs[i].1, pairs[j].1)? {
                    up[i].insert(j);
                }
            }
        }
        let names = (0..n).map(|i| format!("e{i}")).collect();
        let vals = pairs.iter().map(|&(a, _)| store.val(a)).collect();
        let model = KripkeModel::from_closed(sig.clone(), names, up, vals);
        Ok(WitnessModel { pairs, model })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn position(&self, pair: (DegType, DegType)) -> Option<usize> {
        self.pairs.iter().position(|&e| e == pair)
    }

    /// The same model with element `i` removed.
    pub fn without(&self, store: &TypeStore, i: usize) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        pairs.remove(i);
        Self::from_pairs(store, self.model.signature(), pairs)
    }

    pub fn to_dot(&self) -> String {
        self.model.to_dot()
    }
}

pub fn build_witness_model(store: &TypeStore, ctx: &ProbeContext) -> Result<WitnessModel> {
    let found: Vec<(DegType, DegType)> = (0..ctx.domain.len())
        .into_par_iter()
        .flat_map_iter(|x| {
            (0..ctx.codomain.len())
                .filter(move |&y| ctx.has_witness(x, y))
                .map(move |y| (ctx.domain_type(x), ctx.codomain_type(y)))
        })
        .collect();
    let mut seen = HashSet::new();
    let mut pairs: Vec<(DegType, DegType)> =
        found.into_iter().filter(|p| seen.insert(*p)).collect();
    if pairs.is_empty() {
        return Err(Error::EmptyProbe(
            "no pair of probe nodes has a witness".into(),
        ));
    }
    let firsts: Vec<DegType> = pairs.iter().map(|p| p.0).collect();
    let seconds: Vec<DegType> = pairs.iter().map(|p| p.1).collect();
    let (ra, rb) = (
        store.canonical_ranks(&firsts),
        store.canonical_ranks(&seconds),
    );
    pairs.sort_by_key(|&(a, b)| (ra[&a], rb[&b]));
    WitnessModel::from_pairs(store, ctx.domain.signature(), pairs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Truncating the element's own type does not give its first component.
    Truncation { element: String },
    /// Restricting the element's own type does not give its second component.
    Restriction { element: String },
    /// A pair of probe nodes with matching images is missing.
    Missing { x: String, y: String },
    /// The projection to the second component does not map the up-set of
    /// `element` onto the up-set of its image.
    Projection { element: String },
}

impl Violation {
    fn to_json(&self) -> Value {
        match self {
            Violation::Truncation { element } => {
                json!({ "kind": "truncation", "element": element })
            }
            Violation::Restriction { element } => {
                json!({ "kind": "restriction", "element": element })
            }
            Violation::Missing { x, y } => json!({ "kind": "missing_pair", "x": x, "y": y }),
            Violation::Projection { element } => {
                json!({ "kind": "projection", "element": element })
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub elements: usize,
    pub pairs_checked: usize,
    pub required_pairs: usize,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, pred: impl Fn(&Violation) -> bool) -> usize {
        self.violations.iter().filter(|v| pred(v)).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.elements,
            "pairs_checked": self.pairs_checked,
            "required_pairs": self.required_pairs,
            "passed": self.passed(),
            "violations": self.violations.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

pub fn check_lemma(
    store: &TypeStore,
    ctx: &ProbeContext,
    wm: &WitnessModel,
) -> Result<LemmaReport> {
    if wm.is_empty() {
        return Err(Error::EmptyProbe("witness model has no elements".into()));
    }
    let mut violations = Vec::new();
    let own = store.types_of(&wm.model, ctx.m);
    for (e, &(a, b)) in wm.pairs.iter().enumerate() {
        let name = wm.model.name(e).to_string();
        if store.truncate_to(own[e], ctx.n)? != a {
            violations.push(Violation::Truncation {
                element: name.clone(),
            });
        }
        if store.restrict_vars(own[e], &ctx.vars)? != b {
            violations.push(Violation::Restriction { element: name });
        }
    }

    let index: HashMap<(DegType, DegType), usize> =
        wm.pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let level = ctx.r_bound as usize;
    let mut required = 0;
    for x in 0..ctx.domain.len() {
        for y in 0..ctx.codomain.len() {
            if !ctx.same_image(x, y, level) {
                continue;
            }
            required += 1;
            if !index.contains_key(&(ctx.domain_type(x), ctx.codomain_type(y))) {
                violations.push(Violation::Missing {
                    x: ctx.domain.name(x).to_string(),
                    y: ctx.codomain.name(y).to_string(),
                });
            }
        }
    }

    // second components that occur, with their order
    let mut classes: Vec<DegType> = Vec::new();
    for &(_, b) in &wm.pairs {
        if !classes.contains(&b) {
            classes.push(b);
        }
    }
    for (e, &(_, b)) in wm.pairs.iter().enumerate() {
        let image: HashSet<DegType> = wm.model.up(e).ones().map(|f| wm.pairs[f].1).collect();
        let mut above = HashSet::new();
        for &c in &classes {
            if store.leq(b, c)? {
                above.insert(c);
            }
        }
        if image != above {
            violations.push(Violation::Projection {
                element: wm.model.name(e).to_string(),
            });
        }
    }

    Ok(LemmaReport {
        elements: wm.len(),
        pairs_checked: ctx.domain.len() * ctx.codomain.len(),
        required_pairs: required,
        violations,
        notes: vec![
            "points below codomain nodes range over the codomain probe only; pairs needing other points are absent".into(),
        ],
    })
}
