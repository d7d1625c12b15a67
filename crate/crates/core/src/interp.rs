//! Uniform interpolation: propositional `exists p` and `forall p`.
//!
//! For `phi` of implication degree n over `v ∪ {p}`, the strongest
//! `v`-consequence of `phi` is the set of `v`-points below which some point
//! of `phi` forgets `p`. It is a union of level-K classes of `v`-types for
//! `K = 2 * |X_n(v ∪ {p})| - 1`. The classes are saturated by a
//! counterexample-guided loop over models realizing every pair
//! (level-n type over `v ∪ {p}`, level-K type over `v`), the candidate is
//! checked with the prover, and the result is cross-checked against a
//! fragment of test formulas. A failed cross-check raises the level.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::charform::CharForms;
use crate::error::{Error, Result};
use crate::formula::{simplify, Formula};
use crate::generate::{enumerate_canonical, random_formula};
use crate::kripke::KripkeModel;
use crate::prover::Prover;
use crate::signature::Signature;
use crate::typespace::{realize, Component, DegType, Limits, TypeSpace, TypeStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub degree_bound: u32,
    /// Number of random test formulas when the fragment is not enumerated.
    pub samples: usize,
    pub seed: u64,
    pub max_size: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            degree_bound: 2,
            samples: 200,
            seed: 0,
            max_size: 9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InterpOptions {
    /// How many times the level may be raised after a failed cross-check.
    pub escalations: u32,
    pub domain_limits: Limits,
    pub codomain_limits: Limits,
    pub pair_limits: Limits,
    /// Levels above this are not attempted directly.
    pub max_level: u32,
    /// How many levels the capped schedule tries.
    pub fallback_span: u32,
    pub verify: VerifyOptions,
    /// Variables the interpolant ranges over besides those of the input.
    /// When set, the full construction runs even if the eliminated variable
    /// does not occur.
    pub context: Option<Signature>,
    /// Replace the constructed formula by the smallest equivalent one found
    /// by enumeration.
    pub simplify: bool,
}

impl Default for InterpOptions {
    fn default() -> Self {
        let space = Limits {
            max_tuples: 4_000,
            max_states: 200_000,
        };
        InterpOptions {
            escalations: 3,
            domain_limits: Limits::default(),
            codomain_limits: space.clone(),
            pair_limits: Limits {
                max_tuples: 20_000,
                max_states: 400_000,
            },
            max_level: 64,
            fallback_span: 6,
            verify: VerifyOptions::default(),
            context: None,
            simplify: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `phi |- psi` iff `phi_R |- psi`
    Right,
    /// `psi |- phi` iff `psi |- phi_L`
    Left,
}

#[derive(Debug, Clone)]
pub struct PittsFailure {
    pub side: Side,
    pub psi: Formula,
    /// Whether `phi` itself entails (Right) or is entailed by (Left) `psi`.
    pub original: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub vars: Signature,
    pub degree_bound: u32,
    pub exhaustive: bool,
    pub seed: u64,
    pub checked: usize,
    pub failures: Vec<PittsFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let failures: Vec<Value> = self
            .failures
            .iter()
            .map(|f| {
                json!({
                    "side": match f.side { Side::Right => "right", Side::Left => "left" },
                    "psi": f.psi.to_string(),
                    "original_holds": f.original,
                })
            })
            .collect();
        json!({
            "vars": names(&self.vars),
            "degree_bound": self.degree_bound,
            "exhaustive": self.exhaustive,
            "seed": self.seed,
            "checked": self.checked,
            "passed": self.passed(),
            "failures": failures,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Escalation {
    pub from: u32,
    pub to: u32,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct CegisStats {
    pub seeds: usize,
    pub counterexamples: usize,
    pub prover_confirmed: bool,
}

/// One class of the defining set, with a model node realizing it when one
/// was found.
#[derive(Debug, Clone)]
pub struct ClassRecord {
    pub class: DegType,
    pub witness: Option<(KripkeModel, usize)>,
}

#[derive(Debug, Clone)]
pub struct InterpolantResult {
    pub quantifier: Quantifier,
    pub input: Formula,
    pub eliminated: String,
    pub vars: Signature,
    pub formula: Formula,
    /// The unsimplified characteristic-formula construction.
    pub raw_formula: Formula,
    pub degree: u32,
    pub domain_size: usize,
    pub r_bound: usize,
    pub level_used: u32,
    /// Least level at which the defining set is already determined.
    pub defining_level: u32,
    /// False when the level schedule was capped below the bound.
    pub theory_certified: bool,
    pub fallback_reason: Option<String>,
    /// Whether the raw image (resp. forbidden) set was already up-closed
    /// (resp. down-closed) at `level_used`.
    pub image_closed: bool,
    /// For `exists` the up-set of image classes, for `forall` the down-set of
    /// forbidden classes, at `level_used`.
    pub classes: Vec<ClassRecord>,
    pub escalations: Vec<Escalation>,
    pub cegis: CegisStats,
    pub verification: Option<VerifyReport>,
}

impl InterpolantResult {
    pub fn trivial(&self) -> bool {
        self.classes.is_empty() && self.verification.is_none()
    }

    pub fn to_certificate(&self, store: &TypeStore) -> Value {
        let types: Vec<DegType> = self.classes.iter().map(|c| c.class).collect();
        let table = store.to_json_table(&types);
        let roots = table["roots"].as_array().cloned().unwrap_or_default();
        let classes: Vec<Value> = self
            .classes
            .iter()
            .zip(roots)
            .map(|(c, root)| match &c.witness {
                Some((m, w)) => json!({
                    "class": root,
                    "status": "confirmed",
                    "witness": { "model": m.to_spec(), "node": m.name(*w) },
                }),
                None => json!({ "class": root, "status": "unconfirmed" }),
            })
            .collect();
        let escalations: Vec<Value> = self
            .escalations
            .iter()
            .map(|e| json!({ "from": e.from, "to": e.to, "reason": e.reason }))
            .collect();
        json!({
            "quantifier": self.quantifier.to_string(),
            "input": self.input.to_string(),
            "eliminated": self.eliminated,
            "vars": names(&self.vars),
            "result": self.formula.to_string(),
            "raw_result": self.raw_formula.to_string(),
            "degree": self.degree,
            "domain_size": self.domain_size,
            "r_bound": self.r_bound,
            "level_used": self.level_used,
            "defining_level": self.defining_level,
            "theory_certified": self.theory_certified,
            "fallback_reason": self.fallback_reason,
            "image_closed": self.image_closed,
            "types": table["types"],
            "classes": classes,
            "escalations": escalations,
            "cegis": {
                "seeds": self.cegis.seeds,
                "counterexamples": self.cegis.counterexamples,
                "prover_confirmed": self.cegis.prover_confirmed,
            },
            "verification": self.verification.as_ref().map(|v| v.to_json()),
        })
    }
}

fn names(sig: &Signature) -> Vec<String> {
    sig.names().iter().map(|n| n.to_string()).collect()
}

/// Re-validates every confirmed class of a certificate: the witness node
/// must force (for `exists`) or refute (for `forall`) the input formula, and
/// its type over the remaining variables must be the recorded class.
pub fn check_certificate(cert: &Value) -> Result<usize> {
    let bad = |m: &str| Error::Inconsistent(format!("certificate: {m}"));
    let input = Formula::parse(cert["input"].as_str().ok_or_else(|| bad("missing input"))?)?;
    let exists = match cert["quantifier"].as_str() {
        Some("exists") => true,
        Some("forall") => false,
        _ => return Err(bad("unknown quantifier")),
    };
    let vars = Signature::new(
        cert["vars"]
            .as_array()
            .ok_or_else(|| bad("missing vars"))?
            .iter()
            .filter_map(|v| v.as_str()),
    )?;
    let level = cert["level_used"]
        .as_u64()
        .ok_or_else(|| bad("missing level"))? as u32;
    let classes = cert["classes"]
        .as_array()
        .ok_or_else(|| bad("missing classes"))?;
    if classes.is_empty() {
        return Ok(0);
    }
    let store = TypeStore::new();
    let (table, _) =
        store.from_json_table(&vars, &json!({ "types": cert["types"], "roots": [] }))?;
    let mut confirmed = 0;
    for entry in classes {
        let class = entry["class"]
            .as_u64()
            .and_then(|i| table.get(i as usize).copied())
            .ok_or_else(|| bad("class index out of range"))?;
        if store.level(class) != level {
            return Err(bad("class at the wrong level"));
        }
        let witness = &entry["witness"];
        if witness.is_null() {
            continue;
        }
        let spec = serde_json::from_value(witness["model"].clone())?;
        let model = KripkeModel::from_spec(&spec)?;
        let node = model.node(
            witness["node"]
                .as_str()
                .ok_or_else(|| bad("missing witness node"))?,
        )?;
        if model.forces(node, &input)? != exists {
            return Err(bad("witness node has the wrong truth value"));
        }
        let forgotten = model.forget(&vars)?;
        if store.type_of(&forgotten, node, level)? != class {
            return Err(bad("witness node does not realize its class"));
        }
        confirmed += 1;
    }
    Ok(confirmed)
}

/// Type store and prover shared across interpolation calls.
#[derive(Default)]
pub struct Session {
    pub store: TypeStore,
    pub prover: Prover,
}

pub fn uniform_exists(phi: &Formula, p: &str, opts: &InterpOptions) -> Result<InterpolantResult> {
    Session::default().uniform_exists(phi, p, opts)
}

pub fn uniform_forall(phi: &Formula, p: &str, opts: &InterpOptions) -> Result<InterpolantResult> {
    Session::default().uniform_forall(phi, p, opts)
}

pub fn craig(phi: &Formula, psi: &Formula, opts: &InterpOptions) -> Result<Formula> {
    Session::default().craig(phi, psi, opts)
}

/// What one attempt at a fixed level produced.
struct Attempt {
    formula: Formula,
    raw: Formula,
    defining_level: u32,
    image_closed: bool,
    classes: Vec<ClassRecord>,
    cegis: CegisStats,
    verification: VerifyReport,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uniform_exists(
        &self,
        phi: &Formula,
        p: &str,
        opts: &InterpOptions,
    ) -> Result<InterpolantResult> {
        self.run(Quantifier::Exists, phi, p, opts)
    }

    pub fn uniform_forall(
        &self,
        phi: &Formula,
        p: &str,
        opts: &InterpOptions,
    ) -> Result<InterpolantResult> {
        self.run(Quantifier::Forall, phi, p, opts)
    }

    /// Interpolant over the shared variables, by eliminating the variables
    /// of `phi` that `psi` lacks one at a time.
    pub fn craig(&self, phi: &Formula, psi: &Formula, opts: &InterpOptions) -> Result<Formula> {
        if !self.prover.proves(phi, psi) {
            return Err(Error::NotProvable);
        }
        let shared = psi.signature();
        let mut chi = phi.clone();
        for v in phi.vars() {
            if !shared.contains(&v) {
                chi = self.uniform_exists(&chi, &v, opts)?.formula;
            }
        }
        if !self.prover.proves(phi, &chi) || !self.prover.proves(&chi, psi) {
            return Err(Error::Inconsistent(format!("`{chi}` does not interpolate")));
        }
        Ok(chi)
    }

    fn run(
        &self,
        q: Quantifier,
        phi: &Formula,
        p: &str,
        opts: &InterpOptions,
    ) -> Result<InterpolantResult> {
        let full = match &opts.context {
            Some(extra) => phi.signature().union(extra).union(&Signature::new([p])?),
            None => phi.signature(),
        };
        let vars = full.without(p);
        let degree = phi.impl_degree();
        let mut result = InterpolantResult {
            quantifier: q,
            input: phi.clone(),
            eliminated: p.to_string(),
            vars: vars.clone(),
            formula: phi.clone(),
            raw_formula: phi.clone(),
            degree,
            domain_size: 0,
            r_bound: 0,
            level_used: degree,
            defining_level: degree,
            theory_certified: true,
            fallback_reason: None,
            image_closed: true,
            classes: Vec::new(),
            escalations: Vec::new(),
            cegis: CegisStats::default(),
            verification: None,
        };
        if !full.contains(p) || (opts.context.is_none() && !phi.mentions(p)) {
            return Ok(result);
        }
        let domain = TypeSpace::build_with(&self.store, &full, degree, &opts.domain_limits)?;
        result.domain_size = domain.len();
        result.r_bound = domain.r_bound();
        let bound = domain.r_bound() as u32 + if q == Quantifier::Forall { 1 } else { 0 };

        let mut level = bound;
        loop {
            let outcome = if level > opts.max_level {
                Err(Error::Resource(format!(
                    "level {level} exceeds the cap {}",
                    opts.max_level
                )))
            } else {
                self.attempt(q, phi, p, &full, &vars, degree, level, &domain, opts)
            };
            match outcome {
                Ok(att) if att.verification.passed() => {
                    fill(&mut result, att, level);
                    return Ok(result);
                }
                Ok(att) => {
                    if result.escalations.len() as u32 >= opts.escalations {
                        return Err(Error::Resource(format!(
                            "cross-check still fails at level {level} after {} escalations",
                            opts.escalations
                        )));
                    }
                    result.escalations.push(Escalation {
                        from: level,
                        to: level + 1,
                        reason: format!("{} cross-check failures", att.verification.failures.len()),
                    });
                    level += 1;
                }
                Err(Error::Resource(reason)) => {
                    return self.capped_schedule(
                        q, phi, p, &full, &vars, degree, level, &domain, opts, result, reason,
                    );
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Tries levels upward from the degree of `phi`, keeping the first
    /// result that passes the cross-check.
    #[allow(clippy::too_many_arguments)]
    fn capped_schedule(
        &self,
        q: Quantifier,
        phi: &Formula,
        p: &str,
        full: &Signature,
        vars: &Signature,
        degree: u32,
        ceiling: u32,
        domain: &TypeSpace,
        opts: &InterpOptions,
        mut result: InterpolantResult,
        reason: String,
    ) -> Result<InterpolantResult> {
        let last = ceiling.saturating_sub(1).min(degree + opts.fallback_span);
        for level in degree..=last {
            let att = self.attempt(q, phi, p, full, vars, degree, level, domain, opts)?;
            if att.verification.passed() {
                fill(&mut result, att, level);
                result.theory_certified = false;
                result.fallback_reason = Some(reason);
                return Ok(result);
            }
            result.escalations.push(Escalation {
                from: level,
                to: level + 1,
                reason: format!("{} cross-check failures", att.verification.failures.len()),
            });
        }
        Err(Error::Resource(format!(
            "{reason}; no capped level passed the cross-check"
        )))
    }

    #[allow(clippy::too_many_arguments)]
    fn attempt(
        &self,
        q: Quantifier,
        phi: &Formula,
        p: &str,
        full: &Signature,
        vars: &Signature,
        degree: u32,
        level: u32,
        domain: &TypeSpace,
        opts: &InterpOptions,
    ) -> Result<Attempt> {
        // cheap probe first: wide signatures blow up within a few levels
        if level > 3 {
            TypeSpace::build_with(&self.store, vars, 3, &opts.codomain_limits)?;
        }
        let codomain = TypeSpace::build_with(&self.store, vars, level, &opts.codomain_limits)?;
        let pairs = realize(
            &self.store,
            full,
            &[
                Component::new(full.clone(), degree),
                Component::new(vars.clone(), level),
            ],
            &opts.pair_limits,
        )?;
        let holds = pairs.model.truth_set(phi)?;
        let image: Vec<usize> = pairs
            .tuples
            .iter()
            .map(|t| codomain.index_of(t.types[1]).ok_or(Error::NotInSpace))
            .collect::<Result<_>>()?;
        // tuples on the side of phi we are collecting
        let wanted = |i: usize| holds.contains(i) == (q == Quantifier::Exists);

        // seeds: realizers of the domain space
        let mut found = FixedBitSet::with_capacity(codomain.len());
        let mut witness: BTreeMap<usize, (KripkeModel, usize)> = BTreeMap::new();
        let seeds_model = domain.realizer();
        let seed_truth = seeds_model.truth_set(phi)?;
        let seed_types = self.store.types_of(&seeds_model.forget(vars)?, level);
        let mut cegis = CegisStats::default();
        for i in 0..domain.len() {
            let w = domain.realizer_node(i);
            if seed_truth.contains(w) != (q == Quantifier::Exists) {
                continue;
            }
            let c = codomain.index_of(seed_types[w]).ok_or(Error::NotInSpace)?;
            if !found.contains(c) {
                found.insert(c);
                witness.insert(c, seeds_model.generated_submodel(w));
                cegis.seeds += 1;
            }
        }

        // counterexample loop over the realized pairs
        loop {
            let closed = match q {
                Quantifier::Exists => codomain.up_closure(&found),
                Quantifier::Forall => codomain.down_closure(&found),
            };
            let cex = (0..pairs.tuples.len()).find(|&i| wanted(i) && !closed.contains(image[i]));
            let Some(i) = cex else { break };
            found.insert(image[i]);
            witness.insert(image[i], pairs.model.generated_submodel(i));
            cegis.counterexamples += 1;
        }

        let mut exact = FixedBitSet::with_capacity(codomain.len());
        exact.extend(
            (0..pairs.tuples.len())
                .filter(|&i| wanted(i))
                .map(|i| image[i]),
        );
        for (i, &c) in image.iter().enumerate() {
            if wanted(i) && !witness.contains_key(&c) {
                witness.insert(c, pairs.model.generated_submodel(i));
            }
        }
        let (closed, target) = match q {
            Quantifier::Exists => {
                let up = codomain.up_closure(&found);
                (up.clone(), up)
            }
            Quantifier::Forall => {
                let down = codomain.down_closure(&found);
                let mut complement = down.clone();
                complement.toggle_range(..);
                (down, complement)
            }
        };
        let image_closed = closed == exact;
        let classes = closed
            .ones()
            .map(|c| ClassRecord {
                class: codomain.element(c),
                witness: if exact.contains(c) {
                    witness.get(&c).cloned()
                } else {
                    None
                },
            })
            .collect();

        let (defining_level, local) = descend(&codomain, &target);
        let space = codomain.at_level(defining_level);
        let forms = CharForms::new(space);
        let raw = match q {
            Quantifier::Exists => forms.upset(&local)?,
            Quantifier::Forall => {
                let mut outside = local.clone();
                outside.toggle_range(..);
                forms.avoid(&outside)
            }
        };
        let formula = if opts.simplify {
            smallest_definition(space, &local, &raw)?
        } else {
            raw.clone()
        };

        cegis.prover_confirmed = match q {
            Quantifier::Exists => self.prover.proves(phi, &formula),
            Quantifier::Forall => self.prover.proves(&formula, phi),
        };
        if !cegis.prover_confirmed {
            return Err(Error::Inconsistent(format!(
                "prover rejects the saturated candidate `{formula}` for {q} {p}"
            )));
        }
        let verification = match q {
            Quantifier::Exists => {
                self.verify_pitts(phi, p, Some(&formula), None, vars, &opts.verify)?
            }
            Quantifier::Forall => {
                self.verify_pitts(phi, p, None, Some(&formula), vars, &opts.verify)?
            }
        };
        Ok(Attempt {
            formula,
            raw,
            defining_level,
            image_closed,
            classes,
            cegis,
            verification,
        })
    }

    /// Checks Pitts' biconditionals for the given candidates against a
    /// fragment of test formulas over `vars`: every up-set of the degree-bound
    /// space when `vars` has at most one variable, seeded samples otherwise.
    pub fn verify_pitts(
        &self,
        phi: &Formula,
        p: &str,
        right: Option<&Formula>,
        left: Option<&Formula>,
        vars: &Signature,
        opts: &VerifyOptions,
    ) -> Result<VerifyReport> {
        for candidate in right.iter().chain(left.iter()) {
            if candidate.mentions(p) {
                return Err(Error::EliminatedVariableOccurs(p.to_string()));
            }
            if let Some(v) = candidate.vars().iter().find(|v| !vars.contains(v)) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        if vars.contains(p) {
            return Err(Error::EliminatedVariableOccurs(p.to_string()));
        }
        let (tests, exhaustive) = test_fragment(&self.store, vars, opts)?;
        let mut failures = Vec::new();
        for psi in &tests {
            if let Some(r) = right {
                let original = self.prover.proves(phi, psi);
                if original != self.prover.proves(r, psi) {
                    failures.push(PittsFailure {
                        side: Side::Right,
                        psi: psi.clone(),
                        original,
                    });
                }
            }
            if let Some(l) = left {
                let original = self.prover.proves(psi, phi);
                if original != self.prover.proves(psi, l) {
                    failures.push(PittsFailure {
                        side: Side::Left,
                        psi: psi.clone(),
                        original,
                    });
                }
            }
        }
        Ok(VerifyReport {
            vars: vars.clone(),
            degree_bound: opts.degree_bound,
            exhaustive,
            seed: opts.seed,
            checked: tests.len(),
            failures,
        })
    }
}

fn fill(result: &mut InterpolantResult, att: Attempt, level: u32) {
    result.formula = att.formula;
    result.raw_formula = att.raw;
    result.level_used = level;
    result.defining_level = att.defining_level;
    result.image_closed = att.image_closed;
    result.classes = att.classes;
    result.cegis = att.cegis;
    result.verification = Some(att.verification);
}

/// Representatives of every degree-bounded formula class when `vars` has at
/// most one variable, seeded random formulas otherwise.
pub fn test_fragment(
    store: &TypeStore,
    vars: &Signature,
    opts: &VerifyOptions,
) -> Result<(Vec<Formula>, bool)> {
    if vars.len() <= 1 {
        let space = TypeSpace::build(store, vars, opts.degree_bound)?;
        let forms = CharForms::new(&space).simplified();
        let tests = space
            .up_sets()
            .iter()
            .map(|set| forms.upset(set))
            .collect::<Result<Vec<_>>>()?;
        return Ok((tests, true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tests = (0..opts.samples)
        .map(|_| random_formula(&mut rng, vars, opts.degree_bound, opts.max_size))
        .collect();
    Ok((tests, false))
}

/// Least level `j` such that `set` (an up-set of `space`) is the preimage of
/// an up-set of the level-j space, together with that up-set.
fn descend(space: &TypeSpace, set: &FixedBitSet) -> (u32, FixedBitSet) {
    for j in 0..space.level() {
        let proj = space.projection_to(j);
        let lower = space.at_level(j);
        let mut image = FixedBitSet::with_capacity(lower.len());
        image.extend(set.ones().map(|i| proj[i]));
        let preimage_matches = (0..space.len()).all(|i| set.contains(i) == image.contains(proj[i]));
        if preimage_matches && lower.is_up_closed(&image) {
            return (j, image);
        }
    }
    (space.level(), set.clone())
}

/// The smallest formula from the canonical enumeration defining `set` in
/// `space`, or the simplified `fallback` if none is found within the size
/// bound.
fn smallest_definition(
    space: &TypeSpace,
    set: &FixedBitSet,
    fallback: &Formula,
) -> Result<Formula> {
    if set.is_clear() {
        return Ok(Formula::Bot);
    }
    if set.count_ones(..) == space.len() {
        return Ok(Formula::Top);
    }
    let fallback = simplify(fallback);
    let max_size = match space.signature().len() {
        0 | 1 => 9,
        2 => 7,
        _ => 5,
    }
    .min(fallback.size().saturating_sub(1));
    for f in enumerate_canonical(space.signature(), max_size, space.level()) {
        if space.classes_of(&f)? == *set {
            return Ok(f);
        }
    }
    Ok(fallback)
}
