//! Decision procedure for intuitionistic entailment.
//!
//! Proof search runs in the contraction-free sequent calculus G4ip: left
//! implications are decomposed by the shape of their antecedent, so every
//! backward rule application makes the sequent smaller in the multiset
//! ordering and search terminates without loop checks. Invertible rules are
//! applied eagerly; only right disjunction and implications with an
//! implication antecedent branch.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;

use crate::enumerate::enumerate_models;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::KripkeModel;
use crate::signature::Signature;
use crate::typespace::{Limits, TypeSpace, TypeStore};

type Id = u32;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Var(u32),
    Bot,
    Top,
    And(Id, Id),
    Or(Id, Id),
    Imp(Id, Id),
}

const BOT: Id = 0;
const TOP: Id = 1;

struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, Id>,
    names: HashMap<Arc<str>, u32>,
}

impl Arena {
    fn new() -> Self {
        let mut a = Arena {
            nodes: Vec::new(),
            index: HashMap::new(),
            names: HashMap::new(),
        };
        a.mk(Node::Bot);
        a.mk(Node::Top);
        a
    }

    fn mk(&mut self, node: Node) -> Id {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as Id;
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    fn intern(&mut self, f: &Formula) -> Id {
        match f {
            Formula::Var(v) => {
                let next = self.names.len() as u32;
                let k = *self.names.entry(v.clone()).or_insert(next);
                self.mk(Node::Var(k))
            }
            Formula::Bot => BOT,
            Formula::Top => TOP,
            Formula::And(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                self.mk(Node::And(a, b))
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                self.mk(Node::Or(a, b))
            }
            Formula::Imp(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                self.mk(Node::Imp(a, b))
            }
        }
    }
}

struct State {
    arena: Arena,
    memo: HashMap<(Vec<Id>, Id), bool>,
}

/// Entailment checker with a shared result cache. Cache inserts are
/// idempotent, so a prover can be shared between threads.
pub struct Prover {
    state: Mutex<State>,
}

impl Default for Prover {
    fn default() -> Self {
        Self::new()
    }
}

/// Result of [`Prover::decide`].
#[derive(Debug, Clone)]
pub struct ProofOutcome {
    pub provable: bool,
    /// A model and a node forcing the antecedent but not the consequent;
    /// only present when refutation was requested and found.
    pub countermodel: Option<(KripkeModel, usize)>,
}

/// Outcome of a bounded countermodel search.
#[derive(Debug, Clone)]
pub enum Refutation {
    Provable,
    Found(KripkeModel, usize),
    /// Not provable, but no refuting model within the node bound.
    BoundExhausted,
}

impl Prover {
    pub fn new() -> Self {
        Prover {
            state: Mutex::new(State {
                arena: Arena::new(),
                memo: HashMap::new(),
            }),
        }
    }

    /// Whether `antecedent` entails `consequent` in IPC.
    pub fn proves(&self, antecedent: &Formula, consequent: &Formula) -> bool {
        let mut state = self.state.lock();
        let a = state.arena.intern(antecedent);
        let c = state.arena.intern(consequent);
        let ctx = if a == TOP { Vec::new() } else { vec![a] };
        state.prove(ctx, c)
    }

    pub fn is_theorem(&self, f: &Formula) -> bool {
        self.proves(&Formula::Top, f)
    }

    pub fn equivalent(&self, a: &Formula, b: &Formula) -> bool {
        self.proves(a, b) && self.proves(b, a)
    }

    /// Refutes `antecedent |- consequent` on the smallest model (up to
    /// `max_nodes` nodes) over the variables of both formulas.
    pub fn countermodel(
        &self,
        antecedent: &Formula,
        consequent: &Formula,
        max_nodes: usize,
    ) -> Refutation {
        if self.proves(antecedent, consequent) {
            return Refutation::Provable;
        }
        match search_countermodel(antecedent, consequent, max_nodes) {
            Some((m, w)) => Refutation::Found(m, w),
            None => Refutation::BoundExhausted,
        }
    }

    pub fn decide(
        &self,
        antecedent: &Formula,
        consequent: &Formula,
        refute_up_to: Option<usize>,
    ) -> ProofOutcome {
        let provable = self.proves(antecedent, consequent);
        let countermodel = match refute_up_to {
            Some(bound) if !provable => search_countermodel(antecedent, consequent, bound),
            _ => None,
        };
        ProofOutcome {
            provable,
            countermodel,
        }
    }
}

fn search_countermodel(
    antecedent: &Formula,
    consequent: &Formula,
    max_nodes: usize,
) -> Option<(KripkeModel, usize)> {
    let sig = antecedent.signature().union(&consequent.signature());
    for m in enumerate_models(&sig, max_nodes) {
        let a = m
            .truth_set(antecedent)
            .expect("signature covers the formula");
        let c = m
            .truth_set(consequent)
            .expect("signature covers the formula");
        if let Some(w) = a.difference(&c).next() {
            return Some((m, w));
        }
    }
    None
}

/// Decides entailment by class inclusion in the type space of level
/// `max(degrees)` over `vars`.
pub fn decide_semantic(
    store: &TypeStore,
    antecedent: &Formula,
    consequent: &Formula,
    vars: &Signature,
) -> Result<bool> {
    decide_semantic_with(store, antecedent, consequent, vars, &Limits::default())
}

pub fn decide_semantic_with(
    store: &TypeStore,
    antecedent: &Formula,
    consequent: &Formula,
    vars: &Signature,
    limits: &Limits,
) -> Result<bool> {
    for v in antecedent.vars().iter().chain(consequent.vars().iter()) {
        if !vars.contains(v) {
            return Err(Error::UnknownVariable(v.to_string()));
        }
    }
    let level = antecedent.impl_degree().max(consequent.impl_degree());
    let space = TypeSpace::build_with(store, vars, level, limits)?;
    let a = space.classes_of(antecedent)?;
    let c = space.classes_of(consequent)?;
    Ok(a.is_subset(&c))
}

impl State {
    fn node(&self, id: Id) -> Node {
        self.arena.nodes[id as usize]
    }

    fn prove(&mut self, mut ctx: Vec<Id>, goal: Id) -> bool {
        ctx.sort_unstable();
        ctx.dedup();
        let key = (ctx, goal);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let result = self.search(key.0.clone(), goal);
        self.memo.insert(key, result);
        result
    }

    fn search(&mut self, mut ctx: Vec<Id>, goal: Id) -> bool {
        if goal == TOP || ctx.contains(&BOT) || ctx.contains(&goal) {
            return true;
        }
        // invertible left rules
        for i in 0..ctx.len() {
            let f = ctx[i];
            match self.node(f) {
                Node::Top => {
                    return self.prove(replaced(&ctx, i, &[]), goal);
                }
                Node::And(a, b) => {
                    return self.prove(replaced(&ctx, i, &[a, b]), goal);
                }
                Node::Or(a, b) => {
                    ctx.swap_remove(i);
                    let mut left = ctx.clone();
                    left.push(a);
                    if !self.prove(left, goal) {
                        return false;
                    }
                    ctx.push(b);
                    return self.prove(ctx, goal);
                }
                Node::Imp(a, b) => match self.node(a) {
                    Node::Bot => {
                        return self.prove(replaced(&ctx, i, &[]), goal);
                    }
                    _ if b == TOP => {
                        return self.prove(replaced(&ctx, i, &[]), goal);
                    }
                    Node::Top => {
                        return self.prove(replaced(&ctx, i, &[b]), goal);
                    }
                    Node::Var(_) if ctx.contains(&a) => {
                        return self.prove(replaced(&ctx, i, &[b]), goal);
                    }
                    Node::And(c, d) => {
                        let db = self.arena.mk(Node::Imp(d, b));
                        let cdb = self.arena.mk(Node::Imp(c, db));
                        return self.prove(replaced(&ctx, i, &[cdb]), goal);
                    }
                    Node::Or(c, d) => {
                        let cb = self.arena.mk(Node::Imp(c, b));
                        let db = self.arena.mk(Node::Imp(d, b));
                        return self.prove(replaced(&ctx, i, &[cb, db]), goal);
                    }
                    _ => {}
                },
                _ => {}
            }
        }
        // invertible right rules
        match self.node(goal) {
            Node::And(a, b) => return self.prove(ctx.clone(), a) && self.prove(ctx, b),
            Node::Imp(a, b) => {
                ctx.push(a);
                return self.prove(ctx, b);
            }
            _ => {}
        }
        // branching rules
        if let Node::Or(a, b) = self.node(goal) {
            if self.prove(ctx.clone(), a) || self.prove(ctx.clone(), b) {
                return true;
            }
        }
        for i in 0..ctx.len() {
            let f = ctx[i];
            let Node::Imp(cd, b) = self.node(f) else {
                continue;
            };
            let Node::Imp(_, d) = self.node(cd) else {
                continue;
            };
            let mut rest = ctx.clone();
            rest.swap_remove(i);
            let db = self.arena.mk(Node::Imp(d, b));
            let mut left = rest.clone();
            left.push(db);
            if !self.prove(left, cd) {
                continue;
            }
            rest.push(b);
            if self.prove(rest, goal) {
                return true;
            }
        }
        false
    }
}

/// `ctx` with entry `i` replaced by `with`.
fn replaced(ctx: &[Id], i: usize, with: &[Id]) -> Vec<Id> {
    let mut out = Vec::with_capacity(ctx.len() + with.len());
    out.extend(
        ctx.iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &f)| f),
    );
    out.extend_from_slice(with);
    out
}
