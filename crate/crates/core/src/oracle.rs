//! Reference semantics: depth-first SLD resolution with the leftmost
//! selection rule over a source program. Shares nothing with the engines
//! beyond the term algebra.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::syntax::{Goal, PredKey, SourceProgram};
use crate::terms::{match_term, rename_apart_all, unify, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    /// Values of the goal variables.
    pub bindings: IndexMap<Var, Term>,
    /// Resolution steps in the refutation.
    pub derivation_length: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleResult {
    pub answers: Vec<OracleAnswer>,
    /// Some branch was cut off at the depth budget.
    pub truncated: bool,
}

/// Resolvent: remaining atoms, shared between sibling branches.
#[derive(Clone, Default)]
struct Atoms(Option<Arc<AtomNode>>);

struct AtomNode {
    head: Term,
    tail: Atoms,
}

impl Atoms {
    fn push_all(&self, atoms: Vec<Term>) -> Atoms {
        let mut out = self.clone();
        for a in atoms.into_iter().rev() {
            out = Atoms(Some(Arc::new(AtomNode { head: a, tail: out })));
        }
        out
    }
}

impl Drop for Atoms {
    fn drop(&mut self) {
        let mut cur = self.0.take();
        while let Some(node) = cur {
            match Arc::try_unwrap(node) {
                Ok(mut n) => cur = n.tail.0.take(),
                Err(_) => break,
            }
        }
    }
}

struct State {
    /// Goal instance under the substitution so far.
    goal: Term,
    /// Atoms still to prove, already instantiated.
    atoms: Atoms,
    depth: usize,
}

/// All answers of `g` in discovery order. Branches are cut once they reach
/// `depth_budget` resolution steps; cutting sets `truncated`.
pub fn sld_solve(p: &SourceProgram, g: &Goal, depth_budget: usize) -> OracleResult {
    let mut by_pred: IndexMap<PredKey, Vec<(Term, Vec<Term>)>> = IndexMap::new();
    for c in &p.clauses {
        by_pred
            .entry(c.predicate())
            .or_default()
            .push((c.head.clone(), c.body.clone()));
    }
    let mut out = OracleResult::default();
    let mut stack = vec![State {
        goal: g.atom.clone(),
        atoms: Atoms::default().push_all(vec![g.atom.clone()]),
        depth: 0,
    }];
    while let Some(state) = stack.pop() {
        let Some(node) = state.atoms.0.as_ref() else {
            let theta = match_term(&g.atom, &state.goal).expect("goal instance");
            let bindings = g
                .vars()
                .into_iter()
                .map(|v| {
                    let t = theta.apply(&Term::Var(v.clone()));
                    (v, t)
                })
                .collect();
            out.answers.push(OracleAnswer {
                bindings,
                derivation_length: state.depth,
            });
            continue;
        };
        if state.depth >= depth_budget {
            out.truncated = true;
            continue;
        }
        let selected = &node.head;
        let rest = &node.tail;
        let Some(clauses) = PredKey::of(selected).and_then(|k| by_pred.get(&k)) else {
            continue;
        };
        let mut children = Vec::new();
        for (head, body) in clauses {
            let mut parts = vec![head.clone()];
            parts.extend(body.iter().cloned());
            let fresh = rename_apart_all(&parts);
            let Some(theta) = unify(selected, &fresh[0]) else {
                continue;
            };
            let mut atoms: Vec<Term> = fresh[1..].iter().map(|b| theta.apply(b)).collect();
            let mut cur = rest.clone();
            while let Some(n) = cur.0.clone() {
                atoms.push(theta.apply(&n.head));
                cur = n.tail.clone();
            }
            children.push(State {
                goal: theta.apply(&state.goal),
                atoms: Atoms::default().push_all(atoms),
                depth: state.depth + 1,
            });
        }
        stack.extend(children.into_iter().rev());
    }
    out
}

/// Canonical form of one answer: the goal variables' values as a tuple,
/// with variables numbered by first occurrence.
pub fn canonical_answer<'a>(vars: &[Var], values: impl Fn(&Var) -> Option<&'a Term>) -> String {
    let ts: Vec<Term> = vars
        .iter()
        .map(|v| values(v).cloned().unwrap_or_else(|| Term::Var(v.clone())))
        .collect();
    Term::tuple(ts).variant_key()
}

/// Canonical forms of an answer list, in order.
pub fn canonical_answers(vars: &[Var], answers: &[IndexMap<Var, Term>]) -> Vec<String> {
    answers.iter().map(|b| canonical_answer(vars, |v| b.get(v))).collect()
}

/// Multiset equality of two canonical answer lists.
pub fn same_multiset(a: &[String], b: &[String]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    a == b
}
