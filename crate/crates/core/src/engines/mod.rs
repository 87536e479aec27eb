//! Deterministic metainterpreters over a [`Registry`].
//!
//! All engines compute `x ; Q1 ; ... ; Qn` for a term `x` and a list of
//! predicates, exploring alternatives in `Defn` order and keeping
//! duplicates. They run on explicit stacks, so deep derivations cost heap
//! rather than native stack, and they count composition steps (one per
//! predicate taken off a continuation) against a budget.

mod abcde;
mod bounded;
mod continuation;
mod prolog;
mod stream;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::chainir::{Name, Registry};
use crate::terms::{match_term, rename_apart_all, unify, Term};

pub use abcde::eval_abcde;
pub use bounded::{eval_bounded, BoundedResult, Outcome};
pub use continuation::eval_continuation;
pub use prolog::{enumerate_prolog, Control, Enumeration};
pub use stream::eval_stream;

/// Default limit on composition steps.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// How a unit clause `(t, t')` is applied to a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Unification {
    /// One-way matching of `t` against the term; for ground terms over
    /// G-chain registries.
    Match,
    /// Full unification against a renamed copy of the clause.
    Unify,
}

impl fmt::Display for Unification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unification::Match => "match",
            Unification::Unify => "unify",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("step budget of {0} composition steps exhausted")]
    BudgetExhausted(u64),
    #[error("predicate `{0}` has no definition")]
    Undefined(String),
    #[error("predicate `{pred}` changed the stack of {term}")]
    StackChanged { pred: String, term: String },
}

/// Engine settings bundled with a registry.
#[derive(Clone, Copy, Debug)]
pub struct Interp<'r> {
    pub registry: &'r Registry,
    pub uni: Unification,
    pub budget: u64,
}

impl<'r> Interp<'r> {
    pub fn new(registry: &'r Registry, uni: Unification) -> Interp<'r> {
        Interp {
            registry,
            uni,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Interp<'r> {
        self.budget = budget;
        self
    }

    pub fn abcde(&self, x: &Term, qs: &[Name]) -> Result<Vec<Term>, EngineError> {
        abcde::run(self, x, qs)
    }

    pub fn continuation(&self, x: &Term, qs: &[Name]) -> Result<Vec<Term>, EngineError> {
        continuation::run(self, x, qs)
    }

    pub fn stream(&self, sigma: &Term, xs: &[Term], qs: &[Name]) -> Result<Vec<Term>, EngineError> {
        stream::run(self, Some(sigma.clone()), xs.to_vec(), qs)
    }

    /// Stream evaluation of a whole term: its first component is taken as
    /// the stack.
    pub fn stream_term(&self, x: &Term, qs: &[Name]) -> Result<Vec<Term>, EngineError> {
        match unaffix(x) {
            Some((sigma, t)) => stream::run(self, Some(sigma), vec![t], qs),
            None => stream::run(self, None, vec![x.clone()], qs),
        }
    }

    pub fn prolog(&self, x: &Term, qs: &[Name]) -> Enumeration<'r> {
        Enumeration::new(*self, x, qs)
    }

    pub fn bounded(&self, x: &Term, qs: &[Name]) -> Result<BoundedResult, EngineError> {
        bounded::run(self, x, qs)
    }

    fn alternatives(&self, q: &str) -> Result<&'r [Name], EngineError> {
        self.registry
            .alternatives(q)
            .ok_or_else(|| EngineError::Undefined(q.to_string()))
    }

    /// `unit(Pj, X, Y)`: the output of unit clause `label` applied to `x`.
    fn unit_step(&self, label: &str, x: &Term) -> Option<Term> {
        let (t, t2) = &self.registry.unit[label];
        match self.uni {
            Unification::Match => match_term(t, x).map(|s| s.apply(t2)),
            Unification::Unify => {
                let fresh = rename_apart_all(&[t.clone(), t2.clone()]);
                unify(x, &fresh[0]).map(|s| s.apply(&fresh[1]))
            }
        }
    }
}

/// Remaining composition steps.
struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    fn tick(&mut self) -> Result<(), EngineError> {
        if self.used >= self.limit {
            return Err(EngineError::BudgetExhausted(self.limit));
        }
        self.used += 1;
        Ok(())
    }
}

/// `x ⋄ ys`: `x` put in front of every element of `ys`. Tuples get `x` as
/// a new first component, anything else is treated as a list tail.
pub fn affix(x: &Term, ys: &[Term]) -> Vec<Term> {
    ys.iter().map(|y| affix_one(x, y)).collect()
}

pub(crate) fn affix_one(x: &Term, y: &Term) -> Term {
    match y.tuple_args() {
        Some(args) => {
            let mut v = Vec::with_capacity(args.len() + 1);
            v.push(x.clone());
            v.extend(args.iter().cloned());
            Term::tuple(v)
        }
        None => Term::cons(x.clone(), y.clone()),
    }
}

/// Inverse of [`affix_one`].
pub(crate) fn unaffix(y: &Term) -> Option<(Term, Term)> {
    if let Some(args) = y.tuple_args() {
        return args
            .split_first()
            .map(|(s, rest)| (s.clone(), Term::tuple(rest.to_vec())));
    }
    let (items, tail) = y.list_parts();
    let first = items.first()?;
    let rest = Term::list_with_tail(items[1..].iter().map(|t| (*t).clone()).collect(), tail.clone());
    Some(((*first).clone(), rest))
}

/// Continuation list shared between search branches.
#[derive(Clone, Default)]
pub(crate) struct QList(Option<Arc<QNode>>);

struct QNode {
    head: Name,
    tail: QList,
}

impl QList {
    pub(crate) fn from_slice(qs: &[Name]) -> QList {
        QList::default().prepend(qs)
    }

    /// `append(body, self)`.
    pub(crate) fn prepend(&self, body: &[Name]) -> QList {
        let mut out = self.clone();
        for q in body.iter().rev() {
            out = QList(Some(Arc::new(QNode {
                head: q.clone(),
                tail: out,
            })));
        }
        out
    }

    pub(crate) fn split(&self) -> Option<(&Name, &QList)> {
        self.0.as_ref().map(|n| (&n.head, &n.tail))
    }
}

impl Drop for QList {
    // Long continuation lists would otherwise be freed recursively.
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

/// Search frame shared by the depth-first engines.
pub(crate) enum Frame {
    /// `a'(x, qs)`
    Goal(Term, QList),
    /// `d'_a(x, pj, qs)`
    Alt(Term, Name, QList),
}

impl Interp<'_> {
    /// Expands one frame of the depth-first search. Returns the answer if
    /// the frame completes one.
    fn dfs_step(&self, frame: Frame, stack: &mut Vec<Frame>, budget: &mut Budget) -> Result<Option<Term>, EngineError> {
        match frame {
            Frame::Goal(x, qs) => {
                let Some((q, rest)) = qs.split() else {
                    return Ok(Some(x));
                };
                budget.tick()?;
                let pjs = self.alternatives(q)?;
                for pj in pjs.iter().rev() {
                    stack.push(Frame::Alt(x.clone(), pj.clone(), rest.clone()));
                }
                Ok(None)
            }
            Frame::Alt(x, pj, qs) => {
                if self.registry.isunit.contains(&pj) {
                    if let Some(y) = self.unit_step(&pj, &x) {
                        stack.push(Frame::Goal(y, qs));
                    }
                } else {
                    let body = &self.registry.nonunit[&pj];
                    stack.push(Frame::Goal(x, qs.prepend(body)));
                }
                Ok(None)
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::chainir::{compile_to_registry, Registry};
    use crate::syntax::parse_program;
    use crate::transform::{transform_definite, transform_moded};

    pub const SPLIT: &str = ":- mode(s,[in,out,out]).\ns(L,nil,L).\ns([A|N],[A|L],M) :- s(N,L,M).";
    pub const APPEND: &str = "ap(nil,L,L).\nap([A|L],M,[A|N]) :- ap(L,M,N).";

    pub fn split_registry() -> Registry {
        compile_to_registry(&transform_moded(&parse_program(SPLIT).unwrap()).unwrap()).unwrap()
    }

    pub fn append_registry() -> Registry {
        compile_to_registry(&transform_definite(&parse_program(APPEND).unwrap())).unwrap()
    }

    pub fn term(text: &str) -> crate::terms::Term {
        crate::syntax::parse_goal(&format!("x({text})")).unwrap().atom.args()[0].clone()
    }

    pub fn strings(ts: &[crate::terms::Term]) -> Vec<String> {
        ts.iter().map(|t| t.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn affix_examples() {
        assert!(affix(&term("s"), &[]).is_empty());
        let ys = [term("[b]"), term("[c]")];
        assert_eq!(strings(&affix(&term("a"), &ys)), vec!["[a,b]", "[a,c]"]);
        assert_eq!(strings(&affix(&term("nil"), &[term("<x,y>")])), vec!["<nil,x,y>"]);
    }

    #[test]
    fn unaffix_inverts_affix() {
        for y in [term("<x,y>"), term("[b,c|T]"), term("<>")] {
            let joined = affix_one(&term("s"), &y);
            assert_eq!(unaffix(&joined), Some((term("s"), y)));
        }
        assert_eq!(unaffix(&term("<>")), None);
        assert_eq!(unaffix(&term("nil")), None);
    }

    #[test]
    fn long_continuations_drop_without_recursion() {
        let qs: Vec<Name> = (0..200_000).map(|_| Name::from("q")).collect();
        let l = QList::from_slice(&qs);
        let shared = l.clone();
        drop(l);
        assert!(shared.split().is_some());
    }

    #[test]
    fn unknown_continuation_is_an_error() {
        let reg = split_registry();
        let e = eval_abcde(&term("<nil,[a]>"), &[Name::from("nope")], &reg, Unification::Match);
        assert_eq!(e, Err(EngineError::Undefined("nope".into())));
    }

    #[test]
    fn budget_is_enforced() {
        let reg = split_registry();
        let interp = Interp::new(&reg, Unification::Match).with_budget(2);
        let x = term("<nil,[a,b,c]>");
        let qs = [Name::from("s_hat")];
        assert_eq!(interp.abcde(&x, &qs), Err(EngineError::BudgetExhausted(2)));
        assert_eq!(interp.continuation(&x, &qs), Err(EngineError::BudgetExhausted(2)));
        assert_eq!(interp.stream_term(&x, &qs), Err(EngineError::BudgetExhausted(2)));
    }
}
