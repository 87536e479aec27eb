//! Continuation-based exhaustive traversal:
//!
//! ```text
//! a'(X, nil, [X]).
//! a'(X, [Q|Qs], Zs) :- Defn(Q, Pjs), c'_a(X, Pjs, Qs, Zs).
//! c'_a(X, nil, Qs, nil).
//! c'_a(X, [Pj|Pjs], Qs, YsZs) :- d'_a(X, Pj, Qs, Ys), c'_a(X, Pjs, Qs, Zs), append(Ys, Zs, YsZs).
//! d'_a(X, Pj, Qs, Zs) :- isunit(Pj), unit(Pj, X, Y), a'(Y, Qs, Zs).
//! d'_a(X, Pj, Qs, nil) :- isunit(Pj), not unit(Pj, X, Y).
//! d'_a(X, Pj, Qs', Zs) :- nonunit(Pj, Qs), append(Qs, Qs', QsQs'), a'(X, QsQs', Zs).
//! ```

use super::{Budget, EngineError, Frame, Interp, QList, Unification};
use crate::chainir::{Name, Registry};
use crate::terms::Term;

pub(super) fn run(interp: &Interp<'_>, x: &Term, qs: &[Name]) -> Result<Vec<Term>, EngineError> {
    let mut budget = Budget::new(interp.budget);
    let mut stack = vec![Frame::Goal(x.clone(), QList::from_slice(qs))];
    let mut out = Vec::new();
    while let Some(frame) = stack.pop() {
        if let Some(answer) = interp.dfs_step(frame, &mut stack, &mut budget)? {
            out.push(answer);
        }
    }
    Ok(out)
}

pub fn eval_continuation(x: &Term, qs: &[Name], r: &Registry, uni: Unification) -> Result<Vec<Term>, EngineError> {
    run(&Interp::new(r, uni), x, qs)
}
