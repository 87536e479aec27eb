//! Bounded-resource traversal: at most one proof, plus the number `R` of
//! composition steps spent finding it.
//!
//! ```text
//! a'(X, nil, ans(X), 0).
//! a'(X, [Q|Qs], Z, R+1) :- Defn(Q, Pjs), c'_a(X, Pjs, Qs, Z, R).
//! c'_a(X, nil, Qs, noans, 0).
//! c'_a(X, [Pj|Pjs], Qs, Z, R+S) :- d'_a(X, Pj, Qs, Y, R), goon(X, Pjs, Qs, Y, Z, S).
//! goon(X, Pjs, Qs, ans(Y), ans(Y), 0).
//! goon(X, Pjs, Qs, noans, Z, S) :- c'_a(X, Pjs, Qs, Z, S).
//! ```
//!
//! Only the `R+1` clause counts; the base case and unit steps are free.
//! Summing over the branches tried before the first answer equals counting
//! every composition step of the depth-first search up to that answer.

use super::{Budget, EngineError, Frame, Interp, QList, Unification};
use crate::chainir::{Name, Registry};
use crate::terms::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ans(Term),
    NoAns,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedResult {
    pub outcome: Outcome,
    pub resource: u64,
}

pub(super) fn run(interp: &Interp<'_>, x: &Term, qs: &[Name]) -> Result<BoundedResult, EngineError> {
    let mut budget = Budget::new(interp.budget);
    let mut stack = vec![Frame::Goal(x.clone(), QList::from_slice(qs))];
    while let Some(frame) = stack.pop() {
        if let Some(answer) = interp.dfs_step(frame, &mut stack, &mut budget)? {
            return Ok(BoundedResult {
                outcome: Outcome::Ans(answer),
                resource: budget.used,
            });
        }
    }
    Ok(BoundedResult {
        outcome: Outcome::NoAns,
        resource: budget.used,
    })
}

pub fn eval_bounded(x: &Term, qs: &[Name], r: &Registry, uni: Unification) -> Result<BoundedResult, EngineError> {
    run(&Interp::new(r, uni), x, qs)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;

    #[test]
    fn split_needs_one_step() {
        let reg = split_registry();
        let r = eval_bounded(&term("<nil,[a,b]>"), &[Name::from("s_hat")], &reg, Unification::Match).unwrap();
        assert_eq!(r.outcome, Outcome::Ans(term("<nil,nil,[a,b]>")));
        assert_eq!(r.resource, 1);
    }

    #[test]
    fn empty_continuation_is_free() {
        let reg = split_registry();
        let x = term("<nil,[a]>");
        let r = eval_bounded(&x, &[], &reg, Unification::Match).unwrap();
        assert_eq!(
            r,
            BoundedResult {
                outcome: Outcome::Ans(x),
                resource: 0
            }
        );
    }

    #[test]
    fn failure_reports_all_steps() {
        let reg = split_registry();
        // Every branch ends at an h_2_0 that cannot apply. Steps taken:
        // s_hat; h_2_0 after the unit clause; h_2_0, s_hat inside the
        // recursive clause, then h_2_1 and h_2_0 after its unit clause and
        // h_2_0 after its recursive clause.
        let qs = [Name::from("s_hat"), Name::from("h_2_0"), Name::from("h_2_0")];
        let r = eval_bounded(&term("<nil,[a]>"), &qs, &reg, Unification::Match).unwrap();
        assert_eq!(r.outcome, Outcome::NoAns);
        assert_eq!(r.resource, 7);
    }
}
