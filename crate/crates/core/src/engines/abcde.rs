//! The exhaustive `abcde` metainterpreter:
//!
//! ```text
//! a(nil, Qs, nil).
//! a([X|Xs], Qs, YsZs) :- a'(X, Qs, Ys), a(Xs, Qs, Zs), append(Ys, Zs, YsZs).
//! a'(X, nil, [X]).
//! a'(X, [Q|Qs], Zs) :- b'(X, Q, Ys), a(Ys, Qs, Zs).
//! b'(X, Q, Ys) :- Defn(Q, Pjs), c'(X, Pjs, Ys).
//! c'(X, nil, nil).
//! c'(X, [Pj|Pjs], YsZs) :- d'(X, Pj, Ys), c'(X, Pjs, Zs), append(Ys, Zs, YsZs).
//! d'(X, Pj, Ys) :- isunit(Pj), e'(X, Pj, Ys).
//! d'(X, Pj, Zs) :- nonunit(Pj, Qs), a'(X, Qs, Zs).
//! e'(X, Pj, [Y]) :- unit(Pj, X, Y).
//! e'(X, Pj, nil) :- not unit(Pj, X, _).
//! ```

use super::{Budget, EngineError, Interp, Unification};
use crate::chainir::{Name, Registry};
use crate::terms::Term;

enum Task<'a> {
    /// `a'(x, qs)`
    APrime(Term, &'a [Name]),
    /// `a(Ys, qs)` on the list left by the preceding `b'`.
    A(&'a [Name]),
    /// `b'(x, q)`
    B(Term, &'a Name),
    /// `d'(x, pj)`
    D(Term, &'a Name),
    /// Concatenates the last `n` result lists.
    Append(usize),
}

pub(super) fn run(interp: &Interp<'_>, x: &Term, qs: &[Name]) -> Result<Vec<Term>, EngineError> {
    let mut budget = Budget::new(interp.budget);
    let mut tasks = vec![Task::APrime(x.clone(), qs)];
    let mut values: Vec<Vec<Term>> = Vec::new();
    while let Some(task) = tasks.pop() {
        match task {
            Task::APrime(x, qs) => match qs.split_first() {
                None => values.push(vec![x]),
                Some((q, rest)) => {
                    budget.tick()?;
                    tasks.push(Task::A(rest));
                    tasks.push(Task::B(x, q));
                }
            },
            Task::A(qs) => {
                let ys = values.pop().expect("b' leaves a list");
                tasks.push(Task::Append(ys.len()));
                for y in ys.into_iter().rev() {
                    tasks.push(Task::APrime(y, qs));
                }
            }
            Task::B(x, q) => {
                let pjs = interp.alternatives(q)?;
                tasks.push(Task::Append(pjs.len()));
                for pj in pjs.iter().rev() {
                    tasks.push(Task::D(x.clone(), pj));
                }
            }
            Task::D(x, pj) => {
                if interp.registry.isunit.contains(pj) {
                    values.push(interp.unit_step(pj, &x).into_iter().collect());
                } else {
                    tasks.push(Task::APrime(x, &interp.registry.nonunit[pj]));
                }
            }
            Task::Append(n) => {
                let parts = values.split_off(values.len() - n);
                values.push(parts.into_iter().flatten().collect());
            }
        }
    }
    Ok(values.pop().expect("one result list"))
}

/// `a'(x, qs, Zs)`: all answers, in order, with the default budget.
pub fn eval_abcde(x: &Term, qs: &[Name], r: &Registry, uni: Unification) -> Result<Vec<Term>, EngineError> {
    run(&Interp::new(r, uni), x, qs)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::terms::alpha_eq;

    #[test]
    fn split_answers() {
        let reg = split_registry();
        let out = eval_abcde(&term("<nil,[a,b]>"), &[Name::from("s_hat")], &reg, Unification::Match).unwrap();
        assert_eq!(
            strings(&out),
            vec!["<nil,nil,[a,b]>", "<nil,[a],[b]>", "<nil,[a,b],nil>"]
        );
    }

    #[test]
    fn empty_continuation_returns_input() {
        let reg = split_registry();
        let x = term("<nil,[a]>");
        assert_eq!(eval_abcde(&x, &[], &reg, Unification::Match).unwrap(), vec![x]);
    }

    #[test]
    fn append_with_unification() {
        let reg = append_registry();
        let out = eval_abcde(
            &term("<nil,X,Y,[a,b]>"),
            &[Name::from("ap_hat")],
            &reg,
            Unification::Unify,
        )
        .unwrap();
        assert_eq!(out.len(), 3);
        assert!(alpha_eq(&out[0], &term("<nil,nil,[a,b],[a,b]>")));
        assert!(alpha_eq(&out[1], &term("<nil,[a],[b],[a,b]>")));
        assert!(alpha_eq(&out[2], &term("<nil,[a,b],nil,[a,b]>")));
    }

    #[test]
    fn failing_unit_gives_no_answers() {
        let reg = split_registry();
        // h_2_0 needs a non-empty list
        let out = eval_abcde(&term("<nil,nil>"), &[Name::from("h_2_0")], &reg, Unification::Match).unwrap();
        assert!(out.is_empty());
    }
}
