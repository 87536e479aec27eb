//! Stream-based traversal. The stack is kept apart from the rest of each
//! term and only switched at steps through predicates that may change it.
//!
//! `a_stream(St, Xs, Qs, YsZs)` holds iff `(St ⋄ Xs) ; Qs = St ⋄ YsZs`:
//!
//! ```text
//! a_stream(S, [t|Xs], [Q|Qs], YsZs) :-
//!     b'(t, Q, Ys), a_stream(S, Ys, Qs, Ys'),
//!     a_stream(S, Xs, [Q|Qs], Zs), append(Ys', Zs, YsZs).
//! ```
//!
//! for stack-preserving (hat) `Q`. Other predicates see the whole term and
//! their results are regrouped by stack. In unification mode a hat step
//! carries the stack variables that also occur in `t` as a stand-in stack,
//! so bindings made by the step reach the real stack.

use super::{affix_one, unaffix, Budget, EngineError, Interp, Unification};
use crate::chainir::{Name, Registry};
use crate::terms::{match_term, Term};

enum Task<'a> {
    /// `a_stream(sigma, xs, qs)`; `None` when the terms have no stack.
    Stream(Option<Term>, Vec<Term>, &'a [Name]),
    /// One composition step for a single term.
    Step(Option<Term>, Term, &'a Name, &'a [Name]),
    /// Splits the results of a step by stack and continues with `qs`.
    Regroup(Regroup, &'a [Name]),
    /// `b'(x, q)` on whole terms.
    B(Term, &'a Name),
    D(Term, &'a Name),
    Append(usize),
}

enum Regroup {
    /// After a hat step run with `passenger` in place of `sigma`.
    Hat { sigma: Term, passenger: Term, pred: Name },
    /// After a step on the whole term.
    Whole,
}

fn passenger(sigma: &Term, t: &Term) -> Term {
    let in_t = t.vars();
    let shared: Vec<Term> = sigma
        .vars()
        .into_iter()
        .filter(|v| in_t.contains(v))
        .map(Term::Var)
        .collect();
    Term::list(shared)
}

/// Consecutive results with the same stack, as `(stack, rests)`.
fn group(parts: Vec<(Option<Term>, Term)>) -> Vec<(Option<Term>, Vec<Term>)> {
    let mut out: Vec<(Option<Term>, Vec<Term>)> = Vec::new();
    for (s, t) in parts {
        match out.last_mut() {
            Some((last, ts)) if *last == s => ts.push(t),
            _ => out.push((s, vec![t])),
        }
    }
    out
}

pub(super) fn run(
    interp: &Interp<'_>,
    sigma: Option<Term>,
    xs: Vec<Term>,
    qs: &[Name],
) -> Result<Vec<Term>, EngineError> {
    let reg = interp.registry;
    let mut budget = Budget::new(interp.budget);
    let mut tasks = vec![Task::Stream(sigma, xs, qs)];
    let mut values: Vec<Vec<Term>> = Vec::new();
    while let Some(task) = tasks.pop() {
        match task {
            Task::Stream(sigma, xs, qs) => match qs.split_first() {
                None => values.push(match &sigma {
                    Some(s) => xs.iter().map(|x| affix_one(s, x)).collect(),
                    None => xs,
                }),
                Some((q, rest)) => {
                    tasks.push(Task::Append(xs.len()));
                    for x in xs.into_iter().rev() {
                        tasks.push(Task::Step(sigma.clone(), x, q, rest));
                    }
                }
            },
            Task::Step(sigma, x, q, rest) => {
                budget.tick()?;
                match sigma {
                    Some(sigma) if reg.is_hat(q) => {
                        let p = passenger(&sigma, &x);
                        let whole = affix_one(&p, &x);
                        let after = Regroup::Hat {
                            sigma,
                            passenger: p,
                            pred: q.clone(),
                        };
                        tasks.push(Task::Regroup(after, rest));
                        tasks.push(Task::B(whole, q));
                    }
                    Some(sigma) => {
                        tasks.push(Task::Regroup(Regroup::Whole, rest));
                        tasks.push(Task::B(affix_one(&sigma, &x), q));
                    }
                    None => {
                        tasks.push(Task::Regroup(Regroup::Whole, rest));
                        tasks.push(Task::B(x, q));
                    }
                }
            }
            Task::Regroup(how, rest) => {
                let ys = values.pop().expect("b' leaves a list");
                let mut parts = Vec::with_capacity(ys.len());
                for y in ys {
                    parts.push(match &how {
                        Regroup::Whole => match unaffix(&y) {
                            Some((s, t)) => (Some(s), t),
                            None => (None, y),
                        },
                        Regroup::Hat { sigma, passenger, pred } => {
                            let changed = || EngineError::StackChanged {
                                pred: pred.to_string(),
                                term: y.to_string(),
                            };
                            let (p2, t) = unaffix(&y).ok_or_else(changed)?;
                            let theta = match_term(passenger, &p2).ok_or_else(changed)?;
                            (Some(theta.apply(sigma)), t)
                        }
                    });
                }
                let groups = group(parts);
                tasks.push(Task::Append(groups.len()));
                for (s, ts) in groups.into_iter().rev() {
                    tasks.push(Task::Stream(s, ts, rest));
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
                if reg.isunit.contains(pj) {
                    values.push(interp.unit_step(pj, &x).into_iter().collect());
                } else {
                    let body = &reg.nonunit[pj];
                    match unaffix(&x) {
                        Some((s, t)) => tasks.push(Task::Stream(Some(s), vec![t], body)),
                        None => tasks.push(Task::Stream(None, vec![x], body)),
                    }
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

/// `(sigma ⋄ xs) ; qs`, returned flattened as whole terms.
pub fn eval_stream(
    sigma: &Term,
    xs: &[Term],
    qs: &[Name],
    r: &Registry,
    uni: Unification,
) -> Result<Vec<Term>, EngineError> {
    run(&Interp::new(r, uni), Some(sigma.clone()), xs.to_vec(), qs)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::super::{eval_abcde, Interp};
    use super::*;
    use crate::terms::alpha_eq;

    #[test]
    fn split_with_empty_stack() {
        let reg = split_registry();
        let qs = [Name::from("s_hat")];
        let out = eval_stream(&Term::nil(), &[term("<[a,b]>")], &qs, &reg, Unification::Match).unwrap();
        let expected = eval_abcde(&term("<nil,[a,b]>"), &qs, &reg, Unification::Match).unwrap();
        assert_eq!(out, expected);
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn several_terms_share_a_stack() {
        let reg = split_registry();
        let qs = [Name::from("s_hat")];
        let out = eval_stream(
            &term("[z]"),
            &[term("<[a]>"), term("<nil>")],
            &qs,
            &reg,
            Unification::Match,
        )
        .unwrap();
        assert_eq!(strings(&out), vec!["<[z],nil,[a]>", "<[z],[a],nil>", "<[z],nil,nil>"]);
    }

    #[test]
    fn unify_mode_matches_abcde() {
        let reg = append_registry();
        let qs = [Name::from("ap_hat")];
        let x = term("<nil,X,Y,[a,b]>");
        let a = eval_abcde(&x, &qs, &reg, Unification::Unify).unwrap();
        let s = Interp::new(&reg, Unification::Unify).stream_term(&x, &qs).unwrap();
        assert_eq!(a.len(), s.len());
        for (p, q) in a.iter().zip(&s) {
            assert!(alpha_eq(p, q), "{p} vs {q}");
        }
    }

    #[test]
    fn hat_step_binds_stack_variables() {
        // The stack holds a variable that the hat step binds.
        let reg = append_registry();
        let qs = [Name::from("ap_hat")];
        let x = term("<[V],V,[b],[a,b]>");
        let a = eval_abcde(&x, &qs, &reg, Unification::Unify).unwrap();
        let s = Interp::new(&reg, Unification::Unify).stream_term(&x, &qs).unwrap();
        assert_eq!(a.len(), 1);
        assert!(alpha_eq(&a[0], &s[0]), "{} vs {}", a[0], s[0]);
        assert!(a[0].to_string().starts_with("<[[a]]"));
    }
}
