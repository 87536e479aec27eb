//! Membership tests for the syntactic program classes: moded, chain,
//! G-chain and prechain.
//!
//! Condition ids in violations:
//!
//! | form     | 0                   | 1                              | 2                        | 3                      |
//! |----------|---------------------|--------------------------------|--------------------------|------------------------|
//! | moded    |                     | `var(t_i') ⊆ var(t_0..t_i)`    | `var(t_i)` disjoint      |                        |
//! | chain    | non-binary atom     | nonunit clause not a chain     |                          |                        |
//! | gchain   | non-binary atom     | nonunit clause not a chain     |                          | `var(t') ⊄ var(t)`     |
//! | prechain | non-binary atom     | `var(s_i') ⊆ var(s_i)`         | `var(s_i)` disjoint      |                        |

use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::chainir::ChainProgram;
use crate::syntax::{PredKey, SourceClause, SourceProgram};
use crate::terms::{Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Moded,
    Chain,
    GChain,
    Prechain,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Moded => "moded",
            Form::Chain => "chain",
            Form::GChain => "gchain",
            Form::Prechain => "prechain",
        })
    }
}

impl std::str::FromStr for Form {
    type Err = String;

    fn from_str(s: &str) -> Result<Form, String> {
        match s {
            "moded" => Ok(Form::Moded),
            "chain" => Ok(Form::Chain),
            "gchain" => Ok(Form::GChain),
            "prechain" => Ok(Form::Prechain),
            _ => Err(format!(
                "unknown form `{s}` (expected moded, chain, gchain or prechain)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// 0-based clause index.
    pub clause: usize,
    pub condition: u8,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormReport {
    pub form: Form,
    pub holds: bool,
    pub violations: Vec<Violation>,
}

impl FormReport {
    fn new(form: Form, violations: Vec<Violation>) -> FormReport {
        FormReport {
            form,
            holds: violations.is_empty(),
            violations,
        }
    }
}

impl fmt::Display for FormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.form, if self.holds { "holds" } else { "fails" })?;
        for v in &self.violations {
            write!(
                f,
                "\n  clause {}: condition {}: {}",
                v.clause + 1,
                v.condition,
                v.detail
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("no mode directive for predicate {0}")]
    MissingMode(PredKey),
}

/// A clause seen as `p(s_0, s_n') :- q_1(s_0', s_1), ..., q_n(s_{n-1}', s_n)`:
/// `ins[i]` is `s_i`, `outs[i]` is `s_i'`.
pub(crate) struct Relay {
    pub(crate) ins: Vec<Term>,
    pub(crate) outs: Vec<Term>,
}

impl Relay {
    pub(crate) fn new(clause: &SourceClause, split: impl Fn(&Term) -> (Term, Term)) -> Relay {
        let (h_in, h_out) = split(&clause.head);
        let mut ins = vec![h_in];
        let mut outs = Vec::new();
        for b in &clause.body {
            let (i, o) = split(b);
            outs.push(i);
            ins.push(o);
        }
        outs.push(h_out);
        Relay { ins, outs }
    }

    /// Condition 2: the `s_i` have pairwise disjoint variables.
    fn disjointness(&self, clause: usize, out: &mut Vec<Violation>) {
        let sets: Vec<IndexSet<Var>> = self.ins.iter().map(|t| t.vars()).collect();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let shared: Vec<&Var> = sets[i].intersection(&sets[j]).collect();
                if !shared.is_empty() {
                    out.push(Violation {
                        clause,
                        condition: 2,
                        detail: format!("{} and {} share {}", self.ins[i], self.ins[j], var_list(&shared)),
                    });
                }
            }
        }
    }
}

fn var_list(vs: &[&Var]) -> String {
    let names: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", names.join(","))
}

/// Checks the two moded conditions on every clause, after grouping each
/// atom's arguments into input and output tuples.
pub fn check_moded(p: &SourceProgram) -> Result<FormReport, FormError> {
    for pred in p.predicates() {
        if p.mode_of(&pred).is_none() {
            return Err(FormError::MissingMode(pred));
        }
    }
    let split = |a: &Term| {
        let m = p.mode_of(&PredKey::of(a).expect("atom")).expect("checked above");
        (m.input_tuple(a), m.output_tuple(a))
    };
    let mut violations = Vec::new();
    for (idx, c) in p.clauses.iter().enumerate() {
        let r = Relay::new(c, split);
        let mut seen = IndexSet::new();
        for i in 0..r.ins.len() {
            r.ins[i].collect_vars(&mut seen);
            let missing: Vec<Var> = r.outs[i].vars().into_iter().filter(|v| !seen.contains(v)).collect();
            if !missing.is_empty() {
                let refs: Vec<&Var> = missing.iter().collect();
                violations.push(Violation {
                    clause: idx,
                    condition: 1,
                    detail: format!("{} uses {} before it is produced", r.outs[i], var_list(&refs)),
                });
            }
        }
        r.disjointness(idx, &mut violations);
    }
    Ok(FormReport::new(Form::Moded, violations))
}

fn binary_violations(p: &SourceProgram, out: &mut Vec<Violation>) -> Vec<bool> {
    p.clauses
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let bad: Vec<String> = c.atoms().filter(|a| a.arity() != 2).map(|a| a.to_string()).collect();
            if !bad.is_empty() {
                out.push(Violation {
                    clause: idx,
                    condition: 0,
                    detail: format!("non-binary atoms: {}", bad.join(", ")),
                });
            }
            bad.is_empty()
        })
        .collect()
}

fn chain_violation(c: &SourceClause) -> Option<String> {
    let head = c.head.args();
    let mut xs: Vec<&Var> = Vec::new();
    let Some(x0) = head[0].as_var() else {
        return Some(format!("head input {} is not a variable", head[0]));
    };
    xs.push(x0);
    for (i, b) in c.body.iter().enumerate() {
        let args = b.args();
        if args[0].as_var() != Some(xs[i]) {
            return Some(format!("atom {} does not continue from {}", b, xs[i]));
        }
        let Some(next) = args[1].as_var() else {
            return Some(format!("atom {} has a non-variable output", b));
        };
        if xs.contains(&next) {
            return Some(format!("variable {next} repeats in the chain"));
        }
        xs.push(next);
    }
    if head[1].as_var() != xs.last().copied() {
        return Some(format!("head output {} is not the last chain variable", head[1]));
    }
    None
}

fn chain_checks(p: &SourceProgram, form: Form) -> FormReport {
    let mut violations = Vec::new();
    let binary = binary_violations(p, &mut violations);
    for (idx, c) in p.clauses.iter().enumerate() {
        if !binary[idx] {
            continue;
        }
        if c.is_unit() {
            if form == Form::GChain {
                let input = c.head.args()[0].vars();
                let extra: Vec<Var> = c.head.args()[1]
                    .vars()
                    .into_iter()
                    .filter(|v| !input.contains(v))
                    .collect();
                if !extra.is_empty() {
                    let refs: Vec<&Var> = extra.iter().collect();
                    violations.push(Violation {
                        clause: idx,
                        condition: 3,
                        detail: format!("output variables {} do not occur in the input", var_list(&refs)),
                    });
                }
            }
        } else if let Some(detail) = chain_violation(c) {
            violations.push(Violation {
                clause: idx,
                condition: 1,
                detail,
            });
        }
    }
    FormReport::new(form, violations)
}

/// Every clause is a threaded chain `p(X0,Xn) :- q1(X0,X1), ..., qn(X_{n-1},Xn)`
/// over distinct variables, or a binary unit clause.
pub fn check_chain(p: &SourceProgram) -> FormReport {
    chain_checks(p, Form::Chain)
}

/// Chain form, and every unit clause `p(t,t')` has `var(t') ⊆ var(t)`.
pub fn check_gchain(p: &SourceProgram) -> FormReport {
    chain_checks(p, Form::GChain)
}

/// Checks both prechain conditions. Atoms of predicates with a mode
/// directive are grouped by it; all others must be binary.
pub fn check_prechain(p: &SourceProgram) -> FormReport {
    let mut violations = Vec::new();
    for (idx, c) in p.clauses.iter().enumerate() {
        let ungroupable: Vec<String> = c
            .atoms()
            .filter(|a| {
                let key = PredKey::of(a).expect("atom");
                p.mode_of(&key).is_none() && a.arity() != 2
            })
            .map(|a| a.to_string())
            .collect();
        if !ungroupable.is_empty() {
            violations.push(Violation {
                clause: idx,
                condition: 0,
                detail: format!("non-binary atoms without modes: {}", ungroupable.join(", ")),
            });
            continue;
        }
        let r = Relay::new(c, |a| match p.mode_of(&PredKey::of(a).expect("atom")) {
            Some(m) => (m.input_tuple(a), m.output_tuple(a)),
            None => (a.args()[0].clone(), a.args()[1].clone()),
        });
        for i in 0..r.ins.len() {
            let own = r.ins[i].vars();
            let extra: Vec<Var> = r.outs[i].vars().into_iter().filter(|v| !own.contains(v)).collect();
            if !extra.is_empty() {
                let refs: Vec<&Var> = extra.iter().collect();
                violations.push(Violation {
                    clause: idx,
                    condition: 1,
                    detail: format!("{} has {} not in {}", r.outs[i], var_list(&refs), r.ins[i]),
                });
            }
        }
        r.disjointness(idx, &mut violations);
    }
    FormReport::new(Form::Prechain, violations)
}

/// Runs one form check on a source program.
pub fn check(p: &SourceProgram, form: Form) -> Result<FormReport, FormError> {
    match form {
        Form::Moded => check_moded(p),
        Form::Chain => Ok(check_chain(p)),
        Form::GChain => Ok(check_gchain(p)),
        Form::Prechain => Ok(check_prechain(p)),
    }
}

pub fn check_chain_program(p: &ChainProgram) -> FormReport {
    check_chain(&p.to_source_program())
}

pub fn check_gchain_program(p: &ChainProgram) -> FormReport {
    check_gchain(&p.to_source_program())
}
