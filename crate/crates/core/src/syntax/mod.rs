//! Concrete syntax for source programs, mode directives and goals.
//!
//! The format is a small Prolog subset: clauses end in `.`, `%` starts a
//! line comment, lists are written `[a,b|T]`, tuples `<a,b>`. Directives:
//!
//! ```text
//! :- mode(s, [in,out,out]).
//! :- defn(q_hat, []).
//! ```
//!
//! The second form declares a predicate with an empty definition.

mod lexer;
mod parser;
mod printer;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::terms::{Term, Var};

pub use parser::{parse_goal, parse_program};
pub use printer::{clause_var_names, print_clause, print_program, ProgramText};

/// Predicate symbol: name and arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredKey {
    pub name: Arc<str>,
    pub arity: usize,
}

impl PredKey {
    pub fn new(name: &str, arity: usize) -> PredKey {
        PredKey {
            name: Arc::from(name),
            arity,
        }
    }

    /// Predicate of an atom; `None` for variables and integers.
    pub fn of(atom: &Term) -> Option<PredKey> {
        match atom {
            Term::Atom(a) => Some(PredKey {
                name: a.clone(),
                arity: 0,
            }),
            Term::Compound(f, args) => Some(PredKey {
                name: f.clone(),
                arity: args.len(),
            }),
            _ => None,
        }
    }
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    In,
    Out,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::In => "in",
            Mode::Out => "out",
        })
    }
}

/// `:- mode(p, [in,out,...]).`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeDirective {
    pub predicate: PredKey,
    pub modes: Vec<Mode>,
}

impl ModeDirective {
    /// Splits an atom's arguments into its input and output groups, each in
    /// argument order.
    pub fn split<'t>(&self, args: &'t [Term]) -> (Vec<&'t Term>, Vec<&'t Term>) {
        let mut ins = Vec::new();
        let mut outs = Vec::new();
        for (m, a) in self.modes.iter().zip(args) {
            match m {
                Mode::In => ins.push(a),
                Mode::Out => outs.push(a),
            }
        }
        (ins, outs)
    }

    /// Input group of an atom as a tuple term.
    pub fn input_tuple(&self, atom: &Term) -> Term {
        Term::tuple(self.split(atom.args()).0.into_iter().cloned().collect())
    }

    /// Output group of an atom as a tuple term.
    pub fn output_tuple(&self, atom: &Term) -> Term {
        Term::tuple(self.split(atom.args()).1.into_iter().cloned().collect())
    }
}

/// `head :- body.` with an empty body for unit clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceClause {
    pub head: Term,
    pub body: Vec<Term>,
}

impl SourceClause {
    pub fn new(head: Term, body: Vec<Term>) -> SourceClause {
        SourceClause { head, body }
    }

    pub fn is_unit(&self) -> bool {
        self.body.is_empty()
    }

    pub fn predicate(&self) -> PredKey {
        PredKey::of(&self.head).expect("clause heads are compounds")
    }

    /// Head followed by the body atoms.
    pub fn atoms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.head).chain(self.body.iter())
    }

    /// Variables in first-occurrence order over the clause text.
    pub fn vars(&self) -> indexmap::IndexSet<Var> {
        let mut out = indexmap::IndexSet::new();
        for a in self.atoms() {
            a.collect_vars(&mut out);
        }
        out
    }

    /// Whole clause as one term, for alpha-equivalence checks.
    pub fn as_term(&self) -> Term {
        let mut parts = vec![self.head.clone()];
        parts.extend(self.body.iter().cloned());
        Term::compound("clause", parts)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceProgram {
    pub name: String,
    pub clauses: Vec<SourceClause>,
    pub modes: Vec<ModeDirective>,
    /// Predicates declared with an empty definition (`:- defn(p, []).`).
    pub empty_defns: Vec<Arc<str>>,
}

impl SourceProgram {
    pub fn new(name: &str, clauses: Vec<SourceClause>) -> SourceProgram {
        SourceProgram {
            name: name.to_string(),
            clauses,
            modes: Vec::new(),
            empty_defns: Vec::new(),
        }
    }

    pub fn mode_of(&self, pred: &PredKey) -> Option<&ModeDirective> {
        self.modes.iter().find(|m| &m.predicate == pred)
    }

    /// Predicates in first-occurrence order, heads and bodies alike.
    pub fn predicates(&self) -> Vec<PredKey> {
        let mut seen = indexmap::IndexSet::new();
        for c in &self.clauses {
            for a in c.atoms() {
                if let Some(p) = PredKey::of(a) {
                    seen.insert(p);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Predicates with at least one clause, in first-definition order.
    pub fn defined_predicates(&self) -> Vec<PredKey> {
        let mut seen = indexmap::IndexSet::new();
        for c in &self.clauses {
            seen.insert(c.predicate());
        }
        seen.into_iter().collect()
    }

    pub fn clauses_for<'a>(&'a self, pred: &'a PredKey) -> impl Iterator<Item = &'a SourceClause> + 'a {
        self.clauses.iter().filter(move |c| &c.predicate() == pred)
    }
}

/// A single-atom query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goal {
    pub atom: Term,
}

impl Goal {
    pub fn predicate(&self) -> PredKey {
        PredKey::of(&self.atom).expect("goal atoms are compounds or atoms")
    }

    /// Goal variables in first-occurrence order.
    pub fn vars(&self) -> Vec<Var> {
        self.atom.vars().into_iter().collect()
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate mode directive for `{name}` at line {line}")]
    DuplicateMode { name: String, line: usize },
    #[error("mode directive for `{name}` declares arity {declared} but it is used with arity {used}")]
    ModeArity { name: String, declared: usize, used: usize },
    #[error("conjunctive goals are not supported; give a single atom")]
    Conjunction,
}

impl ParseError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
