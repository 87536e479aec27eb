//! Chain programs and the object-program registry the engines run on.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::forms::{check_chain, FormReport};
use crate::syntax::{clause_var_names, ModeDirective, PredKey, SourceClause, SourceProgram};
use crate::terms::{Term, Var};

/// Predicate or clause-label name.
pub type Name = Arc<str>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainClause {
    /// `head(X0,Xn) :- body[0](X0,X1), ..., body[n-1](X_{n-1},Xn)`.
    NonUnit { head: Name, body: Vec<Name> },
    /// `pred(input, output).`
    Unit { pred: Name, input: Term, output: Term },
}

impl ChainClause {
    pub fn predicate(&self) -> &Name {
        match self {
            ChainClause::NonUnit { head, .. } => head,
            ChainClause::Unit { pred, .. } => pred,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, ChainClause::Unit { .. })
    }

    /// Ordinary clause form; nonunit clauses get fresh `X0..Xn`.
    pub fn to_source(&self) -> SourceClause {
        match self {
            ChainClause::NonUnit { head, body } => {
                let xs: Vec<Term> = (0..=body.len()).map(|i| Var::fresh(&format!("X{i}")).into()).collect();
                let atoms = body
                    .iter()
                    .enumerate()
                    .map(|(i, q)| Term::compound(q, vec![xs[i].clone(), xs[i + 1].clone()]))
                    .collect();
                let head = Term::compound(head, vec![xs[0].clone(), xs[body.len()].clone()]);
                SourceClause::new(head, atoms)
            }
            ChainClause::Unit { pred, input, output } => {
                SourceClause::new(Term::compound(pred, vec![input.clone(), output.clone()]), vec![])
            }
        }
    }

    /// Reads a clause that is already in chain form.
    fn from_source(c: &SourceClause) -> ChainClause {
        let pred: Name = c.predicate().name;
        if c.is_unit() {
            let args = c.head.args();
            return ChainClause::Unit {
                pred,
                input: args[0].clone(),
                output: args[1].clone(),
            };
        }
        ChainClause::NonUnit {
            head: pred,
            body: c.body.iter().map(|b| PredKey::of(b).expect("atom").name).collect(),
        }
    }
}

/// What a chain clause was generated from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// The hat clause itself (or a source clause read as-is).
    Main,
    /// The `h_j` unit clause.
    H(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// 0-based index of the source clause.
    pub source_clause: usize,
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransformMode {
    Moded,
    Definite,
}

impl fmt::Display for TransformMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformMode::Moded => "moded",
            TransformMode::Definite => "definite",
        })
    }
}

/// Hat predicate standing for a source predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub hat: Name,
    /// Present for moded programs.
    pub modes: Option<ModeDirective>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainProgram {
    pub clauses: Vec<ChainClause>,
    /// Parallel to `clauses`.
    pub provenance: Vec<Provenance>,
    pub entry: IndexMap<PredKey, Entry>,
    /// Predicates with an empty definition.
    pub declared: Vec<Name>,
    pub kind: Option<TransformMode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("program is not in chain form:\n{0}")]
    NotChain(FormReport),
    #[error("predicate `{0}` is called but never defined")]
    Undefined(String),
}

impl ChainProgram {
    /// Reads a source program that is already in chain form. Each predicate
    /// is its own entry.
    pub fn from_source(p: &SourceProgram) -> Result<ChainProgram, ChainError> {
        let report = check_chain(p);
        if !report.holds {
            return Err(ChainError::NotChain(report));
        }
        let mut out = ChainProgram::default();
        for (i, c) in p.clauses.iter().enumerate() {
            out.clauses.push(ChainClause::from_source(c));
            out.provenance.push(Provenance {
                source_clause: i,
                role: Role::Main,
            });
        }
        for pred in p.defined_predicates() {
            let hat = pred.name.clone();
            out.entry.insert(pred, Entry { hat, modes: None });
        }
        out.declared = p.empty_defns.clone();
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn to_source_program(&self) -> SourceProgram {
        SourceProgram {
            name: String::new(),
            clauses: self.clauses.iter().map(ChainClause::to_source).collect(),
            modes: Vec::new(),
            empty_defns: self.declared.clone(),
        }
    }

    /// Hat predicates: the ones whose relations keep the stack unchanged.
    pub fn hat_predicates(&self) -> IndexSet<Name> {
        self.entry.values().map(|e| e.hat.clone()).collect()
    }
}

/// Object-program tables: `Defn`, `nonunit`, `unit` and `isunit`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    pub defn: IndexMap<Name, Vec<Name>>,
    pub nonunit: IndexMap<Name, Arc<[Name]>>,
    pub unit: IndexMap<Name, (Term, Term)>,
    pub isunit: IndexSet<Name>,
    /// Predicates known to preserve the stack component.
    pub hats: IndexSet<Name>,
}

impl Registry {
    /// Alternatives of `q`, or `None` if `q` is not defined at all.
    pub fn alternatives(&self, q: &str) -> Option<&[Name]> {
        self.defn.get(q).map(|v| v.as_slice())
    }

    pub fn is_hat(&self, q: &str) -> bool {
        self.hats.contains(q)
    }

    /// True iff every unit clause `(t,t')` has `var(t') ⊆ var(t)`.
    pub fn is_gchain(&self) -> bool {
        self.unit.values().all(|(t, t2)| {
            let v = t.vars();
            t2.vars().iter().all(|x| v.contains(x))
        })
    }

    /// Chain clauses in `Defn` order.
    pub fn decompile(&self) -> Vec<ChainClause> {
        let mut out = Vec::new();
        for (q, labels) in &self.defn {
            for l in labels {
                if let Some((t, t2)) = self.unit.get(l) {
                    out.push(ChainClause::Unit {
                        pred: q.clone(),
                        input: t.clone(),
                        output: t2.clone(),
                    });
                } else if let Some(body) = self.nonunit.get(l) {
                    out.push(ChainClause::NonUnit {
                        head: q.clone(),
                        body: body.to_vec(),
                    });
                }
            }
        }
        out
    }

    /// One fact per line: `defn`, then `nonunit`, `unit` and `isunit`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (q, labels) in &self.defn {
            let _ = writeln!(s, "defn({q},[{}]).", join(labels));
        }
        for (l, body) in &self.nonunit {
            let _ = writeln!(s, "nonunit({l},[{}]).", join(body));
        }
        for (l, (t, t2)) in &self.unit {
            let names = clause_var_names([t, t2]);
            let _ = writeln!(s, "unit({l},{},{}).", t.display_with(&names), t2.display_with(&names));
        }
        for l in &self.isunit {
            let _ = writeln!(s, "isunit({l}).");
        }
        s
    }
}

fn join(names: &[Name]) -> String {
    names.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
}

/// Builds the registry. Labels are `pred_j`, `j` counting from 1 within
/// each definition in clause order.
pub fn compile_to_registry(p: &ChainProgram) -> Result<Registry, ChainError> {
    let mut reg = Registry::default();
    for d in &p.declared {
        reg.defn.entry(d.clone()).or_default();
    }
    for c in &p.clauses {
        let q = c.predicate();
        let labels = reg.defn.entry(q.clone()).or_default();
        let label: Name = Arc::from(format!("{q}_{}", labels.len() + 1));
        labels.push(label.clone());
        match c {
            ChainClause::NonUnit { body, .. } => {
                reg.nonunit.insert(label, Arc::from(body.as_slice()));
            }
            ChainClause::Unit { input, output, .. } => {
                reg.unit.insert(label.clone(), (input.clone(), output.clone()));
                reg.isunit.insert(label);
            }
        }
    }
    for body in reg.nonunit.values() {
        if let Some(q) = body.iter().find(|q| !reg.defn.contains_key(&***q)) {
            return Err(ChainError::Undefined(q.to_string()));
        }
    }
    reg.hats = p
        .hat_predicates()
        .into_iter()
        .filter(|h| reg.defn.contains_key(h))
        .collect();
    if p.kind.is_none() {
        reg.hats.clear();
    }
    Ok(reg)
}
