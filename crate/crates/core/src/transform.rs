//! The two transformations into chain form, and goal compilation.
//!
//! Every source clause `p(...) :- q1(...), ..., qn(...)` becomes a chain
//! clause `p_hat :- h0, q1_hat, h1, ..., qn_hat, hn` plus the `n+1` unit
//! clauses defining the `h` predicates. A unit source clause becomes one
//! hat unit clause. Pass-on variables travel in a stack held as the first
//! component of every tuple.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::chainir::{ChainClause, ChainProgram, Entry, Name, Provenance, Role, TransformMode};
use crate::forms::{check_moded, FormError, FormReport, Relay};
use crate::syntax::{ModeDirective, PredKey, SourceClause, SourceProgram};
use crate::terms::{unify, Term, Var};

/// Values of a goal's variables in one answer.
pub type Bindings = IndexMap<Var, Term>;

/// Pass-on sets of one clause and the stack terms built from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassOnProfile {
    /// `Π_0..Π_{n+1}` (moded) or the single `Π` (definite).
    pub pi: Vec<IndexSet<Var>>,
    /// `Σ_j` for each `Π_j`: its variables consed onto `st`.
    pub sigma: Vec<Term>,
    /// Stack tail shared by every `Σ_j` of the clause.
    pub st: Var,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Modes(#[from] FormError),
    #[error("program is not moded:\n{0}")]
    NotModed(FormReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoalError {
    #[error("unknown predicate {0}")]
    UnknownPredicate(PredKey),
    #[error("input arguments of {0} must be ground in moded mode")]
    NonGroundInput(String),
    #[error("predicate {0} has no mode directive")]
    NoModes(PredKey),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("answer {0} is not a stack tuple")]
    Malformed(Term),
    #[error("answer {0} has a non-empty stack")]
    StackNotEmpty(Term),
}

/// Variables of `pi` in first-occurrence order over the clause.
fn ordered(c: &SourceClause, pi: &IndexSet<Var>) -> Vec<Term> {
    c.vars().into_iter().filter(|v| pi.contains(v)).map(Term::Var).collect()
}

fn stack(c: &SourceClause, pi: &IndexSet<Var>, st: &Var) -> Term {
    Term::list_with_tail(ordered(c, pi), Term::Var(st.clone()))
}

/// `<sigma|t>` for a tuple `t`.
fn push_stack(sigma: &Term, t: &Term) -> Term {
    let mut args = vec![sigma.clone()];
    args.extend(t.tuple_args().expect("tuple").iter().cloned());
    Term::tuple(args)
}

fn union_vars<'a>(ts: impl IntoIterator<Item = &'a Term>) -> IndexSet<Var> {
    let mut out = IndexSet::new();
    for t in ts {
        t.collect_vars(&mut out);
    }
    out
}

fn mode_split<'a>(modes: &'a [ModeDirective]) -> impl Fn(&Term) -> (Term, Term) + 'a {
    move |a: &Term| {
        let key = PredKey::of(a).expect("atom");
        match modes.iter().find(|m| m.predicate == key) {
            Some(m) => (m.input_tuple(a), m.output_tuple(a)),
            None => (Term::tuple(a.args().to_vec()), Term::tuple(vec![])),
        }
    }
}

/// `Π_j = (var(t_0) ∪ … ∪ var(t_{j-1})) ∩ (var(t_j') ∪ … ∪ var(t_n'))` for
/// `j = 0..=n+1`.
pub fn pass_on_sets_moded(c: &SourceClause, modes: &[ModeDirective]) -> PassOnProfile {
    let r = Relay::new(c, mode_split(modes));
    let n = c.body.len();
    let st = Var::fresh("St");
    let mut pi = Vec::with_capacity(n + 2);
    for j in 0..=n + 1 {
        let before = union_vars(&r.ins[..j]);
        let after = union_vars(&r.outs[j..]);
        pi.push(before.intersection(&after).cloned().collect::<IndexSet<Var>>());
    }
    let sigma = pi.iter().map(|p| stack(c, p, &st)).collect();
    PassOnProfile { pi, sigma, st }
}

/// `Π = (var(t_0) ∪ … ∪ var(t_n)) \ (var(t_0) ∩ … ∩ var(t_n))` over the full
/// argument tuples of the head and body atoms.
pub fn pass_on_set_definite(c: &SourceClause) -> PassOnProfile {
    let sets: Vec<IndexSet<Var>> = c.atoms().map(|a| a.vars()).collect();
    let all = union_vars(c.atoms());
    let pi: IndexSet<Var> = all
        .into_iter()
        .filter(|v| !sets.iter().all(|s| s.contains(v)))
        .collect();
    let st = Var::fresh("St");
    let sigma = vec![stack(c, &pi, &st)];
    PassOnProfile {
        pi: vec![pi],
        sigma,
        st,
    }
}

struct Namer {
    used: HashSet<String>,
}

impl Namer {
    fn new(p: &SourceProgram) -> Namer {
        let mut used: HashSet<String> = p.predicates().iter().map(|k| k.name.to_string()).collect();
        used.extend(p.empty_defns.iter().map(|d| d.to_string()));
        Namer { used }
    }

    fn fresh(&mut self, base: &str) -> Name {
        let mut cand = base.to_string();
        let mut k = 2;
        while self.used.contains(&cand) {
            cand = format!("{base}{k}");
            k += 1;
        }
        self.used.insert(cand.clone());
        Arc::from(cand)
    }
}

/// Hat name for every predicate of `p`, in first-occurrence order.
fn hat_names(p: &SourceProgram, namer: &mut Namer) -> IndexMap<PredKey, Name> {
    let preds = p.predicates();
    let mut arities: HashMap<&str, usize> = HashMap::new();
    for k in &preds {
        *arities.entry(&k.name).or_default() += 1;
    }
    preds
        .iter()
        .map(|k| {
            let base = if arities[&*k.name] > 1 {
                format!("{}_{}_hat", k.name, k.arity)
            } else {
                format!("{}_hat", k.name)
            };
            (k.clone(), namer.fresh(&base))
        })
        .collect()
}

struct Builder {
    out: ChainProgram,
    hats: IndexMap<PredKey, Name>,
    namer: Namer,
}

impl Builder {
    fn new(p: &SourceProgram, kind: TransformMode) -> Builder {
        let mut namer = Namer::new(p);
        let hats = hat_names(p, &mut namer);
        let mut out = ChainProgram {
            kind: Some(kind),
            ..ChainProgram::default()
        };
        let defined: IndexSet<PredKey> = p.defined_predicates().into_iter().collect();
        for (k, hat) in &hats {
            let modes = match kind {
                TransformMode::Moded => p.mode_of(k).cloned(),
                TransformMode::Definite => None,
            };
            out.entry.insert(
                k.clone(),
                Entry {
                    hat: hat.clone(),
                    modes,
                },
            );
            if !defined.contains(k) {
                out.declared.push(hat.clone());
            }
        }
        Builder { out, hats, namer }
    }

    fn hat(&self, atom: &Term) -> Name {
        self.hats[&PredKey::of(atom).expect("atom")].clone()
    }

    fn push(&mut self, clause: ChainClause, source_clause: usize, role: Role) {
        self.out.clauses.push(clause);
        self.out.provenance.push(Provenance { source_clause, role });
    }

    /// Emits the chain clause and its `h` units, given `(input, output)` of
    /// each `h_j`.
    fn nonunit(&mut self, idx: usize, c: &SourceClause, hs: Vec<(Term, Term)>) {
        let names: Vec<Name> = (0..hs.len())
            .map(|j| self.namer.fresh(&format!("h_{}_{j}", idx + 1)))
            .collect();
        let mut body = vec![names[0].clone()];
        for (i, b) in c.body.iter().enumerate() {
            body.push(self.hat(b));
            body.push(names[i + 1].clone());
        }
        let head = self.hat(&c.head);
        self.push(ChainClause::NonUnit { head, body }, idx, Role::Main);
        for (j, (input, output)) in hs.into_iter().enumerate() {
            let unit = ChainClause::Unit {
                pred: names[j].clone(),
                input,
                output,
            };
            self.push(unit, idx, Role::H(j));
        }
    }
}

/// Moded transformation. The result is a G-chain program.
pub fn transform_moded(p: &SourceProgram) -> Result<ChainProgram, TransformError> {
    let report = check_moded(p)?;
    if !report.holds {
        return Err(TransformError::NotModed(report));
    }
    let mut b = Builder::new(p, TransformMode::Moded);
    for (idx, c) in p.clauses.iter().enumerate() {
        let r = Relay::new(c, mode_split(&p.modes));
        if c.is_unit() {
            let st = Term::Var(Var::fresh("St"));
            let unit = ChainClause::Unit {
                pred: b.hat(&c.head),
                input: push_stack(&st, &r.ins[0]),
                output: push_stack(&st, &r.outs[0]),
            };
            b.push(unit, idx, Role::Main);
            continue;
        }
        let prof = pass_on_sets_moded(c, &p.modes);
        let hs = (0..=c.body.len())
            .map(|j| {
                (
                    push_stack(&prof.sigma[j], &r.ins[j]),
                    push_stack(&prof.sigma[j + 1], &r.outs[j]),
                )
            })
            .collect();
        b.nonunit(idx, c, hs);
    }
    Ok(b.out)
}

/// Definite transformation; applies to any definite program. The result
/// is a chain program, not necessarily G-chain.
pub fn transform_definite(p: &SourceProgram) -> ChainProgram {
    let mut b = Builder::new(p, TransformMode::Definite);
    for (idx, c) in p.clauses.iter().enumerate() {
        let ts: Vec<Term> = c.atoms().map(|a| Term::tuple(a.args().to_vec())).collect();
        if c.is_unit() {
            let st = Term::Var(Var::fresh("St"));
            let t = push_stack(&st, &ts[0]);
            let unit = ChainClause::Unit {
                pred: b.hat(&c.head),
                input: t.clone(),
                output: t,
            };
            b.push(unit, idx, Role::Main);
            continue;
        }
        let prof = pass_on_set_definite(c);
        let st = Term::Var(prof.st.clone());
        let sigma = &prof.sigma[0];
        let n = c.body.len();
        let mut hs = vec![(push_stack(&st, &ts[0]), push_stack(sigma, &ts[1]))];
        for i in 1..n {
            hs.push((push_stack(sigma, &ts[i]), push_stack(sigma, &ts[i + 1])));
        }
        hs.push((push_stack(sigma, &ts[n]), push_stack(&st, &ts[0])));
        b.nonunit(idx, c, hs);
    }
    b.out
}

/// Number of chain clauses the transformations produce for `p`: one per
/// unit clause, `n+2` per clause with `n` body atoms.
pub fn expected_clause_count(p: &SourceProgram) -> usize {
    p.clauses
        .iter()
        .map(|c| if c.is_unit() { 1 } else { c.body.len() + 2 })
        .sum()
}

/// Maps an answer term back to the goal's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoder {
    pub mode: TransformMode,
    /// Goal arguments that the answer's non-stack components must unify with.
    pub pattern: Term,
    pub vars: Vec<Var>,
}

impl Decoder {
    /// `Ok(None)` when the answer does not unify with the goal.
    pub fn decode(&self, answer: &Term) -> Result<Option<Bindings>, DecodeError> {
        let args = match answer.tuple_args() {
            Some(a) if !a.is_empty() => a,
            _ => return Err(DecodeError::Malformed(answer.clone())),
        };
        if !args[0].is_nil() {
            return Err(DecodeError::StackNotEmpty(answer.clone()));
        }
        let rest = Term::tuple(args[1..].to_vec());
        Ok(unify(&self.pattern, &rest).map(|s| {
            self.vars
                .iter()
                .map(|v| (v.clone(), s.apply(&Term::Var(v.clone()))))
                .collect()
        }))
    }
}

/// A goal ready for evaluation: start term, continuations and decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalPlan {
    pub initial: Term,
    pub continuations: Vec<Name>,
    pub decoder: Decoder,
}

impl GoalPlan {
    /// Decodes every answer, dropping those that do not fit the goal.
    pub fn decode_all(&self, answers: &[Term]) -> Result<Vec<Bindings>, DecodeError> {
        let mut out = Vec::new();
        for a in answers {
            if let Some(b) = self.decoder.decode(a)? {
                out.push(b);
            }
        }
        Ok(out)
    }
}

/// Moded goals start from `<[] | inputs>`, definite goals from
/// `<[] | all arguments>`.
pub fn compile_goal(g: &crate::syntax::Goal, t: &ChainProgram, mode: TransformMode) -> Result<GoalPlan, GoalError> {
    let key = g.predicate();
    let entry = t
        .entry
        .get(&key)
        .ok_or_else(|| GoalError::UnknownPredicate(key.clone()))?;
    let args = g.atom.args().to_vec();
    let (initial, pattern) = match mode {
        TransformMode::Moded => {
            let m = entry.modes.as_ref().ok_or_else(|| GoalError::NoModes(key.clone()))?;
            let input = m.input_tuple(&g.atom);
            if !input.is_ground() {
                return Err(GoalError::NonGroundInput(g.atom.to_string()));
            }
            (push_stack(&Term::nil(), &input), m.output_tuple(&g.atom))
        }
        TransformMode::Definite => {
            let all = Term::tuple(args);
            (push_stack(&Term::nil(), &all), all)
        }
    };
    Ok(GoalPlan {
        initial,
        continuations: vec![entry.hat.clone()],
        decoder: Decoder {
            mode,
            pattern,
            vars: g.vars(),
        },
    })
}

/// `X = a, Y = [b]`, or `true` for a goal without variables.
pub fn format_bindings(b: &Bindings) -> String {
    if b.is_empty() {
        return "true".to_string();
    }
    let mut s = String::new();
    for (i, (v, t)) in b.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{v} = {t}");
    }
    s
}
