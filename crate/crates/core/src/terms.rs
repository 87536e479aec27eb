//! Term algebra: variables, constants, compounds, substitutions, unification,
//! one-way matching and renaming apart.
//!
//! Terms are immutable and cheap to clone (compound arguments live behind an
//! `Arc`), so they can be shared freely between threads. The only mutable
//! global is the serial counter used to mint fresh variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use indexmap::IndexSet;

/// Functor of tuple terms `<a1,...,ak>`.
pub const TUPLE: &str = "tuple";
/// Functor of list cells `[H|T]`.
pub const CONS: &str = "cons";
/// The empty list.
pub const NIL: &str = "nil";

static NEXT_SERIAL: AtomicU64 = AtomicU64::new(1);

fn next_serial() -> u64 {
    NEXT_SERIAL.fetch_add(1, Ordering::Relaxed)
}

/// A logic variable. Identity is the serial; the name is only a display hint.
#[derive(Clone)]
pub struct Var {
    name: Arc<str>,
    serial: u64,
}

impl Var {
    /// Mints a variable with a globally unique serial.
    pub fn fresh(name: &str) -> Var {
        Var {
            name: Arc::from(name),
            serial: next_serial(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn serial(&self) -> u64 {
        self.serial
    }

    fn renamed(&self) -> Var {
        let serial = next_serial();
        Var {
            name: Arc::from(format!("_{serial}")),
            serial,
        }
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.serial == other.serial
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.serial.hash(state);
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.serial.cmp(&other.serial)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.name, self.serial)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.name.is_empty() || &*self.name == "_" {
            write!(f, "_G{}", self.serial)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// First-order term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Atom(Arc<str>),
    Int(i64),
    /// Functor and arguments. Only tuples may have zero arguments.
    Compound(Arc<str>, Arc<[Term]>),
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    pub fn atom(name: &str) -> Term {
        Term::Atom(Arc::from(name))
    }

    pub fn int(n: i64) -> Term {
        Term::Int(n)
    }

    /// Builds `functor(args...)`; an empty argument list yields an atom,
    /// except for tuples.
    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        if args.is_empty() && functor != TUPLE {
            Term::atom(functor)
        } else {
            Term::Compound(Arc::from(functor), Arc::from(args))
        }
    }

    pub fn tuple(args: Vec<Term>) -> Term {
        Term::Compound(Arc::from(TUPLE), Arc::from(args))
    }

    pub fn nil() -> Term {
        Term::atom(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Compound(Arc::from(CONS), Arc::from(vec![head, tail]))
    }

    /// `[items... | tail]`
    pub fn list_with_tail(items: Vec<Term>, tail: Term) -> Term {
        items.into_iter().rev().fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn list(items: Vec<Term>) -> Term {
        Term::list_with_tail(items, Term::nil())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Term::Atom(a) if &**a == NIL)
    }

    pub fn functor(&self) -> Option<&str> {
        match self {
            Term::Atom(a) => Some(a),
            Term::Compound(f, _) => Some(f),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, args) => args,
            _ => &[],
        }
    }

    pub fn arity(&self) -> usize {
        self.args().len()
    }

    pub fn is_tuple(&self) -> bool {
        matches!(self, Term::Compound(f, _) if &**f == TUPLE)
    }

    /// Arguments of a tuple term.
    pub fn tuple_args(&self) -> Option<&[Term]> {
        match self {
            Term::Compound(f, args) if &**f == TUPLE => Some(args),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Atom(_) | Term::Int(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Variables in first-occurrence order.
    pub fn vars(&self) -> IndexSet<Var> {
        let mut out = IndexSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut IndexSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Atom(_) | Term::Int(_) => {}
            Term::Compound(_, args) => {
                for a in args.iter() {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Atom(_) | Term::Int(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    /// Elements and tail of a list spine.
    pub fn list_parts(&self) -> (Vec<&Term>, &Term) {
        let mut items = Vec::new();
        let mut cur = self;
        while let Term::Compound(f, args) = cur {
            if &**f != CONS || args.len() != 2 {
                break;
            }
            items.push(&args[0]);
            cur = &args[1];
        }
        (items, cur)
    }

    /// Canonical text where variables are numbered by first occurrence.
    /// Two terms are alpha-equivalent iff their keys are equal.
    pub fn variant_key(&self) -> String {
        let mut names = HashMap::new();
        let mut out = String::new();
        self.write_canonical(&mut names, &mut out);
        out
    }

    fn write_canonical(&self, names: &mut HashMap<u64, usize>, out: &mut String) {
        match self {
            Term::Var(v) => {
                let next = names.len();
                let n = *names.entry(v.serial).or_insert(next);
                out.push_str(&format!("_V{n}"));
            }
            Term::Atom(a) => out.push_str(a),
            Term::Int(n) => out.push_str(&n.to_string()),
            Term::Compound(f, args) => {
                out.push_str(f);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    a.write_canonical(names, out);
                }
                out.push(')');
            }
        }
    }

    fn write_with(&self, f: &mut fmt::Formatter<'_>, name: &dyn Fn(&Var) -> String) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&name(v)),
            Term::Atom(a) => f.write_str(a),
            Term::Int(n) => write!(f, "{n}"),
            Term::Compound(func, args) if &**func == TUPLE => {
                f.write_str("<")?;
                write_args(f, args, name)?;
                f.write_str(">")
            }
            Term::Compound(func, args) if &**func == CONS && args.len() == 2 => {
                let (items, tail) = self.list_parts();
                f.write_str("[")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    item.write_with(f, name)?;
                }
                if !tail.is_nil() {
                    f.write_str("|")?;
                    tail.write_with(f, name)?;
                }
                f.write_str("]")
            }
            Term::Compound(func, args) => {
                f.write_str(func)?;
                f.write_str("(")?;
                write_args(f, args, name)?;
                f.write_str(")")
            }
        }
    }

    /// Display adaptor that names variables through `names`, falling back
    /// to each variable's own display name.
    pub fn display_with<'a>(&'a self, names: &'a HashMap<Var, String>) -> impl fmt::Display + 'a {
        NamedTerm { term: self, names }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term], name: &dyn Fn(&Var) -> String) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        a.write_with(f, name)?;
    }
    Ok(())
}

struct NamedTerm<'a> {
    term: &'a Term,
    names: &'a HashMap<Var, String>,
}

impl fmt::Display for NamedTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.term
            .write_with(f, &|v| self.names.get(v).cloned().unwrap_or_else(|| v.to_string()))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|v| v.to_string())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|v| format!("{v:?}"))
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

/// Finite map from variables to terms, kept idempotent by the operations
/// in this module.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Substitution {
        Substitution {
            bindings: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.bindings.get(v)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.bindings.keys()
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        apply_map(t, &|v| self.bindings.get(v).cloned())
    }

    /// Restricts the domain to `vars`.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Substitution {
        Substitution::from_pairs(
            vars.into_iter()
                .filter_map(|v| self.bindings.get(v).map(|t| (v.clone(), t.clone()))),
        )
    }

    pub fn is_idempotent(&self) -> bool {
        self.bindings
            .values()
            .all(|t| self.bindings.keys().all(|v| !t.occurs(v)))
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v:?} -> {t:?}")?;
        }
        f.write_str("}")
    }
}

fn apply_map(t: &Term, lookup: &dyn Fn(&Var) -> Option<Term>) -> Term {
    match t {
        Term::Var(v) => lookup(v).unwrap_or_else(|| t.clone()),
        Term::Atom(_) | Term::Int(_) => t.clone(),
        Term::Compound(f, args) => {
            if t.is_ground() {
                return t.clone();
            }
            let new: Vec<Term> = args.iter().map(|a| apply_map(a, lookup)).collect();
            Term::Compound(f.clone(), Arc::from(new))
        }
    }
}

/// Structural replacement of the variables bound in `sub`.
pub fn apply(sub: &Substitution, t: &Term) -> Term {
    sub.apply(t)
}

/// Variables of `t` in first-occurrence order.
pub fn vars(t: &Term) -> IndexSet<Var> {
    t.vars()
}

fn walk<'a>(t: &'a Term, bind: &'a HashMap<Var, Term>) -> &'a Term {
    let mut cur = t;
    while let Term::Var(v) = cur {
        match bind.get(v) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

fn occurs_walk(v: &Var, t: &Term, bind: &HashMap<Var, Term>) -> bool {
    match walk(t, bind) {
        Term::Var(w) => w == v,
        Term::Atom(_) | Term::Int(_) => false,
        Term::Compound(_, args) => args.iter().any(|a| occurs_walk(v, a, bind)),
    }
}

fn resolve(t: &Term, bind: &HashMap<Var, Term>) -> Term {
    match walk(t, bind) {
        Term::Compound(f, args) => {
            let new: Vec<Term> = args.iter().map(|a| resolve(a, bind)).collect();
            Term::Compound(f.clone(), Arc::from(new))
        }
        other => other.clone(),
    }
}

/// Most general unifier with occurs check, or `None` if the terms do not
/// unify. The result is idempotent.
pub fn unify(a: &Term, b: &Term) -> Option<Substitution> {
    let mut bind: HashMap<Var, Term> = HashMap::new();
    let mut pending: Vec<(Term, Term)> = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = pending.pop() {
        let x = walk(&x, &bind).clone();
        let y = walk(&y, &bind).clone();
        match (&x, &y) {
            (Term::Var(v), Term::Var(w)) if v == w => {}
            (Term::Var(v), other) | (other, Term::Var(v)) => {
                if occurs_walk(v, other, &bind) {
                    return None;
                }
                bind.insert(v.clone(), other.clone());
            }
            (Term::Atom(p), Term::Atom(q)) if p == q => {}
            (Term::Int(p), Term::Int(q)) if p == q => {}
            (Term::Compound(f, xs), Term::Compound(g, ys)) if f == g && xs.len() == ys.len() => {
                for (s, t) in xs.iter().zip(ys.iter()).rev() {
                    pending.push((s.clone(), t.clone()));
                }
            }
            _ => return None,
        }
    }
    let resolved = bind
        .keys()
        .map(|v| (v.clone(), resolve(&Term::Var(v.clone()), &bind)))
        .collect::<Vec<_>>();
    Some(Substitution::from_pairs(resolved))
}

/// One-way unification: binds only variables of `pattern` so that
/// `pattern` under the result equals `subject`. Variables of `subject` are
/// treated as constants.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut bind: HashMap<Var, Term> = HashMap::new();
    if match_into(pattern, subject, &mut bind) {
        Some(Substitution::from_pairs(
            bind.into_iter().filter(|(v, t)| t.as_var() != Some(v)),
        ))
    } else {
        None
    }
}

fn match_into(pattern: &Term, subject: &Term, bind: &mut HashMap<Var, Term>) -> bool {
    match pattern {
        Term::Var(v) => match bind.get(v) {
            Some(prev) => prev == subject,
            None => {
                bind.insert(v.clone(), subject.clone());
                true
            }
        },
        Term::Atom(_) | Term::Int(_) => pattern == subject,
        Term::Compound(f, xs) => match subject {
            Term::Compound(g, ys) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys.iter()).all(|(x, y)| match_into(x, y, bind))
            }
            _ => false,
        },
    }
}

/// Renames `t` with fresh variables. Fresh serials are never reused, so the
/// result is disjoint from `avoid` and from every variable issued before.
pub fn rename_apart(t: &Term, avoid: &IndexSet<Var>) -> Term {
    let out = rename_apart_all(std::slice::from_ref(t))
        .pop()
        .expect("one term in, one out");
    debug_assert!(out.vars().iter().all(|v| !avoid.contains(v)));
    out
}

/// Renames several terms with one consistent renaming, so shared variables
/// stay shared.
pub fn rename_apart_all(ts: &[Term]) -> Vec<Term> {
    let mut map: HashMap<Var, Var> = HashMap::new();
    ts.iter().map(|t| rename_with(t, &mut map)).collect()
}

fn rename_with(t: &Term, map: &mut HashMap<Var, Var>) -> Term {
    match t {
        Term::Var(v) => Term::Var(map.entry(v.clone()).or_insert_with(|| v.renamed()).clone()),
        Term::Atom(_) | Term::Int(_) => t.clone(),
        Term::Compound(f, args) => {
            if t.is_ground() {
                return t.clone();
            }
            let new: Vec<Term> = args.iter().map(|a| rename_with(a, map)).collect();
            Term::Compound(f.clone(), Arc::from(new))
        }
    }
}

/// Alpha-equivalence: equal up to a bijective renaming of variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a.variant_key() == b.variant_key()
}
