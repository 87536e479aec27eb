#![allow(dead_code)]

use std::path::PathBuf;

use chainform::chainir::{compile_to_registry, ChainProgram, Name, Registry, TransformMode};
use chainform::engines::{Interp, Unification};
use chainform::oracle::{canonical_answer, sld_solve};
use chainform::syntax::{parse_goal, parse_program, Goal, Mode, ModeDirective, PredKey, SourceClause, SourceProgram};
use chainform::terms::{match_term, rename_apart_all, unify, Term, Var};
use chainform::transform::{compile_goal, transform_definite, transform_moded, Bindings, GoalPlan};
use rand::Rng;

pub const ORACLE_DEPTH: usize = 10_000;

pub struct Fixture {
    pub name: &'static str,
    /// Goals run through the moded pipeline; empty for unmoded fixtures.
    pub moded_goals: &'static [&'static str],
    pub definite_goals: &'static [&'static str],
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "split",
        moded_goals: &[
            "s([a,b],Y,Z)",
            "s(nil,Y,Z)",
            "s([a],Y,Z)",
            "s([a,b,c],Y,Z)",
            "s([x,y,z,w],Y,Z)",
            "s([a,b],[a],Z)",
            "s([a,b],Y,[b])",
        ],
        definite_goals: &[
            "s([a,b],Y,Z)",
            "s(X,[a],[b])",
            "s(X,nil,[a])",
            "s([a,b,c],[a|T],Z)",
            "s(X,[a,b],nil)",
            "s([a],[b],Z)",
        ],
    },
    Fixture {
        name: "append",
        moded_goals: &[],
        definite_goals: &[
            "ap(X,Y,[a,b])",
            "ap([a],[b],Z)",
            "ap(X,[b],[a,b])",
            "ap([a,b],Y,[a,b,c])",
            "ap(X,Y,nil)",
            "ap([a|T],[c],[a,b,c])",
            "ap([a],Y,[b])",
        ],
    },
    Fixture {
        name: "nrev",
        moded_goals: &[
            "rev([a,b,c],R)",
            "rev(nil,R)",
            "rev([a],R)",
            "rev([a,b,c,d,e],R)",
            "rev([1,2],R)",
            "rev([a,b],[b,a])",
            "app([a],[b,c],Z)",
        ],
        definite_goals: &[
            "rev([a,b,c],R)",
            "rev(nil,R)",
            "rev([a,b],[a,b])",
            "app(X,Y,[a,b,c])",
            "rev([f(X),g(Y)],R)",
            "app([a],Y,Z)",
        ],
    },
    Fixture {
        name: "quicksort",
        moded_goals: &[
            "qs([s(s(0)),0,s(0)],nil,S)",
            "qs(nil,nil,S)",
            "qs([0],nil,S)",
            "qs([s(0),s(0),0],nil,S)",
            "qs([s(s(s(0))),s(0),s(s(0)),0],nil,S)",
            "qs([s(0),0],[z],S)",
            "part([0,s(s(0)),s(0)],s(0),A,B)",
            "le(s(0),s(s(0)))",
        ],
        definite_goals: &[
            "qs([s(0),0],nil,S)",
            "le(X,s(0))",
            "part([0,s(0)],0,A,B)",
            "qs(nil,R,S)",
            "le(s(0),0)",
            "qs([0,s(s(0)),s(0)],nil,S)",
        ],
    },
    Fixture {
        name: "member",
        moded_goals: &[
            "mem([a,b,c],X)",
            "mem(nil,X)",
            "mem([a],X)",
            "mem([a,a,b],X)",
            "mem([f(x),g(y)],X)",
            "mem([a,b],b)",
        ],
        definite_goals: &[
            "mem([a,b],b)",
            "mem([X,b],a)",
            "mem([a,b,c],X)",
            "mem(nil,X)",
            "mem([a,X],b)",
            "mem([X,Y],Z)",
        ],
    },
    Fixture {
        name: "perm",
        moded_goals: &[
            "perm([a,b,c],P)",
            "perm(nil,P)",
            "perm([a],P)",
            "perm([a,b],P)",
            "perm([a,b,c,d],P)",
            "sel([a,b,c],X,R)",
            "perm([a,b],[b,a])",
        ],
        definite_goals: &[
            "sel([a,b,c],X,R)",
            "perm([a,b],[b,a])",
            "sel([a,b],X,[a])",
            "perm([a,b,c],P)",
            "perm([X,Y],[a,b])",
            "sel([a,b],a,R)",
        ],
    },
    Fixture {
        name: "length",
        moded_goals: &[
            "len([a,b,c],N)",
            "len(nil,N)",
            "len([a],N)",
            "len([a,b],s(s(0)))",
            "len([a,b],s(0))",
            "len([x,y,z,w,v],N)",
        ],
        definite_goals: &[
            "len(L,s(s(0)))",
            "len([a,b],N)",
            "len(nil,0)",
            "len([a|T],s(0))",
            "len([X,Y],N)",
            "len(L,0)",
        ],
    },
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.pl"))
}

pub fn load(name: &str) -> SourceProgram {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    let mut p = parse_program(&text).expect("fixture parses");
    p.name = name.to_string();
    p
}

pub struct Pipeline {
    pub source: SourceProgram,
    pub chain: ChainProgram,
    pub registry: Registry,
    pub mode: TransformMode,
}

impl Pipeline {
    pub fn new(source: SourceProgram, mode: TransformMode) -> Pipeline {
        let chain = match mode {
            TransformMode::Moded => transform_moded(&source).expect("moded transform"),
            TransformMode::Definite => transform_definite(&source),
        };
        let registry = compile_to_registry(&chain).expect("registry");
        Pipeline {
            source,
            chain,
            registry,
            mode,
        }
    }

    pub fn plan(&self, goal: &Goal) -> GoalPlan {
        compile_goal(goal, &self.chain, self.mode).expect("goal compiles")
    }

    /// Unification mode the engines run with: matching for moded goals.
    pub fn uni(&self) -> Unification {
        match self.mode {
            TransformMode::Moded => Unification::Match,
            TransformMode::Definite => Unification::Unify,
        }
    }
}

/// Every (pipeline, goal) pair of the corpus.
pub fn corpus() -> Vec<(String, Pipeline, Vec<Goal>)> {
    let mut out = Vec::new();
    for f in FIXTURES {
        let src = load(f.name);
        if !f.moded_goals.is_empty() {
            let goals = f.moded_goals.iter().map(|g| parse_goal(g).unwrap()).collect();
            out.push((
                format!("{} moded", f.name),
                Pipeline::new(src.clone(), TransformMode::Moded),
                goals,
            ));
        }
        let goals = f.definite_goals.iter().map(|g| parse_goal(g).unwrap()).collect();
        out.push((
            format!("{} definite", f.name),
            Pipeline::new(src, TransformMode::Definite),
            goals,
        ));
    }
    out
}

/// Canonical oracle answers; panics if the search was cut off.
pub fn oracle_keys(p: &SourceProgram, g: &Goal) -> Vec<String> {
    let r = sld_solve(p, g, ORACLE_DEPTH);
    assert!(!r.truncated, "oracle truncated on {g}");
    let vars = g.vars();
    r.answers
        .iter()
        .map(|a| canonical_answer(&vars, |v| a.bindings.get(v)))
        .collect()
}

pub fn binding_keys(g: &Goal, answers: &[Bindings]) -> Vec<String> {
    let vars = g.vars();
    answers.iter().map(|b| canonical_answer(&vars, |v| b.get(v))).collect()
}

/// Canonical decoded abcde answers.
pub fn engine_keys(pipe: &Pipeline, g: &Goal, uni: Unification) -> Vec<String> {
    let plan = pipe.plan(g);
    let answers = Interp::new(&pipe.registry, uni)
        .abcde(&plan.initial, &plan.continuations)
        .expect("engine");
    binding_keys(g, &plan.decode_all(&answers).expect("decodes"))
}

/// The bounded-resource clauses transcribed as plain recursion:
/// `(first answer, R)`.
pub fn reference_bounded(reg: &Registry, x: &Term, qs: &[Name], uni: Unification) -> (Option<Term>, u64) {
    fn a(reg: &Registry, x: &Term, qs: &[Name], uni: Unification) -> (Option<Term>, u64) {
        match qs.split_first() {
            None => (Some(x.clone()), 0),
            Some((q, rest)) => {
                let (z, r) = c(reg, x, &reg.defn[q.as_ref()], rest, uni);
                (z, r + 1)
            }
        }
    }
    fn c(reg: &Registry, x: &Term, pjs: &[Name], qs: &[Name], uni: Unification) -> (Option<Term>, u64) {
        match pjs.split_first() {
            None => (None, 0),
            Some((pj, more)) => {
                let (y, r) = d(reg, x, pj, qs, uni);
                if y.is_some() {
                    return (y, r);
                }
                let (z, s) = c(reg, x, more, qs, uni);
                (z, r + s)
            }
        }
    }
    fn d(reg: &Registry, x: &Term, pj: &Name, qs: &[Name], uni: Unification) -> (Option<Term>, u64) {
        if let Some((t, t2)) = reg.unit.get(pj) {
            let y = match uni {
                Unification::Match => match_term(t, x).map(|s| s.apply(t2)),
                Unification::Unify => {
                    let fresh = rename_apart_all(&[t.clone(), t2.clone()]);
                    unify(x, &fresh[0]).map(|s| s.apply(&fresh[1]))
                }
            };
            match y {
                Some(y) => a(reg, &y, qs, uni),
                None => (None, 0),
            }
        } else {
            let mut all: Vec<Name> = reg.nonunit[pj.as_ref()].to_vec();
            all.extend_from_slice(qs);
            a(reg, x, &all, uni)
        }
    }
    a(reg, x, qs, uni)
}

/// Runs `f` on a thread with a large stack.
pub fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(f)
        .expect("thread")
        .join()
        .expect("no panic")
}

fn v(pool: &mut Vec<Var>) -> Var {
    let var = Var::fresh(&format!("V{}", pool.len()));
    pool.push(var.clone());
    var
}

/// A random term over `vars`; constants only when `vars` is empty.
pub fn random_term<R: Rng>(rng: &mut R, vars: &[Var], depth: u32) -> Term {
    let roll = rng.gen_range(0..10);
    if depth == 0 || roll < 5 {
        if !vars.is_empty() && rng.gen_bool(0.7) {
            return Term::Var(vars[rng.gen_range(0..vars.len())].clone());
        }
        return match rng.gen_range(0..4) {
            0 => Term::atom("a"),
            1 => Term::atom("b"),
            2 => Term::nil(),
            _ => Term::int(rng.gen_range(0..3)),
        };
    }
    match roll {
        5 | 6 => Term::cons(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)),
        7 => Term::compound("f", vec![random_term(rng, vars, depth - 1)]),
        _ => Term::compound(
            "g",
            vec![random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)],
        ),
    }
}

fn random_signature<R: Rng>(rng: &mut R) -> Vec<PredKey> {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|i| PredKey::new(&format!("p{i}"), rng.gen_range(1..=3)))
        .collect()
}

/// Terms over a fresh group of variables, and the variables they use.
fn fresh_group<R: Rng>(rng: &mut R, pool: &mut Vec<Var>, count: usize) -> (Vec<Term>, Vec<Var>) {
    if rng.gen_bool(0.6) {
        let group: Vec<Var> = (0..count).map(|_| v(pool)).collect();
        return (group.iter().cloned().map(Term::Var).collect(), group);
    }
    let k = rng.gen_range(0..=2);
    let group: Vec<Var> = (0..k).map(|_| v(pool)).collect();
    let terms: Vec<Term> = (0..count).map(|_| random_term(rng, &group, 2)).collect();
    let used = terms.iter().flat_map(|t| t.vars()).collect::<indexmap::IndexSet<Var>>();
    (terms, used.into_iter().collect())
}

fn assemble(key: &PredKey, modes: &[Mode], ins: Vec<Term>, outs: Vec<Term>) -> Term {
    let mut ins = ins.into_iter();
    let mut outs = outs.into_iter();
    let args = modes
        .iter()
        .map(|m| match m {
            Mode::In => ins.next().unwrap(),
            Mode::Out => outs.next().unwrap(),
        })
        .collect();
    Term::compound(&key.name, args)
}

/// A small random program that satisfies the moded conditions.
pub fn random_moded_program<R: Rng>(rng: &mut R) -> SourceProgram {
    let sig = random_signature(rng);
    let modes: Vec<ModeDirective> = sig
        .iter()
        .map(|k| ModeDirective {
            predicate: k.clone(),
            modes: (0..k.arity)
                .map(|_| if rng.gen_bool(0.5) { Mode::In } else { Mode::Out })
                .collect(),
        })
        .collect();
    let count = |m: &ModeDirective, which: Mode| m.modes.iter().filter(|x| **x == which).count();
    let mut clauses = Vec::new();
    for (hi, m) in modes.iter().enumerate() {
        for _ in 0..rng.gen_range(1..=3) {
            let mut pool = Vec::new();
            let (head_ins, mut known) = fresh_group(rng, &mut pool, count(m, Mode::In));
            let mut body = Vec::new();
            for _ in 0..rng.gen_range(0..=3) {
                let bm = &modes[rng.gen_range(0..modes.len())];
                let ins = (0..count(bm, Mode::In))
                    .map(|_| match known.len() {
                        n if n > 0 && rng.gen_bool(0.6) => Term::Var(known[rng.gen_range(0..n)].clone()),
                        _ => random_term(rng, &known, 1),
                    })
                    .collect();
                let (outs, group) = fresh_group(rng, &mut pool, count(bm, Mode::Out));
                known.extend(group);
                body.push(assemble(&bm.predicate, &bm.modes, ins, outs));
            }
            let head_outs = (0..count(m, Mode::Out)).map(|_| random_term(rng, &known, 2)).collect();
            clauses.push(SourceClause::new(
                assemble(&sig[hi], &m.modes, head_ins, head_outs),
                body,
            ));
        }
    }
    let mut p = SourceProgram::new("random", clauses);
    p.modes = modes;
    p
}

fn random_atom<R: Rng>(rng: &mut R, key: &PredKey, vars: &[Var]) -> Term {
    let args = (0..key.arity).map(|_| random_term(rng, vars, 1)).collect();
    Term::compound(&key.name, args)
}

/// A small random definite program.
pub fn random_definite_program<R: Rng>(rng: &mut R) -> SourceProgram {
    let sig = random_signature(rng);
    let mut clauses = Vec::new();
    for k in &sig {
        for _ in 0..rng.gen_range(1..=3) {
            let mut pool = Vec::new();
            for _ in 0..rng.gen_range(1..=4) {
                v(&mut pool);
            }
            let head = random_atom(rng, k, &pool);
            let n = rng.gen_range(0..=3);
            let body = (0..n)
                .map(|_| {
                    let key = &sig[rng.gen_range(0..sig.len())];
                    random_atom(rng, key, &pool)
                })
                .collect();
            clauses.push(SourceClause::new(head, body));
        }
    }
    SourceProgram::new("random", clauses)
}

/// A goal for a random predicate of `p`, with random arguments.
pub fn random_goal<R: Rng>(rng: &mut R, p: &SourceProgram) -> Goal {
    let preds = p.defined_predicates();
    let k = &preds[rng.gen_range(0..preds.len())];
    let vars: Vec<Var> = (0..2).map(|i| Var::fresh(&format!("G{i}"))).collect();
    let args = (0..k.arity).map(|_| random_term(rng, &vars, 1)).collect();
    Goal {
        atom: Term::compound(&k.name, args),
    }
}

/// A goal whose input arguments are ground, for moded programs. Inputs are
/// taken from a clause head so that goals often have answers.
pub fn random_moded_goal<R: Rng>(rng: &mut R, p: &SourceProgram) -> Goal {
    let m = &p.modes[rng.gen_range(0..p.modes.len())];
    let heads: Vec<&SourceClause> = p.clauses_for(&m.predicate).collect();
    let head = heads[rng.gen_range(0..heads.len())].head.clone();
    let grounding =
        chainform::terms::Substitution::from_pairs(head.vars().into_iter().map(|v| (v, random_term(rng, &[], 1))));
    let vars: Vec<Var> = (0..2).map(|i| Var::fresh(&format!("G{i}"))).collect();
    let args = m
        .modes
        .iter()
        .zip(head.args())
        .map(|(mode, a)| match mode {
            Mode::In if rng.gen_bool(0.8) => grounding.apply(a),
            Mode::In => random_term(rng, &[], 2),
            Mode::Out => Term::Var(vars[rng.gen_range(0..vars.len())].clone()),
        })
        .collect();
    Goal {
        atom: Term::compound(&m.predicate.name, args),
    }
}
