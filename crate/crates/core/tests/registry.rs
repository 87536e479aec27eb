mod common;

use chainform::chainir::{compile_to_registry, ChainClause, ChainProgram, TransformMode};
use chainform::syntax::{parse_program, print_program};
use chainform::terms::{alpha_eq, Term};
use common::*;

fn golden(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

/// Clause-by-clause alpha-equivalence of two chain programs.
fn same_clauses(a: &[ChainClause], b: &[ChainClause]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (
                ChainClause::Unit {
                    pred: p,
                    input: i,
                    output: o,
                },
                ChainClause::Unit {
                    pred: q,
                    input: j,
                    output: u,
                },
            ) => {
                p == q
                    && alpha_eq(
                        &Term::tuple(vec![i.clone(), o.clone()]),
                        &Term::tuple(vec![j.clone(), u.clone()]),
                    )
            }
            _ => x == y,
        })
}

#[test]
fn split_matches_golden() {
    let p = Pipeline::new(load("split"), TransformMode::Moded);
    assert_eq!(print_program(&p.chain), golden("split.chain.pl"));
    assert_eq!(p.registry.dump(), golden("split.registry"));
}

#[test]
fn append_matches_golden() {
    let p = Pipeline::new(load("append"), TransformMode::Definite);
    assert_eq!(print_program(&p.chain), golden("append.chain.pl"));
    assert_eq!(p.registry.dump(), golden("append.registry"));
}

#[test]
fn golden_files_read_back_as_the_same_chain_program() {
    for (file, fixture, mode) in [
        ("split.chain.pl", "split", TransformMode::Moded),
        ("append.chain.pl", "append", TransformMode::Definite),
    ] {
        let read = ChainProgram::from_source(&parse_program(&golden(file)).unwrap()).unwrap();
        let built = Pipeline::new(load(fixture), mode);
        assert!(same_clauses(&read.clauses, &built.chain.clauses), "{file}");
    }
}

#[test]
fn registries_decompile_to_their_programs() {
    for (name, pipe, _) in corpus() {
        let back = pipe.registry.decompile();
        let mut expected = pipe.chain.clauses.clone();
        // Defn groups clauses by predicate, in first-definition order.
        let order: Vec<_> = pipe.registry.defn.keys().cloned().collect();
        expected.sort_by_key(|c| order.iter().position(|k| k == c.predicate()));
        assert!(same_clauses(&back, &expected), "{name}");

        let mut again = pipe.chain.clone();
        again.clauses = back;
        let reg = compile_to_registry(&again).unwrap();
        assert_eq!(
            reg.defn.keys().collect::<Vec<_>>(),
            pipe.registry.defn.keys().collect::<Vec<_>>(),
            "{name}"
        );
    }
}

#[test]
fn labels_and_tables_are_consistent() {
    for (name, pipe, _) in corpus() {
        let r = &pipe.registry;
        for (q, labels) in &r.defn {
            for l in labels {
                assert!(l.starts_with(&format!("{q}_")), "{name}: {l}");
                assert_eq!(r.isunit.contains(l), r.unit.contains_key(l), "{name}: {l}");
                assert!(r.unit.contains_key(l) ^ r.nonunit.contains_key(l), "{name}: {l}");
            }
        }
        for body in r.nonunit.values() {
            assert!(body.iter().all(|q| r.defn.contains_key(q)), "{name}");
        }
        assert_eq!(r.unit.len() + r.nonunit.len(), pipe.chain.len(), "{name}");
    }
}
