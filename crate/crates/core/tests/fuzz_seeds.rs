//! Runs the checked-in fuzz seeds through the same checks as the fuzz
//! targets, so they stay meaningful without a fuzzing toolchain.

use std::path::PathBuf;

use chainform::syntax::{parse_goal, parse_program, print_program};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn program_seeds_parse() {
    let s = seeds("parse_program");
    assert!(!s.is_empty());
    for (name, text) in s {
        parse_program(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn goal_seeds_parse() {
    let s = seeds("parse_goal");
    assert!(!s.is_empty());
    for (name, text) in s {
        parse_goal(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn roundtrip_seeds_survive_printing() {
    for (name, text) in seeds("roundtrip") {
        let p = parse_program(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let q = parse_program(&print_program(&p)).unwrap();
        let keys = |p: &chainform::syntax::SourceProgram| {
            p.clauses.iter().map(|c| c.as_term().variant_key()).collect::<Vec<_>>()
        };
        assert_eq!(keys(&p), keys(&q), "{name}");
        assert_eq!(p.modes, q.modes, "{name}");
    }
}
