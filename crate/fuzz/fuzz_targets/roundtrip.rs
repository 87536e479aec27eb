#![no_main]

use chainform::syntax::{parse_program, print_program};
use libfuzzer_sys::fuzz_target;

// Whatever parses must print to text that parses to the same clauses.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = parse_program(text) else { return };
    let printed = print_program(&p);
    let q = parse_program(&printed).expect("printed program parses");
    assert_eq!(p.clauses.len(), q.clauses.len());
    for (a, b) in p.clauses.iter().zip(&q.clauses) {
        assert_eq!(a.as_term().variant_key(), b.as_term().variant_key());
    }
    assert_eq!(p.modes, q.modes);
});
