use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use indexmap::IndexSet;

use super::{SourceClause, SourceProgram};
use crate::chainir::{ChainProgram, Role};
use crate::terms::{Term, Var};

/// Programs that have a concrete text form.
pub trait ProgramText {
    fn to_text(&self) -> String;
}

/// Prints a source or chain program so that parsing the result gives back
/// the same clauses up to variable renaming.
pub fn print_program<P: ProgramText + ?Sized>(p: &P) -> String {
    p.to_text()
}

fn valid_var_name(name: &str) -> bool {
    let mut cs = name.chars();
    match cs.next() {
        Some(c) if c.is_uppercase() || c == '_' => {}
        _ => return false,
    }
    name != "_" && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

/// Printable names for the variables of one clause. Source names are kept
/// where they are unambiguous; the rest get numbered suffixes.
pub fn clause_var_names<'a>(atoms: impl IntoIterator<Item = &'a Term>) -> HashMap<Var, String> {
    let mut vars = IndexSet::new();
    for a in atoms {
        a.collect_vars(&mut vars);
    }
    let mut count: HashMap<&str, usize> = HashMap::new();
    for v in &vars {
        *count.entry(v.name()).or_default() += 1;
    }
    let mut used: HashSet<String> = vars
        .iter()
        .filter(|v| valid_var_name(v.name()) && count[v.name()] == 1)
        .map(|v| v.name().to_string())
        .collect();
    let mut out = HashMap::new();
    for v in &vars {
        let name = v.name();
        let chosen = if valid_var_name(name) && count[name] == 1 {
            name.to_string()
        } else {
            let base = if valid_var_name(name) { name } else { "_G" };
            let mut k = 1;
            loop {
                let cand = format!("{base}{k}");
                if !used.contains(&cand) {
                    break cand;
                }
                k += 1;
            }
        };
        used.insert(chosen.clone());
        out.insert(v.clone(), chosen);
    }
    out
}

/// One clause on one line, terminated by `.`.
pub fn print_clause(c: &SourceClause) -> String {
    let names = clause_var_names(c.atoms());
    let mut s = c.head.display_with(&names).to_string();
    if !c.body.is_empty() {
        s.push_str(" :- ");
        for (i, b) in c.body.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            let _ = write!(s, "{}", b.display_with(&names));
        }
    }
    s.push('.');
    s
}

impl ProgramText for SourceProgram {
    fn to_text(&self) -> String {
        let mut s = String::new();
        for m in &self.modes {
            let modes: Vec<String> = m.modes.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, ":- mode({},[{}]).", m.predicate.name, modes.join(","));
        }
        for d in &self.empty_defns {
            let _ = writeln!(s, ":- defn({d},[]).");
        }
        for c in &self.clauses {
            s.push_str(&print_clause(c));
            s.push('\n');
        }
        s
    }
}

impl ProgramText for ChainProgram {
    fn to_text(&self) -> String {
        let mut s = String::new();
        for (pred, entry) in &self.entry {
            let _ = writeln!(s, "% entry {pred} -> {}", entry.hat);
        }
        for d in &self.declared {
            let _ = writeln!(s, ":- defn({d},[]).");
        }
        for (c, prov) in self.clauses.iter().zip(&self.provenance) {
            match prov.role {
                Role::Main => {
                    let _ = writeln!(s, "% clause {}", prov.source_clause + 1);
                }
                Role::H(j) => {
                    let _ = writeln!(s, "% clause {}, h{j}", prov.source_clause + 1);
                }
            }
            s.push_str(&print_clause(&c.to_source()));
            s.push('\n');
        }
        s
    }
}
