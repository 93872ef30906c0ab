//! Shared fixtures for the benchmarks.

use std::collections::BTreeSet;

use ssl_core::symexec::AnnotatedProgram;
use ssl_core::{parse, Formula, Model, Var};

pub fn vars(names: &[&str]) -> BTreeSet<Var> {
    names.iter().map(|s| Var::new(s)).collect()
}

/// Satisfiability queries of increasing difficulty.
pub fn sat_queries() -> Vec<(&'static str, Formula, BTreeSet<Var>)> {
    [
        ("list-seg", "ls(x, y) * ls(y, nil) * x != y", &["x", "y"][..]),
        ("septract", "x -> y -o ls(x, nil)", &["x", "y"]),
        ("negation", "!(ls(x, nil) * true) && !emp", &["x"]),
        ("three-vars", "ls(x, y) * ls(y, z) * !(ls(x, z))", &["x", "y", "z"]),
    ]
    .into_iter()
    .map(|(name, f, vs)| (name, parse(f).unwrap(), vars(vs)))
    .collect()
}

pub fn entailments() -> Vec<(&'static str, Formula, Formula, BTreeSet<Var>)> {
    [
        ("pto-ls", "x -> y", "ls(x, y)", &["x", "y"][..]),
        ("ls-append", "ls(x, y) * ls(y, nil)", "ls(x, nil)", &["x", "y"]),
        ("ls-pto", "ls(x, nil)", "x -> nil", &["x"]),
    ]
    .into_iter()
    .map(|(name, l, r, vs)| (name, parse(l).unwrap(), parse(r).unwrap(), vars(vs)))
    .collect()
}

/// Model with the chunk structure used in the AMS examples.
pub fn example_model() -> Model {
    Model::from_pairs(
        &[("x", 1), ("y", 3), ("u", 5), ("z", 3), ("w", 7), ("v", 9), ("nil", 0)],
        &[(1, 2), (2, 3), (3, 8), (4, 6), (5, 6), (6, 3), (7, 6), (9, 9), (10, 11), (11, 10)],
    )
    .unwrap()
}

pub fn program(name: &str) -> AnnotatedProgram {
    let path = format!("{}/../../programs/{name}", env!("CARGO_MANIFEST_DIR"));
    AnnotatedProgram::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}
