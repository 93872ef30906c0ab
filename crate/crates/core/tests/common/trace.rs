//! Matching symbolic execution traces against expected states.

use std::collections::BTreeMap;

use ssl_core::symexec::{exec_symbolic, vc_config, vcgen, AnnotatedProgram};
use ssl_core::{parse, Formula, Var};

pub fn program(name: &str) -> AnnotatedProgram {
    let path = format!("{}/../../programs/{name}", env!("CARGO_MANIFEST_DIR"));
    AnnotatedProgram::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Loop body of list reversal, one state per statement.
pub const REVERSE_TRACE: &[&str] = &[
    "ls(x, nil) * ls(a, nil) * x != nil",
    "(x -> z_ -o ls(x, nil) * ls(a, nil) * x != nil) * x -> z_",
    "(x -> z_ -o ls(x, nil) * ls(a, nil) * x != nil) * x -> z_ * b = z_",
    "(x -> z_ -o ls(x, nil) * ls(a, nil) * x != nil) * x -> a * b = z_",
    "(x -> z_ -o ls(x, nil) * ls(a_, nil) * x != nil) * x -> a_ * b = z_ * a = x",
    "(x_ -> z_ -o ls(x_, nil) * ls(a_, nil) * x_ != nil) * x_ -> a_ * b = z_ * a = x_ * x = b",
];

/// Fresh names carry a `#`; the expected states spell them with a trailing
/// `_`. The bijection between the two is shared across the whole trace.
pub struct Renaming {
    fwd: BTreeMap<Var, Var>,
    back: BTreeMap<Var, Var>,
}

impl Renaming {
    fn var(&mut self, got: &Var, want: &Var) -> bool {
        let fresh = got.as_str().contains('#');
        if fresh != want.as_str().ends_with('_') {
            return false;
        }
        if !fresh {
            return got == want;
        }
        match (self.fwd.get(got), self.back.get(want)) {
            (None, None) => {
                self.fwd.insert(got.clone(), want.clone());
                self.back.insert(want.clone(), got.clone());
                true
            }
            (Some(w), Some(g)) => w == want && g == got,
            _ => false,
        }
    }

    fn formula(&mut self, got: &Formula, want: &Formula) -> bool {
        use Formula::*;
        match (got, want) {
            (Emp, Emp) => true,
            (Eq(a, b), Eq(c, d)) | (Neq(a, b), Neq(c, d)) | (PointsTo(a, b), PointsTo(c, d)) | (Ls(a, b), Ls(c, d)) => {
                self.var(a, c) && self.var(b, d)
            }
            (Sep(a, b), Sep(c, d)) | (Septract(a, b), Septract(c, d)) | (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) => {
                self.formula(a, c) && self.formula(b, d)
            }
            (Not(a), Not(c)) => self.formula(a, c),
            _ => false,
        }
    }
}

/// Compares the `loop1-inductive` trace of `prog` with `expected`.
pub fn check_trace(prog: &str, expected: &[&str]) -> Result<(), String> {
    let p = program(prog);
    let t = vcgen(&p).into_iter().find(|t| t.name == "loop1-inductive").unwrap();
    let (_, trace) = exec_symbolic(&t.pre, &t.body, &vc_config()).unwrap();
    if trace.len() != expected.len() {
        let got: Vec<String> = trace.iter().map(|s| s.to_string()).collect();
        return Err(format!("{prog}: {} steps, expected {}:\n{}", trace.len(), expected.len(), got.join("\n")));
    }
    let mut r = Renaming { fwd: BTreeMap::new(), back: BTreeMap::new() };
    for (step, want) in trace.iter().zip(expected) {
        let want = parse(want).unwrap();
        if !r.formula(&step.state, &want) {
            return Err(format!("{prog}: got {} expected {want}", step.state));
        }
    }
    Ok(())
}

