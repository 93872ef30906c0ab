//! Formulas describing single AMS, normal forms, and abduction.

use std::collections::BTreeSet;

use crate::ams::{Ams, AmsCore, EdgeLabel, Shape};
use crate::decide::{abstractions, SolverConfig};
use crate::error::{Error, Result};
use crate::formula::{Formula, Var};

/// `!alloc(x)` without the double negation.
fn not_alloc(x: &Var) -> Formula {
    Formula::septract(Formula::pto(x.clone(), Var::nil()), Formula::tt())
}

/// A single negative chunk: non-empty, not splittable, and satisfying no
/// points-to or list atom between class representatives.
fn negchunk(shape: &Shape) -> Formula {
    let mut parts = vec![
        Formula::not(Formula::Emp),
        Formula::not(Formula::sep(Formula::not(Formula::Emp), Formula::not(Formula::Emp))),
    ];
    for v in 0..shape.len() {
        for w in 0..shape.len() {
            let (a, b) = (shape.max_var(v).clone(), shape.max_var(w).clone());
            parts.push(Formula::not(Formula::pto(a.clone(), b.clone())));
            parts.push(Formula::not(Formula::ls(a, b)));
        }
    }
    Formula::and_all(parts)
}

/// No stack class is allocated. The nil class is left out: `alloc(nil)`
/// holds trivially since nil can never be allocated.
fn allocates_nothing(shape: &Shape) -> Vec<Formula> {
    (1..shape.len()).map(|v| not_alloc(shape.max_var(v))).collect()
}

fn aliasing(shape: &Shape) -> Vec<Formula> {
    let mut parts = Vec::new();
    for class in shape.classes() {
        for (i, x) in class.iter().enumerate() {
            for y in &class[i + 1..] {
                parts.push(Formula::eq(x.clone(), y.clone()));
            }
        }
    }
    for v in 0..shape.len() {
        for w in v + 1..shape.len() {
            parts.push(Formula::neq(shape.max_var(v).clone(), shape.max_var(w).clone()));
        }
    }
    parts
}

/// `ls2(x, y)` whose interior avoids every labelled location. Plain `ls2`
/// would also accept lists running through another variable, and for
/// `x = y` the empty heap.
fn list_edge(shape: &Shape, v: usize, x: Var, y: Var) -> Formula {
    let mut conj = vec![Formula::ls2(x, y), Formula::not(Formula::Emp)];
    conj.extend((1..shape.len()).filter(|&w| w != v).map(|w| not_alloc(shape.max_var(w))));
    Formula::and_all(conj)
}

fn graph(shape: &Shape, a: &AmsCore) -> Vec<Formula> {
    let mut ptos = Vec::new();
    let mut lists = Vec::new();
    for (v, e) in a.edges.iter().enumerate() {
        if let Some((w, label)) = e {
            let (x, y) = (shape.max_var(v).clone(), shape.max_var(*w as usize).clone());
            match label {
                EdgeLabel::Exactly1 => ptos.push(Formula::pto(x, y)),
                EdgeLabel::AtLeast2 => lists.push(list_edge(shape, v, x, y)),
            }
        }
    }
    ptos.extend(lists);
    ptos
}

/// The formula whose models are exactly those inducing `a`, with garbage
/// counted up to `m` (`m` meaning "at least `m`").
pub fn formof(a: &Ams, m: u32) -> Result<Formula> {
    let (shape, core) = (&*a.shape, &a.core);
    if core.garbage > m {
        return Err(Error::Precondition(format!("garbage {} exceeds the bound {m}", core.garbage)));
    }
    let mut parts = aliasing(shape);
    parts.extend(graph(shape, core));
    for group in &core.negalloc {
        let mut conj = vec![negchunk(shape)];
        for v in 1..shape.len() {
            if group >> v & 1 == 1 {
                conj.push(Formula::alloc(shape.max_var(v).clone()));
            } else {
                conj.push(not_alloc(shape.max_var(v)));
            }
        }
        parts.push(Formula::and_all(conj));
    }
    let garbage_chunk = || {
        let mut conj = vec![negchunk(shape)];
        conj.extend(allocates_nothing(shape));
        Formula::and_all(conj)
    };
    if core.garbage < m {
        parts.extend((0..core.garbage).map(|_| garbage_chunk()));
    } else {
        parts.extend((0..m - 1).map(|_| garbage_chunk()));
        let mut rest = vec![Formula::not(Formula::Emp)];
        rest.extend(allocates_nothing(shape));
        parts.push(Formula::and_all(rest));
    }
    Ok(Formula::sep_all(parts))
}

/// `aliasing * graph` of a garbage-free AMS. Only the `>=2` edges are not
/// positive: they are `ls2` restricted to unlabelled interior nodes.
pub fn positive_formof(a: &Ams) -> Result<Formula> {
    if !a.core.is_garbage_free() {
        return Err(Error::Precondition("positive form needs a garbage-free AMS".into()));
    }
    let mut parts = aliasing(&a.shape);
    parts.extend(graph(&a.shape, &a.core));
    Ok(Formula::sep_all(parts))
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub disjuncts: Vec<Formula>,
    pub source: Formula,
    pub vars: BTreeSet<Var>,
}

impl NormalForm {
    /// The disjunction; `emp && !emp` when there are no disjuncts.
    pub fn formula(&self) -> Formula {
        Formula::or_all(self.disjuncts.iter().cloned())
    }
}

pub fn normal_form(f: &Formula, vars: &BTreeSet<Var>, cfg: &SolverConfig) -> Result<NormalForm> {
    let m = f.csize();
    let mut disjuncts = Vec::new();
    for set in abstractions(f, vars, cfg)? {
        for a in set.iter() {
            disjuncts.push(formof(&a, m)?);
        }
    }
    Ok(NormalForm { disjuncts, source: f.clone(), vars: vars.clone() })
}

/// `phi -* psi`, or the weakest minimal solution
/// `(phi -* psi) && !((phi -* psi) * !emp)`.
pub fn abduce_weakest(phi: &Formula, psi: &Formula, minimal: bool) -> Formula {
    let z = Formula::wand(phi.clone(), psi.clone());
    if minimal {
        let bigger = Formula::sep(z.clone(), Formula::not(Formula::Emp));
        Formula::and(z, Formula::not(bigger))
    } else {
        z
    }
}

#[derive(Clone, Debug)]
pub struct PositiveSolution {
    pub formula: Formula,
    pub disjuncts: usize,
}

/// Weakest (minimal) solution within the positive fragment: the
/// garbage-free members of the solution's abstraction.
pub fn abduce_positive(
    phi: &Formula,
    psi: &Formula,
    vars: &BTreeSet<Var>,
    minimal: bool,
    cfg: &SolverConfig,
) -> Result<PositiveSolution> {
    let z = abduce_weakest(phi, psi, minimal);
    let mut parts = Vec::new();
    for set in abstractions(&z, vars, cfg)? {
        for a in set.iter().filter(|a| a.core.is_garbage_free()) {
            parts.push(positive_formof(&a)?);
        }
    }
    let n = parts.len();
    Ok(PositiveSolution { formula: Formula::or_all(parts), disjuncts: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ams::induced_ams;
    use crate::decide::{entails, equivalent, sat, Status};
    use crate::formula::parse;
    use crate::model::Model;
    use std::sync::Arc;

    fn vars(v: &[&str]) -> BTreeSet<Var> {
        v.iter().map(|s| Var::new(s)).collect()
    }

    #[test]
    fn formof_of_empty_heap() {
        let shape = Arc::new(Shape::new(vec![vec![Var::nil()], vec![Var::new("x")]]).unwrap());
        let a = Ams { shape, core: AmsCore::empty(2) };
        let f = formof(&a, 1).unwrap();
        assert_eq!(f.to_string(), "nil != x");
        let cfg = SolverConfig::default();
        assert!(equivalent(&f, &parse("emp && x != nil").unwrap(), &vars(&["x"]), &cfg).unwrap());
    }

    #[test]
    fn formof_pins_down_example2() {
        let m = Model::from_pairs(
            &[("x", 1), ("y", 3), ("nil", 0)],
            &[(1, 2), (2, 3), (3, 8), (9, 9), (10, 11), (11, 10)],
        )
        .unwrap();
        let a = induced_ams(&m);
        let f = formof(&a, 2).unwrap();
        let cfg = SolverConfig::default();
        let v = sat(&f, &vars(&["x", "y"]), &cfg).unwrap();
        assert_eq!(v.status, Status::Sat);
        assert_eq!(induced_ams(v.witness.as_ref().unwrap()), a);
        assert!(crate::decide::model_check(&m, &f).unwrap());
        assert!(formof(&a, 1).is_err());
    }

    #[test]
    fn normal_forms() {
        let cfg = SolverConfig::default();
        for (text, vs) in [("emp", vec!["x"]), ("ls(x, nil)", vec!["x"]), ("x -> y -o ls(x, nil)", vec!["x", "y"])] {
            let f = parse(text).unwrap();
            let nf = normal_form(&f, &vars(&vs), &cfg).unwrap();
            assert!(equivalent(&f, &nf.formula(), &vars(&vs), &cfg).unwrap(), "{text}");
        }
        let nf = normal_form(&parse("x -> y * x -> y").unwrap(), &vars(&["x", "y"]), &cfg).unwrap();
        assert!(nf.disjuncts.is_empty());
        assert_eq!(nf.formula(), Formula::ff());
    }

    #[test]
    fn abduction_of_a_missing_cell() {
        let cfg = SolverConfig::default();
        let vs = vars(&["x", "y"]);
        let phi = parse("x -> y").unwrap();
        let psi = parse("x -> y * y -> nil").unwrap();
        let target = parse("x -> y * y -> nil").unwrap();
        for minimal in [false, true] {
            let z = abduce_weakest(&phi, &psi, minimal);
            assert_eq!(entails(&Formula::sep(phi.clone(), z.clone()), &psi, &vs, &cfg).unwrap().status, Status::Valid);
            assert!(equivalent(&Formula::sep(phi.clone(), z), &target, &vs, &cfg).unwrap());
        }
        let p = abduce_positive(&phi, &psi, &vs, true, &cfg).unwrap();
        assert!(equivalent(&Formula::sep(phi.clone(), p.formula), &target, &vs, &cfg).unwrap());
    }
}
