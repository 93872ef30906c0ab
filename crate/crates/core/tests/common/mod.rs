#![allow(dead_code)]

pub mod algebra;
pub mod trace;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ssl_core::model::Heap;
use ssl_core::oracle::{enumerate_models, set_partitions};
use ssl_core::{Formula, Model, Var};

pub fn vars(names: &[&str]) -> BTreeSet<Var> {
    names.iter().map(|s| Var::new(s)).collect()
}

/// Variables of a test, with nil added.
pub fn with_nil(vs: &[&str]) -> Vec<Var> {
    let mut out = vec![Var::nil()];
    out.extend(vs.iter().map(|s| Var::new(s)));
    out
}

fn atom(rng: &mut ChaCha8Rng, vs: &[Var]) -> Formula {
    let mut pick = || vs[rng.gen_range(0..vs.len())].clone();
    let (x, y) = (pick(), pick());
    match rng.gen_range(0..5) {
        0 => Formula::Emp,
        1 => Formula::eq(x, y),
        2 => Formula::neq(x, y),
        3 => Formula::pto(x, y),
        _ => Formula::ls(x, y),
    }
}

/// Random formula over all connectives. `vs` should include nil.
pub fn random_formula(rng: &mut ChaCha8Rng, vs: &[Var], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return atom(rng, vs);
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => Formula::sep(random_formula(rng, vs, d), random_formula(rng, vs, d)),
        1 => Formula::septract(random_formula(rng, vs, d), random_formula(rng, vs, d)),
        2 => Formula::and(random_formula(rng, vs, d), random_formula(rng, vs, d)),
        3 => Formula::or(random_formula(rng, vs, d), random_formula(rng, vs, d)),
        _ => Formula::not(random_formula(rng, vs, d)),
    }
}

/// Random formula with `csize <= max_csize`, by rejection.
pub fn random_small(rng: &mut ChaCha8Rng, vs: &[Var], depth: u32, max_csize: u32) -> Formula {
    loop {
        let f = random_formula(rng, vs, depth);
        if f.csize() <= max_csize {
            return f;
        }
    }
}

/// Random negation-free formula with at most `atoms` atoms.
pub fn random_positive(rng: &mut ChaCha8Rng, vs: &[Var], atoms: u32) -> Formula {
    if atoms <= 1 {
        return atom(rng, vs);
    }
    let l = rng.gen_range(1..atoms);
    let (a, b) = (random_positive(rng, vs, l), random_positive(rng, vs, atoms - l));
    match rng.gen_range(0..4) {
        0 => Formula::sep(a, b),
        1 => Formula::septract(a, b),
        2 => Formula::and(a, b),
        _ => Formula::or(a, b),
    }
}

/// Every model over every stack shape of `vs` (nil included) with at most
/// `max_heap` pointers, up to isomorphism.
pub fn all_models(vs: &[Var], max_heap: usize) -> Vec<Model> {
    let mut out = Vec::new();
    for p in set_partitions(vs) {
        out.extend(enumerate_models(&p, max_heap));
    }
    out
}

/// A random model: stack over `vs` into `0..locs`, heap of up to
/// `max_heap` pointers inside `0..locs`, never allocating nil's location.
pub fn random_model(rng: &mut ChaCha8Rng, vs: &[Var], locs: u32, max_heap: usize) -> Model {
    let mut stack = ssl_core::Stack::new();
    for v in vs {
        let l = if v.is_nil() { 0 } else { rng.gen_range(0..locs) };
        stack.insert(v.clone(), l);
    }
    stack.insert(Var::nil(), 0);
    let mut heap = Heap::new();
    for _ in 0..rng.gen_range(0..=max_heap) {
        heap.insert(rng.gen_range(1..locs), rng.gen_range(0..locs));
    }
    Model::new(stack, heap).unwrap()
}

pub fn arb_var() -> impl Strategy<Value = Var> {
    prop_oneof![Just(Var::nil()), Just(Var::new("x")), Just(Var::new("y")), Just(Var::new("z"))]
}

pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Emp),
        (arb_var(), arb_var()).prop_map(|(x, y)| Formula::eq(x, y)),
        (arb_var(), arb_var()).prop_map(|(x, y)| Formula::neq(x, y)),
        (arb_var(), arb_var()).prop_map(|(x, y)| Formula::pto(x, y)),
        (arb_var(), arb_var()).prop_map(|(x, y)| Formula::ls(x, y)),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::sep(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::septract(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            inner.prop_map(Formula::not),
        ]
    })
}

/// Seeded generator for the randomized sweeps.
pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random closed QBF in negation normal form: a quantifier prefix over
/// `1..=max_vars` variables and a random matrix.
pub fn random_qbf(rng: &mut ChaCha8Rng, max_vars: usize) -> ssl_core::qbf::Qbf {
    use ssl_core::qbf::Qbf;
    let names = ["a", "b", "c", "d", "e", "f"];
    let k = rng.gen_range(1..=max_vars.min(names.len()));
    fn matrix(rng: &mut ChaCha8Rng, vs: &[&str], depth: u32) -> Qbf {
        if depth == 0 || rng.gen_bool(0.25) {
            let v = vs[rng.gen_range(0..vs.len())].to_string();
            return if rng.gen_bool(0.5) { Qbf::Var(v) } else { Qbf::NegVar(v) };
        }
        let (a, b) = (Box::new(matrix(rng, vs, depth - 1)), Box::new(matrix(rng, vs, depth - 1)));
        if rng.gen_bool(0.5) { Qbf::And(a, b) } else { Qbf::Or(a, b) }
    }
    let mut q = matrix(rng, &names[..k], 4);
    for v in names[..k].iter().rev() {
        q = if rng.gen_bool(0.5) {
            Qbf::Exists(v.to_string(), Box::new(q))
        } else {
            Qbf::Forall(v.to_string(), Box::new(q))
        };
    }
    q
}
