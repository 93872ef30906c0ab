//! Per-seed checks of the model and AMS algebra. Each returns a
//! description of the first violation.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use ssl_core::ams::{compose, induced_core, realize_core, realize_with, universe_cores, RealizeOptions};
use ssl_core::model::{chunks, std_union, strong_union};
use ssl_core::oracle::{holds_with, OracleConfig};
use ssl_core::{AmsCore, Heap, Loc, Mode, Model, Shape, Stack, Var};

use super::{random_model, random_small, rng, with_nil};

type Check = Result<(), String>;

fn random_heap(r: &mut impl Rng, locs: Loc, n: usize) -> Heap {
    (0..r.gen_range(0..=n)).map(|_| (r.gen_range(1..locs), r.gen_range(0..locs))).collect()
}

/// Commutativity, associativity, unit, cancellativity, and strong unions
/// being standard unions.
pub fn separation_laws(seed: u64) -> Check {
    let mut r = rng(seed);
    let mut s = Stack::new();
    for v in with_nil(&["x", "y", "z"]) {
        let l = if v.is_nil() { 0 } else { r.gen_range(0..6) };
        s.insert(v, l);
    }
    let (h1, h2, h3) = (random_heap(&mut r, 6, 3), random_heap(&mut r, 6, 3), random_heap(&mut r, 6, 3));
    let u = |a: &Heap, b: &Heap| strong_union(&s, a, b);
    if u(&h1, &Heap::new()) != Some(h1.clone()) {
        return Err(format!("unit fails on {h1:?}"));
    }
    if u(&h1, &h2) != u(&h2, &h1) {
        return Err(format!("commutativity fails on {h1:?} {h2:?}"));
    }
    if let Some(h12) = u(&h1, &h2) {
        if std_union(&h1, &h2) != Some(h12) {
            return Err(format!("strong union is not a standard union on {h1:?} {h2:?}"));
        }
    }
    let left = u(&h1, &h2).and_then(|h| u(&h, &h3));
    let right = u(&h2, &h3).and_then(|h| u(&h1, &h));
    if left != right {
        return Err(format!("associativity fails on {h1:?} {h2:?} {h3:?}"));
    }
    if let (Some(a), Some(b)) = (u(&h1, &h2), u(&h1, &h3)) {
        if a == b && h2 != h3 {
            return Err(format!("cancellativity fails on {h1:?} {h2:?} {h3:?}"));
        }
    }
    Ok(())
}

fn core_of(shape: &Shape, s: &Stack, h: &Heap) -> AmsCore {
    induced_core(shape, &Model { stack: s.clone(), heap: h.clone() })
}

/// The abstraction of a strong union is the composition of the parts'.
pub fn homomorphism(seed: u64) -> Check {
    let mut r = rng(seed);
    let m = random_model(&mut r, &with_nil(&["x", "y", "z"]), 8, 6);
    let shape = Shape::of_stack(&m.stack);
    let (mut h1, mut h2) = (Heap::new(), Heap::new());
    // arbitrary pointer splits are mostly undefined; split along chunks
    // half of the time so that the property is not vacuous
    if r.gen_bool(0.5) {
        for c in chunks(&m) {
            if r.gen_bool(0.5) { h1.extend(c.heap) } else { h2.extend(c.heap) }
        }
    } else {
        for (a, b) in &m.heap {
            if r.gen_bool(0.5) { h1.insert(*a, *b) } else { h2.insert(*a, *b) };
        }
    }
    let Some(h) = strong_union(&m.stack, &h1, &h2) else { return Ok(()) };
    let whole = core_of(&shape, &m.stack, &h);
    let composed = compose(&core_of(&shape, &m.stack, &h1), &core_of(&shape, &m.stack, &h2));
    if composed.as_ref() != Some(&whole) {
        return Err(format!("{m:?} split {h1:?} / {h2:?}: {composed:?} vs {whole:?}"));
    }
    Ok(())
}

/// Any split of the induced AMS into two composable parts is realized by a
/// split of the heap.
pub fn decomposability(seed: u64) -> Check {
    let mut r = rng(seed);
    let m = random_model(&mut r, &with_nil(&["x", "y", "z"]), 8, 6);
    let shape = Shape::of_stack(&m.stack);
    let whole = induced_core(&shape, &m);
    let n = shape.len();
    let (mut a1, mut a2) = (AmsCore::empty(n), AmsCore::empty(n));
    for (i, e) in whole.edges.iter().enumerate() {
        if r.gen_bool(0.5) { a1.edges[i] = *e } else { a2.edges[i] = *e }
    }
    for g in &whole.negalloc {
        if r.gen_bool(0.5) { a1.negalloc.push(*g) } else { a2.negalloc.push(*g) }
    }
    a1.garbage = r.gen_range(0..=whole.garbage);
    a2.garbage = whole.garbage - a1.garbage;
    let Some((h1, h2)) = ssl_core::ams::decompose(&m, &a1, &a2) else {
        return Err(format!("no decomposition of {m:?}"));
    };
    if strong_union(&m.stack, &h1, &h2).as_ref() != Some(&m.heap) {
        return Err(format!("{m:?}: parts do not recombine"));
    }
    if core_of(&shape, &m.stack, &h1) != a1 || core_of(&shape, &m.stack, &h2) != a2 {
        return Err(format!("{m:?}: parts have the wrong abstraction"));
    }
    Ok(())
}

/// A random shape over a prefix of `x, y, z` plus nil.
pub fn random_shape(r: &mut impl Rng, max_vars: usize) -> Arc<Shape> {
    let names = ["x", "y", "z"];
    let k = r.gen_range(0..=max_vars.min(3));
    let mut classes: Vec<Vec<Var>> = vec![vec![Var::nil()]];
    for name in &names[..k] {
        let i = r.gen_range(0..=classes.len());
        if i == classes.len() {
            classes.push(vec![Var::new(name)]);
        } else {
            classes[i].push(Var::new(name));
        }
    }
    Arc::new(Shape::new(classes).unwrap())
}

pub fn random_core(r: &mut impl Rng, shape: &Shape, max_garbage: u32) -> AmsCore {
    let all = universe_cores(shape.len());
    all.choose(r).unwrap().with_garbage(r.gen_range(0..=max_garbage))
}

fn random_options(r: &mut impl Rng, a: &AmsCore) -> RealizeOptions {
    RealizeOptions {
        path_len: (0..a.edge_count()).map(|_| r.gen_range(2..=3)).collect(),
        sink_tail: (0..a.negalloc.len()).map(|_| (r.gen_range(1..=2), r.gen_bool(0.5))).collect(),
        garbage_len: (0..a.garbage).map(|_| r.gen_range(1..=2)).collect(),
        first_fresh: Some(r.gen_range(4..20)),
    }
}

/// Realizations induce the AMS they were built from.
pub fn round_trip(seed: u64) -> Check {
    let mut r = rng(seed);
    let shape = random_shape(&mut r, 3);
    let a = random_core(&mut r, &shape, 2);
    for m in [realize_core(&shape, &a), realize_with(&shape, &a, &random_options(&mut r, &a))] {
        if induced_core(&shape, &m) != a {
            return Err(format!("{a:?} realized as {m:?}"));
        }
    }
    Ok(())
}

fn forced() -> OracleConfig {
    OracleConfig { force: true, ..Default::default() }
}

/// Two different realizations of one AMS satisfy the same formulas.
pub fn refinement(seed: u64) -> Check {
    let mut r = rng(seed);
    let shape = random_shape(&mut r, 2);
    let a = random_core(&mut r, &shape, 2);
    let m1 = realize_core(&shape, &a);
    let mut m2 = realize_with(&shape, &a, &random_options(&mut r, &a));
    if m2.heap.len() > 8 {
        m2 = realize_with(&shape, &a, &RealizeOptions { first_fresh: Some(13), ..Default::default() });
    }
    let vs: Vec<Var> = shape.vars().cloned().collect();
    let f = random_small(&mut r, &vs, 3, 3);
    let (v1, v2) = (holds_with(&m1, &f, Mode::Strong, &forced()), holds_with(&m2, &f, Mode::Strong, &forced()));
    if v1.as_ref().ok() != v2.as_ref().ok() {
        return Err(format!("{f}: {m1:?} gives {v1:?}, {m2:?} gives {v2:?}"));
    }
    Ok(())
}

/// Garbage counts at or above the chunk size of a formula are
/// indistinguishable by it.
pub fn refined_refinement(seed: u64) -> Check {
    let mut r = rng(seed);
    let shape = random_shape(&mut r, 2);
    let base = random_core(&mut r, &shape, 0);
    let vs: Vec<Var> = shape.vars().cloned().collect();
    let f = random_small(&mut r, &vs, 2, 2);
    let c = f.csize();
    let mut verdicts = Vec::new();
    for g in [c, c + 1, c + 3] {
        let m = realize_core(&shape, &base.with_garbage(g));
        verdicts.push(holds_with(&m, &f, Mode::Strong, &forced()).map_err(|e| e.to_string())?);
    }
    if verdicts.windows(2).any(|w| w[0] != w[1]) {
        return Err(format!("{f} on {base:?}: {verdicts:?}"));
    }
    Ok(())
}
