mod common;

use std::collections::BTreeMap;

use common::{all_models, random_formula, random_model, random_positive, rng, with_nil};
use rand::seq::SliceRandom;
use ssl_core::model::img;
use ssl_core::oracle::{dangling, holds, holds_with, ExtensionStrategy, OracleConfig};
use ssl_core::{Formula, Loc, Mode, Model};

#[test]
fn weak_and_strong_agree_on_positive_formulas() {
    let vs = with_nil(&["x", "y"]);
    let models = all_models(&vs, 2);
    let mut r = rng(10);
    for _ in 0..40 {
        let f = random_positive(&mut r, &vs, 3);
        for m in &models {
            let strong = holds(m, &f, Mode::Strong).unwrap();
            assert_eq!(holds(m, &f, Mode::Weak).unwrap(), strong, "{f} on {m:?}");
            if strong {
                assert!(dangling(&m.heap).is_subset(&img(&m.stack)), "{f} on {m:?}");
            }
        }
    }
}

fn relabel(r: &mut impl rand::Rng, m: &Model) -> Model {
    let mut ls: Vec<Loc> = (1..12).collect();
    ls.shuffle(r);
    let p: BTreeMap<Loc, Loc> = (1..12).zip(ls).chain([(0, 0)]).collect();
    Model {
        stack: m.stack.iter().map(|(v, l)| (v.clone(), p[l])).collect(),
        heap: m.heap.iter().map(|(a, b)| (p[a], p[b])).collect(),
    }
}

/// Every `-o` has a positive left operand, so weak mode avoids the
/// exhaustive extension search.
fn weak_friendly(f: &Formula) -> bool {
    match f {
        Formula::Septract(a, b) => a.is_positive() && weak_friendly(b),
        Formula::Sep(a, b) | Formula::And(a, b) | Formula::Or(a, b) => weak_friendly(a) && weak_friendly(b),
        Formula::Not(a) => weak_friendly(a),
        _ => true,
    }
}

#[test]
fn isomorphic_models_agree() {
    let vs = with_nil(&["x", "y"]);
    let mut r = rng(11);
    for _ in 0..400 {
        let m = random_model(&mut r, &vs, 6, 3);
        let n = relabel(&mut r, &m);
        let f = random_formula(&mut r, &vs, 3);
        let modes: &[Mode] = if weak_friendly(&f) { &[Mode::Strong, Mode::Weak] } else { &[Mode::Strong] };
        for &mode in modes {
            assert_eq!(holds(&m, &f, mode).unwrap(), holds(&n, &f, mode).unwrap(), "{f} {mode:?}");
        }
    }
}

fn has_septract(f: &Formula) -> bool {
    match f {
        Formula::Septract(..) => true,
        Formula::Sep(a, b) | Formula::And(a, b) | Formula::Or(a, b) => has_septract(a) || has_septract(b),
        Formula::Not(a) => has_septract(a),
        _ => false,
    }
}

/// The default septraction strategy only tries one realization per abstract
/// extension; the exhaustive one tries every small heap. The exhaustive
/// search is only affordable for a single `-o` of chunk size 1.
#[test]
fn extension_strategies_agree() {
    let vs = with_nil(&["x", "y"]);
    let models = all_models(&vs, 2);
    let exhaustive = OracleConfig { strategy: ExtensionStrategy::Exhaustive, ..Default::default() };
    let mut r = rng(12);
    let mut checked = 0;
    while checked < 60 {
        let (a, b) = (random_formula(&mut r, &vs, 2), random_formula(&mut r, &vs, 2));
        if has_septract(&a) || has_septract(&b) || a.csize().max(b.csize()) > 1 {
            continue;
        }
        let f = Formula::septract(a, b);
        checked += 1;
        for m in &models {
            assert_eq!(
                holds(m, &f, Mode::Strong).unwrap(),
                holds_with(m, &f, Mode::Strong, &exhaustive).unwrap(),
                "{f} on {m:?}"
            );
        }
    }
}
