mod common;

use common::algebra::{random_core, random_shape};
use common::{random_small, rng, vars, with_nil};
use proptest::prelude::*;
use ssl_core::abduce::{abduce_positive, abduce_weakest, formof, normal_form};
use ssl_core::ams::{enumerate_universe, induced_core, realize_core};
use ssl_core::decide::{entails, equivalent, model_check, sat, SolverConfig, Status};
use ssl_core::{Ams, Formula};

fn valid(l: &Formula, r: &Formula) -> bool {
    entails(l, r, &vars(&["x", "y"]), &SolverConfig::default()).unwrap().status == Status::Valid
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn normal_form_is_equivalent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_small(&mut r, &with_nil(&["x", "y"]), 3, 2);
        let nf = normal_form(&f, &vars(&["x", "y"]), &SolverConfig::default()).unwrap();
        prop_assert!(equivalent(&f, &nf.formula(), &vars(&["x", "y"]), &SolverConfig::default()).unwrap(), "{}", f);
    }

    #[test]
    fn solutions_solve(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vs = with_nil(&["x", "y"]);
        let (phi, psi) = (random_small(&mut r, &vs, 2, 2), random_small(&mut r, &vs, 2, 2));
        let cfg = SolverConfig::default();
        let weakest = abduce_weakest(&phi, &psi, false);
        let minimal = abduce_weakest(&phi, &psi, true);
        let positive = abduce_positive(&phi, &psi, &vars(&["x", "y"]), false, &cfg).unwrap().formula;
        for z in [&weakest, &minimal, &positive] {
            prop_assert!(valid(&Formula::sep(phi.clone(), z.clone()), &psi), "{} / {}: {}", phi, psi, z);
        }
        prop_assert!(valid(&minimal, &weakest) && valid(&positive, &weakest));
        // a random candidate that solves the problem is below the weakest one
        let cand = random_small(&mut r, &vs, 2, 2);
        if valid(&Formula::sep(phi.clone(), cand.clone()), &psi) {
            prop_assert!(valid(&cand, &weakest), "{}", cand);
        }
        // minimal solutions have no detachable non-empty part
        if sat(&minimal, &vars(&["x", "y"]), &cfg).unwrap().status == Status::Sat {
            let bigger = Formula::sep(weakest.clone(), Formula::not(Formula::Emp));
            prop_assert!(!valid(&minimal, &bigger));
            prop_assert!(!valid(&minimal, &Formula::sep(minimal.clone(), Formula::not(Formula::Emp))));
        }
    }

    #[test]
    fn formof_pins_down_its_ams(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = random_shape(&mut r, 2);
        let a = random_core(&mut r, &shape, 2);
        let m = rand::Rng::gen_range(&mut r, a.garbage.max(1)..=3);
        let f = formof(&Ams { shape: shape.clone(), core: a.clone() }, m).unwrap();
        let vs = shape.vars().filter(|v| !v.is_nil()).cloned().collect();
        let v = sat(&f, &vs, &SolverConfig::default()).unwrap();
        prop_assert_eq!(v.status, Status::Sat);
        let w = v.witness.unwrap();
        let got = induced_core(&shape, &w);
        let clamp = |c: &ssl_core::AmsCore| c.with_garbage(c.garbage.min(m));
        prop_assert_eq!(clamp(&got), clamp(&a), "{}", f);
        prop_assert_eq!(v.witness_verified, Some(true));
        for b in &enumerate_universe(&shape, m + 1, false).unwrap().elems {
            let holds = model_check(&realize_core(&shape, b), &f).unwrap();
            prop_assert_eq!(holds, clamp(b) == clamp(&a), "{:?} vs {:?}: {}", b, a, f);
        }
    }
}
