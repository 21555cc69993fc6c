mod common;

use std::sync::Arc;

use common::gen::{self, TestRng};
use common::oracle;
use finbundle::bundles::{
    bundle_iso, bundle_iso_direct, canonical_representation, classify, groth_bundle, pullback_bundle,
    trivial_bundle, verify_bundle, FiberBundle,
};
use finbundle::finspace::{Budget, ContinuousMap, FinSpace};
use finbundle::functorcat::AutGroup;
use finbundle::grothendieck::groth;
use finbundle::Error;
use proptest::prelude::*;
use rand::Rng;

/// A random bundle from a functor into `Aut(F)`, with a fiber of either kind.
fn bundle(rng: &mut TestRng, max_base: usize, max_fiber: usize) -> FiberBundle {
    let n = rng.gen_range(1..=max_base);
    let base = Arc::new(gen::random_space(rng, n));
    let k = rng.gen_range(1..=max_fiber);
    let fiber = Arc::new(gen::random_space(rng, k));
    let group = Arc::new(AutGroup::new(fiber.clone()));
    let d = Arc::new(gen::random_group_functor(rng, &base, &group));
    groth_bundle(&d, &fiber, Budget::DEFAULT).unwrap().expect("a functor into Aut(F) gives a bundle")
}

fn check_charts(p: &FiberBundle) -> Result<(), TestCaseError> {
    let charts = p.trivializations().expect("verified bundles carry charts");
    prop_assert_eq!(charts.len(), p.base().len());
    for t in charts {
        let b = t.over();
        let u: Vec<usize> = p.base().points().filter(|&c| p.base().leq(c, b)).collect();
        // the chart is a homeomorphism p⁻¹(U_b) -> U_b × F over U_b
        let pre: Vec<usize> = p.total().points().filter(|&x| u.contains(&p.map().apply(x))).collect();
        let pairs: Vec<(usize, usize)> = t.chart().collect();
        prop_assert_eq!(pairs.len(), pre.len());
        for &x in &pre {
            for &y in &pre {
                let (cx, cy) = (t.coordinate(x).unwrap(), t.coordinate(y).unwrap());
                let (bx, by) = (p.map().apply(x), p.map().apply(y));
                let expect = p.base().leq(bx, by) && p.fiber().leq(cx, cy);
                prop_assert_eq!(p.total().leq(x, y), expect);
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trivial_bundles_verify(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (n, k) = (rng.gen_range(0..=4), rng.gen_range(1..=3));
        let b = Arc::new(gen::random_space(&mut rng, n));
        let f = Arc::new(gen::random_space(&mut rng, k));
        let p = trivial_bundle(&b, &f);
        let v = verify_bundle(p.map(), &f, Budget::DEFAULT).unwrap();
        prop_assert!(v.is_some());
        check_charts(&v.unwrap())?;
    }

    #[test]
    fn constructed_bundles_carry_valid_charts(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let p = bundle(&mut rng, 5, 4);
        prop_assert!(p.is_verified());
        check_charts(&p)?;
        // the same map verifies from scratch
        prop_assert!(verify_bundle(p.map(), p.fiber(), Budget::DEFAULT).unwrap().is_some());
    }

    #[test]
    fn wrong_fiber_is_rejected(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let p = bundle(&mut rng, 4, 3);
        let k = p.fiber().len() + 1;
        let other = Arc::new(gen::random_space(&mut rng, k));
        prop_assert!(verify_bundle(p.map(), &other, Budget::DEFAULT).unwrap().is_none());
    }

    #[test]
    fn iso_searches_agree_with_brute_force(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let p = bundle(&mut rng, 3, 3);
        let base = p.base().clone();
        let fiber = p.fiber().clone();
        let group = Arc::new(AutGroup::new(fiber.clone()));
        let d = Arc::new(gen::random_group_functor(&mut rng, &base, &group));
        let q = groth_bundle(&d, &fiber, Budget::DEFAULT).unwrap().unwrap();
        let expected = oracle::over_base_iso_exists(p.map(), q.map());
        let via_functors = bundle_iso(&p, &q, Budget::DEFAULT).unwrap();
        let direct = bundle_iso_direct(&p, &q, Budget::DEFAULT).unwrap();
        prop_assert_eq!(via_functors.is_some(), expected);
        prop_assert_eq!(direct.is_some(), expected);
        for h in via_functors.iter().chain(direct.iter()) {
            prop_assert!(oracle::is_over_base_homeomorphism(h, p.map(), q.map()));
        }
    }

    #[test]
    fn canonical_functor_recovers_the_bundle(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let p = bundle(&mut rng, 4, 4);
        let rep = canonical_representation(&p).unwrap();
        prop_assert!(rep.functor.validate());
        prop_assert!(rep.functor.is_morphism_inverting());
        let g = groth(&rep.functor).unwrap();
        prop_assert!(oracle::is_over_base_homeomorphism(&rep.comparison(&g), p.map(), g.projection()));
    }

    #[test]
    fn pulling_back_along_the_identity_changes_nothing(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let p = bundle(&mut rng, 4, 3);
        let id = ContinuousMap::identity(p.base().clone());
        let q = pullback_bundle(&p, &id).unwrap();
        prop_assert!(oracle::over_base_iso_exists(p.map(), q.map()));
    }

    #[test]
    fn classification_partitions_all_functors(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let base = Arc::new(gen::random_space(&mut rng, n));
        let fiber = Arc::new(gen::random_space(&mut rng, k));
        let t = classify(&base, &fiber, Budget::DEFAULT).unwrap();
        prop_assert_eq!(t.classes.iter().map(|c| c.size).sum::<u64>(), t.functor_count);
        prop_assert!(!t.is_empty());
        for (i, a) in t.classes.iter().enumerate() {
            for b in &t.classes[..i] {
                prop_assert!(!oracle::over_base_iso_exists(a.bundle.map(), b.bundle.map()));
            }
        }
        // every random bundle lands in exactly one class
        let group = Arc::new(AutGroup::new(fiber.clone()));
        let d = Arc::new(gen::random_group_functor(&mut rng, &base, &group));
        let p = groth_bundle(&d, &fiber, Budget::DEFAULT).unwrap().unwrap();
        let hits = t.classes.iter().filter(|c| oracle::over_base_iso_exists(p.map(), c.bundle.map())).count();
        prop_assert_eq!(hits, 1);
    }
}

#[test]
fn tiny_budget_reports_a_partial_table() {
    let s = Arc::new(finbundle::catalog::ss0());
    let f = Arc::new(FinSpace::discrete(3));
    match classify(&s, &f, Budget::new(50)) {
        Err(Error::ClassificationInconclusive { partial, .. }) => {
            assert!(partial.functor_count > 0);
            assert!(partial.classes.iter().map(|c| c.size).sum::<u64>() == partial.functor_count);
        }
        other => panic!("expected an inconclusive result, got {:?}", other.map(|t| t.len())),
    }
}
