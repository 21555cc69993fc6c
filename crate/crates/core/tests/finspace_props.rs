mod common;

use std::sync::Arc;

use common::{gen, oracle};
use finbundle::finspace::{
    all_homeomorphisms, enumerate_maps, find_homeomorphism, kolmogorov, kolmogorov_map, ContinuousMap, FinSpace,
};
use proptest::prelude::*;
use rand::Rng;

fn space(seed: u64, max: usize) -> Arc<FinSpace> {
    let mut rng = gen::rng(seed);
    let n = rng.gen_range(0..=max);
    Arc::new(gen::random_space(&mut rng, n))
}

/// Reflexive transitive closure by Warshall, from the generating pairs.
fn warshall(x: &FinSpace) -> Vec<Vec<bool>> {
    let n = x.len();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in x.generators() {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| (0..m).map(move |y| [f.clone(), vec![y]].concat()))
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn order_is_the_closure_of_the_generators(seed in any::<u64>()) {
        let x = space(seed, 7);
        let r = warshall(&x);
        for a in x.points() {
            for b in x.points() {
                prop_assert_eq!(x.leq(a, b), r[a][b]);
                prop_assert_eq!(x.down(a).contains(b), r[b][a]);
                prop_assert_eq!(x.up(a).contains(b), r[a][b]);
            }
        }
    }

    #[test]
    fn opens_are_the_down_closed_subsets(seed in any::<u64>()) {
        let x = space(seed, 7);
        let mut listed: Vec<u64> = x.opens().into_iter().map(oracle::to_set).collect();
        listed.sort_unstable();
        prop_assert_eq!(listed, oracle::opens_by_definition(&x));
        for p in x.points() {
            let u = x.minimal_open(p).unwrap();
            prop_assert!(x.is_open(&u));
            prop_assert!(x.opens().iter().filter(|v| v.contains(&p)).all(|v| u.iter().all(|q| v.contains(q))));
        }
    }

    #[test]
    fn enumerated_maps_are_exactly_the_monotone_ones(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (x, y) = (space(s1, 4), space(s2, 4));
        let mut listed: Vec<Vec<usize>> = enumerate_maps(&x, &y).iter().map(|f| f.image().to_vec()).collect();
        listed.sort();
        let mut monotone: Vec<Vec<usize>> = all_functions(x.len(), y.len())
            .into_iter()
            .filter(|f| x.points().all(|a| x.points().all(|b| !x.leq(a, b) || y.leq(f[a], f[b]))))
            .collect();
        monotone.sort();
        prop_assert_eq!(&listed, &monotone);
        // continuity by preimages of opens agrees with monotonicity
        for img in all_functions(x.len(), y.len()) {
            let by_preimage = oracle::opens_by_definition(&y).into_iter().all(|v| {
                let pre = oracle::to_set(x.points().filter(|&p| v >> img[p] & 1 == 1));
                oracle::opens_by_definition(&x).contains(&pre)
            });
            prop_assert_eq!(ContinuousMap::new(x.clone(), y.clone(), img.clone()).is_ok(), by_preimage);
        }
    }

    #[test]
    fn composition_is_associative_and_unital(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (x, y, z) = (space(s1, 4), space(s2, 3), space(s3, 3));
        let mut rng = gen::rng(s1 ^ s2 ^ s3);
        let (Some(f), Some(g)) = (gen::random_map(&mut rng, &x, &y), gen::random_map(&mut rng, &y, &z)) else {
            return Ok(());
        };
        let gf = g.compose(&f).unwrap();
        prop_assert!(gf.continuity_violation().is_none());
        prop_assert_eq!(&ContinuousMap::identity(y.clone()).compose(&f).unwrap(), &f);
        prop_assert_eq!(&f.compose(&ContinuousMap::identity(x.clone())).unwrap(), &f);
        let h = ContinuousMap::identity(z.clone());
        prop_assert_eq!(h.compose(&gf).unwrap(), h.compose(&g).unwrap().compose(&f).unwrap());
    }

    #[test]
    fn homeomorphism_search_is_sound(seed in any::<u64>()) {
        let x = space(seed, 5);
        let mut rng = gen::rng(seed);
        let mut labels: Vec<String> = x.labels().to_vec();
        labels.iter_mut().for_each(|l| l.push('\''));
        let perm = {
            let mut p: Vec<usize> = x.points().collect();
            rand::seq::SliceRandom::shuffle(p.as_mut_slice(), &mut rng);
            p
        };
        // a shuffled copy of x
        let gens = x.generators().iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        let mut shuffled_labels = labels.clone();
        for p in x.points() {
            shuffled_labels[perm[p]] = labels[p].clone();
        }
        let y = Arc::new(FinSpace::from_index_relations(shuffled_labels, gens).unwrap());
        let h = find_homeomorphism(&x, &y);
        prop_assert!(h.as_ref().is_some_and(oracle::is_homeomorphism));
        let inv = h.unwrap().inverse().unwrap();
        prop_assert!(oracle::is_homeomorphism(&inv));
        for a in all_homeomorphisms(&x, &x) {
            prop_assert!(oracle::is_homeomorphism(&a));
        }
    }

    #[test]
    fn kolmogorov_quotient_is_t0_and_universal(seed in any::<u64>()) {
        let x = space(seed, 6);
        let k = kolmogorov(&x);
        prop_assert!(k.quotient.is_t0());
        prop_assert!(k.sigma.is_surjective() || x.is_empty());
        for a in x.points() {
            for b in x.points() {
                prop_assert_eq!(x.leq(a, b), k.quotient.leq(k.sigma.apply(a), k.sigma.apply(b)));
            }
        }
        // K(f) σ = σ f for any self-map
        let mut rng = gen::rng(seed);
        if let Some(f) = gen::random_map(&mut rng, &x, &x) {
            let kf = kolmogorov_map(&f);
            for a in x.points() {
                prop_assert_eq!(kf.apply(k.sigma.apply(a)), k.sigma.apply(f.apply(a)));
            }
        }
    }

    #[test]
    fn constructions_have_the_expected_order(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (x, y) = (space(s1, 4), space(s2, 3));
        let p = x.product(&y);
        prop_assert_eq!(p.len(), x.len() * y.len());
        for (a, b) in (0..p.len()).flat_map(|a| (0..p.len()).map(move |b| (a, b))) {
            let ((a1, a2), (b1, b2)) = ((a / y.len(), a % y.len()), (b / y.len(), b % y.len()));
            prop_assert_eq!(p.leq(a, b), x.leq(a1, b1) && y.leq(a2, b2));
        }
        let c = x.cone().unwrap();
        let top = c.point_named("+").unwrap();
        prop_assert!(c.points().all(|q| c.leq(q, top)));
        let s = x.suspension().unwrap();
        let (plus, minus) = (s.point_named("+").unwrap(), s.point_named("-").unwrap());
        prop_assert!(!s.leq(plus, minus) && !s.leq(minus, plus));
        let y2 = y.relabeled(y.labels().iter().map(|l| format!("{l}'")).collect()).unwrap();
        prop_assert!(x.disjoint_union(&y).is_err() || x.is_empty() || y.is_empty());
        let u = x.disjoint_union(&y2).unwrap();
        prop_assert_eq!(
            u.connected_components().len(),
            x.connected_components().len() + y.connected_components().len()
        );
    }
}
