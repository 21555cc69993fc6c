mod common;

use std::sync::Arc;

use common::gen;
use finbundle::bundles::groth_bundle;
use finbundle::doc::{self, Document};
use finbundle::finspace::Budget;
use finbundle::functorcat::AutGroup;
use finbundle::grothendieck::groth;
use proptest::prelude::*;
use rand::Rng;

fn reparse(d: Document) -> Document {
    Document::parse(&d.to_json()).expect("own output parses")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spaces_and_maps_round_trip(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (n, m) = (rng.gen_range(0..=6), rng.gen_range(1..=4));
        let x = Arc::new(gen::random_space(&mut rng, n));
        let y = Arc::new(gen::random_space(&mut rng, m));
        let Document::Space(sd) = reparse(Document::Space(doc::space_to_doc(&x))) else { panic!("kind") };
        prop_assert_eq!(&doc::space_from_doc(&sd).unwrap(), &*x);
        if let Some(f) = gen::random_map(&mut rng, &x, &y) {
            let Document::Map(md) = reparse(Document::Map(doc::map_to_doc(&f))) else { panic!("kind") };
            prop_assert_eq!(doc::map_from_doc(&md).unwrap(), f);
        }
    }

    #[test]
    fn functors_round_trip(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let n = rng.gen_range(1..=5);
        let base = Arc::new(gen::random_space(&mut rng, n));
        let d = gen::random_functor(&mut rng, &base, 3);
        let Document::Functor(fd) = reparse(Document::Functor(doc::functor_to_doc(&d))) else { panic!("kind") };
        let back = doc::functor_from_doc(&fd).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert!(finbundle::cli::check_violations(&Document::Functor(fd)).is_empty());
    }

    #[test]
    fn bundles_and_groth_documents_round_trip(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let n = rng.gen_range(1..=4);
        let base = Arc::new(gen::random_space(&mut rng, n));
        let k = rng.gen_range(1..=3);
        let fiber = Arc::new(gen::random_space(&mut rng, k));
        let group = Arc::new(AutGroup::new(fiber.clone()));
        let d = Arc::new(gen::random_group_functor(&mut rng, &base, &group));
        let p = groth_bundle(&d, &fiber, Budget::DEFAULT).unwrap().unwrap();
        let Document::Bundle(bd) = reparse(Document::Bundle(doc::bundle_to_doc(&p))) else { panic!("kind") };
        let q = doc::bundle_from_doc(&bd).unwrap();
        prop_assert!(q.is_verified());
        prop_assert_eq!(q.map(), p.map());
        let gd = Document::Groth(doc::groth_to_doc(&groth(&d).unwrap(), true));
        prop_assert!(finbundle::cli::check_violations(&reparse(gd)).is_empty());
    }

    #[test]
    fn tampered_order_is_caught(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let n = rng.gen_range(2..=5);
        let x = gen::random_space(&mut rng, n);
        let mut sd = doc::space_to_doc(&x);
        let closure = sd.leq_closure.get_or_insert_with(Vec::new);
        // drop one stated pair, or claim one that does not hold
        match closure.iter().position(|[a, b]| a != b) {
            Some(i) if rng.gen_bool(0.5) => { closure.remove(i); }
            _ => {
                let missing = x.points().flat_map(|a| x.points().map(move |b| (a, b))).find(|&(a, b)| !x.leq(a, b));
                let Some((a, b)) = missing else { return Ok(()) };
                closure.push([x.label(a).into(), x.label(b).into()]);
            }
        }
        prop_assert!(doc::space_from_doc(&sd).is_err());
    }
}

#[test]
fn kind_is_inferred_when_missing() {
    let text = r#"{ "points": ["a", "b"], "leq": [["a", "b"]] }"#;
    assert_eq!(Document::parse(text).unwrap().kind(), "space");
    assert!(Document::parse("{ not json").is_err());
    assert!(Document::parse(r#"{ "kind": "space", "points": 3 }"#).is_err());
}
