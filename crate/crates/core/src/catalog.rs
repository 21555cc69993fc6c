//! Named example objects, shared by the CLI, the tests and the docs.

use std::sync::Arc;

use crate::finspace::{ContinuousMap, FinSpace};
use crate::functorcat::TopFunctor;

/// What an example provides.
#[derive(Clone, Debug)]
pub enum ExampleObject {
    Space(FinSpace),
    Map(ContinuousMap),
    Functor(TopFunctor),
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    pub object: ExampleObject,
    /// Base and fiber used when the example is passed to `classify`.
    pub classify: Option<(Arc<FinSpace>, Arc<FinSpace>)>,
}

/// Every registered name, in listing order.
pub const NAMES: &[&str] = &[
    "sierpinski",
    "ss0",
    "f1",
    "f2",
    "f3",
    "constant",
    "cone",
    "suspension",
    "non-surjective-E",
    "indiscrete-fiber",
];

/// `𝕊S⁰`: two incomparable points `0`, `1` below two incomparable points `+`, `-`.
pub fn ss0() -> FinSpace {
    FinSpace::discrete(2).suspension().expect("fresh labels")
}

/// `X = {a, b, c}` with `b ~ c < a`.
pub fn space_x() -> FinSpace {
    FinSpace::from_relations(["a", "b", "c"], [("b", "c"), ("c", "b"), ("b", "a")])
        .expect("valid relations")
}

fn shared_x() -> Arc<FinSpace> {
    Arc::new(space_x())
}

/// `F_j: 𝒮 -> Top` with `F_j(0) = F_j(1) = X` and `F_j(0 <= 1) = f_j`, where
/// `f_1 = id`, `f_2 = (a, b, b)` and `f_3` is constant at `b`.
pub fn f_j(j: usize) -> TopFunctor {
    let image = match j {
        1 => vec![0, 1, 2],
        2 => vec![0, 1, 1],
        3 => vec![1, 1, 1],
        _ => panic!("f_j is defined for j = 1, 2, 3"),
    };
    let x = shared_x();
    let f = ContinuousMap::new(x.clone(), x.clone(), image).expect("continuous");
    TopFunctor::new(Arc::new(FinSpace::sierpinski()), vec![x.clone(), x], [(0, 1, f)])
        .expect("a functor")
}

/// `D(0) = X`, `D(1) = ∗` over `𝒮`; its construction is the cone on `X`.
pub fn cone_functor() -> TopFunctor {
    let x = shared_x();
    let star = Arc::new(FinSpace::point("∗"));
    let f = ContinuousMap::constant(x.clone(), star.clone(), 0).expect("point exists");
    TopFunctor::new(Arc::new(FinSpace::sierpinski()), vec![x, star], [(0, 1, f)]).expect("a functor")
}

/// `D(a) = X`, `D(b) = D(c) = ∗` over `{a < b, a < c}`; its construction is
/// the suspension of `X`.
pub fn suspension_functor() -> TopFunctor {
    let base = Arc::new(
        FinSpace::from_relations(["a", "b", "c"], [("a", "b"), ("a", "c")]).expect("valid relations"),
    );
    let x = shared_x();
    let star = Arc::new(FinSpace::point("∗"));
    let to_star = ContinuousMap::constant(x.clone(), star.clone(), 0).expect("point exists");
    TopFunctor::new(
        base,
        vec![x, star.clone(), star],
        [(0, 1, to_star.clone()), (0, 2, to_star)],
    )
    .expect("a functor")
}

/// The constant functor at `X` over `𝒮`.
pub fn constant_functor() -> TopFunctor {
    TopFunctor::constant(Arc::new(FinSpace::sierpinski()), shared_x())
}

/// `p: E -> 𝒮` with `E = {a < b, a < c}`, `p(a) = 0`, `p(b) = p(c) = 1`.
///
/// Its fibers have one and two points, so it is not the projection of any
/// Grothendieck construction over `𝒮`.
pub fn non_surjective_map() -> ContinuousMap {
    let e = Arc::new(
        FinSpace::from_relations(["a", "b", "c"], [("a", "b"), ("a", "c")]).expect("valid relations"),
    );
    ContinuousMap::new(e, Arc::new(FinSpace::sierpinski()), vec![0, 1, 1]).expect("continuous")
}

/// `D_j` over `𝕊S⁰` with the indiscrete fiber `{0, 1}`: identities on
/// `0 <= +`, `0 <= -`, `1 <= +`, and on `1 <= -` the identity (`j = 1`) or
/// the swap (`j = 2`).
pub fn indiscrete_functor(j: usize) -> TopFunctor {
    assert!(j == 1 || j == 2, "D_j is defined for j = 1, 2");
    let base = Arc::new(ss0());
    let fiber = Arc::new(FinSpace::indiscrete(2));
    let id = ContinuousMap::identity(fiber.clone());
    let twist = if j == 1 {
        id.clone()
    } else {
        ContinuousMap::new(fiber.clone(), fiber.clone(), vec![1, 0]).expect("continuous")
    };
    let (bottom0, bottom1, plus, minus) = (0, 1, 2, 3);
    TopFunctor::new(
        base,
        vec![fiber; 4],
        [
            (bottom0, plus, id.clone()),
            (bottom0, minus, id.clone()),
            (bottom1, plus, id),
            (bottom1, minus, twist),
        ],
    )
    .expect("a functor")
}

/// Looks up a registered example.
pub fn example(name: &str) -> Option<Example> {
    let s = || Arc::new(FinSpace::sierpinski());
    let e = match name {
        "sierpinski" => Example {
            name: "sierpinski",
            summary: "Sierpinski space 0 < 1",
            object: ExampleObject::Space(FinSpace::sierpinski()),
            classify: Some((s(), s())),
        },
        "ss0" => Example {
            name: "ss0",
            summary: "non-Hausdorff suspension of two points; classify uses it as base and fiber",
            object: ExampleObject::Space(ss0()),
            classify: Some((Arc::new(ss0()), Arc::new(ss0()))),
        },
        "f1" | "f2" | "f3" => {
            let j = name[1..].parse().expect("digit");
            Example {
                name: NAMES.iter().find(|&&n| n == name).expect("registered"),
                summary: match j {
                    1 => "functor over the Sierpinski space with the identity of X",
                    2 => "functor over the Sierpinski space with X -> X, a, b, c -> a, b, b",
                    _ => "functor over the Sierpinski space with X -> X constant at b",
                },
                object: ExampleObject::Functor(f_j(j)),
                classify: None,
            }
        }
        "constant" => Example {
            name: "constant",
            summary: "constant functor at X over the Sierpinski space",
            object: ExampleObject::Functor(constant_functor()),
            classify: None,
        },
        "cone" => Example {
            name: "cone",
            summary: "X over 0 and a point over 1; its construction is the cone on X",
            object: ExampleObject::Functor(cone_functor()),
            classify: None,
        },
        "suspension" => Example {
            name: "suspension",
            summary: "X under two points; its construction is the suspension of X",
            object: ExampleObject::Functor(suspension_functor()),
            classify: None,
        },
        "non-surjective-E" => Example {
            name: "non-surjective-E",
            summary: "a map onto the Sierpinski space that no Grothendieck projection matches",
            object: ExampleObject::Map(non_surjective_map()),
            classify: None,
        },
        "indiscrete-fiber" => Example {
            name: "indiscrete-fiber",
            summary: "twisted functor with indiscrete fiber over ss0; classify uses that base and fiber",
            object: ExampleObject::Functor(indiscrete_functor(2)),
            classify: Some((Arc::new(ss0()), Arc::new(FinSpace::indiscrete(2)))),
        },
        _ => return None,
    };
    Some(e)
}
