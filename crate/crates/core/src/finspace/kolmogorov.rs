use std::sync::Arc;

use super::{ContinuousMap, FinSpace};

/// The Kolmogorov (T0) quotient of a space together with its quotient map.
#[derive(Clone, Debug)]
pub struct KolmogorovQuotient {
    pub source: Arc<FinSpace>,
    pub quotient: Arc<FinSpace>,
    pub sigma: ContinuousMap,
    /// Members of each class, sorted by index; class `k` is quotient point `k`.
    pub classes: Vec<Vec<usize>>,
}

impl KolmogorovQuotient {
    /// `sigma^{-1}(y)`.
    pub fn class(&self, y: usize) -> &[usize] {
        &self.classes[y]
    }
}

/// Identifies indistinguishable points. Classes are ordered by their least
/// member index and labeled by their lexicographically least member label.
pub fn kolmogorov(space: &Arc<FinSpace>) -> KolmogorovQuotient {
    let n = space.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (x..n).filter(|&y| space.equivalent(x, y)).collect();
        for &m in &members {
            class_of[m] = classes.len();
        }
        classes.push(members);
    }
    let labels = classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|&m| space.label(m))
                .min()
                .expect("classes are non-empty")
                .to_string()
        })
        .collect();
    let quotient = Arc::new(
        FinSpace::from_closed_relation(labels, |a, b| space.leq(classes[a][0], classes[b][0]))
            .expect("class representatives have distinct labels"),
    );
    let sigma = ContinuousMap::new_unchecked(space.clone(), quotient.clone(), class_of);
    KolmogorovQuotient {
        source: space.clone(),
        quotient,
        sigma,
        classes,
    }
}

/// The induced map `K(f)` with `K(f) ∘ σ = σ ∘ f`.
pub fn kolmogorov_map(f: &ContinuousMap) -> ContinuousMap {
    let kd = kolmogorov(f.dom());
    let kc = kolmogorov(f.cod());
    kolmogorov_map_between(f, &kd, &kc)
}

pub(crate) fn kolmogorov_map_between(
    f: &ContinuousMap,
    kd: &KolmogorovQuotient,
    kc: &KolmogorovQuotient,
) -> ContinuousMap {
    let image = kd
        .classes
        .iter()
        .map(|c| kc.sigma.apply(f.apply(c[0])))
        .collect();
    ContinuousMap::new_unchecked(kd.quotient.clone(), kc.quotient.clone(), image)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `{a, b, c}` with opens `∅, {b, c}, X`.
    fn example_x() -> Arc<FinSpace> {
        Arc::new(
            FinSpace::from_relations(
                ["a", "b", "c"],
                [("b", "c"), ("c", "b"), ("b", "a")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn indiscrete_collapses() {
        let k = kolmogorov(&Arc::new(FinSpace::indiscrete(2)));
        assert_eq!(k.quotient.len(), 1);
        assert_eq!(k.quotient.label(0), "0");
    }

    #[test]
    fn t0_space_is_unchanged() {
        let s = Arc::new(FinSpace::sierpinski());
        let k = kolmogorov(&s);
        assert_eq!(*k.quotient, *s);
        assert!(k.sigma.is_homeomorphism());
    }

    #[test]
    fn example_space_quotient() {
        let x = example_x();
        let k = kolmogorov(&x);
        assert_eq!(k.quotient.len(), 2);
        assert_eq!(k.classes, vec![vec![0], vec![1, 2]]);
        assert_eq!(k.quotient.labels(), ["a", "b"]);
        // [b] < [a]: the quotient is a Sierpinski space
        assert!(k.quotient.leq(1, 0) && !k.quotient.leq(0, 1));
        assert!(k.quotient.is_t0());
    }

    #[test]
    fn induced_maps() {
        let x = example_x();
        let id = ContinuousMap::identity(x.clone());
        let kid = kolmogorov_map(&id);
        assert_eq!(kid, ContinuousMap::identity(kid.dom().clone()));

        let f3 = ContinuousMap::constant(x.clone(), x.clone(), 1).unwrap();
        assert_eq!(kolmogorov_map(&f3).image(), &[1, 1]);

        let f2 = ContinuousMap::new(x.clone(), x.clone(), vec![0, 1, 1]).unwrap();
        assert_eq!(kolmogorov_map(&f2), kid);
    }
}
