//! Seeded generators for spaces, maps and functors.

use std::collections::HashMap;
use std::sync::Arc;

use finbundle::finspace::{enumerate_maps, find_homeomorphism, ContinuousMap, FinSpace};
use finbundle::functorcat::{AutGroup, TopFunctor};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// A random preorder on `n` points.
pub fn random_space(rng: &mut TestRng, n: usize) -> FinSpace {
    let p: f64 = rng.gen_range(0.1..0.5);
    let mut gens = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                gens.push((a, b));
            }
        }
    }
    FinSpace::from_index_relations(labels(n), gens).unwrap()
}

/// A random partial order on `n` points.
pub fn random_poset(rng: &mut TestRng, n: usize) -> FinSpace {
    let p: f64 = rng.gen_range(0.2..0.7);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                gens.push((perm[i], perm[j]));
            }
        }
    }
    FinSpace::from_index_relations(labels(n), gens).unwrap()
}

/// A uniformly chosen continuous map, or `None` if there is none.
pub fn random_map(rng: &mut TestRng, x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> Option<ContinuousMap> {
    enumerate_maps(x, y).choose(rng).cloned()
}

/// Randomized backtracking for arrows `D(b <= c)` drawn from per-pair
/// candidate lists, subject to `D(b <= b) = id` and composition.
struct ArrowSearch<'a> {
    base: &'a FinSpace,
    pairs: Vec<(usize, usize)>,
    candidates: Vec<Vec<Vec<usize>>>,
    slot: HashMap<(usize, usize), usize>,
    chosen: Vec<Option<usize>>,
    ident: Vec<Vec<usize>>,
    nodes: u64,
}

impl ArrowSearch<'_> {
    fn arrow(&self, b: usize, c: usize) -> Option<&[usize]> {
        if b == c {
            return Some(&self.ident[b]);
        }
        let i = self.slot[&(b, c)];
        self.chosen[i].map(|k| self.candidates[i][k].as_slice())
    }

    /// Every triple `a <= b <= c` with all three arrows known composes.
    fn consistent(&self, b: usize, c: usize) -> bool {
        let n = self.base.len();
        let leq = |x, y| self.base.leq(x, y);
        let check = |a: usize, m: usize, z: usize| -> bool {
            match (self.arrow(a, m), self.arrow(m, z), self.arrow(a, z)) {
                (Some(f), Some(g), Some(h)) => f.iter().zip(h).all(|(&x, &y)| g[x] == y),
                _ => true,
            }
        };
        (0..n).all(|o| {
            (!leq(o, b) || check(o, b, c))
                && (!leq(c, o) || check(b, c, o))
                && (!(leq(b, o) && leq(o, c)) || check(b, o, c))
        })
    }

    fn run(&mut self, i: usize, rng: &mut TestRng) -> bool {
        if i == self.pairs.len() {
            return true;
        }
        self.nodes += 1;
        if self.nodes > 200_000 {
            return false;
        }
        let (b, c) = self.pairs[i];
        let mut order: Vec<usize> = (0..self.candidates[i].len()).collect();
        order.shuffle(rng);
        for k in order {
            self.chosen[i] = Some(k);
            if self.consistent(b, c) && self.run(i + 1, rng) {
                return true;
            }
        }
        self.chosen[i] = None;
        false
    }
}

fn search_functor(
    rng: &mut TestRng,
    base: &Arc<FinSpace>,
    objects: &[Arc<FinSpace>],
    candidates: impl Fn(usize, usize) -> Vec<Vec<usize>>,
) -> Option<TopFunctor> {
    // a linear extension of the quotient, by number of points below
    let rank: Vec<usize> = base.points().map(|b| base.down(b).count_ones(..)).collect();
    let mut pairs = base.strict_pairs();
    pairs.sort_by_key(|&(b, c)| (rank[c], c, rank[b], b));
    let cands: Vec<Vec<Vec<usize>>> = pairs.iter().map(|&(b, c)| candidates(b, c)).collect();
    let slot = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut s = ArrowSearch {
        base,
        chosen: vec![None; pairs.len()],
        pairs,
        candidates: cands,
        slot,
        ident: objects.iter().map(|o| o.points().collect()).collect(),
        nodes: 0,
    };
    if !s.run(0, rng) {
        return None;
    }
    let arrows: Vec<(usize, usize, ContinuousMap)> = s
        .pairs
        .iter()
        .enumerate()
        .map(|(i, &(b, c))| {
            let img = s.candidates[i][s.chosen[i].unwrap()].clone();
            (b, c, ContinuousMap::new(objects[b].clone(), objects[c].clone(), img).unwrap())
        })
        .collect();
    let d = TopFunctor::new(base.clone(), objects.to_vec(), arrows).expect("search yields a functor");
    Some(d)
}

/// Random objects (one shared per indistinguishable class, 1 to `max_fiber`
/// points, T0 or not) and random arrows satisfying the functor laws.
pub fn random_functor(rng: &mut TestRng, base: &Arc<FinSpace>, max_fiber: usize) -> TopFunctor {
    loop {
        let mut objects: Vec<Option<Arc<FinSpace>>> = vec![None; base.len()];
        for b in base.points() {
            if objects[b].is_none() {
                let n = rng.gen_range(1..=max_fiber);
                let x = Arc::new(if rng.gen_bool(0.5) { random_space(rng, n) } else { random_poset(rng, n) });
                for c in base.points().filter(|&c| base.equivalent(b, c)) {
                    objects[c] = Some(x.clone());
                }
            }
        }
        let objects: Vec<Arc<FinSpace>> = objects.into_iter().map(Option::unwrap).collect();
        let all = |b: usize, c: usize| {
            enumerate_maps(&objects[b], &objects[c])
                .into_iter()
                .map(|f| f.image().to_vec())
                .collect()
        };
        if let Some(d) = search_functor(rng, base, &objects, all) {
            return d;
        }
    }
}

/// A random functor `B -> Aut(F)` viewed in `Top`.
pub fn random_group_functor(rng: &mut TestRng, base: &Arc<FinSpace>, group: &Arc<AutGroup>) -> TopFunctor {
    let objects = vec![group.space().clone(); base.len()];
    let elems: Vec<Vec<usize>> = group.elements().iter().map(|g| g.image().to_vec()).collect();
    loop {
        if let Some(d) = search_functor(rng, base, &objects, |_, _| elems.clone()) {
            return d;
        }
    }
}

fn is_transitive(n: usize, rel: &[bool]) -> bool {
    (0..n).all(|a| {
        (0..n).all(|b| !rel[a * n + b] || (0..n).all(|c| !rel[b * n + c] || rel[a * n + c]))
    })
}

fn dedupe(spaces: Vec<FinSpace>) -> Vec<FinSpace> {
    let mut reps: Vec<FinSpace> = Vec::new();
    for x in spaces {
        if !reps.iter().any(|r| find_homeomorphism(r, &x).is_some()) {
            reps.push(x);
        }
    }
    reps
}

/// Every preorder on `n` labeled points.
pub fn all_labeled_spaces(n: usize) -> Vec<FinSpace> {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << off.len()) {
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (k, &(a, b)) in off.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rel[a * n + b] = true;
            }
        }
        if is_transitive(n, &rel) {
            let gens = off.iter().copied().filter(|&(a, b)| rel[a * n + b]).collect();
            out.push(FinSpace::from_index_relations(labels(n), gens).unwrap());
        }
    }
    out
}

/// One space from each homeomorphism class of `n`-point spaces.
pub fn all_spaces(n: usize) -> Vec<FinSpace> {
    dedupe(all_labeled_spaces(n))
}

/// One space from each homeomorphism class of `n`-point T0 spaces.
pub fn all_t0_spaces(n: usize) -> Vec<FinSpace> {
    dedupe(all_labeled_spaces(n).into_iter().filter(|x| x.is_t0()).collect())
}
