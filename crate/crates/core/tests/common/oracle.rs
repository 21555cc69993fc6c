//! Brute-force references computed straight from the definitions.

use std::sync::Arc;

use finbundle::finspace::{enumerate_maps, ContinuousMap, FinSpace};
use finbundle::functorcat::TopFunctor;
use finbundle::grothendieck::GrothSpace;

/// Bit sets over at most 64 points.
pub type Set = u64;

pub fn to_set(points: impl IntoIterator<Item = usize>) -> Set {
    points.into_iter().fold(0, |s, p| s | 1 << p)
}

pub fn from_set(s: Set) -> Vec<usize> {
    (0..64).filter(|&i| s >> i & 1 == 1).collect()
}

/// Open sets by their defining property: subsets closed under going down.
pub fn opens_by_definition(x: &FinSpace) -> Vec<Set> {
    let n = x.len();
    assert!(n <= 20);
    (0..1u64 << n)
        .filter(|&s| {
            (0..n).all(|q| s >> q & 1 == 0 || (0..n).all(|p| !x.leq(p, q) || s >> p & 1 == 1))
        })
        .collect()
}

/// `D(v <= b)⁻¹(V)` for the functor, on raw indices.
fn preimage(f: &ContinuousMap, v: Set) -> Set {
    to_set(f.dom().points().filter(|&y| v >> f.apply(y) & 1 == 1))
}

/// All sets `J(b, V) = ⋃_{v <= b} {v} × D(v <= b)⁻¹(V)`, indexed through the
/// point tags of `g` and computed from the functor's arrows only.
pub fn j_subbasis(d: &TopFunctor, g: &GrothSpace) -> Vec<Set> {
    let base = d.base();
    let index = |b: usize, x: usize| {
        g.tags().iter().position(|&t| t == (b, x)).expect("every pair is a point")
    };
    let mut out = Vec::new();
    for b in base.points() {
        for v in opens_by_definition(d.object(b)) {
            let mut j = 0;
            for w in base.points().filter(|&w| base.leq(w, b)) {
                for y in from_set(preimage(d.arrow(w, b), v)) {
                    j |= 1 << index(w, y);
                }
            }
            out.push(j);
        }
    }
    out
}

/// The specialization order of the topology generated by a subbasis:
/// `p <= q` iff every subbasic set containing `q` contains `p`.
pub fn generated_order(n: usize, subbasis: &[Set]) -> Vec<Vec<bool>> {
    (0..n)
        .map(|p| {
            (0..n)
                .map(|q| subbasis.iter().all(|&s| s >> q & 1 == 0 || s >> p & 1 == 1))
                .collect()
        })
        .collect()
}

/// The topology generated by a subbasis on `n` points, by closing under
/// finite intersections and then arbitrary unions.
pub fn generated_topology(n: usize, subbasis: &[Set]) -> Vec<Set> {
    let full: Set = if n == 64 { !0 } else { (1 << n) - 1 };
    let mut basis: Vec<Set> = vec![full];
    for &s in subbasis {
        let mut next = basis.clone();
        for &b in &basis {
            next.push(b & s);
        }
        next.sort_unstable();
        next.dedup();
        basis = next;
    }
    let mut opens = vec![0];
    for &b in &basis {
        let mut next = opens.clone();
        for &u in &opens {
            next.push(u | b);
        }
        next.sort_unstable();
        next.dedup();
        opens = next;
    }
    opens
}

/// `f ⪯ g` by definition: `g⁻¹(V) ⊆ f⁻¹(V)` for every open `V`.
pub fn preceq_by_opens(f: &ContinuousMap, g: &ContinuousMap) -> bool {
    opens_by_definition(f.cod()).into_iter().all(|v| {
        let (pf, pg) = (preimage(f, v), preimage(g, v));
        pg & !pf == 0
    })
}

fn compose(outer: &ContinuousMap, inner: &ContinuousMap) -> ContinuousMap {
    outer.compose(inner).unwrap()
}

/// All weak natural transformations `C => D`, found by trying every family
/// of continuous components.
pub fn weak_nat_trans_brute(c: &TopFunctor, d: &TopFunctor) -> Vec<Vec<ContinuousMap>> {
    let base = c.base();
    let choices: Vec<Vec<ContinuousMap>> = base.points().map(|b| enumerate_maps(c.object(b), d.object(b))).collect();
    let mut out = Vec::new();
    let mut current: Vec<ContinuousMap> = Vec::new();
    fn go(
        b: usize,
        c: &TopFunctor,
        d: &TopFunctor,
        choices: &[Vec<ContinuousMap>],
        current: &mut Vec<ContinuousMap>,
        out: &mut Vec<Vec<ContinuousMap>>,
    ) {
        let base = c.base();
        if b == base.len() {
            out.push(current.clone());
            return;
        }
        for t in &choices[b] {
            current.push(t.clone());
            // every condition between b and points already chosen
            let ok = (0..=b).all(|a| {
                let cond = |x: usize, y: usize| {
                    !base.leq(x, y)
                        || preceq_by_opens(
                            &compose(d.arrow(x, y), &current[x]),
                            &compose(&current[y], c.arrow(x, y)),
                        )
                };
                cond(a, b) && cond(b, a)
            });
            if ok {
                go(b + 1, c, d, choices, current, out);
            }
            current.pop();
        }
    }
    go(0, c, d, &choices, &mut current, &mut out);
    out
}

/// All continuous maps `∫C -> ∫D` commuting with the projections.
pub fn over_base_maps(src: &GrothSpace, tgt: &GrothSpace) -> Vec<ContinuousMap> {
    let e = src.space();
    let f = tgt.space();
    let candidates: Vec<Vec<usize>> = e
        .points()
        .map(|x| f.points().filter(|&y| tgt.tag(y).0 == src.tag(x).0).collect())
        .collect();
    let mut out = Vec::new();
    let mut image = vec![0; e.len()];
    fn go(
        i: usize,
        e: &FinSpace,
        f: &FinSpace,
        candidates: &[Vec<usize>],
        image: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == e.len() {
            out.push(image.clone());
            return;
        }
        for &y in &candidates[i] {
            image[i] = y;
            let ok = (0..i).all(|j| {
                (!e.leq(i, j) || f.leq(y, image[j])) && (!e.leq(j, i) || f.leq(image[j], y))
            });
            if ok {
                go(i + 1, e, f, candidates, image, out);
            }
        }
    }
    let mut images = Vec::new();
    go(0, e, f, &candidates, &mut image, &mut images);
    for img in images {
        out.push(ContinuousMap::new(e.clone(), f.clone(), img).unwrap());
    }
    out
}

/// Whether `h` is bijective, preserves and reflects the order, and commutes
/// with the projections `p` and `q`.
pub fn is_over_base_homeomorphism(h: &ContinuousMap, p: &ContinuousMap, q: &ContinuousMap) -> bool {
    let (e, f) = (h.dom(), h.cod());
    if e.len() != f.len() || !Arc::ptr_eq(p.dom(), e) && **p.dom() != **e || **q.dom() != **f {
        return false;
    }
    let mut hit = vec![false; f.len()];
    for x in e.points() {
        if std::mem::replace(&mut hit[h.apply(x)], true) {
            return false;
        }
        if q.apply(h.apply(x)) != p.apply(x) {
            return false;
        }
    }
    e.points().all(|x| e.points().all(|y| e.leq(x, y) == f.leq(h.apply(x), h.apply(y))))
}

/// Whether some over-base homeomorphism `p ≅ q` exists, trying every
/// fiberwise bijection.
pub fn over_base_iso_exists(p: &ContinuousMap, q: &ContinuousMap) -> bool {
    let (e, f) = (p.dom(), q.dom());
    if e.len() != f.len() {
        return false;
    }
    let mut image = vec![usize::MAX; e.len()];
    let mut used = vec![false; f.len()];
    fn go(i: usize, p: &ContinuousMap, q: &ContinuousMap, image: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let (e, f) = (p.dom(), q.dom());
        if i == e.len() {
            return true;
        }
        for y in f.points() {
            if used[y] || q.apply(y) != p.apply(i) {
                continue;
            }
            let ok = (0..i).all(|j| e.leq(i, j) == f.leq(y, image[j]) && e.leq(j, i) == f.leq(image[j], y));
            if ok {
                image[i] = y;
                used[y] = true;
                if go(i + 1, p, q, image, used) {
                    return true;
                }
                used[y] = false;
            }
        }
        false
    }
    go(0, p, q, &mut image, &mut used)
}

/// Components are homeomorphisms and every square commutes.
pub fn is_natural_iso(theta: &[ContinuousMap], c: &TopFunctor, d: &TopFunctor) -> bool {
    let base = c.base();
    theta.len() == base.len()
        && theta.iter().enumerate().all(|(b, t)| {
            **t.dom() == **c.object(b) && **t.cod() == **d.object(b) && is_homeomorphism(t)
        })
        && base.points().all(|a| {
            base.points().filter(|&b| base.leq(a, b)).all(|b| {
                c.object(a)
                    .points()
                    .all(|x| d.arrow(a, b).apply(theta[a].apply(x)) == theta[b].apply(c.arrow(a, b).apply(x)))
            })
        })
}

pub fn is_homeomorphism(h: &ContinuousMap) -> bool {
    let (x, y) = (h.dom(), h.cod());
    x.len() == y.len()
        && {
            let mut seen = vec![false; y.len()];
            x.points().all(|p| !std::mem::replace(&mut seen[h.apply(p)], true))
        }
        && x.points().all(|p| x.points().all(|q| x.leq(p, q) == y.leq(h.apply(p), h.apply(q))))
}
