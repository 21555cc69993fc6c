//! Fiber bundles over finite spaces: local triviality, canonical
//! representations, isomorphism and classification with a fixed fiber.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finspace::{
    find_homeomorphism, find_homeomorphism_with, kolmogorov, kolmogorov_map, same_space, Budget,
    ContinuousMap, FinSpace, Matcher, Meter,
};
use crate::finspace::kolmogorov_map_between;
use crate::functorcat::{
    enumerate_group_functors, group_functor_from_values, natural_iso, AutGroup, GaugeFrame,
    GroupFunctor, TopFunctor,
};
use crate::grothendieck::{groth, groth_trusted, GrothSpace};

/// A homeomorphism `p⁻¹(U_b) -> U_b × F` over `U_b`, stored by the fiber
/// coordinate of each total point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trivialization {
    over: usize,
    /// Fiber coordinate per total point; `usize::MAX` outside `p⁻¹(U_b)`.
    coord: Vec<usize>,
    /// `inverse[β * |F| + f]` is the total point with chart value `(β, f)`.
    inverse: Vec<usize>,
}

impl Trivialization {
    /// The base point `b` whose minimal open this chart covers.
    pub fn over(&self) -> usize {
        self.over
    }

    pub fn coordinate(&self, x: usize) -> Option<usize> {
        self.coord.get(x).copied().filter(|&f| f != usize::MAX)
    }

    /// The total point sent to `(β, f)`.
    pub fn locate(&self, beta: usize, f: usize, fiber_len: usize) -> Option<usize> {
        self.inverse
            .get(beta * fiber_len + f)
            .copied()
            .filter(|&x| x != usize::MAX)
    }

    /// `(x, f)` for every point `x` of the chart domain.
    pub fn chart(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.coord
            .iter()
            .enumerate()
            .filter(|&(_, &f)| f != usize::MAX)
            .map(|(x, &f)| (x, f))
    }
}

/// A map `p: E -> B` with a designated fiber `F` and, once verified, one
/// trivialization over every minimal open `U_b`.
#[derive(Clone, Debug)]
pub struct FiberBundle {
    map: ContinuousMap,
    fiber: Arc<FinSpace>,
    trivializations: Option<Vec<Trivialization>>,
}

impl FiberBundle {
    /// An unverified candidate bundle.
    pub fn new(map: ContinuousMap, fiber: Arc<FinSpace>) -> Self {
        FiberBundle {
            map,
            fiber,
            trivializations: None,
        }
    }

    /// Attaches charts given as fiber coordinates per point of `p⁻¹(U_b)`,
    /// one list per base point, and checks each is an over-`U_b` homeomorphism.
    pub fn with_charts(map: ContinuousMap, fiber: Arc<FinSpace>, charts: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let base = map.cod().clone();
        if charts.len() != base.len() {
            return Err(Error::ArityMismatch {
                expected: base.len(),
                got: charts.len(),
            });
        }
        let mut bundle = FiberBundle::new(map, fiber);
        let mut trivs = Vec::with_capacity(charts.len());
        for (b, chart) in charts.into_iter().enumerate() {
            let t = bundle.make_trivialization(b, &chart)?;
            trivs.push(t);
        }
        bundle.trivializations = Some(trivs);
        Ok(bundle)
    }

    fn make_trivialization(&self, b: usize, chart: &[(usize, usize)]) -> Result<Trivialization> {
        let total = self.total();
        let base = self.base();
        let k = self.fiber.len();
        let bad = |msg: String| Error::InvalidTrivialization(format!("over {}: {msg}", base.label(b)));
        let mut coord = vec![usize::MAX; total.len()];
        let mut inverse = vec![usize::MAX; base.len() * k];
        for &(x, f) in chart {
            total.check_point(x)?;
            self.fiber.check_point(f)?;
            let beta = self.map.apply(x);
            if !base.leq(beta, b) {
                return Err(bad(format!("{} lies outside the neighbourhood", total.label(x))));
            }
            if coord[x] != usize::MAX {
                return Err(bad(format!("{} charted twice", total.label(x))));
            }
            if inverse[beta * k + f] != usize::MAX {
                return Err(bad(format!("chart is not injective at {}", total.label(x))));
            }
            coord[x] = f;
            inverse[beta * k + f] = x;
        }
        let domain: Vec<usize> = total.points().filter(|&x| base.leq(self.map.apply(x), b)).collect();
        if let Some(&x) = domain.iter().find(|&&x| coord[x] == usize::MAX) {
            return Err(bad(format!("{} is not charted", total.label(x))));
        }
        let expected = base.down(b).count_ones(..) * k;
        if domain.len() != expected {
            return Err(bad("chart is not surjective".into()));
        }
        for &x in &domain {
            for &y in &domain {
                let lhs = total.leq(x, y);
                let rhs = base.leq(self.map.apply(x), self.map.apply(y)) && self.fiber.leq(coord[x], coord[y]);
                if lhs != rhs {
                    return Err(bad(format!(
                        "order between {} and {} is not preserved",
                        total.label(x),
                        total.label(y)
                    )));
                }
            }
        }
        Ok(Trivialization {
            over: b,
            coord,
            inverse,
        })
    }

    pub fn total(&self) -> &Arc<FinSpace> {
        self.map.dom()
    }

    pub fn base(&self) -> &Arc<FinSpace> {
        self.map.cod()
    }

    /// `p`.
    pub fn map(&self) -> &ContinuousMap {
        &self.map
    }

    pub fn fiber(&self) -> &Arc<FinSpace> {
        &self.fiber
    }

    pub fn is_verified(&self) -> bool {
        self.trivializations.is_some()
    }

    pub fn trivializations(&self) -> Option<&[Trivialization]> {
        self.trivializations.as_deref()
    }

    fn charts(&self) -> Result<&[Trivialization]> {
        self.trivializations().ok_or(Error::Unverified)
    }

    /// `p⁻¹(b)`, sorted.
    pub fn fiber_over(&self, b: usize) -> Vec<usize> {
        self.total().points().filter(|&x| self.map.apply(x) == b).collect()
    }

    /// The bundle of `π: ∫D -> B`. Morphism-inverting functors get charts
    /// `(β, y) ↦ (β, h_b(D(β <= b)(y)))` directly; any other functor is
    /// searched with [`verify_bundle`].
    pub fn from_groth(g: &GrothSpace, fiber: &Arc<FinSpace>, budget: Budget) -> Result<Option<FiberBundle>> {
        let d = g.functor();
        if !d.is_morphism_inverting() {
            return verify_bundle(g.projection(), fiber, budget);
        }
        let base = g.base();
        let mut charts = Vec::with_capacity(base.len());
        for b in base.points() {
            let Some(h) = find_homeomorphism_with(d.object(b), fiber, budget)? else {
                return Ok(None);
            };
            let chart = base
                .down(b)
                .ones()
                .flat_map(|beta| {
                    let t = d.arrow(beta, b);
                    let h = &h;
                    d.object(beta)
                        .points()
                        .map(move |y| (g.point(beta, y), h.apply(t.apply(y))))
                })
                .collect();
            charts.push(chart);
        }
        FiberBundle::with_charts(g.projection().clone(), fiber.clone(), charts).map(Some)
    }
}

/// Searches a trivialization over every minimal open; returns the verified
/// bundle or `None` if some `U_b` admits none.
///
/// For each `b` the points of `p⁻¹(b)` are matched first and the remaining
/// points of `p⁻¹(U_b)` follow by decreasing size of their base neighbourhood.
pub fn verify_bundle(p: &ContinuousMap, fiber: &Arc<FinSpace>, budget: Budget) -> Result<Option<FiberBundle>> {
    let total = p.dom();
    let base = p.cod();
    let k = fiber.len();
    let mut meter = Meter::new(budget);
    let mut counts = vec![0usize; base.len()];
    for x in total.points() {
        counts[p.apply(x)] += 1;
    }
    if counts.iter().any(|&c| c != k) {
        return Ok(None);
    }
    let mut charts = Vec::with_capacity(base.len());
    for b in base.points() {
        let u: Vec<usize> = base.down(b).ones().collect();
        let mut local_u = vec![usize::MAX; base.len()];
        for (i, &beta) in u.iter().enumerate() {
            local_u[beta] = i;
        }
        let pts: Vec<usize> = total.points().filter(|&x| local_u[p.apply(x)] != usize::MAX).collect();
        let sub = total.subspace(&pts);
        let target = base.subspace(&u).product(fiber);
        let sig_sub: Vec<[usize; 5]> = sub.points().map(|x| sub.point_signature(x)).collect();
        let sig_tgt: Vec<[usize; 5]> = target.points().map(|y| target.point_signature(y)).collect();
        let candidates: Vec<Vec<usize>> = pts
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let ub = local_u[p.apply(x)];
                (0..k)
                    .map(|f| ub * k + f)
                    .filter(|&y| sig_tgt[y] == sig_sub[i])
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by_key(|&i| {
            let beta = p.apply(pts[i]);
            (beta != b, std::cmp::Reverse(base.down(beta).count_ones(..)), i)
        });
        let m = Matcher::new(&sub, &target, order, candidates, true);
        let mut found = None;
        let _ = m.run(&mut meter, |img| {
            found = Some(img.to_vec());
            ControlFlow::Break(())
        })?;
        let Some(img) = found else { return Ok(None) };
        charts.push(pts.iter().zip(img).map(|(&x, y)| (x, y % k)).collect());
    }
    FiberBundle::with_charts(p.clone(), fiber.clone(), charts).map(Some)
}

/// Decides whether `π: ∫D -> B` is a bundle with fiber `F` from the functor
/// alone: `K ∘ D` inverts every arrow, every `D(b)` is homeomorphic to `F`,
/// and the classes over corresponding points have equal sizes.
pub fn characterization_check(d: &TopFunctor, fiber: &FinSpace) -> Result<bool> {
    if let Some(v) = d.functoriality_violations().first() {
        return Err(Error::InvalidFunctor(v.describe(d.base())));
    }
    let base = d.base();
    let fiber = Arc::new(fiber.clone());
    for b in base.points() {
        if find_homeomorphism(d.object(b), &fiber).is_none() {
            return Ok(false);
        }
    }
    let ks: Vec<_> = base.points().map(|b| kolmogorov(d.object(b))).collect();
    for (b1, b2) in base.strict_pairs() {
        let kf = kolmogorov_map_between(d.arrow(b1, b2), &ks[b1], &ks[b2]);
        if !kf.is_homeomorphism() {
            return Ok(false);
        }
        for y in ks[b2].quotient.points() {
            let pre: usize = ks[b1]
                .quotient
                .points()
                .filter(|&z| kf.apply(z) == y)
                .map(|z| ks[b1].classes[z].len())
                .sum();
            if pre != ks[b2].classes[y].len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A verified bundle together with its canonical functor `𝒟_p`.
#[derive(Clone, Debug)]
pub struct CanonicalRep {
    pub bundle: FiberBundle,
    /// `𝒟_p(b) = p⁻¹(b)` as a subspace of the total space.
    pub functor: Arc<TopFunctor>,
    /// Total-space points of each `p⁻¹(b)`, in the order used by `𝒟_p(b)`.
    pub fibers: Vec<Vec<usize>>,
}

impl CanonicalRep {
    /// `φ: E -> ∫𝒟_p`, `x ↦ (p(x), x)`.
    pub fn comparison(&self, g: &GrothSpace) -> ContinuousMap {
        let total = self.bundle.total();
        let mut image = vec![0; total.len()];
        for (b, pts) in self.fibers.iter().enumerate() {
            for (i, &x) in pts.iter().enumerate() {
                image[x] = g.point(b, i);
            }
        }
        ContinuousMap::new_unchecked(total.clone(), g.space().clone(), image)
    }
}

/// The fiber transport `δ_{b,c}: p⁻¹(b) -> p⁻¹(c)` through the chart over `U_c`,
/// in local indices.
fn transport(charts: &[Trivialization], fibers: &[Vec<usize>], local: &[usize], k: usize, b: usize, c: usize) -> Vec<usize> {
    let t = &charts[c];
    fibers[b]
        .iter()
        .map(|&x| {
            let f = t.coordinate(x).expect("chart covers U_c");
            local[t.locate(c, f, k).expect("chart is onto")]
        })
        .collect()
}

/// Builds `𝒟_p` from the stored charts.
///
/// With a T0 fiber the arrows are the transports `δ_{b,c}`. Otherwise the
/// transports are only used through their Kolmogorov quotients: the `k`-th
/// member (in label order) of an indistinguishability class goes to the
/// `k`-th member of the image class.
pub fn canonical_representation(bundle: &FiberBundle) -> Result<CanonicalRep> {
    let charts = bundle.charts()?;
    let total = bundle.total();
    let base = bundle.base();
    let k = bundle.fiber.len();
    let fibers: Vec<Vec<usize>> = base.points().map(|b| bundle.fiber_over(b)).collect();
    let mut local = vec![0; total.len()];
    for pts in &fibers {
        for (i, &x) in pts.iter().enumerate() {
            local[x] = i;
        }
    }
    let objects: Vec<Arc<FinSpace>> = fibers.iter().map(|pts| Arc::new(total.subspace(pts))).collect();
    let t0 = bundle.fiber.is_t0();
    let ks: Vec<_> = if t0 {
        Vec::new()
    } else {
        objects.iter().map(kolmogorov).collect()
    };
    // rank of each local point inside its class, and class members in label order
    let ranked: Vec<(Vec<usize>, Vec<Vec<usize>>)> = ks
        .iter()
        .zip(&objects)
        .map(|(kq, obj)| {
            let mut rank = vec![0; obj.len()];
            let members = kq
                .classes
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.sort_by(|&a, &b| obj.label(a).cmp(obj.label(b)));
                    for (r, &x) in c.iter().enumerate() {
                        rank[x] = r;
                    }
                    c
                })
                .collect();
            (rank, members)
        })
        .collect();
    let n = base.len();
    let mut arrows = vec![None; n * n];
    for (b, c) in base.closure_pairs() {
        let delta = transport(charts, &fibers, &local, k, b, c);
        let image = if t0 || b == c {
            delta
        } else {
            let d = ContinuousMap::new_unchecked(objects[b].clone(), objects[c].clone(), delta);
            let kd = kolmogorov_map_between(&d, &ks[b], &ks[c]);
            let (rank_b, _) = &ranked[b];
            let (_, members_c) = &ranked[c];
            objects[b]
                .points()
                .map(|x| members_c[kd.apply(ks[b].sigma.apply(x))][rank_b[x]])
                .collect()
        };
        arrows[b * n + c] = Some(ContinuousMap::new(objects[b].clone(), objects[c].clone(), image)?);
    }
    let functor = Arc::new(TopFunctor::from_table(base.clone(), objects, arrows));
    debug_assert!(functor.validate());
    Ok(CanonicalRep {
        bundle: bundle.clone(),
        functor,
        fibers,
    })
}

fn check_comparable(p: &FiberBundle, q: &FiberBundle) -> Result<()> {
    if !same_space(p.base(), q.base()) {
        return Err(Error::Mismatch("bundles live over different bases".into()));
    }
    if find_homeomorphism(p.fiber(), q.fiber()).is_none() {
        return Err(Error::Mismatch("bundles have non-homeomorphic fibers".into()));
    }
    Ok(())
}

/// An over-base homeomorphism `E_p -> E_q`, if one exists.
///
/// With a T0 fiber this is decided on canonical representations; otherwise
/// fiberwise bijections are backtracked directly.
pub fn bundle_iso(p: &FiberBundle, q: &FiberBundle, budget: Budget) -> Result<Option<ContinuousMap>> {
    check_comparable(p, q)?;
    p.charts()?;
    q.charts()?;
    if !p.fiber().is_t0() {
        return bundle_iso_direct(p, q, budget);
    }
    let rp = canonical_representation(p)?;
    let rq = canonical_representation(q)?;
    let Some(g) = natural_iso(&rp.functor, &rq.functor, budget)? else {
        return Ok(None);
    };
    let mut image = vec![0; p.total().len()];
    for (b, pts) in rp.fibers.iter().enumerate() {
        for (i, &x) in pts.iter().enumerate() {
            image[x] = rq.fibers[b][g[b].apply(i)];
        }
    }
    let h = ContinuousMap::new(p.total().clone(), q.total().clone(), image)?;
    debug_assert!(h.is_homeomorphism());
    Ok(Some(h))
}

/// Over-base homeomorphism search by plain backtracking over fiberwise bijections.
pub fn bundle_iso_direct(p: &FiberBundle, q: &FiberBundle, budget: Budget) -> Result<Option<ContinuousMap>> {
    if !same_space(p.base(), q.base()) {
        return Err(Error::Mismatch("bundles live over different bases".into()));
    }
    let (e, f) = (p.total(), q.total());
    if e.len() != f.len() {
        return Ok(None);
    }
    let base = p.base();
    let sig_e: Vec<[usize; 5]> = e.points().map(|x| e.point_signature(x)).collect();
    let sig_f: Vec<[usize; 5]> = f.points().map(|y| f.point_signature(y)).collect();
    let candidates = e
        .points()
        .map(|x| {
            f.points()
                .filter(|&y| q.map.apply(y) == p.map.apply(x) && sig_f[y] == sig_e[x])
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = e.points().collect();
    order.sort_by_key(|&x| {
        let b = p.map.apply(x);
        (std::cmp::Reverse(base.down(b).count_ones(..)), b, x)
    });
    let m = Matcher::new(e, f, order, candidates, true);
    let mut found = None;
    let _ = m.run(&mut Meter::new(budget), |img| {
        found = Some(img.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found.map(|img| ContinuousMap::new_unchecked(e.clone(), f.clone(), img)))
}

/// One isomorphism class in a [`ClassTable`].
#[derive(Clone, Debug)]
pub struct ClassEntry {
    /// The first enumerated functor of the class.
    pub functor: GroupFunctor,
    /// `π: ∫ιC -> B` for that functor.
    pub bundle: FiberBundle,
    /// Number of enumerated functors whose bundles fall in this class.
    pub size: u64,
    /// Position of `functor` in the enumeration.
    pub first: u64,
}

/// Bundles over `B` with fiber `F` up to isomorphism.
#[derive(Clone, Debug)]
pub struct ClassTable {
    pub base: Arc<FinSpace>,
    pub fiber: Arc<FinSpace>,
    pub group: Arc<AutGroup>,
    /// Number of functors `B -> Aut(F)` seen.
    pub functor_count: u64,
    /// Classes ordered by their first enumerated member.
    pub classes: Vec<ClassEntry>,
}

impl ClassTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

struct RawClass {
    values: Vec<u32>,
    size: u64,
    first: u64,
}

fn entry_from_raw(base: &Arc<FinSpace>, group: &Arc<AutGroup>, raw: &RawClass) -> Result<ClassEntry> {
    let functor = group_functor_from_values(base, group, &raw.values);
    let g = groth_trusted(&Arc::new(functor.to_top_functor()))?;
    let bundle = FiberBundle::from_groth(&g, group.space(), Budget::unlimited())?
        .expect("functors into the automorphism group give bundles");
    Ok(ClassEntry {
        functor,
        bundle,
        size: raw.size,
        first: raw.first,
    })
}

/// Classifies bundles over `B` with fiber `F`.
///
/// Functors `B -> Aut(F)` are enumerated and grouped by natural isomorphism
/// using a gauge-fixed normal form. For a T0 fiber these groups are the
/// bundle classes. For other fibers, groups whose bundles are isomorphic are
/// merged afterwards.
pub fn classify(base: &Arc<FinSpace>, fiber: &Arc<FinSpace>, budget: Budget) -> Result<ClassTable> {
    let group = Arc::new(AutGroup::new(fiber.clone()));
    let frame = GaugeFrame::new(base);
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut raw: Vec<RawClass> = Vec::new();
    let mut count = 0u64;
    let mut key = Vec::new();
    let outcome = enumerate_group_functors(base, &group, budget, |values| {
        frame.key_into(&group, values, &mut key);
        match index.get(key.as_slice()) {
            Some(&i) => raw[i].size += 1,
            None => {
                index.insert(key.clone(), raw.len());
                raw.push(RawClass {
                    values: values.to_vec(),
                    size: 1,
                    first: count,
                });
            }
        }
        count += 1;
        ControlFlow::Continue(())
    });
    let build = |raw: &[RawClass]| -> Result<Vec<ClassEntry>> {
        raw.iter().map(|r| entry_from_raw(base, &group, r)).collect()
    };
    if let Err(e) = outcome {
        if let Error::BudgetExceeded { limit } = e {
            let partial = ClassTable {
                base: base.clone(),
                fiber: fiber.clone(),
                group: group.clone(),
                functor_count: count,
                classes: build(&raw)?,
            };
            return Err(Error::ClassificationInconclusive {
                limit,
                partial: Box::new(partial),
            });
        }
        return Err(e);
    }
    let mut classes = build(&raw)?;
    if !fiber.is_t0() {
        classes = merge_isomorphic(classes, budget)?;
    }
    Ok(ClassTable {
        base: base.clone(),
        fiber: fiber.clone(),
        group,
        functor_count: count,
        classes,
    })
}

/// Union-find merge of classes with over-base isomorphic bundles.
fn merge_isomorphic(classes: Vec<ClassEntry>, budget: Budget) -> Result<Vec<ClassEntry>> {
    let k = classes.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..k {
        for j in i + 1..k {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                continue;
            }
            if bundle_iso_direct(&classes[i].bundle, &classes[j].bundle, budget)?.is_some() {
                // classes are in enumeration order, so the smaller root comes first
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut merged: Vec<ClassEntry> = Vec::new();
    let mut slot = vec![usize::MAX; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = merged.len();
            merged.push(classes[r].clone());
            merged.last_mut().unwrap().size = 0;
        }
        merged[slot[r]].size += classes[i].size;
    }
    Ok(merged)
}

/// The pullback bundle `f*p` over `X`, built as `∫(𝒟_p ∘ f)`.
pub fn pullback_bundle(p: &FiberBundle, f: &ContinuousMap) -> Result<FiberBundle> {
    if !same_space(f.cod(), p.base()) {
        return Err(Error::Mismatch("map does not land in the base of the bundle".into()));
    }
    let rep = canonical_representation(p)?;
    let df = Arc::new(rep.functor.precompose(f)?);
    let g = groth_trusted(&df)?;
    Ok(FiberBundle::from_groth(&g, p.fiber(), Budget::unlimited())?
        .expect("morphism-inverting functors give bundles"))
}

/// `B × F -> B` with identity charts.
pub fn trivial_bundle(base: &Arc<FinSpace>, fiber: &Arc<FinSpace>) -> FiberBundle {
    let k = fiber.len();
    let total = Arc::new(base.product(fiber));
    let map = ContinuousMap::new_unchecked(total.clone(), base.clone(), total.points().map(|i| i / k).collect());
    let charts = base
        .points()
        .map(|b| {
            total
                .points()
                .filter(|&i| base.leq(i / k, b))
                .map(|i| (i, i % k))
                .collect()
        })
        .collect();
    FiberBundle::with_charts(map, fiber.clone(), charts).expect("product charts are valid")
}

/// An automorphism `φ` of the trivial bundle over a two-point chain, with the
/// checks of its restrictions to the two fibers.
#[derive(Clone, Debug)]
pub struct TwoChainAutomorphism {
    pub map: ContinuousMap,
    /// `α_b = pr_F ∘ φ ∘ j_b` for the lower and the upper point.
    pub alphas: [ContinuousMap; 2],
    /// `K(α_{b0}) = K(α_{b1})`.
    pub kolmogorov_agree: bool,
    /// `K((c × Id) ∘ φ_0) = K(φ_1 ∘ (c × Id))` as maps between the two fibers.
    pub square_commutes: bool,
    /// `α` with `φ = Id × α`, when one exists.
    pub product_form: Option<ContinuousMap>,
}

/// Every over-base automorphism of `B × F` for the two-point chain `B`.
pub fn trivial_automorphisms(base: &Arc<FinSpace>, fiber: &Arc<FinSpace>) -> Result<Vec<TwoChainAutomorphism>> {
    let strict = base.strict_pairs();
    if base.len() != 2 || strict.len() != 1 {
        return Err(Error::NotTwoChain);
    }
    let (b0, b1) = strict[0];
    let bundle = trivial_bundle(base, fiber);
    let e = bundle.total().clone();
    let k = fiber.len();
    let candidates = e
        .points()
        .map(|x| e.points().filter(|&y| y / k == x / k).collect())
        .collect();
    let m = Matcher::new(&e, &e, e.points().collect(), candidates, true);
    let mut images = Vec::new();
    let _ = m.run(&mut Meter::new(Budget::unlimited()), |img| {
        images.push(img.to_vec());
        ControlFlow::Continue(())
    })?;
    let over0: Vec<usize> = (0..k).map(|y| b0 * k + y).collect();
    let over1: Vec<usize> = (0..k).map(|y| b1 * k + y).collect();
    let s0 = Arc::new(e.subspace(&over0));
    let s1 = Arc::new(e.subspace(&over1));
    let mut out = Vec::with_capacity(images.len());
    for img in images {
        let map = ContinuousMap::new_unchecked(e.clone(), e.clone(), img);
        let alpha = |b: usize| {
            let image = (0..k).map(|y| map.apply(b * k + y) % k).collect();
            ContinuousMap::new(fiber.clone(), fiber.clone(), image)
        };
        let (a0, a1) = (alpha(b0)?, alpha(b1)?);
        let kolmogorov_agree = kolmogorov_map(&a0) == kolmogorov_map(&a1);
        let left = ContinuousMap::new(s0.clone(), s1.clone(), a0.image().to_vec())?;
        let right = ContinuousMap::new(s0.clone(), s1.clone(), a1.image().to_vec())?;
        let square_commutes = kolmogorov_map(&left) == kolmogorov_map(&right);
        let product_form = (a0 == a1).then(|| a0.clone());
        out.push(TwoChainAutomorphism {
            map,
            alphas: [a0, a1],
            kolmogorov_agree,
            square_commutes,
            product_form,
        });
    }
    Ok(out)
}

/// `groth` followed by constructing the bundle of its projection.
pub fn groth_bundle(d: &Arc<TopFunctor>, fiber: &Arc<FinSpace>, budget: Budget) -> Result<Option<FiberBundle>> {
    let g = groth(d)?;
    FiberBundle::from_groth(&g, fiber, budget)
}
