//! The topological Grothendieck construction `∫D` of a functor over a
//! finite base, its projection, induced maps and pullbacks.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::finspace::{same_space, tag_label, ContinuousMap, FinSpace};
use crate::functorcat::{TopFunctor, WeakNatTrans};

/// `∫D` with its projection to the base.
///
/// Points are the pairs `(b, x)` with `x ∈ D(b)`, ordered by base point and
/// then by fiber point, and `(β, y) <= (b, x)` iff `β <= b` and
/// `D(β <= b)(y) <= x`.
#[derive(Clone, Debug)]
pub struct GrothSpace {
    functor: Arc<TopFunctor>,
    space: Arc<FinSpace>,
    projection: ContinuousMap,
    tags: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl GrothSpace {
    pub fn functor(&self) -> &Arc<TopFunctor> {
        &self.functor
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn base(&self) -> &Arc<FinSpace> {
        self.functor.base()
    }

    /// `π: ∫D -> B`.
    pub fn projection(&self) -> &ContinuousMap {
        &self.projection
    }

    /// The pair `(b, x)` standing at point `p`.
    pub fn tag(&self, p: usize) -> (usize, usize) {
        self.tags[p]
    }

    pub fn tags(&self) -> &[(usize, usize)] {
        &self.tags
    }

    /// Index of `(b, x)`.
    pub fn point(&self, b: usize, x: usize) -> usize {
        debug_assert!(x < self.functor.object(b).len());
        self.offsets[b] + x
    }

    /// The points over `b`, i.e. `{b} × D(b)`.
    pub fn fiber_points(&self, b: usize) -> std::ops::Range<usize> {
        self.offsets[b]..self.offsets[b] + self.functor.object(b).len()
    }

    /// `ι_b: D(b) -> ∫D`, `x ↦ (b, x)`.
    pub fn embedding(&self, b: usize) -> ContinuousMap {
        let image = self.fiber_points(b).collect();
        ContinuousMap::new_unchecked(self.functor.object(b).clone(), self.space.clone(), image)
    }

    /// `J(b, V) = ⋃_{v <= b} {v} × D(v <= b)⁻¹(V)`, computed literally.
    pub fn j_basis(&self, b: usize, v: &[usize]) -> Result<Vec<usize>> {
        let base = self.functor.base();
        base.check_point(b)?;
        let fiber = self.functor.object(b);
        if !fiber.is_open(v) {
            return Err(Error::NotOpen(format!(
                "{v:?} in the fiber over {}",
                base.label(b)
            )));
        }
        let mut member = FixedBitSet::with_capacity(fiber.len());
        member.extend(v.iter().copied());
        let mut out = Vec::new();
        for w in base.down(b).ones() {
            let f = self.functor.arrow(w, b);
            out.extend(
                self.functor
                    .object(w)
                    .points()
                    .filter(|&y| member.contains(f.apply(y)))
                    .map(|y| self.point(w, y)),
            );
        }
        out.sort_unstable();
        Ok(out)
    }

    /// The preimage of a set of base points.
    pub fn over(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().flat_map(|&b| self.fiber_points(b)).collect();
        out.sort_unstable();
        out
    }
}

/// Builds `∫D`, checking the functor laws first.
pub fn groth(d: &Arc<TopFunctor>) -> Result<GrothSpace> {
    if let Some(v) = d.functoriality_violations().first() {
        return Err(Error::InvalidFunctor(v.describe(d.base())));
    }
    groth_trusted(d)
}

/// Builds `∫D` for a functor already known to satisfy the laws.
pub(crate) fn groth_trusted(d: &Arc<TopFunctor>) -> Result<GrothSpace> {
    let base = d.base();
    let mut tags = Vec::new();
    let mut offsets = Vec::with_capacity(base.len());
    let mut labels = Vec::new();
    for b in base.points() {
        offsets.push(tags.len());
        let obj = d.object(b);
        for x in obj.points() {
            tags.push((b, x));
            labels.push(tag_label(base.label(b), obj.label(x)));
        }
    }
    let space = Arc::new(FinSpace::from_closed_relation(labels, |p, q| {
        let (beta, y) = tags[p];
        let (b, x) = tags[q];
        base.leq(beta, b) && d.object(b).leq(d.arrow(beta, b).apply(y), x)
    })?);
    let projection = ContinuousMap::new_unchecked(
        space.clone(),
        base.clone(),
        tags.iter().map(|&(b, _)| b).collect(),
    );
    Ok(GrothSpace {
        functor: d.clone(),
        space,
        projection,
        tags,
        offsets,
    })
}

/// `J(b, V)` for the construction of `g`.
pub fn j_basis(g: &GrothSpace, b: usize, v: &[usize]) -> Result<Vec<usize>> {
    g.j_basis(b, v)
}

/// The over-base map `∫C -> ∫D`, `(b, x) ↦ (b, θ_b(x))`.
pub fn induced_map(theta: &WeakNatTrans) -> Result<ContinuousMap> {
    let src = groth(theta.source())?;
    let tgt = groth(theta.target())?;
    induced_between(theta, &src, &tgt)
}

/// [`induced_map`] between constructions that are already built.
pub fn induced_between(theta: &WeakNatTrans, src: &GrothSpace, tgt: &GrothSpace) -> Result<ContinuousMap> {
    if !(Arc::ptr_eq(src.functor(), theta.source()) || **src.functor() == **theta.source())
        || !(Arc::ptr_eq(tgt.functor(), theta.target()) || **tgt.functor() == **theta.target())
    {
        return Err(Error::Mismatch("constructions do not match the transformation".into()));
    }
    let image = src
        .tags
        .iter()
        .map(|&(b, x)| tgt.point(b, theta.component(b).apply(x)))
        .collect();
    ContinuousMap::new(src.space.clone(), tgt.space.clone(), image)
        .map_err(|e| Error::InvalidWeakNat(e.to_string()))
}

/// `hom_bijection_forward(θ) = ∫θ`.
pub fn hom_bijection_forward(theta: &WeakNatTrans, src: &GrothSpace, tgt: &GrothSpace) -> Result<ContinuousMap> {
    induced_between(theta, src, tgt)
}

/// Recovers the components `α_b = ι_b⁻¹ ∘ α ∘ ι_b` of an over-base map.
pub fn hom_bijection_back(alpha: &ContinuousMap, src: &GrothSpace, tgt: &GrothSpace) -> Result<WeakNatTrans> {
    if !same_space(alpha.dom(), &src.space) || !same_space(alpha.cod(), &tgt.space) {
        return Err(Error::Mismatch(
            "map does not go between the given constructions".into(),
        ));
    }
    if !same_space(src.base(), tgt.base()) {
        return Err(Error::Mismatch("constructions live over different bases".into()));
    }
    for (p, &(b, _)) in src.tags.iter().enumerate() {
        let (c, _) = tgt.tag(alpha.apply(p));
        if c != b {
            return Err(Error::NotOverBase(format!(
                "{} lands over {}",
                src.space.label(p),
                src.base().label(c)
            )));
        }
    }
    let components = src
        .base()
        .points()
        .map(|b| {
            let image = src
                .fiber_points(b)
                .map(|p| tgt.tag(alpha.apply(p)).1)
                .collect();
            ContinuousMap::new_unchecked(
                src.functor.object(b).clone(),
                tgt.functor.object(b).clone(),
                image,
            )
        })
        .collect();
    WeakNatTrans::new(src.functor.clone(), tgt.functor.clone(), components)
}

/// The pullback of a Grothendieck projection along `f: X -> B`.
#[derive(Clone, Debug)]
pub struct Pullback {
    /// `D ∘ f` over `X`.
    pub functor: Arc<TopFunctor>,
    /// `∫(D ∘ f)`.
    pub total: GrothSpace,
    /// `∫D`.
    pub target: GrothSpace,
    /// `g(x, y) = (f(x), y)`.
    pub over_map: ContinuousMap,
}

pub fn pullback_functor(d: &Arc<TopFunctor>, f: &ContinuousMap) -> Result<Pullback> {
    let df = Arc::new(d.precompose(f)?);
    let total = groth(&df)?;
    let target = groth(d)?;
    let image = total
        .tags
        .iter()
        .map(|&(x, y)| target.point(f.apply(x), y))
        .collect();
    let over_map = ContinuousMap::new_unchecked(total.space.clone(), target.space.clone(), image);
    Ok(Pullback {
        functor: df,
        total,
        target,
        over_map,
    })
}
