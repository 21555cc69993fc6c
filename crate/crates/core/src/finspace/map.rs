use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::FinSpace;
use crate::error::{Error, Result};

/// An order-preserving function between finite spaces, i.e. a continuous map.
#[derive(Clone)]
pub struct ContinuousMap {
    dom: Arc<FinSpace>,
    cod: Arc<FinSpace>,
    image: Vec<usize>,
}

impl PartialEq for ContinuousMap {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
            && (Arc::ptr_eq(&self.dom, &other.dom) || self.dom == other.dom)
            && (Arc::ptr_eq(&self.cod, &other.cod) || self.cod == other.cod)
    }
}

impl Eq for ContinuousMap {}

impl ContinuousMap {
    pub fn new(dom: Arc<FinSpace>, cod: Arc<FinSpace>, image: Vec<usize>) -> Result<Self> {
        if image.len() != dom.len() {
            return Err(Error::ArityMismatch {
                expected: dom.len(),
                got: image.len(),
            });
        }
        if let Some(&y) = image.iter().find(|&&y| y >= cod.len()) {
            return Err(Error::PointOutOfRange {
                index: y,
                len: cod.len(),
            });
        }
        let map = ContinuousMap { dom, cod, image };
        if let Some((x, y)) = map.continuity_violation() {
            return Err(Error::NotContinuous(format!(
                "{} <= {} but {} </= {}",
                map.dom.label(x),
                map.dom.label(y),
                map.cod.label(map.image[x]),
                map.cod.label(map.image[y])
            )));
        }
        Ok(map)
    }

    /// Caller guarantees the image is order-preserving.
    pub(crate) fn new_unchecked(dom: Arc<FinSpace>, cod: Arc<FinSpace>, image: Vec<usize>) -> Self {
        debug_assert_eq!(image.len(), dom.len());
        let map = ContinuousMap { dom, cod, image };
        debug_assert!(map.continuity_violation().is_none());
        map
    }

    /// First pair `x <= y` (row-major) whose images are not ordered.
    pub fn continuity_violation(&self) -> Option<(usize, usize)> {
        self.dom.closure_pairs().into_iter().find(|&(x, y)| {
            !self.cod.leq(self.image[x], self.image[y])
        })
    }

    pub fn identity(space: Arc<FinSpace>) -> Self {
        let image = space.points().collect();
        ContinuousMap {
            dom: space.clone(),
            cod: space,
            image,
        }
    }

    pub fn constant(dom: Arc<FinSpace>, cod: Arc<FinSpace>, value: usize) -> Result<Self> {
        cod.check_point(value)?;
        let image = vec![value; dom.len()];
        Ok(ContinuousMap { dom, cod, image })
    }

    pub fn dom(&self) -> &Arc<FinSpace> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinSpace> {
        &self.cod
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &ContinuousMap) -> Result<ContinuousMap> {
        if !(Arc::ptr_eq(&inner.cod, &self.dom) || *inner.cod == *self.dom) {
            return Err(Error::Mismatch(
                "codomain of the inner map differs from the domain of the outer map".into(),
            ));
        }
        Ok(self.compose_unchecked(inner))
    }

    pub(crate) fn compose_unchecked(&self, inner: &ContinuousMap) -> ContinuousMap {
        ContinuousMap {
            dom: inner.dom.clone(),
            cod: self.cod.clone(),
            image: inner.image.iter().map(|&y| self.image[y]).collect(),
        }
    }

    /// Same function, reinterpreted between other spaces with the same shape.
    pub(crate) fn retarget(&self, dom: Arc<FinSpace>, cod: Arc<FinSpace>) -> Result<ContinuousMap> {
        ContinuousMap::new(dom, cod, self.image.clone())
    }

    pub fn preimage(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.dom.len());
        out.extend(self.dom.points().filter(|&x| set.contains(self.image[x])));
        out
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.cod.len());
        self.image.iter().all(|&y| !seen.put(y))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.cod.len());
        seen.extend(self.image.iter().copied());
        seen.count_ones(..) == self.cod.len()
    }

    /// The inverse, if this map is a homeomorphism.
    pub fn inverse(&self) -> Option<ContinuousMap> {
        if self.dom.len() != self.cod.len() || !self.is_injective() {
            return None;
        }
        let mut inv = vec![0; self.cod.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        ContinuousMap::new(self.cod.clone(), self.dom.clone(), inv).ok()
    }

    pub fn is_homeomorphism(&self) -> bool {
        self.inverse().is_some()
    }
}

impl fmt::Debug for ContinuousMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .dom
            .points()
            .map(|x| format!("{}->{}", self.dom.label(x), self.cod.label(self.image[x])))
            .collect();
        write!(f, "ContinuousMap[{}]", pairs.join(", "))
    }
}
