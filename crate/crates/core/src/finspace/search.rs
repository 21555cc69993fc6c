//! Backtracking search for order-preserving maps and order isomorphisms.

use std::ops::ControlFlow;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{ContinuousMap, FinSpace};
use crate::error::{Error, Result};

/// Upper bound on the number of search nodes a single operation may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    pub fn new(limit: u64) -> Self {
        Budget(limit)
    }

    pub fn unlimited() -> Self {
        Budget(u64::MAX)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// Counts search nodes against a [`Budget`].
#[derive(Debug)]
pub(crate) struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Meter {
            limit: budget.0,
            used: 0,
        }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// A relation between a step of the variable order and an earlier step.
#[derive(Clone, Copy)]
struct Link {
    earlier: usize,
    below: bool,
    above: bool,
}

/// Enumerates functions `dom -> cod` drawn from per-point candidate lists.
///
/// In map mode the functions are exactly the order-preserving ones; in
/// bijective mode they are the order isomorphisms (injective, with
/// `x <= y` iff `f(x) <= f(y)`). Points are assigned in `order`, candidates
/// are tried in list order, so the visiting order is lexicographic with
/// respect to those two choices.
pub(crate) struct Matcher<'a> {
    cod: &'a FinSpace,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    bijective: bool,
    links: Vec<Vec<Link>>,
}

impl<'a> Matcher<'a> {
    pub(crate) fn new(
        dom: &'a FinSpace,
        cod: &'a FinSpace,
        order: Vec<usize>,
        candidates: Vec<Vec<usize>>,
        bijective: bool,
    ) -> Self {
        debug_assert_eq!(order.len(), dom.len());
        debug_assert_eq!(candidates.len(), dom.len());
        let links = order
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                order[..i]
                    .iter()
                    .map(|&e| Link {
                        earlier: e,
                        below: dom.leq(e, x),
                        above: dom.leq(x, e),
                    })
                    .filter(|l| bijective || l.below || l.above)
                    .collect()
            })
            .collect();
        Matcher {
            cod,
            order,
            candidates,
            bijective,
            links,
        }
    }

    /// Candidates are all of `cod`, in index order, and points go in index order.
    pub(crate) fn complete(dom: &'a FinSpace, cod: &'a FinSpace, bijective: bool) -> Self {
        let all: Vec<usize> = cod.points().collect();
        Self::new(dom, cod, dom.points().collect(), vec![all; dom.len()], bijective)
    }

    pub(crate) fn run(
        &self,
        meter: &mut Meter,
        mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        if self.bijective && self.order.len() != self.cod.len() {
            return Ok(ControlFlow::Continue(()));
        }
        let mut image = vec![usize::MAX; self.order.len()];
        let mut used = FixedBitSet::with_capacity(self.cod.len());
        self.step(0, &mut image, &mut used, meter, &mut visit)
    }

    fn step(
        &self,
        i: usize,
        image: &mut [usize],
        used: &mut FixedBitSet,
        meter: &mut Meter,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        if i == self.order.len() {
            return Ok(visit(image));
        }
        let x = self.order[i];
        for &c in &self.candidates[x] {
            meter.tick()?;
            if self.bijective && used.contains(c) {
                continue;
            }
            if !self.consistent(i, c, image) {
                continue;
            }
            image[x] = c;
            used.insert(c);
            let flow = self.step(i + 1, image, used, meter, visit)?;
            used.set(c, false);
            image[x] = usize::MAX;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    #[inline]
    fn consistent(&self, i: usize, c: usize, image: &[usize]) -> bool {
        self.links[i].iter().all(|l| {
            let e = image[l.earlier];
            if self.bijective {
                self.cod.leq(e, c) == l.below && self.cod.leq(c, e) == l.above
            } else {
                (!l.below || self.cod.leq(e, c)) && (!l.above || self.cod.leq(c, e))
            }
        })
    }
}

/// Anything that can be turned into a shared space handle.
pub trait IntoShared {
    fn into_shared(self) -> Arc<FinSpace>;
}

impl IntoShared for FinSpace {
    fn into_shared(self) -> Arc<FinSpace> {
        Arc::new(self)
    }
}

impl IntoShared for &FinSpace {
    fn into_shared(self) -> Arc<FinSpace> {
        Arc::new(self.clone())
    }
}

impl IntoShared for Arc<FinSpace> {
    fn into_shared(self) -> Arc<FinSpace> {
        self
    }
}

impl IntoShared for &Arc<FinSpace> {
    fn into_shared(self) -> Arc<FinSpace> {
        self.clone()
    }
}

/// Candidate images by signature, or `None` if the signature multisets differ.
fn signature_candidates(x: &FinSpace, y: &FinSpace) -> Option<Vec<Vec<usize>>> {
    if x.len() != y.len() {
        return None;
    }
    let sx: Vec<[usize; 5]> = x.points().map(|p| x.point_signature(p)).collect();
    let sy: Vec<[usize; 5]> = y.points().map(|p| y.point_signature(p)).collect();
    let (mut a, mut b) = (sx.clone(), sy.clone());
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    Some(
        sx.iter()
            .map(|s| y.points().filter(|&q| sy[q] == *s).collect())
            .collect(),
    )
}

pub(crate) fn homeomorphisms_visit(
    x: &Arc<FinSpace>,
    y: &Arc<FinSpace>,
    meter: &mut Meter,
    mut visit: impl FnMut(ContinuousMap) -> ControlFlow<()>,
) -> Result<()> {
    let Some(candidates) = signature_candidates(x, y) else {
        return Ok(());
    };
    let m = Matcher::new(x, y, x.points().collect(), candidates, true);
    let _ = m.run(meter, |img| {
        visit(ContinuousMap::new_unchecked(x.clone(), y.clone(), img.to_vec()))
    })?;
    Ok(())
}

/// The lexicographically least order isomorphism `X -> Y`, if any.
pub fn find_homeomorphism(x: impl IntoShared, y: impl IntoShared) -> Option<ContinuousMap> {
    find_homeomorphism_with(x, y, Budget::unlimited()).expect("unlimited budget")
}

/// [`find_homeomorphism`] with a node budget.
pub fn find_homeomorphism_with(
    x: impl IntoShared,
    y: impl IntoShared,
    budget: Budget,
) -> Result<Option<ContinuousMap>> {
    let (x, y) = (x.into_shared(), y.into_shared());
    let mut found = None;
    homeomorphisms_visit(&x, &y, &mut Meter::new(budget), |h| {
        found = Some(h);
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Every order isomorphism `X -> Y`, in lexicographic order of images.
pub fn all_homeomorphisms(x: impl IntoShared, y: impl IntoShared) -> Vec<ContinuousMap> {
    let (x, y) = (x.into_shared(), y.into_shared());
    let mut out = Vec::new();
    homeomorphisms_visit(&x, &y, &mut Meter::new(Budget::unlimited()), |h| {
        out.push(h);
        ControlFlow::Continue(())
    })
    .expect("unlimited budget");
    out
}

/// Every continuous map `X -> Y`, in lexicographic order of images.
pub fn enumerate_maps(x: impl IntoShared, y: impl IntoShared) -> Vec<ContinuousMap> {
    let (x, y) = (x.into_shared(), y.into_shared());
    let mut out = Vec::new();
    let _ = Matcher::complete(&x, &y, false)
        .run(&mut Meter::new(Budget::unlimited()), |img| {
            out.push(ContinuousMap::new_unchecked(x.clone(), y.clone(), img.to_vec()));
            ControlFlow::Continue(())
        })
        .expect("unlimited budget");
    out
}
