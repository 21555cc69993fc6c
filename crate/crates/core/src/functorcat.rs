//! Functors from a finite base into finite spaces, automorphism groups,
//! the `⪯` preorder on maps and (weak) natural transformations.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finspace::{
    all_homeomorphisms, homeomorphisms_visit, same_space, Budget, ContinuousMap, FinSpace, Meter,
};

/// A functor `D: B -> Top` from a finite base space, stored with an arrow for
/// every comparable pair (identities included).
#[derive(Clone, PartialEq, Eq)]
pub struct TopFunctor {
    base: Arc<FinSpace>,
    objects: Vec<Arc<FinSpace>>,
    /// Row-major `n x n`; `Some` exactly on comparable pairs.
    arrows: Vec<Option<ContinuousMap>>,
}

/// A failure of the functor laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorViolation {
    /// `D(b <= b)` is not the identity.
    Identity(usize),
    /// `D(b' <= b'') ∘ D(b <= b') != D(b <= b'')`.
    Composition(usize, usize, usize),
}

impl FunctorViolation {
    pub fn describe(&self, base: &FinSpace) -> String {
        match *self {
            FunctorViolation::Identity(b) => {
                format!("arrow at {} <= {} is not the identity", base.label(b), base.label(b))
            }
            FunctorViolation::Composition(a, b, c) => format!(
                "chain {} <= {} <= {} does not compose",
                base.label(a),
                base.label(b),
                base.label(c)
            ),
        }
    }
}

impl TopFunctor {
    /// Builds a functor from objects and arrows on some comparable pairs.
    ///
    /// Identity arrows may be omitted. Every other missing pair is derived by
    /// composing given arrows along a shortest chain; an error is returned
    /// if no chain exists. The functor laws are not checked here, see
    /// [`TopFunctor::validate`].
    pub fn from_arrows(
        base: Arc<FinSpace>,
        objects: Vec<Arc<FinSpace>>,
        arrows: impl IntoIterator<Item = (usize, usize, ContinuousMap)>,
    ) -> Result<Self> {
        let n = base.len();
        if objects.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: objects.len(),
            });
        }
        let mut table: Vec<Option<ContinuousMap>> = vec![None; n * n];
        for (b, c, f) in arrows {
            base.check_point(b)?;
            base.check_point(c)?;
            if !base.leq(b, c) {
                return Err(Error::InvalidFunctor(format!(
                    "arrow given for incomparable pair {} -> {}",
                    base.label(b),
                    base.label(c)
                )));
            }
            if !same_space(f.dom(), &objects[b]) || !same_space(f.cod(), &objects[c]) {
                return Err(Error::Mismatch(format!(
                    "arrow {} <= {} does not go from D({}) to D({})",
                    base.label(b),
                    base.label(c),
                    base.label(b),
                    base.label(c)
                )));
            }
            if table[b * n + c].is_some() {
                return Err(Error::InvalidFunctor(format!(
                    "arrow {} <= {} given twice",
                    base.label(b),
                    base.label(c)
                )));
            }
            let f = f.retarget(objects[b].clone(), objects[c].clone())?;
            table[b * n + c] = Some(f);
        }
        for b in 0..n {
            if table[b * n + b].is_none() {
                table[b * n + b] = Some(ContinuousMap::identity(objects[b].clone()));
            }
        }
        let given: Vec<Vec<usize>> = (0..n)
            .map(|b| (0..n).filter(|&c| c != b && table[b * n + c].is_some()).collect())
            .collect();
        for b in 0..n {
            let mut parent = vec![usize::MAX; n];
            parent[b] = b;
            let mut queue = VecDeque::from([b]);
            while let Some(x) = queue.pop_front() {
                for &y in &given[x] {
                    if parent[y] == usize::MAX {
                        parent[y] = x;
                        queue.push_back(y);
                    }
                }
            }
            for c in 0..n {
                if c == b || !base.leq(b, c) || table[b * n + c].is_some() {
                    continue;
                }
                if parent[c] == usize::MAX {
                    return Err(Error::InvalidFunctor(format!(
                        "no arrow chain from {} to {}",
                        base.label(b),
                        base.label(c)
                    )));
                }
                let mut path = vec![c];
                while *path.last().unwrap() != b {
                    path.push(parent[*path.last().unwrap()]);
                }
                path.reverse();
                let mut acc = ContinuousMap::identity(objects[b].clone());
                for w in path.windows(2) {
                    let step = table[w[0] * n + w[1]].as_ref().unwrap();
                    acc = step.compose_unchecked(&acc);
                }
                table[b * n + c] = Some(acc);
            }
        }
        Ok(TopFunctor {
            base,
            objects,
            arrows: table,
        })
    }

    /// Like [`TopFunctor::from_arrows`], then rejects functors that break the laws.
    pub fn new(
        base: Arc<FinSpace>,
        objects: Vec<Arc<FinSpace>>,
        arrows: impl IntoIterator<Item = (usize, usize, ContinuousMap)>,
    ) -> Result<Self> {
        let d = Self::from_arrows(base, objects, arrows)?;
        if let Some(v) = d.functoriality_violations().first() {
            return Err(Error::InvalidFunctor(v.describe(&d.base)));
        }
        Ok(d)
    }

    /// The constant functor with value `fiber`.
    pub fn constant(base: Arc<FinSpace>, fiber: Arc<FinSpace>) -> Self {
        let n = base.len();
        let objects = vec![fiber.clone(); n];
        let id = ContinuousMap::identity(fiber);
        let arrows = (0..n * n)
            .map(|i| base.leq(i / n, i % n).then(|| id.clone()))
            .collect();
        TopFunctor {
            base,
            objects,
            arrows,
        }
    }

    /// Assembles a functor from a complete table. The caller guarantees the laws.
    pub(crate) fn from_table(
        base: Arc<FinSpace>,
        objects: Vec<Arc<FinSpace>>,
        arrows: Vec<Option<ContinuousMap>>,
    ) -> Self {
        debug_assert_eq!(arrows.len(), base.len() * base.len());
        TopFunctor {
            base,
            objects,
            arrows,
        }
    }

    pub fn base(&self) -> &Arc<FinSpace> {
        &self.base
    }

    pub fn object(&self, b: usize) -> &Arc<FinSpace> {
        &self.objects[b]
    }

    pub fn objects(&self) -> &[Arc<FinSpace>] {
        &self.objects
    }

    /// `D(b <= c)`. Panics if `b` and `c` are not comparable.
    pub fn arrow(&self, b: usize, c: usize) -> &ContinuousMap {
        self.try_arrow(b, c)
            .unwrap_or_else(|| panic!("{b} and {c} are not comparable"))
    }

    pub fn try_arrow(&self, b: usize, c: usize) -> Option<&ContinuousMap> {
        let n = self.base.len();
        if b >= n || c >= n {
            return None;
        }
        self.arrows[b * n + c].as_ref()
    }

    /// All arrows as `(b, c, D(b <= c))`, strict pairs only.
    pub fn strict_arrows(&self) -> impl Iterator<Item = (usize, usize, &ContinuousMap)> {
        let n = self.base.len();
        self.arrows.iter().enumerate().filter_map(move |(i, f)| {
            let (b, c) = (i / n, i % n);
            f.as_ref().filter(|_| b != c).map(|f| (b, c, f))
        })
    }

    pub fn functoriality_violations(&self) -> Vec<FunctorViolation> {
        let n = self.base.len();
        let mut out = Vec::new();
        for b in 0..n {
            if *self.arrow(b, b) != ContinuousMap::identity(self.objects[b].clone()) {
                out.push(FunctorViolation::Identity(b));
            }
        }
        for a in 0..n {
            for b in self.base.up(a).ones() {
                let ab = self.arrow(a, b);
                for c in self.base.up(b).ones() {
                    if a == b || b == c {
                        continue;
                    }
                    let bc = self.arrow(b, c);
                    let ac = self.arrow(a, c);
                    let same = ab.image().iter().zip(ac.image()).all(|(&y, &z)| bc.apply(y) == z);
                    if !same {
                        out.push(FunctorViolation::Composition(a, b, c));
                    }
                }
            }
        }
        out
    }

    /// True iff identities and compositions are respected on every chain.
    pub fn validate(&self) -> bool {
        self.functoriality_violations().is_empty()
    }

    /// True iff every arrow is a homeomorphism.
    pub fn is_morphism_inverting(&self) -> bool {
        self.arrows.iter().flatten().all(ContinuousMap::is_homeomorphism)
    }

    /// The functor `D ∘ f` over the domain of `f`.
    pub fn precompose(&self, f: &ContinuousMap) -> Result<TopFunctor> {
        if !same_space(f.cod(), &self.base) {
            return Err(Error::Mismatch("map does not land in the base".into()));
        }
        let x = f.dom().clone();
        let m = x.len();
        let objects = x.points().map(|p| self.objects[f.apply(p)].clone()).collect();
        let arrows = (0..m * m)
            .map(|i| {
                let (p, q) = (i / m, i % m);
                x.leq(p, q).then(|| self.arrow(f.apply(p), f.apply(q)).clone())
            })
            .collect();
        Ok(TopFunctor::from_table(x, objects, arrows))
    }
}

impl fmt::Debug for TopFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("TopFunctor");
        s.field("base", &self.base);
        s.field("objects", &self.objects);
        let arrows: Vec<String> = self
            .strict_arrows()
            .map(|(b, c, m)| format!("{}<={}: {:?}", self.base.label(b), self.base.label(c), m))
            .collect();
        s.field("arrows", &arrows);
        s.finish()
    }
}

/// Checks the functor laws; the free-function form of [`TopFunctor::validate`].
pub fn validate_functor(d: &TopFunctor) -> bool {
    d.validate()
}

pub fn is_morphism_inverting(d: &TopFunctor) -> bool {
    d.is_morphism_inverting()
}

/// Above this order the composition table is not cached.
const TABLE_LIMIT: usize = 1024;

/// The group of self-homeomorphisms of a finite space.
#[derive(Clone)]
pub struct AutGroup {
    space: Arc<FinSpace>,
    elements: Vec<ContinuousMap>,
    lookup: HashMap<Vec<usize>, usize>,
    /// `table[i * len + j]` is the index of `elements[i] ∘ elements[j]`.
    table: Option<Vec<u32>>,
    inverse: Vec<usize>,
}

impl AutGroup {
    /// All self-homeomorphisms, ordered lexicographically by their images.
    /// The identity is always element 0.
    pub fn new(space: Arc<FinSpace>) -> Self {
        let elements = all_homeomorphisms(&space, &space);
        let lookup: HashMap<Vec<usize>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.image().to_vec(), i))
            .collect();
        let find = |img: Vec<usize>| lookup[&img];
        let inverse = elements
            .iter()
            .map(|g| find(g.inverse().expect("homeomorphism").image().to_vec()))
            .collect();
        let k = elements.len();
        let table = (k <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(k * k);
            for a in &elements {
                for b in &elements {
                    t.push(find(a.compose_unchecked(b).image().to_vec()) as u32);
                }
            }
            t
        });
        AutGroup {
            space,
            elements,
            lookup,
            table,
            inverse,
        }
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ContinuousMap] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ContinuousMap {
        &self.elements[i]
    }

    pub const IDENTITY: usize = 0;

    /// Index of `g_i ∘ g_j`.
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.elements.len() + j] as usize,
            None => self.lookup[self.elements[i].compose_unchecked(&self.elements[j]).image()],
        }
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Index of a homeomorphism of the underlying space, given by its image.
    pub fn index_of(&self, image: &[usize]) -> Option<usize> {
        self.lookup.get(image).copied()
    }
}

impl fmt::Debug for AutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AutGroup")
            .field("space", &self.space)
            .field("order", &self.elements.len())
            .finish()
    }
}

pub fn aut_group(space: Arc<FinSpace>) -> AutGroup {
    AutGroup::new(space)
}

const UNSET: u32 = u32::MAX;

/// A functor `B -> Aut(F)`: a group element on every comparable pair.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupFunctor {
    base: Arc<FinSpace>,
    group: Arc<AutGroup>,
    /// Row-major `n x n`, [`UNSET`] on incomparable pairs.
    values: Vec<u32>,
}

impl PartialEq for AutGroup {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
    }
}

impl Eq for AutGroup {}

impl GroupFunctor {
    /// Builds a functor from group elements on some strict pairs, deriving
    /// the others along chains and checking the laws.
    pub fn new(
        base: Arc<FinSpace>,
        group: Arc<AutGroup>,
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let fiber = group.space.clone();
        let objects = vec![fiber; base.len()];
        let mut arrows = Vec::new();
        for (b, c, g) in edges {
            if g >= group.len() {
                return Err(Error::PointOutOfRange {
                    index: g,
                    len: group.len(),
                });
            }
            arrows.push((b, c, group.element(g).clone()));
        }
        let d = TopFunctor::new(base, objects, arrows)?;
        GroupFunctor::from_top(&d, group)
    }

    /// Reads a functor whose objects are all the group's space and whose
    /// arrows are all homeomorphisms.
    pub fn from_top(d: &TopFunctor, group: Arc<AutGroup>) -> Result<Self> {
        let n = d.base.len();
        let mut values = vec![UNSET; n * n];
        for (i, f) in d.arrows.iter().enumerate() {
            let Some(f) = f else { continue };
            if !same_space(f.dom(), &group.space) || !same_space(f.cod(), &group.space) {
                return Err(Error::Mismatch("object differs from the group's space".into()));
            }
            let g = group.index_of(f.image()).ok_or_else(|| {
                Error::InvalidFunctor("arrow is not an automorphism of the fiber".into())
            })?;
            values[i] = g as u32;
        }
        Ok(GroupFunctor {
            base: d.base.clone(),
            group,
            values,
        })
    }

    pub fn base(&self) -> &Arc<FinSpace> {
        &self.base
    }

    pub fn group(&self) -> &Arc<AutGroup> {
        &self.group
    }

    /// The group element on `b <= c`.
    pub fn value(&self, b: usize, c: usize) -> usize {
        let v = self.values[b * self.base.len() + c];
        assert!(v != UNSET, "{b} and {c} are not comparable");
        v as usize
    }

    /// The composite `ι ∘ C` into `Top`.
    pub fn to_top_functor(&self) -> TopFunctor {
        let fiber = self.group.space.clone();
        let objects = vec![fiber; self.base.len()];
        let arrows = self
            .values
            .iter()
            .map(|&v| (v != UNSET).then(|| self.group.element(v as usize).clone()))
            .collect();
        TopFunctor::from_table(self.base.clone(), objects, arrows)
    }

    /// A complete invariant of the natural isomorphism class; see [`GaugeFrame`].
    pub fn gauge_key(&self) -> Vec<u32> {
        GaugeFrame::new(&self.base).key(&self.group, &self.values)
    }
}

impl fmt::Debug for GroupFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.base.len();
        let edges: Vec<String> = (0..n * n)
            .filter(|&i| i / n != i % n && self.values[i] != UNSET)
            .map(|i| {
                format!(
                    "{}<={}: {:?}",
                    self.base.label(i / n),
                    self.base.label(i % n),
                    self.group.element(self.values[i] as usize).image()
                )
            })
            .collect();
        write!(f, "GroupFunctor[{}]", edges.join(", "))
    }
}

/// Spanning-forest data used to gauge-fix group functors.
///
/// In each connected component of the base a breadth-first tree is grown
/// from the least point. A natural isomorphism `h` acts by
/// `C(b <= c) ↦ h_c C(b <= c) h_b⁻¹`; choosing `h` to make every tree arrow
/// the identity leaves only a global conjugation per component. The
/// lexicographically least conjugate of the remaining arrows is therefore a
/// complete invariant of the natural isomorphism class.
pub(crate) struct GaugeFrame {
    n: usize,
    components: Vec<FrameComponent>,
}

/// A connected component: its root, the spanning-tree steps `(known, new)`
/// in visiting order, then the non-tree strict pairs as flat indices.
type FrameComponent = (usize, Vec<(usize, usize)>, Vec<usize>);

impl GaugeFrame {
    pub(crate) fn new(base: &FinSpace) -> Self {
        let n = base.len();
        let mut components = Vec::new();
        for comp in base.connected_components() {
            let root = comp[0];
            let mut seen = vec![false; n];
            seen[root] = true;
            let mut tree_pairs = vec![false; n * n];
            let mut steps = Vec::new();
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for y in base.points() {
                    if seen[y] || !(base.leq(x, y) || base.leq(y, x)) {
                        continue;
                    }
                    seen[y] = true;
                    queue.push_back(y);
                    let pair = if base.leq(x, y) { x * n + y } else { y * n + x };
                    tree_pairs[pair] = true;
                    steps.push((x, y));
                }
            }
            let rest = comp
                .iter()
                .flat_map(|&b| comp.iter().map(move |&c| (b, c)))
                .filter(|&(b, c)| b != c && base.leq(b, c) && !tree_pairs[b * n + c])
                .map(|(b, c)| b * n + c)
                .collect();
            components.push((root, steps, rest));
        }
        GaugeFrame { n, components }
    }

    /// Gauge `h_b` making tree arrows trivial, with `h_root = e`.
    fn gauge(&self, group: &AutGroup, values: &[u32], root: usize, steps: &[(usize, usize)]) -> Vec<usize> {
        let n = self.n;
        let mut h = vec![usize::MAX; n];
        h[root] = AutGroup::IDENTITY;
        for &(x, y) in steps {
            let forward = values[x * n + y];
            h[y] = if forward != UNSET {
                // x <= y: e = h_y C h_x⁻¹
                group.mul(h[x], group.inv(forward as usize))
            } else {
                // y <= x: e = h_x C h_y⁻¹
                group.mul(h[x], values[y * n + x] as usize)
            };
        }
        h
    }

    pub(crate) fn key(&self, group: &AutGroup, values: &[u32]) -> Vec<u32> {
        let mut key = Vec::new();
        self.key_into(group, values, &mut key);
        key
    }

    /// Writes the normal form of `values` into `key`, reusing its allocation.
    pub(crate) fn key_into(&self, group: &AutGroup, values: &[u32], key: &mut Vec<u32>) {
        let n = self.n;
        key.clear();
        let mut gauged = Vec::new();
        for (root, steps, rest) in &self.components {
            let h = self.gauge(group, values, *root, steps);
            gauged.clear();
            gauged.extend(rest.iter().map(|&i| {
                let (b, c) = (i / n, i % n);
                group.mul(group.mul(h[c], values[i] as usize), group.inv(h[b]))
            }));
            let start = key.len();
            key.extend(gauged.iter().map(|&v| v as u32));
            // least conjugate, comparing element by element
            for g in 1..group.len() {
                let gi = group.inv(g);
                for (j, &v) in gauged.iter().enumerate() {
                    let w = group.mul(group.mul(g, v), gi) as u32;
                    let cur = key[start + j];
                    if w > cur {
                        break;
                    }
                    if w < cur {
                        for (slot, &v) in key[start + j..].iter_mut().zip(&gauged[j..]) {
                            *slot = group.mul(group.mul(g, v), gi) as u32;
                        }
                        break;
                    }
                }
            }
        }
    }
}

/// Backtracking enumeration of functors into a group.
struct GroupSearch<'a> {
    base: &'a FinSpace,
    group: &'a AutGroup,
    n: usize,
    /// Strict comparable pairs in branching order.
    pairs: Vec<usize>,
    values: Vec<u32>,
    trail: Vec<usize>,
}

impl<'a> GroupSearch<'a> {
    fn new(base: &'a FinSpace, group: &'a AutGroup) -> Self {
        let n = base.len();
        let mut pairs: Vec<(usize, usize, usize)> = base
            .strict_pairs()
            .into_iter()
            .map(|(b, c)| {
                let interval = base.up(b).ones().filter(|&z| base.leq(z, c)).count();
                (interval, b, c)
            })
            .collect();
        pairs.sort_unstable();
        let mut values = vec![UNSET; n * n];
        for b in 0..n {
            values[b * n + b] = AutGroup::IDENTITY as u32;
        }
        GroupSearch {
            base,
            group,
            n,
            pairs: pairs.into_iter().map(|(_, b, c)| b * n + c).collect(),
            values,
            trail: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, b: usize, c: usize) -> Option<usize> {
        let v = self.values[b * self.n + c];
        (v != UNSET).then_some(v as usize)
    }

    /// A value for pair `(b, c)` implied by one triple with two known legs.
    fn forced(&self, b: usize, c: usize) -> Option<usize> {
        let g = self.group;
        for z in self.base.points() {
            if z == b || z == c {
                continue;
            }
            if self.base.leq(b, z) && self.base.leq(z, c) {
                if let (Some(bz), Some(zc)) = (self.get(b, z), self.get(z, c)) {
                    return Some(g.mul(zc, bz));
                }
            }
            if self.base.leq(c, z) {
                // C(c<=z) C(b<=c) = C(b<=z)
                if let (Some(cz), Some(bz)) = (self.get(c, z), self.get(b, z)) {
                    return Some(g.mul(g.inv(cz), bz));
                }
            }
            if self.base.leq(z, b) {
                // C(b<=c) C(z<=b) = C(z<=c)
                if let (Some(zb), Some(zc)) = (self.get(z, b), self.get(z, c)) {
                    return Some(g.mul(zc, g.inv(zb)));
                }
            }
        }
        if self.base.leq(c, b) {
            if let Some(cb) = self.get(c, b) {
                return Some(g.inv(cb));
            }
        }
        None
    }

    /// Checks every fully assigned triple through the pair `(b, c)`.
    fn consistent(&self, b: usize, c: usize) -> bool {
        let g = self.group;
        let bc = self.get(b, c).expect("assigned");
        for z in self.base.points() {
            if self.base.leq(c, z) {
                if let (Some(cz), Some(bz)) = (self.get(c, z), self.get(b, z)) {
                    if g.mul(cz, bc) != bz {
                        return false;
                    }
                }
            }
            if self.base.leq(z, b) {
                if let (Some(zb), Some(zc)) = (self.get(z, b), self.get(z, c)) {
                    if g.mul(bc, zb) != zc {
                        return false;
                    }
                }
            }
            if self.base.leq(b, z) && self.base.leq(z, c) {
                if let (Some(bz), Some(zc)) = (self.get(b, z), self.get(z, c)) {
                    if g.mul(zc, bz) != bc {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn assign(&mut self, pair: usize, v: usize) -> bool {
        self.values[pair] = v as u32;
        self.trail.push(pair);
        self.consistent(pair / self.n, pair % self.n)
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let p = self.trail.pop().unwrap();
            self.values[p] = UNSET;
        }
    }

    /// Assigns every forced pair; false on contradiction.
    fn propagate(&mut self) -> bool {
        loop {
            let mut progressed = false;
            for k in 0..self.pairs.len() {
                let p = self.pairs[k];
                if self.values[p] != UNSET {
                    continue;
                }
                if let Some(v) = self.forced(p / self.n, p % self.n) {
                    if !self.assign(p, v) {
                        return false;
                    }
                    progressed = true;
                }
            }
            if !progressed {
                return true;
            }
        }
    }

    fn run(
        &mut self,
        meter: &mut Meter,
        visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        meter.tick()?;
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo_to(mark);
            return Ok(ControlFlow::Continue(()));
        }
        let next = self.pairs.iter().copied().find(|&p| self.values[p] == UNSET);
        let flow = match next {
            None => visit(&self.values),
            Some(p) => {
                let mut flow = ControlFlow::Continue(());
                for v in 0..self.group.len() {
                    let inner = self.trail.len();
                    if self.assign(p, v) {
                        flow = self.run(meter, visit)?;
                    }
                    self.undo_to(inner);
                    if flow.is_break() {
                        break;
                    }
                }
                flow
            }
        };
        self.undo_to(mark);
        Ok(flow)
    }
}

/// Visits every functor `B -> Aut(F)` as a raw value table (row-major
/// `n x n`, `u32::MAX` on incomparable pairs), in a fixed deterministic order.
///
/// Free pairs are branched on in order of interval size; any pair implied by
/// a triple with two known legs is filled in immediately, and each triple is
/// checked as soon as it is fully assigned.
pub fn enumerate_group_functors(
    base: &Arc<FinSpace>,
    group: &Arc<AutGroup>,
    budget: Budget,
    mut visit: impl FnMut(&[u32]) -> ControlFlow<()>,
) -> Result<()> {
    let mut search = GroupSearch::new(base, group);
    let _ = search.run(&mut Meter::new(budget), &mut visit)?;
    Ok(())
}

/// Wraps a value table produced by [`enumerate_group_functors`].
pub fn group_functor_from_values(
    base: &Arc<FinSpace>,
    group: &Arc<AutGroup>,
    values: &[u32],
) -> GroupFunctor {
    GroupFunctor {
        base: base.clone(),
        group: group.clone(),
        values: values.to_vec(),
    }
}

/// Every functor `B -> Aut(F)`, as group functors.
pub fn enumerate_group_functor_list(base: &Arc<FinSpace>, group: &Arc<AutGroup>) -> Vec<GroupFunctor> {
    let mut out = Vec::new();
    enumerate_group_functors(base, group, Budget::unlimited(), |v| {
        out.push(group_functor_from_values(base, group, v));
        ControlFlow::Continue(())
    })
    .expect("unlimited budget");
    out
}

/// Every functor `B -> Aut(F)`, composed into `Top`.
pub fn enumerate_functors_to_aut(base: &Arc<FinSpace>, group: &Arc<AutGroup>) -> Vec<TopFunctor> {
    enumerate_group_functor_list(base, group)
        .iter()
        .map(GroupFunctor::to_top_functor)
        .collect()
}

fn same_base(c: &TopFunctor, d: &TopFunctor) -> Result<()> {
    if Arc::ptr_eq(&c.base, &d.base) || c.base == d.base {
        Ok(())
    } else {
        Err(Error::Mismatch("functors live over different bases".into()))
    }
}

/// Checks `g_c ∘ C(b <= c) = D(b <= c) ∘ g_b` pointwise.
fn square_commutes(cf: &ContinuousMap, df: &ContinuousMap, gb: &ContinuousMap, gc: &ContinuousMap) -> bool {
    cf.image()
        .iter()
        .zip(gb.image())
        .all(|(&y, &z)| gc.apply(y) == df.apply(z))
}

/// Searches a natural isomorphism `C ≅ D`: homeomorphisms `g_b: C(b) -> D(b)`
/// with `g_c ∘ C(b <= c) = D(b <= c) ∘ g_b` for all `b <= c`.
///
/// Each component of the base is rooted at its least point. When both
/// functors invert all arrows of the component, the root candidate alone
/// determines the family along a spanning tree; otherwise every point is
/// backtracked over. The returned family is the first found.
pub fn natural_iso(
    c: &TopFunctor,
    d: &TopFunctor,
    budget: Budget,
) -> Result<Option<Vec<ContinuousMap>>> {
    same_base(c, d)?;
    let base = &c.base;
    let n = base.len();
    let mut meter = Meter::new(budget);
    let mut family: Vec<Option<ContinuousMap>> = vec![None; n];
    for comp in base.connected_components() {
        let inverting = comp.iter().all(|&b| {
            comp.iter().all(|&e| {
                !base.leq(b, e)
                    || (c.arrow(b, e).is_homeomorphism() && d.arrow(b, e).is_homeomorphism())
            })
        });
        let found = if inverting {
            propagate_iso(c, d, &comp, &mut meter)?
        } else {
            backtrack_iso(c, d, &comp, &mut meter)?
        };
        match found {
            Some(part) => {
                for (b, g) in comp.iter().zip(part) {
                    family[*b] = Some(g);
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(family.into_iter().map(|g| g.expect("every point covered")).collect()))
}

fn component_holds(c: &TopFunctor, d: &TopFunctor, comp: &[usize], g: &[Option<ContinuousMap>]) -> bool {
    let base = &c.base;
    comp.iter().all(|&b| {
        comp.iter().all(|&e| {
            !base.leq(b, e)
                || square_commutes(
                    c.arrow(b, e),
                    d.arrow(b, e),
                    g[b].as_ref().unwrap(),
                    g[e].as_ref().unwrap(),
                )
        })
    })
}

fn propagate_iso(
    c: &TopFunctor,
    d: &TopFunctor,
    comp: &[usize],
    meter: &mut Meter,
) -> Result<Option<Vec<ContinuousMap>>> {
    let base = &c.base;
    let n = base.len();
    let root = comp[0];
    // spanning tree in BFS order
    let mut steps = Vec::new();
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in comp {
            if !seen[y] && (base.leq(x, y) || base.leq(y, x)) {
                seen[y] = true;
                queue.push_back(y);
                steps.push((x, y));
            }
        }
    }
    let mut result = None;
    homeomorphisms_visit(c.object(root), d.object(root), meter, |g0| {
        let mut g: Vec<Option<ContinuousMap>> = vec![None; n];
        g[root] = Some(g0);
        for &(x, y) in &steps {
            let gx = g[x].as_ref().unwrap();
            let gy = if base.leq(x, y) {
                // g_y = D(x<=y) g_x C(x<=y)⁻¹
                let cinv = c.arrow(x, y).inverse().expect("inverting");
                d.arrow(x, y).compose_unchecked(&gx.compose_unchecked(&cinv))
            } else {
                // g_y = D(y<=x)⁻¹ g_x C(y<=x)
                let dinv = d.arrow(y, x).inverse().expect("inverting");
                dinv.compose_unchecked(&gx.compose_unchecked(c.arrow(y, x)))
            };
            g[y] = Some(gy);
        }
        if component_holds(c, d, comp, &g) {
            result = Some(comp.iter().map(|&b| g[b].take().unwrap()).collect());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(result)
}

fn backtrack_iso(
    c: &TopFunctor,
    d: &TopFunctor,
    comp: &[usize],
    meter: &mut Meter,
) -> Result<Option<Vec<ContinuousMap>>> {
    let base = &c.base;
    let n = base.len();
    let mut candidates: Vec<Vec<ContinuousMap>> = vec![Vec::new(); n];
    for &b in comp {
        homeomorphisms_visit(c.object(b), d.object(b), meter, |h| {
            candidates[b].push(h);
            ControlFlow::Continue(())
        })?;
        if candidates[b].is_empty() {
            return Ok(None);
        }
    }
    let mut g: Vec<Option<ContinuousMap>> = vec![None; n];
    fn go(
        k: usize,
        comp: &[usize],
        c: &TopFunctor,
        d: &TopFunctor,
        candidates: &[Vec<ContinuousMap>],
        g: &mut Vec<Option<ContinuousMap>>,
        meter: &mut Meter,
    ) -> Result<bool> {
        if k == comp.len() {
            return Ok(true);
        }
        let b = comp[k];
        let base = c.base();
        for h in &candidates[b] {
            meter.tick()?;
            let ok = comp[..k].iter().all(|&e| {
                let ge = g[e].as_ref().unwrap();
                (!base.leq(e, b) || square_commutes(c.arrow(e, b), d.arrow(e, b), ge, h))
                    && (!base.leq(b, e) || square_commutes(c.arrow(b, e), d.arrow(b, e), h, ge))
            });
            if ok {
                g[b] = Some(h.clone());
                if go(k + 1, comp, c, d, candidates, g, meter)? {
                    return Ok(true);
                }
                g[b] = None;
            }
        }
        Ok(false)
    }
    if go(0, comp, c, d, &candidates, &mut g, meter)? {
        Ok(Some(comp.iter().map(|&b| g[b].take().unwrap()).collect()))
    } else {
        Ok(None)
    }
}

/// `f ⪯ g`: `g⁻¹(V) ⊆ f⁻¹(V)` for every open `V` of the codomain.
///
/// Every open set is a union of minimal opens, so only those are tested.
pub fn map_preceq(f: &ContinuousMap, g: &ContinuousMap) -> Result<bool> {
    if !same_space(f.dom(), g.dom()) || !same_space(f.cod(), g.cod()) {
        return Err(Error::Mismatch("maps have different domains or codomains".into()));
    }
    let cod = f.cod();
    Ok(cod.points().all(|y| {
        let u = cod.down(y);
        f.dom()
            .points()
            .all(|x| !u.contains(g.apply(x)) || u.contains(f.apply(x)))
    }))
}

fn check_components(theta: &[ContinuousMap], c: &TopFunctor, d: &TopFunctor) -> Result<()> {
    same_base(c, d)?;
    if theta.len() != c.base.len() {
        return Err(Error::ArityMismatch {
            expected: c.base.len(),
            got: theta.len(),
        });
    }
    for (b, t) in theta.iter().enumerate() {
        if !same_space(t.dom(), &c.objects[b]) || !same_space(t.cod(), &d.objects[b]) {
            return Err(Error::Mismatch(format!(
                "component at {} does not go from C({}) to D({})",
                c.base.label(b),
                c.base.label(b),
                c.base.label(b)
            )));
        }
    }
    Ok(())
}

/// `D(b1 <= b2) ∘ θ_{b1} ⪯ θ_{b2} ∘ C(b1 <= b2)` for all `b1 <= b2`.
pub fn is_weak_nat_trans(theta: &[ContinuousMap], c: &TopFunctor, d: &TopFunctor) -> Result<bool> {
    check_components(theta, c, d)?;
    Ok(weak_violation(theta, c, d).is_none())
}

/// Strict naturality: every square commutes.
pub fn is_nat_trans(theta: &[ContinuousMap], c: &TopFunctor, d: &TopFunctor) -> Result<bool> {
    check_components(theta, c, d)?;
    Ok(c.base.closure_pairs().into_iter().all(|(b, e)| {
        square_commutes(c.arrow(b, e), d.arrow(b, e), &theta[b], &theta[e])
    }))
}

fn weak_violation(theta: &[ContinuousMap], c: &TopFunctor, d: &TopFunctor) -> Option<(usize, usize)> {
    c.base.strict_pairs().into_iter().find(|&(b, e)| {
        let left = d.arrow(b, e);
        let cod = d.object(e);
        // pointwise ⪯, i.e. D(b<=e) θ_b (x) <= θ_e C(b<=e) (x)
        !c.object(b).points().all(|x| {
            cod.leq(left.apply(theta[b].apply(x)), theta[e].apply(c.arrow(b, e).apply(x)))
        })
    })
}

/// A family `θ_b: C(b) -> D(b)` satisfying the weak naturality condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakNatTrans {
    source: Arc<TopFunctor>,
    target: Arc<TopFunctor>,
    components: Vec<ContinuousMap>,
}

impl WeakNatTrans {
    pub fn new(
        source: Arc<TopFunctor>,
        target: Arc<TopFunctor>,
        components: Vec<ContinuousMap>,
    ) -> Result<Self> {
        check_components(&components, &source, &target)?;
        if let Some((b, e)) = weak_violation(&components, &source, &target) {
            return Err(Error::InvalidWeakNat(format!(
                "condition fails on {} <= {}",
                source.base.label(b),
                source.base.label(e)
            )));
        }
        let components = components
            .into_iter()
            .enumerate()
            .map(|(b, t)| {
                ContinuousMap::new_unchecked(
                    source.objects[b].clone(),
                    target.objects[b].clone(),
                    t.image().to_vec(),
                )
            })
            .collect();
        Ok(WeakNatTrans {
            source,
            target,
            components,
        })
    }

    pub fn identity(functor: Arc<TopFunctor>) -> Self {
        let components = functor
            .objects
            .iter()
            .map(|o| ContinuousMap::identity(o.clone()))
            .collect();
        WeakNatTrans {
            source: functor.clone(),
            target: functor,
            components,
        }
    }

    pub fn source(&self) -> &Arc<TopFunctor> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TopFunctor> {
        &self.target
    }

    pub fn components(&self) -> &[ContinuousMap] {
        &self.components
    }

    pub fn component(&self, b: usize) -> &ContinuousMap {
        &self.components[b]
    }

    /// True iff every naturality square commutes on the nose.
    pub fn is_strict(&self) -> bool {
        is_nat_trans(&self.components, &self.source, &self.target).expect("checked on construction")
    }
}

/// `θ ∘ ψ`, componentwise; `ψ` is applied first.
pub fn compose_weak(theta: &WeakNatTrans, psi: &WeakNatTrans) -> Result<WeakNatTrans> {
    if !(Arc::ptr_eq(&psi.target, &theta.source) || *psi.target == *theta.source) {
        return Err(Error::Mismatch(
            "target of the first transformation is not the source of the second".into(),
        ));
    }
    let components = theta
        .components
        .iter()
        .zip(&psi.components)
        .map(|(t, p)| t.compose_unchecked(p))
        .collect();
    WeakNatTrans::new(psi.source.clone(), theta.target.clone(), components)
}
