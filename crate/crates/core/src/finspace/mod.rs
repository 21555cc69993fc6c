//! Finite Alexandroff spaces, stored as preorders.
//!
//! A finite topological space is the same thing as a finite preordered set:
//! `x <= y` iff the minimal open neighbourhood `U_x` is contained in `U_y`, and
//! the open sets are exactly the down-sets. Points are identified by their
//! position; labels only matter for input and output.

mod kolmogorov;
mod map;
mod search;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use kolmogorov::{kolmogorov, kolmogorov_map, KolmogorovQuotient};
pub(crate) use kolmogorov::kolmogorov_map_between;
pub use map::ContinuousMap;
pub use search::{
    all_homeomorphisms, enumerate_maps, find_homeomorphism, find_homeomorphism_with, Budget,
    IntoShared,
};
pub(crate) use search::{homeomorphisms_visit, Matcher, Meter};

/// A finite preordered set standing for a finite Alexandroff space.
#[derive(Clone)]
pub struct FinSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// `down[x]` is the minimal open set `U_x = {y : y <= x}`.
    down: Vec<FixedBitSet>,
    /// `up[x] = {y : x <= y}`.
    up: Vec<FixedBitSet>,
    generators: Vec<(usize, usize)>,
}

impl PartialEq for FinSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.down == other.down
    }
}

impl Eq for FinSpace {}

impl FinSpace {
    /// Builds a space from labels and generating relations `a <= b`, taking the
    /// reflexive-transitive closure.
    pub fn from_relations<L, G>(labels: impl IntoIterator<Item = L>, generators: G) -> Result<Self>
    where
        L: Into<String>,
        G: IntoIterator,
        G::Item: LabelPair,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let index = build_index(&labels)?;
        let mut gens = Vec::new();
        for pair in generators {
            let (a, b) = pair.labels();
            let a = *index.get(a).ok_or_else(|| Error::UnknownLabel(a.to_string()))?;
            let b = *index.get(b).ok_or_else(|| Error::UnknownLabel(b.to_string()))?;
            gens.push((a, b));
        }
        Ok(Self::closed(labels, index, gens, true))
    }

    /// Same as [`FinSpace::from_relations`] with generators given by index.
    pub fn from_index_relations(labels: Vec<String>, generators: Vec<(usize, usize)>) -> Result<Self> {
        let index = build_index(&labels)?;
        let n = labels.len();
        for &(a, b) in &generators {
            for i in [a, b] {
                if i >= n {
                    return Err(Error::PointOutOfRange { index: i, len: n });
                }
            }
        }
        Ok(Self::closed(labels, index, generators, true))
    }

    /// Builds a space from a relation that is already known to be reflexive and
    /// transitive. Generators are recomputed as a covering relation.
    pub(crate) fn from_closed_relation(
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let index = build_index(&labels)?;
        let n = labels.len();
        let mut gens = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    gens.push((a, b));
                }
            }
        }
        let mut space = Self::closed(labels, index, gens, false);
        space.generators = space.covering_generators();
        Ok(space)
    }

    fn closed(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        generators: Vec<(usize, usize)>,
        keep_generators: bool,
    ) -> Self {
        let n = labels.len();
        let mut up: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert(i);
                row
            })
            .collect();
        for &(a, b) in &generators {
            up[a].insert(b);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        FinSpace {
            labels,
            index,
            down,
            up,
            generators: if keep_generators { generators } else { Vec::new() },
        }
    }

    pub fn empty() -> Self {
        Self::closed(Vec::new(), HashMap::new(), Vec::new(), true)
    }

    pub fn point(label: impl Into<String>) -> Self {
        let labels = vec![label.into()];
        let index = build_index(&labels).expect("single label");
        Self::closed(labels, index, Vec::new(), true)
    }

    /// Discrete space on labels `0..n`.
    pub fn discrete(n: usize) -> Self {
        Self::from_index_relations(numbered(n), Vec::new()).expect("distinct labels")
    }

    /// Indiscrete space on labels `0..n`.
    pub fn indiscrete(n: usize) -> Self {
        let gens = (1..n).flat_map(|i| [(0, i), (i, 0)]).collect();
        Self::from_index_relations(numbered(n), gens).expect("distinct labels")
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let gens = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_index_relations(numbered(n), gens).expect("distinct labels")
    }

    /// Sierpinski space: points `0 < 1`, with `{0}` the only non-trivial open set.
    pub fn sierpinski() -> Self {
        Self::chain(2)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn point_named(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The generating relations as supplied (or a covering relation for derived spaces).
    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// Topologically indistinguishable points.
    #[inline]
    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    /// `U_x` as a bit set.
    pub fn down(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn up(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// The minimal open neighbourhood `U_x = {y : y <= x}`.
    pub fn minimal_open(&self, x: usize) -> Result<Vec<usize>> {
        self.check_point(x)?;
        Ok(self.down[x].ones().collect())
    }

    pub(crate) fn check_point(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                index: x,
                len: self.len(),
            })
        }
    }

    /// True iff `set` is a down-set. Indices out of range make the answer false.
    pub fn is_open(&self, set: &[usize]) -> bool {
        let n = self.len();
        if set.iter().any(|&x| x >= n) {
            return false;
        }
        let mut member = FixedBitSet::with_capacity(n);
        member.extend(set.iter().copied());
        self.is_open_bits(&member)
    }

    pub fn is_open_bits(&self, member: &FixedBitSet) -> bool {
        member.ones().all(|x| self.down[x].is_subset(member))
    }

    pub fn is_t0(&self) -> bool {
        self.points()
            .all(|x| self.up[x].ones().all(|y| y == x || !self.leq(y, x)))
    }

    /// All pairs `x <= y`, including the reflexive ones, in row-major order.
    pub fn closure_pairs(&self) -> Vec<(usize, usize)> {
        self.points()
            .flat_map(|x| self.up[x].ones().map(move |y| (x, y)))
            .collect()
    }

    /// All pairs `x <= y` with `x != y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        self.closure_pairs()
            .into_iter()
            .filter(|&(x, y)| x != y)
            .collect()
    }

    /// Every open set, each sorted, in lexicographic order of the sorted lists.
    pub fn opens(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut chosen = FixedBitSet::with_capacity(n);
        let mut excluded = FixedBitSet::with_capacity(n);
        self.opens_rec(0, &mut chosen, &mut excluded, &mut out);
        out.sort();
        out
    }

    fn opens_rec(
        &self,
        x: usize,
        chosen: &mut FixedBitSet,
        excluded: &mut FixedBitSet,
        out: &mut Vec<Vec<usize>>,
    ) {
        if x == self.len() {
            out.push(chosen.ones().collect());
            return;
        }
        // include x: nothing below x may be excluded
        if self.down[x].is_disjoint(excluded) {
            chosen.insert(x);
            self.opens_rec(x + 1, chosen, excluded, out);
            chosen.set(x, false);
        }
        // exclude x: nothing above x may be chosen
        if self.up[x].is_disjoint(chosen) {
            excluded.insert(x);
            self.opens_rec(x + 1, chosen, excluded, out);
            excluded.set(x, false);
        }
    }

    /// Components of the comparability graph, each sorted, ordered by least member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for y in self.up[x].ones().chain(self.down[x].ones()) {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Subspace on `points`, in the given order, keeping labels.
    pub fn subspace(&self, points: &[usize]) -> FinSpace {
        let labels = points.iter().map(|&p| self.labels[p].clone()).collect();
        FinSpace::from_closed_relation(labels, |a, b| self.leq(points[a], points[b]))
            .expect("subspace of distinct points")
    }

    /// A copy with new labels, keeping the order.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<FinSpace> {
        if labels.len() != self.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                got: labels.len(),
            });
        }
        let index = build_index(&labels)?;
        Ok(FinSpace {
            labels,
            index,
            down: self.down.clone(),
            up: self.up.clone(),
            generators: self.generators.clone(),
        })
    }

    /// Cartesian product with the product order; point `(x, y)` sits at `x * |Y| + y`.
    pub fn product(&self, other: &FinSpace) -> FinSpace {
        let m = other.len();
        let labels = (0..self.len() * m)
            .map(|i| pair_label(self.label(i / m), other.label(i % m)))
            .collect();
        FinSpace::from_closed_relation(labels, |a, b| {
            self.leq(a / m, b / m) && other.leq(a % m, b % m)
        })
        .expect("product labels are distinct")
    }

    /// Non-Hausdorff cone: adds a maximum `+`.
    pub fn cone(&self) -> Result<FinSpace> {
        if self.index_of("+").is_some() {
            return Err(Error::LabelCollision("+".into()));
        }
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.push("+".into());
        FinSpace::from_closed_relation(labels, |a, b| b == n || (a < n && b < n && self.leq(a, b)))
    }

    /// Non-Hausdorff suspension: adds two incomparable points `+` and `-`
    /// above every point.
    pub fn suspension(&self) -> Result<FinSpace> {
        for l in ["+", "-"] {
            if self.index_of(l).is_some() {
                return Err(Error::LabelCollision(l.into()));
            }
        }
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.push("+".into());
        labels.push("-".into());
        FinSpace::from_closed_relation(labels, |a, b| {
            a == b || (a < n && b >= n) || (a < n && b < n && self.leq(a, b))
        })
    }

    /// Disjoint union; the labels of the two spaces must not overlap.
    pub fn disjoint_union(&self, other: &FinSpace) -> Result<FinSpace> {
        let n = self.len();
        let labels = self.labels.iter().chain(other.labels.iter()).cloned().collect();
        FinSpace::from_closed_relation(labels, |a, b| match (a < n, b < n) {
            (true, true) => self.leq(a, b),
            (false, false) => other.leq(a - n, b - n),
            _ => false,
        })
    }

    /// A generating set for the order: one edge per cover between
    /// indistinguishability classes (between the least members), plus a star
    /// in each class.
    pub(crate) fn covering_generators(&self) -> Vec<(usize, usize)> {
        let rep: Vec<usize> = self
            .points()
            .map(|x| self.points().find(|&y| self.equivalent(x, y)).unwrap())
            .collect();
        let mut gens = Vec::new();
        for x in self.points() {
            if rep[x] != x {
                gens.push((rep[x], x));
                gens.push((x, rep[x]));
            }
        }
        for x in self.points().filter(|&x| rep[x] == x) {
            for y in self.points().filter(|&y| rep[y] == y && y != x) {
                if self.is_cover(x, y) {
                    gens.push((x, y));
                }
            }
        }
        gens.sort_unstable();
        gens
    }

    /// `x < y` strictly (not equivalent) with nothing strictly in between.
    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        if !self.leq(x, y) || self.leq(y, x) {
            return false;
        }
        !self.up[x].ones().any(|z| {
            self.leq(z, y) && !self.equivalent(z, x) && !self.equivalent(z, y)
        })
    }

    /// Homeomorphism-invariant data per point, used to prune isomorphism searches.
    pub(crate) fn point_signature(&self, x: usize) -> [usize; 5] {
        let lower = self.points().filter(|&y| self.is_cover(y, x)).count();
        let upper = self.points().filter(|&y| self.is_cover(x, y)).count();
        let class = self.points().filter(|&y| self.equivalent(x, y)).count();
        [
            self.down[x].count_ones(..),
            self.up[x].count_ones(..),
            lower,
            upper,
            class,
        ]
    }
}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinSpace {{ points: {:?}, leq: [", self.labels)?;
        let mut first = true;
        for (x, y) in self.strict_pairs() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}<={}", self.labels[x], self.labels[y])?;
        }
        write!(f, "] }}")
    }
}

impl fmt::Display for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))?;
        let gens = self.covering_generators();
        if !gens.is_empty() {
            let edges: Vec<String> = gens
                .iter()
                .map(|&(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
                .collect();
            write!(f, " with {}", edges.join(", "))?;
        }
        Ok(())
    }
}

/// Anything that names a pair of points by label.
pub trait LabelPair {
    fn labels(&self) -> (&str, &str);
}

impl<A: AsRef<str>, B: AsRef<str>> LabelPair for (A, B) {
    fn labels(&self) -> (&str, &str) {
        (self.0.as_ref(), self.1.as_ref())
    }
}

impl<A: AsRef<str>, B: AsRef<str>> LabelPair for &(A, B) {
    fn labels(&self) -> (&str, &str) {
        (self.0.as_ref(), self.1.as_ref())
    }
}

impl<A: AsRef<str>> LabelPair for [A; 2] {
    fn labels(&self) -> (&str, &str) {
        (self[0].as_ref(), self[1].as_ref())
    }
}

fn build_index(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

pub(crate) fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn needs_brackets(label: &str) -> bool {
    label.contains([',', '(', ')', '⟨', '⟩', '∣'])
}

fn bracket(label: &str) -> String {
    if needs_brackets(label) {
        format!("⟨{label}⟩")
    } else {
        label.to_string()
    }
}

/// Label of a product point.
pub(crate) fn pair_label(a: &str, b: &str) -> String {
    format!("({},{})", bracket(a), bracket(b))
}

/// Label of a tagged point `(b, x)` of a Grothendieck construction.
pub(crate) fn tag_label(b: &str, x: &str) -> String {
    format!("{}∣{}", bracket(b), bracket(x))
}

/// Pointer equality first, then structural equality.
#[inline]
pub fn same_space(a: &Arc<FinSpace>, b: &Arc<FinSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinSpace {
        FinSpace::discrete(2).suspension().unwrap()
    }

    #[test]
    fn sierpinski_from_relations() {
        let s = FinSpace::from_relations(["0", "1"], [("0", "1")]).unwrap();
        assert_eq!(s, FinSpace::sierpinski());
        assert_eq!(s.opens(), vec![vec![], vec![0], vec![0, 1]]);
    }

    #[test]
    fn closure_is_reflexive_and_transitive() {
        let one = FinSpace::from_relations(["a"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(one.closure_pairs(), vec![(0, 0)]);
        let abc = FinSpace::from_relations(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        assert!(abc.leq(0, 2));
        assert!(!abc.leq(2, 0));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            FinSpace::from_relations(["a", "a"], Vec::<(&str, &str)>::new()),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            FinSpace::from_relations(["a"], [("a", "z")]),
            Err(Error::UnknownLabel(_))
        ));
        let plus = FinSpace::point("+");
        assert!(matches!(plus.cone(), Err(Error::LabelCollision(_))));
        assert!(matches!(plus.suspension(), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn minimal_opens() {
        let s = FinSpace::sierpinski();
        assert_eq!(s.minimal_open(1).unwrap(), vec![0, 1]);
        assert_eq!(s.minimal_open(0).unwrap(), vec![0]);
        assert!(s.minimal_open(2).is_err());
        let d = diamond();
        let top = d.index_of("+").unwrap();
        assert_eq!(d.minimal_open(top).unwrap().len(), 3);
    }

    #[test]
    fn open_sets() {
        let s = FinSpace::sierpinski();
        assert!(s.is_open(&[0]));
        assert!(!s.is_open(&[1]));
        assert!(s.is_open(&[]));
        assert!(FinSpace::empty().is_open(&[]));
        assert_eq!(FinSpace::empty().opens(), vec![Vec::<usize>::new()]);
        // opens of the diamond: down-sets of a 4 element poset
        assert_eq!(diamond().opens().len(), 7);
    }

    #[test]
    fn products() {
        let x = diamond();
        let p = x.product(&FinSpace::point("*"));
        assert!(find_homeomorphism(&p, &x).is_some());
        let ss = FinSpace::sierpinski().product(&FinSpace::sierpinski());
        assert_eq!(ss.len(), 4);
        assert!(ss.points().all(|q| ss.leq(0, q) && ss.leq(q, 3)));
        assert_eq!(x.product(&x).len(), 16);
    }

    #[test]
    fn cones_and_suspensions() {
        let c = FinSpace::empty().cone().unwrap();
        assert_eq!(c.len(), 1);
        let x = FinSpace::indiscrete(2).disjoint_union(&FinSpace::point("p")).unwrap();
        let cx = x.cone().unwrap();
        let whole: Vec<usize> = cx
            .points()
            .filter(|&q| cx.down(q).count_ones(..) == cx.len())
            .collect();
        assert_eq!(whole, vec![3]);
        let ss0 = FinSpace::from_relations(
            ["a", "b", "c", "d"],
            [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
        )
        .unwrap();
        assert!(find_homeomorphism(diamond(), &ss0).is_some());
    }

    #[test]
    fn components() {
        assert_eq!(FinSpace::discrete(3).connected_components().len(), 3);
        assert_eq!(diamond().connected_components().len(), 1);
        let u = FinSpace::sierpinski()
            .disjoint_union(&FinSpace::point("p"))
            .unwrap();
        assert_eq!(u.connected_components(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn t0_detection() {
        assert!(FinSpace::sierpinski().is_t0());
        assert!(!FinSpace::indiscrete(2).is_t0());
        assert!(FinSpace::empty().is_t0());
    }

    #[test]
    fn covering_generators_regenerate_the_order() {
        let x = FinSpace::indiscrete(3)
            .cone()
            .unwrap()
            .disjoint_union(&FinSpace::chain(3).relabeled(vec!["p".into(), "q".into(), "r".into()]).unwrap())
            .unwrap();
        let again =
            FinSpace::from_index_relations(x.labels().to_vec(), x.covering_generators()).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn awkward_labels_stay_distinct() {
        let x = FinSpace::from_relations(["a,b", "a"], Vec::<(&str, &str)>::new()).unwrap();
        let y = FinSpace::from_relations(["c", "b,c"], Vec::<(&str, &str)>::new()).unwrap();
        let p = x.product(&y);
        assert_eq!(p.len(), 4);
    }
}
