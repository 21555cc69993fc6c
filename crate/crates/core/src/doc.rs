//! JSON documents for spaces, maps, functors, bundles and results.
//!
//! Every top-level document carries a `kind` field. Nested objects refer to
//! points by label. Output is deterministic: maps keyed by label are sorted.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bundles::{ClassTable, FiberBundle};
use crate::error::{Error, Result};
use crate::finspace::{ContinuousMap, FinSpace};
use crate::functorcat::TopFunctor;
use crate::grothendieck::GrothSpace;

pub type LabelMap = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    /// Generating relations `a <= b`.
    #[serde(default)]
    pub leq: Vec<[String; 2]>,
    /// The full reflexive-transitive closure; always written, checked if read.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq_closure: Option<Vec<[String; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub dom: SpaceDoc,
    pub cod: SpaceDoc,
    pub map: LabelMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub from: String,
    pub to: String,
    pub map: LabelMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub base: SpaceDoc,
    pub objects: BTreeMap<String, SpaceDoc>,
    #[serde(default)]
    pub arrows: Vec<ArrowDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub over: String,
    /// Total point ↦ `[base point, fiber point]`.
    pub chart: BTreeMap<String, [String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub total: SpaceDoc,
    pub base: SpaceDoc,
    pub map: LabelMap,
    pub fiber: SpaceDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivializations: Option<Vec<ChartDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrothDoc {
    #[serde(flatten)]
    pub space: SpaceDoc,
    pub base: SpaceDoc,
    pub projection: LabelMap,
    /// Point label ↦ `[base point, fiber point]`.
    pub tags: BTreeMap<String, [String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub representative_functor: FunctorDoc,
    pub total_space: SpaceDoc,
    pub class_size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassTableDoc {
    pub base: SpaceDoc,
    pub fiber: SpaceDoc,
    pub automorphisms: usize,
    pub functor_count: u64,
    pub inconclusive: bool,
    pub classes: Vec<ClassDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationDoc {
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoDoc {
    pub isomorphic: bool,
    pub first: BundleDoc,
    pub second: BundleDoc,
    /// Point of the first total space ↦ point of the second.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<LabelMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    /// Kind of the checked document.
    pub object: String,
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Any top-level document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Document {
    Space(SpaceDoc),
    Map(MapDoc),
    Functor(FunctorDoc),
    Bundle(BundleDoc),
    Groth(GrothDoc),
    ClassTable(ClassTableDoc),
    Verification(VerificationDoc),
    Iso(IsoDoc),
    Check(CheckDoc),
}

/// Malformed input: bad JSON, or JSON of the wrong shape.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

impl Document {
    /// Parses a document. A missing `kind` is inferred from the fields.
    pub fn parse(text: &str) -> std::result::Result<Document, ParseError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ParseError(e.to_string()))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| ParseError("document must be a JSON object".into()))?;
        if !obj.contains_key("kind") {
            let kind = if obj.contains_key("objects") {
                "functor"
            } else if obj.contains_key("total") {
                "bundle"
            } else if obj.contains_key("dom") {
                "map"
            } else if obj.contains_key("points") {
                "space"
            } else {
                return Err(ParseError("cannot tell what kind of document this is".into()));
            };
            obj.insert("kind".into(), kind.into());
        }
        serde_json::from_value(value).map_err(|e| ParseError(e.to_string()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Space(_) => "space",
            Document::Map(_) => "map",
            Document::Functor(_) => "functor",
            Document::Bundle(_) => "bundle",
            Document::Groth(_) => "groth",
            Document::ClassTable(_) => "class_table",
            Document::Verification(_) => "verification",
            Document::Iso(_) => "iso",
            Document::Check(_) => "check",
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

fn pair(a: &str, b: &str) -> [String; 2] {
    [a.to_string(), b.to_string()]
}

pub fn space_to_doc(x: &FinSpace) -> SpaceDoc {
    let label = |i: usize| x.label(i);
    SpaceDoc {
        points: x.labels().to_vec(),
        leq: x.generators().iter().map(|&(a, b)| pair(label(a), label(b))).collect(),
        leq_closure: Some(x.closure_pairs().into_iter().map(|(a, b)| pair(label(a), label(b))).collect()),
    }
}

pub fn space_from_doc(d: &SpaceDoc) -> Result<FinSpace> {
    let x = FinSpace::from_relations(
        d.points.iter().cloned(),
        d.leq.iter().map(|[a, b]| (a.as_str(), b.as_str())),
    )?;
    if let Some(closure) = &d.leq_closure {
        let mut given = Vec::with_capacity(closure.len());
        for [a, b] in closure {
            given.push((x.point_named(a)?, x.point_named(b)?));
        }
        given.sort_unstable();
        given.dedup();
        let closure = x.closure_pairs();
        let show = |&(a, b): &(usize, usize)| format!("{} <= {}", x.label(a), x.label(b));
        if let Some(extra) = given.iter().find(|p| closure.binary_search(p).is_err()) {
            return Err(Error::Mismatch(format!(
                "leq_closure lists {} which does not follow from leq",
                show(extra)
            )));
        }
        if let Some(missing) = closure.iter().find(|p| given.binary_search(p).is_err()) {
            return Err(Error::Mismatch(format!("leq_closure is missing {}", show(missing))));
        }
    }
    Ok(x)
}

pub fn label_map(f: &ContinuousMap) -> LabelMap {
    f.dom()
        .points()
        .map(|x| (f.dom().label(x).to_string(), f.cod().label(f.apply(x)).to_string()))
        .collect()
}

/// Reads a map given by labels; every domain point needs exactly one image.
pub fn map_from_labels(dom: Arc<FinSpace>, cod: Arc<FinSpace>, m: &LabelMap) -> Result<ContinuousMap> {
    let image = image_from_labels(&dom, &cod, m)?;
    ContinuousMap::new(dom, cod, image)
}

/// The image vector of a label map, without the continuity check.
pub fn image_from_labels(dom: &FinSpace, cod: &FinSpace, m: &LabelMap) -> Result<Vec<usize>> {
    let mut image = vec![usize::MAX; dom.len()];
    for (a, b) in m {
        image[dom.point_named(a)?] = cod.point_named(b)?;
    }
    if let Some(x) = image.iter().position(|&y| y == usize::MAX) {
        return Err(Error::Mismatch(format!("no image given for {}", dom.label(x))));
    }
    Ok(image)
}

pub fn map_to_doc(f: &ContinuousMap) -> MapDoc {
    MapDoc {
        dom: space_to_doc(f.dom()),
        cod: space_to_doc(f.cod()),
        map: label_map(f),
    }
}

pub fn map_from_doc(d: &MapDoc) -> Result<ContinuousMap> {
    let dom = Arc::new(space_from_doc(&d.dom)?);
    let cod = Arc::new(space_from_doc(&d.cod)?);
    map_from_labels(dom, cod, &d.map)
}

pub fn functor_to_doc(d: &TopFunctor) -> FunctorDoc {
    let base = d.base();
    FunctorDoc {
        base: space_to_doc(base),
        objects: base
            .points()
            .map(|b| (base.label(b).to_string(), space_to_doc(d.object(b))))
            .collect(),
        arrows: d
            .strict_arrows()
            .map(|(b, c, f)| ArrowDoc {
                from: base.label(b).to_string(),
                to: base.label(c).to_string(),
                map: label_map(f),
            })
            .collect(),
    }
}

/// Reads a functor without checking the functor laws; see [`TopFunctor::validate`].
pub fn functor_from_doc(d: &FunctorDoc) -> Result<TopFunctor> {
    let base = Arc::new(space_from_doc(&d.base)?);
    for name in d.objects.keys() {
        base.point_named(name)?;
    }
    let mut objects = Vec::with_capacity(base.len());
    for b in base.points() {
        let doc = d
            .objects
            .get(base.label(b))
            .ok_or_else(|| Error::Mismatch(format!("no object given for {}", base.label(b))))?;
        objects.push(Arc::new(space_from_doc(doc)?));
    }
    let mut arrows = Vec::with_capacity(d.arrows.len());
    for a in &d.arrows {
        let (b, c) = (base.point_named(&a.from)?, base.point_named(&a.to)?);
        let f = map_from_labels(objects[b].clone(), objects[c].clone(), &a.map)?;
        arrows.push((b, c, f));
    }
    TopFunctor::from_arrows(base, objects, arrows)
}

pub fn bundle_to_doc(p: &FiberBundle) -> BundleDoc {
    let (total, base, fiber) = (p.total(), p.base(), p.fiber());
    BundleDoc {
        total: space_to_doc(total),
        base: space_to_doc(base),
        map: label_map(p.map()),
        fiber: space_to_doc(fiber),
        trivializations: p.trivializations().map(|ts| {
            ts.iter()
                .map(|t| ChartDoc {
                    over: base.label(t.over()).to_string(),
                    chart: t
                        .chart()
                        .map(|(x, f)| {
                            (
                                total.label(x).to_string(),
                                pair(base.label(p.map().apply(x)), fiber.label(f)),
                            )
                        })
                        .collect(),
                })
                .collect()
        }),
    }
}

/// Reads a bundle; supplied charts are validated.
pub fn bundle_from_doc(d: &BundleDoc) -> Result<FiberBundle> {
    let total = Arc::new(space_from_doc(&d.total)?);
    let base = Arc::new(space_from_doc(&d.base)?);
    let fiber = Arc::new(space_from_doc(&d.fiber)?);
    let map = map_from_labels(total.clone(), base.clone(), &d.map)?;
    let Some(charts) = &d.trivializations else {
        return Ok(FiberBundle::new(map, fiber));
    };
    let mut by_base: Vec<Option<Vec<(usize, usize)>>> = vec![None; base.len()];
    for c in charts {
        let b = base.point_named(&c.over)?;
        let mut chart = Vec::with_capacity(c.chart.len());
        for (x, [beta, f]) in &c.chart {
            let x = total.point_named(x)?;
            if base.point_named(beta)? != map.apply(x) {
                return Err(Error::InvalidTrivialization(format!(
                    "chart over {} does not commute with the projection at {}",
                    c.over,
                    total.label(x)
                )));
            }
            chart.push((x, fiber.point_named(f)?));
        }
        if by_base[b].replace(chart).is_some() {
            return Err(Error::InvalidTrivialization(format!("two charts over {}", c.over)));
        }
    }
    let charts = by_base
        .into_iter()
        .enumerate()
        .map(|(b, c)| {
            c.ok_or_else(|| Error::InvalidTrivialization(format!("no chart over {}", base.label(b))))
        })
        .collect::<Result<Vec<_>>>()?;
    FiberBundle::with_charts(map, fiber, charts)
}

/// The space of `∫D` with projection and tags; opens are listed when asked.
pub fn groth_to_doc(g: &GrothSpace, with_opens: bool) -> GrothDoc {
    let space = g.space();
    let base = g.base();
    GrothDoc {
        space: space_to_doc(space),
        base: space_to_doc(base),
        projection: label_map(g.projection()),
        tags: space
            .points()
            .map(|p| {
                let (b, x) = g.tag(p);
                (
                    space.label(p).to_string(),
                    pair(base.label(b), g.functor().object(b).label(x)),
                )
            })
            .collect(),
        opens: with_opens.then(|| {
            space
                .opens()
                .into_iter()
                .map(|u| u.into_iter().map(|p| space.label(p).to_string()).collect())
                .collect()
        }),
    }
}

pub fn class_table_to_doc(t: &ClassTable, inconclusive: bool) -> ClassTableDoc {
    ClassTableDoc {
        base: space_to_doc(&t.base),
        fiber: space_to_doc(&t.fiber),
        automorphisms: t.group.len(),
        functor_count: t.functor_count,
        inconclusive,
        classes: t
            .classes
            .iter()
            .map(|c| ClassDoc {
                representative_functor: functor_to_doc(&c.functor.to_top_functor()),
                total_space: space_to_doc(c.bundle.total()),
                class_size: c.size,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_round_trip() {
        let s = FinSpace::from_relations(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        let doc = space_to_doc(&s);
        assert_eq!(doc.leq.len(), 2);
        assert_eq!(doc.leq_closure.as_ref().unwrap().len(), 6);
        assert_eq!(space_from_doc(&doc).unwrap(), s);
        let text = Document::Space(doc).to_json();
        assert!(matches!(Document::parse(&text).unwrap(), Document::Space(_)));
    }

    #[test]
    fn kind_is_inferred() {
        let d = Document::parse(r#"{"points": ["0", "1"], "leq": [["0", "1"]]}"#).unwrap();
        assert_eq!(d.kind(), "space");
        assert!(Document::parse("{").is_err());
        assert!(Document::parse(r#"{"kind": "space", "points": 3}"#).is_err());
    }

    #[test]
    fn wrong_closure_is_rejected() {
        let doc = SpaceDoc {
            points: vec!["0".into(), "1".into()],
            leq: vec![pair("0", "1")],
            leq_closure: Some(vec![pair("0", "0")]),
        };
        assert!(space_from_doc(&doc).is_err());
    }
}
