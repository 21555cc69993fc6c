//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or negative answer, 2 unreadable or
//! malformed input, 3 node budget exhausted.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bundles::{
    bundle_iso, canonical_representation, classify, groth_bundle, pullback_bundle, verify_bundle,
    ClassTable, FiberBundle,
};
use crate::catalog::{self, ExampleObject};
use crate::doc::{self, CheckDoc, Document, IsoDoc, VerificationDoc};
use crate::error::Error;
use crate::finspace::{Budget, ContinuousMap, FinSpace};
use crate::functorcat::TopFunctor;
use crate::grothendieck::{groth, GrothSpace};

/// Largest space whose open sets `--dump-opens` will list.
pub const DUMP_OPENS_LIMIT: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "finbundle", version, about = "Fiber bundles over finite Alexandroff spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Search node budget.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT.0,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,

    /// Seed for randomized commands. Every current command is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Use a built-in example in place of the first input.
    #[arg(long, global = true, value_name = "NAME")]
    pub example: Option<String>,

    /// Also list every open set (spaces of at most 12 points).
    #[arg(long, global = true)]
    pub dump_opens: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Document,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate any document.
    Check { input: Option<PathBuf> },
    /// Build the Grothendieck construction of a functor.
    Groth { functor: Option<PathBuf> },
    /// Bundles over a base with a given fiber, up to isomorphism.
    Classify {
        base: Option<PathBuf>,
        fiber: Option<PathBuf>,
    },
    /// Canonical representation of a bundle.
    Canrep { bundle: Option<PathBuf> },
    /// Over-base isomorphism between two bundles.
    Iso { first: PathBuf, second: PathBuf },
    /// Pull a bundle back along a map into its base.
    Pullback { bundle: PathBuf, map: PathBuf },
    /// Decide whether a map is a fiber bundle with the given fiber.
    Verify { inputs: Vec<PathBuf> },
    /// List the built-in examples, or print one with `--example`.
    Examples,
}

/// Why a command produced no result.
#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Invalid(String),
    Negative(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Invalid(_) | Failure::Negative(_) => 1,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Invalid(m) | Failure::Negative(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<doc::ParseError> for Failure {
    fn from(e: doc::ParseError) -> Self {
        Failure::Parse(e.0)
    }
}

/// Output of a command that ran to completion, with its exit code.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub code: i32,
    /// Note for standard error.
    pub note: Option<String>,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: 0, note: None }
    }
}

/// Parses arguments, runs the command and writes its output; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if let Some(note) = &report.note {
                eprintln!("{note}");
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &report.text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 1;
                    }
                }
                None => print!("{}", report.text),
            }
            report.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

/// Runs the command without touching standard output or the file system
/// beyond reading inputs.
pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    let budget = Budget::new(cli.budget);
    let example = match &cli.example {
        Some(name) => Some(
            catalog::example(name)
                .ok_or_else(|| Failure::Invalid(format!("no example named `{name}`; see `finbundle examples`")))?,
        ),
        None => None,
    };
    let ex_doc = || example.as_ref().map(|e| example_document(&e.object));
    let input = |path: &Option<PathBuf>, what: &str| -> Result<Document, Failure> {
        match (path, ex_doc()) {
            (Some(p), None) => load(p),
            (None, Some(d)) => Ok(d),
            (Some(_), Some(_)) => Err(Failure::Invalid(format!("give either a {what} path or --example"))),
            (None, None) => Err(Failure::Invalid(format!("missing {what} input"))),
        }
    };
    let format = cli.format;
    match &cli.command {
        Command::Check { input: path } => cmd_check(&input(path, "document")?, format),
        Command::Groth { functor } => {
            let d = as_functor(input(functor, "functor")?)?;
            cmd_groth(&d, cli.dump_opens, format)
        }
        Command::Classify { base, fiber } => {
            let (b, f) = match (&example, base, fiber) {
                (Some(e), None, None) => e.classify.clone().ok_or_else(|| {
                    Failure::Invalid(format!("example `{}` has no base and fiber to classify", e.name))
                })?,
                (None, Some(b), Some(f)) => (Arc::new(as_space(load(b)?)?), Arc::new(as_space(load(f)?)?)),
                _ => return Err(Failure::Invalid("classify takes BASE FIBER or --example".into())),
            };
            cmd_classify(&b, &f, budget, format)
        }
        Command::Canrep { bundle } => {
            let p = as_bundle(input(bundle, "bundle")?, budget)?;
            cmd_canrep(&p, format)
        }
        Command::Iso { first, second } => {
            let p = as_bundle(load(first)?, budget)?;
            let q = as_bundle(load(second)?, budget)?;
            cmd_iso(&p, &q, budget, format)
        }
        Command::Pullback { bundle, map } => {
            let p = as_bundle(load(bundle)?, budget)?;
            let f = as_map(load(map)?)?;
            cmd_pullback(&p, &f, format)
        }
        Command::Verify { inputs } => {
            let (map, fiber) = match (ex_doc(), inputs.as_slice()) {
                (Some(m), [f]) => (as_map(m)?, as_space(load(f)?)?),
                (None, [m, f]) => (as_map(load(m)?)?, as_space(load(f)?)?),
                _ => return Err(Failure::Invalid("verify takes MAP FIBER, or --example NAME FIBER".into())),
            };
            cmd_verify(&map, &Arc::new(fiber), budget, format)
        }
        Command::Examples => Ok(cmd_examples(example.as_ref().map(|e| &e.object), format)),
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn example_document(obj: &ExampleObject) -> Document {
    match obj {
        ExampleObject::Space(x) => Document::Space(doc::space_to_doc(x)),
        ExampleObject::Map(f) => Document::Map(doc::map_to_doc(f)),
        ExampleObject::Functor(d) => Document::Functor(doc::functor_to_doc(d)),
    }
}

fn wrong_kind(d: &Document, want: &str) -> Failure {
    Failure::Invalid(format!("expected a {want} document, got `{}`", d.kind()))
}

fn as_space(d: Document) -> Result<FinSpace, Failure> {
    match d {
        Document::Space(s) => Ok(doc::space_from_doc(&s)?),
        other => Err(wrong_kind(&other, "space")),
    }
}

fn as_map(d: Document) -> Result<ContinuousMap, Failure> {
    match d {
        Document::Map(m) => Ok(doc::map_from_doc(&m)?),
        other => Err(wrong_kind(&other, "map")),
    }
}

fn as_functor(d: Document) -> Result<Arc<TopFunctor>, Failure> {
    match d {
        Document::Functor(f) => {
            let f = doc::functor_from_doc(&f)?;
            if let Some(v) = f.functoriality_violations().first() {
                return Err(Failure::Invalid(format!("not a functor: {}", v.describe(f.base()))));
            }
            Ok(Arc::new(f))
        }
        other => Err(wrong_kind(&other, "functor")),
    }
}

/// A verified bundle from a bundle document or from a functor, whose
/// Grothendieck projection is taken with the object over the first base point
/// as fiber.
fn as_bundle(d: Document, budget: Budget) -> Result<FiberBundle, Failure> {
    match d {
        Document::Bundle(b) => {
            let p = doc::bundle_from_doc(&b)?;
            if p.is_verified() {
                return Ok(p);
            }
            verify_bundle(p.map(), p.fiber(), budget)?
                .ok_or_else(|| Failure::Negative("the map is not a fiber bundle with the given fiber".into()))
        }
        Document::Functor(_) => {
            let f = as_functor(d)?;
            let fiber = f
                .objects()
                .first()
                .cloned()
                .ok_or_else(|| Failure::Invalid("functor over the empty base has no fiber".into()))?;
            groth_bundle(&f, &fiber, budget)?
                .ok_or_else(|| Failure::Negative("the Grothendieck projection is not a fiber bundle".into()))
        }
        other => Err(wrong_kind(&other, "bundle or functor")),
    }
}

fn render(format: Format, document: impl FnOnce() -> Document, table: impl FnOnce() -> String) -> String {
    match format {
        Format::Document => document().to_json(),
        Format::Table => table(),
    }
}

fn points_line(x: &FinSpace) -> String {
    let mut s = String::from("points:");
    for l in x.labels() {
        s.push(' ');
        s.push_str(l);
    }
    s
}

fn order_line(x: &FinSpace) -> String {
    let rel: Vec<String> = x
        .strict_pairs()
        .into_iter()
        .map(|(a, b)| format!("{}<={}", x.label(a), x.label(b)))
        .collect();
    format!("order: {}", if rel.is_empty() { "(discrete)".into() } else { rel.join(" ") })
}

fn set_text(x: &FinSpace, set: &[usize]) -> String {
    let names: Vec<&str> = set.iter().map(|&p| x.label(p)).collect();
    format!("{{{}}}", names.join(", "))
}

fn image_text(f: &ContinuousMap) -> String {
    let names: Vec<&str> = f.image().iter().map(|&y| f.cod().label(y)).collect();
    format!("[{}]", names.join(" "))
}

fn space_table(x: &FinSpace, opens: bool) -> String {
    let mut s = format!("{}\n{}\n", points_line(x), order_line(x));
    if opens {
        let all = x.opens();
        let _ = writeln!(s, "opens ({}):", all.len());
        for u in &all {
            let _ = writeln!(s, "  {}", set_text(x, u));
        }
    }
    s
}

fn check_opens(x: &FinSpace, dump: bool) -> Result<(), Failure> {
    if dump && x.len() > DUMP_OPENS_LIMIT {
        return Err(Failure::Invalid(format!(
            "--dump-opens lists spaces of at most {DUMP_OPENS_LIMIT} points; this one has {}",
            x.len()
        )));
    }
    Ok(())
}

pub fn cmd_check(d: &Document, format: Format) -> Result<Report, Failure> {
    let violations = check_violations(d);
    let valid = violations.is_empty();
    let text = render(
        format,
        || {
            Document::Check(CheckDoc {
                object: d.kind().to_string(),
                valid,
                violations: violations.clone(),
            })
        },
        || {
            if valid {
                "ok\n".to_string()
            } else {
                violations.iter().map(|v| format!("violation: {v}\n")).collect()
            }
        },
    );
    Ok(Report {
        text,
        code: if valid { 0 } else { 1 },
        note: None,
    })
}

/// Everything wrong with a document, one entry per problem.
pub fn check_violations(d: &Document) -> Vec<String> {
    let mut out = Vec::new();
    let mut note = |r: Result<(), Error>| {
        if let Err(e) = r {
            out.push(e.to_string());
        }
    };
    match d {
        Document::Space(s) => note(doc::space_from_doc(s).map(drop)),
        Document::Map(m) => note(check_map(m)),
        Document::Functor(f) => match doc::functor_from_doc(f) {
            Ok(f) => out.extend(f.functoriality_violations().iter().map(|v| v.describe(f.base()))),
            Err(e) => out.push(e.to_string()),
        },
        Document::Bundle(b) => note(doc::bundle_from_doc(b).map(drop)),
        Document::Groth(g) => note(check_groth(g)),
        Document::ClassTable(t) => {
            for (i, c) in t.classes.iter().enumerate() {
                if let Err(e) = check_class(c) {
                    out.push(format!("class {}: {e}", i + 1));
                }
            }
        }
        Document::Verification(v) => match (&v.bundle, v.verified) {
            (Some(b), _) => note(doc::bundle_from_doc(b).and_then(|p| {
                if p.is_verified() == v.verified {
                    Ok(())
                } else {
                    Err(Error::Unverified)
                }
            })),
            (None, true) => out.push("a verified report must carry its bundle".into()),
            (None, false) => {}
        },
        Document::Iso(i) => note(check_iso(i)),
        Document::Check(_) => {}
    }
    out
}

/// Reports every pair whose order the map breaks.
fn check_map(m: &doc::MapDoc) -> Result<(), Error> {
    let dom = doc::space_from_doc(&m.dom)?;
    let cod = doc::space_from_doc(&m.cod)?;
    let image = doc::image_from_labels(&dom, &cod, &m.map)?;
    let broken: Vec<String> = dom
        .closure_pairs()
        .into_iter()
        .filter(|&(x, y)| !cod.leq(image[x], image[y]))
        .map(|(x, y)| {
            format!(
                "{} <= {} but {} </= {}",
                dom.label(x),
                dom.label(y),
                cod.label(image[x]),
                cod.label(image[y])
            )
        })
        .collect();
    if broken.is_empty() {
        Ok(())
    } else {
        Err(Error::NotContinuous(broken.join("; ")))
    }
}

fn check_groth(g: &doc::GrothDoc) -> Result<(), Error> {
    let space = Arc::new(doc::space_from_doc(&g.space)?);
    let base = Arc::new(doc::space_from_doc(&g.base)?);
    let p = doc::map_from_labels(space.clone(), base.clone(), &g.projection)?;
    for x in space.points() {
        let tag = g
            .tags
            .get(space.label(x))
            .ok_or_else(|| Error::Mismatch(format!("no tag for {}", space.label(x))))?;
        if base.point_named(&tag[0])? != p.apply(x) {
            return Err(Error::Mismatch(format!(
                "tag of {} disagrees with the projection",
                space.label(x)
            )));
        }
    }
    if let Some(opens) = &g.opens {
        let mut listed = Vec::with_capacity(opens.len());
        for u in opens {
            let mut set = u.iter().map(|l| space.point_named(l)).collect::<Result<Vec<_>, _>>()?;
            set.sort_unstable();
            listed.push(set);
        }
        listed.sort();
        if listed != space.opens() {
            return Err(Error::NotOpen("listed opens are not the open sets of the space".into()));
        }
    }
    Ok(())
}

fn check_class(c: &doc::ClassDoc) -> Result<(), Error> {
    let f = Arc::new(doc::functor_from_doc(&c.representative_functor)?);
    let g = groth(&f)?;
    let total = doc::space_from_doc(&c.total_space)?;
    if **g.space() != total {
        return Err(Error::Mismatch(
            "total space is not the construction of the representative".into(),
        ));
    }
    Ok(())
}

fn check_iso(i: &IsoDoc) -> Result<(), Error> {
    let p = doc::bundle_from_doc(&i.first)?;
    let q = doc::bundle_from_doc(&i.second)?;
    match (&i.witness, i.isomorphic) {
        (Some(w), true) => {
            let h = doc::map_from_labels(p.total().clone(), q.total().clone(), w)?;
            if !h.is_homeomorphism() {
                return Err(Error::Mismatch("witness is not a homeomorphism".into()));
            }
            for x in p.total().points() {
                if p.map().apply(x) != q.map().apply(h.apply(x)) {
                    return Err(Error::NotOverBase(p.total().label(x).to_string()));
                }
            }
            Ok(())
        }
        (None, false) => Ok(()),
        _ => Err(Error::Mismatch("witness must be present exactly when isomorphic".into())),
    }
}

pub fn cmd_groth(d: &Arc<TopFunctor>, dump_opens: bool, format: Format) -> Result<Report, Failure> {
    let g = groth(d)?;
    check_opens(g.space(), dump_opens)?;
    Ok(Report::ok(render(
        format,
        || Document::Groth(doc::groth_to_doc(&g, dump_opens)),
        || groth_table(&g, dump_opens),
    )))
}

fn groth_table(g: &GrothSpace, opens: bool) -> String {
    let space = g.space();
    let mut s = format!("{} points over {} base points\n", space.len(), g.base().len());
    let _ = writeln!(s, "{:<16} {:<8} fiber", "point", "base");
    for p in space.points() {
        let (b, x) = g.tag(p);
        let _ = writeln!(
            s,
            "{:<16} {:<8} {}",
            space.label(p),
            g.base().label(b),
            g.functor().object(b).label(x)
        );
    }
    s.push_str(&space_table(space, opens));
    s
}

pub fn cmd_classify(
    base: &Arc<FinSpace>,
    fiber: &Arc<FinSpace>,
    budget: Budget,
    format: Format,
) -> Result<Report, Failure> {
    let (table, code, note) = match classify(base, fiber, budget) {
        Ok(t) => (t, 0, None),
        Err(Error::ClassificationInconclusive { limit, partial }) => (
            *partial,
            3,
            Some(format!("inconclusive: node budget of {limit} exhausted; classes so far are listed")),
        ),
        Err(e) => return Err(e.into()),
    };
    let inconclusive = code != 0;
    let text = render(
        format,
        || Document::ClassTable(doc::class_table_to_doc(&table, inconclusive)),
        || class_table_text(&table, inconclusive),
    );
    Ok(Report { text, code, note })
}

fn class_table_text(t: &ClassTable, inconclusive: bool) -> String {
    let mut s = String::new();
    if inconclusive {
        s.push_str("INCONCLUSIVE (budget exhausted)\n");
    }
    let _ = writeln!(
        s,
        "automorphisms of fiber: {}  functors: {}  classes: {}",
        t.group.len(),
        t.functor_count,
        t.len()
    );
    let _ = writeln!(s, "{:<6} {:<6} {:<8} representative", "class", "total", "size");
    let base = &t.base;
    for (i, c) in t.classes.iter().enumerate() {
        let edges: Vec<String> = base
            .strict_pairs()
            .into_iter()
            .filter(|&(b, d)| base.is_cover(b, d))
            .map(|(b, d)| {
                let g = c.functor.group().element(c.functor.value(b, d));
                format!("{}->{}: {}", base.label(b), base.label(d), image_text(g))
            })
            .collect();
        let _ = writeln!(
            s,
            "{:<6} {:<6} {:<8} {}",
            i + 1,
            c.bundle.total().len(),
            c.size,
            if edges.is_empty() { "(no edges)".into() } else { edges.join("  ") }
        );
    }
    s
}

pub fn cmd_canrep(p: &FiberBundle, format: Format) -> Result<Report, Failure> {
    let rep = canonical_representation(p)?;
    let d = &rep.functor;
    Ok(Report::ok(render(
        format,
        || Document::Functor(doc::functor_to_doc(d)),
        || {
            let base = d.base();
            let mut s = String::new();
            for b in base.points() {
                let _ = writeln!(s, "over {}: {}", base.label(b), points_line(d.object(b)));
            }
            for (b, c, f) in d.strict_arrows() {
                let _ = writeln!(s, "{} -> {}: {}", base.label(b), base.label(c), image_text(f));
            }
            s
        },
    )))
}

pub fn cmd_iso(p: &FiberBundle, q: &FiberBundle, budget: Budget, format: Format) -> Result<Report, Failure> {
    let h = bundle_iso(p, q, budget)?;
    let witness = h.as_ref().map(doc::label_map);
    let text = render(
        format,
        || {
            Document::Iso(IsoDoc {
                isomorphic: h.is_some(),
                first: doc::bundle_to_doc(p),
                second: doc::bundle_to_doc(q),
                witness: witness.clone(),
            })
        },
        || match &witness {
            Some(w) => {
                let mut s = String::from("isomorphic\n");
                for (a, b) in w {
                    let _ = writeln!(s, "{a} -> {b}");
                }
                s
            }
            None => "not isomorphic\n".into(),
        },
    );
    Ok(Report {
        text,
        code: if h.is_some() { 0 } else { 1 },
        note: None,
    })
}

pub fn cmd_pullback(p: &FiberBundle, f: &ContinuousMap, format: Format) -> Result<Report, Failure> {
    let q = pullback_bundle(p, f)?;
    Ok(Report::ok(render(
        format,
        || Document::Bundle(doc::bundle_to_doc(&q)),
        || {
            let mut s = format!("total space ({} points)\n", q.total().len());
            s.push_str(&space_table(q.total(), false));
            let _ = writeln!(s, "projection: {}", image_text(q.map()));
            s
        },
    )))
}

pub fn cmd_verify(map: &ContinuousMap, fiber: &Arc<FinSpace>, budget: Budget, format: Format) -> Result<Report, Failure> {
    let found = verify_bundle(map, fiber, budget)?;
    let text = render(
        format,
        || {
            Document::Verification(VerificationDoc {
                verified: found.is_some(),
                bundle: found.as_ref().map(doc::bundle_to_doc),
            })
        },
        || match &found {
            Some(b) => {
                let mut s = String::from("fiber bundle\n");
                for t in b.trivializations().unwrap_or_default() {
                    let over = b.base().label(t.over());
                    let _ = write!(s, "chart over {over}:");
                    for (x, f) in t.chart() {
                        let beta = b.base().label(b.map().apply(x));
                        let _ = write!(s, " {}->({beta},{})", b.total().label(x), fiber.label(f));
                    }
                    s.push('\n');
                }
                s
            }
            None => "not a fiber bundle with this fiber\n".into(),
        },
    );
    Ok(Report {
        text,
        code: if found.is_some() { 0 } else { 1 },
        note: None,
    })
}

pub fn cmd_examples(selected: Option<&ExampleObject>, format: Format) -> Report {
    if let Some(obj) = selected {
        let d = example_document(obj);
        return Report::ok(match format {
            Format::Document => d.to_json(),
            Format::Table => match obj {
                ExampleObject::Space(x) => space_table(x, false),
                ExampleObject::Map(f) => format!(
                    "{}\n{}\nmap: {}\n",
                    points_line(f.dom()),
                    order_line(f.dom()),
                    image_text(f)
                ),
                ExampleObject::Functor(_) => d.to_json(),
            },
        });
    }
    let mut s = String::new();
    for &n in catalog::NAMES {
        let e = catalog::example(n).expect("registered");
        let _ = writeln!(s, "{:<18} {}", n, e.summary);
    }
    Report::ok(s)
}
