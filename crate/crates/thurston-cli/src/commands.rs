//! Subcommands. Every report starts with the hashes of its inputs and is
//! otherwise a deterministic function of them.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use thurston::action::Homeo;
use thurston::blowup::{self, blow_up_unchecked, validate_admissible, ArcPair, Model};
use thurston::classify;
use thurston::decomposition::{self, is_connected, Multicurve, Tag};
use thurston::lifting::{self, lifting_algorithm, Tree};
use thurston::path::{Curve, Path};
use thurston::twisting::{self, TwistError};

use crate::pairfile::{self, curve_text, path_text, PairFile};

#[derive(Parser, Debug)]
#[command(name = "thurston", version, about = "Critically fixed Thurston maps from planar graphs")]
pub struct Cli {
    /// Exit with status 1 on negative answers (obstructed, inequivalent, ...).
    #[arg(long, global = true)]
    pub strict: bool,
    /// Start the lifting algorithm from a random spanning tree with this seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Parse a pair file and check admissibility.
    Validate { file: PathBuf },
    /// Degree, local degrees and orbifold of the blow-up.
    Info { file: PathBuf },
    /// Charge graph by the lifting algorithm, with the mapping class.
    Charge { file: PathBuf },
    /// Realized or obstructed.
    Realize { file: PathBuf },
    /// Canonical obstruction and its transition matrix.
    Obstruction { file: PathBuf },
    /// Transition matrix of the named curves, or of the canonical obstruction.
    Matrix { file: PathBuf, curves: Vec<String> },
    /// Components of the preimage of a named curve.
    Preimage { file: PathBuf, curve: String },
    /// Rewrite the n-fold twist of the map about a curve as a pair.
    Twist {
        file: PathBuf,
        curve: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// n-rotation of the graph about a curve.
    Rotate {
        file: PathBuf,
        curve: String,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Compare two pair files.
    Equiv { file: PathBuf, other: PathBuf },
    /// DOT description of the charge graph and the obstruction curves.
    Render { file: PathBuf },
    /// Run the worked examples.
    Selftest,
}

pub struct Outcome {
    pub code: i32,
    pub out: String,
}

struct Input {
    name: String,
    hash: String,
    file: PairFile,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn load(path: &PathBuf) -> Result<Input> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).context("pair file is not UTF-8")?;
    let file = pairfile::parse(&text).map_err(|e| anyhow!("ParseError: {e}"))?;
    Ok(Input { name: path.display().to_string(), hash: sha256_hex(&bytes), file })
}

fn header(out: &mut String, inputs: &[&Input]) {
    for i in inputs {
        writeln!(out, "# input {} sha256 {}", i.name, i.hash).unwrap();
    }
}

/// The map of a pair file: the blow-up of the graph followed by the twist
/// word, whether or not the word fixes the edges.
fn model(f: &PairFile) -> Result<Model> {
    blow_up_unchecked(&f.pair).map_err(|e| anyhow!("BlowupError: {e}"))
}

fn admissible(f: &PairFile) -> bool {
    validate_admissible(&f.pair).ok()
}

fn start_tree(m: &Model, seed: Option<u64>) -> Tree {
    match seed {
        Some(s) => lifting::random_tree(m.k(), s),
        None => lifting::carrier_tree(m.k()),
    }
}

fn curve_named(f: &PairFile, name: &str) -> Result<Curve> {
    f.curves.iter().find(|c| c.0 == name).map(|c| c.1.clone()).ok_or_else(|| anyhow!("no curve named `{name}`"))
}

fn verdict(realized: bool) -> &'static str {
    if realized {
        "realized"
    } else {
        "obstructed"
    }
}

/// A graph given by arcs, redrawn as a pair file with the input vertex names.
fn arcs_file(f: &PairFile, p: &ArcPair, extra: &[(String, Curve)]) -> (PairFile, Vec<Curve>) {
    let curves: Vec<Curve> = extra.iter().map(|c| c.1.clone()).collect();
    let (pair, carried) = p.carry(&curves);
    let named = extra.iter().map(|c| c.0.clone()).zip(carried.iter().cloned()).collect();
    (pairfile::from_pair(&pair, &f.vertices, named), carried)
}

fn matrix_text(out: &mut String, t: &decomposition::TransitionMatrix) {
    writeln!(out, "matrix {}x{}", t.entries.len(), t.entries.len()).unwrap();
    for row in &t.entries {
        let r: Vec<String> = row.iter().map(|q| q.to_string()).collect();
        writeln!(out, "  [{}]", r.join(" ")).unwrap();
    }
    writeln!(out, "lambda {:.9}", t.spectral_radius).unwrap();
    writeln!(out, "{}", if t.is_obstruction() { "obstruction" } else { "no obstruction" }).unwrap();
}

pub fn run(cli: Cli) -> Outcome {
    let strict = cli.strict;
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(positive) => Outcome { code: if strict && !positive { 1 } else { 0 }, out },
        Err(e) => {
            writeln!(out, "error: {e:#}").unwrap();
            Outcome { code: 2, out }
        }
    }
}

/// Runs a command, returning whether the answer was positive.
fn dispatch(cli: &Cli, out: &mut String) -> Result<bool> {
    match &cli.cmd {
        Cmd::Validate { file } => {
            let i = load(file)?;
            header(out, &[&i]);
            let r = validate_admissible(&i.file.pair);
            if r.ok() {
                writeln!(out, "admissible")?;
            } else {
                writeln!(out, "not admissible: {r}")?;
            }
            Ok(r.ok())
        }
        Cmd::Info { file } => {
            let i = load(file)?;
            header(out, &[&i]);
            let m = model(&i.file)?;
            let k = m.k();
            writeln!(out, "vertices {}", k.num_vertices())?;
            writeln!(out, "graph edges {}", i.file.pair.edges().len())?;
            writeln!(out, "links {}", k.num_edges() - i.file.pair.edges().len())?;
            writeln!(out, "admissible {}", if admissible(&i.file) { "yes" } else { "no" })?;
            writeln!(out, "degree {}", m.degree)?;
            for (v, d) in m.local_degrees().iter().enumerate() {
                writeln!(out, "local degree {} {}", i.file.vertices[v], d)?;
            }
            let chi = m.orbifold_euler();
            writeln!(out, "orbifold euler characteristic {chi}")?;
            let kind = if *chi.numer() < 0 { "hyperbolic" } else { "parabolic" };
            writeln!(out, "orbifold {kind}")?;
            Ok(true)
        }
        Cmd::Charge { file } => {
            let i = load(file)?;
            header(out, &[&i]);
            let m = model(&i.file)?;
            let r = lifting_algorithm(&m, &start_tree(&m, cli.seed), lifting::CAP)
                .map_err(|e| anyhow!("LiftingError: {e}"))?;
            writeln!(out, "pullbacks {}", r.pullbacks)?;
            writeln!(out, "iterations {}", r.iterations)?;
            let k = m.k();
            let realized = is_connected(k, &r.edges);
            let ap = ArcPair { k: k.clone(), arcs: r.edges.clone(), phi: Homeo::identity() };
            let (pf, _) = arcs_file(&i.file, &ap, &[]);
            out.push_str(&pairfile::serialize(&pf));
            writeln!(out, "{}", verdict(realized))?;
            if k.num_vertices() > 3 {
                let a = lifting::reconstruct_homeomorphism(&m, &r.edges).map_err(|e| anyhow!("LiftingError: {e}"))?;
                let trivial = Homeo::Action(a.clone()).is_trivial(k).map_err(|e| anyhow!("ActionError: {e}"))?;
                writeln!(out, "mapping class {}", if trivial { "identity" } else { "nontrivial" })?;
                for (g, h) in a.gens.iter().zip(&a.images) {
                    let t = |p: &Path| path_text(k, &i.file.vertices, &i.file.edges, p);
                    writeln!(out, "  {}  |->  {}", t(g), t(h))?;
                }
            } else {
                writeln!(out, "mapping class identity")?;
            }
            Ok(realized)
        }
        Cmd::Realize { file } => {
            let i = load(file)?;
            header(out, &[&i]);
            let realized = decomposition::is_realized(&model(&i.file)?).map_err(|e| anyhow!("{e}"))?;
            writeln!(out, "{}", verdict(realized))?;
            Ok(realized)
        }
        Cmd::Obstruction { file } => {
            let i = load(file)?;
            header(out, &[&i]);
            let m = model(&i.file)?;
            let g = decomposition::canonical_obstruction(&m).map_err(|e| anyhow!("{e}"))?;
            writeln!(out, "curves {}", g.len())?;
            for (n, c) in g.curves.iter().enumerate() {
                let levy = decomposition::is_fixed_levy_curve(&m, c).map_err(|e| anyhow!("{e}"))?;
                let tag = if levy { "  # fixed Levy curve" } else { "" };
                writeln!(out, "curve c{n}: {}{tag}", curve_text(m.k(), &i.file.edges, c))?;
            }
            let t = decomposition::thurston_matrix(&m, &g).map_err(|e| anyhow!("DecompositionError: {e}"))?;
            matrix_text(out, &t);
            Ok(g.is_empty())
        }
        Cmd::Matrix { file, curves } => {
            let i = load(file)?;
            header(out, &[&i]);
            let m = model(&i.file)?;
            let g = if curves.is_empty() {
                decomposition::canonical_obstruction(&m).map_err(|e| anyhow!("{e}"))?
            } else {
                let cs = curves.iter().map(|c| curve_named(&i.file, c)).collect::<Result<Vec<_>>>()?;
                Multicurve::new(m.k(), cs).map_err(|e| anyhow!("DecompositionError: {e}"))?
            };
            for (n, c) in g.curves.iter().enumerate() {
                let name = curves.get(n).cloned().unwrap_or_else(|| format!("c{n}"));
                writeln!(out, "curve {name}: {}", curve_text(m.k(), &i.file.edges, c))?;
            }
            let t = decomposition::thurston_matrix(&m, &g).map_err(|e| anyhow!("DecompositionError: {e}"))?;
            matrix_text(out, &t);
            Ok(!t.is_obstruction())
        }
        Cmd::Preimage { file, curve } => {
            let i = load(file)?;
            header(out, &[&i]);
            let m = model(&i.file)?;
            let c = curve_named(&i.file, curve)?;
            let pre = decomposition::classify_curve_preimage(&m, &c).map_err(|e| anyhow!("DecompositionError: {e}"))?;
            writeln!(out, "components {}", pre.len())?;
            for p in &pre {
                let tag = match p.tag {
                    Tag::Isotopic => "isotopic",
                    Tag::OtherEssential => "essential",
                    Tag::Peripheral => "peripheral",
                    Tag::Null => "null",
                };
                let shape = if p.curve.letters.is_empty() { String::new() } else { format!(" {}", curve_text(m.k(), &i.file.edges, &p.curve)) };
                writeln!(out, "degree {} {tag}{shape}", p.degree)?;
            }
            Ok(true)
        }
        Cmd::Twist { file, curve, n } => {
            let i = load(file)?;
            header(out, &[&i]);
            let c = curve_named(&i.file, curve)?;
            let resolved = match twisting::resolve_twist(&i.file.pair, &c, *n) {
                Ok(r) => {
                    writeln!(out, "resolved by rotation")?;
                    r
                }
                Err(TwistError::NotSimpleTransversal(e)) => {
                    writeln!(out, "not a simple transversal (edge {} crossed twice): lifting the twisted map", i.file.edges[e])?;
                    let mut p = i.file.pair.clone();
                    p.phi = thurston::isotopy::Word::twist(c.clone(), *n);
                    let m = blow_up_unchecked(&p).map_err(|e| anyhow!("BlowupError: {e}"))?;
                    classify::pair_of(&m).map_err(|e| anyhow!("{e}"))?
                }
                Err(e) => bail!("TwistError: {e}"),
            };
            let realized = is_connected(&resolved.k, &resolved.arcs);
            let (pf, _) = arcs_file(&i.file, &resolved, &[]);
            out.push_str(&pairfile::serialize(&pf));
            writeln!(out, "{}", verdict(realized))?;
            Ok(realized)
        }
        Cmd::Rotate { file, curve, n } => {
            let i = load(file)?;
            header(out, &[&i]);
            let c = curve_named(&i.file, curve)?;
            let arcs = twisting::rotate_graph(&i.file.pair, &c, *n).map_err(|e| anyhow!("TwistError: {e}"))?;
            let ap = ArcPair { k: i.file.pair.k.clone(), arcs, phi: Homeo::identity() };
            let (pf, _) = arcs_file(&i.file, &ap, &[]);
            out.push_str(&pairfile::serialize(&pf));
            Ok(true)
        }
        Cmd::Equiv { file, other } => {
            let (a, b) = (load(file)?, load(other)?);
            header(out, &[&a, &b]);
            let eq = if admissible(&a.file) && admissible(&b.file) {
                classify::pairs_equivalent(&a.file.pair.to_arcs(), &b.file.pair.to_arcs())
            } else {
                classify::maps_equivalent(&model(&a.file)?, &model(&b.file)?)
            }
            .map_err(|e| anyhow!("ClassifyError: {e}"))?;
            writeln!(out, "{}", if eq { "equivalent" } else { "inequivalent" })?;
            Ok(eq)
        }
        Cmd::Render { file } => {
            let i = load(file)?;
            let m = model(&i.file)?;
            let k = m.k();
            let charge = lifting_algorithm(&m, &start_tree(&m, cli.seed), lifting::CAP)
                .map_err(|e| anyhow!("LiftingError: {e}"))?
                .edges;
            let obs = decomposition::obstruction_of_charge(k, &charge);
            let ap = ArcPair { k: k.clone(), arcs: charge.clone(), phi: Homeo::identity() };
            let named: Vec<(String, Curve)> =
                obs.curves.iter().enumerate().map(|(n, c)| (format!("c{n}"), c.clone())).collect();
            let (pf, _) = arcs_file(&i.file, &ap, &named);
            out.push_str(&render(&i, &pf, is_connected(k, &charge)));
            Ok(obs.is_empty())
        }
        Cmd::Selftest => {
            let mut all = true;
            for (name, ok) in selftest() {
                all &= ok;
                writeln!(out, "{} {name}", if ok { "PASS" } else { "FAIL" })?;
            }
            if !all {
                bail!("selftest failed");
            }
            Ok(true)
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// DOT text: charge vertices with their rotations, edges with multiplicity,
/// faces of the charge carrier and the obstruction curves as annotations.
fn render(i: &Input, pf: &PairFile, realized: bool) -> String {
    let k = &pf.pair.k;
    let mut s = String::new();
    writeln!(s, "// input {} sha256 {}", i.name, i.hash).unwrap();
    writeln!(s, "graph charge {{").unwrap();
    writeln!(s, "  label={};", quote(verdict(realized))).unwrap();
    for (v, name) in pf.vertices.iter().enumerate() {
        let r: Vec<&str> = k.rotation(v).iter().map(|&d| pf.edges[d >> 1].as_str()).collect();
        writeln!(s, "  {} [rotation={}];", quote(name), quote(&r.join(" "))).unwrap();
    }
    for (e, name) in pf.edges.iter().enumerate() {
        let (a, b) = k.ends(e);
        let style = if pf.pair.in_g[e] { "solid" } else { "invis" };
        writeln!(s, "  {} -- {} [label={}, style={style}];", quote(&pf.vertices[a]), quote(&pf.vertices[b]), quote(name))
            .unwrap();
    }
    for f in 0..k.num_faces() {
        let b: Vec<&str> = k.face(f).iter().map(|&d| pf.edges[d >> 1].as_str()).collect();
        writeln!(s, "  // face f{f}: {}", b.join(" ")).unwrap();
    }
    for (name, c) in &pf.curves {
        writeln!(s, "  // curve {name}: {}", curve_text(k, &pf.edges, c)).unwrap();
    }
    writeln!(s, "}}").unwrap();
    s
}

pub const SQUARE: &str = include_str!("../../../fixtures/square.pair");
pub const DISJOINT: &str = include_str!("../../../fixtures/disjoint.pair");

/// The worked examples, each reduced to one yes or no.
pub fn selftest() -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let sq = pairfile::parse(SQUARE).expect("built in square");
    let m = blowup::blow_up(&sq.pair).expect("square is admissible");
    out.push(("square degree 5".into(), m.degree == 5));
    out.push(("square local degrees 3".into(), m.local_degrees() == vec![3; 4]));
    let charge = lifting::charge(&m).unwrap_or_default();
    out.push(("square charge is the square".into(), classify::same_graph(m.k(), &charge, &sq.pair.edge_paths())));
    out.push(("square realized".into(), decomposition::is_realized(&m).unwrap_or(false)));
    let dj = pairfile::parse(DISJOINT).expect("built in disjoint edges");
    let md = blowup::blow_up(&dj.pair).expect("disjoint edges are admissible");
    let obs = decomposition::canonical_obstruction(&md).unwrap_or_default();
    out.push(("disjoint edges obstructed by one curve".into(), obs.len() == 1));
    let t = decomposition::thurston_matrix(&md, &obs);
    out.push((
        "disjoint edges matrix [1]".into(),
        t.map(|t| t.entries == vec![vec![1.into()]] && (t.spectral_radius - 1.0).abs() < 1e-9).unwrap_or(false),
    ));
    let g1 = curve_named(&sq, "g1").unwrap();
    let g2 = curve_named(&sq, "g2").unwrap();
    let base = sq.pair.to_arcs();
    for n in -3i64..=3 {
        let r = twisting::resolve_twist(&sq.pair, &g1, n).and_then(|r| Ok(classify::pairs_equivalent(&r, &base).unwrap_or(false)));
        out.push((format!("g1 twist {n} equivalent"), r.unwrap_or(false)));
    }
    for n in -4i64..=4 {
        let r = twisting::resolve_twist(&sq.pair, &g2, n).map(|r| r.components() == 1);
        out.push((format!("g2 twist {n} {}", if n % 2 == 0 { "realized" } else { "obstructed" }), r == Ok(n % 2 == 0)));
    }
    out.push(("g1 period 1".into(), twisting::twist_period(&sq.pair, &g1).ok() == Some(1)));
    out.push(("g2 period 2".into(), twisting::twist_period(&sq.pair, &g2).ok() == Some(2)));
    out
}
