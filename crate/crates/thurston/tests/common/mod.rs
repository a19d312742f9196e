//! Seeded fixtures and the property checks shared by the integration tests
//! and the acceptance runner.
#![allow(dead_code)]

pub mod oracle;

use rand::Rng;
use thurston::action::Homeo;
use thurston::blowup::{blow_up, blow_up_unchecked, ArcPair, Model, Pair};
use thurston::classify::{edge_classes, maps_equivalent, pair_of};
use thurston::decomposition::{classify_curve_preimage, Tag};
use thurston::fixtures::{self, Rng64};
use thurston::isotopy::{self, Word};
use thurston::lifting::{self, intersection, pullback, tree_norm, Tree};
use thurston::path::{self, Curve, Path};
use thurston::sphere::Map;
use thurston::twisting::is_simple_transversal;

pub struct Case {
    pub seed: u64,
    pub pair: Pair,
    pub model: Model,
    /// Graph edges as carrier paths.
    pub graph: Vec<Path>,
}

impl Case {
    pub fn k(&self) -> &Map {
        &self.pair.k
    }
}

/// Random pair (G, id) with at most 6 vertices and 8 carrier edges.
pub fn case(seed: u64) -> Case {
    let mut r = fixtures::rng(seed);
    let nv = r.random_range(2..=6);
    let ne = r.random_range(nv - 1..=8);
    let k = fixtures::random_map(&mut r, nv, ne);
    let g = fixtures::random_cover(&mut r, &k);
    let pair = Pair::identity(k, g);
    let model = blow_up(&pair).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    let graph = pair.edge_paths();
    Case { seed, pair, model, graph }
}

pub fn random_word(r: &mut Rng64, k: &Map, len: usize) -> Word {
    let mut letters = Vec::new();
    for _ in 0..len {
        if let Some(c) = fixtures::random_curve(r, k) {
            let n = r.random_range(1i64..=2) * if r.random_bool(0.5) { 1 } else { -1 };
            letters.push((c, n));
        }
    }
    Word { letters }
}

/// Every graph edge blows up with degree one more than its multiplicity.
pub fn edge_degrees(c: &Case) -> Result<(), String> {
    let k = c.k();
    for (i, p) in c.graph.iter().enumerate() {
        let d = c.model.blow_up_degree(p);
        let m = isotopy::edge_multiplicity(k, &c.graph, i);
        if d != m + 1 {
            return Err(format!("seed {}: edge {i} degree {d}, multiplicity {m}", c.seed));
        }
    }
    Ok(())
}

/// Arcs that lift to themselves miss the graph, and exactly `deg - 1` graph
/// edges are isotopic to each arc. Returns how many arcs had positive degree.
pub fn blown_up_arcs(c: &Case, r: &mut Rng64, samples: usize) -> Result<usize, String> {
    let k = c.k();
    let mut arcs: Vec<Path> = (0..k.num_edges()).map(|e| Path::edge(k, e)).collect();
    for i in 0..samples {
        arcs.push(if i % 2 == 0 { fixtures::random_chord(r, k) } else { fixtures::random_arc(r, k, 1 + i % 3) });
    }
    let mut positive = 0;
    for a in &arcs {
        let d = c.model.blow_up_degree(a);
        let parallel = c.graph.iter().filter(|e| isotopy::are_isotopic_arcs(k, e, a)).count();
        if parallel != d.saturating_sub(1) {
            return Err(format!("seed {}: arc {a:?} degree {d}, {parallel} graph edges parallel", c.seed));
        }
        if d > 0 {
            positive += 1;
            if let Some(e) = c.graph.iter().position(|e| isotopy::arc_intersection(k, e, a) > 0) {
                return Err(format!("seed {}: arc {a:?} of degree {d} meets edge {e}", c.seed));
            }
        }
    }
    Ok(positive)
}

/// Counts of (simple transversals checked, essential curves rejected).
pub fn transversal_preimages(c: &Case, r: &mut Rng64, tries: usize) -> Result<(usize, usize), String> {
    let k = c.k();
    let (mut simple, mut rejected) = (0, 0);
    for _ in 0..tries {
        let Some(mut g) = fixtures::random_curve(r, k) else { return Ok((simple, rejected)) };
        if r.random_bool(0.3) {
            if let Some(h) = fixtures::random_curve(r, k) {
                g = path::reduce_curve(&isotopy::twist_curve(k, &h, 1, &g));
            }
        }
        if path::curve_kind(k, &g) != path::CurveKind::Essential {
            continue;
        }
        let crossing: Vec<usize> = c.graph.iter().map(|e| isotopy::arc_curve_intersection(k, e, &g)).collect();
        let expect = crossing.iter().all(|&n| n <= 1);
        if is_simple_transversal(&c.pair, &g) != expect {
            return Err(format!("seed {}: transversal verdict wrong for {g:?}, crossings {crossing:?}", c.seed));
        }
        if !expect {
            rejected += 1;
            continue;
        }
        simple += 1;
        let i: usize = crossing.iter().sum();
        let comps = classify_curve_preimage(&c.model, &g).map_err(|e| format!("seed {}: {e}", c.seed))?;
        let iso: Vec<_> = comps.iter().filter(|x| x.tag == Tag::Isotopic).collect();
        if iso.len() != 1 || iso[0].degree != i + 1 {
            return Err(format!("seed {}: curve {g:?} crossing {i} times has isotopic lifts {iso:?}", c.seed));
        }
        if let Some(x) = comps.iter().find(|x| x.tag != Tag::Isotopic && (x.tag != Tag::Null || x.degree != 1)) {
            return Err(format!("seed {}: curve {g:?} has extra lift {x:?}", c.seed));
        }
    }
    Ok((simple, rejected))
}

/// Random spanning tree pushed around by a few twists.
pub fn twisted_tree(c: &Case, r: &mut Rng64) -> Tree {
    let k = c.k();
    let t = lifting::random_tree(k, r.random());
    let len = r.random_range(0..=2);
    let w = random_word(r, k, len);
    let arcs: Vec<Path> = t.edge_arcs().iter().map(|p| path::reduce(k, &isotopy::apply_path(k, &w, p))).collect();
    Tree::from_arcs(k, &arcs)
}

#[derive(Debug, Default, Clone, Copy)]
pub struct PullbackStats {
    pub steps: usize,
    pub max_norm: usize,
    pub strict: usize,
}

/// Pulls the tree back until its norm vanishes, checking the vertex bound,
/// the per-edge decrease and the number of steps on the way.
pub fn pullback_sequence(c: &Case, t0: &Tree) -> Result<PullbackStats, String> {
    let k = c.k();
    // the graph of a pair (G, id) is the charge graph of its blow-up
    let charge = &c.graph;
    let crit = c.model.crit().len();
    let norm0 = tree_norm(k, t0, charge);
    let mut stats = PullbackStats { max_norm: norm0, ..Default::default() };
    let mut t = t0.clone();
    // one extra pullback past the bound checks that the norm stays zero
    for n in 0..=norm0 + 1 {
        let pb = pullback(&c.model, &t);
        if !pb.tree.is_spanning(k) {
            return Err(format!("seed {}: pullback {n} does not span", c.seed));
        }
        if pb.vertices > 2 * crit - 2 {
            return Err(format!("seed {}: pullback has {} vertices for {crit} critical points", c.seed, pb.vertices));
        }
        for a in charge {
            let (before, after) = (intersection(k, &t, a), intersection(k, &pb.tree, a));
            if after > before || (before > 0 && after == before) {
                return Err(format!("seed {}: intersection {before} -> {after} at step {n}", c.seed));
            }
            if before > 0 {
                stats.strict += 1;
            }
        }
        t = pb.tree;
        stats.steps = n + 1;
        if n + 1 >= norm0 && tree_norm(k, &t, charge) != 0 {
            return Err(format!("seed {}: norm {} after {} pullbacks from norm {norm0}", c.seed, tree_norm(k, &t, charge), n + 1));
        }
    }
    Ok(stats)
}

/// Curve classes of a list, for comparisons up to isotopy.
pub fn curve_keys(cs: &[Curve]) -> Vec<Curve> {
    let mut v: Vec<Curve> = cs.iter().map(path::curve_key).collect();
    v.sort();
    v
}

#[derive(Debug, Default, Clone, Copy)]
pub struct OracleStats {
    pub arcs: usize,
    pub pairs: usize,
    pub isotopic: usize,
    pub crossings: usize,
    /// Intersection numbers compared that were positive.
    pub positive: usize,
}

const CAP: usize = 200_000;

/// Compares reduction, isotopy verdicts and intersection numbers with the
/// brute force reducer on the edges, chords and twisted edges of `k`.
pub fn oracle_check(k: &Map, r: &mut Rng64, words: usize) -> Result<OracleStats, String> {
    let mut st = OracleStats::default();
    let mut arcs: Vec<Path> = (0..k.num_edges()).map(|e| Path::edge(k, e)).collect();
    for f in 0..k.num_faces() {
        let corners: Vec<usize> = k.face(f).iter().map(|&x| thurston::sphere::twin(x)).collect();
        for &a in &corners {
            for &b in &corners {
                if k.origin(a) != k.origin(b) {
                    arcs.push(isotopy::chord(a, b));
                }
            }
        }
    }
    // arcs known as images of an edge under a word
    let mut images: Vec<(Path, usize, Word)> = Vec::new();
    for i in 0..words {
        // redraw words that fix the edge, up to a point
        let (mut w, mut e, mut b);
        let mut tries = 0;
        loop {
            w = random_word(r, k, 1 + i % 2);
            e = r.random_range(0..k.num_edges());
            b = isotopy::apply_path(k, &w, &Path::edge(k, e));
            tries += 1;
            if tries == 20 || !isotopy::are_isotopic_arcs(k, &b, &Path::edge(k, e)) {
                break;
            }
        }
        arcs.push(b.clone());
        arcs.push(fixtures::wiggle(r, k, &b, 3));
        images.push((b, e, w));
    }
    arcs.retain(oracle::has_corners);
    let searches: Vec<oracle::Search> = arcs
        .iter()
        .map(|a| oracle::search(k, a, CAP).ok_or_else(|| format!("search cap hit on {a:?}")))
        .collect::<Result<_, _>>()?;
    for (a, s) in arcs.iter().zip(&searches) {
        st.arcs += 1;
        if s.stuck {
            return Err(format!("bigon removal gets stuck on {a:?}"));
        }
        if !s.minimal.contains(&path::reduce(k, a)) {
            return Err(format!("reduced form of {a:?} is not minimal"));
        }
    }
    for i in 0..arcs.len() {
        for j in i..arcs.len() {
            st.pairs += 1;
            let o = oracle::isotopic(&searches[i], &searches[j]);
            if o != isotopy::are_isotopic_arcs(k, &arcs[i], &arcs[j]) {
                return Err(format!("isotopy verdict differs on {:?} and {:?}", arcs[i], arcs[j]));
            }
            st.isotopic += o as usize;
        }
    }
    // i(a, W(e)) = i(W^-1(a), e), read off as edge crossings
    for (b, e, w) in &images {
        let inv = w.inverse();
        for a in &arcs {
            let pulled = isotopy::apply_path(k, &inv, a);
            let s = oracle::search(k, &pulled, CAP).ok_or("search cap hit")?;
            let o = if isotopy::are_isotopic_arcs(k, &pulled, &Path::edge(k, *e)) { 0 } else { oracle::crossings(&s, *e) };
            let lib = isotopy::arc_intersection(k, a, b);
            if o != lib {
                return Err(format!("intersection of {a:?} with {b:?}: library {lib}, oracle {o}"));
            }
            st.crossings += 1;
            st.positive += (o > 0) as usize;
        }
    }
    Ok(st)
}

/// Carriers for the oracle corpus: the named ones and some random maps.
pub fn oracle_carriers(n: usize) -> Vec<Map> {
    let mut v = vec![
        fixtures::square(),
        fixtures::disjoint_edges().0,
        fixtures::square_plus_edge().0,
        fixtures::parallel_edges(3),
    ];
    let mut r = fixtures::rng(7);
    for _ in 0..n {
        let nv = r.random_range(4..=6);
        let ne = r.random_range(nv - 1..=8);
        v.push(fixtures::random_map(&mut r, nv, ne));
    }
    v
}

/// A fixture map with the twist word it was built from, if any.
pub struct FixtureModel {
    pub name: String,
    pub model: Model,
    pub word: Word,
}

fn fixture_model(name: &str, k: Map, g: Vec<bool>, word: Word) -> FixtureModel {
    let model = blow_up_unchecked(&Pair::new(k, g, word.clone())).unwrap_or_else(|e| panic!("{name}: {e}"));
    FixtureModel { name: name.to_string(), model, word }
}

/// The named maps, their twists about the square curves, and `random`
/// seeded pairs.
pub fn fixture_models(random: u64) -> Vec<FixtureModel> {
    let sq = fixtures::square();
    let g1 = fixtures::square_gamma1();
    let g2 = fixtures::square_gamma2(&sq);
    let (dk, dg) = fixtures::disjoint_edges();
    let (pk, pg) = fixtures::square_plus_edge();
    let keep: Vec<bool> = (0..pk.num_edges()).map(|e| e < 4).collect();
    let around = path::subgraph_boundaries(&pk, &keep, 0)
        .into_iter()
        .find(|c| path::curve_kind(&pk, c) == path::CurveKind::Essential)
        .expect("the square part has an essential boundary");
    let mut out = vec![
        fixture_model("square", sq.clone(), vec![true; 4], Word::identity()),
        fixture_model("single edge", fixtures::single_edge(), vec![true], Word::identity()),
        fixture_model("three parallel edges", fixtures::parallel_edges(3), vec![true; 3], Word::identity()),
        fixture_model("disjoint edges", dk, dg, Word::identity()),
        fixture_model("square plus edge", pk.clone(), pg.clone(), Word::identity()),
        fixture_model("square plus edge twisted", pk, pg, Word::twist(around, 1)),
    ];
    for n in -2i64..=2 {
        if n != 0 {
            out.push(fixture_model(&format!("gamma1 twist {n}"), sq.clone(), vec![true; 4], Word::twist(g1.clone(), n)));
            out.push(fixture_model(&format!("gamma2 twist {n}"), sq.clone(), vec![true; 4], Word::twist(g2.clone(), n)));
        }
    }
    for seed in 0..random {
        let c = case(seed);
        out.push(FixtureModel { name: format!("random {seed}"), model: c.model, word: Word::identity() });
    }
    out
}

/// Charge graph with its mapping class as a twist word. The class comes back
/// as an action on arcs; the known word is used once it is seen to agree.
pub fn admissible_pair_of(m: &Model, known: &Word) -> Result<Pair, String> {
    let ap = pair_of(m).map_err(|e| e.to_string())?;
    let k = m.k();
    let w = match &ap.phi {
        Homeo::Word(w) => w.clone(),
        h if h.is_trivial(k).map_err(|e| e.to_string())? => Word::identity(),
        h if h.agrees(k, &Homeo::Word(known.clone())).map_err(|e| e.to_string())? => known.clone(),
        _ => return Err("mapping class does not match the known word".into()),
    };
    Ok(ArcPair { phi: Homeo::Word(w), ..ap }.to_pair())
}

pub fn cover_model_round_trip(f: &FixtureModel) -> Result<(), String> {
    let p = admissible_pair_of(&f.model, &f.word).map_err(|e| format!("{}: {e}", f.name))?;
    let back = blow_up(&p).map_err(|e| format!("{}: {e}", f.name))?;
    match maps_equivalent(&f.model, &back) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("{}: blow-up of its pair is not equivalent", f.name)),
        Err(e) => Err(format!("{}: {e}", f.name)),
    }
}

/// normalize(normalize(x)) == normalize(x) for arcs, curves and graphs.
pub fn normalize_idempotent(c: &Case, r: &mut Rng64) -> Result<usize, String> {
    let k = c.k();
    let mut n = 0;
    for i in 0..6 {
        let a = fixtures::random_arc(r, k, i % 3);
        let a = fixtures::wiggle(r, k, &a, 4);
        let once = isotopy::normalize_path(k, &a).map_err(|e| e.to_string())?;
        if isotopy::normalize_path(k, &once).map_err(|e| e.to_string())? != once {
            return Err(format!("seed {}: arc {a:?}", c.seed));
        }
        n += 1;
        if let Some(g) = fixtures::random_curve(r, k) {
            // a finger move across the first face it enters
            let mut h = g.clone();
            let x = k.face(k.face_of(thurston::sphere::twin(h.letters[0])))[0];
            h.letters.splice(1..1, [x, thurston::sphere::twin(x)]);
            let once = isotopy::normalize_curve(k, &h).map_err(|e| e.to_string())?;
            if isotopy::normalize_curve(k, &once).map_err(|e| e.to_string())? != once {
                return Err(format!("seed {}: curve {g:?}", c.seed));
            }
            n += 1;
        }
    }
    let once = edge_classes(k, &c.graph);
    let expanded: Vec<Path> = once.iter().flat_map(|(p, m)| std::iter::repeat_n(p.clone(), *m)).collect();
    if edge_classes(k, &expanded) != once {
        return Err(format!("seed {}: graph", c.seed));
    }
    Ok(n + 1)
}

/// Twisting then untwisting gives back the same arc and curve classes.
pub fn twist_untwist(c: &Case, r: &mut Rng64) -> Result<usize, String> {
    let k = c.k();
    let mut n = 0;
    for i in 0..4 {
        let w = random_word(r, k, 1 + i % 2);
        let a = fixtures::random_arc(r, k, 1);
        let back = isotopy::apply_path(k, &w.inverse(), &isotopy::apply_path(k, &w, &a));
        if path::reduce(k, &back) != path::reduce(k, &a) {
            return Err(format!("seed {}: arc {a:?} under {w:?}", c.seed));
        }
        n += 1;
        if let Some(g) = fixtures::random_curve(r, k) {
            let back = isotopy::apply_curve(k, &w.inverse(), &isotopy::apply_curve(k, &w, &g));
            if path::curve_key(&back) != path::curve_key(&g) {
                return Err(format!("seed {}: curve {g:?} under {w:?}", c.seed));
            }
            n += 1;
        }
    }
    Ok(n)
}
