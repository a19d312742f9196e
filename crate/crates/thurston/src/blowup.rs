//! Blow-ups of admissible pairs as explicit branched covers.
//!
//! The pair lives on a carrier `K` whose edges are the graph edges plus links.
//! Blowing up with the identity gives a cover `g` of degree `|E(G)| + 1`:
//! sheet 0 is the outside, graph edge `i` opens the sheet `i + 1`, and
//! crossing a graph edge swaps its sheet with sheet 0. The full map is
//! `phi . g`, so preimages go through `phi^-1` first.
//!
//! The cover of `K` is a map `up` whose darts are pairs `(d, s)`: the lift of
//! `d` whose right face lies in sheet `s`. The sheet 0 lifts of the carrier
//! edges form a copy of `K` through the critical points, and that copy is how
//! the domain sphere is identified with the target.

use std::collections::VecDeque;

use num_rational::Ratio;
use thiserror::Error;

use crate::action::Homeo;
use crate::isotopy::{self, Word};
use crate::overlay::{Kind, Overlay, Strand};
use crate::path::{self, Curve, End, Path};
use crate::sphere::{edge_of, Dart, Map};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("pair is not admissible: {0}")]
    NotAdmissible(Report),
    #[error("graph has no edges")]
    Empty,
    #[error("vertex {0} is critical but not a vertex of the graph")]
    VertexCoverViolation(usize),
    #[error("arcs cross each other")]
    Crossing,
}

/// A graph on the marked sphere with a mapping class. The graph is the set of
/// carrier edges flagged in `in_g`; the other carrier edges are links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub k: Map,
    pub in_g: Vec<bool>,
    pub phi: Word,
}

impl Pair {
    pub fn new(k: Map, in_g: Vec<bool>, phi: Word) -> Pair {
        assert_eq!(in_g.len(), k.num_edges());
        Pair { k, in_g, phi }
    }

    pub fn identity(k: Map, in_g: Vec<bool>) -> Pair {
        Pair::new(k, in_g, Word::identity())
    }

    /// Whole carrier as the graph.
    pub fn full(k: Map) -> Pair {
        let n = k.num_edges();
        Pair::identity(k, vec![true; n])
    }

    pub fn edges(&self) -> Vec<usize> {
        (0..self.k.num_edges()).filter(|&e| self.in_g[e]).collect()
    }

    pub fn graph_degree(&self, v: usize) -> usize {
        self.k.rotation(v).iter().filter(|&&d| self.in_g[edge_of(d)]).count()
    }

    pub fn edge_paths(&self) -> Vec<Path> {
        self.edges().into_iter().map(|e| Path::edge(&self.k, e)).collect()
    }

    pub fn to_arcs(&self) -> ArcPair {
        ArcPair { k: self.k.clone(), arcs: self.edge_paths(), phi: Homeo::Word(self.phi.clone()) }
    }
}

/// A graph given as arcs on a carrier, with a mapping class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcPair {
    pub k: Map,
    pub arcs: Vec<Path>,
    pub phi: Homeo,
}

impl ArcPair {
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.arcs.iter().flat_map(|p| [p.first_vertex(&self.k), p.last_vertex(&self.k)]).flatten().collect();
        v.sort();
        v.dedup();
        v
    }

    /// Number of connected components of the graph.
    pub fn components(&self) -> usize {
        let n = self.k.num_vertices();
        let mut up: Vec<usize> = (0..n).collect();
        fn find(up: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while up[x] != x {
                x = up[x];
            }
            x
        }
        for p in &self.arcs {
            let (a, b) = (find(&mut up, p.first_vertex(&self.k).unwrap()), find(&mut up, p.last_vertex(&self.k).unwrap()));
            up[a] = b;
        }
        self.vertices().into_iter().filter(|&v| find(&mut up, v) == v).count()
    }

    /// Carrier in which the arcs are edges, links added where needed.
    pub fn to_pair(&self) -> Pair {
        self.carry(&[]).0
    }

    /// `to_pair`, also carrying some curves to the new carrier.
    pub fn carry(&self, extra: &[Curve]) -> (Pair, Vec<Curve>) {
        let k = &self.k;
        let arcs: Vec<Path> = self.arcs.iter().map(|p| path::reduce(k, p)).collect();
        let (paths, mut curves): (Vec<Path>, Vec<Curve>) = match &self.phi {
            Homeo::Word(w) => (Vec::new(), w.letters.iter().map(|(c, _)| c.clone()).collect()),
            Homeo::Action(a) => (a.gens.iter().chain(a.images.iter()).cloned().collect(), Vec::new()),
        };
        let nw = curves.len();
        curves.extend(extra.iter().cloned());
        let ch = crate::carrier::change(k, &arcs, &paths, &curves);
        let mut in_g = vec![false; ch.map.num_edges()];
        for &d in &ch.arcs {
            in_g[edge_of(d)] = true;
        }
        let phi = match &self.phi {
            Homeo::Word(w) => Word {
                letters: w.letters.iter().zip(&ch.curves).map(|((_, n), c)| (path::reduce_curve(c), *n)).collect(),
            },
            // an action does not survive a change of carrier; callers print it separately
            Homeo::Action(_) => Word::identity(),
        };
        let mut curves: Vec<Curve> = phi.letters.iter().map(|(c, _)| c.clone()).collect();
        curves.extend(ch.curves[nw..].iter().cloned());
        let (k, in_g, curves, _) = drop_links(ch.map, in_g, curves, Vec::new());
        let phi = Word { letters: phi.letters.iter().zip(&curves).map(|((_, n), c)| (path::reduce_curve(c), *n)).collect() };
        let extra = curves[phi.letters.len()..].iter().map(path::reduce_curve).collect();
        (Pair::new(k, in_g, phi), extra)
    }
}

/// Deletes links that are not bridges until only the needed ones are left.
/// Curves and paths lose their crossings with the deleted links.
pub(crate) fn drop_links(
    k: Map,
    in_g: Vec<bool>,
    curves: Vec<Curve>,
    paths: Vec<Path>,
) -> (Map, Vec<bool>, Vec<Curve>, Vec<Path>) {
    let (mut k, mut in_g, mut curves, mut paths) = (k, in_g, curves, paths);
    while let Some(e) = (0..k.num_edges()).find(|&e| !in_g[e] && k.face_of(2 * e) != k.face_of(2 * e + 1)) {
        let r = k.refine(crate::sphere::Refinement::Delete(e)).expect("a link on a cycle can go");
        let letters = |l: &[Dart]| l.iter().filter_map(|&x| r.darts[x]).collect::<Vec<_>>();
        // a corner on the deleted edge joins the sector before it
        let end = |x: End| {
            let mut c = x.corner();
            while r.darts[c].is_none() {
                c = k.prev(c);
            }
            let c = r.darts[c].unwrap();
            if x.is_point() { End::Point(c) } else { End::Corner(c) }
        };
        curves = curves.iter().map(|c| Curve { letters: letters(&c.letters) }).collect();
        paths = paths.iter().map(|p| Path { start: end(p.start), letters: letters(&p.letters), end: end(p.end) }).collect();
        let mut g = vec![false; r.map.num_edges()];
        for (old, &b) in in_g.iter().enumerate() {
            if let Some(d) = r.darts[2 * old] {
                g[edge_of(d)] = b;
            }
        }
        in_g = g;
        k = r.map;
    }
    (k, in_g, curves, paths)
}

/// What is wrong with a pair, if anything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub isolated: Vec<usize>,
    pub loops: Vec<usize>,
    pub moved: Vec<usize>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.isolated.is_empty() && self.loops.is_empty() && self.moved.is_empty()
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        let mut parts = Vec::new();
        if !self.isolated.is_empty() {
            parts.push(format!("isolated vertex {:?}", self.isolated));
        }
        if !self.loops.is_empty() {
            parts.push(format!("loop edges {:?}", self.loops));
        }
        if !self.moved.is_empty() {
            parts.push(format!("edges moved by the homeomorphism {:?}", self.moved));
        }
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_admissible(p: &Pair) -> Report {
    let k = &p.k;
    let mut r = Report::default();
    for v in 0..k.num_vertices() {
        if p.graph_degree(v) == 0 {
            r.isolated.push(v);
        }
    }
    for e in p.edges() {
        if k.is_loop(e) {
            r.loops.push(e);
            continue;
        }
        let a = Path::edge(k, e);
        if !isotopy::are_isotopic_arcs(k, &isotopy::apply_path(k, &p.phi, &a), &a) {
            r.moved.push(e);
        }
    }
    r
}

/// One lift of an arc: the cover path and where it runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lift {
    pub sheet: usize,
    pub path: Path,
    pub start: usize,
    pub end: usize,
    pub critical: bool,
}

/// The blown-up map `phi . g` as a cover of the carrier.
#[derive(Debug, Clone)]
pub struct Model {
    pub pair: Pair,
    pub degree: usize,
    sheet: Vec<usize>,
    pub up: Map,
    lift_of: Vec<usize>,
    below: Vec<usize>,
    crit_of: Vec<Option<usize>>,
}

pub fn blow_up(p: &Pair) -> Result<Model, BlowupError> {
    let r = validate_admissible(p);
    if p.edges().is_empty() {
        return Err(BlowupError::Empty);
    }
    if !r.ok() {
        return Err(BlowupError::NotAdmissible(r));
    }
    Ok(Model::build(p.clone()))
}

/// Blow-up of `(G, id)` followed by `phi`, admissible or not. Twisted maps
/// `T . f` are built this way.
pub fn blow_up_unchecked(p: &Pair) -> Result<Model, BlowupError> {
    if p.edges().is_empty() {
        return Err(BlowupError::Empty);
    }
    Ok(Model::build(p.clone()))
}

impl Model {
    fn build(pair: Pair) -> Model {
        let k = &pair.k;
        let mut sheet = vec![0; k.num_edges()];
        let mut n = 1;
        for e in pair.edges() {
            sheet[e] = n;
            n += 1;
        }
        let mut m = Model {
            pair: pair.clone(),
            degree: n,
            sheet,
            up: k.clone(),
            lift_of: Vec::new(),
            below: Vec::new(),
            crit_of: Vec::new(),
        };
        let nd = k.num_darts() * n;
        let mut seen = vec![false; nd];
        let mut rot = Vec::new();
        let mut below = Vec::new();
        for s0 in 0..nd {
            if seen[s0] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s0;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                let (d, s) = m.split(x);
                x = m.dart(k.next(d), m.tau(edge_of(d), s));
            }
            below.push(k.origin(m.split(s0).0));
            rot.push(cyc);
        }
        let mut vert = vec![0; nd];
        for (v, r) in rot.iter().enumerate() {
            for &x in r {
                vert[x] = v;
            }
        }
        let lift_of: Vec<usize> = (0..k.num_vertices()).map(|v| vert[m.dart(k.rotation(v)[0], 0)]).collect();
        let mut crit_of = vec![None; rot.len()];
        for (v, &x) in lift_of.iter().enumerate() {
            crit_of[x] = Some(v);
        }
        let marked = crit_of.iter().map(|c| c.is_some()).collect();
        m.up = Map::from_rotations(rot, marked).expect("a branched cover of the sphere by the sphere");
        m.lift_of = lift_of;
        m.below = below;
        m.crit_of = crit_of;
        m
    }

    pub fn k(&self) -> &Map {
        &self.pair.k
    }

    fn tau(&self, e: usize, s: usize) -> usize {
        let t = self.sheet[e];
        if t == 0 {
            s
        } else if s == 0 {
            t
        } else if s == t {
            0
        } else {
            s
        }
    }

    /// Cover dart over `d` with its right face in sheet `s`.
    pub fn dart(&self, d: Dart, s: usize) -> Dart {
        let e = edge_of(d);
        if d % 2 == 0 {
            2 * (e * self.degree + s)
        } else {
            2 * (e * self.degree + self.tau(e, s)) + 1
        }
    }

    pub fn split(&self, x: Dart) -> (Dart, usize) {
        let id = x >> 1;
        let (e, s) = (id / self.degree, id % self.degree);
        if x % 2 == 0 {
            (2 * e, s)
        } else {
            (2 * e + 1, self.tau(e, s))
        }
    }

    /// Sheet opened by graph edge `e`, or 0 for a link.
    pub fn sheet_of(&self, e: usize) -> usize {
        self.sheet[e]
    }

    pub fn crit(&self) -> Vec<usize> {
        (0..self.k().num_vertices()).collect()
    }

    /// Cover vertex of the critical point `v`.
    pub fn crit_lift(&self, v: usize) -> usize {
        self.lift_of[v]
    }

    /// Carrier vertex under cover vertex `x`.
    pub fn below(&self, x: usize) -> usize {
        self.below[x]
    }

    /// The critical point at cover vertex `x`, if it is one.
    pub fn crit_at(&self, x: usize) -> Option<usize> {
        self.crit_of[x]
    }

    pub fn local_degree(&self, v: usize) -> usize {
        self.up.degree(self.lift_of[v]) / self.k().degree(v)
    }

    pub fn local_degrees(&self) -> Vec<usize> {
        (0..self.k().num_vertices()).map(|v| self.local_degree(v)).collect()
    }

    pub fn orbifold_euler(&self) -> Ratio<i64> {
        Ratio::from_integer(2 - self.k().num_vertices() as i64)
    }

    fn is_base(&self, x: Dart) -> bool {
        (x >> 1) % self.degree == 0
    }

    /// Lift of a carrier path under `g` whose start sector lies in sheet `s`.
    pub fn lift_g(&self, p: &Path, s: usize) -> Path {
        let c = p.start.corner();
        let mut sig = s;
        let start = End::Corner(self.dart(c, self.tau(edge_of(c), sig)));
        let mut letters = Vec::with_capacity(p.letters.len());
        for &x in &p.letters {
            letters.push(self.dart(x, sig));
            sig = self.tau(edge_of(x), sig);
        }
        let c = p.end.corner();
        let end = End::Corner(self.dart(c, self.tau(edge_of(c), sig)));
        Path { start, letters, end }
    }

    /// Sheet of the face right of cover dart `x`.
    pub fn face_sheet(&self, x: Dart) -> usize {
        self.split(x).1
    }

    /// Sheet of the sector at cover corner `c`.
    pub fn corner_sheet(&self, c: Dart) -> usize {
        let (d, s) = self.split(c);
        self.tau(edge_of(d), s)
    }

    /// Carrier corner containing cover corner `c` at a critical point.
    fn down_corner(&self, c: Dart) -> Dart {
        let mut x = c;
        while !self.is_base(x) {
            x = self.up.prev(x);
        }
        self.split(x).0
    }

    /// Forgets every cover edge off the sheet 0 copy of the carrier. Ends
    /// must be critical.
    pub fn down(&self, p: &Path) -> Path {
        let letters = p.letters.iter().filter(|&&x| self.is_base(x)).map(|&x| self.split(x).0).collect();
        Path { start: End::Corner(self.down_corner(p.start.corner())), letters, end: End::Corner(self.down_corner(p.end.corner())) }
    }

    /// Preimage direction of the homeomorphism, end corners kept.
    pub fn pull_phi(&self, p: &Path) -> Path {
        if self.pair.phi.is_identity() {
            return p.clone();
        }
        isotopy::apply_path_raw(self.k(), &self.pair.phi.inverse(), p)
    }

    /// All `degree` lifts under `phi . g` of a path between carrier vertices.
    pub fn lifts(&self, beta: &Path) -> Vec<Lift> {
        let b = self.pull_phi(beta);
        (0..self.degree)
            .map(|s| {
                let path = self.lift_g(&b, s);
                let start = self.up.origin(path.start.corner());
                let end = self.up.origin(path.end.corner());
                let critical = self.crit_of[start].is_some() && self.crit_of[end].is_some();
                Lift { sheet: s, path, start, end, critical }
            })
            .collect()
    }

    /// Critical lifts pushed down to the carrier, reduced.
    pub fn critical_lifts(&self, beta: &Path) -> Vec<Path> {
        self.lifts(beta).iter().filter(|l| l.critical).map(|l| path::reduce(self.k(), &self.down(&l.path))).collect()
    }

    /// Number of lifts of `alpha` isotopic to `alpha`.
    pub fn blow_up_degree(&self, alpha: &Path) -> usize {
        let k = self.k();
        let key = path::unoriented(k, alpha);
        self.critical_lifts(alpha).iter().filter(|p| path::unoriented(k, p) == key).count()
    }

    /// Components of the preimage of a closed curve under `phi . g`, pushed
    /// down to the carrier unreduced, each with its covering degree.
    pub fn curve_lifts(&self, c: &Curve) -> Vec<(Curve, usize)> {
        let k = self.k();
        let c = if self.pair.phi.is_identity() {
            path::reduce_curve(c)
        } else {
            isotopy::apply_curve(k, &self.pair.phi.inverse(), c)
        };
        if c.letters.is_empty() {
            return (0..self.degree).map(|_| (c.clone(), 1)).collect();
        }
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for s0 in 0..self.degree {
            if seen[s0] {
                continue;
            }
            let mut letters = Vec::new();
            let mut sig = s0;
            let mut deg = 0;
            loop {
                seen[sig] = true;
                deg += 1;
                for &x in &c.letters {
                    let y = self.dart(x, sig);
                    if self.is_base(y) {
                        letters.push(self.split(y).0);
                    }
                    sig = self.tau(edge_of(x), sig);
                }
                if sig == s0 {
                    break;
                }
            }
            out.push((Curve { letters }, deg));
        }
        out
    }

    /// The two boundary lifts of graph edge `e` and the sheet between them.
    pub fn triple(&self, e: usize) -> Option<(Path, Path, usize)> {
        let t = self.sheet[e];
        if t == 0 {
            return None;
        }
        let k = self.k();
        let a = Path::edge(k, e);
        let plus = self.down(&self.lift_g(&a, t));
        let minus = self.down(&self.lift_g(&a, 0));
        Some((path::reduce(k, &plus), path::reduce(k, &minus), t))
    }
}

/// Map of a set of disjoint arcs, one vertex per carrier vertex they touch.
/// Also returns, per carrier dart, the rank of each arc end in its corner.
#[derive(Debug, Clone)]
pub struct Drawn {
    pub map: Map,
    pub vertex: Vec<Option<usize>>,
    rank: Vec<(usize, usize)>,
}

pub fn draw(k: &Map, arcs: &[Path]) -> Result<Drawn, BlowupError> {
    let o = Overlay::new(k, arcs.iter().map(|p| Strand::Arc(p.clone())).collect());
    let mut rank = vec![(0, 0); 2 * arcs.len()];
    let mut vertex = vec![None; k.num_vertices()];
    let mut rot = Vec::new();
    for v in 0..k.num_vertices() {
        let mut r = Vec::new();
        let mut i = 0;
        for &y in o.m.rotation(v) {
            match o.kind(y) {
                Kind::Piece(..) => i = 0,
                Kind::Seg(s, _, fwd) => {
                    let d = if fwd { 2 * s } else { 2 * s + 1 };
                    rank[d] = (v, i);
                    i += 1;
                    r.push(d);
                }
            }
        }
        if !r.is_empty() {
            vertex[v] = Some(rot.len());
            rot.push(r);
        }
    }
    let marked = vec![true; rot.len()];
    let map = Map::from_rotations(rot, marked).map_err(|_| BlowupError::Crossing)?;
    Ok(Drawn { map, vertex, rank })
}

/// The complete preimage of a graph drawn as disjoint arcs.
#[derive(Debug, Clone)]
pub struct Preimage {
    /// Cover vertex of each node.
    pub nodes: Vec<usize>,
    /// Node pairs, one per lifted edge, edge `i` lifted from `source[i]`.
    pub edges: Vec<(usize, usize)>,
    pub source: Vec<usize>,
    pub lifts: Vec<Path>,
    pub map: Map,
    pub base: Map,
}

impl Preimage {
    pub fn is_critical(&self, m: &Model, node: usize) -> bool {
        m.crit_at(self.nodes[node]).is_some()
    }
}

pub fn complete_preimage(m: &Model, h: &[Path]) -> Result<Preimage, BlowupError> {
    let k = m.k();
    let h: Vec<Path> = h
        .iter()
        .map(|p| {
            let q = if m.pair.phi.is_identity() { p.clone() } else { isotopy::apply_path(k, &m.pair.phi.inverse(), p) };
            path::reduce(k, &q)
        })
        .collect();
    let base = draw(k, &h)?;
    for v in 0..k.num_vertices() {
        if base.vertex[v].is_none() {
            return Err(BlowupError::VertexCoverViolation(v));
        }
    }
    let mut node_of = vec![usize::MAX; m.up.num_vertices()];
    let mut nodes = Vec::new();
    let mut ends: Vec<Vec<((usize, usize), Dart)>> = Vec::new();
    let mut edges = Vec::new();
    let mut source = Vec::new();
    let mut lifts = Vec::new();
    for (i, p) in h.iter().enumerate() {
        for s in 0..m.degree {
            let l = m.lift_g(p, s);
            let id = lifts.len();
            let mut at = |c: Dart, d: Dart, r: usize| {
                let x = m.up.origin(c);
                if node_of[x] == usize::MAX {
                    node_of[x] = nodes.len();
                    nodes.push(x);
                    ends.push(Vec::new());
                }
                let pos = m.up.rotation(x).iter().position(|&y| y == c).unwrap();
                ends[node_of[x]].push(((pos, r), d));
                node_of[x]
            };
            let a = at(l.start.corner(), 2 * id, base.rank[2 * i].1);
            let b = at(l.end.corner(), 2 * id + 1, base.rank[2 * i + 1].1);
            edges.push((a, b));
            source.push(i);
            lifts.push(l);
        }
    }
    let rot: Vec<Vec<Dart>> = ends
        .into_iter()
        .map(|mut e| {
            e.sort();
            e.into_iter().map(|(_, d)| d).collect()
        })
        .collect();
    let marked = nodes.iter().map(|&x| m.crit_at(x).is_some()).collect();
    let map = Map::from_rotations(rot, marked).expect("preimage of a connected graph is a connected plane graph");
    Ok(Preimage { nodes, edges, source, lifts, map, base: base.map })
}

/// Breadth first distances in the preimage graph, used by tests and the tree
/// pullback.
pub fn node_distances(p: &Preimage, root: usize) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); p.nodes.len()];
    for &(a, b) in &p.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![None; p.nodes.len()];
    dist[root] = Some(0);
    let mut q = VecDeque::from([root]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if dist[y].is_none() {
                dist[y] = Some(dist[x].unwrap() + 1);
                q.push_back(y);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn square_degrees() {
        let m = blow_up(&Pair::full(fixtures::square())).unwrap();
        assert_eq!(m.degree, 5);
        assert_eq!(m.local_degrees(), vec![3; 4]);
        assert_eq!(m.up.euler(), 2);
        assert_eq!(m.orbifold_euler(), Ratio::from_integer(-2));
    }

    #[test]
    fn sheet_zero_copy_matches_carrier() {
        let k = fixtures::square();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        for v in 0..k.num_vertices() {
            let x = m.crit_lift(v);
            let base: Vec<Dart> = m.up.rotation(x).iter().filter(|&&y| m.is_base(y)).map(|&y| m.split(y).0).collect();
            let i = base.iter().position(|&d| d == k.rotation(v)[0]).unwrap();
            let mut r = base[i..].to_vec();
            r.extend_from_slice(&base[..i]);
            assert_eq!(r, k.rotation(v));
        }
    }

    #[test]
    fn small_degrees() {
        let m = blow_up(&Pair::full(fixtures::single_edge())).unwrap();
        assert_eq!((m.degree, m.local_degrees()), (2, vec![2, 2]));
        assert_eq!(m.orbifold_euler(), Ratio::from_integer(0));
        let m = blow_up(&Pair::full(fixtures::parallel_edges(2))).unwrap();
        assert_eq!((m.degree, m.local_degrees()), (3, vec![3, 3]));
        let total: usize = m.local_degrees().iter().map(|d| d - 1).sum();
        assert_eq!(total, 2 * (m.degree - 1));
    }

    #[test]
    fn edges_blow_up() {
        let k = fixtures::square();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        for e in 0..4 {
            assert_eq!(m.blow_up_degree(&Path::edge(&k, e)), 2);
            let (p, q, _) = m.triple(e).unwrap();
            assert!(isotopy::are_isotopic_arcs(&k, &p, &Path::edge(&k, e)));
            assert!(isotopy::are_isotopic_arcs(&k, &q, &Path::edge(&k, e)));
        }
        let f = k.face_of(0);
        let a = isotopy::corner_at(&k, 0, f).unwrap();
        let c = isotopy::corner_at(&k, 2, f).unwrap();
        assert!(m.blow_up_degree(&isotopy::chord(a, c)) <= 1);
        let k2 = fixtures::parallel_edges(2);
        let m2 = blow_up(&Pair::full(k2.clone())).unwrap();
        assert_eq!(m2.blow_up_degree(&Path::edge(&k2, 0)), 3);
    }

    #[test]
    fn admissibility() {
        let k = fixtures::square();
        let p = Pair::new(k.clone(), vec![true; 4], Word::twist(fixtures::square_gamma1(), 1));
        let r = validate_admissible(&p);
        assert_eq!(r.moved, vec![0, 2]);
        assert!(matches!(blow_up(&p), Err(BlowupError::NotAdmissible(_))));
        let (k, _) = fixtures::disjoint_edges();
        let r = validate_admissible(&Pair::identity(k, vec![true, false, false]));
        assert_eq!(r.isolated, vec![2, 3]);
        let k = fixtures::single_edge();
        assert_eq!(blow_up(&Pair::identity(k, vec![false])).unwrap_err(), BlowupError::Empty);
    }

    #[test]
    fn preimage_counts() {
        let k = fixtures::single_edge();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        let pre = complete_preimage(&m, &[Path::edge(&k, 0)]).unwrap();
        assert_eq!(pre.edges.len(), 2);
        assert_eq!(pre.map.num_faces(), 2);
        let k = fixtures::square();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        let t: Vec<Path> = (0..3).map(|e| Path::edge(&k, e)).collect();
        let pre = complete_preimage(&m, &t).unwrap();
        assert_eq!(pre.edges.len(), 15);
        assert_eq!(pre.map.euler(), 2);
        assert_eq!(pre.map.num_faces(), 5 * pre.base.num_faces());
        assert!(node_distances(&pre, 0).iter().all(|d| d.is_some()));
    }
}
