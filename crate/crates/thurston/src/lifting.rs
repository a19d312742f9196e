//! Trees on the critical set, their pullbacks, and the lifting algorithm that
//! recovers the charge graph.
//!
//! A tree is kept in star form. Every unmarked vertex is contracted into a
//! region: a disk whose corners are the critical points around it, listed
//! counterclockwise, and whose sides are the boundary arcs between
//! consecutive corners with the disk on their left. A plain edge between two
//! critical points is a region with two corners whose sides are the edge and
//! its reverse. Contracting edges between unmarked vertices changes neither
//! the intersection numbers nor the classes of paths between critical points.
//!
//! Inside a region any two corners are joined by a diagonal, unique up to
//! isotopy. Pulling back lifts every region through every sheet; the lifts
//! meet at cover vertices and form the complete preimage, from which a
//! spanning tree of the critical points is cut out.

use std::collections::VecDeque;

use thiserror::Error;

use crate::action::Action;
use crate::blowup::Model;
use crate::carrier;
use crate::isotopy;
use crate::overlay::{Overlay, Strand};
use crate::par;
use crate::path::{self, End, Path};
use crate::sphere::{edge_of, twin, Dart, Map};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftingError {
    #[error("no charge graph after {0} pullbacks")]
    NonTermination(usize),
    #[error("starting tree does not span the critical points")]
    NotSpanning,
    #[error("graph is not the charge graph of the map")]
    NotCharge,
    #[error("at most two critical points: the boundary lifts are not unique")]
    TooFewCritical,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub corners: Vec<usize>,
    pub sides: Vec<Path>,
}

impl Region {
    /// Plain edge between two critical points.
    pub fn edge(k: &Map, p: &Path) -> Region {
        let p = path::reduce(k, p);
        let q = p.reversed();
        Region { corners: vec![p.first_vertex(k).unwrap(), p.last_vertex(k).unwrap()], sides: vec![p, q] }
    }

    pub fn is_edge(&self) -> bool {
        self.corners.len() == 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tree {
    pub regions: Vec<Region>,
}

impl Tree {
    pub fn from_arcs(k: &Map, arcs: &[Path]) -> Tree {
        Tree { regions: arcs.iter().map(|p| Region::edge(k, p)).collect() }
    }

    pub fn num_centers(&self) -> usize {
        self.regions.iter().filter(|r| !r.is_edge()).count()
    }

    /// Vertex count with every center counted once.
    pub fn num_vertices(&self, k: &Map) -> usize {
        k.num_vertices() + self.num_centers()
    }

    pub fn num_edges(&self) -> usize {
        self.regions.iter().map(|r| if r.is_edge() { 1 } else { r.corners.len() }).sum()
    }

    /// Connected, acyclic and through every vertex of the carrier.
    pub fn is_spanning(&self, k: &Map) -> bool {
        let n = k.num_vertices();
        let mut up: Vec<usize> = (0..n).collect();
        fn find(up: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while up[x] != x {
                up[x] = up[up[x]];
                x = up[x];
            }
            x
        }
        let mut joins = 0;
        for r in &self.regions {
            for w in r.corners.windows(2) {
                let (a, b) = (find(&mut up, w[0]), find(&mut up, w[1]));
                if a == b {
                    return false;
                }
                up[a] = b;
                joins += 1;
            }
        }
        joins + 1 == n
    }

    /// Plain edges only; stars have no arc representation.
    pub fn edge_arcs(&self) -> Vec<Path> {
        self.regions.iter().filter(|r| r.is_edge()).map(|r| r.sides[0].clone()).collect()
    }
}

/// Diagonals of every region and the angular rank of every corner.
#[derive(Debug, Clone)]
pub struct Drawn {
    /// `diag[r][i][j]` runs from corner `i` to corner `j` inside region `r`.
    pub diag: Vec<Vec<Vec<Path>>>,
    /// Position of each corner among the strand ends in its carrier corner.
    pub rank: Vec<Vec<usize>>,
}

/// Route between overlay faces that never crosses a strand.
fn inside(o: &Overlay, a: usize, b: usize) -> Vec<Dart> {
    let mut from: Vec<Option<Dart>> = vec![None; o.m.num_faces()];
    let mut seen = vec![false; o.m.num_faces()];
    seen[a] = true;
    let mut q = VecDeque::from([a]);
    while let Some(f) = q.pop_front() {
        if f == b {
            break;
        }
        for &y in o.m.face(f) {
            if o.is_seg(y) {
                continue;
            }
            let g = o.m.face_of(twin(y));
            if !seen[g] {
                seen[g] = true;
                from[g] = Some(y);
                q.push_back(g);
            }
        }
    }
    let mut out = Vec::new();
    let mut f = b;
    while f != a {
        let y = from[f].expect("corners of one region");
        out.push(y);
        f = o.m.face_of(y);
    }
    out.reverse();
    out
}

pub fn draw(k: &Map, t: &Tree) -> Drawn {
    let mut strands = Vec::new();
    let mut first = Vec::new();
    for r in &t.regions {
        first.push(strands.len());
        let n = if r.is_edge() { 1 } else { r.sides.len() };
        strands.extend(r.sides[..n].iter().map(|p| Strand::Arc(p.clone())));
    }
    let o = Overlay::new(k, strands);
    let mut rk = vec![0; o.m.num_darts()];
    for v in 0..k.num_vertices() {
        let mut i = 0;
        for &y in o.m.rotation(v) {
            if o.is_seg(y) {
                rk[y] = i;
                i += 1;
            } else {
                i = 0;
            }
        }
    }
    let mut diag = Vec::new();
    let mut rank = Vec::new();
    for (r, reg) in t.regions.iter().enumerate() {
        if reg.is_edge() {
            let ss = &o.segs[first[r]];
            let p = reg.sides[0].clone();
            let stay0 = isotopy::chord(p.start.corner(), p.start.corner());
            let stay1 = isotopy::chord(p.end.corner(), p.end.corner());
            rank.push(vec![rk[ss[0]], rk[ss[ss.len() - 1] + 1]]);
            diag.push(vec![vec![stay0, p.clone()], vec![p.reversed(), stay1]]);
            continue;
        }
        let n = reg.corners.len();
        let d: Vec<Dart> = (0..n).map(|i| o.segs[first[r] + i][0]).collect();
        rank.push(d.iter().map(|&x| rk[x]).collect());
        let mut rows = Vec::new();
        for i in 0..n {
            let mut row = Vec::new();
            for j in 0..n {
                let letters = inside(&o, o.m.corner_face(d[i]), o.m.corner_face(d[j]));
                let mp = Path { start: End::Corner(d[i]), letters, end: End::Corner(d[j]) };
                row.push(o.path_to_k(&mp));
            }
            rows.push(row);
        }
        diag.push(rows);
    }
    Drawn { diag, rank }
}

/// Letters going counterclockwise around an unmarked cover vertex from
/// corner `a` to corner `b`.
fn turn(up: &Map, a: Dart, b: Dart) -> Vec<Dart> {
    let mut out = Vec::new();
    let mut x = a;
    while x != b {
        x = up.next(x);
        out.push(x);
    }
    out
}

/// Joins cover paths that meet at unmarked vertices.
fn chain(up: &Map, pieces: &[Path]) -> Path {
    let mut letters = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        if i > 0 {
            letters.extend(turn(up, pieces[i - 1].end.corner(), p.start.corner()));
        }
        letters.extend_from_slice(&p.letters);
    }
    Path { start: pieces[0].start, letters, end: pieces[pieces.len() - 1].end }
}

/// The diagonals of a tree moved back by the homeomorphism of the model.
struct Pulled {
    diag: Vec<Vec<Vec<Path>>>,
    rank: Vec<Vec<usize>>,
}

fn pulled(m: &Model, t: &Tree) -> Pulled {
    let dr = draw(m.k(), t);
    let diag = par::map(&dr.diag, |rows| rows.iter().map(|row| row.iter().map(|p| m.pull_phi(p)).collect()).collect());
    Pulled { diag, rank: dr.rank }
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    ends: [usize; 2],
    job: usize,
    corner: [usize; 2],
}

/// Result of one pullback with the size of the tree before contraction.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub tree: Tree,
    /// Vertices after suppressing unmarked vertices of degree two.
    pub vertices: usize,
}

pub fn pullback(m: &Model, t: &Tree) -> Pullback {
    let up = &m.up;
    let deg = m.degree;
    let pl = pulled(m, t);
    let jobs: Vec<(usize, usize)> = (0..t.regions.len()).flat_map(|r| (0..deg).map(move |s| (r, s))).collect();
    // corner darts of every region lift
    let lc: Vec<Vec<Dart>> = par::map(&jobs, |&(r, s)| {
        let n = t.regions[r].corners.len();
        let mut out = vec![m.lift_g(&pl.diag[r][0][1], s).start.corner()];
        out.extend((1..n).map(|i| m.lift_g(&pl.diag[r][0][i], s).end.corner()));
        out
    });
    let nu = up.num_vertices();
    let mut pos = vec![0; up.num_darts()];
    for v in 0..nu {
        for (i, &d) in up.rotation(v).iter().enumerate() {
            pos[d] = i;
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut center_job = Vec::new();
    let mut inc: Vec<Vec<((usize, usize), usize)>> = vec![Vec::new(); nu];
    for (j, &(r, _)) in jobs.iter().enumerate() {
        let n = t.regions[r].corners.len();
        let key = |i: usize| (pos[lc[j][i]], pl.rank[r][i]);
        if n == 2 {
            let (a, b) = (up.origin(lc[j][0]), up.origin(lc[j][1]));
            let e = edges.len();
            edges.push(Edge { ends: [a, b], job: j, corner: [0, 1] });
            inc[a].push((key(0), e));
            inc[b].push((key(1), e));
        } else {
            let c = nu + center_job.len();
            center_job.push(j);
            inc.push(Vec::new());
            for i in 0..n {
                let x = up.origin(lc[j][i]);
                let e = edges.len();
                edges.push(Edge { ends: [c, x], job: j, corner: [i, i] });
                inc[c].push(((i, 0), e));
                inc[x].push((key(i), e));
            }
        }
    }
    for l in inc.iter_mut() {
        l.sort();
    }
    let nv = inc.len();
    let crit = |v: usize| v < nu && m.crit_at(v).is_some();
    let other = |e: usize, v: usize| if edges[e].ends[0] == v { edges[e].ends[1] } else { edges[e].ends[0] };
    // breadth first spanning tree
    let mut keep = vec![false; edges.len()];
    let mut seen = vec![false; nv];
    let root = m.crit_lift(0);
    seen[root] = true;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for &(_, e) in &inc[v] {
            let w = other(e, v);
            if !seen[w] {
                seen[w] = true;
                keep[e] = true;
                q.push_back(w);
            }
        }
    }
    // prune unmarked leaves
    let mut tdeg = vec![0usize; nv];
    for (e, ed) in edges.iter().enumerate() {
        if keep[e] {
            tdeg[ed.ends[0]] += 1;
            tdeg[ed.ends[1]] += 1;
        }
    }
    let mut q: VecDeque<usize> = (0..nv).filter(|&v| tdeg[v] == 1 && !crit(v)).collect();
    while let Some(v) = q.pop_front() {
        if tdeg[v] != 1 {
            continue;
        }
        let &(_, e) = inc[v].iter().find(|&&(_, e)| keep[e]).unwrap();
        keep[e] = false;
        tdeg[v] = 0;
        let w = other(e, v);
        tdeg[w] -= 1;
        if tdeg[w] == 1 && !crit(w) {
            q.push_back(w);
        }
    }
    let vertices = (0..nv).filter(|&v| crit(v) || tdeg[v] >= 3).count();
    let tinc: Vec<Vec<usize>> = inc.iter().map(|l| l.iter().map(|&(_, e)| e).filter(|&e| keep[e]).collect()).collect();

    // one piece of cover path along an edge or through a center
    let through = |j: usize, a: usize, b: usize| -> Path {
        let (r, _) = jobs[j];
        m.lift_g(&pl.diag[r][a][b], m.corner_sheet(lc[j][a]))
    };
    let corner_of = |e: usize, v: usize| if edges[e].ends[0] == v { edges[e].corner[0] } else { edges[e].corner[1] };
    let to_k = |pieces: &[Path]| path::reduce(m.k(), &m.down(&chain(up, pieces)));

    let mut regions = Vec::new();
    // plain edges between critical points
    for (e, ed) in edges.iter().enumerate() {
        if keep[e] && crit(ed.ends[0]) && crit(ed.ends[1]) {
            let p = to_k(&[through(ed.job, 0, 1)]);
            regions.push(Region::edge(m.k(), &p));
        }
    }
    // unmarked components become regions
    let mut done = vec![false; nv];
    for c0 in 0..nv {
        if done[c0] || crit(c0) || tdeg[c0] == 0 {
            continue;
        }
        let mut comp = vec![c0];
        done[c0] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &e in &tinc[v] {
                let w = other(e, v);
                if !crit(w) && !done[w] {
                    done[w] = true;
                    comp.push(w);
                }
            }
        }
        let start = comp.iter().flat_map(|&v| tinc[v].iter().copied().filter(move |&e| crit(other(e, v)))).min().unwrap();
        let u0 = if crit(edges[start].ends[0]) { edges[start].ends[0] } else { edges[start].ends[1] };
        let mut corners = vec![m.crit_at(u0).unwrap()];
        let mut sides = Vec::new();
        let mut pieces: Vec<Path> = Vec::new();
        let (mut e, mut from) = (start, u0);
        loop {
            let v = other(e, from);
            let ed = edges[e];
            if ed.corner[0] != ed.corner[1] {
                pieces.push(through(ed.job, corner_of(e, from), corner_of(e, v)));
            }
            if crit(v) {
                sides.push(to_k(&pieces));
                pieces.clear();
                if v == u0 {
                    break;
                }
                corners.push(m.crit_at(v).unwrap());
                from = v;
                continue;
            }
            let l = &tinc[v];
            let at = l.iter().position(|&x| x == e).unwrap();
            let nx = l[(at + 1) % l.len()];
            if v >= nu {
                let j = center_job[v - nu];
                pieces.push(through(j, corner_of(e, v), corner_of(nx, v)));
            }
            e = nx;
            from = v;
        }
        if corners.len() == 2 {
            regions.push(Region::edge(m.k(), &sides[0]));
        } else {
            regions.push(Region { corners, sides });
        }
    }
    Pullback { tree: Tree { regions }, vertices }
}

/// `i(T, alpha)`.
pub fn intersection(k: &Map, t: &Tree, alpha: &Path) -> usize {
    intersections(k, t, std::slice::from_ref(alpha))[0]
}

pub fn tree_norm(k: &Map, t: &Tree, charge: &[Path]) -> usize {
    intersections(k, t, charge).into_iter().max().unwrap_or(0)
}

/// Intersection of the tree with each arc. The sides become the edges of a
/// new carrier, so every region is a face the arcs cut into pieces. A plain
/// edge is crossed once per letter. The center of a region goes in the piece
/// from which the spokes, reaching each corner through any of its sectors,
/// cross the fewest arc segments.
pub fn intersections(k: &Map, t: &Tree, alphas: &[Path]) -> Vec<usize> {
    if t.regions.is_empty() {
        return vec![0; alphas.len()];
    }
    let mut arcs: Vec<Path> = Vec::new();
    let mut keys: Vec<Path> = Vec::new();
    let mut sides: Vec<Vec<(usize, bool)>> = Vec::new();
    for r in &t.regions {
        let mut v = Vec::new();
        for s in &r.sides {
            let s = path::reduce(k, s);
            let key = path::unoriented(k, &s);
            let i = keys.iter().position(|x| *x == key).unwrap_or_else(|| {
                keys.push(key);
                arcs.push(s.clone());
                arcs.len() - 1
            });
            v.push((i, arcs[i] == s));
        }
        sides.push(v);
    }
    let ch = carrier::express(k, &arcs, alphas, &[]);
    let m = &ch.map;
    let dart = |(i, fwd): (usize, bool)| if fwd { ch.arcs[i] } else { twin(ch.arcs[i]) };
    let mut plain = vec![false; m.num_edges()];
    let mut faces = Vec::new();
    for (r, v) in t.regions.iter().zip(&sides) {
        if r.is_edge() {
            plain[edge_of(dart(v[0]))] = true;
        } else {
            // the disk lies left of its sides
            let f = m.face_of(twin(dart(v[0])));
            debug_assert_eq!(m.face(f).len(), v.len());
            faces.push(f);
        }
    }
    ch.paths
        .iter()
        .map(|p| {
            let q = path::reduce(m, p);
            let mut n = q.letters.iter().filter(|&&x| plain[edge_of(x)]).count();
            if !faces.is_empty() {
                let o = Overlay::new(m, vec![Strand::Arc(q)]);
                n += faces.iter().map(|&f| spokes(&o, f)).sum::<usize>();
            }
            n
        })
        .collect()
}

/// Fewest strand crossings of a star in carrier face `f` of the overlay.
fn spokes(o: &Overlay, f: usize) -> usize {
    let (k, m) = (&o.k, &o.m);
    // overlay faces touching each corner of f
    let sectors: Vec<Vec<usize>> = k
        .face(f)
        .iter()
        .map(|&d| {
            let c = k.prev(d);
            let stop = o.at_vertex(d);
            let mut mc = o.at_vertex(c);
            let mut out = Vec::new();
            while mc != stop {
                out.push(m.face_of(m.next(mc)));
                mc = m.next(mc);
            }
            out
        })
        .collect();
    (0..m.num_faces())
        .filter(|&g| o.k_face(g) == f)
        .map(|g| sectors.iter().map(|s| s.iter().map(|&h| o.route(g, h).len()).min().unwrap()).sum())
        .min()
        .unwrap()
}

/// Regions and corner indices along the tree path from `u` to `w`.
fn tree_path(k: &Map, t: &Tree, u: usize, w: usize) -> Vec<(usize, usize, usize)> {
    let n = k.num_vertices();
    let mut by_vertex: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (r, reg) in t.regions.iter().enumerate() {
        for (i, &v) in reg.corners.iter().enumerate() {
            by_vertex[v].push((r, i));
        }
    }
    // previous step into each vertex: (region, corner in, corner out, vertex)
    let mut from: Vec<Option<(usize, usize, usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[u] = true;
    let mut q = VecDeque::from([u]);
    while let Some(v) = q.pop_front() {
        for &(r, i) in &by_vertex[v] {
            for (j, &x) in t.regions[r].corners.iter().enumerate() {
                if !seen[x] {
                    seen[x] = true;
                    from[x] = Some((r, i, j, v));
                    q.push_back(x);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut x = w;
    while x != u {
        let (r, i, j, v) = from[x].expect("tree is connected");
        out.push((r, i, j));
        x = v;
    }
    out.reverse();
    out
}

/// Critical lifts of a chain of diagonals, pushed down and reduced.
fn chain_lifts(m: &Model, pl: &Pulled, steps: &[(usize, usize, usize)]) -> Vec<Path> {
    let mut out = Vec::new();
    'sheet: for s in 0..m.degree {
        let mut pieces: Vec<Path> = Vec::new();
        let mut sheet = s;
        for &(r, i, j) in steps {
            if let Some(p) = pieces.last() {
                if m.crit_at(m.up.origin(p.end.corner())).is_some() {
                    continue 'sheet;
                }
            }
            let l = m.lift_g(&pl.diag[r][i][j], sheet);
            sheet = m.corner_sheet(l.end.corner());
            pieces.push(l);
        }
        let p = chain(&m.up, &pieces);
        let ends = [m.up.origin(p.start.corner()), m.up.origin(p.end.corner())];
        if ends.iter().all(|&x| m.crit_at(x).is_some()) {
            out.push(path::reduce(m.k(), &m.down(&p)));
        }
    }
    out
}

/// Critical lifts of every tree path between two critical points.
pub fn critical_lifts(m: &Model, t: &Tree) -> Vec<Path> {
    let k = m.k();
    let pl = pulled(m, t);
    let n = k.num_vertices();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
    par::map(&pairs, |&(u, w)| chain_lifts(m, &pl, &tree_path(k, t, u, w))).into_iter().flatten().collect()
}

#[derive(Debug, Clone)]
pub struct ChargeResult {
    pub edges: Vec<Path>,
    pub pullbacks: usize,
    pub iterations: usize,
    /// Trees visited, starting tree first.
    pub trees: Vec<Tree>,
    /// Edge count after each collection pass.
    pub found: Vec<usize>,
}

/// Collects edges blowing up under the model from lifts of tree paths,
/// pulling the tree back until `degree - 1` edges are known.
pub fn lifting_algorithm(m: &Model, t0: &Tree, cap: usize) -> Result<ChargeResult, LiftingError> {
    let k = m.k();
    if !t0.is_spanning(k) {
        return Err(LiftingError::NotSpanning);
    }
    let mut edges: Vec<Path> = Vec::new();
    let mut keys: Vec<Path> = Vec::new();
    let mut trees = vec![t0.clone()];
    let mut found = Vec::new();
    let mut t = t0.clone();
    let mut pullbacks = 0;
    loop {
        let mut cands: Vec<Path> = Vec::new();
        for p in critical_lifts(m, &t) {
            let key = path::unoriented(k, &p);
            if !keys.contains(&key) && !cands.contains(&key) {
                cands.push(key);
            }
        }
        let degs = par::map(&cands, |p| m.blow_up_degree(p));
        for (p, d) in cands.into_iter().zip(degs) {
            if d >= 2 {
                keys.push(p.clone());
                edges.extend(std::iter::repeat_n(p, d - 1));
            }
        }
        found.push(edges.len());
        if edges.len() >= m.degree - 1 {
            break;
        }
        if pullbacks >= cap {
            return Err(LiftingError::NonTermination(pullbacks));
        }
        t = pullback(m, &t).tree;
        trees.push(t.clone());
        pullbacks += 1;
    }
    Ok(ChargeResult { edges, pullbacks, iterations: pullbacks + 1, trees, found })
}

/// Breadth first spanning tree of the carrier from vertex 0.
pub fn carrier_tree(k: &Map) -> Tree {
    let arcs: Vec<Path> = k.bfs_tree(0).into_iter().flatten().map(|d| Path::edge(k, edge_of(d))).collect();
    Tree::from_arcs(k, &arcs)
}

/// Spanning tree of carrier edges taken in a seeded random order.
pub fn random_tree(k: &Map, seed: u64) -> Tree {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..k.num_edges()).collect();
    order.shuffle(&mut crate::fixtures::rng(seed));
    let mut up: Vec<usize> = (0..k.num_vertices()).collect();
    let mut arcs = Vec::new();
    for e in order {
        let (u, v) = k.ends(e);
        let (a, b) = (find(&mut up, u), find(&mut up, v));
        if a != b {
            up[a] = b;
            arcs.push(Path::edge(k, e));
        }
    }
    Tree::from_arcs(k, &arcs)
}

/// Default pullback cap: the norm of any reasonable start is far below it.
pub const CAP: usize = 64;

/// Charge graph of the model from the carrier tree.
pub fn charge(m: &Model) -> Result<Vec<Path>, LiftingError> {
    Ok(lifting_algorithm(m, &carrier_tree(m.k()), CAP)?.edges)
}

fn find(up: &mut [usize], x: usize) -> usize {
    let mut x = x;
    while up[x] != x {
        up[x] = up[up[x]];
        x = up[x];
    }
    x
}

/// Arcs missing the graph that join its components into one. Links drawn
/// in one complementary region all leave from the same corner.
pub fn links(k: &Map, graph: &[Path]) -> Vec<Path> {
    let n = k.num_vertices();
    let mut up: Vec<usize> = (0..n).collect();
    for p in graph {
        let (a, b) = (find(&mut up, p.first_vertex(k).unwrap()), find(&mut up, p.last_vertex(k).unwrap()));
        up[a] = b;
    }
    let o = Overlay::new(k, graph.iter().map(|p| Strand::Arc(path::reduce(k, p))).collect());
    let m = &o.m;
    let mut region = vec![usize::MAX; m.num_faces()];
    let mut out = Vec::new();
    for f0 in 0..m.num_faces() {
        if region[f0] != usize::MAX {
            continue;
        }
        let mut faces = vec![f0];
        region[f0] = f0;
        let mut i = 0;
        while i < faces.len() {
            let f = faces[i];
            i += 1;
            for &y in m.face(f) {
                let g = m.face_of(twin(y));
                if !o.is_seg(y) && region[g] == usize::MAX {
                    region[g] = f0;
                    faces.push(g);
                }
            }
        }
        let corners: Vec<Dart> =
            faces.iter().flat_map(|&f| m.face(f).iter().map(|&y| twin(y))).filter(|&c| m.origin(c) < n).collect();
        let Some(&c0) = corners.first() else { continue };
        for &c in &corners[1..] {
            let (a, b) = (find(&mut up, m.origin(c0)), find(&mut up, m.origin(c)));
            if a == b {
                continue;
            }
            up[a] = b;
            let letters = inside(&o, m.corner_face(c0), m.corner_face(c));
            out.push(path::reduce(k, &o.path_to_k(&Path { start: End::Corner(c0), letters, end: End::Corner(c) })));
        }
    }
    out
}

/// Images under the map of a connected graph through the critical points:
/// the charge edges, which map to themselves, and one lift of each link
/// joining the charge components, which maps to the link.
pub fn reconstruct_homeomorphism(m: &Model, charge: &[Path]) -> Result<Action, LiftingError> {
    let k = m.k();
    if k.num_vertices() <= 2 {
        return Err(LiftingError::TooFewCritical);
    }
    let mut gens: Vec<Path> = charge.iter().map(|p| path::reduce(k, p)).collect();
    let mut images = gens.clone();
    for l in links(k, charge) {
        let lifts = m.critical_lifts(&l);
        if lifts.len() != 1 {
            return Err(LiftingError::NotCharge);
        }
        gens.push(lifts[0].clone());
        images.push(l);
    }
    Ok(Action { gens, images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{blow_up, Pair};
    use crate::action::Homeo;
    use crate::fixtures;
    use crate::isotopy::Word;

    #[test]
    fn random_trees_span() {
        let k = fixtures::square();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        for seed in 0..8 {
            let t = random_tree(&k, seed);
            assert!(t.is_spanning(&k));
            assert_eq!(lifting_algorithm(&m, &t, CAP).unwrap().edges.len(), 4);
        }
    }

    #[test]
    fn star_of_a_square() {
        let k = fixtures::square();
        let sides: Vec<Path> = (0..4).map(|e| Path::edge(&k, e)).collect();
        let t = Tree { regions: vec![Region { corners: vec![0, 1, 2, 3], sides }] };
        let inside = k.face_of(1);
        let outside = k.face_of(0);
        let diag = |f| isotopy::chord(isotopy::corner_at(&k, 0, f).unwrap(), isotopy::corner_at(&k, 2, f).unwrap());
        // the diagonal through the disk separates the spokes to 1 and 3
        assert_eq!(intersection(&k, &t, &diag(inside)), 1);
        assert_eq!(intersection(&k, &t, &diag(outside)), 0);
        assert_eq!(intersection(&k, &t, &Path::edge(&k, 2)), 0);
    }

    #[test]
    fn plain_edges_count_each_crossing() {
        let k = fixtures::square();
        let mut r = fixtures::rng(3);
        for seed in 0..16 {
            let t = random_tree(&k, seed);
            let w = Word::twist(fixtures::square_gamma2(&k), (seed % 3) as i64 + 1);
            let arcs: Vec<Path> = t.edge_arcs().iter().map(|p| path::reduce(&k, &isotopy::apply_path(&k, &w, p))).collect();
            let t = Tree::from_arcs(&k, &arcs);
            let e = rand::Rng::random_range(&mut r, 0..4);
            let a = Path::edge(&k, e);
            let direct: usize = arcs.iter().map(|p| isotopy::arc_intersection(&k, p, &a)).sum();
            assert_eq!(intersection(&k, &t, &a), direct);
        }
    }

    #[test]
    fn square_tree_of_sides() {
        let k = fixtures::square();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        let t = Tree::from_arcs(&k, &(0..3).map(|e| Path::edge(&k, e)).collect::<Vec<_>>());
        assert!(t.is_spanning(&k));
        let charge: Vec<Path> = (0..4).map(|e| Path::edge(&k, e)).collect();
        assert_eq!(tree_norm(&k, &t, &charge), 0);
        let r = lifting_algorithm(&m, &t, 8).unwrap();
        assert_eq!(r.edges.len(), 4);
        assert_eq!(r.pullbacks, 0);
        let pb = pullback(&m, &t);
        assert!(pb.tree.is_spanning(&k));
        assert!(pb.vertices <= 6);
    }

    #[test]
    fn square_discovery_order() {
        let k = fixtures::square();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        let t0 = Tree::from_arcs(&k, &fixtures::square_t0(&k));
        let charge: Vec<Path> = (0..4).map(|e| Path::edge(&k, e)).collect();
        assert_eq!(tree_norm(&k, &t0, &charge), 2);
        let r = lifting_algorithm(&m, &t0, 8).unwrap();
        assert_eq!((r.pullbacks, r.iterations), (2, 3));
        assert_eq!(r.found, vec![2, 3, 4]);
        let ends = |p: &Path| {
            let mut v = [p.first_vertex(&k).unwrap(), p.last_vertex(&k).unwrap()];
            v.sort();
            v
        };
        assert_eq!(ends(&r.edges[2]), [0, 3]);
        assert_eq!(ends(&r.edges[3]), [1, 2]);
        assert!(isotopy::are_isotopic_graphs(&k, &r.edges, &charge).unwrap());
        // norms go down along the pullbacks
        let norms: Vec<usize> = r.trees.iter().map(|t| tree_norm(&k, t, &charge)).collect();
        assert_eq!(norms, vec![2, 1, 0]);
    }

    #[test]
    fn homeomorphism_of_untwisted_models() {
        let k = fixtures::square();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        let t0 = Tree::from_arcs(&k, &fixtures::square_t0(&k));
        let r = lifting_algorithm(&m, &t0, 8).unwrap();
        let a = reconstruct_homeomorphism(&m, &r.edges).unwrap();
        assert!(Homeo::Action(a).is_trivial(&k).unwrap());
        let (k, g) = fixtures::disjoint_edges();
        let p = Pair::identity(k.clone(), g);
        let m = blow_up(&p).unwrap();
        let a = reconstruct_homeomorphism(&m, &p.edge_paths()).unwrap();
        assert_eq!(a.gens.len(), 3);
        assert!(Homeo::Action(a).is_trivial(&k).unwrap());
    }

    #[test]
    fn homeomorphism_with_a_disjoint_twist() {
        let (k, g) = fixtures::square_plus_edge();
        let keep: Vec<bool> = (0..k.num_edges()).map(|e| e < 4).collect();
        let c = path::subgraph_boundaries(&k, &keep, 0)
            .into_iter()
            .find(|c| path::curve_kind(&k, c) == path::CurveKind::Essential)
            .unwrap();
        let w = Word::twist(c, 1);
        let p = Pair::new(k.clone(), g, w.clone());
        let m = blow_up(&p).unwrap();
        let a = Homeo::Action(reconstruct_homeomorphism(&m, &p.edge_paths()).unwrap());
        assert!(!a.is_trivial(&k).unwrap());
        assert!(a.agrees(&k, &Homeo::Word(w)).unwrap());
    }

    #[test]
    fn single_edge_charge() {
        let k = fixtures::single_edge();
        let m = blow_up(&Pair::full(k.clone())).unwrap();
        let t = Tree::from_arcs(&k, &[Path::edge(&k, 0)]);
        let r = lifting_algorithm(&m, &t, 4).unwrap();
        assert_eq!(r.edges.len(), 1);
        assert_eq!(r.iterations, 1);
    }
}
