//! Arcs and closed curves as crossing sequences against a carrier map.
//!
//! The carrier is a map whose vertices are exactly the marked points and
//! whose faces are disks. A path is the list of darts it crosses; crossing the
//! letter `x` moves from the face right of `x` to the face right of `twin(x)`.
//! Reduced sequences are in minimal position with the carrier edges, so they
//! name isotopy classes rel the vertices.

use crate::sphere::{twin, Dart, Map};

/// Where a path starts or stops. `Corner(c)` sits on the vertex `origin(c)`
/// and leaves into corner `c`. `Point(c)` is an unmarked point inside the face
/// of corner `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Corner(Dart),
    Point(Dart),
}

impl End {
    pub fn corner(self) -> Dart {
        match self {
            End::Corner(c) | End::Point(c) => c,
        }
    }
    pub fn is_point(self) -> bool {
        matches!(self, End::Point(_))
    }
    pub fn face(self, k: &Map) -> usize {
        k.corner_face(self.corner())
    }
}

/// Canonical anchor corner for an unmarked point in face `f`.
pub fn point_in(k: &Map, f: usize) -> End {
    End::Point(twin(k.face(f)[0]))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub start: End,
    pub letters: Vec<Dart>,
    pub end: End,
}

impl Path {
    /// The carrier edge `e` itself, drawn as a chord beside dart `2e`.
    pub fn edge(k: &Map, e: usize) -> Path {
        let x = 2 * e;
        Path { start: End::Corner(k.prev(x)), letters: vec![], end: End::Corner(twin(x)) }
    }

    pub fn reversed(&self) -> Path {
        Path {
            start: self.end,
            letters: self.letters.iter().rev().map(|&x| twin(x)).collect(),
            end: self.start,
        }
    }

    pub fn first_vertex(&self, k: &Map) -> Option<usize> {
        match self.start {
            End::Corner(c) => Some(k.origin(c)),
            End::Point(_) => None,
        }
    }
    pub fn last_vertex(&self, k: &Map) -> Option<usize> {
        match self.end {
            End::Corner(c) => Some(k.origin(c)),
            End::Point(_) => None,
        }
    }

    /// Faces visited, one more than the number of letters.
    pub fn faces(&self, k: &Map) -> Vec<usize> {
        let mut f = vec![self.start.face(k)];
        for &x in &self.letters {
            f.push(k.face_of(twin(x)));
        }
        f
    }

    pub fn is_consistent(&self, k: &Map) -> bool {
        let mut f = self.start.face(k);
        for &x in &self.letters {
            if x >= k.num_darts() || k.face_of(x) != f {
                return false;
            }
            f = k.face_of(twin(x));
        }
        f == self.end.face(k)
    }

    /// Joins `self` and `other` through an intermediate end that both share
    /// as a point in the same face.
    pub fn concat(&self, other: &Path) -> Path {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Path { start: self.start, letters, end: other.end }
    }

    /// Number of crossings with carrier edge `e`.
    pub fn crossings_with(&self, e: usize) -> usize {
        self.letters.iter().filter(|&&x| x >> 1 == e).count()
    }
}

pub(crate) fn free_reduce(letters: &[Dart]) -> Vec<Dart> {
    let mut out: Vec<Dart> = Vec::with_capacity(letters.len());
    for &x in letters {
        if out.last() == Some(&twin(x)) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Removes half bigons at the start. Returns true if something changed.
fn reduce_start(k: &Map, p: &mut Path) -> bool {
    let mut changed = false;
    while let (End::Corner(c), Some(&x)) = (p.start, p.letters.first()) {
        if x == twin(c) {
            p.start = End::Corner(k.prev(c));
        } else if x == k.next(c) {
            p.start = End::Corner(k.next(c));
        } else {
            break;
        }
        p.letters.remove(0);
        changed = true;
    }
    changed
}

/// All zero-letter chords reachable by sliding across a parallel edge.
fn chord_orbit(k: &Map, a: Dart, b: Dart) -> Vec<(Dart, Dart)> {
    let mut seen = vec![(a, b)];
    let mut i = 0;
    while i < seen.len() {
        let (c1, c2) = seen[i];
        i += 1;
        let f = k.corner_face(c1);
        for &x in k.face(f) {
            let pair = (k.prev(x), twin(x));
            let other = (x, k.prev(twin(x)));
            let cand = if (c1, c2) == pair {
                Some(other)
            } else if (c2, c1) == pair {
                Some((other.1, other.0))
            } else {
                None
            };
            if let Some(c) = cand {
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
        }
    }
    seen
}

/// Minimal position representative with a deterministic choice among the
/// isotopic chords.
pub fn reduce(k: &Map, p: &Path) -> Path {
    let mut q = Path { start: p.start, letters: free_reduce(&p.letters), end: p.end };
    loop {
        let a = reduce_start(k, &mut q);
        let mut r = q.reversed();
        let b = reduce_start(k, &mut r);
        q = r.reversed();
        if !a && !b {
            break;
        }
    }
    if let End::Point(c) = q.start {
        q.start = point_in(k, k.corner_face(c));
    }
    if let End::Point(c) = q.end {
        q.end = point_in(k, k.corner_face(c));
    }
    if q.letters.is_empty() {
        if let (End::Corner(a), End::Corner(b)) = (q.start, q.end) {
            let best = chord_orbit(k, a, b).into_iter().min().unwrap();
            q.start = End::Corner(best.0);
            q.end = End::Corner(best.1);
        }
    }
    q
}

/// Key that ignores orientation.
pub fn unoriented(k: &Map, p: &Path) -> Path {
    let a = reduce(k, p);
    let b = reduce(k, &a.reversed());
    a.min(b)
}

/// If the reduced arc is a chord parallel to a carrier edge, that edge.
pub fn parallel_edge(k: &Map, p: &Path) -> Option<usize> {
    let q = reduce(k, p);
    if !q.letters.is_empty() {
        return None;
    }
    let (End::Corner(a), End::Corner(b)) = (q.start, q.end) else { return None };
    let orbit = chord_orbit(k, a, b);
    (0..k.num_edges()).find(|&e| {
        let x = 2 * e;
        orbit.iter().any(|&(c1, c2)| {
            (c1, c2) == (k.prev(x), twin(x)) || (c2, c1) == (k.prev(x), twin(x))
        })
    })
}

/// Closed curve as a cyclic crossing word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Curve {
    pub letters: Vec<Dart>,
}

impl Curve {
    pub fn reversed(&self) -> Curve {
        Curve { letters: self.letters.iter().rev().map(|&x| twin(x)).collect() }
    }
    pub fn is_consistent(&self, k: &Map) -> bool {
        let n = self.letters.len();
        (0..n).all(|i| k.face_of(twin(self.letters[i])) == k.face_of(self.letters[(i + 1) % n]))
    }
    pub fn crossings_with(&self, e: usize) -> usize {
        self.letters.iter().filter(|&&x| x >> 1 == e).count()
    }
}

pub fn cyclic_reduce(letters: &[Dart]) -> Vec<Dart> {
    let mut w = free_reduce(letters);
    while w.len() >= 2 && w[0] == twin(*w.last().unwrap()) {
        w.pop();
        w.remove(0);
    }
    w
}

fn min_rotation(w: &[Dart]) -> Vec<Dart> {
    let n = w.len();
    (0..n)
        .map(|i| w[i..].iter().chain(&w[..i]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Reduced form with the least rotation, orientation kept.
pub fn reduce_curve(c: &Curve) -> Curve {
    Curve { letters: min_rotation(&cyclic_reduce(&c.letters)) }
}

/// Orientation free key.
pub fn curve_key(c: &Curve) -> Curve {
    let a = reduce_curve(c);
    let b = reduce_curve(&c.reversed());
    a.min(b)
}

/// Which vertices lie left of a simple reduced curve. `None` when every vertex
/// is on one side, which happens exactly for curves bounding a disk free of
/// vertices.
pub fn curve_sides(k: &Map, c: &Curve) -> Option<Vec<bool>> {
    let mut signed = vec![0i64; k.num_darts()];
    for &x in &c.letters {
        signed[x] += 1;
        signed[twin(x)] -= 1;
    }
    let tree = k.bfs_tree(0);
    let nv = k.num_vertices();
    let mut s = vec![None; nv];
    s[0] = Some(0i64);
    // tree is breadth first, so resolve by repeated sweeps
    let mut left = nv - 1;
    while left > 0 {
        for v in 0..nv {
            if s[v].is_some() {
                continue;
            }
            let d = tree[v].unwrap();
            if let Some(base) = s[k.origin(d)] {
                s[v] = Some(base + signed[d]);
                left -= 1;
            }
        }
    }
    let s: Vec<i64> = s.into_iter().map(|x| x.unwrap()).collect();
    let root_left = if s.iter().any(|&x| x > 0) {
        true
    } else if s.iter().any(|&x| x < 0) {
        false
    } else {
        return None;
    };
    Some(s.iter().map(|&x| if root_left { x == 0 } else { x != 0 }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveKind {
    Null,
    Peripheral,
    Essential,
}

pub fn curve_kind(k: &Map, c: &Curve) -> CurveKind {
    let c = reduce_curve(c);
    if c.letters.is_empty() {
        return CurveKind::Null;
    }
    match curve_sides(k, &c) {
        None => CurveKind::Null,
        Some(s) => {
            let l = s.iter().filter(|&&b| b).count();
            let r = s.len() - l;
            if l.min(r) >= 2 {
                CurveKind::Essential
            } else if l.min(r) == 1 {
                CurveKind::Peripheral
            } else {
                CurveKind::Null
            }
        }
    }
}

/// Peripheral curve around vertex `v`, oriented with `v` on its left.
pub fn around_vertex(k: &Map, v: usize) -> Curve {
    // counterclockwise around v crosses each dart from right to left
    Curve { letters: k.rotation(v).to_vec() }
}

/// Boundary curves of the connected subgraph `keep` that contains vertex
/// `root`, one per face of the subgraph, each pushed into its face. A
/// subgraph without edges gives the curve around `root`.
pub fn subgraph_boundaries(k: &Map, keep: &[bool], root: usize) -> Vec<Curve> {
    let comp = k.components(keep);
    let inside = |d: Dart| keep[d >> 1] && comp[k.origin(d)] == comp[root];
    let darts: Vec<Dart> = (0..k.num_darts()).filter(|&d| inside(d)).collect();
    if darts.is_empty() {
        return vec![around_vertex(k, root)];
    }
    let mut seen = vec![false; k.num_darts()];
    let mut out = Vec::new();
    for &s in &darts {
        if seen[s] {
            continue;
        }
        let mut letters = Vec::new();
        let mut h = s;
        loop {
            seen[h] = true;
            // rotate counterclockwise from the arrival to the next kept dart,
            // crossing everything in between
            let mut d = k.next(twin(h));
            while !inside(d) {
                letters.push(d);
                d = k.next(d);
            }
            h = d;
            if h == s {
                break;
            }
        }
        out.push(Curve { letters });
    }
    out
}
