//! The carrier with a family of disjoint strands drawn on top of it.
//!
//! Strands are reduced arcs between vertices or closed curves. Every crossing
//! of a strand with a carrier edge becomes an unmarked vertex of degree four.
//! Parallel strands are ordered along each edge by following them until they
//! split up; when two strands never split, the one with the smaller index runs
//! on the right of the other, seen in its own direction.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::path::{Curve, End, Path};
use crate::sphere::{edge_of, twin, Dart, Map};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strand {
    Arc(Path),
    Curve(Curve),
}

impl Strand {
    fn letters(&self) -> &[Dart] {
        match self {
            Strand::Arc(p) => &p.letters,
            Strand::Curve(c) => &c.letters,
        }
    }
    fn cyclic(&self) -> bool {
        matches!(self, Strand::Curve(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Piece `j` of the carrier dart, pointing the same way as that dart.
    Piece(Dart, usize),
    /// Segment `j` of a strand, forward when the flag is set.
    Seg(usize, usize, bool),
}

#[derive(Debug, Clone)]
pub struct Overlay {
    pub k: Map,
    pub m: Map,
    pub strands: Vec<Strand>,
    /// Per carrier edge, the crossings in order from the origin of `2e`.
    pub order: Vec<Vec<(usize, usize)>>,
    /// Per strand, the overlay vertex of each crossing.
    pub pvert: Vec<Vec<usize>>,
    /// Per strand, the forward dart of each segment.
    pub segs: Vec<Vec<Dart>>,
    /// Per carrier edge, the forward dart of each piece.
    pub pieces: Vec<Vec<Dart>>,
    pub kind: Vec<Kind>,
}

#[derive(Clone, Copy)]
struct View {
    s: usize,
    pos: isize,
    fwd: bool,
}

fn letter_at(strands: &[Strand], v: View, off: isize) -> Result<Dart, Dart> {
    let st = &strands[v.s];
    let l = st.letters();
    let n = l.len() as isize;
    let i = if v.fwd { v.pos + off } else { v.pos - off };
    if st.cyclic() {
        let i = i.rem_euclid(n) as usize;
        return Ok(if v.fwd { l[i] } else { twin(l[i]) });
    }
    if i < 0 || i >= n {
        let Strand::Arc(p) = st else { unreachable!() };
        let end = if i < 0 { p.start } else { p.end };
        return Err(end.corner());
    }
    let x = l[i as usize];
    Ok(if v.fwd { x } else { twin(x) })
}

fn rel(k: &Map, f: usize, p: usize, r: usize) -> usize {
    let len = 2 * k.face_len(f);
    (p + len - r) % len
}

/// Follows two strands from a common reference in face `f` at boundary
/// position `r`. `Less` means `a` exits earlier on the boundary walk.
fn walk(k: &Map, strands: &[Strand], a: View, b: View, start: isize, mut f: usize, mut r: usize) -> Option<Ordering> {
    let limit = strands[a.s].letters().len().max(strands[b.s].letters().len()) as isize + 2;
    let mut j = start;
    loop {
        if j > limit {
            return None;
        }
        let x = letter_at(strands, a, j);
        let y = letter_at(strands, b, j);
        match (x, y) {
            (Ok(x), Ok(y)) if x == y => {
                f = k.face_of(twin(x));
                r = k.side_pos(twin(x));
                j += 1;
                continue;
            }
            (Err(c), Err(d)) if c == d => return None,
            _ => {}
        }
        let pa = match x {
            Ok(x) => k.side_pos(x),
            Err(c) => k.corner_pos(c),
        };
        let pb = match y {
            Ok(y) => k.side_pos(y),
            Err(c) => k.corner_pos(c),
        };
        return Some(rel(k, f, pa, r).cmp(&rel(k, f, pb, r)));
    }
}

/// Orders two crossings with carrier edge `e`. `Less` means closer to the
/// origin of dart `2e`.
fn cmp_crossing(k: &Map, strands: &[Strand], e: usize, o1: (usize, usize), o2: (usize, usize)) -> Ordering {
    if o1 == o2 {
        return Ordering::Equal;
    }
    let view = |o: (usize, usize), want: Dart| {
        let x = strands[o.0].letters()[o.1];
        View { s: o.0, pos: o.1 as isize, fwd: x == want }
    };
    let x = 2 * e;
    let f = k.face_of(twin(x));
    if let Some(r) = walk(k, strands, view(o1, x), view(o2, x), 1, f, k.side_pos(twin(x))) {
        return r;
    }
    let y = twin(x);
    let g = k.face_of(x);
    if let Some(r) = walk(k, strands, view(o1, y), view(o2, y), 1, g, k.side_pos(x)) {
        return r.reverse();
    }
    if o1.0 == o2.0 {
        return o1.1.cmp(&o2.1);
    }
    let (lo, sign) = if o1.0 < o2.0 { (o1, Ordering::Greater) } else { (o2, Ordering::Less) };
    // the smaller strand runs on its own right
    if strands[lo.0].letters()[lo.1] == x {
        sign
    } else {
        sign.reverse()
    }
}

/// Orders strand ends inside corner `c`. `Less` means closer to `next(c)`.
fn cmp_end(k: &Map, strands: &[Strand], c: Dart, a: (usize, bool), b: (usize, bool)) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let view = |(s, at_start): (usize, bool)| {
        let n = strands[s].letters().len() as isize;
        if at_start {
            View { s, pos: -1, fwd: true }
        } else {
            View { s, pos: n, fwd: false }
        }
    };
    let f = k.corner_face(c);
    if let Some(r) = walk(k, strands, view(a), view(b), 1, f, k.corner_pos(c)) {
        return r;
    }
    if a.0 == b.0 {
        return a.1.cmp(&b.1);
    }
    let (lo, sign) = if a.0 < b.0 { (a, Ordering::Greater) } else { (b, Ordering::Less) };
    // leaving the vertex its right side is toward c
    if lo.1 {
        sign
    } else {
        sign.reverse()
    }
}

impl Overlay {
    pub fn new(k: &Map, strands: Vec<Strand>) -> Overlay {
        let ne = k.num_edges();
        let nv = k.num_vertices();
        let mut order: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ne];
        for (s, st) in strands.iter().enumerate() {
            for (i, &x) in st.letters().iter().enumerate() {
                order[edge_of(x)].push((s, i));
            }
        }
        for (e, o) in order.iter_mut().enumerate() {
            o.sort_by(|&a, &b| cmp_crossing(k, &strands, e, a, b));
        }
        // crossing vertices
        let mut pvert: Vec<Vec<usize>> = strands.iter().map(|s| vec![0; s.letters().len()]).collect();
        let mut slot: Vec<Vec<usize>> = strands.iter().map(|s| vec![0; s.letters().len()]).collect();
        let mut nvert = nv;
        for o in &order {
            for (j, &(s, i)) in o.iter().enumerate() {
                pvert[s][i] = nvert;
                slot[s][i] = j + 1;
                nvert += 1;
            }
        }
        // edges: pieces then segments
        let mut kind = Vec::new();
        let mut pieces = Vec::with_capacity(ne);
        for e in 0..ne {
            let mut ps = Vec::new();
            for j in 0..=order[e].len() {
                ps.push(kind.len());
                kind.push(Kind::Piece(2 * e, j));
                kind.push(Kind::Piece(2 * e + 1, j));
            }
            pieces.push(ps);
        }
        let mut segs = Vec::with_capacity(strands.len());
        for (s, st) in strands.iter().enumerate() {
            let n = st.letters().len();
            let count = if st.cyclic() { n } else { n + 1 };
            let mut ss = Vec::new();
            for j in 0..count {
                ss.push(kind.len());
                kind.push(Kind::Seg(s, j, true));
                kind.push(Kind::Seg(s, j, false));
            }
            segs.push(ss);
        }
        let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); nvert];
        // strand ends per corner
        let mut ends: Vec<Vec<(usize, bool)>> = vec![Vec::new(); k.num_darts()];
        for (s, st) in strands.iter().enumerate() {
            if let Strand::Arc(p) = st {
                ends[p.start.corner()].push((s, true));
                ends[p.end.corner()].push((s, false));
            }
        }
        for (c, list) in ends.iter_mut().enumerate() {
            list.sort_by(|&a, &b| cmp_end(k, &strands, c, a, b).reverse());
        }
        for (v, r) in rot.iter_mut().enumerate().take(nv) {
            for &c in k.rotation(v) {
                let e = edge_of(c);
                r.push(if c % 2 == 0 { pieces[e][0] } else { pieces[e][order[e].len()] + 1 });
                for &(s, at_start) in &ends[c] {
                    let ss = &segs[s];
                    r.push(if at_start { ss[0] } else { ss[ss.len() - 1] + 1 });
                }
            }
        }
        for (s, st) in strands.iter().enumerate() {
            let n = st.letters().len();
            for i in 0..n {
                let x = st.letters()[i];
                let e = edge_of(x);
                let j = slot[s][i];
                let north = pieces[e][j];
                let south = pieces[e][j - 1] + 1;
                let (inn, out) = if st.cyclic() {
                    (segs[s][(i + n - 1) % n] + 1, segs[s][i])
                } else {
                    (segs[s][i] + 1, segs[s][i + 1])
                };
                rot[pvert[s][i]] = if x % 2 == 0 { vec![north, out, south, inn] } else { vec![north, inn, south, out] };
            }
        }
        let mut marked = vec![false; nvert];
        for (v, mk) in marked.iter_mut().enumerate().take(nv) {
            *mk = k.is_marked(v);
        }
        let m = Map::from_rotations(rot, marked).expect("overlay is a sphere");
        Overlay { k: k.clone(), m, strands, order, pvert, segs, pieces, kind }
    }

    pub fn kind(&self, d: Dart) -> Kind {
        let k = self.kind[d & !1];
        if d % 2 == 0 {
            k
        } else {
            match k {
                Kind::Piece(x, j) => Kind::Piece(twin(x), j),
                Kind::Seg(s, j, f) => Kind::Seg(s, j, !f),
            }
        }
    }

    pub fn is_seg(&self, d: Dart) -> bool {
        matches!(self.kind[d & !1], Kind::Seg(..))
    }

    /// Overlay dart standing for carrier dart `c` at its origin.
    pub fn at_vertex(&self, c: Dart) -> Dart {
        let e = edge_of(c);
        if c % 2 == 0 {
            self.pieces[e][0]
        } else {
            self.pieces[e][self.order[e].len()] + 1
        }
    }

    /// Overlay dart crossing the first piece of the edge of `x`, same way.
    pub fn crossing_dart(&self, x: Dart) -> Dart {
        self.pieces[edge_of(x)][0] + (x & 1)
    }

    /// Carrier face containing overlay face `g`.
    pub fn k_face(&self, g: usize) -> usize {
        for &d in self.m.face(g) {
            if let Kind::Piece(x, _) = self.kind(d) {
                return self.k.face_of(x);
            }
        }
        unreachable!("every overlay face touches the carrier")
    }

    /// Carrier corner containing the overlay corner `mc` at a carrier vertex.
    pub fn k_corner(&self, mc: Dart) -> Dart {
        let mut d = mc;
        loop {
            if let Kind::Piece(x, _) = self.kind(d) {
                return x;
            }
            d = self.m.prev(d);
        }
    }

    /// Unique route between overlay faces inside one carrier face, crossing
    /// strand segments only.
    pub fn route(&self, a: usize, b: usize) -> Vec<Dart> {
        if a == b {
            return Vec::new();
        }
        let mut from: Vec<Option<Dart>> = vec![None; self.m.num_faces()];
        let mut seen = vec![false; self.m.num_faces()];
        seen[a] = true;
        let mut q = VecDeque::from([a]);
        while let Some(f) = q.pop_front() {
            if f == b {
                break;
            }
            for &y in self.m.face(f) {
                if !self.is_seg(y) {
                    continue;
                }
                let g = self.m.face_of(twin(y));
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
            let y = from[f].expect("faces of one carrier face are connected");
            out.push(y);
            f = self.m.face_of(y);
        }
        out.reverse();
        out
    }

    fn end_to_m(&self, e: End) -> End {
        match e {
            End::Corner(c) => End::Corner(self.at_vertex(c)),
            End::Point(c) => End::Point(self.at_vertex(c)),
        }
    }

    pub fn path_to_m(&self, p: &Path) -> Path {
        let start = self.end_to_m(p.start);
        let end = self.end_to_m(p.end);
        let mut cur = self.m.corner_face(start.corner());
        let mut letters = Vec::new();
        for &x in &p.letters {
            let y = self.crossing_dart(x);
            letters.extend(self.route(cur, self.m.face_of(y)));
            letters.push(y);
            cur = self.m.face_of(twin(y));
        }
        letters.extend(self.route(cur, self.m.corner_face(end.corner())));
        Path { start, letters, end }
    }

    pub fn curve_to_m(&self, c: &Curve) -> Curve {
        let ys: Vec<Dart> = c.letters.iter().map(|&x| self.crossing_dart(x)).collect();
        let mut letters = Vec::new();
        for i in 0..ys.len() {
            letters.push(ys[i]);
            let nxt = ys[(i + 1) % ys.len()];
            letters.extend(self.route(self.m.face_of(twin(ys[i])), self.m.face_of(nxt)));
        }
        Curve { letters }
    }

    fn drop_segs(&self, ys: &[Dart]) -> Vec<Dart> {
        ys.iter()
            .filter_map(|&y| match self.kind(y) {
                Kind::Piece(x, _) => Some(x),
                Kind::Seg(..) => None,
            })
            .collect()
    }

    fn end_to_k(&self, e: End) -> End {
        match e {
            End::Corner(c) => End::Corner(self.k_corner(c)),
            End::Point(c) => crate::path::point_in(&self.k, self.k_face(self.m.corner_face(c))),
        }
    }

    /// Forgets the strands. Ends must sit on carrier vertices or be points.
    pub fn path_to_k(&self, p: &Path) -> Path {
        Path { start: self.end_to_k(p.start), letters: self.drop_segs(&p.letters), end: self.end_to_k(p.end) }
    }

    pub fn curve_to_k(&self, c: &Curve) -> Curve {
        Curve { letters: self.drop_segs(&c.letters) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{curve_kind, reduce, reduce_curve, CurveKind};

    fn square() -> Map {
        Map::from_rotations(vec![vec![0, 7], vec![2, 1], vec![4, 3], vec![6, 5]], vec![true; 4]).unwrap()
    }

    #[test]
    fn curve_overlay_counts() {
        let k = square();
        let g = Curve { letters: vec![0, 5] };
        let o = Overlay::new(&k, vec![Strand::Curve(g.clone()), Strand::Curve(g.clone())]);
        assert_eq!(o.m.num_vertices(), 8);
        assert_eq!(o.m.num_edges(), 4 + 4 + 4);
        assert_eq!(o.m.euler(), 2);
        // round trip of the curve through the overlay
        let back = o.curve_to_k(&o.curve_to_m(&g));
        assert_eq!(reduce_curve(&back), reduce_curve(&g));
        assert_eq!(curve_kind(&o.m, &o.curve_to_m(&g)), CurveKind::Essential);
    }

    #[test]
    fn arc_overlay_round_trip() {
        let k = square();
        // diagonal A to C through face of dart 0, and B to D through the other face
        let f = k.face_of(0);
        let c = |v: usize, f: usize| k.face(f).iter().map(|&x| twin(x)).find(|&c| k.origin(c) == v).unwrap();
        let ac = Path { start: End::Corner(c(0, f)), letters: vec![], end: End::Corner(c(2, f)) };
        let g = k.face_of(1);
        let bd = Path { start: End::Corner(c(1, g)), letters: vec![], end: End::Corner(c(3, g)) };
        let o = Overlay::new(&k, vec![Strand::Arc(ac.clone()), Strand::Arc(bd.clone())]);
        assert_eq!(o.m.num_edges(), 6);
        assert_eq!(o.m.num_faces(), 4);
        let p = o.path_to_m(&ac);
        assert!(p.is_consistent(&o.m));
        assert_eq!(reduce(&k, &o.path_to_k(&p)), reduce(&k, &ac));
    }
}
