//! Changing the carrier so that a family of disjoint arcs become edges.
//!
//! The arcs are drawn over the carrier, then every carrier piece touching a
//! crossing vertex is either deleted, when that keeps the map connected, or
//! slid one step along its arc. At the end each crossing vertex has degree
//! two and is smoothed away. Paths and curves ride along through every move.

use crate::overlay::{Overlay, Strand};
use crate::path::{Curve, End, Path};
use crate::sphere::{edge_of, twin, Dart, Map, Refinement};

#[derive(Debug, Clone)]
pub struct Changed {
    pub map: Map,
    /// Edge of the new carrier carrying each arc, oriented like the arc.
    pub arcs: Vec<Dart>,
    pub paths: Vec<Path>,
    pub curves: Vec<Curve>,
}

struct Work {
    m: Map,
    chains: Vec<Vec<Dart>>,
    paths: Vec<Path>,
    curves: Vec<Curve>,
}

fn passes(m: &Map, start: End, letters: &[Dart], end: End) -> Vec<(usize, usize, usize)> {
    // (face, entry position, exit position) for each piece of the path
    let mut out = Vec::with_capacity(letters.len() + 1);
    let mut f = m.corner_face(start.corner());
    let mut entry = m.corner_pos(start.corner());
    for &x in letters {
        out.push((f, entry, m.side_pos(x)));
        f = m.face_of(twin(x));
        entry = m.side_pos(twin(x));
    }
    out.push((f, entry, m.corner_pos(end.corner())));
    out
}

impl Work {
    fn is_strand(&self) -> Vec<bool> {
        let mut s = vec![false; self.m.num_edges()];
        for c in &self.chains {
            for &d in c {
                s[edge_of(d)] = true;
            }
        }
        s
    }

    fn delete(&mut self, e: usize) {
        let old = &self.m;
        let r = old.refine(Refinement::Delete(e)).expect("deletion keeps the map connected");
        let dm = |d: Dart| r.darts[d].unwrap();
        let fix = |c: Dart| {
            let mut c = c;
            while edge_of(c) == e {
                c = old.prev(c);
            }
            dm(c)
        };
        let end = |x: End| match x {
            End::Corner(c) => End::Corner(fix(c)),
            End::Point(c) => End::Point(fix(c)),
        };
        let keep = |l: &[Dart]| l.iter().filter(|&&x| edge_of(x) != e).map(|&x| dm(x)).collect::<Vec<_>>();
        for p in &mut self.paths {
            *p = Path { start: end(p.start), letters: keep(&p.letters), end: end(p.end) };
        }
        for c in &mut self.curves {
            c.letters = keep(&c.letters);
        }
        for ch in &mut self.chains {
            for d in ch.iter_mut() {
                *d = dm(*d);
            }
        }
        self.m = r.map;
    }

    fn diagonal(&mut self, a: Dart, b: Dart) {
        let old = &self.m;
        let f = old.corner_face(a);
        let l2 = 2 * old.face_len(f);
        let (pa, pb) = (old.corner_pos(a), old.corner_pos(b));
        let span = (pb + l2 - pa) % l2;
        let part1 = |p: usize| {
            let t = (p + l2 - pa) % l2;
            t >= 1 && t <= span
        };
        let nd = old.num_darts();
        let (dl, dr) = (nd, nd + 1);
        let fix = |ps: Vec<(usize, usize, usize)>, letters: &[Dart]| {
            let mut out = Vec::with_capacity(letters.len());
            for (i, &(g, en, ex)) in ps.iter().enumerate() {
                if g == f && part1(en) != part1(ex) {
                    out.push(if part1(en) { dr } else { dl });
                }
                if i < letters.len() {
                    out.push(letters[i]);
                }
            }
            out
        };
        for p in &mut self.paths {
            let ps = passes(old, p.start, &p.letters, p.end);
            p.letters = fix(ps, &p.letters);
        }
        for c in &mut self.curves {
            if c.letters.is_empty() {
                continue;
            }
            let n = c.letters.len();
            let mut out = Vec::new();
            for i in 0..n {
                out.push(c.letters[i]);
                let x = c.letters[i];
                let y = c.letters[(i + 1) % n];
                let g = old.face_of(twin(x));
                let (en, ex) = (old.side_pos(twin(x)), old.side_pos(y));
                if g == f && part1(en) != part1(ex) {
                    out.push(if part1(en) { dr } else { dl });
                }
            }
            c.letters = out;
        }
        let r = old.refine(Refinement::Diagonal(a, b)).expect("corners share a face");
        self.m = r.map;
    }

    /// The forward strand dart at each unmarked vertex.
    fn forward_at(&self) -> Vec<Option<Dart>> {
        let mut f = vec![None; self.m.num_vertices()];
        for ch in &self.chains {
            for &d in &ch[1..] {
                f[self.m.origin(d)] = Some(d);
            }
        }
        f
    }

    fn is_bridge(&self, e: usize) -> bool {
        let mut keep = vec![true; self.m.num_edges()];
        keep[e] = false;
        let comp = self.m.components(&keep);
        let (u, w) = self.m.ends(e);
        comp[u] != comp[w]
    }

    fn step(&mut self) -> bool {
        let strand = self.is_strand();
        let fwd = self.forward_at();
        let m = &self.m;
        let mut pick = None;
        for v in 0..m.num_vertices() {
            let Some(f) = fwd[v] else { continue };
            if !strand[edge_of(m.next(f))] {
                pick = Some((f, m.next(f), true));
                break;
            }
            if !strand[edge_of(m.prev(f))] {
                pick = Some((f, m.prev(f), false));
                break;
            }
        }
        let Some((sigma, ep, after)) = pick else { return false };
        let e = edge_of(ep);
        if !self.is_bridge(e) {
            self.delete(e);
            return true;
        }
        let (a, b) = if after {
            (m.prev(twin(sigma)), twin(ep))
        } else {
            (m.prev(twin(ep)), twin(sigma))
        };
        self.diagonal(a, b);
        self.delete(e);
        true
    }

    fn finish(self) -> Changed {
        let m = &self.m;
        let strand = self.is_strand();
        let mut new_of = vec![usize::MAX; m.num_darts()];
        let mut k = 0;
        for e in 0..m.num_edges() {
            if !strand[e] {
                new_of[2 * e] = 2 * k;
                new_of[2 * e + 1] = 2 * k + 1;
                k += 1;
            }
        }
        let mut arcs = Vec::new();
        for ch in &self.chains {
            for &d in ch {
                new_of[d] = 2 * k;
                new_of[twin(d)] = 2 * k + 1;
            }
            arcs.push(2 * k);
            k += 1;
        }
        let mut vmap = vec![usize::MAX; m.num_vertices()];
        let mut rot = Vec::new();
        for v in 0..m.num_vertices() {
            if m.is_marked(v) {
                vmap[v] = rot.len();
                rot.push(m.rotation(v).iter().map(|&d| new_of[d]).collect::<Vec<_>>());
            }
        }
        let map = Map::from_rotations(rot, vec![true; vmap.iter().filter(|&&x| x != usize::MAX).count()])
            .expect("carrier change keeps a sphere");
        let fwd = self.forward_at();
        let corner = |c: Dart| -> Dart {
            let v = m.origin(c);
            if m.is_marked(v) {
                return new_of[c];
            }
            let f = fwd[v].unwrap();
            if c == f {
                new_of[f]
            } else {
                // right of the strand: the corner at its far end
                twin(new_of[f])
            }
        };
        let end = |x: End| match x {
            End::Corner(c) => End::Corner(new_of[c]),
            End::Point(c) => End::Point(corner(c)),
        };
        let paths = self
            .paths
            .iter()
            .map(|p| Path { start: end(p.start), letters: p.letters.iter().map(|&x| new_of[x]).collect(), end: end(p.end) })
            .collect();
        let curves = self.curves.iter().map(|c| Curve { letters: c.letters.iter().map(|&x| new_of[x]).collect() }).collect();
        Changed { map, arcs, paths, curves }
    }
}

/// New carrier containing the given pairwise disjoint reduced arcs as edges.
/// Paths and curves of the old carrier are carried over unreduced.
pub fn change(k: &Map, arcs: &[Path], paths: &[Path], curves: &[Curve]) -> Changed {
    let o = Overlay::new(k, arcs.iter().cloned().map(Strand::Arc).collect());
    let chains = o.segs.clone();
    let paths = paths.iter().map(|p| o.path_to_m(p)).collect();
    let curves = curves
        .iter()
        .map(|c| if c.letters.is_empty() { c.clone() } else { o.curve_to_m(c) })
        .collect();
    let mut w = Work { m: o.m, chains, paths, curves };
    while w.step() {}
    w.finish()
}

/// Carrier made of the given arcs alone, arc `i` becoming edge `i`. The arcs
/// must be disjoint and form a connected graph through every vertex.
pub fn express(k: &Map, arcs: &[Path], paths: &[Path], curves: &[Curve]) -> Changed {
    let o = Overlay::new(k, arcs.iter().cloned().map(Strand::Arc).collect());
    let chains = o.segs.clone();
    let paths = paths.iter().map(|p| o.path_to_m(p)).collect();
    let curves = curves
        .iter()
        .map(|c| if c.letters.is_empty() { c.clone() } else { o.curve_to_m(c) })
        .collect();
    let mut w = Work { m: o.m, chains, paths, curves };
    while w.step() {}
    loop {
        let strand = w.is_strand();
        let Some(e) = (0..w.m.num_edges()).find(|&e| !strand[e]) else { break };
        assert!(!w.is_bridge(e), "arcs do not connect the carrier vertices");
        w.delete(e);
    }
    w.finish()
}
