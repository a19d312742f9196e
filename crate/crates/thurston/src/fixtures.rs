//! Named carriers from the worked examples and seeded random generators for
//! property tests and benches.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::path::{self, reduce, subgraph_boundaries, Curve, End, Path};
use crate::sphere::{twin, Dart, Map, Refinement};

pub type Rng64 = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Square A B C D with edges AB, BC, CD, DA numbered 0..4.
pub fn square() -> Map {
    Map::from_rotations(vec![vec![0, 7], vec![2, 1], vec![4, 3], vec![6, 5]], vec![true; 4]).unwrap()
}

pub fn single_edge() -> Map {
    Map::from_rotations(vec![vec![0], vec![1]], vec![true; 2]).unwrap()
}

/// `n` parallel edges between two vertices.
pub fn parallel_edges(n: usize) -> Map {
    let a = (0..n).map(|e| 2 * e).collect();
    let b = (0..n).rev().map(|e| 2 * e + 1).collect();
    Map::from_rotations(vec![a, b], vec![true; 2]).unwrap()
}

/// Path A B C D whose middle edge is a link: the graph is AB and CD.
pub fn disjoint_edges() -> (Map, Vec<bool>) {
    let k = Map::from_rotations(vec![vec![0], vec![1, 2], vec![3, 4], vec![5]], vec![true; 4]).unwrap();
    (k, vec![true, false, true])
}

/// The square with an extra edge E F hanging off C by a link C E.
pub fn square_plus_edge() -> (Map, Vec<bool>) {
    // A0 B1 C2 D3 E4 F5; AB0 BC1 CD2 DA3 CE4 EF5
    let k = Map::from_rotations(
        vec![vec![0, 7], vec![2, 1], vec![4, 8, 3], vec![6, 5], vec![9, 10], vec![11]],
        vec![true; 6],
    )
    .unwrap();
    (k, vec![true, true, true, true, false, true])
}

/// The curve crossing AB and CD once each.
pub fn square_gamma1() -> Curve {
    Curve { letters: vec![0, 5] }
}

/// The curve crossing every side of the square once, splitting A C from B D.
pub fn square_gamma2(k: &Map) -> Curve {
    // one dart per side, search for the consistent essential choice
    for bits in 0..16usize {
        let letters = (0..4).map(|e| 2 * e + ((bits >> e) & 1)).collect();
        let w = Curve { letters };
        if w.is_consistent(k) && path::curve_kind(k, &w) == path::CurveKind::Essential {
            return path::reduce_curve(&w);
        }
    }
    unreachable!("the square has a curve crossing each side once")
}

/// The curve crossing BC and DA once each.
pub fn square_gamma3() -> Curve {
    Curve { letters: vec![2, 7] }
}

/// Starting tree for the square: sides AB, CD, DA pushed twice around the
/// curve through BC and DA. Its norm is 2.
pub fn square_t0(k: &Map) -> Vec<Path> {
    let w = crate::isotopy::Word::twist(square_gamma3(), -2);
    [0, 2, 3].iter().map(|&e| crate::isotopy::apply_path(k, &w, &Path::edge(k, e))).collect()
}

/// Random connected loopless map: a random tree grown leaf by leaf, then
/// diagonals between distinct vertices until `ne` edges.
pub fn random_map(r: &mut Rng64, nv: usize, ne: usize) -> Map {
    assert!(nv >= 2 && ne + 1 >= nv);
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); nv];
    for v in 1..nv {
        let p = r.random_range(0..v);
        let e = v - 1;
        let at = r.random_range(0..=rot[p].len());
        rot[p].insert(at, 2 * e);
        rot[v].push(2 * e + 1);
    }
    let mut k = Map::from_rotations(rot, vec![true; nv]).unwrap();
    while k.num_edges() < ne {
        let f = r.random_range(0..k.num_faces());
        let corners: Vec<Dart> = k.face(f).iter().map(|&x| twin(x)).collect();
        let a = *corners.choose(r).unwrap();
        let cands: Vec<Dart> = corners.iter().copied().filter(|&c| k.origin(c) != k.origin(a)).collect();
        let Some(&b) = cands.choose(r) else { continue };
        k = k.refine(Refinement::Diagonal(a, b)).unwrap().map;
    }
    k
}

/// Random subset of edges covering every vertex, as a graph mask.
pub fn random_cover(r: &mut Rng64, k: &Map) -> Vec<bool> {
    let mut g = vec![false; k.num_edges()];
    for e in 0..k.num_edges() {
        g[e] = r.random_bool(0.6);
    }
    for v in 0..k.num_vertices() {
        if !k.rotation(v).iter().any(|&d| g[d >> 1]) {
            let &d = k.rotation(v).choose(r).unwrap();
            g[d >> 1] = true;
        }
    }
    g
}

/// Random subtree with between `lo` and `hi` vertices, as an edge mask.
pub fn random_subtree(r: &mut Rng64, k: &Map, lo: usize, hi: usize) -> (Vec<bool>, usize) {
    let size = r.random_range(lo..=hi);
    let root = r.random_range(0..k.num_vertices());
    let mut inside = vec![false; k.num_vertices()];
    inside[root] = true;
    let mut keep = vec![false; k.num_edges()];
    let mut count = 1;
    while count < size {
        let frontier: Vec<Dart> =
            (0..k.num_darts()).filter(|&d| inside[k.origin(d)] && !inside[k.head(d)]).collect();
        let Some(&d) = frontier.choose(r) else { break };
        inside[k.head(d)] = true;
        keep[d >> 1] = true;
        count += 1;
    }
    (keep, root)
}

/// Random essential curve: boundary of a random subtree. Needs four vertices.
pub fn random_curve(r: &mut Rng64, k: &Map) -> Option<Curve> {
    let n = k.num_vertices();
    if n < 4 {
        return None;
    }
    let (keep, root) = random_subtree(r, k, 2, n - 2);
    let c = subgraph_boundaries(k, &keep, root).pop()?;
    (path::curve_kind(k, &c) == path::CurveKind::Essential).then(|| path::reduce_curve(&c))
}

/// Random zero-crossing arc between corners of one face.
pub fn random_chord(r: &mut Rng64, k: &Map) -> Path {
    loop {
        let f = r.random_range(0..k.num_faces());
        let corners: Vec<Dart> = k.face(f).iter().map(|&x| twin(x)).collect();
        let a = *corners.choose(r).unwrap();
        let cands: Vec<Dart> = corners.iter().copied().filter(|&c| k.origin(c) != k.origin(a)).collect();
        if let Some(&b) = cands.choose(r) {
            return Path { start: End::Corner(a), letters: vec![], end: End::Corner(b) };
        }
    }
}

/// Random simple arc: a chord pushed around by a few random twists.
pub fn random_arc(r: &mut Rng64, k: &Map, twists: usize) -> Path {
    let mut p = random_chord(r, k);
    for _ in 0..twists {
        if let Some(c) = random_curve(r, k) {
            let n = r.random_range(-2i64..=2);
            p = crate::isotopy::twist_path(k, &c, n, &p);
        }
    }
    reduce(k, &p)
}

/// Adds `n` random finger moves and end slides; the isotopy class is kept.
pub fn wiggle(r: &mut Rng64, k: &Map, p: &Path, n: usize) -> Path {
    let mut q = p.clone();
    for _ in 0..n {
        match r.random_range(0..4) {
            0 => {
                if let End::Corner(c) = q.start {
                    if r.random_bool(0.5) {
                        let c2 = k.next(c);
                        q.letters.insert(0, twin(c2));
                        q.start = End::Corner(c2);
                    } else {
                        let c2 = k.prev(c);
                        q.letters.insert(0, c);
                        q.start = End::Corner(c2);
                    }
                }
            }
            1 => {
                let mut rev = q.reversed();
                if let End::Corner(c) = rev.start {
                    let c2 = k.next(c);
                    rev.letters.insert(0, twin(c2));
                    rev.start = End::Corner(c2);
                }
                q = rev.reversed();
            }
            _ => {
                let faces = q.faces(k);
                let i = r.random_range(0..faces.len());
                let &x = k.face(faces[i]).choose(r).unwrap();
                q.letters.insert(i, twin(x));
                q.letters.insert(i, x);
            }
        }
    }
    debug_assert!(q.is_consistent(k));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_maps_are_spheres() {
        let mut r = rng(7);
        for _ in 0..50 {
            let nv = r.random_range(2..=6);
            let ne = r.random_range(nv - 1..=8);
            let k = random_map(&mut r, nv, ne);
            assert_eq!(k.euler(), 2);
            assert!((0..k.num_edges()).all(|e| !k.is_loop(e)));
        }
    }

    #[test]
    fn wiggles_reduce_back() {
        let mut r = rng(11);
        for _ in 0..100 {
            let k = random_map(&mut r, 5, 7);
            let a = random_arc(&mut r, &k, 2);
            let w = wiggle(&mut r, &k, &a, 4);
            assert!(w.is_consistent(&k));
            assert_eq!(reduce(&k, &w), a);
        }
    }

    #[test]
    fn named_curves() {
        let k = square();
        assert_eq!(path::curve_kind(&k, &square_gamma1()), path::CurveKind::Essential);
        let g2 = square_gamma2(&k);
        assert_eq!(g2.letters.len(), 4);
    }
}
