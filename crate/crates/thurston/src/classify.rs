//! Equivalence of pairs and of the maps they blow up to.
//!
//! Two pairs are equivalent when an orientation preserving homeomorphism
//! carries one graph onto the other and conjugates one mapping class to the
//! other. For a connected graph the graph itself is a carrier, so the
//! candidates are its map isomorphisms and the mapping classes are compared
//! on its edges. A disconnected graph is completed to a carrier by links and
//! only isomorphisms of the completed carriers are tried, along with the
//! identity when both pairs sit on the same carrier.

use thiserror::Error;

use crate::action::{Action, ActionError, Homeo};
use crate::blowup::{drop_links, ArcPair, Model};
use crate::carrier;
use crate::decomposition::is_connected;
use crate::isotopy::Word;
use crate::lifting::{self, LiftingError};
use crate::path::{self, Curve, End, Path};
use crate::sphere::{edge_of, isomorphisms, twin, Dart, Map};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("charge graph is not connected")]
    NotRealized,
    #[error(transparent)]
    Lifting(#[from] LiftingError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// A pair redrawn on a carrier whose edges include the graph edges.
#[derive(Debug, Clone)]
pub struct Normal {
    pub map: Map,
    /// Copies of each carrier edge in the graph, 0 for links.
    pub mult: Vec<usize>,
    pub phi: Homeo,
    pub connected: bool,
}

/// Distinct edge classes of a graph with their multiplicities.
pub fn edge_classes(k: &Map, arcs: &[Path]) -> Vec<(Path, usize)> {
    let mut keys: Vec<Path> = arcs.iter().map(|p| path::unoriented(k, p)).collect();
    keys.sort();
    let mut out: Vec<(Path, usize)> = Vec::new();
    for p in keys {
        match out.last_mut() {
            Some((q, n)) if *q == p => *n += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn normal(p: &ArcPair) -> Normal {
    let k = &p.k;
    let classes = edge_classes(k, &p.arcs);
    let arcs: Vec<Path> = classes.iter().map(|c| c.0.clone()).collect();
    let connected = is_connected(k, &p.arcs);
    let (paths, curves) = match &p.phi {
        Homeo::Word(w) => (Vec::new(), w.letters.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>()),
        Homeo::Action(a) => (a.gens.iter().chain(&a.images).cloned().collect(), Vec::new()),
    };
    let ch = if connected {
        carrier::express(k, &arcs, &paths, &curves)
    } else {
        carrier::change(k, &arcs, &paths, &curves)
    };
    let mut h = ch.map;
    let mut mult = vec![0; h.num_edges()];
    for (d, c) in ch.arcs.iter().zip(&classes) {
        mult[edge_of(*d)] = c.1;
    }
    let (mut paths, mut curves) = (ch.paths, ch.curves);
    if !connected {
        // keep only the links needed to connect the graph, so that carriers
        // of equivalent pairs have a chance to be isomorphic
        let np = paths.len();
        paths.extend(ch.arcs.iter().map(|&d| Path::edge(&h, edge_of(d))));
        let in_g = mult.iter().map(|&m| m > 0).collect();
        let (h2, _, c2, p2) = drop_links(h, in_g, curves, paths);
        mult = vec![0; h2.num_edges()];
        for (p, c) in p2[np..].iter().zip(&classes) {
            mult[path::parallel_edge(&h2, p).expect("graph edges survive")] = c.1;
        }
        (h, curves, paths) = (h2, c2, p2[..np].to_vec());
    }
    let phi = match &p.phi {
        Homeo::Word(w) => Homeo::Word(Word {
            letters: w.letters.iter().zip(&curves).map(|((_, n), c)| (path::reduce_curve(c), *n)).collect(),
        }),
        Homeo::Action(a) => {
            let q: Vec<Path> = paths.iter().map(|x| path::reduce(&h, x)).collect();
            let (g, i) = q.split_at(a.gens.len());
            Homeo::Action(Action { gens: g.to_vec(), images: i.to_vec() })
        }
    };
    Normal { map: h, mult, phi, connected }
}

fn relabel_end(e: End, psi: &[Dart]) -> End {
    match e {
        End::Corner(c) => End::Corner(psi[c]),
        End::Point(c) => End::Point(psi[c]),
    }
}

fn relabel_path(p: &Path, psi: &[Dart]) -> Path {
    Path {
        start: relabel_end(p.start, psi),
        letters: p.letters.iter().map(|&x| psi[x]).collect(),
        end: relabel_end(p.end, psi),
    }
}

fn relabel_curve(c: &Curve, psi: &[Dart]) -> Curve {
    Curve { letters: c.letters.iter().map(|&x| psi[x]).collect() }
}

/// `psi . phi . psi^-1` for a carrier isomorphism `psi`.
pub fn conjugate(phi: &Homeo, psi: &[Dart]) -> Homeo {
    match phi {
        Homeo::Word(w) => {
            Homeo::Word(Word { letters: w.letters.iter().map(|(c, n)| (relabel_curve(c, psi), *n)).collect() })
        }
        Homeo::Action(a) => Homeo::Action(Action {
            gens: a.gens.iter().map(|p| relabel_path(p, psi)).collect(),
            images: a.images.iter().map(|p| relabel_path(p, psi)).collect(),
        }),
    }
}

/// Isomorphisms of the normal forms that carry graph edges to graph edges
/// with the same multiplicity.
pub fn graph_isomorphisms(a: &Normal, b: &Normal) -> Vec<Vec<Dart>> {
    isomorphisms(&a.map, &b.map)
        .into_iter()
        .filter(|psi| (0..a.map.num_edges()).all(|e| a.mult[e] == b.mult[edge_of(psi[2 * e])]))
        .collect()
}

fn same_carrier(a: &Map, b: &Map) -> bool {
    a.num_darts() == b.num_darts() && a.marking() == b.marking() && (0..a.num_darts()).all(|d| a.next(d) == b.next(d))
}

fn counts(k: &Map, arcs: &[Path]) -> Vec<usize> {
    let mut c: Vec<usize> = edge_classes(k, arcs).into_iter().map(|x| x.1).collect();
    c.sort();
    c
}

pub fn pairs_equivalent(p1: &ArcPair, p2: &ArcPair) -> Result<bool, ClassifyError> {
    if p1.arcs.len() != p2.arcs.len()
        || p1.k.num_vertices() != p2.k.num_vertices()
        || p1.components() != p2.components()
        || counts(&p1.k, &p1.arcs) != counts(&p2.k, &p2.arcs)
    {
        return Ok(false);
    }
    if same_carrier(&p1.k, &p2.k) {
        let k = &p1.k;
        let a = edge_classes(k, &p1.arcs);
        if a == edge_classes(k, &p2.arcs) && p1.phi.agrees(k, &p2.phi)? {
            return Ok(true);
        }
    }
    let trivial = (p1.phi.is_trivial(&p1.k)?, p2.phi.is_trivial(&p2.k)?);
    let (n1, n2) = (normal(p1), normal(p2));
    if trivial.0 != trivial.1 {
        return Ok(false);
    }
    if trivial.0 {
        return Ok(graph_form(&n1) == graph_form(&n2));
    }
    for psi in graph_isomorphisms(&n1, &n2) {
        if conjugate(&n1.phi, &psi).agrees(&n2.map, &n2.phi)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn find(up: &mut [usize], x: usize) -> usize {
    let mut x = x;
    while up[x] != x {
        up[x] = up[up[x]];
        x = up[x];
    }
    x
}

/// Face walks of the graph components and the complementary regions they
/// bound. Components and regions form a tree on the sphere.
struct Layout<'a> {
    n: &'a Normal,
    /// Next graph dart counterclockwise, links skipped.
    gnext: Vec<Dart>,
    walk: Vec<usize>,
    walks: Vec<Vec<Dart>>,
    region_of_walk: Vec<usize>,
    walks_of_region: Vec<Vec<usize>>,
}

impl<'a> Layout<'a> {
    fn new(n: &'a Normal) -> Layout<'a> {
        let h = &n.map;
        let in_g = |d: Dart| n.mult[edge_of(d)] > 0;
        let mut gnext = vec![usize::MAX; h.num_darts()];
        for d in (0..h.num_darts()).filter(|&d| in_g(d)) {
            let mut x = h.next(d);
            while !in_g(x) {
                x = h.next(x);
            }
            gnext[d] = x;
        }
        let mut walk = vec![usize::MAX; h.num_darts()];
        let mut walks: Vec<Vec<Dart>> = Vec::new();
        for d in (0..h.num_darts()).filter(|&d| in_g(d)) {
            if walk[d] != usize::MAX {
                continue;
            }
            let mut w = Vec::new();
            let mut x = d;
            while walk[x] == usize::MAX {
                walk[x] = walks.len();
                w.push(x);
                x = gnext[twin(x)];
            }
            walks.push(w);
        }
        // faces of the carrier joined across links
        let mut fup: Vec<usize> = (0..h.num_faces()).collect();
        for e in (0..h.num_edges()).filter(|&e| n.mult[e] == 0) {
            let (a, b) = (find(&mut fup, h.face_of(2 * e)), find(&mut fup, h.face_of(2 * e + 1)));
            fup[a] = b;
        }
        let region_of_walk: Vec<usize> = walks.iter().map(|w| find(&mut fup, h.face_of(w[0]))).collect();
        let mut walks_of_region = vec![Vec::new(); h.num_faces()];
        for (i, &r) in region_of_walk.iter().enumerate() {
            walks_of_region[r].push(i);
        }
        Layout { n, gnext, walk, walks, region_of_walk, walks_of_region }
    }

    /// Region seen from the component owning walk `from`, if any.
    fn region_form(&self, r: usize, from: Option<usize>) -> String {
        let mut parts: Vec<String> = self.walks_of_region[r]
            .iter()
            .filter(|&&w| Some(w) != from)
            .map(|&w| self.component_form(w))
            .collect();
        parts.sort();
        format!("[{}]", parts.join(""))
    }

    /// Component entered through its walk `w0`: dart labels in breadth first
    /// order from each start dart of the walk, the least encoding wins.
    fn component_form(&self, w0: usize) -> String {
        let mut best: Option<String> = None;
        for &s in &self.walks[w0] {
            let mut label = std::collections::HashMap::from([(s, 0usize)]);
            let mut order = vec![s];
            let mut i = 0;
            while i < order.len() {
                let x = order[i];
                i += 1;
                for y in [twin(x), self.gnext[x]] {
                    if !label.contains_key(&y) {
                        label.insert(y, order.len());
                        order.push(y);
                    }
                }
            }
            let mut out = String::new();
            let mut seen_walk = std::collections::HashSet::from([w0]);
            for &x in &order {
                out.push_str(&format!("{},{},{}", label[&twin(x)], label[&self.gnext[x]], self.n.mult[edge_of(x)]));
                let w = self.walk[x];
                if seen_walk.insert(w) {
                    out.push_str(&self.region_form(self.region_of_walk[w], Some(w)));
                }
                out.push(';');
            }
            if best.as_ref().is_none_or(|b| out < *b) {
                best = Some(out);
            }
        }
        format!("({})", best.unwrap_or_default())
    }
}

/// Complete invariant of a graph up to orientation preserving homeomorphism,
/// multiplicities included.
fn graph_form(n: &Normal) -> String {
    let l = Layout::new(n);
    let mut regions: Vec<usize> = l.region_of_walk.clone();
    regions.sort();
    regions.dedup();
    regions.into_iter().map(|r| l.region_form(r, None)).min().unwrap_or_default()
}

/// The charge graph with the mapping class of the map.
pub fn pair_of(m: &Model) -> Result<ArcPair, ClassifyError> {
    let k = m.k();
    let charge = lifting::charge(m)?;
    // the pure mapping class group of a sphere with at most three marked
    // points is trivial
    let phi = if k.num_vertices() <= 3 {
        Homeo::identity()
    } else {
        Homeo::Action(lifting::reconstruct_homeomorphism(m, &charge)?)
    };
    Ok(ArcPair { k: k.clone(), arcs: charge, phi })
}

pub fn maps_equivalent(m1: &Model, m2: &Model) -> Result<bool, ClassifyError> {
    pairs_equivalent(&pair_of(m1)?, &pair_of(m2)?)
}

/// Isomorphism test of two connected charge graphs.
pub fn charge_isomorphic(k1: &Map, g1: &[Path], k2: &Map, g2: &[Path]) -> Result<bool, ClassifyError> {
    if !is_connected(k1, g1) || !is_connected(k2, g2) {
        return Err(ClassifyError::NotRealized);
    }
    let a = normal(&ArcPair { k: k1.clone(), arcs: g1.to_vec(), phi: Homeo::identity() });
    let b = normal(&ArcPair { k: k2.clone(), arcs: g2.to_vec(), phi: Homeo::identity() });
    Ok(!graph_isomorphisms(&a, &b).is_empty())
}

/// Graphs isotopic with multiplicity on a common carrier.
pub fn same_graph(k: &Map, a: &[Path], b: &[Path]) -> bool {
    edge_classes(k, a) == edge_classes(k, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{blow_up, blow_up_unchecked, Pair};
    use crate::fixtures;
    use crate::isotopy;
    use crate::twisting::resolve_twist;

    #[test]
    fn relabelled_square_is_equivalent() {
        let k = fixtures::square();
        let p = Pair::full(k.clone()).to_arcs();
        // the square with its vertices renamed one step around
        let r = Map::from_rotations(vec![vec![6, 5], vec![0, 7], vec![2, 1], vec![4, 3]], vec![true; 4]).unwrap();
        let q = Pair::full(r).to_arcs();
        assert!(pairs_equivalent(&p, &q).unwrap());
        assert!(pairs_equivalent(&p, &p).unwrap());
    }

    #[test]
    fn rotations_of_the_square() {
        let k = fixtures::square();
        let pair = Pair::full(k.clone());
        let p = pair.to_arcs();
        let g1 = fixtures::square_gamma1();
        let g2 = fixtures::square_gamma2(&k);
        assert!(pairs_equivalent(&p, &resolve_twist(&pair, &g1, -1).unwrap()).unwrap());
        assert!(!pairs_equivalent(&p, &resolve_twist(&pair, &g2, 1).unwrap()).unwrap());
        assert!(pairs_equivalent(&p, &resolve_twist(&pair, &g2, 2).unwrap()).unwrap());
    }

    #[test]
    fn twisted_mapping_class_is_seen() {
        let k = fixtures::square();
        let g2 = fixtures::square_gamma2(&k);
        let p = Pair::full(k.clone()).to_arcs();
        let q = ArcPair { phi: Homeo::Word(Word::twist(g2, 1)), ..p.clone() };
        assert!(!pairs_equivalent(&p, &q).unwrap());
        assert!(pairs_equivalent(&q, &q).unwrap());
    }

    #[test]
    fn maps_of_the_square() {
        let k = fixtures::square();
        let f = blow_up(&Pair::full(k.clone())).unwrap();
        let g2 = fixtures::square_gamma2(&k);
        let t = blow_up_unchecked(&Pair::new(k.clone(), vec![true; 4], Word::twist(g2, 1))).unwrap();
        assert!(maps_equivalent(&f, &f).unwrap());
        assert!(!maps_equivalent(&f, &t).unwrap());
        let g1 = fixtures::square_gamma1();
        let t1 = blow_up_unchecked(&Pair::new(k.clone(), vec![true; 4], Word::twist(g1, 1))).unwrap();
        assert!(maps_equivalent(&f, &t1).unwrap());
    }

    #[test]
    fn disjoint_edges_round_trip() {
        let (k, g) = fixtures::disjoint_edges();
        let p = Pair::identity(k, g);
        let m = blow_up(&p).unwrap();
        assert!(pairs_equivalent(&pair_of(&m).unwrap(), &p.to_arcs()).unwrap());
        assert!(maps_equivalent(&m, &blow_up(&p).unwrap()).unwrap());
    }

    #[test]
    fn charge_isomorphism() {
        let k = fixtures::square();
        let sides: Vec<Path> = (0..4).map(|e| Path::edge(&k, e)).collect();
        assert!(charge_isomorphic(&k, &sides, &k, &sides).unwrap());
        let path3 = &sides[..3];
        let f = k.face_of(0);
        let diag = isotopy::chord(isotopy::corner_at(&k, 0, f).unwrap(), isotopy::corner_at(&k, 2, f).unwrap());
        let star = vec![sides[0].clone(), sides[3].clone(), diag];
        assert!(!charge_isomorphic(&k, path3, &k, &star).unwrap());
        assert!(charge_isomorphic(&k, path3, &k, &sides[1..]).unwrap());
        let (dk, dg) = fixtures::disjoint_edges();
        let p = Pair::identity(dk.clone(), dg);
        assert_eq!(charge_isomorphic(&dk, &p.edge_paths(), &k, &sides), Err(ClassifyError::NotRealized));
    }
}
