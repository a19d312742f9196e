//! Multicurves under a blown-up map: preimages, fixed Levy curves, the
//! canonical obstruction read off the charge graph, transition matrices and
//! the small spheres cut out by an invariant multicurve.

use num_rational::Ratio;
use thiserror::Error;

use crate::blowup::Model;
use crate::carrier;
use crate::lifting::{self, LiftingError};
use crate::path::{self, Curve, CurveKind, Path};
use crate::sphere::{edge_of, Map};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("curve is not essential")]
    NotEssential,
    #[error("curves {0} and {1} are isotopic")]
    Duplicate(usize, usize),
    #[error("preimage of curve {0} has an essential component outside the multicurve")]
    NotInvariant(usize),
    #[error("curve {0} has no isotopic preimage component")]
    NotCompletelyInvariant(usize),
    #[error(transparent)]
    Lifting(#[from] LiftingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Isotopic,
    OtherEssential,
    Peripheral,
    Null,
}

/// One component of a curve preimage, pushed to the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub curve: Curve,
    pub degree: usize,
    pub tag: Tag,
}

pub fn same_curve(a: &Curve, b: &Curve) -> bool {
    path::curve_key(a) == path::curve_key(b)
}

pub fn classify_curve_preimage(m: &Model, gamma: &Curve) -> Result<Vec<Component>, DecompositionError> {
    let k = m.k();
    if path::curve_kind(k, gamma) != CurveKind::Essential {
        return Err(DecompositionError::NotEssential);
    }
    Ok(m.curve_lifts(gamma)
        .into_iter()
        .map(|(c, degree)| {
            let curve = path::reduce_curve(&c);
            let tag = match path::curve_kind(k, &curve) {
                CurveKind::Null => Tag::Null,
                CurveKind::Peripheral => Tag::Peripheral,
                CurveKind::Essential if same_curve(&curve, gamma) => Tag::Isotopic,
                CurveKind::Essential => Tag::OtherEssential,
            };
            Component { curve, degree, tag }
        })
        .collect())
}

/// Essential, pairwise non-isotopic curves. Disjointness is not checked.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multicurve {
    pub curves: Vec<Curve>,
}

impl Multicurve {
    pub fn new(k: &Map, curves: Vec<Curve>) -> Result<Multicurve, DecompositionError> {
        let curves: Vec<Curve> = curves.iter().map(path::reduce_curve).collect();
        for (i, c) in curves.iter().enumerate() {
            if path::curve_kind(k, c) != CurveKind::Essential {
                return Err(DecompositionError::NotEssential);
            }
            if let Some(j) = curves[..i].iter().position(|d| same_curve(c, d)) {
                return Err(DecompositionError::Duplicate(j, i));
            }
        }
        Ok(Multicurve { curves })
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn position(&self, c: &Curve) -> Option<usize> {
        self.curves.iter().position(|d| same_curve(c, d))
    }
}

fn components(k: &Map, graph: &[Path]) -> Vec<usize> {
    let mut up: Vec<usize> = (0..k.num_vertices()).collect();
    fn find(up: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while up[x] != x {
            x = up[x];
        }
        x
    }
    for p in graph {
        let (a, b) = (find(&mut up, p.first_vertex(k).unwrap()), find(&mut up, p.last_vertex(k).unwrap()));
        up[a] = b;
    }
    (0..k.num_vertices()).map(|v| find(&mut up, v)).collect()
}

/// Connected through every critical point.
pub fn is_connected(k: &Map, graph: &[Path]) -> bool {
    let c = components(k, graph);
    c.iter().all(|&x| x == c[0])
}

/// Face boundaries of every component of `graph`, pushed into their faces,
/// written on the carrier `k`. Multiple edges count once.
pub fn epsilon_boundaries(k: &Map, graph: &[Path]) -> Vec<Curve> {
    let mut arcs: Vec<Path> = graph.iter().map(|p| path::unoriented(k, p)).collect();
    arcs.sort();
    arcs.dedup();
    let edges: Vec<Path> = (0..k.num_edges()).map(|e| Path::edge(k, e)).collect();
    let ch = carrier::change(k, &arcs, &edges, &[]);
    let h = &ch.map;
    let mut keep = vec![false; h.num_edges()];
    for &d in &ch.arcs {
        keep[edge_of(d)] = true;
    }
    let comp = h.components(&keep);
    let mut roots: Vec<usize> = Vec::new();
    let mut seen = Vec::new();
    for v in 0..h.num_vertices() {
        if h.is_marked(v) && !seen.contains(&comp[v]) {
            seen.push(comp[v]);
            roots.push(v);
        }
    }
    let curves: Vec<Curve> = roots.iter().flat_map(|&r| path::subgraph_boundaries(h, &keep, r)).collect();
    let back: Vec<Path> = ch.paths.iter().map(|p| path::reduce(h, p)).collect();
    let out = carrier::express(h, &back, &[], &curves);
    debug_assert!((0..k.num_darts()).all(|d| out.map.next(d) == k.next(d)));
    out.curves.iter().map(path::reduce_curve).collect()
}

/// Essential boundaries of the charge graph up to isotopy.
pub fn obstruction_of_charge(k: &Map, charge: &[Path]) -> Multicurve {
    let mut curves: Vec<Curve> = Vec::new();
    for c in epsilon_boundaries(k, charge) {
        if path::curve_kind(k, &c) == CurveKind::Essential && !curves.iter().any(|d| same_curve(&c, d)) {
            curves.push(c);
        }
    }
    curves.sort_by_key(path::curve_key);
    Multicurve { curves }
}

pub fn is_realized(m: &Model) -> Result<bool, DecompositionError> {
    Ok(is_connected(m.k(), &lifting::charge(m)?))
}

pub fn canonical_obstruction(m: &Model) -> Result<Multicurve, DecompositionError> {
    Ok(obstruction_of_charge(m.k(), &lifting::charge(m)?))
}

/// A curve with a degree one preimage component isotopic to itself.
pub fn is_fixed_levy_curve(m: &Model, c: &Curve) -> Result<bool, DecompositionError> {
    Ok(classify_curve_preimage(m, c)?.iter().any(|p| p.tag == Tag::Isotopic && p.degree == 1))
}

pub fn find_fixed_levy_curve(m: &Model) -> Result<Option<Curve>, DecompositionError> {
    for c in canonical_obstruction(m)?.curves {
        if is_fixed_levy_curve(m, &c)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub entries: Vec<Vec<Ratio<i64>>>,
    pub spectral_radius: f64,
}

pub const TOLERANCE: f64 = 1e-9;

impl TransitionMatrix {
    pub fn is_obstruction(&self) -> bool {
        !self.entries.is_empty() && self.spectral_radius >= 1.0 - TOLERANCE
    }
}

/// Largest eigenvalue of a nonnegative matrix by power iteration on `M + I`,
/// which has the same Perron vector and no rival eigenvalue of equal size.
pub fn spectral_radius(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let y: Vec<f64> = (0..n).map(|i| x[i] + (0..n).map(|j| a[i][j] * x[j]).sum::<f64>()).collect();
        let norm: f64 = y.iter().sum();
        let next = norm - 1.0;
        x = y.iter().map(|v| v / norm).collect();
        if (next - lambda).abs() < TOLERANCE * 1e-3 {
            return next;
        }
        lambda = next;
    }
    lambda
}

pub fn thurston_matrix(m: &Model, gamma: &Multicurve) -> Result<TransitionMatrix, DecompositionError> {
    let n = gamma.len();
    let mut entries = vec![vec![Ratio::from_integer(0); n]; n];
    for (j, c) in gamma.curves.iter().enumerate() {
        for p in classify_curve_preimage(m, c)? {
            if matches!(p.tag, Tag::Null | Tag::Peripheral) {
                continue;
            }
            let i = gamma.position(&p.curve).ok_or(DecompositionError::NotInvariant(j))?;
            entries[i][j] += Ratio::new(1, p.degree as i64);
        }
    }
    let f: Vec<Vec<f64>> =
        entries.iter().map(|r| r.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect()).collect();
    Ok(TransitionMatrix { spectral_radius: spectral_radius(&f), entries })
}

/// A complementary piece of a multicurve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallSphere {
    /// Critical points inside.
    pub points: Vec<usize>,
    /// Curves of the multicurve on its boundary.
    pub boundary: Vec<usize>,
    pub degree: Ratio<i64>,
}

impl SmallSphere {
    pub fn marked(&self) -> usize {
        self.points.len() + self.boundary.len()
    }
    /// No critical point inside: the map is a homeomorphism there.
    pub fn is_homeomorphism(&self) -> bool {
        self.degree == Ratio::from_integer(1)
    }
}

pub fn small_spheres(m: &Model, gamma: &Multicurve) -> Result<Vec<SmallSphere>, DecompositionError> {
    let k = m.k();
    for (j, c) in gamma.curves.iter().enumerate() {
        let pre = classify_curve_preimage(m, c)?;
        if !pre.iter().any(|p| p.tag == Tag::Isotopic) {
            return Err(DecompositionError::NotCompletelyInvariant(j));
        }
        if pre.iter().any(|p| p.tag != Tag::Null && p.tag != Tag::Peripheral && gamma.position(&p.curve).is_none()) {
            return Err(DecompositionError::NotCompletelyInvariant(j));
        }
    }
    let sides: Vec<Vec<bool>> =
        gamma.curves.iter().map(|c| path::curve_sides(k, c).expect("essential curves separate")).collect();
    let nv = k.num_vertices();
    let sig = |v: usize| -> Vec<bool> { sides.iter().map(|s| s[v]).collect() };
    let mut groups: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    for v in 0..nv {
        let s = sig(v);
        match groups.iter_mut().find(|g| g.0 == s) {
            Some(g) => g.1.push(v),
            None => groups.push((s, vec![v])),
        }
    }
    let ld = m.local_degrees();
    let mut out = Vec::new();
    for (s, points) in groups {
        // curve j bounds the piece unless another curve sits between them
        let boundary = (0..gamma.len())
            .filter(|&j| {
                !(0..gamma.len()).any(|i| {
                    if i == j {
                        return false;
                    }
                    // the side of curve i away from the piece
                    let far: Vec<usize> = (0..nv).filter(|&v| sides[i][v] != s[i]).collect();
                    let a: Vec<usize> = (0..nv).filter(|&v| sides[j][v]).collect();
                    let inside = |set: &[usize]| far.iter().all(|v| set.contains(v));
                    let b: Vec<usize> = (0..nv).filter(|&v| !sides[j][v]).collect();
                    !inside(&a) && !inside(&b) && {
                        // curve j lies on the far side of curve i
                        let near: Vec<usize> = (0..nv).filter(|&v| sides[i][v] == s[i]).collect();
                        near.iter().all(|v| a.contains(v)) || near.iter().all(|v| b.contains(v))
                    }
                })
            })
            .collect();
        let twice: i64 = points.iter().map(|&v| ld[v] as i64 - 1).sum();
        out.push(SmallSphere { points, boundary, degree: Ratio::new(2 + twice, 2) });
    }
    Ok(out)
}
