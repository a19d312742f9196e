//! Twisted blow-ups `T_gamma^n . f` rewritten as blow-ups again.
//!
//! When `gamma` misses the graph the twist just goes into the mapping class.
//! When it crosses every graph edge at most once, twisting the map is the
//! same as rotating the graph along `gamma` the other way: each crossed edge
//! keeps its half on the left of `gamma`, runs along `gamma` past `n`
//! crossings, and finishes with the right half of the edge it arrives at.

use thiserror::Error;

use crate::action::Homeo;
use crate::blowup::{ArcPair, Pair};
use crate::classify;
use crate::isotopy::{self, Word};
use crate::path::{self, CurveKind, End, Path};
use crate::sphere::{edge_of, twin, Dart};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("curve is not essential")]
    NotEssential,
    #[error("curve crosses graph edge {0} more than once")]
    NotSimpleTransversal(usize),
    #[error("curve does not cross the graph")]
    Disjoint,
    #[error("pair has a nontrivial mapping class")]
    NotIdentity,
}

/// Crossings of `gamma` with the graph, as positions in its reduced letters.
/// `None` if some graph edge is crossed twice.
fn crossings(p: &Pair, gamma: &path::Curve) -> Result<Vec<usize>, TwistError> {
    let mut seen = vec![false; p.k.num_edges()];
    let mut out = Vec::new();
    for (i, &x) in gamma.letters.iter().enumerate() {
        let e = edge_of(x);
        if !p.in_g[e] {
            continue;
        }
        if seen[e] {
            return Err(TwistError::NotSimpleTransversal(e));
        }
        seen[e] = true;
        out.push(i);
    }
    Ok(out)
}

/// A curve missing the graph counts too.
pub fn is_simple_transversal(p: &Pair, gamma: &path::Curve) -> bool {
    let g = path::reduce_curve(gamma);
    path::curve_kind(&p.k, &g) == CurveKind::Essential && crossings(p, &g).is_ok()
}

/// The graph rotated `n` crossings along `gamma`, as arcs on the carrier of `p`.
pub fn rotate_graph(p: &Pair, gamma: &path::Curve, n: i64) -> Result<Vec<Path>, TwistError> {
    let k = &p.k;
    let g = path::reduce_curve(gamma);
    if path::curve_kind(k, &g) != CurveKind::Essential {
        return Err(TwistError::NotEssential);
    }
    let q = crossings(p, &g)?;
    if q.is_empty() {
        return Err(TwistError::Disjoint);
    }
    let m = q.len() as i64;
    let len = g.letters.len() as i64;
    let at = |i: i64| -> Dart { g.letters[i.rem_euclid(len) as usize] };
    let mut out = Vec::new();
    for e in p.edges() {
        let Some(j) = q.iter().position(|&i| edge_of(g.letters[i]) == e) else {
            out.push(Path::edge(k, e));
            continue;
        };
        if n == 0 {
            out.push(Path::edge(k, e));
            continue;
        }
        let x = g.letters[q[j]];
        let t = j as i64 + n;
        let wraps = t.div_euclid(m);
        let to = q[t.rem_euclid(m) as usize] as i64 + wraps * len;
        let from = q[j] as i64;
        let y = at(to);
        let p = if n > 0 {
            Path {
                start: End::Corner(x),
                letters: (from + 1..to).map(at).collect(),
                end: End::Corner(twin(y)),
            }
        } else {
            Path {
                start: End::Corner(k.prev(x)),
                letters: (to + 1..from).rev().map(|i| twin(at(i))).collect(),
                end: End::Corner(k.prev(twin(y))),
            }
        };
        debug_assert!(p.is_consistent(k));
        out.push(path::reduce(k, &p));
    }
    Ok(out)
}

/// `T_gamma^n . f` for `f` the blow-up of `p`, written as another pair.
pub fn resolve_twist(p: &Pair, gamma: &path::Curve, n: i64) -> Result<ArcPair, TwistError> {
    if !p.phi.is_identity() {
        return Err(TwistError::NotIdentity);
    }
    let g = path::reduce_curve(gamma);
    if path::curve_kind(&p.k, &g) != CurveKind::Essential {
        return Err(TwistError::NotEssential);
    }
    let hits = p.edges().iter().map(|&e| isotopy::arc_curve_intersection(&p.k, &Path::edge(&p.k, e), &g)).sum::<usize>();
    if hits == 0 {
        return Ok(ArcPair { k: p.k.clone(), arcs: p.edge_paths(), phi: Homeo::Word(Word::twist(g, n)) });
    }
    let arcs = rotate_graph(p, &g, -n)?;
    Ok(ArcPair { k: p.k.clone(), arcs, phi: Homeo::identity() })
}

/// Least `d >= 1` with `T_gamma^d . f` equivalent to `f`. It divides the
/// number of crossings, since a full turn of the crossings is a Dehn twist.
pub fn twist_period(p: &Pair, gamma: &path::Curve) -> Result<usize, PeriodError> {
    let g = path::reduce_curve(gamma);
    let i = crossings(p, &g)?.len();
    if i == 0 {
        return Err(TwistError::Disjoint.into());
    }
    let base = p.to_arcs();
    for d in (1..=i).filter(|d| i % d == 0) {
        if classify::pairs_equivalent(&resolve_twist(p, &g, d as i64)?, &base)? {
            return Ok(d);
        }
    }
    unreachable!("a full turn of the crossings is a twist about a curve the graph does not see")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Classify(#[from] classify::ClassifyError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sphere::Map;

    fn edge_carrier(k: &Map) -> Vec<Path> {
        (0..k.num_edges()).map(|e| Path::edge(k, e)).collect()
    }

    #[test]
    fn full_rotation_is_a_twist() {
        let k = fixtures::square();
        let p = Pair::full(k.clone());
        for gamma in [fixtures::square_gamma1(), fixtures::square_gamma2(&k)] {
            let g = path::reduce_curve(&gamma);
            let m = crossings(&p, &g).unwrap().len() as i64;
            for s in [-2i64, -1, 1, 2] {
                let h = rotate_graph(&p, &g, s * m).unwrap();
                let w = Word::twist(g.clone(), s);
                let t: Vec<Path> = p.edge_paths().iter().map(|a| isotopy::apply_path(&k, &w, a)).collect();
                assert!(isotopy::are_isotopic_graphs(&k, &h, &t).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn rotation_zero_is_identity() {
        let k = fixtures::square();
        let p = Pair::full(k.clone());
        let h = rotate_graph(&p, &fixtures::square_gamma1(), 0).unwrap();
        assert_eq!(h, edge_carrier(&k));
    }

    #[test]
    fn rotated_edges_stay_disjoint() {
        let k = fixtures::square();
        let p = Pair::full(k.clone());
        let g = fixtures::square_gamma1();
        for n in 1..4 {
            let h = rotate_graph(&p, &g, n).unwrap();
            assert_eq!(h.len(), 4);
            for a in &h {
                for b in &h {
                    if a != b {
                        assert_eq!(isotopy::arc_intersection(&k, a, b), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma2_odd_rotation_disconnects() {
        let k = fixtures::square();
        let p = Pair::full(k.clone());
        let g = fixtures::square_gamma2(&k);
        for n in -3i64..=3 {
            let r = resolve_twist(&p, &g, n).unwrap();
            let want = if n % 2 == 0 { 1 } else { 2 };
            assert_eq!(r.components(), want, "n = {n}");
        }
    }

    #[test]
    fn resolved_pair_is_the_charge_of_the_twisted_map() {
        use crate::blowup::blow_up_unchecked;
        use crate::lifting::{lifting_algorithm, Tree};
        let k = fixtures::square();
        let p = Pair::full(k.clone());
        let t0 = Tree::from_arcs(&k, &fixtures::square_t0(&k));
        for gamma in [fixtures::square_gamma1(), fixtures::square_gamma2(&k)] {
            for n in -3i64..=3 {
                let m = blow_up_unchecked(&Pair::new(k.clone(), vec![true; 4], Word::twist(gamma.clone(), n))).unwrap();
                let charge = lifting_algorithm(&m, &t0, 40).unwrap().edges;
                let r = resolve_twist(&p, &gamma, n).unwrap();
                assert!(isotopy::are_isotopic_graphs(&k, &charge, &r.arcs).unwrap(), "n = {n}");
            }
        }
    }

    #[test]
    fn periods_on_the_square() {
        let k = fixtures::square();
        let p = Pair::full(k.clone());
        assert_eq!(twist_period(&p, &fixtures::square_gamma1()).unwrap(), 1);
        assert_eq!(twist_period(&p, &fixtures::square_gamma2(&k)).unwrap(), 2);
    }
}
