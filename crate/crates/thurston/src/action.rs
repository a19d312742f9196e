//! Mapping classes given by what they do to a generating graph.
//!
//! A homeomorphism fixing the marked points is determined up to isotopy by
//! the images of the edges of any connected graph through all marked points.
//! To apply it to another arc, write the arc in the carrier made of the
//! generators, read the same letters in the carrier made of the images, and
//! translate back.

use thiserror::Error;

use crate::carrier;
use crate::isotopy::{self, Word};
use crate::path::{self, End, Path};
use crate::sphere::{edge_of, isomorphisms, Dart, Map};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("images do not fit together like the generators")]
    NotAHomeomorphism,
    #[error("generators and images differ in number")]
    Length,
}

/// Images of a connected generating graph, `gens[i]` going to `images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Action {
    pub gens: Vec<Path>,
    pub images: Vec<Path>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homeo {
    Word(Word),
    Action(Action),
}

impl Homeo {
    pub fn identity() -> Homeo {
        Homeo::Word(Word::identity())
    }

    pub fn apply(&self, k: &Map, p: &Path) -> Result<Path, ActionError> {
        match self {
            Homeo::Word(w) => Ok(isotopy::apply_path(k, w, p)),
            Homeo::Action(a) => apply_action(k, a, p),
        }
    }

    /// Isotopic to the identity, tested on the carrier edges.
    pub fn is_trivial(&self, k: &Map) -> Result<bool, ActionError> {
        for e in 0..k.num_edges() {
            let a = Path::edge(k, e);
            if !isotopy::are_isotopic_arcs(k, &self.apply(k, &a)?, &a) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same mapping class, tested on the carrier edges.
    pub fn agrees(&self, k: &Map, other: &Homeo) -> Result<bool, ActionError> {
        for e in 0..k.num_edges() {
            let a = Path::edge(k, e);
            if !isotopy::are_isotopic_arcs(k, &self.apply(k, &a)?, &other.apply(k, &a)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn same_rotations(a: &Map, b: &Map) -> bool {
    a.num_darts() == b.num_darts() && (0..a.num_darts()).all(|d| a.next(d) == b.next(d))
}

pub fn apply_action(k: &Map, a: &Action, p: &Path) -> Result<Path, ActionError> {
    if a.gens.len() != a.images.len() {
        return Err(ActionError::Length);
    }
    // parallel generators would be drawn on top of each other
    let mut keys = Vec::new();
    let (mut gens, mut images) = (Vec::new(), Vec::new());
    for (g, i) in a.gens.iter().zip(&a.images) {
        let key = path::unoriented(k, g);
        if !keys.contains(&key) {
            keys.push(key);
            gens.push(path::reduce(k, g));
            images.push(path::reduce(k, i));
        }
    }
    let h = carrier::express(k, &gens, &[path::reduce(k, p)], &[]);
    let edges: Vec<Path> = (0..k.num_edges()).map(|e| Path::edge(k, e)).collect();
    let img = carrier::express(k, &images, &edges, &[]);
    if !same_rotations(&h.map, &img.map) {
        return Err(ActionError::NotAHomeomorphism);
    }
    let back_arcs: Vec<Path> = img.paths.iter().map(|q| path::reduce(&img.map, q)).collect();
    let back = carrier::express(&img.map, &back_arcs, &h.paths, &[]);
    let q = &back.paths[0];
    if same_rotations(&back.map, k) {
        return Ok(path::reduce(k, q));
    }
    // parallel carrier edges may come back swapped; any isomorphism sending
    // each edge to an isotopic one is isotopic to the identity
    let edge = |d: Dart| {
        let p = Path::edge(k, edge_of(d));
        path::reduce(k, &if d % 2 == 0 { p } else { p.reversed() })
    };
    let psi = isomorphisms(&back.map, k)
        .into_iter()
        .find(|psi| (0..k.num_edges()).all(|e| edge(psi[2 * e]) == edge(2 * e)))
        .ok_or(ActionError::NotAHomeomorphism)?;
    let end = |x: End| match x {
        End::Corner(c) => End::Corner(psi[c]),
        End::Point(c) => End::Point(psi[c]),
    };
    let moved = Path { start: end(q.start), letters: q.letters.iter().map(|&x| psi[x]).collect(), end: end(q.end) };
    Ok(path::reduce(k, &moved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn action_of_a_twist() {
        let k = fixtures::square();
        let g = fixtures::square_gamma2(&k);
        let w = Word::twist(g, 1);
        let gens: Vec<Path> = (0..3).map(|e| Path::edge(&k, e)).collect();
        let images = gens.iter().map(|p| isotopy::apply_path(&k, &w, p)).collect();
        let a = Homeo::Action(Action { gens, images });
        assert!(a.agrees(&k, &Homeo::Word(w.clone())).unwrap());
        assert!(!a.is_trivial(&k).unwrap());
        let id = Action { gens: vec![Path::edge(&k, 0), Path::edge(&k, 1), Path::edge(&k, 2)], images: vec![Path::edge(&k, 0), Path::edge(&k, 1), Path::edge(&k, 2)] };
        assert!(Homeo::Action(id).is_trivial(&k).unwrap());
    }

    #[test]
    fn identity_with_parallel_edges() {
        // edges 1 and 4 bound an empty bigon
        let k = Map::from_rotations(vec![vec![0, 4, 7], vec![1, 8, 2], vec![3, 9, 6], vec![5]], vec![true; 4]).unwrap();
        let chord = |a, b| Path { start: End::Corner(a), letters: vec![], end: End::Corner(b) };
        let gens = vec![chord(4, 6), chord(0, 5), chord(1, 9)];
        let a = Homeo::Action(Action { gens: gens.clone(), images: gens });
        assert!(a.is_trivial(&k).unwrap());
    }
}
