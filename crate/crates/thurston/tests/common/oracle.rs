//! Brute force minimal position: every bigon removal in every order.
//!
//! An arc is a start corner, the carrier edges it crosses and an end corner.
//! A bigon with an edge shows up either as a letter followed by its reverse
//! or as a first or last letter crossing an edge at the arc's own endpoint.
//! Chords with no letters may also slide across a parallel edge. Nothing
//! here picks a canonical representative, the whole orbit is searched.

use std::collections::{HashSet, VecDeque};

use thurston::path::{End, Path};
use thurston::sphere::{twin, Map};

fn start_moves(k: &Map, p: &Path, out: &mut Vec<Path>) {
    let (End::Corner(c), Some(&x)) = (p.start, p.letters.first()) else { return };
    // the sector at c is bounded by the edges of c and of next(c)
    let to = if x == twin(c) {
        k.prev(c)
    } else if x == k.next(c) {
        k.next(c)
    } else {
        return;
    };
    out.push(Path { start: End::Corner(to), letters: p.letters[1..].to_vec(), end: p.end });
}

fn chord_slides(k: &Map, a: usize, b: usize, out: &mut Vec<Path>) {
    let chord = |s, t| Path { start: End::Corner(s), letters: vec![], end: End::Corner(t) };
    for x in 0..k.num_darts() {
        // the two chords running along the edge of x, one on each side
        let one = (k.prev(x), twin(x));
        let two = (x, k.prev(twin(x)));
        for (p, q) in [(one, two), (two, one)] {
            if (a, b) == p {
                out.push(chord(q.0, q.1));
            }
            if (b, a) == p {
                out.push(chord(q.1, q.0));
            }
        }
    }
}

/// Arcs one move away.
pub fn moves(k: &Map, p: &Path) -> Vec<Path> {
    let mut out = Vec::new();
    for i in 0..p.letters.len().saturating_sub(1) {
        if p.letters[i + 1] == twin(p.letters[i]) {
            let mut l = p.letters.clone();
            l.drain(i..i + 2);
            out.push(Path { start: p.start, letters: l, end: p.end });
        }
    }
    start_moves(k, p, &mut out);
    let mut back = Vec::new();
    start_moves(k, &p.reversed(), &mut back);
    out.extend(back.iter().map(|q| q.reversed()));
    if let (true, End::Corner(a), End::Corner(b)) = (p.letters.is_empty(), p.start, p.end) {
        chord_slides(k, a, b, &mut out);
    }
    out
}

/// Everything reachable from `p`, or `None` past `cap` states.
pub fn reachable(k: &Map, p: &Path, cap: usize) -> Option<Vec<Path>> {
    let mut seen: HashSet<Path> = HashSet::from([p.clone()]);
    let mut order = vec![p.clone()];
    let mut q = VecDeque::from([p.clone()]);
    while let Some(x) = q.pop_front() {
        for y in moves(k, &x) {
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                order.push(y.clone());
                q.push_back(y);
            }
        }
    }
    Some(order)
}

/// Result of searching one arc.
pub struct Search {
    pub all: Vec<Path>,
    /// Representatives with the fewest crossings.
    pub minimal: HashSet<Path>,
    /// Some dead end of the search is not minimal.
    pub stuck: bool,
}

pub fn search(k: &Map, p: &Path, cap: usize) -> Option<Search> {
    let all = reachable(k, p, cap)?;
    let best = all.iter().map(|x| x.letters.len()).min().unwrap();
    let minimal: HashSet<Path> = all.iter().filter(|x| x.letters.len() == best).cloned().collect();
    let stuck = all.iter().any(|x| x.letters.len() > best && moves(k, x).iter().all(|y| y.letters.len() >= x.letters.len()));
    Some(Search { all, minimal, stuck })
}

pub fn has_corners(p: &Path) -> bool {
    matches!((p.start, p.end), (End::Corner(_), End::Corner(_)))
}

/// Isotopy verdict from two searches, either orientation.
pub fn isotopic(a: &Search, b: &Search) -> bool {
    b.minimal.iter().any(|x| a.minimal.contains(x) || a.minimal.contains(&x.reversed()))
}

/// Fewest crossings with carrier edge `e` over every reachable arc.
pub fn crossings(s: &Search, e: usize) -> usize {
    s.all.iter().map(|x| x.crossings_with(e)).min().unwrap()
}
