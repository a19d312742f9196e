//! Oriented rotation systems on the sphere.
//!
//! Darts come in pairs: edge `e` owns darts `2e` and `2e+1`, and the twin of
//! `d` is `d ^ 1`. `next` is the counterclockwise successor around the origin.
//! The face permutation is `next(twin(d))`; it walks a face clockwise keeping
//! the face on the right, so `face_of(d)` is the face right of `d`.
//!
//! A corner is named by a dart `c`: the sector swept counterclockwise from `c`
//! to `next(c)`. It lies in `face_of(next(c))`.

use std::fmt::Write as _;

use thiserror::Error;

pub type Dart = usize;

#[inline]
pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub fn edge_of(d: Dart) -> usize {
    d >> 1
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphereError {
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
    #[error("not a sphere: euler characteristic {0}")]
    NonSphere(i64),
    #[error("rotation system is disconnected")]
    Disconnected,
    #[error("invalid target: {0}")]
    InvalidTarget(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Map {
    next: Vec<Dart>,
    prev: Vec<Dart>,
    origin: Vec<usize>,
    rot: Vec<Vec<Dart>>,
    marked: Vec<bool>,
    faces: Vec<Vec<Dart>>,
    face_of: Vec<usize>,
    face_pos: Vec<usize>,
}

impl Map {
    /// Builds a map from counterclockwise dart lists, one per vertex. The
    /// darts must be exactly `0..2E`, each listed once.
    pub fn from_rotations(rot: Vec<Vec<Dart>>, marked: Vec<bool>) -> Result<Map, SphereError> {
        let nd: usize = rot.iter().map(|r| r.len()).sum();
        if nd == 0 || nd % 2 != 0 {
            return Err(SphereError::MalformedRotation(format!("{nd} darts")));
        }
        if marked.len() != rot.len() {
            return Err(SphereError::MalformedRotation("marking length".into()));
        }
        let mut next = vec![usize::MAX; nd];
        let mut prev = vec![usize::MAX; nd];
        let mut origin = vec![usize::MAX; nd];
        for (v, r) in rot.iter().enumerate() {
            if r.is_empty() {
                return Err(SphereError::MalformedRotation(format!("isolated vertex {v}")));
            }
            for (i, &d) in r.iter().enumerate() {
                if d >= nd {
                    return Err(SphereError::MalformedRotation(format!("dart {d} out of range")));
                }
                if origin[d] != usize::MAX {
                    return Err(SphereError::MalformedRotation(format!("dart {d} listed twice")));
                }
                origin[d] = v;
                let n = r[(i + 1) % r.len()];
                next[d] = n;
            }
        }
        for d in 0..nd {
            prev[next[d]] = d;
        }
        let mut m = Map {
            next,
            prev,
            origin,
            rot: Vec::new(),
            marked,
            faces: Vec::new(),
            face_of: Vec::new(),
            face_pos: Vec::new(),
        };
        m.rot = m.rotations_from_next();
        if !m.is_connected() {
            return Err(SphereError::Disconnected);
        }
        m.trace();
        let chi = m.euler();
        if chi != 2 {
            return Err(SphereError::NonSphere(chi));
        }
        Ok(m)
    }

    fn rotations_from_next(&self) -> Vec<Vec<Dart>> {
        let nv = self.marked.len();
        let mut first = vec![usize::MAX; nv];
        for d in 0..self.next.len() {
            let v = self.origin[d];
            if first[v] == usize::MAX {
                first[v] = d;
            }
        }
        first
            .iter()
            .map(|&f| {
                let mut r = vec![f];
                let mut d = self.next[f];
                while d != f {
                    r.push(d);
                    d = self.next[d];
                }
                r
            })
            .collect()
    }

    fn is_connected(&self) -> bool {
        let nv = self.marked.len();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &d in &self.rot[v] {
                let w = self.origin[twin(d)];
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == nv
    }

    fn trace(&mut self) {
        let nd = self.next.len();
        self.face_of = vec![usize::MAX; nd];
        self.face_pos = vec![0; nd];
        self.faces.clear();
        for s in 0..nd {
            if self.face_of[s] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut cyc = Vec::new();
            let mut d = s;
            loop {
                self.face_of[d] = f;
                self.face_pos[d] = cyc.len();
                cyc.push(d);
                d = self.phi(d);
                if d == s {
                    break;
                }
            }
            self.faces.push(cyc);
        }
    }

    pub fn num_darts(&self) -> usize {
        self.next.len()
    }
    pub fn num_edges(&self) -> usize {
        self.next.len() / 2
    }
    pub fn num_vertices(&self) -> usize {
        self.marked.len()
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn euler(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    #[inline]
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d]
    }
    #[inline]
    pub fn prev(&self, d: Dart) -> Dart {
        self.prev[d]
    }
    #[inline]
    pub fn origin(&self, d: Dart) -> usize {
        self.origin[d]
    }
    #[inline]
    pub fn head(&self, d: Dart) -> usize {
        self.origin[twin(d)]
    }
    /// Face permutation: the dart after `d` on the face right of `d`.
    #[inline]
    pub fn phi(&self, d: Dart) -> Dart {
        self.next[twin(d)]
    }
    #[inline]
    pub fn phi_inv(&self, d: Dart) -> Dart {
        twin(self.prev[d])
    }
    #[inline]
    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d]
    }
    #[inline]
    pub fn face_pos(&self, d: Dart) -> usize {
        self.face_pos[d]
    }
    /// Face containing corner `c`.
    #[inline]
    pub fn corner_face(&self, c: Dart) -> usize {
        self.face_of[self.next[c]]
    }
    /// Boundary position of corner `c` inside its face. Side `x_i` sits at
    /// `2i`, the corner after it at `2i+1`.
    #[inline]
    pub fn corner_pos(&self, c: Dart) -> usize {
        2 * self.face_pos[twin(c)] + 1
    }
    #[inline]
    pub fn side_pos(&self, x: Dart) -> usize {
        2 * self.face_pos[x]
    }
    pub fn face_len(&self, f: usize) -> usize {
        self.faces[f].len()
    }
    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }
    pub fn face(&self, f: usize) -> &[Dart] {
        &self.faces[f]
    }
    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rot[v]
    }
    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rot
    }
    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }
    pub fn is_marked(&self, v: usize) -> bool {
        self.marked[v]
    }
    pub fn marking(&self) -> &[bool] {
        &self.marked
    }
    pub fn ends(&self, e: usize) -> (usize, usize) {
        (self.origin[2 * e], self.origin[2 * e + 1])
    }
    pub fn is_loop(&self, e: usize) -> bool {
        self.origin[2 * e] == self.origin[2 * e + 1]
    }

    /// Canonical text: one line per vertex with its rotation.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        for (v, r) in self.rot.iter().enumerate() {
            let k = (0..r.len()).min_by_key(|&i| r[i]).unwrap();
            let _ = write!(s, "{v}{}:", if self.marked[v] { "*" } else { "" });
            for i in 0..r.len() {
                let _ = write!(s, " {}", r[(k + i) % r.len()]);
            }
            s.push('\n');
        }
        s
    }

    /// Vertex components of the subgraph formed by the edges in `keep`.
    /// Vertices without kept edges are singletons.
    pub fn components(&self, keep: &[bool]) -> Vec<usize> {
        let nv = self.num_vertices();
        let mut comp = vec![usize::MAX; nv];
        let mut k = 0;
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = k;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &d in &self.rot[v] {
                    if !keep[edge_of(d)] {
                        continue;
                    }
                    let w = self.head(d);
                    if comp[w] == usize::MAX {
                        comp[w] = k;
                        stack.push(w);
                    }
                }
            }
            k += 1;
        }
        comp
    }

    /// Spanning tree by breadth first search from `root`: for each vertex the
    /// dart used to reach it.
    pub fn bfs_tree(&self, root: usize) -> Vec<Option<Dart>> {
        let mut via = vec![None; self.num_vertices()];
        let mut seen = vec![false; self.num_vertices()];
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &d in &self.rot[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        via
    }

    /// Builds a new map from a sparse rotation draft. `None` vertices are
    /// dropped, surviving darts are renumbered pairwise in increasing order.
    /// Returns the map and the old-to-new dart and vertex correspondences.
    pub fn compact(
        draft: &[Option<Vec<Dart>>],
        marked: &[bool],
        num_darts: usize,
    ) -> Result<(Map, Vec<Option<Dart>>, Vec<Option<usize>>), SphereError> {
        let mut alive = vec![false; num_darts];
        for r in draft.iter().flatten() {
            for &d in r {
                alive[d] = true;
            }
        }
        let mut dmap = vec![None; num_darts];
        let mut k = 0;
        for e in 0..num_darts / 2 {
            match (alive[2 * e], alive[2 * e + 1]) {
                (true, true) => {
                    dmap[2 * e] = Some(k);
                    dmap[2 * e + 1] = Some(k + 1);
                    k += 2;
                }
                (false, false) => {}
                _ => return Err(SphereError::MalformedRotation(format!("half of edge {e} missing"))),
            }
        }
        let mut vmap = vec![None; draft.len()];
        let mut rot = Vec::new();
        let mut mk = Vec::new();
        for (v, r) in draft.iter().enumerate() {
            if let Some(r) = r {
                vmap[v] = Some(rot.len());
                rot.push(r.iter().map(|&d| dmap[d].unwrap()).collect());
                mk.push(marked[v]);
            }
        }
        let m = Map::from_rotations(rot, mk)?;
        Ok((m, dmap, vmap))
    }

    pub fn draft(&self) -> Vec<Option<Vec<Dart>>> {
        self.rot.iter().map(|r| Some(r.clone())).collect()
    }
}

/// Edits recorded as a correspondence from old darts to new ones.
#[derive(Debug, Clone)]
pub struct Refined {
    pub map: Map,
    pub darts: Vec<Option<Dart>>,
    pub vertices: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refinement {
    /// New vertex in the middle of an edge.
    Subdivide(usize),
    /// New edge through a face, joining two corners of that face.
    Diagonal(Dart, Dart),
    /// Remove an edge; the map has to stay connected.
    Delete(usize),
}

impl Map {
    fn insert_after(r: &mut Vec<Dart>, after: Dart, d: Dart) {
        let i = r.iter().position(|&x| x == after).unwrap();
        r.insert(i + 1, d);
    }

    pub fn refine(&self, op: Refinement) -> Result<Refined, SphereError> {
        let nd = self.num_darts();
        let mut draft = self.draft();
        let mut marked = self.marked.clone();
        let total = match op {
            Refinement::Subdivide(e) => {
                if e >= self.num_edges() {
                    return Err(SphereError::InvalidTarget(format!("edge {e}")));
                }
                // 2e keeps running from its origin to the new vertex, the new
                // edge finishes the way to the old head
                let (a, b) = (2 * e, 2 * e + 1);
                let w = self.origin[b];
                let (na, nb) = (nd, nd + 1);
                let r = draft[w].as_mut().unwrap();
                let i = r.iter().position(|&x| x == b).unwrap();
                r[i] = nb;
                let _ = a;
                draft.push(Some(vec![b, na]));
                marked.push(false);
                nd + 2
            }
            Refinement::Diagonal(c1, c2) => {
                if c1 >= nd || c2 >= nd || self.corner_face(c1) != self.corner_face(c2) {
                    return Err(SphereError::InvalidTarget("corners in different faces".into()));
                }
                let (u, w) = (self.origin[c1], self.origin[c2]);
                if c1 == c2 {
                    return Err(SphereError::InvalidTarget("same corner".into()));
                }
                Self::insert_after(draft[u].as_mut().unwrap(), c1, nd);
                Self::insert_after(draft[w].as_mut().unwrap(), c2, nd + 1);
                nd + 2
            }
            Refinement::Delete(e) => {
                if e >= self.num_edges() {
                    return Err(SphereError::InvalidTarget(format!("edge {e}")));
                }
                for d in [2 * e, 2 * e + 1] {
                    let v = self.origin[d];
                    let r = draft[v].as_mut().unwrap();
                    r.retain(|&x| x != d);
                    if r.is_empty() {
                        return Err(SphereError::InvalidTarget(format!("edge {e} isolates a vertex")));
                    }
                }
                nd
            }
        };
        let (map, darts, vertices) = Map::compact(&draft, &marked, total)?;
        let mut darts = darts;
        darts.truncate(nd);
        let mut vertices = vertices;
        vertices.truncate(self.num_vertices());
        Ok(Refined { map, darts, vertices })
    }
}

/// All orientation preserving isomorphisms between two connected maps, as dart
/// bijections. Marking has to be respected.
pub fn isomorphisms(a: &Map, b: &Map) -> Vec<Vec<Dart>> {
    let mut out = Vec::new();
    if a.num_darts() != b.num_darts() || a.num_vertices() != b.num_vertices() {
        return out;
    }
    if a.num_darts() == 0 {
        return out;
    }
    for t in 0..b.num_darts() {
        if let Some(f) = propagate(a, b, 0, t) {
            out.push(f);
        }
    }
    out
}

/// Extends `s -> t` along `next` and `twin`. Fails on any clash.
pub fn propagate(a: &Map, b: &Map, s: Dart, t: Dart) -> Option<Vec<Dart>> {
    let nd = a.num_darts();
    let mut f = vec![usize::MAX; nd];
    let mut used = vec![false; nd];
    let mut stack = vec![(s, t)];
    while let Some((x, y)) = stack.pop() {
        if f[x] != usize::MAX {
            if f[x] != y {
                return None;
            }
            continue;
        }
        if used[y] || a.degree(a.origin(x)) != b.degree(b.origin(y)) {
            return None;
        }
        if a.is_marked(a.origin(x)) != b.is_marked(b.origin(y)) {
            return None;
        }
        f[x] = y;
        used[y] = true;
        stack.push((a.next(x), b.next(y)));
        stack.push((twin(x), twin(y)));
    }
    if f.iter().any(|&y| y == usize::MAX) {
        return None;
    }
    Some(f)
}
