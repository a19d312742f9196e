//! Plain text pair files.
//!
//! ```text
//! thurston-pair 1
//! vertices: A B C D
//! edge a: A B
//! link l: C D
//! rotation A: a d
//! curve g1: in f0 cross a+ c-
//! phi: twist g1 -1
//! ```
//!
//! Edges are numbered in the order declared and point from their first
//! endpoint to the second. `a+` crosses edge `a` from its right side to its
//! left side, `a-` the other way. Faces are `f0, f1, ...` in the order of
//! their smallest dart. Rotations list the edge ends at a vertex
//! counterclockwise. `#` starts a comment.

use thiserror::Error;

use thurston::blowup::Pair;
use thurston::isotopy::Word;
use thurston::path::{Curve, End, Path};
use thurston::sphere::{edge_of, twin, Dart, Map};

pub const HEADER: &str = "thurston-pair 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    At { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFile {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub pair: Pair,
    pub curves: Vec<(String, Curve)>,
    /// Twist word as curve indices and powers.
    pub word: Vec<(usize, i64)>,
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain([(line.len(), ' ')]) {
        let sep = ch.is_whitespace() || ch == ':';
        match (start, sep) {
            (None, false) => start = Some(i),
            (Some(s), true) => {
                out.push(Token { text: &line[s..i], col: s + 1 });
                start = None;
            }
            _ => {}
        }
        if ch == ':' && i < line.len() {
            out.push(Token { text: ":", col: i + 1 });
        }
    }
    out
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

struct Parser {
    vertices: Vec<String>,
    edges: Vec<(String, usize, usize, bool)>,
    rot: Vec<Option<Vec<Dart>>>,
    word: Vec<(usize, i64)>,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError::At { line, col, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<PairFile, ParseError> {
    let mut p = Parser { vertices: Vec::new(), edges: Vec::new(), rot: Vec::new(), word: Vec::new() };
    let mut seen_header = false;
    let mut phi_line: Option<(usize, Vec<(String, usize)>)> = None;
    let mut curve_lines: Vec<(usize, String, Vec<(String, usize)>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap();
        let t = tokens(line);
        if t.is_empty() {
            continue;
        }
        if !seen_header {
            if line.trim() != HEADER {
                return Err(err(ln, t[0].col, format!("expected `{HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        let colon = |j: usize| -> Result<(), ParseError> {
            match t.get(j) {
                Some(x) if x.text == ":" => Ok(()),
                Some(x) => Err(err(ln, x.col, "expected `:`")),
                None => Err(err(ln, line.len() + 1, "expected `:`")),
            }
        };
        match t[0].text {
            "vertices" => {
                colon(1)?;
                if !p.vertices.is_empty() {
                    return Err(err(ln, t[0].col, "vertices declared twice"));
                }
                for x in &t[2..] {
                    if !is_name(x.text) || p.vertices.iter().any(|v| v == x.text) {
                        return Err(err(ln, x.col, format!("bad or repeated vertex `{}`", x.text)));
                    }
                    p.vertices.push(x.text.to_string());
                }
                p.rot = vec![None; p.vertices.len()];
            }
            "edge" | "link" => {
                if t.len() != 5 {
                    return Err(err(ln, t[0].col, "expected `edge <name>: <from> <to>`"));
                }
                colon(2)?;
                let name = t[1].text;
                if !is_name(name) || p.edges.iter().any(|e| e.0 == name) {
                    return Err(err(ln, t[1].col, format!("bad or repeated edge `{name}`")));
                }
                let a = vertex(&p, &t[3], ln)?;
                let b = vertex(&p, &t[4], ln)?;
                if a == b {
                    return Err(err(ln, t[4].col, "loops are not allowed"));
                }
                p.edges.push((name.to_string(), a, b, t[0].text == "edge"));
            }
            "rotation" => {
                if t.len() < 3 {
                    return Err(err(ln, t[0].col, "expected `rotation <vertex>: <edge> ...`"));
                }
                colon(2)?;
                let v = vertex(&p, &t[1], ln)?;
                if p.rot[v].is_some() {
                    return Err(err(ln, t[1].col, "rotation given twice"));
                }
                let mut r = Vec::new();
                for x in &t[3..] {
                    let Some(e) = p.edges.iter().position(|e| e.0 == x.text) else {
                        return Err(err(ln, x.col, format!("unknown edge `{}`", x.text)));
                    };
                    let (_, a, b, _) = p.edges[e];
                    let d = if a == v {
                        2 * e
                    } else if b == v {
                        2 * e + 1
                    } else {
                        return Err(err(ln, x.col, format!("edge `{}` does not end at this vertex", x.text)));
                    };
                    if r.contains(&d) {
                        return Err(err(ln, x.col, format!("edge end `{}` listed twice", x.text)));
                    }
                    r.push(d);
                }
                p.rot[v] = Some(r);
            }
            "curve" => {
                colon(2)?;
                let name = t[1].text;
                if !is_name(name) || curve_lines.iter().any(|c| c.1 == name) {
                    return Err(err(ln, t[1].col, format!("bad or repeated curve `{name}`")));
                }
                curve_lines.push((ln, name.to_string(), t[3..].iter().map(|x| (x.text.to_string(), x.col)).collect()));
            }
            "phi" => {
                colon(1)?;
                if phi_line.is_some() {
                    return Err(err(ln, t[0].col, "phi given twice"));
                }
                phi_line = Some((ln, t[2..].iter().map(|x| (x.text.to_string(), x.col)).collect()));
            }
            other => return Err(err(ln, t[0].col, format!("unknown key `{other}`"))),
        }
    }
    if !seen_header {
        return Err(ParseError::Invalid(format!("missing `{HEADER}`")));
    }
    if p.edges.is_empty() {
        return Err(ParseError::Invalid("no edges".into()));
    }
    let mut rot = Vec::new();
    for (v, r) in p.rot.iter().enumerate() {
        let Some(r) = r else {
            return Err(ParseError::Invalid(format!("vertex `{}` has no rotation", p.vertices[v])));
        };
        rot.push(r.clone());
    }
    for (e, (name, a, b, _)) in p.edges.iter().enumerate() {
        if !rot[*a].contains(&(2 * e)) || !rot[*b].contains(&(2 * e + 1)) {
            return Err(ParseError::Invalid(format!("edge `{name}` is missing from a rotation")));
        }
    }
    let k = Map::from_rotations(rot, vec![true; p.vertices.len()])
        .map_err(|e| ParseError::Invalid(format!("not a map of the sphere: {e}")))?;
    let in_g = p.edges.iter().map(|e| e.3).collect();
    let mut curves = Vec::new();
    for (ln, name, toks) in curve_lines {
        curves.push((name, curve(&k, &p, ln, &toks)?));
    }
    if let Some((ln, toks)) = phi_line {
        let mut i = 0;
        while i < toks.len() {
            let (kw, col) = &toks[i];
            if kw != "twist" {
                return Err(err(ln, *col, "expected `twist`"));
            }
            let Some((c, ccol)) = toks.get(i + 1) else { return Err(err(ln, *col, "expected a curve")) };
            let Some(ci) = curves.iter().position(|x| &x.0 == c) else {
                return Err(err(ln, *ccol, format!("unknown curve `{c}`")));
            };
            let Some((n, ncol)) = toks.get(i + 2) else { return Err(err(ln, *ccol, "expected a power")) };
            let n: i64 = n.parse().map_err(|_| err(ln, *ncol, format!("bad power `{n}`")))?;
            p.word.push((ci, n));
            i += 3;
        }
    }
    let phi = Word { letters: p.word.iter().map(|&(c, n)| (curves[c].1.clone(), n)).collect() };
    Ok(PairFile {
        vertices: p.vertices,
        edges: p.edges.into_iter().map(|e| e.0).collect(),
        pair: Pair::new(k, in_g, phi),
        curves,
        word: p.word,
    })
}

fn vertex(p: &Parser, t: &Token, ln: usize) -> Result<usize, ParseError> {
    p.vertices.iter().position(|v| v == t.text).ok_or_else(|| err(ln, t.col, format!("unknown vertex `{}`", t.text)))
}

fn face_name(f: usize) -> String {
    format!("f{f}")
}

fn curve(k: &Map, p: &Parser, ln: usize, toks: &[(String, usize)]) -> Result<Curve, ParseError> {
    let col0 = toks.first().map(|t| t.1).unwrap_or(1);
    if toks.len() < 4 || toks[0].0 != "in" || toks[2].0 != "cross" {
        return Err(err(ln, col0, "expected `in <face> cross <edge>+ ...`"));
    }
    let face = (0..k.num_faces())
        .find(|&f| face_name(f) == toks[1].0)
        .ok_or_else(|| err(ln, toks[1].1, format!("unknown face `{}`", toks[1].0)))?;
    let mut letters = Vec::new();
    for (x, col) in &toks[3..] {
        let (name, sign) = x.split_at(x.len().saturating_sub(1));
        let e = p.edges.iter().position(|e| e.0 == name);
        let d = match (e, sign) {
            (Some(e), "+") => 2 * e,
            (Some(e), "-") => 2 * e + 1,
            _ => return Err(err(ln, *col, format!("expected a signed edge, got `{x}`"))),
        };
        letters.push(d);
    }
    let c = Curve { letters };
    if k.face_of(c.letters[0]) != face {
        return Err(err(ln, toks[1].1, "the first crossing does not leave this face"));
    }
    if !c.is_consistent(k) {
        return Err(err(ln, col0, "crossings do not follow the faces"));
    }
    Ok(c)
}

fn letter(names: &[String], d: Dart) -> String {
    format!("{}{}", names[edge_of(d)], if d % 2 == 0 { "+" } else { "-" })
}

pub fn curve_text(k: &Map, edges: &[String], c: &Curve) -> String {
    if c.letters.is_empty() {
        return "in f0 cross".into();
    }
    let l: Vec<String> = c.letters.iter().map(|&d| letter(edges, d)).collect();
    format!("in {} cross {}", face_name(k.face_of(c.letters[0])), l.join(" "))
}

/// Human readable arc: start vertex and corner, crossings, end.
pub fn path_text(k: &Map, vertices: &[String], edges: &[String], p: &Path) -> String {
    let end = |e: End| -> String {
        let c = e.corner();
        let v = &vertices[k.origin(c)];
        match e {
            End::Corner(_) => format!("{v}<{}", edges[edge_of(c)]),
            End::Point(_) => format!("point in {}", face_name(k.corner_face(c))),
        }
    };
    let l: Vec<String> = p.letters.iter().map(|&d| letter(edges, d)).collect();
    if l.is_empty() {
        format!("{} -> {}", end(p.start), end(p.end))
    } else {
        format!("{} -> {} -> {}", end(p.start), l.join(" "), end(p.end))
    }
}

pub fn serialize(f: &PairFile) -> String {
    let k = &f.pair.k;
    let mut s = String::new();
    s.push_str(HEADER);
    s.push('\n');
    s.push_str(&format!("vertices: {}\n", f.vertices.join(" ")));
    for (e, name) in f.edges.iter().enumerate() {
        let (a, b) = (k.origin(2 * e), k.origin(twin(2 * e)));
        let kw = if f.pair.in_g[e] { "edge" } else { "link" };
        s.push_str(&format!("{kw} {name}: {} {}\n", f.vertices[a], f.vertices[b]));
    }
    for (v, name) in f.vertices.iter().enumerate() {
        let r: Vec<&str> = k.rotation(v).iter().map(|&d| f.edges[edge_of(d)].as_str()).collect();
        s.push_str(&format!("rotation {name}: {}\n", r.join(" ")));
    }
    for (name, c) in &f.curves {
        s.push_str(&format!("curve {name}: {}\n", curve_text(k, &f.edges, c)));
    }
    if !f.word.is_empty() {
        let w: Vec<String> = f.word.iter().map(|&(c, n)| format!("twist {} {n}", f.curves[c].0)).collect();
        s.push_str(&format!("phi: {}\n", w.join(" ")));
    }
    s
}

/// File for a pair built by the library, with generated edge names.
pub fn from_pair(pair: &Pair, vertices: &[String], curves: Vec<(String, Curve)>) -> PairFile {
    let k = &pair.k;
    let (mut ne, mut nl) = (0, 0);
    let edges = (0..k.num_edges())
        .map(|e| {
            if pair.in_g[e] {
                ne += 1;
                format!("e{}", ne - 1)
            } else {
                nl += 1;
                format!("l{}", nl - 1)
            }
        })
        .collect();
    let mut curves = curves;
    let mut word = Vec::new();
    for (c, n) in &pair.phi.letters {
        let i = match curves.iter().position(|x| &x.1 == c) {
            Some(i) => i,
            None => {
                curves.push((format!("c{}", curves.len()), c.clone()));
                curves.len() - 1
            }
        };
        word.push((i, *n));
    }
    PairFile { vertices: vertices.to_vec(), edges, pair: pair.clone(), curves, word }
}
