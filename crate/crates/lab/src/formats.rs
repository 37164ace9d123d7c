//! Plain-text formats for piecewise functions, networks, closure elements and data measures.
//!
//! Numbers are written with Rust's shortest round-trip representation, so every format reads
//! back bit-exactly. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use circnet_core::{
    Arc, ClosureElement, DataMeasure, JTerm, KTerm, PiecewiseTrig, ReluNetwork, SignPattern,
    TrigPiece, Vec2,
};

use crate::error::{LabError, Result};

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(src: &str, line: usize, msg: impl Into<String>) -> LabError {
    LabError::Parse { path: src.to_string(), line, msg: msg.into() }
}

fn numbers(src: &str, line: usize, text: &str, n: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| parse_err(src, line, format!("not a number: {t}"))))
        .collect::<Result<_>>()?;
    if v.len() != n {
        return Err(parse_err(src, line, format!("expected {n} fields, found {}", v.len())));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(parse_err(src, line, format!("non-finite value {x}")));
    }
    Ok(v)
}

fn sign(src: &str, line: usize, x: f64) -> Result<i8> {
    match x {
        1.0 => Ok(1),
        -1.0 => Ok(-1),
        _ => Err(parse_err(src, line, format!("sign {x} is not ±1"))),
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| LabError::io(path, e))
}

/// `.pwt`: one line `start width c0 c1 c2` per piece.
pub fn parse_pwt(text: &str, src: &str) -> Result<PiecewiseTrig> {
    let mut pieces = Vec::new();
    for (ln, l) in content_lines(text) {
        let v = numbers(src, ln, l, 5)?;
        let arc = Arc::new(v[0], v[1]).map_err(|e| parse_err(src, ln, e.to_string()))?;
        pieces.push(TrigPiece { arc, c0: v[2], c1: v[3], c2: v[4] });
    }
    PiecewiseTrig::from_pieces(pieces).map_err(|e| parse_err(src, 0, e.to_string()))
}

pub fn format_pwt(f: &PiecewiseTrig) -> String {
    let mut s = String::new();
    for (start, width, c) in f.segments() {
        writeln!(s, "{start} {width} {} {} {}", c[0], c[1], c[2]).unwrap();
    }
    s
}

/// Network: header `m`, then `m` lines `a w_x w_y`.
pub fn parse_network(text: &str, src: &str) -> Result<ReluNetwork> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_err(src, 0, "empty network file"))?;
    let m: usize = head.parse().map_err(|_| parse_err(src, ln, "header must be the node count"))?;
    let mut signs = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (ln, l) in lines {
        let v = numbers(src, ln, l, 3)?;
        signs.push(sign(src, ln, v[0])?);
        weights.push(Vec2::new(v[1], v[2]));
    }
    if signs.len() != m {
        return Err(parse_err(src, 0, format!("header says {m} nodes, found {}", signs.len())));
    }
    Ok(ReluNetwork::new(SignPattern::new(signs)?, weights)?)
}

pub fn format_network(net: &ReluNetwork) -> String {
    let mut s = format!("{}\n", net.m());
    for (a, w) in net.signs.as_slice().iter().zip(&net.weights) {
        writeln!(s, "{a} {} {}", w.x, w.y).unwrap();
    }
    s
}

/// Closure element: a sign line `a_1 … a_m`, the counts `|J| |K|`, then `|J|` lines
/// `ŵ_x ŵ_y v_x v_y` and `|K|` lines `a w_x w_y`. Vectors are stored at network scale, i.e.
/// the function is `(1/√m)[Σ_J I{ŵ·x ≥ 0}(v·x) + Σ_K a σ(w·x)]`.
pub fn parse_closure(text: &str, src: &str) -> Result<ClosureElement> {
    let mut lines = content_lines(text);
    let (ln, sl) = lines.next().ok_or_else(|| parse_err(src, 0, "empty closure file"))?;
    let signs = sl
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| parse_err(src, ln, format!("not a sign: {t}")))
                .and_then(|x| sign(src, ln, x))
        })
        .collect::<Result<Vec<i8>>>()?;
    let (ln, cl) = lines.next().ok_or_else(|| parse_err(src, 0, "missing term counts"))?;
    let counts: Vec<usize> = cl
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(src, ln, format!("not a count: {t}"))))
        .collect::<Result<_>>()?;
    if counts.len() != 2 {
        return Err(parse_err(src, ln, "counts line must be `|J| |K|`"));
    }
    let mut j = Vec::with_capacity(counts[0]);
    let mut k = Vec::with_capacity(counts[1]);
    for (ln, l) in lines {
        if j.len() < counts[0] {
            let v = numbers(src, ln, l, 4)?;
            j.push(JTerm { w_hat: Vec2::new(v[0], v[1]), v: Vec2::new(v[2], v[3]) });
        } else {
            let v = numbers(src, ln, l, 3)?;
            k.push(KTerm { a: sign(src, ln, v[0])?, w: Vec2::new(v[1], v[2]) });
        }
    }
    if j.len() != counts[0] || k.len() != counts[1] {
        return Err(parse_err(src, 0, format!("expected {} + {} terms", counts[0], counts[1])));
    }
    Ok(ClosureElement::new(SignPattern::new(signs)?, j, k)?)
}

pub fn format_closure(g: &ClosureElement) -> String {
    let signs: Vec<String> = g.signs.as_slice().iter().map(|a| a.to_string()).collect();
    let mut s = format!("{}\n{} {}\n", signs.join(" "), g.j_terms.len(), g.k_terms.len());
    for t in &g.j_terms {
        writeln!(s, "{} {} {} {}", t.w_hat.x, t.w_hat.y, t.v.x, t.v.y).unwrap();
    }
    for t in &g.k_terms {
        writeln!(s, "{} {} {}", t.a, t.w.x, t.w.y).unwrap();
    }
    s
}

/// Discrete measure: one line `angle weight` per atom.
pub fn parse_measure(text: &str, src: &str) -> Result<DataMeasure> {
    let mut atoms = Vec::new();
    for (ln, l) in content_lines(text) {
        let v = numbers(src, ln, l, 2)?;
        atoms.push((v[0], v[1]));
    }
    Ok(DataMeasure::discrete(atoms)?)
}

pub fn format_measure(mu: &DataMeasure) -> String {
    match mu {
        DataMeasure::Uniform => String::new(),
        DataMeasure::Discrete(atoms) => {
            atoms.iter().fold(String::new(), |mut s, (t, w)| {
                writeln!(s, "{t} {w}").unwrap();
                s
            })
        }
    }
}
