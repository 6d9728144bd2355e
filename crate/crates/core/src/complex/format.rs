//! Text formats for complexes, collapse sequences and generator traces.
//!
//! ```text
//! ground 3
//! facet 0,1
//! facet 1,2
//! label 0 0 1
//!
//! d 2
//! step 2 sigma 0,1 facet 0,1
//!
//! iter 0 nbar 1/1 ebar 0,1 eps 1/12 eplus - eta 0/1 power 0
//! weights 0 a 1/1,1/1 b 1/1,1/1
//! ```
//!
//! Faces are comma-separated element lists, `-` for the empty face. Lines
//! starting with `%` are comments.

use std::fmt::Write;

use super::{CollapseSequence, CollapseStep, ComplexError, CollapseTrace, Face, SimplicialComplex};
use crate::rational::Rational;

fn parse_err(line: usize, msg: impl Into<String>) -> ComplexError {
    ComplexError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_face(line: usize, tok: Option<&str>) -> Result<Face, ComplexError> {
    let tok = tok.ok_or_else(|| parse_err(line, "missing face"))?;
    tok.parse().map_err(|e: String| parse_err(line, e))
}

fn parse_usize(line: usize, tok: Option<&str>, what: &str) -> Result<usize, ComplexError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

fn expect(line: usize, tok: Option<&str>, word: &str) -> Result<(), ComplexError> {
    match tok {
        Some(t) if t == word => Ok(()),
        other => Err(parse_err(line, format!("expected `{word}`, found {other:?}"))),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'))
}

/// Writes `x`, with `(element, copy)` labels if given.
pub fn write_complex(x: &SimplicialComplex, labels: Option<&[(usize, usize)]>) -> String {
    let mut out = format!("ground {}\n", x.ground_size());
    for f in x.facets() {
        writeln!(out, "facet {f}").unwrap();
    }
    for (i, (v, c)) in labels.unwrap_or_default().iter().enumerate() {
        writeln!(out, "label {i} {v} {c}").unwrap();
    }
    out
}

/// Reads a complex; `label` lines are accepted and ignored.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex, ComplexError> {
    let mut ground = None;
    let mut facets = Vec::new();
    for (line, l) in content_lines(text) {
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("ground") => ground = Some(parse_usize(line, toks.next(), "ground size")?),
            Some("facet") => facets.push((line, parse_face(line, toks.next())?)),
            Some("label") => continue,
            Some(other) => return Err(parse_err(line, format!("unknown directive `{other}`"))),
            None => unreachable!("blank lines are skipped"),
        }
        if let Some(extra) = toks.next() {
            return Err(parse_err(line, format!("unexpected `{extra}`")));
        }
    }
    let ground = ground.ok_or_else(|| parse_err(0, "missing `ground` line"))?;
    for &(line, f) in &facets {
        if f.span() > ground {
            return Err(parse_err(line, format!("facet {f} leaves the ground set")));
        }
    }
    SimplicialComplex::new(ground, facets.into_iter().map(|(_, f)| f))
}

pub fn write_sequence(seq: &CollapseSequence) -> String {
    let mut out = format!("d {}\n", seq.d);
    for s in &seq.steps {
        writeln!(out, "step {} sigma {} facet {}", seq.d, s.sigma, s.facet).unwrap();
    }
    out
}

/// Reads a sequence, skipping trace lines so that the combined output of the
/// generator can be read back directly.
pub fn parse_sequence(text: &str) -> Result<CollapseSequence, ComplexError> {
    let mut d: Option<usize> = None;
    let mut steps = Vec::new();
    for (line, l) in content_lines(text) {
        let mut toks = l.split_whitespace();
        let step_d = match toks.next() {
            Some("iter") | Some("weights") => continue,
            Some("d") => parse_usize(line, toks.next(), "d")?,
            Some("step") => {
                let k = parse_usize(line, toks.next(), "d")?;
                expect(line, toks.next(), "sigma")?;
                let sigma = parse_face(line, toks.next())?;
                expect(line, toks.next(), "facet")?;
                let facet = parse_face(line, toks.next())?;
                steps.push(CollapseStep { sigma, facet });
                k
            }
            Some(other) => return Err(parse_err(line, format!("unknown directive `{other}`"))),
            None => unreachable!("blank lines are skipped"),
        };
        if let Some(extra) = toks.next() {
            return Err(parse_err(line, format!("unexpected `{extra}`")));
        }
        match d {
            Some(prev) if prev != step_d => {
                return Err(parse_err(line, format!("d = {step_d} conflicts with d = {prev}")))
            }
            _ => d = Some(step_d),
        }
    }
    let d = d.ok_or_else(|| parse_err(0, "no `d` line and no steps"))?;
    Ok(CollapseSequence { d, steps })
}

fn write_list(out: &mut String, values: &[Rational]) {
    if values.is_empty() {
        out.push('-');
    }
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{v}").unwrap();
    }
}

pub fn write_trace(trace: &CollapseTrace) -> String {
    let mut out = String::new();
    for (t, it) in trace.iterations.iter().enumerate() {
        let eps = it
            .epsilon
            .as_ref()
            .map_or_else(|| "-".to_string(), |e| e.to_string());
        writeln!(
            out,
            "iter {t} nbar {} ebar {} eps {eps} eplus {} eta {} power {}",
            it.nbar, it.ebar, it.eplus, it.eta, it.eta_power
        )
        .unwrap();
        write!(out, "weights {t} a ").unwrap();
        write_list(&mut out, &it.edge_weights);
        out.push_str(" b ");
        write_list(&mut out, &it.vertex_weights);
        out.push('\n');
    }
    out
}
