//! Line-oriented instance files.
//!
//! ```text
//! % comment
//! r 2
//! v 5
//! partition 0 1 0 1 0        (optional)
//! color A
//! e 0 1
//! e 1 2
//! color B
//! e 0 1
//! wa 1 3/2                   (edge weight, default 1/1)
//! wb 4 2                     (vertex weight, default 1/1)
//! ```
//!
//! Edges listed before the first `color` line belong to a color named `0`.
//! Hypergraph edge indices follow first appearance in the file, and `wa`
//! refers to those indices.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{ColoredFamily, CoreError, EdgeSet, Hypergraph, WeightSystem};
use crate::rational::{ParseRationalError, Rational};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Rational {
        line: usize,
        source: ParseRationalError,
    },
    #[error("missing `{0}` header line")]
    MissingHeader(&'static str),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A colored family together with its weights and color names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    hypergraph: Hypergraph,
    color_names: Vec<String>,
    colors: Vec<EdgeSet>,
    weights: WeightSystem,
}

impl Instance {
    pub fn new(
        hypergraph: Hypergraph,
        color_names: Vec<String>,
        colors: Vec<EdgeSet>,
        weights: WeightSystem,
    ) -> Result<Self, InstanceError> {
        if color_names.len() != colors.len() {
            return Err(InstanceError::Syntax {
                line: 0,
                msg: format!("{} color names for {} colors", color_names.len(), colors.len()),
            });
        }
        for c in &colors {
            hypergraph.check_edge_set(c)?;
        }
        if weights.edge_weights().len() != hypergraph.edge_count()
            || weights.vertex_weights().len() != hypergraph.vertex_count()
        {
            return Err(CoreError::WeightLength {
                what: "instance",
                len: weights.edge_weights().len(),
                expected: hypergraph.edge_count(),
            }
            .into());
        }
        Ok(Instance {
            hypergraph,
            color_names,
            colors,
            weights,
        })
    }

    /// Unit-weight instance with colors named `0`, `1`, ...
    pub fn from_family(family: &ColoredFamily) -> Self {
        let h = family.hypergraph().clone();
        let weights = WeightSystem::unit(&h);
        Instance {
            color_names: (0..family.color_count()).map(|i| i.to_string()).collect(),
            colors: family.colors().to_vec(),
            hypergraph: h,
            weights,
        }
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn colors(&self) -> &[EdgeSet] {
        &self.colors
    }

    pub fn color_names(&self) -> &[String] {
        &self.color_names
    }

    pub fn family(&self) -> Result<ColoredFamily, CoreError> {
        ColoredFamily::new_allow_empty(self.hypergraph.clone(), self.colors.clone())
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        Parser::default().run(text)
    }

    /// Canonical text. Edges are written with sorted vertices, one `color`
    /// block per color, then non-unit weights; edges that belong to no color
    /// are dropped and `wa` indices are renumbered by first appearance.
    pub fn to_text(&self) -> String {
        let h = &self.hypergraph;
        let mut out = String::new();
        let _ = writeln!(out, "r {}", h.uniformity());
        let _ = writeln!(out, "v {}", h.vertex_count());
        if let Some(p) = h.partition() {
            out.push_str("partition");
            for s in p {
                let _ = write!(out, " {s}");
            }
            out.push('\n');
        }
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        for (name, color) in self.color_names.iter().zip(&self.colors) {
            let _ = writeln!(out, "color {name}");
            for e in color.iter() {
                let next = renumber.len();
                renumber.entry(e).or_insert(next);
                out.push('e');
                for v in h.edge(e) {
                    let _ = write!(out, " {v}");
                }
                out.push('\n');
            }
        }
        let mut wa: Vec<(usize, &Rational)> = renumber
            .iter()
            .map(|(&old, &new)| (new, self.weights.edge_weight(old)))
            .filter(|(_, w)| **w != Rational::one())
            .collect();
        wa.sort_by_key(|&(i, _)| i);
        for (i, w) in wa {
            let _ = writeln!(out, "wa {i} {w}");
        }
        for (v, w) in self.weights.vertex_weights().iter().enumerate() {
            if *w != Rational::one() {
                let _ = writeln!(out, "wb {v} {w}");
            }
        }
        out
    }
}

#[derive(Default)]
struct Parser {
    uniformity: Option<usize>,
    vertex_count: Option<usize>,
    partition: Option<Vec<usize>>,
    names: Vec<String>,
    members: Vec<Vec<usize>>,
    edge_index: HashMap<Vec<usize>, usize>,
    edges: Vec<Vec<usize>>,
    wa: Vec<(usize, usize, Rational)>,
    wb: Vec<(usize, usize, Rational)>,
}

fn syntax(line: usize, msg: impl Into<String>) -> InstanceError {
    InstanceError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(line: usize, tok: Option<&str>, what: &str) -> Result<usize, InstanceError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

fn parse_rational(line: usize, tok: Option<&str>) -> Result<Rational, InstanceError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing weight"))?;
    tok.parse()
        .map_err(|source| InstanceError::Rational { line, source })
}

impl Parser {
    fn run(mut self, text: &str) -> Result<Instance, InstanceError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let mut toks = trimmed.split_whitespace();
            let key = toks.next().unwrap_or_default();
            match key {
                "r" => self.uniformity = Some(parse_usize(line, toks.next(), "uniformity")?),
                "v" => self.vertex_count = Some(parse_usize(line, toks.next(), "vertex count")?),
                "partition" => {
                    let sides = toks
                        .map(|t| parse_usize(line, Some(t), "side"))
                        .collect::<Result<Vec<_>, _>>()?;
                    self.partition = Some(sides);
                    continue;
                }
                "color" => {
                    let name = toks.next().ok_or_else(|| syntax(line, "missing color name"))?;
                    self.names.push(name.to_string());
                    self.members.push(Vec::new());
                }
                "e" => {
                    let r = self.uniformity.ok_or(InstanceError::MissingHeader("r"))?;
                    let vc = self.vertex_count.ok_or(InstanceError::MissingHeader("v"))?;
                    let verts = toks
                        .by_ref()
                        .map(|t| parse_usize(line, Some(t), "vertex"))
                        .collect::<Result<Vec<_>, _>>()?;
                    // validate through a one-edge hypergraph for uniform errors
                    let edge = Hypergraph::new(vc, r, vec![verts])?.edges()[0].clone();
                    let next = self.edges.len();
                    let id = *self.edge_index.entry(edge.clone()).or_insert(next);
                    if id == next {
                        self.edges.push(edge);
                    }
                    if self.members.is_empty() {
                        self.names.push("0".to_string());
                        self.members.push(Vec::new());
                    }
                    let color = self.members.last_mut().expect("color present");
                    if color.contains(&id) {
                        return Err(syntax(line, "edge repeated within one color"));
                    }
                    color.push(id);
                    continue;
                }
                "wa" => {
                    let e = parse_usize(line, toks.next(), "edge index")?;
                    let w = parse_rational(line, toks.next())?;
                    self.wa.push((line, e, w));
                }
                "wb" => {
                    let v = parse_usize(line, toks.next(), "vertex")?;
                    let w = parse_rational(line, toks.next())?;
                    self.wb.push((line, v, w));
                }
                other => return Err(syntax(line, format!("unknown directive `{other}`"))),
            }
            if let Some(extra) = toks.next() {
                return Err(syntax(line, format!("unexpected token `{extra}`")));
            }
        }
        let r = self.uniformity.ok_or(InstanceError::MissingHeader("r"))?;
        let vc = self.vertex_count.ok_or(InstanceError::MissingHeader("v"))?;
        let mut h = Hypergraph::new(vc, r, self.edges)?;
        if let Some(p) = self.partition {
            h = h.with_partition(p)?;
        }
        let mut weights = WeightSystem::unit(&h);
        for (line, e, w) in self.wa {
            if e >= h.edge_count() {
                return Err(syntax(line, format!("edge index {e} out of range")));
            }
            weights
                .set_edge_weight(e, w)
                .map_err(|err| syntax(line, err.to_string()))?;
        }
        for (line, v, w) in self.wb {
            if v >= vc {
                return Err(syntax(line, format!("vertex {v} out of range")));
            }
            weights
                .set_vertex_weight(v, w)
                .map_err(|err| syntax(line, err.to_string()))?;
        }
        let colors = self
            .members
            .into_iter()
            .map(EdgeSet::new)
            .collect::<Result<Vec<_>, _>>()?;
        Instance::new(h, self.names, colors, weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CANONICAL: &str = "\
r 2
v 4
partition 0 1 0 1
color A
e 0 1
e 2 3
color B
e 1 2
e 0 3
color C
e 0 1
wa 2 3/2
wb 3 1/3
";

    #[test]
    fn canonical_text_round_trips_byte_for_byte() {
        let inst = Instance::parse(CANONICAL).unwrap();
        assert_eq!(inst.to_text(), CANONICAL);
        assert_eq!(inst.colors().len(), 3);
        assert_eq!(inst.hypergraph().edge_count(), 4);
        assert_eq!(inst.weights().edge_weight(2), &Rational::new(3, 2));
        assert_eq!(inst.colors()[2].as_slice(), &[0]);
    }

    #[test]
    fn edges_before_color_belong_to_color_zero() {
        let inst = Instance::parse("% tri\nr 2\nv 3\ne 1 0\ne 1 2\ne 2 0\n").unwrap();
        assert_eq!(inst.color_names(), &["0".to_string()]);
        assert_eq!(inst.hypergraph().edges(), &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(inst.to_text(), "r 2\nv 3\ncolor 0\ne 0 1\ne 1 2\ne 0 2\n");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Instance::parse("v 3\ne 0 1\n"),
            Err(InstanceError::MissingHeader("r"))
        ));
        assert!(matches!(
            Instance::parse("r 2\nv 3\ne 0 1 2\n"),
            Err(InstanceError::Core(CoreError::EdgeSize { .. }))
        ));
        assert!(Instance::parse("r 2\nv 3\ne 0 1\ne 1 0\n").is_err());
        assert!(Instance::parse("r 2\nv 2\npartition 0 0\ne 0 1\n").is_err());
        assert!(Instance::parse("r 2\nv 2\ne 0 1\nwa 0 0\n").is_err());
        assert!(Instance::parse("r 2\nv 2\ne 0 1\nwb 0 1/0\n").is_err());
        assert!(Instance::parse("r 2\nv 2\nbogus\n").is_err());
    }

    fn arb_instance() -> impl Strategy<Value = Instance> {
        (2usize..4, 0usize..4).prop_flat_map(|(r, extra)| {
            let v = r + extra;
            let edge = prop::sample::subsequence((0..v).collect::<Vec<_>>(), r);
            let color = prop::collection::vec(edge, 0..4);
            let colors = prop::collection::vec(color, 1..4);
            let weights = prop::collection::vec((1i64..5, 1i64..5), 32);
            (Just(r), Just(v), colors, weights).prop_map(|(r, v, colors, weights)| {
                let lists: Vec<Vec<Vec<usize>>> = colors
                    .into_iter()
                    .map(|mut c| {
                        c.sort();
                        c.dedup();
                        c
                    })
                    .collect();
                let mut names = Vec::new();
                let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
                let mut edges = Vec::new();
                let mut sets = Vec::new();
                for (i, list) in lists.into_iter().enumerate() {
                    names.push(format!("c{i}"));
                    let mut ids = Vec::new();
                    for e in list {
                        let next = edges.len();
                        let id = *index.entry(e.clone()).or_insert(next);
                        if id == next {
                            edges.push(e);
                        }
                        ids.push(id);
                    }
                    sets.push(EdgeSet::new(ids).unwrap());
                }
                let h = Hypergraph::new(v, r, edges).unwrap();
                let mut w = WeightSystem::unit(&h);
                for e in 0..h.edge_count() {
                    let (p, q) = weights[e];
                    w.set_edge_weight(e, Rational::new(p, q)).unwrap();
                }
                for vv in 0..v {
                    let (p, q) = weights[16 + vv];
                    w.set_vertex_weight(vv, Rational::new(p, q)).unwrap();
                }
                Instance::new(h, names, sets, w).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_parse_is_identity(inst in arb_instance()) {
            let text = inst.to_text();
            let back = Instance::parse(&text).unwrap();
            prop_assert_eq!(back.to_text(), text);
            prop_assert_eq!(back, inst);
        }
    }
}
