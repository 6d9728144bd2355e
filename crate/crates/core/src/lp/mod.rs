//! Weighted fractional matching and cover programs.
//!
//! For an edge set `E'` with weights `a` on edges and `b` on vertices:
//!
//! ```text
//! ν*_{a,b}(E') = max Σ_{e∈E'} a_e f(e)   s.t. Σ_{e∋v} f(e) ≤ b_v,  f ≥ 0
//! τ*_{a,b}(E') = min Σ_{v∈V}  b_v g(v)   s.t. Σ_{v∈e} g(v) ≥ a_e,  g ≥ 0
//! ```
//!
//! Both values are computed exactly and every result carries a primal and a
//! dual certificate that are re-checked before being returned.

pub mod simplex;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::hypergraph::{CoreError, EdgeSet, Hypergraph, WeightSystem};
use crate::rational::Rational;
use simplex::{LinearProgram, Outcome, Relation, Sense};

#[derive(Debug, Error)]
pub enum LpError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("edge set of size {size} exceeds the exhaustive limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("unexpected solver outcome: {0}")]
    Solver(&'static str),
}

/// Edge values `f(e)` of a fractional matching; absent edges are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalMatching {
    pub values: BTreeMap<usize, Rational>,
    pub size: Rational,
}

impl FractionalMatching {
    pub fn value(&self, e: usize) -> Rational {
        self.values.get(&e).cloned().unwrap_or_default()
    }

    /// Edges with `f(e) > 0`.
    pub fn support(&self) -> EdgeSet {
        EdgeSet::collect_from(
            self.values
                .iter()
                .filter(|(_, v)| v.is_positive())
                .map(|(&e, _)| e),
        )
    }

    /// `Σ_{e∋v} f(e)` for every vertex.
    pub fn loads(&self, h: &Hypergraph) -> Vec<Rational> {
        let mut load = vec![Rational::zero(); h.vertex_count()];
        for (&e, f) in &self.values {
            if f.is_zero() {
                continue;
            }
            for &v in h.edge(e) {
                load[v] += f;
            }
        }
        load
    }
}

/// Vertex values `g(v)` of a fractional cover, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalCover {
    pub values: Vec<Rational>,
    pub size: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub value: Rational,
    pub primal: FractionalMatching,
    pub dual: FractionalCover,
}

/// Outcome of [`dual_is_unique`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualUniqueness {
    Unique(FractionalCover),
    /// Two distinct optimal covers.
    NotUnique(FractionalCover, FractionalCover),
}

impl DualUniqueness {
    pub fn is_unique(&self) -> bool {
        matches!(self, DualUniqueness::Unique(_))
    }
}

/// Maximum weighted fractional matching supported on `edges`.
pub fn nu_star(h: &Hypergraph, edges: &EdgeSet, w: &WeightSystem) -> Result<LpResult, LpError> {
    h.check_edge_set(edges)?;
    if edges.is_empty() {
        return Ok(empty_result(h));
    }
    let touched = h.touched_vertices(edges);
    let row_of = row_index(h, &touched);
    let objective: Vec<Rational> = edges.iter().map(|e| w.edge_weight(e).clone()).collect();
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    let mut rows = vec![vec![Rational::zero(); edges.len()]; touched.len()];
    for (j, e) in edges.iter().enumerate() {
        for &v in h.edge(e) {
            rows[row_of[v]][j] = Rational::one();
        }
    }
    for (row, &v) in rows.into_iter().zip(&touched) {
        lp.add(row, Relation::LessEq, w.vertex_weight(v).clone());
    }
    let sol = match lp.solve() {
        Outcome::Optimal(s) => s,
        Outcome::Infeasible => return Err(LpError::Solver("matching program infeasible")),
        Outcome::Unbounded => return Err(LpError::Solver("matching program unbounded")),
    };
    let primal = matching_from(edges, sol.x, w);
    let mut cover = vec![Rational::zero(); h.vertex_count()];
    for (y, &v) in sol.duals.into_iter().zip(&touched) {
        cover[v] = y;
    }
    finish(h, edges, w, sol.value, primal, cover)
}

/// Minimum weighted fractional cover of `edges`, solved as its own program;
/// the matching certificate is read off that program's multipliers.
pub fn tau_star(h: &Hypergraph, edges: &EdgeSet, w: &WeightSystem) -> Result<LpResult, LpError> {
    h.check_edge_set(edges)?;
    if edges.is_empty() {
        return Ok(empty_result(h));
    }
    let touched = h.touched_vertices(edges);
    let col_of = row_index(h, &touched);
    let objective: Vec<Rational> = touched.iter().map(|&v| w.vertex_weight(v).clone()).collect();
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for e in edges.iter() {
        let mut row = vec![Rational::zero(); touched.len()];
        for &v in h.edge(e) {
            row[col_of[v]] = Rational::one();
        }
        lp.add(row, Relation::GreaterEq, w.edge_weight(e).clone());
    }
    let sol = match lp.solve() {
        Outcome::Optimal(s) => s,
        Outcome::Infeasible => return Err(LpError::Solver("cover program infeasible")),
        Outcome::Unbounded => return Err(LpError::Solver("cover program unbounded")),
    };
    let mut cover = vec![Rational::zero(); h.vertex_count()];
    for (g, &v) in sol.x.into_iter().zip(&touched) {
        cover[v] = g;
    }
    let primal = matching_from(edges, sol.duals, w);
    finish(h, edges, w, sol.value, primal, cover)
}

fn empty_result(h: &Hypergraph) -> LpResult {
    LpResult {
        value: Rational::zero(),
        primal: FractionalMatching {
            values: BTreeMap::new(),
            size: Rational::zero(),
        },
        dual: FractionalCover {
            values: vec![Rational::zero(); h.vertex_count()],
            size: Rational::zero(),
        },
    }
}

fn row_index(h: &Hypergraph, touched: &[usize]) -> Vec<usize> {
    let mut idx = vec![usize::MAX; h.vertex_count()];
    for (i, &v) in touched.iter().enumerate() {
        idx[v] = i;
    }
    idx
}

fn matching_from(edges: &EdgeSet, values: Vec<Rational>, w: &WeightSystem) -> FractionalMatching {
    let values: BTreeMap<usize, Rational> = edges.iter().zip(values).collect();
    let size = values.iter().map(|(&e, f)| w.edge_weight(e) * f).sum();
    FractionalMatching { values, size }
}

fn finish(
    h: &Hypergraph,
    edges: &EdgeSet,
    w: &WeightSystem,
    value: Rational,
    primal: FractionalMatching,
    cover: Vec<Rational>,
) -> Result<LpResult, LpError> {
    let size = cover
        .iter()
        .enumerate()
        .map(|(v, g)| w.vertex_weight(v) * g)
        .sum();
    let result = LpResult {
        value,
        primal,
        dual: FractionalCover {
            values: cover,
            size,
        },
    };
    check_certificates(h, edges, w, &result).map_err(LpError::Certificate)?;
    Ok(result)
}

/// Verifies primal and dual feasibility, zero duality gap and complementary
/// slackness, all exactly.
pub fn check_certificates(
    h: &Hypergraph,
    edges: &EdgeSet,
    w: &WeightSystem,
    r: &LpResult,
) -> Result<(), String> {
    let f = &r.primal;
    if let Some(e) = f.values.keys().find(|&&e| !edges.contains(e)) {
        return Err(format!("matching uses edge {e} outside the edge set"));
    }
    if let Some((e, x)) = f.values.iter().find(|(_, x)| x.is_negative()) {
        return Err(format!("f({e}) = {x} is negative"));
    }
    let size: Rational = f.values.iter().map(|(&e, x)| w.edge_weight(e) * x).sum();
    if size != f.size {
        return Err(format!("matching size {} does not match Σ a_e f(e) = {size}", f.size));
    }
    let load = f.loads(h);
    for (v, l) in load.iter().enumerate() {
        if l > w.vertex_weight(v) {
            return Err(format!("vertex {v} overloaded: {l} > {}", w.vertex_weight(v)));
        }
    }
    let g = &r.dual;
    if g.values.len() != h.vertex_count() {
        return Err("cover has wrong length".into());
    }
    if let Some((v, x)) = g.values.iter().enumerate().find(|(_, x)| x.is_negative()) {
        return Err(format!("g({v}) = {x} is negative"));
    }
    let gsize: Rational = g
        .values
        .iter()
        .enumerate()
        .map(|(v, x)| w.vertex_weight(v) * x)
        .sum();
    if gsize != g.size {
        return Err(format!("cover size {} does not match Σ b_v g(v) = {gsize}", g.size));
    }
    for e in edges.iter() {
        let covered: Rational = h.edge(e).iter().map(|&v| &g.values[v]).sum();
        if covered < *w.edge_weight(e) {
            return Err(format!("edge {e} under-covered: {covered} < {}", w.edge_weight(e)));
        }
        if f.value(e).is_positive() && covered != *w.edge_weight(e) {
            return Err(format!("slackness: f({e}) > 0 but edge {e} is not tight"));
        }
    }
    for (v, x) in g.values.iter().enumerate() {
        if x.is_positive() && load[v] != *w.vertex_weight(v) {
            return Err(format!("slackness: g({v}) > 0 but vertex {v} is not saturated"));
        }
    }
    if f.size != g.size || f.size != r.value {
        return Err(format!(
            "duality gap: value {}, matching {}, cover {}",
            r.value, f.size, g.size
        ));
    }
    Ok(())
}

/// Decides whether the cover program of `edges` has a single optimal point
/// by maximizing and minimizing each `g(v)` over the optimal face.
///
/// Vertices outside the edges of `edges` are zero in every optimum (their
/// cost `b_v` is positive) and are not optimized over.
pub fn dual_is_unique(
    h: &Hypergraph,
    edges: &EdgeSet,
    w: &WeightSystem,
) -> Result<DualUniqueness, LpError> {
    let base = nu_star(h, edges, w)?;
    if edges.is_empty() {
        return Ok(DualUniqueness::Unique(base.dual));
    }
    let touched = h.touched_vertices(edges);
    let col_of = row_index(h, &touched);
    let k = touched.len();
    let mut face = LinearProgram::new(Sense::Maximize, vec![Rational::zero(); k]);
    for e in edges.iter() {
        let mut row = vec![Rational::zero(); k];
        for &v in h.edge(e) {
            row[col_of[v]] = Rational::one();
        }
        face.add(row, Relation::GreaterEq, w.edge_weight(e).clone());
    }
    let cost: Vec<Rational> = touched.iter().map(|&v| w.vertex_weight(v).clone()).collect();
    face.add(cost, Relation::Equal, base.value.clone());

    let to_cover = |x: Vec<Rational>| {
        let mut values = vec![Rational::zero(); h.vertex_count()];
        for (g, &v) in x.into_iter().zip(&touched) {
            values[v] = g;
        }
        let size = values
            .iter()
            .enumerate()
            .map(|(v, g)| w.vertex_weight(v) * g)
            .sum();
        FractionalCover { values, size }
    };
    for i in 0..k {
        let mut hi = face.clone();
        hi.objective[i] = Rational::one();
        let mut lo = face.clone();
        lo.sense = Sense::Minimize;
        lo.objective[i] = Rational::one();
        let (Outcome::Optimal(top), Outcome::Optimal(bottom)) = (hi.solve(), lo.solve()) else {
            return Err(LpError::Solver("optimal face program not solvable"));
        };
        if top.value != bottom.value {
            return Ok(DualUniqueness::NotUnique(to_cover(bottom.x), to_cover(top.x)));
        }
    }
    Ok(DualUniqueness::Unique(base.dual))
}

/// Default cap on the edge count for [`matching_number`].
pub const DEFAULT_MATCHING_LIMIT: usize = 40;

/// Maximum number of pairwise disjoint edges in `edges`, by branch and bound
/// on edge inclusion with `ν*` of the still-available edges as the bound.
pub fn matching_number(h: &Hypergraph, edges: &EdgeSet, limit: usize) -> Result<usize, LpError> {
    h.check_edge_set(edges)?;
    if edges.len() > limit {
        return Err(LpError::TooLarge {
            size: edges.len(),
            limit,
        });
    }
    let unit = WeightSystem::unit(h);
    let mut search = MatchingSearch {
        h,
        unit: &unit,
        edges: edges.as_slice(),
        used: vec![false; h.vertex_count()],
        best: 0,
    };
    search.branch(0, 0)?;
    Ok(search.best)
}

struct MatchingSearch<'a> {
    h: &'a Hypergraph,
    unit: &'a WeightSystem,
    edges: &'a [usize],
    used: Vec<bool>,
    best: usize,
}

impl MatchingSearch<'_> {
    fn branch(&mut self, pos: usize, size: usize) -> Result<(), LpError> {
        self.best = self.best.max(size);
        let available: Vec<usize> = self.edges[pos..]
            .iter()
            .copied()
            .filter(|&e| self.h.edge(e).iter().all(|&v| !self.used[v]))
            .collect();
        if available.is_empty() {
            return Ok(());
        }
        // cheap cardinality bound before the LP bound
        if size + available.len() <= self.best {
            return Ok(());
        }
        let bound = nu_star(self.h, &EdgeSet::collect_from(available.iter().copied()), self.unit)?;
        let extra = bound.value.floor().to_usize().unwrap_or(usize::MAX / 2);
        if extra + size <= self.best {
            return Ok(());
        }
        let first = available[0];
        let next = self.edges.iter().position(|&e| e == first).expect("edge in list") + 1;
        for &v in self.h.edge(first) {
            self.used[v] = true;
        }
        self.branch(next, size + 1)?;
        for &v in self.h.edge(first) {
            self.used[v] = false;
        }
        self.branch(next, size)
    }
}
