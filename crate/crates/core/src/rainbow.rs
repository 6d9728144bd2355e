//! Exhaustive search for rainbow fractional and integral matchings: edges
//! from pairwise distinct colors supporting a matching of the target size.

use std::collections::HashSet;

use thiserror::Error;

use crate::hypergraph::{ColoredFamily, CoreError, EdgeSet, WeightSystem};
use crate::lp::{nu_star, FractionalMatching, LpError};
use crate::rational::Rational;

pub const DEFAULT_MAX_EDGES: usize = 40;
pub const DEFAULT_MAX_COLORS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Cap on `Σ |E_i|`.
    pub max_edges: usize,
    pub max_colors: usize,
    /// Cut subtrees whose chosen edges together with every edge of the
    /// remaining colors still have `ν* < n`.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_edges: DEFAULT_MAX_EDGES,
            max_colors: DEFAULT_MAX_COLORS,
            prune: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum RainbowError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("{what} {size} exceeds the exhaustive limit {limit}")]
    ScaleExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("target must be positive, got {0}")]
    NonPositiveTarget(Rational),
}

/// `assignment` lists `(color, edge)` pairs in increasing color order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowCertificate {
    pub assignment: Vec<(usize, usize)>,
    pub matching: FractionalMatching,
    pub target: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralRainbowCertificate {
    pub assignment: Vec<(usize, usize)>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("color out of range: {0}")]
    ColorOutOfRange(usize),
    #[error("color reused: {0}")]
    ColorReused(usize),
    #[error("edge reused: {0}")]
    EdgeReused(usize),
    #[error("edge {edge} not in color {color}")]
    EdgeNotInColor { edge: usize, color: usize },
    #[error("matching uses unassigned edge {0}")]
    OffSupport(usize),
    #[error("negative value on edge {0}")]
    NegativeValue(usize),
    #[error("vertex {vertex} overloaded: {load} > {capacity}")]
    Overloaded {
        vertex: usize,
        load: Rational,
        capacity: Rational,
    },
    #[error("stated size {stated} differs from the weighted sum {actual}")]
    SizeMismatch { stated: Rational, actual: Rational },
    #[error("size below target: {size} < {target}")]
    SizeBelowTarget { size: Rational, target: Rational },
    #[error("edges {0} and {1} intersect")]
    NotDisjoint(usize, usize),
    #[error("size below target: {size} < {target}")]
    TooFewEdges { size: usize, target: usize },
}

fn check_scale(family: &ColoredFamily, opts: &SearchOptions) -> Result<(), RainbowError> {
    let total: usize = family.colors().iter().map(EdgeSet::len).sum();
    if total > opts.max_edges {
        return Err(RainbowError::ScaleExceeded {
            what: "total edge count",
            size: total,
            limit: opts.max_edges,
        });
    }
    if family.color_count() > opts.max_colors {
        return Err(RainbowError::ScaleExceeded {
            what: "color count",
            size: family.color_count(),
            limit: opts.max_colors,
        });
    }
    Ok(())
}

/// Depth-first over colors in increasing order; each color contributes one
/// of its edges (increasing) or is skipped (last). Returns `None` only after
/// the whole space has been searched.
pub fn find_rainbow_fractional(
    family: &ColoredFamily,
    n: &Rational,
    w: &WeightSystem,
    opts: &SearchOptions,
) -> Result<Option<RainbowCertificate>, RainbowError> {
    if !n.is_positive() {
        return Err(RainbowError::NonPositiveTarget(n.clone()));
    }
    check_scale(family, opts)?;
    let mut search = FractionalSearch {
        family,
        w,
        n,
        prune: opts.prune,
        failed: HashSet::new(),
        chosen: EdgeSet::empty(),
        assignment: Vec::new(),
    };
    Ok(search.dfs(0)?.map(|matching| RainbowCertificate {
        assignment: search.assignment,
        matching,
        target: n.clone(),
    }))
}

struct FractionalSearch<'a> {
    family: &'a ColoredFamily,
    w: &'a WeightSystem,
    n: &'a Rational,
    prune: bool,
    failed: HashSet<(usize, EdgeSet)>,
    chosen: EdgeSet,
    assignment: Vec<(usize, usize)>,
}

impl FractionalSearch<'_> {
    fn dfs(&mut self, c: usize) -> Result<Option<FractionalMatching>, LpError> {
        let colors = self.family.colors();
        if c == colors.len() || self.failed.contains(&(c, self.chosen.clone())) {
            return Ok(None);
        }
        let h = self.family.hypergraph();
        if self.prune {
            let pool = colors[c..]
                .iter()
                .fold(self.chosen.clone(), |acc, col| acc.union(col));
            if nu_star(h, &pool, self.w)?.value < *self.n {
                self.failed.insert((c, self.chosen.clone()));
                return Ok(None);
            }
        }
        for e in colors[c].iter() {
            if self.chosen.contains(e) {
                continue;
            }
            let before = std::mem::replace(&mut self.chosen, EdgeSet::empty());
            self.chosen = before.with(e);
            self.assignment.push((c, e));
            let lp = nu_star(h, &self.chosen, self.w)?;
            if lp.value >= *self.n {
                return Ok(Some(lp.primal));
            }
            if let Some(found) = self.dfs(c + 1)? {
                return Ok(Some(found));
            }
            self.assignment.pop();
            self.chosen = before;
        }
        if let Some(found) = self.dfs(c + 1)? {
            return Ok(Some(found));
        }
        self.failed.insert((c, self.chosen.clone()));
        Ok(None)
    }
}

/// Exhaustive search for `n` pairwise disjoint edges from distinct colors.
pub fn find_rainbow_integral(
    family: &ColoredFamily,
    n: usize,
    opts: &SearchOptions,
) -> Result<Option<IntegralRainbowCertificate>, RainbowError> {
    check_scale(family, opts)?;
    let words = family.hypergraph().vertex_count().div_ceil(64);
    let mut search = IntegralSearch {
        family,
        n,
        failed: HashSet::new(),
        used: vec![0; words],
        assignment: Vec::new(),
    };
    Ok(search.dfs(0).then_some(IntegralRainbowCertificate {
        assignment: search.assignment,
        target: n,
    }))
}

struct IntegralSearch<'a> {
    family: &'a ColoredFamily,
    n: usize,
    failed: HashSet<(usize, Vec<u64>)>,
    used: Vec<u64>,
    assignment: Vec<(usize, usize)>,
}

impl IntegralSearch<'_> {
    fn dfs(&mut self, c: usize) -> bool {
        if self.assignment.len() >= self.n {
            return true;
        }
        let m = self.family.color_count();
        if self.assignment.len() + (m - c) < self.n || self.failed.contains(&(c, self.used.clone())) {
            return false;
        }
        let h = self.family.hypergraph();
        for e in self.family.color(c).iter() {
            let verts = h.edge(e);
            if verts.iter().any(|&v| self.used[v / 64] >> (v % 64) & 1 == 1) {
                continue;
            }
            self.toggle(verts);
            self.assignment.push((c, e));
            if self.dfs(c + 1) {
                return true;
            }
            self.assignment.pop();
            self.toggle(verts);
        }
        if self.dfs(c + 1) {
            return true;
        }
        self.failed.insert((c, self.used.clone()));
        false
    }

    fn toggle(&mut self, verts: &[usize]) {
        for &v in verts {
            self.used[v / 64] ^= 1 << (v % 64);
        }
    }
}

fn check_assignment(family: &ColoredFamily, assignment: &[(usize, usize)]) -> Result<(), CertificateError> {
    let mut colors = HashSet::new();
    let mut edges = HashSet::new();
    for &(c, e) in assignment {
        if c >= family.color_count() {
            return Err(CertificateError::ColorOutOfRange(c));
        }
        if !colors.insert(c) {
            return Err(CertificateError::ColorReused(c));
        }
        if !edges.insert(e) {
            return Err(CertificateError::EdgeReused(e));
        }
        if !family.color(c).contains(e) {
            return Err(CertificateError::EdgeNotInColor { edge: e, color: c });
        }
    }
    Ok(())
}

/// Checks a fractional certificate against `n` in exact arithmetic.
pub fn verify_certificate(
    family: &ColoredFamily,
    n: &Rational,
    w: &WeightSystem,
    cert: &RainbowCertificate,
) -> Result<(), CertificateError> {
    check_assignment(family, &cert.assignment)?;
    let h = family.hypergraph();
    let f = &cert.matching;
    for (&e, x) in &f.values {
        if !cert.assignment.iter().any(|&(_, a)| a == e) {
            return Err(CertificateError::OffSupport(e));
        }
        if x.is_negative() {
            return Err(CertificateError::NegativeValue(e));
        }
    }
    for (v, load) in f.loads(h).into_iter().enumerate() {
        if load > *w.vertex_weight(v) {
            return Err(CertificateError::Overloaded {
                vertex: v,
                load,
                capacity: w.vertex_weight(v).clone(),
            });
        }
    }
    let actual: Rational = f.values.iter().map(|(&e, x)| w.edge_weight(e) * x).sum();
    if actual != f.size {
        return Err(CertificateError::SizeMismatch {
            stated: f.size.clone(),
            actual,
        });
    }
    if actual < *n {
        return Err(CertificateError::SizeBelowTarget {
            size: actual,
            target: n.clone(),
        });
    }
    Ok(())
}

pub fn verify_integral_certificate(
    family: &ColoredFamily,
    n: usize,
    cert: &IntegralRainbowCertificate,
) -> Result<(), CertificateError> {
    check_assignment(family, &cert.assignment)?;
    let h = family.hypergraph();
    for (i, &(_, e1)) in cert.assignment.iter().enumerate() {
        for &(_, e2) in &cert.assignment[i + 1..] {
            if h.edge(e1).iter().any(|v| h.edge(e2).contains(v)) {
                return Err(CertificateError::NotDisjoint(e1, e2));
            }
        }
    }
    if cert.assignment.len() < n {
        return Err(CertificateError::TooFewEdges {
            size: cert.assignment.len(),
            target: n,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn cycle_family(len: usize, copies: usize) -> ColoredFamily {
        let edges: Vec<Vec<usize>> = (0..len).map(|i| vec![i, (i + 1) % len]).collect();
        ColoredFamily::from_edge_lists(len, 2, None, vec![edges; copies]).unwrap()
    }

    #[test]
    fn two_single_edges() {
        let fam = ColoredFamily::from_edge_lists(4, 2, None, vec![vec![vec![0, 1]], vec![vec![2, 3]]]).unwrap();
        let w = WeightSystem::unit(fam.hypergraph());
        let cert = find_rainbow_fractional(&fam, &Rational::one(), &w, &SearchOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(cert.assignment, vec![(0, 0)]);
        assert_eq!(cert.matching.value(0), Rational::one());
        assert_eq!(verify_certificate(&fam, &Rational::one(), &w, &cert), Ok(()));
    }

    #[test]
    fn five_cycle_copies() {
        let n = Rational::new(5, 2);
        for (copies, present) in [(4, false), (5, true)] {
            let fam = cycle_family(5, copies);
            let w = WeightSystem::unit(fam.hypergraph());
            for prune in [true, false] {
                let opts = SearchOptions { prune, ..Default::default() };
                let found = find_rainbow_fractional(&fam, &n, &w, &opts).unwrap();
                assert_eq!(found.is_some(), present, "copies {copies} prune {prune}");
                if let Some(cert) = found {
                    assert_eq!(verify_certificate(&fam, &n, &w, &cert), Ok(()));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_certificates() {
        let fam = cycle_family(5, 5);
        let w = WeightSystem::unit(fam.hypergraph());
        let n = Rational::new(5, 2);
        let cert = find_rainbow_fractional(&fam, &n, &w, &SearchOptions::default())
            .unwrap()
            .unwrap();
        let mut reused = cert.clone();
        reused.assignment[1].0 = reused.assignment[0].0;
        assert!(matches!(
            verify_certificate(&fam, &n, &w, &reused),
            Err(CertificateError::ColorReused(_))
        ));
        assert!(verify_certificate(&fam, &n, &w, &reused)
            .unwrap_err()
            .to_string()
            .starts_with("color reused"));

        let small = find_rainbow_fractional(&fam, &Rational::from(2), &w, &SearchOptions::default())
            .unwrap()
            .unwrap();
        let err = verify_certificate(&fam, &n, &w, &small).unwrap_err();
        assert!(matches!(err, CertificateError::SizeBelowTarget { .. }));
        assert!(err.to_string().starts_with("size below target"));

        let mut heavy = cert.clone();
        let first = *heavy.matching.values.keys().next().unwrap();
        heavy.matching.values.insert(first, Rational::from(2));
        assert!(verify_certificate(&fam, &n, &w, &heavy).is_err());
    }

    #[test]
    fn scale_limits() {
        let fam = cycle_family(5, 13);
        let w = WeightSystem::unit(fam.hypergraph());
        let err = find_rainbow_fractional(&fam, &Rational::from(2), &w, &SearchOptions::default());
        assert!(matches!(err, Err(RainbowError::ScaleExceeded { .. })));
        assert!(find_rainbow_fractional(&cycle_family(3, 1), &Rational::zero(), &w, &SearchOptions::default()).is_err());
    }

    #[test]
    fn integral_on_four_cycle() {
        let lists = |m0: usize, m1: usize| {
            let mut out = vec![vec![vec![0, 1], vec![2, 3]]; m0];
            out.extend(vec![vec![vec![1, 2], vec![0, 3]]; m1]);
            out
        };
        let absent = ColoredFamily::from_edge_lists(4, 2, None, lists(1, 1)).unwrap();
        assert_eq!(find_rainbow_integral(&absent, 2, &SearchOptions::default()).unwrap(), None);
        let present = ColoredFamily::from_edge_lists(4, 2, None, lists(2, 1)).unwrap();
        let cert = find_rainbow_integral(&present, 2, &SearchOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(verify_integral_certificate(&present, 2, &cert), Ok(()));
        let mut clash = cert.clone();
        clash.assignment[1].1 = {
            let h: &Hypergraph = present.hypergraph();
            h.find_edge(&[1, 2]).unwrap()
        };
        assert!(verify_integral_certificate(&present, 2, &clash).is_err());
    }
}
