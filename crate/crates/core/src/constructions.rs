//! Extremal families: perfect matchings of even cycles, copies of odd
//! cycles, and truncated projective planes. Every generator checks the
//! `ν*` of each color with the LP before returning.

use thiserror::Error;

use crate::hypergraph::{ColoredFamily, CoreError, EdgeSet, Hypergraph, WeightSystem};
use crate::lp::{matching_number, nu_star, LpError, DEFAULT_MATCHING_LIMIT};
use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("generated family failed its check: {0}")]
    Verification(String),
}

fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidParameter(msg.into())
}

/// Checks `ν*(E_i) = n` for every color, and `ν(E_i) = n` when `integral`.
fn check_colors(family: &ColoredFamily, n: &Rational, integral: bool) -> Result<(), ConstructionError> {
    let h = family.hypergraph();
    let w = WeightSystem::unit(h);
    for (i, color) in family.colors().iter().enumerate() {
        if family.colors()[..i].contains(color) {
            continue;
        }
        let value = nu_star(h, color, &w)?.value;
        if value != *n {
            return Err(ConstructionError::Verification(format!(
                "color {i} has nu* = {value}, expected {n}"
            )));
        }
        if integral {
            let nu = matching_number(h, color, DEFAULT_MATCHING_LIMIT)?;
            if Rational::from(nu) != *n {
                return Err(ConstructionError::Verification(format!(
                    "color {i} has matching number {nu}, expected {n}"
                )));
            }
        }
    }
    Ok(())
}

fn cycle_edges(offset: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len)
        .map(|i| vec![offset + i, offset + (i + 1) % len])
        .collect()
}

fn perfect_matchings(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let len = 2 * n;
    let m0 = (0..n).map(|j| vec![2 * j, 2 * j + 1]).collect();
    let m1 = (0..n).map(|j| vec![2 * j + 1, (2 * j + 2) % len]).collect();
    (m0, m1)
}

/// `C_{2n}` on `0..2n` with `n − 1` copies of the matching `{01, 23, …}`
/// followed by `n − 1` copies of `{12, 34, …, (2n−1)0}`. Bipartite by parity.
pub fn drisko_example(n: usize) -> Result<ColoredFamily, ConstructionError> {
    if n < 2 {
        return Err(invalid(format!("drisko needs n >= 2, got {n}")));
    }
    let (m0, m1) = perfect_matchings(n);
    let mut lists = vec![m0; n - 1];
    lists.extend(vec![m1; n - 1]);
    let parity = (0..2 * n).map(|v| v % 2).collect();
    let family = ColoredFamily::from_edge_lists(2 * n, 2, Some(parity), lists)?;
    check_colors(&family, &Rational::from(n), true)?;
    Ok(family)
}

/// The Drisko family plus the matching `{02, 13, 46, 57, …}` on the same
/// cycle, `2n − 1` colors in all.
pub fn bgs_example(n: usize) -> Result<ColoredFamily, ConstructionError> {
    if n < 2 || n % 2 == 1 {
        return Err(invalid(format!("bgs needs an even n >= 2, got {n}")));
    }
    let (m0, m1) = perfect_matchings(n);
    let extra: Vec<Vec<usize>> = (0..n / 2)
        .flat_map(|j| [vec![4 * j, 4 * j + 2], vec![4 * j + 1, 4 * j + 3]])
        .collect();
    let mut lists = vec![m0; n - 1];
    lists.extend(vec![m1; n - 1]);
    lists.push(extra);
    let family = ColoredFamily::from_edge_lists(2 * n, 2, None, lists)?;
    check_colors(&family, &Rational::from(n), true)?;
    Ok(family)
}

/// `copies` colors, each the edge set of `C_{2k+1}`; returns the family and
/// `n = k + 1/2`.
pub fn odd_cycle_family_with(k: usize, copies: usize) -> Result<(ColoredFamily, Rational), ConstructionError> {
    if k < 1 {
        return Err(invalid("odd cycle needs k >= 1"));
    }
    if copies < 1 {
        return Err(invalid("at least one copy is needed"));
    }
    let len = 2 * k + 1;
    let family = ColoredFamily::from_edge_lists(len, 2, None, vec![cycle_edges(0, len); copies])?;
    let n = Rational::new(len as i64, 2);
    check_colors(&family, &n, false)?;
    Ok((family, n))
}

/// `2k` copies of `C_{2k+1}`.
pub fn odd_cycle_family(k: usize) -> Result<(ColoredFamily, Rational), ConstructionError> {
    odd_cycle_family_with(k, 2 * k)
}

/// `copies` colors, each a triangle on `0..3` plus `C_{2n−3}` on `3..2n`.
pub fn two_odd_cycles_family_with(n: usize, copies: usize) -> Result<ColoredFamily, ConstructionError> {
    if n < 3 {
        return Err(invalid(format!("two odd cycles needs n >= 3, got {n}")));
    }
    if copies < 1 {
        return Err(invalid("at least one copy is needed"));
    }
    let mut edges = cycle_edges(0, 3);
    edges.extend(cycle_edges(3, 2 * n - 3));
    let family = ColoredFamily::from_edge_lists(2 * n, 2, None, vec![edges; copies])?;
    check_colors(&family, &Rational::from(n), false)?;
    Ok(family)
}

/// `2n − 1` copies.
pub fn two_odd_cycles_family(n: usize) -> Result<ColoredFamily, ConstructionError> {
    two_odd_cycles_family_with(n, 2 * n.max(1) - 1)
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Homogeneous triples over `Z_q` with first nonzero coordinate 1, in
/// lexicographic order.
fn projective_points(q: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                let p = [x, y, z];
                if p.iter().find(|&&c| c != 0) == Some(&1) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn incident(line: &[usize; 3], point: &[usize; 3], q: usize) -> bool {
    line.iter().zip(point).map(|(a, b)| a * b).sum::<usize>() % q == 0
}

/// `PG(2, q)` for prime `q` with the point `(0:0:1)` and the `q + 1` lines
/// through it removed. Vertices are the remaining points in lexicographic
/// order; edges are the `q²` remaining lines, each meeting every removed line
/// once, and those removed lines give the `(q+1)`-partition. Returns the
/// hypergraph, its full edge set and `n = q`.
pub fn truncated_projective_plane(q: usize) -> Result<(Hypergraph, EdgeSet, usize), ConstructionError> {
    if !is_prime(q) {
        return Err(invalid(format!("q must be prime, got {q}")));
    }
    let deleted = [0, 0, 1];
    let all = projective_points(q);
    let points: Vec<[usize; 3]> = all.iter().copied().filter(|p| *p != deleted).collect();
    let (through, kept): (Vec<[usize; 3]>, Vec<[usize; 3]>) =
        all.iter().partition(|l| incident(l, &deleted, q));
    let edges: Vec<Vec<usize>> = kept
        .iter()
        .map(|l| {
            (0..points.len())
                .filter(|&i| incident(l, &points[i], q))
                .collect()
        })
        .collect();
    let side: Vec<usize> = points
        .iter()
        .map(|p| {
            through
                .iter()
                .position(|l| incident(l, p, q))
                .expect("every point lies on a line through the deleted point")
        })
        .collect();
    let h = Hypergraph::new(points.len(), q + 1, edges)?.with_partition(side)?;
    let all_edges = h.all_edges();
    let value = nu_star(&h, &all_edges, &WeightSystem::unit(&h))?.value;
    if value != Rational::from(q) {
        return Err(ConstructionError::Verification(format!(
            "truncated plane has nu* = {value}, expected {q}"
        )));
    }
    Ok((h, all_edges, q))
}

/// `m` identical colors equal to `edges`.
pub fn copies(h: &Hypergraph, edges: &EdgeSet, m: usize) -> Result<ColoredFamily, ConstructionError> {
    if m == 0 {
        return Err(invalid("at least one copy is needed"));
    }
    Ok(ColoredFamily::new(h.clone(), vec![edges.clone(); m])?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    Drisko { n: usize },
    Bgs { n: usize },
    OddCycle { k: usize },
    TwoOddCycles { n: usize },
    TruncatedPlane { q: usize },
}

/// A family by kind and parameters, with an optional color count for the
/// kinds built from identical copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub copies: Option<usize>,
}

impl ConstructionSpec {
    /// The family and the common size of the matchings in its colors.
    pub fn build(&self) -> Result<(ColoredFamily, Rational), ConstructionError> {
        let fixed = |name: &str| match self.copies {
            Some(_) => Err(invalid(format!("{name} has a fixed number of colors"))),
            None => Ok(()),
        };
        match self.kind {
            ConstructionKind::Drisko { n } => {
                fixed("drisko")?;
                Ok((drisko_example(n)?, Rational::from(n)))
            }
            ConstructionKind::Bgs { n } => {
                fixed("bgs")?;
                Ok((bgs_example(n)?, Rational::from(n)))
            }
            ConstructionKind::OddCycle { k } => odd_cycle_family_with(k, self.copies.unwrap_or(2 * k)),
            ConstructionKind::TwoOddCycles { n } => {
                let m = self.copies.unwrap_or((2 * n).saturating_sub(1));
                Ok((two_odd_cycles_family_with(n, m)?, Rational::from(n)))
            }
            ConstructionKind::TruncatedPlane { q } => {
                let (h, edges, n) = truncated_projective_plane(q)?;
                // r n − r + 1 with r = q + 1 and n = q
                let m = self.copies.unwrap_or(q * q);
                Ok((copies(&h, &edges, m)?, Rational::from(n)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drisko_two() {
        let fam = drisko_example(2).unwrap();
        let h = fam.hypergraph();
        let names: Vec<Vec<Vec<usize>>> = fam
            .colors()
            .iter()
            .map(|c| c.iter().map(|e| h.edge(e).to_vec()).collect())
            .collect();
        assert_eq!(
            names,
            vec![vec![vec![0, 1], vec![2, 3]], vec![vec![1, 2], vec![0, 3]]]
        );
        assert_eq!(h.partition(), Some(&[0, 1, 0, 1][..]));
        assert!(drisko_example(1).is_err());
        assert_eq!(drisko_example(4).unwrap().color_count(), 6);
    }

    #[test]
    fn bgs_four() {
        let fam = bgs_example(4).unwrap();
        assert_eq!(fam.color_count(), 7);
        let h = fam.hypergraph();
        let extra: Vec<Vec<usize>> = fam.color(6).iter().map(|e| h.edge(e).to_vec()).collect();
        assert_eq!(extra, vec![vec![0, 2], vec![1, 3], vec![4, 6], vec![5, 7]]);
        assert!(bgs_example(3).is_err());
    }

    #[test]
    fn odd_cycles() {
        let (fam, n) = odd_cycle_family(2).unwrap();
        assert_eq!(fam.color_count(), 4);
        assert_eq!(n, Rational::new(5, 2));
        let fam = two_odd_cycles_family(3).unwrap();
        assert_eq!(fam.color_count(), 5);
        assert_eq!(fam.hypergraph().edge_count(), 6);
        assert!(two_odd_cycles_family(2).is_err());
    }

    #[test]
    fn fano_truncated() {
        let (h, edges, n) = truncated_projective_plane(2).unwrap();
        assert_eq!((h.vertex_count(), h.uniformity(), edges.len(), n), (6, 3, 4, 2));
        let w = WeightSystem::unit(&h);
        for skip in 0..4 {
            let three = EdgeSet::collect_from((0..4).filter(|&e| e != skip));
            assert_eq!(nu_star(&h, &three, &w).unwrap().value, Rational::new(3, 2));
        }
        assert!(truncated_projective_plane(4).is_err());
    }

    #[test]
    fn plane_incidences() {
        for q in [2, 3, 5] {
            let (h, edges, _) = truncated_projective_plane(q).unwrap();
            assert_eq!(edges.len(), q * q);
            assert_eq!(h.vertex_count(), q * q + q);
            for e1 in 0..edges.len() {
                for e2 in e1 + 1..edges.len() {
                    let common = h.edge(e1).iter().filter(|v| h.edge(e2).contains(v)).count();
                    assert!(common <= 1);
                }
            }
            for v in 0..h.vertex_count() {
                assert_eq!((0..edges.len()).filter(|&e| h.edge(e).contains(&v)).count(), q);
            }
        }
    }

    #[test]
    fn spec_copies() {
        let (h, edges, _) = truncated_projective_plane(2).unwrap();
        assert!(copies(&h, &edges, 0).is_err());
        assert_eq!(copies(&h, &edges, 1).unwrap().color_count(), 1);
        let spec = ConstructionSpec {
            kind: ConstructionKind::TruncatedPlane { q: 2 },
            copies: None,
        };
        assert_eq!(spec.build().unwrap().0.color_count(), 4);
        let drisko = ConstructionSpec {
            kind: ConstructionKind::Drisko { n: 3 },
            copies: Some(2),
        };
        assert!(drisko.build().is_err());
    }
}
