//! Partition matroids on labeled edge universes, and the search for a face
//! whose complement has small rank.

use thiserror::Error;

use crate::complex::{ComplexError, Face, SimplicialComplex, MAX_GROUND};
use crate::hypergraph::ColoredFamily;

/// Matroids on `0..ground_size()` given by a rank oracle.
pub trait Matroid {
    fn ground_size(&self) -> usize;

    fn rank(&self, set: Face) -> usize;

    fn is_independent(&self, set: Face) -> bool {
        self.rank(set) == set.len()
    }
}

/// Independent sets take at most one element from each part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    parts: Vec<Face>,
    ground_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("parts do not partition the ground set of size {0}")]
    NotAPartition(usize),
    #[error("matroid ground size {matroid} differs from complex ground size {complex}")]
    GroundMismatch { matroid: usize, complex: usize },
    #[error("independent set {0} is not a face")]
    NotContained(Face),
}

impl PartitionMatroid {
    pub fn new(ground_size: usize, parts: Vec<Face>) -> Result<Self, MatroidError> {
        if ground_size > MAX_GROUND {
            return Err(ComplexError::GroundTooLarge(ground_size).into());
        }
        let mut seen = Face::EMPTY;
        for p in &parts {
            if !p.intersection(seen).is_empty() {
                return Err(MatroidError::NotAPartition(ground_size));
            }
            seen = seen.union(*p);
        }
        if seen != Face::full(ground_size) {
            return Err(MatroidError::NotAPartition(ground_size));
        }
        Ok(PartitionMatroid { parts, ground_size })
    }

    /// Parts given as the part index of each element.
    pub fn from_labels(labels: &[usize]) -> Result<Self, MatroidError> {
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut parts = vec![Face::EMPTY; count];
        for (i, &p) in labels.iter().enumerate() {
            if i >= MAX_GROUND {
                return Err(ComplexError::GroundTooLarge(labels.len()).into());
            }
            parts[p] = parts[p].with(i);
        }
        parts.retain(|p| !p.is_empty());
        Self::new(labels.len(), parts)
    }

    pub fn parts(&self) -> &[Face] {
        &self.parts
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.ground_size
    }

    fn rank(&self, set: Face) -> usize {
        self.parts
            .iter()
            .filter(|p| !p.intersection(set).is_empty())
            .count()
    }
}

/// The pairs `(edge, color)` with the edge in that color, ordered by color
/// and then by edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledUniverse {
    pub elements: Vec<(usize, usize)>,
}

impl LabeledUniverse {
    pub fn from_family(family: &ColoredFamily) -> Result<Self, MatroidError> {
        let elements: Vec<(usize, usize)> = family
            .colors()
            .iter()
            .enumerate()
            .flat_map(|(c, set)| set.iter().map(move |e| (e, c)))
            .collect();
        if elements.len() > MAX_GROUND {
            return Err(ComplexError::GroundTooLarge(elements.len()).into());
        }
        Ok(LabeledUniverse { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// One part per color.
    pub fn partition_matroid(&self) -> PartitionMatroid {
        let labels: Vec<usize> = self.elements.iter().map(|&(_, c)| c).collect();
        PartitionMatroid::from_labels(&labels).expect("universe fits")
    }

    /// Preimage of a complex on edge positions: a set of labeled elements is
    /// a face iff its edges form a face of `x`. `position` maps an edge
    /// index to its ground element in `x`.
    pub fn lift_complex(
        &self,
        x: &SimplicialComplex,
        position: impl Fn(usize) -> usize,
    ) -> Result<SimplicialComplex, MatroidError> {
        let facets = x.facets().iter().map(|f| {
            Face::from_elements(
                self.elements
                    .iter()
                    .enumerate()
                    .filter(|(_, (e, _))| f.contains(position(*e)))
                    .map(|(i, _)| i),
            )
            .expect("universe fits")
        });
        Ok(SimplicialComplex::new(self.len(), facets)?)
    }
}

/// Some independent set of `m` that is not a face of `x`, or `None` when
/// every independent set is a face.
pub fn independent_non_face<M: Matroid>(x: &SimplicialComplex, m: &M) -> Option<Face> {
    fn dfs<M: Matroid>(x: &SimplicialComplex, m: &M, i: usize, cur: Face) -> Option<Face> {
        if i == m.ground_size() {
            return None;
        }
        let next = cur.with(i);
        if m.is_independent(next) {
            if !x.contains(next) {
                return Some(next);
            }
            if let Some(bad) = dfs(x, m, i + 1, next) {
                return Some(bad);
            }
        }
        dfs(x, m, i + 1, cur)
    }
    if !x.contains(Face::EMPTY) {
        return Some(Face::EMPTY);
    }
    dfs(x, m, 0, Face::EMPTY)
}

/// A face `τ` of `x` with `rank(V ∖ τ) ≤ d`, searching facets by decreasing
/// size and then lexicographically. Rank is monotone, so if any face
/// qualifies some facet does.
pub fn km_witness<M: Matroid>(x: &SimplicialComplex, m: &M, d: usize) -> Result<Option<Face>, MatroidError> {
    if m.ground_size() != x.ground_size() {
        return Err(MatroidError::GroundMismatch {
            matroid: m.ground_size(),
            complex: x.ground_size(),
        });
    }
    if let Some(bad) = independent_non_face(x, m) {
        return Err(MatroidError::NotContained(bad));
    }
    let full = Face::full(x.ground_size());
    let mut facets = x.facets().to_vec();
    facets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    Ok(facets.into_iter().find(|f| m.rank(full.minus(*f)) <= d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(v: &[usize]) -> Face {
        Face::from_elements(v.iter().copied()).unwrap()
    }

    #[test]
    fn rank_examples() {
        let m = PartitionMatroid::from_labels(&[0, 0, 0, 0, 0, 1, 2, 3, 4]).unwrap();
        assert_eq!(m.rank(Face::EMPTY), 0);
        assert_eq!(m.rank(face(&[0, 1, 2, 3, 4])), 1);
        assert_eq!(m.rank(face(&[5, 7, 8])), 3);
        assert!(m.is_independent(face(&[0, 5])));
        assert!(!m.is_independent(face(&[0, 1])));
    }

    #[test]
    fn partition_validation() {
        assert!(PartitionMatroid::new(3, vec![face(&[0, 1]), face(&[1, 2])]).is_err());
        assert!(PartitionMatroid::new(3, vec![face(&[0, 1])]).is_err());
        assert!(PartitionMatroid::new(3, vec![face(&[0, 1]), face(&[2])]).is_ok());
    }

    #[test]
    fn full_simplex_witness() {
        let m = PartitionMatroid::from_labels(&[0, 0, 1, 2]).unwrap();
        let x = SimplicialComplex::full_simplex(4);
        assert_eq!(km_witness(&x, &m, 3).unwrap(), Some(Face::full(4)));
    }

    #[test]
    fn containment_violation() {
        let m = PartitionMatroid::from_labels(&[0, 1]).unwrap();
        let x = SimplicialComplex::new(2, [face(&[0]), face(&[1])]).unwrap();
        assert_eq!(km_witness(&x, &m, 1), Err(MatroidError::NotContained(face(&[0, 1]))));
    }

    #[test]
    fn witness_prefers_large_facets() {
        // parts {0,1} and {2,3}; facets are the bases plus one extra set
        let m = PartitionMatroid::from_labels(&[0, 0, 1, 1]).unwrap();
        let x = SimplicialComplex::new(
            4,
            [face(&[0, 2]), face(&[0, 3]), face(&[1, 2]), face(&[1, 3]), face(&[0, 1])],
        )
        .unwrap();
        assert_eq!(km_witness(&x, &m, 1).unwrap(), Some(face(&[0, 1])));
        assert_eq!(km_witness(&x, &m, 0).unwrap(), None);
    }

    #[test]
    fn universe_order() {
        let fam = ColoredFamily::from_edge_lists(
            3,
            2,
            None,
            vec![vec![vec![0, 1], vec![1, 2]], vec![vec![1, 2]]],
        )
        .unwrap();
        let u = LabeledUniverse::from_family(&fam).unwrap();
        assert_eq!(u.elements, vec![(0, 0), (1, 0), (1, 1)]);
        assert_eq!(u.partition_matroid().parts(), &[face(&[0, 1]), face(&[2])]);
        let x = SimplicialComplex::new(2, [face(&[1])]).unwrap();
        let lifted = u.lift_complex(&x, |e| e).unwrap();
        assert_eq!(lifted.facets(), &[face(&[1, 2])]);
    }
}
