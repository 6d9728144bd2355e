//! Uniform hypergraphs, edge sets, weights and colored families.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("uniformity must be at least 2, got {0}")]
    Uniformity(usize),
    #[error("edge {edge:?} has {len} vertices, expected {expected}")]
    EdgeSize {
        edge: Vec<usize>,
        len: usize,
        expected: usize,
    },
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("edge index {index} out of range (edge count {count})")]
    EdgeOutOfRange { index: usize, count: usize },
    #[error("edge index {0} listed twice in one edge set")]
    DuplicateInSet(usize),
    #[error("partition has {len} entries, expected {expected}")]
    PartitionLength { len: usize, expected: usize },
    #[error("partition side {side} out of range for uniformity {r}")]
    PartitionSide { side: usize, r: usize },
    #[error("edge {edge:?} has two vertices on side {side}")]
    NotPartite { edge: Vec<usize>, side: usize },
    #[error("weight {what} must be positive, got {value}")]
    NonPositiveWeight { what: String, value: Rational },
    #[error("expected {expected} {what} weights, got {len}")]
    WeightLength {
        what: &'static str,
        len: usize,
        expected: usize,
    },
    #[error("a colored family needs at least one color")]
    NoColors,
    #[error("color {0} is empty")]
    EmptyColor(usize),
}

/// An r-uniform hypergraph on vertices `0..vertex_count`.
///
/// Edges are stored with their vertices sorted and are addressed by their
/// position in the edge list, which never changes after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    uniformity: usize,
    edges: Vec<Vec<usize>>,
    partition: Option<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(
        vertex_count: usize,
        uniformity: usize,
        edges: Vec<Vec<usize>>,
    ) -> Result<Self, CoreError> {
        if uniformity < 2 {
            return Err(CoreError::Uniformity(uniformity));
        }
        let mut seen = HashMap::with_capacity(edges.len());
        let mut canonical = Vec::with_capacity(edges.len());
        for edge in edges {
            let e = canonical_edge(edge, vertex_count, uniformity)?;
            if seen.insert(e.clone(), ()).is_some() {
                return Err(CoreError::DuplicateEdge(e));
            }
            canonical.push(e);
        }
        Ok(Hypergraph {
            vertex_count,
            uniformity,
            edges: canonical,
            partition: None,
        })
    }

    /// Attaches an r-partition (`partition[v]` is the side of `v`), rejecting
    /// any edge that does not take exactly one vertex from each side.
    pub fn with_partition(mut self, partition: Vec<usize>) -> Result<Self, CoreError> {
        if partition.len() != self.vertex_count {
            return Err(CoreError::PartitionLength {
                len: partition.len(),
                expected: self.vertex_count,
            });
        }
        if let Some(&side) = partition.iter().find(|&&s| s >= self.uniformity) {
            return Err(CoreError::PartitionSide {
                side,
                r: self.uniformity,
            });
        }
        for edge in &self.edges {
            let mut hit = vec![false; self.uniformity];
            for &v in edge {
                let side = partition[v];
                if hit[side] {
                    return Err(CoreError::NotPartite {
                        edge: edge.clone(),
                        side,
                    });
                }
                hit[side] = true;
            }
        }
        self.partition = Some(partition);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &[usize] {
        &self.edges[index]
    }

    pub fn partition(&self) -> Option<&[usize]> {
        self.partition.as_deref()
    }

    pub fn find_edge(&self, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.edges.iter().position(|e| *e == key)
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet((0..self.edges.len()).collect())
    }

    pub fn check_edge(&self, index: usize) -> Result<(), CoreError> {
        if index < self.edges.len() {
            Ok(())
        } else {
            Err(CoreError::EdgeOutOfRange {
                index,
                count: self.edges.len(),
            })
        }
    }

    pub fn check_edge_set(&self, set: &EdgeSet) -> Result<(), CoreError> {
        match set.0.last() {
            Some(&last) => self.check_edge(last),
            None => Ok(()),
        }
    }

    /// The 0/1 indicator of edge `index` as a subset of the vertex set.
    pub fn incidence_vector(&self, index: usize) -> Result<Vec<u8>, CoreError> {
        self.check_edge(index)?;
        let mut chi = vec![0u8; self.vertex_count];
        for &v in &self.edges[index] {
            chi[v] = 1;
        }
        Ok(chi)
    }

    /// Vertices touched by at least one edge of `set`, ascending.
    pub fn touched_vertices(&self, set: &EdgeSet) -> Vec<usize> {
        let mut hit = vec![false; self.vertex_count];
        for e in set.iter() {
            for &v in &self.edges[e] {
                hit[v] = true;
            }
        }
        (0..self.vertex_count).filter(|&v| hit[v]).collect()
    }
}

fn canonical_edge(
    mut edge: Vec<usize>,
    vertex_count: usize,
    uniformity: usize,
) -> Result<Vec<usize>, CoreError> {
    if edge.len() != uniformity {
        return Err(CoreError::EdgeSize {
            len: edge.len(),
            edge,
            expected: uniformity,
        });
    }
    if let Some(&v) = edge.iter().find(|&&v| v >= vertex_count) {
        return Err(CoreError::VertexOutOfRange {
            vertex: v,
            count: vertex_count,
        });
    }
    edge.sort_unstable();
    if edge.windows(2).any(|w| w[0] == w[1]) {
        return Err(CoreError::RepeatedVertex(edge));
    }
    Ok(edge)
}

/// A set of edge indices in canonical (ascending) order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(Vec<usize>);

impl EdgeSet {
    pub fn empty() -> Self {
        EdgeSet(Vec::new())
    }

    /// Sorts `indices`; rejects repeated entries.
    pub fn new(mut indices: Vec<usize>) -> Result<Self, CoreError> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(CoreError::DuplicateInSet(w[0]));
        }
        Ok(EdgeSet(indices))
    }

    /// Sorts and deduplicates.
    pub fn collect_from<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet::collect_from(self.iter().chain(other.iter()))
    }

    pub fn with(&self, index: usize) -> EdgeSet {
        match self.0.binary_search(&index) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, index);
                EdgeSet(v)
            }
        }
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_index_list(f, &self.0)
    }
}

/// Writes `i,j,k`, or `-` for the empty list.
pub(crate) fn write_index_list(f: &mut fmt::Formatter<'_>, items: &[usize]) -> fmt::Result {
    if items.is_empty() {
        return f.write_str("-");
    }
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Positive edge weights `a_e` and vertex weights `b_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    edge: Vec<Rational>,
    vertex: Vec<Rational>,
}

impl WeightSystem {
    pub fn new(
        h: &Hypergraph,
        edge: Vec<Rational>,
        vertex: Vec<Rational>,
    ) -> Result<Self, CoreError> {
        if edge.len() != h.edge_count() {
            return Err(CoreError::WeightLength {
                what: "edge",
                len: edge.len(),
                expected: h.edge_count(),
            });
        }
        if vertex.len() != h.vertex_count() {
            return Err(CoreError::WeightLength {
                what: "vertex",
                len: vertex.len(),
                expected: h.vertex_count(),
            });
        }
        for (i, a) in edge.iter().enumerate() {
            check_positive(a, || format!("a[{i}]"))?;
        }
        for (v, b) in vertex.iter().enumerate() {
            check_positive(b, || format!("b[{v}]"))?;
        }
        Ok(WeightSystem { edge, vertex })
    }

    pub fn unit(h: &Hypergraph) -> Self {
        WeightSystem {
            edge: vec![Rational::one(); h.edge_count()],
            vertex: vec![Rational::one(); h.vertex_count()],
        }
    }

    pub fn edge_weight(&self, e: usize) -> &Rational {
        &self.edge[e]
    }

    pub fn vertex_weight(&self, v: usize) -> &Rational {
        &self.vertex[v]
    }

    pub fn edge_weights(&self) -> &[Rational] {
        &self.edge
    }

    pub fn vertex_weights(&self) -> &[Rational] {
        &self.vertex
    }

    pub fn set_edge_weight(&mut self, e: usize, value: Rational) -> Result<(), CoreError> {
        check_positive(&value, || format!("a[{e}]"))?;
        self.edge[e] = value;
        Ok(())
    }

    pub fn set_vertex_weight(&mut self, v: usize, value: Rational) -> Result<(), CoreError> {
        check_positive(&value, || format!("b[{v}]"))?;
        self.vertex[v] = value;
        Ok(())
    }

    /// `min a_e` over the edges of `set`; `None` if `set` is empty.
    pub fn min_edge_weight(&self, set: &EdgeSet) -> Option<Rational> {
        set.iter().map(|e| &self.edge[e]).min().cloned()
    }

    /// `min b_v` over all vertices; `None` without vertices.
    pub fn min_vertex_weight(&self) -> Option<Rational> {
        self.vertex.iter().min().cloned()
    }

    pub fn is_unit(&self) -> bool {
        self.edge.iter().chain(&self.vertex).all(|w| *w == Rational::one())
    }
}

fn check_positive(value: &Rational, what: impl FnOnce() -> String) -> Result<(), CoreError> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(CoreError::NonPositiveWeight {
            what: what(),
            value: value.clone(),
        })
    }
}

/// All weights equal to one: the standard fractional matching setting.
pub fn unit_weights(h: &Hypergraph) -> WeightSystem {
    WeightSystem::unit(h)
}

/// A family `E_1, ..., E_m` of (not necessarily distinct) edge sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredFamily {
    hypergraph: Hypergraph,
    colors: Vec<EdgeSet>,
}

impl ColoredFamily {
    /// Requires at least one color and no empty color.
    pub fn new(hypergraph: Hypergraph, colors: Vec<EdgeSet>) -> Result<Self, CoreError> {
        if let Some(i) = colors.iter().position(EdgeSet::is_empty) {
            return Err(CoreError::EmptyColor(i));
        }
        Self::new_allow_empty(hypergraph, colors)
    }

    /// Like [`ColoredFamily::new`] but tolerates empty colors.
    pub fn new_allow_empty(hypergraph: Hypergraph, colors: Vec<EdgeSet>) -> Result<Self, CoreError> {
        if colors.is_empty() {
            return Err(CoreError::NoColors);
        }
        for c in &colors {
            hypergraph.check_edge_set(c)?;
        }
        Ok(ColoredFamily { hypergraph, colors })
    }

    /// Builds the hypergraph from per-color edge lists; hypergraph edge
    /// indices follow first appearance.
    pub fn from_edge_lists(
        vertex_count: usize,
        uniformity: usize,
        partition: Option<Vec<usize>>,
        lists: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, CoreError> {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut colors = Vec::with_capacity(lists.len());
        for list in lists {
            let mut members = Vec::with_capacity(list.len());
            for edge in list {
                let e = canonical_edge(edge, vertex_count, uniformity)?;
                let id = *index.entry(e.clone()).or_insert_with(|| {
                    edges.push(e);
                    edges.len() - 1
                });
                members.push(id);
            }
            colors.push(EdgeSet::new(members)?);
        }
        let mut h = Hypergraph::new(vertex_count, uniformity, edges)?;
        if let Some(p) = partition {
            h = h.with_partition(p)?;
        }
        ColoredFamily::new(h, colors)
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn colors(&self) -> &[EdgeSet] {
        &self.colors
    }

    pub fn color(&self, i: usize) -> &EdgeSet {
        &self.colors[i]
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    /// Union of all colors.
    pub fn union(&self) -> EdgeSet {
        EdgeSet::collect_from(self.colors.iter().flat_map(|c| c.iter()))
    }

    /// Keeps only the first `m` colors.
    pub fn truncated(&self, m: usize) -> Result<Self, CoreError> {
        ColoredFamily::new_allow_empty(
            self.hypergraph.clone(),
            self.colors.iter().take(m).cloned().collect(),
        )
    }

    /// Appends one more color.
    pub fn with_color(&self, color: EdgeSet) -> Result<Self, CoreError> {
        self.hypergraph.check_edge_set(&color)?;
        let mut colors = self.colors.clone();
        colors.push(color);
        Ok(ColoredFamily {
            hypergraph: self.hypergraph.clone(),
            colors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Hypergraph {
        Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn incidence_vector_examples() {
        assert_eq!(triangle().incidence_vector(0).unwrap(), vec![1, 1, 0]);
        let h = Hypergraph::new(9, 3, vec![vec![6, 0, 3]]).unwrap();
        assert_eq!(
            h.incidence_vector(0).unwrap(),
            vec![1, 0, 0, 1, 0, 0, 1, 0, 0]
        );
        assert!(matches!(
            triangle().incidence_vector(3),
            Err(CoreError::EdgeOutOfRange { index: 3, count: 3 })
        ));
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(matches!(
            Hypergraph::new(3, 2, vec![vec![0, 1, 2]]),
            Err(CoreError::EdgeSize { .. })
        ));
        assert!(matches!(
            Hypergraph::new(3, 2, vec![vec![1, 1]]),
            Err(CoreError::RepeatedVertex(_))
        ));
        assert!(matches!(
            Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 0]]),
            Err(CoreError::DuplicateEdge(_))
        ));
        assert!(matches!(
            Hypergraph::new(3, 2, vec![vec![0, 3]]),
            Err(CoreError::VertexOutOfRange { vertex: 3, .. })
        ));
        assert!(matches!(Hypergraph::new(3, 1, vec![]), Err(CoreError::Uniformity(1))));
    }

    #[test]
    fn partite_validation() {
        let h = Hypergraph::new(4, 2, vec![vec![0, 1], vec![2, 3], vec![1, 2]]).unwrap();
        assert!(h.clone().with_partition(vec![0, 1, 0, 1]).is_ok());
        assert!(matches!(
            h.clone().with_partition(vec![0, 1, 1, 0]),
            Err(CoreError::NotPartite { side: 1, .. })
        ));
        assert!(matches!(
            h.with_partition(vec![0, 1]),
            Err(CoreError::PartitionLength { .. })
        ));
    }

    #[test]
    fn unit_weights_are_one() {
        let w = unit_weights(&triangle());
        assert!(w.is_unit());
        let all = triangle().all_edges();
        let prod = w.min_edge_weight(&all).unwrap() * w.min_vertex_weight().unwrap();
        assert_eq!(prod, Rational::one());
    }

    #[test]
    fn weights_must_be_positive() {
        let h = triangle();
        let err = WeightSystem::new(
            &h,
            vec![Rational::one(), Rational::zero(), Rational::one()],
            vec![Rational::one(); 3],
        );
        assert!(matches!(err, Err(CoreError::NonPositiveWeight { .. })));
    }

    #[test]
    fn edge_set_semantics() {
        assert!(matches!(EdgeSet::new(vec![2, 0, 2]), Err(CoreError::DuplicateInSet(2))));
        let s = EdgeSet::new(vec![3, 1]).unwrap();
        assert_eq!(s.as_slice(), &[1, 3]);
        assert_eq!(s.with(2).as_slice(), &[1, 2, 3]);
        assert_eq!(s.to_string(), "1,3");
        assert_eq!(EdgeSet::empty().to_string(), "-");
    }

    #[test]
    fn family_edges_follow_first_appearance() {
        let fam = ColoredFamily::from_edge_lists(
            4,
            2,
            None,
            vec![vec![vec![2, 3], vec![0, 1]], vec![vec![1, 0], vec![1, 2]]],
        )
        .unwrap();
        assert_eq!(fam.hypergraph().edges(), &[vec![2, 3], vec![0, 1], vec![1, 2]]);
        assert_eq!(fam.color(1).as_slice(), &[1, 2]);
        assert!(matches!(
            ColoredFamily::new(triangle(), vec![]),
            Err(CoreError::NoColors)
        ));
        assert!(matches!(
            ColoredFamily::new(triangle(), vec![EdgeSet::empty()]),
            Err(CoreError::EmptyColor(0))
        ));
    }

    proptest! {
        #[test]
        fn incidence_vectors_sum_to_r(
            r in 2usize..5,
            extra in 0usize..6,
            picks in prop::collection::vec(prop::collection::vec(any::<prop::sample::Index>(), 5), 1..8),
        ) {
            let v = r + extra;
            let mut edges: Vec<Vec<usize>> = Vec::new();
            for pick in picks {
                let mut pool: Vec<usize> = (0..v).collect();
                let mut e = Vec::new();
                for idx in pick.into_iter().take(r) {
                    e.push(pool.remove(idx.index(pool.len())));
                }
                e.sort_unstable();
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
            let h = Hypergraph::new(v, r, edges).unwrap();
            for e in 0..h.edge_count() {
                let chi = h.incidence_vector(e).unwrap();
                prop_assert_eq!(chi.iter().map(|&x| x as usize).sum::<usize>(), r);
            }
        }
    }
}
