//! Simplicial complexes stored as facet antichains, elementary collapses,
//! blow-ups and a brute-force collapsibility oracle.

mod blowup;
pub mod format;
mod generate;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use blowup::{blow_up_complex, blow_up_sequence, BlowUp, Multiplicities};
pub use generate::{
    build_nu_complex, generate_collapse, nu_table, CollapseMode, CollapseTrace, GenerateError,
    IterationRecord, NuTable, DEFAULT_MAX_ENUM,
};

/// Ground sets are limited to this many elements so that faces fit in a word.
pub const MAX_GROUND: usize = 64;

/// Default face-count cap for [`brute_force_collapsible`].
pub const DEFAULT_ORACLE_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("ground set of size {0} exceeds the limit of {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("element {element} out of range for ground set of size {ground}")]
    ElementOutOfRange { element: usize, ground: usize },
    #[error("{what} exceeds the limit {limit}")]
    ScaleExceeded { what: String, limit: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid multiplicities: {0}")]
    Multiplicity(String),
}

/// A finite set of ground elements, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn from_bits(bits: u64) -> Self {
        Face(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_GROUND, "element {i} exceeds face capacity");
        Face(1 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self, ComplexError> {
        let mut bits = 0u64;
        for i in elements {
            if i >= MAX_GROUND {
                return Err(ComplexError::ElementOutOfRange {
                    element: i,
                    ground: MAX_GROUND,
                });
            }
            bits |= 1 << i;
        }
        Ok(Face(bits))
    }

    /// All elements `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            Face(u64::MAX)
        } else {
            Face((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_GROUND && self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn minus(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> Face {
        self.union(Face::singleton(i))
    }

    pub fn without(self, i: usize) -> Face {
        self.minus(Face::singleton(i))
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest ground size that contains this face.
    pub fn span(self) -> usize {
        MAX_GROUND - self.0.leading_zeros() as usize
    }

    /// Every subset of this face, the empty set first.
    pub fn subsets(self) -> impl Iterator<Item = Face> {
        let full = self.0;
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Face(sub);
            if sub == full {
                done = true;
            } else {
                sub = (sub.wrapping_sub(full)) & full;
            }
            Some(out)
        })
    }
}

/// Lexicographic on the increasing element lists.
impl Ord for Face {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::hypergraph::write_index_list(f, &self.to_vec())
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for Face {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "-" {
            return Ok(Face::EMPTY);
        }
        let mut elements = Vec::new();
        for part in s.split(',') {
            let i: usize = part
                .trim()
                .parse()
                .map_err(|_| format!("bad face element {part:?}"))?;
            if elements.contains(&i) {
                return Err(format!("element {i} repeated"));
            }
            elements.push(i);
        }
        Face::from_elements(elements).map_err(|e| e.to_string())
    }
}

/// A simplicial complex on `0..ground_size`, kept as the sorted antichain of
/// its facets. `{∅}` has the single facet `∅`; the void complex has none.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    ground_size: usize,
    facets: Vec<Face>,
}

impl SimplicialComplex {
    /// Reduces `faces` to their maximal members.
    pub fn new<I: IntoIterator<Item = Face>>(ground_size: usize, faces: I) -> Result<Self, ComplexError> {
        if ground_size > MAX_GROUND {
            return Err(ComplexError::GroundTooLarge(ground_size));
        }
        let full = Face::full(ground_size);
        let faces: Vec<Face> = faces.into_iter().collect();
        if let Some(f) = faces.iter().find(|f| !f.is_subset(full)) {
            return Err(ComplexError::ElementOutOfRange {
                element: f.span() - 1,
                ground: ground_size,
            });
        }
        Ok(SimplicialComplex {
            ground_size,
            facets: maximal(faces),
        })
    }

    /// The complex `{∅}`.
    pub fn empty_face_only(ground_size: usize) -> Self {
        assert!(ground_size <= MAX_GROUND);
        SimplicialComplex {
            ground_size,
            facets: vec![Face::EMPTY],
        }
    }

    pub fn full_simplex(ground_size: usize) -> Self {
        assert!(ground_size <= MAX_GROUND);
        SimplicialComplex {
            ground_size,
            facets: vec![Face::full(ground_size)],
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn is_empty_face_only(&self) -> bool {
        self.facets == [Face::EMPTY]
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, face: Face) -> bool {
        self.facets.iter().any(|f| face.is_subset(*f))
    }

    pub fn facets_containing(&self, face: Face) -> Vec<Face> {
        self.facets
            .iter()
            .copied()
            .filter(|f| face.is_subset(*f))
            .collect()
    }

    pub fn unique_facet(&self, face: Face) -> Option<Face> {
        let mut found = None;
        for f in &self.facets {
            if face.is_subset(*f) {
                if found.is_some() {
                    return None;
                }
                found = Some(*f);
            }
        }
        found
    }

    /// All faces, sorted; fails once more than `limit` are found.
    pub fn faces(&self, limit: usize) -> Result<Vec<Face>, ComplexError> {
        let mut seen = HashSet::new();
        for f in &self.facets {
            if 1u128 << f.len() > limit as u128 {
                return Err(face_limit(limit));
            }
            for s in f.subsets() {
                if seen.insert(s) && seen.len() > limit {
                    return Err(face_limit(limit));
                }
            }
        }
        let mut faces: Vec<Face> = seen.into_iter().collect();
        faces.sort();
        Ok(faces)
    }

    /// Removes `sigma` and every face containing it. `sigma` must be a
    /// nonempty face lying in exactly one facet.
    pub fn collapse(&self, sigma: Face) -> Result<SimplicialComplex, CollapseError> {
        if sigma.is_empty() {
            return Err(CollapseError::EmptyFace);
        }
        let containing = self.facets_containing(sigma);
        let facet = match containing.len() {
            0 => return Err(CollapseError::NotAFace),
            1 => containing[0],
            k => return Err(CollapseError::NotUnique(k)),
        };
        Ok(self.remove_star(sigma, facet))
    }

    fn remove_star(&self, sigma: Face, facet: Face) -> SimplicialComplex {
        let mut facets: Vec<Face> = self.facets.iter().copied().filter(|f| *f != facet).collect();
        let others = facets.clone();
        for x in sigma.iter() {
            let g = facet.without(x);
            if !others.iter().any(|o| g.is_subset(*o)) {
                facets.push(g);
            }
        }
        facets.sort();
        SimplicialComplex {
            ground_size: self.ground_size,
            facets,
        }
    }

    /// Faces contained in `subset`.
    pub fn induced(&self, subset: Face) -> SimplicialComplex {
        SimplicialComplex {
            ground_size: self.ground_size,
            facets: maximal(self.facets.iter().map(|f| f.intersection(subset)).collect()),
        }
    }
}

fn face_limit(limit: usize) -> ComplexError {
    ComplexError::ScaleExceeded {
        what: "face count".into(),
        limit,
    }
}

/// Maximal members of `faces`, sorted and deduplicated.
fn maximal(mut faces: Vec<Face>) -> Vec<Face> {
    faces.sort_by_key(|f| std::cmp::Reverse(f.len()));
    let mut out: Vec<Face> = Vec::with_capacity(faces.len());
    for f in faces {
        if !out.iter().any(|g| f.is_subset(*g)) {
            out.push(f);
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollapseError {
    #[error("the empty face cannot be collapsed")]
    EmptyFace,
    #[error("not a face of the current complex")]
    NotAFace,
    #[error("contained in {0} facets")]
    NotUnique(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CollapseStep {
    pub sigma: Face,
    pub facet: Face,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseSequence {
    pub d: usize,
    pub steps: Vec<CollapseStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollapseFailureReason {
    #[error("|sigma| = {size} exceeds d = {d}")]
    TooLarge { size: usize, d: usize },
    #[error("sigma is not contained in the stated facet")]
    NotInFacet,
    #[error(transparent)]
    Illegal(#[from] CollapseError),
    #[error("stated facet {stated} differs from the containing facet {actual}")]
    WrongFacet { stated: Face, actual: Face },
    #[error("element outside the ground set")]
    OutOfGround,
    #[error("sequence ends at a complex other than {{∅}}")]
    NotReduced,
}

/// Index of the failing step (`steps.len()` for a bad final complex).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct CollapseFailure {
    pub step: usize,
    pub reason: CollapseFailureReason,
}

/// Replays `seq` on `x`, checking every step is an elementary `d`-collapse
/// and that the result is `{∅}`.
pub fn verify_collapse(x: &SimplicialComplex, seq: &CollapseSequence) -> Result<(), CollapseFailure> {
    let full = Face::full(x.ground_size());
    let mut cur = x.clone();
    for (i, step) in seq.steps.iter().enumerate() {
        let fail = |reason| CollapseFailure { step: i, reason };
        if !step.sigma.union(step.facet).is_subset(full) {
            return Err(fail(CollapseFailureReason::OutOfGround));
        }
        if step.sigma.len() > seq.d {
            return Err(fail(CollapseFailureReason::TooLarge {
                size: step.sigma.len(),
                d: seq.d,
            }));
        }
        if !step.sigma.is_subset(step.facet) {
            return Err(fail(CollapseFailureReason::NotInFacet));
        }
        if step.sigma.is_empty() {
            return Err(fail(CollapseError::EmptyFace.into()));
        }
        let containing = cur.facets_containing(step.sigma);
        match containing.len() {
            0 => return Err(fail(CollapseError::NotAFace.into())),
            1 if containing[0] != step.facet => {
                return Err(fail(CollapseFailureReason::WrongFacet {
                    stated: step.facet,
                    actual: containing[0],
                }))
            }
            1 => {}
            k => return Err(fail(CollapseError::NotUnique(k).into())),
        }
        cur = cur.remove_star(step.sigma, step.facet);
    }
    if cur.is_empty_face_only() {
        Ok(())
    } else {
        Err(CollapseFailure {
            step: seq.steps.len(),
            reason: CollapseFailureReason::NotReduced,
        })
    }
}

/// Exhaustive search over elementary `d`-collapse orders. Returns a
/// sequence reducing `x` to `{∅}` if one exists.
pub fn brute_force_collapse(
    x: &SimplicialComplex,
    d: usize,
    limit: usize,
) -> Result<Option<CollapseSequence>, ComplexError> {
    x.faces(limit)?;
    let mut failed = HashSet::new();
    let mut steps = Vec::new();
    if collapse_search(x, d, &mut failed, &mut steps) {
        Ok(Some(CollapseSequence { d, steps }))
    } else {
        Ok(None)
    }
}

pub fn brute_force_collapsible(x: &SimplicialComplex, d: usize, limit: usize) -> Result<bool, ComplexError> {
    Ok(brute_force_collapse(x, d, limit)?.is_some())
}

fn collapse_search(
    x: &SimplicialComplex,
    d: usize,
    failed: &mut HashSet<Vec<Face>>,
    steps: &mut Vec<CollapseStep>,
) -> bool {
    if x.is_empty_face_only() {
        return true;
    }
    if failed.contains(&x.facets) {
        return false;
    }
    for &facet in &x.facets {
        for sigma in facet.subsets() {
            if sigma.is_empty() || sigma.len() > d || x.unique_facet(sigma) != Some(facet) {
                continue;
            }
            let next = x.remove_star(sigma, facet);
            steps.push(CollapseStep { sigma, facet });
            if collapse_search(&next, d, failed, steps) {
                return true;
            }
            steps.pop();
        }
    }
    failed.insert(x.facets.clone());
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(v: &[usize]) -> Face {
        Face::from_elements(v.iter().copied()).unwrap()
    }

    fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::new(3, [face(&[0, 1]), face(&[0, 2]), face(&[1, 2])]).unwrap()
    }

    #[test]
    fn face_basics() {
        let f = face(&[3, 0, 5]);
        assert_eq!(f.to_vec(), vec![0, 3, 5]);
        assert_eq!(f.to_string(), "0,3,5");
        assert_eq!(Face::EMPTY.to_string(), "-");
        assert_eq!("0,3,5".parse::<Face>().unwrap(), f);
        assert_eq!("-".parse::<Face>().unwrap(), Face::EMPTY);
        assert!("1,1".parse::<Face>().is_err());
        assert_eq!(f.subsets().count(), 8);
        assert_eq!(Face::EMPTY.subsets().collect::<Vec<_>>(), vec![Face::EMPTY]);
        assert!(face(&[0, 2]) < face(&[1]));
        assert!(Face::EMPTY < face(&[0]));
        assert_eq!(f.span(), 6);
    }

    #[test]
    fn antichain_reduction() {
        let x = SimplicialComplex::new(3, [face(&[0]), face(&[0, 1]), face(&[0, 1]), Face::EMPTY]).unwrap();
        assert_eq!(x.facets(), &[face(&[0, 1])]);
        assert!(x.contains(face(&[1])));
        assert!(!x.contains(face(&[2])));
        assert!(SimplicialComplex::new(2, [face(&[2])]).is_err());
        assert_eq!(SimplicialComplex::new(2, [Face::EMPTY]).unwrap(), SimplicialComplex::empty_face_only(2));
        assert!(SimplicialComplex::new(2, []).unwrap().is_void());
    }

    #[test]
    fn face_enumeration() {
        let x = triangle_boundary();
        assert_eq!(x.faces(64).unwrap().len(), 7);
        assert!(x.faces(6).is_err());
    }

    #[test]
    fn elementary_collapse() {
        let x = triangle_boundary();
        assert_eq!(x.collapse(face(&[0])), Err(CollapseError::NotUnique(2)));
        let y = x.collapse(face(&[0, 1])).unwrap();
        assert_eq!(y.facets(), &[face(&[0, 2]), face(&[1, 2])]);
        let z = y.collapse(face(&[0])).unwrap();
        assert_eq!(z.facets(), &[face(&[1, 2])]);
        assert_eq!(x.collapse(Face::EMPTY), Err(CollapseError::EmptyFace));
        assert_eq!(x.collapse(face(&[0, 1, 2])), Err(CollapseError::NotAFace));
    }

    #[test]
    fn verify_reports_step() {
        let x = SimplicialComplex::full_simplex(1);
        let ok = CollapseSequence {
            d: 1,
            steps: vec![CollapseStep {
                sigma: face(&[0]),
                facet: face(&[0]),
            }],
        };
        assert_eq!(verify_collapse(&x, &ok), Ok(()));
        let mut bad = ok.clone();
        bad.d = 0;
        assert_eq!(verify_collapse(&x, &bad).unwrap_err().step, 0);

        let y = triangle_boundary();
        let seq = CollapseSequence {
            d: 2,
            steps: vec![
                CollapseStep { sigma: face(&[0, 1]), facet: face(&[0, 1]) },
                CollapseStep { sigma: face(&[2]), facet: face(&[1, 2]) },
            ],
        };
        let err = verify_collapse(&y, &seq).unwrap_err();
        assert_eq!(err.step, 1);
        assert_eq!(err.reason, CollapseFailureReason::Illegal(CollapseError::NotUnique(2)));

        let short = CollapseSequence { d: 2, steps: seq.steps[..1].to_vec() };
        assert_eq!(verify_collapse(&y, &short).unwrap_err().reason, CollapseFailureReason::NotReduced);
    }

    #[test]
    fn oracle_small_cases() {
        let limit = DEFAULT_ORACLE_LIMIT;
        assert!(brute_force_collapsible(&SimplicialComplex::full_simplex(3), 1, limit).unwrap());
        assert!(!brute_force_collapsible(&triangle_boundary(), 1, limit).unwrap());
        assert!(brute_force_collapsible(&triangle_boundary(), 2, limit).unwrap());
        for d in 0..3 {
            assert!(brute_force_collapsible(&SimplicialComplex::empty_face_only(4), d, limit).unwrap());
        }
        let seq = brute_force_collapse(&triangle_boundary(), 2, limit).unwrap().unwrap();
        assert_eq!(verify_collapse(&triangle_boundary(), &seq), Ok(()));
        assert!(brute_force_collapsible(&SimplicialComplex::full_simplex(7), 1, limit).is_err());
    }
}
