use std::collections::BTreeSet;

use super::{CollapseSequence, CollapseStep, ComplexError, Face, SimplicialComplex, MAX_GROUND};

/// Number of clones for each ground element, indexed by element.
pub type Multiplicities = [usize];

/// A blown-up complex together with the `(element, copy)` pair behind each
/// new ground element. Copies are numbered from 1 and labels are ordered by
/// `(element, copy)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowUp {
    pub complex: SimplicialComplex,
    pub labels: Vec<(usize, usize)>,
}

impl BlowUp {
    pub fn index_of(&self, label: (usize, usize)) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Ground elements of the blow-up whose label is a first copy.
    pub fn originals(&self) -> Face {
        Face::from_elements(
            self.labels
                .iter()
                .enumerate()
                .filter(|(_, l)| l.1 == 1)
                .map(|(i, _)| i),
        )
        .expect("labels fit")
    }
}

fn blown_up_labels(ground: usize, mult: &Multiplicities) -> Result<Vec<(usize, usize)>, ComplexError> {
    if mult.len() != ground {
        return Err(ComplexError::Multiplicity(format!(
            "{} multiplicities for a ground set of size {ground}",
            mult.len()
        )));
    }
    if let Some(v) = mult.iter().position(|&k| k == 0) {
        return Err(ComplexError::Multiplicity(format!("element {v} has multiplicity 0")));
    }
    let total: usize = mult.iter().sum();
    if total > MAX_GROUND {
        return Err(ComplexError::GroundTooLarge(total));
    }
    Ok(mult
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| (1..=k).map(move |c| (v, c)))
        .collect())
}

/// Replaces every element `v` by `mult[v]` clones; a set is a face of the
/// result iff its projection is a face of `x`.
pub fn blow_up_complex(x: &SimplicialComplex, mult: &Multiplicities) -> Result<BlowUp, ComplexError> {
    let labels = blown_up_labels(x.ground_size(), mult)?;
    let facets = x.facets().iter().map(|f| {
        Face::from_elements(
            labels
                .iter()
                .enumerate()
                .filter(|(_, (v, _))| f.contains(*v))
                .map(|(i, _)| i),
        )
        .expect("labels fit")
    });
    let complex = SimplicialComplex::new(labels.len(), facets)?;
    Ok(BlowUp { complex, labels })
}

type LabelSet = BTreeSet<(usize, usize)>;

/// Transforms a collapse sequence of `x` into one of its blow-up with the
/// same `d`, adding one clone at a time.
pub fn blow_up_sequence(
    x: &SimplicialComplex,
    seq: &CollapseSequence,
    mult: &Multiplicities,
) -> Result<CollapseSequence, ComplexError> {
    let labels = blown_up_labels(x.ground_size(), mult)?;
    let lift = |f: Face| -> LabelSet { f.iter().map(|v| (v, 1)).collect() };
    let mut steps: Vec<(LabelSet, LabelSet)> = seq
        .steps
        .iter()
        .map(|s| (lift(s.sigma), lift(s.facet)))
        .collect();
    for (v, &k) in mult.iter().enumerate() {
        for c in 2..=k {
            steps = double(&steps, (v, 1), (v, c));
        }
    }
    let index = |set: &LabelSet| {
        Face::from_elements(set.iter().map(|l| labels.binary_search(l).expect("known label")))
            .expect("labels fit")
    };
    Ok(CollapseSequence {
        d: seq.d,
        steps: steps
            .iter()
            .map(|(s, f)| CollapseStep {
                sigma: index(s),
                facet: index(f),
            })
            .collect(),
    })
}

/// One doubling of `u` into `u` and `clone`: a step removing `u` becomes a
/// double step, first with `σ` and then with `σ` having `u` swapped for its
/// clone; every facet through `u` gains the clone.
fn double(
    steps: &[(LabelSet, LabelSet)],
    u: (usize, usize),
    clone: (usize, usize),
) -> Vec<(LabelSet, LabelSet)> {
    let mut out = Vec::with_capacity(steps.len() * 2);
    for (sigma, facet) in steps {
        let mut big = facet.clone();
        if facet.contains(&u) {
            big.insert(clone);
        }
        if sigma.contains(&u) {
            out.push((sigma.clone(), big));
            let mut s2 = sigma.clone();
            s2.remove(&u);
            s2.insert(clone);
            let mut f2 = facet.clone();
            f2.remove(&u);
            f2.insert(clone);
            out.push((s2, f2));
        } else {
            out.push((sigma.clone(), big));
        }
    }
    out
}
