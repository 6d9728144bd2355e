//! The complex `X = {E' ⊆ E : ν*_{a,b}(E') < n}` and a constructive
//! collapse of it. Each iteration removes an inclusion-minimal face `Ē`
//! attaining the largest `ν*` in the current complex, then lowers the weights
//! of the other edges by `ε` so that what remains is again a complex of the
//! same kind with threshold `n̄`. Every step of the argument is checked
//! exactly at runtime.

use num_traits::ToPrimitive;
use thiserror::Error;

use super::{verify_collapse, CollapseSequence, CollapseStep, ComplexError, Face, SimplicialComplex};
use crate::hypergraph::{CoreError, EdgeSet, Hypergraph, WeightSystem};
use crate::lp::{dual_is_unique, nu_star, LpError};
use crate::rational::Rational;

/// Default cap on `|E|` for subset enumeration.
pub const DEFAULT_MAX_ENUM: usize = 15;

const RETRY_BUDGET: usize = 40;

/// Vertex weights are perturbed along `b_v (v+1)^j` for `j = 1, 2, …` up to
/// this power, each direction with its own run of halvings: a single line
/// can be orthogonal to an edge of the cover polyhedron for every `η`.
const MAX_DIRECTION_POWER: u32 = 6;
const HALVINGS_PER_DIRECTION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapseMode {
    General,
    /// Uses the per-side bound available for `r`-partite hypergraphs.
    Partite,
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("edge set of size {size} exceeds the enumeration limit {limit}")]
    ScaleExceeded { size: usize, limit: usize },
    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(Rational),
    #[error("partite mode needs a vertex partition")]
    MissingPartition,
    #[error("iteration {iteration}: no perturbation of the vertex weights gave a unique optimal cover")]
    PerturbationFailed {
        iteration: usize,
        trace: Box<CollapseTrace>,
    },
    #[error("iteration {iteration}: no admissible epsilon found")]
    EpsilonFailed {
        iteration: usize,
        trace: Box<CollapseTrace>,
    },
    #[error("iteration {iteration}: {claim}")]
    ClaimViolated {
        iteration: usize,
        claim: String,
        trace: Box<CollapseTrace>,
    },
}

/// `ν*` of every face of `{E' ⊆ E : ν* < threshold}`, indexed by the bitmask
/// of positions in `E`; `None` marks non-faces.
#[derive(Debug, Clone)]
pub struct NuTable {
    edges: EdgeSet,
    values: Vec<Option<Rational>>,
}

impl NuTable {
    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn value(&self, face: Face) -> Option<&Rational> {
        self.values.get(face.bits() as usize).and_then(|v| v.as_ref())
    }

    pub fn is_face(&self, face: Face) -> bool {
        self.value(face).is_some()
    }

    pub fn complex(&self) -> SimplicialComplex {
        let m = self.edges.len();
        let facets = (0..self.values.len()).filter_map(|mask| {
            self.values[mask].as_ref()?;
            let maximal = (0..m).all(|i| mask >> i & 1 == 1 || self.values[mask | 1 << i].is_none());
            maximal.then_some(Face::from_bits(mask as u64))
        });
        SimplicialComplex::new(m, facets).expect("positions fit")
    }

    /// Largest value over the faces, and the first face attaining it in
    /// order of cardinality, then lexicographically.
    pub fn max_attainer(&self) -> (Rational, Face) {
        let mut best: Option<(&Rational, Face)> = None;
        for (mask, v) in self.values.iter().enumerate() {
            let Some(v) = v else { continue };
            let f = Face::from_bits(mask as u64);
            let better = match &best {
                None => true,
                Some((bv, bf)) => v > *bv || (v == *bv && (f.len(), f) < (bf.len(), *bf)),
            };
            if better {
                best = Some((v, f));
            }
        }
        let (v, f) = best.expect("the empty set is always a face");
        (v.clone(), f)
    }

    fn edge_set(&self, face: Face) -> EdgeSet {
        positions_to_edges(&self.edges, face)
    }
}

fn positions_to_edges(edges: &EdgeSet, face: Face) -> EdgeSet {
    let slice = edges.as_slice();
    EdgeSet::collect_from(face.iter().map(|i| slice[i]))
}

/// Computes `ν*` on every subset of `edges` below `threshold`, skipping
/// supersets of non-faces.
pub fn nu_table(
    h: &Hypergraph,
    edges: &EdgeSet,
    w: &WeightSystem,
    threshold: &Rational,
    max_enum: usize,
) -> Result<NuTable, GenerateError> {
    h.check_edge_set(edges)?;
    let m = edges.len();
    if m > max_enum || m >= super::MAX_GROUND {
        return Err(GenerateError::ScaleExceeded {
            size: m,
            limit: max_enum,
        });
    }
    let mut values: Vec<Option<Rational>> = vec![None; 1 << m];
    let mut table = NuTable {
        edges: edges.clone(),
        values: Vec::new(),
    };
    if threshold.is_positive() {
        values[0] = Some(Rational::zero());
    }
    for mask in 1usize..1 << m {
        if values[0].is_none() || (0..m).any(|i| mask >> i & 1 == 1 && values[mask ^ 1 << i].is_none()) {
            continue;
        }
        let set = positions_to_edges(edges, Face::from_bits(mask as u64));
        let v = nu_star(h, &set, w)?.value;
        if v < *threshold {
            values[mask] = Some(v);
        }
    }
    table.values = values;
    Ok(table)
}

/// `{E' ⊆ E : ν*_{a,b}(E') < n}` on the positions `0..|E|` of `edges`.
pub fn build_nu_complex(
    h: &Hypergraph,
    edges: &EdgeSet,
    w: &WeightSystem,
    n: &Rational,
    max_enum: usize,
) -> Result<SimplicialComplex, GenerateError> {
    Ok(nu_table(h, edges, w, n, max_enum)?.complex())
}

/// What one iteration of the generator did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    /// Largest `ν*` in the current complex.
    pub nbar: Rational,
    pub ebar: Face,
    /// Edges `e ∉ Ē` with `Ē ∪ {e}` still a face.
    pub eplus: Face,
    /// Perturbation `b_v ← b_v (1 + η (v+1)^j)`; `η` is zero when the
    /// weights were already generic.
    pub eta: Rational,
    pub eta_power: u32,
    /// Edge weights by position and the perturbed vertex weights in force
    /// during this iteration.
    pub edge_weights: Vec<Rational>,
    pub vertex_weights: Vec<Rational>,
    /// `None` when the collapse left `{∅}`.
    pub epsilon: Option<Rational>,
    pub next_edge_weights: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseTrace {
    pub mode: CollapseMode,
    pub d: usize,
    pub iterations: Vec<IterationRecord>,
}

/// Produces a verified collapse sequence of `X_{a,b,n}` on `edges`.
///
/// General mode uses `d = ⌈rn/(a̲b̲)⌉ − 1`; partite mode uses
/// `d = r⌊n̄/(a̲b̲)⌋` with `n̄` from the first iteration.
pub fn generate_collapse(
    h: &Hypergraph,
    edges: &EdgeSet,
    w: &WeightSystem,
    n: &Rational,
    mode: CollapseMode,
    max_enum: usize,
) -> Result<(CollapseSequence, CollapseTrace), GenerateError> {
    if !n.is_positive() {
        return Err(GenerateError::NonPositiveThreshold(n.clone()));
    }
    if mode == CollapseMode::Partite && h.partition().is_none() {
        return Err(GenerateError::MissingPartition);
    }
    let table = nu_table(h, edges, w, n, max_enum)?;
    let mut gen = Generator {
        h,
        edges,
        max_enum,
        r: Rational::from(h.uniformity()),
        mode,
        trace: CollapseTrace {
            mode,
            d: 0,
            iterations: Vec::new(),
        },
        steps: Vec::new(),
    };
    let start = table.complex();
    let b_min = w.min_vertex_weight().expect("hypergraphs have vertices");
    let Some(a_min) = w.min_edge_weight(edges) else {
        return Ok(gen.finish_trivial());
    };
    if mode == CollapseMode::General {
        gen.trace.d = ceil_minus_one(&(&gen.r * n / (&a_min * &b_min)));
    }
    if *n <= &a_min * &b_min {
        return Ok(gen.finish_trivial());
    }
    gen.run(w.clone(), n.clone(), start.clone(), table)?;
    let seq = CollapseSequence {
        d: gen.trace.d,
        steps: gen.steps,
    };
    if let Err(e) = verify_collapse(&start, &seq) {
        return Err(GenerateError::ClaimViolated {
            iteration: gen.trace.iterations.len(),
            claim: format!("generated sequence rejected: {e}"),
            trace: Box::new(gen.trace),
        });
    }
    Ok((seq, gen.trace))
}

fn ceil_minus_one(x: &Rational) -> usize {
    (x.ceil() - num_bigint::BigInt::from(1)).to_usize().unwrap_or(0)
}

fn floor_usize(x: &Rational) -> usize {
    x.floor().to_usize().unwrap_or(0)
}

struct Generator<'a> {
    h: &'a Hypergraph,
    edges: &'a EdgeSet,
    max_enum: usize,
    r: Rational,
    mode: CollapseMode,
    trace: CollapseTrace,
    steps: Vec<CollapseStep>,
}

/// State after choosing the vertex weights of an iteration.
struct Perturbed {
    w: WeightSystem,
    eta: Rational,
    power: u32,
    table: NuTable,
    nbar: Rational,
    ebar: Face,
    /// Partite bound `r⌊n̄/(a̲b̲)⌋` for this iteration.
    k: usize,
}

impl Generator<'_> {
    fn finish_trivial(self) -> (CollapseSequence, CollapseTrace) {
        (
            CollapseSequence {
                d: self.trace.d,
                steps: Vec::new(),
            },
            self.trace,
        )
    }

    fn edge_weights(&self, w: &WeightSystem) -> Vec<Rational> {
        self.edges.iter().map(|e| w.edge_weight(e).clone()).collect()
    }

    fn a_min(&self, w: &WeightSystem) -> Rational {
        w.min_edge_weight(self.edges).expect("edge set is nonempty")
    }

    fn b_min(w: &WeightSystem) -> Rational {
        w.min_vertex_weight().expect("hypergraphs have vertices")
    }

    fn violated(&self, claim: impl Into<String>) -> GenerateError {
        GenerateError::ClaimViolated {
            iteration: self.trace.iterations.len(),
            claim: claim.into(),
            trace: Box::new(self.trace.clone()),
        }
    }

    fn run(
        &mut self,
        mut w: WeightSystem,
        mut threshold: Rational,
        mut x: SimplicialComplex,
        mut table: NuTable,
    ) -> Result<(), GenerateError> {
        let mut k_prev: Option<usize> = None;
        while !x.is_empty_face_only() {
            let p = self.perturb(&w, &threshold, &x, table, k_prev)?;
            if self.mode == CollapseMode::Partite && k_prev.is_none() {
                self.trace.d = p.k;
            }
            k_prev = Some(p.k);

            let eplus = self.check_unique_facet(&x, &p)?;
            self.check_vertex_bound(&p)?;
            let facet = p.ebar.union(eplus);
            let x_hat = x
                .collapse(p.ebar)
                .map_err(|e| self.violated(format!("collapse of the minimal attainer failed: {e}")))?;
            self.steps.push(CollapseStep {
                sigma: p.ebar,
                facet,
            });
            let mut record = IterationRecord {
                nbar: p.nbar.clone(),
                ebar: p.ebar,
                eplus,
                eta: p.eta.clone(),
                eta_power: p.power,
                edge_weights: self.edge_weights(&p.w),
                vertex_weights: p.w.vertex_weights().to_vec(),
                epsilon: None,
                next_edge_weights: None,
            };
            if x_hat.is_empty_face_only() {
                self.trace.iterations.push(record);
                break;
            }
            let (eps, w_hat, table_hat) = match self.choose_epsilon(&p, &x_hat, &threshold) {
                Some(found) => found,
                None => {
                    self.trace.iterations.push(record);
                    return Err(GenerateError::EpsilonFailed {
                        iteration: self.trace.iterations.len() - 1,
                        trace: Box::new(self.trace.clone()),
                    });
                }
            };
            record.epsilon = Some(eps);
            record.next_edge_weights = Some(self.edge_weights(&w_hat));
            self.trace.iterations.push(record);
            w = w_hat;
            threshold = p.nbar;
            x = x_hat;
            table = table_hat;
        }
        Ok(())
    }

    /// Picks `b' ≥ b` leaving the complex unchanged and making the optimal
    /// cover of the chosen `Ē` unique. Tries `b` itself first.
    fn perturb(
        &self,
        w: &WeightSystem,
        threshold: &Rational,
        x: &SimplicialComplex,
        table: NuTable,
        k_prev: Option<usize>,
    ) -> Result<Perturbed, GenerateError> {
        let (nbar0, _) = table.max_attainer();
        let vc = self.h.vertex_count();
        let gap = (threshold - &nbar0) / (Rational::from(2usize) * threshold);
        let mut candidates = vec![(0u32, Rational::zero())];
        for power in 1..=MAX_DIRECTION_POWER {
            let c_max = Rational::from(vc.pow(power));
            let mut eta = (&gap / (c_max + Rational::one()))
                .floor_power_of_two()
                .expect("n̄ lies below the threshold");
            for _ in 0..HALVINGS_PER_DIRECTION {
                candidates.push((power, eta.clone()));
                eta = &eta / Rational::from(2usize);
            }
        }
        let mut current = Some(table);
        for (power, eta) in candidates {
            let (w_try, t) = match current.take() {
                Some(t) => (w.clone(), t),
                None => {
                    let mut w_try = w.clone();
                    for v in 0..vc {
                        let factor = Rational::one() + &eta * Rational::from((v + 1).pow(power));
                        w_try.set_vertex_weight(v, w.vertex_weight(v) * factor)?;
                    }
                    let t = nu_table(self.h, self.edges, &w_try, threshold, self.max_enum)?;
                    if t.complex() != *x {
                        continue;
                    }
                    (w_try, t)
                }
            };
            let (nbar, ebar) = t.max_attainer();
            let k = floor_usize(&(&nbar / (self.a_min(&w_try) * Self::b_min(&w_try))))
                * self.h.uniformity();
            if self.mode == CollapseMode::Partite && k_prev.is_some_and(|kp| k > kp) {
                continue;
            }
            if !dual_is_unique(self.h, &t.edge_set(ebar), &w_try)?.is_unique() {
                continue;
            }
            return Ok(Perturbed {
                w: w_try,
                eta,
                power,
                table: t,
                nbar,
                ebar,
                k,
            });
        }
        Err(GenerateError::PerturbationFailed {
            iteration: self.trace.iterations.len(),
            trace: Box::new(self.trace.clone()),
        })
    }

    /// `Ē ∪ E⁺` must be the only facet containing `Ē`.
    fn check_unique_facet(&self, x: &SimplicialComplex, p: &Perturbed) -> Result<Face, GenerateError> {
        let m = self.edges.len();
        let mut eplus = Face::EMPTY;
        for i in (0..m).filter(|&i| !p.ebar.contains(i)) {
            if p.table.is_face(p.ebar.with(i)) {
                eplus = eplus.with(i);
            }
        }
        let facet = p.ebar.union(eplus);
        let containing = x.facets_containing(p.ebar);
        if containing != [facet] {
            return Err(self.violated(format!(
                "Ē = {} lies in facets {:?}, expected only {}",
                p.ebar, containing, facet
            )));
        }
        Ok(eplus)
    }

    /// Checks `f̄ > 0` on `Ē`, that at least `|Ē|` vertex constraints are
    /// tight, and the counting bound on the tight vertices.
    fn check_vertex_bound(&self, p: &Perturbed) -> Result<(), GenerateError> {
        let set = p.table.edge_set(p.ebar);
        let lp = nu_star(self.h, &set, &p.w)?;
        if set.iter().any(|e| !lp.primal.value(e).is_positive()) {
            return Err(self.violated("optimal matching on Ē vanishes on some edge"));
        }
        let loads = lp.primal.loads(self.h);
        let tight: Vec<usize> = (0..self.h.vertex_count())
            .filter(|&v| loads[v] == *p.w.vertex_weight(v))
            .collect();
        if tight.len() < set.len() {
            return Err(self.violated(format!(
                "only {} tight vertices for |Ē| = {}",
                tight.len(),
                set.len()
            )));
        }
        let ab = self.a_min(&p.w) * Self::b_min(&p.w);
        match self.mode {
            CollapseMode::General => {
                if Rational::from(tight.len()) * &ab > &self.r * &p.nbar {
                    return Err(self.violated("tight vertex count exceeds r·n̄/(a̲b̲)"));
                }
            }
            CollapseMode::Partite => {
                let side = self.h.partition().expect("checked on entry");
                let cap = floor_usize(&(&p.nbar / &ab));
                for s in 0..self.h.uniformity() {
                    let count = tight.iter().filter(|&&v| side[v] == s).count();
                    if count > cap {
                        return Err(self.violated(format!(
                            "{count} tight vertices on side {s}, bound {cap}"
                        )));
                    }
                }
            }
        }
        if p.ebar.len() > self.trace.d {
            return Err(self.violated(format!("|Ē| = {} exceeds d = {}", p.ebar.len(), self.trace.d)));
        }
        Ok(())
    }

    /// Lowers the weights outside `Ē` by the largest power-of-two `ε` below
    /// `(n − n̄)/(2|E|)`, `n` the current threshold, that passes every check, halving on failure.
    fn choose_epsilon(
        &self,
        p: &Perturbed,
        x_hat: &SimplicialComplex,
        threshold: &Rational,
    ) -> Option<(Rational, WeightSystem, NuTable)> {
        let gap = (threshold - &p.nbar) / Rational::from(2 * self.edges.len());
        let mut eps = gap.floor_power_of_two()?;
        let b_min = Self::b_min(&p.w);
        for _ in 0..=RETRY_BUDGET {
            if let Some(found) = self.try_epsilon(p, x_hat, &eps, &b_min) {
                return Some((eps, found.0, found.1));
            }
            eps = &eps / Rational::from(2usize);
        }
        None
    }

    fn try_epsilon(
        &self,
        p: &Perturbed,
        x_hat: &SimplicialComplex,
        eps: &Rational,
        b_min: &Rational,
    ) -> Option<(WeightSystem, NuTable)> {
        let mut w_hat = p.w.clone();
        for (i, e) in self.edges.iter().enumerate() {
            if p.ebar.contains(i) {
                continue;
            }
            let a = p.w.edge_weight(e) - eps;
            if !a.is_positive() {
                return None;
            }
            w_hat.set_edge_weight(e, a).ok()?;
        }
        let table = nu_table(self.h, self.edges, &w_hat, &p.nbar, self.max_enum).ok()?;
        if table.complex() != *x_hat {
            return None;
        }
        let ab = self.a_min(&w_hat) * b_min;
        if p.nbar <= ab {
            return None;
        }
        match self.mode {
            CollapseMode::General => {
                if ceil_minus_one(&(&self.r * &p.nbar / &ab)) > self.trace.d {
                    return None;
                }
            }
            CollapseMode::Partite => {
                let (next, _) = table.max_attainer();
                if floor_usize(&(&next / &ab)) * self.h.uniformity() > p.k {
                    return None;
                }
            }
        }
        Some((w_hat, table))
    }
}
