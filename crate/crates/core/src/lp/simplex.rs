//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Problems are `max` or `min` of `c·x` subject to `≤`, `≥` and `=` rows and
//! `x ≥ 0`. The optimum comes with row multipliers `y` satisfying
//! `Σ y_i rhs_i = value`; for a maximization `y_i ≥ 0` on `≤` rows, `y_i ≤ 0`
//! on `≥` rows, and `Σ_i y_i A_ij ≥ c_j` for every column. A minimization is
//! handled as the maximization of `-c` with the multipliers negated back.

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    GreaterEq,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub value: Rational,
    pub x: Vec<Rational>,
    pub duals: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Optimal(Solution),
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> Outcome {
        let max_obj: Vec<Rational> = match self.sense {
            Sense::Maximize => self.objective.clone(),
            Sense::Minimize => self.objective.iter().map(|c| -c).collect(),
        };
        match Tableau::build(self).run(&max_obj) {
            Outcome::Optimal(mut sol) if self.sense == Sense::Minimize => {
                sol.value = -sol.value;
                for y in &mut sol.duals {
                    *y = -&*y;
                }
                Outcome::Optimal(sol)
            }
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Original,
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    kinds: Vec<Column>,
    basis: Vec<usize>,
    /// Column holding the initial identity entry of each row.
    unit_col: Vec<usize>,
    /// Rows multiplied by -1 to make the right-hand side non-negative.
    flipped: Vec<bool>,
    num_original: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.objective.len();
        let m = lp.constraints.len();
        let mut flipped = vec![false; m];
        let mut relations = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let rel = if c.rhs.is_negative() {
                flipped[i] = true;
                match c.relation {
                    Relation::LessEq => Relation::GreaterEq,
                    Relation::GreaterEq => Relation::LessEq,
                    Relation::Equal => Relation::Equal,
                }
            } else {
                c.relation
            };
            relations.push(rel);
        }
        let slacks = relations.iter().filter(|r| **r != Relation::Equal).count();
        let artificials = relations.iter().filter(|r| **r != Relation::LessEq).count();
        let width = n + slacks + artificials;
        let mut kinds = vec![Column::Original; n];
        kinds.extend(std::iter::repeat_n(Column::Slack, slacks));
        kinds.extend(std::iter::repeat_n(Column::Artificial, artificials));

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut unit_col = Vec::with_capacity(m);
        let mut next_slack = n;
        let mut next_art = n + slacks;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = if flipped[i] { -a } else { a.clone() };
            }
            let unit = match relations[i] {
                Relation::LessEq => {
                    row[next_slack] = Rational::one();
                    next_slack += 1;
                    next_slack - 1
                }
                Relation::GreaterEq => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    row[next_art] = Rational::one();
                    next_art += 1;
                    next_art - 1
                }
                Relation::Equal => {
                    row[next_art] = Rational::one();
                    next_art += 1;
                    next_art - 1
                }
            };
            rows.push(row);
            rhs.push(if flipped[i] { -&c.rhs } else { c.rhs.clone() });
            basis.push(unit);
            unit_col.push(unit);
        }
        Tableau {
            rows,
            rhs,
            kinds,
            basis,
            unit_col,
            flipped,
            num_original: n,
        }
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    /// Reduced costs `c_B B^{-1} A_j - c_j` for the given column costs.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut red: Vec<Rational> = cost.iter().map(|c| -c).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    red[j] += cb * a;
                }
            }
        }
        red
    }

    fn pivot(&mut self, p: usize, q: usize, red: &mut [Rational]) {
        let piv = self.rows[p][q].clone();
        if piv != Rational::one() {
            for a in self.rows[p].iter_mut() {
                if !a.is_zero() {
                    *a = &*a / &piv;
                }
            }
            self.rhs[p] = &self.rhs[p] / &piv;
        }
        let nz: Vec<usize> = (0..self.width())
            .filter(|&j| !self.rows[p][j].is_zero())
            .collect();
        let prow = self.rows[p].clone();
        let prhs = self.rhs[p].clone();
        for i in 0..self.rows.len() {
            if i == p {
                continue;
            }
            let factor = self.rows[i][q].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &nz {
                let delta = &factor * &prow[j];
                self.rows[i][j] -= delta;
            }
            if !prhs.is_zero() {
                let delta = &factor * &prhs;
                self.rhs[i] -= delta;
            }
        }
        let factor = red[q].clone();
        if !factor.is_zero() {
            for &j in &nz {
                let delta = &factor * &prow[j];
                red[j] -= delta;
            }
        }
        self.basis[p] = q;
    }

    /// Bland's rule iterations; `Err(())` on unboundedness.
    fn iterate(&mut self, red: &mut [Rational], allow: impl Fn(Column) -> bool) -> Result<(), ()> {
        loop {
            let entering = (0..self.width()).find(|&j| allow(self.kinds[j]) && red[j].is_negative());
            let Some(q) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((p, _)) = best else {
                return Err(());
            };
            self.pivot(p, q, red);
        }
    }

    fn run(mut self, max_obj: &[Rational]) -> Outcome {
        let width = self.width();
        let has_artificial = self.kinds.contains(&Column::Artificial);
        if has_artificial {
            let cost: Vec<Rational> = self
                .kinds
                .iter()
                .map(|k| match k {
                    Column::Artificial => -Rational::one(),
                    _ => Rational::zero(),
                })
                .collect();
            let mut red = self.reduced_costs(&cost);
            // phase one is bounded above by zero
            let _ = self.iterate(&mut red, |_| true);
            let infeasibility: Rational = self
                .basis
                .iter()
                .zip(&self.rhs)
                .filter(|(b, _)| self.kinds[**b] == Column::Artificial)
                .map(|(_, v)| v.clone())
                .sum();
            if infeasibility.is_positive() {
                return Outcome::Infeasible;
            }
            // drive zero-level artificials out where a real column can replace them
            for p in 0..self.rows.len() {
                if self.kinds[self.basis[p]] != Column::Artificial {
                    continue;
                }
                if let Some(q) =
                    (0..width).find(|&j| self.kinds[j] != Column::Artificial && !self.rows[p][j].is_zero())
                {
                    let mut scratch = vec![Rational::zero(); width];
                    self.pivot(p, q, &mut scratch);
                }
            }
        }
        let mut cost = vec![Rational::zero(); width];
        cost[..self.num_original].clone_from_slice(max_obj);
        let mut red = self.reduced_costs(&cost);
        if self.iterate(&mut red, |k| k != Column::Artificial).is_err() {
            return Outcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); self.num_original];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_original {
                x[b] = self.rhs[i].clone();
            }
        }
        let value: Rational = x.iter().zip(max_obj).map(|(xi, c)| xi * c).sum();
        let duals = self
            .unit_col
            .iter()
            .zip(&self.flipped)
            .map(|(&col, &flip)| if flip { -&red[col] } else { red[col].clone() })
            .collect();
        Outcome::Optimal(Solution { value, x, duals })
    }
}
