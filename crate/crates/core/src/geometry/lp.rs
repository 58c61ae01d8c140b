//! Dense two-phase simplex method with Bland's anti-cycling rule.
//!
//! Problems are tiny (at most a few hundred rows), so the tableau is kept dense
//! and reduced costs are recomputed from scratch on every iteration.
//!
//! Form: minimize `c·x` subject to rows `a_i·x {≤,=,≥} b_i` and `x ≥ 0`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible { phase_one_value: f64 },
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

const PIVOT_EPS: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;

impl LinearProgram {
    pub fn minimize(objective: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Solves the program. `feas_tol` is the phase-one objective value above which
    /// the program is declared infeasible.
    pub fn solve(&self, feas_tol: f64) -> Result<LpOutcome> {
        let n = self.objective.len();
        let m = self.constraints.len();

        // Column layout: [original | slack/surplus | artificial | rhs]
        let mut n_slack = 0;
        let mut n_art = 0;
        let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(m);
        for c in &self.constraints {
            let (coeffs, rel, rhs) = if c.rhs < 0.0 {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), flipped, -c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs)
            };
            match rel {
                Relation::Le => n_slack += 1,
                Relation::Ge => {
                    n_slack += 1;
                    n_art += 1;
                }
                Relation::Eq => n_art += 1,
            }
            rows.push((coeffs, rel, rhs));
        }
        let width = n + n_slack + n_art;
        let art_start = n + n_slack;
        let mut t = vec![vec![0.0; width + 1]; m];
        let mut basis = vec![0usize; m];
        let (mut s_next, mut a_next) = (n, art_start);
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            t[i][..n].copy_from_slice(&coeffs);
            t[i][width] = rhs;
            match rel {
                Relation::Le => {
                    t[i][s_next] = 1.0;
                    basis[i] = s_next;
                    s_next += 1;
                }
                Relation::Ge => {
                    t[i][s_next] = -1.0;
                    s_next += 1;
                    t[i][a_next] = 1.0;
                    basis[i] = a_next;
                    a_next += 1;
                }
                Relation::Eq => {
                    t[i][a_next] = 1.0;
                    basis[i] = a_next;
                    a_next += 1;
                }
            }
        }

        let mut tab = Tableau {
            t,
            basis,
            width,
            allowed: width,
        };

        if n_art > 0 {
            let mut cost = vec![0.0; width];
            for c in cost.iter_mut().skip(art_start) {
                *c = 1.0;
            }
            match tab.run(&cost)? {
                Phase::Optimal => {}
                Phase::Unbounded => return Err(Error::Lp("phase one unbounded".into())),
            }
            let value = tab.objective_value(&cost);
            if value > feas_tol {
                return Ok(LpOutcome::Infeasible {
                    phase_one_value: value,
                });
            }
            // Drive remaining artificial variables out of the basis where possible.
            for r in 0..m {
                if tab.basis[r] >= art_start {
                    if let Some(j) = (0..art_start).find(|&j| tab.t[r][j].abs() > PIVOT_EPS) {
                        tab.pivot(r, j);
                    }
                }
            }
            tab.allowed = art_start;
        }

        let mut cost = vec![0.0; width];
        cost[..n].copy_from_slice(&self.objective);
        match tab.run(&cost)? {
            Phase::Unbounded => Ok(LpOutcome::Unbounded),
            Phase::Optimal => {
                let mut x = vec![0.0; n];
                for (r, &b) in tab.basis.iter().enumerate() {
                    if b < n {
                        x[b] = tab.t[r][width];
                    }
                }
                let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                Ok(LpOutcome::Optimal { x, value })
            }
        }
    }
}

enum Phase {
    Optimal,
    Unbounded,
}

struct Tableau {
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
    /// Columns `>= allowed` may never enter the basis.
    allowed: usize,
}

impl Tableau {
    fn objective_value(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .map(|(r, &b)| cost[b] * self.t[r][self.width])
            .sum()
    }

    fn run(&mut self, cost: &[f64]) -> Result<Phase> {
        let m = self.t.len();
        for _ in 0..MAX_ITERATIONS {
            // Bland: lowest-index column with negative reduced cost enters.
            let entering = (0..self.allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z: f64 = (0..m).map(|r| cost[self.basis[r]] * self.t[r][j]).sum();
                cost[j] - z < -PIVOT_EPS
            });
            let Some(j) = entering else {
                return Ok(Phase::Optimal);
            };
            // Ratio test; ties broken by lowest basic variable index.
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let a = self.t[r][j];
                if a > PIVOT_EPS {
                    let ratio = self.t[r][self.width] / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - PIVOT_EPS
                                || (ratio <= lratio + PIVOT_EPS && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(Phase::Unbounded);
            };
            self.pivot(r, j);
        }
        Err(Error::Lp(format!(
            "no convergence after {MAX_ITERATIONS} pivots"
        )))
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.t[r][j];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                let f = row[j];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                    row[j] = 0.0;
                }
            }
        }
        // keep rhs nonnegative against rounding
        for row in self.t.iter_mut() {
            let w = self.width;
            if row[w] < 0.0 && row[w] > -1e-13 {
                row[w] = 0.0;
            }
        }
        self.basis[r] = j;
    }
}
