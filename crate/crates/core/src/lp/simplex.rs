//! Dense two-phase tableau simplex.
//!
//! Standard form: every row is scaled so its right-hand side is nonnegative,
//! `<=`/`>=` rows get a slack/surplus column, free variables are split into a
//! positive and a negative part, and every row gets an artificial column. The
//! artificial columns start as the identity basis, so at any point they hold
//! the current basis inverse and the duals can be read off directly.
//!
//! Pivoting uses Bland's rule: the entering column is the lowest-indexed one
//! with positive reduced cost, and ties in the ratio test go to the basic
//! variable with the lowest index. This terminates on degenerate problems and
//! makes the result a deterministic function of the input.

use num_traits::{One, Signed, Zero};

use super::{LinearProgram, LpResult, OptimalSolution, Relation, Sense, UnboundedRay, VarBound};
use crate::rational::Rational;

struct Tableau {
    /// `rows x (cols + 1)`; the last entry of each row is the right-hand side.
    cells: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
    /// First artificial column; artificials never enter the basis.
    first_artificial: usize,
}

enum Outcome {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.cells[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.cells[r][c].recip();
        for v in self.cells[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.cells[r]);
        for (i, row) in self.cells.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        self.cells[r] = pivot_row;
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            let t = &self.cells[r][j];
            if !cost[b].is_zero() && !t.is_zero() {
                d -= &cost[b] * t;
            }
        }
        d
    }

    /// Maximizes `cost . x` from the current basic feasible solution.
    fn optimize(&mut self, cost: &[Rational]) -> Outcome {
        loop {
            let entering = (0..self.first_artificial)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(c) = entering else {
                return Outcome::Optimal;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.cells.len() {
                let t = &self.cells[r][c];
                if !t.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / t;
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[r] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded(c),
            }
        }
    }

    fn point(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(r).clone();
        }
        x
    }

    /// `cost_B^T B^{-1}`, read from the artificial columns.
    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        (0..self.cells.len())
            .map(|i| {
                let col = self.first_artificial + i;
                self.basis
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (r, &b)| {
                        let t = &self.cells[r][col];
                        if cost[b].is_zero() || t.is_zero() {
                            acc
                        } else {
                            acc + &cost[b] * t
                        }
                    })
            })
            .collect()
    }
}

/// Maps a standard-form column back to an original variable.
#[derive(Clone, Copy)]
enum Column {
    Var { index: usize, negated: bool },
    Slack,
    Artificial,
}

pub(super) fn run(lp: &LinearProgram) -> LpResult {
    let m = lp.rows.len();
    let mut columns = Vec::new();
    for (j, b) in lp.bounds.iter().enumerate() {
        columns.push(Column::Var {
            index: j,
            negated: false,
        });
        if *b == VarBound::Free {
            columns.push(Column::Var {
                index: j,
                negated: true,
            });
        }
    }
    let slack_rows: Vec<usize> = (0..m)
        .filter(|&i| lp.rows[i].relation != Relation::Eq)
        .collect();
    let first_slack = columns.len();
    columns.extend(slack_rows.iter().map(|_| Column::Slack));
    let first_artificial = columns.len();
    columns.extend((0..m).map(|_| Column::Artificial));
    let cols = columns.len();

    // Row scaling making each right-hand side nonnegative.
    let signs: Vec<bool> = lp.rows.iter().map(|r| r.rhs.is_negative()).collect();
    let mut cells = Vec::with_capacity(m);
    for (i, row) in lp.rows.iter().enumerate() {
        let mut cells_row = vec![Rational::zero(); cols + 1];
        for (c, col) in columns.iter().enumerate() {
            if let Column::Var { index, negated } = *col {
                let a = &row.coefficients[index];
                cells_row[c] = if negated { -a.clone() } else { a.clone() };
            }
        }
        if let Some(k) = slack_rows.iter().position(|&r| r == i) {
            cells_row[first_slack + k] = match row.relation {
                Relation::Le => Rational::one(),
                _ => -Rational::one(),
            };
        }
        cells_row[first_artificial + i] = Rational::one();
        cells_row[cols] = row.rhs.clone();
        if signs[i] {
            for v in cells_row.iter_mut().take(first_artificial) {
                *v = -v.clone();
            }
            cells_row[cols] = -cells_row[cols].clone();
        }
        cells.push(cells_row);
    }
    let mut tab = Tableau {
        cells,
        basis: (first_artificial..cols).collect(),
        cols,
        first_artificial,
    };

    let row_sign = |i: usize, v: Rational| if signs[i] { -v } else { v };

    // Phase one: maximize minus the sum of artificials.
    let phase_one: Vec<Rational> = (0..cols)
        .map(|c| {
            if c >= first_artificial {
                -Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    if let Outcome::Unbounded(_) = tab.optimize(&phase_one) {
        unreachable!("phase one objective is bounded above by zero");
    }
    let infeasibility: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= first_artificial)
        .fold(Rational::zero(), |acc, (r, _)| acc + tab.rhs(r));
    if infeasibility.is_positive() {
        let y = tab.duals(&phase_one);
        return LpResult::Infeasible(
            y.into_iter()
                .enumerate()
                .map(|(i, v)| row_sign(i, v))
                .collect(),
        );
    }

    // Drive zero-level artificials out of the basis; rows where that fails are redundant.
    for r in 0..m {
        if tab.basis[r] >= first_artificial {
            if let Some(c) = (0..first_artificial).find(|&c| !tab.cells[r][c].is_zero()) {
                tab.pivot(r, c);
            }
        }
    }

    let flip = lp.sense == Sense::Minimize;
    let phase_two: Vec<Rational> = columns
        .iter()
        .map(|col| match *col {
            Column::Var { index, negated } => {
                let c = &lp.objective[index];
                if negated != flip {
                    -c.clone()
                } else {
                    c.clone()
                }
            }
            _ => Rational::zero(),
        })
        .collect();

    let to_original = |x: &[Rational]| {
        let mut out = vec![Rational::zero(); lp.num_vars()];
        for (c, col) in columns.iter().enumerate() {
            if let Column::Var { index, negated } = *col {
                if negated {
                    out[index] -= &x[c];
                } else {
                    out[index] += &x[c];
                }
            }
        }
        out
    };

    match tab.optimize(&phase_two) {
        Outcome::Optimal => {
            let primal = to_original(&tab.point());
            let dual = tab
                .duals(&phase_two)
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    let v = row_sign(i, v);
                    if flip {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            let value = crate::rational::dot(&lp.objective, &primal);
            LpResult::Optimal(OptimalSolution {
                primal,
                dual,
                value,
            })
        }
        Outcome::Unbounded(c) => {
            let point = to_original(&tab.point());
            let mut direction = vec![Rational::zero(); cols];
            direction[c] = Rational::one();
            for (r, &b) in tab.basis.iter().enumerate() {
                direction[b] = -tab.cells[r][c].clone();
            }
            LpResult::Unbounded(UnboundedRay {
                point,
                ray: to_original(&direction),
            })
        }
    }
}
