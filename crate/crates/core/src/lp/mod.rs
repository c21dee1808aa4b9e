//! Exact linear programming with verified certificates.
//!
//! [`solve`] runs a two-phase dense simplex over [`Rational`] with Bland's
//! pivot rule. Every answer carries a certificate that [`verify`] checks
//! against the original rows with fresh arithmetic:
//!
//! * `Optimal`: primal point, dual multipliers, equal objective values.
//! * `Infeasible`: Farkas multipliers aggregating the rows into `0 <= negative`.
//! * `Unbounded`: a feasible point and an improving recession ray.
//!
//! Dual sign conventions follow the textbook dual of the stated problem. For
//! a maximization, multipliers are `>= 0` on `<=` rows, `<= 0` on `>=` rows and
//! free on `=` rows; a minimization flips both sign constraints.

mod simplex;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{dot, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Row {
            coefficients,
            relation,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<Rational>,
    rows: Vec<Row>,
    bounds: Vec<VarBound>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program has no variables")]
    NoVariables,
    #[error("row {row} has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("bound list has {found} entries, expected {expected}")]
    BoundsMismatch { expected: usize, found: usize },
    #[error("internal invariant failure: solver produced a rejected certificate ({0})")]
    RejectedCertificate(#[from] CertificateError),
}

impl LinearProgram {
    pub fn new(
        sense: Sense,
        objective: Vec<Rational>,
        rows: Vec<Row>,
        bounds: Vec<VarBound>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        if n == 0 {
            return Err(LpError::NoVariables);
        }
        if bounds.len() != n {
            return Err(LpError::BoundsMismatch {
                expected: n,
                found: bounds.len(),
            });
        }
        if let Some((row, r)) = rows
            .iter()
            .enumerate()
            .find(|(_, r)| r.coefficients.len() != n)
        {
            return Err(LpError::DimensionMismatch {
                row,
                expected: n,
                found: r.coefficients.len(),
            });
        }
        Ok(LinearProgram {
            sense,
            objective,
            rows,
            bounds,
        })
    }

    /// All variables nonnegative.
    pub fn nonnegative(
        sense: Sense,
        objective: Vec<Rational>,
        rows: Vec<Row>,
    ) -> Result<Self, LpError> {
        let n = objective.len();
        Self::new(sense, objective, rows, vec![VarBound::NonNegative; n])
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn bounds(&self) -> &[VarBound] {
        &self.bounds
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalSolution {
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnboundedRay {
    pub point: Vec<Rational>,
    pub ray: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal(OptimalSolution),
    /// Farkas multipliers, one per row.
    Infeasible(Vec<Rational>),
    Unbounded(UnboundedRay),
}

impl LpResult {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpResult::Optimal(_))
    }
}

/// Solves `lp` exactly. The returned certificate has already passed [`verify`].
pub fn solve(lp: &LinearProgram) -> Result<LpResult, LpError> {
    let result = simplex::run(lp);
    verify(lp, &result)?;
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("vector length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("variable {0} violates its bound")]
    PrimalBound(usize),
    #[error("row {0} is violated by the primal point")]
    PrimalRow(usize),
    #[error("multiplier {0} has the wrong sign")]
    MultiplierSign(usize),
    #[error("dual constraint for variable {0} is violated")]
    DualRow(usize),
    #[error("objective values differ (primal {primal}, dual {dual}, reported {reported})")]
    DualityGap {
        primal: Box<Rational>,
        dual: Box<Rational>,
        reported: Box<Rational>,
    },
    #[error("aggregated row does not certify infeasibility")]
    FarkasAggregate,
    #[error("ray component {0} violates its bound")]
    RayBound(usize),
    #[error("ray leaves the feasible region through row {0}")]
    RayRow(usize),
    #[error("ray does not improve the objective")]
    RayNotImproving,
}

fn satisfies(lhs: &Rational, relation: Relation, rhs: &Rational) -> bool {
    match relation {
        Relation::Le => lhs <= rhs,
        Relation::Eq => lhs == rhs,
        Relation::Ge => lhs >= rhs,
    }
}

fn check_len(v: &[Rational], expected: usize) -> Result<(), CertificateError> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(CertificateError::Length {
            expected,
            found: v.len(),
        })
    }
}

fn check_primal(lp: &LinearProgram, x: &[Rational]) -> Result<(), CertificateError> {
    check_len(x, lp.num_vars())?;
    for (j, (v, b)) in x.iter().zip(&lp.bounds).enumerate() {
        if *b == VarBound::NonNegative && v.is_negative() {
            return Err(CertificateError::PrimalBound(j));
        }
    }
    for (i, row) in lp.rows.iter().enumerate() {
        if !satisfies(&dot(&row.coefficients, x), row.relation, &row.rhs) {
            return Err(CertificateError::PrimalRow(i));
        }
    }
    Ok(())
}

/// Sign a row multiplier must have in a maximization dual or a Farkas certificate.
fn multiplier_ok(relation: Relation, y: &Rational) -> bool {
    match relation {
        Relation::Le => !y.is_negative(),
        Relation::Ge => !y.is_positive(),
        Relation::Eq => true,
    }
}

/// `sum_i y_i * row_i[j]`.
fn aggregate_column(lp: &LinearProgram, y: &[Rational], j: usize) -> Rational {
    lp.rows
        .iter()
        .zip(y)
        .fold(Rational::zero(), |acc, (row, yi)| {
            acc + yi * &row.coefficients[j]
        })
}

/// Re-checks a certificate against `lp` with independent arithmetic.
pub fn verify(lp: &LinearProgram, result: &LpResult) -> Result<(), CertificateError> {
    let m = lp.rows.len();
    match result {
        LpResult::Optimal(sol) => {
            check_primal(lp, &sol.primal)?;
            check_len(&sol.dual, m)?;
            // Work with the maximization dual `y`; a minimization reports `-y`.
            let flip = lp.sense == Sense::Minimize;
            let y: Vec<Rational> = sol
                .dual
                .iter()
                .map(|v| if flip { -v.clone() } else { v.clone() })
                .collect();
            for (i, row) in lp.rows.iter().enumerate() {
                if !multiplier_ok(row.relation, &y[i]) {
                    return Err(CertificateError::MultiplierSign(i));
                }
            }
            for j in 0..lp.num_vars() {
                let agg = aggregate_column(lp, &y, j);
                let c = if flip {
                    -lp.objective[j].clone()
                } else {
                    lp.objective[j].clone()
                };
                let ok = match lp.bounds[j] {
                    VarBound::NonNegative => agg >= c,
                    VarBound::Free => agg == c,
                };
                if !ok {
                    return Err(CertificateError::DualRow(j));
                }
            }
            let primal = dot(&lp.objective, &sol.primal);
            let dual = lp
                .rows
                .iter()
                .zip(&sol.dual)
                .fold(Rational::zero(), |acc, (r, d)| acc + &r.rhs * d);
            if primal != dual || primal != sol.value {
                return Err(CertificateError::DualityGap {
                    primal: Box::new(primal),
                    dual: Box::new(dual),
                    reported: Box::new(sol.value.clone()),
                });
            }
            Ok(())
        }
        LpResult::Infeasible(u) => {
            check_len(u, m)?;
            for (i, row) in lp.rows.iter().enumerate() {
                if !multiplier_ok(row.relation, &u[i]) {
                    return Err(CertificateError::MultiplierSign(i));
                }
            }
            for j in 0..lp.num_vars() {
                let agg = aggregate_column(lp, u, j);
                let ok = match lp.bounds[j] {
                    VarBound::NonNegative => !agg.is_negative(),
                    VarBound::Free => agg.is_zero(),
                };
                if !ok {
                    return Err(CertificateError::FarkasAggregate);
                }
            }
            let rhs = lp
                .rows
                .iter()
                .zip(u)
                .fold(Rational::zero(), |acc, (r, ui)| acc + &r.rhs * ui);
            if rhs.is_negative() {
                Ok(())
            } else {
                Err(CertificateError::FarkasAggregate)
            }
        }
        LpResult::Unbounded(UnboundedRay { point, ray }) => {
            check_primal(lp, point)?;
            check_len(ray, lp.num_vars())?;
            for (j, (r, b)) in ray.iter().zip(&lp.bounds).enumerate() {
                if *b == VarBound::NonNegative && r.is_negative() {
                    return Err(CertificateError::RayBound(j));
                }
            }
            for (i, row) in lp.rows.iter().enumerate() {
                if !satisfies(
                    &dot(&row.coefficients, ray),
                    row.relation,
                    &Rational::zero(),
                ) {
                    return Err(CertificateError::RayRow(i));
                }
            }
            let gain = dot(&lp.objective, ray);
            let improving = match lp.sense {
                Sense::Maximize => gain.is_positive(),
                Sense::Minimize => gain.is_negative(),
            };
            if improving {
                Ok(())
            } else {
                Err(CertificateError::RayNotImproving)
            }
        }
    }
}
