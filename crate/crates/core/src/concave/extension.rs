//! Common extension of a family of linear functionals `phi_tau` living on
//! subspaces `L_tau` of functions on `Omega`, each attached to a subset
//! `tau` of a base set `T`. The family is coherent when
//!
//! ```text
//! sup { sum_tau phi_tau(b_tau) : b_tau in L_tau, sum_tau b_tau(w) 1{t in tau} <= 1 on Omega x T }
//! ```
//!
//! is finite, and that happens iff a positive charge `mu` on `Omega x T`
//! satisfies `sum_{w, t in tau} mu(w, t) b(w) = phi_tau(b)` for every member.

use num_traits::{One, Signed, Zero};

use crate::coherence::{FunctionalSpec, PayoffFn, Scenario};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpResult, Relation, Row, Sense, VarBound};
use crate::rational::{dot, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    /// Membership in the base set, by index.
    pub tau: Vec<bool>,
    pub basis: Vec<PayoffFn>,
    pub values: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionProblem {
    omega: Scenario,
    base: Scenario,
    members: Vec<FamilyMember>,
}

impl ExtensionProblem {
    pub fn new(omega: Scenario, base: Scenario, members: Vec<FamilyMember>) -> Result<Self> {
        let one = PayoffFn::constant(omega.len(), Rational::one());
        let mut has_base_member = false;
        for (i, m) in members.iter().enumerate() {
            crate::coherence::check_len("member subset", base.len(), m.tau.len())?;
            if !m.tau.iter().any(|&b| b) {
                return Err(Error::EmptyMember(i));
            }
            let spec = FunctionalSpec::new(omega.clone(), m.basis.clone(), m.values.clone())?;
            if m.tau.iter().all(|&b| b) && spec.coordinates(&one).is_some() {
                has_base_member = true;
            }
        }
        if !has_base_member {
            return Err(Error::MissingBaseMember);
        }
        Ok(ExtensionProblem {
            omega,
            base,
            members,
        })
    }

    /// Members given as `(labels of tau, basis, values)`.
    pub fn from_labels<S: AsRef<str>>(
        omega: Scenario,
        base: Scenario,
        members: Vec<(Vec<S>, Vec<PayoffFn>, Vec<Rational>)>,
    ) -> Result<Self> {
        let members = members
            .into_iter()
            .map(|(labels, basis, values)| {
                let mut tau = vec![false; base.len()];
                for l in labels {
                    tau[base.index_of(l.as_ref())?] = true;
                }
                Ok(FamilyMember { tau, basis, values })
            })
            .collect::<Result<_>>()?;
        Self::new(omega, base, members)
    }

    pub fn omega(&self) -> &Scenario {
        &self.omega
    }

    pub fn base(&self) -> &Scenario {
        &self.base
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    fn num_coefficients(&self) -> usize {
        self.members.iter().map(|m| m.basis.len()).sum()
    }

    /// `(member, basis index)` for each flattened coefficient.
    fn coefficient_owners(&self) -> Vec<(usize, usize)> {
        self.members
            .iter()
            .enumerate()
            .flat_map(|(i, m)| (0..m.basis.len()).map(move |k| (i, k)))
            .collect()
    }

    /// Flattened `(w, t)` cells, row-major in `w`.
    fn cells(&self) -> Vec<(usize, usize)> {
        (0..self.omega.len())
            .flat_map(|w| (0..self.base.len()).map(move |t| (w, t)))
            .collect()
    }

    /// `sum_tau b_tau(w) 1{t in tau}` for flattened coefficients.
    fn combined_at(&self, coefficients: &[Rational], w: usize, t: usize) -> Rational {
        self.coefficient_owners()
            .iter()
            .zip(coefficients)
            .filter(|((i, _), _)| self.members[*i].tau[t])
            .fold(Rational::zero(), |acc, ((i, k), c)| {
                acc + c * &self.members[*i].basis[*k].values()[w]
            })
    }

    fn objective(&self) -> Vec<Rational> {
        self.members
            .iter()
            .flat_map(|m| m.values.iter().cloned())
            .collect()
    }

    fn unflatten(&self, flat: Vec<Rational>) -> Vec<Vec<Rational>> {
        let mut it = flat.into_iter();
        self.members
            .iter()
            .map(|m| it.by_ref().take(m.basis.len()).collect())
            .collect()
    }

    fn flatten(&self, nested: &[Vec<Rational>]) -> Option<Vec<Rational>> {
        if nested.len() != self.members.len()
            || nested
                .iter()
                .zip(&self.members)
                .any(|(c, m)| c.len() != m.basis.len())
        {
            return None;
        }
        Some(nested.iter().flatten().cloned().collect())
    }

    /// `sum_{w, t in tau} mu(w, t) b(w)` for basis element `k` of member `i`.
    pub fn integrate_member(&self, mu: &[Vec<Rational>], i: usize, k: usize) -> Rational {
        let m = &self.members[i];
        self.cells()
            .into_iter()
            .filter(|&(_, t)| m.tau[t])
            .fold(Rational::zero(), |acc, (w, t)| {
                acc + &mu[w][t] * &m.basis[k].values()[w]
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoherenceBound {
    Finite {
        bound: Rational,
        /// Per-member basis coefficients attaining the bound.
        coefficients: Vec<Vec<Rational>>,
    },
    /// Per-member coefficients `r` with combined function `<= 0` on `Omega x T`
    /// and `sum phi(r) > 0`.
    Unbounded { ray: Vec<Vec<Rational>> },
}

impl CoherenceBound {
    pub fn verify(&self, problem: &ExtensionProblem) -> bool {
        let cells = problem.cells();
        match self {
            CoherenceBound::Finite {
                bound,
                coefficients,
            } => {
                let Some(flat) = problem.flatten(coefficients) else {
                    return false;
                };
                cells
                    .iter()
                    .all(|&(w, t)| problem.combined_at(&flat, w, t) <= Rational::one())
                    && dot(&flat, &problem.objective()) == *bound
            }
            CoherenceBound::Unbounded { ray } => {
                let Some(flat) = problem.flatten(ray) else {
                    return false;
                };
                cells
                    .iter()
                    .all(|&(w, t)| !problem.combined_at(&flat, w, t).is_positive())
                    && dot(&flat, &problem.objective()).is_positive()
            }
        }
    }
}

pub fn coherence_bound(problem: &ExtensionProblem) -> Result<CoherenceBound> {
    let owners = problem.coefficient_owners();
    let rows = problem
        .cells()
        .into_iter()
        .map(|(w, t)| {
            let coeffs = owners
                .iter()
                .map(|&(i, k)| {
                    let m = &problem.members[i];
                    if m.tau[t] {
                        m.basis[k].values()[w].clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            Row::new(coeffs, Relation::Le, Rational::one())
        })
        .collect();
    let lp = LinearProgram::new(
        Sense::Maximize,
        problem.objective(),
        rows,
        vec![VarBound::Free; problem.num_coefficients()],
    )?;
    match lp::solve(&lp)? {
        LpResult::Optimal(sol) => Ok(CoherenceBound::Finite {
            bound: sol.value,
            coefficients: problem.unflatten(sol.primal),
        }),
        LpResult::Unbounded(u) => Ok(CoherenceBound::Unbounded {
            ray: problem.unflatten(u.ray),
        }),
        LpResult::Infeasible(_) => Err(Error::Internal(
            "the zero combination is always feasible".into(),
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommonExtension {
    /// Nonnegative mass per `(w, t)`, indexed `[w][t]`.
    Charge(Vec<Vec<Rational>>),
    Incoherent {
        ray: Vec<Vec<Rational>>,
    },
}

impl CommonExtension {
    pub fn verify(&self, problem: &ExtensionProblem) -> bool {
        match self {
            CommonExtension::Charge(mu) => {
                mu.len() == problem.omega.len()
                    && mu.iter().all(|r| {
                        r.len() == problem.base.len() && r.iter().all(|v| !v.is_negative())
                    })
                    && problem.members.iter().enumerate().all(|(i, m)| {
                        m.values
                            .iter()
                            .enumerate()
                            .all(|(k, v)| problem.integrate_member(mu, i, k) == *v)
                    })
            }
            CommonExtension::Incoherent { ray } => {
                CoherenceBound::Unbounded { ray: ray.clone() }.verify(problem)
            }
        }
    }
}

/// Positive charge on `Omega x T` reproducing every member, or the
/// incoherence ray of [`coherence_bound`].
pub fn common_extension(problem: &ExtensionProblem) -> Result<CommonExtension> {
    let cells = problem.cells();
    let mut rows = Vec::new();
    for m in &problem.members {
        for (b, v) in m.basis.iter().zip(&m.values) {
            let coeffs = cells
                .iter()
                .map(|&(w, t)| {
                    if m.tau[t] {
                        b.values()[w].clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            rows.push(Row::new(coeffs, Relation::Eq, v.clone()));
        }
    }
    let lp =
        LinearProgram::nonnegative(Sense::Maximize, vec![Rational::zero(); cells.len()], rows)?;
    match lp::solve(&lp)? {
        LpResult::Optimal(sol) => {
            let t = problem.base.len();
            Ok(CommonExtension::Charge(
                sol.primal.chunks(t).map(<[Rational]>::to_vec).collect(),
            ))
        }
        LpResult::Infeasible(_) => match coherence_bound(problem)? {
            CoherenceBound::Unbounded { ray } => Ok(CommonExtension::Incoherent { ray }),
            CoherenceBound::Finite { .. } => Err(Error::Internal(
                "no common extension although the coherence bound is finite".into(),
            )),
        },
        LpResult::Unbounded(_) => Err(Error::Internal("zero objective reported unbounded".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub lower: usize,
    pub upper: usize,
    /// Basis index of the shared element in the lower member.
    pub lower_basis: usize,
    pub upper_basis: usize,
    pub nonnegative: bool,
    pub lower_value: Rational,
    pub upper_value: Rational,
    /// `upper_value >= lower_value`, assessed only for nonnegative elements.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityReport {
    /// Whether a common extension exists; monotonicity is only guaranteed then.
    pub coherent: bool,
    pub comparisons: Vec<Comparison>,
}

impl MonotonicityReport {
    /// A coherent family must pass every assessed comparison.
    pub fn consistent(&self) -> bool {
        !self.coherent || self.comparisons.iter().all(|c| c.holds != Some(false))
    }
}

/// Compares `phi_upper(b)` with `phi_lower(b)` on the basis elements shared by
/// each declared pair `tau_lower ⊆ tau_upper`.
pub fn restriction_monotonicity(
    problem: &ExtensionProblem,
    pairs: &[(usize, usize)],
) -> Result<MonotonicityReport> {
    let len = problem.members.len();
    let mut comparisons = Vec::new();
    for &(lower, upper) in pairs {
        for index in [lower, upper] {
            if index >= len {
                return Err(Error::IndexOutOfRange { index, len });
            }
        }
        let (lo, up) = (&problem.members[lower], &problem.members[upper]);
        if lo.tau.iter().zip(&up.tau).any(|(&a, &b)| a && !b) {
            return Err(Error::InclusionMismatch { lower, upper });
        }
        for (k, b) in lo.basis.iter().enumerate() {
            let upper_basis = up
                .basis
                .iter()
                .position(|u| u == b)
                .ok_or(Error::InclusionMismatch { lower, upper })?;
            let nonnegative = b.values().iter().all(|v| !v.is_negative());
            let lower_value = lo.values[k].clone();
            let upper_value = up.values[upper_basis].clone();
            let holds = nonnegative.then(|| upper_value >= lower_value);
            comparisons.push(Comparison {
                lower,
                upper,
                lower_basis: k,
                upper_basis,
                nonnegative,
                lower_value,
                upper_value,
                holds,
            });
        }
    }
    let coherent = matches!(common_extension(problem)?, CommonExtension::Charge(_));
    Ok(MonotonicityReport {
        coherent,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn payoff(v: &[i64]) -> PayoffFn {
        PayoffFn::new(v.iter().map(|&x| int(x)).collect())
    }

    fn problem(
        n: usize,
        base: &[&str],
        members: Vec<(Vec<&str>, Vec<PayoffFn>, Vec<Rational>)>,
    ) -> ExtensionProblem {
        ExtensionProblem::from_labels(
            Scenario::indexed(n).unwrap(),
            Scenario::new(base.iter().copied()).unwrap(),
            members,
        )
        .unwrap()
    }

    #[test]
    fn single_normalized_member() {
        let p = problem(
            2,
            &["t"],
            vec![(vec!["t"], vec![payoff(&[1, 1])], vec![int(1)])],
        );
        let b = coherence_bound(&p).unwrap();
        assert!(matches!(&b, CoherenceBound::Finite { bound, .. } if *bound == int(1)));
        assert!(b.verify(&p));
        let e = common_extension(&p).unwrap();
        assert!(e.verify(&p));
        let CommonExtension::Charge(mu) = e else {
            panic!()
        };
        let total: Rational = mu.iter().flatten().sum();
        assert_eq!(total, int(1));
    }

    #[test]
    fn two_members_coherent() {
        let p = problem(
            2,
            &["t1", "t2"],
            vec![
                (vec!["t1", "t2"], vec![payoff(&[1, 1])], vec![int(1)]),
                (vec!["t1"], vec![payoff(&[1, -1])], vec![ratio(1, 2)]),
            ],
        );
        let b = coherence_bound(&p).unwrap();
        assert!(matches!(&b, CoherenceBound::Finite { bound, .. } if *bound == int(1)));
        assert!(b.verify(&p));
        let e = common_extension(&p).unwrap();
        assert!(e.verify(&p));
        // The documented extension also reproduces both members.
        let mu = vec![vec![ratio(1, 2), ratio(1, 2)], vec![int(0), int(0)]];
        assert!(CommonExtension::Charge(mu).verify(&p));
    }

    #[test]
    fn unbounded_member_is_incoherent() {
        let p = problem(
            2,
            &["t1", "t2"],
            vec![
                (vec!["t1", "t2"], vec![payoff(&[1, 1])], vec![int(1)]),
                (vec!["t1"], vec![payoff(&[0, -1])], vec![int(1)]),
            ],
        );
        let b = coherence_bound(&p).unwrap();
        assert!(matches!(b, CoherenceBound::Unbounded { .. }));
        assert!(b.verify(&p));
        let e = common_extension(&p).unwrap();
        assert!(matches!(e, CommonExtension::Incoherent { .. }));
        assert!(e.verify(&p));
    }

    #[test]
    fn monotone_restriction_examples() {
        let p = problem(
            1,
            &["t1", "t2"],
            vec![
                (vec!["t1"], vec![payoff(&[1])], vec![ratio(3, 10)]),
                (vec!["t1", "t2"], vec![payoff(&[1])], vec![int(1)]),
            ],
        );
        let report = restriction_monotonicity(&p, &[(0, 1), (0, 0)]).unwrap();
        assert!(report.coherent);
        assert_eq!(report.comparisons[0].holds, Some(true));
        assert_eq!(
            report.comparisons[1].lower_value,
            report.comparisons[1].upper_value
        );
        assert!(report.consistent());
        let CommonExtension::Charge(mu) = common_extension(&p).unwrap() else {
            panic!()
        };
        assert_eq!(mu[0][0], ratio(3, 10));

        let bad = problem(
            1,
            &["t1", "t2"],
            vec![
                (vec!["t1"], vec![payoff(&[1])], vec![int(2)]),
                (vec!["t1", "t2"], vec![payoff(&[1])], vec![int(1)]),
            ],
        );
        assert!(matches!(
            common_extension(&bad).unwrap(),
            CommonExtension::Incoherent { .. }
        ));
        let report = restriction_monotonicity(&bad, &[(0, 1)]).unwrap();
        assert!(!report.coherent);
        assert_eq!(report.comparisons[0].holds, Some(false));
    }

    #[test]
    fn inclusion_is_checked() {
        let p = problem(
            2,
            &["t1", "t2"],
            vec![
                (vec!["t1", "t2"], vec![payoff(&[1, 1])], vec![int(1)]),
                (vec!["t1"], vec![payoff(&[1, 0])], vec![ratio(1, 2)]),
            ],
        );
        assert_eq!(
            restriction_monotonicity(&p, &[(0, 1)]).unwrap_err(),
            Error::InclusionMismatch { lower: 0, upper: 1 }
        );
        assert_eq!(
            restriction_monotonicity(&p, &[(1, 0)]).unwrap_err(),
            Error::InclusionMismatch { lower: 1, upper: 0 }
        );
    }

    #[test]
    fn base_member_is_required() {
        let err = ExtensionProblem::from_labels(
            Scenario::indexed(1).unwrap(),
            Scenario::new(["t1", "t2"]).unwrap(),
            vec![(vec!["t1"], vec![payoff(&[1])], vec![int(1)])],
        )
        .unwrap_err();
        assert_eq!(err, Error::MissingBaseMember);
    }
}
