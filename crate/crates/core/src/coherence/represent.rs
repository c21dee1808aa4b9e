use num_traits::{One, Signed, Zero};

use super::{PayoffFn, Probability, Scenario};
use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{self, LinearProgram, LpResult, Relation, Row, Sense};
use crate::rational::{dot, Rational};

/// A linear functional given by its values on a spanning set of a subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalSpec {
    scenario: Scenario,
    basis: Vec<PayoffFn>,
    values: Vec<Rational>,
}

impl FunctionalSpec {
    /// Fails with [`Error::IllDefinedFunctional`] when some linear dependency
    /// `sum c_i h_i = 0` has `sum c_i values_i != 0`.
    pub fn new(scenario: Scenario, basis: Vec<PayoffFn>, values: Vec<Rational>) -> Result<Self> {
        super::check_len("value list", basis.len(), values.len())?;
        for h in &basis {
            super::check_len("basis element", scenario.len(), h.len())?;
        }
        // Values are consistent with the dependencies iff some charge reproduces them.
        let rows: Vec<Vec<Rational>> = basis.iter().map(|h| h.values().to_vec()).collect();
        if linalg::solve(&rows, &values, scenario.len()).is_none() {
            return Err(Error::IllDefinedFunctional);
        }
        Ok(FunctionalSpec {
            scenario,
            basis,
            values,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn basis(&self) -> &[PayoffFn] {
        &self.basis
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Coefficients expressing `f` in the basis, if `f` lies in the span.
    pub fn coordinates(&self, f: &PayoffFn) -> Option<Vec<Rational>> {
        let n = self.scenario.len();
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|w| self.basis.iter().map(|h| h.values()[w].clone()).collect())
            .collect();
        if self.basis.is_empty() {
            return f.values().iter().all(Zero::is_zero).then(Vec::new);
        }
        linalg::solve(&rows, f.values(), self.basis.len())
    }

    /// `phi(f)` for `f` in the span.
    pub fn evaluate(&self, f: &PayoffFn) -> Option<Rational> {
        self.coordinates(f).map(|c| dot(&c, &self.values))
    }

    pub fn phi_one(&self) -> Option<Rational> {
        self.evaluate(&PayoffFn::constant(self.scenario.len(), Rational::one()))
    }
}

/// `f >= 0` in the span with `phi(f) < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotPositiveWitness {
    pub coefficients: Vec<Rational>,
    pub payoff: PayoffFn,
    pub value: Rational,
}

impl NotPositiveWitness {
    pub fn verify(&self, spec: &FunctionalSpec) -> bool {
        self.coefficients.len() == spec.basis.len()
            && PayoffFn::combination(spec.scenario.len(), &spec.basis, &self.coefficients)
                == self.payoff
            && self.payoff.values().iter().all(|v| !v.is_negative())
            && dot(&self.coefficients, &spec.values) == self.value
            && self.value.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// Signed charge of total mass one.
    Signed(Vec<Rational>),
    Positive(Probability),
    NotPositive(NotPositiveWitness),
}

impl Representation {
    /// Checks `phi(h) = phi(1) m(h)` on the basis and `m(1) = 1`.
    pub fn verify(&self, spec: &FunctionalSpec) -> bool {
        let represents = |m: &[Rational]| {
            let Some(phi1) = spec.phi_one() else {
                return false;
            };
            m.len() == spec.scenario.len()
                && crate::rational::sum(m) == Rational::one()
                && spec
                    .basis
                    .iter()
                    .zip(&spec.values)
                    .all(|(h, v)| &phi1 * dot(m, h.values()) == *v)
        };
        match self {
            Representation::Signed(m) => represents(m),
            Representation::Positive(m) => represents(m.weights()),
            Representation::NotPositive(w) => w.verify(spec),
        }
    }
}

/// Finds a charge `m` with `phi(f) = phi(1) m(f)` on the span, optionally a
/// positive one; without a positive representation returns a nonnegative
/// `f` with `phi(f) = -1`.
pub fn represent_functional(
    spec: &FunctionalSpec,
    require_positive: bool,
) -> Result<Representation> {
    let n = spec.scenario.len();
    let unit = PayoffFn::constant(n, Rational::one());
    let unit_coords = spec.coordinates(&unit).ok_or(Error::ConstantNotInSpan)?;
    let phi1 = dot(&unit_coords, &spec.values);

    if phi1.is_zero() {
        if spec.values.iter().all(Zero::is_zero) {
            let dirac = Probability::dirac(n, 0);
            return Ok(if require_positive {
                Representation::Positive(dirac)
            } else {
                Representation::Signed(dirac.into_weights())
            });
        }
        return Err(Error::DegenerateNormalization);
    }

    let targets: Vec<Rational> = spec.values.iter().map(|v| v / &phi1).collect();
    if !require_positive {
        let mut rows = vec![vec![Rational::one(); n]];
        rows.extend(spec.basis.iter().map(|h| h.values().to_vec()));
        let mut rhs = vec![Rational::one()];
        rhs.extend(targets);
        let m = linalg::solve(&rows, &rhs, n).ok_or_else(|| {
            Error::Internal("well-defined functional has no representing charge".into())
        })?;
        return Ok(Representation::Signed(m));
    }

    if phi1.is_negative() {
        let coefficients: Vec<Rational> = unit_coords.iter().map(|c| c / -phi1.clone()).collect();
        return Ok(Representation::NotPositive(NotPositiveWitness {
            payoff: PayoffFn::combination(n, &spec.basis, &coefficients),
            value: -Rational::one(),
            coefficients,
        }));
    }

    let mut rows = vec![Row::new(
        vec![Rational::one(); n],
        Relation::Eq,
        Rational::one(),
    )];
    rows.extend(
        spec.basis
            .iter()
            .zip(&targets)
            .map(|(h, t)| Row::new(h.values().to_vec(), Relation::Eq, t.clone())),
    );
    let lp = LinearProgram::nonnegative(Sense::Maximize, vec![Rational::zero(); n], rows)?;
    match lp::solve(&lp)? {
        LpResult::Optimal(sol) => Ok(Representation::Positive(Probability::new(sol.primal)?)),
        LpResult::Infeasible(u) => {
            // f = u0 + sum u_i h_i is nonnegative and phi(f) = phi(1) (u0 + sum u_i t_i) < 0.
            let mut coefficients: Vec<Rational> = unit_coords
                .iter()
                .zip(&u[1..])
                .map(|(c, ui)| &u[0] * c + ui)
                .collect();
            let value = dot(&coefficients, &spec.values);
            if !value.is_negative() {
                return Err(Error::Internal(
                    "Farkas multipliers do not yield a negative value".into(),
                ));
            }
            let scale = -value.recip();
            for c in coefficients.iter_mut() {
                *c *= &scale;
            }
            Ok(Representation::NotPositive(NotPositiveWitness {
                payoff: PayoffFn::combination(n, &spec.basis, &coefficients),
                value: -Rational::one(),
                coefficients,
            }))
        }
        LpResult::Unbounded(_) => Err(Error::Internal("zero objective reported unbounded".into())),
    }
}
