use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::EventuallyAffine;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Finitely supported nonnegative weights on the naturals.
pub type Weights = BTreeMap<usize, Rational>;

fn check_weights(weights: &Weights) -> Result<()> {
    if weights.values().any(Signed::is_negative) {
        Err(Error::NegativeCharge)
    } else {
        Ok(())
    }
}

fn weighted_sum(weights: &Weights, f: &EventuallyAffine) -> Rational {
    weights
        .iter()
        .fold(Rational::zero(), |acc, (&i, w)| acc + w * f.at(i))
}

/// A positive charge on the naturals: point masses plus a mass `limit_charge`
/// sitting "at infinity", which sees only the eventual value of a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailMeasure {
    weights: Weights,
    limit_charge: Rational,
}

impl TailMeasure {
    pub fn new(weights: Weights, limit_charge: Rational) -> Result<Self> {
        check_weights(&weights)?;
        if limit_charge.is_negative() {
            return Err(Error::NegativeCharge);
        }
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(TailMeasure {
            weights,
            limit_charge,
        })
    }

    pub fn dirac(i: usize) -> Self {
        TailMeasure {
            weights: [(i, Rational::one())].into(),
            limit_charge: Rational::zero(),
        }
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn limit_charge(&self) -> &Rational {
        &self.limit_charge
    }

    pub fn total_mass(&self) -> Rational {
        crate::rational::sum(self.weights.values()) + &self.limit_charge
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass().is_one()
    }

    /// `sum w_i f(i) + limit_charge * (eventual value of f)`; a function with a
    /// nonzero slope is integrable only when there is no mass at infinity.
    pub fn integrate(&self, f: &EventuallyAffine) -> Result<Rational> {
        let points = weighted_sum(&self.weights, f);
        if f.is_bounded() {
            Ok(points + &self.limit_charge * f.offset())
        } else if self.limit_charge.is_zero() {
            Ok(points)
        } else {
            Err(Error::NotIntegrable)
        }
    }
}

/// The lattice a functional lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Eventually constant functions.
    EventuallyConstant,
    /// Eventually affine functions.
    EventuallyAffine,
}

/// Positive linear functional `f -> sum w_i f(i) + alpha * c(f) + beta * s(f)`,
/// where `c(f)` is the eventual value of a bounded `f` and `s(f)` the slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailFunctional {
    domain: Domain,
    weights: Weights,
    limit_charge: Rational,
    slope_charge: Rational,
}

impl TailFunctional {
    /// The slope charge is ignored (stored as zero) on the eventually constant domain.
    pub fn new(
        domain: Domain,
        weights: Weights,
        limit_charge: Rational,
        slope_charge: Rational,
    ) -> Result<Self> {
        check_weights(&weights)?;
        if limit_charge.is_negative() || slope_charge.is_negative() {
            return Err(Error::NegativeCharge);
        }
        if domain == Domain::EventuallyAffine && !limit_charge.is_zero() {
            return Err(Error::LimitChargeOnAffineDomain);
        }
        let slope_charge = match domain {
            Domain::EventuallyConstant => Rational::zero(),
            Domain::EventuallyAffine => slope_charge,
        };
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(TailFunctional {
            domain,
            weights,
            limit_charge,
            slope_charge,
        })
    }

    pub fn zero(domain: Domain) -> Self {
        TailFunctional {
            domain,
            weights: Weights::new(),
            limit_charge: Rational::zero(),
            slope_charge: Rational::zero(),
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn limit_charge(&self) -> &Rational {
        &self.limit_charge
    }

    pub fn slope_charge(&self) -> &Rational {
        &self.slope_charge
    }

    pub fn contains(&self, f: &EventuallyAffine) -> bool {
        self.domain == Domain::EventuallyAffine || f.is_bounded()
    }

    pub fn evaluate(&self, f: &EventuallyAffine) -> Result<Rational> {
        if !self.contains(f) {
            return Err(Error::OutsideDomain);
        }
        let points = weighted_sum(&self.weights, f);
        Ok(match self.domain {
            Domain::EventuallyConstant => points + &self.limit_charge * f.offset(),
            Domain::EventuallyAffine => points + &self.slope_charge * f.slope(),
        })
    }

    pub fn phi_one(&self) -> Rational {
        crate::rational::sum(self.weights.values()) + &self.limit_charge
    }

    /// Largest index carrying a point weight.
    pub fn support_end(&self) -> Option<usize> {
        self.weights.keys().next_back().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn dirac_integrates_identity() {
        assert_eq!(
            TailMeasure::dirac(0).integrate(&EventuallyAffine::identity()),
            Ok(int(0))
        );
    }

    #[test]
    fn limit_charge_sees_the_tail() {
        let m = TailMeasure::new([(2, ratio(1, 2))].into(), ratio(1, 2)).unwrap();
        let f = EventuallyAffine::indicator_from(5);
        assert_eq!(m.integrate(&f), Ok(ratio(1, 2)));
        // Truncations agree with the integral once past the function's maximum.
        for n in 1..4 {
            assert_eq!(m.integrate(&f.truncate(&int(n))), Ok(ratio(1, 2)));
        }
    }

    #[test]
    fn limit_charge_cannot_integrate_unbounded_functions() {
        let m = TailMeasure::new(Weights::new(), ratio(1, 2)).unwrap();
        assert_eq!(
            m.integrate(&EventuallyAffine::identity()),
            Err(Error::NotIntegrable)
        );
        // Truncations diverge: m(f ∧ n) = n / 2.
        for n in [1, 10, 100] {
            assert_eq!(
                m.integrate(&EventuallyAffine::identity().truncate(&int(n))),
                Ok(ratio(n, 2))
            );
        }
    }

    #[test]
    fn functional_validation() {
        assert_eq!(
            TailFunctional::new(Domain::EventuallyAffine, Weights::new(), int(1), int(0)),
            Err(Error::LimitChargeOnAffineDomain)
        );
        assert_eq!(
            TailFunctional::new(
                Domain::EventuallyConstant,
                [(0, int(-1))].into(),
                int(0),
                int(0)
            ),
            Err(Error::NegativeCharge)
        );
        let ec = TailFunctional::new(Domain::EventuallyConstant, Weights::new(), int(1), int(5))
            .unwrap();
        assert_eq!(ec.slope_charge(), &int(0));
        assert_eq!(
            ec.evaluate(&EventuallyAffine::identity()),
            Err(Error::OutsideDomain)
        );
    }
}
