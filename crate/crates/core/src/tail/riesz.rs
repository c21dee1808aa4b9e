use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Domain, EventuallyAffine, TailFunctional, TailMeasure, Weights};
use crate::error::Result;
use crate::rational::{ceil_to_int, Rational};

/// `phi = phi1 * m + perp`, with `m` a probability and `perp` vanishing on bounded functions
/// (on the eventually constant domain, vanishing identically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RieszDecomposition {
    pub m: TailMeasure,
    pub perp: TailFunctional,
    pub phi1: Rational,
}

pub fn riesz_decompose(phi: &TailFunctional) -> RieszDecomposition {
    let phi1 = phi.phi_one();
    if phi1.is_zero() {
        return RieszDecomposition {
            m: TailMeasure::dirac(0),
            perp: phi.clone(),
            phi1,
        };
    }
    let weights: Weights = phi.weights().iter().map(|(&i, w)| (i, w / &phi1)).collect();
    let m = TailMeasure::new(weights, phi.limit_charge() / &phi1)
        .expect("scaled positive charge stays positive");
    let perp = TailFunctional::new(
        phi.domain(),
        Weights::new(),
        Rational::zero(),
        phi.slope_charge().clone(),
    )
    .expect("slope charge is nonnegative");
    RieszDecomposition { m, perp, phi1 }
}

/// Functions on which two functionals agree only if they are equal: the unit
/// points up to `n`, the indicator of `[n + 1, inf)` and, on the affine domain,
/// the identity.
pub fn probe_family(domain: Domain, n: usize) -> Vec<EventuallyAffine> {
    let mut probes: Vec<EventuallyAffine> = (0..=n).map(EventuallyAffine::point).collect();
    probes.push(EventuallyAffine::indicator_from(n + 1));
    if domain == Domain::EventuallyAffine {
        probes.push(EventuallyAffine::identity());
    }
    probes
}

/// Checks a candidate decomposition independently of how it was produced:
/// `m` is a probability, `perp(1) = 0`, `phi1 = phi(1)` and the identity holds on
/// a family spanning every function the three functionals can distinguish.
pub fn verify_decomposition(phi: &TailFunctional, candidate: &RieszDecomposition) -> bool {
    let RieszDecomposition { m, perp, phi1 } = candidate;
    if perp.domain() != phi.domain() || !m.is_probability() || *phi1 != phi.phi_one() {
        return false;
    }
    if phi.domain() == Domain::EventuallyAffine && !m.limit_charge().is_zero() {
        return false;
    }
    let one = EventuallyAffine::constant(Rational::one());
    if perp.evaluate(&one) != Ok(Rational::zero()) {
        return false;
    }
    let n = [
        phi.support_end(),
        perp.support_end(),
        m.weights().keys().next_back().copied(),
    ]
    .into_iter()
    .flatten()
    .max()
    .unwrap_or(0);
    probe_family(phi.domain(), n).iter().all(|f| {
        match (phi.evaluate(f), m.integrate(f), perp.evaluate(f)) {
            (Ok(lhs), Ok(mf), Ok(pf)) => lhs == phi1 * mf + pf,
            _ => false,
        }
    })
}

/// `lim phi(f ∧ n)` and `lim phi(f - f ∧ n)`, with `f ∧ n` read as
/// `f⁺ ∧ n - f⁻ ∧ n` so that functions unbounded below are truncated too.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationLimits {
    pub bounded_part: Rational,
    pub residual: Rational,
    /// Least `n` with `phi(f ∧ k)` equal to the limit for every `k >= n`.
    pub stabilization_index: usize,
}

/// `f⁺ ∧ n - f⁻ ∧ n`.
pub fn two_sided_truncation(f: &EventuallyAffine, n: usize) -> EventuallyAffine {
    let n = Rational::from_integer(n.into());
    f.positive_part()
        .truncate(&n)
        .sub(&f.negative_part().truncate(&n))
}

pub fn truncation_limits(phi: &TailFunctional, f: &EventuallyAffine) -> Result<TruncationLimits> {
    let total = phi.evaluate(f)?;
    // Beyond every value the functional can see, truncation changes nothing it measures.
    let mut seen: Vec<Rational> = phi.weights().keys().map(|&i| f.at(i).abs()).collect();
    if !phi.limit_charge().is_zero() {
        seen.push(f.offset().abs());
    }
    let horizon = seen.iter().map(ceil_to_int).max().map_or(0, |v| {
        v.to_usize()
            .expect("truncation horizon exceeds addressable range")
    });
    let value_at = |n: usize| phi.evaluate(&two_sided_truncation(f, n));
    let bounded_part = value_at(horizon)?;
    let mut index = horizon;
    while index > 0 && value_at(index - 1)? == bounded_part {
        index -= 1;
    }
    Ok(TruncationLimits {
        residual: total - &bounded_part,
        bounded_part,
        stabilization_index: index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::rational::{int, ratio};

    fn first_example() -> TailFunctional {
        TailFunctional::new(
            Domain::EventuallyAffine,
            [(0, ratio(1, 2)), (3, ratio(1, 2))].into(),
            int(0),
            int(2),
        )
        .unwrap()
    }

    #[test]
    fn decomposition_of_weighted_slope_functional() {
        let phi = first_example();
        let f = EventuallyAffine::identity();
        assert_eq!(phi.evaluate(&f), Ok(ratio(7, 2)));
        let d = riesz_decompose(&phi);
        assert_eq!(d.phi1, int(1));
        assert_eq!(d.m.integrate(&f), Ok(ratio(3, 2)));
        assert_eq!(d.perp.evaluate(&f), Ok(int(2)));
        assert!(verify_decomposition(&phi, &d));
    }

    #[test]
    fn limit_charge_stays_in_the_measure() {
        let phi = TailFunctional::new(
            Domain::EventuallyConstant,
            [(1, ratio(1, 2))].into(),
            ratio(1, 2),
            int(0),
        )
        .unwrap();
        let d = riesz_decompose(&phi);
        assert_eq!(d.perp, TailFunctional::zero(Domain::EventuallyConstant));
        assert_eq!(d.m.limit_charge(), &ratio(1, 2));
        for n in 2..6 {
            let f = EventuallyAffine::indicator_from(n);
            assert_eq!(phi.evaluate(&f), Ok(ratio(1, 2)));
            assert_eq!(d.m.integrate(&f), Ok(ratio(1, 2)));
        }
        assert!(verify_decomposition(&phi, &d));
    }

    #[test]
    fn zero_functional_uses_dirac_convention() {
        let phi = TailFunctional::zero(Domain::EventuallyAffine);
        let d = riesz_decompose(&phi);
        assert_eq!(
            d,
            RieszDecomposition {
                m: TailMeasure::dirac(0),
                perp: phi.clone(),
                phi1: int(0)
            }
        );
        assert!(verify_decomposition(&phi, &d));
    }

    #[test]
    fn perturbed_candidates_are_rejected() {
        let phi = first_example();
        let d = riesz_decompose(&phi);
        let shifted_measure = RieszDecomposition {
            m: TailMeasure::new([(0, ratio(1, 4)), (3, ratio(3, 4))].into(), int(0)).unwrap(),
            ..d.clone()
        };
        assert!(!verify_decomposition(&phi, &shifted_measure));
        let moved_mass = RieszDecomposition {
            perp: TailFunctional::new(
                Domain::EventuallyAffine,
                [(0, int(1))].into(),
                int(0),
                int(2),
            )
            .unwrap(),
            ..d.clone()
        };
        assert!(!verify_decomposition(&phi, &moved_mass));
        let wrong_slope = RieszDecomposition {
            perp: TailFunctional::new(Domain::EventuallyAffine, Weights::new(), int(0), int(1))
                .unwrap(),
            ..d
        };
        assert!(!verify_decomposition(&phi, &wrong_slope));
    }

    #[test]
    fn identity_truncation_stabilizes_at_three() {
        let t = truncation_limits(&first_example(), &EventuallyAffine::identity()).unwrap();
        assert_eq!(
            t,
            TruncationLimits {
                bounded_part: ratio(3, 2),
                residual: int(2),
                stabilization_index: 3
            }
        );
    }

    #[test]
    fn constant_one_stabilizes_at_one() {
        let t = truncation_limits(&first_example(), &EventuallyAffine::constant(int(1))).unwrap();
        assert_eq!(
            t,
            TruncationLimits {
                bounded_part: int(1),
                residual: int(0),
                stabilization_index: 1
            }
        );
    }

    #[test]
    fn bounded_function_under_limit_charge() {
        let phi = TailFunctional::new(Domain::EventuallyConstant, Weights::new(), int(1), int(0))
            .unwrap();
        let t = truncation_limits(&phi, &EventuallyAffine::indicator_from(5)).unwrap();
        assert_eq!((t.bounded_part, t.residual), (int(1), int(0)));
    }

    #[test]
    fn decreasing_functions_keep_their_slope_in_the_residual() {
        let phi = first_example();
        let f = EventuallyAffine::affine(int(-1), int(2));
        let t = truncation_limits(&phi, &f).unwrap();
        assert_eq!(t.residual, riesz_decompose(&phi).perp.evaluate(&f).unwrap());
        assert_eq!(t.bounded_part, ratio(1, 2));
    }

    #[test]
    fn unbounded_function_outside_constant_domain() {
        let phi = TailFunctional::zero(Domain::EventuallyConstant);
        assert_eq!(
            truncation_limits(&phi, &EventuallyAffine::identity()),
            Err(Error::OutsideDomain)
        );
    }
}
