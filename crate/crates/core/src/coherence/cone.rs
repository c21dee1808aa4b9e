use num_traits::{One, Signed, Zero};

use super::{vertices, CoherenceVerdict, ConeSpec, PayoffFn, Probability};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpResult, Relation, Row, Sense, VarBound};
use crate::rational::Rational;

pub const MAX_ENUMERATION_STATES: usize = 10;
pub const MAX_ENUMERATION_GENERATORS: usize = 12;

/// Finds a separating probability for `cone`, or a sure win when none exists.
///
/// The separating probability is the first vertex reached by the simplex on
/// `{ m >= 0, sum m = 1, m(g) <= 0 }`. A sure win is reported with the least
/// total stake `sum lambda`.
pub fn detect_sure_win(cone: &ConeSpec) -> Result<CoherenceVerdict> {
    let n = cone.scenario().len();
    let mut rows = vec![Row::new(
        vec![Rational::one(); n],
        Relation::Eq,
        Rational::one(),
    )];
    rows.extend(
        cone.generators()
            .iter()
            .map(|g| Row::new(g.values().to_vec(), Relation::Le, Rational::zero())),
    );
    let lp = LinearProgram::nonnegative(Sense::Maximize, vec![Rational::zero(); n], rows)?;
    match lp::solve(&lp)? {
        LpResult::Optimal(sol) => Ok(CoherenceVerdict::Separating(Probability::new(sol.primal)?)),
        LpResult::Infeasible(_) => least_stake_sure_win(cone).map(CoherenceVerdict::SureWin),
        LpResult::Unbounded(_) => Err(Error::Internal("zero objective reported unbounded".into())),
    }
}

fn least_stake_sure_win(cone: &ConeSpec) -> Result<Vec<Rational>> {
    let g = cone.generators().len();
    if g == 0 {
        return Err(Error::Internal("the zero cone has no sure win".into()));
    }
    let rows = (0..cone.scenario().len())
        .map(|w| {
            let coeffs = cone
                .generators()
                .iter()
                .map(|gen| gen.values()[w].clone())
                .collect();
            Row::new(coeffs, Relation::Ge, Rational::one())
        })
        .collect();
    let lp = LinearProgram::nonnegative(Sense::Minimize, vec![Rational::one(); g], rows)?;
    match lp::solve(&lp)? {
        LpResult::Optimal(sol) => Ok(sol.primal),
        _ => Err(Error::Internal(
            "separation LP infeasible but no sure win found".into(),
        )),
    }
}

/// Result of the superhedging problem `inf { alpha : alpha + k >= f, k in K }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuperhedgePrice {
    Finite {
        value: Rational,
        /// Cash part of the cheapest superhedge; equals `value`.
        alpha: Rational,
        /// Generator weights of the cone part.
        lambda: Vec<Rational>,
        /// Separating probability attaining `m(f) = value`.
        dual: Probability,
    },
    /// The cone contains a sure win, given here as generator weights.
    MinusInfinity { sure_win: Vec<Rational> },
}

impl SuperhedgePrice {
    pub fn value(&self) -> super::ExtendedValue {
        match self {
            SuperhedgePrice::Finite { value, .. } => super::ExtendedValue::Finite(value.clone()),
            SuperhedgePrice::MinusInfinity { .. } => super::ExtendedValue::MinusInfinity,
        }
    }

    pub fn finite_value(&self) -> Option<&Rational> {
        match self {
            SuperhedgePrice::Finite { value, .. } => Some(value),
            SuperhedgePrice::MinusInfinity { .. } => None,
        }
    }

    /// Re-checks the hedge, the dual probability and their agreement.
    pub fn verify(&self, cone: &ConeSpec, f: &PayoffFn) -> bool {
        match self {
            SuperhedgePrice::Finite {
                value,
                alpha,
                lambda,
                dual,
            } => {
                alpha == value
                    && lambda.len() == cone.generators().len()
                    && lambda.iter().all(|l| !l.is_negative())
                    && cone.element(lambda).shift(alpha).dominates(f)
                    && cone.separates(dual)
                    && dual.expect(f) == *value
            }
            SuperhedgePrice::MinusInfinity { sure_win } => cone.is_sure_win(sure_win),
        }
    }
}

pub fn superhedge_price(cone: &ConeSpec, f: &PayoffFn) -> Result<SuperhedgePrice> {
    let n = cone.scenario().len();
    super::check_len("claim", n, f.len())?;
    let g = cone.generators().len();
    // Variables: alpha (free), then one weight per generator.
    let rows = (0..n)
        .map(|w| {
            let mut coeffs = Vec::with_capacity(g + 1);
            coeffs.push(Rational::one());
            coeffs.extend(cone.generators().iter().map(|gen| gen.values()[w].clone()));
            Row::new(coeffs, Relation::Ge, f.values()[w].clone())
        })
        .collect();
    let mut objective = vec![Rational::zero(); g + 1];
    objective[0] = Rational::one();
    let mut bounds = vec![VarBound::NonNegative; g + 1];
    bounds[0] = VarBound::Free;
    let lp = LinearProgram::new(Sense::Minimize, objective, rows, bounds)?;
    match lp::solve(&lp)? {
        LpResult::Optimal(sol) => {
            let mut primal = sol.primal;
            let lambda = primal.split_off(1);
            let alpha = primal.pop().expect("alpha");
            Ok(SuperhedgePrice::Finite {
                value: sol.value,
                alpha,
                lambda,
                dual: Probability::new(sol.dual)?,
            })
        }
        LpResult::Unbounded(u) => {
            // alpha + k >= 0 along the ray with alpha < 0, so k / (-alpha) >= 1.
            let mut ray = u.ray;
            let weights = ray.split_off(1);
            let scale = -ray[0].clone();
            if !scale.is_positive() {
                return Err(Error::Internal(
                    "improving ray does not lower the cash part".into(),
                ));
            }
            Ok(SuperhedgePrice::MinusInfinity {
                sure_win: weights.into_iter().map(|w| w / &scale).collect(),
            })
        }
        LpResult::Infeasible(_) => {
            Err(Error::Internal("superhedging LP is always feasible".into()))
        }
    }
}

/// The set of separating probabilities of a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparatingMeasures {
    Empty {
        sure_win: Vec<Rational>,
    },
    NonEmpty {
        sample: Probability,
        /// All vertices of the polytope, lexicographically ordered, when requested.
        vertices: Option<Vec<Probability>>,
    },
}

pub fn separating_measures(cone: &ConeSpec, enumerate: bool) -> Result<SeparatingMeasures> {
    let n = cone.scenario().len();
    let g = cone.generators().len();
    if enumerate && (n > MAX_ENUMERATION_STATES || g > MAX_ENUMERATION_GENERATORS) {
        return Err(Error::EnumerationLimit {
            states: n,
            generators: g,
            max_states: MAX_ENUMERATION_STATES,
            max_generators: MAX_ENUMERATION_GENERATORS,
        });
    }
    match detect_sure_win(cone)? {
        CoherenceVerdict::SureWin(sure_win) => Ok(SeparatingMeasures::Empty { sure_win }),
        CoherenceVerdict::Separating(sample) => {
            let vertices = if enumerate {
                let cuts: Vec<Vec<Rational>> = cone
                    .generators()
                    .iter()
                    .map(|g| g.values().to_vec())
                    .collect();
                let points = vertices::simplex_section_vertices(n, &cuts);
                if points.is_empty() {
                    return Err(Error::Internal(
                        "LP found a separating probability, enumeration found none".into(),
                    ));
                }
                Some(
                    points
                        .into_iter()
                        .map(Probability::new)
                        .collect::<Result<_>>()?,
                )
            } else {
                None
            };
            Ok(SeparatingMeasures::NonEmpty { sample, vertices })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::Scenario;
    use crate::rational::{int, ratio};

    fn cone(n: usize, gens: &[&[i64]]) -> ConeSpec {
        let gens = gens
            .iter()
            .map(|g| PayoffFn::new(g.iter().map(|&v| int(v)).collect()))
            .collect();
        ConeSpec::new(Scenario::indexed(n).unwrap(), gens).unwrap()
    }

    fn payoff(v: &[i64]) -> PayoffFn {
        PayoffFn::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn dominating_generator_is_a_sure_win() {
        let k = cone(2, &[&[1, 1]]);
        assert_eq!(
            detect_sure_win(&k).unwrap(),
            CoherenceVerdict::SureWin(vec![int(1)])
        );
    }

    #[test]
    fn opposite_bets_separate_at_the_midpoint() {
        let k = cone(2, &[&[1, -1], &[-1, 1]]);
        let expected = Probability::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(
            detect_sure_win(&k).unwrap(),
            CoherenceVerdict::Separating(expected)
        );
    }

    #[test]
    fn sum_of_two_bets_is_a_sure_win() {
        let k = cone(2, &[&[2, -1], &[-1, 2]]);
        let verdict = detect_sure_win(&k).unwrap();
        assert_eq!(verdict, CoherenceVerdict::SureWin(vec![int(1), int(1)]));
        assert!(verdict.verify(&k));
    }

    #[test]
    fn price_of_one_without_sure_wins_is_one() {
        let k = cone(3, &[&[1, -1, 0], &[0, 2, -3]]);
        let p = superhedge_price(&k, &payoff(&[1, 1, 1])).unwrap();
        assert_eq!(p.finite_value(), Some(&int(1)));
    }

    #[test]
    fn price_under_zero_cone_is_the_maximum() {
        let k = cone(2, &[]);
        let p = superhedge_price(&k, &payoff(&[3, 1])).unwrap();
        assert_eq!(p.finite_value(), Some(&int(3)));
        assert!(p.verify(&k, &payoff(&[3, 1])));
    }

    #[test]
    fn price_with_opposite_bets() {
        let k = cone(2, &[&[1, -1], &[-1, 1]]);
        let f = payoff(&[3, 1]);
        let p = superhedge_price(&k, &f).unwrap();
        let SuperhedgePrice::Finite {
            value,
            alpha,
            lambda,
            dual,
        } = &p
        else {
            panic!()
        };
        assert_eq!(*value, int(2));
        assert_eq!(*alpha, int(2));
        assert_eq!(*lambda, vec![int(1), int(0)]);
        assert_eq!(k.element(lambda), payoff(&[1, -1]));
        assert_eq!(dual.weights(), &[ratio(1, 2), ratio(1, 2)]);
        assert!(p.verify(&k, &f));
    }

    #[test]
    fn sure_win_makes_price_minus_infinity() {
        let k = cone(2, &[&[2, -1], &[-1, 2]]);
        let f = payoff(&[5, -7]);
        let p = superhedge_price(&k, &f).unwrap();
        assert!(matches!(p, SuperhedgePrice::MinusInfinity { .. }));
        assert!(p.verify(&k, &f));
    }

    #[test]
    fn claim_length_is_checked() {
        let k = cone(2, &[]);
        assert!(matches!(
            superhedge_price(&k, &payoff(&[1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn separating_set_examples() {
        let k = cone(2, &[&[1, -1], &[-1, 1]]);
        let mid = Probability::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(
            separating_measures(&k, true).unwrap(),
            SeparatingMeasures::NonEmpty {
                sample: mid.clone(),
                vertices: Some(vec![mid])
            }
        );
        let SeparatingMeasures::NonEmpty {
            vertices: Some(v), ..
        } = separating_measures(&cone(3, &[]), true).unwrap()
        else {
            panic!()
        };
        assert_eq!(
            v,
            vec![
                Probability::dirac(3, 2),
                Probability::dirac(3, 1),
                Probability::dirac(3, 0)
            ]
        );
        assert_eq!(
            separating_measures(&cone(2, &[&[1, 1]]), true).unwrap(),
            SeparatingMeasures::Empty {
                sure_win: vec![int(1)]
            }
        );
    }

    #[test]
    fn enumeration_limits() {
        let k = cone(11, &[]);
        assert!(matches!(
            separating_measures(&k, true),
            Err(Error::EnumerationLimit { .. })
        ));
        assert!(separating_measures(&k, false).is_ok());
        let gens: Vec<Vec<i64>> = (0..13).map(|_| vec![0, 0]).collect();
        let refs: Vec<&[i64]> = gens.iter().map(Vec::as_slice).collect();
        assert!(matches!(
            separating_measures(&cone(2, &refs), true),
            Err(Error::EnumerationLimit { .. })
        ));
    }
}
