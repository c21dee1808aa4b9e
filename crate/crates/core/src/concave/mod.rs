//! Concave integrals generated by finitely many anchor values, their cores,
//! core witnesses attaining the supremum over a convex set, and coherent
//! common extensions of families of linear functionals.
//!
//! An anchor `(f_j, gamma_j)` asserts `gamma(f_j) >= gamma_j`. The generated
//! integral is the least concave integral compatible with the anchors,
//!
//! ```text
//! gamma(f) = sup { sum_j lambda_j gamma_j : sum_j lambda_j f_j <= f, lambda >= 0 }
//! ```
//!
//! where the normalization anchor `(1, 1)` carries a free-signed weight, so
//! that `gamma(t + f) = t + gamma(f)` for every constant `t`.

mod extension;

use num_traits::{One, Signed, Zero};

use crate::coherence::{
    detect_sure_win, CoherenceVerdict, ConeSpec, PayoffFn, Probability, Scenario,
};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpResult, Relation, Row, Sense, VarBound};
use crate::rational::{dot, Rational};

pub use extension::{
    coherence_bound, common_extension, restriction_monotonicity, CoherenceBound, CommonExtension,
    Comparison, ExtensionProblem, FamilyMember, MonotonicityReport,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub payoff: PayoffFn,
    pub value: Rational,
}

impl Anchor {
    pub fn new(payoff: PayoffFn, value: Rational) -> Self {
        Anchor { payoff, value }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorSet {
    scenario: Scenario,
    anchors: Vec<Anchor>,
    /// Index of the `(1, 1)` anchor; `None` in membership-only sets.
    normalization: Option<usize>,
}

impl AnchorSet {
    /// Requires an anchor `(1, 1)`; the first such anchor becomes the normalization.
    pub fn new(scenario: Scenario, anchors: Vec<Anchor>) -> Result<Self> {
        let mut set = Self::membership_only(scenario, anchors)?;
        let one = Rational::one();
        set.normalization = set
            .anchors
            .iter()
            .position(|a| a.value == one && a.payoff.is_constant(&one));
        if set.normalization.is_none() {
            return Err(Error::MissingNormalization);
        }
        Ok(set)
    }

    /// An anchor list used only as a constraint set; all weights are nonnegative.
    pub fn membership_only(scenario: Scenario, anchors: Vec<Anchor>) -> Result<Self> {
        for a in &anchors {
            crate::coherence::check_len("anchor", scenario.len(), a.payoff.len())?;
        }
        Ok(AnchorSet {
            scenario,
            anchors,
            normalization: None,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    pub fn normalization(&self) -> Option<usize> {
        self.normalization
    }

    fn bounds(&self) -> Vec<VarBound> {
        (0..self.anchors.len())
            .map(|j| {
                if Some(j) == self.normalization {
                    VarBound::Free
                } else {
                    VarBound::NonNegative
                }
            })
            .collect()
    }

    /// Is `weights` an admissible decomposition of something below `f`?
    fn decomposes_below(&self, weights: &[Rational], f: &PayoffFn) -> bool {
        weights.len() == self.anchors.len()
            && weights
                .iter()
                .enumerate()
                .all(|(j, w)| Some(j) == self.normalization || !w.is_negative())
            && f.dominates(&self.combination(weights))
    }

    fn combination(&self, weights: &[Rational]) -> PayoffFn {
        let fns: Vec<PayoffFn> = self.anchors.iter().map(|a| a.payoff.clone()).collect();
        PayoffFn::combination(self.scenario.len(), &fns, weights)
    }

    fn anchored_value(&self, weights: &[Rational]) -> Rational {
        self.anchors
            .iter()
            .zip(weights)
            .fold(Rational::zero(), |acc, (a, w)| acc + &a.value * w)
    }

    /// The bets `gamma_j - f_j` whose cone has a sure win iff the anchors are incoherent.
    pub fn bet_cone(&self) -> ConeSpec {
        let gens = self
            .anchors
            .iter()
            .map(|a| a.payoff.scale(&-Rational::one()).shift(&a.value))
            .collect();
        ConeSpec::new(self.scenario.clone(), gens).expect("anchor lengths validated")
    }
}

/// Generated integral of a function, with certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratedValue {
    Finite {
        value: Rational,
        /// Anchor weights attaining the value.
        decomposition: Vec<Rational>,
        /// A positive charge dominating every anchor with `charge(f) = value`.
        charge: Vec<Rational>,
    },
    /// No decomposition fits below `f`; nonnegative state weights `u` with
    /// `u(f) < 0` and `u(f_j) >= 0` (`= 0` for the normalization) certify it.
    MinusInfinity { farkas: Vec<Rational> },
    /// Anchor weights `r` with `sum r_j f_j <= 0` and `sum r_j gamma_j > 0`.
    PlusInfinity { ray: Vec<Rational> },
}

impl GeneratedValue {
    pub fn value(&self) -> crate::coherence::ExtendedValue {
        use crate::coherence::ExtendedValue;
        match self {
            GeneratedValue::Finite { value, .. } => ExtendedValue::Finite(value.clone()),
            GeneratedValue::MinusInfinity { .. } => ExtendedValue::MinusInfinity,
            GeneratedValue::PlusInfinity { .. } => ExtendedValue::PlusInfinity,
        }
    }

    pub fn verify(&self, anchors: &AnchorSet, f: &PayoffFn) -> bool {
        let n = anchors.scenario.len();
        match self {
            GeneratedValue::Finite {
                value,
                decomposition,
                charge,
            } => {
                anchors.decomposes_below(decomposition, f)
                    && anchors.anchored_value(decomposition) == *value
                    && charge.len() == n
                    && charge.iter().all(|c| !c.is_negative())
                    && anchors.anchors.iter().enumerate().all(|(j, a)| {
                        let level = dot(charge, a.payoff.values());
                        if Some(j) == anchors.normalization {
                            level == a.value
                        } else {
                            level >= a.value
                        }
                    })
                    && dot(charge, f.values()) == *value
            }
            GeneratedValue::MinusInfinity { farkas } => {
                farkas.len() == n
                    && farkas.iter().all(|u| !u.is_negative())
                    && dot(farkas, f.values()).is_negative()
                    && anchors.anchors.iter().enumerate().all(|(j, a)| {
                        let agg = dot(farkas, a.payoff.values());
                        if Some(j) == anchors.normalization {
                            agg.is_zero()
                        } else {
                            !agg.is_negative()
                        }
                    })
            }
            GeneratedValue::PlusInfinity { ray } => {
                let zero = PayoffFn::constant(n, Rational::zero());
                anchors.decomposes_below(ray, &zero) && anchors.anchored_value(ray).is_positive()
            }
        }
    }
}

pub fn eval_generated(anchors: &AnchorSet, f: &PayoffFn) -> Result<GeneratedValue> {
    let n = anchors.scenario.len();
    crate::coherence::check_len("claim", n, f.len())?;
    if anchors.anchors.is_empty() {
        // Only the empty decomposition, worth 0, and it fits iff f >= 0.
        return Ok(match f.values().iter().position(Signed::is_negative) {
            None => GeneratedValue::Finite {
                value: Rational::zero(),
                decomposition: vec![],
                charge: vec![Rational::zero(); n],
            },
            Some(w) => GeneratedValue::MinusInfinity {
                farkas: PayoffFn::indicator(n, [w]).into_values(),
            },
        });
    }
    let rows = (0..n)
        .map(|w| {
            let coeffs = anchors
                .anchors
                .iter()
                .map(|a| a.payoff.values()[w].clone())
                .collect();
            Row::new(coeffs, Relation::Le, f.values()[w].clone())
        })
        .collect();
    let objective = anchors.anchors.iter().map(|a| a.value.clone()).collect();
    let lp = LinearProgram::new(Sense::Maximize, objective, rows, anchors.bounds())?;
    Ok(match lp::solve(&lp)? {
        LpResult::Optimal(sol) => GeneratedValue::Finite {
            value: sol.value,
            decomposition: sol.primal,
            charge: sol.dual,
        },
        LpResult::Infeasible(farkas) => GeneratedValue::MinusInfinity { farkas },
        LpResult::Unbounded(u) => GeneratedValue::PlusInfinity { ray: u.ray },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// Index of the first anchor with `lambda(f_j) < gamma_j`.
    Violated(usize),
}

/// Checks `lambda(f_j) >= gamma_j` for every anchor.
pub fn core_membership(anchors: &AnchorSet, lambda: &[Rational]) -> Result<Membership> {
    crate::coherence::check_len("charge", anchors.scenario.len(), lambda.len())?;
    if lambda.iter().any(Signed::is_negative) {
        return Err(Error::NegativeCharge);
    }
    Ok(anchors
        .anchors
        .iter()
        .position(|a| dot(lambda, a.payoff.values()) < a.value)
        .map_or(Membership::Member, Membership::Violated))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapleyOutcome {
    Witness {
        /// Supremum of the generated integral over the convex hull of the subset.
        gamma_c: Rational,
        /// Core probability whose supremum over the hull equals `gamma_c`.
        lambda_c: Probability,
        /// Convex weights over the subset locating a maximizer.
        hull_weights: Vec<Rational>,
        /// Anchor weights decomposing below that maximizer.
        decomposition: Vec<Rational>,
    },
    /// Anchor weights `lambda >= 0` with `sum lambda_j (gamma_j - f_j) >= 1`.
    Incoherent { sure_win: Vec<Rational> },
}

impl ShapleyOutcome {
    pub fn verify(&self, anchors: &AnchorSet, subset: &[usize]) -> bool {
        match self {
            ShapleyOutcome::Witness {
                gamma_c,
                lambda_c,
                hull_weights,
                decomposition,
            } => {
                let hull: Vec<PayoffFn> = subset
                    .iter()
                    .map(|&s| anchors.anchors[s].payoff.clone())
                    .collect();
                let levels: Vec<Rational> = hull.iter().map(|f| lambda_c.expect(f)).collect();
                let target = PayoffFn::combination(anchors.scenario.len(), &hull, hull_weights);
                core_membership(anchors, lambda_c.weights()) == Ok(Membership::Member)
                    && levels.iter().max() == Some(gamma_c)
                    && hull_weights.len() == subset.len()
                    && hull_weights.iter().all(|w| !w.is_negative())
                    && crate::rational::sum(hull_weights) == Rational::one()
                    && anchors.decomposes_below(decomposition, &target)
                    && anchors.anchored_value(decomposition) == *gamma_c
            }
            ShapleyOutcome::Incoherent { sure_win } => anchors.bet_cone().is_sure_win(sure_win),
        }
    }
}

fn check_subset(anchors: &AnchorSet, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let len = anchors.anchors.len();
    match subset.iter().find(|&&s| s >= len) {
        Some(&index) => Err(Error::IndexOutOfRange { index, len }),
        None => Ok(()),
    }
}

/// Supremum of the generated integral over `conv { f_s : s in subset }`
/// together with a core probability attaining it, or a sure win against the
/// anchors when they are incoherent.
pub fn shapley_witness(anchors: &AnchorSet, subset: &[usize]) -> Result<ShapleyOutcome> {
    if anchors.normalization.is_none() {
        return Err(Error::MissingNormalization);
    }
    check_subset(anchors, subset)?;
    let n = anchors.scenario.len();
    let k = anchors.anchors.len();
    // Variables: anchor weights, then convex weights over the subset.
    let mut rows: Vec<Row> = (0..n)
        .map(|w| {
            let mut coeffs: Vec<Rational> = anchors
                .anchors
                .iter()
                .map(|a| a.payoff.values()[w].clone())
                .collect();
            coeffs.extend(
                subset
                    .iter()
                    .map(|&s| -anchors.anchors[s].payoff.values()[w].clone()),
            );
            Row::new(coeffs, Relation::Le, Rational::zero())
        })
        .collect();
    let mut convex = vec![Rational::zero(); k];
    convex.extend(subset.iter().map(|_| Rational::one()));
    rows.push(Row::new(convex, Relation::Eq, Rational::one()));
    let mut objective: Vec<Rational> = anchors.anchors.iter().map(|a| a.value.clone()).collect();
    objective.extend(subset.iter().map(|_| Rational::zero()));
    let mut bounds = anchors.bounds();
    bounds.extend(subset.iter().map(|_| VarBound::NonNegative));
    let lp = LinearProgram::new(Sense::Maximize, objective, rows, bounds)?;
    match lp::solve(&lp)? {
        LpResult::Optimal(sol) => {
            let mut primal = sol.primal;
            let hull_weights = primal.split_off(k);
            let mut dual = sol.dual;
            dual.truncate(n);
            Ok(ShapleyOutcome::Witness {
                gamma_c: sol.value,
                lambda_c: Probability::new(dual)?,
                hull_weights,
                decomposition: primal,
            })
        }
        LpResult::Unbounded(_) => match detect_sure_win(&anchors.bet_cone())? {
            CoherenceVerdict::SureWin(sure_win) => Ok(ShapleyOutcome::Incoherent { sure_win }),
            CoherenceVerdict::Separating(_) => Err(Error::Internal(
                "generated integral unbounded on coherent anchors".into(),
            )),
        },
        LpResult::Infeasible(_) => Err(Error::Internal(
            "hull decomposition LP is always feasible".into(),
        )),
    }
}

/// The cone of sums `sum (gamma_j - f_j) + alpha (f_s - gamma_c)`, `alpha >= 0`,
/// with the normalization bet taken in both signs. A core witness for the
/// subset is exactly a separating probability of this cone.
pub fn witness_cone(anchors: &AnchorSet, subset: &[usize], gamma_c: &Rational) -> Result<ConeSpec> {
    check_subset(anchors, subset)?;
    let mut gens = anchors.bet_cone().generators().to_vec();
    if let Some(j) = anchors.normalization {
        gens.push(gens[j].scale(&-Rational::one()));
    }
    gens.extend(
        subset
            .iter()
            .map(|&s| anchors.anchors[s].payoff.shift(&-gamma_c.clone())),
    );
    ConeSpec::new(anchors.scenario.clone(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn payoff(v: &[Rational]) -> PayoffFn {
        PayoffFn::new(v.to_vec())
    }

    fn three_anchors(side: Rational) -> AnchorSet {
        AnchorSet::new(
            Scenario::indexed(2).unwrap(),
            vec![
                Anchor::new(payoff(&[int(1), int(1)]), int(1)),
                Anchor::new(payoff(&[int(1), int(0)]), side.clone()),
                Anchor::new(payoff(&[int(0), int(1)]), side),
            ],
        )
        .unwrap()
    }

    fn value(g: &GeneratedValue) -> Rational {
        g.value().finite().cloned().expect("finite")
    }

    #[test]
    fn single_anchor_gives_the_minimum() {
        let a = AnchorSet::new(
            Scenario::indexed(2).unwrap(),
            vec![Anchor::new(payoff(&[int(1), int(1)]), int(1))],
        )
        .unwrap();
        let f = payoff(&[int(2), int(3)]);
        let g = eval_generated(&a, &f).unwrap();
        assert_eq!(value(&g), int(2));
        assert!(g.verify(&a, &f));
    }

    #[test]
    fn side_anchor_binds_on_a_corner() {
        let a = three_anchors(ratio(2, 5));
        let f = payoff(&[int(1), int(0)]);
        let g = eval_generated(&a, &f).unwrap();
        assert_eq!(value(&g), ratio(2, 5));
        assert!(g.verify(&a, &f));
    }

    #[test]
    fn constant_anchor_wins_at_the_midpoint() {
        let a = three_anchors(ratio(2, 5));
        let f = payoff(&[ratio(1, 2), ratio(1, 2)]);
        let g = eval_generated(&a, &f).unwrap();
        assert_eq!(value(&g), ratio(1, 2));
        assert!(g.verify(&a, &f));
    }

    #[test]
    fn incoherent_anchor_is_unbounded() {
        let a = three_anchors(int(2));
        let f = payoff(&[int(0), int(0)]);
        let g = eval_generated(&a, &f).unwrap();
        assert_eq!(g.value(), crate::coherence::ExtendedValue::PlusInfinity);
        assert!(g.verify(&a, &f));
    }

    #[test]
    fn membership_only_set_can_be_minus_infinity() {
        let a = AnchorSet::membership_only(
            Scenario::indexed(2).unwrap(),
            vec![Anchor::new(payoff(&[int(1), int(0)]), int(1))],
        )
        .unwrap();
        let f = payoff(&[int(1), int(-1)]);
        let g = eval_generated(&a, &f).unwrap();
        assert_eq!(g.value(), crate::coherence::ExtendedValue::MinusInfinity);
        assert!(g.verify(&a, &f));
        let empty = AnchorSet::membership_only(Scenario::indexed(2).unwrap(), vec![]).unwrap();
        assert_eq!(
            eval_generated(&empty, &f).unwrap().value(),
            crate::coherence::ExtendedValue::MinusInfinity
        );
    }

    #[test]
    fn missing_normalization_is_rejected() {
        let err = AnchorSet::new(
            Scenario::indexed(1).unwrap(),
            vec![Anchor::new(payoff(&[int(2)]), int(2))],
        );
        assert_eq!(err.unwrap_err(), Error::MissingNormalization);
    }

    #[test]
    fn core_membership_examples() {
        let a = three_anchors(ratio(2, 5));
        assert_eq!(
            core_membership(&a, &[ratio(1, 2), ratio(1, 2)]),
            Ok(Membership::Member)
        );
        assert_eq!(
            core_membership(&a, &[int(1), int(0)]),
            Ok(Membership::Violated(2))
        );
        let empty = AnchorSet::membership_only(Scenario::indexed(2).unwrap(), vec![]).unwrap();
        assert_eq!(
            core_membership(&empty, &[int(7), int(0)]),
            Ok(Membership::Member)
        );
        assert_eq!(
            core_membership(&a, &[int(-1), int(2)]),
            Err(Error::NegativeCharge)
        );
    }

    #[test]
    fn witness_over_the_two_corners() {
        let a = three_anchors(ratio(2, 5));
        let out = shapley_witness(&a, &[1, 2]).unwrap();
        let ShapleyOutcome::Witness {
            gamma_c, lambda_c, ..
        } = &out
        else {
            panic!()
        };
        assert_eq!(*gamma_c, ratio(1, 2));
        assert_eq!(lambda_c.weights(), &[ratio(1, 2), ratio(1, 2)]);
        assert!(out.verify(&a, &[1, 2]));
        let cone = witness_cone(&a, &[1, 2], gamma_c).unwrap();
        assert!(cone.separates(lambda_c));
        assert!(!detect_sure_win(&cone).unwrap().is_sure_win());
    }

    #[test]
    fn witness_on_the_constant_anchor() {
        let a = three_anchors(ratio(2, 5));
        let out = shapley_witness(&a, &[0]).unwrap();
        let ShapleyOutcome::Witness {
            gamma_c, lambda_c, ..
        } = &out
        else {
            panic!()
        };
        assert_eq!(*gamma_c, int(1));
        assert_eq!(lambda_c.expect(&payoff(&[int(1), int(1)])), int(1));
        assert!(out.verify(&a, &[0]));
    }

    #[test]
    fn incoherent_anchors_give_a_sure_win() {
        let a = AnchorSet::new(
            Scenario::indexed(2).unwrap(),
            vec![
                Anchor::new(payoff(&[int(1), int(1)]), int(1)),
                Anchor::new(payoff(&[int(1), int(0)]), int(2)),
            ],
        )
        .unwrap();
        let out = shapley_witness(&a, &[1]).unwrap();
        assert!(matches!(out, ShapleyOutcome::Incoherent { .. }));
        assert!(out.verify(&a, &[1]));
    }

    #[test]
    fn subset_validation() {
        let a = three_anchors(ratio(2, 5));
        assert_eq!(shapley_witness(&a, &[]).unwrap_err(), Error::EmptySubset);
        assert_eq!(
            shapley_witness(&a, &[3]).unwrap_err(),
            Error::IndexOutOfRange { index: 3, len: 3 }
        );
    }
}
