use num_traits::{One, Zero};

use super::{detect_sure_win, CoherenceVerdict, ConeSpec, PayoffFn, Probability, Scenario};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpResult, Relation, Row, Sense};
use crate::rational::Rational;

/// Prices `value` assigned to events (subsets of the states).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAssignment {
    scenario: Scenario,
    /// Event membership by state index, and the assessed value.
    entries: Vec<(Vec<bool>, Rational)>,
}

impl PartialAssignment {
    pub fn new(scenario: Scenario, entries: Vec<(Vec<bool>, Rational)>) -> Result<Self> {
        for (event, _) in &entries {
            super::check_len("event", scenario.len(), event.len())?;
        }
        Ok(PartialAssignment { scenario, entries })
    }

    /// Builds events from state labels.
    pub fn from_labels<S: AsRef<str>>(
        scenario: Scenario,
        entries: Vec<(Vec<S>, Rational)>,
    ) -> Result<Self> {
        let n = scenario.len();
        let entries = entries
            .into_iter()
            .map(|(labels, value)| {
                let mut event = vec![false; n];
                for l in labels {
                    event[scenario.index_of(l.as_ref())?] = true;
                }
                Ok((event, value))
            })
            .collect::<Result<_>>()?;
        Ok(PartialAssignment { scenario, entries })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn entries(&self) -> &[(Vec<bool>, Rational)] {
        &self.entries
    }

    fn indicator(&self, event: &[bool]) -> PayoffFn {
        PayoffFn::indicator(
            self.scenario.len(),
            event.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        )
    }

    /// The bet `1_F - value` of each entry.
    pub fn bets(&self) -> Vec<PayoffFn> {
        self.entries
            .iter()
            .map(|(e, v)| self.indicator(e).shift(&-v.clone()))
            .collect()
    }

    pub fn probability_of(&self, m: &Probability, entry: usize) -> Rational {
        m.expect(&self.indicator(&self.entries[entry].0))
    }

    /// Is `m` an extension, agreeing with every assessed value?
    pub fn is_extension(&self, m: &Probability) -> bool {
        m.len() == self.scenario.len()
            && (0..self.entries.len()).all(|k| self.probability_of(m, k) == self.entries[k].1)
    }

    /// Is `sum a_k (1_{F_k} - value_k) >= 1` everywhere?
    pub fn is_sure_win(&self, stakes: &[Rational]) -> bool {
        stakes.len() == self.entries.len()
            && PayoffFn::combination(self.scenario.len(), &self.bets(), stakes)
                .values()
                .iter()
                .all(|v| *v >= Rational::one())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Probability(Probability),
    /// Signed stakes `a_k`, one per entry.
    SureWin(Vec<Rational>),
}

impl Extension {
    pub fn verify(&self, assignment: &PartialAssignment) -> bool {
        match self {
            Extension::Probability(m) => assignment.is_extension(m),
            Extension::SureWin(a) => assignment.is_sure_win(a),
        }
    }
}

/// Extends the assessment to a probability on all events, or exhibits a sure
/// win against it.
pub fn extend_to_probability(assignment: &PartialAssignment) -> Result<Extension> {
    let n = assignment.scenario.len();
    let mut rows = vec![Row::new(
        vec![Rational::one(); n],
        Relation::Eq,
        Rational::one(),
    )];
    for (event, value) in &assignment.entries {
        let coeffs = event
            .iter()
            .map(|&b| if b { Rational::one() } else { Rational::zero() })
            .collect();
        rows.push(Row::new(coeffs, Relation::Eq, value.clone()));
    }
    let lp = LinearProgram::nonnegative(Sense::Maximize, vec![Rational::zero(); n], rows)?;
    match lp::solve(&lp)? {
        LpResult::Optimal(sol) => Ok(Extension::Probability(Probability::new(sol.primal)?)),
        LpResult::Infeasible(_) => {
            // Both signs of every bet generate the cone.
            let generators = assignment
                .bets()
                .into_iter()
                .flat_map(|b| {
                    let neg = b.scale(&-Rational::one());
                    [b, neg]
                })
                .collect();
            let cone = ConeSpec::new(assignment.scenario.clone(), generators)?;
            match detect_sure_win(&cone)? {
                CoherenceVerdict::SureWin(lambda) => Ok(Extension::SureWin(
                    lambda.chunks(2).map(|p| &p[0] - &p[1]).collect(),
                )),
                CoherenceVerdict::Separating(_) => Err(Error::Internal(
                    "extension infeasible yet the bet cone separates".into(),
                )),
            }
        }
        LpResult::Unbounded(_) => Err(Error::Internal("zero objective reported unbounded".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn states(n: usize) -> Scenario {
        Scenario::indexed(n).unwrap()
    }

    #[test]
    fn normalization_only() {
        let a = PartialAssignment::from_labels(states(3), vec![(vec!["s0", "s1", "s2"], int(1))])
            .unwrap();
        let ext = extend_to_probability(&a).unwrap();
        assert!(matches!(ext, Extension::Probability(_)));
        assert!(ext.verify(&a));
    }

    #[test]
    fn single_event_with_normalization() {
        let a = PartialAssignment::from_labels(
            states(3),
            vec![(vec!["s0"], ratio(3, 10)), (vec!["s0", "s1", "s2"], int(1))],
        )
        .unwrap();
        let Extension::Probability(m) = extend_to_probability(&a).unwrap() else {
            panic!()
        };
        assert_eq!(m.weights()[0], ratio(3, 10));
        assert!(a.is_extension(&m));
    }

    #[test]
    fn overpriced_disjoint_events_lose_surely() {
        let a = PartialAssignment::from_labels(
            states(2),
            vec![(vec!["s0"], ratio(3, 5)), (vec!["s1"], ratio(3, 5))],
        )
        .unwrap();
        let ext = extend_to_probability(&a).unwrap();
        assert_eq!(ext, Extension::SureWin(vec![int(-5), int(-5)]));
        assert!(ext.verify(&a));
    }

    #[test]
    fn unknown_label_is_rejected() {
        let err =
            PartialAssignment::from_labels(states(2), vec![(vec!["zz"], int(0))]).unwrap_err();
        assert_eq!(err, Error::UnknownState("zz".into()));
    }
}
