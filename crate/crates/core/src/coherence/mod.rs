//! Finite state spaces: convex cones of payoffs, sure wins, separating
//! probabilities, superhedging prices, coherent extension of assessments and
//! representation of linear functionals by charges.
//!
//! On a finite state space every function is bounded, so a cone and its
//! bounded-below part coincide and no integrability side conditions arise.

mod assessment;
mod cone;
mod represent;
pub mod vertices;

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, Rational};

pub use assessment::{extend_to_probability, Extension, PartialAssignment};
pub use cone::{
    detect_sure_win, separating_measures, superhedge_price, SeparatingMeasures, SuperhedgePrice,
    MAX_ENUMERATION_GENERATORS, MAX_ENUMERATION_STATES,
};
pub use represent::{represent_functional, FunctionalSpec, NotPositiveWitness, Representation};

/// Ordered, duplicate-free list of state labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scenario {
    states: Vec<String>,
}

impl Scenario {
    pub fn new<S: Into<String>>(states: impl IntoIterator<Item = S>) -> Result<Self> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(Error::EmptyScenario);
        }
        let mut seen = HashSet::new();
        for s in &states {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateState(s.clone()));
            }
        }
        Ok(Scenario { states })
    }

    /// States labelled `s0, s1, ...`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("s{i}")))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| Error::UnknownState(label.to_owned()))
    }
}

/// A real function on the states of a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PayoffFn(Vec<Rational>);

impl PayoffFn {
    pub fn new(values: Vec<Rational>) -> Self {
        PayoffFn(values)
    }

    pub fn constant(n: usize, value: Rational) -> Self {
        PayoffFn(vec![value; n])
    }

    pub fn indicator(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut v = vec![Rational::zero(); n];
        for i in members {
            v[i] = Rational::one();
        }
        PayoffFn(v)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_constant(&self, value: &Rational) -> bool {
        self.0.iter().all(|v| v == value)
    }

    pub fn max(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min(&self) -> Rational {
        self.0.iter().min().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn dominates(&self, other: &PayoffFn) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn add(&self, other: &PayoffFn) -> PayoffFn {
        PayoffFn(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, t: &Rational) -> PayoffFn {
        PayoffFn(self.0.iter().map(|a| a * t).collect())
    }

    pub fn shift(&self, t: &Rational) -> PayoffFn {
        PayoffFn(self.0.iter().map(|a| a + t).collect())
    }

    /// `sum_i weights[i] * fns[i]` on `n` states.
    pub fn combination(n: usize, fns: &[PayoffFn], weights: &[Rational]) -> PayoffFn {
        let mut out = vec![Rational::zero(); n];
        for (f, w) in fns.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&f.0) {
                *o += w * v;
            }
        }
        PayoffFn(out)
    }
}

impl From<Vec<Rational>> for PayoffFn {
    fn from(values: Vec<Rational>) -> Self {
        PayoffFn(values)
    }
}

/// The convex cone `{ sum_i lambda_i g_i : lambda_i >= 0 }`; no generators means `{0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    scenario: Scenario,
    generators: Vec<PayoffFn>,
}

impl ConeSpec {
    pub fn new(scenario: Scenario, generators: Vec<PayoffFn>) -> Result<Self> {
        for g in &generators {
            check_len("generator", scenario.len(), g.len())?;
        }
        Ok(ConeSpec {
            scenario,
            generators,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn generators(&self) -> &[PayoffFn] {
        &self.generators
    }

    /// `sum_i lambda_i g_i`.
    pub fn element(&self, lambda: &[Rational]) -> PayoffFn {
        PayoffFn::combination(self.scenario.len(), &self.generators, lambda)
    }

    /// Does `lambda` certify a sure win (nonnegative, combination `>= 1` everywhere)?
    pub fn is_sure_win(&self, lambda: &[Rational]) -> bool {
        lambda.len() == self.generators.len()
            && lambda.iter().all(|l| !l.is_negative())
            && self
                .element(lambda)
                .values()
                .iter()
                .all(|v| *v >= Rational::one())
    }

    /// Is `m` a separating probability, `m(g) <= 0` for every generator?
    pub fn separates(&self, m: &Probability) -> bool {
        m.len() == self.scenario.len() && self.generators.iter().all(|g| !m.expect(g).is_positive())
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            what,
            expected,
            found,
        })
    }
}

/// Nonnegative weights summing to exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Probability(Vec<Rational>);

impl Probability {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty()
            || weights.iter().any(Signed::is_negative)
            || crate::rational::sum(&weights) != Rational::one()
        {
            return Err(Error::NotAProbability);
        }
        Ok(Probability(weights))
    }

    pub fn dirac(n: usize, at: usize) -> Self {
        let mut w = vec![Rational::zero(); n];
        w[at] = Rational::one();
        Probability(w)
    }

    pub fn uniform(n: usize) -> Self {
        Probability(vec![Rational::new(1.into(), (n as i64).into()); n])
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn expect(&self, f: &PayoffFn) -> Rational {
        dot(&self.0, f.values())
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Exactly one of the two alternatives of the separation dichotomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoherenceVerdict {
    /// Nonnegative coefficients, one per generator, whose combination is `>= 1` everywhere.
    SureWin(Vec<Rational>),
    Separating(Probability),
}

impl CoherenceVerdict {
    pub fn is_sure_win(&self) -> bool {
        matches!(self, CoherenceVerdict::SureWin(_))
    }

    /// Re-checks the certificate against `cone`.
    pub fn verify(&self, cone: &ConeSpec) -> bool {
        match self {
            CoherenceVerdict::SureWin(lambda) => cone.is_sure_win(lambda),
            CoherenceVerdict::Separating(m) => cone.separates(m),
        }
    }
}

/// A value of the extended real line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedValue {
    MinusInfinity,
    Finite(Rational),
    PlusInfinity,
}

impl ExtendedValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::MinusInfinity => f.write_str("-inf"),
            ExtendedValue::Finite(v) => write!(f, "{v}"),
            ExtendedValue::PlusInfinity => f.write_str("+inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn scenario_validation() {
        assert_eq!(
            Scenario::new(Vec::<String>::new()),
            Err(Error::EmptyScenario)
        );
        assert_eq!(
            Scenario::new(["a", "b", "a"]),
            Err(Error::DuplicateState("a".into()))
        );
        let s = Scenario::new(["a", "b"]).unwrap();
        assert_eq!(s.index_of("b"), Ok(1));
        assert_eq!(s.index_of("c"), Err(Error::UnknownState("c".into())));
    }

    #[test]
    fn probability_validation() {
        assert!(Probability::new(vec![ratio(1, 2), ratio(1, 2)]).is_ok());
        assert_eq!(
            Probability::new(vec![int(2), int(-1)]),
            Err(Error::NotAProbability)
        );
        assert_eq!(
            Probability::new(vec![ratio(1, 2)]),
            Err(Error::NotAProbability)
        );
        assert_eq!(Probability::uniform(4).weights()[3], ratio(1, 4));
    }

    #[test]
    fn cone_rejects_wrong_lengths() {
        let s = Scenario::indexed(2).unwrap();
        let err = ConeSpec::new(s, vec![PayoffFn::new(vec![int(1)])]).unwrap_err();
        assert_eq!(
            err,
            Error::LengthMismatch {
                what: "generator",
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn extended_values_order() {
        assert!(ExtendedValue::MinusInfinity < ExtendedValue::Finite(int(-100)));
        assert!(ExtendedValue::Finite(int(100)) < ExtendedValue::PlusInfinity);
    }
}
