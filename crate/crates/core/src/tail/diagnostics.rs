use num_traits::Zero;

use super::{EventuallyAffine, TailFunctional, TailMeasure};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CounterexampleKind {
    /// `f_n = 1_[n, inf)`.
    LimitCharge,
    /// `f_n = (i - n)⁺`.
    SlopeCharge,
}

/// A sequence decreasing pointwise to zero along which `phi` stays at `limit`
/// from index `start` on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub kind: CounterexampleKind,
    pub start: usize,
    pub limit: Rational,
}

impl Counterexample {
    pub fn member(&self, n: usize) -> EventuallyAffine {
        match self.kind {
            CounterexampleKind::LimitCharge => EventuallyAffine::indicator_from(n),
            CounterexampleKind::SlopeCharge => EventuallyAffine::ramp_from(n),
        }
    }

    pub fn describe(&self) -> &'static str {
        match self.kind {
            CounterexampleKind::LimitCharge => "f_n = 1_[n,inf)",
            CounterexampleKind::SlopeCharge => "f_n = (i - n)^+",
        }
    }

    /// On `window` consecutive members from `start`: each is nonnegative, vanishes
    /// below its index, dominates its successor, and `phi` takes the value `limit`
    /// on it. A nonzero limit then contradicts continuity from above.
    pub fn verify(&self, phi: &TailFunctional, window: usize) -> bool {
        if self.limit.is_zero() || window == 0 {
            return false;
        }
        (self.start..self.start + window).all(|n| {
            let f = self.member(n);
            let next = self.member(n + 1);
            f.is_nonnegative()
                && (0..n).all(|i| f.at(i).is_zero())
                && next.le(&f)
                && phi.evaluate(&f).as_ref() == Ok(&self.limit)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DaniellVerdict {
    Daniell,
    Counterexample(Counterexample),
}

/// `phi` is continuous along sequences decreasing to zero iff it carries no mass
/// at infinity and no slope charge.
pub fn daniell_check(phi: &TailFunctional) -> DaniellVerdict {
    let start = phi.support_end().map_or(0, |k| k + 1);
    let (kind, limit) = if !phi.limit_charge().is_zero() {
        (CounterexampleKind::LimitCharge, phi.limit_charge().clone())
    } else if !phi.slope_charge().is_zero() {
        (CounterexampleKind::SlopeCharge, phi.slope_charge().clone())
    } else {
        return DaniellVerdict::Daniell;
    };
    DaniellVerdict::Counterexample(Counterexample { kind, start, limit })
}

/// Result of comparing two functions; `witness` is the first index where the
/// required inequality fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<usize>,
}

impl Check {
    fn le(lower: &EventuallyAffine, upper: &EventuallyAffine) -> Self {
        let witness = lower.first_exceedance(upper);
        Check {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderlyReport {
    /// `|h_n - target| <= d_n` for each `n`.
    pub pointwise_domination: Vec<Check>,
    /// `d_{n+1} <= d_n` for each consecutive pair.
    pub monotone: Vec<Check>,
    pub dominator_integrals: Vec<Rational>,
    pub note: &'static str,
}

pub const ORDERLY_NOTE: &str =
    "finite prefix only: whether the dominator integrals converge to 0 is for the caller to decide";

impl OrderlyReport {
    pub fn all_checks_hold(&self) -> bool {
        self.pointwise_domination
            .iter()
            .chain(&self.monotone)
            .all(|c| c.holds)
    }
}

pub fn orderly_diagnostic(
    h: &[EventuallyAffine],
    target: &EventuallyAffine,
    dominators: &[EventuallyAffine],
    m: &TailMeasure,
) -> Result<OrderlyReport> {
    if h.len() != dominators.len() {
        return Err(Error::LengthMismatch {
            what: "dominator sequence",
            expected: h.len(),
            found: dominators.len(),
        });
    }
    let pointwise_domination = h
        .iter()
        .zip(dominators)
        .map(|(hn, d)| Check::le(&hn.sub(target).abs(), d))
        .collect();
    let monotone = dominators
        .windows(2)
        .map(|pair| Check::le(&pair[1], &pair[0]))
        .collect();
    let dominator_integrals = dominators
        .iter()
        .map(|d| m.integrate(d))
        .collect::<Result<_>>()?;
    Ok(OrderlyReport {
        pointwise_domination,
        monotone,
        dominator_integrals,
        note: ORDERLY_NOTE,
    })
}
