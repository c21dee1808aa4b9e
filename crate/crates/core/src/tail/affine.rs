use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::{ceil_to_int, floor_to_int, Rational};

/// A function on the naturals, `f(i) = prefix[i]` for `i < prefix.len()` and
/// `f(i) = slope * i + offset` afterwards.
///
/// Values are kept canonical: the prefix is as short as possible, so equal
/// functions have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventuallyAffine {
    prefix: Vec<Rational>,
    slope: Rational,
    offset: Rational,
}

fn to_index(value: &num_bigint::BigInt) -> usize {
    if value.is_negative() {
        0
    } else {
        value
            .to_usize()
            .expect("crossing index exceeds addressable range")
    }
}

impl EventuallyAffine {
    pub fn new(prefix: Vec<Rational>, slope: Rational, offset: Rational) -> Self {
        let mut f = EventuallyAffine {
            prefix,
            slope,
            offset,
        };
        f.canonicalize();
        f
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![], Rational::zero(), c)
    }

    pub fn affine(slope: Rational, offset: Rational) -> Self {
        Self::new(vec![], slope, offset)
    }

    /// `i -> i`.
    pub fn identity() -> Self {
        Self::affine(Rational::from_integer(1.into()), Rational::zero())
    }

    /// Indicator of `[n, inf)`.
    pub fn indicator_from(n: usize) -> Self {
        Self::new(
            vec![Rational::zero(); n],
            Rational::zero(),
            Rational::from_integer(1.into()),
        )
    }

    /// Indicator of the single index `i`.
    pub fn point(i: usize) -> Self {
        let mut prefix = vec![Rational::zero(); i + 1];
        prefix[i] = Rational::from_integer(1.into());
        Self::new(prefix, Rational::zero(), Rational::zero())
    }

    /// `i -> (i - n)^+`.
    pub fn ramp_from(n: usize) -> Self {
        Self::new(
            vec![Rational::zero(); n],
            Rational::from_integer(1.into()),
            -Rational::from_integer(n.into()),
        )
    }

    fn canonicalize(&mut self) {
        while let Some(last) = self.prefix.last() {
            let i = self.prefix.len() - 1;
            if *last == self.tail_at(i) {
                self.prefix.pop();
            } else {
                break;
            }
        }
    }

    fn tail_at(&self, i: usize) -> Rational {
        &self.slope * Rational::from_integer(i.into()) + &self.offset
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail_start(&self) -> usize {
        self.prefix.len()
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn is_bounded(&self) -> bool {
        self.slope.is_zero()
    }

    pub fn at(&self, i: usize) -> Rational {
        match self.prefix.get(i) {
            Some(v) => v.clone(),
            None => self.tail_at(i),
        }
    }

    /// Applies `op` pointwise on `0..horizon` and to the tail coefficients.
    fn zip_with(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let horizon = self.tail_start().max(other.tail_start());
        let prefix = (0..horizon)
            .map(|i| op(&self.at(i), &other.at(i)))
            .collect();
        Self::new(
            prefix,
            op(&self.slope, &other.slope),
            op(&self.offset, &other.offset),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, t: &Rational) -> Self {
        Self::new(
            self.prefix.iter().map(|v| v * t).collect(),
            &self.slope * t,
            &self.offset * t,
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.prefix.iter().map(|v| -v.clone()).collect(),
            -self.slope.clone(),
            -self.offset.clone(),
        )
    }

    /// First index from which `self`'s tail line is `<=` the other's for good.
    fn tail_order_from(&self, other: &Self) -> Option<usize> {
        let ds = &other.slope - &self.slope;
        let dc = &other.offset - &self.offset;
        if ds.is_zero() {
            return (!dc.is_negative()).then_some(0);
        }
        if ds.is_negative() {
            return None;
        }
        // ds * i + dc >= 0  <=>  i >= -dc / ds
        Some(to_index(&ceil_to_int(&(-dc / ds))))
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        let horizon = self.tail_start().max(other.tail_start());
        let (lower, cross) = match self.tail_order_from(other) {
            Some(k) => (self, k),
            None => (
                other,
                other
                    .tail_order_from(self)
                    .expect("tail lines are ordered eventually"),
            ),
        };
        let horizon = horizon.max(cross);
        let prefix = (0..horizon).map(|i| self.at(i).min(other.at(i))).collect();
        Self::new(prefix, lower.slope.clone(), lower.offset.clone())
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &Self) -> Self {
        self.neg().meet(&other.neg()).neg()
    }

    /// `f ∧ n`.
    pub fn truncate(&self, n: &Rational) -> Self {
        self.meet(&Self::constant(n.clone()))
    }

    pub fn positive_part(&self) -> Self {
        self.join(&Self::constant(Rational::zero()))
    }

    pub fn negative_part(&self) -> Self {
        self.neg().positive_part()
    }

    pub fn abs(&self) -> Self {
        self.join(&self.neg())
    }

    /// Smallest index where `self > other`, if any.
    pub fn first_exceedance(&self, other: &Self) -> Option<usize> {
        let horizon = self.tail_start().max(other.tail_start());
        if let Some(i) = (0..horizon).find(|&i| self.at(i) > other.at(i)) {
            return Some(i);
        }
        if self.at(horizon) > other.at(horizon) {
            return Some(horizon);
        }
        let ds = &other.slope - &self.slope;
        if !ds.is_negative() {
            return None;
        }
        // other - self = ds * i + dc < 0 for i > dc / (-ds)
        let dc = &other.offset - &self.offset;
        let bound = dc / -ds;
        Some(horizon.max(to_index(&(floor_to_int(&bound) + 1))))
    }

    /// `self <= other` everywhere.
    pub fn le(&self, other: &Self) -> bool {
        self.first_exceedance(other).is_none()
    }

    pub fn is_nonnegative(&self) -> bool {
        Self::constant(Rational::zero()).le(self)
    }
}

impl PartialOrd for EventuallyAffine {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.le(other), other.le(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Debug for EventuallyAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<String> = self.prefix.iter().map(ToString::to_string).collect();
        write!(
            f,
            "EA[{}; {}*i + {} from {}]",
            prefix.join(", "),
            self.slope,
            self.offset,
            self.tail_start()
        )
    }
}
