//! Nonnegative real magnitudes: an always-valid rational enclosure plus, when
//! available, an exact closed form `radicand^(1/index)`.
//!
//! Finite-place norms are rational powers of p, archimedean norms of rational
//! vectors are square roots of rationals, and products, quotients, powers and
//! roots of such values stay in the same form, so most comparisons downstream
//! are exact.

use crate::interval::{nth_root_enclosure, Interval};
use crate::rat::{exact_nth_root, rat_pow, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// The exact value `radicand^(1/index)`, radicand >= 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Radical {
    pub radicand: Rat,
    pub index: u32,
}

impl Radical {
    pub fn rational(q: Rat) -> Self {
        debug_assert!(!q.is_negative());
        Radical { radicand: q, index: 1 }.normalized()
    }

    pub fn new(radicand: Rat, index: u32) -> Self {
        assert!(index >= 1);
        debug_assert!(!radicand.is_negative());
        Radical { radicand, index }.normalized()
    }

    /// p^e for rational e.
    pub fn prime_power(p: u64, e: &Rat) -> Self {
        let num = e.numer().clone();
        let den: u32 = e.denom().try_into().expect("exponent denominator too large");
        let num: i64 = (&num).try_into().expect("exponent numerator too large");
        Radical::new(crate::rat::pow_p(p, num), den)
    }

    /// Pull exact roots out of the index where possible.
    fn normalized(mut self) -> Self {
        if self.radicand.is_zero() || self.radicand.is_one() {
            self.index = 1;
            return self;
        }
        let mut k = 2u32;
        while k <= self.index {
            if self.index % k == 0 {
                let n = exact_nth_root(self.radicand.numer(), k);
                let d = exact_nth_root(self.radicand.denom(), k);
                if let (Some(n), Some(d)) = (n, d) {
                    self.radicand = Rat::new(n, d);
                    self.index /= k;
                    continue;
                }
            }
            k += 1;
        }
        self
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        (self.index == 1).then_some(&self.radicand)
    }

    pub fn enclosure(&self, tol: &Rat) -> Interval {
        nth_root_enclosure(&self.radicand, self.index, tol)
    }

    pub fn mul(&self, o: &Radical) -> Radical {
        let l = self.index.lcm(&o.index);
        let a = num_traits::pow(self.radicand.clone(), (l / self.index) as usize);
        let b = num_traits::pow(o.radicand.clone(), (l / o.index) as usize);
        Radical::new(a * b, l)
    }

    pub fn recip(&self) -> Radical {
        assert!(!self.radicand.is_zero(), "reciprocal of zero");
        Radical { radicand: self.radicand.recip(), index: self.index }
    }

    pub fn div(&self, o: &Radical) -> Radical {
        self.mul(&o.recip())
    }

    pub fn pow(&self, e: i64) -> Radical {
        if self.radicand.is_zero() {
            assert!(e > 0, "zero to a nonpositive power");
            return self.clone();
        }
        Radical::new(rat_pow(&self.radicand, e), self.index)
    }

    pub fn root(&self, k: u32) -> Radical {
        Radical::new(self.radicand.clone(), self.index * k)
    }

    /// Exact comparison: x^(1/m) vs y^(1/n)  <=>  x^n vs y^m.
    pub fn cmp_exact(&self, o: &Radical) -> Ordering {
        if self.index == o.index {
            return self.radicand.cmp(&o.radicand);
        }
        let a = num_traits::pow(self.radicand.clone(), o.index as usize);
        let b = num_traits::pow(o.radicand.clone(), self.index as usize);
        a.cmp(&b)
    }
}

/// A nonnegative magnitude. `lo <= value <= hi` always; `exact` when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormValue {
    pub exact: Option<Radical>,
    pub lo: Rat,
    pub hi: Rat,
}

fn tiny() -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << 100usize)
}

impl NormValue {
    pub fn zero() -> Self {
        NormValue::rational(Rat::zero())
    }

    pub fn one() -> Self {
        NormValue::rational(Rat::one())
    }

    pub fn rational(q: Rat) -> Self {
        assert!(!q.is_negative(), "magnitudes are nonnegative");
        NormValue {
            exact: Some(Radical::rational(q.clone())),
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_radical(r: Radical, tol: &Rat) -> Self {
        let e = r.enclosure(tol);
        NormValue { exact: Some(r), lo: e.lo, hi: e.hi }
    }

    pub fn sqrt_of(q: Rat, tol: &Rat) -> Self {
        NormValue::from_radical(Radical::new(q, 2), tol)
    }

    pub fn prime_power(p: u64, e: &Rat, tol: &Rat) -> Self {
        NormValue::from_radical(Radical::prime_power(p, e), tol)
    }

    pub fn enclosure(iv: Interval) -> Self {
        assert!(!iv.lo.is_negative(), "magnitudes are nonnegative");
        NormValue { exact: None, lo: iv.lo, hi: iv.hi }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.exact.as_ref().and_then(|r| r.as_rational())
    }

    pub fn is_zero(&self) -> bool {
        self.hi.is_zero()
    }

    /// Certain ordering when it can be decided, `None` otherwise.
    pub fn cmp_certain(&self, o: &NormValue) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (&self.exact, &o.exact) {
            return Some(a.cmp_exact(b));
        }
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if o.hi < self.lo {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn lt_certain(&self, o: &NormValue) -> bool {
        self.cmp_certain(o) == Some(Ordering::Less)
    }

    pub fn le_certain(&self, o: &NormValue) -> bool {
        matches!(self.cmp_certain(o), Some(Ordering::Less | Ordering::Equal))
    }

    /// True unless `self > o` is certain: the "holds within enclosures" test.
    pub fn le_possible(&self, o: &NormValue) -> bool {
        self.cmp_certain(o) != Some(Ordering::Greater)
    }

    pub fn cmp_rat(&self, q: &Rat) -> Option<Ordering> {
        self.cmp_certain(&NormValue::rational(q.clone()))
    }

    fn combine(
        &self,
        o: &NormValue,
        exact: impl Fn(&Radical, &Radical) -> Radical,
        iv: impl Fn(&Interval, &Interval) -> Interval,
        tol: &Rat,
    ) -> NormValue {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => NormValue::from_radical(exact(a, b), tol),
            _ => NormValue::enclosure(iv(&self.interval(), &o.interval())),
        }
    }

    pub fn mul(&self, o: &NormValue, tol: &Rat) -> NormValue {
        self.combine(o, |a, b| a.mul(b), |a, b| a.mul(b), tol)
    }

    pub fn div(&self, o: &NormValue, tol: &Rat) -> NormValue {
        self.combine(o, |a, b| a.div(b), |a, b| a.div_pos(b), tol)
    }

    pub fn recip(&self, tol: &Rat) -> NormValue {
        NormValue::one().div(self, tol)
    }

    pub fn powi(&self, e: i64, tol: &Rat) -> NormValue {
        match &self.exact {
            Some(r) => NormValue::from_radical(r.pow(e), tol),
            None => {
                let base = if e >= 0 {
                    self.interval()
                } else {
                    Interval::new(self.hi.recip(), self.lo.recip())
                };
                NormValue::enclosure(base.powi_nonneg(e.unsigned_abs() as u32))
            }
        }
    }

    pub fn root(&self, k: u32, tol: &Rat) -> NormValue {
        match &self.exact {
            Some(r) => NormValue::from_radical(r.root(k), tol),
            None => NormValue::enclosure(crate::interval::nth_root_interval(&self.interval(), k, tol)),
        }
    }

    pub fn scale(&self, c: &Rat, tol: &Rat) -> NormValue {
        self.mul(&NormValue::rational(c.abs()), tol)
    }

    /// Maximum; exact when the ordering is certain, an enclosure otherwise.
    pub fn max(&self, o: &NormValue) -> NormValue {
        match self.cmp_certain(o) {
            Some(Ordering::Less) => o.clone(),
            Some(_) => self.clone(),
            None => NormValue::enclosure(self.interval().max(&o.interval())),
        }
    }

    pub fn min(&self, o: &NormValue) -> NormValue {
        match self.cmp_certain(o) {
            Some(Ordering::Greater) => o.clone(),
            Some(_) => self.clone(),
            None => NormValue::enclosure(self.interval().min(&o.interval())),
        }
    }

    /// Drops the closed form and widens denominators to dyadics; used to keep
    /// long interval products cheap.
    pub fn coarsen(&self, bits: u32) -> NormValue {
        let iv = self.interval().round_outward(bits);
        let lo = if iv.lo.is_negative() { Rat::zero() } else { iv.lo };
        NormValue { exact: None, lo, hi: iv.hi }
    }

    pub fn to_f64(&self) -> f64 {
        crate::rat::to_f64(&self.interval().midpoint())
    }

    /// Tightens the enclosure of an exact value; no-op otherwise.
    pub fn refined(&self, tol: &Rat) -> NormValue {
        match &self.exact {
            Some(r) => NormValue::from_radical(r.clone(), tol),
            None => self.clone(),
        }
    }
}

pub fn tiny_tol() -> Rat {
    tiny()
}
