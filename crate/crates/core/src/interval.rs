//! Closed rational intervals and rigorous enclosures of roots and logarithms.

use crate::rat::{int, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    /// Every point of `self` is strictly below every point of `o`.
    pub fn strictly_below(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return Interval::new(&self.lo * &o.lo, &self.hi * &o.hi);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rat) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Division by an interval of positive numbers.
    pub fn div_pos(&self, o: &Interval) -> Interval {
        assert!(o.lo.is_positive(), "division by an interval touching 0");
        let inv = Interval::new(o.hi.recip(), o.lo.recip());
        self.mul(&inv)
    }

    /// Power of a nonnegative interval.
    pub fn powi_nonneg(&self, n: u32) -> Interval {
        debug_assert!(!self.lo.is_negative());
        Interval::new(
            num_traits::pow(self.lo.clone(), n as usize),
            num_traits::pow(self.hi.clone(), n as usize),
        )
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval::new(
            std::cmp::min(&self.lo, &o.lo).clone(),
            std::cmp::max(&self.hi, &o.hi).clone(),
        )
    }

    /// max of two quantities known only through enclosures.
    pub fn max(&self, o: &Interval) -> Interval {
        Interval::new(
            std::cmp::max(&self.lo, &o.lo).clone(),
            std::cmp::max(&self.hi, &o.hi).clone(),
        )
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval::new(
            std::cmp::min(&self.lo, &o.lo).clone(),
            std::cmp::min(&self.hi, &o.hi).clone(),
        )
    }

    /// Outward rounding to dyadic endpoints with `bits` fractional bits.
    /// Keeps denominators bounded in long products.
    pub fn round_outward(&self, bits: u32) -> Interval {
        Interval::new(floor_dyadic(&self.lo, bits), ceil_dyadic(&self.hi, bits))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (crate::rat::to_f64(&self.lo), crate::rat::to_f64(&self.hi))
    }
}

pub fn floor_dyadic(x: &Rat, bits: u32) -> Rat {
    let s = BigInt::one() << bits as usize;
    let scaled = x * Rat::from_integer(s.clone());
    Rat::new(scaled.floor().to_integer(), s)
}

pub fn ceil_dyadic(x: &Rat, bits: u32) -> Rat {
    let s = BigInt::one() << bits as usize;
    let scaled = x * Rat::from_integer(s.clone());
    Rat::new(scaled.ceil().to_integer(), s)
}

/// Number of binary digits needed so that 2^-k <= tol.
pub fn bits_for(tol: &Rat) -> u32 {
    assert!(tol.is_positive(), "tolerance must be positive");
    let mut k = 0u32;
    let mut w = Rat::one();
    while &w > tol {
        w /= int(2);
        k += 1;
    }
    k
}

/// Enclosure of q^(1/n) for q >= 0 with width <= tol; a point when exact.
pub fn nth_root_enclosure(q: &Rat, n: u32, tol: &Rat) -> Interval {
    assert!(!q.is_negative(), "root of a negative number");
    assert!(n >= 1);
    if q.is_zero() || n == 1 {
        return Interval::point(q.clone());
    }
    // q^(1/n) = (a b^(n-1))^(1/n) / b
    let a = q.numer();
    let b = q.denom();
    let m = a * num_traits::pow(b.clone(), (n - 1) as usize);
    let r = m.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == m {
        return Interval::point(Rat::new(r, b.clone()));
    }
    // scale by 2^(k n): floor((m 2^(kn))^(1/n)) / (b 2^k)
    let k = bits_for(tol);
    let scaled = m << (k as usize * n as usize);
    let r = scaled.nth_root(n);
    let den = b * (BigInt::one() << k as usize);
    Interval::new(Rat::new(r.clone(), den.clone()), Rat::new(r + 1, den))
}

pub fn sqrt_enclosure(q: &Rat, tol: &Rat) -> Interval {
    nth_root_enclosure(q, 2, tol)
}

/// Lower and upper rational bounds of sqrt over an interval of nonnegatives.
pub fn sqrt_interval(iv: &Interval, tol: &Rat) -> Interval {
    let lo = sqrt_enclosure(&iv.lo, tol).lo;
    let hi = sqrt_enclosure(&iv.hi, tol).hi;
    Interval::new(lo, hi)
}

pub fn nth_root_interval(iv: &Interval, n: u32, tol: &Rat) -> Interval {
    let lo = nth_root_enclosure(&iv.lo, n, tol).lo;
    let hi = nth_root_enclosure(&iv.hi, n, tol).hi;
    Interval::new(lo, hi)
}

// ---------------------------------------------------------------------------
// logarithms

const LN_BITS: u32 = 256;

/// 2 atanh(z) for 0 <= z <= 1/3, enclosed to about 2^-bits.
fn two_atanh(z: &Rat, bits: u32) -> Interval {
    if z.is_zero() {
        return Interval::point(Rat::zero());
    }
    let tol = Rat::new(BigInt::one(), BigInt::one() << (bits as usize + 4));
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = Rat::zero();
    let mut k: i64 = 0;
    loop {
        sum += &term / int(2 * k + 1);
        term = (&term * &z2).round_outward_to(bits + 8);
        k += 1;
        // tail <= term / ((2k+1)(1 - z^2))
        let tail = &term / (int(2 * k + 1) * (Rat::one() - &z2));
        if tail < tol {
            let lo = &sum * int(2);
            let hi = (&sum + &tail) * int(2);
            // the truncated powers are rounded down; allow their slack
            let slack = Rat::new(BigInt::from(k + 1), BigInt::one() << (bits as usize + 6));
            return Interval::new(lo - &slack, hi + slack).round_outward(bits + 2);
        }
    }
}

trait RoundTo {
    fn round_outward_to(&self, bits: u32) -> Rat;
}

impl RoundTo for Rat {
    // truncation toward zero keeps the partial sums lower bounds
    fn round_outward_to(&self, bits: u32) -> Rat {
        floor_dyadic(self, bits)
    }
}

fn ln2() -> &'static Interval {
    static LN2: OnceLock<Interval> = OnceLock::new();
    LN2.get_or_init(|| two_atanh(&crate::rat::rat(1, 3), LN_BITS))
}

/// ln(m) for 1 <= m < 2 through the atanh series.
fn ln_unit_range(m: &Rat, bits: u32) -> Interval {
    let z = (m - Rat::one()) / (m + Rat::one());
    two_atanh(&z, bits)
}

/// Enclosure of ln(q) for q > 0 with width about tol (never wider than needed
/// for 2^-200 precision).
pub fn ln_enclosure(q: &Rat, tol: &Rat) -> Interval {
    assert!(q.is_positive(), "logarithm of a nonpositive number");
    if q.is_one() {
        return Interval::point(Rat::zero());
    }
    let bits = bits_for(tol).clamp(8, 200) + 8;
    // q = 2^e m with 1 <= m < 2
    let e = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut m = if e >= 0 {
        q / Rat::from_integer(BigInt::one() << e as usize)
    } else {
        q * Rat::from_integer(BigInt::one() << (-e) as usize)
    };
    let mut e = e;
    while m >= int(2) {
        m /= int(2);
        e += 1;
    }
    while m < Rat::one() {
        m *= int(2);
        e -= 1;
    }
    // bracket m by dyadics to keep the series cheap; ln is increasing
    let m_lo = floor_dyadic(&m, bits + 4).max(Rat::one());
    let m_hi = ceil_dyadic(&m, bits + 4);
    let l_lo = ln_unit_range(&m_lo, bits).lo;
    let l_hi = if m_hi >= int(2) {
        ln2().hi.clone()
    } else {
        ln_unit_range(&m_hi, bits).hi
    };
    let part = Interval::new(l_lo, l_hi);
    let two = ln2().scale(&int(e));
    part.add(&two).round_outward(bits)
}

/// Enclosure of ln over an interval of positive numbers.
pub fn ln_interval(iv: &Interval, tol: &Rat) -> Interval {
    if iv.is_point() {
        return ln_enclosure(&iv.lo, tol);
    }
    Interval::new(ln_enclosure(&iv.lo, tol).lo, ln_enclosure(&iv.hi, tol).hi)
}

pub fn default_tol() -> Rat {
    Rat::new(BigInt::one(), BigInt::from(10u64).pow(30))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, to_f64};

    #[test]
    fn sqrt_exact_and_inexact() {
        let t = rat(1, 1_000_000);
        assert_eq!(sqrt_enclosure(&rat(9, 4), &t), Interval::point(rat(3, 2)));
        let s = sqrt_enclosure(&int(2), &t);
        assert!(s.width() <= t);
        assert!(&s.lo * &s.lo <= int(2) && &s.hi * &s.hi >= int(2));
    }

    #[test]
    fn sqrt_nested_when_tightening() {
        let a = sqrt_enclosure(&rat(7, 3), &rat(1, 100));
        let b = sqrt_enclosure(&rat(7, 3), &rat(1, 100_000));
        assert!(a.contains_interval(&b));
    }

    #[test]
    fn cube_root() {
        let c = nth_root_enclosure(&int(10), 3, &rat(1, 1 << 20));
        let (lo, hi) = c.to_f64_pair();
        assert!(lo <= 10f64.cbrt() && 10f64.cbrt() <= hi);
        assert_eq!(nth_root_enclosure(&rat(8, 27), 3, &rat(1, 10)), Interval::point(rat(2, 3)));
    }

    #[test]
    fn logs() {
        let t = rat(1, 1_000_000_000);
        for (q, v) in [(int(2), 2f64.ln()), (int(10), 10f64.ln()), (rat(1, 3), (1.0f64 / 3.0).ln()), (rat(3, 2), 1.5f64.ln())] {
            let e = ln_enclosure(&q, &t);
            assert!(to_f64(&e.lo) <= v + 1e-15 && v - 1e-15 <= to_f64(&e.hi), "{q}");
            assert!(e.width() < rat(1, 1_000_000));
        }
        let big = Rat::from_integer(BigInt::from(10u64).pow(40));
        let e = ln_enclosure(&big, &t);
        assert!((to_f64(&e.lo) - 40.0 * 10f64.ln()).abs() < 1e-9);
    }
}
