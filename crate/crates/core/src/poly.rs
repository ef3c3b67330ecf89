//! Univariate polynomials over the rationals, Sturm sequences and real-root
//! isolation.

use crate::interval::Interval;
use crate::rat::{int, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<Rat>,
}

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Poly::new(c.iter().map(|x| Rat::from_integer(x.clone())).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(a: Rat) -> Self {
        Poly::new(vec![a])
    }

    pub fn x() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// x - a
    pub fn linear_root(a: &Rat) -> Self {
        Poly::new(vec![-a.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.c.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0 (check `is_zero` separately).
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.c.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        Poly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Poly::new(r)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.c.clone();
        let dd = d.degree();
        let lc = d.lead();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] / &lc;
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * b;
                }
            }
            q[k] = coef;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Quotient of an exact division; panics in debug builds if not exact.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive_rational();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * int(i as i64))
                .collect(),
        )
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive_rational(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (ints, _) = crate::rat::primitive_integer(&self.c);
        let p = Poly::from_bigints(&ints);
        // primitive_integer may flip sign only through the lcm/gcd, which are positive
        p
    }

    /// Primitive integer coefficients with positive leading coefficient.
    pub fn to_primitive_ints(&self) -> Vec<BigInt> {
        let (mut ints, _) = crate::rat::primitive_integer(&self.c);
        if ints.last().is_some_and(|x| x.is_negative()) {
            for x in ints.iter_mut() {
                *x = -x.clone();
            }
        }
        ints
    }

    pub fn squarefree_part(&self) -> Poly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    /// Yun's algorithm: monic squarefree, pairwise coprime a_i with
    /// f = lc * prod a_i^i. Returned as (a_i, i) for nonconstant a_i.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        let f = self.monic();
        if f.degree() == 0 {
            return Vec::new();
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0);
        let mut c = fp.exact_div(&a0);
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            if b.degree() == 0 {
                break;
            }
            c = d.exact_div(&a);
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// f(k x)
    pub fn scale_var(&self, k: &Rat) -> Poly {
        let mut pw = Rat::one();
        let mut out = Vec::with_capacity(self.c.len());
        for a in &self.c {
            out.push(a * &pw);
            pw *= k;
        }
        Poly::new(out)
    }

    /// Coefficients reversed: x^n f(1/x).
    pub fn reversed(&self) -> Poly {
        let mut c = self.c.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Multiplicity of 0 as a root.
    pub fn x_adic_order(&self) -> usize {
        self.c.iter().take_while(|a| a.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.c[k.min(self.c.len())..].to_vec())
    }

    // ------------------------------------------------------------------
    // real roots

    /// Sturm sequence, each member scaled by a positive constant.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.primitive_rational(), self.derivative().primitive_rational()];
        // keep sign conventions: primitive_rational uses positive scaling only
        debug_assert!(self.lead().is_positive() == seq[0].lead().is_positive());
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r.primitive_rational());
        }
        seq
    }

    /// Sign changes of the sequence at x (zeros skipped).
    pub fn variations_at(seq: &[Poly], x: &Rat) -> usize {
        let mut last: Option<bool> = None;
        let mut v = 0;
        for p in seq {
            let s = p.eval(x);
            if s.is_zero() {
                continue;
            }
            let pos = s.is_positive();
            if let Some(l) = last {
                if l != pos {
                    v += 1;
                }
            }
            last = Some(pos);
        }
        v
    }

    fn variations_at_pos_inf(seq: &[Poly]) -> usize {
        let signs: Vec<bool> = seq.iter().filter(|p| !p.is_zero()).map(|p| p.lead().is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn variations_at_neg_inf(seq: &[Poly]) -> usize {
        let signs: Vec<bool> = seq
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.lead().is_positive() ^ (p.degree() % 2 == 1))
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in (a, b] for a < b.
    pub fn count_roots_in(&self, a: &Rat, b: &Rat) -> usize {
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        Poly::variations_at(&seq, a) - Poly::variations_at(&seq, b)
    }

    /// Distinct real roots strictly above a.
    pub fn count_roots_above(&self, a: &Rat) -> usize {
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        Poly::variations_at(&seq, a) - Poly::variations_at_pos_inf(&seq)
    }

    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        Poly::variations_at_neg_inf(&seq) - Poly::variations_at_pos_inf(&seq)
    }

    /// A power of two strictly exceeding every root modulus (Cauchy bound).
    pub fn root_bound(&self) -> Rat {
        let lc = self.lead().abs();
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(|a| a.abs() / &lc)
            .max()
            .unwrap_or_else(Rat::zero);
        let b = m + Rat::one();
        let mut p = Rat::one();
        while p <= b {
            p *= int(2);
        }
        p
    }

    /// Isolating enclosures of all distinct real roots, ascending, each of
    /// width <= tol (points for roots hit exactly).
    pub fn isolate_real_roots(&self, tol: &Rat) -> Vec<Interval> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        let b = sf.root_bound();
        let lo = -b.clone();
        let n = Poly::variations_at(&seq, &lo) - Poly::variations_at(&seq, &b);
        let mut out = Vec::new();
        isolate_rec(&sf, &seq, lo, b, n, tol, &mut out);
        out
    }

    /// Enclosure of the largest real root.
    pub fn largest_real_root(&self, tol: &Rat) -> Option<Interval> {
        if self.degree() == 0 {
            return None;
        }
        let sf = self.squarefree_part();
        let seq = sf.sturm_sequence();
        let above = |x: &Rat| Poly::variations_at(&seq, x) - Poly::variations_at_pos_inf(&seq);
        let mut hi = sf.root_bound();
        let mut lo = -hi.clone();
        if above(&lo) == 0 {
            return None;
        }
        // invariant: exactly the largest root lies in (lo, hi]
        loop {
            if sf.eval(&hi).is_zero() {
                return Some(Interval::point(hi));
            }
            if &hi - &lo <= *tol {
                return Some(Interval::new(lo, hi));
            }
            let mid = (&lo + &hi) / int(2);
            if above(&mid) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// Rational roots via the linear factors of the integer factorization.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let mut out: Vec<Rat> = crate::factor::factor_over_q(self)
            .into_iter()
            .filter(|(g, _)| g.degree() == 1)
            .map(|(g, _)| -g.coeff(0) / g.coeff(1))
            .collect();
        out.sort();
        out
    }
}

fn isolate_rec(f: &Poly, seq: &[Poly], lo: Rat, hi: Rat, n: usize, tol: &Rat, out: &mut Vec<Interval>) {
    if n == 0 {
        return;
    }
    if n == 1 {
        let (mut lo, mut hi) = (lo, hi);
        loop {
            if f.eval(&hi).is_zero() {
                out.push(Interval::point(hi));
                return;
            }
            if &hi - &lo <= *tol {
                out.push(Interval::new(lo, hi));
                return;
            }
            let mid = (&lo + &hi) / int(2);
            let left = Poly::variations_at(seq, &lo) - Poly::variations_at(seq, &mid);
            if left == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let mid = (&lo + &hi) / int(2);
    let left = Poly::variations_at(seq, &lo) - Poly::variations_at(seq, &mid);
    isolate_rec(f, seq, lo, mid.clone(), left, tol, out);
    isolate_rec(f, seq, mid, hi, n - left, tol, out);
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if a.is_negative() { "-" } else { "+" })?;
            } else if a.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let m = a.abs();
            match i {
                0 => write!(f, "{m}")?,
                _ => {
                    if !m.is_one() {
                        write!(f, "{m}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?
                    } else {
                        write!(f, "x^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Content-free integer gcd helper used by the factorizer.
pub fn int_content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
