//! Rational scalars and the integer number theory they need.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub use num_rational::BigRational as Rat;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError(pub String);

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}", self.0)
    }
}

impl std::error::Error for ParseRatError {}

/// Parses `"n"` or `"n/d"` (optional leading `-`). Zero denominators are rejected.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let ok = |x: &str| {
        let body = x.strip_prefix('-').unwrap_or(x);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(n) || !ok(d) || d.starts_with('-') {
        return Err(err());
    }
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(n, d))
}

/// Canonical `"num/den"` rendering, always with an explicit denominator.
pub fn format_rat(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Decimal rendering for annotations only.
pub fn to_f64(q: &Rat) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // huge magnitudes: go through the binary exponent
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = n - d;
        let scaled = if shift > 0 {
            q / Rat::from_integer(BigInt::one() << (shift as usize))
        } else {
            q * Rat::from_integer(BigInt::one() << ((-shift) as usize))
        };
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

pub fn p_big(p: u64) -> BigInt {
    BigInt::from(p)
}

/// v_p(n) for a nonzero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = p_big(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// v_p(q) for a nonzero rational; `None` for zero.
pub fn valuation(q: &Rat, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(valuation_int(q.numer(), p) - valuation_int(q.denom(), p))
}

/// p^e as a rational, any sign of e.
pub fn pow_p(p: u64, e: i64) -> Rat {
    let base = p_big(p);
    let mag = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        Rat::from_integer(mag)
    } else {
        Rat::new(BigInt::one(), mag)
    }
}

pub fn rat_pow(q: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), e.unsigned_abs() as usize)
    }
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Scales a rational vector to a primitive integer vector with the same span.
/// Returns the integer vector and the factor `c` with `int = c * q`.
pub fn primitive_integer(v: &[Rat]) -> (Vec<BigInt>, Rat) {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &scaled {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return (scaled, Rat::one());
    }
    let out: Vec<BigInt> = scaled.iter().map(|x| x / &g).collect();
    (out, Rat::new(l, g))
}

/// gcd of numerators over lcm of denominators; the product over all finite
/// places of the sup norm of `v` is its reciprocal.
pub fn rational_content(v: &[Rat]) -> Rat {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for x in v {
        g = g.gcd(x.numer());
        l = l.lcm(x.denom());
    }
    Rat::new(g, l)
}

pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn exact_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        if k % 2 == 0 {
            return None;
        }
        return exact_nth_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// primes and factorization

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(s) = n.to_u64() {
        return is_prime(s);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return false;
    }
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while (&d % &two).is_zero() {
        d /= &two;
        s += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        // Brent's variant
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..std::cmp::min(128, r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut g = one.clone();
        let mut steps = 0u64;
        while g == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            g = diff.gcd(n);
            steps += 1;
            if steps > 5_000_000 {
                break;
            }
        }
        if g != one && &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime_big(&n) {
        out.push(n);
        return;
    }
    let d = match n.to_u64() {
        Some(s) => BigUint::from(rho_u64(s)),
        None => rho_big(&n),
    };
    let q = &n / &d;
    factor_into(d, out);
    factor_into(q, out);
}

/// Prime factorization of a positive integer, primes ascending.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut m = n.clone();
    let mut primes = Vec::new();
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let pb = BigUint::from(p);
        while !m.is_zero() && (&m % &pb).is_zero() {
            primes.push(pb.clone());
            m /= &pb;
        }
    }
    if !m.is_zero() {
        factor_into(m, &mut primes);
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Primes dividing a nonzero integer, ascending. Primes that do not fit in
/// 64 bits are returned too; callers that need `u64` primes filter them.
pub fn prime_divisors(n: &BigInt) -> Vec<BigUint> {
    if n.is_zero() {
        return Vec::new();
    }
    factorize(n.magnitude()).into_iter().map(|(p, _)| p).collect()
}

/// Primes at which `q` is not a unit.
pub fn support_primes(q: &Rat) -> Vec<u64> {
    let mut ps: Vec<u64> = prime_divisors(q.numer())
        .into_iter()
        .chain(prime_divisors(q.denom()))
        .filter_map(|p| p.to_u64())
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}
