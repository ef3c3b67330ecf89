//! Factorization of rational polynomials: squarefree decomposition, then
//! Zassenhaus (Cantor–Zassenhaus modulo a small prime, Hensel lifting, and
//! factor recombination).

use crate::poly::Poly;
use crate::rat::{is_prime, Rat};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense polynomials over F_p, ascending, trimmed.
pub mod fp {
    use num_bigint::BigUint;

    pub type P = Vec<u64>;

    pub fn trim(mut a: P) -> P {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mulm(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        crate::rat::pow_mod(a % p, p - 2, p)
    }

    pub fn deg(a: &P) -> isize {
        a.len() as isize - 1
    }

    pub fn add(a: &P, b: &P, p: u64) -> P {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
    }

    pub fn sub(a: &P, b: &P, p: u64) -> P {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn mul(a: &P, b: &P, p: u64) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mulm(x, y, p)) % p;
            }
        }
        trim(r)
    }

    pub fn scale(a: &P, k: u64, p: u64) -> P {
        trim(a.iter().map(|&x| mulm(x, k, p)).collect())
    }

    pub fn divrem(a: &P, b: &P, p: u64) -> (P, P) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let li = inv(b[db], p);
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = mulm(r[k + db], li, p);
            q[k] = c;
            if c != 0 {
                for (j, &y) in b.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mulm(c, y, p)) % p;
                }
            }
        }
        (trim(q), trim(r))
    }

    pub fn rem(a: &P, b: &P, p: u64) -> P {
        divrem(a, b, p).1
    }

    pub fn monic(a: &P, p: u64) -> P {
        match a.last() {
            None => Vec::new(),
            Some(&l) => scale(a, inv(l, p), p),
        }
    }

    pub fn gcd(a: &P, b: &P, p: u64) -> P {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    /// (g, s, t) with s a + t b = g monic.
    pub fn xgcd(a: &P, b: &P, p: u64) -> (P, P, P) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1): (P, P) = (vec![1], Vec::new());
        let (mut t0, mut t1): (P, P) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let l = inv(*r0.last().expect("xgcd of zeros"), p);
        (scale(&r0, l, p), scale(&s0, l, p), scale(&t0, l, p))
    }

    pub fn derivative(a: &P, p: u64) -> P {
        trim(a.iter().enumerate().skip(1).map(|(i, &x)| mulm(x, i as u64 % p, p)).collect())
    }

    pub fn powmod(base: &P, e: &BigUint, m: &P, p: u64) -> P {
        let mut r: P = vec![1];
        let b = rem(base, m, p);
        for i in (0..e.bits()).rev() {
            r = rem(&mul(&r, &r, p), m, p);
            if e.bit(i) {
                r = rem(&mul(&r, &b, p), m, p);
            }
        }
        rem(&r, m, p)
    }
}

fn reduce_mod_p(c: &[BigInt], p: u64) -> fp::P {
    let pb = BigInt::from(p);
    fp::trim(c.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
}

/// Distinct-degree then equal-degree factorization of a monic squarefree
/// polynomial over F_p, p odd.
pub fn factor_mod_p(f: &fp::P, p: u64, rng: &mut ChaCha8Rng) -> Vec<fp::P> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: fp::P = vec![0, 1];
    let mut h = x.clone();
    let mut i = 1usize;
    let pb = BigUint::from(p);
    while fp::deg(&f) >= 2 * i as isize {
        h = fp::powmod(&h, &pb, &f, p);
        let g = fp::gcd(&fp::sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            out.extend(equal_degree(&g, i, p, rng));
            f = fp::divrem(&f, &g, p).0;
            h = fp::rem(&h, &f, p);
        }
        i += 1;
    }
    if f.len() > 1 {
        out.push(fp::monic(&f, p));
    }
    out.sort();
    out
}

fn equal_degree(g: &fp::P, i: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<fp::P> {
    let n = g.len() - 1;
    if n == i {
        return vec![fp::monic(g, p)];
    }
    let e = (BigUint::from(p).pow(i as u32) - 1u32) / 2u32;
    loop {
        let a: fp::P = fp::trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp::sub(&fp::powmod(&a, &e, g, p), &vec![1], p);
        let d = fp::gcd(&b, g, p);
        if d.len() > 1 && d.len() < g.len() {
            let q = fp::divrem(g, &d, p).0;
            let mut r = equal_degree(&d, i, p, rng);
            r.extend(equal_degree(&q, i, p, rng));
            return r;
        }
    }
}

fn symmetric_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

type ZP = Vec<BigInt>;

fn zp_trim(mut a: ZP) -> ZP {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

fn zp_mul(a: &ZP, b: &ZP, m: &BigInt) -> ZP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    zp_trim(r.into_iter().map(|x| x.mod_floor(m)).collect())
}

fn zp_sub(a: &ZP, b: &ZP, m: &BigInt) -> ZP {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zp_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn to_zp(a: &fp::P) -> ZP {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lifts f ≡ g h (mod p) with g, h monic and coprime to f ≡ G H (mod p^k),
/// f monic modulo p^k.
pub fn hensel_lift_pair(f: &ZP, g: &fp::P, h: &fp::P, p: u64, k: u32) -> (ZP, ZP) {
    let (one, s, t) = fp::xgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut gg = to_zp(g);
    let mut hh = to_zp(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let pj1 = &pj * &pb;
        let diff = zp_sub(f, &zp_mul(&gg, &hh, &pj1), &pj1);
        let e: fp::P = fp::trim(diff.iter().map(|x| (x / &pj).mod_floor(&pb).to_u64().unwrap()).collect());
        // σ g + τ h ≡ e with deg τ < deg g
        let te = fp::mul(&t, &e, p);
        let (q, tau) = fp::divrem(&te, g, p);
        let sigma = fp::add(&fp::mul(&s, &e, p), &fp::mul(&q, h, p), p);
        let add = |base: &ZP, corr: &fp::P| -> ZP {
            let n = base.len().max(corr.len());
            let z = BigInt::zero();
            zp_trim(
                (0..n)
                    .map(|i| (base.get(i).unwrap_or(&z) + &pj * BigInt::from(corr.get(i).copied().unwrap_or(0))).mod_floor(&pj1))
                    .collect(),
            )
        };
        gg = add(&gg, &tau);
        hh = add(&hh, &sigma);
        pj = pj1;
    }
    (gg, hh)
}

fn lift_all(f: &ZP, us: &[fp::P], p: u64, k: u32) -> Vec<ZP> {
    if us.len() == 1 {
        return vec![f.clone()];
    }
    let g = &us[0];
    let h = us[1..].iter().fold(vec![1u64], |acc, u| fp::mul(&acc, u, p));
    let (gg, hh) = hensel_lift_pair(f, g, &h, p, k);
    let mut out = vec![gg];
    out.extend(lift_all(&hh, &us[1..], p, k));
    out
}

fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Exact division test over Z; returns the quotient when g | f.
fn int_divides(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return None;
    }
    let lc = &g[dg];
    let mut q = vec![BigInt::zero(); r.len() - dg];
    for k in (0..q.len()).rev() {
        let (c, rm) = r[k + dg].div_rem(lc);
        if !rm.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, y) in g.iter().enumerate() {
                r[k + j] -= &c * y;
            }
        }
        q[k] = c;
    }
    if r.iter().all(|x| x.is_zero()) {
        Some(q)
    } else {
        None
    }
}

fn primitive(c: Vec<BigInt>) -> Vec<BigInt> {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let mut v: Vec<BigInt> = if g.is_zero() { c } else { c.into_iter().map(|x| x / &g).collect() };
    if v.last().is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    v
}

/// Irreducible factors over Z of a primitive squarefree integer polynomial with
/// positive leading coefficient and nonzero constant term.
pub fn factor_squarefree_int(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // pick the good prime (among the first few) with fewest modular factors
    let mut best: Option<(u64, Vec<fp::P>)> = None;
    let mut good = 0;
    let mut p = 3u64;
    while good < 5 {
        if is_prime(p) && !(&lc % BigInt::from(p)).is_zero() {
            let fb = reduce_mod_p(f, p);
            if fp::gcd(&fb, &fp::derivative(&fb, p), p) == vec![1] {
                good += 1;
                let fs = factor_mod_p(&fp::monic(&fb, p), p, &mut rng);
                if best.as_ref().map_or(true, |(_, b)| fs.len() < b.len()) {
                    best = Some((p, fs));
                }
            }
        }
        p += 2;
    }
    let (p, us) = best.unwrap();
    if us.len() == 1 {
        return vec![f.to_vec()];
    }
    // coefficient bound for factors of lc·f
    let norm2: BigInt = f.iter().map(|x| x * x).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * &lc * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lcinv = inv_mod(&lc, &pk);
    let fm: ZP = zp_trim(f.iter().map(|x| (x * &lcinv).mod_floor(&pk)).collect());
    let mut lifted = lift_all(&fm, &us, p, k);

    // recombination
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), size) {
            let lcr = rest.last().unwrap().clone();
            let prod = subset
                .iter()
                .fold(vec![lcr.mod_floor(&pk)], |acc, &i| zp_mul(&acc, &lifted[i], &pk));
            let cand = primitive(prod.iter().map(|x| symmetric_mod(x, &pk)).collect());
            if let Some(q) = int_divides(&rest, &cand) {
                out.push(cand);
                rest = primitive(q);
                let keep: Vec<ZP> = lifted
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u.clone())
                    .collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Monic irreducible factors over Q with multiplicities, sorted by degree then
/// coefficients.
pub fn factor_over_q(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    for (a, mult) in f.squarefree_decomposition() {
        let z = a.x_adic_order();
        if z > 0 {
            out.push((Poly::x(), mult));
        }
        let a = a.shift_down(z);
        if a.degree() == 0 {
            continue;
        }
        for g in factor_squarefree_int(&a.to_primitive_ints()) {
            out.push((Poly::from_bigints(&g).monic(), mult));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    out
}

pub fn is_irreducible(f: &Poly) -> bool {
    let fs = factor_over_q(f);
    fs.len() == 1 && fs[0].1 == 1
}

fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Whether a monic irreducible rational polynomial is cyclotomic, i.e. all its
/// roots are roots of unity.
pub fn is_cyclotomic(f: &Poly) -> bool {
    let d = f.degree() as u64;
    if !f.coeffs().iter().all(|c| c.is_integer()) || !f.lead().is_one() {
        return false;
    }
    // phi(n) >= sqrt(n/2), so phi(n) = d forces n <= 2 d^2
    let nmax = (2 * d * d).max(6);
    (1..=nmax).filter(|&n| euler_phi(n) == d).any(|n| {
        let xn = Poly::new(
            (0..=n)
                .map(|i| {
                    if i == 0 {
                        -Rat::one()
                    } else if i == n {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect(),
        );
        xn.rem(f).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn modular_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // x^4 - 1 mod 5 splits into linear factors
        let fs = factor_mod_p(&vec![4, 0, 0, 0, 1], 5, &mut rng);
        assert_eq!(fs.len(), 4);
        // x^2 + 1 mod 3 is irreducible
        assert_eq!(factor_mod_p(&vec![1, 0, 1], 3, &mut rng).len(), 1);
    }

    #[test]
    fn rational_factorization() {
        // (x^2 - 2)(x - 3)^2 (2x + 1)
        let f = p(&[-2, 0, 1]).mul(&p(&[-3, 1]).pow(2)).mul(&p(&[1, 2]));
        let fs = factor_over_q(&f);
        assert_eq!(fs.len(), 3);
        assert!(fs.contains(&(p(&[-2, 0, 1]), 1)));
        assert!(fs.contains(&(p(&[-3, 1]), 2)));
        assert!(fs.contains(&(Poly::linear_root(&crate::rat::rat(-1, 2)), 1)));
    }

    #[test]
    fn swinnerton_dyer_is_irreducible() {
        // x^4 - 10x^2 + 1 splits mod every prime into factors of degree <= 2
        assert!(is_irreducible(&p(&[1, 0, -10, 0, 1])));
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        let fs = factor_over_q(&p(&[4, 0, 0, 0, 1]));
        assert_eq!(fs.len(), 2);
    }

    #[test]
    fn cyclotomic_detection() {
        assert!(is_cyclotomic(&p(&[1, 1, 1])));
        assert!(is_cyclotomic(&p(&[-1, 1])));
        assert!(is_cyclotomic(&p(&[1, -1, 1, -1, 1])));
        assert!(!is_cyclotomic(&p(&[-1, -1, 1])));
        assert!(!is_cyclotomic(&p(&[-2, 1])));
    }
}
