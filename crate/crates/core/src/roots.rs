//! Certified enclosures of the moduli of complex roots of a squarefree rational
//! polynomial.
//!
//! Approximate roots come from Durand–Kerner in f64 and are then certified in
//! exact Gaussian-rational arithmetic: with Weierstrass corrections W_i, the
//! discs centred at z_i − W_i of radius (n−1)|W_i| contain all roots, and
//! pairwise disjoint discs contain exactly one root each. When certification
//! fails the iteration continues in exact arithmetic with dyadic rounding.

use crate::interval::{floor_dyadic, ceil_dyadic, sqrt_enclosure, Interval};
use crate::poly::Poly;
use crate::rat::{int, Rat};
use num_traits::{One, Signed, Zero};

/// Gaussian rational a + bi.
#[derive(Clone, Debug, PartialEq)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn zero() -> Self {
        CRat::new(Rat::zero(), Rat::zero())
    }

    pub fn add(&self, o: &CRat) -> CRat {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &CRat) -> CRat {
        CRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, k: &Rat) -> CRat {
        CRat::new(&self.re * k, &self.im * k)
    }

    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn div(&self, o: &CRat) -> CRat {
        let n = o.norm_sq();
        let conj = CRat::new(o.re.clone(), -o.im.clone());
        self.mul(&conj).scale(&n.recip())
    }

    fn round(&self, bits: u32) -> CRat {
        CRat::new(floor_dyadic(&self.re, bits), floor_dyadic(&self.im, bits))
    }
}

fn eval_c(f: &Poly, z: &CRat) -> CRat {
    let mut acc = CRat::zero();
    for a in f.coeffs().iter().rev() {
        acc = acc.mul(z).add(&CRat::new(a.clone(), Rat::zero()));
    }
    acc
}

/// One certified root: disc centre and squared radius.
#[derive(Clone, Debug)]
pub struct RootDisc {
    pub center: CRat,
    pub radius_sq: Rat,
}

impl RootDisc {
    /// Enclosure of the modulus of the root inside this disc.
    pub fn modulus(&self, tol: &Rat) -> Interval {
        let c = sqrt_enclosure(&self.center.norm_sq(), tol);
        let r = sqrt_enclosure(&self.radius_sq, tol).hi;
        let lo = &c.lo - &r;
        Interval::new(if lo.is_negative() { Rat::zero() } else { lo }, &c.hi + &r)
    }

    pub fn is_real_axis_symmetric(&self) -> bool {
        self.center.im.is_zero()
    }
}

fn durand_kerner_f64(f: &Poly) -> Vec<(f64, f64)> {
    let n = f.degree();
    let lc = crate::rat::to_f64(&f.lead());
    let c: Vec<f64> = f.coeffs().iter().map(|a| crate::rat::to_f64(a) / lc).collect();
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            (bound * 0.5 * t.cos(), bound * 0.5 * t.sin())
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut num = (0.0, 0.0);
            for a in c.iter().rev() {
                num = cmul(num, z[i]);
                num.0 += a;
            }
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den = cmul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            if den.0 == 0.0 && den.1 == 0.0 {
                den = (1e-300, 0.0);
            }
            let w = cdiv(num, den);
            z[i] = (z[i].0 - w.0, z[i].1 - w.1);
            delta = delta.max(w.0.abs() + w.1.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Certified discs, one per root, of a squarefree polynomial of degree >= 1.
/// Widths shrink below `tol` (as radii).
pub fn isolate_complex_roots(f: &Poly, tol: &Rat) -> Vec<RootDisc> {
    let n = f.degree();
    assert!(n >= 1);
    if n == 1 {
        let r = -f.coeff(0) / f.coeff(1);
        return vec![RootDisc { center: CRat::new(r, Rat::zero()), radius_sq: Rat::zero() }];
    }
    let lc = f.lead();
    let g = f.scale(&lc.recip());
    let approx = durand_kerner_f64(&g);
    let mut bits = 60u32;
    let to_rat = |x: f64| -> Rat { Rat::from_float(x).unwrap_or_else(Rat::zero) };
    let mut z: Vec<CRat> = approx.iter().map(|&(a, b)| CRat::new(to_rat(a), to_rat(b))).collect();
    let tol_sq = tol * tol;
    let nm1 = int(n as i64 - 1);
    loop {
        // Weierstrass corrections
        let w: Vec<CRat> = (0..n)
            .map(|i| {
                let mut den = CRat::new(Rat::one(), Rat::zero());
                for j in 0..n {
                    if j != i {
                        den = den.mul(&z[i].sub(&z[j]));
                    }
                }
                if den.norm_sq().is_zero() {
                    // coincident approximations; nudge apart
                    return CRat::new(Rat::new(1.into(), num_bigint::BigInt::one() << bits as usize), Rat::zero());
                }
                eval_c(&g, &z[i]).div(&den)
            })
            .collect();
        let discs: Vec<RootDisc> = (0..n)
            .map(|i| RootDisc {
                center: z[i].sub(&w[i]),
                radius_sq: &nm1 * &nm1 * w[i].norm_sq(),
            })
            .collect();
        let small = discs.iter().all(|d| d.radius_sq <= tol_sq);
        if small && pairwise_disjoint(&discs) {
            return discs;
        }
        // Newton-like refinement step (exact, then rounded)
        bits = (bits + bits / 2).min(4096);
        z = discs.iter().map(|d| d.center.round(bits)).collect();
    }
}

fn pairwise_disjoint(d: &[RootDisc]) -> bool {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            // |ci - cj| > ri + rj  <=>  |ci-cj|^2 > (ri+rj)^2; bound sqrt's by enclosures
            let dist_sq = d[i].center.sub(&d[j].center).norm_sq();
            let t = Rat::new(1.into(), num_bigint::BigInt::one() << 200usize);
            let ri = sqrt_enclosure(&d[i].radius_sq, &t).hi;
            let rj = sqrt_enclosure(&d[j].radius_sq, &t).hi;
            let s = &ri + &rj;
            if dist_sq <= &s * &s {
                return false;
            }
        }
    }
    true
}

/// Modulus enclosures of all roots (with multiplicity one each) of a
/// squarefree rational polynomial, each of width at most `tol`.
pub fn root_moduli(f: &Poly, tol: &Rat) -> Vec<Interval> {
    let mut out = Vec::new();
    let z = f.x_adic_order();
    for _ in 0..z {
        out.push(Interval::point(Rat::zero()));
    }
    let f = f.shift_down(z);
    if f.degree() == 0 {
        return out;
    }
    let mut t = tol / int(4);
    loop {
        let discs = isolate_complex_roots(&f, &t);
        let ms: Vec<Interval> = discs.iter().map(|d| d.modulus(&t)).collect();
        if ms.iter().all(|m| m.width() <= *tol) {
            out.extend(ms);
            return out;
        }
        t = t / int(16);
    }
}

/// Dyadic outward rounding helper shared with callers that need cheap
/// enclosures of long products.
pub fn round_interval(iv: &Interval, bits: u32) -> Interval {
    Interval::new(floor_dyadic(&iv.lo, bits), ceil_dyadic(&iv.hi, bits))
}
