//! Eigenvalue moduli at a place and the splitting of Q^d into the parts where
//! eigenvalues have modulus at least / below a cursor ω.

use crate::error::{Error, Result};
use crate::factor::factor_over_q;
use crate::magnitude::{NormValue, Radical};
use crate::matrix::Mat;
use crate::newton::root_exponents;
use crate::place::Place;
use crate::poly::Poly;
use crate::rat::{int, Rat};
use crate::roots::root_moduli;
use crate::subspace::Subspace;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// An irreducible factor of the characteristic polynomial with the moduli of
/// its roots at one place.
#[derive(Clone, Debug)]
pub struct FactorModuli {
    pub factor: Poly,
    pub mult: u32,
    pub moduli: Vec<NormValue>,
}

/// Moduli of the roots of an irreducible (monic, rational) polynomial.
pub fn irreducible_root_moduli(g: &Poly, v: Place, tol: &Rat) -> Vec<NormValue> {
    if g.degree() == 1 {
        let r = -g.coeff(0) / g.coeff(1);
        return vec![crate::place::abs_value(&r, v)];
    }
    match v {
        Place::Finite(p) => {
            let zeros = g.x_adic_order();
            let mut out: Vec<NormValue> = (0..zeros).map(|_| NormValue::zero()).collect();
            out.extend(root_exponents(g, p).iter().map(|s| NormValue::prime_power(p, s, tol)));
            out
        }
        Place::Infinite => {
            if g.degree() == 2 {
                let (a, b, c) = (g.coeff(2), g.coeff(1), g.coeff(0));
                if (&b * &b - int(4) * &a * &c).is_negative() {
                    // complex conjugate pair: |λ|² = c/a
                    let m = NormValue::from_radical(Radical::new(&c / &a, 2), tol);
                    return vec![m.clone(), m];
                }
            }
            root_moduli(g, tol).into_iter().map(NormValue::enclosure).collect()
        }
    }
}

pub fn factor_moduli(a: &Mat, v: Place, tol: &Rat) -> Vec<FactorModuli> {
    factor_over_q(&a.char_poly())
        .into_iter()
        .map(|(g, m)| FactorModuli { moduli: irreducible_root_moduli(&g, v, tol), factor: g, mult: m })
        .collect()
}

/// The multiset of eigenvalue moduli of A at v, ascending by enclosure midpoint.
pub fn eigenvalue_moduli(a: &Mat, v: Place, tol: &Rat) -> Vec<NormValue> {
    let mut out: Vec<NormValue> = factor_moduli(a, v, tol)
        .into_iter()
        .flat_map(|f| {
            let m = f.mult as usize;
            f.moduli.into_iter().flat_map(move |x| std::iter::repeat(x).take(m))
        })
        .collect();
    out.sort_by(|x, y| x.interval().midpoint().cmp(&y.interval().midpoint()));
    out
}

/// Like `eigenvalue_moduli`, but fails when two distinct enclosures still
/// overlap (distinct meaning: not certified equal).
pub fn separated_moduli(a: &Mat, v: Place, tol: &Rat) -> Result<Vec<NormValue>> {
    let ms = eigenvalue_moduli(a, v, tol);
    for w in ms.windows(2) {
        if w[0].cmp_certain(&w[1]).is_none() {
            return Err(Error::InseparableAtTolerance(format!(
                "[{}, {}] and [{}, {}]",
                w[0].lo, w[0].hi, w[1].lo, w[1].hi
            )));
        }
    }
    Ok(ms)
}

/// Companion matrix of a monic polynomial.
pub fn companion(g: &Poly) -> Mat {
    let g = g.monic();
    let n = g.degree();
    let mut m = Mat::zero(n, n);
    for i in 1..n {
        m.set(i, i - 1, Rat::from_integer(1.into()));
    }
    for i in 0..n {
        m.set(i, n - 1, -g.coeff(i));
    }
    m
}

/// Whether some complex root of g has modulus exactly ω (archimedean place).
/// Roots λ map to λ + ω²/λ, which is real of modulus at most 2ω exactly when
/// |λ| = ω.
pub fn has_root_of_modulus(g: &Poly, omega: &Rat) -> bool {
    if g.coeff(0).is_zero() {
        return false;
    }
    if g.degree() == 1 {
        return (g.coeff(0) / g.coeff(1)).abs() == *omega;
    }
    let c = companion(g);
    let ci = c.inverse().expect("companion of g with g(0) != 0 is invertible");
    let m = c.add(&ci.scale(&(omega * omega)));
    let h = m.char_poly();
    let two = int(2) * omega;
    h.eval(&-two.clone()).is_zero() || h.count_roots_in(&-two, &(int(2) * omega)) > 0
}

/// Side of each root of an irreducible factor: `Greater`/`Equal` means modulus
/// at least ω (Equal is an error for the caller), `Less` below.
fn factor_sides(g: &Poly, moduli: &[NormValue], v: Place, omega: &Rat, tol: &Rat) -> Result<Vec<Ordering>> {
    let om = NormValue::rational(omega.clone());
    let mut moduli = moduli.to_vec();
    let mut t = tol.clone();
    let mut tie_checked = false;
    loop {
        let sides: Vec<Option<Ordering>> = moduli.iter().map(|m| m.cmp_certain(&om)).collect();
        if sides.iter().any(|s| *s == Some(Ordering::Equal)) {
            return Err(Error::CursorOnEigenvalue);
        }
        if sides.iter().all(|s| s.is_some()) {
            return Ok(sides.into_iter().map(|s| s.unwrap()).collect());
        }
        // only archimedean enclosures can be undecided
        if !tie_checked {
            if has_root_of_modulus(g, omega) {
                return Err(Error::CursorOnEigenvalue);
            }
            tie_checked = true;
        }
        t = &t / int(1 << 20);
        moduli = irreducible_root_moduli(g, v, &t);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tier {
    Exact,
    /// p-adic approximation with absolute precision p^precision.
    Approximate { precision: u32 },
}

/// The splitting Q^d = A ⊕ R by eigenvalue modulus relative to ω.
#[derive(Clone, Debug)]
pub struct EigenSplit {
    pub place: Place,
    pub cursor: Rat,
    pub a_part: Subspace,
    pub r_part: Subspace,
    /// Smallest modulus ≥ ω (None when the attracting part is zero).
    pub big: Option<NormValue>,
    /// Largest modulus < ω (None when the repelling part is zero).
    pub small: Option<NormValue>,
    pub tier: Tier,
    pub a_factors: Vec<(Poly, u32)>,
    pub r_factors: Vec<(Poly, u32)>,
}

impl EigenSplit {
    /// λ_ω/Λ_ω when both parts are nonzero.
    pub fn alpha(&self, tol: &Rat) -> Option<NormValue> {
        match (&self.small, &self.big) {
            (Some(s), Some(b)) => Some(s.div(b, tol)),
            _ => None,
        }
    }
}

fn kernel_of_factors(a: &Mat, fs: &[(Poly, u32)]) -> Subspace {
    let d = a.rows();
    if fs.is_empty() {
        return Subspace::zero(d);
    }
    let prod = fs.iter().fold(Poly::one(), |acc, (g, m)| acc.mul(&g.pow(*m)));
    Subspace::span(d, &a.eval_poly(&prod).kernel())
}

/// Exact-tier splitting: every Q-irreducible factor of the characteristic
/// polynomial must have all its roots on one side of ω.
pub fn eigensplit(a: &Mat, v: Place, omega: &Rat, tol: &Rat) -> Result<EigenSplit> {
    if !a.is_square() {
        return Err(Error::InvalidInput("matrix is not square".into()));
    }
    if !omega.is_positive() {
        return Err(Error::InvalidInput("cursor must be positive".into()));
    }
    if a.det().is_zero() {
        return Err(Error::InvalidInput("matrix is not invertible".into()));
    }
    let mut a_f = Vec::new();
    let mut r_f = Vec::new();
    let mut big: Option<NormValue> = None;
    let mut small: Option<NormValue> = None;
    for fm in factor_moduli(a, v, tol) {
        let sides = factor_sides(&fm.factor, &fm.moduli, v, omega, tol)?;
        let ups = sides.iter().filter(|s| **s == Ordering::Greater).count();
        if ups != 0 && ups != sides.len() {
            return Err(Error::MixedFactor(format!("{} at {}", fm.factor, v)));
        }
        if ups > 0 {
            for m in &fm.moduli {
                big = Some(match big {
                    None => m.clone(),
                    Some(b) => b.min(m),
                });
            }
            a_f.push((fm.factor, fm.mult));
        } else {
            for m in &fm.moduli {
                small = Some(match small {
                    None => m.clone(),
                    Some(s) => s.max(m),
                });
            }
            r_f.push((fm.factor, fm.mult));
        }
    }
    let a_part = kernel_of_factors(a, &a_f);
    let r_part = kernel_of_factors(a, &r_f);
    Ok(EigenSplit {
        place: v,
        cursor: omega.clone(),
        a_part,
        r_part,
        big,
        small,
        tier: Tier::Exact,
        a_factors: a_f,
        r_factors: r_f,
    })
}

/// Distinct eigenvalue moduli at v, ascending; enclosures that cannot be
/// separated are merged into one cluster.
pub fn distinct_moduli(a: &Mat, v: Place, tol: &Rat) -> Vec<NormValue> {
    let ms = eigenvalue_moduli(a, v, tol);
    let mut out: Vec<NormValue> = Vec::new();
    for m in ms {
        if m.is_zero() {
            continue;
        }
        match out.last() {
            Some(last) if last.cmp_certain(&m) == Some(Ordering::Equal) => {}
            Some(last) if last.cmp_certain(&m).is_none() => {
                let n = out.len();
                out[n - 1] = NormValue::enclosure(last.interval().hull(&m.interval()));
            }
            _ => out.push(m),
        }
    }
    out
}

/// Cursor candidates: rational points strictly between consecutive distinct
/// moduli (midpoints of the enclosures' gap).
pub fn cursor_candidates(a: &Mat, v: Place, tol: &Rat) -> Vec<Rat> {
    let ms = distinct_moduli(a, v, tol);
    ms.windows(2)
        .map(|w| (&w[0].hi + &w[1].lo) / int(2))
        .collect()
}
