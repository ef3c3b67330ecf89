//! Weil heights of rationals and algebraic numbers, heights of matrices and
//! finite sets, Arakelov heights of subspaces, and normalized-height estimates.

use crate::error::Result;
use crate::genset::GenSet;
use crate::interval::{ln_enclosure, ln_interval, Interval};
use crate::magnitude::{NormValue, Radical};
use crate::matrix::Mat;
use crate::place::{spectral_norm, Place};
use crate::poly::Poly;
use crate::rat::{int, lcm_big, primitive_integer, Rat};
use crate::subspace::Subspace;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// A height, i.e. the logarithm of a magnitude M >= 1 (or > 0 for distances).
/// `magnitude` is the exact closed form of M when known; `lo..hi` always
/// encloses log M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightValue {
    pub magnitude: Option<Radical>,
    pub lo: Rat,
    pub hi: Rat,
}

impl HeightValue {
    pub fn zero() -> Self {
        HeightValue { magnitude: Some(Radical::rational(Rat::one())), lo: Rat::zero(), hi: Rat::zero() }
    }

    /// log of an exact magnitude.
    pub fn log_of(r: Radical, tol: &Rat) -> Self {
        assert!(r.radicand.is_positive(), "log of zero");
        let idx = int(r.index as i64);
        let l = ln_enclosure(&r.radicand, &(tol * &idx));
        HeightValue {
            lo: &l.lo / &idx,
            hi: &l.hi / &idx,
            magnitude: Some(r),
        }
    }

    /// log of a magnitude given as a NormValue.
    pub fn log_of_norm(m: &NormValue, tol: &Rat) -> Self {
        match &m.exact {
            Some(r) => HeightValue::log_of(r.clone(), tol),
            None => {
                let iv = ln_interval(&m.interval(), tol);
                HeightValue { magnitude: None, lo: iv.lo, hi: iv.hi }
            }
        }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.magnitude.is_some()
    }

    pub fn add(&self, o: &HeightValue, tol: &Rat) -> HeightValue {
        match (&self.magnitude, &o.magnitude) {
            (Some(a), Some(b)) => HeightValue::log_of(a.mul(b), tol),
            _ => HeightValue { magnitude: None, lo: &self.lo + &o.lo, hi: &self.hi + &o.hi },
        }
    }

    /// (a/b)·h for a nonnegative rational factor.
    pub fn scale(&self, k: &Rat, tol: &Rat) -> HeightValue {
        assert!(!k.is_negative());
        if k.is_zero() {
            return HeightValue::zero();
        }
        match &self.magnitude {
            Some(r) => {
                let num: i64 = k.numer().try_into().expect("scale numerator too large");
                let den: u32 = k.denom().try_into().expect("scale denominator too large");
                HeightValue::log_of(r.pow(num).root(den), tol)
            }
            None => HeightValue { magnitude: None, lo: &self.lo * k, hi: &self.hi * k },
        }
    }

    pub fn cmp_certain(&self, o: &HeightValue) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (&self.magnitude, &o.magnitude) {
            return Some(a.cmp_exact(b));
        }
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if o.hi < self.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Holds within enclosures.
    pub fn le_possible(&self, o: &HeightValue) -> bool {
        self.cmp_certain(o) != Some(Ordering::Greater)
    }

    pub fn le_certain(&self, o: &HeightValue) -> bool {
        matches!(self.cmp_certain(o), Some(Ordering::Less | Ordering::Equal))
    }

    pub fn to_f64(&self) -> f64 {
        crate::rat::to_f64(&self.interval().midpoint())
    }
}

/// max(1, m) as a NormValue.
fn plus(m: &NormValue) -> NormValue {
    m.max(&NormValue::one())
}

/// h(x) = log max(|a|, |b|) for x = a/b in lowest terms; h(0) = 0.
pub fn weil_height(x: &Rat, tol: &Rat) -> HeightValue {
    if x.is_zero() {
        return HeightValue::zero();
    }
    let m = x.numer().abs().max(x.denom().clone());
    HeightValue::log_of(Radical::rational(Rat::from_integer(m)), tol)
}

/// Height of a root of an irreducible polynomial: log of its Mahler measure
/// divided by the degree.
pub fn weil_height_algebraic(f: &Poly, tol: &Rat) -> Result<HeightValue> {
    if f.degree() == 0 || (f.degree() == 1 && f.coeff(0).is_zero()) {
        return Err(crate::Error::InvalidInput("polynomial must be nonconstant and not x".into()));
    }
    if !crate::factor::is_irreducible(f) {
        return Err(crate::Error::InvalidInput(format!("{f} is not irreducible")));
    }
    let ints = f.to_primitive_ints();
    let lc = Rat::from_integer(ints.last().unwrap().abs());
    let g = Poly::from_bigints(&ints);
    let t = tol / int(4 * f.degree() as i64 + 4);
    let moduli = crate::eigen::irreducible_root_moduli(&g.monic(), Place::Infinite, &t);
    let mut mahler = NormValue::rational(lc);
    for m in &moduli {
        mahler = mahler.mul(&plus(m), &t);
    }
    let per_root = mahler.root(f.degree() as u32, &t);
    Ok(HeightValue::log_of_norm(&per_root, tol))
}

/// Magnitude whose log is Σ_p log⁺ max|a_ij|_p: the lcm of the denominators.
pub fn finite_part(entries: &[Rat]) -> BigInt {
    entries.iter().fold(BigInt::one(), |l, x| lcm_big(&l, x.denom()))
}

/// h(A) = Σ_v log⁺ ‖A‖_v.
pub fn matrix_height(a: &Mat, tol: &Rat) -> HeightValue {
    let t = tol / int(4);
    let fin = NormValue::rational(Rat::from_integer(finite_part(a.entries())));
    let inf = plus(&spectral_norm(a, &t));
    HeightValue::log_of_norm(&fin.mul(&inf, &t), tol)
}

/// Per-place contributions of h(A): finite primes with positive log⁺ and ∞.
pub fn matrix_height_breakdown(a: &Mat, tol: &Rat) -> Vec<(Place, HeightValue)> {
    let mut out = Vec::new();
    let fin = finite_part(a.entries());
    for (p, _) in crate::rat::factorize(&fin.magnitude().clone()) {
        let p: u64 = (&p).try_into().expect("prime too large");
        let n = crate::place::operator_norm(a, Place::Finite(p), tol);
        out.push((Place::Finite(p), HeightValue::log_of_norm(&n, tol)));
    }
    out.push((Place::Infinite, HeightValue::log_of_norm(&plus(&spectral_norm(a, tol)), tol)));
    out
}

/// h(S) = Σ_v log⁺ max_{A∈S} ‖A‖_v.
pub fn set_height(s: &[Mat], tol: &Rat) -> HeightValue {
    let t = tol / int(4);
    let all: Vec<Rat> = s.iter().flat_map(|a| a.entries().iter().cloned()).collect();
    let fin = NormValue::rational(Rat::from_integer(finite_part(&all)));
    let mut inf = NormValue::one();
    for a in s {
        inf = inf.max(&spectral_norm(a, &t));
    }
    HeightValue::log_of_norm(&fin.mul(&inf, &t), tol)
}

/// h_Ar(W) = log of the Euclidean norm of the primitive integer Plücker
/// vector (finite places contribute nothing after that normalization).
pub fn arakelov_height(w: &Subspace, tol: &Rat) -> HeightValue {
    let (ints, _) = primitive_integer(w.pluecker());
    let s: BigInt = ints.iter().map(|x| x * x).sum();
    HeightValue::log_of(Radical::new(Rat::from_integer(s), 2), tol)
}

/// h(S^n)/n for n = 1..=n_max by exact product-set enumeration.
pub fn normalized_height_estimate(s: &GenSet, n_max: usize, budget: u64, tol: &Rat) -> Result<Vec<HeightValue>> {
    let d = s.dim();
    let mut layer = vec![Mat::identity(d)];
    let mut out = Vec::new();
    let mut work = 0u64;
    for n in 1..=n_max {
        work += (layer.len() * s.len()) as u64;
        if work > budget {
            return Err(crate::Error::BudgetExceeded(budget));
        }
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for x in &layer {
            for g in s.elements() {
                let m = x.mul(g);
                if seen.insert(m.clone()) {
                    next.push(m);
                }
            }
        }
        layer = next;
        out.push(set_height(&layer, tol).scale(&Rat::new(1.into(), (n as i64).into()), tol));
    }
    Ok(out)
}

/// Lower bound Σ_v log⁺ R_v(S) using spectral radii of words up to k_max at
/// the places where S is unbounded or archimedean.
pub fn jsr_height_lower_bound(s: &GenSet, k_max: usize, budget: u64, tol: &Rat) -> Result<HeightValue> {
    let all: Vec<Rat> = s.elements().iter().flat_map(|a| a.entries().iter().cloned()).collect();
    let fin = finite_part(&all);
    let mut places: Vec<Place> = crate::rat::factorize(fin.magnitude())
        .into_iter()
        .map(|(p, _)| Place::Finite((&p).try_into().expect("prime too large")))
        .collect();
    places.push(Place::Infinite);
    let mut total = HeightValue::zero();
    for v in places {
        let r = crate::jsr::jsr_lower(s, v, k_max, budget, tol)?;
        total = total.add(&HeightValue::log_of_norm(&plus(&r.value), tol), tol);
    }
    Ok(total)
}
