//! Places of the rationals and the absolute values and norms attached to them.

use crate::error::Error;
use crate::interval::sqrt_enclosure;
use crate::magnitude::{NormValue, Radical};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::rat::{is_prime, pow_p, valuation, Rat};
use num_traits::{Signed, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinite,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Place, Error> {
        if is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Finite(p) => Some(*p),
            Place::Infinite => None,
        }
    }

    /// n_v; always 1 over the rationals.
    pub fn local_degree(&self) -> u32 {
        1
    }

    /// The constant in the wedge/intersection estimates: d at the real place,
    /// 1 at ultrametric ones.
    pub fn c_k(&self, d: usize) -> Rat {
        match self {
            Place::Infinite => Rat::from_integer((d as i64).into()),
            Place::Finite(_) => Rat::from_integer(1.into()),
        }
    }

    /// Search order used by the witness search: finite primes ascending, then ∞.
    pub fn search_key(&self) -> (u8, u64) {
        match self {
            Place::Finite(p) => (0, *p),
            Place::Infinite => (1, 0),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Finite(p) => write!(f, "p:{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "inf" {
            return Ok(Place::Infinite);
        }
        let p = s
            .strip_prefix("p:")
            .and_then(|t| t.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("invalid place {s:?}")))?;
        Place::finite(p).map_err(|_| Error::Parse(format!("{p} is not prime")))
    }
}

/// |x|_v. Exact at every place; zero maps to zero.
pub fn abs_value(x: &Rat, v: Place) -> NormValue {
    if x.is_zero() {
        return NormValue::zero();
    }
    match v {
        Place::Infinite => NormValue::rational(x.abs()),
        Place::Finite(p) => NormValue::rational(pow_p(p, -valuation(x, p).unwrap())),
    }
}

/// Π_v |x|_v over ∞ and the primes dividing x, exactly. Equals 1 for every
/// nonzero rational.
pub fn product_over_places(x: &Rat) -> Rat {
    let mut prod = abs_value(x, Place::Infinite).as_rational().cloned().expect("exact at infinity");
    for p in crate::rat::support_primes(x) {
        prod *= abs_value(x, Place::Finite(p)).as_rational().expect("exact at finite places");
    }
    prod
}

/// Largest exponent e with p^e = max_i |x_i|_p; `None` for the zero vector.
pub fn sup_exponent(x: &[Rat], p: u64) -> Option<i64> {
    x.iter().filter_map(|c| valuation(c, p)).map(|v| -v).max()
}

/// Sup norm at finite places, Euclidean norm at ∞ (exact square root form).
pub fn vector_norm(x: &[Rat], v: Place, tol: &Rat) -> NormValue {
    match v {
        Place::Finite(p) => match sup_exponent(x, p) {
            None => NormValue::zero(),
            Some(e) => NormValue::rational(pow_p(p, e)),
        },
        Place::Infinite => {
            let s: Rat = x.iter().map(|c| c * c).sum();
            NormValue::sqrt_of(s, tol)
        }
    }
}

/// Norm of a wedge given by its coordinates in the standard e_I basis.
pub fn wedge_norm(w: &[Rat], v: Place, tol: &Rat) -> NormValue {
    vector_norm(w, v, tol)
}

/// Operator norm: max entry at finite places (sup-norm duality over Z_p), the
/// spectral norm at ∞.
pub fn operator_norm(a: &Mat, v: Place, tol: &Rat) -> NormValue {
    match v {
        Place::Finite(_) => vector_norm(a.entries(), v, tol),
        Place::Infinite => spectral_norm(a, tol),
    }
}

/// sqrt of the largest eigenvalue of AᵀA, enclosed via Sturm sequences; exact
/// when that eigenvalue is rational.
pub fn spectral_norm(a: &Mat, tol: &Rat) -> NormValue {
    if a.entries().iter().all(|x| x.is_zero()) {
        return NormValue::zero();
    }
    let g = a.transpose().mul(a);
    let f = g.char_poly();
    let sf = f.squarefree_part();
    // rational largest root?
    let top = largest_real_root_exact(&sf);
    if let Some(q) = top {
        return NormValue::from_radical(Radical::new(q, 2), tol);
    }
    let half = tol / Rat::from_integer(4.into());
    let mut width_target = tol.clone();
    loop {
        let iv = sf.largest_real_root(&width_target).expect("Gram matrix has real roots");
        let lo = if iv.lo.is_negative() { Rat::zero() } else { iv.lo.clone() };
        let slo = sqrt_enclosure(&lo, &half).lo;
        let shi = sqrt_enclosure(&iv.hi, &half).hi;
        if &shi - &slo <= *tol {
            return NormValue::enclosure(crate::interval::Interval::new(slo, shi));
        }
        width_target = width_target / Rat::from_integer(16.into());
    }
}

fn largest_real_root_exact(f: &Poly) -> Option<Rat> {
    let roots = f.rational_roots();
    let best = roots.into_iter().max()?;
    // no real root above it
    if f.count_roots_above(&best) == 0 {
        Some(best)
    } else {
        None
    }
}
