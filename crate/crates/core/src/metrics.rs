//! Projective distances between points and subspaces at a place, the gap
//! function δ, the Arakelov distance, and two-sided checks of the
//! intersection and contraction estimates.

use crate::eigen::eigensplit;
use crate::error::{Error, Result};
use crate::heights::HeightValue;
use crate::lattice::orthogonal_complement;
use crate::magnitude::{NormValue, Radical};
use crate::matrix::Mat;
use crate::place::{operator_norm, Place};
use crate::rat::{int, pow_p, primitive_integer, rational_content, support_primes, Rat};
use crate::subspace::{wedge, Subspace};
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// A point of projective space, stored as its primitive integer
/// representative with first nonzero coordinate positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Rat>,
}

impl ProjPoint {
    pub fn new(v: &[Rat]) -> Result<Self> {
        if v.iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidInput("projective point must be nonzero".into()));
        }
        let (mut ints, _) = primitive_integer(v);
        let first = ints.iter().find(|x| !x.is_zero()).unwrap();
        if first < &num_bigint::BigInt::zero() {
            ints.iter_mut().for_each(|x| *x = -x.clone());
        }
        Ok(ProjPoint { coords: ints.into_iter().map(Rat::from_integer).collect() })
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        ProjPoint::new(&v.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn ambient(&self) -> usize {
        self.coords.len()
    }

    pub fn apply(&self, a: &Mat) -> ProjPoint {
        ProjPoint::new(&a.apply(&self.coords)).expect("matrix must be invertible")
    }

    pub fn line(&self) -> Subspace {
        Subspace::span(self.ambient(), std::slice::from_ref(&self.coords))
    }
}

/// ‖num‖_v / Π ‖den_i‖_v for wedge coordinate vectors. Exact at finite places;
/// at ∞ an exact square root of a rational.
pub fn wedge_ratio(num: &[Rat], dens: &[&[Rat]], v: Place, tol: &Rat) -> NormValue {
    if num.iter().all(|x| x.is_zero()) {
        return NormValue::zero();
    }
    match v {
        Place::Finite(p) => {
            let e = |w: &[Rat]| crate::place::sup_exponent(w, p).expect("zero wedge in denominator");
            let total = e(num) - dens.iter().map(|w| e(w)).sum::<i64>();
            NormValue::rational(pow_p(p, total))
        }
        Place::Infinite => {
            let sq = |w: &[Rat]| w.iter().map(|x| x * x).sum::<Rat>();
            let den: Rat = dens.iter().map(|w| sq(w)).product();
            NormValue::sqrt_of(sq(num) / den, tol)
        }
    }
}

/// d(x, y) = ‖x∧y‖/(‖x‖‖y‖).
pub fn proj_dist(x: &ProjPoint, y: &ProjPoint, v: Place, tol: &Rat) -> NormValue {
    let n = x.ambient();
    let w = wedge(&[x.coords.clone(), y.coords.clone()], n);
    wedge_ratio(&w, &[&x.coords, &y.coords], v, tol)
}

/// d(V, W) with unit wedges; 1 when either subspace is zero.
pub fn subspace_dist(a: &Subspace, b: &Subspace, v: Place, tol: &Rat) -> NormValue {
    if a.is_zero() || b.is_zero() {
        return NormValue::one();
    }
    let mut rows = a.basis().to_vec();
    rows.extend(b.basis().iter().cloned());
    let w = wedge(&rows, a.ambient());
    wedge_ratio(&w, &[a.pluecker(), b.pluecker()], v, tol)
}

/// An orthogonal complement of I in the whole space at v (Euclidean at ∞).
pub fn local_complement(i: &Subspace, v: Place) -> Subspace {
    match v {
        Place::Infinite => i.euclidean_complement(),
        Place::Finite(p) => orthogonal_complement(i, &Subspace::full(i.ambient()), p),
    }
}

/// δ(V, W): the best distance from W of a complement of V∩W in V, realized
/// by the part of V orthogonal to V∩W.
pub fn delta_gap(a: &Subspace, b: &Subspace, v: Place, tol: &Rat) -> NormValue {
    if b.contains_subspace(a) {
        return NormValue::one();
    }
    let i = a.intersect(b);
    if i.is_zero() {
        return subspace_dist(a, b, v, tol);
    }
    let u = local_complement(&i, v);
    subspace_dist(&a.intersect(&u), &b.intersect(&u), v, tol)
}

/// d(x, W) for the line through x.
pub fn point_to_subspace(x: &ProjPoint, w: &Subspace, v: Place, tol: &Rat) -> NormValue {
    subspace_dist(&x.line(), w, v, tol)
}

/// Both sides of an inequality lhs ≤ rhs at a place.
#[derive(Clone, Debug)]
pub struct Report {
    pub lhs: NormValue,
    pub rhs: NormValue,
    /// Not contradicted by the enclosures.
    pub holds: bool,
    /// Decided by the enclosures (always true at finite places).
    pub certain: bool,
    pub place: Place,
}

impl Report {
    fn new(lhs: NormValue, rhs: NormValue, place: Place) -> Report {
        let c = lhs.cmp_certain(&rhs);
        Report {
            holds: c != Some(Ordering::Greater),
            certain: c.is_some(),
            lhs,
            rhs,
            place,
        }
    }

    pub fn violated(&self) -> bool {
        !self.holds
    }
}

fn ceil_log2(n: usize) -> i64 {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// The distinct nonempty intersections V_I = ∩_{i∈I} V_i.
pub fn partial_intersections(vs: &[Subspace]) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = Vec::new();
    for mask in 1usize..(1 << vs.len()) {
        let mut it = (0..vs.len()).filter(|i| mask >> i & 1 == 1);
        let first = it.next().unwrap();
        let s = it.fold(vs[first].clone(), |acc, i| acc.intersect(&vs[i]));
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// min δ(V_I, V_J) over ordered pairs of distinct partial intersections; 1 if
/// there is no such pair.
pub fn family_delta(vs: &[Subspace], v: Place, tol: &Rat) -> NormValue {
    let parts = partial_intersections(vs);
    let mut best = NormValue::one();
    for (i, a) in parts.iter().enumerate() {
        for (j, b) in parts.iter().enumerate() {
            if i != j {
                best = best.min(&delta_gap(a, b, v, tol));
            }
        }
    }
    best
}

/// d(x, ∩V_i)·δ^⌈log₂ n⌉ versus C_k·max_i d(x, V_i).
pub fn intersection_distance_check(x: &ProjPoint, vs: &[Subspace], v: Place, tol: &Rat) -> Result<Report> {
    if vs.is_empty() {
        return Err(Error::InvalidInput("need at least one subspace".into()));
    }
    let d = x.ambient();
    let t = tol / int(16);
    let cap = vs.iter().skip(1).fold(vs[0].clone(), |acc, w| acc.intersect(w));
    let delta = family_delta(vs, v, &t);
    let lhs = point_to_subspace(x, &cap, v, &t).mul(&delta.powi(ceil_log2(vs.len()), &t), &t);
    let far = vs
        .iter()
        .map(|w| point_to_subspace(x, w, v, &t))
        .reduce(|a, b| a.max(&b))
        .unwrap();
    let rhs = far.mul(&NormValue::rational(v.c_k(d)), &t);
    Ok(Report::new(lhs, rhs, v))
}

/// d(γⁿx, A)·d(x, R)·d(A, R)² versus (‖γ‖‖γ⁻¹‖)^(d−2)·(C_k²·λ_ω/Λ_ω)ⁿ.
pub fn dynamics_check(g: &Mat, omega: &Rat, x: &ProjPoint, n: u32, v: Place, tol: &Rat) -> Result<Report> {
    let t = tol / int(64);
    let split = eigensplit(g, v, omega, &t)?;
    let d = g.rows();
    let gn = g.pow(n);
    let y = x.apply(&gn);
    let dar = subspace_dist(&split.a_part, &split.r_part, v, &t);
    let lhs = point_to_subspace(&y, &split.a_part, v, &t)
        .mul(&point_to_subspace(x, &split.r_part, v, &t), &t)
        .mul(&dar.powi(2, &t), &t);
    let inv = g.inverse().expect("eigensplit checked invertibility");
    let cond = operator_norm(g, v, &t).mul(&operator_norm(&inv, v, &t), &t);
    let ck = v.c_k(d);
    let rate = match split.alpha(&t) {
        Some(a) => a.mul(&NormValue::rational(&ck * &ck), &t).powi(n as i64, &t),
        None => NormValue::zero(),
    };
    let rhs = cond.powi(d as i64 - 2, &t).mul(&rate, &t);
    Ok(Report::new(lhs, rhs, v))
}

/// A complement of I inside V spanned by basis vectors of V.
fn rational_complement(i: &Subspace, v: &Subspace) -> Subspace {
    let mut cur = i.clone();
    let mut chosen = Vec::new();
    for b in v.basis() {
        if !cur.contains(b) {
            chosen.push(b.clone());
            cur = cur.sum(&Subspace::span(v.ambient(), std::slice::from_ref(b)));
        }
    }
    Subspace::span(v.ambient(), &chosen)
}

/// The places where δ_v(V, W) can be below 1: the primes dividing the
/// integer d_p-defect of a fixed rational complement, and ∞.
pub fn contributing_places(a: &Subspace, b: &Subspace) -> Vec<Place> {
    if a.is_zero() || b.is_zero() || b.contains_subspace(a) {
        return Vec::new();
    }
    let i = a.intersect(b);
    let c = rational_complement(&i, a);
    let mut rows = c.basis().to_vec();
    rows.extend(b.basis().iter().cloned());
    let w = wedge(&rows, a.ambient());
    let ratio = rational_content(&w) / (rational_content(c.pluecker()) * rational_content(b.pluecker()));
    let mut out: Vec<Place> = support_primes(&ratio).into_iter().map(Place::Finite).collect();
    out.push(Place::Infinite);
    out
}

/// Σ_v log(1/δ_v(V, W)) as an exact magnitude plus log enclosure.
pub fn arakelov_distance(a: &Subspace, b: &Subspace, tol: &Rat) -> HeightValue {
    let t = tol / int(8);
    let mut mag = Radical::rational(Rat::one());
    for v in contributing_places(a, b) {
        let dv = delta_gap(a, b, v, &t);
        let r = dv.exact.clone().expect("δ_v is exact over the rationals");
        mag = mag.mul(&r.recip());
    }
    HeightValue::log_of(mag, tol)
}

/// Per-place terms log(1/δ_v) of the Arakelov distance.
pub fn arakelov_breakdown(a: &Subspace, b: &Subspace, tol: &Rat) -> Vec<(Place, HeightValue)> {
    contributing_places(a, b)
        .into_iter()
        .map(|v| {
            let r = delta_gap(a, b, v, tol).exact.expect("exact δ_v");
            (v, HeightValue::log_of(r.recip(), tol))
        })
        .collect()
}
