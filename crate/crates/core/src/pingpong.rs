//! Certificates of d-ping-pong position for conjugates of a proximal-type
//! element, the end-to-end witness search, and sampled re-verification.

use crate::eigen::{cursor_candidates, eigensplit, EigenSplit};
use crate::error::{Error, Result};
use crate::escape::{is_weak_general_position, weak_general_position};
use crate::factor::{factor_over_q, is_cyclotomic};
use crate::genset::GenSet;
use crate::magnitude::NormValue;
use crate::matrix::Mat;
use crate::metrics::{delta_gap, family_delta, point_to_subspace, ProjPoint};
use crate::place::{operator_norm, Place};
use crate::rat::{int, support_primes, Rat};
use crate::subspace::Subspace;
use num_traits::Zero;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Mutex;

fn ceil_log2(n: usize) -> i64 {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Nonzero proper sums of generalized eigenspaces of γ, grouped by rational
/// irreducible factors of the characteristic polynomial, whose eigenvalues are
/// not all roots of unity; each paired with the complementary sum.
pub fn admissible_subspaces(gamma: &Mat) -> Result<Vec<(Subspace, Subspace)>> {
    if !gamma.is_square() || gamma.det().is_zero() {
        return Err(Error::InvalidInput("matrix must be square and invertible".into()));
    }
    let d = gamma.rows();
    let factors = factor_over_q(&gamma.char_poly());
    let k = factors.len();
    let spaces: Vec<Subspace> = factors
        .iter()
        .map(|(g, m)| Subspace::span(d, &gamma.eval_poly(&g.pow(*m)).kernel()))
        .collect();
    let cyclo: Vec<bool> = factors.iter().map(|(g, _)| is_cyclotomic(&g.monic())).collect();
    let mut out = Vec::new();
    for mask in 1usize..(1 << k) - 1 {
        let inside: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        if inside.iter().all(|&i| cyclo[i]) {
            continue;
        }
        let sum = |pick: &dyn Fn(usize) -> bool| {
            (0..k).filter(|&i| pick(i)).fold(Subspace::zero(d), |acc, i| acc.sum(&spaces[i]))
        };
        out.push((sum(&|i| mask >> i & 1 == 1), sum(&|i| mask >> i & 1 == 0)));
    }
    Ok(out)
}

/// δ for the families {g_i W} and {g_i W'}: the minimum of δ(W, W'), of δ
/// between distinct partial intersections within each family, and of
/// δ(g_i W, g_i W') for each i.
pub fn delta_wv(w: &Subspace, w_comp: &Subspace, conjugators: &[Mat], v: Place, tol: &Rat) -> NormValue {
    let fw: Vec<Subspace> = conjugators.iter().map(|g| w.image(g)).collect();
    let fc: Vec<Subspace> = conjugators.iter().map(|g| w_comp.image(g)).collect();
    let mut best = delta_gap(w, w_comp, v, tol);
    best = best.min(&family_delta(&fw, v, tol));
    best = best.min(&family_delta(&fc, v, tol));
    for (a, r) in fw.iter().zip(&fc) {
        best = best.min(&delta_gap(a, r, v, tol));
    }
    best
}

/// A certificate that {g_i γⁿ g_i⁻¹} is in d-ping-pong position at a place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PingPongCert {
    pub place: Place,
    /// The generating set the words of γ and g_i refer to (may be empty for
    /// a certificate not tied to a search).
    pub generators: Vec<Mat>,
    pub gamma: Mat,
    pub conjugators: Vec<Mat>,
    pub omega: Rat,
    pub n: u32,
    pub delta: NormValue,
    /// max of ‖γ^±1‖², ‖g_i^±1‖².
    pub big_delta: NormValue,
    pub alpha: NormValue,
    /// Covering multiplicity, equal to d.
    pub m: usize,
    pub r: usize,
}

impl PingPongCert {
    pub fn dim(&self) -> usize {
        self.gamma.rows()
    }

    /// Word length of the longest product g_i γⁿ g_i⁻¹ (symmetric generators).
    pub fn product_length(&self) -> Option<usize> {
        let lg = self.gamma.word()?.len();
        let lc = self.conjugators.iter().map(|g| g.word().map(|w| w.len())).collect::<Option<Vec<_>>>()?;
        Some(self.n as usize * lg + 2 * lc.into_iter().max().unwrap_or(0))
    }
}

/// Quantities entering the ping-pong condition, recomputed from γ, g_i, ω.
#[derive(Clone, Debug)]
pub struct PingPongData {
    pub split: EigenSplit,
    pub delta: NormValue,
    pub big_delta: NormValue,
    pub alpha: NormValue,
    /// C_k²·α.
    pub rate: NormValue,
    /// δ^(2+2⌈log₂ d⌉) / (C_k²·Δ^(3(d−2))).
    pub threshold: NormValue,
}

impl PingPongData {
    pub fn holds(&self, n: u32, tol: &Rat) -> bool {
        self.rate.powi(n as i64, tol).lt_certain(&self.threshold)
    }
}

fn families_ok(split: &EigenSplit, conjugators: &[Mat]) -> Result<()> {
    for (name, h) in [("attracting", &split.a_part), ("repelling", &split.r_part)] {
        let fam: Vec<Subspace> = conjugators.iter().map(|g| h.image(g)).collect();
        if !is_weak_general_position(&fam) {
            return Err(Error::NotInPosition(format!("{name} translates")));
        }
    }
    Ok(())
}

/// Computes δ, Δ, α and both sides of the ping-pong condition.
pub fn pingpong_data(gamma: &Mat, conjugators: &[Mat], v: Place, omega: &Rat, tol: &Rat) -> Result<PingPongData> {
    if conjugators.is_empty() {
        return Err(Error::InvalidInput("need at least one conjugator".into()));
    }
    let d = gamma.rows();
    if conjugators.iter().any(|g| g.rows() != d || !g.is_square()) {
        return Err(Error::InvalidInput("conjugators must match the dimension of gamma".into()));
    }
    let t = tol / int(64);
    let split = eigensplit(gamma, v, omega, &t)?;
    let Some(alpha) = split.alpha(&t) else {
        return Err(Error::NoContraction("one side of the cursor is empty".into()));
    };
    families_ok(&split, conjugators)?;
    let delta = delta_wv(&split.a_part, &split.r_part, conjugators, v, &t);
    let mut mats = vec![gamma.clone(), gamma.inverse().expect("checked by eigensplit")];
    for g in conjugators {
        mats.push(g.clone());
        mats.push(g.inverse().ok_or_else(|| Error::InvalidInput("conjugator is singular".into()))?);
    }
    let big_delta = mats
        .iter()
        .map(|m| operator_norm(m, v, &t))
        .reduce(|a, b| a.max(&b))
        .unwrap()
        .powi(2, &t);
    let ck = v.c_k(d);
    let ck2 = NormValue::rational(&ck * &ck);
    let rate = alpha.mul(&ck2, &t);
    let threshold = delta
        .powi(2 + 2 * ceil_log2(d), &t)
        .div(&ck2.mul(&big_delta.powi(3 * (d as i64 - 2), &t), &t), &t);
    Ok(PingPongData { split, delta, big_delta, alpha, rate, threshold })
}

const MAX_N: u32 = 1 << 20;

fn least_n(data: &PingPongData, tol: &Rat) -> Result<u32> {
    if !data.rate.lt_certain(&NormValue::one()) {
        return Err(Error::NoContraction(format!(
            "C_k^2 * alpha = [{:.6}, {:.6}] is not certainly below 1",
            crate::rat::to_f64(&data.rate.lo),
            crate::rat::to_f64(&data.rate.hi)
        )));
    }
    let guess = {
        let lr = crate::rat::to_f64(&data.rate.hi).ln();
        let lt = crate::rat::to_f64(&data.threshold.lo).max(f64::MIN_POSITIVE).ln();
        (lt / lr).ceil().max(1.0)
    };
    if !(guess < MAX_N as f64) {
        return Err(Error::NoContraction(format!("required n exceeds {MAX_N}")));
    }
    let mut n = (guess as u32).saturating_sub(2).max(1);
    while !data.holds(n, tol) {
        n += 1;
        if n > MAX_N {
            return Err(Error::NoContraction(format!("required n exceeds {MAX_N}")));
        }
    }
    while n > 1 && data.holds(n - 1, tol) {
        n -= 1;
    }
    Ok(n)
}

/// The least n for which the ping-pong condition holds with interval margin,
/// and the certificate at that n.
pub fn certify_pingpong(gamma: &Mat, conjugators: &[Mat], v: Place, omega: &Rat, tol: &Rat) -> Result<(u32, PingPongCert)> {
    let data = pingpong_data(gamma, conjugators, v, omega, tol)?;
    let n = least_n(&data, tol)?;
    let cert = PingPongCert {
        place: v,
        generators: Vec::new(),
        gamma: gamma.clone(),
        conjugators: conjugators.to_vec(),
        omega: omega.clone(),
        n,
        delta: data.delta,
        big_delta: data.big_delta,
        alpha: data.alpha,
        m: gamma.rows(),
        r: conjugators.len(),
    };
    Ok((n, cert))
}

/// Outcome of an independent re-check of a certificate.
#[derive(Clone, Debug)]
pub struct Verification {
    pub checks: Vec<(String, bool)>,
}

impl Verification {
    pub fn accepted(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect()
    }
}

/// Claimed and recomputed values agree: exactly when both are exact, by
/// overlapping enclosures otherwise.
fn agrees(claimed: &NormValue, actual: &NormValue) -> bool {
    match (&claimed.exact, &actual.exact) {
        (Some(a), Some(b)) => a.cmp_exact(b) == Ordering::Equal,
        _ => claimed.cmp_certain(actual).map_or(true, |o| o == Ordering::Equal),
    }
}

/// Recomputes everything in the certificate from γ, g_i, ω and the place.
pub fn verify(cert: &PingPongCert, tol: &Rat) -> Verification {
    let mut checks = Vec::new();
    let d = cert.dim();
    let shape_ok = cert.gamma.is_square()
        && cert.r == cert.conjugators.len()
        && cert.r > 0
        && cert.m == d
        && cert.n >= 1
        && cert.conjugators.iter().all(|g| g.is_square() && g.rows() == d);
    checks.push(("shape".to_string(), shape_ok));
    if !shape_ok {
        return Verification { checks };
    }
    if !cert.generators.is_empty() {
        let bound = GenSet::new(cert.generators.clone()).is_ok_and(|s| {
            let mut all = vec![&cert.gamma];
            all.extend(cert.conjugators.iter());
            all.iter().all(|m| match m.word() {
                Some(w) => s.eval_word(w).is_ok_and(|x| &x == *m),
                None => false,
            })
        });
        checks.push(("words evaluate to the stated matrices".to_string(), bound));
    }
    match pingpong_data(&cert.gamma, &cert.conjugators, cert.place, &cert.omega, tol) {
        Err(e) => checks.push((format!("recomputation: {e}"), false)),
        Ok(data) => {
            checks.push(("families in weak general position".to_string(), true));
            checks.push(("delta".to_string(), agrees(&cert.delta, &data.delta)));
            checks.push(("Delta".to_string(), agrees(&cert.big_delta, &data.big_delta)));
            checks.push(("alpha".to_string(), agrees(&cert.alpha, &data.alpha)));
            checks.push(("condition holds at n".to_string(), data.holds(cert.n, tol)));
            checks.push(("n is least".to_string(), cert.n == 1 || !data.holds(cert.n - 1, tol)));
        }
    }
    Verification { checks }
}

/// The admissible window for ε: [b_low, b_high) with
/// b_high = δ^⌈log₂ d⌉ / C_k and b_low = √((C_k²α)ⁿ Δ^(3(d−2))) / δ.
pub fn epsilon_window(cert: &PingPongCert, tol: &Rat) -> Result<(NormValue, NormValue)> {
    let data = pingpong_data(&cert.gamma, &cert.conjugators, cert.place, &cert.omega, tol)?;
    let d = cert.dim();
    let t = tol / int(16);
    let hi = data.delta.powi(ceil_log2(d), &t).div(&NormValue::rational(cert.place.c_k(d)), &t);
    let lo = data
        .rate
        .powi(cert.n as i64, &t)
        .mul(&data.big_delta.powi(3 * (d as i64 - 2), &t), &t)
        .root(2, &t)
        .div(&data.delta, &t);
    Ok((lo, hi))
}

/// A rational ε near the geometric mean of the window ends, inside the window.
pub fn default_epsilon(cert: &PingPongCert, tol: &Rat) -> Result<Rat> {
    let mut t = tol.clone();
    for _ in 0..8 {
        let (lo, hi) = epsilon_window(cert, &t)?;
        let g = lo.mul(&hi, &t).root(2, &t);
        let eps = crate::interval::floor_dyadic(&g.interval().midpoint(), 64);
        let e = NormValue::rational(eps.clone());
        if lo.le_certain(&e) && e.lt_certain(&hi) && eps > Rat::zero() {
            return Ok(eps);
        }
        t = &t / int(1 << 16);
    }
    Err(Error::InseparableAtTolerance("epsilon window".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionReport {
    pub epsilon: Rat,
    pub checked: usize,
    /// Points outside the ε-neighbourhood of R_i whose image under γ_iⁿ is
    /// certainly farther than ε from A_i.
    pub violations_contraction: usize,
    /// Points lying in more than M of the neighbourhoods of the R_i (or A_i).
    pub violations_multiplicity: usize,
    /// Instances the enclosures could not decide.
    pub undecided: usize,
    pub max_multiplicity: usize,
}

impl PositionReport {
    pub fn violations(&self) -> usize {
        self.violations_contraction + self.violations_multiplicity
    }
}

/// Checks both ping-pong conditions on the given points with ε-neighbourhoods
/// of A_i = g_i A and R_i = g_i R.
pub fn verify_position_sample(cert: &PingPongCert, epsilon: Option<Rat>, sample: &[ProjPoint], tol: &Rat) -> Result<PositionReport> {
    let eps = match epsilon {
        Some(e) => e,
        None => default_epsilon(cert, tol)?,
    };
    let v = cert.place;
    let t = tol / int(16);
    let split = eigensplit(&cert.gamma, v, &cert.omega, &t)?;
    let gn = cert.gamma.pow(cert.n);
    let parts: Vec<(Subspace, Subspace, Mat)> = cert
        .conjugators
        .iter()
        .map(|g| {
            let gi = g.inverse().expect("conjugator is invertible");
            (split.a_part.image(g), split.r_part.image(g), g.mul(&gn).mul(&gi))
        })
        .collect();
    let e = NormValue::rational(eps.clone());
    let results: Vec<(usize, usize, usize)> = sample
        .par_iter()
        .map(|x| {
            let (mut bad_i, mut undecided) = (0, 0);
            let (mut near_r, mut near_a) = (0, 0);
            for (a, r, pn) in &parts {
                let dr = point_to_subspace(x, r, v, &t);
                let da = point_to_subspace(x, a, v, &t);
                if dr.le_possible(&e) {
                    near_r += 1;
                }
                if da.le_possible(&e) {
                    near_a += 1;
                }
                if dr.cmp_certain(&e).is_none() || da.cmp_certain(&e).is_none() {
                    undecided += 1;
                }
                if !dr.le_certain(&e) {
                    let img = point_to_subspace(&x.apply(pn), a, v, &t);
                    match img.cmp_certain(&e) {
                        Some(Ordering::Greater) => bad_i += 1,
                        None => undecided += 1,
                        _ => {}
                    }
                }
            }
            (bad_i, near_r.max(near_a), undecided)
        })
        .collect();
    let mut rep = PositionReport {
        epsilon: eps,
        checked: sample.len(),
        violations_contraction: 0,
        violations_multiplicity: 0,
        undecided: 0,
        max_multiplicity: 0,
    };
    for (bad, mult, und) in results {
        rep.violations_contraction += bad;
        rep.undecided += und;
        rep.max_multiplicity = rep.max_multiplicity.max(mult);
        if mult > cert.m {
            rep.violations_multiplicity += 1;
        }
    }
    Ok(rep)
}

/// `count` points with independent uniform integer coordinates in
/// [-bound, bound], drawn from the ChaCha20 stream of `seed`.
pub fn random_points(d: usize, count: usize, bound: i64, seed: u64) -> Vec<ProjPoint> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<Rat> = (0..d).map(|_| int(rng.gen_range(-bound..=bound))).collect();
        if let Ok(x) = ProjPoint::new(&v) {
            out.push(x);
        }
    }
    out
}

/// Places where some eigenvalue of γ may have modulus ≠ 1: primes in the
/// entry denominators or the determinant, then ∞.
pub fn candidate_places(gamma: &Mat) -> Vec<Place> {
    let mut primes: Vec<u64> = support_primes(&gamma.det());
    for x in gamma.entries() {
        primes.extend(support_primes(&Rat::from_integer(x.denom().clone())));
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinite);
    out
}

#[derive(Clone, Debug)]
pub struct SearchSettings {
    pub r: usize,
    /// Longest word considered for γ.
    pub m: usize,
    /// Longest word considered for each conjugator.
    pub m_cap: usize,
    pub budget: u64,
    pub tol: Rat,
    /// Restrict the search to one place.
    pub place: Option<Place>,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub cert: PingPongCert,
    pub min_n: u32,
    /// Candidates (γ, place, cursor) tried before the witness, in order.
    pub tried: usize,
}

#[derive(Default)]
struct Diagnostics {
    best_alpha: Option<f64>,
    best_delta: Option<f64>,
    nontrivial_moduli: bool,
    reasons: Vec<String>,
}

fn try_gamma(s: &GenSet, gamma: &Mat, set: &SearchSettings, diag: &Mutex<Diagnostics>) -> (usize, Option<(u32, PingPongCert)>) {
    let mut tried = 0;
    for v in candidate_places(gamma) {
        if set.place.is_some_and(|p| p != v) {
            continue;
        }
        let cursors = cursor_candidates(gamma, v, &set.tol);
        if !cursors.is_empty() {
            diag.lock().unwrap().nontrivial_moduli = true;
        }
        for omega in cursors {
            tried += 1;
            let split = match eigensplit(gamma, v, &omega, &set.tol) {
                Ok(sp) => sp,
                Err(e) => {
                    diag.lock().unwrap().reasons.push(format!("{}: {e}", v));
                    continue;
                }
            };
            if let Some(a) = split.alpha(&set.tol) {
                let mut dg = diag.lock().unwrap();
                let x = a.to_f64();
                dg.best_alpha = Some(dg.best_alpha.map_or(x, |b| b.min(x)));
            }
            let pos = match weak_general_position(s, &split.a_part, &split.r_part, set.r, set.m_cap, set.budget) {
                Ok(p) => p,
                Err(e) => {
                    diag.lock().unwrap().reasons.push(format!("{}: {e}", v));
                    continue;
                }
            };
            match certify_pingpong(gamma, &pos.conjugators, v, &omega, &set.tol) {
                Ok((n, mut cert)) => {
                    cert.generators = s.elements().to_vec();
                    return (tried, Some((n, cert)));
                }
                Err(e) => {
                    let delta = delta_wv(&split.a_part, &split.r_part, &pos.conjugators, v, &set.tol).to_f64();
                    let mut dg = diag.lock().unwrap();
                    dg.best_delta = Some(dg.best_delta.map_or(delta, |b| b.max(delta)));
                    dg.reasons.push(format!("{}: {e}", v));
                }
            }
        }
    }
    (tried, None)
}

/// Searches γ ∈ S^k for k = 1..=m, then places (finite primes ascending, then
/// ∞), then cursors, for conjugators in weak general position satisfying the
/// ping-pong condition. Candidates are examined in parallel; the first in
/// that order wins.
pub fn locgap_search(s: &GenSet, set: &SearchSettings) -> Result<SearchResult> {
    if !s.contains_identity() || !s.is_symmetric() {
        return Err(Error::HypothesisViolated("the set must be symmetric and contain the identity".into()));
    }
    if set.r == 0 || set.m == 0 {
        return Err(Error::InvalidInput("r and m must be positive".into()));
    }
    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    for layer in s.words_by_length(set.m, set.budget)? {
        for g in layer {
            if !g.is_identity() && seen.insert(g.clone()) {
                candidates.push(g);
            }
        }
    }
    let diag = Mutex::new(Diagnostics::default());
    let results: Vec<(usize, Option<(u32, PingPongCert)>)> =
        candidates.par_iter().map(|g| try_gamma(s, g, set, &diag)).collect();
    let mut tried = 0;
    for (t, r) in results {
        tried += t;
        if let Some((min_n, cert)) = r {
            return Ok(SearchResult { cert, min_n, tried });
        }
    }
    let dg = diag.into_inner().unwrap();
    let mut msg = format!("{} candidates, {tried} (place, cursor) pairs", candidates.len());
    if !dg.nontrivial_moduli {
        msg.push_str("; every eigenvalue of every candidate has modulus 1 at every place");
    }
    if let Some(a) = dg.best_alpha {
        msg.push_str(&format!("; best alpha {a:.6}"));
    }
    if let Some(d) = dg.best_delta {
        msg.push_str(&format!("; best delta {d:.6}"));
    }
    if let Some(r) = dg.reasons.first() {
        msg.push_str(&format!("; first failure: {r}"));
    }
    Err(Error::NotFound(msg))
}

/// Bounds for |F| elements in M-ping-pong position: ‖Σ λ(γ)‖² ≤ 4·M·|F| and
/// the averaged operator norm ≤ 2·√(M/|F|).
pub fn markov_norm_bound(f_size: u64, m: u64, tol: &Rat) -> Result<(Rat, NormValue)> {
    if f_size == 0 || m == 0 {
        return Err(Error::InvalidInput("sizes must be positive".into()));
    }
    let sq = Rat::from_integer((4 * m * f_size).into());
    let avg = NormValue::sqrt_of(Rat::new((m as i64).into(), (f_size as i64).into()), tol).scale(&int(2), tol);
    Ok((sq, avg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn t() -> Rat {
        rat(1, 1 << 30)
    }

    #[test]
    fn admissible() {
        let g = Mat::diag(&[int(2), int(3), int(1)]);
        assert_eq!(admissible_subspaces(&g).unwrap().len(), 5);
        let u = Mat::from_ints(&[&[1, 1], &[0, 1]]);
        assert!(admissible_subspaces(&u).unwrap().is_empty());
        let d = Mat::diag(&[int(5), rat(1, 5)]);
        let a = admissible_subspaces(&d).unwrap();
        assert_eq!(a.len(), 2);
        assert!(a.iter().any(|(w, c)| *w == Subspace::coordinate(2, &[0]) && *c == Subspace::coordinate(2, &[1])));
    }

    #[test]
    fn delta_examples() {
        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        let one = delta_wv(&e1, &e2, &[Mat::identity(2)], Place::Finite(5), &t());
        assert_eq!(one.as_rational(), Some(&int(1)));
        let g2 = Mat::from_ints(&[&[1, 1], &[1, 2]]);
        let gs = [Mat::identity(2), g2];
        assert_eq!(delta_wv(&e1, &e2, &gs, Place::Finite(5), &t()).as_rational(), Some(&int(1)));
        // g = [[1,3],[0,1]] moves e2 to (3,1), which is e2 modulo 3
        let g3 = Mat::from_ints(&[&[1, 3], &[0, 1]]);
        let d3 = delta_wv(&e2, &e1, &[Mat::identity(2), g3.clone(), g3], Place::Finite(3), &t());
        assert_eq!(d3.as_rational(), Some(&rat(1, 3)));
    }

    #[test]
    fn certify_example() {
        let gamma = Mat::diag(&[int(5), rat(1, 5)]);
        let g2 = Mat::from_ints(&[&[1, 1], &[1, 2]]);
        let (n, cert) = certify_pingpong(&gamma, &[Mat::identity(2), g2], Place::Finite(5), &int(1), &t()).unwrap();
        assert_eq!(n, 1);
        assert_eq!(cert.alpha.as_rational(), Some(&rat(1, 25)));
        assert!(verify(&cert, &t()).accepted());
        let mut bad = cert.clone();
        bad.n = 2;
        assert!(!verify(&bad, &t()).accepted());
        let eps = default_epsilon(&cert, &t()).unwrap();
        assert!(eps > rat(1, 5) && eps < int(1));
        let pts: Vec<ProjPoint> = [[1, 0], [0, 1], [1, 1], [1, 2], [3, 7], [5, 1], [1, 25]]
            .iter()
            .map(|c| ProjPoint::from_ints(c).unwrap())
            .collect();
        let rep = verify_position_sample(&cert, None, &pts, &t()).unwrap();
        assert_eq!(rep.violations(), 0);
    }

    #[test]
    fn no_contraction_at_infinity() {
        // eigenvalues 3 ± 2√2 come from one irreducible factor
        let g = Mat::from_ints(&[&[5, 2], &[2, 1]]);
        let r = certify_pingpong(&g, &[Mat::identity(2)], Place::Infinite, &int(1), &t());
        assert!(matches!(r, Err(Error::MixedFactor(_))));
        // diag(3, 1/3): (4/9)^n < 1/4 first at n = 2
        let h = Mat::diag(&[int(3), rat(1, 3)]);
        let (n, _) = certify_pingpong(&h, &[Mat::identity(2)], Place::Infinite, &int(1), &t()).unwrap();
        assert_eq!(n, 2);
        // diag(3, 1): C_k² α = 4/3
        let k = Mat::diag(&[int(3), int(1)]);
        assert!(matches!(
            certify_pingpong(&k, &[Mat::identity(2)], Place::Infinite, &int(2), &t()),
            Err(Error::NoContraction(_))
        ));
    }

    #[test]
    fn search_examples() {
        let d = Mat::diag(&[int(5), rat(1, 5)]);
        let g2 = Mat::from_ints(&[&[1, 1], &[1, 2]]);
        let s = GenSet::new(vec![Mat::identity(2), d.clone(), d.inverse().unwrap(), g2.clone(), g2.inverse().unwrap()]).unwrap();
        let set = SearchSettings { r: 2, m: 2, m_cap: 4, budget: 1_000_000, tol: t(), place: None };
        let res = locgap_search(&s, &set).unwrap();
        assert_eq!(res.cert.place, Place::Finite(5));
        assert_eq!(res.min_n, 1);
        assert!(verify(&res.cert, &t()).accepted());
        let rot = Mat::from_ints(&[&[0, -1], &[1, 0]]);
        let fin = GenSet::new(vec![Mat::identity(2), rot.clone(), rot.inverse().unwrap(), rot.pow(2)]).unwrap();
        let set = SearchSettings { r: 2, m: 3, m_cap: 2, budget: 100_000, tol: t(), place: None };
        match locgap_search(&fin, &set) {
            Err(Error::NotFound(m)) => assert!(m.contains("modulus 1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn markov() {
        let (a, b) = markov_norm_bound(4, 1, &t()).unwrap();
        assert_eq!((a, b.as_rational().cloned()), (int(16), Some(int(1))));
        assert_eq!(markov_norm_bound(12, 1, &t()).unwrap().0, int(48));
        assert_eq!(markov_norm_bound(32, 2, &t()).unwrap().1.as_rational(), Some(&rat(1, 2)));
    }
}
