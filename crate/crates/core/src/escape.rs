//! Escape from subvarieties by orbit search, the dimension bound M(d, m),
//! coset escape search, and construction of conjugators putting two families
//! of translates in weak general position.

use crate::error::{Error, Result};
use crate::genset::GenSet;
use crate::matrix::Mat;
use crate::multipoly::{monomials_up_to, MultiPoly};
use crate::rat::{binomial, Rat};
use crate::subspace::Subspace;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashSet;

/// M(d, m) = C(m + d, d), the dimension of polynomials of degree ≤ m in d
/// variables.
pub fn m_of_dm(d: u64, m: u64) -> BigUint {
    binomial(m + d, d)
}

/// Something that can be evaluated at a point of Q^D and has a degree bound.
pub trait Equation: Sync {
    fn nvars(&self) -> usize;
    fn degree(&self) -> u32;
    fn eval(&self, x: &[Rat]) -> Rat;
}

impl Equation for MultiPoly {
    fn nvars(&self) -> usize {
        MultiPoly::nvars(self)
    }
    fn degree(&self) -> u32 {
        MultiPoly::degree(self)
    }
    fn eval(&self, x: &[Rat]) -> Rat {
        MultiPoly::eval(self, x)
    }
}

/// A product of affine-linear forms, kept factored.
#[derive(Clone, Debug)]
pub struct LinearProduct {
    pub nvars: usize,
    pub factors: Vec<Vec<Rat>>,
}

impl Equation for LinearProduct {
    fn nvars(&self) -> usize {
        self.nvars
    }
    fn degree(&self) -> u32 {
        self.factors.len() as u32
    }
    fn eval(&self, x: &[Rat]) -> Rat {
        let mut r = Rat::one();
        for f in &self.factors {
            let v: Rat = f.iter().zip(x).map(|(a, b)| a * b).sum();
            if v.is_zero() {
                return v;
            }
            r *= v;
        }
        r
    }
}

/// Why a search stopped without a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhaustion {
    /// The span of evaluation vectors stopped growing: the equation vanishes
    /// on the whole orbit.
    SpanStabilized,
    /// The orbit is finite and fully enumerated.
    OrbitClosed,
    /// Searched up to M(D, deg) − 1 steps, which suffices by the escape bound.
    BoundReached,
    /// Stopped at a caller cap below the bound; nothing is certified.
    CapReached,
}

#[derive(Clone, Debug)]
pub struct Escape {
    /// Number of steps of the witness, or of the search when none was found.
    pub n: usize,
    /// Generator indices with point = σ_{w0}·σ_{w1}⋯u.
    pub word: Option<Vec<usize>>,
    pub point: Option<Vec<Rat>>,
    /// Ranks of the degree-≤m monomial evaluation vectors of Σ^k·u, k = 0..;
    /// empty when the monomial space is too large to track.
    pub span_dims: Vec<usize>,
    pub bound: BigUint,
    pub exhaustion: Option<Exhaustion>,
}

impl Escape {
    pub fn found(&self) -> bool {
        self.word.is_some()
    }
}

const MODP: u64 = (1u64 << 61) - 1;
const TRACK_CAP: usize = 800;

fn to_modp(x: &Rat) -> Option<u64> {
    let p = num_bigint::BigInt::from(MODP);
    let n = x.numer().mod_floor(&p).to_u64().unwrap();
    let d = x.denom().mod_floor(&p).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    Some(mulm(n, crate::rat::pow_mod(d, MODP - 2, MODP)))
}

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODP as u128) as u64
}

/// Rank of the monomial evaluation vectors of a growing point set. A modular
/// image decides independence quickly; stalls are confirmed exactly.
pub(crate) struct SpanTracker {
    monos: Vec<Vec<u32>>,
    degree: u32,
    modp: Vec<(usize, Vec<u64>)>,
    basis: Vec<Vec<Rat>>,
    exact: Vec<(usize, Vec<Rat>)>,
    exact_built: usize,
    pending: Vec<Vec<Rat>>,
    prefilter: bool,
}

impl SpanTracker {
    fn new(nvars: usize, degree: u32) -> Option<Self> {
        Self::with_cap(nvars, degree, TRACK_CAP)
    }

    pub(crate) fn with_cap(nvars: usize, degree: u32, cap: usize) -> Option<Self> {
        let size = m_of_dm(nvars as u64, degree as u64);
        if size > BigUint::from(cap) {
            return None;
        }
        Some(SpanTracker {
            monos: monomials_up_to(nvars, degree),
            degree,
            modp: Vec::new(),
            basis: Vec::new(),
            exact: Vec::new(),
            exact_built: 0,
            pending: Vec::new(),
            prefilter: true,
        })
    }

    pub(crate) fn rank(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn monomial_count(&self) -> usize {
        self.monos.len()
    }

    /// Rank with every pending vector checked exactly.
    pub(crate) fn exact_rank(&mut self) -> usize {
        self.confirm();
        self.rank()
    }

    fn veronese(&self, x: &[Rat]) -> Vec<Rat> {
        let pows: Vec<Vec<Rat>> = x
            .iter()
            .map(|xi| {
                let mut v = vec![Rat::one()];
                for k in 1..=self.degree as usize {
                    let next = &v[k - 1] * xi;
                    v.push(next);
                }
                v
            })
            .collect();
        self.monos
            .iter()
            .map(|e| e.iter().enumerate().fold(Rat::one(), |acc, (i, &k)| acc * &pows[i][k as usize]))
            .collect()
    }

    fn reduce_modp(&self, mut v: Vec<u64>) -> Option<(usize, Vec<u64>)> {
        for (piv, row) in &self.modp {
            let c = v[*piv];
            if c != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = (*a + MODP - mulm(c, *b)) % MODP;
                }
            }
        }
        let piv = v.iter().position(|&x| x != 0)?;
        let inv = crate::rat::pow_mod(v[piv], MODP - 2, MODP);
        Some((piv, v.into_iter().map(|x| mulm(x, inv)).collect()))
    }

    fn reduce_exact(&self, mut v: Vec<Rat>) -> Option<(usize, Vec<Rat>)> {
        for (piv, row) in &self.exact {
            let c = v[*piv].clone();
            if !c.is_zero() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &c * b;
                }
            }
        }
        let piv = v.iter().position(|x| !x.is_zero())?;
        let inv = v[piv].recip();
        Some((piv, v.into_iter().map(|x| x * &inv).collect()))
    }

    fn sync_exact(&mut self) {
        while self.exact_built < self.basis.len() {
            let v = self.basis[self.exact_built].clone();
            if let Some(r) = self.reduce_exact(v) {
                self.exact.push(r);
            }
            self.exact_built += 1;
        }
    }

    pub(crate) fn insert(&mut self, x: &[Rat]) {
        let v = self.veronese(x);
        if self.prefilter {
            let m: Option<Vec<u64>> = v.iter().map(to_modp).collect();
            if let Some(m) = m {
                match self.reduce_modp(m) {
                    Some(row) => {
                        self.modp.push(row);
                        self.basis.push(v);
                    }
                    None => self.pending.push(v),
                }
                return;
            }
            self.prefilter = false;
        }
        self.sync_exact();
        if let Some(r) = self.reduce_exact(v.clone()) {
            self.exact.push(r);
            self.basis.push(v);
            self.exact_built = self.basis.len();
        }
    }

    /// Exact confirmation that every pending vector lies in the span. Any that
    /// do not are added and the modular shortcut is switched off.
    fn confirm(&mut self) -> bool {
        self.sync_exact();
        let pending = std::mem::take(&mut self.pending);
        let mut ok = true;
        for v in pending {
            if let Some(r) = self.reduce_exact(v.clone()) {
                self.exact.push(r);
                self.basis.push(v);
                self.exact_built = self.basis.len();
                ok = false;
            }
        }
        if !ok {
            self.prefilter = false;
        }
        ok
    }
}

/// Breadth-first search of Σ^n·u for a point where `f` does not vanish.
/// `act(i, x)` applies generator i; Σ must contain the identity. Stops at the
/// first layer containing a witness, when the orbit's monomial span
/// stabilizes, or after `max_n` layers.
pub fn escape_search<A>(ngens: usize, act: A, u: &[Rat], f: &dyn Equation, max_n: usize, budget: u64) -> Result<Escape>
where
    A: Fn(usize, &[Rat]) -> Vec<Rat> + Sync,
{
    let bound = m_of_dm(u.len() as u64, f.degree() as u64) - BigUint::one();
    let bound_n = bound.to_usize().unwrap_or(usize::MAX);
    let max_n = max_n.min(bound_n);
    let mut tracker = SpanTracker::new(u.len(), f.degree());
    let mut dims = Vec::new();
    let mut result = Escape { n: 0, word: None, point: None, span_dims: Vec::new(), bound, exhaustion: None };
    if !f.eval(u).is_zero() {
        result.word = Some(Vec::new());
        result.point = Some(u.to_vec());
        return Ok(result);
    }
    if let Some(t) = tracker.as_mut() {
        t.insert(u);
        dims.push(t.rank());
    }
    let mut seen: HashSet<Vec<Rat>> = HashSet::new();
    seen.insert(u.to_vec());
    let mut frontier: Vec<(Vec<Rat>, Vec<usize>)> = vec![(u.to_vec(), Vec::new())];
    let mut work = 0u64;
    for n in 1..=max_n {
        work += (frontier.len() * ngens) as u64;
        if work > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let cand: Vec<Vec<(Vec<Rat>, Vec<usize>)>> = frontier
            .par_iter()
            .map(|(x, w)| {
                (0..ngens)
                    .map(|i| {
                        let mut word = Vec::with_capacity(w.len() + 1);
                        word.push(i);
                        word.extend_from_slice(w);
                        (act(i, x), word)
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (x, w) in cand.into_iter().flatten() {
            if !seen.contains(&x) {
                seen.insert(x.clone());
                next.push((x, w));
            }
        }
        let hits: Vec<bool> = next.par_iter().map(|(x, _)| !f.eval(x).is_zero()).collect();
        if let Some(i) = hits.iter().position(|&h| h) {
            let (x, w) = next.swap_remove(i);
            result.n = n;
            result.word = Some(w);
            result.point = Some(x);
            result.span_dims = dims;
            return Ok(result);
        }
        result.n = n;
        if next.is_empty() {
            result.exhaustion = Some(Exhaustion::OrbitClosed);
            result.span_dims = dims;
            return Ok(result);
        }
        if let Some(t) = tracker.as_mut() {
            let before = t.rank();
            for (x, _) in &next {
                t.insert(x);
            }
            if t.rank() == before && t.confirm() {
                dims.push(t.rank());
                result.exhaustion = Some(Exhaustion::SpanStabilized);
                result.span_dims = dims;
                return Ok(result);
            }
            dims.push(t.rank());
        }
        frontier = next;
    }
    result.span_dims = dims;
    result.exhaustion = Some(if max_n >= bound_n { Exhaustion::BoundReached } else { Exhaustion::CapReached });
    Ok(result)
}

/// Escape of f along the orbit of u under Σ (matrices acting on column
/// vectors). Σ must contain the identity.
pub fn escape_orbit(sigma: &[Mat], u: &[Rat], f: &dyn Equation, budget: u64) -> Result<Escape> {
    if !sigma.iter().any(|m| m.is_identity()) {
        return Err(Error::InvalidInput("the acting set must contain the identity".into()));
    }
    if f.nvars() != u.len() || sigma.iter().any(|m| m.cols() != u.len()) {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    escape_search(sigma.len(), |i, x| sigma[i].apply(x), u, f, usize::MAX, budget)
}

/// Left multiplication of flattened d×d matrices.
fn left_mul(g: &Mat, x: &[Rat]) -> Vec<Rat> {
    let d = g.rows();
    g.mul(&Mat::new(d, d, x.to_vec())).entries().to_vec()
}

#[derive(Clone, Debug)]
pub struct VarietyEscape {
    /// Least k with S^k ⊄ V.
    pub k: usize,
    /// Word in the generators (indices into S) of an element outside V.
    pub word: Vec<usize>,
    pub element: Mat,
    /// M(d², deg V) − 1.
    pub binomial_bound: BigUint,
    /// deg(V)^(d²), the other published form of the bound.
    pub power_bound: BigUint,
    pub span_dims: Vec<usize>,
}

/// Least k such that S^k is not contained in the zero set of V, by the orbit
/// of the identity under {1} ∪ S acting by left multiplication.
pub fn escape_variety(s: &GenSet, v: &MultiPoly, budget: u64) -> Result<VarietyEscape> {
    let d = s.dim();
    if v.nvars() != d * d {
        return Err(Error::InvalidInput(format!("equation must have {} variables", d * d)));
    }
    let mut sigma = vec![Mat::identity(d)];
    sigma.extend(s.elements().iter().cloned());
    let u = Mat::identity(d).entries().to_vec();
    let e = escape_search(sigma.len(), |i, x| left_mul(&sigma[i], x), &u, v, usize::MAX, budget)?;
    let power_bound = num_traits::pow(BigUint::from(v.degree()), d * d);
    match e.word {
        Some(w) => {
            let word: Vec<usize> = w.iter().filter(|&&i| i > 0).map(|i| i - 1).collect();
            let element = s.eval_word(&word)?;
            Ok(VarietyEscape { k: e.n, word, element, binomial_bound: e.bound, power_bound, span_dims: e.span_dims })
        }
        None => Err(Error::NotFound(format!("the generated group lies in the variety ({:?})", e.exhaustion))),
    }
}

#[derive(Clone, Debug)]
pub struct CosetEscape {
    pub k: usize,
    /// Per test: the escaping element as a product of elements of S^k S^-k.
    pub witnesses: Vec<Mat>,
}

/// S^k·S^-k = {a·b⁻¹ : a, b ∈ S^k}.
pub fn coset_set(s: &GenSet, k: usize, budget: u64) -> Result<Vec<Mat>> {
    let sk = s.product_set(k, budget)?;
    let invs: Vec<Mat> = sk
        .iter()
        .map(|b| b.inverse().ok_or_else(|| Error::InvalidInput("generator is singular".into())))
        .collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in &sk {
        for bi in &invs {
            let mut m = a.mul(bi);
            m.set_word(None);
            if seen.insert(m.clone()) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// Least k ≤ k_max such that every test equation is violated by some product
/// of elements of S^k·S^-k. A falsification harness: it does not decide
/// Zariski density.
pub fn coset_escape_search(s: &GenSet, tests: &[MultiPoly], k_max: usize, budget: u64) -> Result<CosetEscape> {
    let d = s.dim();
    let u = Mat::identity(d).entries().to_vec();
    for k in 1..=k_max {
        let mut sigma = vec![Mat::identity(d)];
        sigma.extend(coset_set(s, k, budget)?.into_iter().filter(|m| !m.is_identity()));
        let mut witnesses = Vec::new();
        for f in tests {
            let e = match escape_search(sigma.len(), |i, x| left_mul(&sigma[i], x), &u, f, usize::MAX, budget) {
                Ok(e) => e,
                Err(Error::BudgetExceeded(_)) => break,
                Err(e) => return Err(e),
            };
            match e.point {
                Some(p) if e.word.is_some() => witnesses.push(Mat::new(d, d, p)),
                _ => break,
            }
        }
        if witnesses.len() == tests.len() {
            return Ok(CosetEscape { k, witnesses });
        }
    }
    Err(Error::Inconclusive(k_max as u64))
}

/// Whether every subfamily I has codim ∩I ≥ min(d, |I|), and the members are
/// distinct and nontrivial.
pub fn is_weak_general_position(family: &[Subspace]) -> bool {
    let Some(first) = family.first() else { return true };
    let d = first.ambient();
    if family.iter().any(|w| w.is_zero() || w.is_full()) {
        return false;
    }
    for i in 0..family.len() {
        for j in 0..i {
            if family[i] == family[j] {
                return false;
            }
        }
    }
    // depth-first over subsets; a zero intersection settles all supersets
    fn rec(fam: &[Subspace], start: usize, cur: &Subspace, size: usize, d: usize) -> bool {
        for i in start..fam.len() {
            let next = cur.intersect(&fam[i]);
            let s = size + 1;
            if d - next.dim() < d.min(s) {
                return false;
            }
            if !next.is_zero() && !rec(fam, i + 1, &next, s, d) {
                return false;
            }
        }
        true
    }
    rec(family, 0, &Subspace::full(d), 0, d)
}

#[derive(Clone, Debug)]
pub struct PositionWitness {
    /// g_1, ..., g_r with their words in S (g_1 is the empty word).
    pub conjugators: Vec<Mat>,
    /// Degree of the escape equation used at each step (step 1 needs none).
    pub step_degrees: Vec<u32>,
    /// Per step, 2·Σ_{1≤j<d} C(j_prev, j): the count of possible nonzero
    /// intersections of both families.
    pub degree_caps: Vec<BigUint>,
}

/// Distinct nonzero intersections ∩_{i∈I} g_i H over nonempty I.
fn nonzero_intersections(translates: &[Subspace]) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = Vec::new();
    fn rec(t: &[Subspace], start: usize, cur: Option<&Subspace>, out: &mut Vec<Subspace>) {
        for i in start..t.len() {
            let next = match cur {
                None => t[i].clone(),
                Some(c) => c.intersect(&t[i]),
            };
            if next.is_zero() {
                continue;
            }
            if !out.contains(&next) {
                out.push(next.clone());
            }
            rec(t, i + 1, Some(&next), out);
        }
    }
    rec(translates, 0, None, &mut out);
    out
}

/// A linear form vanishing on H, as a generic combination of a basis of its
/// annihilator.
fn form_for(h: &Subspace) -> Vec<Rat> {
    let ann = h.annihilator();
    let d = h.ambient();
    let mut f = vec![Rat::zero(); d];
    for (k, a) in ann.basis().iter().enumerate() {
        let c = Rat::from_integer((k as i64 + 1).into());
        for (x, y) in f.iter_mut().zip(a) {
            *x += &c * y;
        }
    }
    f
}

/// Conjugators g_1 = 1, g_2, ..., g_r ∈ ({1} ∪ S)^n, n ≤ m_cap, such that
/// {g_i H⁺} and {g_i H⁻} are each r distinct subspaces in weak general
/// position. Each step escapes the equation Π f^ε(h·v_I^ε) over h = g⁻¹.
pub fn weak_general_position(
    s: &GenSet,
    hplus: &Subspace,
    hminus: &Subspace,
    r: usize,
    m_cap: usize,
    budget: u64,
) -> Result<PositionWitness> {
    let d = s.dim();
    for h in [hplus, hminus] {
        if h.ambient() != d || h.is_zero() || h.is_full() {
            return Err(Error::InvalidInput("H+ and H- must be nontrivial subspaces".into()));
        }
    }
    if r == 0 {
        return Err(Error::InvalidInput("r must be at least 1".into()));
    }
    let mut inv_sigma = vec![Mat::identity(d)];
    for g in s.elements() {
        inv_sigma.push(g.inverse().ok_or_else(|| Error::InvalidInput("generator is singular".into()))?);
    }
    let fplus = form_for(hplus);
    let fminus = form_for(hminus);
    let u = Mat::identity(d).entries().to_vec();
    let mut conj = vec![Mat::identity(d).with_word(Vec::new())];
    let mut step_degrees = Vec::new();
    let mut degree_caps = Vec::new();
    while conj.len() < r {
        let mut factors = Vec::new();
        for (h, f) in [(hplus, &fplus), (hminus, &fminus)] {
            let translates: Vec<Subspace> = conj.iter().map(|g| h.image(g)).collect();
            for w in nonzero_intersections(&translates) {
                let v = &w.basis()[0];
                // coefficient of h_ab in f(h·v) is f_a·v_b
                let lin: Vec<Rat> = (0..d * d).map(|k| &f[k / d] * &v[k % d]).collect();
                factors.push(lin);
            }
        }
        let eq = LinearProduct { nvars: d * d, factors };
        step_degrees.push(Equation::degree(&eq));
        let j = conj.len() as u64;
        let cap: BigUint = (1..d as u64).map(|k| binomial(j, k)).sum::<BigUint>() * 2u32;
        degree_caps.push(cap);
        let e = escape_search(inv_sigma.len(), |i, x| left_mul(&inv_sigma[i], x), &u, &eq, m_cap, budget)?;
        let Some(w) = e.word else {
            return Err(Error::PositionUnreachable(m_cap as u64));
        };
        // h = σ⁻¹_{w0}⋯σ⁻¹_{wk}, so g = h⁻¹ = σ_{wk}⋯σ_{w0}
        let word: Vec<usize> = w.iter().rev().filter(|&&i| i > 0).map(|i| i - 1).collect();
        conj.push(s.eval_word(&word)?);
    }
    let plus: Vec<Subspace> = conj.iter().map(|g| hplus.image(g)).collect();
    let minus: Vec<Subspace> = conj.iter().map(|g| hminus.image(g)).collect();
    if !is_weak_general_position(&plus) || !is_weak_general_position(&minus) {
        return Err(Error::NotInPosition("constructed families failed the exact check".into()));
    }
    Ok(PositionWitness { conjugators: conj, step_degrees, degree_caps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn dimension_bound() {
        assert_eq!(m_of_dm(2, 3), BigUint::from(10u32));
        assert_eq!(m_of_dm(1, 1), BigUint::from(2u32));
        assert_eq!(m_of_dm(3, 3), BigUint::from(20u32));
    }

    #[test]
    fn orbit_escape() {
        let sigma = vec![Mat::identity(2), Mat::from_ints(&[&[1, 1], &[0, 1]])];
        let f = MultiPoly::var(2, 0);
        let e = escape_orbit(&sigma, &[int(0), int(1)], &f, 1000).unwrap();
        assert_eq!((e.n, e.word.clone()), (1, Some(vec![1])));
        let e = escape_orbit(&sigma, &[int(1), int(0)], &f, 1000).unwrap();
        assert_eq!(e.n, 0);
        // x2 vanishes on the invariant line span(e1)
        let g = MultiPoly::var(2, 1);
        let e = escape_orbit(&sigma, &[int(1), int(0)], &g, 1000).unwrap();
        assert!(!e.found());
        assert!(e.exhaustion.is_some());
    }

    #[test]
    fn variety_escape() {
        let s = GenSet::new(vec![Mat::from_ints(&[&[1, 1], &[0, 1]]), Mat::from_ints(&[&[1, 0], &[1, 1]])]).unwrap();
        let e = escape_variety(&s, &MultiPoly::entry(2, 1, 0), 10_000).unwrap();
        assert_eq!(e.k, 1);
        assert_eq!(e.word, vec![1]);
        let upper = GenSet::new(vec![Mat::from_ints(&[&[1, 1], &[0, 1]]), Mat::from_ints(&[&[2, 0], &[0, 1]])]).unwrap();
        assert!(matches!(escape_variety(&upper, &MultiPoly::entry(2, 1, 0), 100_000), Err(Error::NotFound(_))));
    }

    #[test]
    fn coset_search() {
        let s = GenSet::new(vec![Mat::diag(&[int(2), int(1)]), Mat::from_ints(&[&[1, 1], &[0, 1]]), Mat::from_ints(&[&[1, 0], &[1, 1]])]).unwrap();
        let tests = vec![MultiPoly::entry(2, 0, 1), MultiPoly::entry(2, 1, 0)];
        assert_eq!(coset_escape_search(&s, &tests, 3, 1_000_000).unwrap().k, 1);
        let zero = vec![MultiPoly::zero(4)];
        assert!(matches!(coset_escape_search(&s, &zero, 2, 1_000_000), Err(Error::Inconclusive(2))));
    }

    #[test]
    fn general_position() {
        let a = Mat::from_ints(&[&[1, 2], &[0, 1]]);
        let b = Mat::from_ints(&[&[1, 0], &[2, 1]]);
        let s = GenSet::new(vec![a.clone(), a.inverse().unwrap(), b.clone(), b.inverse().unwrap()]).unwrap();
        let hp = Subspace::coordinate(2, &[0]);
        let hm = Subspace::coordinate(2, &[1]);
        let w = weak_general_position(&s, &hp, &hm, 3, 6, 1_000_000).unwrap();
        assert_eq!(w.conjugators.len(), 3);
        assert!(w.conjugators[0].is_identity());
        let one = weak_general_position(&s, &hp, &hm, 1, 6, 1_000_000).unwrap();
        assert_eq!(one.conjugators.len(), 1);
        let upper = GenSet::new(vec![a.clone(), a.inverse().unwrap()]).unwrap();
        assert!(matches!(
            weak_general_position(&upper, &hp, &hm, 2, 6, 1_000_000),
            Err(Error::PositionUnreachable(6))
        ));
    }
}
