//! Monte-Carlo experiments on products of independent random matrices:
//! hitting frequencies of subvarieties, atom sizes, the decoupling step, and
//! containment of product sets in low-degree varieties.
//!
//! Every trial draws from its own ChaCha20 stream (seed, trial index), so
//! results do not depend on scheduling.

use crate::error::{Error, Result};
use crate::escape::SpanTracker;
use crate::genset::GenSet;
use crate::matrix::Mat;
use crate::multipoly::MultiPoly;
use crate::rat::Rat;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// A finitely supported distribution on invertible matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepDistribution {
    pub support: Vec<Mat>,
    pub probs: Vec<Rat>,
    /// Optional user-supplied lower bound on the non-concentration constant of
    /// this step; never computed here.
    pub beta_hint: Option<Rat>,
    weights: Vec<u64>,
    total: u64,
}

impl StepDistribution {
    pub fn new(support: Vec<Mat>, probs: Vec<Rat>, beta_hint: Option<Rat>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(Error::InvalidInput("need one probability per support element".into()));
        }
        let d = support[0].rows();
        if support.iter().any(|m| !m.is_square() || m.rows() != d || m.det().is_zero()) {
            return Err(Error::InvalidInput("support must be invertible matrices of one size".into()));
        }
        if probs.iter().any(|p| p.is_negative()) || probs.iter().sum::<Rat>() != Rat::one() {
            return Err(Error::InvalidInput("probabilities must be nonnegative and sum to 1".into()));
        }
        if let Some(b) = &beta_hint {
            if b.is_negative() || b > &Rat::one() {
                return Err(Error::InvalidInput("beta hint must lie in [0, 1]".into()));
            }
        }
        let den = probs.iter().fold(num_bigint::BigInt::one(), |l, p| l.lcm(p.denom()));
        let total = den.to_u64().filter(|&t| t < 1 << 62).ok_or_else(|| {
            Error::InvalidInput("probability denominators are too large to sample exactly".into())
        })?;
        let weights = probs
            .iter()
            .map(|p| (p * Rat::from_integer(den.clone())).to_integer().to_u64().unwrap())
            .collect();
        Ok(StepDistribution { support, probs, beta_hint, weights, total })
    }

    pub fn uniform(support: Vec<Mat>) -> Result<Self> {
        let k = support.len() as i64;
        StepDistribution::new(support, vec![Rat::new(1.into(), k.into()); k as usize], None)
    }

    pub fn with_beta(mut self, b: Rat) -> Result<Self> {
        StepDistribution::new(std::mem::take(&mut self.support), self.probs, Some(b))
    }

    pub fn dim(&self) -> usize {
        self.support[0].rows()
    }

    fn sample<'a>(&'a self, rng: &mut ChaCha20Rng) -> &'a Mat {
        let mut u = rng.gen_range(0..self.total);
        for (m, &w) in self.support.iter().zip(&self.weights) {
            if u < w {
                return m;
            }
            u -= w;
        }
        unreachable!("weights sum to the total")
    }
}

fn stream(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(trial);
    r
}

/// Steps 1..=n taken cyclically from a template.
fn step_at(template: &[StepDistribution], i: usize) -> &StepDistribution {
    &template[i % template.len()]
}

/// X_1⋯X_n for independent X_i ~ steps[i], from stream (seed, 0).
pub fn sample_product(steps: &[StepDistribution], seed: u64) -> Result<Mat> {
    sample_product_trial(steps, seed, 0)
}

pub fn sample_product_trial(steps: &[StepDistribution], seed: u64, trial: u64) -> Result<Mat> {
    let Some(first) = steps.first() else {
        return Err(Error::InvalidInput("no steps".into()));
    };
    let mut rng = stream(seed, trial);
    let mut p = Mat::identity(first.dim());
    for s in steps {
        p = p.mul(s.sample(&mut rng));
    }
    Ok(p)
}

/// Common zero set of polynomials in the matrix entries.
pub fn in_variety(m: &Mat, v: &[MultiPoly]) -> bool {
    v.iter().all(|f| f.eval_matrix(m).is_zero())
}

/// Wilson score interval for `hits` successes in `n` trials.
pub fn wilson(hits: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = z * z;
    let den = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / den;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / den;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub n: usize,
    pub hits: u64,
    pub trials: u64,
    pub freq: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

impl Estimate {
    pub fn new(n: usize, hits: u64, trials: u64) -> Self {
        let (lo, hi) = wilson(hits, trials, 1.96);
        Estimate { n, hits, trials, freq: hits as f64 / trials as f64, wilson_lo: lo, wilson_hi: hi }
    }
}

/// Per-step exponential decay rate −slope of log(freq) against n, with a 95%
/// interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub points: usize,
}

/// Weighted least squares of log(freq) on n over estimates with hits > 0;
/// weights are the inverse delta-method variances hits/(1 − freq).
pub fn fit_decay(est: &[Estimate]) -> Option<RateFit> {
    let pts: Vec<(f64, f64, f64)> = est
        .iter()
        .filter(|e| e.hits > 0 && e.hits < e.trials)
        .map(|e| (e.n as f64, e.freq.ln(), e.hits as f64 / (1.0 - e.freq)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let xm = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let ym = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - xm).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = pts.iter().map(|p| p.2 * (p.0 - xm) * (p.1 - ym)).sum::<f64>() / sxx;
    let se = (1.0 / sxx).sqrt();
    Some(RateFit { rate: -slope, ci_lo: -slope - 1.96 * se, ci_hi: -slope + 1.96 * se, points: pts.len() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub trials: u64,
    pub n_values: Vec<usize>,
    pub estimates: Vec<Estimate>,
    pub fitted_rate: Option<RateFit>,
    /// C·exp(−c·Σ_{i≤n} β_i) at each n when hints and constants are given.
    pub bound_curve: Option<Vec<f64>>,
    pub note: String,
}

const NOTE: &str = "rates are fitted empirically; the theoretical constants are not numerically known and are not used";

/// Constants for the overlay curve C·exp(−c·Σβ).
#[derive(Clone, Debug)]
pub struct Overlay {
    pub c_v: f64,
    pub c: f64,
}

fn overlay(template: &[StepDistribution], n_values: &[usize], ov: Option<&Overlay>) -> Option<Vec<f64>> {
    let ov = ov?;
    let mut out = Vec::new();
    for &n in n_values {
        let mut s = 0.0;
        for i in 0..n {
            s += crate::rat::to_f64(step_at(template, i).beta_hint.as_ref()?);
        }
        out.push(ov.c_v * (-ov.c * s).exp());
    }
    Some(out)
}

fn check_n_values(template: &[StepDistribution], n_values: &[usize], trials: u64) -> Result<usize> {
    if template.is_empty() || n_values.is_empty() || trials == 0 {
        return Err(Error::InvalidInput("need steps, n values and trials".into()));
    }
    let d = template[0].dim();
    if template.iter().any(|s| s.dim() != d) {
        return Err(Error::InvalidInput("steps have different sizes".into()));
    }
    Ok(*n_values.iter().max().unwrap())
}

/// Estimates P(X_1⋯X_n ∈ V) for each n (steps cycle through the template).
/// One running product per trial serves every n.
pub fn anticoncentration_experiment(
    template: &[StepDistribution],
    v: &[MultiPoly],
    n_values: &[usize],
    trials: u64,
    seed: u64,
    ov: Option<&Overlay>,
) -> Result<ExperimentReport> {
    let nmax = check_n_values(template, n_values, trials)?;
    let d = template[0].dim();
    if v.iter().any(|f| f.nvars() != d * d) {
        return Err(Error::InvalidInput(format!("equations must have {} variables", d * d)));
    }
    let hits = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n_values.len()],
            |mut acc, t| {
                let mut rng = stream(seed, t);
                let mut p = Mat::identity(d);
                for i in 0..nmax {
                    p = p.mul(step_at(template, i).sample(&mut rng));
                    for (k, &n) in n_values.iter().enumerate() {
                        if n == i + 1 && in_variety(&p, v) {
                            acc[k] += 1;
                        }
                    }
                }
                for (k, &n) in n_values.iter().enumerate() {
                    if n == 0 && in_variety(&Mat::identity(d), v) {
                        acc[k] += 1;
                    }
                }
                acc
            },
        )
        .reduce(|| vec![0u64; n_values.len()], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let estimates: Vec<Estimate> = n_values.iter().zip(hits).map(|(&n, h)| Estimate::new(n, h, trials)).collect();
    Ok(ExperimentReport {
        seed,
        trials,
        n_values: n_values.to_vec(),
        fitted_rate: fit_decay(&estimates),
        bound_curve: overlay(template, n_values, ov),
        estimates,
        note: NOTE.into(),
    })
}

/// Estimates max_g P(X_1⋯X_n = g) by hashing exact products.
pub fn atom_experiment(template: &[StepDistribution], n_values: &[usize], trials: u64, seed: u64, ov: Option<&Overlay>) -> Result<ExperimentReport> {
    let nmax = check_n_values(template, n_values, trials)?;
    let d = template[0].dim();
    let per_trial: Vec<Vec<Mat>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, t);
            let mut p = Mat::identity(d);
            let mut out = Vec::with_capacity(n_values.len());
            if n_values.contains(&0) {
                out.push((0, p.clone()));
            }
            for i in 0..nmax {
                p = p.mul(step_at(template, i).sample(&mut rng));
                if n_values.contains(&(i + 1)) {
                    out.push((i + 1, p.clone()));
                }
            }
            n_values.iter().map(|n| out.iter().find(|(k, _)| k == n).unwrap().1.clone()).collect()
        })
        .collect();
    let mut estimates = Vec::new();
    for (k, &n) in n_values.iter().enumerate() {
        let mut counts: HashMap<&Mat, u64> = HashMap::new();
        for row in &per_trial {
            *counts.entry(&row[k]).or_default() += 1;
        }
        estimates.push(Estimate::new(n, counts.values().copied().max().unwrap_or(0), trials));
    }
    Ok(ExperimentReport {
        seed,
        trials,
        n_values: n_values.to_vec(),
        fitted_rate: fit_decay(&estimates),
        bound_curve: overlay(template, n_values, ov),
        estimates,
        note: format!("{NOTE}; the largest empirical atom is biased upward at small counts"),
    })
}

/// Split index: the first r with Σ_{i≤r} β_i ≥ ½ Σ β_i when every step has a
/// hint, else ⌈n/2⌉.
pub fn split_index(steps: &[StepDistribution]) -> usize {
    let n = steps.len();
    let hints: Option<Vec<Rat>> = steps.iter().map(|s| s.beta_hint.clone()).collect();
    if let Some(h) = hints {
        let total: Rat = h.iter().sum();
        if total.is_positive() {
            let mut acc = Rat::zero();
            for (i, b) in h.iter().enumerate() {
                acc += b;
                if &acc * Rat::from_integer(2.into()) >= total {
                    return i + 1;
                }
            }
        }
    }
    n.div_ceil(2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecouplingReport {
    pub n: usize,
    pub split: usize,
    pub trials: u64,
    /// P(XY ∈ V).
    pub hit: Estimate,
    /// P(XY ∈ V and XY' ∈ V).
    pub pair: Estimate,
    /// P(Y⁻¹Y' ∈ H_V).
    pub stabilizer: Estimate,
    /// P(XY ∈ V, XY' ∈ V, Y⁻¹Y' ∉ H_V), an estimate of the lower-dimensional
    /// term.
    pub remainder: Estimate,
    /// hit² ≤ pair within the intervals.
    pub cauchy_schwarz_holds: bool,
    /// hit² ≤ stabilizer + remainder within the intervals.
    pub holds: bool,
}

/// Empirical check of P(XY∈V)² ≤ P(Y⁻¹Y'∈H_V) + P(X ∈ VY⁻¹ ∩ VY'⁻¹, VY⁻¹ ≠ VY'⁻¹)
/// with X = X_1⋯X_r, Y = X_{r+1}⋯X_n and Y' an independent copy of Y. H_V
/// is given by its equations.
pub fn decoupling_check(
    steps: &[StepDistribution],
    v: &[MultiPoly],
    h_v: &[MultiPoly],
    split: Option<usize>,
    trials: u64,
    seed: u64,
) -> Result<DecouplingReport> {
    let n = steps.len();
    if n == 0 || trials == 0 {
        return Err(Error::InvalidInput("need steps and trials".into()));
    }
    let r = split.unwrap_or_else(|| split_index(steps));
    if r == 0 || r > n {
        return Err(Error::InvalidInput(format!("split index must be in 1..={n}")));
    }
    let d = steps[0].dim();
    let (a, b, c, e) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, t);
            let mut x = Mat::identity(d);
            for s in &steps[..r] {
                x = x.mul(s.sample(&mut rng));
            }
            let mut y = Mat::identity(d);
            let mut y2 = Mat::identity(d);
            for s in &steps[r..] {
                y = y.mul(s.sample(&mut rng));
            }
            for s in &steps[r..] {
                y2 = y2.mul(s.sample(&mut rng));
            }
            let h1 = in_variety(&x.mul(&y), v);
            let h2 = in_variety(&x.mul(&y2), v);
            let stab = in_variety(&y.inverse().unwrap().mul(&y2), h_v);
            (h1 as u64, (h1 && h2) as u64, stab as u64, (h1 && h2 && !stab) as u64)
        })
        .reduce(|| (0, 0, 0, 0), |p, q| (p.0 + q.0, p.1 + q.1, p.2 + q.2, p.3 + q.3));
    let hit = Estimate::new(n, a, trials);
    let pair = Estimate::new(n, b, trials);
    let stabilizer = Estimate::new(n, c, trials);
    let remainder = Estimate::new(n, e, trials);
    let lhs = hit.wilson_lo * hit.wilson_lo;
    Ok(DecouplingReport {
        n,
        split: r,
        trials,
        cauchy_schwarz_holds: lhs <= pair.wilson_hi,
        holds: lhs <= stabilizer.wilson_hi + remainder.wilson_hi,
        hit,
        pair,
        stabilizer,
        remainder,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentPoint {
    pub degree: u32,
    /// Largest n with S^j inside the variety for every j = 1..=n (0 when S
    /// itself is not contained).
    pub n: usize,
    pub log_one_plus_degree: f64,
    /// True when enumeration stopped at the cap with S^n still contained.
    pub capped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub points: Vec<ContainmentPoint>,
    /// Least-squares slope of n against log(1 + degree), when defined.
    pub slope: Option<f64>,
}

fn slope_of(points: &[ContainmentPoint]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let xm = points.iter().map(|p| p.log_one_plus_degree).sum::<f64>() / k;
    let ym = points.iter().map(|p| p.n as f64).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.log_one_plus_degree - xm).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(points.iter().map(|p| (p.log_one_plus_degree - xm) * (p.n as f64 - ym)).sum::<f64>() / sxx)
}

/// For each given variety, the containment length of S^1, S^2, ... by exact
/// enumeration up to `n_cap`.
pub fn log_escape_experiment(s: &GenSet, family: &[MultiPoly], n_cap: usize, budget: u64) -> Result<ContainmentReport> {
    let d = s.dim();
    if family.iter().any(|f| f.nvars() != d * d) {
        return Err(Error::InvalidInput(format!("equations must have {} variables", d * d)));
    }
    let layers = if family.is_empty() { Vec::new() } else { s.words_by_length(n_cap, budget)? };
    let points: Vec<ContainmentPoint> = family
        .iter()
        .map(|f| {
            let n = layers.iter().take_while(|l| l.iter().all(|m| f.eval_matrix(m).is_zero())).count();
            let deg = f.degree();
            ContainmentPoint { degree: deg, n, log_one_plus_degree: (1.0 + deg as f64).ln(), capped: n == layers.len() }
        })
        .collect();
    Ok(ContainmentReport { slope: slope_of(&points), points })
}

/// For each degree N, the largest n ≤ n_cap such that some polynomial of
/// degree ≤ N vanishes on S^1 ∪ ... ∪ S^n without vanishing on the whole
/// group, found by ranks of monomial evaluation vectors. The group's own
/// equations are detected as the kernel on S^1 ∪ ... ∪ S^L once the rank
/// stops growing.
pub fn extremal_containment(s: &GenSet, degrees: &[u32], n_cap: usize, budget: u64) -> Result<ContainmentReport> {
    let d = s.dim();
    let mut points = Vec::new();
    for &deg in degrees {
        let mut tr = SpanTracker::with_cap(d * d, deg, 5000)
            .ok_or_else(|| Error::InvalidInput(format!("degree {deg} has too many monomials")))?;
        let mut ranks = Vec::new();
        let mut layer = vec![Mat::identity(d)];
        let mut seen = std::collections::HashSet::new();
        let mut work = 0u64;
        // once a layer adds nothing the degree-N kernel is invariant under
        // right multiplication by S, so the rank is final
        loop {
            work += (layer.len() * s.len()) as u64;
            if work > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let mut next = Vec::new();
            for x in &layer {
                for g in s.elements() {
                    let mut m = x.mul(g);
                    m.set_word(None);
                    if seen.insert(m.clone()) {
                        next.push(m);
                    }
                }
            }
            let before = tr.exact_rank();
            for m in &next {
                tr.insert(m.entries());
            }
            let after = tr.exact_rank();
            ranks.push(after);
            layer = next;
            if (after == before && ranks.len() > 1) || after == tr.monomial_count() || layer.is_empty() {
                break;
            }
        }
        let group_rank = *ranks.last().unwrap();
        let n = (0..n_cap).take_while(|&k| ranks.get(k).is_some_and(|&r| r < group_rank)).count();
        points.push(ContainmentPoint {
            degree: deg,
            n,
            log_one_plus_degree: (1.0 + deg as f64).ln(),
            capped: n == n_cap,
        });
    }
    Ok(ContainmentReport { slope: slope_of(&points), points })
}
