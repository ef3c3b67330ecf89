//! Norm estimates for averaging operators of the action on the orbit of a
//! projective point: lower bounds from exact return probabilities, upper
//! bounds from a Schur test with radial weights.

use crate::error::{Error, Result};
use crate::genset::GenSet;
use crate::magnitude::{NormValue, Radical};
use crate::matrix::Mat;
use crate::metrics::ProjPoint;
use crate::rat::{int, Rat};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// A finitely supported probability measure on words in a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordMeasure {
    pub words: Vec<Vec<usize>>,
    pub probs: Vec<Rat>,
}

impl WordMeasure {
    pub fn new(words: Vec<Vec<usize>>, probs: Vec<Rat>) -> Result<Self> {
        if words.is_empty() || words.len() != probs.len() {
            return Err(Error::InvalidInput("measure needs one probability per word".into()));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidInput("probabilities must be nonnegative".into()));
        }
        if probs.iter().sum::<Rat>() != Rat::one() {
            return Err(Error::InvalidInput("probabilities must sum to 1".into()));
        }
        Ok(WordMeasure { words, probs })
    }

    pub fn uniform(words: Vec<Vec<usize>>) -> Result<Self> {
        let k = words.len() as i64;
        WordMeasure::new(words, vec![Rat::new(1.into(), k.into()); k as usize])
    }

    /// Uniform on the single-letter words of a generating set.
    pub fn uniform_on_generators(s: &GenSet) -> Self {
        WordMeasure::uniform((0..s.len()).map(|i| vec![i]).collect()).expect("nonempty set")
    }
}

/// The action of a generating set on the orbit of a base point. Orbit points
/// get indices in discovery order; indices never change as the orbit grows.
#[derive(Clone, Debug)]
pub struct QrAction {
    generators: GenSet,
    points: Vec<ProjPoint>,
    index: HashMap<ProjPoint, usize>,
}

impl QrAction {
    pub fn new(generators: GenSet, base: ProjPoint) -> Result<Self> {
        if base.ambient() != generators.dim() {
            return Err(Error::InvalidInput("base point dimension does not match".into()));
        }
        if !generators.all_invertible() {
            return Err(Error::InvalidInput("generators must be invertible".into()));
        }
        let mut index = HashMap::new();
        index.insert(base.clone(), 0);
        Ok(QrAction { generators, points: vec![base], index })
    }

    pub fn generators(&self) -> &GenSet {
        &self.generators
    }

    pub fn base(&self) -> &ProjPoint {
        &self.points[0]
    }

    pub fn orbit_len(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> &ProjPoint {
        &self.points[i]
    }

    fn intern(&mut self, p: ProjPoint) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        let i = self.points.len();
        self.index.insert(p.clone(), i);
        self.points.push(p);
        i
    }
}

#[derive(Clone, Debug)]
pub struct QrBounds {
    pub lower: NormValue,
    pub upper: NormValue,
    /// Exact return probabilities ⟨(μ̌∗μ)^k δ, δ⟩ of the walk kept inside the
    /// ball, k = 1..=2n.
    pub return_probs: Vec<Rat>,
    /// The k-th entry is return_probs[k]^(1/2k); nondecreasing in k.
    pub lower_by_step: Vec<NormValue>,
    pub ball_size: usize,
    /// Weight ratio s of the Schur test, h = s^dist.
    pub schur_weight: Rat,
    /// Row and column Schur constants; upper = √(row·col).
    pub schur_row: Rat,
    pub schur_col: Rat,
    /// Whether every neighbourhood profile on the outer shell of the ball also
    /// occurs strictly inside it. The Schur bound is rigorous for the operator
    /// compressed to the ball; it covers the whole orbit when the profiles
    /// beyond the ball repeat those inside.
    pub shell_profiles_recur: bool,
}

/// Counts of each distance change (−1, 0, +1) weighted by the measure.
type Profile = [Rat; 3];

fn profile_ratio(p: &Profile, s: f64) -> f64 {
    crate::rat::to_f64(&p[0]) / s + crate::rat::to_f64(&p[1]) + crate::rat::to_f64(&p[2]) * s
}

fn profile_ratio_exact(p: &Profile, s: &Rat) -> Rat {
    &p[0] / s + &p[1] + &p[2] * s
}

/// Brackets ‖π(μ)‖ on ℓ² of the orbit. The ball is taken in the graph whose
/// steps are the support elements of μ and their inverses; `n` sets the
/// number 2n of (μ̌∗μ)-steps in the return probability.
pub fn estimate_qr_norm(action: &mut QrAction, mu: &WordMeasure, radius: usize, n: usize, budget: u64, tol: &Rat) -> Result<QrBounds> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let support: Vec<Mat> = mu.words.iter().map(|w| action.generators.eval_word(w)).collect::<Result<_>>()?;
    let inverses: Vec<Mat> = support.iter().map(|m| m.inverse().expect("generators are invertible")).collect();
    let nsup = support.len();

    // ball by breadth-first search; fwd[x][w] = w·x, bwd[x][w] = w⁻¹·x
    let mut dist: Vec<usize> = vec![0];
    let mut ball: Vec<usize> = vec![0];
    let mut pos: HashMap<usize, usize> = HashMap::from([(0, 0)]);
    let mut fwd: Vec<Vec<Option<usize>>> = Vec::new();
    let mut bwd: Vec<Vec<Option<usize>>> = Vec::new();
    let mut frontier = vec![0usize];
    let mut work = 0u64;
    for r in 0..=radius {
        let imgs: Vec<(Vec<ProjPoint>, Vec<ProjPoint>)> = frontier
            .par_iter()
            .map(|&b| {
                let x = &action.points[ball[b]];
                (support.iter().map(|m| x.apply(m)).collect(), inverses.iter().map(|m| x.apply(m)).collect())
            })
            .collect();
        work += (frontier.len() * 2 * nsup) as u64;
        if work > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let mut next = Vec::new();
        for (&b, (f, g)) in frontier.iter().zip(imgs) {
            let mut row = |pts: Vec<ProjPoint>, next: &mut Vec<usize>| -> Vec<Option<usize>> {
                pts.into_iter()
                    .map(|p| {
                        let id = action.intern(p);
                        match pos.get(&id) {
                            Some(&q) => Some(q),
                            None if r < radius => {
                                let q = ball.len();
                                ball.push(id);
                                dist.push(r + 1);
                                pos.insert(id, q);
                                next.push(q);
                                Some(q)
                            }
                            None => None,
                        }
                    })
                    .collect()
            };
            let fr = row(f, &mut next);
            let br = row(g, &mut next);
            if fwd.len() <= b {
                fwd.resize(b + 1, Vec::new());
                bwd.resize(b + 1, Vec::new());
            }
            fwd[b] = fr;
            bwd[b] = br;
        }
        frontier = next;
    }
    let size = ball.len();

    // return probabilities with integer weights over a common denominator
    let den = mu.probs.iter().fold(BigUint::one(), |l, p| l.lcm(&p.denom().to_biguint().unwrap()));
    let weights: Vec<BigUint> = mu
        .probs
        .iter()
        .map(|p| (p * Rat::from_integer(den.clone().into())).to_integer().to_biguint().unwrap())
        .collect();
    let mut f: Vec<BigUint> = vec![BigUint::zero(); size];
    f[0] = BigUint::one();
    let mut return_probs = Vec::new();
    let mut lower_by_step = Vec::new();
    let mut scale = BigUint::one();
    let t = tol / int(8);
    for k in 1..=2 * n {
        // push by w, then by w⁻¹, dropping mass that leaves the ball
        let g: Vec<BigUint> = (0..size)
            .into_par_iter()
            .map(|y| {
                let mut acc = BigUint::zero();
                for (w, c) in weights.iter().enumerate() {
                    if let Some(x) = bwd[y][w] {
                        if !f[x].is_zero() {
                            acc += c * &f[x];
                        }
                    }
                }
                acc
            })
            .collect();
        f = (0..size)
            .into_par_iter()
            .map(|x| {
                let mut acc = BigUint::zero();
                for (w, c) in weights.iter().enumerate() {
                    if let Some(y) = fwd[x][w] {
                        if !g[y].is_zero() {
                            acc += c * &g[y];
                        }
                    }
                }
                acc
            })
            .collect();
        scale *= &den * &den;
        let p = Rat::new(f[0].clone().into(), scale.clone().into());
        let lb = if p.is_zero() {
            NormValue::zero()
        } else {
            NormValue::from_radical(Radical::new(p.clone(), 2 * k as u32), &t)
        };
        return_probs.push(p);
        lower_by_step.push(lb);
    }
    let lower = lower_by_step.last().unwrap().clone();

    // Schur test with h = s^dist; neighbours outside the ball sit at radius + 1
    let mut rows: BTreeMap<Profile, bool> = BTreeMap::new();
    let mut cols: BTreeMap<Profile, bool> = BTreeMap::new();
    let zero = || [Rat::zero(), Rat::zero(), Rat::zero()];
    let mut inner: std::collections::BTreeSet<(Profile, Profile)> = Default::default();
    let mut shell: Vec<(Profile, Profile)> = Vec::new();
    for b in 0..size {
        let (mut row, mut col) = (zero(), zero());
        for (w, p) in mu.probs.iter().enumerate() {
            let step = |q: Option<usize>| q.map_or(radius + 1, |q| dist[q]) as i64 - dist[b] as i64;
            row[(step(bwd[b][w]) + 1) as usize] += p;
            col[(step(fwd[b][w]) + 1) as usize] += p;
        }
        if dist[b] == radius && radius > 0 {
            shell.push((row.clone(), col.clone()));
        } else if dist[b] > 0 {
            inner.insert((row.clone(), col.clone()));
        }
        rows.insert(row, true);
        cols.insert(col, true);
    }
    let shell_profiles_recur = radius > 1 && shell.iter().all(|pc| inner.contains(pc));
    let objective = |s: f64| {
        let r = rows.keys().map(|p| profile_ratio(p, s)).fold(0.0, f64::max);
        let c = cols.keys().map(|p| profile_ratio(p, s)).fold(0.0, f64::max);
        r * c
    };
    let (mut a, mut bnd) = (1e-6f64, 1.0f64);
    for _ in 0..200 {
        let m1 = a + (bnd - a) / 3.0;
        let m2 = bnd - (bnd - a) / 3.0;
        if objective(m1) <= objective(m2) {
            bnd = m2;
        } else {
            a = m1;
        }
    }
    let best = (a + bnd) / 2.0;
    let s = Rat::new(((best * (1u64 << 30) as f64).round() as i64).max(1).into(), (1i64 << 30).into());
    let s = if s > Rat::one() { Rat::one() } else { s };
    let exact_max = |m: &BTreeMap<Profile, bool>| {
        m.keys().map(|p| profile_ratio_exact(p, &s)).max().unwrap_or_else(Rat::zero)
    };
    let (schur_row, schur_col) = (exact_max(&rows), exact_max(&cols));
    let upper = NormValue::sqrt_of(&schur_row * &schur_col, &t);
    Ok(QrBounds {
        lower,
        upper,
        return_probs,
        lower_by_step,
        ball_size: size,
        schur_weight: s,
        schur_row,
        schur_col,
        shell_profiles_recur,
    })
}

/// The value 2√(2k−1)/(2k) of the uniform walk on k free generators and
/// their inverses.
pub fn free_group_norm(k: u64, tol: &Rat) -> NormValue {
    let kk = Rat::from_integer((2 * k).into());
    NormValue::sqrt_of(Rat::from_integer((2 * k - 1).into()), tol).scale(&(int(2) / kk), tol)
}

/// Exact return probability to the identity after `steps` steps of the
/// uniform walk on k free generators and their inverses, by the recursion on
/// the distance from the root.
pub fn free_return_probability(k: u64, steps: usize) -> Rat {
    let deg = 2 * k;
    let mut f: Vec<BigUint> = vec![BigUint::one()];
    for _ in 0..steps {
        let mut g = vec![BigUint::zero(); f.len() + 1];
        for (r, c) in f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if r == 0 {
                g[1] += c * deg;
            } else {
                g[r - 1] += c;
                g[r + 1] += c * (deg - 1);
            }
        }
        f = g;
    }
    Rat::new(f[0].clone().into(), num_traits::pow(BigUint::from(deg), steps).into())
}
