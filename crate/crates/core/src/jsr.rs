//! Spectral radii and joint spectral radius bounds at a place, and the place
//! selection step that picks where a large eigenvalue must live.

use crate::eigen::eigenvalue_moduli;
use crate::error::{Error, Result};
use crate::genset::GenSet;
use crate::magnitude::NormValue;
use crate::matrix::Mat;
use crate::newton::newton_polygon;
use crate::place::{operator_norm, Place};
use crate::rat::{int, Rat};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest eigenvalue modulus of A at v (0 for nilpotent A).
pub fn spectral_radius(a: &Mat, v: Place, tol: &Rat) -> NormValue {
    match v {
        Place::Finite(p) => {
            let f = a.char_poly();
            let k = f.x_adic_order();
            if k == f.degree() {
                return NormValue::zero();
            }
            let g = f.shift_down(k);
            let top = newton_polygon(&g, p).into_iter().map(|(s, _)| s).max().unwrap();
            NormValue::prime_power(p, &top, tol)
        }
        Place::Infinite => eigenvalue_moduli(a, v, tol)
            .into_iter()
            .reduce(|x, y| x.max(&y))
            .unwrap_or_else(NormValue::zero),
    }
}

/// How much a lower bound is known to say about the joint spectral radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Guarantee {
    /// Equal to R_v(S): finite place with words up to length d².
    Exact,
    /// Within a factor 2 of R_v(S): words up to length 16d⁴.
    FactorTwoCertified,
    /// A valid lower bound with no tightness guarantee.
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct JsrBound {
    pub value: NormValue,
    pub guarantee: Guarantee,
    /// Word attaining the bound and its length.
    pub witness: Vec<usize>,
    pub length: usize,
}

/// max over words of length k ≤ k_max of Λ_v(word)^(1/k).
pub fn jsr_lower(s: &GenSet, v: Place, k_max: usize, budget: u64, tol: &Rat) -> Result<JsrBound> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    let d = s.dim();
    let layers = s.words_by_length(k_max, budget)?;
    let t = tol / int(4 * k_max as i64);
    let mut best: Option<(NormValue, Vec<usize>, usize)> = None;
    for (i, layer) in layers.iter().enumerate() {
        let k = i + 1;
        let vals: Vec<NormValue> = layer
            .par_iter()
            .map(|w| spectral_radius(w, v, &t).root(k as u32, &t))
            .collect();
        for (w, val) in layer.iter().zip(vals) {
            let better = match &best {
                None => true,
                Some((b, _, _)) => val.cmp_certain(b) == Some(std::cmp::Ordering::Greater),
            };
            if better {
                best = Some((val, w.word().map(|x| x.to_vec()).unwrap_or_default(), k));
            }
        }
    }
    let (value, witness, length) = best.expect("nonempty layers");
    let guarantee = match v {
        Place::Finite(_) if k_max >= d * d => Guarantee::Exact,
        _ if k_max >= 16 * d.pow(4) => Guarantee::FactorTwoCertified,
        _ => Guarantee::Heuristic,
    };
    Ok(JsrBound { value, guarantee, witness, length })
}

/// ‖S^n‖_v^(1/n) = max over products of length n, an upper bound on R_v(S).
pub fn jsr_upper(s: &GenSet, v: Place, n: usize, budget: u64, tol: &Rat) -> Result<NormValue> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let prods = s.product_set(n, budget)?;
    let t = tol / int(4);
    let m = prods
        .par_iter()
        .map(|w| operator_norm(w, v, &t))
        .reduce_with(|x, y| x.max(&y))
        .unwrap();
    Ok(m.root(n as u32, &t))
}

/// Outcome of the place-selection step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceChoice {
    /// A finite place with e_v > s_v/(2C).
    Finite(Place),
    /// The archimedean place with e_v ≥ s_v/(2C) + e/2.
    Infinite(Place),
}

/// Given nonnegative e_v, s_v (missing places count as 0) with Σs ≤ C·Σe,
/// returns a finite place where e dominates s/(2C), or else the archimedean
/// place, which then carries at least half of e.
pub fn place_select(e: &BTreeMap<Place, Rat>, s: &BTreeMap<Place, Rat>, c: &Rat) -> Result<PlaceChoice> {
    let zero = Rat::from_integer(0.into());
    let get = |m: &BTreeMap<Place, Rat>, v: &Place| m.get(v).cloned().unwrap_or_else(|| zero.clone());
    let e_tot: Rat = e.values().sum();
    let s_tot: Rat = s.values().sum();
    if s_tot > c * &e_tot {
        return Err(Error::HypothesisViolated(format!("s = {s_tot} exceeds C*e = {}", c * &e_tot)));
    }
    let two_c = int(2) * c;
    let mut places: Vec<Place> = e.keys().chain(s.keys()).copied().collect();
    places.sort_by_key(|p| p.search_key());
    places.dedup();
    for v in places.iter().filter(|v| !v.is_archimedean()) {
        if get(e, v) > get(s, v) / &two_c {
            return Ok(PlaceChoice::Finite(*v));
        }
    }
    let v = Place::Infinite;
    if get(e, &v) >= get(s, &v) / &two_c + &e_tot / int(2) {
        Ok(PlaceChoice::Infinite(v))
    } else {
        Err(Error::HypothesisViolated("neither option holds; inputs are inconsistent".into()))
    }
}
