//! Newton polygons at a prime.
//!
//! Convention: a segment of slope s carries roots with |λ|_p = p^s, i.e.
//! v_p(λ) = −s.

use crate::poly::Poly;
use crate::rat::{valuation, Rat};

/// Segments of the lower convex hull of {(i, v_p(a_i))}, as (slope, length)
/// with slope in the |λ|_p = p^slope convention, sorted by increasing slope.
/// Roots at zero are stripped first and not reported.
pub fn newton_polygon(f: &Poly, p: u64) -> Vec<(Rat, usize)> {
    let f = f.shift_down(f.x_adic_order());
    let pts: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, a)| valuation(a, p).map(|v| (i as i64, v)))
        .collect();
    if pts.len() < 2 {
        return Vec::new();
    }
    // lower hull by monotone chain
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &q in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // remove b if it lies on or above segment a-q
            let cross = (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let mut segs: Vec<(Rat, usize)> = hull
        .windows(2)
        .map(|w| {
            let hull_slope = Rat::new((w[1].1 - w[0].1).into(), (w[1].0 - w[0].0).into());
            // hull slope σ gives roots of valuation −σ, so |λ|_p = p^σ
            (hull_slope, (w[1].0 - w[0].0) as usize)
        })
        .collect();
    segs.sort();
    segs
}

/// The multiset of exponents s with |λ|_p = p^s, one per nonzero root.
pub fn root_exponents(f: &Poly, p: u64) -> Vec<Rat> {
    newton_polygon(f, p)
        .into_iter()
        .flat_map(|(s, m)| std::iter::repeat(s).take(m))
        .collect()
}

/// Whether all nonzero roots of f have the same p-adic absolute value.
pub fn is_pure(f: &Poly, p: u64) -> bool {
    newton_polygon(f, p).len() <= 1
}

/// Least common multiple of the slope denominators.
pub fn slope_denominator_lcm(f: &Poly, p: u64) -> u64 {
    newton_polygon(f, p)
        .iter()
        .fold(1u64, |l, (s, _)| num_integer::lcm(l, u64::try_from(s.denom()).expect("slope denominator")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn examples() {
        // x^2 - p: |λ|_p = p^(-1/2)
        assert_eq!(newton_polygon(&Poly::from_ints(&[-5, 0, 1]), 5), vec![(rat(-1, 2), 2)]);
        // (x-1)(x-p) = x^2 - (1+p) x + p
        assert_eq!(newton_polygon(&Poly::from_ints(&[3, -4, 1]), 3), vec![(int(-1), 1), (int(0), 1)]);
        assert_eq!(newton_polygon(&Poly::from_ints(&[1, 1, 1]), 5), vec![(int(0), 2)]);
        // (x - 1/2)(x - 4) at 2: |1/2|_2 = 2, |4|_2 = 1/4
        let f = Poly::linear_root(&rat(1, 2)).mul(&Poly::linear_root(&int(4)));
        assert_eq!(root_exponents(&f, 2), vec![int(-2), int(1)]);
    }
}
