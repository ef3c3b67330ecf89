//! Local lattice geometry at a prime p: saturated Z_(p)-bases, orthogonality
//! in the sense U_O ⊕ W_O = (U+W)_O, and orthogonal complements.

use crate::rat::{valuation, Rat};
use crate::subspace::Subspace;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Reduction of a p-integral rational modulo p.
pub fn reduce(x: &Rat, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let n = x.numer().mod_floor(&pb).to_u64().unwrap();
    let d = x.denom().mod_floor(&pb).to_u64().unwrap();
    assert!(d != 0, "not p-integral");
    crate::rat::mul_mod(n, crate::rat::pow_mod(d, p - 2, p), p)
}

/// Row echelon form over F_p; returns the pivot columns and the reduced rows.
pub fn echelon_mod_p(rows: &[Vec<u64>], p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, i);
        let inv = crate::rat::pow_mod(m[r][c], p - 2, p);
        for x in m[r].iter_mut() {
            *x = crate::rat::mul_mod(*x, inv, p);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    let t = crate::rat::mul_mod(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - t) % p;
                }
            }
        }
        piv.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (piv, m)
}

/// Left kernel of the rows modulo p: coefficient vectors c with Σ c_i row_i ≡ 0.
fn left_kernel_mod_p(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let k = rows.len();
    let d = rows.first().map_or(0, |r| r.len());
    // transpose, then right kernel
    let t: Vec<Vec<u64>> = (0..d).map(|j| (0..k).map(|i| rows[i][j]).collect()).collect();
    let (piv, red) = echelon_mod_p(&t, p);
    let mut out = Vec::new();
    for f in (0..k).filter(|c| !piv.contains(c)) {
        let mut v = vec![0u64; k];
        v[f] = 1;
        for (i, &pc) in piv.iter().enumerate() {
            v[pc] = (p - red[i][f]) % p;
        }
        out.push(v);
    }
    out
}

fn scale_to_unit(v: &[Rat], p: u64) -> Vec<Rat> {
    let m = v.iter().filter_map(|x| valuation(x, p)).min().expect("zero vector");
    let s = crate::rat::pow_p(p, -m);
    v.iter().map(|x| x * &s).collect()
}

/// A Z_(p)-basis of V ∩ Z_(p)^d: its reduction mod p has full rank.
pub fn saturated_basis(v: &Subspace, p: u64) -> Vec<Vec<Rat>> {
    let mut b: Vec<Vec<Rat>> = v.basis().iter().map(|r| scale_to_unit(r, p)).collect();
    loop {
        let red: Vec<Vec<u64>> = b.iter().map(|r| r.iter().map(|x| reduce(x, p)).collect()).collect();
        let ker = left_kernel_mod_p(&red, p);
        let Some(c) = ker.first() else { return b };
        let i = c.iter().position(|&x| x != 0).unwrap();
        let d = b[0].len();
        let mut comb = vec![Rat::zero(); d];
        for (j, &cj) in c.iter().enumerate() {
            if cj != 0 {
                let cj = Rat::from_integer(cj.into());
                for t in 0..d {
                    comb[t] += &cj * &b[j][t];
                }
            }
        }
        b[i] = scale_to_unit(&comb, p);
    }
}

fn rank_mod_p(rows: &[Vec<Rat>], p: u64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let red: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| reduce(x, p)).collect()).collect();
    echelon_mod_p(&red, p).0.len()
}

/// U_O ⊕ W_O = (U+W)_O (which includes U ∩ W = 0).
pub fn is_orthogonal(u: &Subspace, w: &Subspace, p: u64) -> bool {
    if !u.intersect(w).is_zero() {
        return false;
    }
    let mut rows = saturated_basis(u, p);
    rows.extend(saturated_basis(w, p));
    rank_mod_p(&rows, p) == u.dim() + w.dim()
}

/// W with U ⊕ W = V and U, W orthogonal at p, for U ⊆ V. The result is
/// spanned by members of a saturated basis of V.
pub fn orthogonal_complement(u: &Subspace, v: &Subspace, p: u64) -> Subspace {
    debug_assert!(v.contains_subspace(u));
    if u.is_zero() {
        return v.clone();
    }
    let vb = saturated_basis(v, p);
    // U in the coordinates of the saturated basis of V
    let coords: Vec<Vec<Rat>> = u
        .basis()
        .iter()
        .map(|x| crate::subspace::solve_in_rows(&vb, x).expect("U is not inside V"))
        .collect();
    let uc = Subspace::span(vb.len(), &coords);
    let ub = saturated_basis(&uc, p);
    let red: Vec<Vec<u64>> = ub.iter().map(|r| r.iter().map(|x| reduce(x, p)).collect()).collect();
    let (piv, _) = echelon_mod_p(&red, p);
    let chosen: Vec<Vec<Rat>> = (0..vb.len()).filter(|j| !piv.contains(j)).map(|j| vb[j].clone()).collect();
    Subspace::span(v.ambient(), &chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn v(x: &[i64]) -> Vec<Rat> {
        x.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn orthogonality_examples() {
        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        assert!(is_orthogonal(&e1, &e2, 3));
        let l = Subspace::span(2, &[v(&[1, 3])]);
        assert!(!is_orthogonal(&e1, &l, 3));
        assert!(is_orthogonal(&e1, &Subspace::span(2, &[v(&[1, 1])]), 3));
        assert!(is_orthogonal(&e1, &l, 5));
    }

    #[test]
    fn complements() {
        let full = Subspace::full(2);
        let l = Subspace::span(2, &[v(&[1, 3])]);
        let w = orthogonal_complement(&l, &full, 3);
        assert_eq!(w.dim(), 1);
        assert!(is_orthogonal(&l, &w, 3));
        assert_eq!(orthogonal_complement(&Subspace::zero(2), &full, 3), full);
        let e1 = Subspace::coordinate(3, &[0]);
        assert_eq!(orthogonal_complement(&e1, &Subspace::full(3), 7), Subspace::coordinate(3, &[1, 2]));
    }

    #[test]
    fn saturation() {
        // span((2, 2)) at p = 2 saturates to (1, 1)
        let s = Subspace::span(2, &[v(&[2, 2]), v(&[0, 4])]);
        let b = saturated_basis(&s, 2);
        assert_eq!(rank_mod_p(&b, 2), 2);
    }
}
