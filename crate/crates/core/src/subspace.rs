//! Subspaces of Q^d in reduced row echelon form, with Plücker coordinates.

use crate::matrix::Mat;
use crate::rat::{primitive_integer, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A subspace of Q^d. The basis is the nonzero rows of the reduced row echelon
/// form of any spanning set, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
    pluecker: Vec<Rat>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        let rows: Vec<Vec<Rat>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
        let basis = if rows.is_empty() {
            Vec::new()
        } else {
            assert!(rows.iter().all(|v| v.len() == ambient), "vector length differs from ambient dimension");
            let (r, piv) = Mat::from_rows(&rows).rref();
            (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
        };
        let pluecker = wedge(&basis, ambient);
        Subspace { ambient, basis, pluecker }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace::span(ambient, &[])
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, &Mat::identity(ambient).row_vecs())
    }

    /// span(e_i : i in idx), zero-based.
    pub fn coordinate(ambient: usize, idx: &[usize]) -> Self {
        let id = Mat::identity(ambient);
        Subspace::span(ambient, &idx.iter().map(|&i| id.row(i).to_vec()).collect::<Vec<_>>())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    /// Wedge of the reduced basis in the e_I basis, I in lexicographic order.
    /// The zero subspace has the single coordinate 1.
    pub fn pluecker(&self) -> &[Rat] {
        &self.pluecker
    }

    /// Primitive integer basis vectors (each row scaled separately).
    pub fn integer_basis(&self) -> Vec<Vec<BigInt>> {
        self.basis.iter().map(|v| primitive_integer(v).0).collect()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Mat::from_rows(&rows).rank() == self.dim()
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(o.basis.iter().cloned());
        Subspace::span(self.ambient, &rows)
    }

    /// Vectors orthogonal to the subspace for the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        Subspace::span(self.ambient, &Mat::from_rows(&self.basis).kernel())
    }

    /// Euclidean orthogonal complement in Q^d.
    pub fn euclidean_complement(&self) -> Subspace {
        self.annihilator()
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        if self.is_zero() || o.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let mut rows = self.annihilator().basis;
        rows.extend(o.annihilator().basis);
        if rows.is_empty() {
            return Subspace::full(self.ambient);
        }
        Subspace::span(self.ambient, &Mat::from_rows(&rows).kernel())
    }

    /// A·V with vectors as columns.
    pub fn image(&self, a: &Mat) -> Subspace {
        Subspace::span(a.rows(), &self.basis.iter().map(|v| a.apply(v)).collect::<Vec<_>>())
    }

    pub fn is_invariant(&self, a: &Mat) -> bool {
        self.basis.iter().all(|v| self.contains(&a.apply(v)))
    }

    /// Coordinates of v in the stored basis, if v lies in the subspace.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        solve_in_rows(&self.basis, v)
    }
}

/// Solves x · B = v for the rows of B (assumed independent).
pub fn solve_in_rows(rows: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    let k = rows.len();
    let d = v.len();
    if k == 0 {
        return v.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    // augmented system Bᵀ x = v
    let mut aug = Mat::zero(d, k + 1);
    for i in 0..d {
        for (j, r) in rows.iter().enumerate() {
            aug.set(i, j, r[i].clone());
        }
        aug.set(i, k, v[i].clone());
    }
    let (r, piv) = aug.rref();
    if piv.contains(&k) {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = r.get(i, k).clone();
    }
    Some(x)
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(s: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in s..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Plücker coordinates of the wedge of the given rows: all maximal minors,
/// column sets in lexicographic order. An empty list of rows gives [1].
pub fn wedge(rows: &[Vec<Rat>], ambient: usize) -> Vec<Rat> {
    let k = rows.len();
    if k == 0 {
        return vec![Rat::one()];
    }
    if k > ambient {
        return vec![Rat::zero()];
    }
    subsets(ambient, k)
        .into_iter()
        .map(|cols| {
            let sub: Vec<Rat> = rows.iter().flat_map(|r| cols.iter().map(|&c| r[c].clone())).collect();
            Mat::new(k, k, sub).det()
        })
        .collect()
}
