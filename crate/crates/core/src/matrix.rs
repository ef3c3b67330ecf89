//! Dense exact rational matrices.

use crate::poly::Poly;
use crate::rat::{int, Rat};
use num_traits::{One, Zero};
use std::fmt;
use std::hash::{Hash, Hasher};

/// A dense rational matrix, row-major. `word` records how the matrix was
/// produced from a generating set (indices into that set, left to right) and
/// is ignored by equality and hashing.
#[derive(Clone, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
    word: Option<Vec<usize>>,
}

impl PartialEq for Mat {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}
impl Eq for Mat {}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.rows.hash(h);
        self.cols.hash(h);
        self.data.hash(h);
    }
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { rows, cols, data, word: None }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Mat::zero(d, d);
        for i in 0..d {
            m.data[i * d + i] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat::new(r, c, rows.iter().flatten().cloned().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
    }

    pub fn diag(d: &[Rat]) -> Self {
        let n = d.len();
        let mut m = Mat::zero(n, n);
        for (i, x) in d.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn with_word(mut self, w: Vec<usize>) -> Self {
        self.word = Some(w);
        self
    }

    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    pub fn set_word(&mut self, w: Option<Vec<usize>>) {
        self.word = w;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Product; words concatenate when both factors carry one.
    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = vec![Rat::zero(); self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        let word = match (&self.word, &o.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Mat { rows: self.rows, cols: o.cols, data: out, word }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat::new(self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat::new(self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rat) -> Mat {
        Mat::new(self.rows, self.cols, self.data.iter().map(|a| a * k).collect())
    }

    /// A·x for a column vector x.
    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn pow(&self, n: u32) -> Mat {
        let mut r = Mat::identity(self.rows);
        let mut b = self.clone();
        b.word = None;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.rows)
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        m.word = None;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : A x = 0}, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, piv) = self.rref();
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|c| !piv.contains(c)) {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = -r.get(i, f).clone();
            }
            out.push(v);
        }
        out
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i * n + c].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pv = m[c * n + c].clone();
            det *= &pv;
            for i in c + 1..n {
                if m[i * n + c].is_zero() {
                    continue;
                }
                let f = &m[i * n + c] / &pv;
                for j in c..n {
                    let v = &m[c * n + j] * &f;
                    m[i * n + j] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// det(xI − A), computed division-free by Berkowitz's algorithm.
    pub fn char_poly(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Poly::one();
        }
        // coefficients highest degree first
        let mut vect = vec![Rat::one(), -self.get(0, 0).clone()];
        for r in 1..n {
            let a = self.get(r, r).clone();
            // R = row r restricted to cols < r, C = column r restricted to rows < r
            let rrow: Vec<Rat> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut ck: Vec<Rat> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut t = Vec::with_capacity(r + 2);
            t.push(Rat::one());
            t.push(-a);
            for _ in 0..r {
                let s: Rat = rrow.iter().zip(&ck).map(|(x, y)| x * y).sum();
                t.push(-s);
                // ck <- A_r ck
                ck = (0..r)
                    .map(|i| (0..r).map(|j| self.get(i, j) * &ck[j]).sum())
                    .collect();
            }
            let mut nv = vec![Rat::zero(); r + 2];
            for (i, slot) in nv.iter_mut().enumerate() {
                for j in 0..=i.min(r) {
                    if i - j < t.len() && j < vect.len() {
                        *slot += &t[i - j] * &vect[j];
                    }
                }
            }
            vect = nv;
        }
        vect.reverse();
        Poly::new(vect)
    }

    /// f(A) by Horner's rule.
    pub fn eval_poly(&self, f: &Poly) -> Mat {
        let n = self.rows;
        let mut acc = Mat::zero(n, n);
        let mut base = self.clone();
        base.word = None;
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(&base).add(&Mat::identity(n).scale(c));
        }
        acc
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn char_polys() {
        assert_eq!(Mat::identity(2).char_poly(), Poly::from_ints(&[1, -2, 1]));
        assert_eq!(Mat::diag(&[int(2), int(3)]).char_poly(), Poly::from_ints(&[6, -5, 1]));
        assert_eq!(Mat::from_ints(&[&[0, 1], &[1, 0]]).char_poly(), Poly::from_ints(&[-1, 0, 1]));
        let a = Mat::from_ints(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        let f = a.char_poly();
        assert_eq!(f.coeff(0), -a.det());
        assert_eq!(f.coeff(2), -a.trace());
        assert!(a.eval_poly(&f).entries().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_and_kernel() {
        let a = Mat::from_ints(&[&[1, 1], &[1, 2]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = Mat::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        let k = s.kernel();
        assert_eq!(k, vec![vec![int(-2), int(1)]]);
        assert_eq!(Mat::diag(&[rat(1, 2), int(4)]).det(), int(2));
    }

    #[test]
    fn words_concatenate() {
        let a = Mat::identity(2).with_word(vec![0]);
        let b = Mat::identity(2).with_word(vec![1, 2]);
        assert_eq!(a.mul(&b).word(), Some(&[0usize, 1, 2][..]));
        assert_eq!(a, b);
    }
}
