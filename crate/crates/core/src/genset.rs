//! Finite generating sets and enumeration of their product sets.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use rayon::prelude::*;
use std::collections::HashSet;

/// A finite set of invertible d×d matrices. Element i carries the word [i].
#[derive(Clone, Debug)]
pub struct GenSet {
    elements: Vec<Mat>,
    symmetric: bool,
    contains_identity: bool,
}

impl GenSet {
    pub fn new(elements: Vec<Mat>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidInput("empty generating set".into()));
        };
        let d = first.rows();
        for m in &elements {
            if !m.is_square() || m.rows() != d {
                return Err(Error::InvalidInput("generators must be square of equal size".into()));
            }
        }
        let elements: Vec<Mat> = elements
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.with_word(vec![i]))
            .collect();
        let contains_identity = elements.iter().any(|m| m.is_identity());
        let symmetric = elements.iter().all(|m| match m.inverse() {
            Some(inv) => elements.contains(&inv),
            None => false,
        });
        Ok(GenSet { elements, symmetric, contains_identity })
    }

    /// Checks declared flags against the elements.
    pub fn with_flags(elements: Vec<Mat>, symmetric: bool, contains_identity: bool) -> Result<Self> {
        let s = GenSet::new(elements)?;
        if s.symmetric != symmetric || s.contains_identity != contains_identity {
            return Err(Error::InvalidInput("declared flags do not match the elements".into()));
        }
        Ok(s)
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    pub fn all_invertible(&self) -> bool {
        self.elements.iter().all(|m| m.inverse().is_some())
    }

    /// S with the identity and all inverses added; words refer to the new set.
    pub fn symmetrized(&self) -> Result<GenSet> {
        let mut els: Vec<Mat> = Vec::new();
        let push = |m: Mat, els: &mut Vec<Mat>| {
            if !els.contains(&m) {
                els.push(m);
            }
        };
        push(Mat::identity(self.dim()), &mut els);
        for m in &self.elements {
            let inv = m.inverse().ok_or_else(|| Error::InvalidInput("generator is singular".into()))?;
            push(m.clone(), &mut els);
            push(inv, &mut els);
        }
        GenSet::new(els.into_iter().map(|mut m| {
            m.set_word(None);
            m
        }).collect())
    }

    /// The product set S^n, deduplicated by exact value; each element keeps
    /// the first word (in lexicographic enumeration order) that produced it.
    pub fn product_set(&self, n: usize, budget: u64) -> Result<Vec<Mat>> {
        let d = self.dim();
        let mut layer = vec![Mat::identity(d).with_word(Vec::new())];
        let mut work: u64 = 0;
        for _ in 0..n {
            work += (layer.len() * self.elements.len()) as u64;
            if work > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            layer = self.extend_layer(&layer);
        }
        Ok(layer)
    }

    fn extend_layer(&self, layer: &[Mat]) -> Vec<Mat> {
        let prods: Vec<Vec<Mat>> = layer
            .par_iter()
            .map(|x| self.elements.iter().map(|s| x.mul(s)).collect())
            .collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for m in prods.into_iter().flatten() {
            if seen.insert(m.clone()) {
                out.push(m);
            }
        }
        out
    }

    /// All distinct products of length exactly k for k = 1..=k_max, per length.
    pub fn words_by_length(&self, k_max: usize, budget: u64) -> Result<Vec<Vec<Mat>>> {
        let d = self.dim();
        let mut layer = vec![Mat::identity(d).with_word(Vec::new())];
        let mut out = Vec::new();
        let mut work: u64 = 0;
        for _ in 0..k_max {
            work += (layer.len() * self.elements.len()) as u64;
            if work > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            layer = self.extend_layer(&layer);
            out.push(layer.clone());
        }
        Ok(out)
    }

    /// Evaluates a word in the generators.
    pub fn eval_word(&self, w: &[usize]) -> Result<Mat> {
        let mut m = Mat::identity(self.dim()).with_word(Vec::new());
        for &i in w {
            let g = self
                .elements
                .get(i)
                .ok_or_else(|| Error::InvalidInput(format!("word index {i} out of range")))?;
            m = m.mul(g);
        }
        Ok(m)
    }
}
