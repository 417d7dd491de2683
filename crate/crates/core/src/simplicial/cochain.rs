use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::Triangulation;
use crate::linalg::{IntegerMatrix, Rational};

/// Sparse rational cochain on the sorted `degree`-simplices; absent keys are
/// zero and zero values are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    values: BTreeMap<usize, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CochainError {
    #[error("cochain degree {0} is outside 0..=3")]
    Degree(usize),
    #[error("expected a degree-{expected} cochain, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("simplex index {index} out of range: {count} simplices of degree {degree}")]
    OutOfRange { degree: usize, index: usize, count: usize },
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn new(degree: usize, values: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self, CochainError> {
        if degree > 3 {
            return Err(CochainError::Degree(degree));
        }
        let mut c = Cochain::zero(degree);
        for (i, v) in values {
            c.set(i, v);
        }
        Ok(c)
    }

    pub fn from_dense(degree: usize, values: Vec<Rational>) -> Self {
        let mut c = Cochain::zero(degree);
        for (i, v) in values.into_iter().enumerate() {
            c.set(i, v);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &BTreeMap<usize, Rational> {
        &self.values
    }

    pub fn get(&self, i: usize) -> Rational {
        self.values.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, v: Rational) {
        if v.is_zero() {
            self.values.remove(&i);
        } else {
            self.values.insert(i, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = alloc::vec![Rational::zero(); len];
        for (&i, v) in &self.values {
            out[i] = v.clone();
        }
        out
    }

    pub fn sup_norm(&self) -> Rational {
        self.values.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Cochain::zero(self.degree);
        for (&i, v) in &self.values {
            out.set(i, v * c);
        }
        out
    }

    pub fn add(&self, other: &Cochain) -> Self {
        assert_eq!(self.degree, other.degree, "adding cochains of different degrees");
        let mut out = self.clone();
        for (&i, v) in &other.values {
            let s = out.get(i) + v;
            out.set(i, s);
        }
        out
    }

    /// Check degree and indices against a triangulation.
    pub fn validate(&self, t: &Triangulation) -> Result<(), CochainError> {
        let count = t.simplex_count(self.degree);
        match self.values.keys().next_back() {
            Some(&index) if index >= count => Err(CochainError::OutOfRange {
                degree: self.degree,
                index,
                count,
            }),
            _ => Ok(()),
        }
    }

    pub(crate) fn expect_degree(&self, expected: usize) -> Result<(), CochainError> {
        if self.degree == expected {
            Ok(())
        } else {
            Err(CochainError::DegreeMismatch {
                expected,
                got: self.degree,
            })
        }
    }

    /// `d` applied through an explicit coboundary matrix.
    pub fn apply(&self, d: &IntegerMatrix) -> Cochain {
        let x = self.to_dense(d.cols());
        Cochain::from_dense(self.degree + 1, d.apply(&x, |v| Rational::from_integer(v.into())))
    }

    /// The coboundary `dc` on `t`.
    pub fn coboundary(&self, t: &Triangulation) -> Cochain {
        self.apply(&t.coboundary_matrix(self.degree))
    }
}
