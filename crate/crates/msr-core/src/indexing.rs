//! Base-w digit algebra on indices below N = w^m, and the partition
//! matrices it induces.
//!
//! An index a in [0, N) is handled through its w-ary expansion
//! (a_0, ..., a_{m-1}) with a_0 the most significant digit. Fixing digit
//! i to a value u carves the standard basis of F^N into w disjoint
//! selections of size N/w; those selections, materialized as 0/1
//! matrices, are the skeleton both code constructions hang their select
//! and repair matrices on.

use std::sync::Arc;

use crate::gf::FieldSpec;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Index algebra over digit strings of length m in base w.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitSpace {
    w: usize,
    m: usize,
    size: usize,
}

impl DigitSpace {
    /// Panics unless w >= 2, m >= 1 and w^m fits a usize.
    pub fn new(w: usize, m: usize) -> Self {
        assert!(w >= 2 && m >= 1, "need base >= 2 and at least one digit");
        let size = w.checked_pow(m as u32).expect("w^m overflows usize");
        DigitSpace { w, m, size }
    }

    pub fn base(&self) -> usize {
        self.w
    }

    pub fn digit_count(&self) -> usize {
        self.m
    }

    /// N = w^m.
    pub fn size(&self) -> usize {
        self.size
    }

    fn place(&self, i: usize) -> usize {
        self.w.pow((self.m - 1 - i) as u32)
    }

    fn check(&self, value: usize, bound: usize) -> Result<()> {
        if value < bound {
            Ok(())
        } else {
            Err(Error::OutOfRange { value, bound })
        }
    }

    /// w-ary expansion of a, most significant digit first.
    pub fn digits(&self, a: usize) -> Result<Vec<usize>> {
        self.check(a, self.size)?;
        Ok((0..self.m).map(|i| a / self.place(i) % self.w).collect())
    }

    pub fn from_digits(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.m {
            return Err(Error::OutOfRange {
                value: digits.len(),
                bound: self.m + 1,
            });
        }
        let mut a = 0usize;
        for &d in digits {
            self.check(d, self.w)?;
            a = a * self.w + d;
        }
        Ok(a)
    }

    /// Digit i of a without materializing the full expansion.
    pub fn digit(&self, a: usize, i: usize) -> usize {
        debug_assert!(a < self.size && i < self.m);
        a / self.place(i) % self.w
    }

    /// a with its i-th digit replaced by u.
    pub fn replace_digit(&self, a: usize, i: usize, u: usize) -> Result<usize> {
        self.check(a, self.size)?;
        self.check(i, self.m)?;
        self.check(u, self.w)?;
        let place = self.place(i);
        Ok(a - (a / place % self.w) * place + u * place)
    }

    /// Inserts u as the i-th digit of an (m-1)-digit value, yielding an
    /// m-digit one: (a_0, ..., a_{i-1}, u, a_i, ..., a_{m-2}).
    pub fn insert_digit(&self, a: usize, i: usize, u: usize) -> Result<usize> {
        self.check(a, self.size / self.w)?;
        self.check(i, self.m)?;
        self.check(u, self.w)?;
        let place = self.place(i); // w^(m-1-i)
        let high = a / place;
        let low = a % place;
        Ok(high * place * self.w + u * place + low)
    }

    /// Row map of the partition selection for (i, u): entry a is the basis
    /// index the a-th row of the (N/w) x N selection matrix picks.
    ///
    /// The maps for u = 0..w-1 at a fixed i are disjoint and cover [0, N).
    pub fn partition_map(&self, i: usize, u: usize) -> Vec<usize> {
        assert!(i < self.m && u < self.w);
        (0..self.size / self.w)
            .map(|a| self.insert_digit(a, i, u).expect("domain checked"))
            .collect()
    }

    /// The (N/w) x N selection matrix whose row a is the standard basis
    /// row picked by [`Self::partition_map`].
    pub fn partition_matrix(&self, i: usize, u: usize, field: &Arc<FieldSpec>) -> Matrix {
        let map = self.partition_map(i, u);
        let mut out = Matrix::zeros(field.clone(), map.len(), self.size);
        for (a, &g) in map.iter().enumerate() {
            out[(a, g)] = field.one();
        }
        out
    }
}
