//! Finite Abelian groups `Z_{n1} x ... x Z_{nk}` and their characters.
//!
//! Elements are stored either as tuples or as flat indices in mixed-radix
//! lexicographic order, with the last factor varying fastest. Every vertex
//! and every character index in the crate uses this ordering.

use num_complex::Complex64;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<usize>,
    order: usize,
}

impl AbelianGroup {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return invalid("group needs at least one factor");
        }
        if let Some(&bad) = factors.iter().find(|&&n| n == 0) {
            return invalid(format!("group factor must be positive, got {bad}"));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| {
                crate::QwalkError::InvalidArgument("group order overflows usize".into())
            })?;
        Ok(Self { factors, order })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// Flat index of a reduced tuple.
    pub fn encode(&self, x: &[usize]) -> usize {
        debug_assert_eq!(x.len(), self.factors.len());
        x.iter()
            .zip(&self.factors)
            .fold(0, |acc, (&xi, &n)| acc * n + xi % n)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = idx % n;
            idx /= n;
        }
        out
    }

    /// Reduce an arbitrary tuple componentwise.
    pub fn reduce(&self, x: &[i64]) -> Result<Vec<usize>> {
        self.check_dim(x.len())?;
        Ok(x.iter()
            .zip(&self.factors)
            .map(|(&xi, &n)| xi.rem_euclid(n as i64) as usize)
            .collect())
    }

    pub fn neg(&self, idx: usize) -> usize {
        let x = self.decode(idx);
        let neg: Vec<usize> = x
            .iter()
            .zip(&self.factors)
            .map(|(&xi, &n)| (n - xi) % n)
            .collect();
        self.encode(&neg)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let sum: Vec<usize> = x
            .iter()
            .zip(&y)
            .zip(&self.factors)
            .map(|((&p, &q), &n)| (p + q) % n)
            .collect();
        self.encode(&sum)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Table of `-x` for every flat index.
    pub fn negation_table(&self) -> Vec<usize> {
        (0..self.order).map(|i| self.neg(i)).collect()
    }

    /// χ_a(x) on flat indices.
    pub fn character(&self, a: usize, x: usize) -> Complex64 {
        let (a, x) = (self.decode(a), self.decode(x));
        character_reduced(&self.factors, &a, &x)
    }

    pub(crate) fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.factors.len() {
            return invalid(format!(
                "tuple has {len} components, group has {} factors",
                self.factors.len()
            ));
        }
        Ok(())
    }
}

/// `exp(2πi r/n)`, exact on the real and imaginary axes.
///
/// Conjugate residues `r` and `n - r` produce bitwise-conjugate values.
pub fn root_of_unity(r: usize, n: usize) -> Complex64 {
    let r = r % n;
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let flip = 2 * r > n;
    let s = if flip { n - r } else { r };
    let z = if 2 * s == n {
        Complex64::new(-1.0, 0.0)
    } else if 4 * s == n {
        Complex64::new(0.0, 1.0)
    } else {
        let theta = std::f64::consts::TAU * s as f64 / n as f64;
        let (sin, cos) = theta.sin_cos();
        Complex64::new(cos, sin)
    };
    if flip {
        z.conj()
    } else {
        z
    }
}

fn character_reduced(factors: &[usize], a: &[usize], x: &[usize]) -> Complex64 {
    factors
        .iter()
        .zip(a.iter().zip(x))
        .fold(Complex64::new(1.0, 0.0), |acc, (&n, (&ai, &xi))| {
            let r = ((ai as u128 * xi as u128) % n as u128) as usize;
            acc * root_of_unity(r, n)
        })
}

/// The character `χ_a(x) = ∏_j exp(2πi a_j x_j / n_j)` of `Z_{n1} x ... x Z_{nk}`.
pub fn character(factors: &[usize], a: &[usize], x: &[usize]) -> Result<Complex64> {
    if a.len() != factors.len() || x.len() != factors.len() {
        return invalid(format!(
            "dimension mismatch: {} factors, |a| = {}, |x| = {}",
            factors.len(),
            a.len(),
            x.len()
        ));
    }
    if let Some(&bad) = factors.iter().find(|&&n| n == 0) {
        return invalid(format!("group factor must be positive, got {bad}"));
    }
    Ok(character_reduced(factors, a, x))
}
