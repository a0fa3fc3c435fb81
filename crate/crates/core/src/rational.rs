//! Exact rational matrix arithmetic: the backbone of certification.
//!
//! Everything here is exact. Matrices carry `BigRational` entries, inverses
//! are computed by Gaussian elimination over Q, and characteristic
//! polynomials come from the Faddeev-LeVerrier recurrence (division only by
//! small integers, adequate for the n <= 8 sizes certification works at).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Format a rational as `p/q` in lowest terms with positive denominator.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p/q` (or a bare integer `p`) into a rational.
pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer = BigInt::from_str(num).map_err(|e| Error::SyntaxError {
        offset: 0,
        message: format!("bad rational numerator {num:?}: {e}"),
    })?;
    let denom = BigInt::from_str(den).map_err(|e| Error::SyntaxError {
        offset: 0,
        message: format!("bad rational denominator {den:?}: {e}"),
    })?;
    if denom.is_zero() {
        return Err(Error::SyntaxError {
            offset: 0,
            message: "zero denominator".into(),
        });
    }
    Ok(BigRational::new(numer, denom))
}

/// Exact rational representation of an `f64` (every finite float is p/2^k).
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Square matrix with exact rational entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_entries(n: usize, entries: Vec<BigRational>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        Self { n, entries }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n);
            for &v in row.iter() {
                entries.push(BigRational::from_integer(BigInt::from(v)));
            }
        }
        Self { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self[(j, i)].clone();
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch in rational product");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Exact integer power; negative exponents go through the exact inverse.
    pub fn int_power(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.int_power(-k);
        }
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Exact inverse by Gauss-Jordan elimination with partial (first nonzero)
    /// pivoting over Q.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let pivot = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= pivot.clone();
                inv[(col, j)] /= pivot.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let sub_a = &factor * &a[(col, j)];
                    a[(r, j)] -= sub_a;
                    let sub_i = &factor * &inv[(col, j)];
                    inv[(r, j)] -= sub_i;
                }
            }
        }
        Ok(inv)
    }

    /// Exact determinant by elimination on a working copy.
    pub fn determinant(&self) -> BigRational {
        let n = self.n;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot_row = match (col..n).find(|&r| !a[(r, col)].is_zero()) {
                Some(r) => r,
                None => return BigRational::zero(),
            };
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= pivot.clone();
            for r in (col + 1)..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let factor = &a[(r, col)] / &pivot;
                for j in col..n {
                    let sub = &factor * &a[(col, j)];
                    a[(r, j)] -= sub;
                }
            }
        }
        det
    }

    /// Leading principal minors, sizes 1..=n.
    pub fn leading_principal_minors(&self) -> Vec<BigRational> {
        (1..=self.n)
            .map(|k| self.leading_submatrix(k).determinant())
            .collect()
    }

    /// Sylvester criterion: a symmetric rational matrix is positive definite
    /// iff every leading principal minor is positive. Exact.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric()
            && self
                .leading_principal_minors()
                .iter()
                .all(|m| m.is_positive())
    }

    fn leading_submatrix(&self, k: usize) -> Self {
        let mut out = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Exact Schur complement C = B22 - B21 B11^-1 B12 of the leading k x k
    /// block. Requires the leading block to be invertible.
    pub fn schur_complement(&self, k: usize) -> Result<Self> {
        let n = self.n;
        if k == 0 || k >= n {
            return Err(Error::SplitOutOfRange { k, n });
        }
        let m = n - k;
        let mut b11 = Self::zeros(k);
        let mut b12 = vec![BigRational::zero(); k * m];
        let mut b21 = vec![BigRational::zero(); m * k];
        let mut b22 = Self::zeros(m);
        for i in 0..n {
            for j in 0..n {
                let v = self[(i, j)].clone();
                match (i < k, j < k) {
                    (true, true) => b11[(i, j)] = v,
                    (true, false) => b12[i * m + (j - k)] = v,
                    (false, true) => b21[(i - k) * k + j] = v,
                    (false, false) => b22[(i - k, j - k)] = v,
                }
            }
        }
        let b11_inv = b11.inverse()?;
        // C = B22 - B21 * B11^-1 * B12, computed with rectangular slices.
        let mut out = b22;
        for i in 0..m {
            for j in 0..m {
                let mut acc = BigRational::zero();
                for s in 0..k {
                    for t in 0..k {
                        if b21[i * k + s].is_zero() {
                            continue;
                        }
                        acc += &b21[i * k + s] * &b11_inv[(s, t)] * &b12[t * m + j];
                    }
                }
                out[(i, j)] -= acc;
            }
        }
        Ok(out)
    }

    /// Monic characteristic polynomial coefficients `[c0, c1, ..., c_{n-1}, 1]`
    /// (ascending powers) by the Faddeev-LeVerrier recurrence.
    pub fn charpoly(&self) -> Vec<BigRational> {
        let n = self.n;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut mk = self.clone();
        for k in 1..=n {
            let c = -mk.trace() / BigRational::from_integer(BigInt::from(k as i64));
            coeffs[n - k] = c.clone();
            if k < n {
                let mut shifted = mk;
                for i in 0..n {
                    shifted[(i, i)] += c.clone();
                }
                mk = self.mul(&shifted);
            }
        }
        coeffs
    }

    /// Entrywise conversion to floats.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(rational_to_f64).collect()
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.n {
            self.entries.swap(r1 * self.n + j, r2 * self.n + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.entries[i * self.n + j]
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| rational_to_string(&self[(i, j)]))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Lossy conversion of a rational to f64 that stays finite for the huge
/// numerators certification can produce.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    // num's to_f64 on ratios of very large BigInts can lose the exponent;
    // going through a scaled division keeps this stable for our sizes.
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let digits_n = r.numer().to_string().len() as i32;
        let digits_d = r.denom().to_string().len() as i32;
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * 10f64.powi(digits_n - digits_d)
    })
}
