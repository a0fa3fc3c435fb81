//! Real symmetric and general dense linear algebra.
//!
//! `SymMatrix` guards symmetry on construction, `PDMatrix` carries a cached
//! spectral factorization and supplies arbitrary real powers, and `Spectrum`
//! holds eigenvalues in a fixed deterministic order.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type C64 = Complex<f64>;

/// Relative floor below which an eigenvalue counts as non-positive when
/// factoring a candidate positive definite matrix.
pub const POSITIVITY_FLOOR: f64 = 1e-12;

/// Iteration cap for the general (non-symmetric) eigenvalue solver.
const SCHUR_MAX_ITER: usize = 100_000;

/// Real symmetric matrix. Entries satisfy `m[(i,j)] == m[(j,i)]` exactly;
/// construction symmetrizes inputs and rejects asymmetry beyond
/// `1e-12 * max|entry|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    data: Matrix,
}

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        assert_eq!(m.nrows(), m.ncols(), "symmetric matrix must be square");
        let n = m.nrows();
        let scale = m.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let tol = 1e-12 * scale;
        for i in 0..n {
            for j in (i + 1)..n {
                let dev = (m[(i, j)] - m[(j, i)]).abs();
                if dev > tol {
                    return Err(Error::AsymmetricInput {
                        i,
                        j,
                        deviation: dev,
                    });
                }
            }
        }
        Ok(Self::symmetrized(m))
    }

    /// Force exact symmetry by averaging mirrored entries. For matrices that
    /// are symmetric up to roundoff by construction.
    pub fn symmetrized(mut m: Matrix) -> Self {
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        Self { data: m }
    }

    pub fn from_row_slice(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_row_slice(n, n, entries))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: Matrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.data
    }

    pub fn into_matrix(self) -> Matrix {
        self.data
    }

    /// Eigendecomposition sorted by descending eigenvalue. Returns the
    /// eigenvalues and the orthogonal matrix whose columns are the matching
    /// eigenvectors.
    pub fn eigen_sorted(&self) -> (Vec<f64>, Matrix) {
        let eig = self.data.clone().symmetric_eigen();
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vecs = Matrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vecs.set_column(dst, &eig.eigenvectors.column(src));
        }
        (vals, vecs)
    }
}

/// Positive definite matrix with its spectral factorization cached.
#[derive(Debug, Clone)]
pub struct PDMatrix {
    base: SymMatrix,
    eigvals: Vec<f64>,
    eigvecs: Matrix,
}

/// Factor a symmetric matrix as `U diag(w) U^T` with all `w > 0`, or report
/// which eigenvalue obstructs positivity. The positivity floor is
/// `1e-12 * max(1, largest eigenvalue)`.
pub fn spectral_factor(m: &SymMatrix) -> Result<PDMatrix> {
    let (eigvals, eigvecs) = m.eigen_sorted();
    let floor = POSITIVITY_FLOOR * eigvals.first().copied().unwrap_or(0.0).max(1.0);
    if let Some(&bad) = eigvals.iter().find(|&&w| w <= floor) {
        return Err(Error::NotPositiveDefinite { eigenvalue: bad });
    }
    Ok(PDMatrix {
        base: m.clone(),
        eigvals,
        eigvecs,
    })
}

impl PDMatrix {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &SymMatrix {
        &self.base
    }

    pub fn matrix(&self) -> &Matrix {
        self.base.matrix()
    }

    pub fn eigvals(&self) -> &[f64] {
        &self.eigvals
    }

    pub fn eigvecs(&self) -> &Matrix {
        &self.eigvecs
    }

    /// `M^t = U diag(w^t) U^T` for any real `t`. Positive definite for
    /// every exponent.
    pub fn power(&self, t: f64) -> SymMatrix {
        let n = self.dim();
        if t == 0.0 {
            return SymMatrix::identity(n);
        }
        let powered = DVector::from_iterator(n, self.eigvals.iter().map(|w| w.powf(t)));
        let m = &self.eigvecs * Matrix::from_diagonal(&powered) * self.eigvecs.transpose();
        SymMatrix::symmetrized(m)
    }

    pub fn condition_number(&self) -> f64 {
        self.eigvals[0] / self.eigvals[self.dim() - 1]
    }
}

/// Eigenvalues of a symmetric matrix raised to a real power.
pub fn pd_power(m: &PDMatrix, t: f64) -> SymMatrix {
    m.power(t)
}

/// Eigenvalues of an arbitrary square real matrix, deterministically ordered
/// with conjugate pairing enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<C64>,
}

impl Spectrum {
    /// Build from raw eigenvalues: pair near-conjugates exactly, then sort
    /// by descending real part, ties by descending imaginary part.
    pub fn from_values(mut values: Vec<C64>) -> Self {
        enforce_conjugate_pairs(&mut values);
        values.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        Self { values }
    }

    pub fn from_reals(reals: impl IntoIterator<Item = f64>) -> Self {
        Self::from_values(reals.into_iter().map(|r| C64::new(r, 0.0)).collect())
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min_real(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

/// Pairing tolerance for conjugate matching: `1e-8 * (1 + |lambda|)`.
fn pairing_tol(v: &C64) -> f64 {
    1e-8 * (1.0 + v.norm())
}

fn enforce_conjugate_pairs(values: &mut [C64]) {
    let n = values.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || values[i].im == 0.0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if j == i || used[j] || values[j].im.signum() == values[i].im.signum() {
                continue;
            }
            let dist = (values[i] - values[j].conj()).norm();
            if best.map(|(_, d)| dist < d).unwrap_or(true) {
                best = Some((j, dist));
            }
        }
        match best {
            Some((j, dist)) if dist <= pairing_tol(&values[i]) => {
                let re = 0.5 * (values[i].re + values[j].re);
                let im = 0.5 * (values[i].im.abs() + values[j].im.abs());
                let sign = values[i].im.signum();
                values[i] = C64::new(re, sign * im);
                values[j] = C64::new(re, -sign * im);
                used[i] = true;
                used[j] = true;
            }
            _ => {
                // Unpaired near-real value: collapse roundoff-sized
                // imaginary parts.
                if values[i].im.abs() <= pairing_tol(&values[i]) {
                    values[i] = C64::new(values[i].re, 0.0);
                }
                used[i] = true;
            }
        }
    }
}

/// All eigenvalues of a general square real matrix. The QR iteration's
/// deflation threshold starts at machine epsilon and is relaxed in a few
/// fixed steps: repeated eigenvalues can cycle forever at the tightest
/// setting while converging instantly one notch up.
pub fn eigenvalues_general(m: &Matrix) -> Result<Spectrum> {
    assert_eq!(m.nrows(), m.ncols(), "eigenvalues need a square matrix");
    // A nearly symmetric matrix gets the symmetric eigensolver: every
    // eigenvalue of M lies within ||M - M^T||/2 of one of (M + M^T)/2, and
    // the threshold sits far below the positivity tolerances. The QR
    // iteration below can spin forever on such matrices when the spectrum
    // is one tight cluster (a word on a commuting pair comes out as I plus
    // roundoff), so this is also the faster path for them.
    let scale = m.abs().max().max(1.0);
    let asym = (m - m.transpose()).abs().max();
    if asym <= 1e-10 * scale {
        let (vals, _) = SymMatrix::symmetrized(m.clone()).eigen_sorted();
        return Ok(Spectrum::from_values(
            vals.iter().map(|&v| C64::new(v, 0.0)).collect(),
        ));
    }
    for eps in [1.0, 4.0, 32.0, 1024.0].map(|f| f * f64::EPSILON) {
        if let Some(schur) = nalgebra::linalg::Schur::try_new(m.clone(), eps, SCHUR_MAX_ITER) {
            let vals = schur.complex_eigenvalues();
            return Ok(Spectrum::from_values(vals.iter().copied().collect()));
        }
    }
    Err(Error::ConvergenceFailure)
}

/// Schur complement `C = B22 - B21 B11^{-1} B12` of the leading `k x k`
/// block of a symmetric matrix.
pub fn schur_complement(b: &SymMatrix, k: usize) -> Result<SymMatrix> {
    let n = b.dim();
    if k == 0 || k >= n {
        return Err(Error::SplitOutOfRange { k, n });
    }
    let m = b.matrix();
    let b11 = m.view((0, 0), (k, k)).into_owned();
    let b12 = m.view((0, k), (k, n - k)).into_owned();
    let b21 = m.view((k, 0), (n - k, k)).into_owned();
    let b22 = m.view((k, k), (n - k, n - k)).into_owned();
    let solved = b11.lu().solve(&b12).ok_or(Error::SingularMatrix)?;
    SymMatrix::new(b22 - b21 * solved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag(vals: &[f64]) -> SymMatrix {
        SymMatrix::new(Matrix::from_diagonal(&DVector::from_row_slice(vals))).unwrap()
    }

    #[test]
    fn spectral_factor_identity() {
        let pd = spectral_factor(&SymMatrix::identity(3)).unwrap();
        assert_eq!(pd.eigvals(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn spectral_factor_diagonal_sorted() {
        let pd = spectral_factor(&diag(&[4.0, 9.0])).unwrap();
        assert_eq!(pd.eigvals(), &[9.0, 4.0]);
        // eigenvectors form a permutation of the standard basis
        for col in 0..2 {
            let c = pd.eigvecs().column(col);
            let ones = c.iter().filter(|v| (v.abs() - 1.0).abs() < 1e-12).count();
            let zeros = c.iter().filter(|v| v.abs() < 1e-12).count();
            assert_eq!((ones, zeros), (1, 1));
        }
    }

    #[test]
    fn spectral_factor_rejects_negative_definite() {
        let m = diag(&[-1.0, -1.0]);
        assert!(matches!(
            spectral_factor(&m),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 1.0]);
        assert!(matches!(
            SymMatrix::new(m),
            Err(Error::AsymmetricInput { .. })
        ));
    }

    #[test]
    fn pd_power_zero_is_identity() {
        let m = SymMatrix::from_row_slice(2, &[2.0, 1.0, 1.0, 1.0]).unwrap();
        let pd = spectral_factor(&m).unwrap();
        let id = pd.power(0.0);
        for (a, b) in id.matrix().iter().zip(Matrix::identity(2, 2).iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn pd_power_diagonal_square_root() {
        let pd = spectral_factor(&diag(&[4.0, 9.0])).unwrap();
        let root = pd.power(0.5);
        assert_relative_eq!(root.matrix()[(0, 0)], 2.0, epsilon = 1e-12);
        assert_relative_eq!(root.matrix()[(1, 1)], 3.0, epsilon = 1e-12);
        assert!(root.matrix()[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn general_eigenvalues_diagonal() {
        let m = Matrix::from_row_slice(3, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]);
        let s = eigenvalues_general(&m).unwrap();
        let re: Vec<f64> = s.values().iter().map(|v| v.re).collect();
        assert_eq!(re, vec![3.0, 2.0, 1.0]);
        assert_eq!(s.max_imag_abs(), 0.0);
    }

    #[test]
    fn general_eigenvalues_rotation() {
        let m = Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let s = eigenvalues_general(&m).unwrap();
        let v = s.values();
        assert_relative_eq!(v[0].im, 1.0, epsilon = 1e-12);
        assert_relative_eq!(v[1].im, -1.0, epsilon = 1e-12);
        assert!(v[0].re.abs() < 1e-12 && v[1].re.abs() < 1e-12);
        // exact conjugates after pairing
        assert_eq!(v[0].re, v[1].re);
        assert_eq!(v[0].im, -v[1].im);
    }

    #[test]
    fn general_eigenvalues_companion() {
        // companion matrix of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let m = Matrix::from_row_slice(3, 3, &[0.0, 0.0, 6.0, 1.0, 0.0, -11.0, 0.0, 1.0, 6.0]);
        let s = eigenvalues_general(&m).unwrap();
        let re: Vec<f64> = s.values().iter().map(|v| v.re).collect();
        assert_relative_eq!(re[0], 3.0, epsilon = 1e-9);
        assert_relative_eq!(re[1], 2.0, epsilon = 1e-9);
        assert_relative_eq!(re[2], 1.0, epsilon = 1e-9);
        assert!(s.max_imag_abs() < 1e-9);
    }

    #[test]
    fn schur_complement_hand_case() {
        let b = SymMatrix::from_row_slice(2, &[2.0, 1.0, 1.0, 1.0]).unwrap();
        let c = schur_complement(&b, 1).unwrap();
        assert_eq!(c.dim(), 1);
        assert_relative_eq!(c.matrix()[(0, 0)], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn schur_complement_block_diagonal() {
        let b = SymMatrix::from_row_slice(
            3,
            &[3.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0],
        )
        .unwrap();
        let c = schur_complement(&b, 2).unwrap();
        assert_relative_eq!(c.matrix()[(0, 0)], 5.0, epsilon = 1e-14);
    }

    #[test]
    fn schur_complement_split_range() {
        let b = SymMatrix::identity(2);
        assert!(matches!(
            schur_complement(&b, 0),
            Err(Error::SplitOutOfRange { .. })
        ));
        assert!(matches!(
            schur_complement(&b, 2),
            Err(Error::SplitOutOfRange { .. })
        ));
    }

    #[test]
    fn spectrum_ordering_with_complex_values() {
        let s = Spectrum::from_values(vec![
            C64::new(1.0, -2.0),
            C64::new(3.0, 0.0),
            C64::new(1.0, 2.0),
        ]);
        let v = s.values();
        assert_eq!(v[0], C64::new(3.0, 0.0));
        assert_eq!(v[1], C64::new(1.0, 2.0));
        assert_eq!(v[2], C64::new(1.0, -2.0));
    }
}
