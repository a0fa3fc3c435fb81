//! Two-projection canonical form and blockwise evaluation for
//! two-eigenvalue matrices.
//!
//! Any positive definite matrix with at most two distinct eigenvalues is
//! `(l1 - l2) P + l2 I` for an orthoprojection P. Two orthoprojections can
//! be simultaneously block-diagonalized with blocks of size at most 2
//! (principal-angle construction), which reduces word evaluation on
//! two-eigenvalue pairs to independent scalar and 2x2 problems.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matrix::{spectral_factor, Matrix, PDMatrix, Spectrum, SymMatrix};
use crate::word::{evaluate, EvalResult, ExponentSequence, Tolerances};

/// Relative eigenvalue gap below which two eigenvalues land in one cluster.
pub const CLUSTER_REL_GAP: f64 = 1e-6;

/// Principal angles closer than this to 0 or pi/2 are reassigned to the
/// intersection subspaces.
const ANGLE_REASSIGN_TOL: f64 = 1e-10;

/// Symmetric idempotent matrix.
#[derive(Debug, Clone)]
pub struct OrthoProjection {
    matrix: SymMatrix,
    rank: usize,
}

impl OrthoProjection {
    /// Validate idempotency within `1e-10 * n` and take the rank from the
    /// trace.
    pub fn new(m: SymMatrix) -> Result<Self> {
        let n = m.dim();
        let p = m.matrix();
        let residual = (p * p - p).abs().max();
        if residual > 1e-10 * n as f64 {
            return Err(Error::ExactModeUnsupported {
                reason: format!("matrix is not idempotent: |P^2 - P| = {residual:e}"),
            });
        }
        let rank = p.trace().round() as usize;
        Ok(Self { matrix: m, rank })
    }

    /// `V V^T` for orthonormal columns `V`.
    pub fn from_orthonormal_columns(v: &Matrix) -> Self {
        let p = v * v.transpose();
        Self {
            matrix: SymMatrix::symmetrized(p),
            rank: v.ncols(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: SymMatrix::identity(n),
            rank: n,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &Matrix {
        self.matrix.matrix()
    }

    pub fn sym(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn complement(&self) -> Self {
        let n = self.dim();
        Self {
            matrix: SymMatrix::symmetrized(Matrix::identity(n, n) - self.matrix()),
            rank: n - self.rank,
        }
    }

    /// Orthonormal basis of the range (eigenvectors at eigenvalue 1).
    pub fn range_basis(&self) -> Matrix {
        let (_, vecs) = self.matrix.eigen_sorted();
        vecs.columns(0, self.rank).into_owned()
    }
}

/// Write a two-eigenvalue positive definite matrix as
/// `(l1 - l2) P + l2 I`, `l1 >= l2`. Scalar matrices take `P = I` with
/// `l1 = l2`. Eigenvalues cluster at relative gap `1e-6`; more than two
/// clusters is an error reporting the cluster diameters.
pub fn two_eigenvalue_split(a: &PDMatrix) -> Result<(f64, f64, OrthoProjection)> {
    let clusters = cluster_eigenvalues(a.eigvals());
    match clusters.len() {
        1 => {
            let mean = cluster_mean(a.eigvals(), &clusters[0]);
            Ok((mean, mean, OrthoProjection::identity(a.dim())))
        }
        2 => {
            let l1 = cluster_mean(a.eigvals(), &clusters[0]);
            let l2 = cluster_mean(a.eigvals(), &clusters[1]);
            let (lo, hi) = clusters[0];
            let basis = a.eigvecs().columns(lo, hi - lo).into_owned();
            Ok((l1, l2, OrthoProjection::from_orthonormal_columns(&basis)))
        }
        _ => Err(Error::MoreThanTwoEigenvalues {
            diameters: clusters
                .iter()
                .map(|&(lo, hi)| a.eigvals()[lo] - a.eigvals()[hi - 1])
                .collect(),
            tolerance: CLUSTER_REL_GAP,
        }),
    }
}

/// Half-open index ranges of clusters in a descending eigenvalue list.
pub(crate) fn cluster_eigenvalues(vals: &[f64]) -> Vec<(usize, usize)> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..vals.len() {
        let gap = (vals[i - 1] - vals[i]) / vals[i - 1].abs().max(f64::MIN_POSITIVE);
        if gap > CLUSTER_REL_GAP {
            clusters.push((start, i));
            start = i;
        }
    }
    clusters.push((start, vals.len()));
    clusters
}

pub(crate) fn cluster_mean(vals: &[f64], &(lo, hi): &(usize, usize)) -> f64 {
    vals[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
}

/// One joint block of the canonical form. For 2x2 blocks the P-block is
/// `diag(1, 0)` and the Q-block is the principal-angle rotation of it.
#[derive(Debug, Clone)]
pub struct FormBlock {
    pub size: usize,
    pub p_block: Matrix,
    pub q_block: Matrix,
    /// Principal angle in radians; 0 or pi/2 for the 1x1 intersection
    /// blocks, interior for 2x2 blocks.
    pub angle: f64,
}

/// Simultaneous block-diagonalization of two orthoprojections: an
/// orthogonal `U` with `U^T P U` and `U^T Q U` block-diagonal, all blocks
/// of size at most 2.
#[derive(Debug, Clone)]
pub struct TwoProjectionForm {
    pub u: Matrix,
    pub blocks: Vec<FormBlock>,
}

impl TwoProjectionForm {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    /// Assemble the block-diagonal matrices `U^T P U` and `U^T Q U`.
    pub fn block_diagonals(&self) -> (Matrix, Matrix) {
        let n = self.u.nrows();
        let mut p = Matrix::zeros(n, n);
        let mut q = Matrix::zeros(n, n);
        let mut at = 0;
        for b in &self.blocks {
            p.view_mut((at, at), (b.size, b.size)).copy_from(&b.p_block);
            q.view_mut((at, at), (b.size, b.size)).copy_from(&b.q_block);
            at += b.size;
        }
        (p, q)
    }
}

fn unit_block(v: f64) -> Matrix {
    Matrix::from_element(1, 1, v)
}

fn column_matrix(rows: usize, cols: &[DVector<f64>]) -> Matrix {
    let mut m = Matrix::zeros(rows, cols.len());
    for (c, col) in cols.iter().enumerate() {
        m.set_column(c, col);
    }
    m
}

/// Directions of `span(basis)` orthogonal to `basis * consumed`, where the
/// columns of both `basis` and `consumed` are orthonormal.
fn range_complement(basis: &Matrix, consumed: &Matrix) -> Vec<DVector<f64>> {
    let r = basis.ncols();
    let k = consumed.ncols();
    if r <= k {
        return Vec::new();
    }
    let residual = Matrix::identity(r, r) - consumed * consumed.transpose();
    let (vals, vecs) = SymMatrix::symmetrized(residual).eigen_sorted();
    let mut out = Vec::with_capacity(r - k);
    for (i, &v) in vals.iter().enumerate() {
        if v > 0.5 && out.len() < r - k {
            out.push(basis * vecs.column(i).into_owned());
        }
    }
    out
}

/// Canonical form of a projection pair via principal angles between the
/// ranges. Intersection directions (angle at 0 or pi/2 within 1e-10)
/// become 1x1 blocks; the generic part splits into 2x2 blocks.
pub fn halmos_form(p: &OrthoProjection, q: &OrthoProjection) -> TwoProjectionForm {
    assert_eq!(p.dim(), q.dim(), "projections must share a dimension");
    let n = p.dim();
    let up = p.range_basis();
    let uq = q.range_basis();
    let rp = p.rank();
    let rq = q.rank();

    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut blocks: Vec<FormBlock> = Vec::new();
    let push_single = |columns: &mut Vec<DVector<f64>>,
                           blocks: &mut Vec<FormBlock>,
                           v: DVector<f64>,
                           in_p: bool,
                           in_q: bool| {
        columns.push(v);
        blocks.push(FormBlock {
            size: 1,
            p_block: unit_block(if in_p { 1.0 } else { 0.0 }),
            q_block: unit_block(if in_q { 1.0 } else { 0.0 }),
            angle: if in_p == in_q {
                0.0
            } else {
                std::f64::consts::FRAC_PI_2
            },
        });
    };

    if rp > 0 && rq > 0 {
        let m = up.transpose() * &uq;
        // Principal pairs come from the smaller Gram side; the partner
        // direction is derived by applying m rather than read off a one-shot
        // SVD, whose u/v columns can pair degenerate angle clusters
        // inconsistently.
        let mut px_used: Vec<DVector<f64>> = Vec::with_capacity(rp);
        let mut qy_used: Vec<DVector<f64>> = Vec::with_capacity(rq);
        let mut pairs: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::new();
        if rq <= rp {
            let (_, vecs) = SymMatrix::symmetrized(m.transpose() * &m).eigen_sorted();
            for i in 0..rq {
                let y = vecs.column(i).into_owned();
                let image = &m * &y;
                let sigma = image.norm();
                qy_used.push(y.clone());
                if sigma <= ANGLE_REASSIGN_TOL {
                    // ran Q direction inside ker P.
                    push_single(&mut columns, &mut blocks, &uq * &y, false, true);
                } else {
                    let x = image / sigma;
                    px_used.push(x.clone());
                    pairs.push((sigma, x, y));
                }
            }
        } else {
            let (_, vecs) = SymMatrix::symmetrized(&m * m.transpose()).eigen_sorted();
            for i in 0..rp {
                let x = vecs.column(i).into_owned();
                let image = m.transpose() * &x;
                let sigma = image.norm();
                px_used.push(x.clone());
                if sigma <= ANGLE_REASSIGN_TOL {
                    // ran P direction inside ker Q.
                    push_single(&mut columns, &mut blocks, &up * &x, true, false);
                } else {
                    let y = image / sigma;
                    qy_used.push(y.clone());
                    pairs.push((sigma, x, y));
                }
            }
        }

        // Classify each pair by the residual of y against x; near sigma = 1
        // this stays accurate where sqrt(1 - sigma^2) loses every
        // significant digit to cancellation.
        for (sigma, x, y) in &pairs {
            let xv = &up * x;
            let yv = &uq * y;
            let sigma = sigma.clamp(0.0, 1.0);
            let residual = &yv - &xv * sigma;
            let sin = residual.norm();
            if sin <= ANGLE_REASSIGN_TOL {
                // ran P intersect ran Q: one shared direction.
                push_single(&mut columns, &mut blocks, xv, true, true);
            } else {
                let z = residual / sin;
                columns.push(xv);
                columns.push(z);
                blocks.push(FormBlock {
                    size: 2,
                    p_block: Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
                    q_block: Matrix::from_row_slice(
                        2,
                        2,
                        &[sigma * sigma, sigma * sin, sigma * sin, sin * sin],
                    ),
                    angle: sigma.acos(),
                });
            }
        }

        // Range directions the pairing never consumed (rank difference):
        // they sit inside the other projection's kernel. The principal
        // vectors mix the raw basis columns, so take the orthonormal
        // complement of the consumed coordinates instead.
        for v in range_complement(&up, &column_matrix(rp, &px_used)) {
            push_single(&mut columns, &mut blocks, v, true, false);
        }
        for v in range_complement(&uq, &column_matrix(rq, &qy_used)) {
            push_single(&mut columns, &mut blocks, v, false, true);
        }
    } else {
        for i in 0..rp {
            push_single(&mut columns, &mut blocks, up.column(i).into_owned(), true, false);
        }
        for j in 0..rq {
            push_single(&mut columns, &mut blocks, uq.column(j).into_owned(), false, true);
        }
    }

    // ker P intersect ker Q: everything orthogonal to the columns so far.
    let assembled = columns.len();
    if assembled < n {
        let mut partial = Matrix::zeros(n, assembled.max(1));
        for (c, col) in columns.iter().enumerate() {
            partial.set_column(c, col);
        }
        let residual_proj = if assembled == 0 {
            Matrix::identity(n, n)
        } else {
            Matrix::identity(n, n) - &partial * partial.transpose()
        };
        let (vals, vecs) = SymMatrix::symmetrized(residual_proj).eigen_sorted();
        for (i, &v) in vals.iter().enumerate() {
            if v > 0.5 && columns.len() < n {
                columns.push(vecs.column(i).into_owned());
                blocks.push(FormBlock {
                    size: 1,
                    p_block: unit_block(0.0),
                    q_block: unit_block(0.0),
                    angle: 0.0,
                });
            }
        }
    }
    debug_assert_eq!(columns.len(), n, "basis must fill the space");

    let mut u = Matrix::zeros(n, n);
    for (c, col) in columns.iter().enumerate() {
        u.set_column(c, col);
    }
    TwoProjectionForm { u, blocks }
}

/// Per-block evaluation of a word on a two-eigenvalue pair, plus the merged
/// spectrum. Equals the direct evaluation spectrum up to roundoff, but each
/// block is a trivial 1x1 or 2x2 problem.
pub fn blockwise_evaluate(
    seq: &ExponentSequence,
    a: &PDMatrix,
    b: &PDMatrix,
    tol: &Tolerances,
) -> Result<(Vec<EvalResult>, Spectrum)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let (l1, l2, p) = two_eigenvalue_split(a)?;
    let (m1, m2, q) = two_eigenvalue_split(b)?;
    let form = halmos_form(&p, &q);

    let mut results = Vec::with_capacity(form.blocks.len());
    let mut merged = Vec::with_capacity(a.dim());
    for block in &form.blocks {
        let size = block.size;
        let a_j = &block.p_block * (l1 - l2) + Matrix::identity(size, size) * l2;
        let b_j = &block.q_block * (m1 - m2) + Matrix::identity(size, size) * m2;
        let a_j = spectral_factor(&SymMatrix::symmetrized(a_j))?;
        let b_j = spectral_factor(&SymMatrix::symmetrized(b_j))?;
        let r = evaluate(seq, &a_j, &b_j, tol)?;
        merged.extend_from_slice(r.spectrum.values());
        results.push(r);
    }
    Ok((results, Spectrum::from_values(merged)))
}
