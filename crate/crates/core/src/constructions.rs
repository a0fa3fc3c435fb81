//! Explicit constructions: the 3x3 all-positive-exponent counterexample,
//! the commutator-falsification family `A^m B A^{-m} B^{-1}` and its limit,
//! the epsilon family of 2x2 witnesses, and the exact projection-product
//! limits they converge to.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{spectral_factor, Matrix, PDMatrix, SymMatrix};
use crate::projections::two_eigenvalue_split;
use crate::rational::RationalMatrix;
use crate::word::{evaluate, EvalResult, ExponentSequence, Tolerances};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// The known 3x3 pair on which the word `A B A^2 B^2` has non-positive
/// spectrum despite all exponents being positive. Exact integer entries.
pub fn hijo_example() -> (RationalMatrix, RationalMatrix) {
    let a = RationalMatrix::from_i64_rows(&[
        &[1, 20, 210],
        &[20, 402, 4240],
        &[210, 4240, 44903],
    ]);
    let b = RationalMatrix::from_i64_rows(&[
        &[36501, -3820, 190],
        &[-3820, 401, -20],
        &[190, -20, 1],
    ]);
    (a, b)
}

/// The word this counterexample refutes: `A B A^2 B^2`.
pub fn hijo_sequence() -> ExponentSequence {
    ExponentSequence::from_int_pairs(&[(1, 1), (2, 2)])
}

/// Evaluate `A^m B A^{-m} B^{-1}` for a two-eigenvalue `A`. Positive for
/// every m exactly when A and B commute, so scanning m falsifies
/// commutativity.
pub fn thfour_word(a: &PDMatrix, b: &PDMatrix, m: u32, tol: &Tolerances) -> Result<EvalResult> {
    require_two_eigenvalues(a)?;
    let mi = i64::from(m);
    let seq = ExponentSequence::from_int_pairs(&[(mi, 1), (-mi, -1)]);
    evaluate(&seq, a, b, tol)
}

fn require_two_eigenvalues(a: &PDMatrix) -> Result<(f64, f64, crate::projections::OrthoProjection)> {
    match two_eigenvalue_split(a) {
        Ok((l1, l2, p)) if l1 > l2 => Ok((l1, l2, p)),
        Ok(_) => Err(Error::NotTwoEigenvalues),
        Err(_) => Err(Error::NotTwoEigenvalues),
    }
}

/// Limit data for `gamma^m A^m B A^{-m} B^{-1}` as m grows.
#[derive(Debug, Clone)]
pub struct ThfourLimit {
    /// The limit matrix, expressed in the sorted eigenbasis of A.
    pub matrix: Matrix,
    /// `lambda_2 / lambda_1 < 1`.
    pub gamma: f64,
    /// Orthogonal basis change applied first: columns are A's eigenvectors,
    /// the lambda_1 eigenspace leading.
    pub basis: Matrix,
    /// Size of the lambda_1 block.
    pub split: usize,
}

/// Closed form of the scaled limit: with `A = diag(l1 I, l2 I)` and B
/// partitioned conformally, `gamma^m A^m B A^{-m} B^{-1}` converges to
/// `[[-B12 C^{-1} B21 B11^{-1}, B12 C^{-1}], [0, 0]]`, `C` the Schur
/// complement of `B11`. Zero exactly when the blocks commute (`B12 = 0`).
pub fn thfour_limit(a: &PDMatrix, b: &PDMatrix) -> Result<ThfourLimit> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let (l1, l2, p) = require_two_eigenvalues(a)?;
    let n = a.dim();
    let k = p.rank();
    let basis = a.eigvecs().clone();
    let b_rot = basis.transpose() * b.matrix() * &basis;

    let b11 = b_rot.view((0, 0), (k, k)).into_owned();
    let b12 = b_rot.view((0, k), (k, n - k)).into_owned();
    let b21 = b_rot.view((k, 0), (n - k, k)).into_owned();
    let b22 = b_rot.view((k, k), (n - k, n - k)).into_owned();

    let b11_lu = b11.lu();
    let b11_inv_b12 = b11_lu.solve(&b12).ok_or(Error::SingularMatrix)?;
    let c = b22 - &b21 * &b11_inv_b12;
    let c_inv = c.lu().try_inverse().ok_or(Error::SingularMatrix)?;
    let b11_inv = b11_lu.try_inverse().ok_or(Error::SingularMatrix)?;

    let top_left = -(&b12 * &c_inv * &b21 * &b11_inv);
    let top_right = &b12 * &c_inv;
    let mut matrix = Matrix::zeros(n, n);
    matrix.view_mut((0, 0), (k, k)).copy_from(&top_left);
    matrix.view_mut((0, k), (k, n - k)).copy_from(&top_right);

    Ok(ThfourLimit {
        matrix,
        gamma: l2 / l1,
        basis,
        split: k,
    })
}

/// The 2x2 family `A(eps) = diag(1, eps)`,
/// `B(eps) = [[1/2 + eps, 1/2], [1/2, 1/2]]`, positive definite for every
/// `eps > 0`. As `eps -> 0` the powers of the pair converge (after
/// scaling) to products of two fixed projections.
#[derive(Debug, Clone)]
pub struct EpsilonFamily {
    pub seq: ExponentSequence,
    pub epsilon: f64,
    pub a: PDMatrix,
    pub b: PDMatrix,
}

/// Build the family for a sign-normalized sequence (first alpha and first
/// beta positive; flip letters to inverses beforehand if not).
pub fn epsilon_family(seq: &ExponentSequence, epsilon: f64) -> Result<EpsilonFamily> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    require_normalized(seq)?;
    let a = SymMatrix::from_row_slice(2, &[1.0, 0.0, 0.0, epsilon]).expect("symmetric");
    let b = SymMatrix::from_row_slice(2, &[0.5 + epsilon, 0.5, 0.5, 0.5]).expect("symmetric");
    Ok(EpsilonFamily {
        seq: seq.clone(),
        epsilon,
        a: spectral_factor(&a)?,
        b: spectral_factor(&b)?,
    })
}

/// Exact rational `A(2^-k)`, `B(2^-k)` for dyadic epsilon.
pub fn epsilon_family_rational(k: u32) -> (RationalMatrix, RationalMatrix) {
    let eps = BigRational::new(BigInt::one(), BigInt::from(2).pow(k));
    let half = rat(1, 2);
    let a = RationalMatrix::from_entries(
        2,
        vec![
            BigRational::one(),
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
            eps.clone(),
        ],
    );
    let b = RationalMatrix::from_entries(
        2,
        vec![&half + &eps, half.clone(), half.clone(), half],
    );
    (a, b)
}

fn require_normalized(seq: &ExponentSequence) -> Result<()> {
    if let Some((alpha, beta)) = seq.pairs().first() {
        if alpha.sign() < 0 || beta.sign() < 0 {
            return Err(Error::NotNormalized);
        }
    }
    Ok(())
}

/// The scaling that keeps `W(A(eps), B(eps))` bounded as `eps -> 0`:
/// `2^{sum of negative betas} * eps^{-(sum of negative alphas + betas)}`.
pub fn scale_factor(seq: &ExponentSequence, epsilon: f64) -> f64 {
    let neg_alpha: f64 = seq
        .alphas()
        .map(|e| e.as_f64())
        .filter(|&v| v < 0.0)
        .sum();
    let neg_beta: f64 = seq
        .betas()
        .map(|e| e.as_f64())
        .filter(|&v| v < 0.0)
        .sum();
    2f64.powf(neg_beta) * epsilon.powf(-(neg_alpha + neg_beta))
}

/// The projection constants the epsilon family degenerates to.
pub fn projection_p() -> RationalMatrix {
    RationalMatrix::from_i64_rows(&[&[1, 0], &[0, 0]])
}

pub fn projection_q() -> RationalMatrix {
    RationalMatrix::from_entries(2, vec![rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)])
}

fn complement(m: &RationalMatrix) -> RationalMatrix {
    RationalMatrix::identity(2).sub(m)
}

/// Exact limit of the scaled word: the product `P_1 Q_1 ... P_N Q_N` with
/// `P_j = P` for positive alpha and `I - P` otherwise, likewise `Q_j`.
/// Requires normalized signs so the first factor is `P` itself. Each
/// cancellation step halves the product's trace, so a sequence of class N
/// and reduced class m has trace `2^{m-N}` times its reduced sequence's.
pub fn projection_limit(seq: &ExponentSequence) -> Result<RationalMatrix> {
    require_normalized(seq)?;
    let p = projection_p();
    let q = projection_q();
    let mut out = RationalMatrix::identity(2);
    for (alpha, beta) in seq.pairs() {
        let pj = if alpha.sign() > 0 { p.clone() } else { complement(&p) };
        let qj = if beta.sign() > 0 { q.clone() } else { complement(&q) };
        out = out.mul(&pj).mul(&qj);
    }
    Ok(out)
}

/// Closed form of `(P Q (I-P) (I-Q))^k`:
/// `(1/4^k) [[(-1)^k, (-1)^{k-1}], [0, 0]]`.
pub fn pq_power(k: u32) -> RationalMatrix {
    assert!(k >= 1, "power must be at least 1");
    let four_k = BigRational::new(BigInt::one(), BigInt::from(4).pow(k));
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    RationalMatrix::from_entries(
        2,
        vec![
            &four_k * BigRational::from_integer(sign.into()),
            &four_k * BigRational::from_integer((-sign).into()),
            BigRational::from_integer(0.into()),
            BigRational::from_integer(0.into()),
        ],
    )
}

/// The eight exact identities the trace argument rests on: conjugating
/// either projection (or its complement) by the other averages it,
/// e.g. `P Q P = P/2` and `Q P Q = Q/2`.
pub fn projection_identities_check() -> Vec<(&'static str, bool)> {
    let p = projection_p();
    let q = projection_q();
    let ip = complement(&p);
    let iq = complement(&q);
    let half = rat(1, 2);
    let checks: Vec<(&'static str, RationalMatrix, &RationalMatrix)> = vec![
        ("PQP = P/2", p.mul(&q).mul(&p), &p),
        ("P(I-Q)P = P/2", p.mul(&iq).mul(&p), &p),
        ("(I-P)Q(I-P) = (I-P)/2", ip.mul(&q).mul(&ip), &ip),
        ("(I-P)(I-Q)(I-P) = (I-P)/2", ip.mul(&iq).mul(&ip), &ip),
        ("QPQ = Q/2", q.mul(&p).mul(&q), &q),
        ("Q(I-P)Q = Q/2", q.mul(&ip).mul(&q), &q),
        ("(I-Q)P(I-Q) = (I-Q)/2", iq.mul(&p).mul(&iq), &iq),
        ("(I-Q)(I-P)(I-Q) = (I-Q)/2", iq.mul(&ip).mul(&iq), &iq),
    ];
    checks
        .into_iter()
        .map(|(name, lhs, rhs)| (name, lhs == rhs.scale(&half)))
        .collect()
}
