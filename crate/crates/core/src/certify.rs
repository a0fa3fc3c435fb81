//! Exact certificates. A numeric verdict is a suspicion; these routines
//! turn it into a proof over the rationals: negative trace, charpoly
//! coefficient sign violations, or a Sturm count of positive real roots.
//! Also the canonical nonnegative pair for a multiplicity-(n-1) eigenvalue
//! and the Perron positive-eigenvalue check it feeds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, PDMatrix};
use crate::poly::{positive_roots_with_multiplicity, RatPoly};
use crate::projections::{cluster_eigenvalues, cluster_mean};
use crate::rational::{rational_to_string, RationalMatrix};
use crate::word::{evaluate_exact, ExponentSequence};

const PERRON_MAX_ITER: usize = 200_000;
const PERRON_REL_RESIDUAL: f64 = 1e-9;

/// An exact proof about a word's spectrum, ordered from cheapest to most
/// expensive to produce. `None` means all n roots of the characteristic
/// polynomial are real and positive, proved by the same exact machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// The trace is non-positive; a positive spectrum forces a positive trace.
    NegativeTrace { trace: BigRational },
    /// A monic charpoly with all-positive real roots has strictly
    /// alternating coefficient signs; this coefficient breaks the pattern.
    /// `index` is the power of x it multiplies.
    CoefficientSignViolation {
        index: usize,
        coefficient: BigRational,
    },
    /// Sturm count: fewer positive real roots (with multiplicity) than the
    /// dimension.
    SturmCount { positive: usize, dimension: usize },
    /// Perron bound: an entrywise-nonnegative word has its spectral radius
    /// as an eigenvalue, bounded below by this value.
    PerronPositive { lower_bound: f64 },
    /// No obstruction: the spectrum is provably all positive.
    None,
}

impl Certificate {
    /// Does this certificate prove the spectrum is not all positive?
    pub fn refutes_positivity(&self) -> bool {
        matches!(
            self,
            Certificate::NegativeTrace { .. }
                | Certificate::CoefficientSignViolation { .. }
                | Certificate::SturmCount { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::NegativeTrace { .. } => "negative-trace",
            Certificate::CoefficientSignViolation { .. } => "coefficient-sign-violation",
            Certificate::SturmCount { .. } => "sturm-count",
            Certificate::PerronPositive { .. } => "perron-positive",
            Certificate::None => "none",
        }
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::NegativeTrace { trace } => {
                write!(f, "negative trace {}", rational_to_string(trace))
            }
            Certificate::CoefficientSignViolation { index, coefficient } => write!(
                f,
                "coefficient of x^{index} is {}, breaking sign alternation",
                rational_to_string(coefficient)
            ),
            Certificate::SturmCount {
                positive,
                dimension,
            } => write!(
                f,
                "only {positive} of {dimension} roots are real and positive"
            ),
            Certificate::PerronPositive { lower_bound } => {
                write!(f, "positive eigenvalue at least {lower_bound}")
            }
            Certificate::None => write!(f, "all roots real and positive"),
        }
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Certificate::NegativeTrace { trace } => {
                let mut s = serializer.serialize_struct("Certificate", 2)?;
                s.serialize_field("kind", self.kind())?;
                s.serialize_field("trace", &rational_to_string(trace))?;
                s.end()
            }
            Certificate::CoefficientSignViolation { index, coefficient } => {
                let mut s = serializer.serialize_struct("Certificate", 3)?;
                s.serialize_field("kind", self.kind())?;
                s.serialize_field("index", index)?;
                s.serialize_field("coefficient", &rational_to_string(coefficient))?;
                s.end()
            }
            Certificate::SturmCount {
                positive,
                dimension,
            } => {
                let mut s = serializer.serialize_struct("Certificate", 3)?;
                s.serialize_field("kind", self.kind())?;
                s.serialize_field("positive", positive)?;
                s.serialize_field("dimension", dimension)?;
                s.end()
            }
            Certificate::PerronPositive { lower_bound } => {
                let mut s = serializer.serialize_struct("Certificate", 2)?;
                s.serialize_field("kind", self.kind())?;
                s.serialize_field("lower_bound", lower_bound)?;
                s.end()
            }
            Certificate::None => {
                let mut s = serializer.serialize_struct("Certificate", 1)?;
                s.serialize_field("kind", self.kind())?;
                s.end()
            }
        }
    }
}

/// Decide exactly whether the word has all-positive spectrum. Cheapest
/// proof first: non-positive trace, then a charpoly coefficient sign
/// violation, then an exact Sturm count of positive real roots with
/// multiplicity. Returns `Certificate::None` when the count reaches n.
pub fn sturm_decide(
    seq: &ExponentSequence,
    a: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<Certificate> {
    for e in seq.exponents() {
        if e.as_integer().is_none() {
            return Err(Error::NonIntegerExponent {
                value: e.to_string(),
            });
        }
    }
    let w = evaluate_exact(seq, a, b).map_err(|e| match e {
        Error::SingularMatrix => Error::SingularExactInverse,
        other => other,
    })?;
    let n = w.dim();
    let trace = w.trace();
    if !trace.is_positive() {
        return Ok(Certificate::NegativeTrace { trace });
    }
    let coeffs = w.charpoly();
    for power in (0..n).rev() {
        let k = n - power;
        let want_negative = k % 2 == 1;
        let c = &coeffs[power];
        let ok = if want_negative {
            c.is_negative()
        } else {
            c.is_positive()
        };
        if !ok {
            return Ok(Certificate::CoefficientSignViolation {
                index: power,
                coefficient: c.clone(),
            });
        }
    }
    let p = RatPoly::from_coeffs(coeffs);
    let positive = positive_roots_with_multiplicity(&p);
    if positive < n {
        Ok(Certificate::SturmCount {
            positive,
            dimension: n,
        })
    } else {
        Ok(Certificate::None)
    }
}

/// Canonical form for a pair where A has an eigenvalue of multiplicity
/// n-1: A becomes `diag(l1, ..., l1, l2)` and B becomes an arrowhead
/// matrix (diagonal upper-left block, nonnegative last row and column),
/// both under one orthogonal transform.
#[derive(Debug, Clone)]
pub struct CanonicalPair {
    pub a0: Matrix,
    pub b0: Matrix,
    pub u: Matrix,
}

pub fn multeig_canonical(a: &PDMatrix, b: &PDMatrix) -> Result<CanonicalPair> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let n = a.dim();
    if n == 1 {
        return Ok(CanonicalPair {
            a0: a.matrix().clone(),
            b0: b.matrix().clone(),
            u: Matrix::identity(1, 1),
        });
    }
    let vals = a.eigvals();
    let clusters = cluster_eigenvalues(vals);
    let repeated = clusters
        .iter()
        .position(|&(lo, hi)| hi - lo >= n.saturating_sub(1))
        .ok_or_else(|| Error::MultiplicityTooLow {
            sizes: clusters.iter().map(|&(lo, hi)| hi - lo).collect(),
        })?;
    let (lo, hi) = clusters[repeated];
    let l1 = cluster_mean(vals, &clusters[repeated]);

    // Column indices for the repeated eigenspace and the leftover direction.
    // A full-multiplicity cluster donates its last column as the leftover.
    let (space_cols, lone_col, l2) = if hi - lo == n {
        ((lo..hi - 1).collect::<Vec<_>>(), hi - 1, l1)
    } else {
        let lone_cluster = if repeated == 0 { 1 } else { 0 };
        let lone = clusters[lone_cluster].0;
        ((lo..hi).collect(), lone, cluster_mean(vals, &clusters[lone_cluster]))
    };

    let vecs = a.eigvecs();
    let mut v = Matrix::zeros(n, n - 1);
    for (j, &col) in space_cols.iter().enumerate() {
        v.set_column(j, &vecs.column(col));
    }
    let w = vecs.column(lone_col).into_owned();

    let small = crate::matrix::SymMatrix::new(v.transpose() * b.matrix() * &v)?;
    let (d, s) = small.eigen_sorted();
    let mut vs = v * s;
    let couplings = vs.transpose() * b.matrix() * &w;
    for i in 0..n - 1 {
        if couplings[i] < 0.0 {
            let flipped = -vs.column(i).into_owned();
            vs.set_column(i, &flipped);
        }
    }

    let mut u = Matrix::zeros(n, n);
    u.view_mut((0, 0), (n, n - 1)).copy_from(&vs);
    u.set_column(n - 1, &w);

    let mut a0 = Matrix::zeros(n, n);
    for i in 0..n - 1 {
        a0[(i, i)] = l1;
    }
    a0[(n - 1, n - 1)] = l2;

    let mut b0 = Matrix::zeros(n, n);
    for i in 0..n - 1 {
        b0[(i, i)] = d[i];
        let g = couplings[i].abs();
        b0[(i, n - 1)] = g;
        b0[(n - 1, i)] = g;
    }
    b0[(n - 1, n - 1)] = (w.transpose() * b.matrix() * &w)[(0, 0)];

    Ok(CanonicalPair { a0, b0, u })
}

/// Certify the spectral radius of an entrywise-nonnegative matrix as a
/// positive eigenvalue, by shifted power iteration. The shift (the maximum
/// row sum) makes the dominant eigenvalue of the iterated matrix
/// nonnegative real, so the iteration converges for every starting sign
/// pattern.
pub fn perron_positive(w: &Matrix) -> Result<f64> {
    let n = w.nrows();
    assert_eq!(n, w.ncols(), "square matrix required");
    assert!(n > 0, "empty matrix");
    for i in 0..n {
        for j in 0..n {
            if w[(i, j)] < 0.0 {
                return Err(Error::NegativeEntry {
                    i,
                    j,
                    value: w[(i, j)],
                });
            }
        }
    }
    let shift = (0..n)
        .map(|i| w.row(i).iter().sum::<f64>())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut v = nalgebra::DVector::from_element(n, 1.0 / (n as f64).sqrt());
    for _ in 0..PERRON_MAX_ITER {
        let u = w * &v + &v * shift;
        let norm = u.norm();
        if norm == 0.0 {
            return Err(Error::ConvergenceFailure);
        }
        let next = u / norm;
        let rho = (w * &next).dot(&next);
        let residual = (w * &next - &next * rho).norm();
        v = next;
        if residual <= PERRON_REL_RESIDUAL * rho.abs().max(1.0) {
            return Ok(rho);
        }
    }
    Err(Error::ConvergenceFailure)
}

/// Best rational approximation with bounded denominator, by continued
/// fractions with a final semiconvergent comparison.
fn best_rational(x: f64, max_denominator: u64) -> BigRational {
    assert!(x.is_finite(), "entries must be finite");
    assert!(max_denominator >= 1);
    if x == 0.0 {
        return BigRational::zero();
    }
    let target = x.abs();
    if target >= 1e18 {
        return crate::rational::rational_from_f64(x).round();
    }
    let md = max_denominator as i128;
    let (mut p0, mut q0): (i128, i128) = (0, 1);
    let (mut p1, mut q1): (i128, i128) = (1, 0);
    let mut xi = target;
    loop {
        let af = xi.floor();
        let a = af as i128;
        let next = match (a.checked_mul(p1), a.checked_mul(q1)) {
            (Some(ap), Some(aq)) => match (ap.checked_add(p0), aq.checked_add(q0)) {
                (Some(p2), Some(q2)) => Some((p2, q2)),
                _ => None,
            },
            _ => None,
        };
        let (p2, q2) = match next {
            Some(pair) => pair,
            None => break,
        };
        if q2 > md {
            let k = (md - q0) / q1;
            if k >= 1 {
                let sp = k * p1 + p0;
                let sq = k * q1 + q0;
                let err_semi = (target - sp as f64 / sq as f64).abs();
                let err_conv = (target - p1 as f64 / q1 as f64).abs();
                if err_semi < err_conv {
                    p1 = sp;
                    q1 = sq;
                }
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = xi - af;
        if frac <= 0.0 {
            break;
        }
        let inv = 1.0 / frac;
        if !inv.is_finite() {
            break;
        }
        xi = inv;
    }
    let mut r = BigRational::new(BigInt::from(p1), BigInt::from(q1.max(1)));
    if x < 0.0 {
        r = -r;
    }
    r
}

/// Lift a float matrix to exact rationals: symmetrize by averaging
/// mirrored entries, then approximate each entry by the best rational
/// with denominator at most the bound.
pub fn rationalize(m: &Matrix, max_denominator: u64) -> RationalMatrix {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    let mut entries = vec![BigRational::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            let r = best_rational(avg, max_denominator);
            entries[i * n + j] = r.clone();
            entries[j * n + i] = r;
        }
    }
    RationalMatrix::from_entries(n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{hijo_example, hijo_sequence};
    use crate::matrix::{eigenvalues_general, spectral_factor, SymMatrix};
    use crate::word::{evaluate, Tolerances, VerdictKind};
    use approx::assert_relative_eq;
    use nalgebra::DVector;
    use num_traits::One;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn pd_diag(vals: &[f64]) -> PDMatrix {
        let m = Matrix::from_diagonal(&DVector::from_row_slice(vals));
        spectral_factor(&SymMatrix::new(m).unwrap()).unwrap()
    }

    fn pd(entries: &[f64], n: usize) -> PDMatrix {
        spectral_factor(&SymMatrix::from_row_slice(n, entries).unwrap()).unwrap()
    }

    #[test]
    fn empty_word_decides_none() {
        let a = RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let b = RationalMatrix::identity(2);
        let seq = ExponentSequence::empty();
        assert_eq!(sturm_decide(&seq, &a, &b).unwrap(), Certificate::None);
    }

    #[test]
    fn commuting_pair_decides_none() {
        let a = RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let b = RationalMatrix::identity(2);
        let seq = ExponentSequence::from_int_pairs(&[(1, 1)]);
        assert_eq!(sturm_decide(&seq, &a, &b).unwrap(), Certificate::None);
    }

    #[test]
    fn hijo_word_yields_negative_trace() {
        let (a, b) = hijo_example();
        let cert = sturm_decide(&hijo_sequence(), &a, &b).unwrap();
        assert_eq!(
            cert,
            Certificate::NegativeTrace {
                trace: rat(-3164, 1)
            }
        );
        assert!(cert.refutes_positivity());
    }

    #[test]
    fn complex_pair_with_positive_trace_caught_by_sturm() {
        // commutator of [[2,1],[1,1]] and diag(1,2): the word value is
        // [[0,1],[-1,3/2]], trace 3/2 and determinant 1, so the charpoly
        // signs alternate but both roots are complex
        let a = RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let b = RationalMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        let seq = ExponentSequence::from_int_pairs(&[(1, 1), (-1, -1)]);
        let w = evaluate_exact(&seq, &a, &b).unwrap();
        assert_eq!(w.trace(), rat(3, 2));
        let cert = sturm_decide(&seq, &a, &b).unwrap();
        assert_eq!(
            cert,
            Certificate::SturmCount {
                positive: 0,
                dimension: 2
            }
        );
    }

    #[test]
    fn non_integer_exponent_rejected() {
        let a = RationalMatrix::identity(2);
        let seq = ExponentSequence::from_pairs(vec![(
            crate::word::Exponent::rat(1, 2),
            crate::word::Exponent::one(),
        )]);
        assert!(matches!(
            sturm_decide(&seq, &a, &a.clone()),
            Err(Error::NonIntegerExponent { .. })
        ));
    }

    #[test]
    fn alternation_holds_when_none() {
        let a = RationalMatrix::from_i64_rows(&[&[3, 1], &[1, 2]]);
        let b = RationalMatrix::from_i64_rows(&[&[4, -1], &[-1, 2]]);
        let seq = ExponentSequence::from_int_pairs(&[(2, 1), (-1, 2)]);
        let cert = sturm_decide(&seq, &a, &b).unwrap();
        if cert == Certificate::None {
            let w = evaluate_exact(&seq, &a, &b).unwrap();
            let coeffs = w.charpoly();
            let n = w.dim();
            for (power, coeff) in coeffs.iter().enumerate().take(n) {
                let k = n - power;
                assert_eq!(coeff.is_negative(), k % 2 == 1);
            }
        }
    }

    #[test]
    fn canonical_pair_scalar_a() {
        let a = pd_diag(&[2.0, 2.0, 2.0]);
        let b = pd_diag(&[1.0, 5.0, 3.0]);
        let cp = multeig_canonical(&a, &b).unwrap();
        assert_relative_eq!(cp.a0, Matrix::identity(3, 3) * 2.0, epsilon = 1e-12);
        let ub = cp.u.transpose() * b.matrix() * &cp.u;
        assert_relative_eq!(&ub, &cp.b0, epsilon = 1e-9);
        for i in 0..2 {
            for j in 0..2 {
                if i != j {
                    assert!(cp.b0[(i, j)].abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn canonical_pair_generic() {
        let a = pd_diag(&[5.0, 5.0, 1.0]);
        let b = pd(
            &[
                2.0, 0.4, -0.7, //
                0.4, 1.5, 0.3, //
                -0.7, 0.3, 1.2,
            ],
            3,
        );
        let cp = multeig_canonical(&a, &b).unwrap();
        let n = 3;
        // orthogonality and reconstruction
        let gram = cp.u.transpose() * &cp.u;
        assert_relative_eq!(&gram, &Matrix::identity(n, n), epsilon = 1e-9);
        let ua = cp.u.transpose() * a.matrix() * &cp.u;
        assert_relative_eq!(&ua, &cp.a0, epsilon = 1e-9 * n as f64);
        let ub = cp.u.transpose() * b.matrix() * &cp.u;
        assert_relative_eq!(&ub, &cp.b0, epsilon = 1e-9 * n as f64);
        // arrowhead with nonnegative couplings, entrywise nonnegative
        assert!(cp.b0[(0, 1)].abs() < 1e-10);
        for i in 0..n {
            assert!(cp.b0[(i, n - 1)] >= 0.0);
            assert!(cp.b0[(n - 1, i)] >= 0.0);
            assert!(cp.a0[(i, i)] > 0.0);
            assert!(cp.b0[(i, i)] > 0.0);
        }
        assert_relative_eq!(cp.a0[(0, 0)], 5.0, epsilon = 1e-12);
        assert_relative_eq!(cp.a0[(2, 2)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn canonical_pair_repeated_smaller_eigenvalue() {
        let a = pd_diag(&[7.0, 2.0, 2.0]);
        let b = pd(
            &[
                1.0, 0.2, 0.1, //
                0.2, 2.0, -0.4, //
                0.1, -0.4, 3.0,
            ],
            3,
        );
        let cp = multeig_canonical(&a, &b).unwrap();
        assert_relative_eq!(cp.a0[(0, 0)], 2.0, epsilon = 1e-12);
        assert_relative_eq!(cp.a0[(1, 1)], 2.0, epsilon = 1e-12);
        assert_relative_eq!(cp.a0[(2, 2)], 7.0, epsilon = 1e-12);
    }

    #[test]
    fn multiplicity_too_low_rejected() {
        let a = pd_diag(&[5.0, 5.0, 2.0, 1.0]);
        let b = pd_diag(&[1.0, 2.0, 3.0, 4.0]);
        match multeig_canonical(&a, &b) {
            Err(Error::MultiplicityTooLow { sizes }) => {
                assert_eq!(sizes, vec![2, 1, 1]);
            }
            other => panic!("expected MultiplicityTooLow, got {other:?}"),
        }
    }

    #[test]
    fn lemma_word_nonnegative_and_perron_positive() {
        let a = pd_diag(&[5.0, 5.0, 1.0]);
        let b = pd(
            &[
                2.0, 0.4, -0.7, //
                0.4, 1.5, 0.3, //
                -0.7, 0.3, 1.2,
            ],
            3,
        );
        let cp = multeig_canonical(&a, &b).unwrap();
        let a0 = spectral_factor(&SymMatrix::new(cp.a0.clone()).unwrap()).unwrap();
        let b0 = spectral_factor(&SymMatrix::new(cp.b0.clone()).unwrap()).unwrap();
        let seq = ExponentSequence::from_int_pairs(&[(-2, 1), (1, 3)]);
        let w = evaluate(&seq, &a0, &b0, &Tolerances::default()).unwrap();
        let n = w.matrix.nrows();
        let mut clamped = w.matrix.clone();
        for i in 0..n {
            for j in 0..n {
                assert!(clamped[(i, j)] > -1e-9, "entry ({i},{j}) negative");
                clamped[(i, j)] = clamped[(i, j)].max(0.0);
            }
        }
        let rho = perron_positive(&clamped).unwrap();
        assert!(rho > 0.0);
        let spec = eigenvalues_general(&w.matrix).unwrap();
        let max_re = spec.values().iter().map(|z| z.re).fold(f64::MIN, f64::max);
        assert_relative_eq!(rho, max_re, epsilon = 1e-6 * max_re.abs());
    }

    #[test]
    fn perron_known_values() {
        assert_relative_eq!(
            perron_positive(&Matrix::identity(2, 2)).unwrap(),
            1.0,
            epsilon = 1e-9
        );
        let ones = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert_relative_eq!(perron_positive(&ones).unwrap(), 2.0, epsilon = 1e-8);
        let m = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert_relative_eq!(perron_positive(&m).unwrap(), 3.0, epsilon = 1e-8);
    }

    #[test]
    fn perron_rejects_negative_entry() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, -0.5, 0.0, 1.0]);
        match perron_positive(&m) {
            Err(Error::NegativeEntry { i, j, value }) => {
                assert_eq!((i, j), (0, 1));
                assert_relative_eq!(value, -0.5);
            }
            other => panic!("expected NegativeEntry, got {other:?}"),
        }
    }

    #[test]
    fn best_rational_basics() {
        assert_eq!(best_rational(0.5, 1_000_000), rat(1, 2));
        assert_eq!(best_rational(0.333333333, 1_000_000), rat(1, 3));
        assert_eq!(best_rational(-0.25, 100), rat(-1, 4));
        assert_eq!(best_rational(3.0, 10), rat(3, 1));
        assert_eq!(
            best_rational(std::f64::consts::PI, 10),
            rat(22, 7)
        );
        assert_eq!(
            best_rational(std::f64::consts::PI, 120),
            rat(355, 113)
        );
        assert_eq!(best_rational(0.0, 10), BigRational::zero());
    }

    #[test]
    fn rationalize_symmetrizes() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 0.3, 0.5, 2.0]);
        let r = rationalize(&m, 1000);
        assert_eq!(r[(0, 1)], r[(1, 0)]);
        assert_eq!(r[(0, 1)], rat(2, 5));
        assert_eq!(r[(0, 0)], BigRational::one());
    }

    #[test]
    fn rationalize_roundtrips_small_denominators() {
        let exact = RationalMatrix::from_entries(
            2,
            vec![rat(7, 3), rat(-1, 6), rat(-1, 6), rat(5, 2)],
        );
        let floats = exact.to_f64();
        let m = Matrix::from_row_slice(2, 2, &floats);
        assert_eq!(rationalize(&m, 1000), exact);
    }

    #[test]
    fn hijo_pipeline_float_to_exact() {
        let (a, b) = hijo_example();
        let af = spectral_factor(&SymMatrix::from_row_slice(3, &a.to_f64()).unwrap()).unwrap();
        let bf = spectral_factor(&SymMatrix::from_row_slice(3, &b.to_f64()).unwrap()).unwrap();
        let r = evaluate(&hijo_sequence(), &af, &bf, &Tolerances::default()).unwrap();
        assert_eq!(r.verdict.kind, VerdictKind::NotAllPositive);
        let ar = rationalize(af.matrix(), 1 << 20);
        let br = rationalize(bf.matrix(), 1 << 20);
        assert!(ar.is_positive_definite());
        assert!(br.is_positive_definite());
        let cert = sturm_decide(&hijo_sequence(), &ar, &br).unwrap();
        assert!(cert.refutes_positivity());
    }

    #[test]
    fn certificate_serialization() {
        let cert = Certificate::NegativeTrace { trace: rat(-7, 2) };
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["kind"], "negative-trace");
        assert_eq!(json["trace"], "-7/2");
        let none = serde_json::to_value(&Certificate::None).unwrap();
        assert_eq!(none["kind"], "none");
    }
}
