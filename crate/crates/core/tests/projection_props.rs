//! Structural checks on the two-projection canonical form and the
//! block-diagonal evaluation path for two-eigenvalue pairs.

use gword::{
    blockwise_evaluate, evaluate, halmos_form, spectral_factor, verdict_from_spectrum, Exponent,
    ExponentSequence, Matrix, OrthoProjection, SymMatrix, Tolerances, VerdictKind, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let gauss = Matrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    gauss.qr().q()
}

fn random_projection(n: usize, rng: &mut ChaCha8Rng) -> OrthoProjection {
    let k = rng.gen_range(0..=n);
    let q = random_orthogonal(n, rng);
    OrthoProjection::from_orthonormal_columns(&q.columns(0, k).into_owned())
}

fn two_eigenvalue_pd(n: usize, rng: &mut ChaCha8Rng) -> gword::PDMatrix {
    let l2 = rng.gen_range(0.7..1.1);
    let l1 = l2 * rng.gen_range(1.3..1.6);
    let k = rng.gen_range(1..n);
    let q = random_orthogonal(n, rng);
    let mut diag = Matrix::zeros(n, n);
    for i in 0..n {
        diag[(i, i)] = if i < k { l1 } else { l2 };
    }
    spectral_factor(&SymMatrix::symmetrized(&q * diag * q.transpose())).unwrap()
}

fn nonzero_real(rng: &mut ChaCha8Rng, lim: f64) -> f64 {
    loop {
        let v: f64 = rng.gen_range(-lim..lim);
        if v.abs() >= 0.25 {
            return v;
        }
    }
}

fn sorted_values(values: &[C64]) -> Vec<C64> {
    let mut v = values.to_vec();
    v.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    v
}

#[test]
fn halmos_blocks_stay_small_and_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for trial in 0..200 {
        let n = rng.gen_range(2..=8);
        let p = random_projection(n, &mut rng);
        let q = random_projection(n, &mut rng);
        let form = halmos_form(&p, &q);

        let sizes = form.block_sizes();
        assert_eq!(sizes.iter().sum::<usize>(), n, "trial {trial}");
        assert!(sizes.iter().all(|&s| s <= 2), "trial {trial}: {sizes:?}");

        let u = &form.u;
        let ortho = (u.transpose() * u - Matrix::identity(n, n)).amax();
        assert!(ortho <= 1e-10 * n as f64, "trial {trial}: ortho {ortho:e}");

        let (pd, qd) = form.block_diagonals();
        let perr = (u * &pd * u.transpose() - p.matrix()).amax();
        let qerr = (u * &qd * u.transpose() - q.matrix()).amax();
        assert!(perr <= 1e-9 * n as f64, "trial {trial}: P error {perr:e}");
        assert!(qerr <= 1e-9 * n as f64, "trial {trial}: Q error {qerr:e}");

        for (j, block) in form.blocks.iter().enumerate() {
            let t = (&block.p_block * &block.q_block * &block.p_block).trace();
            assert!(
                (-1e-9..=1.0 + 1e-9).contains(&t),
                "trial {trial} block {j}: trace {t}"
            );
        }
    }
}

#[test]
fn uniform_beta_signs_keep_two_eigenvalue_words_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(67);
    let tol = Tolerances::default();
    for trial in 0..500 {
        let n = rng.gen_range(3..=8);
        let a = two_eigenvalue_pd(n, &mut rng);
        let b = two_eigenvalue_pd(n, &mut rng);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let count = rng.gen_range(1..=4);
        let pairs = (0..count)
            .map(|_| {
                (
                    Exponent::real(nonzero_real(&mut rng, 2.0)),
                    Exponent::real(sign * rng.gen_range(0.25..2.0)),
                )
            })
            .collect();
        let seq = ExponentSequence::from_pairs(pairs);

        let (blocks, merged) = blockwise_evaluate(&seq, &a, &b, &tol).unwrap();
        let verdict = verdict_from_spectrum(&merged, tol.tol_real, tol.tol_imag);
        assert_eq!(
            verdict.kind,
            VerdictKind::AllPositive,
            "trial {trial}: {}",
            verdict.reason
        );
        assert!(
            blocks
                .iter()
                .all(|r| r.verdict.kind == VerdictKind::AllPositive),
            "trial {trial}: a block went nonpositive"
        );
    }
}

#[test]
fn blockwise_and_direct_evaluations_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let tol = Tolerances::default();
    let mut conclusive = 0;
    for trial in 0..200 {
        let n = rng.gen_range(3..=6);
        let a = two_eigenvalue_pd(n, &mut rng);
        let b = two_eigenvalue_pd(n, &mut rng);
        let count = rng.gen_range(1..=3);
        let pairs = (0..count)
            .map(|_| {
                (
                    Exponent::real(nonzero_real(&mut rng, 2.0)),
                    Exponent::real(nonzero_real(&mut rng, 2.0)),
                )
            })
            .collect();
        let seq = ExponentSequence::from_pairs(pairs);

        let (_, merged) = blockwise_evaluate(&seq, &a, &b, &tol).unwrap();
        let direct = evaluate(&seq, &a, &b, &tol).unwrap();

        let left = sorted_values(merged.values());
        let right = sorted_values(direct.spectrum.values());
        assert_eq!(left.len(), right.len());
        for (x, y) in left.iter().zip(&right) {
            assert!(
                (x.re - y.re).abs() <= 1e-7 && (x.im - y.im).abs() <= 1e-7,
                "trial {trial}: {x} vs {y}"
            );
        }

        let bk = verdict_from_spectrum(&merged, tol.tol_real, tol.tol_imag).kind;
        let dk = direct.verdict.kind;
        if bk != VerdictKind::Inconclusive && dk != VerdictKind::Inconclusive {
            conclusive += 1;
            assert_eq!(bk, dk, "trial {trial}");
        }
    }
    assert!(conclusive >= 150, "only {conclusive} conclusive trials");
}
