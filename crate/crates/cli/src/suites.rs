//! Named verification suites behind `gword verify`. Each suite replays one
//! of the positivity guarantees on freshly sampled or exactly constructed
//! instances and reports granular checks. Seeds are fixed so runs are
//! reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use gword::{
    blockwise_evaluate, classify, evaluate, is_irreducible, pq_power, projection_identities_check,
    projection_limit, projection_p, projection_q, rational_to_string, reduced_class, sample_pd,
    spectral_factor, sturm_decide, thfour_limit, thfour_word, verdict_from_spectrum, Certificate,
    Exponent, ExponentSequence, Goodness, Matrix, PDMatrix, RationalMatrix, SymMatrix, Tolerances,
    VerdictKind, C64,
};

pub const SUITE_NAMES: [&str; 7] = [
    "class1",
    "thm-n2",
    "thm-n3",
    "thm-2eig",
    "thfour",
    "not2good",
    "identities",
];

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

pub struct SuiteResult {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn payload(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect();
        json!({ "suite": self.suite, "passed": self.passed(), "checks": checks })
    }
}

pub fn run(name: &str) -> Option<SuiteResult> {
    match name {
        "class1" => Some(class1()),
        "thm-n2" => Some(thm_n2()),
        "thm-n3" => Some(thm_n3()),
        "thm-2eig" => Some(thm_2eig()),
        "thfour" => Some(thfour()),
        "not2good" => Some(not2good()),
        "identities" => Some(identities()),
        _ => None,
    }
}

fn nonzero_real(rng: &mut ChaCha8Rng, lim: f64) -> f64 {
    loop {
        let v = rng.gen_range(-lim..lim);
        if v.abs() >= 0.25 {
            return v;
        }
    }
}

fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let m = Matrix::from_fn(n, n, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
    m.qr().q()
}

fn pd_with_eigenvalues(vals: &[f64], rng: &mut ChaCha8Rng) -> PDMatrix {
    let n = vals.len();
    let q = random_orthogonal(n, rng);
    let d = Matrix::from_fn(n, n, |i, j| if i == j { vals[i] } else { 0.0 });
    spectral_factor(&SymMatrix::symmetrized(&q * d * q.transpose()))
        .expect("constructed eigenvalues are positive")
}

fn two_eigenvalue_pd(n: usize, rng: &mut ChaCha8Rng) -> PDMatrix {
    let l2 = rng.gen_range(0.7..1.1);
    let l1 = l2 * rng.gen_range(1.3..1.6);
    let k = rng.gen_range(1..n);
    let vals: Vec<f64> = (0..n).map(|i| if i < k { l1 } else { l2 }).collect();
    pd_with_eigenvalues(&vals, rng)
}

/// Random word with the stated pair count; `beta_sign` forces every beta
/// onto one side, `alternate_alpha` forces a mixed alpha pattern.
fn real_word(
    rng: &mut ChaCha8Rng,
    n_pairs: usize,
    alpha_lim: f64,
    beta_sign: Option<f64>,
    alternate_alpha: bool,
) -> ExponentSequence {
    let mut pairs = Vec::with_capacity(n_pairs);
    for j in 0..n_pairs {
        let mut alpha = nonzero_real(rng, alpha_lim);
        if alternate_alpha {
            alpha = alpha.abs() * if j % 2 == 0 { 1.0 } else { -1.0 };
        }
        let beta = match beta_sign {
            Some(s) => s * rng.gen_range(0.25..2.0),
            None => nonzero_real(rng, alpha_lim),
        };
        pairs.push((Exponent::real(alpha), Exponent::real(beta)));
    }
    ExponentSequence::from_pairs(pairs)
}

fn sorted_values(values: &[C64]) -> Vec<C64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

fn random_rational_pd2(rng: &mut ChaCha8Rng) -> RationalMatrix {
    loop {
        let a = rng.gen_range(1..=6i64);
        let c = rng.gen_range(1..=6i64);
        let b = rng.gen_range(-5..=5i64);
        if a * c - b * b > 0 {
            return RationalMatrix::from_i64_rows(&[&[a, b], &[b, c]]);
        }
    }
}

fn class1() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0101);
    let tol = Tolerances::default();
    let mut inconclusive = 0usize;
    let mut negative = 0usize;
    let mut min_margin = f64::INFINITY;
    for trial in 0..1000usize {
        let n = 2 + trial % 4;
        let a = sample_pd(n, (0.1, 10.0), &mut rng);
        let b = sample_pd(n, (0.1, 10.0), &mut rng);
        let seq = real_word(&mut rng, 1, 3.0, None, false);
        let r = evaluate(&seq, &a, &b, &tol).expect("class-1 evaluation converges");
        match r.verdict.kind {
            VerdictKind::AllPositive => min_margin = min_margin.min(r.margins.0),
            VerdictKind::Inconclusive => inconclusive += 1,
            VerdictKind::NotAllPositive => negative += 1,
        }
    }
    SuiteResult {
        suite: "class1",
        checks: vec![Check::new(
            "single-pair-words-positive",
            inconclusive == 0 && negative == 0,
            format!(
                "1000 trials, dims 2-5: {negative} negative, {inconclusive} inconclusive, \
                 worst margin {min_margin:.3e}"
            ),
        )],
    }
}

fn thm_n2() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0202);
    let tol = Tolerances::default();
    let mut checks = Vec::new();

    let mut bad = 0usize;
    let mut min_margin = f64::INFINITY;
    for trial in 0..1000usize {
        let a = sample_pd(2, (0.5, 2.0), &mut rng);
        let b = sample_pd(2, (0.5, 2.0), &mut rng);
        let seq = real_word(&mut rng, 1 + trial % 4, 3.0, Some(1.0), true);
        let r = evaluate(&seq, &a, &b, &tol).expect("2x2 evaluation converges");
        if r.verdict.kind == VerdictKind::AllPositive {
            min_margin = min_margin.min(r.margins.0);
        } else {
            bad += 1;
        }
    }
    checks.push(Check::new(
        "uniform-beta-positive-2x2",
        bad == 0,
        format!("1000 float trials: {bad} not provably positive, worst margin {min_margin:.3e}"),
    ));

    let mut refuted = 0usize;
    for _ in 0..100 {
        let a = random_rational_pd2(&mut rng);
        let b = random_rational_pd2(&mut rng);
        let n_pairs = 1 + rng.gen_range(0..4usize);
        let mut pairs = Vec::with_capacity(n_pairs);
        for j in 0..n_pairs {
            let alpha = rng.gen_range(1..=3i64) * if j % 2 == 0 { 1 } else { -1 };
            pairs.push((alpha, rng.gen_range(1..=3i64)));
        }
        let seq = ExponentSequence::from_int_pairs(&pairs);
        let cert = sturm_decide(&seq, &a, &b).expect("exact decision succeeds");
        if !matches!(cert, Certificate::None) {
            refuted += 1;
        }
    }
    checks.push(Check::new(
        "uniform-beta-exact-2x2",
        refuted == 0,
        format!("100 exact trials: {refuted} refutations (expected none)"),
    ));

    SuiteResult {
        suite: "thm-n2",
        checks,
    }
}

fn thm_n3() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0303);
    let tol = Tolerances::default();
    let mut bad = 0usize;
    let mut min_margin = f64::INFINITY;
    for trial in 0..300usize {
        let l2 = rng.gen_range(0.7..1.2);
        let l1 = l2 * rng.gen_range(1.4..2.2);
        let a = pd_with_eigenvalues(&[l1, l1, l2], &mut rng);
        let b = sample_pd(3, (0.5, 2.0), &mut rng);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let seq = real_word(&mut rng, 1 + trial % 3, 2.0, Some(sign), false);
        let r = evaluate(&seq, &a, &b, &tol).expect("3x3 evaluation converges");
        if r.verdict.kind == VerdictKind::AllPositive {
            min_margin = min_margin.min(r.margins.0);
        } else {
            bad += 1;
        }
    }
    SuiteResult {
        suite: "thm-n3",
        checks: vec![Check::new(
            "double-eigenvalue-uniform-beta-positive",
            bad == 0,
            format!(
                "300 trials with a repeated eigenvalue in A: {bad} not provably positive, \
                 worst margin {min_margin:.3e}"
            ),
        )],
    }
}

fn thm_2eig() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0404);
    let tol = Tolerances::default();
    let mut checks = Vec::new();
    let mut bad = 0usize;
    let mut max_dev = 0.0f64;
    let mut mismatched = 0usize;
    for trial in 0..500usize {
        let n = 3 + trial % 6;
        let a = two_eigenvalue_pd(n, &mut rng);
        let b = two_eigenvalue_pd(n, &mut rng);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let seq = real_word(&mut rng, 1 + trial % 4, 2.0, Some(sign), false);

        let (blocks, merged) =
            blockwise_evaluate(&seq, &a, &b, &tol).expect("blockwise evaluation succeeds");
        let merged_verdict = verdict_from_spectrum(&merged, tol.tol_real, tol.tol_imag);
        let blocks_positive = blocks
            .iter()
            .all(|r| r.verdict.kind == VerdictKind::AllPositive);
        if !(blocks_positive && merged_verdict.kind == VerdictKind::AllPositive) {
            bad += 1;
        }

        let direct = evaluate(&seq, &a, &b, &tol).expect("direct evaluation succeeds");
        let ms = sorted_values(merged.values());
        let ds = sorted_values(direct.spectrum.values());
        let dev = ms
            .iter()
            .zip(&ds)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        max_dev = max_dev.max(dev);
        if dev > 1e-7 {
            mismatched += 1;
        }
    }
    checks.push(Check::new(
        "blockwise-uniform-beta-positive",
        bad == 0,
        format!("500 trials, dims 3-8: {bad} not provably positive"),
    ));
    checks.push(Check::new(
        "blockwise-matches-direct",
        mismatched == 0,
        format!("largest spectrum deviation {max_dev:.3e} (tolerance 1e-7)"),
    ));
    SuiteResult {
        suite: "thm-2eig",
        checks,
    }
}

fn thfour() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0505);
    let tol = Tolerances::default();
    let mut checks = Vec::new();

    let mut unrefuted = 0usize;
    let mut worst_first_m = 0u32;
    for _ in 0..50 {
        let a = two_eigenvalue_pd(3, &mut rng);
        let b = sample_pd(3, (0.5, 2.0), &mut rng);
        let commutator = (a.matrix() * b.matrix() - b.matrix() * a.matrix())
            .abs()
            .max();
        assert!(commutator > 1e-8, "sampled pair unexpectedly commutes");
        let mut refuted_at = None;
        for m in 1..=64u32 {
            let r = thfour_word(&a, &b, m, &tol).expect("conjugated commutator evaluates");
            if r.verdict.kind == VerdictKind::NotAllPositive {
                refuted_at = Some(m);
                break;
            }
        }
        match refuted_at {
            Some(m) => worst_first_m = worst_first_m.max(m),
            None => unrefuted += 1,
        }
    }
    checks.push(Check::new(
        "non-commuting-refuted",
        unrefuted == 0,
        format!(
            "50 non-commuting pairs: {unrefuted} without a refuting power, \
             latest first refutation at m = {worst_first_m}"
        ),
    ));

    let mut commuting_bad = 0usize;
    for _ in 0..10 {
        let q = random_orthogonal(3, &mut rng);
        let l2 = rng.gen_range(0.8..1.2);
        let l1 = l2 * rng.gen_range(1.02..1.10);
        let da = Matrix::from_fn(3, 3, |i, j| {
            if i != j {
                0.0
            } else if i < 2 {
                l1
            } else {
                l2
            }
        });
        let bvals: Vec<f64> = (0..3).map(|_| rng.gen_range(0.5..2.0)).collect();
        let db = Matrix::from_fn(3, 3, |i, j| if i == j { bvals[i] } else { 0.0 });
        let a = spectral_factor(&SymMatrix::symmetrized(&q * da * q.transpose()))
            .expect("positive spectrum");
        let b = spectral_factor(&SymMatrix::symmetrized(&q * db * q.transpose()))
            .expect("positive spectrum");
        for m in 1..=64u32 {
            let r = thfour_word(&a, &b, m, &tol).expect("commuting word evaluates");
            if r.verdict.kind != VerdictKind::AllPositive {
                commuting_bad += 1;
                break;
            }
        }
    }
    checks.push(Check::new(
        "commuting-always-positive",
        commuting_bad == 0,
        format!("10 commuting pairs, powers up to 64: {commuting_bad} failures"),
    ));

    let a = spectral_factor(
        &SymMatrix::from_row_slice(3, &[2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.1])
            .expect("symmetric"),
    )
    .expect("positive definite");
    let b = spectral_factor(
        &SymMatrix::from_row_slice(3, &[2.0, 0.3, 0.4, 0.3, 1.5, 0.2, 0.4, 0.2, 1.0])
            .expect("symmetric"),
    )
    .expect("positive definite");
    let lim = thfour_limit(&a, &b).expect("limit exists");
    let m = 40;
    let w = thfour_word(&a, &b, m, &tol).expect("word evaluates").matrix;
    let rotated = lim.basis.transpose() * w * &lim.basis;
    let scaled = rotated * lim.gamma.powi(m as i32);
    let dev = (&scaled - &lim.matrix).abs().max();
    checks.push(Check::new(
        "scaled-limit",
        dev < 1e-6,
        format!("deviation {dev:.3e} at m = {m} (tolerance 1e-6)"),
    ));

    SuiteResult {
        suite: "thfour",
        checks,
    }
}

fn alternating(m: usize) -> ExponentSequence {
    let pairs: Vec<(i64, i64)> = (0..m)
        .map(|j| {
            let s = if j % 2 == 0 { 1 } else { -1 };
            (s, s)
        })
        .collect();
    ExponentSequence::from_int_pairs(&pairs)
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::from(1) << e as usize)
    } else {
        BigRational::new(BigInt::from(1), BigInt::from(1) << (-e) as usize)
    }
}

fn not2good() -> SuiteResult {
    let mut checks = Vec::new();

    for m in [2usize, 3, 6, 7] {
        let seq = alternating(m);
        if !is_irreducible(&seq, false) {
            checks.push(Check::new(
                &format!("alternating-m{m}"),
                true,
                "skipped: no irreducible representative (the cyclic alpha rule closes \
                 odd alternations)"
                    .to_string(),
            ));
            continue;
        }
        let lim = projection_limit(&seq).expect("normalized pattern");
        let tr = lim.trace();
        let expected = pq_power((m / 2) as u32).trace();
        checks.push(Check::new(
            &format!("alternating-m{m}"),
            tr.is_negative() && tr == expected,
            format!("projection limit trace {}", rational_to_string(&tr)),
        ));
        let c = classify(&seq);
        checks.push(Check::new(
            &format!("classify-m{m}"),
            matches!(c.verdict, Goodness::ProvablyBad),
            format!("verdict {} at reduced class {}", c.verdict, c.reduced_class_m),
        ));
    }

    let instances: Vec<Vec<(i64, i64)>> = vec![
        vec![(1, 1), (-1, -1)],
        vec![(2, 1), (-1, -2)],
        vec![(1, 1), (-1, -1), (1, 1)],
        vec![(1, 1), (-1, -1), (1, 1), (1, 1)],
    ];
    for pairs in instances {
        let seq = ExponentSequence::from_int_pairs(&pairs);
        let rc = reduced_class(&seq, false);
        let lim = projection_limit(&seq).expect("normalized pattern");
        let tr = lim.trace();
        let expected = BigRational::new(BigInt::from(-1), BigInt::from(4))
            * pow2(rc.m as i64 - seq.class_n() as i64);
        checks.push(Check::new(
            &format!("trace-{seq}"),
            tr == expected,
            format!(
                "trace {} (expected {})",
                rational_to_string(&tr),
                rational_to_string(&expected)
            ),
        ));
    }

    SuiteResult {
        suite: "not2good",
        checks,
    }
}

fn identities() -> SuiteResult {
    let mut checks = Vec::new();
    for (name, ok) in projection_identities_check() {
        checks.push(Check::new(name, ok, "exact identity".to_string()));
    }

    let p = projection_p();
    let q = projection_q();
    let complement = |m: &RationalMatrix| {
        let n = m.dim();
        let id = RationalMatrix::identity(n);
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(&id[(i, j)] - &m[(i, j)]);
            }
        }
        RationalMatrix::from_entries(n, entries)
    };
    let base = p.mul(&q).mul(&complement(&p)).mul(&complement(&q));
    let mut acc = base.clone();
    let mut all = true;
    for k in 1..=10u32 {
        if pq_power(k) != acc {
            all = false;
            break;
        }
        acc = acc.mul(&base);
    }
    checks.push(Check::new(
        "cycle-power-closed-form",
        all,
        "powers 1-10 of P Q (I-P) (I-Q) match the closed form exactly".to_string(),
    ));

    SuiteResult {
        suite: "identities",
        checks,
    }
}
