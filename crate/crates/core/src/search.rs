//! Counterexample search. Random sampling over positive definite pairs
//! with per-trial rng streams (so results are independent of thread
//! count), simplex refinement of near-misses, and the deterministic
//! epsilon sweep that turns a provably-bad sign pattern into an exact
//! witness.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use crate::certify::{rationalize, sturm_decide, Certificate};
use crate::constructions::{epsilon_family_rational, hijo_example, hijo_sequence};
use crate::error::{Error, Result};
use crate::io::MatrixData;
use crate::matrix::{eigenvalues_general, spectral_factor, Matrix, PDMatrix, Spectrum, SymMatrix};
use crate::rational::RationalMatrix;
use crate::reduction::{classify, Goodness};
use crate::word::{evaluate, evaluate_exact, EvalResult, ExponentSequence, Tolerances, VerdictKind};

const SWEEP_MAX_K: u32 = 20;
const THFOUR_MAX_M: u32 = 64;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub dimension: usize,
    pub trials: u64,
    pub seed: u64,
    /// Sampled eigenvalues are log-uniform in this closed interval.
    pub eigenvalue_range: (f64, f64),
    pub tolerances: Tolerances,
    /// Simplex-refine the best near-miss when no trial fails outright.
    pub refine: bool,
    /// Denominator bound when lifting float hits to exact rationals.
    pub max_denominator: u64,
    /// Worker threads; the outcome is identical for any value.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            dimension: 3,
            trials: 1000,
            seed: 0,
            eigenvalue_range: (1e-2, 1e2),
            tolerances: Tolerances::default(),
            refine: false,
            max_denominator: 1_000_000,
            threads: 1,
        }
    }
}

impl SearchConfig {
    fn validate(&self) {
        assert!(self.dimension >= 1, "dimension must be at least 1");
        assert!(self.trials >= 1, "at least one trial required");
        let (lo, hi) = self.eigenvalue_range;
        assert!(lo > 0.0 && hi >= lo, "eigenvalue range must be positive");
    }
}

/// Where a witness came from: a numbered search trial or a named
/// deterministic recipe.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Trial { index: u64, seed: u64 },
    Recipe { id: String },
}

#[derive(Debug, Clone)]
pub enum WitnessMatrices {
    Exact { a: RationalMatrix, b: RationalMatrix },
    Float { a: Matrix, b: Matrix },
}

/// A concrete (sequence, A, B) on which the word's spectrum is not all
/// positive. Carries an exact certificate whenever the exponents are
/// integers and certification succeeded; otherwise the spectrum margin
/// is far beyond tolerance and the note says why no proof is attached.
#[derive(Debug, Clone)]
pub struct Witness {
    pub seq: ExponentSequence,
    pub matrices: WitnessMatrices,
    pub spectrum: Spectrum,
    pub certificate: Option<Certificate>,
    pub note: Option<String>,
    pub provenance: Provenance,
}

impl Witness {
    pub fn is_certified(&self) -> bool {
        self.certificate
            .as_ref()
            .is_some_and(|c| c.refutes_positivity())
    }

    pub fn payload(&self) -> Value {
        let (a, b) = match &self.matrices {
            WitnessMatrices::Exact { a, b } => (
                MatrixData::Rational(a.clone()).to_json(),
                MatrixData::Rational(b.clone()).to_json(),
            ),
            WitnessMatrices::Float { a, b } => (
                MatrixData::Float(a.clone()).to_json(),
                MatrixData::Float(b.clone()).to_json(),
            ),
        };
        let spectrum: Vec<Value> = self
            .spectrum
            .values()
            .iter()
            .map(|z| json!([z.re, z.im]))
            .collect();
        let provenance = match &self.provenance {
            Provenance::Trial { index, seed } => {
                json!({ "kind": "trial", "index": index, "seed": seed })
            }
            Provenance::Recipe { id } => json!({ "kind": "recipe", "id": id }),
        };
        json!({
            "word": self.seq.to_string(),
            "a": a,
            "b": b,
            "spectrum": spectrum,
            "certificate": self.certificate.as_ref().map(|c| json!(c)),
            "note": self.note,
            "provenance": provenance,
        })
    }
}

/// Summary of a whole search run.
#[derive(Debug)]
pub struct SearchOutcome {
    pub trials: u64,
    /// Smallest real eigenvalue part observed over all trials.
    pub best_margin: f64,
    pub best_trial: Option<u64>,
    pub witness: Option<Witness>,
}

impl SearchOutcome {
    pub fn payload(&self) -> Value {
        json!({
            "trials": self.trials,
            "best_margin": self.best_margin,
            "best_trial": self.best_trial,
            "witness": self.witness.as_ref().map(|w| w.payload()),
        })
    }
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random positive definite matrix: an orthogonalized Gaussian basis
/// conjugating a log-uniform eigenvalue draw.
pub fn sample_pd(n: usize, range: (f64, f64), rng: &mut impl Rng) -> PDMatrix {
    let (lo, hi) = range;
    assert!(lo > 0.0 && hi >= lo, "invalid eigenvalue range");
    let span = hi.ln() - lo.ln();
    let vals: Vec<f64> = (0..n)
        .map(|_| (lo.ln() + rng.gen::<f64>() * span).exp())
        .collect();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = rng.sample(StandardNormal);
        }
    }
    let q = g.qr().q();
    let d = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vals));
    let sym = SymMatrix::symmetrized(&q * d * q.transpose());
    spectral_factor(&sym).expect("conjugated positive diagonal is positive definite")
}

fn sample_pair(seed: u64, trial: u64, n: usize, range: (f64, f64)) -> (PDMatrix, PDMatrix) {
    let a = sample_pd(n, range, &mut trial_rng(seed, 2 * trial));
    let b = sample_pd(n, range, &mut trial_rng(seed, 2 * trial + 1));
    (a, b)
}

fn all_integer(seq: &ExponentSequence) -> bool {
    seq.exponents().all(|e| e.as_integer().is_some())
}

/// Escalate a failing trial into a Witness, or reject it. Integer-exponent
/// hits are lifted to rationals and certified; a hit that cannot be
/// certified is kept only when its margin is beyond 10x tolerance and
/// beyond roundoff at the word's own scale.
fn escalate(
    seq: &ExponentSequence,
    a: &PDMatrix,
    b: &PDMatrix,
    eval: &EvalResult,
    config: &SearchConfig,
    provenance: Provenance,
    extra_note: Option<&str>,
) -> Option<Witness> {
    // Eigenvalue error for the nonsymmetric product grows with its norm, so
    // an uncertified hit must clear a scale-relative floor as well as the
    // absolute one; 1e-11 sits four orders above the solver's backward error
    // and far below any honest counterexample seen in practice.
    let floor = (10.0 * config.tolerances.tol_real).max(1e-11 * eval.matrix.abs().max());
    let strong_margin = eval.margins.0 <= -floor;
    let compose_note = |base: String| match extra_note {
        Some(extra) => Some(format!("{base}; {extra}")),
        None => Some(base),
    };
    if all_integer(seq) {
        let ar = rationalize(a.matrix(), config.max_denominator);
        let br = rationalize(b.matrix(), config.max_denominator);
        if ar.is_positive_definite() && br.is_positive_definite() {
            if let Ok(cert) = sturm_decide(seq, &ar, &br) {
                if cert.refutes_positivity() {
                    return Some(Witness {
                        seq: seq.clone(),
                        matrices: WitnessMatrices::Exact { a: ar, b: br },
                        spectrum: eval.spectrum.clone(),
                        certificate: Some(cert),
                        note: extra_note.map(str::to_owned),
                        provenance,
                    });
                }
            }
        }
        if strong_margin {
            return Some(Witness {
                seq: seq.clone(),
                matrices: WitnessMatrices::Float {
                    a: a.matrix().clone(),
                    b: b.matrix().clone(),
                },
                spectrum: eval.spectrum.clone(),
                certificate: None,
                note: compose_note(format!(
                    "uncertified: exact certification failed at denominator bound {}",
                    config.max_denominator
                )),
                provenance,
            });
        }
        return None;
    }
    if strong_margin {
        return Some(Witness {
            seq: seq.clone(),
            matrices: WitnessMatrices::Float {
                a: a.matrix().clone(),
                b: b.matrix().clone(),
            },
            spectrum: eval.spectrum.clone(),
            certificate: None,
            note: compose_note("uncertified: non-integer exponents".into()),
            provenance,
        });
    }
    None
}

fn guard_classifier_consistency(seq: &ExponentSequence, config: &SearchConfig, w: &Witness) {
    if config.dimension == 2 && w.is_certified() {
        let cls = classify(seq);
        assert_ne!(
            cls.verdict,
            Goodness::ProvablyGood,
            "certified 2x2 witness for a provably good pattern {seq}"
        );
    }
}

struct TrialStats {
    best_margin: f64,
    best_trial: Option<u64>,
    failures: Vec<u64>,
}

/// Run the trial loop and return the first failing trial (by index)
/// escalated to a Witness, plus the best margin seen. Deterministic for a
/// fixed config: per-trial rng streams are split off the master seed by
/// counter, and aggregation minimizes over trial indices.
pub fn random_search(seq: &ExponentSequence, config: &SearchConfig) -> SearchOutcome {
    config.validate();
    let trials = config.trials;
    let threads = config.threads.clamp(1, trials.max(1) as usize);
    let chunk = trials.div_ceil(threads as u64);

    let run_range = |lo: u64, hi: u64| -> TrialStats {
        let mut stats = TrialStats {
            best_margin: f64::INFINITY,
            best_trial: None,
            failures: Vec::new(),
        };
        for t in lo..hi {
            let (a, b) = sample_pair(config.seed, t, config.dimension, config.eigenvalue_range);
            let Ok(r) = evaluate(seq, &a, &b, &config.tolerances) else {
                continue;
            };
            let margin = r.margins.0;
            if margin < stats.best_margin {
                stats.best_margin = margin;
                stats.best_trial = Some(t);
            }
            if r.verdict.kind == VerdictKind::NotAllPositive {
                stats.failures.push(t);
            }
        }
        stats
    };

    let merged = if threads == 1 {
        run_range(0, trials)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = (lo + chunk).min(trials);
                    let run = &run_range;
                    scope.spawn(move || run(lo, hi))
                })
                .collect();
            let mut merged = TrialStats {
                best_margin: f64::INFINITY,
                best_trial: None,
                failures: Vec::new(),
            };
            for h in handles {
                let s = h.join().expect("search worker panicked");
                let better = match (s.best_trial, merged.best_trial) {
                    (None, _) => false,
                    (Some(_), None) => true,
                    (Some(st), Some(mt)) => {
                        (s.best_margin, st) < (merged.best_margin, mt)
                    }
                };
                if better {
                    merged.best_margin = s.best_margin;
                    merged.best_trial = s.best_trial;
                }
                merged.failures.extend(s.failures);
            }
            merged.failures.sort_unstable();
            merged
        })
    };

    let mut witness = None;
    for &t in &merged.failures {
        let (a, b) = sample_pair(config.seed, t, config.dimension, config.eigenvalue_range);
        let Ok(r) = evaluate(seq, &a, &b, &config.tolerances) else {
            continue;
        };
        let provenance = Provenance::Trial {
            index: t,
            seed: config.seed,
        };
        if let Some(w) = escalate(seq, &a, &b, &r, config, provenance, None) {
            guard_classifier_consistency(seq, config, &w);
            witness = Some(w);
            break;
        }
    }

    if witness.is_none() && config.refine {
        if let Some(t) = merged.best_trial {
            let (a, b) = sample_pair(config.seed, t, config.dimension, config.eigenvalue_range);
            let refined = refine(&a, &b, seq, config);
            if let Ok(r) = evaluate(seq, &refined.a, &refined.b, &config.tolerances) {
                if r.verdict.kind == VerdictKind::NotAllPositive {
                    let provenance = Provenance::Trial {
                        index: t,
                        seed: config.seed,
                    };
                    if let Some(w) = escalate(
                        seq,
                        &refined.a,
                        &refined.b,
                        &r,
                        config,
                        provenance,
                        Some("simplex-refined from the best sampled near-miss"),
                    ) {
                        guard_classifier_consistency(seq, config, &w);
                        witness = Some(w);
                    }
                }
            }
        }
    }

    SearchOutcome {
        trials,
        best_margin: merged.best_margin,
        best_trial: merged.best_trial,
        witness,
    }
}

/// Result of simplex refinement; `history` is the best objective value
/// after each accepted iteration, non-increasing by construction.
#[derive(Debug, Clone)]
pub struct RefineResult {
    pub a: PDMatrix,
    pub b: PDMatrix,
    pub objective: f64,
    pub history: Vec<f64>,
}

fn pack_cholesky(m: &PDMatrix) -> Option<Vec<f64>> {
    let chol = m.matrix().clone().cholesky()?;
    let l = chol.l();
    let n = m.dim();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..=i {
            out.push(l[(i, j)]);
        }
    }
    Some(out)
}

fn unpack_cholesky(params: &[f64], n: usize) -> Matrix {
    let mut l = Matrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in 0..=i {
            l[(i, j)] = params[k];
            k += 1;
        }
    }
    &l * l.transpose()
}

/// Derivative-free descent on the word's spectral margin, over the two
/// lower-triangular Cholesky parameterizations. The objective is the
/// smallest real part plus the largest |imaginary part| as a tie-term.
/// Never returns a worse candidate than the input.
pub fn refine(
    a: &PDMatrix,
    b: &PDMatrix,
    seq: &ExponentSequence,
    config: &SearchConfig,
) -> RefineResult {
    let n = a.dim();
    let half = n * (n + 1) / 2;
    let objective = |params: &[f64]| -> f64 {
        let ma = SymMatrix::symmetrized(unpack_cholesky(&params[..half], n));
        let mb = SymMatrix::symmetrized(unpack_cholesky(&params[half..], n));
        let (Ok(pa), Ok(pb)) = (spectral_factor(&ma), spectral_factor(&mb)) else {
            return f64::INFINITY;
        };
        match evaluate(seq, &pa, &pb, &config.tolerances) {
            Ok(r) => r.margins.0 + r.margins.1,
            Err(_) => f64::INFINITY,
        }
    };

    let initial = match evaluate(seq, a, b, &config.tolerances) {
        Ok(r) => r.margins.0 + r.margins.1,
        Err(_) => f64::INFINITY,
    };
    let fallback = |obj: f64| RefineResult {
        a: a.clone(),
        b: b.clone(),
        objective: obj,
        history: vec![obj],
    };

    let (Some(pa), Some(pb)) = (pack_cholesky(a), pack_cholesky(b)) else {
        return fallback(initial);
    };
    let mut x0 = pa;
    x0.extend(pb);
    let (best, f_best, history) = nelder_mead(&objective, x0, 200 * (2 * half).min(25));
    if f_best >= initial {
        return fallback(initial);
    }
    let ma = SymMatrix::symmetrized(unpack_cholesky(&best[..half], n));
    let mb = SymMatrix::symmetrized(unpack_cholesky(&best[half..], n));
    match (spectral_factor(&ma), spectral_factor(&mb)) {
        (Ok(ra), Ok(rb)) => RefineResult {
            a: ra,
            b: rb,
            objective: f_best,
            history,
        },
        _ => fallback(initial),
    }
}

fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    x0: Vec<f64>,
    max_iter: usize,
) -> (Vec<f64>, f64, Vec<f64>) {
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let fx0 = f(&x0);
    simplex.push((x0.clone(), fx0));
    for i in 0..d {
        let mut x = x0.clone();
        x[i] += if x[i].abs() > 1e-6 { 0.05 * x[i] } else { 2.5e-4 };
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut history = Vec::new();

    for _ in 0..max_iter {
        simplex.sort_by(|p, q| p.1.total_cmp(&q.1));
        let f_best = simplex[0].1;
        history.push(f_best);
        let f_worst = simplex[d].1;
        if f_worst.is_finite() && (f_worst - f_best).abs() <= 1e-12 * (1.0 + f_best.abs()) {
            break;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|i| simplex[..d].iter().map(|(x, _)| x[i]).sum::<f64>() / d as f64)
            .collect();
        let second_worst = simplex[d - 1].1;
        let at = |coef: f64| -> Vec<f64> {
            (0..d)
                .map(|i| centroid[i] + coef * (centroid[i] - simplex[d].0[i]))
                .collect()
        };

        let reflected = at(1.0);
        let f_ref = f(&reflected);
        if f_ref < f_best {
            let expanded = at(2.0);
            let f_exp = f(&expanded);
            simplex[d] = if f_exp < f_ref {
                (expanded, f_exp)
            } else {
                (reflected, f_ref)
            };
            continue;
        }
        if f_ref < second_worst {
            simplex[d] = (reflected, f_ref);
            continue;
        }
        let contracted = if f_ref < f_worst { at(0.5) } else { at(-0.5) };
        let f_con = f(&contracted);
        if f_con < f_worst.min(f_ref) {
            simplex[d] = (contracted, f_con);
            continue;
        }
        for i in 1..=d {
            let shrunk: Vec<f64> = (0..d)
                .map(|j| 0.5 * (simplex[0].0[j] + simplex[i].0[j]))
                .collect();
            let fs = f(&shrunk);
            simplex[i] = (shrunk, fs);
        }
    }
    simplex.sort_by(|p, q| p.1.total_cmp(&q.1));
    history.push(simplex[0].1);
    let (x, fx) = simplex.swap_remove(0);
    (x, fx, history)
}

fn float_spectrum(w: &RationalMatrix) -> Spectrum {
    let n = w.dim();
    let m = Matrix::from_row_slice(n, n, &w.to_f64());
    eigenvalues_general(&m).unwrap_or_else(|_| Spectrum::from_reals([]))
}

/// Deterministic witness for a provably bad pattern: sweep dyadic
/// epsilon down from 1/2 until the exact word trace on the epsilon-family
/// pair goes negative. The first pair's signs choose whether the family
/// matrices enter inverted, so the sequence itself is used as given.
pub fn epsilon_sweep(seq: &ExponentSequence) -> Result<Witness> {
    let cls = classify(seq);
    if cls.verdict != Goodness::ProvablyBad {
        return Err(Error::NotProvablyBad {
            m: cls.reduced_class_m,
        });
    }
    let (first_alpha, first_beta) = &seq.pairs()[0];
    let flip_a = first_alpha.sign() < 0;
    let flip_b = first_beta.sign() < 0;
    for k in 1..=SWEEP_MAX_K {
        let (mut a, mut b) = epsilon_family_rational(k);
        if flip_a {
            a = a.inverse()?;
        }
        if flip_b {
            b = b.inverse()?;
        }
        let w = evaluate_exact(seq, &a, &b)?;
        let trace = w.trace();
        if !trace.is_positive() {
            return Ok(Witness {
                seq: seq.clone(),
                matrices: WitnessMatrices::Exact { a, b },
                spectrum: float_spectrum(&w),
                certificate: Some(Certificate::NegativeTrace { trace }),
                note: None,
                provenance: Provenance::Recipe {
                    id: format!("epsilon({seq}, 2^-{k})"),
                },
            });
        }
    }
    Err(Error::SweepExhausted { max_k: SWEEP_MAX_K })
}

/// The fixed 3x3 counterexample pair for the all-positive-exponent word,
/// packaged with its exact certificate.
pub fn hijo_witness() -> Witness {
    let (a, b) = hijo_example();
    let seq = hijo_sequence();
    let cert = sturm_decide(&seq, &a, &b).expect("integer word on rational matrices");
    assert!(cert.refutes_positivity(), "bundled counterexample regressed");
    let w = evaluate_exact(&seq, &a, &b).expect("integer word");
    Witness {
        seq,
        matrices: WitnessMatrices::Exact { a, b },
        spectrum: float_spectrum(&w),
        certificate: Some(cert),
        note: None,
        provenance: Provenance::Recipe {
            id: "hijo-eq2".into(),
        },
    }
}

/// Witness for `A^m B A^{-m} B^{-1}` on a fixed non-commuting rational
/// pair with a two-eigenvalue A. With no `m` given, scans upward and
/// returns the first refuted power.
pub fn thfour_witness(m: Option<u32>) -> Result<Witness> {
    let a = RationalMatrix::from_i64_rows(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 1]]);
    let b = RationalMatrix::from_i64_rows(&[&[2, 1, 1], &[1, 3, 1], &[1, 1, 4]]);
    let candidates: Vec<u32> = match m {
        Some(m) => vec![m],
        None => (1..=THFOUR_MAX_M).collect(),
    };
    for m in candidates {
        let mi = i64::from(m);
        let seq = ExponentSequence::from_int_pairs(&[(mi, 1), (-mi, -1)]);
        let cert = sturm_decide(&seq, &a, &b)?;
        if cert.refutes_positivity() {
            let w = evaluate_exact(&seq, &a, &b)?;
            return Ok(Witness {
                seq,
                matrices: WitnessMatrices::Exact { a, b },
                spectrum: float_spectrum(&w),
                certificate: Some(cert),
                note: None,
                provenance: Provenance::Recipe {
                    id: format!("thfour({m})"),
                },
            });
        }
    }
    Err(Error::SweepExhausted {
        max_k: m.unwrap_or(THFOUR_MAX_M),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn sample_pd_is_deterministic() {
        let mut r1 = trial_rng(7, 0);
        let mut r2 = trial_rng(7, 0);
        let a = sample_pd(4, (1e-2, 1e2), &mut r1);
        let b = sample_pd(4, (1e-2, 1e2), &mut r2);
        assert_eq!(a.matrix(), b.matrix());
        let mut r3 = trial_rng(7, 1);
        let c = sample_pd(4, (1e-2, 1e2), &mut r3);
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn sample_pd_respects_range() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..50 {
            let m = sample_pd(4, (0.5, 2.0), &mut rng);
            for &v in m.eigvals() {
                assert!(v > 0.5 * (1.0 - 1e-9) && v < 2.0 * (1.0 + 1e-9), "{v}");
            }
        }
        let mut rng = trial_rng(3, 1);
        let id = sample_pd(3, (1.0, 1.0), &mut rng);
        assert_relative_eq!(id.matrix(), &Matrix::identity(3, 3), epsilon = 1e-12);
    }

    #[test]
    fn class_one_search_finds_nothing() {
        let seq = ExponentSequence::from_int_pairs(&[(1, 1)]);
        let config = SearchConfig {
            trials: 200,
            dimension: 3,
            seed: 11,
            ..SearchConfig::default()
        };
        let out = random_search(&seq, &config);
        assert!(out.witness.is_none());
        assert!(out.best_margin > 0.0);
        assert_eq!(out.trials, 200);
    }

    #[test]
    fn bad_pattern_search_finds_certified_witness() {
        let seq = ExponentSequence::from_int_pairs(&[(1, 1), (-1, -1)]);
        let config = SearchConfig {
            trials: 300,
            dimension: 2,
            seed: 5,
            ..SearchConfig::default()
        };
        let out = random_search(&seq, &config);
        let w = out.witness.expect("provably bad pattern must fail in 300 trials");
        assert!(w.is_certified());
        match &w.provenance {
            Provenance::Trial { seed, .. } => assert_eq!(*seed, 5),
            other => panic!("expected trial provenance, got {other:?}"),
        }
    }

    #[test]
    fn search_is_thread_count_invariant() {
        let seq = ExponentSequence::from_int_pairs(&[(1, 1), (-1, -1)]);
        let base = SearchConfig {
            trials: 150,
            dimension: 2,
            seed: 9,
            ..SearchConfig::default()
        };
        let mut eight = base.clone();
        eight.threads = 8;
        let o1 = random_search(&seq, &base);
        let o8 = random_search(&seq, &eight);
        assert_eq!(
            serde_json::to_string(&o1.payload()).unwrap(),
            serde_json::to_string(&o8.payload()).unwrap()
        );
    }

    #[test]
    fn good_pattern_survives_search() {
        let seq = ExponentSequence::from_int_pairs(&[(1, 1), (2, 2)]);
        let config = SearchConfig {
            trials: 500,
            dimension: 2,
            seed: 2,
            ..SearchConfig::default()
        };
        let out = random_search(&seq, &config);
        assert!(out.witness.is_none(), "{:?}", out.witness);
    }

    #[test]
    fn sweep_commutator_exact() {
        let seq = ExponentSequence::from_int_pairs(&[(1, 1), (-1, -1)]);
        let w = epsilon_sweep(&seq).unwrap();
        assert_eq!(
            w.certificate,
            Some(Certificate::NegativeTrace { trace: rat(-5, 2) })
        );
        match &w.provenance {
            Provenance::Recipe { id } => assert!(id.ends_with("2^-2)"), "{id}"),
            other => panic!("expected recipe provenance, got {other:?}"),
        }
        match &w.matrices {
            WitnessMatrices::Exact { a, b } => {
                assert!(a.is_positive_definite());
                assert!(b.is_positive_definite());
            }
            other => panic!("expected exact matrices, got {other:?}"),
        }
    }

    #[test]
    fn sweep_flips_inverted_first_pair() {
        let seq = ExponentSequence::from_int_pairs(&[(-1, -1), (1, 1)]);
        let w = epsilon_sweep(&seq).unwrap();
        assert_eq!(
            w.certificate,
            Some(Certificate::NegativeTrace { trace: rat(-5, 2) })
        );
    }

    #[test]
    fn sweep_handles_larger_magnitudes() {
        let seq = ExponentSequence::from_int_pairs(&[(2, 3), (-1, -2)]);
        let w = epsilon_sweep(&seq).unwrap();
        assert!(w.is_certified());
    }

    #[test]
    fn sweep_rejects_good_patterns() {
        let seq = ExponentSequence::from_int_pairs(&[(1, 1), (2, 2)]);
        assert!(matches!(
            epsilon_sweep(&seq),
            Err(Error::NotProvablyBad { m: 0 })
        ));
    }

    #[test]
    fn refine_keeps_negative_objective() {
        let (a, b) = hijo_example();
        let seq = hijo_sequence();
        let af = spectral_factor(&SymMatrix::from_row_slice(3, &a.to_f64()).unwrap()).unwrap();
        let bf = spectral_factor(&SymMatrix::from_row_slice(3, &b.to_f64()).unwrap()).unwrap();
        let config = SearchConfig::default();
        let start = evaluate(&seq, &af, &bf, &config.tolerances).unwrap();
        let initial = start.margins.0 + start.margins.1;
        assert!(initial < 0.0);
        let refined = refine(&af, &bf, &seq, &config);
        assert!(refined.objective <= initial);
        for pair in refined.history.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "history not monotone");
        }
    }

    #[test]
    fn hijo_witness_is_certified() {
        let w = hijo_witness();
        assert!(w.is_certified());
        assert_eq!(w.seq.to_string(), "A B A^2 B^2");
        let payload = w.payload();
        assert_eq!(payload["provenance"]["id"], "hijo-eq2");
        assert_eq!(payload["certificate"]["kind"], "negative-trace");
        assert_eq!(payload["certificate"]["trace"], "-3164");
    }

    #[test]
    fn thfour_witness_scan_finds_first_refuting_m() {
        let w = thfour_witness(None).unwrap();
        assert!(w.is_certified());
        match &w.provenance {
            Provenance::Recipe { id } => assert!(id.starts_with("thfour("), "{id}"),
            other => panic!("expected recipe provenance, got {other:?}"),
        }
        let m_star = w.seq.pairs()[0].0.as_integer().unwrap() as u32;
        assert!(thfour_witness(Some(m_star)).unwrap().is_certified());
        if m_star > 1 {
            assert!(thfour_witness(Some(m_star - 1)).is_err());
        }
    }
}
