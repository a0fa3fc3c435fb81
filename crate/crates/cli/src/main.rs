//! Command-line surface of the gword toolkit. Every subcommand emits a
//! single JSON report on stdout (or to `--out`); the exit code separates
//! clean runs (0), runs whose mathematical result is a refutation or a
//! failed suite (1), and usage errors (2).

mod report;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gword::{
    canonicalize, classify, epsilon_sweep, evaluate, evaluate_exact, halmos_form, hijo_sequence,
    hijo_witness, is_irreducible, parse_word, random_search, rational_to_string, read_matrix,
    reduced_class, sturm_decide, thfour_witness, Error, ExponentSequence, Goodness,
    Matrix, MatrixData, OrthoProjection, PDMatrix, SearchConfig, SymMatrix, Tolerances,
    VerdictKind, Witness,
};
use report::Input;

#[derive(Parser)]
#[command(
    name = "gword",
    version,
    about = "Spectra of generalized two-letter words in positive definite matrices"
)]
struct Cli {
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cancellation rules on a word and report its reduced class.
    Reduce(ReduceArgs),
    /// Decide 2-goodness of a word's sign pattern where theory settles it.
    Classify(ClassifyArgs),
    /// Evaluate a word on a positive definite pair read from matrix files.
    Eval(EvalArgs),
    /// Produce a positivity-refuting witness for a word by recipe.
    Witness(WitnessArgs),
    /// Random search for a pair on which the word's spectrum leaves the
    /// positive axis.
    Search(SearchArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Simultaneous block-diagonal form of two orthogonal projections.
    Halmos(HalmosArgs),
}

#[derive(Args)]
struct ReduceArgs {
    /// Word text, e.g. "A B A^-1 B^-1".
    word: String,
    /// Apply the beta cancellation rule cyclically as well.
    #[arg(long)]
    strict_beta: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    word: String,
}

#[derive(Args)]
struct EvalArgs {
    word: String,
    /// Matrix file for the letter A.
    file_a: PathBuf,
    /// Matrix file for the letter B.
    file_b: PathBuf,
    /// Decide positivity exactly; needs rational-mode files and integer
    /// exponents.
    #[arg(long)]
    exact: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Recipe {
    Auto,
    #[value(name = "hijo-eq2")]
    HijoEq2,
    Epsilon,
    Thfour,
}

#[derive(Args)]
struct WitnessArgs {
    word: String,
    #[arg(long, value_enum, default_value_t = Recipe::Auto)]
    recipe: Recipe,
    /// Seed for the search fallback of the auto recipe.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SearchArgs {
    word: String,
    /// Matrix dimension to sample.
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rationalize the best witness and certify it exactly.
    #[arg(long)]
    refine: bool,
    /// Worker threads; the outcome does not depend on this.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: class1, thm-n2, thm-n3, thm-2eig, thfour, not2good,
    /// identities.
    suite: String,
}

#[derive(Args)]
struct HalmosArgs {
    /// Matrix file for the first orthogonal projection.
    file_p: PathBuf,
    /// Matrix file for the second orthogonal projection.
    file_q: PathBuf,
}

struct RunOutput {
    results: Value,
    digest: String,
    seed: Option<u64>,
    finding: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let echo = command_echo();
    match dispatch(&cli.command) {
        Ok(out) => {
            let report = report::assemble(
                &echo,
                &out.digest,
                out.seed,
                started.elapsed().as_millis(),
                out.results,
            );
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(u8::from(out.finding))
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn command_echo() -> String {
    let mut args = std::env::args();
    let bin = args
        .next()
        .map(|a| {
            Path::new(&a)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or(a)
        })
        .unwrap_or_else(|| "gword".to_string());
    let mut parts = vec![bin];
    parts.extend(args);
    parts.join(" ")
}

fn dispatch(cmd: &Command) -> Result<RunOutput, String> {
    match cmd {
        Command::Reduce(args) => cmd_reduce(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Halmos(args) => cmd_halmos(args),
    }
}

fn parse_sequence(text: &str) -> Result<ExponentSequence, String> {
    let w = parse_word(text).map_err(|e| format!("cannot parse word: {e}"))?;
    Ok(canonicalize(&w))
}

fn canonical_key(seq: &ExponentSequence) -> String {
    canonicalize(&seq.to_word_expr()).to_string()
}

fn reachable_json(reachable: &std::collections::BTreeSet<usize>) -> Value {
    json!(reachable.iter().copied().collect::<Vec<_>>())
}

fn cmd_reduce(args: &ReduceArgs) -> Result<RunOutput, String> {
    let seq = parse_sequence(&args.word)?;
    let rc = reduced_class(&seq, args.strict_beta);
    let steps: Vec<Value> = rc
        .trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "rule": s.rule.to_string(),
                "site": s.j,
                "before": s.before.to_string(),
                "after": s.after.to_string(),
            })
        })
        .collect();
    let results = json!({
        "word": seq.to_string(),
        "class_n": seq.class_n(),
        "beta_cyclic": args.strict_beta,
        "irreducible": is_irreducible(&seq, args.strict_beta),
        "reduced_class_m": rc.m,
        "reachable_m": reachable_json(&rc.reachable),
        "steps": steps,
        "terminal": rc.trace.terminal.to_string(),
    });
    Ok(RunOutput {
        results,
        digest: report::digest_inputs(&[Input::Text(&args.word)])?,
        seed: None,
        finding: false,
    })
}

fn cmd_classify(args: &ClassifyArgs) -> Result<RunOutput, String> {
    let seq = parse_sequence(&args.word)?;
    let c = classify(&seq);
    let results = json!({
        "word": seq.to_string(),
        "class_n": seq.class_n(),
        "verdict": c.verdict.to_string(),
        "theorems": c.theorems,
        "reduced_class_m": c.reduced_class_m,
        "strict_reduced_class_m": c.strict_reduced_class_m,
        "reachable_m": reachable_json(&c.reachable_m),
        "witness_family": c.witness_family,
    });
    Ok(RunOutput {
        results,
        digest: report::digest_inputs(&[Input::Text(&args.word)])?,
        seed: None,
        finding: matches!(c.verdict, Goodness::ProvablyBad),
    })
}

fn read_matrix_arg(path: &Path) -> Result<MatrixData, String> {
    read_matrix(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn pd_from_data(data: &MatrixData, label: &str) -> Result<PDMatrix, String> {
    let sym = SymMatrix::new(data.to_float()).map_err(|e| format!("{label}: {e}"))?;
    gword::spectral_factor(&sym).map_err(|e| format!("{label}: {e}"))
}

fn rational_pd_from_data(data: &MatrixData, label: &str) -> Result<gword::RationalMatrix, String> {
    let MatrixData::Rational(m) = data else {
        return Err(format!("{label}: exact mode needs a rational-mode matrix file"));
    };
    if *m != m.transpose() {
        return Err(format!("{label}: matrix must be symmetric"));
    }
    if !m.is_positive_definite() {
        return Err(format!("{label}: matrix is not positive definite"));
    }
    Ok(m.clone())
}

fn cmd_eval(args: &EvalArgs) -> Result<RunOutput, String> {
    let seq = parse_sequence(&args.word)?;
    let data_a = read_matrix_arg(&args.file_a)?;
    let data_b = read_matrix_arg(&args.file_b)?;
    let digest = report::digest_inputs(&[
        Input::Text(&args.word),
        Input::File(&args.file_a),
        Input::File(&args.file_b),
    ])?;

    let (results, finding) = if args.exact {
        let a = rational_pd_from_data(&data_a, "A")?;
        let b = rational_pd_from_data(&data_b, "B")?;
        let cert = sturm_decide(&seq, &a, &b).map_err(|e| format!("exact decision: {e}"))?;
        let w = evaluate_exact(&seq, &a, &b).map_err(|e| format!("exact evaluation: {e}"))?;
        let refuted = cert.refutes_positivity();
        let verdict = if refuted {
            VerdictKind::NotAllPositive
        } else {
            VerdictKind::AllPositive
        };
        let coeffs: Vec<String> = w.charpoly().iter().map(rational_to_string).collect();
        (
            json!({
                "word": seq.to_string(),
                "dim": a.dim(),
                "mode": "exact",
                "trace": rational_to_string(&w.trace()),
                "charpoly": coeffs,
                "certificate": cert,
                "verdict": verdict.to_string(),
            }),
            refuted,
        )
    } else {
        let a = pd_from_data(&data_a, "A")?;
        let b = pd_from_data(&data_b, "B")?;
        let r = evaluate(&seq, &a, &b, &Tolerances::default())
            .map_err(|e| format!("evaluation: {e}"))?;
        let spectrum: Vec<Value> = r
            .spectrum
            .values()
            .iter()
            .map(|z| json!([z.re, z.im]))
            .collect();
        let finding = r.verdict.kind == VerdictKind::NotAllPositive;
        (
            json!({
                "word": seq.to_string(),
                "dim": a.dim(),
                "mode": "float",
                "spectrum": spectrum,
                "verdict": r.verdict.kind.to_string(),
                "reason": r.verdict.reason,
                "min_real": r.margins.0,
                "max_imag_abs": r.margins.1,
            }),
            finding,
        )
    };

    Ok(RunOutput {
        results,
        digest,
        seed: None,
        finding,
    })
}

/// Extract `m` when the word is `A^m B A^-m B^-1`.
fn thfour_m(seq: &ExponentSequence) -> Option<u32> {
    let pairs = seq.pairs();
    if pairs.len() != 2 {
        return None;
    }
    let a1 = pairs[0].0.as_integer()?;
    let b1 = pairs[0].1.as_integer()?;
    let a2 = pairs[1].0.as_integer()?;
    let b2 = pairs[1].1.as_integer()?;
    if a1 > 0 && a2 == -a1 && b1 == 1 && b2 == -1 {
        u32::try_from(a1).ok()
    } else {
        None
    }
}

fn cmd_witness(args: &WitnessArgs) -> Result<RunOutput, String> {
    let seq = parse_sequence(&args.word)?;
    let digest = report::digest_inputs(&[Input::Text(&args.word)])?;

    let mut search_payload = None;
    let (witness, resolved, note): (Option<Witness>, &str, Option<String>) = match args.recipe {
        Recipe::HijoEq2 => {
            if canonical_key(&seq) != canonical_key(&hijo_sequence()) {
                return Err(format!(
                    "recipe hijo-eq2 only applies to the word {}",
                    hijo_sequence()
                ));
            }
            (Some(hijo_witness()), "hijo-eq2", None)
        }
        Recipe::Epsilon => match epsilon_sweep(&seq) {
            Ok(w) => (Some(w), "epsilon", None),
            Err(Error::NotProvablyBad { m }) => {
                return Err(format!(
                    "recipe epsilon needs a provably bad pattern; reduced class is {m}"
                ))
            }
            Err(Error::SweepExhausted { max_k }) => (
                None,
                "epsilon",
                Some(format!("no refutation down to epsilon = 2^-{max_k}")),
            ),
            Err(e) => return Err(format!("epsilon sweep: {e}")),
        },
        Recipe::Thfour => {
            let m = thfour_m(&seq)
                .ok_or("recipe thfour needs a word of the shape A^m B A^-m B^-1")?;
            match thfour_witness(Some(m)) {
                Ok(w) => (Some(w), "thfour", None),
                Err(Error::SweepExhausted { .. }) => (
                    None,
                    "thfour",
                    Some(format!("reference pair not refuted at m = {m}")),
                ),
                Err(e) => return Err(format!("thfour recipe: {e}")),
            }
        }
        Recipe::Auto => {
            if canonical_key(&seq) == canonical_key(&hijo_sequence()) {
                (Some(hijo_witness()), "hijo-eq2", None)
            } else if let Some(m) = thfour_m(&seq) {
                match thfour_witness(Some(m)) {
                    Ok(w) => (Some(w), "thfour", None),
                    Err(_) => (
                        None,
                        "thfour",
                        Some(format!("reference pair not refuted at m = {m}")),
                    ),
                }
            } else if matches!(classify(&seq).verdict, Goodness::ProvablyBad) {
                match epsilon_sweep(&seq) {
                    Ok(w) => (Some(w), "epsilon", None),
                    Err(e) => (None, "epsilon", Some(format!("epsilon sweep: {e}"))),
                }
            } else {
                let cfg = SearchConfig {
                    seed: args.seed,
                    ..SearchConfig::default()
                };
                let outcome = random_search(&seq, &cfg);
                let note = if outcome.witness.is_none() {
                    Some(format!(
                        "positivity not refuted in {} random trials",
                        outcome.trials
                    ))
                } else {
                    None
                };
                let w = outcome.witness.clone();
                search_payload = Some(outcome.payload());
                (w, "search", note)
            }
        }
    };

    let finding = witness.is_some();
    let results = json!({
        "word": seq.to_string(),
        "recipe": resolved,
        "witness": witness.as_ref().map(|w| w.payload()),
        "certified": witness.as_ref().is_some_and(|w| w.is_certified()),
        "note": note,
        "search": search_payload,
    });
    Ok(RunOutput {
        results,
        digest,
        seed: Some(args.seed),
        finding,
    })
}

fn cmd_search(args: &SearchArgs) -> Result<RunOutput, String> {
    let seq = parse_sequence(&args.word)?;
    if args.n < 2 {
        return Err("dimension must be at least 2".to_string());
    }
    if args.trials == 0 {
        return Err("trials must be positive".to_string());
    }
    if args.threads == 0 {
        return Err("threads must be positive".to_string());
    }
    let cfg = SearchConfig {
        dimension: args.n,
        trials: args.trials,
        seed: args.seed,
        refine: args.refine,
        threads: args.threads,
        ..SearchConfig::default()
    };
    let outcome = random_search(&seq, &cfg);
    let finding = outcome.witness.is_some();
    let mut results = outcome.payload();
    let extra = results.as_object_mut().expect("payload is an object");
    extra.insert("word".to_string(), json!(seq.to_string()));
    extra.insert("dimension".to_string(), json!(args.n));
    extra.insert("refine".to_string(), json!(args.refine));
    let conclusion = if finding {
        "witness found: the word's spectrum leaves the positive axis".to_string()
    } else {
        format!("positivity not refuted in {} trials", outcome.trials)
    };
    extra.insert("conclusion".to_string(), json!(conclusion));
    Ok(RunOutput {
        results,
        digest: report::digest_inputs(&[Input::Text(&args.word)])?,
        seed: Some(args.seed),
        finding,
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<RunOutput, String> {
    let Some(result) = suites::run(&args.suite) else {
        return Err(format!(
            "unknown suite '{}'; valid suites: {}",
            args.suite,
            suites::SUITE_NAMES.join(", ")
        ));
    };
    let finding = !result.passed();
    Ok(RunOutput {
        results: result.payload(),
        digest: report::digest_inputs(&[Input::Text(&args.suite)])?,
        seed: None,
        finding,
    })
}

fn matrix_rows(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| json!((0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<f64>>()))
        .collect();
    json!(rows)
}

fn cmd_halmos(args: &HalmosArgs) -> Result<RunOutput, String> {
    let data_p = read_matrix_arg(&args.file_p)?;
    let data_q = read_matrix_arg(&args.file_q)?;
    let digest =
        report::digest_inputs(&[Input::File(&args.file_p), Input::File(&args.file_q)])?;
    let sym_p = SymMatrix::new(data_p.to_float()).map_err(|e| format!("P: {e}"))?;
    let sym_q = SymMatrix::new(data_q.to_float()).map_err(|e| format!("Q: {e}"))?;
    let p = OrthoProjection::new(sym_p).map_err(|e| format!("P: {e}"))?;
    let q = OrthoProjection::new(sym_q).map_err(|e| format!("Q: {e}"))?;
    let form = halmos_form(&p, &q);

    let n = p.matrix().nrows();
    let eye = Matrix::identity(n, n);
    let orth = (form.u.transpose() * &form.u - &eye).abs().max();
    let (bp, bq) = form.block_diagonals();
    let recon_p = (&form.u * &bp * form.u.transpose() - p.matrix()).abs().max();
    let recon_q = (&form.u * &bq * form.u.transpose() - q.matrix()).abs().max();

    let blocks: Vec<Value> = form
        .blocks
        .iter()
        .map(|b| {
            json!({
                "size": b.size,
                "angle_radians": b.angle,
                "p_block": matrix_rows(&b.p_block),
                "q_block": matrix_rows(&b.q_block),
            })
        })
        .collect();
    let results = json!({
        "dim": n,
        "rank_p": p.rank(),
        "rank_q": q.rank(),
        "block_sizes": form.block_sizes(),
        "blocks": blocks,
        "orthogonality_residual": orth,
        "reconstruction_residual": recon_p.max(recon_q),
    });
    Ok(RunOutput {
        results,
        digest,
        seed: None,
        finding: false,
    })
}
