//! Word syntax, canonical exponent sequences, evaluation, and verdicts.
//!
//! A word is a product `A^{a1} B^{b1} ... A^{aN} B^{bN}` of powers of two
//! positive definite matrices. Parsing produces a `WordExpr` in textual
//! order; `canonicalize` quotients by the spectrum-preserving moves (merging
//! adjacent same-letter powers and cyclic rotation) down to an
//! `ExponentSequence`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{eigenvalues_general, Matrix, PDMatrix, Spectrum, SymMatrix};
use crate::rational::RationalMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::A => write!(f, "A"),
            Letter::B => write!(f, "B"),
        }
    }
}

/// A word exponent: exact rational (integers and `p/q` literals) or real
/// (decimal literals). Never zero.
#[derive(Debug, Clone, PartialEq)]
pub enum Exponent {
    Rational(BigRational),
    Real(f64),
}

impl Exponent {
    pub fn one() -> Self {
        Exponent::Rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Exponent::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn rat(p: i64, q: i64) -> Self {
        Exponent::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn real(v: f64) -> Self {
        Exponent::Real(v)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Exponent::Rational(r) => r.is_zero(),
            Exponent::Real(v) => *v == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Exponent::Rational(r) => r.is_one(),
            Exponent::Real(v) => *v == 1.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Exponent::Rational(_))
    }

    /// Exact integer value, when the exponent is one.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Exponent::Rational(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Rational(r) => crate::rational::rational_to_f64(r),
            Exponent::Real(v) => *v,
        }
    }

    /// Sign as +1/-1 (exponents are nonzero by invariant).
    pub fn sign(&self) -> i8 {
        match self {
            Exponent::Rational(r) => {
                if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Exponent::Real(v) => {
                if *v > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Rational(a), Exponent::Rational(b)) => Exponent::Rational(a + b),
            _ => Exponent::Real(self.as_f64() + other.as_f64()),
        }
    }

    pub fn neg(&self) -> Exponent {
        match self {
            Exponent::Rational(r) => Exponent::Rational(-r),
            Exponent::Real(v) => Exponent::Real(-v),
        }
    }

    /// Total order for canonical tie-breaking: exact when both sides are
    /// rational, by float value otherwise.
    pub fn cmp_order(&self, other: &Exponent) -> Ordering {
        match (self, other) {
            (Exponent::Rational(a), Exponent::Rational(b)) => a.cmp(b),
            _ => self.as_f64().total_cmp(&other.as_f64()),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Exponent::Real(v) => {
                if v.fract() == 0.0 {
                    write!(f, "{v:.1}")
                } else {
                    write!(f, "{v}")
                }
            }
        }
    }
}

/// Parsed word in textual factor order.
#[derive(Debug, Clone, PartialEq)]
pub struct WordExpr {
    factors: Vec<(Letter, Exponent)>,
}

impl WordExpr {
    pub fn from_factors(factors: Vec<(Letter, Exponent)>) -> Self {
        assert!(
            factors.iter().all(|(_, e)| !e.is_zero()),
            "factor exponents must be nonzero"
        );
        Self { factors }
    }

    pub fn factors(&self) -> &[(Letter, Exponent)] {
        &self.factors
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(l, e)| {
                if e.is_one() {
                    l.to_string()
                } else {
                    format!("{l}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Canonical word text for a parsed expression.
pub fn format_word(w: &WordExpr) -> String {
    w.to_string()
}

/// Parse word text. Grammar: factors `A` or `B`, each optionally `^exp`
/// where `exp` is `[-]digits`, `[-]digits.digits`, or `[-]digits/digits`;
/// spaces and `*` separate factors. `p/q` exponents stay exact.
pub fn parse_word(text: &str) -> Result<WordExpr> {
    let bytes = text.as_bytes();
    let mut i = 0usize;
    let mut factors: Vec<(Letter, Exponent)> = Vec::new();
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' | b'*' => i += 1,
            b'A' | b'B' => {
                let letter = if bytes[i] == b'A' { Letter::A } else { Letter::B };
                i += 1;
                let exp = if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    parse_exponent(bytes, &mut i)?
                } else {
                    Exponent::one()
                };
                factors.push((letter, exp));
            }
            c => {
                return Err(Error::SyntaxError {
                    offset: i,
                    message: format!("unexpected character {:?}", c as char),
                })
            }
        }
    }
    if factors.is_empty() {
        return Err(Error::SyntaxError {
            offset: 0,
            message: "empty word: expected at least one factor".into(),
        });
    }
    Ok(WordExpr { factors })
}

fn parse_exponent(bytes: &[u8], i: &mut usize) -> Result<Exponent> {
    let start = *i;
    if *i < bytes.len() && bytes[*i] == b'-' {
        *i += 1;
    }
    let int_start = *i;
    while *i < bytes.len() && bytes[*i].is_ascii_digit() {
        *i += 1;
    }
    if *i == int_start {
        return Err(Error::SyntaxError {
            offset: *i,
            message: "expected digits in exponent".into(),
        });
    }
    let exp = if *i < bytes.len() && (bytes[*i] == b'.' || bytes[*i] == b'/') {
        let sep = bytes[*i];
        *i += 1;
        let frac_start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == frac_start {
            return Err(Error::SyntaxError {
                offset: *i,
                message: format!("expected digits after '{}'", sep as char),
            });
        }
        let slice = std::str::from_utf8(&bytes[start..*i]).expect("ascii");
        if sep == b'.' {
            Exponent::Real(slice.parse::<f64>().map_err(|e| Error::SyntaxError {
                offset: start,
                message: format!("bad decimal exponent: {e}"),
            })?)
        } else {
            let (p, q) = slice.split_once('/').expect("separator present");
            let numer: BigInt = p.parse().map_err(|e| Error::SyntaxError {
                offset: start,
                message: format!("bad rational exponent: {e}"),
            })?;
            let denom: BigInt = q.parse().map_err(|e| Error::SyntaxError {
                offset: start,
                message: format!("bad rational exponent: {e}"),
            })?;
            if denom.is_zero() {
                return Err(Error::SyntaxError {
                    offset: start,
                    message: "zero denominator in exponent".into(),
                });
            }
            Exponent::Rational(BigRational::new(numer, denom))
        }
    } else {
        let slice = std::str::from_utf8(&bytes[start..*i]).expect("ascii");
        let v: BigInt = slice.parse().map_err(|e| Error::SyntaxError {
            offset: start,
            message: format!("bad integer exponent: {e}"),
        })?;
        Exponent::Rational(BigRational::from_integer(v))
    };
    if exp.is_zero() {
        return Err(Error::ZeroExponent { offset: start });
    }
    Ok(exp)
}

/// The combinatorial identity of a word: pairs `(alpha_j, beta_j)` after
/// merging and rotation, or a single-letter residual power when one letter
/// is absent. `N = pairs.len()` is the class; `N = 0` encodes the empty
/// word or a pure power.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSequence {
    pairs: Vec<(Exponent, Exponent)>,
    residual: Option<(Letter, Exponent)>,
}

impl ExponentSequence {
    pub fn empty() -> Self {
        Self {
            pairs: Vec::new(),
            residual: None,
        }
    }

    pub fn from_pairs(pairs: Vec<(Exponent, Exponent)>) -> Self {
        assert!(
            pairs.iter().all(|(a, b)| !a.is_zero() && !b.is_zero()),
            "sequence exponents must be nonzero"
        );
        Self {
            pairs,
            residual: None,
        }
    }

    pub fn from_int_pairs(pairs: &[(i64, i64)]) -> Self {
        Self::from_pairs(
            pairs
                .iter()
                .map(|&(a, b)| (Exponent::from_int(a), Exponent::from_int(b)))
                .collect(),
        )
    }

    pub fn residual_power(letter: Letter, exp: Exponent) -> Self {
        assert!(!exp.is_zero());
        Self {
            pairs: Vec::new(),
            residual: Some((letter, exp)),
        }
    }

    /// The class N.
    pub fn class_n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(Exponent, Exponent)] {
        &self.pairs
    }

    pub fn residual(&self) -> Option<&(Letter, Exponent)> {
        self.residual.as_ref()
    }

    pub fn is_empty_word(&self) -> bool {
        self.pairs.is_empty() && self.residual.is_none()
    }

    /// True iff every exponent is exact rational.
    pub fn is_exact(&self) -> bool {
        self.pairs
            .iter()
            .all(|(a, b)| a.is_exact() && b.is_exact())
            && self.residual.iter().all(|(_, e)| e.is_exact())
    }

    /// All exponents as exact integers, when they are.
    pub fn integer_pairs(&self) -> Option<Vec<(i64, i64)>> {
        self.pairs
            .iter()
            .map(|(a, b)| Some((a.as_integer()?, b.as_integer()?)))
            .collect()
    }

    pub fn alphas(&self) -> impl Iterator<Item = &Exponent> {
        self.pairs.iter().map(|(a, _)| a)
    }

    pub fn betas(&self) -> impl Iterator<Item = &Exponent> {
        self.pairs.iter().map(|(_, b)| b)
    }

    /// Every exponent in factor order, the residual's included.
    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.pairs
            .iter()
            .flat_map(|(a, b)| [a, b])
            .chain(self.residual.iter().map(|(_, e)| e))
    }

    pub fn sign_pattern(&self) -> Vec<(i8, i8)> {
        self.pairs
            .iter()
            .map(|(a, b)| (a.sign(), b.sign()))
            .collect()
    }

    /// The same word read in `A^{-1}` instead of `A`.
    pub fn negate_alphas(&self) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .map(|(a, b)| (a.neg(), b.clone()))
                .collect(),
            residual: self.residual.clone(),
        }
    }

    /// The same word read in `B^{-1}` instead of `B`.
    pub fn negate_betas(&self) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .map(|(a, b)| (a.clone(), b.neg()))
                .collect(),
            residual: self.residual.clone(),
        }
    }

    /// Cyclic rotation by whole pairs (spectrum-preserving similarity).
    pub fn rotate_pairs(&self, k: usize) -> Self {
        if self.pairs.is_empty() {
            return self.clone();
        }
        let n = self.pairs.len();
        let mut pairs = Vec::with_capacity(n);
        for j in 0..n {
            pairs.push(self.pairs[(j + k) % n].clone());
        }
        Self {
            pairs,
            residual: self.residual.clone(),
        }
    }

    pub fn to_word_expr(&self) -> WordExpr {
        let mut factors = Vec::new();
        for (a, b) in &self.pairs {
            factors.push((Letter::A, a.clone()));
            factors.push((Letter::B, b.clone()));
        }
        if let Some((l, e)) = &self.residual {
            factors.push((*l, e.clone()));
        }
        WordExpr { factors }
    }
}

impl fmt::Display for ExponentSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word_expr())
    }
}

/// Quotient a word down to its canonical sequence: merge adjacent
/// same-letter powers (including across the cyclic wrap), then rotate to
/// start with an A-power and end with a B-power. Among valid rotations the
/// one with lexicographically largest `(a1, b1, a2, ...)` wins. Words using
/// one letter only come back as `N = 0` with a residual power.
pub fn canonicalize(w: &WordExpr) -> ExponentSequence {
    let mut factors = w.factors.clone();
    loop {
        let before = factors.len();
        factors = merge_adjacent(factors);
        if factors.len() >= 2 && factors.first().unwrap().0 == factors.last().unwrap().0 {
            let (_, last_exp) = factors.pop().unwrap();
            let sum = factors[0].1.add(&last_exp);
            if sum.is_zero() {
                factors.remove(0);
            } else {
                factors[0].1 = sum;
            }
        }
        if factors.len() == before {
            break;
        }
    }
    match factors.len() {
        0 => ExponentSequence::empty(),
        1 => {
            let (l, e) = factors.pop().unwrap();
            ExponentSequence::residual_power(l, e)
        }
        len => {
            debug_assert!(len % 2 == 0, "alternating circular word has even length");
            let mut best: Option<Vec<(Exponent, Exponent)>> = None;
            for start in 0..len {
                if factors[start].0 != Letter::A {
                    continue;
                }
                let mut pairs = Vec::with_capacity(len / 2);
                for j in 0..len / 2 {
                    let a = factors[(start + 2 * j) % len].1.clone();
                    let b = factors[(start + 2 * j + 1) % len].1.clone();
                    pairs.push((a, b));
                }
                let better = match &best {
                    None => true,
                    Some(cur) => pair_seq_cmp(&pairs, cur) == Ordering::Greater,
                };
                if better {
                    best = Some(pairs);
                }
            }
            ExponentSequence::from_pairs(best.expect("mixed word has an A-power"))
        }
    }
}

fn pair_seq_cmp(a: &[(Exponent, Exponent)], b: &[(Exponent, Exponent)]) -> Ordering {
    for ((a1, b1), (a2, b2)) in a.iter().zip(b.iter()) {
        match a1.cmp_order(a2).then_with(|| b1.cmp_order(b2)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

fn merge_adjacent(factors: Vec<(Letter, Exponent)>) -> Vec<(Letter, Exponent)> {
    let mut out: Vec<(Letter, Exponent)> = Vec::with_capacity(factors.len());
    for (letter, exp) in factors {
        match out.last_mut() {
            Some((l, e)) if *l == letter => {
                let sum = e.add(&exp);
                if sum.is_zero() {
                    out.pop();
                } else {
                    *e = sum;
                }
            }
            _ => out.push((letter, exp)),
        }
    }
    out
}

/// Verdict tolerances. Defaults keep roundoff from masquerading as a
/// counterexample; genuine failures are escalated to exact certification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub tol_real: f64,
    pub tol_imag: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_real: 1e-9,
            tol_imag: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    AllPositive,
    NotAllPositive,
    Inconclusive,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::AllPositive => write!(f, "AllPositive"),
            VerdictKind::NotAllPositive => write!(f, "NotAllPositive"),
            VerdictKind::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityVerdict {
    pub kind: VerdictKind,
    pub reason: String,
}

/// Three-valued positivity call on a spectrum. `AllPositive` needs every
/// eigenvalue comfortably real and positive; `NotAllPositive` needs one
/// eigenvalue clearly negative or clearly non-real; anything in the
/// tolerance band is `Inconclusive`.
pub fn verdict_from_spectrum(s: &Spectrum, tol_real: f64, tol_imag: f64) -> PositivityVerdict {
    assert!(tol_real > 0.0 && tol_imag > 0.0, "tolerances must be positive");
    let mut all_positive = true;
    for v in s.values() {
        let imag_band = tol_imag * (1.0 + v.norm());
        if v.re <= -tol_real {
            return PositivityVerdict {
                kind: VerdictKind::NotAllPositive,
                reason: format!("eigenvalue {} + {}i has negative real part", v.re, v.im),
            };
        }
        if v.im.abs() >= 10.0 * imag_band {
            return PositivityVerdict {
                kind: VerdictKind::NotAllPositive,
                reason: format!("eigenvalue {} + {}i is not real", v.re, v.im),
            };
        }
        if v.re < tol_real || v.im.abs() > imag_band {
            all_positive = false;
        }
    }
    if all_positive {
        PositivityVerdict {
            kind: VerdictKind::AllPositive,
            reason: format!(
                "all {} eigenvalues are real and positive within tolerance",
                s.len()
            ),
        }
    } else {
        PositivityVerdict {
            kind: VerdictKind::Inconclusive,
            reason: format!(
                "spectrum margin (min real {}, max |imag| {}) lies inside the tolerance band",
                s.min_real(),
                s.max_imag_abs()
            ),
        }
    }
}

/// Result of a numeric word evaluation.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub matrix: Matrix,
    pub spectrum: Spectrum,
    pub verdict: PositivityVerdict,
    /// `(smallest real part, largest |imaginary part|)`.
    pub margins: (f64, f64),
}

/// Evaluate the word on a positive definite pair in the order the sequence
/// lists its factors.
///
/// Class-1 words are special-cased: `A^a B^b` is similar to the symmetric
/// matrix `B^{b/2} A^a B^{b/2}`, so their spectrum comes from a symmetric
/// eigensolver and is exactly real.
pub fn evaluate(
    seq: &ExponentSequence,
    a: &PDMatrix,
    b: &PDMatrix,
    tol: &Tolerances,
) -> Result<EvalResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let n = a.dim();

    if let Some((letter, e)) = &seq.residual {
        let base = match letter {
            Letter::A => a,
            Letter::B => b,
        };
        let t = e.as_f64();
        let matrix = base.power(t).into_matrix();
        let spectrum = Spectrum::from_reals(base.eigvals().iter().map(|w| w.powf(t)));
        return Ok(finish(
            matrix,
            spectrum,
            PositivityVerdict {
                kind: VerdictKind::AllPositive,
                reason: "single-letter power of a positive definite matrix".into(),
            },
        ));
    }

    if seq.pairs.is_empty() {
        let spectrum = Spectrum::from_reals(std::iter::repeat_n(1.0, n));
        return Ok(finish(
            Matrix::identity(n, n),
            spectrum,
            PositivityVerdict {
                kind: VerdictKind::AllPositive,
                reason: "empty word evaluates to the identity".into(),
            },
        ));
    }

    let mut w = Matrix::identity(n, n);
    for (alpha, beta) in &seq.pairs {
        w = w * a.power(alpha.as_f64()).matrix() * b.power(beta.as_f64()).matrix();
    }

    let spectrum = if seq.pairs.len() == 1 {
        let (alpha, beta) = &seq.pairs[0];
        let half = b.power(beta.as_f64() / 2.0);
        let s = half.matrix() * a.power(alpha.as_f64()).matrix() * half.matrix();
        let (vals, _) = SymMatrix::symmetrized(s).eigen_sorted();
        Spectrum::from_reals(vals)
    } else {
        eigenvalues_general(&w)?
    };
    let verdict = verdict_from_spectrum(&spectrum, tol.tol_real, tol.tol_imag);
    Ok(finish(w, spectrum, verdict))
}

fn finish(matrix: Matrix, spectrum: Spectrum, verdict: PositivityVerdict) -> EvalResult {
    let margins = (spectrum.min_real(), spectrum.max_imag_abs());
    EvalResult {
        matrix,
        spectrum,
        verdict,
        margins,
    }
}

/// Exact evaluation: the word product over rational matrices, for integer
/// exponents only. Spectrum questions on the result belong to the
/// certification machinery.
pub fn evaluate_exact(
    seq: &ExponentSequence,
    a: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<RationalMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let check_int = |e: &Exponent| {
        e.as_integer().ok_or_else(|| Error::ExactModeUnsupported {
            reason: format!("non-integer exponent {e} in exact mode"),
        })
    };
    if let Some((letter, e)) = &seq.residual {
        let k = check_int(e)?;
        let base = match letter {
            Letter::A => a,
            Letter::B => b,
        };
        return base.int_power(k);
    }
    let mut w = RationalMatrix::identity(a.dim());
    for (alpha, beta) in &seq.pairs {
        let ka = check_int(alpha)?;
        let kb = check_int(beta)?;
        w = w.mul(&a.int_power(ka)?).mul(&b.int_power(kb)?);
    }
    Ok(w)
}
