//! Cancellation calculus on exponent sequences: irreducibility, reduced
//! class, and the 2-goodness classifier.
//!
//! Two rules shrink a sequence of pairs `(alpha_j, beta_j)`:
//! the alpha rule removes pair `j` when `alpha_j` and `alpha_{j+1}` share a
//! sign (cyclically, with `alpha_{m+1} = alpha_1`), and the beta rule
//! removes pair `j+1` when `beta_j` and `beta_{j+1}` share a sign. Whether
//! the beta rule also wraps around is ambiguous; both readings are
//! implemented behind the `beta_cyclic` flag, defaulting to the linear one.
//!
//! A sequence is 2-good when its word has all-positive spectrum for every
//! pair of 2x2 positive definite matrices. Same-sign alphas or betas imply
//! 2-good; a reduced class congruent to 2 or 3 mod 4 refutes it.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::word::{Exponent, ExponentSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Alpha,
    Beta,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Alpha => write!(f, "alpha"),
            Rule::Beta => write!(f, "beta"),
        }
    }
}

/// A place where a rule fires. `j` is the 1-based comparison position: the
/// alpha rule at `j` compares `alpha_j` with `alpha_{j+1}` and removes pair
/// `j`; the beta rule at `j` compares `beta_j` with `beta_{j+1}` and
/// removes pair `j+1` (indices cyclic).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CancellationSite {
    pub rule: Rule,
    pub j: usize,
}

impl CancellationSite {
    /// 1-based index of the pair the site removes, in a sequence of length m.
    pub fn removed_index(&self, m: usize) -> usize {
        match self.rule {
            Rule::Alpha => self.j,
            Rule::Beta => self.j % m + 1,
        }
    }
}

fn sites_for_signs(alphas: &[i8], betas: &[i8], beta_cyclic: bool) -> Vec<CancellationSite> {
    let m = alphas.len();
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    for j in 0..m {
        if alphas[j] == alphas[(j + 1) % m] {
            out.push(CancellationSite {
                rule: Rule::Alpha,
                j: j + 1,
            });
        }
    }
    let beta_limit = if beta_cyclic { m } else { m.saturating_sub(1) };
    for j in 0..beta_limit {
        if betas[j] == betas[(j + 1) % m] {
            out.push(CancellationSite {
                rule: Rule::Beta,
                j: j + 1,
            });
        }
    }
    out
}

/// Every position where a rule applies, in deterministic (rule, j) order.
pub fn applicable_cancellations(
    seq: &ExponentSequence,
    beta_cyclic: bool,
) -> Vec<CancellationSite> {
    let pattern = seq.sign_pattern();
    let alphas: Vec<i8> = pattern.iter().map(|p| p.0).collect();
    let betas: Vec<i8> = pattern.iter().map(|p| p.1).collect();
    sites_for_signs(&alphas, &betas, beta_cyclic)
}

/// True iff no cancellation applies. Nonempty irreducible sequences have
/// strictly alternating alpha signs and beta signs (hence even length).
pub fn is_irreducible(seq: &ExponentSequence, beta_cyclic: bool) -> bool {
    applicable_cancellations(seq, beta_cyclic).is_empty()
}

/// Apply one cancellation, deleting the pair the site names.
pub fn apply_cancellation(
    seq: &ExponentSequence,
    site: &CancellationSite,
) -> ExponentSequence {
    let m = seq.class_n();
    assert!(m >= 1, "cancellation needs a nonempty sequence");
    let removed = site.removed_index(m) - 1;
    let pairs: Vec<(Exponent, Exponent)> = seq
        .pairs()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != removed)
        .map(|(_, p)| p.clone())
        .collect();
    ExponentSequence::from_pairs(pairs)
}

#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub rule: Rule,
    pub j: usize,
    pub before: ExponentSequence,
    pub after: ExponentSequence,
}

/// One witnessing path from the input to a minimal irreducible sequence.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub terminal: ExponentSequence,
}

#[derive(Debug, Clone)]
pub struct ReducedClass {
    /// Minimal reachable irreducible length, the reduced class m.
    pub m: usize,
    /// Lexicographically smallest (by rule, then j, step by step) path to a
    /// minimal irreducible sequence.
    pub trace: ReductionTrace,
    /// Lengths of all reachable irreducible sequences across every
    /// cancellation order.
    pub reachable: BTreeSet<usize>,
}

/// Surviving original pair indices, in order. Signs are all that rules
/// inspect, so states are index lists into the input's sign pattern.
type State = Vec<u32>;

struct Reducer {
    alphas: Vec<i8>,
    betas: Vec<i8>,
    beta_cyclic: bool,
}

impl Reducer {
    fn sites(&self, state: &State) -> Vec<CancellationSite> {
        let a: Vec<i8> = state.iter().map(|&i| self.alphas[i as usize]).collect();
        let b: Vec<i8> = state.iter().map(|&i| self.betas[i as usize]).collect();
        sites_for_signs(&a, &b, self.beta_cyclic)
    }

    fn child(&self, state: &State, site: &CancellationSite) -> State {
        let removed = site.removed_index(state.len()) - 1;
        let mut next = state.clone();
        next.remove(removed);
        next
    }
}

/// Explore all cancellation orders. `m` is the minimum over reachable
/// irreducible lengths; the trace follows the lexicographically smallest
/// rule sequence that attains it.
pub fn reduced_class(seq: &ExponentSequence, beta_cyclic: bool) -> ReducedClass {
    let pattern = seq.sign_pattern();
    let reducer = Reducer {
        alphas: pattern.iter().map(|p| p.0).collect(),
        betas: pattern.iter().map(|p| p.1).collect(),
        beta_cyclic,
    };
    let initial: State = (0..seq.class_n() as u32).collect();

    let mut reachable = BTreeSet::new();
    let mut visited: HashSet<State> = HashSet::new();
    let mut stack = vec![initial.clone()];
    visited.insert(initial.clone());
    while let Some(state) = stack.pop() {
        let sites = reducer.sites(&state);
        if sites.is_empty() {
            reachable.insert(state.len());
            continue;
        }
        for site in &sites {
            let next = reducer.child(&state, site);
            if visited.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    let m = *reachable.iter().next().expect("every chain terminates");

    let mut memo: HashMap<State, bool> = HashMap::new();
    let mut path: Vec<(CancellationSite, State)> = Vec::new();
    let found = lex_first_path(&reducer, &initial, m, &mut memo, &mut path);
    debug_assert!(found, "minimal terminal must be reachable");

    let mut steps = Vec::with_capacity(path.len());
    let mut current = initial;
    for (site, next) in path {
        let before = seq_from_state(seq, &current);
        let after = seq_from_state(seq, &next);
        steps.push(ReductionStep {
            rule: site.rule,
            j: site.j,
            before,
            after,
        });
        current = next;
    }
    let terminal = seq_from_state(seq, &current);
    ReducedClass {
        m,
        trace: ReductionTrace { steps, terminal },
        reachable,
    }
}

fn seq_from_state(seq: &ExponentSequence, state: &State) -> ExponentSequence {
    ExponentSequence::from_pairs(
        state
            .iter()
            .map(|&i| seq.pairs()[i as usize].clone())
            .collect(),
    )
}

fn lex_first_path(
    reducer: &Reducer,
    state: &State,
    target_m: usize,
    memo: &mut HashMap<State, bool>,
    path: &mut Vec<(CancellationSite, State)>,
) -> bool {
    if let Some(&ok) = memo.get(state) {
        if !ok {
            return false;
        }
    }
    let sites = reducer.sites(state);
    if sites.is_empty() {
        let hit = state.len() == target_m;
        memo.insert(state.clone(), hit);
        return hit;
    }
    for site in sites {
        let next = reducer.child(state, &site);
        path.push((site, next.clone()));
        if lex_first_path(reducer, &next, target_m, memo, path) {
            memo.insert(state.clone(), true);
            return true;
        }
        path.pop();
    }
    memo.insert(state.clone(), false);
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goodness {
    ProvablyGood,
    ProvablyBad,
    Unknown,
}

impl fmt::Display for Goodness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goodness::ProvablyGood => write!(f, "ProvablyGood"),
            Goodness::ProvablyBad => write!(f, "ProvablyBad"),
            Goodness::Unknown => write!(f, "Unknown"),
        }
    }
}

/// 2-goodness classification with the verification-suite tags that justify
/// it and, for refuted sequences, a witness recipe.
#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Goodness,
    /// Verification suites certifying the verdict (empty for Unknown).
    pub theorems: Vec<&'static str>,
    /// Reduced class under the default (linear beta) reading.
    pub reduced_class_m: usize,
    /// Reduced class under the strict-cyclic beta reading; equals
    /// `reduced_class_m` unless the ambiguity bites.
    pub strict_reduced_class_m: usize,
    pub reachable_m: BTreeSet<usize>,
    pub witness_family: Option<String>,
}

/// Classify a sequence: same-sign alphas or betas are provably 2-good;
/// reduced class 2 or 3 mod 4 is provably not; anything else is unknown
/// (the search module's territory).
pub fn classify(seq: &ExponentSequence) -> Classification {
    let rc = reduced_class(seq, false);
    let rc_strict = reduced_class(seq, true);
    let n = seq.class_n();

    if n <= 1 {
        return Classification {
            verdict: Goodness::ProvablyGood,
            theorems: vec!["class1"],
            reduced_class_m: rc.m,
            strict_reduced_class_m: rc_strict.m,
            reachable_m: rc.reachable,
            witness_family: None,
        };
    }

    let alphas_same = same_sign(seq.alphas());
    let betas_same = same_sign(seq.betas());
    if alphas_same || betas_same {
        return Classification {
            verdict: Goodness::ProvablyGood,
            theorems: vec!["thm-2eig", "thm-n2"],
            reduced_class_m: rc.m,
            strict_reduced_class_m: rc_strict.m,
            reachable_m: rc.reachable,
            witness_family: None,
        };
    }

    if rc.m % 4 == 2 || rc.m % 4 == 3 {
        let witness = format!("epsilon({})", rc.trace.terminal);
        return Classification {
            verdict: Goodness::ProvablyBad,
            theorems: vec!["not2good"],
            reduced_class_m: rc.m,
            strict_reduced_class_m: rc_strict.m,
            reachable_m: rc.reachable,
            witness_family: Some(witness),
        };
    }

    Classification {
        verdict: Goodness::Unknown,
        theorems: vec![],
        reduced_class_m: rc.m,
        strict_reduced_class_m: rc_strict.m,
        reachable_m: rc.reachable,
        witness_family: None,
    }
}

fn same_sign<'a>(mut exps: impl Iterator<Item = &'a Exponent>) -> bool {
    match exps.next() {
        None => true,
        Some(first) => {
            let s = first.sign();
            exps.all(|e| e.sign() == s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(pairs: &[(i64, i64)]) -> ExponentSequence {
        ExponentSequence::from_int_pairs(pairs)
    }

    fn site(rule: Rule, j: usize) -> CancellationSite {
        CancellationSite { rule, j }
    }

    #[test]
    fn all_positive_pair_sites() {
        let s = seq(&[(1, 2), (3, 4)]);
        assert_eq!(
            applicable_cancellations(&s, false),
            vec![site(Rule::Alpha, 1), site(Rule::Alpha, 2), site(Rule::Beta, 1)]
        );
        assert_eq!(
            applicable_cancellations(&s, true),
            vec![
                site(Rule::Alpha, 1),
                site(Rule::Alpha, 2),
                site(Rule::Beta, 1),
                site(Rule::Beta, 2)
            ]
        );
    }

    #[test]
    fn commutator_is_irreducible() {
        let s = seq(&[(1, 1), (-1, -1)]);
        assert!(applicable_cancellations(&s, false).is_empty());
        assert!(is_irreducible(&s, false));
        assert!(is_irreducible(&s, true));
    }

    #[test]
    fn double_commutator_is_irreducible() {
        let s = seq(&[(1, 1), (-1, -1), (1, 1), (-1, -1)]);
        assert!(is_irreducible(&s, false));
    }

    #[test]
    fn singleton_cancels_cyclically() {
        let s = seq(&[(2, 5)]);
        assert_eq!(
            applicable_cancellations(&s, false),
            vec![site(Rule::Alpha, 1)]
        );
        let r = reduced_class(&s, false);
        assert_eq!(r.m, 0);
    }

    #[test]
    fn reduction_to_zero_through_class_one() {
        let s = seq(&[(2, 1), (3, -1)]);
        let r = reduced_class(&s, false);
        assert_eq!(r.m, 0);
        assert_eq!(r.reachable, BTreeSet::from([0]));
        // first step is the lexicographically smallest applicable site
        assert_eq!(r.trace.steps[0].rule, Rule::Alpha);
        assert_eq!(r.trace.steps[0].j, 1);
        assert_eq!(r.trace.steps.len(), 2);
        assert!(r.trace.terminal.pairs().is_empty());
    }

    #[test]
    fn commutator_reduced_class_two() {
        let r = reduced_class(&seq(&[(1, 1), (-1, -1)]), false);
        assert_eq!(r.m, 2);
        assert!(r.trace.steps.is_empty());
        assert_eq!(r.reachable, BTreeSet::from([2]));
    }

    #[test]
    fn double_commutator_reduced_class_four() {
        let r = reduced_class(&seq(&[(1, 1), (-1, -1), (1, 1), (-1, -1)]), false);
        assert_eq!(r.m, 4);
    }

    #[test]
    fn steps_shrink_by_one_pair() {
        let r = reduced_class(&seq(&[(1, 2), (3, -4), (-1, 5)]), false);
        for step in &r.trace.steps {
            assert_eq!(step.before.class_n(), step.after.class_n() + 1);
        }
        assert!(is_irreducible(&r.trace.terminal, false));
        assert_eq!(r.trace.terminal.class_n(), r.m);
    }

    #[test]
    fn classify_same_sign_good() {
        let c = classify(&seq(&[(1, 1), (2, 2)]));
        assert_eq!(c.verdict, Goodness::ProvablyGood);
        assert!(c.theorems.contains(&"thm-2eig"));
    }

    #[test]
    fn classify_sign_flipped_commutator_bad() {
        for (a, b) in [(1i64, 1i64), (2, 3), (3, 1)] {
            let c = classify(&seq(&[(a, b), (-a, -b)]));
            assert_eq!(c.verdict, Goodness::ProvablyBad);
            assert_eq!(c.reduced_class_m, 2);
            assert_eq!(c.theorems, vec!["not2good"]);
            assert!(c.witness_family.as_deref().unwrap().starts_with("epsilon("));
        }
    }

    #[test]
    fn classify_class_four_alternation_unknown() {
        let c = classify(&seq(&[(1, 1), (-1, -1), (1, 1), (-1, -1)]));
        assert_eq!(c.verdict, Goodness::Unknown);
        assert_eq!(c.reduced_class_m, 4);
        assert!(c.theorems.is_empty());
    }

    #[test]
    fn classify_class_one_good() {
        let c = classify(&seq(&[(1, -2)]));
        assert_eq!(c.verdict, Goodness::ProvablyGood);
        assert_eq!(c.theorems, vec!["class1"]);
        assert_eq!(c.reduced_class_m, 0);
    }

    #[test]
    fn all_class_two_patterns_decided() {
        for bits in 0..16u8 {
            let sign = |b: u8| if b == 0 { 1i64 } else { -1 };
            let s = seq(&[
                (sign(bits & 1), sign(bits >> 1 & 1)),
                (sign(bits >> 2 & 1), sign(bits >> 3 & 1)),
            ]);
            let c = classify(&s);
            assert_ne!(c.verdict, Goodness::Unknown, "pattern {bits:04b}");
            if c.verdict == Goodness::ProvablyBad {
                assert_eq!(c.reduced_class_m, 2);
            }
        }
    }

    #[test]
    fn reduced_class_invariant_under_joint_negation() {
        for pairs in [
            vec![(1i64, 2i64), (3, -4), (-1, 5)],
            vec![(1, 1), (-1, -1)],
            vec![(2, -1), (-3, 2), (1, -2), (-1, 1)],
        ] {
            let s = seq(&pairs);
            let flipped = s.negate_alphas().negate_betas();
            assert_eq!(
                reduced_class(&s, false).m,
                reduced_class(&flipped, false).m
            );
        }
    }

    #[test]
    fn irreducible_terminals_alternate() {
        let s = seq(&[(1, -2), (3, 4), (-2, -1), (1, 3), (-4, -2)]);
        let r = reduced_class(&s, false);
        let terminal = &r.trace.terminal;
        let pattern = terminal.sign_pattern();
        for w in pattern.windows(2) {
            assert_ne!(w[0].0, w[1].0, "alpha signs must alternate");
            assert_ne!(w[0].1, w[1].1, "beta signs must alternate");
        }
        if pattern.len() >= 2 {
            assert_ne!(pattern.first().unwrap().0, pattern.last().unwrap().0);
        }
    }
}
