//! Exact univariate polynomials over Q and Sturm-chain root counting.
//!
//! Used to decide, without floating point, how many eigenvalues of an exact
//! characteristic polynomial lie in (0, +inf), counted with multiplicity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with rational coefficients, ascending powers. The coefficient
/// vector never ends in a zero except for the zero polynomial itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as i64)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Normalize to a monic polynomial (no-op on the zero polynomial).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading().clone();
        Self::from_coeffs(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Euclidean remainder of self by other.
    pub fn rem(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero polynomial");
        let d = other.degree();
        let lead = other.leading();
        let mut r = self.clone();
        while !r.is_zero() && r.degree() >= d {
            let deg_r = r.degree();
            let factor = &r.coeffs[deg_r] / lead;
            let mut coeffs = r.coeffs;
            for i in 0..d {
                let sub = &factor * &other.coeffs[i];
                coeffs[deg_r - d + i] -= sub;
            }
            coeffs[deg_r] = BigRational::zero();
            r = Self::from_coeffs(coeffs);
        }
        r
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree part self / gcd(self, self').
    pub fn squarefree(&self) -> Self {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        self.div_exact(&g).monic()
    }

    /// Exact quotient; panics if the division leaves a remainder (callers
    /// only divide by known factors).
    pub fn div_exact(&self, other: &Self) -> Self {
        assert!(!other.is_zero());
        let mut r = self.coeffs.clone();
        let d = other.degree();
        let lead = other.leading();
        if self.degree() < d {
            assert!(self.is_zero(), "inexact polynomial division");
            return Self::zero();
        }
        let mut q = vec![BigRational::zero(); self.degree() - d + 1];
        for deg_r in (d..=self.degree()).rev() {
            let factor = &r[deg_r] / lead;
            if factor.is_zero() {
                continue;
            }
            let shift = deg_r - d;
            q[shift] = factor.clone();
            for i in 0..=d {
                let sub = &factor * &other.coeffs[i];
                r[shift + i] -= sub;
            }
        }
        assert!(
            r.iter().all(Zero::is_zero),
            "inexact polynomial division"
        );
        Self::from_coeffs(q)
    }
}

/// Sturm chain of a squarefree polynomial.
fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let k = chain.len();
        if chain[k - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[k - 2].rem(&chain[k - 1]);
        if r.is_zero() {
            break;
        }
        let neg = RatPoly::from_coeffs(r.coeffs().iter().map(|c| -c).collect());
        chain.push(neg);
    }
    chain
}

/// Sign changes in the chain evaluated at x (zero entries skipped).
fn sign_changes_at(chain: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sign changes at +infinity: signs of leading coefficients.
fn sign_changes_at_pos_inf(chain: &[RatPoly]) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| {
            if p.is_zero() {
                0
            } else if p.leading().is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of the squarefree polynomial in (a, +inf).
fn distinct_roots_right_of(p: &RatPoly, a: &BigRational) -> usize {
    if p.degree() == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    sign_changes_at(&chain, a) - sign_changes_at_pos_inf(&chain)
}

/// Count real roots of `p` strictly greater than zero, with multiplicity.
///
/// The multiplicity count recurses on gcd(p, p'): each level of the gcd
/// chain contributes one copy of every positive root that survives it.
pub fn positive_roots_with_multiplicity(p: &RatPoly) -> usize {
    if p.is_zero() || p.degree() == 0 {
        return 0;
    }
    let zero = BigRational::zero();
    let sf = p.squarefree();
    let mut count = distinct_roots_right_of(&sf, &zero);
    let g = p.gcd(&p.derivative());
    if g.degree() > 0 {
        count += positive_roots_with_multiplicity(&g);
    }
    count
}

/// Count all real roots of `p`, with multiplicity.
pub fn real_roots_with_multiplicity(p: &RatPoly) -> usize {
    if p.is_zero() || p.degree() == 0 {
        return 0;
    }
    let sf = p.squarefree();
    let chain = sturm_chain(&sf);
    // Cauchy bound: all real roots lie in (-M, M).
    let lead = sf.leading();
    let max_ratio = sf
        .coeffs()
        .iter()
        .map(|c| (c / lead).abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    let bound = max_ratio + BigRational::one();
    let mut count = sign_changes_at(&chain, &(-bound.clone())) - sign_changes_at(&chain, &bound);
    let g = p.gcd(&p.derivative());
    if g.degree() > 0 {
        count += real_roots_with_multiplicity(&g);
    }
    count
}
