//! Polynomials in the inverse temperature and truncated power series in
//! `y0 = exp(-beta * omega_bar)` whose coefficients are such polynomials.
//!
//! Every low-temperature quantity of the model (frequency shift, occupation
//! factor, log-corrections, the reduced partition function) is carried as a
//! [`CoefficientSeries`]. The series is truncated at a fixed order `N`:
//! arithmetic never produces or consults terms beyond `y0^N`.
//!
//! The constant term of a series is always a plain real number. Operations
//! that would give it a `beta` dependence are contract violations and panic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

/// Polynomial in `beta` with real coefficients; index `k` holds the `beta^k`
/// coefficient. Trailing zeros are trimmed, so the zero polynomial stores no
/// coefficients.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BetaPolynomial {
    coeffs: Vec<f64>,
}

impl BetaPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * beta^k`
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `beta^k`; zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Degree of the polynomial. The zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation.
    pub fn eval(&self, beta: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * beta + c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by `beta^k`.
    pub fn shift_beta(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0.0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    fn add_scaled_assign(&mut self, other: &Self, s: f64) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }
}

impl fmt::Display for BetaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*b")?,
                _ => write!(f, "{c}*b^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &BetaPolynomial {
    type Output = BetaPolynomial;
    fn add(self, rhs: &BetaPolynomial) -> BetaPolynomial {
        let mut out = self.clone();
        out.add_scaled_assign(rhs, 1.0);
        out
    }
}

impl Sub for &BetaPolynomial {
    type Output = BetaPolynomial;
    fn sub(self, rhs: &BetaPolynomial) -> BetaPolynomial {
        let mut out = self.clone();
        out.add_scaled_assign(rhs, -1.0);
        out
    }
}

impl Neg for &BetaPolynomial {
    type Output = BetaPolynomial;
    fn neg(self) -> BetaPolynomial {
        self.scale(-1.0)
    }
}

impl Mul for &BetaPolynomial {
    type Output = BetaPolynomial;
    fn mul(self, rhs: &BetaPolynomial) -> BetaPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return BetaPolynomial::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BetaPolynomial::from_coeffs(coeffs)
    }
}

/// Truncated power series `c0 + sum_{n=1}^{N} X_n(beta) y0^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSeries {
    // terms[0] is the constant term, always of degree 0 in beta.
    terms: Vec<BetaPolynomial>,
}

impl CoefficientSeries {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "truncation order must be at least 1");
        Self {
            terms: vec![BetaPolynomial::zero(); order + 1],
        }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.terms[0] = BetaPolynomial::constant(c);
        s
    }

    /// The expansion variable `y0` itself.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.terms[1] = BetaPolynomial::constant(1.0);
        s
    }

    /// Build from a constant term and the polynomials multiplying
    /// `y0, y0^2, ...`. Missing terms are zero; terms beyond `order` are
    /// dropped.
    pub fn from_terms(constant: f64, terms: Vec<BetaPolynomial>, order: usize) -> Self {
        let mut s = Self::constant(constant, order);
        for (n, p) in terms.into_iter().enumerate().take(order) {
            s.terms[n + 1] = p;
        }
        s
    }

    /// Series with `beta`-independent coefficients `coeffs[n]` on `y0^n`.
    pub fn from_real(coeffs: &[f64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (n, &c) in coeffs.iter().enumerate().take(order + 1) {
            s.terms[n] = BetaPolynomial::constant(c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn constant_term(&self) -> f64 {
        self.terms[0].coeff(0)
    }

    /// Polynomial multiplying `y0^n` (`n = 0` gives the constant term).
    pub fn term(&self, n: usize) -> &BetaPolynomial {
        &self.terms[n]
    }

    /// All terms, index `n` multiplying `y0^n`.
    pub fn terms(&self) -> &[BetaPolynomial] {
        &self.terms
    }

    /// The `beta^k` coefficient of the `y0^n` term.
    ///
    /// Panics when `n` exceeds the truncation order or `k` exceeds the degree
    /// of that term (a zero term admits only `k = 0`).
    pub fn coefficient(&self, n: usize, k: usize) -> f64 {
        assert!(
            n <= self.order(),
            "term index {n} beyond truncation order {}",
            self.order()
        );
        let p = &self.terms[n];
        assert!(
            k <= p.degree(),
            "beta power {k} beyond degree {} of term {n}",
            p.degree()
        );
        p.coeff(k)
    }

    /// Largest `degree(term n) - n` over all terms; `<= 0` means every term
    /// respects the `degree <= n` bound.
    pub fn degree_excess(&self) -> isize {
        self.terms
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(n, p)| p.degree() as isize - n as isize)
            .max()
            .unwrap_or(isize::MIN)
    }

    /// Sum of the truncated series at a point.
    pub fn evaluate(&self, beta: f64, y0: f64) -> f64 {
        self.terms
            .iter()
            .rev()
            .fold(0.0, |acc, p| acc * y0 + p.eval(beta))
    }

    /// The series with `beta` set to zero.
    pub fn at_beta_zero(&self) -> Vec<f64> {
        self.terms.iter().map(|p| p.coeff(0)).collect()
    }

    /// Same series re-truncated at a different order (extra terms are zero).
    pub fn with_order(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (dst, src) in s.terms.iter_mut().zip(&self.terms) {
            *dst = src.clone();
        }
        s
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "mismatched truncation orders"
        );
    }

    fn check_zero_constant(&self, what: &str) {
        assert!(
            self.constant_term() == 0.0,
            "{what} requires a series with zero constant term (got {})",
            self.constant_term()
        );
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Multiply every term by a polynomial in `beta`. A non-constant
    /// multiplier needs a zero constant term.
    pub fn mul_poly(&self, p: &BetaPolynomial) -> Self {
        if !p.is_constant() {
            self.check_zero_constant("multiplication by a beta polynomial");
        }
        Self {
            terms: self.terms.iter().map(|t| t * p).collect(),
        }
    }

    /// Multiply by `beta`.
    pub fn mul_beta(&self) -> Self {
        self.check_zero_constant("multiplication by beta");
        Self {
            terms: self.terms.iter().map(|t| t.shift_beta(1)).collect(),
        }
    }

    /// Multiply by `y0` (dropping the term pushed past the truncation).
    pub fn mul_y0(&self) -> Self {
        let mut s = Self::zero(self.order());
        for n in 1..=self.order() {
            s.terms[n] = self.terms[n - 1].clone();
        }
        s
    }

    /// Replace the constant term.
    pub fn with_constant(&self, c: f64) -> Self {
        let mut s = self.clone();
        s.terms[0] = BetaPolynomial::constant(c);
        s
    }

    /// `exp(a)` for `a` with zero constant term, via `n f_n = sum_k k a_k f_{n-k}`.
    pub fn exp(&self) -> Self {
        self.check_zero_constant("exp");
        let order = self.order();
        let mut f = Self::constant(1.0, order);
        for n in 1..=order {
            let mut acc = BetaPolynomial::zero();
            for k in 1..=n {
                if self.terms[k].is_zero() || f.terms[n - k].is_zero() {
                    continue;
                }
                acc.add_scaled_assign(&(&self.terms[k] * &f.terms[n - k]), k as f64);
            }
            f.terms[n] = acc.scale(1.0 / n as f64);
        }
        f
    }

    /// `ln(1 + a)` for `a` with zero constant term.
    pub fn log1p(&self) -> Self {
        self.check_zero_constant("log1p");
        let order = self.order();
        let mut l = Self::zero(order);
        for n in 1..=order {
            let mut acc = self.terms[n].scale(n as f64);
            for k in 1..n {
                if l.terms[k].is_zero() || self.terms[n - k].is_zero() {
                    continue;
                }
                acc.add_scaled_assign(&(&l.terms[k] * &self.terms[n - k]), -(k as f64));
            }
            l.terms[n] = acc.scale(1.0 / n as f64);
        }
        l
    }

    /// `1 / a`; the constant term must be nonzero.
    pub fn recip(&self) -> Self {
        let a0 = self.constant_term();
        assert!(a0 != 0.0, "recip requires a nonzero constant term");
        let order = self.order();
        let mut r = Self::constant(1.0 / a0, order);
        for n in 1..=order {
            let mut acc = BetaPolynomial::zero();
            for k in 1..=n {
                if self.terms[k].is_zero() || r.terms[n - k].is_zero() {
                    continue;
                }
                acc.add_scaled_assign(&(&self.terms[k] * &r.terms[n - k]), 1.0);
            }
            r.terms[n] = acc.scale(-1.0 / a0);
        }
        r
    }

    /// `(1 + a)^r` for `a` with zero constant term (binomial series).
    pub fn pow1p(&self, r: f64) -> Self {
        self.check_zero_constant("pow1p");
        let order = self.order();
        let mut p = Self::constant(1.0, order);
        for n in 1..=order {
            let mut acc = BetaPolynomial::zero();
            for k in 1..=n {
                if self.terms[k].is_zero() || p.terms[n - k].is_zero() {
                    continue;
                }
                let w = r * k as f64 - (n - k) as f64;
                acc.add_scaled_assign(&(&self.terms[k] * &p.terms[n - k]), w);
            }
            p.terms[n] = acc.scale(1.0 / n as f64);
        }
        p
    }

    /// `a^r` for a series with positive constant term.
    pub fn pow(&self, r: f64) -> Self {
        let a0 = self.constant_term();
        assert!(a0 > 0.0, "pow requires a positive constant term");
        self.with_constant(0.0).scale(1.0 / a0).pow1p(r).scale(a0.powf(r))
    }

    /// `sum_k coeffs[k] * a^k` for `a` with zero constant term.
    pub fn compose(&self, coeffs: &[f64]) -> Self {
        self.check_zero_constant("composition");
        let order = self.order();
        let mut out = Self::zero(order);
        // Horner in the series ring; powers beyond `order` vanish.
        for &c in coeffs.iter().take(order + 1).rev() {
            out = &(&out * self) + &Self::constant(c, order);
        }
        out
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, k: usize) -> Self {
        let mut out = Self::constant(1.0, self.order());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Add for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn add(self, rhs: &CoefficientSeries) -> CoefficientSeries {
        self.check_order(rhs);
        CoefficientSeries {
            terms: self
                .terms
                .iter()
                .zip(&rhs.terms)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn sub(self, rhs: &CoefficientSeries) -> CoefficientSeries {
        self.check_order(rhs);
        CoefficientSeries {
            terms: self
                .terms
                .iter()
                .zip(&rhs.terms)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn neg(self) -> CoefficientSeries {
        self.scale(-1.0)
    }
}

impl Mul for &CoefficientSeries {
    type Output = CoefficientSeries;
    /// Cauchy product truncated at the common order.
    fn mul(self, rhs: &CoefficientSeries) -> CoefficientSeries {
        self.check_order(rhs);
        let order = self.order();
        let mut out = CoefficientSeries::zero(order);
        for (i, a) in self.terms.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.terms.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.terms[i + j].add_scaled_assign(&(a * b), 1.0);
            }
        }
        out
    }
}

/// Free-function forms of the series operations.
pub fn series_add(a: &CoefficientSeries, b: &CoefficientSeries) -> CoefficientSeries {
    a + b
}

pub fn series_mul(a: &CoefficientSeries, b: &CoefficientSeries) -> CoefficientSeries {
    a * b
}

pub fn series_exp(a: &CoefficientSeries) -> CoefficientSeries {
    a.exp()
}

pub fn series_log1p(a: &CoefficientSeries) -> CoefficientSeries {
    a.log1p()
}

pub fn series_recip(a: &CoefficientSeries) -> CoefficientSeries {
    a.recip()
}

/// `(1 + a)^r`.
pub fn series_pow(a: &CoefficientSeries, r: f64) -> CoefficientSeries {
    a.pow1p(r)
}

pub fn extract_coefficient(s: &CoefficientSeries, n: usize, k: usize) -> f64 {
    s.coefficient(n, k)
}
