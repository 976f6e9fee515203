//! Exact multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] stores its nonzero coefficients keyed by exponent
//! multi-index in graded lexicographic order, so iteration, printing and
//! equality are deterministic. Coordinates are indexed from zero in the API;
//! the textual syntax (`t1`, `t2`, ...) is one-based.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{coord_out_of_range, dim_mismatch, Error, Result};
use crate::Rat;

/// Exponent vector `α ∈ ℕ₀ᵈ`, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, j: usize) -> Self {
        let mut e = vec![0; dim];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Point at which a polynomial symbol is evaluated: the per-coordinate
/// generalized θ-eigenvalues of a tensor term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EigenValue(pub Vec<Rat>);

impl EigenValue {
    pub fn from_ints(v: &[i64]) -> Self {
        EigenValue(v.iter().map(|&x| Rat::from_integer(x.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rat>,
}

pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zero(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rat::one())
    }

    /// The coordinate polynomial `z_j` (zero-based `j`).
    pub fn var(dim: usize, j: usize) -> Self {
        assert!(j < dim, "variable index {j} out of range for dimension {dim}");
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::unit(dim, j), Rat::one());
        p
    }

    /// `z_j + c`.
    pub fn linear(dim: usize, j: usize, c: Rat) -> Self {
        &Self::var(dim, j) + &Self::constant(dim, c)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeats and dropping zeros.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(dim_mismatch(dim, e.len()));
            }
            p.add_term(MultiIndex(e), c);
        }
        Ok(p)
    }

    /// Integer-coefficient convenience constructor, mainly for tests.
    pub fn from_int_terms(dim: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(dim, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))))
            .expect("exponent length must equal dim")
    }

    pub(crate) fn add_term(&mut self, e: MultiIndex, c: Rat) {
        debug_assert_eq!(e.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MultiIndex::total)
    }

    /// Degree in the single variable `z_j`.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|e| e.0[j]).max().unwrap_or(0)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms
            .get(&MultiIndex(e.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Homogeneous component of total degree `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.total() == deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(MultiIndex::total);
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(dim_mismatch(self.dim, len));
        }
        Ok(())
    }

    /// Exact value `Σ c_α μ^α`.
    pub fn eval(&self, mu: &EigenValue) -> Result<Rat> {
        self.check_point(mu.len())?;
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in mu.0.iter().zip(&e.0) {
                if k > 0 {
                    t *= Pow::pow(x, k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (xi, &k) in x.iter().zip(&e.0) {
                    t *= xi.powi(k as i32);
                }
                t
            })
            .sum()
    }

    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (zi, &k) in z.iter().zip(&e.0) {
                t *= zi.powu(k);
            }
            acc += t;
        }
        acc
    }

    /// Fixes `z_j = v` and renumbers the remaining variables; the result
    /// has dimension `d − 1`.
    pub fn substitute_coord(&self, j: usize, v: &Rat) -> Result<Self> {
        if j >= self.dim {
            return Err(coord_out_of_range(j, self.dim));
        }
        let mut out = Self::zero(self.dim - 1);
        for (e, c) in &self.terms {
            let mut rest = e.0.clone();
            let k = rest.remove(j);
            out.add_term(MultiIndex(rest), c * Pow::pow(v, k));
        }
        Ok(out)
    }

    /// Splits `P = Σ_e A_e z_j^e`; entry `e` holds `A_e` (same dimension,
    /// `z_j`-exponent zero).
    fn split_by(&self, j: usize) -> Vec<Polynomial> {
        let mut parts = vec![Self::zero(self.dim); self.degree_in(j) as usize + 1];
        for (e, c) in &self.terms {
            let mut base = e.clone();
            let k = std::mem::replace(&mut base.0[j], 0);
            parts[k as usize].add_term(base, c.clone());
        }
        parts
    }

    fn join_by(dim: usize, j: usize, parts: &[Polynomial]) -> Self {
        let mut out = Self::zero(dim);
        for (k, part) in parts.iter().enumerate() {
            for (e, c) in &part.terms {
                let mut e = e.clone();
                e.0[j] += k as u32;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Exact division by `z_j + c`, or `None` when the remainder is nonzero.
    fn divide_linear(&self, j: usize, c: &Rat) -> Option<Self> {
        let a = self.split_by(j);
        let n = a.len() - 1;
        if n == 0 {
            return None;
        }
        let root = -c.clone();
        // synthetic division: b_{n-1} = a_n, b_{i-1} = a_i + root * b_i
        let mut b = vec![Self::zero(self.dim); n];
        b[n - 1] = a[n].clone();
        for i in (1..n).rev() {
            b[i - 1] = &a[i] + &b[i].scale(&root);
        }
        let remainder = &a[0] + &b[0].scale(&root);
        remainder
            .is_zero()
            .then(|| Self::join_by(self.dim, j, &b))
    }

    /// Maximal `r` with `(z_j + c)^r | P`, together with the exact quotient.
    pub fn factor_out(&self, j: usize, c: &Rat) -> Result<(u32, Self)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if j >= self.dim {
            return Err(coord_out_of_range(j, self.dim));
        }
        let mut r = 0;
        let mut q = self.clone();
        while let Some(next) = q.divide_linear(j, c) {
            q = next;
            r += 1;
        }
        Ok((r, q))
    }

    /// Top-degree homogeneous component `P_m`.
    pub fn principal_part(&self) -> Result<Self> {
        let m = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_part(m))
    }

    /// `w ↦ P(μ + w)`, exact.
    pub fn taylor_shift(&self, mu: &EigenValue) -> Result<Self> {
        self.check_point(mu.len())?;
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            // product over coordinates of (μ_j + w_j)^{e_j}
            let mut partial: Vec<(Vec<u32>, Rat)> = vec![(Vec::new(), c.clone())];
            for (j, &k) in e.0.iter().enumerate() {
                let mut next = Vec::with_capacity(partial.len() * (k as usize + 1));
                for (exp, coef) in &partial {
                    for i in 0..=k {
                        let factor = Rat::from_integer(binomial(k, i)) * Pow::pow(&mu.0[j], k - i);
                        if factor.is_zero() {
                            continue;
                        }
                        let mut ex = exp.clone();
                        ex.push(i);
                        next.push((ex, coef * &factor));
                    }
                }
                partial = next;
            }
            for (ex, coef) in partial {
                out.add_term(MultiIndex(ex), coef);
            }
        }
        Ok(out)
    }

    /// Order of vanishing at `μ`: the least `|β|` with `(D^β P)(μ) ≠ 0`,
    /// read off the exact Taylor shift. The witness is the graded-lex
    /// largest multi-index attaining it.
    pub fn vanishing_order(&self, mu: &EigenValue) -> Result<(u32, MultiIndex)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let shifted = self.taylor_shift(mu)?;
        let v = shifted
            .terms
            .keys()
            .map(MultiIndex::total)
            .min()
            .expect("shift of a nonzero polynomial is nonzero");
        let witness = shifted
            .terms
            .keys()
            .filter(|e| e.total() == v)
            .max()
            .cloned()
            .expect("minimum is attained");
        Ok((v, witness))
    }

    /// Maps each monomial `z^α ↦ c_α · z^α` for a caller-supplied weight.
    pub(crate) fn map_coeffs(&self, mut f: impl FnMut(&MultiIndex, &Rat) -> Rat) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(e, c));
        }
        out
    }

    /// `P(−z)`; used for the transposed operator `P(−∂)`.
    pub fn reflect(&self) -> Self {
        self.map_coeffs(|e, c| if e.total() % 2 == 1 { -c.clone() } else { c.clone() })
    }

    /// Formats with a chosen variable prefix (`t` for symbols, `x` for
    /// test-function polynomials).
    pub fn format_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("{var}{}", j + 1)
                    } else {
                        format!("{var}{}^{k}", j + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("t"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                out.add_term(MultiIndex(e), ca * cb);
            }
        }
        out
    }
}
