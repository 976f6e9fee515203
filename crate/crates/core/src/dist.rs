//! The structured class of tempered distributions the solver works in.
//!
//! One-dimensional building blocks are [`Atom1D`]s: half-line monomials
//! with log powers (finite parts when the power is negative) and delta
//! derivatives at the origin. A [`TensorTerm`] places one atom in each
//! coordinate; a [`DistExpr`] is a finite rational combination of them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{dim_mismatch, Error, Result};
use crate::poly::EigenValue;
use crate::Rat;

/// Which half-line a [`Atom1D::MonLog`] lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A one-dimensional atom.
///
/// `MonLog { n, p, sign }` is `xⁿ log^p|x| H(sign·x)`; for `n ≤ −1` it is the
/// finite-part regularization fixed by
/// [`RegularizationR`](crate::oracle::RegularizationR). `Delta(k)` is `δ⁽ᵏ⁾`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom1D {
    Delta(u32),
    MonLog { n: i32, p: u32, sign: Sign },
}

impl Atom1D {
    pub fn monlog(n: i32, p: u32, sign: Sign) -> Self {
        Atom1D::MonLog { n, p, sign }
    }

    /// `H(x)` or `H(−x)`.
    pub fn heaviside(sign: Sign) -> Self {
        Atom1D::MonLog { n: 0, p: 0, sign }
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, Atom1D::Delta(_))
    }

    /// Generalized θ-eigenvalue: `n` for `MonLog`, `−(k+1)` for `Delta(k)`.
    pub fn eig(&self) -> i64 {
        match *self {
            Atom1D::Delta(k) => -(k as i64) - 1,
            Atom1D::MonLog { n, .. } => n as i64,
        }
    }

    pub(crate) fn fmt_at(&self, coord: usize, out: &mut String) {
        let x = format!("x{}", coord + 1);
        match *self {
            Atom1D::Delta(k) => out.push_str(&format!("delta({x},{k})")),
            Atom1D::MonLog { n, p, sign } => {
                if n == 1 {
                    out.push_str(&x);
                    out.push('*');
                } else if n != 0 {
                    out.push_str(&format!("{x}^{n}*"));
                }
                if p == 1 {
                    out.push_str(&format!("log({x})*"));
                } else if p > 1 {
                    out.push_str(&format!("log({x})^{p}*"));
                }
                match sign {
                    Sign::Pos => out.push_str(&format!("H({x})")),
                    Sign::Neg => out.push_str(&format!("H(-{x})")),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorTerm {
    pub coeff: Rat,
    /// Factor `j` lives in coordinate `x_j`.
    pub factors: Vec<Atom1D>,
}

impl TensorTerm {
    pub fn new(coeff: Rat, factors: Vec<Atom1D>) -> Self {
        TensorTerm { coeff, factors }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn eigenvalue(&self) -> EigenValue {
        EigenValue(
            self.factors
                .iter()
                .map(|a| Rat::from_integer(a.eig().into()))
                .collect(),
        )
    }

    /// Smallest coordinate carrying a delta factor.
    pub fn first_delta(&self) -> Option<(usize, u32)> {
        self.factors.iter().enumerate().find_map(|(j, a)| match a {
            Atom1D::Delta(k) => Some((j, *k)),
            _ => None,
        })
    }

    pub fn has_delta(&self) -> bool {
        self.first_delta().is_some()
    }
}

/// Accumulator keyed by factor vector; the canonical-form workhorse.
pub(crate) type TermMap = BTreeMap<Vec<Atom1D>, Rat>;

pub(crate) fn accumulate(map: &mut TermMap, factors: Vec<Atom1D>, c: Rat) {
    if c.is_zero() {
        return;
    }
    match map.entry(factors) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistExpr {
    dim: usize,
    terms: Vec<TensorTerm>,
}

impl DistExpr {
    pub fn zero(dim: usize) -> Self {
        DistExpr {
            dim,
            terms: Vec::new(),
        }
    }

    /// A dimension-zero expression is a plain rational number.
    pub fn scalar(c: Rat) -> Self {
        Self::from_terms(0, vec![TensorTerm::new(c, Vec::new())]).expect("dim 0")
    }

    /// Keeps the terms exactly as given; see [`DistExpr::canonicalize`].
    pub fn from_raw(dim: usize, terms: Vec<TensorTerm>) -> Result<Self> {
        for t in &terms {
            if t.dim() != dim {
                return Err(dim_mismatch(dim, t.dim()));
            }
        }
        Ok(DistExpr { dim, terms })
    }

    /// Builds and canonicalizes.
    pub fn from_terms(dim: usize, terms: Vec<TensorTerm>) -> Result<Self> {
        Ok(Self::from_raw(dim, terms)?.canonicalize())
    }

    pub fn single(coeff: Rat, factors: Vec<Atom1D>) -> Self {
        let dim = factors.len();
        Self::from_terms(dim, vec![TensorTerm::new(coeff, factors)]).expect("consistent dim")
    }

    pub fn atom(a: Atom1D) -> Self {
        Self::single(Rat::one(), vec![a])
    }

    pub(crate) fn from_map(dim: usize, map: TermMap) -> Self {
        DistExpr {
            dim,
            terms: map
                .into_iter()
                .map(|(factors, coeff)| TensorTerm { coeff, factors })
                .collect(),
        }
    }

    pub(crate) fn to_map(&self) -> TermMap {
        let mut map = TermMap::new();
        for t in &self.terms {
            accumulate(&mut map, t.factors.clone(), t.coeff.clone());
        }
        map
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[TensorTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the canonical form has no terms.
    pub fn is_zero(&self) -> bool {
        self.to_map().is_empty()
    }

    /// Merges like terms, drops zeros and sorts. Idempotent.
    pub fn canonicalize(&self) -> Self {
        Self::from_map(self.dim, self.to_map())
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].factors < w[1].factors)
            && self.terms.iter().all(|t| !t.coeff.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(dim_mismatch(self.dim, other.dim));
        }
        let mut map = self.to_map();
        for t in &other.terms {
            accumulate(&mut map, t.factors.clone(), t.coeff.clone());
        }
        Ok(Self::from_map(self.dim, map))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        DistExpr {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| TensorTerm::new(&t.coeff * c, t.factors.clone()))
                .collect(),
        }
    }

    /// Inserts `atom` as a new coordinate at position `j` of every term:
    /// the tensor product `atom(x_j) ⊗ self(x′)`.
    pub fn insert_factor(&self, j: usize, atom: &Atom1D) -> Self {
        assert!(j <= self.dim);
        let mut map = TermMap::new();
        for t in &self.terms {
            let mut f = t.factors.clone();
            f.insert(j, atom.clone());
            accumulate(&mut map, f, t.coeff.clone());
        }
        Self::from_map(self.dim + 1, map)
    }

    /// `x^α` on all of ℝᵈ, written over sign patterns of half-line atoms:
    /// per coordinate `xⁿ = MonLog(n,0,+) + (−1)ⁿ MonLog(n,0,−)`.
    pub fn full_monomial(alpha: &[u32]) -> Self {
        let mut map = TermMap::new();
        map.insert(Vec::new(), Rat::one());
        for &n in alpha {
            let mut next = TermMap::new();
            for (f, c) in &map {
                for sign in [Sign::Pos, Sign::Neg] {
                    let mut g = f.clone();
                    g.push(Atom1D::monlog(n as i32, 0, sign));
                    let c = if sign == Sign::Neg && n % 2 == 1 {
                        -c.clone()
                    } else {
                        c.clone()
                    };
                    accumulate(&mut next, g, c);
                }
            }
            map = next;
        }
        Self::from_map(alpha.len(), map)
    }

    /// Splits a hyperplane-supported expression by the smallest coordinate
    /// carrying a delta factor. Parts come back in ascending coordinate order.
    pub fn decompose_hyperplane(&self) -> Result<Vec<(usize, DistExpr)>> {
        let mut parts: BTreeMap<usize, TermMap> = BTreeMap::new();
        for t in self.canonicalize().terms {
            let (j, _) = t
                .first_delta()
                .ok_or_else(|| Error::TermNotHyperplaneSupported(term_to_string(&t)))?;
            accumulate(parts.entry(j).or_default(), t.factors, t.coeff);
        }
        Ok(parts
            .into_iter()
            .map(|(j, m)| (j, Self::from_map(self.dim, m)))
            .collect())
    }
}

/// Eigenvalue vector of a tensor term under `(θ₁, …, θ_d)`.
pub fn eigenvalue(t: &TensorTerm) -> EigenValue {
    t.eigenvalue()
}

fn term_to_string(t: &TensorTerm) -> String {
    DistExpr {
        dim: t.dim(),
        terms: vec![t.clone()],
    }
    .to_string()
}

impl fmt::Display for DistExpr {
    /// The textual grammar accepted by [`crate::parse::parse_dist`]; every
    /// coordinate is written explicitly so the output parses back unchanged.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let abs = t.coeff.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if t.factors.is_empty() {
                out.push_str(&abs.to_string());
                continue;
            }
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            for (j, a) in t.factors.iter().enumerate() {
                if j > 0 {
                    out.push('*');
                }
                a.fmt_at(j, &mut out);
            }
        }
        f.write_str(&out)
    }
}
