//! Numerical pairing `⟨A, φ⟩` of atom expressions against Gaussian-polynomial
//! test functions, used as an independent check of the symbolic θ-calculus.

mod gausspoly;
pub mod quad;

use std::collections::BTreeMap;

use num_traits::One;

pub use gausspoly::{standard_suite, GaussPoly};
use quad::{adaptive, Estimate};

use crate::dist::{Atom1D, DistExpr, Sign, TensorTerm};
use crate::error::{coord_out_of_range, dim_mismatch, Error, Result};
use crate::poly::Polynomial;
use crate::theta::{apply_polynomial, apply_theta_at};
use crate::Rat;

pub(crate) use gausspoly::to_f64;

/// The pairing convention for finite parts.
///
/// For `n ≤ −1`, `ν = −n`:
///
/// ```text
/// ⟨xⁿ logᵖx H(x), φ⟩ = ∫₀¹ xⁿ logᵖx (φ(x) − Σ_{i<ν} φ⁽ⁱ⁾(0) xⁱ/i!) dx + ∫₁^∞ xⁿ logᵖx φ(x) dx
/// ```
///
/// and the `H(−x)` atoms are defined by reflection,
/// `⟨A(−·), φ⟩ = ⟨A, φ(−·)⟩`, i.e. `⟨xⁿ logᵖ|x| H(−x), φ⟩ = (−1)ⁿ ⟨xⁿ logᵖx H(x), φ(−·)⟩`.
/// Atoms with `n ≥ 0` pair by the plain integral; `⟨δ⁽ᵏ⁾, φ⟩ = (−1)ᵏ φ⁽ᵏ⁾(0)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RegularizationR;

impl RegularizationR {
    /// The split point `|x| = 1` between the subtracted and plain parts.
    pub const SPLIT: f64 = 1.0;
}

// Absolute target for each one-dimensional integral.
const INNER_TOL: f64 = 1e-13;
const DYADIC_LEVELS: i32 = 60;
const TAIL_WIDTHS: f64 = 12.0;

/// Taylor coefficients at 0 of `x^m exp(−(x − c)²/w²)`, up to negligible size.
fn taylor_coeffs(m: u32, c: f64, w: f64) -> Vec<f64> {
    let a = 2.0 * c / (w * w);
    let b = -1.0 / (w * w);
    let g0 = (-c * c / (w * w)).exp();
    let mut e = vec![1.0, a];
    let mut small = 0;
    while e.len() < 600 {
        let i = e.len() - 1;
        let next = (a * e[i] + 2.0 * b * e[i - 1]) / (i as f64 + 1.0);
        e.push(next);
        if next.abs() * 0.5f64.powi(e.len() as i32) < 1e-40 {
            small += 1;
            if small > 4 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let mut f = vec![0.0; m as usize];
    f.extend(e.into_iter().map(|v| v * g0));
    f
}

struct Slice {
    m: u32,
    c: f64,
    w: f64,
}

impl Slice {
    fn eval(&self, x: f64) -> f64 {
        x.powi(self.m as i32) * (-((x - self.c) / self.w).powi(2)).exp()
    }
}

fn logp(x: f64, p: u32) -> f64 {
    if p == 0 {
        1.0
    } else {
        x.ln().powi(p as i32)
    }
}

/// `⟨xⁿ logᵖx H(x), x^m exp(−(x − c)²/w²)⟩` under Regularization R.
fn pair_half_line(n: i32, p: u32, s: &Slice) -> Estimate {
    let nu = (-n).max(0) as usize;
    let coeffs = taylor_coeffs(s.m, s.c, s.w);
    let inner = |x: f64| -> f64 {
        let rem = if nu > 0 && x <= 0.5 {
            // Σ_{i≥ν} f_i x^{i+n}, no cancellation
            let mut acc = 0.0;
            for fi in coeffs[nu.min(coeffs.len())..].iter().rev() {
                acc = acc * x + fi;
            }
            acc
        } else {
            let mut t = 0.0;
            for fi in coeffs[..nu.min(coeffs.len())].iter().rev() {
                t = t * x + fi;
            }
            (s.eval(x) - t) * x.powi(n)
        };
        rem * logp(x, p)
    };
    let mut total = Estimate::ZERO;
    let mut hi = RegularizationR::SPLIT;
    for _ in 0..DYADIC_LEVELS {
        total = total + adaptive(&inner, 0.5 * hi, hi, INNER_TOL / 64.0);
        hi *= 0.5;
    }

    let outer = |x: f64| x.powi(n) * logp(x, p) * s.eval(x);
    let end = (s.c + TAIL_WIDTHS * s.w).max(2.0);
    let pieces = (((end - 1.0) / (0.5 * s.w)).ceil() as usize).max(1);
    let step = (end - 1.0) / pieces as f64;
    for i in 0..pieces {
        let a = 1.0 + step * i as f64;
        total = total + adaptive(&outer, a, a + step, INNER_TOL / pieces as f64);
    }
    total
}

fn factorial_f64(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `⟨a, x^m exp(−(x − c)²/w²)⟩`.
fn pair_atom_monomial(a: &Atom1D, m: u32, c: &Rat, w: &Rat) -> Estimate {
    let (cf, wf) = (to_f64(c), to_f64(w));
    match *a {
        Atom1D::Delta(k) => {
            let coeffs = taylor_coeffs(m, cf, wf);
            let fk = coeffs.get(k as usize).copied().unwrap_or(0.0) * factorial_f64(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Estimate {
                value: sign * fk,
                error: 0.0,
            }
        }
        Atom1D::MonLog { n, p, sign: Sign::Pos } => pair_half_line(n, p, &Slice { m, c: cf, w: wf }),
        Atom1D::MonLog { n, p, sign: Sign::Neg } => {
            let e = pair_half_line(n, p, &Slice { m, c: -cf, w: wf });
            let parity = (n.rem_euclid(2) as u32 + m) % 2;
            let sign = if parity == 0 { 1.0 } else { -1.0 };
            Estimate {
                value: sign * e.value,
                error: e.error,
            }
        }
    }
}

/// `⟨e, φ⟩` with its accumulated quadrature error estimate.
pub fn pair_with_error(e: &DistExpr, phi: &GaussPoly, tol: f64) -> Result<Estimate> {
    if e.dim() != phi.dim() {
        return Err(dim_mismatch(e.dim(), phi.dim()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut cache: BTreeMap<(usize, Atom1D, u32), Estimate> = BTreeMap::new();
    let mut total = Estimate::ZERO;
    for term in e.terms() {
        let tc = to_f64(&term.coeff);
        for (alpha, pc) in phi.poly().terms() {
            let mut value: f64 = 1.0;
            let mut err = 0.0;
            for (j, atom) in term.factors.iter().enumerate() {
                let m = alpha.0[j];
                let est = *cache
                    .entry((j, atom.clone(), m))
                    .or_insert_with(|| pair_atom_monomial(atom, m, &phi.center()[j], phi.width()));
                err = err * (est.value.abs() + est.error) + value.abs() * est.error;
                value *= est.value;
            }
            let scale = tc * to_f64(pc);
            total = total
                + Estimate {
                    value: scale * value,
                    error: scale.abs() * err,
                };
        }
    }
    if total.error > tol || !total.value.is_finite() {
        return Err(Error::QuadratureNoConvergence {
            estimate: total.error,
            tol,
        });
    }
    Ok(total)
}

/// Quadrature estimate of `⟨e, φ⟩` under [`RegularizationR`].
pub fn pair(e: &DistExpr, phi: &GaussPoly, tol: f64) -> Result<f64> {
    pair_with_error(e, phi, tol).map(|r| r.value)
}

/// `a` in coordinate `j`, the full-line constant `1` in every other
/// coordinate.
pub fn embed_atom(a: &Atom1D, j: usize, dim: usize) -> Result<DistExpr> {
    if j >= dim {
        return Err(coord_out_of_range(j, dim));
    }
    let mut terms = Vec::new();
    for mask in 0..(1usize << (dim - 1)) {
        let mut bit = 0;
        let factors = (0..dim)
            .map(|i| {
                if i == j {
                    return a.clone();
                }
                let sign = if (mask >> bit) & 1 == 0 { Sign::Pos } else { Sign::Neg };
                bit += 1;
                Atom1D::heaviside(sign)
            })
            .collect();
        terms.push(TensorTerm::new(Rat::one(), factors));
    }
    DistExpr::from_terms(dim, terms)
}

/// `|⟨θ_j a, φ⟩ + ⟨a, ∂_j(x_j φ)⟩|`: zero exactly when the θ-table entry for
/// `a` is consistent with the pairing convention.
pub fn adjoint_check(a: &Atom1D, phi: &GaussPoly, j: usize, tol: f64) -> Result<f64> {
    let e = embed_atom(a, j, phi.dim())?;
    let lhs = pair(&apply_theta_at(j, &e)?, phi, tol)?;
    let rhs = pair(&e, &phi.derivative_of_x_phi(j)?, tol)?;
    Ok((lhs + rhs).abs())
}

/// Max over `suite` of `|⟨P(θ)U − T, φ⟩|` with `P(θ)U` computed symbolically.
pub fn compare_symbolic_numeric(
    p: &Polynomial,
    u: &DistExpr,
    t: &DistExpr,
    suite: &[GaussPoly],
    tol: f64,
) -> Result<f64> {
    let diff = apply_polynomial(p, u)?.sub(t)?;
    let mut worst: f64 = 0.0;
    for phi in suite {
        worst = worst.max(pair(&diff, phi, tol)?.abs());
    }
    Ok(worst)
}

/// Max over `suite` of `|⟨U, P(θᵗ)φ⟩ − ⟨T, φ⟩|`. Unlike
/// [`compare_symbolic_numeric`] this never applies the θ-table, so it checks
/// a solution against the pairing convention alone.
pub fn transpose_residual(
    p: &Polynomial,
    u: &DistExpr,
    t: &DistExpr,
    suite: &[GaussPoly],
    tol: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for phi in suite {
        let lhs = pair(u, &phi.apply_theta_transpose(p)?, tol)?;
        let rhs = pair(t, phi, tol)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// All atoms with `|n| ≤ 4`, `p ≤ 3`, `k ≤ 4`, both signs.
pub fn standard_atoms() -> Vec<Atom1D> {
    let mut out: Vec<Atom1D> = (0..=4).map(Atom1D::Delta).collect();
    for n in -4..=4 {
        for p in 0..=3 {
            for sign in [Sign::Pos, Sign::Neg] {
                out.push(Atom1D::monlog(n, p, sign));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct AdjointRow {
    pub atom: Atom1D,
    pub function: usize,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct AdjointSuiteReport {
    pub rows: Vec<AdjointRow>,
    pub max_residual: f64,
    pub tol: f64,
}

impl AdjointSuiteReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tol
    }
}

/// `adjoint_check` over [`standard_atoms`] × [`standard_suite`].
pub fn adjoint_suite(tol: f64) -> Result<AdjointSuiteReport> {
    let suite = standard_suite();
    let mut rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    for atom in standard_atoms() {
        for (i, phi) in suite.iter().enumerate() {
            let residual = adjoint_check(&atom, phi, 0, tol)?;
            max_residual = max_residual.max(residual);
            rows.push(AdjointRow {
                atom: atom.clone(),
                function: i,
                residual,
            });
        }
    }
    Ok(AdjointSuiteReport {
        rows,
        max_residual,
        tol,
    })
}

/// Exact `φ⁽ᵏ⁾(0)` for a one-dimensional test function, as a sanity anchor
/// for the delta pairing.
pub fn derivative_at_zero(phi: &GaussPoly, k: u32) -> Result<f64> {
    if phi.dim() != 1 {
        return Err(dim_mismatch(1, phi.dim()));
    }
    let d = phi.derivative_multi(&[k])?;
    Ok(d.eval(&[0.0]))
}
