//! Constructive solution of `P(θ) U = T` inside the atom class.
//!
//! Each canonical term of `T` is dispatched on its shape:
//!
//! * terms without a delta factor go through the *quadrant phase*
//!   ([`solve_continuous_term`]): modulo delta-supported distributions the
//!   operator acts on `x^μ · (log-polynomial)` as `P(μ + ∂_L)`, which is
//!   inverted exactly on log-polynomials; the leftover, computed in the full
//!   calculus, is supported on the coordinate hyperplanes and is fed back;
//! * terms with a delta factor `δ⁽ᵏ⁾(x_j)` go through the *hyperplane phase*
//!   ([`solve_delta_term`]): `P(θ)(δ⁽ᵏ⁾ ⊗ V) = δ⁽ᵏ⁾ ⊗ P(−k−1, θ′)V`, so the
//!   problem drops one dimension unless `z_j + k + 1` divides `P`, in which
//!   case the factor is stripped and inverted by [`resonant_1d`].
//!
//! Every report is checked by exact forward application before it is
//! returned.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dist::{accumulate, Atom1D, DistExpr, TensorTerm, TermMap};
use crate::error::{dim_mismatch, Error, Result};
use crate::linsolve::solve_exact;
use crate::poly::{rat, Polynomial};
use crate::theta::{apply_polynomial, apply_theta, equal};
use crate::Rat;

/// One recorded step of the recursion. Coordinates are zero-based and refer
/// to the original problem, not to the reduced subproblems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceStep {
    /// `z_coord := value` (always `−(k+1)` for a `δ⁽ᵏ⁾` factor).
    Substitution { coord: usize, value: i64 },
    /// `(z_coord + shift)^power` divided out of the current symbol.
    FactorExtraction { coord: usize, shift: i64, power: u32 },
    /// One inversion of `θ_coord + order + 1`.
    Resonant1d { coord: usize, order: u32 },
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TraceStep::Substitution { coord, value } => {
                write!(f, "substitute t{} := {}", coord + 1, value)
            }
            TraceStep::FactorExtraction { coord, shift, power } => {
                write!(f, "extract (t{} + {})^{}", coord + 1, shift, power)
            }
            TraceStep::Resonant1d { coord, order } => {
                write!(f, "resonant_1d x{} k={}", coord + 1, order)
            }
        }
    }
}

/// Log escalation used by one quadrant-phase step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Escalation {
    pub eigenvalue: Vec<i64>,
    pub vanishing_order: u32,
    pub depth: u32,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: DistExpr,
    pub verified: bool,
    /// Largest log bump used by any quadrant-phase step.
    pub escalation_depth: u32,
    pub recursion_trace: Vec<TraceStep>,
    pub escalations: Vec<Escalation>,
    /// Terms handed to the dispatcher over the whole recursion.
    pub dispatched_terms: usize,
}

#[derive(Default)]
struct Ctx {
    trace: Vec<TraceStep>,
    escalations: Vec<Escalation>,
    dispatched: usize,
}

/// Solves `P(θ) U = T`, returning a particular solution with its
/// verification status and recursion record.
pub fn solve(p: &Polynomial, t: &DistExpr) -> Result<SolveReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.dim() != t.dim() {
        return Err(dim_mismatch(p.dim(), t.dim()));
    }
    let mut ctx = Ctx::default();
    let coords: Vec<usize> = (0..t.dim()).collect();
    let solution = solve_expr(p, &t.canonicalize(), &coords, &mut ctx)?;

    let deg = p.degree().unwrap_or(0) as usize;
    let cap = t.dim().max(1) * (deg + 1) * ctx.dispatched.max(1);
    if ctx.trace.len() > cap {
        return Err(Error::TraceCapExceeded { cap });
    }
    let verified = verify(p, &solution, t);
    Ok(SolveReport {
        solution,
        verified,
        escalation_depth: ctx.escalations.iter().map(|e| e.depth).max().unwrap_or(0),
        recursion_trace: ctx.trace,
        escalations: ctx.escalations,
        dispatched_terms: ctx.dispatched,
    })
}

/// Exact check `P(θ) U = T`; false on dimension mismatch.
pub fn verify(p: &Polynomial, u: &DistExpr, t: &DistExpr) -> bool {
    if p.dim() != u.dim() || u.dim() != t.dim() {
        return false;
    }
    match apply_polynomial(p, u) {
        Ok(lhs) => equal(&lhs, t),
        Err(_) => false,
    }
}

fn solve_expr(p: &Polynomial, t: &DistExpr, coords: &[usize], ctx: &mut Ctx) -> Result<DistExpr> {
    let d = t.dim();
    let mut u = TermMap::new();
    // (coordinate, delta order) → remaining factors
    let mut groups: BTreeMap<(usize, u32), TermMap> = BTreeMap::new();
    let push_delta = |term: &TensorTerm, groups: &mut BTreeMap<(usize, u32), TermMap>| {
        let (j, k) = term.first_delta().expect("delta-bearing term");
        let mut rest = term.factors.clone();
        rest.remove(j);
        accumulate(groups.entry((j, k)).or_default(), rest, term.coeff.clone());
    };

    for term in t.terms() {
        ctx.dispatched += 1;
        if term.has_delta() {
            push_delta(term, &mut groups);
            continue;
        }
        let (partial, residual) = continuous_step(p, term, ctx)?;
        for s in partial.terms() {
            accumulate(&mut u, s.factors.clone(), s.coeff.clone());
        }
        for r in residual.terms() {
            ctx.dispatched += 1;
            push_delta(r, &mut groups);
        }
    }

    for ((j, k), rest) in groups {
        let rest = DistExpr::from_map(d - 1, rest);
        if rest.is_empty() {
            continue;
        }
        let w = delta_step(p, j, k, &rest, coords, ctx)?;
        for s in w.terms() {
            accumulate(&mut u, s.factors.clone(), s.coeff.clone());
        }
    }
    Ok(DistExpr::from_map(d, u))
}

/// Solves for `δ⁽ᵏ⁾(x_j) ⊗ rest`.
fn delta_step(
    p: &Polynomial,
    j: usize,
    k: u32,
    rest: &DistExpr,
    coords: &[usize],
    ctx: &mut Ctx,
) -> Result<DistExpr> {
    let eig = -(k as i64) - 1;
    let reduced = p.substitute_coord(j, &rat(eig))?;
    if !reduced.is_zero() {
        ctx.trace.push(TraceStep::Substitution {
            coord: coords[j],
            value: eig,
        });
        let mut sub_coords = coords.to_vec();
        sub_coords.remove(j);
        let v = solve_expr(&reduced, rest, &sub_coords, ctx)?;
        return Ok(v.insert_factor(j, &Atom1D::Delta(k)));
    }

    let (r, q) = p.factor_out(j, &rat(k as i64 + 1))?;
    debug_assert!(r >= 1);
    ctx.trace.push(TraceStep::FactorExtraction {
        coord: coords[j],
        shift: k as i64 + 1,
        power: r,
    });
    let mut w = delta_step(&q, j, k, rest, coords, ctx)?;
    for _ in 0..r {
        w = resonant_1d(j, k, &w)?;
        ctx.trace.push(TraceStep::Resonant1d {
            coord: coords[j],
            order: k,
        });
    }
    Ok(w)
}

/// Hyperplane phase for one term carrying a delta factor (smallest such
/// coordinate is used).
pub fn solve_delta_term(p: &Polynomial, t: &TensorTerm) -> Result<DistExpr> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.dim() != t.dim() {
        return Err(dim_mismatch(p.dim(), t.dim()));
    }
    let (j, k) = t
        .first_delta()
        .ok_or_else(|| Error::UnsupportedInput("term has no delta factor".into()))?;
    let mut rest = t.factors.clone();
    rest.remove(j);
    let rest = DistExpr::single(t.coeff.clone(), rest);
    let coords: Vec<usize> = (0..t.dim()).collect();
    delta_step(p, j, k, &rest, &coords, &mut Ctx::default())
}

/// Quadrant phase for one delta-free term. Returns the partial solution and
/// the delta-supported residual `t − P(θ) U_partial`.
pub fn solve_continuous_term(p: &Polynomial, t: &TensorTerm) -> Result<(DistExpr, DistExpr)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.dim() != t.dim() {
        return Err(dim_mismatch(p.dim(), t.dim()));
    }
    if t.has_delta() {
        return Err(Error::UnsupportedInput("term carries a delta factor".into()));
    }
    continuous_step(p, t, &mut Ctx::default())
}

fn continuous_step(p: &Polynomial, t: &TensorTerm, ctx: &mut Ctx) -> Result<(DistExpr, DistExpr)> {
    let d = t.dim();
    let mu = t.eigenvalue();
    let (v, _) = p.vanishing_order(&mu)?;
    let shifted = p.taylor_shift(&mu)?;
    let logs: Vec<u32> = t
        .factors
        .iter()
        .map(|a| match a {
            Atom1D::MonLog { p, .. } => *p,
            Atom1D::Delta(_) => unreachable!("delta-free term"),
        })
        .collect();

    let u = invert_log_polynomial(&shifted, v, &logs)?;
    let base: u32 = logs.iter().sum();
    let depth = u.keys().map(|q| q.iter().sum::<u32>()).max().unwrap_or(base) - base;
    if depth > v {
        return Err(Error::EscalationExceeded {
            bound: v,
            context: format!("quadrant phase at eigenvalue {:?}", mu.0),
        });
    }
    ctx.escalations.push(Escalation {
        eigenvalue: t.factors.iter().map(Atom1D::eig).collect(),
        vanishing_order: v,
        depth,
    });

    let mut map = TermMap::new();
    for (q, c) in u {
        let factors = t
            .factors
            .iter()
            .zip(&q)
            .map(|(a, &qj)| match *a {
                Atom1D::MonLog { n, sign, .. } => Atom1D::monlog(n, qj, sign),
                Atom1D::Delta(_) => unreachable!(),
            })
            .collect();
        accumulate(&mut map, factors, c * &t.coeff);
    }
    let partial = DistExpr::from_map(d, map);
    let target = DistExpr::single(t.coeff.clone(), t.factors.clone());
    let residual = target.sub(&apply_polynomial(p, &partial)?)?;
    if residual.terms().iter().any(|r| !r.has_delta()) {
        return Err(Error::EscalationExceeded {
            bound: v,
            context: "quadrant-phase residual is not hyperplane supported".into(),
        });
    }
    Ok((partial, residual))
}

type LogPoly = BTreeMap<Vec<u32>, Rat>;

fn falling(q: u32, g: u32) -> BigInt {
    (0..g).fold(BigInt::one(), |acc, i| acc * BigInt::from(q - i))
}

/// `Q(∂_L)` on log-polynomials: `∂^γ L^q = q!/(q−γ)! L^{q−γ}`.
fn apply_shifted(q: &Polynomial, f: &LogPoly) -> LogPoly {
    let mut out = LogPoly::new();
    for (e, cf) in f {
        for (g, cq) in q.terms() {
            if e.iter().zip(g.as_slice()).any(|(a, b)| a < b) {
                continue;
            }
            let mut w = Rat::one();
            let mut r = Vec::with_capacity(e.len());
            for (&a, &b) in e.iter().zip(g.as_slice()) {
                w *= Rat::from_integer(falling(a, b));
                r.push(a - b);
            }
            let c = cf * cq * w;
            let slot = out.entry(r.clone()).or_insert_with(Rat::zero);
            *slot += c;
            if slot.is_zero() {
                out.remove(&r);
            }
        }
    }
    out
}

/// Monomials of total degree `deg` in `d` variables, first coordinate
/// heaviest first.
fn monomials_of_degree(d: usize, deg: u32) -> Vec<Vec<u32>> {
    if d == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in monomials_of_degree(d - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Finds `u` with `Q(∂_L) u = L^p` and `deg u ≤ |p| + v`, where `v` is the
/// order of vanishing of `Q` at the origin. Solved degree by degree: the
/// top component only sees the lowest homogeneous part `Q_v`, which maps
/// degree `N + v` onto degree `N`.
fn invert_log_polynomial(q: &Polynomial, v: u32, p: &[u32]) -> Result<LogPoly> {
    let d = p.len();
    let qv = q.homogeneous_part(v);
    let mut f = LogPoly::new();
    f.insert(p.to_vec(), Rat::one());
    let mut u = LogPoly::new();
    let mut last_top = u32::MAX;
    while let Some(top) = f.keys().map(|e| e.iter().sum::<u32>()).max() {
        if top >= last_top {
            return Err(Error::EscalationExceeded {
                bound: v,
                context: "log-polynomial reduction did not lower the degree".into(),
            });
        }
        last_top = top;
        let rows = monomials_of_degree(d, top);
        let cols = monomials_of_degree(d, top + v);
        let row_index: BTreeMap<&Vec<u32>, usize> =
            rows.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut a = vec![vec![Rat::zero(); cols.len()]; rows.len()];
        for (ci, col) in cols.iter().enumerate() {
            let mut unit = LogPoly::new();
            unit.insert(col.clone(), Rat::one());
            for (e, c) in apply_shifted(&qv, &unit) {
                a[row_index[&e]][ci] = c;
            }
        }
        let b: Vec<Rat> = rows
            .iter()
            .map(|r| f.get(r).cloned().unwrap_or_else(Rat::zero))
            .collect();
        let x = solve_exact(a, b).ok_or_else(|| Error::EscalationExceeded {
            bound: v,
            context: "homogeneous symbol part not surjective".into(),
        })?;
        let mut g = LogPoly::new();
        for (col, c) in cols.into_iter().zip(x) {
            if !c.is_zero() {
                g.insert(col, c);
            }
        }
        for (e, c) in apply_shifted(q, &g) {
            let slot = f.entry(e.clone()).or_insert_with(Rat::zero);
            *slot -= c;
            if slot.is_zero() {
                f.remove(&e);
            }
        }
        for (e, c) in g {
            let slot = u.entry(e.clone()).or_insert_with(Rat::zero);
            *slot += c;
            if slot.is_zero() {
                u.remove(&e);
            }
        }
    }
    Ok(u)
}

/// Returns `W` with `(θ_j + k + 1) W = V`.
///
/// Every term of `V` must carry, in coordinate `j`, one of `Delta(i)` with
/// `i ≤ k` or `MonLog(−(k+1), q, ±)`. The inversion is an exact linear solve
/// on that finite θ-stable span (with `q ≤ B`, `B` raised until solvable);
/// columns are ordered deltas first, then the positive half-line, so
/// `Delta(i)` with `i < k` is eigen-divided and `δ⁽ᵏ⁾` picks up
/// `Pf(x^{−k−1} H(x))`.
pub fn resonant_1d(j: usize, k: u32, v: &DistExpr) -> Result<DistExpr> {
    if j >= v.dim() {
        return Err(crate::error::coord_out_of_range(j, v.dim()));
    }
    let n = -(k as i32) - 1;
    let mut groups: BTreeMap<Vec<Atom1D>, BTreeMap<Atom1D, Rat>> = BTreeMap::new();
    let mut qmax = 0;
    for t in v.terms() {
        let a = &t.factors[j];
        match *a {
            Atom1D::Delta(i) if i <= k => {}
            Atom1D::MonLog { n: m, p, .. } if m == n => qmax = qmax.max(p),
            _ => {
                return Err(Error::UnsupportedInput(format!(
                    "resonant_1d(k={k}) cannot invert atom {a:?} in coordinate {j}"
                )))
            }
        }
        let mut rest = t.factors.clone();
        rest.remove(j);
        let slot = groups
            .entry(rest)
            .or_default()
            .entry(a.clone())
            .or_insert_with(Rat::zero);
        *slot += &t.coeff;
    }

    let mut map = TermMap::new();
    for (rest, rhs) in groups {
        let w = invert_shifted_theta(k, n, qmax, &rhs)?;
        for (atom, c) in w {
            let mut f = rest.clone();
            f.insert(j, atom);
            accumulate(&mut map, f, c);
        }
    }
    Ok(DistExpr::from_map(v.dim(), map))
}

fn invert_shifted_theta(
    k: u32,
    n: i32,
    qmax: u32,
    rhs: &BTreeMap<Atom1D, Rat>,
) -> Result<Vec<(Atom1D, Rat)>> {
    let shift = Rat::from_integer((k as i64 + 1).into());
    for b in 0..=qmax + 1 {
        let mut cols: Vec<Atom1D> = (0..=k).map(Atom1D::Delta).collect();
        for sign in [crate::dist::Sign::Pos, crate::dist::Sign::Neg] {
            cols.extend((0..=b).map(|q| Atom1D::monlog(n, q, sign)));
        }
        let images: Vec<BTreeMap<Atom1D, Rat>> = cols
            .iter()
            .map(|c| {
                let mut img: BTreeMap<Atom1D, Rat> = BTreeMap::new();
                img.insert(c.clone(), shift.clone());
                for (coef, atom) in apply_theta(c) {
                    *img.entry(atom).or_insert_with(Rat::zero) += coef;
                }
                img
            })
            .collect();
        let row_atoms: BTreeSet<Atom1D> = images
            .iter()
            .flat_map(|m| m.keys().cloned())
            .chain(rhs.keys().cloned())
            .collect();
        let row_atoms: Vec<Atom1D> = row_atoms.into_iter().collect();
        let a: Vec<Vec<Rat>> = row_atoms
            .iter()
            .map(|r| {
                images
                    .iter()
                    .map(|img| img.get(r).cloned().unwrap_or_else(Rat::zero))
                    .collect()
            })
            .collect();
        let rhs_vec: Vec<Rat> = row_atoms
            .iter()
            .map(|r| rhs.get(r).cloned().unwrap_or_else(Rat::zero))
            .collect();
        if let Some(x) = solve_exact(a, rhs_vec) {
            return Ok(cols
                .into_iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .collect());
        }
    }
    Err(Error::EscalationExceeded {
        bound: qmax + 1,
        context: format!("resonant_1d with k={k}"),
    })
}

/// Trace length bound enforced by [`solve`]: `d · (deg P + 1)` per term
/// handed to the dispatcher.
pub fn trace_cap(p: &Polynomial, report: &SolveReport) -> usize {
    p.dim().max(1) * (p.degree().unwrap_or(0) as usize + 1) * report.dispatched_terms.max(1)
}

/// Highest log power occurring in `u`.
pub fn log_depth(u: &DistExpr) -> u32 {
    u.terms()
        .iter()
        .flat_map(|t| t.factors.iter())
        .map(|a| match a {
            Atom1D::MonLog { p, .. } => *p,
            Atom1D::Delta(_) => 0,
        })
        .max()
        .unwrap_or(0)
}
