//! Exact action of the Euler operators `θ_j = x_j ∂_j` on the atom class.
//!
//! This is the verifier for every solver output: `apply_polynomial(P, U)`
//! is computed symbolically and compared canonically with the right-hand
//! side. The finite-part rows of the table depend on the regularization
//! convention fixed in [`crate::oracle::RegularizationR`]; they are
//! certified against quadrature by [`crate::oracle::adjoint_check`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dist::{accumulate, Atom1D, DistExpr, Sign, TermMap};
use crate::error::{coord_out_of_range, dim_mismatch, Result};
use crate::poly::Polynomial;
use crate::Rat;

/// One row of the θ-table: `θ · input = Σ coeff · atom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionRule {
    pub input: Atom1D,
    pub output: Vec<(Rat, Atom1D)>,
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `θ a` as a finite combination of atoms, in canonical atom order.
pub fn apply_theta(a: &Atom1D) -> Vec<(Rat, Atom1D)> {
    let mut out: BTreeMap<Atom1D, Rat> = BTreeMap::new();
    let mut push = |c: Rat, atom: Atom1D| {
        if !c.is_zero() {
            *out.entry(atom).or_insert_with(Rat::zero) += c;
        }
    };
    match *a {
        Atom1D::Delta(k) => push(Rat::from_integer(-(BigInt::from(k) + BigInt::one())), a.clone()),
        Atom1D::MonLog { n, p, sign } => {
            push(Rat::from_integer(n.into()), a.clone());
            if p >= 1 {
                push(Rat::from_integer(p.into()), Atom1D::monlog(n, p - 1, sign));
            }
            if n <= -1 && p == 0 {
                // boundary term of the Taylor-subtracted inner integral
                let nu = (-n) as u32;
                for i in 0..nu {
                    let inv_fact = Rat::new(BigInt::one(), factorial(i));
                    let odd = match sign {
                        Sign::Pos => i % 2 == 1,
                        Sign::Neg => n % 2 != 0,
                    };
                    push(if odd { -inv_fact } else { inv_fact }, Atom1D::Delta(i));
                }
            }
        }
    }
    out.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| (c, a))
        .collect()
}

pub fn rule(a: &Atom1D) -> ActionRule {
    ActionRule {
        input: a.clone(),
        output: apply_theta(a),
    }
}

type AtomCombo = BTreeMap<Atom1D, Rat>;

fn theta_combo(v: &AtomCombo) -> AtomCombo {
    let mut out = AtomCombo::new();
    for (a, c) in v {
        for (k, b) in apply_theta(a) {
            let slot = out.entry(b).or_insert_with(Rat::zero);
            *slot += c * k;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `[a, θa, θ²a, …, θ^max a]` by iteration.
fn theta_powers(a: &Atom1D, max: u32) -> Vec<AtomCombo> {
    let mut cur = AtomCombo::new();
    cur.insert(a.clone(), Rat::one());
    let mut out = vec![cur];
    for _ in 0..max {
        let next = theta_combo(out.last().unwrap());
        out.push(next);
    }
    out
}

/// `θ_j` applied to a whole expression.
pub fn apply_theta_at(j: usize, e: &DistExpr) -> Result<DistExpr> {
    if j >= e.dim() {
        return Err(coord_out_of_range(j, e.dim()));
    }
    let mut map = TermMap::new();
    for t in e.terms() {
        for (c, b) in apply_theta(&t.factors[j]) {
            let mut f = t.factors.clone();
            f[j] = b;
            accumulate(&mut map, f, &t.coeff * c);
        }
    }
    Ok(DistExpr::from_map(e.dim(), map))
}

/// Terms of a polynomial viewed as `(exponents, coeff)`, used for the
/// coordinate-by-coordinate contraction below.
type PolyTerms<'a> = Vec<(&'a [u32], &'a Rat)>;

/// Contracts `Σ c_α θ^α` against the factor suffix `factors[j..]`, given
/// the precomputed θ-powers of each factor. Returns suffix-term → coeff.
fn contract(
    poly: &PolyTerms<'_>,
    j: usize,
    powers: &[Vec<AtomCombo>],
) -> BTreeMap<Vec<Atom1D>, Rat> {
    let mut out = BTreeMap::new();
    if j == powers.len() {
        let total: Rat = poly.iter().map(|(_, c)| (*c).clone()).sum();
        if !total.is_zero() {
            out.insert(Vec::new(), total);
        }
        return out;
    }
    let mut by_exp: BTreeMap<u32, PolyTerms<'_>> = BTreeMap::new();
    for &(e, c) in poly {
        by_exp.entry(e[j]).or_default().push((e, c));
    }
    for (k, group) in by_exp {
        let rest = contract(&group, j + 1, powers);
        if rest.is_empty() {
            continue;
        }
        for (atom, ca) in &powers[j][k as usize] {
            for (suffix, cr) in &rest {
                let mut f = Vec::with_capacity(suffix.len() + 1);
                f.push(atom.clone());
                f.extend(suffix.iter().cloned());
                accumulate(&mut out, f, ca * cr);
            }
        }
    }
    out
}

/// `P(θ) e`, exact and canonical.
pub fn apply_polynomial(p: &Polynomial, e: &DistExpr) -> Result<DistExpr> {
    if p.dim() != e.dim() {
        return Err(dim_mismatch(p.dim(), e.dim()));
    }
    let d = e.dim();
    let degs: Vec<u32> = (0..d).map(|j| p.degree_in(j)).collect();
    let poly: PolyTerms<'_> = p.terms().map(|(e, c)| (e.as_slice(), c)).collect();
    let mut map = TermMap::new();
    if poly.is_empty() {
        return Ok(DistExpr::zero(d));
    }
    for t in e.terms() {
        let powers: Vec<Vec<AtomCombo>> = t
            .factors
            .iter()
            .zip(&degs)
            .map(|(a, &m)| theta_powers(a, m))
            .collect();
        for (f, c) in contract(&poly, 0, &powers) {
            accumulate(&mut map, f, c * &t.coeff);
        }
    }
    Ok(DistExpr::from_map(d, map))
}

/// Exact distributional equality within the class.
pub fn equal(a: &DistExpr, b: &DistExpr) -> bool {
    a.dim() == b.dim() && a.canonicalize() == b.canonicalize()
}

/// Smallest θ-stable atom set containing `atoms`. Always finite: log powers
/// only decrease, deltas are eigenvectors, finite parts leak only into
/// `Delta(i)` with `i < −n`.
pub fn closure_1d(atoms: &BTreeSet<Atom1D>) -> BTreeSet<Atom1D> {
    let mut seen = atoms.clone();
    let mut queue: VecDeque<Atom1D> = atoms.iter().cloned().collect();
    while let Some(a) = queue.pop_front() {
        for (_, b) in apply_theta(&a) {
            if seen.insert(b.clone()) {
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Per-coordinate closure.
pub fn closure(atoms: &[BTreeSet<Atom1D>]) -> Vec<BTreeSet<Atom1D>> {
    atoms.iter().map(closure_1d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, EigenValue};

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn delta_is_eigenvector() {
        assert_eq!(apply_theta(&Atom1D::Delta(2)), vec![(rat(-3), Atom1D::Delta(2))]);
    }

    #[test]
    fn heaviside_is_killed() {
        assert!(apply_theta(&Atom1D::heaviside(Sign::Pos)).is_empty());
        assert!(apply_theta(&Atom1D::heaviside(Sign::Neg)).is_empty());
    }

    #[test]
    fn finite_part_reciprocal() {
        let out = apply_theta(&Atom1D::monlog(-1, 0, Sign::Pos));
        assert_eq!(
            out,
            vec![(rat(1), Atom1D::Delta(0)), (rat(-1), Atom1D::monlog(-1, 0, Sign::Pos))]
        );
    }

    #[test]
    fn log_lowering() {
        let out = apply_theta(&Atom1D::monlog(2, 1, Sign::Pos));
        assert_eq!(
            out,
            vec![
                (rat(1), Atom1D::monlog(2, 0, Sign::Pos)),
                (rat(2), Atom1D::monlog(2, 1, Sign::Pos)),
            ]
        );
    }

    #[test]
    fn negative_half_line_correction_signs() {
        // n = -2 on the negative half-line: (-1)^n Σ_{i<2} δ^(i)/i!
        let out = apply_theta(&Atom1D::monlog(-2, 0, Sign::Neg));
        assert_eq!(
            out,
            vec![
                (rat(1), Atom1D::Delta(0)),
                (rat(1), Atom1D::Delta(1)),
                (rat(-2), Atom1D::monlog(-2, 0, Sign::Neg)),
            ]
        );
        let out = apply_theta(&Atom1D::monlog(-3, 0, Sign::Pos));
        assert_eq!(
            out,
            vec![
                (rat(1), Atom1D::Delta(0)),
                (rat(-1), Atom1D::Delta(1)),
                (q(1, 2), Atom1D::Delta(2)),
                (rat(-3), Atom1D::monlog(-3, 0, Sign::Pos)),
            ]
        );
    }

    #[test]
    fn apply_polynomial_examples() {
        // (θ - a) xⁿ = (n - a) xⁿ
        let a = q(1, 3);
        let p = Polynomial::linear(1, 0, -a.clone());
        let x3 = DistExpr::full_monomial(&[3]);
        let out = apply_polynomial(&p, &x3).unwrap();
        assert!(equal(&out, &x3.scale(&(rat(3) - a))));

        // (θ + 1) Pf(x⁻¹H) = δ
        let p = Polynomial::linear(1, 0, rat(1));
        let u = DistExpr::atom(Atom1D::monlog(-1, 0, Sign::Pos));
        assert!(equal(
            &apply_polynomial(&p, &u).unwrap(),
            &DistExpr::atom(Atom1D::Delta(0))
        ));

        // (θ1 + θ2 + 2) δ⊗δ = 0
        let p = Polynomial::from_int_terms(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], 2)]);
        let dd = DistExpr::single(rat(1), vec![Atom1D::Delta(0), Atom1D::Delta(0)]);
        assert!(apply_polynomial(&p, &dd).unwrap().is_zero());
    }

    #[test]
    fn apply_polynomial_dimension_error() {
        let p = Polynomial::var(2, 0);
        assert!(apply_polynomial(&p, &DistExpr::full_monomial(&[1])).is_err());
    }

    #[test]
    fn eigen_property_on_monomials() {
        let p = Polynomial::from_int_terms(
            2,
            &[(&[2, 1], 3), (&[1, 1], -1), (&[0, 2], 2), (&[0, 0], 7)],
        );
        for a in 0..4u32 {
            for b in 0..4u32 {
                let m = DistExpr::full_monomial(&[a, b]);
                let lam = p.eval(&EigenValue::from_ints(&[a as i64, b as i64])).unwrap();
                assert!(equal(&apply_polynomial(&p, &m).unwrap(), &m.scale(&lam)));
            }
        }
    }

    #[test]
    fn equal_examples() {
        let a = DistExpr::full_monomial(&[0]);
        let raw = DistExpr::from_raw(
            1,
            a.terms().iter().rev().cloned().collect(),
        )
        .unwrap();
        assert!(equal(&a, &raw));
        let delta = DistExpr::atom(Atom1D::Delta(0));
        assert!(!equal(&delta, &delta.scale(&rat(2))));
    }

    #[test]
    fn closure_examples() {
        let c = closure_1d(&[Atom1D::monlog(3, 2, Sign::Pos)].into_iter().collect());
        assert_eq!(
            c,
            [0, 1, 2]
                .into_iter()
                .map(|p| Atom1D::monlog(3, p, Sign::Pos))
                .collect()
        );
        let c = closure_1d(&[Atom1D::Delta(4)].into_iter().collect());
        assert_eq!(c, [Atom1D::Delta(4)].into_iter().collect());
        let c = closure_1d(&[Atom1D::monlog(-2, 0, Sign::Pos)].into_iter().collect());
        assert_eq!(
            c,
            [Atom1D::monlog(-2, 0, Sign::Pos), Atom1D::Delta(0), Atom1D::Delta(1)]
                .into_iter()
                .collect()
        );
    }

    #[test]
    fn closure_is_theta_stable() {
        let seed: BTreeSet<Atom1D> = [
            Atom1D::monlog(-3, 2, Sign::Neg),
            Atom1D::monlog(1, 1, Sign::Pos),
            Atom1D::Delta(2),
        ]
        .into_iter()
        .collect();
        let c = closure_1d(&seed);
        for a in &c {
            for (_, b) in apply_theta(a) {
                assert!(c.contains(&b));
            }
        }
    }
}
