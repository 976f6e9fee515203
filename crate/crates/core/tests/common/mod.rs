//! Deterministic generators shared by the integration tests.
#![allow(dead_code)]

use euler_core::{Atom1D, DistExpr, Polynomial, Rat, Sign, TensorTerm};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn nonzero_coeff(rng: &mut TestRng) -> Rat {
    let n = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
    let d = *[1i64, 1, 1, 2, 3].choose(rng).unwrap();
    q(n, d)
}

/// Random exponent vector with total degree at most `deg`.
fn exponent(rng: &mut TestRng, dim: usize, deg: u32) -> Vec<u32> {
    let total = rng.gen_range(0..=deg);
    let mut e = vec![0u32; dim];
    for _ in 0..total {
        e[rng.gen_range(0..dim)] += 1;
    }
    e
}

/// Nonzero polynomial with at most four terms and total degree ≤ `deg`.
pub fn poly(rng: &mut TestRng, dim: usize, deg: u32) -> Polynomial {
    loop {
        let n = rng.gen_range(1..=4);
        let terms: Vec<(Vec<u32>, Rat)> = (0..n)
            .map(|_| (exponent(rng, dim, deg), nonzero_coeff(rng)))
            .collect();
        let p = Polynomial::from_terms(dim, terms).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn sign(rng: &mut TestRng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

pub fn monlog(rng: &mut TestRng) -> Atom1D {
    Atom1D::monlog(rng.gen_range(-5..=5), rng.gen_range(0..=2), sign(rng))
}

pub fn delta(rng: &mut TestRng) -> Atom1D {
    Atom1D::Delta(rng.gen_range(0..=4))
}

pub fn atom(rng: &mut TestRng) -> Atom1D {
    if rng.gen_bool(0.3) {
        delta(rng)
    } else {
        monlog(rng)
    }
}

pub fn term(rng: &mut TestRng, dim: usize) -> TensorTerm {
    TensorTerm::new(nonzero_coeff(rng), (0..dim).map(|_| atom(rng)).collect())
}

/// Nonzero expression with at most four terms.
pub fn expr(rng: &mut TestRng, dim: usize) -> DistExpr {
    loop {
        let n = rng.gen_range(1..=4);
        let e = DistExpr::from_terms(dim, (0..n).map(|_| term(rng, dim)).collect()).unwrap();
        if !e.is_zero() {
            return e;
        }
    }
}

/// Expression whose every term carries at least one delta factor.
pub fn hyperplane_expr(rng: &mut TestRng, dim: usize) -> DistExpr {
    loop {
        let n = rng.gen_range(1..=4);
        let terms = (0..n)
            .map(|_| {
                let mut t = term(rng, dim);
                if !t.has_delta() {
                    let j = rng.gen_range(0..dim);
                    t.factors[j] = delta(rng);
                }
                t
            })
            .collect();
        let e = DistExpr::from_terms(dim, terms).unwrap();
        if !e.is_zero() {
            return e;
        }
    }
}

/// `P − P(μ)`, which vanishes at the eigenvalue `μ` of `t`; falls back to
/// `z₁ − μ₁` when that is the zero polynomial.
pub fn vanishing_at(p: &Polynomial, t: &TensorTerm) -> Polynomial {
    let mu = t.eigenvalue();
    let c = p.eval(&mu).unwrap();
    let shifted = p - &Polynomial::constant(p.dim(), c);
    if shifted.is_zero() {
        Polynomial::linear(p.dim(), 0, -mu.0[0].clone())
    } else {
        shifted
    }
}

/// Solver instance families used by the soundness checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Generic,
    ForcedResonant,
    FactorPower,
}

pub struct Instance {
    pub family: Family,
    pub p: Polynomial,
    pub t: DistExpr,
}

pub fn instance(rng: &mut TestRng, family: Family) -> Instance {
    let dim = rng.gen_range(1..=3);
    match family {
        Family::Generic => Instance { family, p: poly(rng, dim, 4), t: expr(rng, dim) },
        Family::ForcedResonant => loop {
            let t = expr(rng, dim);
            let pick = t.terms().choose(rng).unwrap().clone();
            let p = vanishing_at(&poly(rng, dim, 4), &pick);
            if p.degree().unwrap() <= 4 {
                return Instance { family, p, t };
            }
        },
        Family::FactorPower => {
            let t = hyperplane_expr(rng, dim);
            let pick = t.terms().choose(rng).unwrap().clone();
            let (j, k) = pick.first_delta().unwrap();
            let r = rng.gen_range(1..=2);
            let lin = Polynomial::linear(dim, j, int(k as i64 + 1));
            let qdeg = 4 - r;
            let p = &lin.pow(r) * &poly(rng, dim, qdeg);
            Instance { family, p, t }
        }
    }
}

/// Round-trip corpus: symbols in `t1..t3`.
pub const POLY_CORPUS: [&str; 20] = [
    "t1^2*t2 - 3*t1 + 2",
    "t1 + t2 + 2",
    "t1 + 1",
    "0",
    "7/3",
    "-t1",
    "(t1 + 1)^3",
    "t1*t2*t3",
    "(t1 - 1/2)*(t2 + 3/4)",
    "t1^4 - t2^4",
    "-(t1 + t2)^2 + 2*t1*t2",
    "t3^2 - t1",
    "1/2*t1^2 + 1/3*t2 - 1/6",
    "(t1 + 2)^2*(t2 - 1)",
    "t2 - t2 + t1",
    "t1*(t1 + 1)*(t1 + 2)",
    "3*t1^2*t3 - t2*t3 + 5",
    "-(-t1)",
    "t1^2 + t2^2 - 1",
    "t1*t2 + 1",
];

/// Round-trip corpus: distributions in `x1..x3`.
pub const DIST_CORPUS: [&str; 20] = [
    "delta(x1,2) * x2^3*H(x2)",
    "x1^-1*H(x1)",
    "1/2 * mono(x1,2) + delta(x1,0)",
    "H(x1)",
    "H(-x1)",
    "x1^-3*log(x1)^2*H(-x1)",
    "log(x1)*H(x1)",
    "mono(x1,3)",
    "mono(x1,-2)",
    "x1^2*H(x1) + x1^2*H(-x1)",
    "delta(x1,0)*delta(x2,1)",
    "3/4*x1*H(x1)*x2^-1*H(-x2)",
    "delta(x1,3) - 2*delta(x1,3)",
    "x1^5*log(x1)^2*H(x1)*delta(x3,4)",
    "mono(x2,1)*mono(x3,2) - delta(x2,0)",
    "x1^-5*H(x1) + x1^-5*H(-x1)",
    "-log(x2)^3*H(-x2)",
    "2*delta(x2,2)*x3^-2*log(x3)*H(x3)",
    "x1*H(x1) - x1*H(x1)",
    "1 + delta(x1,1)",
];
