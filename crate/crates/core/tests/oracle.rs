mod common;

use common::*;
use euler_core::oracle::{
    adjoint_check, compare_symbolic_numeric, derivative_at_zero, pair, pair_with_error, quad, standard_atoms,
    standard_suite, transpose_residual, GaussPoly,
};
use euler_core::{solve, Atom1D, DistExpr, Polynomial, Rat, Sign};

const TOL: f64 = 1e-10;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn gauss_poly(coeffs: &[i64], center: Rat, width: Rat) -> GaussPoly {
    let c: Vec<Rat> = coeffs.iter().map(|&v| int(v)).collect();
    GaussPoly::univariate(&c, center, width).unwrap()
}

/// Composite Simpson on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

#[test]
fn analytic_pairings() {
    let g = GaussPoly::gaussian(1);
    let d2 = pair(&DistExpr::atom(Atom1D::Delta(2)), &g, TOL).unwrap();
    assert!((d2 + 2.0).abs() < 1e-12);
    let h = pair(&DistExpr::atom(Atom1D::heaviside(Sign::Pos)), &g, TOL).unwrap();
    assert!((h - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    let pf = pair(&DistExpr::atom(Atom1D::monlog(-1, 0, Sign::Pos)), &g, TOL).unwrap();
    assert!((pf + EULER_GAMMA / 2.0).abs() < 1e-11, "{pf}");
}

#[test]
fn finite_part_matches_direct_subtraction() {
    // independent route: plain Simpson on the subtracted integrand, with
    // φ(x) − φ(0) − xφ′(0) expanded by hand near the origin
    let phi = gauss_poly(&[1, 2], q(1, 2), q(3, 4));
    let f = |x: f64| phi.eval(&[x]);
    let f0 = f(0.0);
    let f1 = derivative_at_zero(&phi, 1).unwrap();
    let inner = simpson(
        |x| if x == 0.0 { 0.0 } else { (f(x) - f0 - f1 * x) / (x * x) },
        0.0,
        1.0,
        20_000,
    );
    // the x = 0 limit is φ″(0)/2, replace the dropped endpoint contribution
    let f2 = derivative_at_zero(&phi, 2).unwrap();
    let inner = inner + (1.0 / 20_000.0) / 3.0 * (f2 / 2.0);
    let outer = simpson(|x| f(x) / (x * x), 1.0, 12.0, 200_000);
    let want = inner + outer;
    let got = pair(&DistExpr::atom(Atom1D::monlog(-2, 0, Sign::Pos)), &phi, TOL).unwrap();
    assert!((got - want).abs() < 1e-8, "{got} vs {want}");
}

#[test]
fn reflected_atoms_pair_with_reflected_functions() {
    for phi in standard_suite() {
        for (n, p) in [(-3, 1), (-1, 0), (0, 2), (2, 1)] {
            let neg = pair(&DistExpr::atom(Atom1D::monlog(n, p, Sign::Neg)), &phi, TOL).unwrap();
            let pos = pair(&DistExpr::atom(Atom1D::monlog(n, p, Sign::Pos)), &phi.reflect(), TOL).unwrap();
            let parity = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            assert!((neg - parity * pos).abs() < 1e-10, "n={n} p={p}");
        }
    }
}

#[test]
fn derivative_of_x_phi_examples() {
    let g = GaussPoly::gaussian(1);
    assert_eq!(g.derivative_of_x_phi(0).unwrap(), gauss_poly(&[1, 0, -2], int(0), int(1)));
    let xg = gauss_poly(&[0, 1], int(0), int(1));
    assert_eq!(xg.derivative_of_x_phi(0).unwrap(), gauss_poly(&[0, 2, 0, -2], int(0), int(1)));
    let shifted = gauss_poly(&[1, -1, 3], q(1, 2), q(3, 2));
    let d = shifted.derivative_of_x_phi(0).unwrap();
    assert_eq!(d.poly().degree(), Some(4));
}

#[test]
fn adjoint_examples() {
    let suite = standard_suite();
    for phi in &suite {
        for a in [Atom1D::Delta(0), Atom1D::Delta(3), Atom1D::monlog(3, 0, Sign::Pos), Atom1D::monlog(-2, 1, Sign::Neg)] {
            assert!(adjoint_check(&a, phi, 0, TOL).unwrap() <= 1e-8, "{a:?}");
        }
    }
    // second coordinate of a two-dimensional test function
    let phi2 = GaussPoly::new(
        Polynomial::from_int_terms(2, &[(&[1, 1], 1), (&[0, 0], 1)]),
        vec![q(1, 4), q(-1, 2)],
        int(1),
    )
    .unwrap();
    for a in [Atom1D::Delta(1), Atom1D::monlog(-3, 2, Sign::Pos)] {
        assert!(adjoint_check(&a, &phi2, 1, TOL).unwrap() <= 1e-8);
    }
}

#[test]
fn full_generator_suite() {
    assert_eq!(standard_atoms().len(), 77);
    let rep = euler_core::oracle::adjoint_suite(1e-6).unwrap();
    assert!(rep.passed(), "max residual {}", rep.max_residual);
    assert_eq!(rep.rows.len(), 770);
}

#[test]
fn symbolic_numeric_examples() {
    let gaussians: Vec<GaussPoly> = standard_suite().into_iter().take(5).collect();
    let zp1 = Polynomial::linear(1, 0, int(1));
    let pf = DistExpr::atom(Atom1D::monlog(-1, 0, Sign::Pos));
    let d = DistExpr::atom(Atom1D::Delta(0));
    assert!(compare_symbolic_numeric(&zp1, &pf, &d, &gaussians, TOL).unwrap() <= 1e-6);
    assert!(transpose_residual(&zp1, &pf, &d, &gaussians, TOL).unwrap() <= 1e-6);

    let z = Polynomial::var(1, 0);
    let x = DistExpr::full_monomial(&[1]);
    assert!(compare_symbolic_numeric(&z, &x, &x, &gaussians, TOL).unwrap() <= 1e-6);

    let mut r = rng(5);
    let inst = loop {
        let i = instance(&mut r, Family::ForcedResonant);
        if i.p.dim() == 1 {
            break i;
        }
    };
    let u = solve(&inst.p, &inst.t).unwrap().solution;
    assert!(transpose_residual(&inst.p, &u, &inst.t, &gaussians[..3], 1e-8).unwrap() <= 1e-6);
}

#[test]
fn pairing_is_linear() {
    let mut r = rng(21);
    let suite = standard_suite();
    for _ in 0..5 {
        let a = expr(&mut r, 1);
        let b = expr(&mut r, 1);
        let c = q(-3, 7);
        let ab = a.scale(&c).add(&b).unwrap();
        for phi in suite.iter().take(3) {
            let lhs = pair(&ab, phi, 1e-8).unwrap();
            let rhs = -3.0 / 7.0 * pair(&a, phi, 1e-8).unwrap() + pair(&b, phi, 1e-8).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()));
        }
        let (f, g) = (&suite[0], &suite[1]);
        let fg = f.add(&g.scale(&int(2)));
        if let Ok(fg) = fg {
            let lhs = pair(&a, &fg, 1e-8).unwrap();
            let rhs = pair(&a, f, 1e-8).unwrap() + 2.0 * pair(&a, g, 1e-8).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()));
        }
    }
}

#[test]
fn tighter_tolerance_never_loosens_the_estimate() {
    let phi = &standard_suite()[3];
    for a in standard_atoms().into_iter().step_by(7) {
        let e = DistExpr::atom(a.clone());
        let loose = pair_with_error(&e, phi, 1e-4).unwrap();
        let tight = pair_with_error(&e, phi, 5e-5).unwrap();
        assert!(tight.error <= loose.error, "{a:?}");
    }
}

#[test]
fn quadrature_rule_basics() {
    let e = quad::gk15(&|x: f64| x.powi(5), -1.0, 3.0);
    assert!((e.value - (729.0 - 1.0) / 6.0).abs() < 1e-11);
    let e = quad::adaptive(&|x: f64| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12);
    assert!(e.value.abs() < 1e-12);
}

#[test]
fn rejects_mismatched_inputs() {
    let g = GaussPoly::gaussian(2);
    assert!(pair(&DistExpr::atom(Atom1D::Delta(0)), &g, TOL).is_err());
    assert!(pair(&DistExpr::atom(Atom1D::Delta(0)), &GaussPoly::gaussian(1), 0.0).is_err());
}
