//! Wagner's elementary solution of `P(∂)` and the surrounding numerical
//! checks.
//!
//! With `m = deg P`, `P_m(η) ≠ 0`, distinct `λ_0..λ_m` and `a` normalized by
//! `Σ a_j λ_jⁱ = [i = m]`,
//!
//! ```text
//! E = 1/P_m(2η) · Σ_j a_j e^{λ_j η·x} F⁻¹( conj P(iξ + λ_j η) / P(iξ + λ_j η) )
//! ```
//!
//! satisfies `P(∂)E = δ`. `E` is only ever paired: the multiplier has
//! modulus one, and the transform of `e^{λη·x} χ` is closed form for a
//! Gaussian-polynomial `χ`, so `⟨E, χ⟩` is an absolutely convergent
//! frequency integral evaluated by the trapezoid rule.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{dim_mismatch, Error, Result};
use crate::linsolve::solve_exact;
use crate::oracle::{to_f64, GaussPoly};
use crate::poly::{rat, EigenValue, Polynomial};
use crate::theta::apply_polynomial;
use crate::{Atom1D, DistExpr, Rat, Sign};

const POLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WagnerParams {
    pub m: u32,
    pub eta: Vec<i64>,
    pub lambda: Vec<Rat>,
    pub a: Vec<Rat>,
    /// `P_m(2η)`.
    pub normalizer: Rat,
}

impl WagnerParams {
    /// Defaults: `η` from [`choose_eta`], `λ_j = j + 1`.
    pub fn for_polynomial(p: &Polynomial) -> Result<Self> {
        let m = p.degree().ok_or(Error::ZeroPolynomial)?;
        let lambda: Vec<Rat> = (0..=m as i64).map(|j| rat(j + 1)).collect();
        Self::with_lambda(p, lambda)
    }

    pub fn with_lambda(p: &Polynomial, lambda: Vec<Rat>) -> Result<Self> {
        let m = p.degree().ok_or(Error::ZeroPolynomial)?;
        if lambda.iter().any(|l| *l < Rat::one()) {
            return Err(Error::InvalidArgument("lambda values must be >= 1".into()));
        }
        let eta = choose_eta(p)?;
        let a = wagner_coefficients(m, &lambda)?;
        let two_eta = EigenValue(eta.iter().map(|&e| rat(2 * e)).collect());
        let normalizer = p.principal_part()?.eval(&two_eta)?;
        Ok(WagnerParams {
            m,
            eta,
            lambda,
            a,
            normalizer,
        })
    }
}

/// Lattice vectors with `|η|₁ = s`, ordered by number of negative entries,
/// then lexicographically descending.
fn lattice_shell(d: usize, s: i64) -> Vec<Vec<i64>> {
    fn rec(d: usize, s: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if d == 1 {
            for v in [s, -s] {
                prefix.push(v);
                out.push(prefix.clone());
                prefix.pop();
                if s == 0 {
                    break;
                }
            }
            return;
        }
        for first in (-s..=s).rev() {
            prefix.push(first);
            rec(d - 1, s - first.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, s, &mut Vec::new(), &mut out);
    out.sort_by(|x, y| {
        let neg = |v: &Vec<i64>| v.iter().filter(|&&e| e < 0).count();
        neg(x).cmp(&neg(y)).then_with(|| y.cmp(x))
    });
    out
}

/// Smallest-`|η|₁` lattice vector with `P_m(η) ≠ 0`.
pub fn choose_eta(p: &Polynomial) -> Result<Vec<i64>> {
    let pm = p.principal_part()?;
    let d = p.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    for s in 1.. {
        for eta in lattice_shell(d, s) {
            let v = pm.eval(&EigenValue::from_ints(&eta))?;
            if !v.is_zero() {
                return Ok(eta);
            }
        }
    }
    unreachable!("a nonzero form does not vanish on the whole lattice")
}

/// Exact solution of `Σ_j a_j λ_jⁱ = [i = m]`, `0 ≤ i ≤ m`, checked against
/// `a_j = Π_{k≠j} (λ_j − λ_k)⁻¹`.
pub fn wagner_coefficients(m: u32, lambda: &[Rat]) -> Result<Vec<Rat>> {
    let n = m as usize + 1;
    if lambda.len() != n {
        return Err(Error::InvalidArgument(format!(
            "expected {n} lambda values, got {}",
            lambda.len()
        )));
    }
    for (i, l) in lambda.iter().enumerate() {
        if lambda[..i].contains(l) {
            return Err(Error::DuplicateLambda(l.to_string()));
        }
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        rows.push(
            lambda
                .iter()
                .map(|l| num_traits::Pow::pow(l, i as u32))
                .collect::<Vec<Rat>>(),
        );
    }
    let mut rhs = vec![Rat::zero(); n];
    rhs[n - 1] = Rat::one();
    let a = solve_exact(rows, rhs).expect("Vandermonde matrix with distinct nodes is invertible");
    assert_eq!(a, divided_difference_weights(lambda));
    Ok(a)
}

/// `Π_{k≠j} (λ_j − λ_k)⁻¹`.
pub fn divided_difference_weights(lambda: &[Rat]) -> Vec<Rat> {
    lambda
        .iter()
        .enumerate()
        .map(|(j, lj)| {
            let mut prod = Rat::one();
            for (k, lk) in lambda.iter().enumerate() {
                if k != j {
                    prod *= lj - lk;
                }
            }
            prod.recip()
        })
        .collect()
}

/// Frequency grid: `n` nodes per axis on `[−cutoff, cutoff]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub cutoff: f64,
}

impl Grid {
    pub fn default_for(dim: usize) -> Self {
        let n = match dim {
            0 | 1 => 4096,
            2 => 512,
            _ => 64,
        };
        Grid { n, cutoff: 40.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingE {
    pub value: f64,
    /// Imaginary part of the computed sum; zero up to rounding for real data.
    pub imag: f64,
    /// Cell offset used (0 or 1/2 after a pole collision).
    pub offset: f64,
    /// Largest `||G_j| − 1|` over the grid.
    pub modulus_defect: f64,
    /// Largest integrand modulus on the outer layer of the grid.
    pub boundary: f64,
}

fn gauss_moment(k: u32, w: f64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    // Γ((k+1)/2) = √π (k−1)!! / 2^{k/2}
    let mut g = std::f64::consts::PI.sqrt();
    let mut i = 1;
    while i < k {
        g *= i as f64 / 2.0;
        i += 2;
    }
    w.powi(k as i32 + 1) * g
}

/// `∫ x^m e^{s x − (x − c)²/w²} dx` for complex `s`, as the vector over
/// `m = 0..=max_m`.
pub fn shifted_gauss_moments(max_m: u32, s: Complex64, c: f64, w: f64) -> Vec<Complex64> {
    let z0 = c + s * (w * w / 2.0);
    let pre = (s * c + s * s * (w * w / 4.0)).exp();
    let moments: Vec<f64> = (0..=max_m).map(|k| gauss_moment(k, w)).collect();
    let mut out = Vec::with_capacity(max_m as usize + 1);
    for m in 0..=max_m {
        let mut acc = Complex64::zero();
        let mut binom = 1.0;
        for k in 0..=m {
            if moments[k as usize] != 0.0 {
                acc += z0.powu(m - k) * (binom * moments[k as usize]);
            }
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
        out.push(pre * acc);
    }
    out
}

/// `∫ e^{s·x} φ(x) dx` for complex `s ∈ ℂᵈ`.
pub fn exp_moment(phi: &GaussPoly, s: &[Complex64]) -> Complex64 {
    let d = phi.dim();
    let w = to_f64(phi.width());
    let tables: Vec<Vec<Complex64>> = (0..d)
        .map(|k| shifted_gauss_moments(phi.poly().degree_in(k), s[k], to_f64(&phi.center()[k]), w))
        .collect();
    let mut acc = Complex64::zero();
    for (e, c) in phi.poly().terms() {
        let mut t = Complex64::new(to_f64(c), 0.0);
        for (k, &ek) in e.as_slice().iter().enumerate() {
            t *= tables[k][ek as usize];
        }
        acc += t;
    }
    acc
}

/// Unitary Fourier transform `(2π)^{−d/2} ∫ e^{−iζ·x} φ(x) dx` at complex `ζ`.
pub fn fourier_transform(phi: &GaussPoly, zeta: &[Complex64]) -> Complex64 {
    let s: Vec<Complex64> = zeta.iter().map(|z| -Complex64::i() * z).collect();
    let norm = (2.0 * std::f64::consts::PI).powf(-(phi.dim() as f64) / 2.0);
    exp_moment(phi, &s) * norm
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let (l, r) = v.split_at(v.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

struct ComplexSymbol {
    terms: Vec<(Vec<u32>, f64)>,
}

impl ComplexSymbol {
    fn new(p: &Polynomial) -> Self {
        ComplexSymbol {
            terms: p.terms().map(|(e, c)| (e.0.clone(), to_f64(c))).collect(),
        }
    }

    fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for (zi, &k) in z.iter().zip(e) {
                if k > 0 {
                    t *= zi.powu(k);
                }
            }
            acc += t;
        }
        acc
    }
}

/// `⟨E, χ⟩` by trapezoid quadrature in frequency.
///
/// Uses `F⁻¹g(x) = (2π)^{−d} ∫ e^{ix·ξ} g(ξ) dξ`, so that `F⁻¹1 = δ`. If a grid
/// node hits a zero of some `P(iξ + λ_jη)` the grid is shifted by half a
/// cell once; a second collision is reported as [`Error::PoleOnGrid`].
pub fn pair_e(p: &Polynomial, params: &WagnerParams, chi: &GaussPoly, grid: Grid) -> Result<PairingE> {
    if p.dim() != chi.dim() {
        return Err(dim_mismatch(p.dim(), chi.dim()));
    }
    if grid.n == 0 || grid.cutoff.is_nan() || grid.cutoff <= 0.0 {
        return Err(Error::InvalidArgument("grid needs n > 0 and cutoff > 0".into()));
    }
    match pair_e_offset(p, params, chi, grid, 0.0) {
        Err(Error::PoleOnGrid { .. }) => pair_e_offset(p, params, chi, grid, 0.5),
        r => r,
    }
}

fn pair_e_offset(
    p: &Polynomial,
    params: &WagnerParams,
    chi: &GaussPoly,
    grid: Grid,
    offset: f64,
) -> Result<PairingE> {
    let d = p.dim();
    let n = grid.n;
    let h = 2.0 * grid.cutoff / n as f64;
    let nodes: Vec<f64> = (0..n).map(|i| -grid.cutoff + (i as f64 + offset) * h).collect();
    let symbol = ComplexSymbol::new(p);
    let w = to_f64(chi.width());
    let total_nodes = n.pow(d as u32);

    let mut total = Complex64::zero();
    let mut modulus_defect: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    for (lam, a) in params.lambda.iter().zip(&params.a) {
        let lam = to_f64(lam);
        let shift: Vec<f64> = params.eta.iter().map(|&e| lam * e as f64).collect();
        // per axis: moments of the test function at s = λη_k + iξ
        let tables: Vec<Vec<Vec<Complex64>>> = (0..d)
            .map(|k| {
                let deg = chi.poly().degree_in(k);
                let c = to_f64(&chi.center()[k]);
                nodes
                    .iter()
                    .map(|&xi| shifted_gauss_moments(deg, Complex64::new(shift[k], xi), c, w))
                    .collect()
            })
            .collect();
        let chi_terms: Vec<(&[u32], f64)> =
            chi.poly().terms().map(|(e, c)| (e.as_slice(), to_f64(c))).collect();

        let mut values = Vec::with_capacity(total_nodes);
        let mut idx = vec![0usize; d];
        let mut z = vec![Complex64::zero(); d];
        for _ in 0..total_nodes {
            for k in 0..d {
                z[k] = Complex64::new(shift[k], nodes[idx[k]]);
            }
            let pv = symbol.eval(&z);
            if pv.norm() < POLE_EPS {
                return Err(Error::PoleOnGrid {
                    modulus: pv.norm(),
                    node: idx.iter().map(|&i| nodes[i]).collect(),
                });
            }
            let g = pv.conj() / pv;
            modulus_defect = modulus_defect.max((g.norm() - 1.0).abs());
            let mut psi = Complex64::zero();
            for (e, c) in &chi_terms {
                let mut t = Complex64::new(*c, 0.0);
                for k in 0..d {
                    t *= tables[k][idx[k]][e[k] as usize];
                }
                psi += t;
            }
            let v = g * psi;
            if idx.iter().any(|&i| i == 0 || i == n - 1) {
                boundary = boundary.max(v.norm());
            }
            values.push(v);
            for k in (0..d).rev() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        }
        total += pairwise_sum(&values) * to_f64(a);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let scale = h.powi(d as i32) / two_pi.powi(d as i32) / to_f64(&params.normalizer);
    let v = total * scale;
    Ok(PairingE {
        value: v.re,
        imag: v.im,
        offset,
        modulus_defect,
        boundary: boundary * scale.abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeCheck {
    pub residual: f64,
    pub paired: PairingE,
    pub target: f64,
    pub params: WagnerParams,
    pub grid: Grid,
}

/// `|⟨E, P(−∂)φ⟩ − φ(0)|` with default parameters.
pub fn me_check(p: &Polynomial, phi: &GaussPoly, grid: Grid) -> Result<MeCheck> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let params = WagnerParams::for_polynomial(p)?;
    me_check_with(p, &params, phi, grid)
}

pub fn me_check_with(p: &Polynomial, params: &WagnerParams, phi: &GaussPoly, grid: Grid) -> Result<MeCheck> {
    let chi = phi.apply_diff_operator(p, true)?;
    let paired = pair_e(p, params, &chi, grid)?;
    let target = phi.eval(&vec![0.0; phi.dim()]);
    Ok(MeCheck {
        residual: (paired.value - target).abs(),
        paired,
        target,
        params: params.clone(),
        grid,
    })
}

/// Seminorm `sup |∂^α f| e^{k|x|₁}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormSpec {
    pub alpha: Vec<u32>,
    pub k: f64,
}

/// What a seminorm is evaluated on.
pub enum SeminormTarget<'a> {
    Gauss(&'a GaussPoly),
    /// Sampled function of the given dimension; derivatives by central
    /// differences.
    Sampled(usize, &'a dyn Fn(&[f64]) -> f64),
}

/// Sample box `[−half_width, half_width]ᵈ` with nodes spaced by `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBox {
    pub half_width: f64,
    pub step: f64,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox {
            half_width: 10.0,
            step: 1.0 / 128.0,
        }
    }
}

fn central_difference(f: &dyn Fn(&[f64]) -> f64, x: &[f64], alpha: &[u32], h: f64) -> f64 {
    let Some(j) = alpha.iter().position(|&a| a > 0) else {
        return f(x);
    };
    let mut lower = alpha.to_vec();
    lower[j] -= 1;
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[j] += h;
    xm[j] -= h;
    (central_difference(f, &xp, &lower, h) - central_difference(f, &xm, &lower, h)) / (2.0 * h)
}

type Sampler<'a> = dyn Fn(&[f64]) -> f64 + 'a;

/// Grid maximum of `|∂^α f(x)| e^{k|x|₁}`; a lower estimate of the sup.
pub fn y_seminorm(f: &SeminormTarget<'_>, spec: &SeminormSpec, sample: SampleBox) -> Result<f64> {
    let d = match f {
        SeminormTarget::Gauss(g) => g.dim(),
        SeminormTarget::Sampled(d, _) => *d,
    };
    if spec.alpha.len() != d {
        return Err(dim_mismatch(d, spec.alpha.len()));
    }
    let derived;
    let eval: Box<Sampler<'_>> = match f {
        SeminormTarget::Gauss(g) => {
            derived = g.derivative_multi(&spec.alpha)?;
            Box::new(|x: &[f64]| derived.eval(x))
        }
        SeminormTarget::Sampled(_, s) => {
            let alpha = spec.alpha.clone();
            Box::new(move |x: &[f64]| central_difference(*s, x, &alpha, 1e-3))
        }
    };
    let per_axis = (2.0 * sample.half_width / sample.step).round() as usize + 1;
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let mut best: f64 = 0.0;
    for _ in 0..per_axis.pow(d as u32) {
        for k in 0..d {
            x[k] = -sample.half_width + idx[k] as f64 * sample.step;
        }
        let l1: f64 = x.iter().map(|v| v.abs()).sum();
        best = best.max(eval(&x).abs() * (spec.k * l1).exp());
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(best)
}

/// Value of a delta-free expression at a point of the open positive
/// quadrant.
pub fn eval_on_quadrant(e: &DistExpr, y: &[f64]) -> Result<f64> {
    if e.dim() != y.len() {
        return Err(dim_mismatch(e.dim(), y.len()));
    }
    if y.iter().any(|&v| v.is_nan() || v <= 0.0) {
        return Err(Error::InvalidArgument("point must lie in the open positive quadrant".into()));
    }
    let mut acc = 0.0;
    for t in e.terms() {
        let mut v = to_f64(&t.coeff);
        for (a, &yj) in t.factors.iter().zip(y) {
            match *a {
                Atom1D::MonLog { n, p, sign: Sign::Pos } => v *= yj.powi(n) * yj.ln().powi(p as i32),
                Atom1D::MonLog { sign: Sign::Neg, .. } => v = 0.0,
                Atom1D::Delta(_) => {
                    return Err(Error::UnsupportedInput("delta factors have no pointwise value".into()))
                }
            }
        }
        acc += v;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugationOptions {
    pub h: f64,
    pub richardson: bool,
}

impl Default for ConjugationOptions {
    fn default() -> Self {
        ConjugationOptions {
            h: 1e-4,
            richardson: true,
        }
    }
}

/// Central difference for `∂^α`, one coordinate at a time, with binomial
/// stencils (half steps for odd orders).
fn stencil_derivative(g: &dyn Fn(&[f64]) -> f64, x: &[f64], alpha: &[u32], h: f64) -> f64 {
    let Some(j) = alpha.iter().position(|&a| a > 0) else {
        return g(x);
    };
    let a = alpha[j];
    let mut rest = alpha.to_vec();
    rest[j] = 0;
    let mut acc = 0.0;
    let mut binom = 1.0;
    for i in 0..=a {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let mut xs = x.to_vec();
        xs[j] += (a as f64 / 2.0 - i as f64) * h;
        acc += sign * binom * stencil_derivative(g, &xs, &rest, h);
        binom = binom * (a - i) as f64 / (i + 1) as f64;
    }
    acc / h.powi(a as i32)
}

/// `max |P(∂)(f∘Exp)(x) − (P(θ)f)(Exp x)|` over `points`, the left side by
/// finite differences.
pub fn exp_conjugation_check(
    p: &Polynomial,
    f: &DistExpr,
    points: &[Vec<f64>],
    opts: ConjugationOptions,
) -> Result<f64> {
    if p.dim() != f.dim() {
        return Err(dim_mismatch(p.dim(), f.dim()));
    }
    for t in f.terms() {
        for a in &t.factors {
            if !matches!(a, Atom1D::MonLog { n, sign: Sign::Pos, .. } if *n >= 0) {
                return Err(Error::UnsupportedInput(
                    "only MonLog factors with n >= 0 on the positive half-line".into(),
                ));
            }
        }
    }
    let pf = apply_polynomial(p, f)?;
    let composed = |x: &[f64]| -> f64 {
        let y: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        eval_on_quadrant(f, &y).expect("validated input")
    };
    let diff = |x: &[f64], h: f64| -> f64 {
        p.terms()
            .map(|(e, c)| to_f64(c) * stencil_derivative(&composed, x, e.as_slice(), h))
            .sum()
    };
    let mut worst: f64 = 0.0;
    for x in points {
        if x.len() != p.dim() {
            return Err(dim_mismatch(p.dim(), x.len()));
        }
        let lhs = if opts.richardson {
            (4.0 * diff(x, opts.h / 2.0) - diff(x, opts.h)) / 3.0
        } else {
            diff(x, opts.h)
        };
        let y: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let rhs = eval_on_quadrant(&pf, &y)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripReport {
    pub max: f64,
    /// Shell maxima at radii `cutoff·i/shells`, `i = 1..=shells`.
    pub shells: Vec<f64>,
    pub boundary_decays: bool,
}

impl StripReport {
    pub fn passed(&self) -> bool {
        self.max.is_finite() && self.boundary_decays
    }
}

/// Samples `|ζ|^k |g(ζ)|` on `|Re ζ|∞ ≤ cutoff`, `|Im ζ|∞ ≤ k` and checks that
/// the shell maxima decrease outward (beyond half the cutoff) down to a
/// negligible fraction of the peak.
pub fn strip_profile(
    g: &dyn Fn(&[Complex64]) -> Complex64,
    dim: usize,
    k: u32,
    cutoff: f64,
    samples: usize,
) -> StripReport {
    let shells = samples;
    let re_nodes: Vec<f64> = (0..=2 * samples)
        .map(|i| -cutoff + cutoff * i as f64 / samples as f64)
        .collect();
    let im_count = 5;
    let im_nodes: Vec<f64> = (0..im_count)
        .map(|i| -(k as f64) + 2.0 * k as f64 * i as f64 / (im_count - 1) as f64)
        .collect();
    let mut shell_max = vec![0.0f64; shells + 1];
    let mut max: f64 = 0.0;
    let n_re = re_nodes.len();
    let mut idx = vec![0usize; 2 * dim];
    let total = (n_re * im_count).pow(dim as u32);
    let mut z = vec![Complex64::zero(); dim];
    for _ in 0..total {
        let mut shell = 0;
        for j in 0..dim {
            z[j] = Complex64::new(re_nodes[idx[2 * j]], im_nodes[idx[2 * j + 1]]);
            shell = shell.max((idx[2 * j] as i64 - samples as i64).unsigned_abs() as usize);
        }
        let r: f64 = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let v = r.powi(k as i32) * g(&z).norm();
        max = max.max(v);
        shell_max[shell] = shell_max[shell].max(v);
        for j in (0..2 * dim).rev() {
            idx[j] += 1;
            let lim = if j % 2 == 0 { n_re } else { im_count };
            if idx[j] < lim {
                break;
            }
            idx[j] = 0;
        }
    }
    let tail = &shell_max[shells / 2..];
    let monotone = tail.windows(2).all(|w| w[1] <= w[0]);
    let negligible = shell_max[shells] <= 1e-6 * max;
    StripReport {
        max,
        shells: shell_max[1..].to_vec(),
        boundary_decays: monotone && negligible,
    }
}

/// Strip check of the Fourier transform of `φ` in closed form.
pub fn hy_strip_check(phi: &GaussPoly, k: u32) -> StripReport {
    strip_profile(&|z: &[Complex64]| fourier_transform(phi, z), phi.dim(), k, 12.0, 48)
}
