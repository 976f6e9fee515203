use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{coord_out_of_range, dim_mismatch, Error, Result};
use crate::poly::{rat, Polynomial};
use crate::Rat;

/// Test function `poly(x) · exp(−Σ (x_j − c_j)² / w²)` with exact rational
/// data, so that derivatives and multiplication by `x_j` stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussPoly {
    poly: Polynomial,
    center: Vec<Rat>,
    width: Rat,
}

pub(crate) fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl GaussPoly {
    pub fn new(poly: Polynomial, center: Vec<Rat>, width: Rat) -> Result<Self> {
        if poly.dim() != center.len() {
            return Err(dim_mismatch(center.len(), poly.dim()));
        }
        if !width.is_positive() {
            return Err(Error::InvalidArgument(format!("width must be positive, got {width}")));
        }
        Ok(GaussPoly { poly, center, width })
    }

    /// `exp(−|x|²)`.
    pub fn gaussian(dim: usize) -> Self {
        GaussPoly {
            poly: Polynomial::one(dim),
            center: vec![Rat::zero(); dim],
            width: rat(1),
        }
    }

    /// One-dimensional convenience constructor from integer coefficients
    /// (`coeffs[i]` multiplies `x^i`).
    pub fn univariate(coeffs: &[Rat], center: Rat, width: Rat) -> Result<Self> {
        let poly = Polynomial::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (vec![i as u32], c.clone())),
        )?;
        GaussPoly::new(poly, vec![center], width)
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn center(&self) -> &[Rat] {
        &self.center
    }

    pub fn width(&self) -> &Rat {
        &self.width
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let w = to_f64(&self.width);
        let r2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(xi, c)| (xi - to_f64(c)).powi(2))
            .sum();
        self.poly.eval_f64(x) * (-r2 / (w * w)).exp()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        GaussPoly {
            poly: self.poly.scale(c),
            ..self.clone()
        }
    }

    /// Sum of two test functions sharing center and width.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.center != other.center || self.width != other.width {
            return Err(Error::InvalidArgument(
                "test functions must share center and width to be added".into(),
            ));
        }
        Ok(GaussPoly {
            poly: &self.poly + &other.poly,
            ..self.clone()
        })
    }

    fn check(&self, j: usize) -> Result<()> {
        if j >= self.dim() {
            return Err(coord_out_of_range(j, self.dim()));
        }
        Ok(())
    }

    /// `x_j · φ`.
    pub fn mul_x(&self, j: usize) -> Result<Self> {
        self.check(j)?;
        Ok(GaussPoly {
            poly: &self.poly * &Polynomial::var(self.dim(), j),
            ..self.clone()
        })
    }

    /// `∂_j φ = (∂_j p − 2 (x_j − c_j) p / w²) · gauss`.
    pub fn derivative(&self, j: usize) -> Result<Self> {
        self.check(j)?;
        let d = self.dim();
        let mut dp = Polynomial::zero(d);
        for (e, c) in self.poly.terms() {
            let k = e.0[j];
            if k > 0 {
                let mut f = e.0.clone();
                f[j] -= 1;
                dp = &dp + &Polynomial::from_terms(d, [(f, c * rat(k as i64))])?;
            }
        }
        let shift = Polynomial::linear(d, j, -self.center[j].clone());
        let factor = rat(-2) / (&self.width * &self.width);
        let poly = &dp + &(&shift * &self.poly).scale(&factor);
        Ok(GaussPoly {
            poly,
            ..self.clone()
        })
    }

    /// `∂_j (x_j φ)`.
    pub fn derivative_of_x_phi(&self, j: usize) -> Result<Self> {
        self.mul_x(j)?.derivative(j)
    }

    pub fn derivative_multi(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.dim() {
            return Err(dim_mismatch(self.dim(), alpha.len()));
        }
        let mut g = self.clone();
        for (j, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                g = g.derivative(j)?;
            }
        }
        Ok(g)
    }

    /// `P(∂) φ`, or `P(−∂) φ` when `negate` is set.
    pub fn apply_diff_operator(&self, p: &Polynomial, negate: bool) -> Result<Self> {
        if p.dim() != self.dim() {
            return Err(dim_mismatch(self.dim(), p.dim()));
        }
        let p = if negate { p.reflect() } else { p.clone() };
        let mut out = self.scale(&Rat::zero());
        for (e, c) in p.terms() {
            out = out.add(&self.derivative_multi(e.as_slice())?.scale(c))?;
        }
        Ok(out)
    }

    /// Transpose of `θ_j`: `⟨θ_j A, φ⟩ = ⟨A, θ_jᵗ φ⟩` with `θ_jᵗ φ = −∂_j(x_j φ)`.
    pub fn theta_transpose(&self, j: usize) -> Result<Self> {
        Ok(self.derivative_of_x_phi(j)?.scale(&rat(-1)))
    }

    /// `P(θᵗ) φ`.
    pub fn apply_theta_transpose(&self, p: &Polynomial) -> Result<Self> {
        if p.dim() != self.dim() {
            return Err(dim_mismatch(self.dim(), p.dim()));
        }
        let mut out = self.scale(&Rat::zero());
        for (e, c) in p.terms() {
            let mut g = self.clone();
            for (j, &a) in e.as_slice().iter().enumerate() {
                for _ in 0..a {
                    g = g.theta_transpose(j)?;
                }
            }
            out = out.add(&g.scale(c))?;
        }
        Ok(out)
    }

    /// `φ(−x)`.
    pub fn reflect(&self) -> Self {
        GaussPoly {
            poly: self.poly.map_coeffs(|e, c| {
                if e.total() % 2 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                }
            }),
            center: self.center.iter().map(|c| -c.clone()).collect(),
            width: self.width.clone(),
        }
    }
}

impl fmt::Display for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let centers: Vec<String> = self.center.iter().map(ToString::to_string).collect();
        write!(
            f,
            "{}; center={}; width={}",
            self.poly.format_with("x"),
            centers.join(","),
            self.width
        )
    }
}

/// Ten one-dimensional test functions with varied centers, widths and
/// polynomial degrees (≤ 4).
pub fn standard_suite() -> Vec<GaussPoly> {
    let q = |n: i64, d: i64| Rat::new(n.into(), d.into());
    let specs: [(&[i64], Rat, Rat); 10] = [
        (&[1], q(0, 1), q(1, 1)),
        (&[0, 1], q(0, 1), q(1, 1)),
        (&[1, 1], q(1, 2), q(1, 1)),
        (&[-1, 0, 1], q(-1, 2), q(3, 4)),
        (&[2, -1, 0, 1], q(1, 1), q(5, 4)),
        (&[0, 0, 0, 0, 1], q(0, 1), q(2, 1)),
        (&[1, 0, -3, 0, 1], q(-1, 1), q(1, 1)),
        (&[0, -1, 0, 1], q(3, 2), q(1, 1)),
        (&[1, 0, 3], q(-3, 2), q(3, 2)),
        (&[1, -2, 0, 0, 1], q(1, 4), q(4, 5)),
    ];
    specs
        .into_iter()
        .map(|(c, center, width)| {
            let coeffs: Vec<Rat> = c.iter().map(|&v| rat(v)).collect();
            GaussPoly::univariate(&coeffs, center, width).expect("valid suite entry")
        })
        .collect()
}
