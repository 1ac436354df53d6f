use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::decompose::GaussianFactor;
use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::pnd::{Pnd, QuadForm};
use crate::polyalg::Polynomial;
use crate::quadrature::standard_normal_expectation;

/// One side of a convolution.
#[derive(Clone, Debug)]
pub enum Factor {
    Pnd(Pnd),
    Gaussian(GaussianFactor),
}

impl Factor {
    /// `(P, m, C)` with density `P(x)·N(x; m, C)`.
    fn parts(&self) -> (Polynomial, Vec<f64>, DMatrix<f64>) {
        match self {
            Factor::Pnd(p) => (
                p.normalized_poly(),
                p.shift().to_vec(),
                p.form().covariance(),
            ),
            Factor::Gaussian(g) => (
                Polynomial::constant(g.mean.len(), 1.0),
                g.mean.clone(),
                g.cov.clone(),
            ),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Factor::Pnd(p) => p.dim(),
            Factor::Gaussian(g) => g.mean.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvReport {
    pub grid: Vec<Vec<f64>>,
    pub f_values: Vec<f64>,
    pub conv_values: Vec<f64>,
    pub max_abs_error: f64,
    pub quadrature_order: usize,
}

/// `n` points per axis on `center ± half_width`.
pub fn grid_points(center: &[f64], half_width: f64, n: usize) -> Vec<Vec<f64>> {
    let d = center.len();
    let coord = |j: usize, k: usize| {
        if n == 1 {
            center[j]
        } else {
            center[j] - half_width + 2.0 * half_width * k as f64 / (n - 1) as f64
        }
    };
    let mut idx = vec![0usize; d];
    let mut out = Vec::with_capacity(n.pow(d as u32));
    loop {
        out.push((0..d).map(|j| coord(j, idx[j])).collect());
        if !crate::quadrature::advance(&mut idx, n) {
            break;
        }
    }
    out
}

/// Compares `f` with `g₁ * g₂` on `grid`.
///
/// Writing `gₖ = Pₖ·N(mₖ, Cₖ)`, the Gaussian parts combine as
/// `N(y; m₁, C₁)·N(x−y; m₂, C₂) = N(x; m₁+m₂, C₁+C₂)·N(y; μ(x), Cₚ)`, leaving a
/// polynomial expectation under `N(μ(x), Cₚ)` for Gauss–Hermite quadrature.
/// The default order is the combined polynomial degree plus 20.
pub fn convolution_check(
    f: &Pnd,
    g1: &Factor,
    g2: &Factor,
    grid: &[Vec<f64>],
    order: Option<usize>,
) -> Result<ConvReport> {
    let d = f.dim();
    check_dim(d, g1.dim())?;
    check_dim(d, g2.dim())?;
    let (p1, m1, c1) = g1.parts();
    let (p2, m2, c2) = g2.parts();
    let required = (p1.degree() + p2.degree()) as usize;
    let order = order.unwrap_or(required + 20);
    if order <= required {
        return Err(Error::QuadratureOrderTooLow { order, required });
    }
    let c1i = linalg::inverse(&c1)?;
    let c2i = linalg::inverse(&c2)?;
    let cp = linalg::symmetrize(&linalg::inverse(&(&c1i + &c2i))?);
    let k = cp.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.l();
    let sum_form = QuadForm::new(linalg::inverse(&(&c1 + &c2))?)?;
    let sum_mean: Vec<f64> = m1.iter().zip(&m2).map(|(a, b)| a + b).collect();
    let outer = Pnd::trusted(Polynomial::constant(d, 1.0), sum_form, sum_mean)?;
    let c1i_m1 = linalg::mat_vec(&c1i, &m1);

    let mut f_values = Vec::with_capacity(grid.len());
    let mut conv_values = Vec::with_capacity(grid.len());
    let mut max_abs_error = 0.0f64;
    for x in grid {
        check_dim(d, x.len())?;
        let r: Vec<f64> = x.iter().zip(&m2).map(|(a, b)| a - b).collect();
        let rhs: Vec<f64> = linalg::mat_vec(&c2i, &r)
            .iter()
            .zip(&c1i_m1)
            .map(|(a, b)| a + b)
            .collect();
        let mu = linalg::mat_vec(&cp, &rhs);
        let inner = standard_normal_expectation(d, order, |u| {
            let ku = linalg::mat_vec(&k, u);
            let y: Vec<f64> = mu.iter().zip(&ku).map(|(a, b)| a + b).collect();
            let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
            p1.eval_unchecked(&y) * p2.eval_unchecked(&z)
        });
        let g = outer.density(x)? * inner;
        let fx = f.density(x)?;
        max_abs_error = max_abs_error.max((g - fx).abs());
        f_values.push(fx);
        conv_values.push(g);
    }
    Ok(ConvReport {
        grid: grid.to_vec(),
        f_values,
        conv_values,
        max_abs_error,
        quadrature_order: order,
    })
}
