//! The indecomposable bivariate example.
//!
//! The density `(1/(6π))[(x₁x₂−1)² + x₂²]e^{−|x|²/2}` has characteristic function
//! `(1/3)P(t)e^{−|t|²/2}` with `P = t₁²t₂² + 2t₁t₂ − 2t₂² − t₁² + 3`. The candidate
//! factor `φ₁ = (1/3)P(t)·exp(−½(a₁₁t₁² + 2a₁₂t₁t₂ + a₂₂t₂²))` leaves a Gaussian
//! cofactor, but its inverse transform takes negative values, so it is not a
//! characteristic function. Along the curve `Tₙ = n`, `Yₙ = (n − 1/n)√a₁₂` the
//! associated polynomial behaves like `B·n²` with `B < 0`.

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::charfn::{inverse_cf_polynomial, CharFn};
use crate::error::{Error, Result};
use crate::pnd::{Pnd, QuadForm};
use crate::polyalg::Polynomial;

/// Polynomial values below this count as a negative density.
pub const WITNESS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example4Params {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl Example4Params {
    /// Both `[[a₁₁, a₁₂], [a₁₂, a₂₂]]` and `I` minus it must be positive definite.
    pub fn new(a11: f64, a12: f64, a22: f64) -> Result<Self> {
        if !(a11.is_finite() && a12.is_finite() && a22.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        let checks = [
            (a11 > 0.0, "a11 > 0"),
            (a22 > 0.0, "a22 > 0"),
            (a11 * a22 - a12 * a12 > 0.0, "a11*a22 - a12^2 > 0"),
            (1.0 - a11 > 0.0, "1 - a11 > 0"),
            (1.0 - a22 > 0.0, "1 - a22 > 0"),
            (
                (1.0 - a11) * (1.0 - a22) - a12 * a12 > 0.0,
                "(1 - a11)*(1 - a22) - a12^2 > 0",
            ),
        ];
        for (ok, name) in checks {
            if !ok {
                return Err(Error::InvalidParams(format!(
                    "violated constraint {name} for (a11, a12, a22) = ({a11}, {a12}, {a22})"
                )));
            }
        }
        Ok(Example4Params { a11, a12, a22 })
    }

    fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    fn nonzero_a12(&self) -> Result<f64> {
        if self.a12 == 0.0 {
            return Err(Error::InvalidParams(
                "B is defined only for a12 != 0".into(),
            ));
        }
        Ok(self.a12.abs())
    }
}

/// `P(t)/3` as a real polynomial in `t`.
fn p_over_three() -> Polynomial {
    Polynomial::from_terms(
        2,
        [
            (vec![2, 2], 1.0 / 3.0),
            (vec![1, 1], 2.0 / 3.0),
            (vec![0, 2], -2.0 / 3.0),
            (vec![2, 0], -1.0 / 3.0),
            (vec![0, 0], 1.0),
        ],
    )
    .expect("fixed polynomial")
}

/// The density whose characteristic function is `(1/3)P(t)e^{−|t|²/2}`.
pub fn example4_pnd() -> Pnd {
    let p = Polynomial::from_terms(
        2,
        [
            (vec![2, 2], 1.0),
            (vec![1, 1], -2.0),
            (vec![0, 0], 1.0),
            (vec![0, 2], 1.0),
        ],
    )
    .expect("fixed polynomial");
    Pnd::new(p, QuadForm::identity(2), vec![0.0, 0.0]).expect("valid density")
}

/// `φ₁(t) = (1/3)P(t)·exp(−½(a₁₁t₁² + 2a₁₂t₁t₂ + a₂₂t₂²))`.
pub fn candidate_cf(params: &Example4Params) -> CharFn {
    let sigma = DMatrix::from_row_slice(2, 2, &[params.a11, params.a12, params.a12, params.a22]);
    CharFn::from_real_t_polynomial(&p_over_three(), sigma, vec![0.0, 0.0])
        .expect("valid parameters")
}

/// The Gaussian cofactor `exp(−½(t₁²(1−a₁₁) − 2a₁₂t₁t₂ + (1−a₂₂)t₂²))`.
pub fn complement_cf(params: &Example4Params) -> CharFn {
    let sigma = DMatrix::from_row_slice(
        2,
        2,
        &[1.0 - params.a11, -params.a12, -params.a12, 1.0 - params.a22],
    );
    CharFn::gaussian(vec![0.0, 0.0], sigma).expect("valid parameters")
}

/// Polynomial part `p₁` (relative to `N(0, Σ₁)`) of the inverse transform of `φ₁`.
pub fn candidate_polynomial(params: &Example4Params) -> (Polynomial, QuadForm) {
    let (p, form, _) = inverse_cf_polynomial(&candidate_cf(params)).expect("valid parameters");
    (p, form)
}

/// `B_{n²}` in the closed form `a₂₂/a₁₂ − a₁₂/a₂₂ − 1/a₁₂ − a₁₂/(a₁₁a₂₂ − a₁₂²)`,
/// with `a₁₂` replaced by `|a₁₂|`.
pub fn example4_b(params: &Example4Params) -> Result<f64> {
    let s = params.nonzero_a12()?;
    Ok(params.a22 / s - s / params.a22 - 1.0 / s - s / params.det())
}

/// `B_{n²} = (a₂₂ − 1)/a₁₂ − a₁₂/(a₁₁a₂₂ − a₁₂²)` as recomputed from the inverse
/// transform; it differs from [`example4_b`] by `−a₁₂/a₂₂`.
pub fn example4_b_corrected(params: &Example4Params) -> Result<f64> {
    let s = params.nonzero_a12()?;
    Ok((params.a22 - 1.0) / s - s / params.det())
}

/// Point of the witness curve in `(x₁, x₂)`: along the curve for `a₁₂ ≠ 0`,
/// along the first whitened axis for `a₁₂ = 0`.
pub fn curve_point(params: &Example4Params, n: f64) -> [f64; 2] {
    if params.a12 == 0.0 {
        return [params.a11.sqrt() * n, 0.0];
    }
    let s = params.a12.abs();
    let big_x = n * (params.det() / s).sqrt();
    let big_y = (n - 1.0 / n) * s.sqrt();
    let x2 = big_y * params.a22.sqrt();
    let x1 = big_x * (params.a11 - s * s / params.a22).sqrt() + s / params.a22 * x2;
    if params.a12 > 0.0 {
        [x1, x2]
    } else {
        [x1, -x2]
    }
}

/// Coefficient of `n²` in `3·p₁` along the curve, read off from the exact
/// expansion `Bn² + c₀ + c₋₂n⁻²` fitted at `n = 1, 2, 3`.
pub fn extract_n2_coefficient(params: &Example4Params) -> Result<f64> {
    params.nonzero_a12()?;
    let (p, _) = candidate_polynomial(params);
    let g = |n: f64| 3.0 * p.eval_unchecked(&curve_point(params, n));
    let ns = [1.0f64, 2.0, 3.0];
    let m = Matrix3::from_fn(|i, j| ns[i].powi(2 - 2 * j as i32));
    let rhs = Vector3::from_fn(|i, _| g(ns[i]));
    let sol = m.lu().solve(&rhs).ok_or(Error::Singular)?;
    Ok(sol[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessBranch {
    Curve,
    Axis,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Example4Witness {
    pub n: usize,
    pub point: [f64; 2],
    /// Value of `p₁`, the sign-carrying factor.
    pub poly_value: f64,
    /// `p₁(x)·N(x; 0, Σ₁)`; may underflow far out.
    pub density_value: f64,
    pub branch: WitnessBranch,
}

/// First `n ≤ n_max` whose curve point has `p₁ < −1e−10`.
pub fn example4_negative_witness(params: &Example4Params, n_max: usize) -> Result<Example4Witness> {
    let (p, form) = candidate_polynomial(params);
    let kernel = Pnd::trusted(Polynomial::constant(2, 1.0), form, vec![0.0, 0.0])?;
    let branch = if params.a12 == 0.0 {
        WitnessBranch::Axis
    } else {
        WitnessBranch::Curve
    };
    for n in 1..=n_max {
        let x = curve_point(params, n as f64);
        let v = p.eval_unchecked(&x);
        if v < -WITNESS_TOL {
            return Ok(Example4Witness {
                n,
                point: x,
                poly_value: v,
                density_value: v * kernel.density(&x)?,
                branch,
            });
        }
    }
    Err(Error::NoWitnessFound(n_max))
}

/// Density slice `x1,x2,f` of the inverse transform of `φ₁` along the witness curve.
pub fn curve_csv(params: &Example4Params, n_max: usize, samples_per_unit: usize) -> Result<String> {
    let (p, form) = candidate_polynomial(params);
    let kernel = Pnd::trusted(Polynomial::constant(2, 1.0), form, vec![0.0, 0.0])?;
    let mut s = String::from("x1,x2,f\n");
    let steps = n_max.max(1) * samples_per_unit.max(1);
    for k in 0..=steps {
        let n = 1.0 + (n_max.max(1) - 1) as f64 * k as f64 / steps as f64;
        let x = curve_point(params, n);
        let f = p.eval_unchecked(&x) * kernel.density(&x)?;
        s.push_str(&format!("{},{},{}\n", x[0], x[1], f));
    }
    Ok(s)
}
