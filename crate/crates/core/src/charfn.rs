//! Characteristic functions `φ(t) = e^{ib·t}·Σ β_α (it)^α·exp(−½tᵀΣt)`.
//!
//! The polynomial part is stored as a real polynomial in `s = it`; the
//! factors `i^{|α|}` only appear at evaluation time.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::pnd::{Pnd, QuadForm};
use crate::polyalg::{from_hermite, to_hermite, HermiteCoeffs, Polynomial};

#[derive(Clone, Debug)]
pub struct CharFn {
    beta: Polynomial,
    sigma: QuadForm,
    shift: Vec<f64>,
}

impl CharFn {
    /// Rescales `beta` so that `β₀ = 1`, warning when that changes anything.
    pub fn new(beta: Polynomial, sigma: DMatrix<f64>, shift: Vec<f64>) -> Result<Self> {
        check_dim(beta.dim(), sigma.nrows())?;
        check_dim(beta.dim(), shift.len())?;
        let sigma = QuadForm::new(sigma)?;
        let b0 = beta.constant_term();
        if b0 == 0.0 {
            return Err(Error::ZeroIntegral(b0));
        }
        let beta = if (b0 - 1.0).abs() > 1e-12 {
            log::warn!("characteristic function rescaled by 1/{b0} so that φ(0) = 1");
            beta.scale(1.0 / b0)
        } else {
            beta
        };
        Ok(CharFn { beta, sigma, shift })
    }

    /// From a real polynomial in `t` with only even-degree terms, `c_α t^α = c_α (−1)^{|α|/2} (it)^α`.
    pub fn from_real_t_polynomial(
        p: &Polynomial,
        sigma: DMatrix<f64>,
        shift: Vec<f64>,
    ) -> Result<Self> {
        if let Some((a, _)) = p.terms().find(|(a, _)| a.total() % 2 == 1) {
            return Err(Error::InvalidInput(format!(
                "odd term {a} would make the polynomial part complex"
            )));
        }
        CharFn::new(real_to_s(p), sigma, shift)
    }

    /// Characteristic function of `N(mean, cov)`.
    pub fn gaussian(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        CharFn::new(Polynomial::constant(mean.len(), 1.0), cov, mean)
    }

    pub fn dim(&self) -> usize {
        self.beta.dim()
    }

    /// The polynomial part as a polynomial in `s = it`.
    pub fn beta(&self) -> &Polynomial {
        &self.beta
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        self.sigma.matrix()
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    /// Real part of the polynomial part as a polynomial in `t`.
    pub fn real_t_polynomial(&self) -> Polynomial {
        t_part(&self.beta, 0)
    }

    /// Imaginary part of the polynomial part as a polynomial in `t`.
    pub fn imag_t_polynomial(&self) -> Polynomial {
        t_part(&self.beta, 1)
    }

    pub fn eval(&self, t: &[f64]) -> Result<Complex64> {
        check_dim(self.dim(), t.len())?;
        let mut poly = Complex64::new(0.0, 0.0);
        for (alpha, c) in self.beta.terms() {
            poly += i_pow(alpha.total()) * (c * alpha.monomial(t));
        }
        let gauss = (-0.5 * linalg::quad(self.sigma.matrix(), t)).exp();
        let phase: f64 = self.shift.iter().zip(t).map(|(b, t)| b * t).sum();
        Ok(poly * gauss * Complex64::from_polar(1.0, phase))
    }

    /// Largest coefficient, matrix or shift discrepancy between two characteristic functions.
    pub fn max_abs_diff(&self, other: &CharFn) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let s = linalg::max_abs(&(self.sigma() - other.sigma()));
        let b = self
            .shift
            .iter()
            .zip(&other.shift)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        self.beta.max_abs_diff(&other.beta).max(s).max(b)
    }
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Terms of `Σβ_α i^{|α|} t^α` whose `i`-power has the given parity, with the sign folded in.
fn t_part(beta: &Polynomial, parity: u32) -> Polynomial {
    let terms = beta
        .terms()
        .filter(|(a, _)| a.total() % 2 == parity)
        .map(|(a, c)| {
            let k = a.total();
            let sign = if ((k - parity) / 2).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            (a.entries().to_vec(), sign * c)
        });
    Polynomial::from_terms(beta.dim(), terms).expect("terms come from a valid polynomial")
}

fn real_to_s(p: &Polynomial) -> Polynomial {
    let terms = p.terms().map(|(a, c)| {
        let sign = if a.total() / 2 % 2 == 0 { 1.0 } else { -1.0 };
        (a.entries().to_vec(), sign * c)
    });
    Polynomial::from_terms(p.dim(), terms).expect("terms come from a valid polynomial")
}

/// Exact characteristic function of a density.
///
/// With `X = LU + b` and `c·p(Lu + b) = Σ B_α He_α(u)`, the transform is
/// `e^{ib·t}·B(Lᵀ it)·exp(−½tᵀA⁻¹t)`.
pub fn forward_cf(pnd: &Pnd) -> CharFn {
    let h = pnd.hermite_coeffs();
    let l = pnd.form().whitener();
    let beta = h
        .as_coefficient_map()
        .affine_substitute(&l.transpose(), &vec![0.0; pnd.dim()])
        .expect("dimensions agree");
    CharFn {
        beta: beta.scale(1.0 / beta.constant_term()),
        sigma: QuadForm::new(pnd.form().covariance()).expect("covariance of a valid form"),
        shift: pnd.shift().to_vec(),
    }
}

/// Density polynomial, quadratic form and shift of the inverse transform,
/// without checking that the polynomial is nonnegative.
pub fn inverse_cf_polynomial(cf: &CharFn) -> Result<(Polynomial, QuadForm, Vec<f64>)> {
    let d = cf.dim();
    let form = QuadForm::new(linalg::inverse(cf.sigma())?)?;
    // LLᵀ = Σ, and B(v) = β(L⁻ᵀv)
    let l_inv = form.whitener_inverse().clone();
    let b_poly = cf
        .beta
        .affine_substitute(&l_inv.transpose(), &vec![0.0; d])?;
    let q = from_hermite(&HermiteCoeffs::from_coefficient_map(b_poly));
    let c: Vec<f64> = linalg::mat_vec(&l_inv, &cf.shift)
        .into_iter()
        .map(|v| -v)
        .collect();
    let p = q.affine_substitute(&l_inv, &c)?;
    Ok((p, form, cf.shift.clone()))
}

/// The density whose characteristic function is `cf`.
///
/// Fails with [`Error::NegativeDensity`] when the candidate polynomial dips
/// below zero, i.e. when `cf` is not the transform of any density.
pub fn inverse_cf(cf: &CharFn) -> Result<Pnd> {
    let (p, form, shift) = inverse_cf_polynomial(cf)?;
    Pnd::new(p, form, shift)
}

/// Pointwise product: polynomial parts multiply, covariances and shifts add.
pub fn cf_multiply(a: &CharFn, b: &CharFn) -> Result<CharFn> {
    check_dim(a.dim(), b.dim())?;
    let beta = a.beta.multiply(&b.beta)?;
    let sigma = a.sigma() + b.sigma();
    let shift = a.shift.iter().zip(&b.shift).map(|(x, y)| x + y).collect();
    CharFn::new(beta, sigma, shift)
}

/// Hermite coefficients of the whitened density polynomial of `cf`.
pub fn whitened_hermite(cf: &CharFn) -> Result<HermiteCoeffs> {
    let (p, form, shift) = inverse_cf_polynomial(cf)?;
    Ok(to_hermite(&p.affine_substitute(form.whitener(), &shift)?))
}
