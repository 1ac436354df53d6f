//! Polynomial-normal densities `c·√det A/(2π)^{d/2}·p(x)·exp(−½(x−b)ᵀA(x−b))`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::polyalg::{to_hermite, HermiteCoeffs, Polynomial};
use crate::quadrature;
use crate::search::{minimize_polynomial, minimize_polynomial_from, MinResult, SearchConfig};

/// Values of the normalized whitened polynomial below this reject a density.
pub const NEGATIVITY_TOL: f64 = 1e-9;

/// Symmetric positive-definite matrix `A` together with a whitener `L`, `LᵀAL = I`.
///
/// `L` is the inverse transpose of the lower Cholesky factor of `A`, so that
/// `LLᵀ = A⁻¹` and `x = Lu` maps standard normal `u` to `N(0, A⁻¹)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadForm {
    matrix: DMatrix<f64>,
    whitener: DMatrix<f64>,
    whitener_inv: DMatrix<f64>,
    det: f64,
}

impl QuadForm {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(Error::InvalidInput(
                "matrix must be square and non-empty".into(),
            ));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        let asym = linalg::max_abs(&(&a - a.transpose()));
        if asym > 1e-12 * linalg::max_abs(&a).max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        let a = linalg::symmetrize(&a);
        let n = a.nrows();
        let chol = a.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
        let c = chol.l();
        if (0..n).any(|i| c[(i, i)] <= 0.0 || !c[(i, i)].is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        let c_inv = c
            .solve_lower_triangular(&DMatrix::identity(n, n))
            .ok_or(Error::NotPositiveDefinite)?;
        let det = (0..n).map(|i| c[(i, i)] * c[(i, i)]).product();
        Ok(QuadForm {
            matrix: a,
            whitener: c_inv.transpose(),
            whitener_inv: c.transpose(),
            det,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        QuadForm::new(linalg::from_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        QuadForm::new(DMatrix::identity(dim, dim)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `L` with `LᵀAL = I`.
    pub fn whitener(&self) -> &DMatrix<f64> {
        &self.whitener
    }

    /// `L⁻¹`, the transposed Cholesky factor of `A`.
    pub fn whitener_inverse(&self) -> &DMatrix<f64> {
        &self.whitener_inv
    }

    /// `A⁻¹ = LLᵀ`.
    pub fn covariance(&self) -> DMatrix<f64> {
        linalg::symmetrize(&(&self.whitener * self.whitener.transpose()))
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        linalg::to_rows(&self.matrix)
    }

    /// Form with matrix `s·A`, `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<QuadForm> {
        QuadForm::new(&self.matrix * s)
    }
}

/// A polynomial-normal density.
#[derive(Clone, Debug)]
pub struct Pnd {
    poly: Polynomial,
    form: QuadForm,
    shift: Vec<f64>,
    norm_const: f64,
    whitened: Polynomial,
}

impl Pnd {
    /// Validates and normalizes with the default nonnegativity search.
    pub fn new(poly: Polynomial, form: QuadForm, shift: Vec<f64>) -> Result<Self> {
        Pnd::with_search(poly, form, shift, &SearchConfig::default())
    }

    pub fn with_search(
        poly: Polynomial,
        form: QuadForm,
        shift: Vec<f64>,
        cfg: &SearchConfig,
    ) -> Result<Self> {
        let raw = Pnd::build(poly, form, shift)?;
        let beta0 = raw.norm_const;
        let scan_target = if beta0 > 0.0 {
            raw.whitened.scale(1.0 / beta0)
        } else {
            raw.whitened.clone()
        };
        let m = minimize_polynomial(&scan_target, cfg);
        if m.value < -NEGATIVITY_TOL {
            let point = raw.unwhiten(&m.point);
            return Err(Error::NegativeDensity {
                point,
                value: m.value,
            });
        }
        if beta0 <= 0.0 {
            return Err(Error::ZeroIntegral(beta0));
        }
        Ok(raw.normalized())
    }

    /// Normalizes without the nonnegativity scan; the caller vouches for `p ≥ 0`.
    pub(crate) fn trusted(poly: Polynomial, form: QuadForm, shift: Vec<f64>) -> Result<Self> {
        let raw = Pnd::build(poly, form, shift)?;
        if raw.norm_const <= 0.0 {
            return Err(Error::ZeroIntegral(raw.norm_const));
        }
        Ok(raw.normalized())
    }

    /// Checks shapes and stores `β₀` of `p(Lu + b)` in `norm_const` (not yet inverted).
    fn build(poly: Polynomial, form: QuadForm, shift: Vec<f64>) -> Result<Self> {
        check_dim(poly.dim(), form.dim())?;
        check_dim(poly.dim(), shift.len())?;
        if shift.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("shift must be finite".into()));
        }
        if poly.degree() % 2 == 1 {
            return Err(Error::OddDegree(poly.degree()));
        }
        let whitened = poly.affine_substitute(form.whitener(), &shift)?;
        let beta0 = to_hermite(&whitened).constant();
        Ok(Pnd {
            poly,
            form,
            shift,
            norm_const: beta0,
            whitened,
        })
    }

    fn normalized(mut self) -> Self {
        let beta0 = self.norm_const;
        self.norm_const = 1.0 / beta0;
        self.whitened = self.whitened.scale(1.0 / beta0);
        self
    }

    pub fn standard_normal(dim: usize) -> Self {
        Pnd::trusted(
            Polynomial::constant(dim, 1.0),
            QuadForm::identity(dim),
            vec![0.0; dim],
        )
        .expect("standard normal is valid")
    }

    /// `N(mean, cov)` as a density with constant polynomial part.
    pub fn gaussian(mean: Vec<f64>, cov: &DMatrix<f64>) -> Result<Self> {
        let form = QuadForm::new(linalg::inverse(cov)?)?;
        Pnd::trusted(Polynomial::constant(mean.len(), 1.0), form, mean)
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// `c·p`, the polynomial factor of the density relative to `N(b, A⁻¹)`.
    pub fn normalized_poly(&self) -> Polynomial {
        self.poly.scale(self.norm_const)
    }

    /// `u ↦ c·p(Lu + b)`; its constant Hermite coefficient is 1.
    pub fn whitened_poly(&self) -> &Polynomial {
        &self.whitened
    }

    pub fn hermite_coeffs(&self) -> HermiteCoeffs {
        to_hermite(&self.whitened)
    }

    pub(crate) fn unwhiten(&self, u: &[f64]) -> Vec<f64> {
        linalg::mat_vec(self.form.whitener(), u)
            .into_iter()
            .zip(&self.shift)
            .map(|(x, b)| x + b)
            .collect()
    }

    /// Value of the Gaussian kernel `√det A/(2π)^{d/2}·exp(−½(x−b)ᵀA(x−b))`.
    pub(crate) fn gaussian_kernel(&self, x: &[f64]) -> f64 {
        let d = self.dim();
        let r: Vec<f64> = x.iter().zip(&self.shift).map(|(x, b)| x - b).collect();
        self.form.det().sqrt() / (2.0 * PI).powf(d as f64 / 2.0)
            * (-0.5 * linalg::quad(self.form.matrix(), &r)).exp()
    }

    pub fn density(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.norm_const * self.poly.eval_unchecked(x) * self.gaussian_kernel(x))
    }

    /// `∫ f` by Gauss–Hermite quadrature in whitened coordinates.
    pub fn integral(&self, order: usize) -> f64 {
        quadrature::standard_normal_expectation(self.dim(), order, |u| {
            self.whitened.eval_unchecked(u)
        })
    }

    /// `∫ f` over `b ± half_width·σ_j` by Gauss–Legendre quadrature, `σ_j² = (A⁻¹)_jj`.
    pub fn integral_box(&self, half_width: f64, order: usize) -> f64 {
        let cov = self.form.covariance();
        let lo: Vec<f64> = (0..self.dim())
            .map(|j| self.shift[j] - half_width * cov[(j, j)].sqrt())
            .collect();
        let hi: Vec<f64> = (0..self.dim())
            .map(|j| self.shift[j] + half_width * cov[(j, j)].sqrt())
            .collect();
        quadrature::box_integral(&lo, &hi, order, |x| {
            self.norm_const * self.poly.eval_unchecked(x) * self.gaussian_kernel(x)
        })
    }

    /// Multi-start search for the minimum of `p` around the shift.
    pub fn find_min_poly(&self, cfg: &SearchConfig) -> MinResult {
        minimize_polynomial_from(&self.poly, &self.shift, cfg)
    }

    /// CSV with header `x1,...,xd,f`.
    pub fn density_slice_csv(&self, points: &[Vec<f64>]) -> Result<String> {
        let d = self.dim();
        let mut out: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
        out.push("f".into());
        let mut s = out.join(",");
        s.push('\n');
        for x in points {
            let f = self.density(x)?;
            for v in x {
                write!(s, "{v},").expect("writing to a String");
            }
            writeln!(s, "{f}").expect("writing to a String");
        }
        Ok(s)
    }
}
