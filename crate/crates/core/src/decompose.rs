//! Splitting a polynomial-normal law into a polynomial-normal factor and a normal factor.
//!
//! With `X = LU + b` and `c·p(Lu + b) = Σβ_α He_α(u)`, the characteristic
//! function of `U` is `Σβ_α(is)^α e^{−|s|²/2}`. For `θ ∈ (0,1)` this equals
//! `[Σβ_α(is)^α e^{−θ²|s|²/2}]·e^{−(1−θ²)|s|²/2}`, and the first factor is the
//! transform of `p_θ(u)·N(u; 0, θ²I)` where
//! `p_θ(u) = Σβ_α θ^{−|α|} He_α(u/θ)`. The split is valid whenever `p_θ ≥ 0`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::charfn::{cf_multiply, forward_cf, CharFn};
use crate::error::{Error, Result};
use crate::pnd::Pnd;
use crate::polyalg::{theta_rescale, HermiteCoeffs, Polynomial};
use crate::positivity::{epsilon_bound, PositivityReport, LEADING_TOL};
use crate::search::{minimize_polynomial, MinResult, SearchConfig};
use crate::verify::{convolution_check, grid_points, Factor};

/// Normalized polynomial values at or below this count as a real zero.
pub const ZERO_TOL: f64 = 1e-9;

/// `min p_θ` at or above this makes `θ` admissible.
pub const ADMISSIBLE_TOL: f64 = -1e-12;

pub const THETA_LABEL: &str = "minimal isotropic-whitened θ found";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The polynomial attains zero, so no normal factor can be split off.
    HasRealZero,
    /// Some `x_j^{2m}` coefficient is not positive; the construction does not apply.
    FailsCondition337,
    /// Axis coefficients are positive but the top-degree form vanishes on some direction.
    DegenerateLeadingForm,
    Eligible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::HasRealZero => "HasRealZero",
            Verdict::FailsCondition337 => "FailsCondition337",
            Verdict::DegenerateLeadingForm => "DegenerateLeadingForm",
            Verdict::Eligible => "Eligible",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Diagnosis {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Minimum search on the density polynomial, centred at the shift.
    pub search: MinResult,
    /// Conditions evaluated on the whitened, normalized polynomial.
    pub report: PositivityReport,
    pub note: Option<String>,
}

/// Normal law `N(mean, cov)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianFactor {
    pub mean: Vec<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianFactor {
    pub fn char_fn(&self) -> Result<CharFn> {
        CharFn::gaussian(self.mean.clone(), self.cov.clone())
    }
}

#[derive(Clone, Debug)]
pub struct DecomposeConfig {
    pub search: SearchConfig,
    /// Absolute tolerance of the θ bisection.
    pub tol: f64,
    pub check_convolution: bool,
    /// Quadrature order of the convolution check; combined degree + 20 when absent.
    pub quadrature_order: Option<usize>,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            search: SearchConfig::default(),
            tol: 1e-6,
            check_convolution: true,
            quadrature_order: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub theta: f64,
    /// Set when `θ` was chosen by [`theta_floor`].
    pub theta_floor: Option<f64>,
    /// Centred polynomial-normal factor with matrix `A/θ²`.
    pub factor_y: Pnd,
    /// Normal factor `N(b, (1−θ²)A⁻¹)`.
    pub factor_z: GaussianFactor,
    /// Whitened `p_θ`.
    pub p_theta: Polynomial,
    pub min_p_theta: f64,
    /// Coefficient-wise distance between `φ_Y·φ_Z` and `φ`.
    pub cf_error: f64,
    pub conv_error: Option<f64>,
    pub diagnosis: Diagnosis,
}

/// Zero search, then the leading-coefficient conditions on the whitened polynomial.
pub fn precheck(pnd: &Pnd, cfg: &SearchConfig) -> Result<Diagnosis> {
    let search = pnd.find_min_poly(cfg);
    let report = epsilon_bound(pnd.whitened_poly())?;
    let scaled = search.value * pnd.norm_const();
    let (verdict, witness) = if search.attained && scaled <= ZERO_TOL {
        (
            Verdict::HasRealZero,
            Some(Witness {
                point: search.point.clone(),
                value: search.value,
            }),
        )
    } else if !report.condition337 {
        (Verdict::FailsCondition337, None)
    } else if report.leading_form_min <= LEADING_TOL {
        (Verdict::DegenerateLeadingForm, None)
    } else {
        (Verdict::Eligible, None)
    };
    let note = match verdict {
        Verdict::HasRealZero => {
            Some("the density polynomial has a real zero; no normal factor can be split off".into())
        }
        Verdict::FailsCondition337 => Some(
            "some x_j^{2m} coefficient is not positive; the construction does not apply, \
             which does not by itself prove indecomposability"
                .into(),
        ),
        Verdict::DegenerateLeadingForm => Some(
            "the top-degree form vanishes on some direction; the construction does not apply"
                .into(),
        ),
        Verdict::Eligible if pnd.poly().degree() == 0 => {
            Some("constant polynomial: both factors are Gaussian for every θ".into())
        }
        Verdict::Eligible => None,
    };
    Ok(Diagnosis {
        verdict,
        witness,
        search,
        report,
        note,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaSearch {
    pub theta_min: f64,
    /// `(θ, min p_θ)` for every probe, in evaluation order.
    pub trace: Vec<(f64, f64)>,
}

fn min_p_theta(
    h: &HermiteCoeffs,
    theta: f64,
    cfg: &SearchConfig,
) -> Result<(Polynomial, MinResult)> {
    let p = theta_rescale(h, theta)?;
    let m = minimize_polynomial(&p, cfg);
    Ok((p, m))
}

/// Smallest admissible `θ` to within `tol`, by bisection on `min p_θ ≥ −1e−12`.
pub fn theta_floor(h: &HermiteCoeffs, tol: f64, cfg: &SearchConfig) -> Result<ThetaSearch> {
    if !(tol > 0.0 && tol < 0.5) {
        return Err(Error::InvalidInput(format!(
            "theta tolerance must lie in (0, 0.5), got {tol}"
        )));
    }
    let mut trace = Vec::new();
    let mut probe = |theta: f64| -> Result<bool> {
        let (_, m) = min_p_theta(h, theta, cfg)?;
        trace.push((theta, m.value));
        Ok(m.value >= ADMISSIBLE_TOL)
    };
    let top = 1.0 - 1e-9;
    if !probe(top)? {
        let v = trace.last().map_or(f64::NAN, |t| t.1);
        return Err(Error::NoAdmissibleTheta(v));
    }
    if probe(tol)? {
        return Ok(ThetaSearch {
            theta_min: tol,
            trace,
        });
    }
    let (mut lo, mut hi) = (tol, top);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThetaSearch {
        theta_min: hi,
        trace,
    })
}

/// Normal-factor decomposition; `θ` defaults to `theta_floor + tol`.
pub fn decompose(pnd: &Pnd, theta: Option<f64>, cfg: &DecomposeConfig) -> Result<Decomposition> {
    decompose_diagnosed(pnd, precheck(pnd, &cfg.search)?, theta, cfg)
}

/// [`decompose`] with a diagnosis already computed by [`precheck`].
pub fn decompose_diagnosed(
    pnd: &Pnd,
    diagnosis: Diagnosis,
    theta: Option<f64>,
    cfg: &DecomposeConfig,
) -> Result<Decomposition> {
    if diagnosis.verdict != Verdict::Eligible {
        return Err(Error::NotEligible(diagnosis.verdict.to_string()));
    }
    let h = pnd.hermite_coeffs();
    let (theta, floor) = match theta {
        Some(t) => {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::ThetaOutOfRange(t));
            }
            (t, None)
        }
        None => {
            let s = theta_floor(&h, cfg.tol, &cfg.search)?;
            (
                (s.theta_min + cfg.tol).min(1.0 - 1e-9).max(s.theta_min),
                Some(s.theta_min),
            )
        }
    };
    let (p_theta, m) = min_p_theta(&h, theta, &cfg.search)?;
    if m.value < ADMISSIBLE_TOL {
        return Err(Error::ThetaInadmissible {
            theta,
            min_value: m.value,
        });
    }
    let d = pnd.dim();
    let form = pnd.form();
    let y_poly = p_theta.affine_substitute(form.whitener_inverse(), &vec![0.0; d])?;
    let factor_y = Pnd::trusted(y_poly, form.scaled(1.0 / (theta * theta))?, vec![0.0; d])?;
    let factor_z = GaussianFactor {
        mean: pnd.shift().to_vec(),
        cov: form.covariance() * (1.0 - theta * theta),
    };
    let product = cf_multiply(&forward_cf(&factor_y), &factor_z.char_fn()?)?;
    let cf_error = product.max_abs_diff(&forward_cf(pnd));
    let conv_error = if cfg.check_convolution {
        let n = if d <= 2 { 5 } else { 3 };
        let grid = grid_points(pnd.shift(), 4.0, n);
        let r = convolution_check(
            pnd,
            &Factor::Pnd(factor_y.clone()),
            &Factor::Gaussian(factor_z.clone()),
            &grid,
            cfg.quadrature_order,
        )?;
        Some(r.max_abs_error)
    } else {
        None
    };
    Ok(Decomposition {
        theta,
        theta_floor: floor,
        factor_y,
        factor_z,
        p_theta,
        min_p_theta: m.value,
        cf_error,
        conv_error,
        diagnosis,
    })
}
