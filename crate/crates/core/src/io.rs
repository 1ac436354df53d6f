//! JSON documents exchanged by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::charfn::CharFn;
use crate::decompose::{Decomposition, Diagnosis, GaussianFactor, THETA_LABEL};
use crate::error::Result;
use crate::linalg;
use crate::pnd::{Pnd, QuadForm};
use crate::polyalg::{Polynomial, Term};
use crate::search::SearchConfig;
use crate::verify::Factor;

/// `{"poly": …, "A": [[…]], "b": […]}`, with `norm_const` on output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PndJson {
    pub poly: Polynomial,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_const: Option<f64>,
}

impl PndJson {
    pub fn from_pnd(p: &Pnd) -> Self {
        PndJson {
            poly: p.poly().clone(),
            a: p.form().rows(),
            b: p.shift().to_vec(),
            norm_const: Some(p.norm_const()),
        }
    }

    pub fn to_pnd(&self, cfg: &SearchConfig) -> Result<Pnd> {
        Pnd::with_search(
            self.poly.clone(),
            QuadForm::from_rows(&self.a)?,
            self.b.clone(),
            cfg,
        )
    }
}

/// `{"dim": d, "beta": [{"alpha", "coef"}], "Sigma": [[…]], "b": […]}`; `beta` holds coefficients of `(it)^α`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharFnJson {
    pub dim: usize,
    pub beta: Vec<Term>,
    #[serde(rename = "Sigma")]
    pub sigma: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub it_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag_t: Option<String>,
}

impl CharFnJson {
    pub fn from_cf(cf: &CharFn) -> Self {
        let it_form = cf.beta().to_string().replace('x', "s");
        CharFnJson {
            dim: cf.dim(),
            beta: cf.beta().to_term_list(),
            sigma: linalg::to_rows(cf.sigma()),
            b: cf.shift().to_vec(),
            it_form: Some(format!("{it_form}  (s = i*t)")),
            real_t: Some(cf.real_t_polynomial().to_string().replace('x', "t")),
            imag_t: Some(cf.imag_t_polynomial().to_string().replace('x', "t")),
        }
    }

    pub fn to_cf(&self) -> Result<CharFn> {
        let beta = Polynomial::from_term_list(self.dim, &self.beta)?;
        CharFn::new(beta, linalg::from_rows(&self.sigma)?, self.b.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaussianJson {
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

impl GaussianJson {
    pub fn from_factor(g: &GaussianFactor) -> Self {
        GaussianJson {
            mean: g.mean.clone(),
            cov: linalg::to_rows(&g.cov),
        }
    }

    pub fn to_factor(&self) -> Result<GaussianFactor> {
        Ok(GaussianFactor {
            mean: self.mean.clone(),
            cov: linalg::from_rows(&self.cov)?,
        })
    }
}

/// Either side of a convolution check.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorJson {
    Pnd(PndJson),
    Gaussian(GaussianJson),
}

impl FactorJson {
    pub fn to_factor(&self, cfg: &SearchConfig) -> Result<Factor> {
        Ok(match self {
            FactorJson::Pnd(p) => Factor::Pnd(p.to_pnd(cfg)?),
            FactorJson::Gaussian(g) => Factor::Gaussian(g.to_factor()?),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionJson {
    pub theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_floor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_label: Option<String>,
    #[serde(rename = "factor_Y")]
    pub factor_y: PndJson,
    #[serde(rename = "factor_Z")]
    pub factor_z: GaussianJson,
    pub p_theta_whitened: Polynomial,
    pub min_p_theta: f64,
    pub cf_error: f64,
    pub conv_error: Option<f64>,
    pub diagnosis: Diagnosis,
}

impl DecompositionJson {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        DecompositionJson {
            theta: d.theta,
            theta_floor: d.theta_floor,
            theta_label: d.theta_floor.map(|_| THETA_LABEL.to_string()),
            factor_y: PndJson::from_pnd(&d.factor_y),
            factor_z: GaussianJson::from_factor(&d.factor_z),
            p_theta_whitened: d.p_theta.clone(),
            min_p_theta: d.min_p_theta,
            cf_error: d.cf_error,
            conv_error: d.conv_error,
            diagnosis: d.diagnosis.clone(),
        }
    }
}
