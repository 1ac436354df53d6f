//! Command implementations behind the `pnd` binary.
//!
//! Each command takes JSON text and returns an [`Outcome`]: an exit code, a
//! JSON document and optionally CSV. Exit codes: 0 ok, 1 parse or input
//! error, 2 invalid density, 3 real zero, 4 leading-coefficient conditions fail.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::charfn::{forward_cf, inverse_cf};
use crate::decompose::{decompose_diagnosed, precheck, DecomposeConfig, Verdict};
use crate::error::{Error, Result};
use crate::io::{CharFnJson, DecompositionJson, FactorJson, PndJson};
use crate::pnd::Pnd;
use crate::polyalg::Polynomial;
use crate::search::SearchConfig;
use crate::verify::{
    biquadratic_factor_probe, convolution_check, curve_csv, example4_b, example4_b_corrected,
    example4_negative_witness, extract_n2_coefficient, grid_points, Example4Params,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVALID_DENSITY: i32 = 2;
pub const EXIT_REAL_ZERO: i32 = 3;
pub const EXIT_CONDITION: i32 = 4;

/// Tolerances and plumbing shared by all commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Bisection tolerance on θ.
    pub tol: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub quadrature_order: Option<usize>,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-6,
            seed: 0,
            out: None,
            quadrature_order: None,
            verbosity: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 0.5) {
            return Err(Error::InvalidInput(format!(
                "--tol must lie in (0, 0.5), got {}",
                self.tol
            )));
        }
        if self.quadrature_order == Some(0) {
            return Err(Error::InvalidInput(
                "--quadrature-order must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            seed: self.seed,
            ..SearchConfig::default()
        }
    }

    fn decompose(&self) -> DecomposeConfig {
        DecomposeConfig {
            search: self.search(),
            tol: self.tol,
            check_convolution: true,
            quadrature_order: self.quadrature_order,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    pub csv: Option<String>,
}

impl Outcome {
    fn ok<T: Serialize>(doc: &T) -> Outcome {
        Outcome {
            code: EXIT_OK,
            json: serde_json::to_value(doc).expect("serializable document"),
            csv: None,
        }
    }

    fn with_code(code: i32, json: Value) -> Outcome {
        Outcome {
            code,
            json,
            csv: None,
        }
    }

    /// Pretty JSON followed by a newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("serializable document");
        s.push('\n');
        s
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DimensionMismatch { .. }
        | Error::NotSymmetric(_)
        | Error::NotPositiveDefinite
        | Error::Singular
        | Error::OddDegree(_)
        | Error::NegativeDensity { .. }
        | Error::ZeroIntegral(_)
        | Error::ThetaInadmissible { .. }
        | Error::NoAdmissibleTheta(_) => EXIT_INVALID_DENSITY,
        Error::ConditionFailed | Error::DegenerateLeadingForm(_) => EXIT_CONDITION,
        _ => EXIT_INPUT,
    }
}

/// Error document with the matching exit code.
pub fn error_outcome(e: &Error) -> Outcome {
    let mut doc = json!({ "error": e.to_string() });
    if let Error::NegativeDensity { point, value } = e {
        doc["witness"] = json!({ "point": point, "value": value });
    }
    Outcome::with_code(exit_code(e), doc)
}

fn run(f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    f().unwrap_or_else(|e| error_outcome(&e))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

fn load_pnd(text: &str, cfg: &RunConfig) -> Result<Pnd> {
    parse::<PndJson>(text)?.to_pnd(&cfg.search())
}

/// Normalization, quadrature check and nonnegativity scan.
pub fn cmd_validate(input: &str, cfg: &RunConfig) -> Outcome {
    run(|| {
        cfg.validate()?;
        let pnd = load_pnd(input, cfg)?;
        let order = cfg
            .quadrature_order
            .unwrap_or(pnd.poly().degree() as usize + 20);
        let min = pnd.find_min_poly(&cfg.search());
        Ok(Outcome::ok(&json!({
            "valid": true,
            "norm_const": pnd.norm_const(),
            "integral": pnd.integral(order),
            "quadrature_order": order,
            "min_poly": {
                "point": min.point,
                "value": min.value,
                "attained": min.attained,
                "radius": min.radius,
            },
        })))
    })
}

pub fn cmd_charfn(input: &str, cfg: &RunConfig) -> Outcome {
    run(|| {
        cfg.validate()?;
        let pnd = load_pnd(input, cfg)?;
        Ok(Outcome::ok(&CharFnJson::from_cf(&forward_cf(&pnd))))
    })
}

pub fn cmd_invcharfn(input: &str, cfg: &RunConfig) -> Outcome {
    run(|| {
        cfg.validate()?;
        let cf = parse::<CharFnJson>(input)?.to_cf()?;
        Ok(Outcome::ok(&PndJson::from_pnd(&inverse_cf(&cf)?)))
    })
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Eligible => EXIT_OK,
        Verdict::HasRealZero => EXIT_REAL_ZERO,
        Verdict::FailsCondition337 | Verdict::DegenerateLeadingForm => EXIT_CONDITION,
    }
}

pub fn cmd_diagnose(input: &str, cfg: &RunConfig) -> Outcome {
    run(|| {
        cfg.validate()?;
        let pnd = load_pnd(input, cfg)?;
        let d = precheck(&pnd, &cfg.search())?;
        let code = verdict_code(d.verdict);
        Ok(Outcome::with_code(code, serde_json::to_value(&d)?))
    })
}

const NO_SPLIT_EXPLANATION: &str = "absence of real zeros is necessary for a normal factor but not sufficient \
     when d > 1: the density proportional to ((x1*x2 - 1)^2 + x2^2) exp(-|x|^2/2) has no zeros, fails this \
     condition, and admits no nontrivial factorization (see the example4 command)";

pub fn cmd_decompose(input: &str, theta: Option<f64>, cfg: &RunConfig) -> Outcome {
    run(|| {
        cfg.validate()?;
        let pnd = load_pnd(input, cfg)?;
        let dcfg = cfg.decompose();
        let diagnosis = precheck(&pnd, &dcfg.search)?;
        if diagnosis.verdict != Verdict::Eligible {
            let code = verdict_code(diagnosis.verdict);
            let mut doc = json!({
                "decomposed": false,
                "diagnosis": diagnosis,
            });
            if code == EXIT_CONDITION {
                doc["explanation"] = json!(NO_SPLIT_EXPLANATION);
            }
            return Ok(Outcome::with_code(code, doc));
        }
        let dec = decompose_diagnosed(&pnd, diagnosis, theta, &dcfg)?;
        Ok(Outcome::ok(&DecompositionJson::from_decomposition(&dec)))
    })
}

/// Compares `f` with `y * z` on `n` points per axis over `b ± 4`.
pub fn cmd_verify_conv(
    f: &str,
    y: &str,
    z: &str,
    points_per_axis: usize,
    cfg: &RunConfig,
) -> Outcome {
    run(|| {
        cfg.validate()?;
        let search = cfg.search();
        let f = load_pnd(f, cfg)?;
        let y = parse::<FactorJson>(y)?.to_factor(&search)?;
        let z = parse::<FactorJson>(z)?.to_factor(&search)?;
        let grid = grid_points(f.shift(), 4.0, points_per_axis.max(1));
        let r = convolution_check(&f, &y, &z, &grid, cfg.quadrature_order)?;
        Ok(Outcome::ok(&r))
    })
}

pub fn cmd_example4(a11: f64, a12: f64, a22: f64, n_max: usize, cfg: &RunConfig) -> Outcome {
    run(|| {
        cfg.validate()?;
        let params = Example4Params::new(a11, a12, a22)?;
        let (b_printed, b_recomputed, b_extracted) = if a12 != 0.0 {
            (
                Some(example4_b(&params)?),
                Some(example4_b_corrected(&params)?),
                Some(extract_n2_coefficient(&params)?),
            )
        } else {
            (None, None, None)
        };
        let (p1, _) = crate::verify::candidate_polynomial(&params);
        let witness = example4_negative_witness(&params, n_max);
        let mut doc = json!({
            "params": params,
            "B_closed_form": b_printed,
            "B_recomputed": b_recomputed,
            "B_extracted": b_extracted,
            "candidate_polynomial": p1,
            "candidate_polynomial_text": p1.to_string(),
        });
        let code = match &witness {
            Ok(w) => {
                doc["witness"] = serde_json::to_value(w)?;
                doc["conclusion"] = json!(
                    "the candidate factor's inverse transform is negative at the witness, \
                     so it is not a characteristic function"
                );
                EXIT_OK
            }
            Err(e) => {
                doc["witness_error"] = json!(e.to_string());
                exit_code(e)
            }
        };
        let csv = curve_csv(&params, n_max.clamp(2, 10), 20)?;
        Ok(Outcome {
            code,
            json: doc,
            csv: Some(csv),
        })
    })
}

pub fn cmd_probe(poly: &str, starts: usize, cfg: &RunConfig) -> Outcome {
    run(|| {
        cfg.validate()?;
        let p: Polynomial = parse(poly)?;
        let r = biquadratic_factor_probe(&p, starts, cfg.seed)?;
        let verdict = if r.residual <= 1e-8 {
            "factorization found"
        } else {
            "no factorization found; evidence, not proof, that none exists"
        };
        let mut doc = serde_json::to_value(&r)?;
        doc["verdict"] = json!(verdict);
        doc["factors_text"] = json!([r.factors[0].to_string(), r.factors[1].to_string()]);
        Ok(Outcome::with_code(EXIT_OK, doc))
    })
}
