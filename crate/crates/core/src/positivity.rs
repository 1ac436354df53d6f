//! Leading-coefficient conditions, ratio infima and the perturbation radius ε.
//!
//! For `Q` of degree `2m` the quantities are
//! `inf_b = inf Q(x)/(1 + Σ|x_j|^{2m})` and the lower bound
//! `inf_a ≥ inf_b/((1+E)(1+d)^{2m})` on `inf Q(x)/(1 + Σ_{|α|≤2m}|x^α|)`,
//! where `E` counts the multi-indices with `|α| ≤ 2m`. Every perturbation
//! with coefficients closer than `inf_a` to those of `Q` stays positive.
//!
//! Only the axis coefficients of `x_j^{2m}` enter the classical condition.
//! A top-degree form can have positive axis coefficients and still vanish on
//! some direction (e.g. `(x₁−x₂)²(x₁+x₂)²/4`), so the minimum `μ` of
//! `Q_{2m}(x)/Σx_j^{2m}` over the sphere is computed as well and must be
//! positive for the bounds below to hold.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{count_up_to, MultiIndex, Polynomial};
use crate::search::compass_minimize;

/// Axis coefficients at or below this count as zero.
pub const LEADING_TOL: f64 = 1e-12;

/// Fraction of the lower bound used as ε.
pub const EPSILON_SAFETY: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub degree: u32,
    pub condition337: bool,
    pub leading_coeffs: Vec<f64>,
    /// `μ = min_{|x|=1} Q_{2m}(x)/Σx_j^{2m}`.
    pub leading_form_min: f64,
    pub inf_b: f64,
    pub inf_a_lower: f64,
    pub epsilon: f64,
    pub search_radius: f64,
    pub index_count: u64,
}

fn even_degree(p: &Polynomial) -> Result<u32> {
    let deg = p.degree();
    if deg % 2 == 1 {
        return Err(Error::OddDegree(deg));
    }
    Ok(deg)
}

/// Coefficients of `x_j^{2m}`, `j = 1..d`.
pub fn leading_axis_coeffs(p: &Polynomial) -> Result<Vec<f64>> {
    let deg = even_degree(p)?;
    Ok((0..p.dim())
        .map(|j| p.coeff(&MultiIndex::axis(p.dim(), j, deg)))
        .collect())
}

/// All axis coefficients strictly positive.
pub fn check_condition_337(p: &Polynomial) -> Result<bool> {
    Ok(leading_axis_coeffs(p)?.iter().all(|&c| c > LEADING_TOL))
}

/// Deterministic unit vectors covering the sphere (half of it when `d = 2`).
fn sphere_directions(d: usize, seed: u64) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..720)
            .map(|k| {
                let a = k as f64 * std::f64::consts::PI / 720.0;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let mut out = Vec::new();
            for j in 0..d {
                let mut e = vec![0.0; d];
                e[j] = 1.0;
                out.push(e);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while out.len() < 4000 {
                let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                let n = norm2(&v);
                if n > 1e-3 && n <= 1.0 {
                    out.push(v.iter().map(|x| x / n).collect());
                }
            }
            out
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn project_sphere(v: &mut [f64]) {
    let n = norm2(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Minimizes `f` over the sampled directions, then polishes the best few.
fn sphere_min<F: Fn(&[f64]) -> f64>(d: usize, f: F) -> (Vec<f64>, f64) {
    let mut scored: Vec<(f64, Vec<f64>)> = sphere_directions(d, 7)
        .into_iter()
        .map(|v| (f(&v), v))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = (scored[0].1.clone(), scored[0].0);
    for (_, v) in scored.iter().take(6) {
        let (x, fx) = compass_minimize(&f, v, 0.01, 1e-12, |v: &mut Vec<f64>| project_sphere(v));
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// `μ = min_{|x|=1} Q_{2m}(x)/Σx_j^{2m}`; for constants, the constant itself.
pub fn leading_form_min(p: &Polynomial) -> Result<f64> {
    let deg = even_degree(p)?;
    if deg == 0 {
        return Ok(p.constant_term());
    }
    let top = p.homogeneous_part(deg);
    let ratio =
        |x: &[f64]| top.eval_unchecked(x) / x.iter().map(|v| v.powi(deg as i32)).sum::<f64>();
    Ok(sphere_min(p.dim(), ratio).1)
}

/// Smallest `R` with `(1+d)^{2m}·Σ_{|α|<2m}|a_α|/(1+R)^{2m−|α|} ≤ μ/3`,
/// and at least `(2d^{2m−1})^{1/2m}`.
pub fn tail_radius(p: &Polynomial, mu: f64) -> f64 {
    let d = p.dim() as f64;
    let deg = p.degree();
    let lower: Vec<(u32, f64)> = p
        .terms()
        .filter(|(a, _)| a.total() < deg)
        .map(|(a, c)| (deg - a.total(), c.abs()))
        .collect();
    let scale = (1.0 + d).powi(deg as i32);
    let tail = |r: f64| {
        scale
            * lower
                .iter()
                .map(|(k, c)| c / (1.0 + r).powi(*k as i32))
                .sum::<f64>()
    };
    let target = mu / 3.0;
    let floor = (2.0 * d.powi(deg as i32 - 1)).powf(1.0 / deg as f64);
    if tail(0.0) <= target {
        return floor;
    }
    let mut hi = 1.0;
    while tail(hi) > target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi.max(floor)
}

fn grid_ball_min<F: Fn(&[f64]) -> f64>(
    d: usize,
    radius: f64,
    n: usize,
    f: &F,
) -> Vec<(f64, Vec<f64>)> {
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let h = 2.0 * radius / (n - 1) as f64;
    let mut best: Vec<(f64, Vec<f64>)> = Vec::new();
    loop {
        for j in 0..d {
            x[j] = -radius + h * idx[j] as f64;
        }
        if x.iter().map(|v| v.abs()).sum::<f64>() <= radius * (1.0 + 1e-12) {
            let v = f(&x);
            if best.len() < 5 || v < best[best.len() - 1].0 {
                best.push((v, x.clone()));
                best.sort_by(|a, b| a.0.total_cmp(&b.0));
                best.truncate(5);
            }
        }
        if !crate::quadrature::advance(&mut idx, n) {
            break;
        }
    }
    best
}

/// Estimate of `inf Q(x)/(1 + Σ|x_j|^{2m})` and the ball radius `R` it was searched on.
///
/// Inside the l¹-ball of radius `R` the ratio is minimized on refined grids
/// and polished by compass search; outside, it is sampled on shells of radius
/// `2^k R` and bounded by its limit `μ` at infinity.
pub fn estimate_inf_b(p: &Polynomial) -> Result<(f64, f64)> {
    if !check_condition_337(p)? {
        return Err(Error::ConditionFailed);
    }
    let deg = p.degree();
    let d = p.dim();
    if deg == 0 {
        return Ok((p.constant_term() / (1.0 + d as f64), 0.0));
    }
    let mu = leading_form_min(p)?;
    if mu <= LEADING_TOL {
        return Err(Error::DegenerateLeadingForm(mu));
    }
    let radius = tail_radius(p, mu);
    let ratio = |x: &[f64]| {
        p.eval_unchecked(x) / (1.0 + x.iter().map(|v| v.abs().powi(deg as i32)).sum::<f64>())
    };

    let budget = 300_000usize;
    let mut prev: Option<f64> = None;
    let mut candidates = Vec::new();
    let mut spacing = radius;
    let mut n = 17usize;
    while n.pow(d as u32) <= budget {
        candidates = grid_ball_min(d, radius, n, &ratio);
        spacing = 2.0 * radius / (n - 1) as f64;
        let m = candidates[0].0;
        if let Some(pm) = prev {
            if (pm - m).abs() <= 1e-4 * m.abs() {
                break;
            }
        }
        prev = Some(m);
        n = 2 * n - 1;
    }
    let in_ball = |x: &[f64]| {
        if x.iter().map(|v| v.abs()).sum::<f64>() <= radius {
            ratio(x)
        } else {
            f64::INFINITY
        }
    };
    let mut best = candidates[0].0;
    for (_, x) in &candidates {
        let (_, v) = compass_minimize(in_ball, x, spacing, 1e-10 * radius.max(1.0), |_| {});
        best = best.min(v);
    }
    for dir in sphere_directions(d, 11) {
        let l1: f64 = dir.iter().map(|v| v.abs()).sum();
        for k in 1..=10 {
            let r = radius * 2f64.powi(k) / l1;
            let x: Vec<f64> = dir.iter().map(|v| v * r).collect();
            best = best.min(ratio(&x));
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            best = best.min(ratio(&neg));
        }
    }
    Ok((best.min(mu), radius))
}

/// Full report with `ε = 0.9·inf_b/((1+E)(1+d)^{2m})`; `ε = 0` when the
/// leading conditions fail or the ratio infimum is not positive.
pub fn epsilon_bound(p: &Polynomial) -> Result<PositivityReport> {
    let deg = even_degree(p)?;
    let d = p.dim();
    let leading = leading_axis_coeffs(p)?;
    let condition337 = leading.iter().all(|&c| c > LEADING_TOL);
    let mu = leading_form_min(p)?;
    let index_count = count_up_to(d, deg);
    let mut report = PositivityReport {
        degree: deg,
        condition337,
        leading_coeffs: leading,
        leading_form_min: mu,
        inf_b: 0.0,
        inf_a_lower: 0.0,
        epsilon: 0.0,
        search_radius: 0.0,
        index_count,
    };
    if !condition337 || mu <= LEADING_TOL {
        return Ok(report);
    }
    let (inf_b, radius) = estimate_inf_b(p)?;
    report.search_radius = radius;
    if inf_b > 0.0 {
        report.inf_b = inf_b;
        report.inf_a_lower =
            inf_b / ((1.0 + index_count as f64) * (1.0 + d as f64).powi(deg as i32));
        report.epsilon = EPSILON_SAFETY * report.inf_a_lower;
    }
    Ok(report)
}

/// True when every coefficient of `w` (degree ≤ 2m) is within `report.epsilon` of `p`'s.
pub fn within_epsilon(p: &Polynomial, w: &Polynomial, report: &PositivityReport) -> bool {
    report.epsilon > 0.0 && w.degree() <= report.degree && p.max_abs_diff(w) < report.epsilon
}
