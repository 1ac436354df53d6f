//! Multi-start minimization of polynomials over expanding boxes.
//!
//! Each local run is a damped Newton iteration with exact derivatives,
//! restricted to the current box by freezing coordinates pinned at a bound.
//! The result is a numerical witness, not a certificate.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::polyalg::Polynomial;

/// Budget for [`minimize_polynomial`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Half-width of the first box.
    pub initial_radius: f64,
    /// Number of times the box is doubled after the first one.
    pub doublings: usize,
    /// Uniform random starts per box, on top of the `2d + 1` structured ones.
    pub random_starts: usize,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            initial_radius: 1.0,
            doublings: 6,
            random_starts: 8,
            seed: 0,
            max_iter: 200,
        }
    }
}

/// Best point found by a search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinResult {
    pub point: Vec<f64>,
    pub value: f64,
    /// False when the running minimum still sits on the boundary of the
    /// largest box or keeps improving as the box grows.
    pub attained: bool,
    /// Half-width of the largest box searched.
    pub radius: f64,
    /// Best value after each box.
    pub trace: Vec<f64>,
}

/// A polynomial with its gradient and Hessian polynomials.
pub(crate) struct PolyObjective {
    f: Polynomial,
    grad: Vec<Polynomial>,
    hess: Vec<Vec<Polynomial>>,
}

impl PolyObjective {
    pub(crate) fn new(f: &Polynomial) -> Self {
        let d = f.dim();
        let grad: Vec<Polynomial> = (0..d).map(|j| f.derivative(j)).collect();
        let hess = (0..d)
            .map(|i| (0..d).map(|j| grad[i].derivative(j)).collect())
            .collect();
        PolyObjective {
            f: f.clone(),
            grad,
            hess,
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.f.eval_unchecked(x)
    }

    /// Damped Newton descent from `x0` inside `[lo, hi]`.
    pub(crate) fn local_min(
        &self,
        x0: &[f64],
        lo: &[f64],
        hi: &[f64],
        max_iter: usize,
    ) -> (Vec<f64>, f64) {
        let d = x0.len();
        let mut x: Vec<f64> = (0..d).map(|j| x0[j].clamp(lo[j], hi[j])).collect();
        let mut f = self.value(&x);
        let mut lambda = 1e-8;
        let mut stalls = 0;
        for _ in 0..max_iter {
            let g: Vec<f64> = self.grad.iter().map(|p| p.eval_unchecked(&x)).collect();
            let free: Vec<usize> = (0..d)
                .filter(|&j| !((x[j] <= lo[j] && g[j] > 0.0) || (x[j] >= hi[j] && g[j] < 0.0)))
                .collect();
            if free.is_empty() || free.iter().all(|&j| g[j] == 0.0) {
                break;
            }
            let n = free.len();
            let h = DMatrix::from_fn(n, n, |a, b| self.hess[free[a]][free[b]].eval_unchecked(&x));
            let gf = DVector::from_fn(n, |a, _| g[free[a]]);
            let scale = 1.0 + (0..n).fold(0.0f64, |m, a| m.max(h[(a, a)].abs()));
            let mut accepted = None;
            while lambda < 1e20 {
                let damped = &h + DMatrix::identity(n, n) * (lambda * scale);
                if let Some(ch) = damped.cholesky() {
                    let step = ch.solve(&(-&gf));
                    let mut xn = x.clone();
                    for (a, &j) in free.iter().enumerate() {
                        xn[j] = (x[j] + step[a]).clamp(lo[j], hi[j]);
                    }
                    let fnew = self.value(&xn);
                    if fnew < f {
                        accepted = Some((xn, fnew));
                        break;
                    }
                }
                lambda *= 10.0;
            }
            match accepted {
                Some((xn, fnew)) => {
                    let gain = f - fnew;
                    x = xn;
                    f = fnew;
                    lambda = (lambda / 10.0).max(1e-15);
                    if gain <= 1e-15 * f.abs().max(1e-300) {
                        stalls += 1;
                        if stalls >= 3 {
                            break;
                        }
                    } else {
                        stalls = 0;
                    }
                }
                None => break,
            }
        }
        (x, f)
    }
}

/// Multi-start minimization of `p` over boxes centred at `center` with
/// half-widths `r₀, 2r₀, …, 2^k r₀`.
pub fn minimize_polynomial_from(p: &Polynomial, center: &[f64], cfg: &SearchConfig) -> MinResult {
    let d = p.dim();
    let obj = PolyObjective::new(p);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut trace = Vec::with_capacity(cfg.doublings + 1);
    let mut radius = cfg.initial_radius;
    for level in 0..=cfg.doublings {
        radius = cfg.initial_radius * 2f64.powi(level as i32);
        let lo: Vec<f64> = center.iter().map(|c| c - radius).collect();
        let hi: Vec<f64> = center.iter().map(|c| c + radius).collect();
        let mut starts = vec![center.to_vec()];
        for j in 0..d {
            for s in [-0.5, 0.5] {
                let mut x = center.to_vec();
                x[j] += s * radius;
                starts.push(x);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(
            cfg.seed
                .wrapping_mul(0x9E37_79B9)
                .wrapping_add(level as u64),
        );
        for _ in 0..cfg.random_starts {
            starts.push((0..d).map(|j| rng.random_range(lo[j]..=hi[j])).collect());
        }
        if let Some((x, _)) = &best {
            starts.push(x.clone());
        }
        for s in &starts {
            let (x, f) = obj.local_min(s, &lo, &hi, cfg.max_iter);
            if best.as_ref().is_none_or(|(_, bf)| f < *bf) {
                best = Some((x, f));
            }
        }
        trace.push(best.as_ref().map_or(f64::INFINITY, |b| b.1));
    }
    let (point, value) = best.unwrap_or_else(|| (center.to_vec(), p.eval_unchecked(center)));
    let interior = point
        .iter()
        .zip(center)
        .all(|(x, c)| (x - c).abs() < radius * (1.0 - 1e-9));
    let stable = match trace.len() {
        n if n >= 2 => trace[n - 2] - trace[n - 1] <= 1e-10 * trace[n - 1].abs() + 1e-14,
        _ => true,
    };
    MinResult {
        point,
        value,
        attained: interior && stable,
        radius,
        trace,
    }
}

/// [`minimize_polynomial_from`] centred at the origin.
pub fn minimize_polynomial(p: &Polynomial, cfg: &SearchConfig) -> MinResult {
    minimize_polynomial_from(p, &vec![0.0; p.dim()], cfg)
}

/// Derivative-free compass search; `project` maps trial points back to the feasible set.
pub(crate) fn compass_minimize<F, P>(
    f: F,
    x0: &[f64],
    step: f64,
    min_step: f64,
    project: P,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&mut Vec<f64>),
{
    let mut x = x0.to_vec();
    project(&mut x);
    let mut fx = f(&x);
    let mut h = step;
    let mut evals = 0usize;
    while h > min_step && evals < 200_000 {
        let mut improved = false;
        for j in 0..x.len() {
            for s in [-1.0, 1.0] {
                let mut y = x.clone();
                y[j] += s * h;
                project(&mut y);
                let fy = f(&y);
                evals += 1;
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (x, fx)
}
