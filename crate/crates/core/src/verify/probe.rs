//! Multistart Levenberg–Marquardt search for `P ≈ Q₁Q₂` with `Q₁, Q₂` quadratics in two variables.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;

/// Exponents of `t₁², t₂², t₁t₂, t₁, t₂, 1`.
const QUAD: [(usize, usize); 6] = [(2, 0), (0, 2), (1, 1), (1, 0), (0, 1), (0, 0)];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeResult {
    /// Sum of squared coefficient differences of `Q₁Q₂ − P`.
    pub residual: f64,
    pub factors: [Polynomial; 2],
    pub starts: usize,
}

/// Index pairs `(i, j)` with `i + j ≤ 4`.
fn targets() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for deg in 0..=4 {
        for i in (0..=deg).rev() {
            v.push((i, deg - i));
        }
    }
    v
}

fn product(q1: &[f64], q2: &[f64]) -> [[f64; 5]; 5] {
    let mut c = [[0.0; 5]; 5];
    for (a, &(i1, j1)) in QUAD.iter().enumerate() {
        for (b, &(i2, j2)) in QUAD.iter().enumerate() {
            c[i1 + i2][j1 + j2] += q1[a] * q2[b];
        }
    }
    c
}

struct Problem {
    idx: Vec<(usize, usize)>,
    /// Row of `(i, j)` in `idx`.
    row: [[usize; 5]; 5],
    target: Vec<f64>,
}

impl Problem {
    fn new(idx: Vec<(usize, usize)>, target: Vec<f64>) -> Self {
        let mut row = [[usize::MAX; 5]; 5];
        for (r, &(i, j)) in idx.iter().enumerate() {
            row[i][j] = r;
        }
        Problem { idx, row, target }
    }

    fn residual(&self, x: &[f64]) -> DVector<f64> {
        let c = product(&x[..6], &x[6..]);
        DVector::from_iterator(
            self.idx.len(),
            self.idx
                .iter()
                .zip(&self.target)
                .map(|(&(i, j), t)| c[i][j] - t),
        )
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.idx.len(), 12);
        for (a, &(i1, j1)) in QUAD.iter().enumerate() {
            for (b, &(i2, j2)) in QUAD.iter().enumerate() {
                let r = self.row[i1 + i2][j1 + j2];
                jac[(r, a)] += x[6 + b];
                jac[(r, 6 + b)] += x[a];
            }
        }
        jac
    }

    fn solve(&self, x0: &[f64]) -> (Vec<f64>, f64) {
        let mut x = x0.to_vec();
        let mut r = self.residual(&x);
        let mut ssr = r.norm_squared();
        let mut lambda = 1e-3;
        let mut stalls = 0;
        for _ in 0..500 {
            if ssr < 1e-30 {
                break;
            }
            let j = self.jacobian(&x);
            let jt = j.transpose();
            let h = &jt * &j;
            let g = &jt * &r;
            let scale = (0..12).fold(0.0f64, |m, k| m.max(h[(k, k)]));
            let mut improved = false;
            for _ in 0..40 {
                let mut damped = h.clone();
                for k in 0..12 {
                    damped[(k, k)] += lambda * (h[(k, k)] + 1e-9 * scale + 1e-300);
                }
                if let Some(ch) = damped.cholesky() {
                    let step = ch.solve(&(-&g));
                    let xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                    let rn = self.residual(&xn);
                    let sn = rn.norm_squared();
                    if sn < ssr {
                        let gain = ssr - sn;
                        x = xn;
                        r = rn;
                        ssr = sn;
                        lambda = (lambda / 3.0).max(1e-15);
                        improved = true;
                        stalls = if gain > 1e-10 * ssr { 0 } else { stalls + 1 };
                        break;
                    }
                }
                lambda *= 4.0;
            }
            if !improved || stalls >= 10 {
                break;
            }
        }
        (x, ssr)
    }
}

fn to_poly(q: &[f64]) -> Polynomial {
    Polynomial::from_terms(
        2,
        QUAD.iter()
            .zip(q)
            .map(|(&(i, j), &c)| (vec![i as u32, j as u32], c)),
    )
    .expect("finite coefficients")
}

/// Best coefficient-space fit of `P` by a product of two quadratics over
/// `starts` seeded random initial points.
///
/// A large residual is evidence, not proof, that no such factorization exists.
pub fn biquadratic_factor_probe(p: &Polynomial, starts: usize, seed: u64) -> Result<ProbeResult> {
    if p.dim() != 2 || p.degree() > 4 {
        return Err(Error::InvalidInput(
            "probe expects a bivariate polynomial of degree at most 4".into(),
        ));
    }
    let idx = targets();
    let target = idx
        .iter()
        .map(|&(i, j)| p.coeff_of(&[i as u32, j as u32]))
        .collect();
    let prob = Problem::new(idx, target);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..starts.max(1) {
        let x0: Vec<f64> = (0..12).map(|_| rng.random_range(-2.0..2.0)).collect();
        let (x, s) = prob.solve(&x0);
        if best.as_ref().is_none_or(|b| s < b.1) {
            best = Some((x, s));
        }
    }
    let (x, residual) = best.expect("at least one start");
    Ok(ProbeResult {
        residual,
        factors: [to_poly(&x[..6]), to_poly(&x[6..])],
        starts: starts.max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(&[u32], f64)]) -> Polynomial {
        Polynomial::from_terms(2, terms.iter().map(|(a, c)| (a.to_vec(), *c))).unwrap()
    }

    #[test]
    fn factorable_inputs_are_fitted() {
        let p = poly(&[
            (&[2, 2], 1.0),
            (&[2, 0], 1.0),
            (&[0, 2], 1.0),
            (&[0, 0], 1.0),
        ]);
        let r = biquadratic_factor_probe(&p, 20, 0).unwrap();
        assert!(r.residual <= 1e-10);
        let back = r.factors[0].multiply(&r.factors[1]).unwrap();
        assert!(back.max_abs_diff(&p) < 1e-5);
        let sq = poly(&[(&[2, 2], 1.0), (&[1, 1], 2.0), (&[0, 0], 1.0)]);
        assert!(biquadratic_factor_probe(&sq, 20, 0).unwrap().residual <= 1e-10);
    }

    #[test]
    fn jacobian_matches_differences() {
        let prob = Problem::new(targets(), vec![0.0; 15]);
        let x: Vec<f64> = (0..12).map(|k| (k as f64 * 0.37).sin()).collect();
        let j = prob.jacobian(&x);
        for k in 0..12 {
            let mut xp = x.clone();
            xp[k] += 1e-6;
            let fd = (prob.residual(&xp) - prob.residual(&x)) / 1e-6;
            for r in 0..15 {
                assert!((fd[r] - j[(r, k)]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let p = Polynomial::from_terms(1, [(vec![2], 1.0)]).unwrap();
        assert!(biquadratic_factor_probe(&p, 1, 0).is_err());
    }
}
