//! Gaussian quadrature rules from the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of a one-dimensional rule.
#[derive(Clone, Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn golub_welsch(n: usize, off_diag: impl Fn(usize) -> f64, mu0: f64) -> Rule {
    assert!(n > 0, "quadrature order must be positive");
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = off_diag(k);
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss–Hermite rule for the weight `e^{-x²}`; exact for polynomials of degree `< 2n`.
pub fn gauss_hermite(n: usize) -> Rule {
    golub_welsch(n, |k| (k as f64 / 2.0).sqrt(), std::f64::consts::PI.sqrt())
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Rule {
    golub_welsch(
        n,
        |k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        },
        2.0,
    )
}

/// `E[f(U)]` for `U ~ N(0, I_d)` by a tensor Gauss–Hermite rule of order `n` per axis.
pub fn standard_normal_expectation<F>(dim: usize, n: usize, mut f: F) -> f64
where
    F: FnMut(&[f64]) -> f64,
{
    let rule = gauss_hermite(n);
    let nodes: Vec<f64> = rule
        .nodes
        .iter()
        .map(|x| x * std::f64::consts::SQRT_2)
        .collect();
    let weights: Vec<f64> = rule
        .weights
        .iter()
        .map(|w| w / std::f64::consts::PI.sqrt())
        .collect();
    tensor_sum(dim, &nodes, &weights, &mut f)
}

/// `∫_{[lo,hi]^d} f` by a tensor Gauss–Legendre rule of order `n` per axis.
pub fn box_integral<F>(lo: &[f64], hi: &[f64], n: usize, mut f: F) -> f64
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = lo.len();
    let rule = gauss_legendre(n);
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for j in 0..dim {
            let half = 0.5 * (hi[j] - lo[j]);
            x[j] = lo[j] + half * (rule.nodes[idx[j]] + 1.0);
            w *= half * rule.weights[idx[j]];
        }
        total += w * f(&x);
        if !advance(&mut idx, n) {
            break;
        }
    }
    total
}

fn tensor_sum<F>(dim: usize, nodes: &[f64], weights: &[f64], f: &mut F) -> f64
where
    F: FnMut(&[f64]) -> f64,
{
    let n = nodes.len();
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for j in 0..dim {
            x[j] = nodes[idx[j]];
            w *= weights[idx[j]];
        }
        total += w * f(&x);
        if !advance(&mut idx, n) {
            break;
        }
    }
    total
}

/// Odometer increment over `{0..n}^d`; false once wrapped.
pub(crate) fn advance(idx: &mut [usize], n: usize) -> bool {
    for i in idx.iter_mut().rev() {
        *i += 1;
        if *i < n {
            return true;
        }
        *i = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        // E[U^k] for standard normal: 1, 0, 1, 0, 3, 0, 15
        let want = [1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0];
        for (k, w) in want.iter().enumerate() {
            let m = standard_normal_expectation(1, 12, |x| x[0].powi(k as i32));
            assert!((m - w).abs() < 1e-11, "k={k}: {m}");
        }
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let v = box_integral(&[0.0, -1.0], &[2.0, 3.0], 6, |x| x[0] * x[0] * x[1]);
        // ∫_0^2 x² dx · ∫_{-1}^3 y dy = 8/3 · 4
        assert!((v - 32.0 / 3.0).abs() < 1e-12);
        let r = gauss_legendre(5);
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn high_order_rule_is_accurate() {
        let r = gauss_hermite(80);
        let s: f64 = r.weights.iter().sum();
        assert!((s - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let m = standard_normal_expectation(1, 80, |x| (0.7 * x[0]).cos());
        assert!((m - (-0.245f64).exp()).abs() < 1e-12);
    }
}
