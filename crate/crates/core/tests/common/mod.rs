#![allow(dead_code)]

use nalgebra::DMatrix;
use polynormal::polyalg::{all_up_to, Polynomial};
use polynormal::{Pnd, QuadForm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn poly(dim: usize, terms: &[(&[u32], f64)]) -> Polynomial {
    Polynomial::from_terms(dim, terms.iter().map(|(a, c)| (a.to_vec(), *c))).unwrap()
}

pub fn example4_poly() -> Polynomial {
    poly(
        2,
        &[
            (&[2, 2], 1.0),
            (&[1, 1], -2.0),
            (&[0, 0], 1.0),
            (&[0, 2], 1.0),
        ],
    )
}

/// Dense polynomial with every coefficient of degree ≤ `deg` uniform in `[-r, r]`.
pub fn random_poly(rng: &mut ChaCha8Rng, dim: usize, deg: u32, r: f64) -> Polynomial {
    let terms: Vec<(Vec<u32>, f64)> = all_up_to(dim, deg)
        .into_iter()
        .map(|a| (a.entries().to_vec(), rng.random_range(-r..=r)))
        .collect();
    Polynomial::from_terms(dim, terms).unwrap()
}

/// `s² + t² + c` with `deg s, deg t ≤ half_deg`, nonnegative by construction.
pub fn random_nonnegative(rng: &mut ChaCha8Rng, dim: usize, half_deg: u32) -> Polynomial {
    let s = random_poly(rng, dim, half_deg, 1.0);
    let t = random_poly(rng, dim, half_deg, 1.0);
    let c = rng.random_range(0.1..1.0);
    &(&(&s * &s) + &(&t * &t)) + &Polynomial::constant(dim, c)
}

/// `M Mᵀ + δI` with entries of `M` uniform in `[-1, 1]`.
pub fn random_spd(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    let a = &m * m.transpose() + DMatrix::identity(dim, dim) * rng.random_range(0.3..1.0);
    (&a + a.transpose()) * 0.5
}

pub fn random_vec(rng: &mut ChaCha8Rng, dim: usize, r: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-r..=r)).collect()
}

pub fn random_pnd(rng: &mut ChaCha8Rng, dim: usize, half_deg: u32) -> Pnd {
    let p = random_nonnegative(rng, dim, half_deg);
    let a = QuadForm::new(random_spd(rng, dim)).unwrap();
    Pnd::new(p, a, random_vec(rng, dim, 1.0)).unwrap()
}

/// `Σ_k (l_k·x)^{2m}` over `dim + 1` random directions: positive definite.
pub fn definite_top_form(rng: &mut ChaCha8Rng, dim: usize, two_m: u32) -> Polynomial {
    let mut top = Polynomial::zero(dim);
    for _ in 0..=dim {
        let mut l = Polynomial::zero(dim);
        for j in 0..dim {
            l = &l + &Polynomial::variable(dim, j).scale(rng.random_range(-1.0..1.0));
        }
        top = &top + &l.pow(two_m);
    }
    let mut axis = Polynomial::zero(dim);
    for j in 0..dim {
        axis = &axis + &Polynomial::variable(dim, j).pow(two_m).scale(0.1);
    }
    &top + &axis
}

/// Positive polynomial with positive-definite top form and every axis coefficient positive.
pub fn random_eligible(rng: &mut ChaCha8Rng, dim: usize, two_m: u32) -> Polynomial {
    let top = definite_top_form(rng, dim, two_m);
    let s = random_poly(rng, dim, two_m / 2 - 1, 0.5);
    &(&top + &(&s * &s)) + &Polynomial::constant(dim, rng.random_range(0.2..1.0))
}

/// Random `F = Q·diag(s)` with orthogonal `Q` and singular values in `[1, 10)` scaled by a common factor.
pub fn random_well_conditioned(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    let q = g.qr().q();
    let scale = rng.random_range(0.3..2.0);
    let s = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |_, _| {
        scale * rng.random_range(1.0..9.9)
    }));
    let h = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    let r = h.qr().q();
    q * s * r
}

pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    sv.max() / sv.min()
}

/// Rejection-sampled parameters with both covariance matrices positive definite and `a₁₂ ≠ 0`.
pub fn random_example4_params(rng: &mut ChaCha8Rng) -> polynormal::verify::Example4Params {
    loop {
        let a11 = rng.random_range(0.01..0.99);
        let a22 = rng.random_range(0.01..0.99);
        let a12 = rng.random_range(-0.99..0.99);
        if a12 == 0.0 {
            continue;
        }
        if let Ok(p) = polynormal::verify::Example4Params::new(a11, a12, a22) {
            return p;
        }
    }
}
