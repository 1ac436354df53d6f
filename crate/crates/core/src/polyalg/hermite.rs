//! Probabilists' Hermite polynomials `He_k` (weight `e^{-x²/2}`) and the
//! change of basis between monomials and tensor-product Hermite polynomials.
//!
//! Conversion uses exact one-dimensional tables built from the three-term
//! recurrence and extends them coordinate by coordinate; no quadrature is
//! involved.

use std::collections::BTreeMap;

use super::multiindex::MultiIndex;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// `He_k(x)` via `He_{k+1}(x) = x He_k(x) − k He_{k−1}(x)`.
pub fn hermite_1d(k: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if k == 0 {
        return prev;
    }
    for n in 1..k {
        let next = x * cur - n as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Row `k` holds the monomial coefficients of `He_k`: `He_k(x) = Σ_i row[i] x^i`.
fn hermite_to_monomial_table(max: u32) -> Vec<Vec<f64>> {
    let max = max as usize;
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
    if max >= 1 {
        rows.push(vec![0.0, 1.0]);
    }
    for k in 1..max {
        let mut next = vec![0.0; k + 2];
        for (i, &c) in rows[k].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in rows[k - 1].iter().enumerate() {
            next[i] -= k as f64 * c;
        }
        rows.push(next);
    }
    rows
}

/// Row `n` holds the Hermite coefficients of `x^n`: `x^n = Σ_k row[k] He_k(x)`,
/// from `x He_k = He_{k+1} + k He_{k−1}`.
fn monomial_to_hermite_table(max: u32) -> Vec<Vec<f64>> {
    let max = max as usize;
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
    for n in 0..max {
        let mut next = vec![0.0; n + 2];
        for (k, &c) in rows[n].iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            next[k + 1] += c;
            if k > 0 {
                next[k - 1] += k as f64 * c;
            }
        }
        rows.push(next);
    }
    rows
}

/// Expands `coef · Π_j (Σ_k table_j[α_j][k] y_j^k)` into `out`.
fn tensor_expand<F>(alpha: &MultiIndex, coef: f64, row: F, out: &mut BTreeMap<MultiIndex, f64>)
where
    F: Fn(usize, u32) -> Vec<(u32, f64)>,
{
    let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::with_capacity(alpha.dim()), coef)];
    for (j, &a) in alpha.entries().iter().enumerate() {
        let factors = row(j, a);
        let mut next = Vec::with_capacity(partial.len() * factors.len());
        for (idx, c) in &partial {
            for &(k, f) in &factors {
                let mut e = idx.clone();
                e.push(k);
                next.push((e, c * f));
            }
        }
        partial = next;
    }
    for (e, c) in partial {
        *out.entry(MultiIndex::new(e)).or_insert(0.0) += c;
    }
}

fn nonzero_row(row: &[f64]) -> Vec<(u32, f64)> {
    row.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0.0)
        .map(|(k, &c)| (k as u32, c))
        .collect()
}

/// Coefficients `β_α` of a polynomial in the tensor Hermite basis,
/// `p(x) = Σ β_α Π_j He_{α_j}(x_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteCoeffs(Polynomial);

impl HermiteCoeffs {
    pub fn from_terms<I, A>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, f64)>,
        A: Into<MultiIndex>,
    {
        Polynomial::from_terms(dim, terms).map(HermiteCoeffs)
    }

    /// Reinterprets the coefficient map of `p` as Hermite coefficients.
    pub fn from_coefficient_map(p: Polynomial) -> Self {
        HermiteCoeffs(p)
    }

    /// The coefficient map viewed as a polynomial in formal variables
    /// (`β_α` becomes the coefficient of `s^α`).
    pub fn as_coefficient_map(&self) -> &Polynomial {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn degree(&self) -> u32 {
        self.0.degree()
    }

    pub fn get(&self, alpha: &MultiIndex) -> f64 {
        self.0.coeff(alpha)
    }

    pub fn get_of(&self, alpha: &[u32]) -> f64 {
        self.0.coeff_of(alpha)
    }

    /// `β₀`, the only coefficient surviving integration against the standard Gaussian.
    pub fn constant(&self) -> f64 {
        self.0.constant_term()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.0.terms()
    }

    pub fn scale(&self, s: f64) -> HermiteCoeffs {
        HermiteCoeffs(self.0.scale(s))
    }

    pub fn max_abs_diff(&self, other: &HermiteCoeffs) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    /// Evaluates `Σ β_α Π_j He_{α_j}(x_j)` directly.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.iter()
            .map(|(alpha, c)| {
                alpha
                    .entries()
                    .iter()
                    .zip(x)
                    .fold(c, |acc, (&a, &xi)| acc * hermite_1d(a, xi))
            })
            .sum()
    }
}

/// Monomial basis to Hermite basis.
pub fn to_hermite(p: &Polynomial) -> HermiteCoeffs {
    let table = monomial_to_hermite_table(p.degree());
    let rows: Vec<Vec<(u32, f64)>> = table.iter().map(|r| nonzero_row(r)).collect();
    let mut out = BTreeMap::new();
    for (alpha, c) in p.terms() {
        tensor_expand(alpha, c, |_, a| rows[a as usize].clone(), &mut out);
    }
    HermiteCoeffs(Polynomial::from_map(p.dim(), out))
}

/// Hermite basis to monomial basis.
pub fn from_hermite(h: &HermiteCoeffs) -> Polynomial {
    let table = hermite_to_monomial_table(h.degree());
    let rows: Vec<Vec<(u32, f64)>> = table.iter().map(|r| nonzero_row(r)).collect();
    let mut out = BTreeMap::new();
    for (alpha, c) in h.iter() {
        tensor_expand(alpha, c, |_, a| rows[a as usize].clone(), &mut out);
    }
    Polynomial::from_map(h.dim(), out)
}

/// `p_θ(x) = Σ β_α θ^{−|α|} Π_j He_{α_j}(x_j / θ)` expanded in monomials.
pub fn theta_rescale(h: &HermiteCoeffs, theta: f64) -> Result<Polynomial> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let table = hermite_to_monomial_table(h.degree());
    // He_k(x/θ)/θ^k = Σ_i c_{k,i} θ^{−(i+k)} x^i
    let rows: Vec<Vec<(u32, f64)>> = table
        .iter()
        .enumerate()
        .map(|(k, r)| {
            nonzero_row(r)
                .into_iter()
                .map(|(i, c)| (i, c * theta.powi(-((i as usize + k) as i32))))
                .collect()
        })
        .collect();
    let mut out = BTreeMap::new();
    for (alpha, c) in h.iter() {
        tensor_expand(alpha, c, |_, a| rows[a as usize].clone(), &mut out);
    }
    Ok(Polynomial::from_map(h.dim(), out))
}
