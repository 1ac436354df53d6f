use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent vector `α = (α₁, …, α_d)` of a monomial `x^α`.
///
/// Ordering is graded lexicographic: lower total degree first, and within a
/// degree the larger exponent of `x₁` (then `x₂`, …) comes first, so
/// `x₁² < x₁x₂ < x₂²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// `r·e_j`, the exponent of `x_j^r`.
    pub fn axis(dim: usize, j: usize, r: u32) -> Self {
        let mut e = vec![0; dim];
        e[j] = r;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise sum (exponent of a product of monomials).
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Whether the monomial is a product of even powers (nonnegative on R^d).
    pub fn all_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }

    /// `x^α` evaluated at `x`.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&a, &xi)| xi.powi(a as i32))
            .product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Every multi-index of dimension `dim` with `|α| ≤ max_degree`, in graded order.
pub fn all_up_to(dim: usize, max_degree: u32) -> Vec<MultiIndex> {
    fn rec(dim: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if cur.len() == dim {
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(dim, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, max_degree, &mut Vec::with_capacity(dim), &mut out);
    out.sort();
    out
}

/// Number of multi-indices with `|α| ≤ max_degree` in `dim` variables, `C(max_degree + dim, dim)`.
pub fn count_up_to(dim: usize, max_degree: u32) -> u64 {
    let n = max_degree as u64 + dim as u64;
    let k = dim as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
