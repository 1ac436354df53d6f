use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::multiindex::MultiIndex;
use crate::error::{check_dim, Error, Result};

/// Coefficients with absolute value below this are dropped after arithmetic.
pub const ZERO_EPS: f64 = 1e-14;

/// Sparse multivariate polynomial with real coefficients, `Σ a_α x^α`.
///
/// Terms are kept in canonical form: every stored index has length `dim`
/// and no stored coefficient is (numerically) zero. Iteration follows the
/// graded lexicographic order of [`MultiIndex`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialRepr", into = "PolynomialRepr")]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::monomial(MultiIndex::zeros(dim), c)
    }

    pub fn monomial(alpha: MultiIndex, c: f64) -> Self {
        let dim = alpha.dim();
        let mut terms = BTreeMap::new();
        if c.abs() >= ZERO_EPS {
            terms.insert(alpha, c);
        }
        Polynomial { dim, terms }
    }

    /// The coordinate function `x_j`.
    pub fn variable(dim: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::axis(dim, j, 1), 1.0)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I, A>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, f64)>,
        A: Into<MultiIndex>,
    {
        let mut map: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (alpha, c) in terms {
            let alpha = alpha.into();
            check_dim(dim, alpha.dim())?;
            if !c.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite coefficient at {alpha}"
                )));
            }
            *map.entry(alpha).or_insert(0.0) += c;
        }
        Ok(Polynomial::from_map(dim, map))
    }

    pub(crate) fn from_map(dim: usize, mut terms: BTreeMap<MultiIndex, f64>) -> Self {
        terms.retain(|_, c| c.abs() >= ZERO_EPS);
        Polynomial { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, MultiIndex::total)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    pub fn coeff_of(&self, alpha: &[u32]) -> f64 {
        self.coeff(&MultiIndex::new(alpha.to_vec()))
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(&MultiIndex::zeros(self.dim))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    /// Drops coefficients with `|c| < eps`.
    pub fn prune(&self, eps: f64) -> Polynomial {
        let mut terms = self.terms.clone();
        terms.retain(|_, c| c.abs() >= eps);
        Polynomial {
            dim: self.dim,
            terms,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let deg = self.degree() as usize;
        let mut pows = vec![vec![1.0; deg + 1]; self.dim];
        for (j, row) in pows.iter_mut().enumerate() {
            for k in 1..=deg {
                row[k] = row[k - 1] * x[j];
            }
        }
        self.terms
            .iter()
            .map(|(alpha, &c)| {
                alpha
                    .entries()
                    .iter()
                    .enumerate()
                    .fold(c, |acc, (j, &a)| acc * pows[j][a as usize])
            })
            .sum()
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(a, &c)| (a.clone(), c * s))
            .collect();
        Polynomial::from_map(self.dim, terms)
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.dim, other.dim)?;
        let mut terms = self.terms.clone();
        for (a, &c) in &other.terms {
            *terms.entry(a.clone()).or_insert(0.0) += c;
        }
        Ok(Polynomial::from_map(self.dim, terms))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.checked_add(&other.scale(-1.0))
    }

    /// Exact coefficient convolution.
    pub fn multiply(&self, other: &Polynomial) -> Result<Polynomial> {
        check_dim(self.dim, other.dim)?;
        let mut terms: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                *terms.entry(a.add(b)).or_insert(0.0) += ca * cb;
            }
        }
        Ok(Polynomial::from_map(self.dim, terms))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.dim, 1.0);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The polynomial `x ↦ p(Mx + c)`.
    pub fn affine_substitute(&self, m: &DMatrix<f64>, c: &[f64]) -> Result<Polynomial> {
        check_dim(self.dim, m.nrows())?;
        check_dim(self.dim, m.ncols())?;
        check_dim(self.dim, c.len())?;
        let d = self.dim;
        let deg = self.degree();
        // powers[j][e] = (Σ_k M_jk x_k + c_j)^e
        let powers: Vec<Vec<Polynomial>> = (0..d)
            .map(|j| {
                let mut lin = Polynomial::constant(d, c[j]);
                for k in 0..d {
                    lin = &lin + &Polynomial::variable(d, k).scale(m[(j, k)]);
                }
                let mut row = vec![Polynomial::constant(d, 1.0)];
                for e in 1..=deg as usize {
                    let next = &row[e - 1] * &lin;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (alpha, &coef) in &self.terms {
            let mut prod = Polynomial::constant(d, coef);
            for (j, &a) in alpha.entries().iter().enumerate() {
                if a > 0 {
                    prod = &prod * &powers[j][a as usize];
                }
            }
            for (b, cb) in prod.terms {
                *out.entry(b).or_insert(0.0) += cb;
            }
        }
        Ok(Polynomial::from_map(d, out))
    }

    /// `∂p/∂x_j`.
    pub fn derivative(&self, j: usize) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (alpha, &c) in &self.terms {
            let a = alpha.get(j);
            if a == 0 {
                continue;
            }
            let mut e = alpha.entries().to_vec();
            e[j] -= 1;
            terms.insert(MultiIndex::new(e), c * a as f64);
        }
        Polynomial::from_map(self.dim, terms)
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(a, _)| a.total() == k)
            .map(|(a, &c)| (a.clone(), c))
            .collect();
        Polynomial {
            dim: self.dim,
            terms,
        }
    }

    /// Largest absolute coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &Polynomial) -> f64 {
        let mut m: f64 = 0.0;
        for (a, &c) in &self.terms {
            m = m.max((c - other.coeff(a)).abs());
        }
        for (a, &c) in &other.terms {
            if !self.terms.contains_key(a) {
                m = m.max(c.abs());
            }
        }
        m
    }

    /// Terms in graded lexicographic order, as JSON records.
    pub fn to_term_list(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(a, &coef)| Term {
                alpha: a.entries().to_vec(),
                coef,
            })
            .collect()
    }

    pub fn from_term_list(dim: usize, terms: &[Term]) -> Result<Polynomial> {
        Polynomial::from_terms(dim, terms.iter().map(|t| (t.alpha.clone(), t.coef)))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    /// Panics on dimension mismatch; use [`Polynomial::checked_add`] otherwise.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial dimensions differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial dimensions differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.multiply(rhs).expect("polynomial dimensions differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first reads more naturally
        for (i, (alpha, &c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0.0 { "-" } else { "+" };
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let mono: Vec<String> = alpha
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(j, &a)| {
                    if a == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, a)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if (mag - 1.0).abs() < 1e-15 {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// One `{"alpha": [...], "coef": c}` record of the JSON term list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub alpha: Vec<u32>,
    pub coef: f64,
}

/// JSON form: `{"dim": d, "terms": [{"alpha": [...], "coef": c}, ...]}`.
#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    dim: usize,
    terms: Vec<Term>,
}

impl From<Polynomial> for PolynomialRepr {
    fn from(p: Polynomial) -> Self {
        PolynomialRepr {
            dim: p.dim,
            terms: p
                .terms
                .into_iter()
                .map(|(a, coef)| Term {
                    alpha: a.entries().to_vec(),
                    coef,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialRepr> for Polynomial {
    type Error = Error;
    fn try_from(r: PolynomialRepr) -> Result<Self> {
        if r.dim == 0 {
            return Err(Error::InvalidInput(
                "polynomial dimension must be positive".into(),
            ));
        }
        Polynomial::from_terms(r.dim, r.terms.into_iter().map(|t| (t.alpha, t.coef)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(dim: usize, terms: &[(&[u32], f64)]) -> Polynomial {
        Polynomial::from_terms(dim, terms.iter().map(|(a, c)| (a.to_vec(), *c))).unwrap()
    }

    fn example4() -> Polynomial {
        p(
            2,
            &[
                (&[2, 2], 1.0),
                (&[1, 1], -2.0),
                (&[0, 0], 1.0),
                (&[0, 2], 1.0),
            ],
        )
    }

    #[test]
    fn eval_examples() {
        let q = p(2, &[(&[1, 1], 1.0), (&[0, 0], -1.0)]);
        assert_eq!(q.eval(&[1.0, 1.0]).unwrap(), 0.0);
        assert!((example4().eval(&[2.0, 0.5]).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(
            Polynomial::constant(3, 1.0)
                .eval(&[4.0, -2.0, 9.0])
                .unwrap(),
            1.0
        );
        assert!(matches!(
            q.eval(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multiply_examples() {
        let q = p(2, &[(&[1, 1], 1.0), (&[0, 0], -1.0)]);
        let sq = &q * &q;
        assert_eq!(sq, p(2, &[(&[2, 2], 1.0), (&[1, 1], -2.0), (&[0, 0], 1.0)]));
        assert_eq!(sq.degree(), 4);
        let a = p(2, &[(&[2, 0], 1.0), (&[0, 0], 1.0)]);
        let b = p(2, &[(&[0, 2], 1.0), (&[0, 0], 1.0)]);
        assert_eq!(
            &a * &b,
            p(
                2,
                &[
                    (&[2, 2], 1.0),
                    (&[2, 0], 1.0),
                    (&[0, 2], 1.0),
                    (&[0, 0], 1.0)
                ]
            )
        );
        assert_eq!(&q * &Polynomial::constant(2, 1.0), q);
        assert!(q.multiply(&Polynomial::constant(3, 1.0)).is_err());
    }

    #[test]
    fn cancellation_is_canonical() {
        let q = p(1, &[(&[1], 1.0)]);
        let z = &q - &q;
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
        assert!(Polynomial::from_terms(1, vec![(vec![1u32, 0], 1.0)]).is_err());
    }

    #[test]
    fn affine_substitute_examples() {
        let q = p(1, &[(&[2], 1.0), (&[0], 1.0)]);
        let m = DMatrix::from_element(1, 1, 2.0);
        let r = q.affine_substitute(&m, &[3.0]).unwrap();
        assert_eq!(r, p(1, &[(&[2], 4.0), (&[1], 12.0), (&[0], 10.0)]));
        let e4 = example4();
        let id = DMatrix::identity(2, 2);
        assert!(
            e4.affine_substitute(&id, &[0.0, 0.0])
                .unwrap()
                .max_abs_diff(&e4)
                < 1e-15
        );
    }

    #[test]
    fn derivative_and_homogeneous_part() {
        let e4 = example4();
        assert_eq!(e4.derivative(0), p(2, &[(&[1, 2], 2.0), (&[0, 1], -2.0)]));
        assert_eq!(e4.homogeneous_part(4), p(2, &[(&[2, 2], 1.0)]));
    }

    #[test]
    fn json_is_graded_lex_sorted() {
        let s = serde_json::to_string(&example4()).unwrap();
        assert_eq!(
            s,
            r#"{"dim":2,"terms":[{"alpha":[0,0],"coef":1.0},{"alpha":[1,1],"coef":-2.0},{"alpha":[0,2],"coef":1.0},{"alpha":[2,2],"coef":1.0}]}"#
        );
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, example4());
        assert!(serde_json::from_str::<Polynomial>(
            r#"{"dim":2,"terms":[{"alpha":[1],"coef":1}]}"#
        )
        .is_err());
    }
}
