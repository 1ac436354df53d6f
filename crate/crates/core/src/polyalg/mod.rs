//! Sparse multivariate polynomials and the monomial/Hermite change of basis.

mod hermite;
mod multiindex;
mod polynomial;

pub use hermite::{from_hermite, hermite_1d, theta_rescale, to_hermite, HermiteCoeffs};
pub use multiindex::{all_up_to, count_up_to, MultiIndex};
pub use polynomial::{Polynomial, Term, ZERO_EPS};
