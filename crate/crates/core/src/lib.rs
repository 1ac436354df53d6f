pub mod charfn;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod io;
mod linalg;
pub mod pnd;
pub mod polyalg;
pub mod positivity;
pub mod quadrature;
pub mod search;
pub mod verify;

pub use charfn::{cf_multiply, forward_cf, inverse_cf, CharFn};
pub use decompose::{
    decompose, precheck, theta_floor, Decomposition, Diagnosis, GaussianFactor, Verdict,
};
pub use error::{Error, Result};
pub use pnd::{Pnd, QuadForm};
pub use polyalg::{from_hermite, to_hermite, HermiteCoeffs, MultiIndex, Polynomial};
pub use positivity::{epsilon_bound, PositivityReport};
pub use search::{MinResult, SearchConfig};
