//! Independent numerical checks of factorizations and of the indecomposable example.

mod conv;
mod example4;
mod probe;

pub use conv::{convolution_check, grid_points, ConvReport, Factor};
pub use example4::{
    candidate_cf, candidate_polynomial, complement_cf, curve_csv, curve_point, example4_b,
    example4_b_corrected, example4_negative_witness, example4_pnd, extract_n2_coefficient,
    Example4Params, Example4Witness, WitnessBranch,
};
pub use probe::{biquadratic_factor_probe, ProbeResult};
