//! Closed-form characteristic functions and their inversion.

use polynormal::verify::example4_pnd;
use polynormal::{cf_multiply, forward_cf, inverse_cf, CharFn};

fn main() -> polynormal::Result<()> {
    let pnd = example4_pnd();
    let cf = forward_cf(&pnd);
    println!("density polynomial  {}", pnd.normalized_poly());
    println!("Re φ polynomial in t {}", cf.real_t_polynomial());
    println!("Im φ polynomial in t {}", cf.imag_t_polynomial());
    println!("φ(0.3, -0.7) = {}", cf.eval(&[0.3, -0.7])?);

    let back = inverse_cf(&cf)?;
    println!(
        "inverse round trip error {:.1e}",
        back.normalized_poly().max_abs_diff(&pnd.normalized_poly())
    );

    // Multiplying by a normal law adds covariances and means.
    let g = CharFn::gaussian(vec![1.0, 2.0], nalgebra::DMatrix::identity(2, 2) * 0.5)?;
    let sum = cf_multiply(&cf, &g)?;
    println!(
        "sum covariance {:?}, mean {:?}",
        sum.sigma().as_slice(),
        sum.shift()
    );
    Ok(())
}
