//! Numerical check that a density equals the convolution of two factors.

use polynormal::decompose::{DecomposeConfig, GaussianFactor};
use polynormal::verify::{convolution_check, grid_points, Factor};
use polynormal::{decompose, Pnd, Polynomial, QuadForm};

fn main() -> polynormal::Result<()> {
    // (x² + 1)e^{−x²/2}/(2√(2π)) splits at θ = √2/2.
    let p = Polynomial::from_terms(1, [(vec![2], 1.0), (vec![0], 1.0)])?;
    let f = Pnd::new(p, QuadForm::identity(1), vec![0.0])?;
    let theta = 0.5f64.sqrt();
    let dec = decompose(&f, Some(theta), &DecomposeConfig::default())?;
    let grid = grid_points(&[0.0], 4.0, 9);
    let r = convolution_check(
        &f,
        &Factor::Pnd(dec.factor_y.clone()),
        &Factor::Gaussian(dec.factor_z.clone()),
        &grid,
        None,
    )?;
    println!("x, f(x), (Y*Z)(x)");
    for ((x, a), b) in r.grid.iter().zip(&r.f_values).zip(&r.conv_values) {
        println!("{:5.1}, {a:.12}, {b:.12}", x[0]);
    }
    println!(
        "max error {:.1e} with quadrature order {}",
        r.max_abs_error, r.quadrature_order
    );

    // A wrong split is detected.
    let wrong = GaussianFactor {
        mean: vec![0.0],
        cov: nalgebra::DMatrix::from_element(1, 1, 0.6),
    };
    let r = convolution_check(
        &f,
        &Factor::Pnd(dec.factor_y),
        &Factor::Gaussian(wrong),
        &grid,
        None,
    )?;
    println!("mismatched factor error {:.1e}", r.max_abs_error);
    Ok(())
}
