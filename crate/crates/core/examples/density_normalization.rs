//! Build a density, check that it integrates to one and export a slice.

use polynormal::{Pnd, Polynomial, QuadForm};

fn main() -> polynormal::Result<()> {
    let p = Polynomial::from_terms(
        2,
        [
            (vec![4, 0], 1.0),
            (vec![0, 4], 1.0),
            (vec![2, 2], 1.0),
            (vec![0, 0], 1.0),
        ],
    )?;
    let a = QuadForm::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]])?;
    let pnd = Pnd::new(p, a, vec![1.0, -1.0])?;
    println!("normalizing constant  {:.12}", pnd.norm_const());
    println!("Gauss-Hermite integral {:.12}", pnd.integral(12));
    println!("box integral (±9σ)     {:.12}", pnd.integral_box(9.0, 60));
    println!("whitened polynomial    {}", pnd.whitened_poly());
    let slice: Vec<Vec<f64>> = (0..=8).map(|k| vec![-1.0 + 0.5 * k as f64, -1.0]).collect();
    print!("{}", pnd.density_slice_csv(&slice)?);

    // A polynomial with a negative region is rejected, with a witness.
    let bad = Polynomial::from_terms(1, [(vec![2], 1.0), (vec![0], -1.0)])?;
    match Pnd::new(bad, QuadForm::identity(1), vec![0.0]) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
