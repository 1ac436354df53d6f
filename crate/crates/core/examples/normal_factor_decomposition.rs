//! Split a normal factor off a positive density and check the convolution.

use polynormal::decompose::DecomposeConfig;
use polynormal::{decompose, precheck, Pnd, Polynomial, QuadForm};

fn main() -> polynormal::Result<()> {
    let p = Polynomial::from_terms(
        2,
        [
            (vec![2, 2], 1.0),
            (vec![1, 1], -2.0),
            (vec![0, 2], 1.0),
            (vec![0, 0], 1.0),
            (vec![4, 0], 0.1),
            (vec![0, 4], 0.1),
        ],
    )?;
    let pnd = Pnd::new(p, QuadForm::identity(2), vec![0.0, 0.0])?;
    let cfg = DecomposeConfig::default();
    let diag = precheck(&pnd, &cfg.search)?;
    println!("verdict {}", diag.verdict);

    let dec = decompose(&pnd, None, &cfg)?;
    println!(
        "theta floor {:.7}, theta used {:.7}",
        dec.theta_floor.unwrap_or(f64::NAN),
        dec.theta
    );
    println!("min p_theta {:.3e}", dec.min_p_theta);
    println!(
        "Y polynomial {}",
        dec.factor_y.normalized_poly().prune(1e-12)
    );
    println!("Y matrix {:?}", dec.factor_y.form().rows());
    println!(
        "Z ~ N({:?}, {:?})",
        dec.factor_z.mean,
        dec.factor_z.cov.as_slice()
    );
    println!("characteristic function error {:.1e}", dec.cf_error);
    println!(
        "convolution error {:.1e}",
        dec.conv_error.unwrap_or(f64::NAN)
    );
    Ok(())
}
