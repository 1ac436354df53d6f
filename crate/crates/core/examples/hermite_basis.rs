//! Monomial and Hermite coefficients of a polynomial, and the θ-rescaled family.

use polynormal::polyalg::theta_rescale;
use polynormal::{from_hermite, to_hermite, Polynomial};

fn main() -> polynormal::Result<()> {
    // x²y² − 2xy + y² + 1
    let p = Polynomial::from_terms(
        2,
        [
            (vec![2, 2], 1.0),
            (vec![1, 1], -2.0),
            (vec![0, 2], 1.0),
            (vec![0, 0], 1.0),
        ],
    )?;
    let h = to_hermite(&p);
    println!("p(x)         = {p}");
    println!("Hermite form:");
    for (alpha, c) in h.iter() {
        println!("  He{:?}: {c}", alpha.entries());
    }
    println!(
        "round trip error = {:.1e}",
        from_hermite(&h).max_abs_diff(&p)
    );
    for theta in [1.0, 0.9, 0.7] {
        let pt = theta_rescale(&h, theta)?;
        println!("p_θ at θ = {theta}: {pt}");
    }
    Ok(())
}
