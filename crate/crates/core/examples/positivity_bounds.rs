//! Leading-coefficient conditions and the perturbation radius ε.

use polynormal::positivity::{check_condition_337, epsilon_bound, within_epsilon};
use polynormal::Polynomial;

fn main() -> polynormal::Result<()> {
    let q = Polynomial::from_terms(
        2,
        [
            (vec![4, 0], 1.0),
            (vec![0, 4], 1.0),
            (vec![2, 2], 1.0),
            (vec![0, 0], 1.0),
        ],
    )?;
    let r = epsilon_bound(&q)?;
    println!("axis condition holds: {}", r.condition337);
    println!("leading form minimum  {:.6}", r.leading_form_min);
    println!("search radius R       {:.4}", r.search_radius);
    println!("inf B                 {:.6}", r.inf_b);
    println!("inf A lower bound     {:.6e}", r.inf_a_lower);
    println!("epsilon               {:.6e}", r.epsilon);

    let w = &q
        + &Polynomial::from_terms(
            2,
            [
                (vec![3, 0], 0.5 * r.epsilon),
                (vec![1, 1], -0.5 * r.epsilon),
            ],
        )?;
    println!("small perturbation covered: {}", within_epsilon(&q, &w, &r));

    let fails = Polynomial::from_terms(2, [(vec![2, 2], 1.0), (vec![0, 0], 1.0)])?;
    println!(
        "x²y² + 1 satisfies the axis condition: {}",
        check_condition_337(&fails)?
    );
    Ok(())
}
