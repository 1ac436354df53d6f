//! A positive density with no normal factor of the candidate form.

use polynormal::verify::{
    biquadratic_factor_probe, example4_b, example4_b_corrected, example4_negative_witness,
    example4_pnd, extract_n2_coefficient, Example4Params,
};
use polynormal::{forward_cf, precheck, SearchConfig};

fn main() -> polynormal::Result<()> {
    let pnd = example4_pnd();
    let d = precheck(&pnd, &SearchConfig::default())?;
    println!(
        "verdict {} (infimum estimate {:.2e}, attained {})",
        d.verdict, d.search.value, d.search.attained
    );

    for (a11, a12, a22) in [(0.5, 0.1, 0.5), (0.6, -0.2, 0.3), (0.2, 0.05, 0.7)] {
        let prm = Example4Params::new(a11, a12, a22)?;
        let w = example4_negative_witness(&prm, 50)?;
        println!(
            "({a11}, {a12}, {a22}): B closed form {:.5}, recomputed {:.5}, fitted {:.5}; negative at n = {} x = {:?}",
            example4_b(&prm)?,
            example4_b_corrected(&prm)?,
            extract_n2_coefficient(&prm)?,
            w.n,
            w.point
        );
    }

    let p = forward_cf(&pnd).real_t_polynomial().scale(3.0);
    let probe = biquadratic_factor_probe(&p, 200, 0)?;
    println!(
        "best product-of-quadratics residual for {p}: {:.5}",
        probe.residual
    );
    Ok(())
}
