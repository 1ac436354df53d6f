mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use polynormal::decompose::DecomposeConfig;
use polynormal::polyalg::{all_up_to, to_hermite, HermiteCoeffs};
use polynormal::positivity::epsilon_bound;
use polynormal::quadrature::box_integral;
use polynormal::search::minimize_polynomial;
use polynormal::verify::{example4_b, example4_b_corrected, Example4Params};
use polynormal::{
    cf_multiply, decompose, forward_cf, from_hermite, precheck, theta_floor, CharFn, Pnd,
    Polynomial, QuadForm, SearchConfig, Verdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly_strategy(dim: usize, deg: u32, r: f64) -> impl Strategy<Value = Polynomial> {
    let idx = all_up_to(dim, deg);
    prop::collection::vec(-r..r, idx.len()).prop_map(move |c| {
        Polynomial::from_terms(
            dim,
            idx.iter().zip(c).map(|(a, c)| (a.entries().to_vec(), c)),
        )
        .unwrap()
    })
}

fn any_poly() -> impl Strategy<Value = Polynomial> {
    (1usize..=3, 0u32..=4).prop_flat_map(|(d, k)| poly_strategy(d, k, 5.0))
}

fn matrix(dim: usize, r: f64) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-r..r, dim * dim).prop_map(move |v| DMatrix::from_vec(dim, dim, v))
}

fn seeded_pnd() -> impl Strategy<Value = Pnd> {
    (any::<u64>(), 1usize..=3, 1u32..=2)
        .prop_map(|(seed, d, h)| random_pnd(&mut ChaCha8Rng::seed_from_u64(seed), d, h))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_change_of_basis_round_trips(p in any_poly()) {
        prop_assert!(from_hermite(&to_hermite(&p)).max_abs_diff(&p) <= 1e-9 * p.max_abs_coeff().max(1.0));
        let h = HermiteCoeffs::from_coefficient_map(p.clone());
        prop_assert!(to_hermite(&from_hermite(&h)).max_abs_diff(&h) <= 1e-9 * p.max_abs_coeff().max(1.0));
    }

    #[test]
    fn hermite_expansion_evaluates_like_the_polynomial(
        p in poly_strategy(2, 5, 3.0),
        x in prop::collection::vec(-3.0f64..3.0, 2),
    ) {
        let v = p.eval(&x).unwrap();
        prop_assert!(rel(to_hermite(&p).eval(&x), v) < 1e-9);
    }

    #[test]
    fn multiplication_is_commutative_and_associative(
        a in poly_strategy(2, 3, 2.0),
        b in poly_strategy(2, 3, 2.0),
        c in poly_strategy(2, 2, 2.0),
    ) {
        prop_assert!((&a * &b).max_abs_diff(&(&b * &a)) < 1e-12);
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert!(left.max_abs_diff(&right) < 1e-10 * left.max_abs_coeff().max(1.0));
    }

    #[test]
    fn product_evaluates_pointwise(
        a in poly_strategy(3, 2, 2.0),
        b in poly_strategy(3, 2, 2.0),
        x in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        let lhs = (&a * &b).eval(&x).unwrap();
        prop_assert!(rel(lhs, a.eval(&x).unwrap() * b.eval(&x).unwrap()) < 1e-10);
    }

    #[test]
    fn affine_substitutions_compose(
        p in poly_strategy(2, 4, 2.0),
        f in matrix(2, 1.5),
        g in matrix(2, 1.5),
        c in prop::collection::vec(-1.0f64..1.0, 2),
        e in prop::collection::vec(-1.0f64..1.0, 2),
        x in prop::collection::vec(-1.0f64..1.0, 2),
    ) {
        // p(F(Gx + c) + e) two ways.
        let nested = p.affine_substitute(&f, &e).unwrap().affine_substitute(&g, &c).unwrap();
        let fc = &f * nalgebra::DVector::from_vec(c.clone());
        let shift: Vec<f64> = (0..2).map(|j| fc[j] + e[j]).collect();
        let direct = p.affine_substitute(&(&f * &g), &shift).unwrap();
        prop_assert!(nested.max_abs_diff(&direct) < 1e-8 * direct.max_abs_coeff().max(1.0));
        let gx = &g * nalgebra::DVector::from_vec(x.clone());
        let y: Vec<f64> = (0..2).map(|j| gx[j] + c[j]).collect();
        let fy = &f * nalgebra::DVector::from_vec(y);
        let z: Vec<f64> = (0..2).map(|j| fy[j] + e[j]).collect();
        prop_assert!(rel(direct.eval(&x).unwrap(), p.eval(&z).unwrap()) < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn characteristic_function_is_hermitian_and_unit_at_zero(
        pnd in seeded_pnd(),
        t in prop::collection::vec(-3.0f64..3.0, 3),
    ) {
        let cf = forward_cf(&pnd);
        let t = &t[..pnd.dim()];
        let zero = cf.eval(&vec![0.0; pnd.dim()]).unwrap();
        prop_assert!((zero - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let neg: Vec<f64> = t.iter().map(|v| -v).collect();
        prop_assert!((cf.eval(t).unwrap() - cf.eval(&neg).unwrap().conj()).norm() < 1e-12);
        prop_assert!(cf.eval(t).unwrap().norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn characteristic_function_matches_quadrature(seed in any::<u64>(), t in prop::collection::vec(-2.0f64..2.0, 2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pnd = random_pnd(&mut rng, 2, 2);
        let cf = forward_cf(&pnd);
        let cov = pnd.form().covariance();
        let lo: Vec<f64> = (0..2).map(|j| pnd.shift()[j] - 10.0 * cov[(j, j)].sqrt()).collect();
        let hi: Vec<f64> = (0..2).map(|j| pnd.shift()[j] + 10.0 * cov[(j, j)].sqrt()).collect();
        let re = box_integral(&lo, &hi, 80, |x| pnd.density(x).unwrap() * (t[0] * x[0] + t[1] * x[1]).cos());
        let im = box_integral(&lo, &hi, 80, |x| pnd.density(x).unwrap() * (t[0] * x[0] + t[1] * x[1]).sin());
        prop_assert!((cf.eval(&t).unwrap() - Complex64::new(re, im)).norm() < 1e-6);
    }

    #[test]
    fn product_of_characteristic_functions_multiplies_values(
        a in seeded_pnd(),
        seed in any::<u64>(),
        t in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = a.dim();
        let b = CharFn::gaussian(random_vec(&mut rng, d, 1.0), random_spd(&mut rng, d)).unwrap();
        let fa = forward_cf(&a);
        let prod = cf_multiply(&fa, &b).unwrap();
        let t = &t[..d];
        let expected = fa.eval(t).unwrap() * b.eval(t).unwrap();
        prop_assert!((prod.eval(t).unwrap() - expected).norm() < 1e-10);
    }

    #[test]
    fn density_is_shift_equivariant(pnd in seeded_pnd(), delta in prop::collection::vec(-2.0f64..2.0, 3), x in prop::collection::vec(-2.0f64..2.0, 3)) {
        let d = pnd.dim();
        let delta = &delta[..d];
        let x = &x[..d];
        let neg: Vec<f64> = delta.iter().map(|v| -v).collect();
        let moved_poly = pnd.poly().affine_substitute(&DMatrix::identity(d, d), &neg).unwrap();
        let moved_shift: Vec<f64> = pnd.shift().iter().zip(delta).map(|(b, s)| b + s).collect();
        let moved = Pnd::new(moved_poly, pnd.form().clone(), moved_shift).unwrap();
        let xs: Vec<f64> = x.iter().zip(delta).map(|(a, b)| a + b).collect();
        prop_assert!(rel(moved.density(&xs).unwrap(), pnd.density(x).unwrap()) < 1e-10);
    }

    #[test]
    fn density_transforms_under_affine_maps(seed in any::<u64>(), x in prop::collection::vec(-1.0f64..1.0, 2)) {
        // g(x) = |det F| f(Fx + c) is polynomial-normal with form FᵀAF and shift F⁻¹(b − c).
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pnd = random_pnd(&mut rng, 2, 2);
        let f = random_well_conditioned(&mut rng, 2);
        let c = random_vec(&mut rng, 2, 1.0);
        let fi = f.clone().try_inverse().unwrap();
        let diff = nalgebra::DVector::from_iterator(2, pnd.shift().iter().zip(&c).map(|(b, c)| b - c));
        let shift: Vec<f64> = (&fi * diff).iter().copied().collect();
        let form = f.transpose() * pnd.form().matrix() * &f;
        let form = QuadForm::new((&form + form.transpose()) * 0.5).unwrap();
        let g = Pnd::new(pnd.poly().affine_substitute(&f, &c).unwrap(), form, shift).unwrap();
        let fx = &f * nalgebra::DVector::from_vec(x.clone());
        let y: Vec<f64> = (0..2).map(|j| fx[j] + c[j]).collect();
        let expected = f.determinant().abs() * pnd.density(&y).unwrap();
        prop_assert!((g.density(&x).unwrap() - expected).abs() < 1e-9 * expected.abs().max(1e-3));
    }

    #[test]
    fn minimum_of_convex_quadratics_is_found(
        seed in any::<u64>(),
        dim in 1usize..=3,
        k in -3.0f64..3.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_spd(&mut rng, dim);
        let c = random_vec(&mut rng, dim, 3.0);
        let mut p = Polynomial::constant(dim, k);
        for i in 0..dim {
            for j in 0..dim {
                let xi = &Polynomial::variable(dim, i) + &Polynomial::constant(dim, -c[i]);
                let xj = &Polynomial::variable(dim, j) + &Polynomial::constant(dim, -c[j]);
                p = &p + &(&xi * &xj).scale(m[(i, j)]);
            }
        }
        let r = minimize_polynomial(&p, &SearchConfig::default());
        prop_assert!(r.attained);
        prop_assert!((r.value - k).abs() < 1e-8);
        for (x, c) in r.point.iter().zip(&c) {
            prop_assert!((x - c).abs() < 1e-4);
        }
    }

    #[test]
    fn epsilon_scales_linearly(seed in any::<u64>(), lambda in 0.1f64..10.0) {
        let q = random_eligible(&mut ChaCha8Rng::seed_from_u64(seed), 2, 4);
        let a = epsilon_bound(&q).unwrap();
        let b = epsilon_bound(&q.scale(lambda)).unwrap();
        prop_assert!(rel(b.epsilon, lambda * a.epsilon) < 1e-6 * lambda.max(1.0));
    }

    #[test]
    fn lower_bound_holds_pointwise(seed in any::<u64>(), x in prop::collection::vec(-20.0f64..20.0, 2)) {
        let q = random_eligible(&mut ChaCha8Rng::seed_from_u64(seed), 2, 4);
        let report = epsilon_bound(&q).unwrap();
        let weight = 1.0 + all_up_to(2, 4).iter().map(|a| a.monomial(&x).abs()).sum::<f64>();
        prop_assert!(report.inf_a_lower > 0.0);
        prop_assert!(q.eval(&x).unwrap() / weight >= report.inf_a_lower);
    }

    #[test]
    fn epsilon_perturbations_stay_positive(
        seed in any::<u64>(),
        signs in prop::collection::vec(-1.0f64..1.0, 15),
        x in prop::collection::vec(-50.0f64..50.0, 2),
    ) {
        let q = random_eligible(&mut ChaCha8Rng::seed_from_u64(seed), 2, 4);
        let eps = epsilon_bound(&q).unwrap().epsilon;
        let idx = all_up_to(2, 4);
        let w = &q + &Polynomial::from_terms(2, idx.iter().zip(&signs).map(|(a, s)| (a.entries().to_vec(), s * eps))).unwrap();
        prop_assert!(w.eval(&x).unwrap() > 0.0);
        prop_assert!(w.eval(&[x[0] / 25.0, x[1] / 25.0]).unwrap() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn admissibility_is_monotone_in_theta(seed in any::<u64>()) {
        let q = random_eligible(&mut ChaCha8Rng::seed_from_u64(seed), 2, 4);
        let pnd = Pnd::new(q, QuadForm::identity(2), vec![0.0, 0.0]).unwrap();
        let s = theta_floor(&pnd.hermite_coeffs(), 1e-4, &SearchConfig::default()).unwrap();
        let mut trace = s.trace.clone();
        trace.sort_by(|a, b| a.0.total_cmp(&b.0));
        let first = trace.iter().position(|t| t.1 >= -1e-12).unwrap();
        prop_assert!(trace[first..].iter().all(|t| t.1 >= -1e-12));
        prop_assert!(trace[first].0 <= s.theta_min + 1e-12);
    }

    #[test]
    fn decomposition_reproduces_the_density(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_eligible(&mut rng, 2, 4);
        let pnd = Pnd::new(q, QuadForm::new(random_spd(&mut rng, 2)).unwrap(), random_vec(&mut rng, 2, 1.0)).unwrap();
        prop_assume!(precheck(&pnd, &SearchConfig::default()).unwrap().verdict == Verdict::Eligible);
        let dec = decompose(&pnd, None, &DecomposeConfig::default()).unwrap();
        prop_assert!(dec.theta > 0.0 && dec.theta < 1.0);
        prop_assert!(dec.min_p_theta >= -1e-12);
        prop_assert!(dec.cf_error < 1e-9);
        prop_assert!(dec.conv_error.unwrap() < 1e-8);
    }

    #[test]
    fn theta_floor_is_invariant_under_affine_maps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_eligible(&mut rng, 2, 4);
        let base = Pnd::new(q.clone(), QuadForm::identity(2), vec![0.0, 0.0]).unwrap();
        let f = random_well_conditioned(&mut rng, 2);
        let c = random_vec(&mut rng, 2, 1.0);
        let fi = f.clone().try_inverse().unwrap();
        let shift: Vec<f64> = (&fi * nalgebra::DVector::from_iterator(2, c.iter().map(|v| -v))).iter().copied().collect();
        let form = f.transpose() * &f;
        let moved = Pnd::new(
            q.affine_substitute(&f, &c).unwrap(),
            QuadForm::new((&form + form.transpose()) * 0.5).unwrap(),
            shift,
        )
        .unwrap();
        let cfg = SearchConfig::default();
        let a = theta_floor(&base.hermite_coeffs(), 1e-5, &cfg).unwrap().theta_min;
        let b = theta_floor(&moved.hermite_coeffs(), 1e-5, &cfg).unwrap().theta_min;
        prop_assert!((a - b).abs() < 1e-3, "{a} vs {b}");
    }
}

fn example4_params() -> impl Strategy<Value = Example4Params> {
    (0.01f64..0.99, 0.01f64..0.99, -0.99f64..0.99).prop_filter_map(
        "parameters outside the admissible region",
        |(a11, a22, a12)| {
            if a12 == 0.0 {
                return None;
            }
            Example4Params::new(a11, a12, a22).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn leading_curve_coefficient_is_negative(prm in example4_params()) {
        let printed = example4_b(&prm).unwrap();
        let corrected = example4_b_corrected(&prm).unwrap();
        prop_assert!(printed < 0.0 && corrected < 0.0);
        prop_assert!(rel(printed - corrected, -prm.a12.abs() / prm.a22) < 1e-9);
    }
}
