use freebound::calculus::{energy, ShapeSetup};
use freebound::geometry::{
    envelope, equispaced, mode_of_index, project_admissible, AdmissibleSet, Parameterization,
    RadialCurve, SupportFunction, TrigSeries,
};
use freebound::solver::DirichletSolver;
use proptest::prelude::*;

fn series(order: usize, mean: std::ops::Range<f64>, amp: f64) -> impl Strategy<Value = TrigSeries> {
    (mean, prop::collection::vec(-1.0..1.0f64, 2 * order)).prop_map(move |(m, raw)| {
        let mut c = vec![m];
        for (i, x) in raw.into_iter().enumerate() {
            let l = mode_of_index(i + 1) as f64;
            c.push(amp * x / ((1.0 + l) * (1.0 + l)));
        }
        TrigSeries::new(c).unwrap()
    })
}

fn rotate(s: &TrigSeries, alpha: f64) -> TrigSeries {
    let mut out = s.clone();
    for l in 1..=s.order() {
        let (b, a) = (s.coeffs()[2 * l - 1], s.coeffs()[2 * l]);
        let (sn, cs) = ((l as f64) * alpha).sin_cos();
        out.coeffs_mut()[2 * l] = a * cs - b * sn;
        out.coeffs_mut()[2 * l - 1] = a * sn + b * cs;
    }
    out
}

fn convex() -> AdmissibleSet {
    AdmissibleSet {
        enforce_convexity: true,
        ..AdmissibleSet::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_samples_round_trip(s in series(8, -2.0..2.0, 3.0), extra in 0usize..20) {
        let m = 2 * 8 + 1 + extra;
        let back = TrigSeries::from_samples(&s.eval_many(&equispaced(m), 0), 8).unwrap();
        for (a, b) in s.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn rotation_is_a_shift_of_the_samples(s in series(6, 0.5..1.5, 1.0), k in 0usize..52) {
        let m = 52;
        let alpha = std::f64::consts::TAU * k as f64 / m as f64;
        let r = rotate(&s, alpha);
        let base = s.eval_many(&equispaced(m), 0);
        let moved = r.eval_many(&equispaced(m), 0);
        for i in 0..m {
            prop_assert!((moved[(i + k) % m] - base[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent(s in series(8, -1.0..12.0, 8.0), support in any::<bool>()) {
        let kind = if support { Parameterization::Support } else { Parameterization::Radial };
        let once = project_admissible(&s, &convex(), kind).unwrap();
        let twice = project_admissible(&once, &convex(), kind).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn envelope_of_projected_support_function_turns_left(s in series(8, 0.5..2.0, 2.0)) {
        let h = project_admissible(&s, &convex(), Parameterization::Support).unwrap();
        let b = envelope(&SupportFunction::new(h).unwrap(), 256).unwrap();
        let n = b.len();
        for i in 0..n {
            let (p, q, r) = (b.nodes[i], b.nodes[(i + 1) % n], b.nodes[(i + 2) % n]);
            let cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
            prop_assert!(cross >= -1e-12, "{}", cross);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn energy_is_rotation_invariant(
        h in series(6, 1.0..1.3, 0.2),
        sigma in series(6, 0.3..0.5, 0.1),
        alpha in 0.0..std::f64::consts::TAU,
    ) {
        let setup = ShapeSetup::default();
        let kind = Parameterization::Radial;
        let j = energy(&h, kind, &RadialCurve::new(sigma.clone()).unwrap(), &setup).unwrap();
        let jr = energy(&rotate(&h, alpha), kind, &RadialCurve::new(rotate(&sigma, alpha)).unwrap(), &setup)
            .unwrap();
        prop_assert!((j - jr).abs() <= 1e-8 * j, "{} vs {}", j, jr);
    }

    #[test]
    fn state_fluxes_balance(
        h in series(6, 1.0..1.3, 0.2),
        sigma in series(6, 0.3..0.5, 0.1),
        support in any::<bool>(),
    ) {
        let kind = if support { Parameterization::Support } else { Parameterization::Radial };
        let set = if support { convex() } else { AdmissibleSet::default() };
        let h = project_admissible(&h, &set, kind).unwrap();
        let setup = ShapeSetup::default();
        let d = setup.domain(&h, kind, &RadialCurve::new(sigma).unwrap()).unwrap();
        let s = DirichletSolver::new(d.clone()).unwrap().solve_state().unwrap();
        prop_assert!(s.total_flux(&d).abs() <= 1e-8);
    }
}
