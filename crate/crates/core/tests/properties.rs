use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use semikappa::experiments::runner::StepRule;
use semikappa::io::config::{parse_config, RunConfig};
use semikappa::solver::residual;
use semikappa::stability::amplification_factor;
use semikappa::{
    fast_sweep_solve, sample_field, Boundary, BoundarySpec1D, Dim, EndCondition, Grid,
    ImplicitDomain, KappaChoice, SchemeFamily, SchemeSpec, StepOperator, SweepPolicy,
    VelocityField,
};

const TIGHT: SweepPolicy = SweepPolicy::Tolerance {
    tol: 1e-13,
    max_sweeps: 3000,
};

fn family() -> impl Strategy<Value = SchemeFamily> {
    prop_oneof![
        Just(SchemeFamily::SemiImplicit1D),
        Just(SchemeFamily::FullyImplicit1D),
        Just(SchemeFamily::SemiImplicit2D),
        (0.0..=1.0f64).prop_map(|theta| SchemeFamily::Ctu { theta }),
    ]
}

fn kappa() -> impl Strategy<Value = KappaChoice> {
    prop_oneof![
        Just(KappaChoice::UpwindSign),
        Just(KappaChoice::DownwindSign),
        Just(KappaChoice::Central),
        Just(KappaChoice::ThirdOrderSemiImplicit),
        Just(KappaChoice::ThirdOrderImplicit),
        (-1.0..=1.0f64).prop_map(KappaChoice::Constant),
    ]
}

fn grid_for(family: SchemeFamily, m: usize) -> Grid {
    match family.dim() {
        Dim::One => Grid::line(-1.0, 1.0, m).unwrap(),
        Dim::Two => Grid::square(-1.0, 1.0, m).unwrap(),
    }
}

fn swirl(grid: &Grid, a: f64, b: f64) -> VelocityField {
    let two_d = grid.dim() == Dim::Two;
    VelocityField::sample(grid, move |x, y| {
        let v = a + (2.0 * x + y).sin();
        let w = if two_d { b - (x - 1.5 * y).cos() } else { 0.0 };
        (v, w)
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constants_are_fixed_points_of_a_step(
        family in family(),
        kappa in kappa(),
        m in 6usize..16,
        courant in 0.1f64..4.0,
        (a, b) in (-1.5f64..1.5, -1.5f64..1.5),
        level in -3.0f64..3.0,
        circle in any::<bool>(),
    ) {
        let spec = SchemeSpec::new(family, kappa).unwrap();
        let grid = grid_for(family, m);
        let velocity = swirl(&grid, a, b);
        let cap = if family == SchemeFamily::FullyImplicit1D { courant.min(0.4) } else { courant };
        let tau = cap * grid.h() / velocity.max_component().max(1e-9);
        let boundary = Boundary::exact(move |_, _, _| level);
        let domain = (circle && grid.dim() == Dim::Two).then(|| {
            ImplicitDomain::new(&grid, |x, y| x.hypot(y) - 0.8, Arc::new(move |_, _, _| level)).unwrap()
        });
        let op = StepOperator::new(&spec, &velocity, tau, &boundary, domain.as_ref()).unwrap();
        let u = sample_field(&grid, |_, _| level).unwrap();
        let step = op.linear_step(&u, 0.0, tau).unwrap();
        prop_assert!(residual(&step, u.values()) < 1e-11 * (1.0 + level.abs()) * (1.0 + courant).powi(2));
    }

    #[test]
    fn linear_data_is_exact_for_constant_velocity(
        family in family(),
        kappa in kappa(),
        m in 6usize..16,
        courant in 0.1f64..2.0,
        (v, w) in (-2.0f64..2.0, -2.0f64..2.0),
        (p, q, r) in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
    ) {
        prop_assume!(v.abs() > 0.05);
        let spec = SchemeSpec::new(family, kappa).unwrap();
        let grid = grid_for(family, m);
        let w = if grid.dim() == Dim::Two { w } else { 0.0 };
        let velocity = VelocityField::constant(&grid, v, w).unwrap();
        let cap = if family == SchemeFamily::FullyImplicit1D { courant.min(0.4) } else { courant };
        let tau = cap * grid.h() / v.abs().max(w.abs());
        let exact = move |x: f64, y: f64, t: f64| p + q * (x - v * t) + r * (y - w * t);
        let boundary = Boundary::exact(exact);
        let op = StepOperator::new(&spec, &velocity, tau, &boundary, None).unwrap();
        let u0 = sample_field(&grid, |x, y| exact(x, y, 0.0)).unwrap();
        let out = fast_sweep_solve(&op.linear_step(&u0, 0.0, tau).unwrap(), &u0, TIGHT).unwrap();
        let u1 = sample_field(&grid, |x, y| exact(x, y, tau)).unwrap();
        let err = out.solution.values().iter().zip(u1.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10, "{err:e}");
    }

    #[test]
    fn one_sweep_solves_one_signed_upwind_rows(
        m in 8usize..200,
        sign in prop_oneof![Just(1.0f64), Just(-1.0)],
        courant in 0.1f64..50.0,
        wobble in 0.0f64..0.9,
    ) {
        let grid = Grid::line(0.0, 1.0, m).unwrap();
        let velocity = VelocityField::sample(&grid, |x, _| (sign * (1.0 + wobble * (7.0 * x).sin()), 0.0)).unwrap();
        let tau = courant * grid.h() / velocity.max_component();
        let (inflow, outflow) = (
            EndCondition::DirichletInflow(Arc::new(|t| 1.0 + t)),
            EndCondition::OutflowExtrapolate,
        );
        let ends = if sign > 0.0 {
            BoundarySpec1D { left: inflow, right: outflow }
        } else {
            BoundarySpec1D { left: outflow, right: inflow }
        };
        let spec = SchemeSpec::preset("siLW1d").unwrap();
        let op = StepOperator::new(&spec, &velocity, tau, &ends.to_boundary(), None).unwrap();
        let u0 = sample_field(&grid, |x, _| (5.0 * x).cos()).unwrap();
        let out = fast_sweep_solve(&op.linear_step(&u0, 0.0, tau).unwrap(), &u0, SweepPolicy::FixedSweeps(1)).unwrap();
        prop_assert!(out.residual <= 1e-12, "{}", out.residual);
    }

    #[test]
    fn toleranced_solution_does_not_depend_on_the_initial_guess(
        kappa in kappa(),
        theta in 0.0f64..=1.0,
        m in 6usize..14,
        courant in 0.1f64..2.5,
        (a, b) in (-1.0f64..1.0, -1.0f64..1.0),
        noise in proptest::collection::vec(-1.0f64..1.0, 225),
    ) {
        let spec = SchemeSpec::new(SchemeFamily::Ctu { theta }, kappa).unwrap();
        let grid = Grid::square(-1.0, 1.0, m).unwrap();
        let velocity = swirl(&grid, a, b);
        let tau = courant * grid.h() / velocity.max_component();
        let boundary = Boundary::exact(|x, y, t| (x + t).sin() * y);
        let op = StepOperator::new(&spec, &velocity, tau, &boundary, None).unwrap();
        let u0 = sample_field(&grid, |x, y| (x + y).cos()).unwrap();
        let step = op.linear_step(&u0, 0.0, tau).unwrap();
        let a_sol = fast_sweep_solve(&step, &u0, TIGHT).unwrap();
        let mut guess = u0.clone();
        for (g, n) in guess.values_mut().iter_mut().zip(&noise) {
            *g += n;
        }
        let b_sol = fast_sweep_solve(&step, &guess, TIGHT).unwrap();
        prop_assume!(a_sol.converged && b_sol.converged);
        let d = a_sol.solution.values().iter().zip(b_sol.solution.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(d < 1e-10, "{d:e}");
    }

    #[test]
    fn symbol_symmetries(
        family in family(),
        kappa in kappa(),
        (c, d) in (-30.0f64..30.0, -30.0f64..30.0),
        (xi, eta) in (-PI..PI, -PI..PI),
    ) {
        let spec = SchemeSpec::new(family, kappa).unwrap();
        let d = if family.dim() == Dim::One { 0.0 } else { d };
        let eta = if family.dim() == Dim::One { 0.0 } else { eta };
        let one = amplification_factor(&spec, c, d, 0.0, 0.0).unwrap();
        prop_assert!((one.re - 1.0).abs() < 1e-12 && one.im.abs() < 1e-12);
        let (Ok(s), Ok(t)) = (
            amplification_factor(&spec, c, d, xi, eta),
            amplification_factor(&spec, c, d, -xi, -eta),
        ) else {
            return Ok(());
        };
        prop_assert!((s - t.conj()).norm() < 1e-9 * (1.0 + s.norm()));
        if kappa.is_sign_symmetric() {
            let r = amplification_factor(&spec, -c, -d, xi, eta).unwrap();
            prop_assert!((r.norm() - t.norm()).abs() < 1e-9 * (1.0 + r.norm()));
        }
    }

    #[test]
    fn config_round_trip(
        case_scheme in prop_oneof![
            Just(("rotation_euclid", "si2d")),
            Just(("exp_velocity", "ctu")),
            Just(("vortex", "si2d")),
            Just(("gauss1d", "si1d")),
            Just(("gauss1d", "fi1d")),
        ],
        kappa in kappa(),
        theta in 0.0f64..=1.0,
        base in 4usize..50,
        levels in 1usize..4,
        rule in prop_oneof![
            Just("M"), Just("2M"), Just("5M/4"), Just("17"),
        ],
        sweeps in 1usize..9,
        tol in proptest::option::of(1e-15f64..1e-3),
        stride in proptest::option::of(1usize..20),
    ) {
        let (case, scheme) = case_scheme;
        let base = base * 4;
        let ms: Vec<String> = (0..levels).map(|k| (base << k).to_string()).collect();
        let mut text = format!("case={case}\nscheme={scheme}\nkappa={}\nM={}\nN={rule}\nsweeps={sweeps}\n", kappa.label(), ms.join(","));
        if scheme == "ctu" {
            text += &format!("theta={theta}\n");
        }
        if let Some(t) = tol {
            text += &format!("tol={t:e}\n");
        }
        if let Some(k) = stride {
            text += &format!("dump_stride={k}\noutput=runs/{case}\n");
        }
        let a: RunConfig = parse_config(&text).unwrap();
        let b = parse_config(&a.to_text()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.steps, rule.parse::<StepRule>().unwrap());
    }
}
