use std::f64::consts::PI;

use prabhakar_green::oracle::FdGrid;
use prabhakar_green::solver::*;
use prabhakar_green::specfun::KernelAntiderivative;
use prabhakar_green::{DomainSpec, Error, FracParams, QuadratureSpec, SeriesControl};

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn q() -> QuadratureSpec {
    QuadratureSpec {
        n_panels: 16,
        ..Default::default()
    }
}

fn params(beta: f64) -> FracParams {
    FracParams::new(0.8, beta, 0.3, 0.5).unwrap()
}

fn domain() -> DomainSpec {
    DomainSpec::new(PI, 2.0).unwrap()
}

fn manufactured(beta: f64) -> ProblemSpec {
    let p = params(beta);
    let w = KernelAntiderivative::new(&p, &ctl()).unwrap();
    ProblemSpec::new(domain(), p)
        .with_tau(f64::sin)
        .with_forcing(move |t, x| x.sin() * (w.eval(t).unwrap() + 1.0 + t))
}

fn example1(beta: f64) -> ProblemSpec {
    ProblemSpec::new(domain(), params(beta)).with_tau(f64::sin)
}

fn example2(beta: f64) -> ProblemSpec {
    ProblemSpec::new(domain(), params(beta)).with_forcing(|t, x| t * x.sin())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn zero_data_gives_zero_field() {
    let ps = ProblemSpec::new(domain(), params(0.5));
    let field = solve_u(&ps, &[0.5, 1.0, 2.0], &linspace(0.0, PI, 5), &q(), &ctl()).unwrap();
    assert!(field.values.iter().all(|v| *v == 0.0));
    assert_eq!(field.method, Method::Greens);
    assert_eq!(solve_y(&ps, 1.0, 1.0, &q(), &ctl()).unwrap(), 0.0);
    assert_eq!(solve_z(&ps, 1.0, 1.0, &ctl()).unwrap(), 0.0);

    let report = verify_solution(&ps, &field, &ctl()).unwrap();
    assert_eq!(report.boundary_error, 0.0);
    assert_eq!(report.initial_error, 0.0);
}

#[test]
fn manufactured_solution_is_reproduced() {
    let ts: Vec<f64> = (1..=11).map(|i| 2.0 * i as f64 / 11.0).collect();
    let xs = linspace(0.0, PI, 11);
    for beta in [0.1, 0.5, 0.9] {
        let field = solve_u(&manufactured(beta), &ts, &xs, &q(), &ctl()).unwrap();
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (i, t) in ts.iter().enumerate() {
            for (j, x) in xs.iter().enumerate() {
                let exact = (1.0 + t) * x.sin();
                worst = worst.max((field.value(i, j) - exact).abs());
                scale = scale.max(exact.abs());
            }
        }
        assert!(worst / scale <= 1e-2, "beta {beta}: {}", worst / scale);
    }
}

#[test]
fn manufactured_field_passes_verification() {
    let grid = FdGrid::new(20, 19, &domain()).unwrap();
    let ps = manufactured(0.5);
    let field = solve_u(&ps, &grid.t_nodes(), &grid.x_nodes(), &q(), &ctl()).unwrap();
    let report = verify_solution(&ps, &field, &ctl()).unwrap();
    assert!(report.boundary_error <= 1e-8, "{report:?}");
    let scaled = report.scaled_residual().unwrap();
    assert!(scaled <= 5e-2, "{report:?}");
}

#[test]
fn superposition_of_data() {
    let p = params(0.5);
    let first = ProblemSpec::new(domain(), p).with_tau(f64::sin);
    let second = ProblemSpec::new(domain(), p)
        .with_phi0(|t| t)
        .with_phi1(|t| t * t)
        .with_forcing(|t, x| x * t);
    let both = ProblemSpec::new(domain(), p)
        .with_tau(f64::sin)
        .with_phi0(|t| t)
        .with_phi1(|t| t * t)
        .with_forcing(|t, x| x * t);
    let (ts, xs) = ([0.3, 1.1, 2.0], [0.0, 0.4, 1.6, 2.9, PI]);
    let u1 = solve_u(&first, &ts, &xs, &q(), &ctl()).unwrap();
    let u2 = solve_u(&second, &ts, &xs, &q(), &ctl()).unwrap();
    let u = solve_u(&both, &ts, &xs, &q(), &ctl()).unwrap();
    for k in 0..u.values.len() {
        let sum = u1.values[k] + u2.values[k];
        assert!(
            (u.values[k] - sum).abs() <= 1e-9,
            "node {k}: {} vs {sum}",
            u.values[k]
        );
    }
}

#[test]
fn boundary_data_is_attained() {
    let ps = ProblemSpec::new(domain(), params(0.5)).with_phi0(|_| 1.0);
    let errors: Vec<f64> = [1e-2, 1e-3]
        .iter()
        .map(|k| (solve_y(&ps, 1.0, k * PI, &q(), &ctl()).unwrap() - 1.0).abs())
        .collect();
    assert!(errors[1] < errors[0], "{errors:?}");
    assert!(errors[1] <= 2e-2, "{errors:?}");
}

#[test]
fn initial_data_is_attained_for_large_beta() {
    let ps = example1(0.9);
    let xs = linspace(0.0, PI, 9);
    let error_at = |t: f64| {
        xs.iter().fold(0.0f64, |m, &x| {
            m.max((solve_z(&ps, t, x, &ctl()).unwrap() - x.sin()).abs())
        })
    };
    let (coarse, fine) = (error_at(1e-2), error_at(1e-3));
    assert!(fine < coarse, "{coarse} then {fine}");
    assert!(fine <= 2e-2, "{fine}");
}

#[test]
fn decay_and_growth_follow_beta() {
    let betas = [0.1, 0.5, 0.9];
    let decay: Vec<f64> = betas
        .iter()
        .map(|&b| solve_z(&example1(b), 2.0, PI / 2.0, &ctl()).unwrap())
        .collect();
    assert!(decay.windows(2).all(|w| w[1] < w[0]), "{decay:?}");
    let growth: Vec<f64> = betas
        .iter()
        .map(|&b| solve_y(&example2(b), 2.0, PI / 2.0, &q(), &ctl()).unwrap())
        .collect();
    assert!(growth.windows(2).all(|w| w[1] > w[0]), "{growth:?}");
}

#[test]
fn example_fields_vanish_on_the_walls() {
    let ps = example1(0.5);
    let field = solve_u(&ps, &[0.1, 1.0, 2.0], &linspace(0.0, PI, 7), &q(), &ctl()).unwrap();
    let report = verify_solution(&ps, &field, &ctl()).unwrap();
    assert!(report.boundary_error <= 1e-8, "{report:?}");
    // not a uniform grid from t = 0, so there is no residual
    assert_eq!(report.residual, None);
}

#[test]
fn rejects_incompatible_data_and_bad_points() {
    let ps = ProblemSpec::new(domain(), params(0.5)).with_phi0(|_| 1.0);
    assert!(matches!(
        solve_u(&ps, &[1.0], &[0.0, 1.0], &q(), &ctl()),
        Err(Error::InvalidParameter(_))
    ));
    let ps = example1(0.5);
    assert!(solve_z(&ps, 0.0, 1.0, &ctl()).is_err());
    assert!(solve_y(&ps, 1.0, 0.0, &q(), &ctl()).is_err());
    assert!(solve_u(&ps, &[1.0, 0.5], &[1.0], &q(), &ctl()).is_err());
    assert!(solve_u(&ps, &[3.0], &[1.0], &q(), &ctl()).is_err());
}

#[test]
fn field_comparison_and_restriction() {
    let ps = example1(0.9);
    let xs = linspace(0.0, PI, 5);
    let field = solve_u(&ps, &[0.5, 1.0], &xs, &q(), &ctl()).unwrap();
    let diff = field.compare(&field).unwrap();
    assert_eq!(diff.max_abs, 0.0);
    let sub = field.restrict(&[1.0], &[xs[2]]).unwrap();
    assert_eq!(sub.values, vec![field.value(1, 2)]);
    assert!(field.restrict(&[0.7], &[xs[2]]).is_err());
}
