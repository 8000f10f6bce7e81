use std::f64::consts::PI;

use prabhakar_green::oracle::*;
use prabhakar_green::solver::{solve_u, ProblemSpec, SolutionField};
use prabhakar_green::specfun::{kernel_antiderivative_w, recip_gamma, KernelAntiderivative};
use prabhakar_green::{DomainSpec, Error, FracParams, QuadratureSpec, SeriesControl};

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn example_params() -> FracParams {
    FracParams::new(0.8, 0.5, 0.3, 0.5).unwrap()
}

fn domain() -> DomainSpec {
    DomainSpec::new(PI, 2.0).unwrap()
}

fn manufactured(p: FracParams) -> ProblemSpec {
    let w = KernelAntiderivative::new(&p, &ctl()).unwrap();
    ProblemSpec::new(domain(), p)
        .with_tau(f64::sin)
        .with_forcing(move |t, x| x.sin() * (w.eval(t).unwrap() + 1.0 + t))
}

fn manufactured_error(field: &SolutionField) -> f64 {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (i, t) in field.t_nodes.iter().enumerate() {
        for (j, x) in field.x_nodes.iter().enumerate() {
            let exact = (1.0 + t) * x.sin();
            worst = worst.max((field.value(i, j) - exact).abs());
            scale = scale.max(exact.abs());
        }
    }
    worst / scale
}

#[test]
fn grid_geometry() {
    let g = FdGrid::new(8, 5, &domain()).unwrap();
    assert_eq!(g.t_nodes().len(), 8);
    assert_eq!(g.x_nodes().len(), 7);
    assert_eq!(g.x(6), PI);
    assert_eq!(g.t(8), 2.0);
    assert!(FdGrid::new(3, 5, &domain()).is_err());
    assert_eq!(
        FdGrid::from_nodes(&g.t_nodes(), &g.x_nodes(), &domain()).unwrap(),
        g
    );
    assert!(matches!(
        FdGrid::from_nodes(&[0.5, 1.0, 1.2, 2.0], &g.x_nodes(), &domain()),
        Err(Error::GridMismatch(_))
    ));
}

#[test]
fn weights_telescope() {
    let g = FdGrid::new(40, 8, &domain()).unwrap();
    let w = build_weights(&g, &example_params(), &ctl()).unwrap();
    for n in 1..=40 {
        assert!((w.row_sum(n) - w.w_at(n)).abs() <= 1e-12, "n = {n}");
    }
    let single = kernel_antiderivative_w(g.dt, &example_params(), &ctl()).unwrap();
    assert_eq!(w.weight(1, 0), single);
    assert!(!w.has_nonpositive());
}

#[test]
fn weights_reduce_to_l1_when_gamma_vanishes() {
    let beta = 0.3;
    let p = FracParams::new(0.8, beta, 0.0, 0.5).unwrap();
    let g = FdGrid::new(16, 4, &domain()).unwrap();
    let w = build_weights(&g, &p, &ctl()).unwrap();
    let c = recip_gamma(2.0 - beta);
    for n in 1..=16 {
        for j in 0..n {
            let (a, b) = (g.t(n) - g.t(j), g.t(n) - g.t(j + 1));
            let l1 = c * (a.powf(1.0 - beta) - b.powf(1.0 - beta));
            assert!(
                (w.weight(n, j) - l1).abs() <= 1e-12 * l1.abs(),
                "n {n} j {j}"
            );
        }
    }
}

#[test]
fn zero_data_gives_zero_field() {
    let ps = ProblemSpec::new(domain(), example_params());
    let g = FdGrid::new(8, 6, &domain()).unwrap();
    let field = fd_solve(&ps, &g, &ctl()).unwrap();
    assert!(field.values.iter().all(|v| *v == 0.0));
    let op = fd_apply_operator(&field, &g, &example_params(), &ctl()).unwrap();
    assert_eq!(op.max_abs(), 0.0);
}

#[test]
fn manufactured_solution_converges() {
    let ps = manufactured(example_params());
    let coarse = FdGrid::new(32, 16, &domain()).unwrap();
    let fine = FdGrid::new(64, 32, &domain()).unwrap();
    let e_coarse = manufactured_error(&fd_solve(&ps, &coarse, &ctl()).unwrap());
    let e_fine = manufactured_error(&fd_solve(&ps, &fine, &ctl()).unwrap());
    assert!(e_fine <= 2e-2, "{e_fine}");
    assert!(e_coarse / e_fine >= 1.5, "{e_coarse} then {e_fine}");
}

#[test]
fn operator_reproduces_the_forcing_of_its_own_solution() {
    let ps = manufactured(example_params());
    let g = FdGrid::new(16, 10, &domain()).unwrap();
    let field = fd_solve(&ps, &g, &ctl()).unwrap();
    let op = fd_apply_operator(&field, &g, &example_params(), &ctl()).unwrap();
    for (i, &t) in op.t_nodes.iter().enumerate() {
        for (j, &x) in op.x_nodes.iter().enumerate() {
            let f = ps.forcing.eval(t, x);
            assert!((op.value(i, j) - f).abs() <= 1e-9 * f.abs().max(1.0));
        }
    }
}

#[test]
fn operator_rejects_foreign_fields() {
    let ps = ProblemSpec::new(domain(), example_params()).with_tau(f64::sin);
    let g = FdGrid::new(8, 6, &domain()).unwrap();
    let mut field = fd_solve(&ps, &g, &ctl()).unwrap();
    let other = FdGrid::new(8, 7, &domain()).unwrap();
    assert!(matches!(
        fd_apply_operator(&field, &other, &example_params(), &ctl()),
        Err(Error::GridMismatch(_))
    ));
    field.initial = None;
    assert!(matches!(
        fd_apply_operator(&field, &g, &example_params(), &ctl()),
        Err(Error::GridMismatch(_))
    ));
}

/// With `gamma = delta = 0` both methods solve classical time-fractional diffusion.
#[test]
fn agrees_with_the_closed_form_without_prabhakar_weighting() {
    let p = FracParams::new(0.8, 0.5, 0.0, 0.0).unwrap();
    let ps = ProblemSpec::new(domain(), p).with_tau(f64::sin);
    let g = FdGrid::new(64, 31, &domain()).unwrap();
    let fd = fd_solve(&ps, &g, &ctl()).unwrap();
    let (ts, xs) = (g.t_nodes(), g.x_nodes());
    let t_sub: Vec<f64> = ts.iter().copied().step_by(8).collect();
    let x_sub: Vec<f64> = xs.iter().copied().step_by(4).collect();
    let q = QuadratureSpec {
        n_panels: 16,
        ..Default::default()
    };
    let greens = solve_u(&ps, &t_sub, &x_sub, &q, &ctl()).unwrap();
    let diff = greens
        .compare(&fd.restrict(&t_sub, &x_sub).unwrap())
        .unwrap();
    assert!(diff.max_rel <= 5e-2, "{diff:?}");
}

#[test]
fn closed_form_residual_shrinks_under_refinement() {
    let ps = ProblemSpec::new(domain(), example_params()).with_tau(f64::sin);
    let q = QuadratureSpec {
        n_panels: 16,
        ..Default::default()
    };
    let residual = |nt: usize, nx: usize| {
        let g = FdGrid::new(nt, nx, &domain()).unwrap();
        let mut field = solve_u(&ps, &g.t_nodes(), &g.x_nodes(), &q, &ctl()).unwrap();
        field.initial = Some(g.x_nodes().iter().map(|x| x.sin()).collect());
        let op = fd_apply_operator(&field, &g, &example_params(), &ctl()).unwrap();
        // the first steps resolve the t^beta start of u only on fine grids
        let late = op.t_nodes.iter().position(|&t| t >= 1.0).unwrap();
        (late..op.t_nodes.len())
            .flat_map(|i| (0..op.x_nodes.len()).map(move |j| (i, j)))
            .fold(0.0f64, |m, (i, j)| m.max(op.value(i, j).abs()))
    };
    let (coarse, fine) = (residual(8, 7), residual(16, 15));
    assert!(fine < coarse, "{coarse} then {fine}");
}
