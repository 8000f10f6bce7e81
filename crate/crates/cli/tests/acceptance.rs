//! Acceptance criteria, one `PASS`/`FAIL` line each with the measured numbers
//! indented below. Exits nonzero on a failed criterion only with
//! `ACCEPTANCE_STRICT=1`, so that `cargo test --workspace` still runs the
//! other suites.

use std::process::{Command, ExitCode};
use std::time::Instant;

use prabhakar_cli::checks::{self, Outcome, Settings};
use prabhakar_cli::config::{Mode, RunArgs, RunConfig};
use prabhakar_cli::csv::parse_csv;
use prabhakar_cli::run::{compute, file_name};

type Parts = Vec<(&'static str, Outcome)>;
type Criterion = fn(&Settings) -> Parts;

fn outcome(r: prabhakar_green::Result<Outcome>) -> Outcome {
    r.unwrap_or_else(|e| Outcome {
        pass: false,
        detail: format!("error: {e}"),
    })
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn special_functions(s: &Settings) -> Parts {
    vec![
        (
            "gamma = 0 reduction",
            outcome(checks::gamma_zero_reduction(s)),
        ),
        ("E^1_{1,1} = exp", outcome(checks::exp_reduction(s))),
        ("Wright beta = 0", outcome(checks::wright_beta_zero(s))),
        ("Vandermonde", outcome(checks::vandermonde_identity(s))),
        ("Cauchy regrouping", outcome(checks::cauchy_regrouping(s))),
    ]
}

fn operators(s: &Settings) -> Parts {
    vec![
        ("RL / Caputo relation", outcome(checks::relation_basket(s))),
        (
            "gamma = 0 Caputo powers",
            outcome(checks::caputo_classical_powers(s)),
        ),
        ("decay exponent", outcome(checks::decay_exponent(s))),
    ]
}

fn kernels(s: &Settings) -> Parts {
    vec![
        ("walls", outcome(checks::green_walls(s))),
        ("symmetry", outcome(checks::green_symmetry(s))),
        ("translation", outcome(checks::green_translation(s))),
        ("G~ dual path", outcome(checks::tilde_dual_path(s))),
        ("image tail", outcome(checks::image_tail(s))),
    ]
}

fn manufactured(s: &Settings) -> Parts {
    vec![
        (
            "Green's function 11 x 11",
            outcome(checks::manufactured_greens(s)),
        ),
        ("oracle 64/32", outcome(checks::fd_convergence(s))),
    ]
}

/// Each `(example, beta)` is timed against the 60 s budget.
fn cross_method(s: &Settings) -> Parts {
    let mut parts = Vec::new();
    for mode in [Mode::Example1, Mode::Example2] {
        for &beta in &s.betas {
            let start = Instant::now();
            let o = outcome(checks::cross_method_case(s, mode, beta).map(|(d, r)| {
                let secs = start.elapsed().as_secs_f64();
                Outcome {
                    pass: d.max_rel <= s.cross_tol && r.max_rel < d.max_rel && secs <= 60.0,
                    detail: format!(
                        "beta {beta}: max rel {:.2e} at 64/32 (tol 5e-2), {:.2e} against the refined oracle, {secs:.1} s",
                        d.max_rel, r.max_rel
                    ),
                }
            }));
            parts.push((mode.name(), o));
        }
    }
    parts
}

fn attainment(s: &Settings) -> Parts {
    let mut parts = vec![("walls", outcome(checks::example_walls(s)))];
    for &beta in &s.betas {
        let o = outcome(checks::initial_errors(s, beta).map(|[coarse, fine]| Outcome {
            pass: fine <= 2e-2 && fine < coarse,
            detail: format!(
                "beta {beta}: max |u - tau| {coarse:.3e} at t = 1e-2, {fine:.3e} at t = 1e-3 (tol 2e-2)"
            ),
        }));
        parts.push(("initial", o));
    }
    parts
}

fn trends(s: &Settings) -> Parts {
    vec![
        ("example 1 decay", outcome(checks::beta_decay(s))),
        ("example 2 growth", outcome(checks::beta_growth(s))),
    ]
}

/// Two identical invocations of the binary, then every file parsed back and
/// compared bit for bit with the library's own field.
fn cli_determinism(_: &Settings) -> Parts {
    let args = [
        "--mode", "example1", "--beta", "0.5", "--method", "both", "--nt", "6", "--nx", "7",
    ];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_pgreen"))
            .arg("run")
            .args(args)
            .arg("--out")
            .arg(dir.path())
            .output()
            .expect("binary runs");
        if !status.status.success() {
            let detail = String::from_utf8_lossy(&status.stderr).into_owned();
            return vec![(
                "run",
                Outcome {
                    pass: false,
                    detail,
                },
            )];
        }
    }
    let cfg = RunConfig::resolve(RunArgs {
        mode: Some(Mode::Example1),
        beta: vec![0.5],
        nt: Some(6),
        nx: Some(7),
        ..Default::default()
    })
    .unwrap();
    let mut parts = Vec::new();
    for method in [
        prabhakar_green::solver::Method::Greens,
        prabhakar_green::solver::Method::Oracle,
    ] {
        let name = file_name(Mode::Example1, 0.5, method);
        let [a, b] = [0, 1].map(|i| std::fs::read(dirs[i].path().join(&name)).unwrap_or_default());
        parts.push((
            "byte-identical",
            Outcome {
                pass: !a.is_empty() && a == b,
                detail: format!("{name}: {} bytes, runs equal: {}", a.len(), a == b),
            },
        ));
        let field = compute(&cfg, cfg.params[0], method).unwrap();
        let round_trip = parse_csv(&String::from_utf8_lossy(&a)).map(|g| {
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            bits(&g.t_nodes) == bits(&field.t_nodes)
                && bits(&g.x_nodes) == bits(&field.x_nodes)
                && bits(&g.values) == bits(&field.values)
        });
        parts.push((
            "round trip",
            Outcome {
                pass: matches!(round_trip, Ok(true)),
                detail: format!(
                    "{name}: parsed grid equals the computed field bitwise: {round_trip:?}"
                ),
            },
        ));
    }
    parts
}

fn main() -> ExitCode {
    let s = Settings::default();
    let criteria: [(&str, Criterion); 8] = [
        ("special-function identities", special_functions),
        ("operator suite", operators),
        ("kernel suite", kernels),
        ("manufactured solution", manufactured),
        ("cross-method equivalence", cross_method),
        ("boundary and initial attainment", attainment),
        ("qualitative beta trends", trends),
        ("CLI determinism and CSV round trip", cli_determinism),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let parts = criterion(&s);
        let pass = parts.iter().all(|(_, o)| o.pass);
        println!("{} {name}", mark(pass));
        for (label, o) in &parts {
            println!("    {} {label}: {}", mark(o.pass), o.detail);
        }
        failed += usize::from(!pass);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    // a report by default; ACCEPTANCE_STRICT=1 turns failures into a nonzero exit
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
