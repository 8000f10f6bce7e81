use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use prabhakar_cli::config::{Mode, RunArgs, RunConfig};
use prabhakar_cli::csv::{parse_csv, write_field};
use prabhakar_cli::run::compute;
use prabhakar_green::solver::Method;
use tempfile::TempDir;

fn pgreen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgreen"))
        .arg("run")
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = vec!["--out", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    let out = pgreen(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(String::from)
        .collect()
}

#[test]
fn single_node_of_a_zero_problem() {
    let dir = TempDir::new().unwrap();
    run_in(
        dir.path(),
        &[
            "--mode", "custom", "--beta", "0.5", "--nt", "1", "--nx", "1",
        ],
    );
    let rows = lines(&dir.path().join("custom_beta0.5_greens.csv"));
    assert_eq!(rows, vec!["t,x,u".to_string(), format!("2,{},0", PI / 2.0)]);
}

#[test]
fn zero_data_gives_a_zero_grid() {
    let dir = TempDir::new().unwrap();
    run_in(
        dir.path(),
        &[
            "--mode", "custom", "--beta", "0.3", "--nt", "4", "--nx", "6",
        ],
    );
    let text = fs::read_to_string(dir.path().join("custom_beta0.3_greens.csv")).unwrap();
    let grid = parse_csv(&text).unwrap();
    assert_eq!((grid.t_nodes.len(), grid.x_nodes.len()), (4, 6));
    assert!(grid.values.iter().all(|v| *v == 0.0));
}

#[test]
fn example_grid_has_one_row_per_node() {
    let dir = TempDir::new().unwrap();
    run_in(
        dir.path(),
        &[
            "--mode", "example1", "--beta", "0.5", "--nt", "21", "--nx", "21",
        ],
    );
    let rows = lines(&dir.path().join("example1_beta0.5_greens.csv"));
    assert_eq!(rows.len(), 442);
    assert!(rows.iter().all(|r| !r.contains('\r')));
}

#[test]
fn emitted_grid_reads_back_bitwise() {
    let cfg = RunConfig::resolve(RunArgs {
        mode: Some(Mode::Example1),
        beta: vec![0.9],
        nt: Some(5),
        nx: Some(7),
        ..Default::default()
    })
    .unwrap();
    let field = compute(&cfg, cfg.params[0], Method::Greens).unwrap();
    let mut bytes = Vec::new();
    write_field(&field, &mut bytes).unwrap();
    let grid = parse_csv(std::str::from_utf8(&bytes).unwrap()).unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&grid.t_nodes), bits(&field.t_nodes));
    assert_eq!(bits(&grid.x_nodes), bits(&field.x_nodes));
    assert_eq!(bits(&grid.values), bits(&field.values));
}

#[test]
fn source_driven_field_accumulates() {
    let dir = TempDir::new().unwrap();
    run_in(
        dir.path(),
        &[
            "--mode", "example2", "--beta", "0.9", "--nt", "11", "--nx", "9",
        ],
    );
    let text = fs::read_to_string(dir.path().join("example2_beta0.9_greens.csv")).unwrap();
    let grid = parse_csv(&text).unwrap();
    for j in 0..grid.x_nodes.len() {
        for i in 1..grid.t_nodes.len() {
            assert!(
                grid.value(i, j) >= grid.value(i - 1, j),
                "x = {}, t = {}",
                grid.x_nodes[j],
                grid.t_nodes[i]
            );
        }
    }
}

#[test]
fn both_methods_write_a_diff_summary() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "--mode", "example1", "--beta", "0.5", "--method", "both", "--nt", "16", "--nx", "9",
        ],
    );
    for name in ["example1_beta0.5_greens.csv", "example1_beta0.5_oracle.csv"] {
        assert_eq!(lines(&dir.path().join(name)).len(), 1 + 16 * 9);
    }
    let summary = lines(&dir.path().join("example1_diff.csv"));
    assert_eq!(summary[0], "beta,max_abs,max_rel");
    let max_rel: f64 = summary[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!(max_rel <= 5e-2, "{max_rel}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("max_rel"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("run.conf");
    fs::write(
        &config,
        "# coarse sweep\nmode = example2\nbeta = 0.5\nnt = 3\nnx = 5\n",
    )
    .unwrap();
    run_in(
        dir.path(),
        &["--config", config.to_str().unwrap(), "--nt", "2"],
    );
    assert_eq!(
        lines(&dir.path().join("example2_beta0.5_greens.csv")).len(),
        1 + 2 * 5
    );
}

#[test]
fn custom_expressions_reach_the_solver() {
    let dir = TempDir::new().unwrap();
    run_in(
        dir.path(),
        &[
            "--mode", "custom", "--beta", "0.5", "--nt", "2", "--nx", "3", "--tau", "cos(x)",
            "--phi0", "1", "--phi1", "-1",
        ],
    );
    let text = fs::read_to_string(dir.path().join("custom_beta0.5_greens.csv")).unwrap();
    let grid = parse_csv(&text).unwrap();
    for i in 0..2 {
        assert_eq!(grid.value(i, 0), 1.0);
        assert_eq!(grid.value(i, 2), -1.0);
    }
}

#[test]
fn invalid_configurations_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad_file = dir.path().join("bad.conf");
    fs::write(&bad_file, "mode = example1\nspeed = 3\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["--mode", "example1", "--beta", "1"],
        vec!["--mode", "example1", "--a", "-1"],
        vec!["--mode", "custom", "--tau", "sin(t)"],
        vec!["--mode", "custom", "--phi0", "1"],
        vec!["--mode", "example2", "--forcing", "x"],
        vec!["--mode", "example1", "--method", "oracle", "--nx", "2"],
        vec!["--config", bad_file.to_str().unwrap()],
        vec!["--mode", "verify", "--verify-tol", "0"],
    ];
    for args in cases {
        let out = pgreen(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_failures_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = pgreen(&[
        "--mode",
        "custom",
        "--nt",
        "1",
        "--nx",
        "1",
        "--out",
        blocker.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("file"));
}

#[test]
fn failed_verification_exits_with_one_and_names_the_check() {
    let out = pgreen(&[
        "--mode",
        "verify",
        "--beta",
        "0.5",
        "--nt",
        "8",
        "--nx",
        "8",
        "--verify-tol",
        "1e-9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("FAIL  oracle    greens vs oracle"),
        "{stdout}"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("greens vs oracle"));
}
