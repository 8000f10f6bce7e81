use std::io::Write;
use std::path::PathBuf;

use prabhakar_green::oracle::{fd_solve, FdGrid};
use prabhakar_green::solver::{solve_u, FieldDiff, Method, SolutionField};
use prabhakar_green::FracParams;

use crate::checks::{self, Settings};
use crate::config::{Mode, RunConfig};
use crate::csv::{emit_csv, format_value};
use crate::CliError;

/// What a run produced.
#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    /// Greens-vs-oracle discrepancy per `beta`, in method `both`.
    pub diffs: Vec<(f64, FieldDiff)>,
}

/// `u` on the output grid of `cfg` by one method.
///
/// The oracle runs on the output grid refined `oracle_refine` times and is
/// sampled back onto the output nodes.
pub fn compute(cfg: &RunConfig, p: FracParams, method: Method) -> Result<SolutionField, CliError> {
    let ps = cfg.problem(p);
    let (ts, xs) = cfg.output_nodes();
    match method {
        Method::Greens => Ok(solve_u(&ps, &ts, &xs, &cfg.quadrature, &cfg.series)?),
        Method::Oracle => {
            let r = cfg.oracle_refine;
            let grid = FdGrid::new(cfg.nt * r, (cfg.nx - 1) * r - 1, &cfg.domain)?;
            let mut field = fd_solve(&ps, &grid, &cfg.series)?.restrict(&ts, &xs)?;
            // the restricted nodes agree to rounding; write the canonical ones
            field.t_nodes = ts;
            field.x_nodes = xs;
            Ok(field)
        }
    }
}

pub fn file_name(mode: Mode, beta: f64, method: Method) -> String {
    format!("{}_beta{beta}_{method}.csv", mode.name())
}

/// Runs `cfg`, reporting progress to `log`.
pub fn run(cfg: &RunConfig, log: &mut dyn Write) -> Result<RunSummary, CliError> {
    if cfg.mode == Mode::Verify {
        let failed = checks::run_suite(&Settings::from_config(cfg), log);
        return if failed.is_empty() {
            Ok(RunSummary::default())
        } else {
            Err(CliError::Verify(failed))
        };
    }
    std::fs::create_dir_all(&cfg.out).map_err(|source| CliError::Io {
        path: cfg.out.clone(),
        source,
    })?;
    let mut summary = RunSummary::default();
    for &p in &cfg.params {
        let mut fields = Vec::new();
        for &method in cfg.method.methods() {
            let field = compute(cfg, p, method)?;
            for flag in &field.meta.flags {
                writeln!(log, "warning: beta {} {method}: {flag}", p.beta()).ok();
            }
            let path = cfg.out.join(file_name(cfg.mode, p.beta(), method));
            emit_csv(&field, &path)?;
            writeln!(log, "wrote {}", path.display()).ok();
            summary.files.push(path);
            fields.push(field);
        }
        if let [greens, oracle] = &fields[..] {
            let diff = greens.compare(oracle)?;
            writeln!(
                log,
                "beta {}: greens vs oracle max_abs {:.3e} max_rel {:.3e}",
                p.beta(),
                diff.max_abs,
                diff.max_rel
            )
            .ok();
            summary.diffs.push((p.beta(), diff));
        }
    }
    if !summary.diffs.is_empty() {
        let path = cfg.out.join(format!("{}_diff.csv", cfg.mode.name()));
        let mut text = String::from("beta,max_abs,max_rel\n");
        for (beta, d) in &summary.diffs {
            text += &format!(
                "{},{},{}\n",
                format_value(*beta),
                format_value(d.max_abs),
                format_value(d.max_rel)
            );
        }
        std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        writeln!(log, "wrote {}", path.display()).ok();
        summary.files.push(path);
    }
    Ok(summary)
}
