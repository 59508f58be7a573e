use serde::{Deserialize, Serialize};

use super::cases::BenchmarkCase;
use super::run::{assemble_reduced, benchmark_mesh, run_on_system, RunSpec};
use crate::error::Error;
use crate::mesh::{ElementKind, Resolution};

/// Largest system a sweep will build.
pub const DEFAULT_FDOF_CAP: usize = 10_000;

/// Rungs tried before a sweep gives up.
pub const DEFAULT_MAX_LEVELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Error bound in percent; a rung passes when every tracked error is below it.
    pub threshold_pct: f64,
    /// Number of tracked reference slots.
    pub k: usize,
    /// 1-based rank of the first tracked slot.
    pub start: usize,
    pub fdof_cap: usize,
    pub max_levels: usize,
}

impl SweepOptions {
    pub fn new(threshold_pct: f64, k: usize, start: usize) -> Self {
        SweepOptions {
            threshold_pct,
            k,
            start,
            fdof_cap: DEFAULT_FDOF_CAP,
            max_levels: DEFAULT_MAX_LEVELS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepLevel {
    pub level: usize,
    pub resolution: Resolution,
    pub cells: usize,
    pub fdof: usize,
    /// Errors of the tracked slots, `None` where a slot was missed.
    pub errors: Vec<Option<f64>>,
    /// Worst tracked error, `None` if a tracked slot was missed.
    pub max_error: Option<f64>,
    pub spurious: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Achieved,
    /// The next rung exceeds the FDOF cap.
    FdofCap,
    /// The next rung exceeds the dense solver limit.
    DenseLimit,
    /// `max_levels` rungs were tried.
    LevelLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub case: String,
    pub kind: ElementKind,
    pub formulation: String,
    pub options: SweepOptions,
    pub levels: Vec<SweepLevel>,
    /// FDOF of the first rung meeting the threshold.
    pub min_fdof: Option<usize>,
    /// Rung with the smallest worst tracked error as `(fdof, error %)`.
    pub best: Option<(usize, f64)>,
    pub stop: StopReason,
    /// FDOF of the rung that triggered a cap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejected_fdof: Option<usize>,
}

impl SweepResult {
    pub fn achieved(&self) -> bool {
        self.min_fdof.is_some()
    }
}

/// Walks the refinement ladder of `spec.kind` until the tracked errors fall below the
/// threshold or a cap is hit. `spec.resolution` is ignored.
pub fn min_fdof_sweep(case: &BenchmarkCase, spec: &RunSpec, opts: &SweepOptions) -> Result<SweepResult, Error> {
    if !(opts.threshold_pct > 0.0) || opts.k == 0 {
        return Err(Error::Bench("sweep needs a positive threshold and k >= 1".into()));
    }
    let mut out = SweepResult {
        case: case.name.clone(),
        kind: spec.kind,
        formulation: spec.formulation().name().to_string(),
        options: *opts,
        levels: Vec::new(),
        min_fdof: None,
        best: None,
        stop: StopReason::LevelLimit,
        rejected_fdof: None,
    };
    for level in 1..=opts.max_levels {
        let mut run = *spec;
        run.resolution = case.ladder_resolution(spec.kind, level)?;
        let mesh = benchmark_mesh(case, &run)?;
        let sys = assemble_reduced(&mesh, &case.domain.materials, run.formulation(), run.assembly)?;
        if sys.fdof > opts.fdof_cap || sys.fdof > run.solve.n_dense {
            out.stop = if sys.fdof > opts.fdof_cap {
                StopReason::FdofCap
            } else {
                StopReason::DenseLimit
            };
            out.rejected_fdof = Some(sys.fdof);
            break;
        }
        if out.levels.last().is_some_and(|l| l.fdof >= sys.fdof) {
            continue;
        }
        let (_, report) = run_on_system(case, &mesh, &sys, &run)?;
        let m = &report.matches;
        let from = opts.start.max(1) - 1;
        let to = (from + opts.k).min(m.slot_errors.len());
        let errors: Vec<Option<f64>> = m.slot_errors.get(from..to).unwrap_or_default().to_vec();
        let max_error = m.max_error_range(opts.start, opts.k);
        if let Some(e) = max_error {
            if out.best.is_none_or(|(_, b)| e < b) {
                out.best = Some((sys.fdof, e));
            }
        }
        out.levels.push(SweepLevel {
            level,
            resolution: run.resolution,
            cells: report.cells,
            fdof: sys.fdof,
            errors,
            max_error,
            spurious: m.spurious.clone(),
        });
        if max_error.is_some_and(|e| e < opts.threshold_pct) {
            out.min_fdof = Some(sys.fdof);
            out.stop = StopReason::Achieved;
            break;
        }
    }
    Ok(out)
}
