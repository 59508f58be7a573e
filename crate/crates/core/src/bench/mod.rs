//! Benchmark cases, eigenvalue matching and convergence studies.

mod cases;
mod distortion;
mod matching;
mod matrix;
pub mod report;
mod run;
mod sweep;

pub use cases::{find_case, parse_registry, registry, BenchmarkCase, ReferenceSlot, ReferenceValue, REGISTRY_FORMAT};
pub use distortion::{distortion_study, DistortionStudy, EigenShift, DEFAULT_MAGNITUDE, DEFAULT_SEED};
pub use matching::{match_eigenvalues, MatchPair, MatchReport, MissedValue, DEFAULT_WINDOW};
pub use matrix::{par_map, run_matrix, Job};
pub use run::{
    assemble_reduced, benchmark_mesh, run_benchmark, run_on_mesh, run_on_system, BenchReport, Distortion, RunSpec,
};
pub use sweep::{min_fdof_sweep, StopReason, SweepLevel, SweepOptions, SweepResult, DEFAULT_FDOF_CAP, DEFAULT_MAX_LEVELS};
