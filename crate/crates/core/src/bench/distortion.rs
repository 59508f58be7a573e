use serde::{Deserialize, Serialize};

use super::cases::BenchmarkCase;
use super::run::{run_benchmark, BenchReport, Distortion, RunSpec};
use crate::error::Error;

/// Default node displacement as a fraction of the local edge length.
pub const DEFAULT_MAGNITUDE: f64 = 0.2;
pub const DEFAULT_SEED: u64 = 7;

/// Movement of one reference slot's partner between the two meshes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenShift {
    pub slot: usize,
    pub reference: f64,
    pub normal: f64,
    pub distorted: f64,
    /// `|distorted - normal| / normal * 100`.
    pub shift_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionStudy {
    pub normal: BenchReport,
    pub distorted: BenchReport,
    /// Slots matched on both meshes.
    pub shifts: Vec<EigenShift>,
}

impl DistortionStudy {
    pub fn max_shift_pct(&self) -> f64 {
        self.shifts.iter().fold(0.0, |a, s| a.max(s.shift_pct))
    }

    /// Same missed-singular and spurious counts on both meshes.
    pub fn pattern_preserved(&self) -> bool {
        let (a, b) = (&self.normal.matches, &self.distorted.matches);
        a.missed_singular() == b.missed_singular() && a.spurious.len() == b.spurious.len()
    }
}

/// Runs `spec` on the undistorted mesh and on the same mesh with random interior node
/// displacements of `magnitude`, and pairs the matched eigenvalues slot by slot.
pub fn distortion_study(
    case: &BenchmarkCase,
    spec: &RunSpec,
    magnitude: f64,
    seed: u64,
) -> Result<DistortionStudy, Error> {
    let mut plain = *spec;
    plain.distortion = None;
    let mut moved = *spec;
    moved.distortion = Some(Distortion { magnitude, seed });
    let (_, normal) = run_benchmark(case, &plain)?;
    let (_, distorted) = run_benchmark(case, &moved)?;
    let shifts = normal
        .matches
        .pairs
        .iter()
        .filter_map(|p| {
            let q = distorted.matches.pairs.iter().find(|q| q.slot == p.slot)?;
            Some(EigenShift {
                slot: p.slot,
                reference: p.reference,
                normal: p.computed,
                distorted: q.computed,
                shift_pct: (q.computed - p.computed).abs() / p.computed * 100.0,
            })
        })
        .collect();
    Ok(DistortionStudy {
        normal,
        distorted,
        shifts,
    })
}
