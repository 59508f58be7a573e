use serde::{Deserialize, Serialize};

use super::cases::BenchmarkCase;
use super::matching::{match_eigenvalues, MatchReport, DEFAULT_WINDOW};
use crate::assembly::{
    apply_essential_bc, assemble_edge_with, assemble_nodal_potential_with, AssemblyOptions, Materials, SystemPair,
};
use crate::eigensolver::{solve_generalized, Method, SolveOptions, Spectrum};
use crate::error::Error;
use crate::mesh::{
    boundary_dofs, distort_mesh, extract_edges, generate_mesh_with, Domain, ElementKind, Formulation, Mesh, NodalBc,
    Resolution,
};

/// Random node displacement applied before assembly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distortion {
    pub magnitude: f64,
    pub seed: u64,
}

/// Everything that determines a benchmark run besides the case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub kind: ElementKind,
    pub resolution: Resolution,
    #[serde(default)]
    pub nodal_bc: NodalBc,
    #[serde(default)]
    pub distortion: Option<Distortion>,
    pub window_pct: f64,
    pub solve: SolveOptions,
    pub assembly: AssemblyOptions,
}

impl RunSpec {
    pub fn new(kind: ElementKind, resolution: impl Into<Resolution>) -> Self {
        RunSpec {
            kind,
            resolution: resolution.into(),
            nodal_bc: NodalBc::default(),
            distortion: None,
            window_pct: DEFAULT_WINDOW,
            solve: SolveOptions::default(),
            assembly: AssemblyOptions::default(),
        }
    }

    pub fn with_distortion(mut self, magnitude: f64, seed: u64) -> Self {
        self.distortion = Some(Distortion { magnitude, seed });
        self
    }

    pub fn formulation(&self) -> Formulation {
        if self.kind.is_edge() {
            Formulation::Edge
        } else {
            Formulation::NodalPotential(self.nodal_bc)
        }
    }
}

/// Structured outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub case: String,
    pub domain: Domain,
    pub kind: ElementKind,
    pub formulation: String,
    pub resolution: Resolution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion: Option<Distortion>,
    pub cells: usize,
    pub fdof: usize,
    pub zero_count: usize,
    pub infinite_count: usize,
    pub method: Method,
    /// Nonzero finite eigenvalues up to the case cutoff, ascending.
    pub eigenvalues: Vec<f64>,
    pub matches: MatchReport,
}

/// Assembles the pencil of `mesh` and removes the essential boundary dofs.
pub fn assemble_reduced(
    mesh: &Mesh<f64>,
    materials: &Materials,
    formulation: Formulation,
    opts: AssemblyOptions,
) -> Result<SystemPair<f64>, Error> {
    match formulation {
        Formulation::Edge => {
            let edges = extract_edges(mesh)?;
            let sys = assemble_edge_with(mesh, &edges, materials, opts)?;
            let fixed = boundary_dofs(mesh, Some(&edges), formulation)?;
            Ok(apply_essential_bc(&sys, &fixed)?)
        }
        Formulation::NodalPotential(bc) => {
            let sys = assemble_nodal_potential_with(mesh, materials, bc, opts)?;
            let fixed = boundary_dofs(mesh, None, formulation)?;
            Ok(apply_essential_bc(&sys, &fixed)?)
        }
    }
}

/// Mesh of `case` for `spec`, distorted when requested.
pub fn benchmark_mesh(case: &BenchmarkCase, spec: &RunSpec) -> Result<Mesh<f64>, Error> {
    let mesh = generate_mesh_with(&case.domain, spec.kind, spec.resolution)?;
    match spec.distortion {
        Some(d) => Ok(distort_mesh(&mesh, d.magnitude, d.seed)?),
        None => Ok(mesh),
    }
}

/// Generates the mesh, assembles, applies the boundary conditions, solves and matches the
/// nonzero eigenvalues against the case references.
pub fn run_benchmark(case: &BenchmarkCase, spec: &RunSpec) -> Result<(Spectrum, BenchReport), Error> {
    let mesh = benchmark_mesh(case, spec)?;
    run_on_mesh(case, &mesh, spec)
}

/// [`run_benchmark`] on a given mesh; `spec.resolution` and `spec.distortion` are only
/// recorded.
pub fn run_on_mesh(case: &BenchmarkCase, mesh: &Mesh<f64>, spec: &RunSpec) -> Result<(Spectrum, BenchReport), Error> {
    let sys = assemble_reduced(mesh, &case.domain.materials, spec.formulation(), spec.assembly)?;
    run_on_system(case, mesh, &sys, spec)
}

/// Solves an already reduced system of `mesh` and matches its spectrum.
pub fn run_on_system(
    case: &BenchmarkCase,
    mesh: &Mesh<f64>,
    sys: &SystemPair<f64>,
    spec: &RunSpec,
) -> Result<(Spectrum, BenchReport), Error> {
    let spectrum = solve_generalized(sys, &spec.solve)?;
    let eigenvalues: Vec<f64> = spectrum.nonzero().iter().copied().filter(|&v| v <= case.cutoff(spec.window_pct)).collect();
    let matches = match_eigenvalues(&eigenvalues, &case.slots(), spec.window_pct);
    let report = BenchReport {
        case: case.name.clone(),
        domain: case.domain.domain,
        kind: spec.kind,
        formulation: spec.formulation().name().to_string(),
        resolution: spec.resolution,
        distortion: spec.distortion,
        cells: mesh.cell_count(),
        fdof: sys.fdof,
        zero_count: spectrum.zero_count,
        infinite_count: spectrum.infinite_count,
        method: spectrum.method,
        eigenvalues,
        matches,
    };
    Ok((spectrum, report))
}
