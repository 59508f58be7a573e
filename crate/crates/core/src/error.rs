use thiserror::Error;

use crate::mesh::ElementKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("element kind {kind:?} is not supported on domain {domain}")]
    UnsupportedKind { domain: String, kind: ElementKind },
    #[error("resolution too coarse for {domain}: {reason}")]
    ResolutionTooSmall { domain: String, reason: String },
    #[error("cell {cell} references missing node {node}")]
    MissingNode { cell: usize, node: usize },
    #[error("cell {cell} has {found} nodes, {kind:?} needs {expected}")]
    NodeCount {
        cell: usize,
        kind: ElementKind,
        expected: usize,
        found: usize,
    },
    #[error("cell {cell} is inverted or degenerate (det J = {det})")]
    Inverted { cell: usize, det: f64 },
    #[error("boundary marker ({cell}, {side}) does not reference an exterior side")]
    BadBoundaryMarker { cell: usize, side: usize },
    #[error("seam pair ({0}, {1}) must join distinct nodes at the same location")]
    BadSeam(usize, usize),
    #[error("non-conforming mesh: {0}")]
    NonConforming(String),
    #[error("distortion magnitude {0} outside [0, 0.3]")]
    BadMagnitude(f64),
    #[error("unknown domain name {0:?}")]
    UnknownDomain(String),
    #[error("unknown element kind {0:?}")]
    UnknownKind(String),
    #[error("mesh file: {0}")]
    Format(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElementError {
    #[error("reference point ({xi}, {eta}) lies outside the reference domain of {kind:?}")]
    OutsideReference { kind: ElementKind, xi: f64, eta: f64 },
    #[error("degenerate geometry: det J = {0}")]
    Degenerate(f64),
    #[error("{kind:?} is not a {expected} element")]
    WrongFamily {
        kind: ElementKind,
        expected: &'static str,
    },
    #[error("expected {expected} values, got {found}")]
    Arity { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("cell {cell}: {source}")]
    Element {
        cell: usize,
        #[source]
        source: ElementError,
    },
    #[error("cell {cell} uses material {material} which is not defined")]
    UnknownMaterial { cell: usize, material: u32 },
    #[error("cell {cell} has kind {kind:?}, which does not belong to the {formulation} formulation")]
    WrongFormulation {
        cell: usize,
        kind: ElementKind,
        formulation: &'static str,
    },
    #[error("constrained dof {0} is out of range")]
    DofOutOfRange(usize),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("system of size {n} exceeds the dense limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("matrix {which} is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { which: &'static str, asymmetry: f64 },
    #[error("K and M have mismatched dimensions")]
    Dimension,
    #[error("eigenvalue {value:e} is negative beyond the zero threshold (indefinite pencil)")]
    Indefinite { value: f64 },
    #[error("{0}")]
    Factorization(String),
}

/// Top-level error for end-to-end runs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{0}")]
    Bench(String),
}

impl Error {
    /// True for failures caused by the numerics (inverted elements, indefinite pencils)
    /// rather than by invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Solver(_)
                | Error::Element(ElementError::Degenerate(_))
                | Error::Mesh(MeshError::Inverted { .. })
                | Error::Assembly(AssemblyError::Element { .. })
        )
    }
}
