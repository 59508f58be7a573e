//! Finite-element eigenanalysis of 2D electromagnetic cavities: nodal potential and
//! curl-conforming edge discretisations of `curl (1/mu_r) curl E = k0^2 eps_r E`, a dense
//! generalized eigensolver and a benchmark harness for spurious-mode and convergence studies.
//!
//! Mesh, element and assembly code is generic over [`Scalar`] (`f32` or `f64`); the
//! eigensolver and the benchmark harness work in `f64`.

pub mod assembly;
pub mod bench;
pub mod eigensolver;
pub mod elements;
pub mod error;
pub mod mesh;
pub mod scalar;

pub use error::{AssemblyError, ElementError, Error, MeshError, SolverError};
pub use scalar::{Scalar, Vec2};

pub type Mesh64 = mesh::Mesh<f64>;
pub type Mesh32 = mesh::Mesh<f32>;
pub type EdgeConnectivity64 = mesh::EdgeConnectivity<f64>;
pub type EdgeConnectivity32 = mesh::EdgeConnectivity<f32>;
pub type SystemPair64 = assembly::SystemPair<f64>;
pub type SystemPair32 = assembly::SystemPair<f32>;
pub type CscMatrix64 = assembly::CscMatrix<f64>;
pub type GeometryMap64 = elements::GeometryMap<f64>;
pub type RefPoint64 = elements::RefPoint<f64>;
