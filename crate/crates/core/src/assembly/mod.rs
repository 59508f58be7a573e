//! Quadrature, element matrices, global sparse assembly and boundary reduction.

mod bc;
mod edge;
mod gradient;
mod mtx;
mod nodal;
mod quadrature;
mod sparse;

pub use bc::apply_essential_bc;
pub use edge::{assemble_edge, assemble_edge_with, edge_element_matrices};
pub use gradient::{discrete_gradient, evaluate_edge_field, interpolate_edge_field};
pub use mtx::{read_matrix_market, write_matrix_market};
pub use nodal::{assemble_nodal_potential, assemble_nodal_potential_with, nodal_element_matrices};
pub use quadrature::{
    gauss_legendre, gauss_square, quadrature_rule, refined_rule, triangle_collapsed, QuadratureRule,
};
pub use sparse::CscMatrix;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::AssemblyError;
use crate::mesh::{Cell, Formulation, MaterialRegion};
use crate::scalar::Scalar;

/// Material table: material id to constants.
pub type Materials = BTreeMap<u32, MaterialRegion>;

/// How edge-element curls are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurlMode {
    #[default]
    Analytic,
    /// Central differences with step [`crate::elements::FD_STEP`].
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureOrder {
    #[default]
    Default,
    /// About twice the default degree.
    Refined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyOptions {
    pub curl: CurlMode,
    pub quadrature: QuadratureOrder,
    /// Compute element matrices on the rayon pool (the scatter is always sequential).
    pub parallel: bool,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions {
            curl: CurlMode::Analytic,
            quadrature: QuadratureOrder::Default,
            parallel: true,
        }
    }
}

impl AssemblyOptions {
    pub(crate) fn rule<T: Scalar>(&self, kind: crate::mesh::ElementKind) -> QuadratureRule<T> {
        match self.quadrature {
            QuadratureOrder::Default => quadrature_rule(kind),
            QuadratureOrder::Refined => refined_rule(kind),
        }
    }
}

/// What a global degree of freedom represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DofKind {
    /// Component 0 or 1 of A at a node (Cartesian, or normal/tangent at a wall node).
    A(u8),
    Phi,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DofInfo {
    pub kind: DofKind,
    /// Node id (nodal dofs) or global edge id (edge dofs).
    pub entity: usize,
    /// Dof id before boundary reduction.
    pub original: usize,
}

/// Stiffness and mass matrices with their dof map.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemPair<T> {
    pub k: CscMatrix<T>,
    pub m: CscMatrix<T>,
    pub dof_map: Vec<DofInfo>,
    pub formulation: Formulation,
    /// Free dofs, equal to the matrix dimension.
    pub fdof: usize,
}

impl<T: Scalar> SystemPair<T> {
    pub fn is_empty(&self) -> bool {
        self.fdof == 0
    }
}

pub(crate) fn material_of(materials: &Materials, c: usize, cell: &Cell) -> Result<MaterialRegion, AssemblyError> {
    materials
        .get(&cell.material)
        .copied()
        .ok_or(AssemblyError::UnknownMaterial {
            cell: c,
            material: cell.material,
        })
}

/// Dense element block with its global dof ids.
pub(crate) struct ElementBlock<T> {
    pub dofs: Vec<usize>,
    pub k: Vec<T>,
    pub m: Vec<T>,
}

/// Computes element blocks (optionally in parallel) and scatters them in cell order.
pub(crate) fn scatter<T: Scalar, F>(
    ncells: usize,
    ndofs: usize,
    parallel: bool,
    element: F,
) -> Result<(CscMatrix<T>, CscMatrix<T>), AssemblyError>
where
    F: Fn(usize) -> Result<ElementBlock<T>, AssemblyError> + Sync,
{
    use rayon::prelude::*;
    let blocks: Vec<ElementBlock<T>> = if parallel {
        (0..ncells).into_par_iter().map(&element).collect::<Result<_, _>>()?
    } else {
        (0..ncells).map(&element).collect::<Result<_, _>>()?
    };
    let mut kt = Vec::new();
    let mut mt = Vec::new();
    for b in &blocks {
        let n = b.dofs.len();
        for (a, &ga) in b.dofs.iter().enumerate() {
            for (c, &gc) in b.dofs.iter().enumerate() {
                let (kv, mv) = (b.k[a * n + c], b.m[a * n + c]);
                if kv != T::zero() {
                    kt.push((ga, gc, kv));
                }
                if mv != T::zero() {
                    mt.push((ga, gc, mv));
                }
            }
        }
    }
    Ok((
        CscMatrix::from_triplets(ndofs, ndofs, &kt),
        CscMatrix::from_triplets(ndofs, ndofs, &mt),
    ))
}
