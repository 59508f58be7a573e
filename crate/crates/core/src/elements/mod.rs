//! Reference elements: Lagrange bases, the isoparametric map and curl-conforming edge bases.

mod edge;
pub(crate) mod geometry;
pub(crate) mod lagrange;

pub use edge::{
    edge_interpolant, edge_interpolant_ref, eval_edge_shape, eval_edge_shape_fd, eval_edge_shape_ref, local_edges,
    EdgeShapeEval, LocalEdge, FD_STEP,
};
pub use geometry::{geometry_map, GeometryMap};
pub use lagrange::{eval_nodal_shape, physical_gradients, NodalRefEval, NodalShapeEval};

use crate::error::ElementError;
use crate::mesh::ElementKind;
use crate::scalar::Scalar;

/// Tolerance used when testing whether a point lies in the reference domain.
pub const REFERENCE_TOL: f64 = 1e-10;

/// Point in reference coordinates. Quadrilaterals use `[-1, 1]^2`; triangles use the unit
/// simplex with third coordinate `alpha = 1 - xi - eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefPoint<T> {
    pub xi: T,
    pub eta: T,
}

impl<T: Scalar> RefPoint<T> {
    pub fn new(xi: T, eta: T) -> Self {
        RefPoint { xi, eta }
    }

    pub fn alpha(&self) -> T {
        T::one() - self.xi - self.eta
    }

    pub fn contains(&self, kind: ElementKind) -> bool {
        let tol = T::lit(REFERENCE_TOL).max(T::epsilon() * T::lit(8.0));
        let one = T::one();
        if kind.is_quad() {
            self.xi.abs() <= one + tol && self.eta.abs() <= one + tol
        } else {
            self.xi >= -tol && self.eta >= -tol && self.alpha() >= -tol
        }
    }

    pub(crate) fn check(&self, kind: ElementKind) -> Result<(), ElementError> {
        if self.contains(kind) {
            Ok(())
        } else {
            Err(ElementError::OutsideReference {
                kind,
                xi: self.xi.to_f64_lossy(),
                eta: self.eta.to_f64_lossy(),
            })
        }
    }
}

/// Reference coordinates of the nodes of the geometry layout used by `kind`.
pub fn reference_nodes(kind: ElementKind) -> &'static [[f64; 2]] {
    const Q4: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
    const Q9: [[f64; 2]; 9] = [
        [-1.0, -1.0],
        [1.0, -1.0],
        [1.0, 1.0],
        [-1.0, 1.0],
        [0.0, -1.0],
        [1.0, 0.0],
        [0.0, 1.0],
        [-1.0, 0.0],
        [0.0, 0.0],
    ];
    const T3: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    const T6: [[f64; 2]; 6] = [
        [0.0, 0.0],
        [1.0, 0.0],
        [0.0, 1.0],
        [0.5, 0.0],
        [0.5, 0.5],
        [0.0, 0.5],
    ];
    match kind.geometry_kind() {
        ElementKind::Q4 => &Q4,
        ElementKind::Q9 => &Q9,
        ElementKind::T3 => &T3,
        _ => &T6,
    }
}

/// Reference area: 4 for the square, 1/2 for the triangle.
pub fn reference_area(kind: ElementKind) -> f64 {
    if kind.is_quad() {
        4.0
    } else {
        0.5
    }
}

pub(crate) fn require_nodal(kind: ElementKind) -> Result<(), ElementError> {
    if kind.is_edge() {
        Err(ElementError::WrongFamily {
            kind,
            expected: "nodal",
        })
    } else {
        Ok(())
    }
}

pub(crate) fn require_edge(kind: ElementKind) -> Result<(), ElementError> {
    if kind.is_edge() {
        Ok(())
    } else {
        Err(ElementError::WrongFamily {
            kind,
            expected: "edge",
        })
    }
}
