use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::MeshError;

/// Element families. Nodal kinds carry Lagrange potentials, edge kinds carry tangential
/// field values; every edge kind reuses the node layout of a nodal kind for its geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ElementKind {
    Q4,
    Q9,
    T6,
    /// Affine three-node triangle (geometry of ET3, or a linear nodal element).
    T3,
    EQ4,
    EQ12,
    ET8,
    ET3,
}

impl ElementKind {
    pub const ALL: [ElementKind; 8] = [
        ElementKind::Q4,
        ElementKind::Q9,
        ElementKind::T6,
        ElementKind::T3,
        ElementKind::EQ4,
        ElementKind::EQ12,
        ElementKind::ET8,
        ElementKind::ET3,
    ];

    /// The six element types compared throughout the benchmarks.
    pub const STUDIED: [ElementKind; 6] = [
        ElementKind::Q4,
        ElementKind::Q9,
        ElementKind::T6,
        ElementKind::EQ4,
        ElementKind::EQ12,
        ElementKind::ET8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Q4 => "Q4",
            ElementKind::Q9 => "Q9",
            ElementKind::T6 => "T6",
            ElementKind::T3 => "T3",
            ElementKind::EQ4 => "EQ4",
            ElementKind::EQ12 => "EQ12",
            ElementKind::ET8 => "ET8",
            ElementKind::ET3 => "ET3",
        }
    }

    pub fn node_count(self) -> usize {
        match self {
            ElementKind::Q4 | ElementKind::EQ4 => 4,
            ElementKind::Q9 | ElementKind::EQ12 => 9,
            ElementKind::T6 | ElementKind::ET8 => 6,
            ElementKind::T3 | ElementKind::ET3 => 3,
        }
    }

    /// Number of edge degrees of freedom, `None` for nodal kinds.
    pub fn edge_count(self) -> Option<usize> {
        match self {
            ElementKind::EQ4 => Some(4),
            ElementKind::EQ12 => Some(12),
            ElementKind::ET8 => Some(8),
            ElementKind::ET3 => Some(3),
            _ => None,
        }
    }

    pub fn is_edge(self) -> bool {
        self.edge_count().is_some()
    }

    pub fn is_quad(self) -> bool {
        matches!(
            self,
            ElementKind::Q4 | ElementKind::Q9 | ElementKind::EQ4 | ElementKind::EQ12
        )
    }

    pub fn is_triangle(self) -> bool {
        !self.is_quad()
    }

    /// Polynomial order of the geometry map.
    pub fn geometry_order(self) -> usize {
        match self {
            ElementKind::Q4 | ElementKind::EQ4 | ElementKind::T3 | ElementKind::ET3 => 1,
            _ => 2,
        }
    }

    /// Nodal kind whose Lagrange basis interpolates this kind's geometry.
    pub fn geometry_kind(self) -> ElementKind {
        match self {
            ElementKind::Q4 | ElementKind::EQ4 => ElementKind::Q4,
            ElementKind::Q9 | ElementKind::EQ12 => ElementKind::Q9,
            ElementKind::T6 | ElementKind::ET8 => ElementKind::T6,
            ElementKind::T3 | ElementKind::ET3 => ElementKind::T3,
        }
    }

    /// Edge element sharing this kind's node layout.
    pub fn edge_kind(self) -> ElementKind {
        match self.geometry_kind() {
            ElementKind::Q4 => ElementKind::EQ4,
            ElementKind::Q9 => ElementKind::EQ12,
            ElementKind::T6 => ElementKind::ET8,
            _ => ElementKind::ET3,
        }
    }

    /// Kind used for the triangular cells of a mixed mesh.
    pub fn triangle_partner(self) -> ElementKind {
        match self {
            ElementKind::Q4 => ElementKind::T3,
            ElementKind::Q9 => ElementKind::T6,
            ElementKind::EQ4 => ElementKind::ET3,
            ElementKind::EQ12 => ElementKind::ET8,
            k => k,
        }
    }

    pub fn side_count(self) -> usize {
        if self.is_quad() {
            4
        } else {
            3
        }
    }

    /// Local node indices along a side, ordered counterclockwise around the cell:
    /// `[start, end]` for linear geometry, `[start, mid, end]` for quadratic geometry.
    pub fn side_nodes(self, side: usize) -> &'static [usize] {
        const Q4: [[usize; 2]; 4] = [[0, 1], [1, 2], [2, 3], [3, 0]];
        const Q9: [[usize; 3]; 4] = [[0, 4, 1], [1, 5, 2], [2, 6, 3], [3, 7, 0]];
        const T3: [[usize; 2]; 3] = [[0, 1], [1, 2], [2, 0]];
        const T6: [[usize; 3]; 3] = [[0, 3, 1], [1, 4, 2], [2, 5, 0]];
        match self.geometry_kind() {
            ElementKind::Q4 => &Q4[side],
            ElementKind::Q9 => &Q9[side],
            ElementKind::T3 => &T3[side],
            _ => &T6[side],
        }
    }

    /// Number of nodes that are cell vertices (the rest are mid-side or interior nodes).
    pub fn vertex_count(self) -> usize {
        self.side_count()
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementKind {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let kind = match s.to_ascii_uppercase().as_str() {
            "Q4" => ElementKind::Q4,
            "Q9" => ElementKind::Q9,
            "T6" => ElementKind::T6,
            "T3" | "T3GEOM" => ElementKind::T3,
            "EQ4" => ElementKind::EQ4,
            "EQ12" => ElementKind::EQ12,
            "ET8" => ElementKind::ET8,
            "ET3" => ElementKind::ET3,
            _ => return Err(MeshError::UnknownKind(s.to_string())),
        };
        Ok(kind)
    }
}
