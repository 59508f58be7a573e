use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{extract_edges, EdgeConnectivity, ElementKind, Mesh};
use crate::elements::geometry::map_raw;
use crate::elements::reference_nodes;
use crate::error::MeshError;
use crate::scalar::Scalar;

/// Set of global degree-of-freedom ids.
pub type DofSet = BTreeSet<usize>;

/// How the potential formulation realises a perfectly conducting wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NodalBc {
    /// Both components of A and phi vanish at every boundary node.
    Full,
    /// Tangential A and phi vanish; the normal component of A stays free (boundary nodes
    /// use a local normal/tangent frame, corners are fully constrained).
    #[default]
    Tangential,
}

/// Discretisation family. Nodal dofs are numbered `3 * node + c` with `c = 0, 1` the two
/// components of A (x, y, or normal, tangent at rotated boundary nodes) and `c = 2` phi;
/// edge dofs are global edge ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    NodalPotential(NodalBc),
    Edge,
}

impl Formulation {
    /// Formulation matching the element kind, with the default nodal wall treatment.
    pub fn for_kind(kind: ElementKind) -> Self {
        if kind.is_edge() {
            Formulation::Edge
        } else {
            Formulation::NodalPotential(NodalBc::default())
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Formulation::NodalPotential(_) => "nodal_potential",
            Formulation::Edge => "edge",
        }
    }
}

/// Local frame of a node for the nodal formulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeFrame<T> {
    Interior,
    /// Smooth wall point with unit outward normal `n`; the tangent is `(-n_y, n_x)`.
    Wall { normal: [T; 2] },
    /// Corner or any wall node without a well-defined normal.
    Corner,
}

/// Nodes lying on marked sides (vertices and mid-side nodes).
pub fn boundary_nodes<T: Scalar>(mesh: &Mesh<T>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for &(c, s) in mesh.boundary_markers() {
        let cell = &mesh.cells()[c];
        out.extend(cell.kind.side_nodes(s).iter().map(|&k| cell.nodes[k]));
    }
    out
}

/// Largest angle between the side normals at a node still treated as a smooth wall.
const SMOOTH_ANGLE_DEG: f64 = 40.0;

/// Frame of every node: outward normals are averaged over the marked sides meeting at a
/// node; nodes where they disagree by more than 40 degrees are corners, unless the two
/// normals are opposite (a crack tip), where the first one is kept.
pub fn node_frames<T: Scalar>(mesh: &Mesh<T>) -> Vec<NodeFrame<T>> {
    let mut normals: Vec<Vec<[T; 2]>> = vec![Vec::new(); mesh.node_count()];
    for &(c, s) in mesh.boundary_markers() {
        let cell = &mesh.cells()[c];
        let coords = mesh.cell_coords(c);
        let sn = cell.kind.side_nodes(s);
        let r = reference_nodes(cell.kind);
        let (a, b) = (r[sn[0]], r[sn[sn.len() - 1]]);
        let tau = [T::lit(b[0] - a[0]), T::lit(b[1] - a[1])];
        for &k in sn {
            let g = map_raw(cell.kind, &coords, T::lit(r[k][0]), T::lit(r[k][1]));
            let tx = g.j[0][0] * tau[0] + g.j[1][0] * tau[1];
            let ty = g.j[0][1] * tau[0] + g.j[1][1] * tau[1];
            let len = tx.hypot(ty);
            normals[cell.nodes[k]].push([ty / len, -tx / len]);
        }
    }
    let cos_max = T::lit(SMOOTH_ANGLE_DEG.to_radians().cos());
    normals
        .into_iter()
        .map(|ns| match ns.as_slice() {
            [] => NodeFrame::Interior,
            [n] => NodeFrame::Wall { normal: *n },
            [n1, n2] if n1[0] * n2[0] + n1[1] * n2[1] >= cos_max => {
                let s = [n1[0] + n2[0], n1[1] + n2[1]];
                let l = s[0].hypot(s[1]);
                NodeFrame::Wall {
                    normal: [s[0] / l, s[1] / l],
                }
            }
            // crack tip: both faces share the tangent line
            [n1, n2] if n1[0] * n2[0] + n1[1] * n2[1] <= -cos_max => NodeFrame::Wall { normal: *n1 },
            _ => NodeFrame::Corner,
        })
        .collect()
}

/// Constrained dofs on the marked (perfectly conducting) boundary.
///
/// Edge formulation: every global edge on a marked side. Nodal formulation: phi and A at
/// boundary nodes as selected by the [`NodalBc`]. `edges` is only used by the edge
/// formulation and is computed when absent.
pub fn boundary_dofs<T: Scalar>(
    mesh: &Mesh<T>,
    edges: Option<&EdgeConnectivity<T>>,
    formulation: Formulation,
) -> Result<DofSet, MeshError> {
    let mut out = DofSet::new();
    match formulation {
        Formulation::Edge => {
            let owned;
            let edges = match edges {
                Some(e) => e,
                None => {
                    owned = extract_edges(mesh)?;
                    &owned
                }
            };
            for &(c, s) in mesh.boundary_markers() {
                let cell = &mesh.cells()[c];
                let table = crate::elements::local_edges(cell.kind);
                for (k, e) in table.iter().enumerate() {
                    if e.side == Some(s) {
                        out.insert(edges.cell_edge_map[c][k].0);
                    }
                }
            }
        }
        Formulation::NodalPotential(NodalBc::Full) => {
            for n in boundary_nodes(mesh) {
                out.extend([3 * n, 3 * n + 1, 3 * n + 2]);
            }
        }
        Formulation::NodalPotential(NodalBc::Tangential) => {
            for (n, frame) in node_frames(mesh).iter().enumerate() {
                match frame {
                    NodeFrame::Interior => {}
                    NodeFrame::Wall { .. } => {
                        out.extend([3 * n + 1, 3 * n + 2]);
                    }
                    NodeFrame::Corner => {
                        out.extend([3 * n, 3 * n + 1, 3 * n + 2]);
                    }
                }
            }
        }
    }
    Ok(out)
}
