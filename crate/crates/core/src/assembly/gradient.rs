use std::collections::BTreeMap;

use super::CscMatrix;
use crate::elements::{edge_interpolant, edge_interpolant_ref, local_edges};
use crate::elements::geometry::map_raw;
use crate::error::AssemblyError;
use crate::mesh::{EdgeConnectivity, Mesh};
use crate::scalar::Scalar;

/// Matrix `G` (edges x nodes) mapping nodal potentials on the geometry nodes to the edge
/// interpolant of their gradient, so that `K G u = 0` for every potential `u`.
pub fn discrete_gradient<T: Scalar>(mesh: &Mesh<T>, edges: &EdgeConnectivity<T>) -> Result<CscMatrix<T>, AssemblyError> {
    let mut entries: BTreeMap<(usize, usize), T> = BTreeMap::new();
    for (c, cell) in mesh.cells().iter().enumerate() {
        let geo_kind = cell.kind.geometry_kind();
        for (k, &node) in cell.nodes.iter().enumerate() {
            let dofs = edge_interpolant_ref(cell.kind, &edges.edge_lengths[c], |xi, eta| {
                let s = crate::elements::lagrange::shape(geo_kind, xi, eta);
                [s.d_xi[k], s.d_eta[k]]
            })
            .map_err(|source| AssemblyError::Element { cell: c, source })?;
            for (i, &(g, sign)) in edges.cell_edge_map[c].iter().enumerate() {
                entries.insert((g, node), T::lit(f64::from(sign)) * dofs[i]);
            }
        }
    }
    let t: Vec<_> = entries
        .into_iter()
        .filter(|(_, v)| *v != T::zero())
        .map(|((g, n), v)| (g, n, v))
        .collect();
    Ok(CscMatrix::from_triplets(edges.edge_count(), mesh.node_count(), &t))
}

/// Global edge dofs of the interpolant of a physical field. Shared edges take the value
/// computed by the first cell that owns them.
pub fn interpolate_edge_field<T: Scalar, F: Fn([T; 2]) -> [T; 2]>(
    mesh: &Mesh<T>,
    edges: &EdgeConnectivity<T>,
    e: F,
) -> Result<Vec<T>, AssemblyError> {
    let mut out = vec![T::zero(); edges.edge_count()];
    let mut set = vec![false; edges.edge_count()];
    for (c, cell) in mesh.cells().iter().enumerate() {
        let local = edge_interpolant(cell.kind, &mesh.cell_coords(c), &edges.edge_lengths[c], &e)
            .map_err(|source| AssemblyError::Element { cell: c, source })?;
        debug_assert_eq!(local.len(), local_edges(cell.kind).len());
        for (i, &(g, sign)) in edges.cell_edge_map[c].iter().enumerate() {
            if !set[g] {
                out[g] = T::lit(f64::from(sign)) * local[i];
                set[g] = true;
            }
        }
    }
    Ok(out)
}

/// Evaluates an edge field with global dofs `u` at reference point `(xi, eta)` of cell `c`.
pub fn evaluate_edge_field<T: Scalar>(
    mesh: &Mesh<T>,
    edges: &EdgeConnectivity<T>,
    u: &[T],
    c: usize,
    xi: T,
    eta: T,
) -> [T; 2] {
    let cell = &mesh.cells()[c];
    let coords = mesh.cell_coords(c);
    let g = map_raw(cell.kind, &coords, xi, eta);
    let (ab, _) = crate::elements::eval_edge_shape_ref(cell.kind, xi, eta);
    let mut f = [T::zero(); 2];
    for (i, &(e, sign)) in edges.cell_edge_map[c].iter().enumerate() {
        let s = T::lit(f64::from(sign)) * u[e] * edges.edge_lengths[c][i];
        let v = g.covariant(ab[i][0], ab[i][1]);
        f[0] += s * v[0];
        f[1] += s * v[1];
    }
    f
}
