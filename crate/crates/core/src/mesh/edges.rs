use std::collections::HashMap;

use super::{exterior_sides, side_key, Mesh};
use crate::assembly::gauss_legendre;
use crate::elements::geometry::map_raw;
use crate::elements::{local_edges, reference_nodes};
use crate::error::MeshError;
use crate::scalar::Scalar;

/// Global edge numbering of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeConnectivity<T> {
    /// End nodes `(low, high)` of each global edge.
    pub global_edges: Vec<(usize, usize)>,
    /// Per cell, per local edge: global edge id and orientation sign.
    pub cell_edge_map: Vec<Vec<(usize, i8)>>,
    /// Per cell, per local edge: physical length (arc length along the cell map).
    pub edge_lengths: Vec<Vec<T>>,
    /// True for edges interior to a single cell.
    pub private: Vec<bool>,
}

impl<T: Scalar> EdgeConnectivity<T> {
    pub fn edge_count(&self) -> usize {
        self.global_edges.len()
    }
}

/// Numbers the edges of the mesh's edge elements. Cells of nodal kinds are numbered with
/// the edge kind of the same node layout.
pub fn extract_edges<T: Scalar>(mesh: &Mesh<T>) -> Result<EdgeConnectivity<T>, MeshError> {
    check_conforming(mesh)?;
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out = EdgeConnectivity {
        global_edges: Vec::new(),
        cell_edge_map: Vec::with_capacity(mesh.cell_count()),
        edge_lengths: Vec::with_capacity(mesh.cell_count()),
        private: Vec::new(),
    };
    let mut global_len: Vec<T> = Vec::new();
    for (c, cell) in mesh.cells().iter().enumerate() {
        let coords = mesh.cell_coords(c);
        let table = local_edges(cell.kind);
        let mut map = Vec::with_capacity(table.len());
        let mut lengths = Vec::with_capacity(table.len());
        for e in table {
            let (a, b) = (cell.nodes[e.from], cell.nodes[e.to]);
            let key = (a.min(b), a.max(b));
            let sign = if a < b { 1 } else { -1 };
            let shared = if e.is_interior() { None } else { ids.get(&key).copied() };
            let (id, sign) = match shared {
                Some(id) => (id, sign),
                None => {
                    let id = out.global_edges.len();
                    out.global_edges.push(key);
                    out.private.push(e.is_interior());
                    global_len.push(arc_length(cell.kind, &coords, e.from, e.to));
                    if !e.is_interior() {
                        ids.insert(key, id);
                    }
                    (id, if e.is_interior() { 1 } else { sign })
                }
            };
            map.push((id, sign));
            lengths.push(global_len[id]);
        }
        out.cell_edge_map.push(map);
        out.edge_lengths.push(lengths);
    }
    Ok(out)
}

/// Length of the image of the reference segment between two local nodes (5-point Gauss).
fn arc_length<T: Scalar>(kind: crate::mesh::ElementKind, coords: &[[T; 2]], from: usize, to: usize) -> T {
    let r = reference_nodes(kind);
    let (a, b) = (r[from], r[to]);
    let tau = [T::lit(b[0] - a[0]), T::lit(b[1] - a[1])];
    let (x, w) = gauss_legendre(5);
    let mut len = T::zero();
    for (xq, wq) in x.iter().zip(&w) {
        let t = 0.5 * (xq + 1.0);
        let xi = T::lit(a[0] + t * (b[0] - a[0]));
        let eta = T::lit(a[1] + t * (b[1] - a[1]));
        let g = map_raw(kind, coords, xi, eta);
        let dx = g.j[0][0] * tau[0] + g.j[1][0] * tau[1];
        let dy = g.j[0][1] * tau[0] + g.j[1][1] * tau[1];
        len += T::lit(0.5 * wq) * dx.hypot(dy);
    }
    len
}

/// Rejects sides shared by more than two cells, shared sides whose mid-side nodes
/// disagree, and vertices hanging on another cell's side.
fn check_conforming<T: Scalar>(mesh: &Mesh<T>) -> Result<(), MeshError> {
    let mut seen: HashMap<(usize, usize), (usize, Option<usize>)> = HashMap::new();
    for cell in mesh.cells().iter() {
        for s in 0..cell.kind.side_count() {
            let key = side_key(cell, s);
            let sn = cell.kind.side_nodes(s);
            let mid = (sn.len() == 3).then(|| cell.nodes[sn[1]]);
            match seen.get_mut(&key) {
                None => {
                    seen.insert(key, (1, mid));
                }
                Some((count, other_mid)) => {
                    *count += 1;
                    if *count > 2 {
                        return Err(MeshError::NonConforming(format!(
                            "side {key:?} is shared by more than two cells"
                        )));
                    }
                    if *other_mid != mid {
                        return Err(MeshError::NonConforming(format!(
                            "cells disagree on the mid-side node of side {key:?}"
                        )));
                    }
                }
            }
        }
    }
    let exterior = exterior_sides(mesh.cells());
    let nodes = mesh.nodes();
    let mut verts: Vec<usize> = exterior
        .iter()
        .flat_map(|&(c, s)| {
            let k = side_key(&mesh.cells()[c], s);
            [k.0, k.1]
        })
        .collect();
    verts.sort_unstable();
    verts.dedup();
    for &(c, s) in &exterior {
        let (a, b) = side_key(&mesh.cells()[c], s);
        let (pa, pb) = (nodes[a], nodes[b]);
        let d = [pb[0] - pa[0], pb[1] - pa[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        let tol = T::lit(1e-10);
        for &v in &verts {
            if v == a || v == b {
                continue;
            }
            let q = [nodes[v][0] - pa[0], nodes[v][1] - pa[1]];
            let t = (q[0] * d[0] + q[1] * d[1]) / len2;
            let cross = (q[0] * d[1] - q[1] * d[0]).abs() / len2.sqrt();
            if t > tol && t < T::one() - tol && cross <= tol * len2.sqrt() {
                return Err(MeshError::NonConforming(format!(
                    "node {v} hangs on the side ({a}, {b}) of cell {c}"
                )));
            }
        }
    }
    Ok(())
}
