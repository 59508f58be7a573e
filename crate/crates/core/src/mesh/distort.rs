use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{exterior_sides, ElementKind, Mesh};
use crate::error::MeshError;
use crate::scalar::Scalar;

/// Largest accepted distortion magnitude (fraction of the local edge length).
pub const MAX_DISTORTION: f64 = 0.3;

/// Moves every interior vertex by a pseudo-random vector of length at most
/// `magnitude * h_min`, where `h_min` is the shortest side meeting the vertex. Boundary
/// nodes stay fixed; mid-side and centre nodes follow the average motion of the vertices
/// of their side or cell. If the result has an inverted cell the magnitude is halved once.
pub fn distort_mesh<T: Scalar>(mesh: &Mesh<T>, magnitude: f64, seed: u64) -> Result<Mesh<T>, MeshError> {
    if !(0.0..=MAX_DISTORTION).contains(&magnitude) {
        return Err(MeshError::BadMagnitude(magnitude));
    }
    if magnitude == 0.0 {
        return Ok(mesh.clone());
    }
    match displaced(mesh, magnitude, seed) {
        Err(MeshError::Inverted { .. }) => displaced(mesh, 0.5 * magnitude, seed),
        r => r,
    }
}

fn displaced<T: Scalar>(mesh: &Mesh<T>, magnitude: f64, seed: u64) -> Result<Mesh<T>, MeshError> {
    let nodes = mesh.nodes();
    let mut fixed = BTreeSet::new();
    for (c, s) in exterior_sides(mesh.cells()) {
        let cell = &mesh.cells()[c];
        fixed.extend(cell.kind.side_nodes(s).iter().map(|&k| cell.nodes[k]));
    }
    for &(a, b) in mesh.seam_pairs() {
        fixed.insert(a);
        fixed.insert(b);
    }

    let n = nodes.len();
    let mut is_vertex = vec![false; n];
    let mut h_min = vec![f64::INFINITY; n];
    for cell in mesh.cells() {
        for s in 0..cell.kind.side_count() {
            let sn = cell.kind.side_nodes(s);
            let (a, b) = (cell.nodes[sn[0]], cell.nodes[sn[sn.len() - 1]]);
            let (pa, pb) = (nodes[a], nodes[b]);
            let len = (pb[0] - pa[0]).hypot(pb[1] - pa[1]).to_f64_lossy();
            for v in [a, b] {
                is_vertex[v] = true;
                h_min[v] = h_min[v].min(len);
            }
        }
    }

    let mut shift = vec![[0.0f64; 2]; n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in 0..n {
        if is_vertex[v] && !fixed.contains(&v) {
            let (u1, u2): (f64, f64) = (rng.random(), rng.random());
            let angle = 2.0 * std::f64::consts::PI * u1;
            let r = magnitude * h_min[v] * u2;
            shift[v] = [r * angle.cos(), r * angle.sin()];
        }
    }
    let mut moved: Vec<[T; 2]> = nodes.to_vec();
    let mut done = vec![false; n];
    for v in 0..n {
        if is_vertex[v] {
            moved[v] = [nodes[v][0] + T::lit(shift[v][0]), nodes[v][1] + T::lit(shift[v][1])];
            done[v] = true;
        }
    }
    for cell in mesh.cells() {
        if cell.kind.geometry_order() == 1 {
            continue;
        }
        for s in 0..cell.kind.side_count() {
            let sn = cell.kind.side_nodes(s);
            let (a, b, m) = (cell.nodes[sn[0]], cell.nodes[sn[2]], cell.nodes[sn[1]]);
            if !done[m] {
                let d = [0.5 * (shift[a][0] + shift[b][0]), 0.5 * (shift[a][1] + shift[b][1])];
                moved[m] = [nodes[m][0] + T::lit(d[0]), nodes[m][1] + T::lit(d[1])];
                done[m] = true;
            }
        }
        if cell.kind.geometry_kind() == ElementKind::Q9 {
            let centre = cell.nodes[8];
            let mut d = [0.0; 2];
            for &k in &cell.nodes[..4] {
                d[0] += 0.25 * shift[k][0];
                d[1] += 0.25 * shift[k][1];
            }
            moved[centre] = [nodes[centre][0] + T::lit(d[0]), nodes[centre][1] + T::lit(d[1])];
        }
    }
    mesh.with_nodes(moved)
}
