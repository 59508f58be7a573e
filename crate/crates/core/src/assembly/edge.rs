use super::{material_of, scatter, AssemblyOptions, CurlMode, DofInfo, DofKind, ElementBlock, Materials, SystemPair};
use crate::elements::{eval_edge_shape, eval_edge_shape_fd, geometry_map, FD_STEP};
use crate::error::AssemblyError;
use crate::mesh::{EdgeConnectivity, Formulation, Mesh};
use crate::scalar::{dot, Scalar};

/// Edge-element stiffness `int (1/mu_r) curl v_i curl v_j` and mass `int eps_r v_i . v_j`.
pub fn assemble_edge<T: Scalar>(
    mesh: &Mesh<T>,
    edges: &EdgeConnectivity<T>,
    materials: &Materials,
) -> Result<SystemPair<T>, AssemblyError> {
    assemble_edge_with(mesh, edges, materials, AssemblyOptions::default())
}

pub fn assemble_edge_with<T: Scalar>(
    mesh: &Mesh<T>,
    edges: &EdgeConnectivity<T>,
    materials: &Materials,
    opts: AssemblyOptions,
) -> Result<SystemPair<T>, AssemblyError> {
    for (c, cell) in mesh.cells().iter().enumerate() {
        if !cell.kind.is_edge() {
            return Err(AssemblyError::WrongFormulation {
                cell: c,
                kind: cell.kind,
                formulation: "edge",
            });
        }
    }
    let n = edges.edge_count();
    let (k, m) = scatter(mesh.cell_count(), n, opts.parallel, |c| {
        let (k, m) = edge_element_matrices(mesh, edges, c, materials, opts)?;
        Ok(ElementBlock {
            dofs: edges.cell_edge_map[c].iter().map(|&(g, _)| g).collect(),
            k,
            m,
        })
    })?;
    let dof_map = (0..n)
        .map(|e| DofInfo {
            kind: DofKind::Edge,
            entity: e,
            original: e,
        })
        .collect();
    Ok(SystemPair {
        k,
        m,
        dof_map,
        formulation: Formulation::Edge,
        fdof: n,
    })
}

/// Row-major element matrices of cell `c` with orientation signs applied.
pub fn edge_element_matrices<T: Scalar>(
    mesh: &Mesh<T>,
    edges: &EdgeConnectivity<T>,
    c: usize,
    materials: &Materials,
    opts: AssemblyOptions,
) -> Result<(Vec<T>, Vec<T>), AssemblyError> {
    let cell = &mesh.cells()[c];
    let mat = material_of(materials, c, cell)?;
    let (nu, eps) = (T::lit(1.0 / mat.mu_r), T::lit(mat.eps_r));
    let coords = mesh.cell_coords(c);
    let lengths = &edges.edge_lengths[c];
    let signs: Vec<T> = edges.cell_edge_map[c].iter().map(|&(_, s)| T::lit(f64::from(s))).collect();
    let n = signs.len();
    let mut k = vec![T::zero(); n * n];
    let mut m = vec![T::zero(); n * n];
    let rule = opts.rule::<T>(cell.kind);
    let err = |source| AssemblyError::Element { cell: c, source };
    for (p, &w) in rule.points.iter().zip(&rule.weights) {
        let geo = geometry_map(cell.kind, &coords, *p).map_err(err)?;
        let e = match opts.curl {
            CurlMode::Analytic => eval_edge_shape(cell.kind, *p, &geo, lengths),
            CurlMode::FiniteDifference => eval_edge_shape_fd(cell.kind, &coords, *p, lengths, T::lit(FD_STEP)),
        }
        .map_err(err)?;
        let dv = w * geo.det_j;
        for i in 0..n {
            let (ci, vi) = (signs[i] * e.curls[i], [signs[i] * e.values[i][0], signs[i] * e.values[i][1]]);
            for j in 0..n {
                let (cj, vj) = (signs[j] * e.curls[j], [signs[j] * e.values[j][0], signs[j] * e.values[j][1]]);
                k[i * n + j] += nu * ci * cj * dv;
                m[i * n + j] += eps * dot(vi, vj) * dv;
            }
        }
    }
    Ok((k, m))
}
