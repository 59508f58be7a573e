use super::{material_of, scatter, AssemblyOptions, DofInfo, DofKind, ElementBlock, Materials, SystemPair};
use crate::elements::{eval_nodal_shape, geometry_map, physical_gradients};
use crate::error::AssemblyError;
use crate::mesh::{node_frames, Formulation, Mesh, NodalBc, NodeFrame};
use crate::scalar::Scalar;

/// Potential formulation with divergence penalty: unknowns `(A_1, A_2, phi)` per node.
///
/// `K = [[K_AA, 0], [0, 0]]` with `K_AA = int (1/mu_r) (curl_i curl_j + div_i div_j)` and
/// `M = int eps_r E_i . E_j` where `E = A + grad phi`, which yields the blocks `M_AA`,
/// `M_A phi`, `M_phi A` and `M_phi phi`. With [`NodalBc::Tangential`] the A components of wall
/// nodes are expressed in the local (normal, tangent) frame.
pub fn assemble_nodal_potential<T: Scalar>(
    mesh: &Mesh<T>,
    materials: &Materials,
    bc: NodalBc,
) -> Result<SystemPair<T>, AssemblyError> {
    assemble_nodal_potential_with(mesh, materials, bc, AssemblyOptions::default())
}

pub fn assemble_nodal_potential_with<T: Scalar>(
    mesh: &Mesh<T>,
    materials: &Materials,
    bc: NodalBc,
    opts: AssemblyOptions,
) -> Result<SystemPair<T>, AssemblyError> {
    for (c, cell) in mesh.cells().iter().enumerate() {
        if cell.kind.is_edge() {
            return Err(AssemblyError::WrongFormulation {
                cell: c,
                kind: cell.kind,
                formulation: "nodal potential",
            });
        }
    }
    let dirs = directions(mesh, bc);
    let n = 3 * mesh.node_count();
    let (k, m) = scatter(mesh.cell_count(), n, opts.parallel, |c| {
        let (k, m) = nodal_element_matrices(mesh, &dirs, c, materials, opts)?;
        let dofs = mesh.cells()[c]
            .nodes
            .iter()
            .flat_map(|&v| [3 * v, 3 * v + 1, 3 * v + 2])
            .collect();
        Ok(ElementBlock { dofs, k, m })
    })?;
    let dof_map = (0..n)
        .map(|d| DofInfo {
            kind: match d % 3 {
                2 => DofKind::Phi,
                c => DofKind::A(c as u8),
            },
            entity: d / 3,
            original: d,
        })
        .collect();
    Ok(SystemPair {
        k,
        m,
        dof_map,
        formulation: Formulation::NodalPotential(bc),
        fdof: n,
    })
}

/// Unit directions of the two A components at every node.
pub(crate) fn directions<T: Scalar>(mesh: &Mesh<T>, bc: NodalBc) -> Vec<[[T; 2]; 2]> {
    let (o, z) = (T::one(), T::zero());
    let cartesian = [[o, z], [z, o]];
    match bc {
        NodalBc::Full => vec![cartesian; mesh.node_count()],
        NodalBc::Tangential => node_frames(mesh)
            .into_iter()
            .map(|f| match f {
                NodeFrame::Wall { normal: n } => [n, [-n[1], n[0]]],
                _ => cartesian,
            })
            .collect(),
    }
}

/// Row-major element matrices of cell `c`, local dof `3 k + comp` for cell node `k`.
pub fn nodal_element_matrices<T: Scalar>(
    mesh: &Mesh<T>,
    dirs: &[[[T; 2]; 2]],
    c: usize,
    materials: &Materials,
    opts: AssemblyOptions,
) -> Result<(Vec<T>, Vec<T>), AssemblyError> {
    let cell = &mesh.cells()[c];
    let mat = material_of(materials, c, cell)?;
    let (nu, eps) = (T::lit(1.0 / mat.mu_r), T::lit(mat.eps_r));
    let coords = mesh.cell_coords(c);
    let nn = cell.nodes.len();
    let n = 3 * nn;
    let mut k = vec![T::zero(); n * n];
    let mut m = vec![T::zero(); n * n];
    let rule = opts.rule::<T>(cell.kind);
    let err = |source| AssemblyError::Element { cell: c, source };
    let mut curl = vec![T::zero(); n];
    let mut div = vec![T::zero(); n];
    let mut field = vec![[T::zero(); 2]; n];
    for (p, &w) in rule.points.iter().zip(&rule.weights) {
        let geo = geometry_map(cell.kind, &coords, *p).map_err(err)?;
        let s = physical_gradients(&eval_nodal_shape(cell.kind, *p).map_err(err)?, &geo);
        for a in 0..nn {
            let g = s.grads_phys[a];
            for comp in 0..2 {
                let d = dirs[cell.nodes[a]][comp];
                let i = 3 * a + comp;
                curl[i] = g[0] * d[1] - g[1] * d[0];
                div[i] = g[0] * d[0] + g[1] * d[1];
                field[i] = [s.values[a] * d[0], s.values[a] * d[1]];
            }
            let i = 3 * a + 2;
            curl[i] = T::zero();
            div[i] = T::zero();
            field[i] = g;
        }
        let dv = w * geo.det_j;
        for i in 0..n {
            for j in 0..n {
                k[i * n + j] += nu * (curl[i] * curl[j] + div[i] * div[j]) * dv;
                m[i * n + j] += eps * (field[i][0] * field[j][0] + field[i][1] * field[j][1]) * dv;
            }
        }
    }
    Ok((k, m))
}
