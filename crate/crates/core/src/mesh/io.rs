use serde::{Deserialize, Serialize};

use super::{Cell, Mesh};
use crate::error::MeshError;
use crate::scalar::Scalar;

/// Version tag written to and required from mesh files.
pub const MESH_FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct MeshFile {
    format: u32,
    nodes: Vec<[f64; 2]>,
    cells: Vec<Cell>,
    boundary: Vec<(usize, usize)>,
    seams: Vec<(usize, usize)>,
}

pub fn mesh_to_json<T: Scalar>(mesh: &Mesh<T>) -> String {
    let file = MeshFile {
        format: MESH_FORMAT,
        nodes: mesh
            .nodes()
            .iter()
            .map(|p| [p[0].to_f64_lossy(), p[1].to_f64_lossy()])
            .collect(),
        cells: mesh.cells().to_vec(),
        boundary: mesh.boundary_markers().iter().copied().collect(),
        seams: mesh.seam_pairs().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("mesh serialises")
}

pub fn mesh_from_json<T: Scalar>(text: &str) -> Result<Mesh<T>, MeshError> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| MeshError::Format(e.to_string()))?;
    if file.format != MESH_FORMAT {
        return Err(MeshError::Format(format!(
            "unsupported mesh format {} (expected {MESH_FORMAT})",
            file.format
        )));
    }
    let nodes = file.nodes.iter().map(|p| [T::lit(p[0]), T::lit(p[1])]).collect();
    Mesh::new(nodes, file.cells, file.boundary, file.seams)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_mesh, Domain, DomainSpec, ElementKind};

    #[test]
    fn round_trip() {
        let m: Mesh<f64> = generate_mesh(&DomainSpec::new(Domain::CrackedCircle), ElementKind::EQ12, 3).unwrap();
        let text = mesh_to_json(&m);
        assert!(text.contains("\"format\": 1"));
        let back: Mesh<f64> = mesh_from_json(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(mesh_from_json::<f64>("{").is_err());
        let text = r#"{"format": 2, "nodes": [], "cells": [], "boundary": [], "seams": []}"#;
        assert!(mesh_from_json::<f64>(text).is_err());
        let text = r#"{"format": 1, "nodes": [[0,0],[1,0],[0,1]],
            "cells": [{"kind": "T3", "nodes": [0, 1, 5], "material": 1}], "boundary": [], "seams": []}"#;
        assert!(matches!(mesh_from_json::<f64>(text), Err(MeshError::MissingNode { .. })));
        let text = r#"{"format": 1, "nodes": [[0,0],[1,0],[0,1]],
            "cells": [{"kind": "T3", "nodes": [0, 2, 1], "material": 1}], "boundary": [], "seams": []}"#;
        assert!(matches!(mesh_from_json::<f64>(text), Err(MeshError::Inverted { .. })));
        let text = r#"{"format": 1, "nodes": [[0,0],[1,0],[0,1]],
            "cells": [{"kind": "T3", "nodes": [0, 1, 2], "material": 1}], "boundary": [[0, 3]], "seams": [[0, 1]]}"#;
        assert!(mesh_from_json::<f64>(text).is_err());
    }
}
