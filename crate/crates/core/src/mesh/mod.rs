//! Meshes of the benchmark domains, global edge numbering and boundary degrees of freedom.

mod boundary;
mod distort;
mod edges;
mod generate;
mod io;
mod kind;

pub use boundary::{boundary_dofs, boundary_nodes, node_frames, DofSet, Formulation, NodalBc, NodeFrame};
pub use distort::{distort_mesh, MAX_DISTORTION};
pub use edges::{extract_edges, EdgeConnectivity};
pub use generate::{generate_mesh, generate_mesh_with, square_grid, Resolution};
pub use io::{mesh_from_json, mesh_to_json, MESH_FORMAT};
pub use kind::ElementKind;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assembly::quadrature_rule;
use crate::error::MeshError;
use crate::scalar::Scalar;

/// One cell: element kind, counterclockwise node ids and material id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub kind: ElementKind,
    pub nodes: Vec<usize>,
    pub material: u32,
}

/// Validated mesh. Construct with [`Mesh::new`]; values are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    nodes: Vec<[T; 2]>,
    cells: Vec<Cell>,
    boundary: BTreeSet<(usize, usize)>,
    seams: Vec<(usize, usize)>,
}

impl<T: Scalar> Mesh<T> {
    /// Builds a mesh and checks node references, orientation, boundary markers and seams.
    pub fn new(
        nodes: Vec<[T; 2]>,
        cells: Vec<Cell>,
        boundary: impl IntoIterator<Item = (usize, usize)>,
        seams: Vec<(usize, usize)>,
    ) -> Result<Self, MeshError> {
        let mesh = Mesh {
            nodes,
            cells,
            boundary: boundary.into_iter().collect(),
            seams,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Builds a mesh whose boundary markers are all of its exterior sides.
    pub fn with_exterior_boundary(
        nodes: Vec<[T; 2]>,
        cells: Vec<Cell>,
        seams: Vec<(usize, usize)>,
    ) -> Result<Self, MeshError> {
        let boundary = exterior_sides(&cells);
        Mesh::new(nodes, cells, boundary, seams)
    }

    pub fn nodes(&self) -> &[[T; 2]] {
        &self.nodes
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn boundary_markers(&self) -> &BTreeSet<(usize, usize)> {
        &self.boundary
    }

    pub fn seam_pairs(&self) -> &[(usize, usize)] {
        &self.seams
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_coords(&self, cell: usize) -> Vec<[T; 2]> {
        self.cells[cell].nodes.iter().map(|&n| self.nodes[n]).collect()
    }

    /// Same topology with moved nodes; revalidated.
    pub fn with_nodes(&self, nodes: Vec<[T; 2]>) -> Result<Self, MeshError> {
        if nodes.len() != self.nodes.len() {
            return Err(MeshError::Format(format!(
                "expected {} node positions, got {}",
                self.nodes.len(),
                nodes.len()
            )));
        }
        Mesh::new(nodes, self.cells.clone(), self.boundary.clone(), self.seams.clone())
    }

    /// Converts the coordinates to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Mesh<U> {
        Mesh {
            nodes: self
                .nodes
                .iter()
                .map(|p| [U::lit(p[0].to_f64_lossy()), U::lit(p[1].to_f64_lossy())])
                .collect(),
            cells: self.cells.clone(),
            boundary: self.boundary.clone(),
            seams: self.seams.clone(),
        }
    }

    /// Smallest `det J` over all quadrature points; errors on the first inverted cell.
    pub fn min_jacobian(&self) -> Result<T, MeshError> {
        let mut min = T::infinity();
        for (c, cell) in self.cells.iter().enumerate() {
            let coords = self.cell_coords(c);
            let rule = quadrature_rule::<T>(cell.kind);
            for p in &rule.points {
                let det = crate::elements::geometry::map_raw(cell.kind, &coords, p.xi, p.eta).det_j;
                if !(det > T::zero() && det.is_finite()) {
                    return Err(MeshError::Inverted {
                        cell: c,
                        det: det.to_f64_lossy(),
                    });
                }
                min = min.min(det);
            }
        }
        Ok(min)
    }

    fn validate(&self) -> Result<(), MeshError> {
        for (c, cell) in self.cells.iter().enumerate() {
            let expected = cell.kind.node_count();
            if cell.nodes.len() != expected {
                return Err(MeshError::NodeCount {
                    cell: c,
                    kind: cell.kind,
                    expected,
                    found: cell.nodes.len(),
                });
            }
            if let Some(&node) = cell.nodes.iter().find(|&&n| n >= self.nodes.len()) {
                return Err(MeshError::MissingNode { cell: c, node });
            }
        }
        self.min_jacobian()?;
        let exterior: BTreeSet<_> = exterior_sides(&self.cells).into_iter().collect();
        if let Some(&(cell, side)) = self.boundary.iter().find(|m| !exterior.contains(m)) {
            return Err(MeshError::BadBoundaryMarker { cell, side });
        }
        let scale = self
            .nodes
            .iter()
            .fold(T::zero(), |m, p| m.max(p[0].abs()).max(p[1].abs()))
            .max(T::one());
        let tol = scale * T::epsilon() * T::lit(16.0);
        for &(a, b) in &self.seams {
            let ok = a != b
                && a < self.nodes.len()
                && b < self.nodes.len()
                && (self.nodes[a][0] - self.nodes[b][0]).abs() <= tol
                && (self.nodes[a][1] - self.nodes[b][1]).abs() <= tol;
            if !ok {
                return Err(MeshError::BadSeam(a, b));
            }
        }
        Ok(())
    }
}

/// Sorted end-node pair identifying a cell side.
pub(crate) fn side_key(cell: &Cell, side: usize) -> (usize, usize) {
    let s = cell.kind.side_nodes(side);
    let (a, b) = (cell.nodes[s[0]], cell.nodes[s[s.len() - 1]]);
    (a.min(b), a.max(b))
}

/// Sides used by exactly one cell, in (cell, side) order.
pub(crate) fn exterior_sides(cells: &[Cell]) -> Vec<(usize, usize)> {
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for cell in cells {
        for s in 0..cell.kind.side_count() {
            *count.entry(side_key(cell, s)).or_default() += 1;
        }
    }
    let mut out = Vec::new();
    for (c, cell) in cells.iter().enumerate() {
        for s in 0..cell.kind.side_count() {
            if count[&side_key(cell, s)] == 1 {
                out.push((c, s));
            }
        }
    }
    out
}

/// Benchmark domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Square,
    Circle,
    LShape,
    CrackedCircle,
    CurvedL,
    InhomogeneousL,
}

impl Domain {
    pub const ALL: [Domain; 6] = [
        Domain::Square,
        Domain::Circle,
        Domain::LShape,
        Domain::CrackedCircle,
        Domain::CurvedL,
        Domain::InhomogeneousL,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Domain::Square => "square",
            Domain::Circle => "circle",
            Domain::LShape => "l_shape",
            Domain::CrackedCircle => "cracked_circle",
            Domain::CurvedL => "curved_l",
            Domain::InhomogeneousL => "inhomogeneous_l",
        }
    }

    /// True for domains with a reentrant corner or crack tip.
    pub fn is_nonconvex(self) -> bool {
        !matches!(self, Domain::Square | Domain::Circle)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Domain::ALL
            .into_iter()
            .find(|d| d.name() == key)
            .ok_or_else(|| MeshError::UnknownDomain(s.to_string()))
    }
}

/// Relative permeability and permittivity of a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialRegion {
    pub mu_r: f64,
    pub eps_r: f64,
}

impl MaterialRegion {
    pub const VACUUM: MaterialRegion = MaterialRegion { mu_r: 1.0, eps_r: 1.0 };

    pub fn new(mu_r: f64, eps_r: f64) -> Result<Self, MeshError> {
        if mu_r > 0.0 && eps_r > 0.0 && mu_r.is_finite() && eps_r.is_finite() {
            Ok(MaterialRegion { mu_r, eps_r })
        } else {
            Err(MeshError::Format(format!(
                "material constants must be positive (mu_r = {mu_r}, eps_r = {eps_r})"
            )))
        }
    }
}

/// Squares of the L-shape that carry the dielectric in the inhomogeneous case.
/// The L is `[0, pi]^2` without `[pi/2, pi]^2`, made of a corner square and two arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inclusion {
    /// `[0, pi/2]^2`, the square touching both arms.
    Corner,
    /// `[pi/2, pi] x [0, pi/2]`.
    ArmX,
    /// `[0, pi/2] x [pi/2, pi]`.
    ArmY,
    /// Both arms; the corner square stays vacuum.
    Arms,
}

impl FromStr for Inclusion {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "corner" => Ok(Inclusion::Corner),
            "arm_x" => Ok(Inclusion::ArmX),
            "arm_y" => Ok(Inclusion::ArmY),
            "arms" => Ok(Inclusion::Arms),
            _ => Err(MeshError::Format(format!("unknown inclusion quadrant {s:?}"))),
        }
    }
}

/// Material id of the dielectric region of the inhomogeneous L.
pub const DIELECTRIC_ID: u32 = 2;
/// Material id of the background.
pub const VACUUM_ID: u32 = 1;

/// Domain with its geometric parameters and material table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub domain: Domain,
    pub materials: BTreeMap<u32, MaterialRegion>,
    /// Dielectric region (inhomogeneous L only).
    pub inclusion: Inclusion,
}

impl DomainSpec {
    /// Side of the square and of the L-shape's bounding square.
    pub const SIDE: f64 = std::f64::consts::PI;
    /// Radius of both circular domains.
    pub const RADIUS: f64 = 1.0;
    /// Radii of the curved L.
    pub const CURVED_L_RADII: [f64; 3] = [1.0, 2.0, 3.0];
    /// Angular width of each of the curved L's two wedges: the domain is
    /// `{1 <= r <= 3, 0 <= theta <= w} U {2 <= r <= 3, w <= theta <= 2w}`.
    pub const CURVED_L_WEDGE: f64 = std::f64::consts::PI / 8.0;
    /// Relative permittivity of the inhomogeneous L's dielectric region.
    pub const DIELECTRIC_EPS: f64 = 5.0;
    /// Region adopted for the inhomogeneous L.
    pub const DEFAULT_INCLUSION: Inclusion = Inclusion::Arms;

    pub fn new(domain: Domain) -> Self {
        let mut materials = BTreeMap::new();
        materials.insert(VACUUM_ID, MaterialRegion::VACUUM);
        if domain == Domain::InhomogeneousL {
            materials.insert(
                DIELECTRIC_ID,
                MaterialRegion {
                    mu_r: 1.0,
                    eps_r: Self::DIELECTRIC_EPS,
                },
            );
        }
        DomainSpec {
            domain,
            materials,
            inclusion: Self::DEFAULT_INCLUSION,
        }
    }

    pub fn with_inclusion(mut self, inclusion: Inclusion) -> Self {
        self.inclusion = inclusion;
        self
    }
}
