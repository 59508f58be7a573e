use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Cell, Domain, DomainSpec, ElementKind, Inclusion, Mesh, DIELECTRIC_ID, VACUUM_ID};
use crate::error::MeshError;
use crate::scalar::Scalar;

/// Refinement parameters. `n` is the primary count; `m` an optional secondary count:
///
/// * square: `n x m` cells (`m` defaults to `n`);
/// * L-shapes: `n x n` cells per quadrant (`m` unused);
/// * curved L: `n` radial cells per unit radius, `m` angular cells per `pi/8` wedge
///   (default `n`);
/// * circles: `n` rings, `m` sectors (default `max(n, 3)`), with a fan of triangles at the
///   centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Resolution {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl Resolution {
    pub fn new(n: usize) -> Self {
        Resolution { n, m: None }
    }

    pub fn with_m(n: usize, m: usize) -> Self {
        Resolution { n, m: Some(m) }
    }
}

impl std::fmt::Display for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.m {
            Some(m) => write!(f, "{}x{m}", self.n),
            None => write!(f, "{}", self.n),
        }
    }
}

impl From<usize> for Resolution {
    fn from(n: usize) -> Self {
        Resolution::new(n)
    }
}

/// Generates the mesh of `spec` at refinement level `n` with default secondary counts.
pub fn generate_mesh<T: Scalar>(spec: &DomainSpec, kind: ElementKind, n: usize) -> Result<Mesh<T>, MeshError> {
    generate_mesh_with(spec, kind, Resolution::new(n))
}

/// `nx x ny` structured grid of the square `[0, pi]^2`.
pub fn square_grid<T: Scalar>(kind: ElementKind, nx: usize, ny: usize) -> Result<Mesh<T>, MeshError> {
    generate_mesh_with(&DomainSpec::new(Domain::Square), kind, Resolution::with_m(nx, ny))
}

pub fn generate_mesh_with<T: Scalar>(
    spec: &DomainSpec,
    kind: ElementKind,
    res: Resolution,
) -> Result<Mesh<T>, MeshError> {
    let too_small = |reason: &str| MeshError::ResolutionTooSmall {
        domain: spec.domain.name().to_string(),
        reason: reason.to_string(),
    };
    if res.n == 0 || res.m == Some(0) {
        return Err(too_small("counts must be at least 1"));
    }
    let p = kind.geometry_order() as i64;
    let n = res.n as i64;
    match spec.domain {
        Domain::Square => {
            let m = res.m.unwrap_or(res.n) as i64;
            let (dx, dy) = ((p * n) as f64, (p * m) as f64);
            let mut b = Builder::new(p, move |i, j| [PI * (i as f64 / dx), PI * (j as f64 / dy)], |ij| ij);
            for cj in 0..m {
                for ci in 0..n {
                    b.block(ci, cj, kind, VACUUM_ID);
                }
            }
            b.finish(Vec::new())
        }
        Domain::LShape | Domain::InhomogeneousL => {
            let d = (2 * p * n) as f64;
            let mut b = Builder::new(p, move |i, j| [PI * (i as f64 / d), PI * (j as f64 / d)], |ij| ij);
            for cj in 0..2 * n {
                for ci in 0..2 * n {
                    let (right, top) = (ci >= n, cj >= n);
                    if right && top {
                        continue;
                    }
                    let dielectric = spec.domain == Domain::InhomogeneousL
                        && match spec.inclusion {
                            Inclusion::Corner => !right && !top,
                            Inclusion::ArmX => right,
                            Inclusion::ArmY => top,
                            Inclusion::Arms => right || top,
                        };
                    let material = if dielectric { DIELECTRIC_ID } else { VACUUM_ID };
                    b.block(ci, cj, kind, material);
                }
            }
            b.finish(Vec::new())
        }
        Domain::CurvedL => {
            let a = n;
            let c = res.m.unwrap_or(res.n) as i64;
            let (dr, dt) = ((p * a) as f64, (p * c) as f64);
            let mut b = Builder::new(
                p,
                move |i, j| {
                    let r = 1.0 + i as f64 / dr;
                    let t = DomainSpec::CURVED_L_WEDGE * (j as f64 / dt);
                    [r * t.cos(), r * t.sin()]
                },
                |ij| ij,
            );
            for cj in 0..2 * c {
                for ci in 0..2 * a {
                    if ci < a && cj >= c {
                        continue;
                    }
                    b.block(ci, cj, kind, VACUUM_ID);
                }
            }
            b.finish(Vec::new())
        }
        Domain::Circle | Domain::CrackedCircle => {
            let rings = n;
            let sectors = res.m.unwrap_or(res.n.max(3)) as i64;
            if sectors < 3 {
                return Err(too_small("a circle needs at least 3 sectors"));
            }
            let cracked = spec.domain == Domain::CrackedCircle;
            let (dr, period) = ((p * rings) as f64, p * sectors);
            let position = move |i: i64, j: i64| {
                let r = i as f64 / dr;
                let t = 2.0 * PI * (j.rem_euclid(period) as f64 / period as f64);
                [r * t.cos(), r * t.sin()]
            };
            let canonical = move |(i, j): (i64, i64)| {
                if i == 0 {
                    (0, 0)
                } else if cracked {
                    (i, j)
                } else {
                    (i, j.rem_euclid(period))
                }
            };
            let mut b = Builder::new(p, position, canonical);
            let tri = kind.triangle_partner();
            for cj in 0..sectors {
                let (j0, j1) = (p * cj, p * (cj + 1));
                let corners = [(0, j0), (p, j0), (p, j1)];
                let mids = [(p / 2, j0), (p, j0 + p / 2), (p / 2, j1)];
                b.triangle(corners, mids, tri, VACUUM_ID);
            }
            for ci in 1..rings {
                for cj in 0..sectors {
                    b.block(ci, cj, kind, VACUUM_ID);
                }
            }
            let mut seams = Vec::new();
            if cracked {
                for i in 1..=p * rings {
                    seams.push((b.node((i, 0)), b.node((i, period))));
                }
            }
            b.finish(seams)
        }
    }
}

/// Places cells on an integer lattice. Lattice steps are `1/p` of a cell so quadratic
/// cells find their mid-side and centre nodes at odd indices.
struct Builder<P, C> {
    p: i64,
    position: P,
    canonical: C,
    ids: HashMap<(i64, i64), usize>,
    nodes: Vec<[f64; 2]>,
    cells: Vec<Cell>,
}

impl<P, C> Builder<P, C>
where
    P: Fn(i64, i64) -> [f64; 2],
    C: Fn((i64, i64)) -> (i64, i64),
{
    fn new(p: i64, position: P, canonical: C) -> Self {
        Builder {
            p,
            position,
            canonical,
            ids: HashMap::new(),
            nodes: Vec::new(),
            cells: Vec::new(),
        }
    }

    fn node(&mut self, ij: (i64, i64)) -> usize {
        let key = (self.canonical)(ij);
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push((self.position)(key.0, key.1));
        self.ids.insert(key, id);
        id
    }

    /// Cell block `(ci, cj)`: one quadrilateral, or two triangles for triangular kinds.
    fn block(&mut self, ci: i64, cj: i64, kind: ElementKind, material: u32) {
        let p = self.p;
        let (i0, j0, i1, j1) = (p * ci, p * cj, p * (ci + 1), p * (cj + 1));
        if kind.is_quad() {
            let mut pts = vec![(i0, j0), (i1, j0), (i1, j1), (i0, j1)];
            if p == 2 {
                pts.extend([(i0 + 1, j0), (i1, j0 + 1), (i0 + 1, j1), (i0, j0 + 1), (i0 + 1, j0 + 1)]);
            }
            let nodes = pts.into_iter().map(|ij| self.node(ij)).collect();
            self.cells.push(Cell { kind, nodes, material });
        } else {
            let mid = |a: (i64, i64), b: (i64, i64)| ((a.0 + b.0) / 2, (a.1 + b.1) / 2);
            for t in [[(i0, j0), (i1, j0), (i1, j1)], [(i0, j0), (i1, j1), (i0, j1)]] {
                let mids = [mid(t[0], t[1]), mid(t[1], t[2]), mid(t[2], t[0])];
                self.triangle(t, mids, kind, material);
            }
        }
    }

    fn triangle(&mut self, corners: [(i64, i64); 3], mids: [(i64, i64); 3], kind: ElementKind, material: u32) {
        let mut nodes: Vec<usize> = corners.iter().map(|&ij| self.node(ij)).collect();
        if self.p == 2 {
            nodes.extend(mids.iter().map(|&ij| self.node(ij)));
        }
        self.cells.push(Cell { kind, nodes, material });
    }

    fn finish<T: Scalar>(self, seams: Vec<(usize, usize)>) -> Result<Mesh<T>, MeshError> {
        let nodes = self.nodes.iter().map(|p| [T::lit(p[0]), T::lit(p[1])]).collect();
        Mesh::with_exterior_boundary(nodes, self.cells, seams)
    }
}
