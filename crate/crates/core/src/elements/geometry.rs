use super::lagrange::shape;
use super::RefPoint;
use crate::error::ElementError;
use crate::mesh::ElementKind;
use crate::scalar::Scalar;

/// Isoparametric map evaluated at one reference point.
///
/// `j` is `[[x_xi, y_xi], [x_eta, y_eta]]` and `gamma = j^-1`, so a physical gradient is
/// `gamma * (f_xi, f_eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryMap<T> {
    pub j: [[T; 2]; 2],
    pub det_j: T,
    pub gamma: [[T; 2]; 2],
    pub grad_xi: [T; 2],
    pub grad_eta: [T; 2],
    /// Physical image of the reference point.
    pub x: [T; 2],
}

impl<T: Scalar> GeometryMap<T> {
    /// Physical gradient of a function with reference derivatives `(f_xi, f_eta)`.
    #[inline]
    pub fn gradient(&self, f_xi: T, f_eta: T) -> [T; 2] {
        [
            self.gamma[0][0] * f_xi + self.gamma[0][1] * f_eta,
            self.gamma[1][0] * f_xi + self.gamma[1][1] * f_eta,
        ]
    }

    /// Covariant field `a grad(xi) + b grad(eta)`.
    #[inline]
    pub fn covariant(&self, a: T, b: T) -> [T; 2] {
        self.gradient(a, b)
    }

    /// Pulls a physical vector back to its covariant reference components `J E`.
    #[inline]
    pub fn pull_back(&self, e: [T; 2]) -> [T; 2] {
        [
            self.j[0][0] * e[0] + self.j[0][1] * e[1],
            self.j[1][0] * e[0] + self.j[1][1] * e[1],
        ]
    }
}

/// Evaluates the map of a cell with node coordinates `coords` at `p`.
pub fn geometry_map<T: Scalar>(
    kind: ElementKind,
    coords: &[[T; 2]],
    p: RefPoint<T>,
) -> Result<GeometryMap<T>, ElementError> {
    if coords.len() != kind.node_count() {
        return Err(ElementError::Arity {
            expected: kind.node_count(),
            found: coords.len(),
        });
    }
    p.check(kind)?;
    map_at(kind, coords, p.xi, p.eta)
}

/// Map without the reference-domain check; still rejects `det J <= 0`.
pub(crate) fn map_at<T: Scalar>(
    kind: ElementKind,
    coords: &[[T; 2]],
    xi: T,
    eta: T,
) -> Result<GeometryMap<T>, ElementError> {
    let g = map_raw(kind, coords, xi, eta);
    if g.det_j > T::zero() && g.det_j.is_finite() {
        Ok(g)
    } else {
        Err(ElementError::Degenerate(g.det_j.to_f64_lossy()))
    }
}

pub(crate) fn map_raw<T: Scalar>(kind: ElementKind, coords: &[[T; 2]], xi: T, eta: T) -> GeometryMap<T> {
    let s = shape(kind, xi, eta);
    let mut j = [[T::zero(); 2]; 2];
    let mut x = [T::zero(); 2];
    for (k, c) in coords.iter().enumerate() {
        for d in 0..2 {
            j[0][d] += s.d_xi[k] * c[d];
            j[1][d] += s.d_eta[k] * c[d];
            x[d] += s.values[k] * c[d];
        }
    }
    let det_j = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let inv = T::one() / det_j;
    let gamma = [
        [j[1][1] * inv, -j[0][1] * inv],
        [-j[1][0] * inv, j[0][0] * inv],
    ];
    GeometryMap {
        j,
        det_j,
        gamma,
        grad_xi: [gamma[0][0], gamma[1][0]],
        grad_eta: [gamma[0][1], gamma[1][1]],
        x,
    }
}
