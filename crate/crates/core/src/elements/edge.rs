use super::geometry::{map_at, map_raw};
use super::{reference_nodes, require_edge, GeometryMap, RefPoint};
use crate::assembly::quadrature_rule;
use crate::error::ElementError;
use crate::mesh::ElementKind;
use crate::scalar::{dot, Scalar};

/// Central-difference step of the finite-difference curl mode.
pub const FD_STEP: f64 = 1e-6;

/// Local edge of an edge element, directed `from -> to` between local geometry nodes.
/// Boundary edges record the cell side they lie on; interior edges are cell-private.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalEdge {
    pub from: usize,
    pub to: usize,
    pub side: Option<usize>,
}

impl LocalEdge {
    const fn on(from: usize, to: usize, side: usize) -> Self {
        LocalEdge {
            from,
            to,
            side: Some(side),
        }
    }

    const fn inner(from: usize, to: usize) -> Self {
        LocalEdge {
            from,
            to,
            side: None,
        }
    }

    pub fn is_interior(&self) -> bool {
        self.side.is_none()
    }

    /// Reference midpoint (the point where the degree of freedom is sampled).
    pub fn ref_midpoint(&self, kind: ElementKind) -> [f64; 2] {
        let r = reference_nodes(kind);
        let (a, b) = (r[self.from], r[self.to]);
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
    }

    /// Reference direction vector `to - from`.
    pub fn ref_direction(&self, kind: ElementKind) -> [f64; 2] {
        let r = reference_nodes(kind);
        [r[self.to][0] - r[self.from][0], r[self.to][1] - r[self.from][1]]
    }
}

/// Local edge table of an edge kind, in basis-function order.
pub fn local_edges(kind: ElementKind) -> &'static [LocalEdge] {
    use LocalEdge as E;
    const EQ4: [LocalEdge; 4] = [E::on(0, 1, 0), E::on(3, 2, 2), E::on(0, 3, 3), E::on(1, 2, 1)];
    const EQ12: [LocalEdge; 12] = [
        E::on(0, 4, 0),
        E::on(4, 1, 0),
        E::inner(7, 8),
        E::inner(8, 5),
        E::on(3, 6, 2),
        E::on(6, 2, 2),
        E::on(0, 7, 3),
        E::inner(4, 8),
        E::on(1, 5, 1),
        E::on(7, 3, 3),
        E::inner(8, 6),
        E::on(5, 2, 1),
    ];
    const ET8: [LocalEdge; 8] = [
        E::on(1, 4, 1),
        E::on(4, 2, 1),
        E::on(2, 5, 2),
        E::on(5, 0, 2),
        E::on(0, 3, 0),
        E::on(3, 1, 0),
        E::inner(5, 4),
        E::inner(4, 3),
    ];
    const ET3: [LocalEdge; 3] = [E::on(1, 2, 1), E::on(2, 0, 2), E::on(0, 1, 0)];
    match kind.edge_kind() {
        ElementKind::EQ4 => &EQ4,
        ElementKind::EQ12 => &EQ12,
        ElementKind::ET8 => &ET8,
        _ => &ET3,
    }
}

/// Edge basis at one point: physical vectors and scalar curls.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeShapeEval<T> {
    pub values: Vec<[T; 2]>,
    pub curls: Vec<T>,
}

/// Covariant reference components `(a, b)` of each basis function without the length
/// factor (`v = l (a grad xi + b grad eta)`) and the reference curl `db/dxi - da/deta`.
pub fn eval_edge_shape_ref<T: Scalar>(kind: ElementKind, xi: T, eta: T) -> (Vec<[T; 2]>, Vec<T>) {
    let zero = T::zero();
    let one = T::one();
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    let two = T::lit(2.0);
    match kind.edge_kind() {
        ElementKind::EQ4 => (
            vec![
                [quarter * (one - eta), zero],
                [quarter * (one + eta), zero],
                [zero, quarter * (one - xi)],
                [zero, quarter * (one + xi)],
            ],
            vec![quarter, -quarter, -quarter, quarter],
        ),
        ElementKind::EQ12 => {
            let (xm, xp) = (xi - half, xi + half);
            let (ym, yp) = (eta - half, eta + half);
            let a = [
                -half * eta * (eta - one) * xm,
                half * eta * (eta - one) * xp,
                (eta * eta - one) * xm,
                -(eta * eta - one) * xp,
                -half * eta * (eta + one) * xm,
                half * eta * (eta + one) * xp,
            ];
            // d a / d eta for the six grad-xi functions
            let da = [
                -half * (two * eta - one) * xm,
                half * (two * eta - one) * xp,
                two * eta * xm,
                -two * eta * xp,
                -half * (two * eta + one) * xm,
                half * (two * eta + one) * xp,
            ];
            let b = [
                -half * xi * (xi - one) * ym,
                (xi * xi - one) * ym,
                -half * xi * (xi + one) * ym,
                half * xi * (xi - one) * yp,
                -(xi * xi - one) * yp,
                half * xi * (xi + one) * yp,
            ];
            let db = [
                -half * (two * xi - one) * ym,
                two * xi * ym,
                -half * (two * xi + one) * ym,
                half * (two * xi - one) * yp,
                -two * xi * yp,
                half * (two * xi + one) * yp,
            ];
            let xi_idx = [0usize, 1, 2, 3, 4, 5];
            let eta_idx = [6usize, 7, 8, 9, 10, 11];
            let mut ab = vec![[zero; 2]; 12];
            let mut c = vec![zero; 12];
            for k in 0..6 {
                ab[xi_idx[k]] = [a[k], zero];
                c[xi_idx[k]] = -da[k];
                ab[eta_idx[k]] = [zero, b[k]];
                c[eta_idx[k]] = db[k];
            }
            (ab, c)
        }
        ElementKind::ET8 => {
            let al = one - xi - eta;
            let four = T::lit(4.0);
            let w_xe = [-eta, xi];
            let w_ea = [-eta, xi - one];
            let w_ax = [one - eta, xi];
            // (f, f_xi, f_eta, whitney form)
            let parts = [
                (four * xi - one, four, zero, w_xe),
                (four * eta - one, zero, four, w_xe),
                (four * eta - one, zero, four, w_ea),
                (four * al - one, -four, -four, w_ea),
                (four * al - one, -four, -four, w_ax),
                (four * xi - one, four, zero, w_ax),
                (four * eta, zero, four, w_ax),
                (four * xi, four, zero, w_ea),
            ];
            let mut ab = Vec::with_capacity(8);
            let mut c = Vec::with_capacity(8);
            for (f, fx, fy, w) in parts {
                ab.push([f * w[0], f * w[1]]);
                c.push(fx * w[1] - fy * w[0] + two * f);
            }
            (ab, c)
        }
        _ => (
            vec![[-eta, xi], [-eta, xi - one], [one - eta, xi]],
            vec![two, two, two],
        ),
    }
}

fn check_lengths<T: Scalar>(kind: ElementKind, lengths: &[T]) -> Result<usize, ElementError> {
    require_edge(kind)?;
    let n = local_edges(kind).len();
    if lengths.len() != n {
        return Err(ElementError::Arity {
            expected: n,
            found: lengths.len(),
        });
    }
    if let Some(l) = lengths.iter().find(|l| !(**l > T::zero())) {
        return Err(ElementError::Degenerate(l.to_f64_lossy()));
    }
    Ok(n)
}

/// Edge basis with analytic curls (covariant mapping, exact on curved cells).
pub fn eval_edge_shape<T: Scalar>(
    kind: ElementKind,
    p: RefPoint<T>,
    geo: &GeometryMap<T>,
    lengths: &[T],
) -> Result<EdgeShapeEval<T>, ElementError> {
    check_lengths(kind, lengths)?;
    p.check(kind)?;
    if !(geo.det_j > T::zero()) {
        return Err(ElementError::Degenerate(geo.det_j.to_f64_lossy()));
    }
    Ok(physical(kind, p.xi, p.eta, geo, lengths))
}

fn physical<T: Scalar>(kind: ElementKind, xi: T, eta: T, geo: &GeometryMap<T>, lengths: &[T]) -> EdgeShapeEval<T> {
    let (ab, c) = eval_edge_shape_ref(kind, xi, eta);
    let inv = T::one() / geo.det_j;
    let values = ab
        .iter()
        .zip(lengths)
        .map(|(v, &l)| {
            let w = geo.covariant(v[0], v[1]);
            [l * w[0], l * w[1]]
        })
        .collect();
    let curls = c.iter().zip(lengths).map(|(&c, &l)| l * c * inv).collect();
    EdgeShapeEval { values, curls }
}

/// Edge basis whose curls come from central differences of the mapped fields, re-evaluating
/// the geometry at the shifted points and applying the chain rule through `gamma`.
pub fn eval_edge_shape_fd<T: Scalar>(
    kind: ElementKind,
    coords: &[[T; 2]],
    p: RefPoint<T>,
    lengths: &[T],
    h: T,
) -> Result<EdgeShapeEval<T>, ElementError> {
    let n = check_lengths(kind, lengths)?;
    p.check(kind)?;
    if coords.len() != kind.node_count() {
        return Err(ElementError::Arity {
            expected: kind.node_count(),
            found: coords.len(),
        });
    }
    let geo = map_at(kind, coords, p.xi, p.eta)?;
    let at = |xi: T, eta: T| physical(kind, xi, eta, &map_raw(kind, coords, xi, eta), lengths).values;
    let (xp, xm) = (at(p.xi + h, p.eta), at(p.xi - h, p.eta));
    let (yp, ym) = (at(p.xi, p.eta + h), at(p.xi, p.eta - h));
    let two_h = h + h;
    let mut out = physical(kind, p.xi, p.eta, &geo, lengths);
    for i in 0..n {
        let d_xi = [(xp[i][0] - xm[i][0]) / two_h, (xp[i][1] - xm[i][1]) / two_h];
        let d_eta = [(yp[i][0] - ym[i][0]) / two_h, (yp[i][1] - ym[i][1]) / two_h];
        let grad_vx = geo.gradient(d_xi[0], d_eta[0]);
        let grad_vy = geo.gradient(d_xi[1], d_eta[1]);
        out.curls[i] = grad_vy[0] - grad_vx[1];
    }
    Ok(out)
}

/// Local degrees of freedom of the edge interpolant of a physical field `e(x)`.
///
/// Each dof is the tangential sample at its edge midpoint, normalised by the basis
/// function's own tangential value there. The two ET8 interior dofs are fixed by a local
/// least-squares fit of the remainder.
pub fn edge_interpolant<T: Scalar, F: Fn([T; 2]) -> [T; 2]>(
    kind: ElementKind,
    coords: &[[T; 2]],
    lengths: &[T],
    e: F,
) -> Result<Vec<T>, ElementError> {
    if coords.len() != kind.node_count() {
        return Err(ElementError::Arity {
            expected: kind.node_count(),
            found: coords.len(),
        });
    }
    map_at(kind, coords, T::lit(reference_centroid(kind)[0]), T::lit(reference_centroid(kind)[1]))?;
    edge_interpolant_ref(kind, lengths, |xi, eta| {
        let g = map_raw(kind, coords, xi, eta);
        g.pull_back(e(g.x))
    })
}

fn reference_centroid(kind: ElementKind) -> [f64; 2] {
    if kind.is_quad() {
        [0.0, 0.0]
    } else {
        [1.0 / 3.0, 1.0 / 3.0]
    }
}

/// Interpolant of a field given by its covariant reference components `(w_xi, w_eta)`
/// (for a gradient these are simply the reference derivatives).
pub fn edge_interpolant_ref<T: Scalar, F: Fn(T, T) -> [T; 2]>(
    kind: ElementKind,
    lengths: &[T],
    w: F,
) -> Result<Vec<T>, ElementError> {
    let n = check_lengths(kind, lengths)?;
    let edges = local_edges(kind);
    let mut dofs = vec![T::zero(); n];
    let pointwise = if kind.edge_kind() == ElementKind::ET8 { 6 } else { n };
    for (i, edge) in edges.iter().enumerate().take(pointwise) {
        let m = edge.ref_midpoint(kind);
        let tau = edge.ref_direction(kind);
        let tau = [T::lit(tau[0]), T::lit(tau[1])];
        let (xi, eta) = (T::lit(m[0]), T::lit(m[1]));
        let (ab, _) = eval_edge_shape_ref(kind, xi, eta);
        dofs[i] = dot(w(xi, eta), tau) / (lengths[i] * dot(ab[i], tau));
    }
    if pointwise < n {
        // normal equations for the two interior coefficients, in the reference metric
        let rule = quadrature_rule::<T>(ElementKind::ET8);
        let mut g = [[T::zero(); 2]; 2];
        let mut rhs = [T::zero(); 2];
        for (p, &wq) in rule.points.iter().zip(&rule.weights) {
            let mut r = w(p.xi, p.eta);
            let (ab, _) = eval_edge_shape_ref(kind, p.xi, p.eta);
            for k in 0..pointwise {
                let s = dofs[k] * lengths[k];
                r = [r[0] - s * ab[k][0], r[1] - s * ab[k][1]];
            }
            let basis = [ab[6], ab[7]];
            for a in 0..2 {
                rhs[a] += wq * dot(r, basis[a]) * lengths[6 + a];
                for b in 0..2 {
                    g[a][b] += wq * dot(basis[a], basis[b]) * lengths[6 + a] * lengths[6 + b];
                }
            }
        }
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        dofs[6] = (rhs[0] * g[1][1] - rhs[1] * g[0][1]) / det;
        dofs[7] = (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det;
    }
    Ok(dofs)
}
