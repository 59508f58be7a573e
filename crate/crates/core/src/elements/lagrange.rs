use super::{require_nodal, GeometryMap, RefPoint};
use crate::error::ElementError;
use crate::mesh::ElementKind;
use crate::scalar::Scalar;

/// Basis values and reference derivatives at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalRefEval<T> {
    pub values: Vec<T>,
    pub d_xi: Vec<T>,
    pub d_eta: Vec<T>,
}

/// Basis values and physical gradients at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalShapeEval<T> {
    pub values: Vec<T>,
    pub grads_phys: Vec<[T; 2]>,
}

/// Lagrange basis of a nodal kind at a reference point.
pub fn eval_nodal_shape<T: Scalar>(
    kind: ElementKind,
    p: RefPoint<T>,
) -> Result<NodalRefEval<T>, ElementError> {
    require_nodal(kind)?;
    p.check(kind)?;
    Ok(shape(kind, p.xi, p.eta))
}

/// Maps reference derivatives to physical gradients through `geo`.
pub fn physical_gradients<T: Scalar>(eval: &NodalRefEval<T>, geo: &GeometryMap<T>) -> NodalShapeEval<T> {
    let grads_phys = eval
        .d_xi
        .iter()
        .zip(&eval.d_eta)
        .map(|(&a, &b)| geo.gradient(a, b))
        .collect();
    NodalShapeEval {
        values: eval.values.clone(),
        grads_phys,
    }
}

/// 1D quadratic Lagrange basis on nodes -1, 0, 1 and its derivative.
fn quad1d<T: Scalar>(i: usize, s: T) -> (T, T) {
    let half = T::lit(0.5);
    let one = T::one();
    match i {
        0 => (half * s * (s - one), s - half),
        1 => (one - s * s, -(s + s)),
        _ => (half * s * (s + one), s + half),
    }
}

/// Evaluates the basis of the geometry layout of `kind` without domain checks.
pub(crate) fn shape<T: Scalar>(kind: ElementKind, xi: T, eta: T) -> NodalRefEval<T> {
    let one = T::one();
    let quarter = T::lit(0.25);
    match kind.geometry_kind() {
        ElementKind::Q4 => {
            const S: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
            let mut e = NodalRefEval::with_capacity(4);
            for [sx, sy] in S {
                let (sx, sy) = (T::lit(sx), T::lit(sy));
                let fx = one + sx * xi;
                let fy = one + sy * eta;
                e.values.push(quarter * fx * fy);
                e.d_xi.push(quarter * sx * fy);
                e.d_eta.push(quarter * fx * sy);
            }
            e
        }
        ElementKind::Q9 => {
            const IDX: [[usize; 2]; 9] = [
                [0, 0],
                [2, 0],
                [2, 2],
                [0, 2],
                [1, 0],
                [2, 1],
                [1, 2],
                [0, 1],
                [1, 1],
            ];
            let mut e = NodalRefEval::with_capacity(9);
            for [ix, iy] in IDX {
                let (lx, dx) = quad1d(ix, xi);
                let (ly, dy) = quad1d(iy, eta);
                e.values.push(lx * ly);
                e.d_xi.push(dx * ly);
                e.d_eta.push(lx * dy);
            }
            e
        }
        ElementKind::T3 => NodalRefEval {
            values: vec![one - xi - eta, xi, eta],
            d_xi: vec![-one, one, T::zero()],
            d_eta: vec![-one, T::zero(), one],
        },
        _ => {
            let two = T::lit(2.0);
            let four = T::lit(4.0);
            let al = one - xi - eta;
            NodalRefEval {
                values: vec![
                    al * (two * al - one),
                    xi * (two * xi - one),
                    eta * (two * eta - one),
                    four * al * xi,
                    four * xi * eta,
                    four * eta * al,
                ],
                d_xi: vec![
                    -(four * al - one),
                    four * xi - one,
                    T::zero(),
                    four * (al - xi),
                    four * eta,
                    -four * eta,
                ],
                d_eta: vec![
                    -(four * al - one),
                    T::zero(),
                    four * eta - one,
                    -four * xi,
                    four * xi,
                    four * (al - eta),
                ],
            }
        }
    }
}

impl<T> NodalRefEval<T> {
    fn with_capacity(n: usize) -> Self {
        NodalRefEval {
            values: Vec::with_capacity(n),
            d_xi: Vec::with_capacity(n),
            d_eta: Vec::with_capacity(n),
        }
    }
}
