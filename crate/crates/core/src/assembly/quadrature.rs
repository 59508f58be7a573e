use crate::elements::RefPoint;
use crate::mesh::ElementKind;
use crate::scalar::Scalar;

/// Points and weights on a reference element; weights sum to the reference area.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub points: Vec<RefPoint<T>>,
    pub weights: Vec<T>,
    /// Highest total polynomial degree integrated exactly.
    pub degree: usize,
}

impl<T: Scalar> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate<F: Fn(T, T) -> T>(&self, f: F) -> T {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p.xi, p.eta))
            .sum()
    }

    fn from_f64(points: &[[f64; 2]], weights: &[f64], degree: usize) -> Self {
        QuadratureRule {
            points: points.iter().map(|p| RefPoint::new(T::lit(p[0]), T::lit(p[1]))).collect(),
            weights: weights.iter().map(|&w| T::lit(w)).collect(),
            degree,
        }
    }
}

/// Default rule for a kind: Gauss 2x2 (Q4, EQ4), 3x3 (Q9, EQ12), a 3-point degree-2 rule
/// (T3, ET3) or a 7-point degree-5 rule (T6, ET8).
pub fn quadrature_rule<T: Scalar>(kind: ElementKind) -> QuadratureRule<T> {
    match kind.geometry_kind() {
        ElementKind::Q4 => gauss_square(2),
        ElementKind::Q9 => gauss_square(3),
        ElementKind::T3 => triangle_3(),
        _ => triangle_7(),
    }
}

/// Rule of (at least) twice the default degree, for quadrature sufficiency checks.
pub fn refined_rule<T: Scalar>(kind: ElementKind) -> QuadratureRule<T> {
    match kind.geometry_kind() {
        ElementKind::Q4 => gauss_square(4),
        ElementKind::Q9 => gauss_square(6),
        ElementKind::T3 => triangle_collapsed(3),
        _ => triangle_collapsed(6),
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre needs at least one point");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Tensor Gauss rule with `n` points per direction on [-1, 1]^2.
pub fn gauss_square<T: Scalar>(n: usize) -> QuadratureRule<T> {
    let (x, w) = gauss_legendre(n);
    let mut pts = Vec::with_capacity(n * n);
    let mut wts = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            pts.push([x[i], x[j]]);
            wts.push(w[i] * w[j]);
        }
    }
    QuadratureRule::from_f64(&pts, &wts, 2 * n - 1)
}

fn triangle_3<T: Scalar>() -> QuadratureRule<T> {
    let s = 1.0 / 6.0;
    let t = 2.0 / 3.0;
    QuadratureRule::from_f64(&[[s, s], [t, s], [s, t]], &[s; 3], 2)
}

fn triangle_7<T: Scalar>() -> QuadratureRule<T> {
    let r = 15f64.sqrt();
    let a = (6.0 - r) / 21.0;
    let b = (9.0 + 2.0 * r) / 21.0;
    let c = (6.0 + r) / 21.0;
    let d = (9.0 - 2.0 * r) / 21.0;
    let wa = (155.0 - r) / 2400.0;
    let wc = (155.0 + r) / 2400.0;
    let third = 1.0 / 3.0;
    QuadratureRule::from_f64(
        &[[third, third], [a, a], [b, a], [a, b], [c, c], [d, c], [c, d]],
        &[9.0 / 80.0, wa, wa, wa, wc, wc, wc],
        5,
    )
}

/// Collapsed (Duffy) Gauss rule on the unit triangle, exact to degree `2n - 2`.
pub fn triangle_collapsed<T: Scalar>(n: usize) -> QuadratureRule<T> {
    let (x, w) = gauss_legendre(n);
    let mut pts = Vec::with_capacity(n * n);
    let mut wts = Vec::with_capacity(n * n);
    for i in 0..n {
        let u = 0.5 * (x[i] + 1.0);
        for j in 0..n {
            let v = 0.5 * (x[j] + 1.0);
            pts.push([u, v * (1.0 - u)]);
            wts.push(0.25 * w[i] * w[j] * (1.0 - u));
        }
    }
    QuadratureRule::from_f64(&pts, &wts, 2 * n - 2)
}
