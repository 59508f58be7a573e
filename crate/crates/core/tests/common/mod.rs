//! Deterministic property checks shared by the acceptance run.

use maxwell_eigen::assembly::{assemble_edge, discrete_gradient, quadrature_rule, CscMatrix};
use maxwell_eigen::bench::assemble_reduced;
use maxwell_eigen::eigensolver::{solve_pencil, Method, SolveOptions};
use maxwell_eigen::elements::{
    eval_edge_shape, eval_edge_shape_fd, eval_edge_shape_ref, eval_nodal_shape, geometry_map, local_edges,
    reference_nodes, RefPoint,
};
use maxwell_eigen::mesh::{
    boundary_nodes, distort_mesh, extract_edges, generate_mesh_with, Domain, DomainSpec, ElementKind, Formulation, Mesh,
    Resolution,
};
use nalgebra::{DMatrix, SymmetricEigen};

pub type Check = Result<String, String>;

pub const NODAL: [ElementKind; 4] = [ElementKind::Q4, ElementKind::Q9, ElementKind::T3, ElementKind::T6];
pub const EDGE: [ElementKind; 4] = [ElementKind::EQ4, ElementKind::EQ12, ElementKind::ET8, ElementKind::ET3];
pub const PRIMARY: [ElementKind; 6] = [
    ElementKind::Q4,
    ElementKind::Q9,
    ElementKind::T6,
    ElementKind::EQ4,
    ElementKind::EQ12,
    ElementKind::ET8,
];

fn sample_points(kind: ElementKind) -> Vec<RefPoint<f64>> {
    let s = [0.03, 0.21, 0.5, 0.68, 0.94];
    let mut out = Vec::new();
    for &u in &s {
        for &v in &s {
            if kind.is_quad() {
                out.push(RefPoint::new(2.0 * u - 1.0, 2.0 * v - 1.0));
            } else if u + v < 0.99 {
                out.push(RefPoint::new(u, v));
            }
        }
    }
    out
}

fn mesh(domain: Domain, kind: ElementKind, res: Resolution) -> (DomainSpec, Mesh<f64>) {
    let spec = DomainSpec::new(domain);
    let m = generate_mesh_with(&spec, kind, res).unwrap();
    (spec, m)
}

fn dense(a: &CscMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(a.nrows(), a.ncols(), &a.to_dense_f64())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn partition_of_unity() -> Check {
    let mut worst = 0.0f64;
    for kind in NODAL {
        for p in sample_points(kind) {
            let e = eval_nodal_shape(kind, p).map_err(|e| e.to_string())?;
            worst = worst.max((e.values.iter().sum::<f64>() - 1.0).abs());
        }
    }
    (worst < 1e-13).then(|| format!("max |sum N - 1| {worst:.1e}")).ok_or(format!("sum error {worst:e}"))
}

pub fn kronecker_delta() -> Check {
    let mut worst = 0.0f64;
    for kind in NODAL {
        for (j, r) in reference_nodes(kind).iter().enumerate() {
            let e = eval_nodal_shape(kind, RefPoint::new(r[0], r[1])).map_err(|e| e.to_string())?;
            for (i, v) in e.values.iter().enumerate() {
                worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    (worst < 1e-14).then(|| format!("max deviation {worst:.1e}")).ok_or(format!("deviation {worst:e}"))
}

pub fn tangential_traces() -> Check {
    let mut worst = 0.0f64;
    for kind in EDGE {
        let r = reference_nodes(kind);
        for s in 0..kind.side_count() {
            let sn = kind.side_nodes(s);
            let (a, b) = (r[sn[0]], r[sn[sn.len() - 1]]);
            let d = [b[0] - a[0], b[1] - a[1]];
            for t in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
                let (ab, _) = eval_edge_shape_ref(kind, a[0] + t * d[0], a[1] + t * d[1]);
                for (i, edge) in local_edges(kind).iter().enumerate() {
                    if edge.side != Some(s) {
                        worst = worst.max((ab[i][0] * d[0] + ab[i][1] * d[1]).abs());
                    }
                }
            }
        }
    }
    (worst <= 1e-10).then(|| format!("max foreign trace {worst:.1e}")).ok_or(format!("trace {worst:e}"))
}

pub fn analytic_vs_fd() -> Check {
    let mut worst = 0.0f64;
    for kind in EDGE {
        let (_, m) = mesh(Domain::CurvedL, kind, Resolution::with_m(1, 1));
        let edges = extract_edges(&m).map_err(|e| e.to_string())?;
        let c = m.cell_count() - 1;
        let (coords, lengths) = (m.cell_coords(c), &edges.edge_lengths[c]);
        for p in sample_points(kind) {
            let g = geometry_map(kind, &coords, p).map_err(|e| e.to_string())?;
            let a = eval_edge_shape(kind, p, &g, lengths).map_err(|e| e.to_string())?;
            let f = eval_edge_shape_fd(kind, &coords, p, lengths, 1e-5).map_err(|e| e.to_string())?;
            for (x, y) in a.curls.iter().zip(&f.curls) {
                worst = worst.max((x - y).abs() / x.abs().max(1.0));
            }
        }
    }
    (worst <= 1e-5).then(|| format!("max curl gap {worst:.1e}")).ok_or(format!("curl gap {worst:e}"))
}

pub fn symmetry() -> Check {
    let mut worst = 0.0f64;
    for domain in [Domain::Square, Domain::CurvedL, Domain::InhomogeneousL] {
        for kind in PRIMARY {
            let res = if domain == Domain::CurvedL { Resolution::with_m(1, 2) } else { Resolution::new(2) };
            let (spec, m) = mesh(domain, kind, res);
            let sys = assemble_reduced(&m, &spec.materials, Formulation::for_kind(kind), Default::default())
                .map_err(|e| e.to_string())?;
            for a in [&sys.k, &sys.m] {
                worst = worst.max(a.asymmetry() / a.max_abs());
            }
        }
    }
    (worst <= 1e-12).then(|| format!("max rel asymmetry {worst:.1e}")).ok_or(format!("asymmetry {worst:e}"))
}

pub fn null_space() -> Check {
    let cases = [
        (Domain::Square, ElementKind::EQ4, Resolution::new(4)),
        (Domain::Square, ElementKind::EQ12, Resolution::new(2)),
        (Domain::Square, ElementKind::ET8, Resolution::new(2)),
        (Domain::LShape, ElementKind::EQ12, Resolution::new(1)),
        (Domain::CurvedL, ElementKind::EQ4, Resolution::with_m(1, 3)),
    ];
    let mut dims = Vec::new();
    for (domain, kind, res) in cases {
        let (spec, m) = mesh(domain, kind, res);
        let sys = assemble_reduced(&m, &spec.materials, Formulation::Edge, Default::default()).map_err(|e| e.to_string())?;
        if sys.fdof > 200 {
            return Err(format!("{domain} {kind}: {} dofs", sys.fdof));
        }
        let eig = SymmetricEigen::new(dense(&sys.k)).eigenvalues;
        let top = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let null = eig.iter().filter(|v| v.abs() <= 1e-9 * top).count();
        let interior = m.node_count() - boundary_nodes(&m).len();
        if null != interior {
            return Err(format!("{domain} {kind}: null {null} vs interior {interior}"));
        }
        dims.push(null);
    }
    Ok(format!("null dims {dims:?} equal interior node counts"))
}

pub fn qz_vs_cholesky() -> Check {
    let cases = [
        (Domain::Square, ElementKind::EQ12, Resolution::new(4)),
        (Domain::LShape, ElementKind::ET8, Resolution::new(2)),
        (Domain::CurvedL, ElementKind::EQ4, Resolution::with_m(2, 4)),
        (Domain::InhomogeneousL, ElementKind::EQ12, Resolution::new(3)),
    ];
    let mut worst = 0.0f64;
    for (domain, kind, res) in cases {
        let (spec, m) = mesh(domain, kind, res);
        let sys = assemble_reduced(&m, &spec.materials, Formulation::Edge, Default::default()).map_err(|e| e.to_string())?;
        if sys.fdof > 500 {
            return Err(format!("{domain} {kind}: {} dofs", sys.fdof));
        }
        let l = dense(&sys.m).cholesky().ok_or("mass not definite")?.l();
        let li = l.try_inverse().ok_or("singular factor")?;
        let c = &li * dense(&sys.k) * li.transpose();
        let mut want: Vec<f64> = SymmetricEigen::new((&c + c.transpose()) * 0.5).eigenvalues.iter().copied().collect();
        want.sort_by(f64::total_cmp);
        let opts = SolveOptions {
            method: Method::Qz,
            ..SolveOptions::default()
        };
        let s = solve_pencil(&sys.k, &sys.m, &opts).map_err(|e| e.to_string())?;
        let zeros = want.iter().filter(|v| v.abs() <= s.tolerances.zero_threshold).count();
        if zeros != s.zero_count {
            return Err(format!("{domain} {kind}: zero count {} vs {zeros}", s.zero_count));
        }
        for (a, b) in s.nonzero().iter().zip(&want[zeros..]) {
            worst = worst.max((a - b).abs() / b.abs());
        }
    }
    (worst <= 1e-9).then(|| format!("max rel gap {worst:.1e}")).ok_or(format!("gap {worst:e}"))
}

pub fn patch_test() -> Check {
    let mut worst = 0.0f64;
    for kind in [ElementKind::EQ4, ElementKind::EQ12, ElementKind::ET8] {
        let (spec, m) = mesh(Domain::CurvedL, kind, Resolution::with_m(2, 3));
        let m = distort_mesh(&m, 0.2, 1).map_err(|e| e.to_string())?;
        let edges = extract_edges(&m).map_err(|e| e.to_string())?;
        let sys = assemble_edge(&m, &edges, &spec.materials).map_err(|e| e.to_string())?;
        let g = discrete_gradient(&m, &edges).map_err(|e| e.to_string())?;
        // potential x: its gradient is the constant field (1, 0)
        let u: Vec<f64> = m.nodes().iter().map(|p| p[0]).collect();
        let e = g.mul_vec(&u);
        worst = worst.max(norm(&sys.k.mul_vec(&e)) / (sys.k.max_abs() * norm(&e)));
    }
    (worst <= 1e-10).then(|| format!("max |K E| rel {worst:.1e}")).ok_or(format!("|K E| {worst:e}"))
}

pub fn quadrature() -> Check {
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let mut worst = 0.0f64;
    for kind in PRIMARY {
        let rule = quadrature_rule::<f64>(kind);
        let d = rule.degree as u32;
        for a in 0..=d {
            for b in 0..=(d - a) {
                let got = rule.integrate(|x, y| x.powi(a as i32) * y.powi(b as i32));
                let want = if kind.is_triangle() {
                    fact(a) * fact(b) / fact(a + b + 2)
                } else {
                    let one = |p: u32| if p % 2 == 1 { 0.0 } else { 2.0 / f64::from(p + 1) };
                    one(a) * one(b)
                };
                worst = worst.max((got - want).abs());
            }
        }
    }
    (worst < 1e-13).then(|| format!("max monomial error {worst:.1e}")).ok_or(format!("error {worst:e}"))
}
