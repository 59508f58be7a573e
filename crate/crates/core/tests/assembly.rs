use maxwell_eigen::assembly::{
    apply_essential_bc, assemble_edge, assemble_nodal_potential, discrete_gradient, gauss_square, interpolate_edge_field,
    quadrature_rule, refined_rule, triangle_collapsed, CscMatrix, QuadratureRule,
};
use maxwell_eigen::bench::assemble_reduced;
use maxwell_eigen::mesh::{
    boundary_dofs, boundary_nodes, distort_mesh, extract_edges, generate_mesh_with, Domain, DomainSpec, ElementKind,
    Formulation, Mesh, NodalBc, Resolution,
};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALL: [ElementKind; 6] = [
    ElementKind::Q4,
    ElementKind::Q9,
    ElementKind::T6,
    ElementKind::EQ4,
    ElementKind::EQ12,
    ElementKind::ET8,
];

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

#[test]
fn matrices_symmetric() {
    let cases = [
        (Domain::Square, Resolution::new(2)),
        (Domain::CurvedL, Resolution::with_m(1, 2)),
        (Domain::InhomogeneousL, Resolution::new(2)),
        (Domain::CrackedCircle, Resolution::with_m(2, 4)),
    ];
    for (domain, res) in cases {
        for kind in ALL {
            let (spec, m) = mesh(domain, kind, res);
            let f = Formulation::for_kind(kind);
            let sys = assemble_reduced(&m, &spec.materials, f, Default::default()).unwrap();
            for (name, a) in [("K", &sys.k), ("M", &sys.m)] {
                let rel = a.asymmetry() / a.max_abs();
                assert!(rel <= 1e-12, "{domain} {kind} {name}: asymmetry {rel:e}");
            }
        }
    }
}

#[test]
fn edge_null_space_is_interior_gradients() {
    let cases = [
        (Domain::Square, ElementKind::EQ4, Resolution::new(4)),
        (Domain::Square, ElementKind::EQ12, Resolution::new(2)),
        (Domain::Square, ElementKind::ET8, Resolution::new(2)),
        (Domain::LShape, ElementKind::EQ12, Resolution::new(1)),
        (Domain::CurvedL, ElementKind::EQ4, Resolution::with_m(1, 3)),
        (Domain::CurvedL, ElementKind::ET8, Resolution::with_m(1, 1)),
        (Domain::CrackedCircle, ElementKind::EQ4, Resolution::with_m(2, 6)),
    ];
    for (domain, kind, res) in cases {
        let (spec, m) = mesh(domain, kind, res);
        let sys = assemble_reduced(&m, &spec.materials, Formulation::Edge, Default::default()).unwrap();
        assert!(sys.fdof <= 200, "{domain} {kind}: {} dofs", sys.fdof);
        let eig = SymmetricEigen::new(dense(&sys.k)).eigenvalues;
        let top = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let null = eig.iter().filter(|v| v.abs() <= 1e-9 * top).count();
        let interior = m.node_count() - boundary_nodes(&m).len();
        assert_eq!(null, interior, "{domain} {kind}");
    }
}

#[test]
fn gradients_in_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in [ElementKind::EQ4, ElementKind::EQ12, ElementKind::ET8] {
        let (spec, m) = mesh(Domain::CurvedL, kind, Resolution::with_m(2, 3));
        for m in [m.clone(), distort_mesh(&m, 0.25, 5).unwrap()] {
            let edges = extract_edges(&m).unwrap();
            let sys = assemble_edge(&m, &edges, &spec.materials).unwrap();
            let g = discrete_gradient(&m, &edges).unwrap();
            let u: Vec<f64> = (0..m.node_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let e = g.mul_vec(&u);
            let r = sys.k.mul_vec(&e);
            let rel = norm(&r) / (sys.k.max_abs() * norm(&e));
            assert!(rel <= 1e-10, "{kind}: |K G u| rel {rel:e}");
        }
    }
}

#[test]
fn constant_field_patch() {
    for kind in [ElementKind::EQ4, ElementKind::EQ12, ElementKind::ET8] {
        let (spec, m) = mesh(Domain::Square, kind, Resolution::new(3));
        let edges = extract_edges(&m).unwrap();
        let sys = assemble_edge(&m, &edges, &spec.materials).unwrap();
        let e = interpolate_edge_field(&m, &edges, |_| [0.8, -0.35]).unwrap();
        let r = sys.k.mul_vec(&e);
        let rel = norm(&r) / (sys.k.max_abs() * norm(&e));
        assert!(rel <= 1e-10, "{kind}: |K E| rel {rel:e}");
    }
}

#[test]
fn nodal_reduction_keeps_free_rows() {
    let (spec, m) = mesh(Domain::LShape, ElementKind::Q9, Resolution::new(2));
    for bc in [NodalBc::Tangential, NodalBc::Full] {
        let f = Formulation::NodalPotential(bc);
        let sys = assemble_nodal_potential(&m, &spec.materials, bc).unwrap();
        let fixed = boundary_dofs(&m, None, f).unwrap();
        let red = apply_essential_bc(&sys, &fixed).unwrap();
        assert_eq!(red.fdof, sys.fdof - fixed.len());
        assert_eq!(red.k.nrows(), red.fdof);
    }
}

fn exact_square(a: u32, b: u32) -> f64 {
    let one = |p: u32| if p % 2 == 1 { 0.0 } else { 2.0 / f64::from(p + 1) };
    one(a) * one(b)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn exact_triangle(a: u32, b: u32) -> f64 {
    factorial(a) * factorial(b) / factorial(a + b + 2)
}

fn check_rule(rule: &QuadratureRule<f64>, triangle: bool) {
    let d = rule.degree as u32;
    for a in 0..=d {
        for b in 0..=(d - a) {
            let got = rule.integrate(|x, y| x.powi(a as i32) * y.powi(b as i32));
            let want = if triangle { exact_triangle(a, b) } else { exact_square(a, b) };
            assert!((got - want).abs() < 1e-13, "degree {d}: x^{a} y^{b}: {got} vs {want}");
        }
    }
}

#[test]
fn quadrature_exact_on_monomials() {
    for kind in ALL {
        check_rule(&quadrature_rule(kind), kind.is_triangle());
        check_rule(&refined_rule(kind), kind.is_triangle());
    }
    for n in 1..=8 {
        check_rule(&gauss_square(n), false);
        check_rule(&triangle_collapsed(n), true);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mass_positive_definite(seed in 0u64..1000, kind_ix in 0usize..6) {
        let kind = ALL[kind_ix];
        let (spec, m) = mesh(Domain::Square, kind, Resolution::new(2));
        let m = distort_mesh(&m, 0.3, seed).unwrap();
        let sys = assemble_reduced(&m, &spec.materials, Formulation::for_kind(kind), Default::default()).unwrap();
        let eig = SymmetricEigen::new(dense(&sys.m)).eigenvalues;
        prop_assert!(eig.min() > 0.0);
        let k = SymmetricEigen::new(dense(&sys.k)).eigenvalues;
        prop_assert!(k.min() >= -1e-10 * k.max());
    }
}
