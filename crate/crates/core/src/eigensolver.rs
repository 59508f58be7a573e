//! Dense generalized symmetric eigensolver for `K x = lambda M x` with singular `M` and
//! large null spaces of `K`.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack, StackReq};
use faer::linalg::evd::ComputeEigenvectors;
use faer::linalg::gevd::{gevd_real, gevd_scratch, GevdParams};
use faer::linalg::triangular_solve::{solve_lower_triangular_in_place, solve_upper_triangular_in_place};
use faer::{Auto, Mat, Par, Side};
use serde::{Deserialize, Serialize};

use crate::assembly::{CscMatrix, SystemPair};
use crate::error::SolverError;
use crate::scalar::Scalar;

/// Dense algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// QZ for small systems, the shifted Cholesky reduction otherwise or when vectors are
    /// requested.
    #[default]
    Auto,
    /// Generalized Schur (QZ) decomposition; tolerates singular `M`.
    Qz,
    /// Factor `C = K + sigma M`, solve the standard problem `L^-1 M L^-T y = mu y` and map
    /// back with `lambda = 1/mu - sigma`; `mu = 0` marks an infinite eigenvalue.
    ShiftedCholesky,
    /// Factor `M` itself (requires `M` positive definite).
    MCholesky,
}

/// Size up to which `Method::Auto` picks QZ.
pub const AUTO_QZ_LIMIT: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// `|lambda| <= zero_rel_tol * lambda_max` counts as a zero eigenvalue.
    pub zero_rel_tol: f64,
    /// Relative size of `beta` (QZ) or `mu` (shifted Cholesky) below which an eigenvalue is
    /// infinite.
    pub inf_rel_tol: f64,
    pub want_vectors: bool,
    /// Number of nonzero eigenpairs whose vectors are kept (all when `None`).
    pub k_max: Option<usize>,
    pub method: Method,
    /// Largest dense system accepted.
    pub n_dense: usize,
    /// Shift of the shifted Cholesky reduction.
    pub shift: f64,
    /// Relative asymmetry accepted in `K` and `M`.
    pub symmetry_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            zero_rel_tol: 1e-8,
            inf_rel_tol: 1e-12,
            want_vectors: false,
            k_max: None,
            method: Method::Auto,
            n_dense: 5000,
            shift: 1.0,
            symmetry_tol: 1e-10,
        }
    }
}

/// Thresholds used by a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero_rel_tol: f64,
    pub inf_rel_tol: f64,
    /// Absolute zero threshold `zero_rel_tol * min(lambda_max, pencil_scale)`.
    pub zero_threshold: f64,
    /// Largest finite eigenvalue magnitude.
    pub lambda_max: f64,
    /// `max |K_ij| / max |M_ij|`.
    pub pencil_scale: f64,
}

/// Classified generalized spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Finite eigenvalues, ascending; the first `zero_count` are numerically zero.
    pub finite: Vec<f64>,
    pub zero_count: usize,
    pub infinite_count: usize,
    /// M-normalised eigenvectors of `finite[0..vectors.len()]`.
    #[serde(skip)]
    pub vectors: Option<Vec<Vec<f64>>>,
    pub tolerances: Tolerances,
    pub method: Method,
}

impl Spectrum {
    pub fn empty(opts: &SolveOptions) -> Self {
        Spectrum {
            finite: Vec::new(),
            zero_count: 0,
            infinite_count: 0,
            vectors: opts.want_vectors.then(Vec::new),
            tolerances: Tolerances {
                zero_rel_tol: opts.zero_rel_tol,
                inf_rel_tol: opts.inf_rel_tol,
                zero_threshold: 0.0,
                lambda_max: 0.0,
                pencil_scale: 0.0,
            },
            method: opts.method,
        }
    }

    /// Finite eigenvalues above the zero threshold.
    pub fn nonzero(&self) -> &[f64] {
        &self.finite[self.zero_count..]
    }
}

/// The first `k` nonzero eigenvalues, ascending, with multiplicities repeated.
pub fn classify_spectrum(spec: &Spectrum, k: usize) -> Vec<f64> {
    spec.nonzero().iter().take(k).copied().collect()
}

/// Solves the pencil of an assembled (and usually reduced) system.
pub fn solve_generalized<T: Scalar>(sys: &SystemPair<T>, opts: &SolveOptions) -> Result<Spectrum, SolverError> {
    solve_pencil(&sys.k.cast::<f64>(), &sys.m.cast::<f64>(), opts)
}

/// Solves `K x = lambda M x` for sparse symmetric `K`, `M` with a dense method.
pub fn solve_pencil(k: &CscMatrix<f64>, m: &CscMatrix<f64>, opts: &SolveOptions) -> Result<Spectrum, SolverError> {
    let n = k.nrows();
    if k.ncols() != n || m.nrows() != n || m.ncols() != n {
        return Err(SolverError::Dimension);
    }
    if n > opts.n_dense {
        return Err(SolverError::TooLarge { n, limit: opts.n_dense });
    }
    for (which, a) in [("K", k), ("M", m)] {
        let asym = a.asymmetry();
        if asym > opts.symmetry_tol {
            return Err(SolverError::NotSymmetric { which, asymmetry: asym });
        }
    }
    let kd = dense(k);
    let md = dense(m);
    solve_dense(&kd, &md, opts)
}

fn dense(a: &CscMatrix<f64>) -> Mat<f64> {
    let mut d = Mat::<f64>::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.iter() {
        d[(i, j)] += v;
    }
    // exact symmetry for the symmetric kernels
    for j in 0..d.ncols() {
        for i in 0..j {
            let s = 0.5 * (d[(i, j)] + d[(j, i)]);
            d[(i, j)] = s;
            d[(j, i)] = s;
        }
    }
    d
}

/// Raw output of an algorithm before classification.
struct Raw {
    finite: Vec<f64>,
    vectors: Option<Vec<Vec<f64>>>,
    infinite: usize,
    method: Method,
}

/// Dense entry point (column-major `faer` matrices, assumed symmetric).
pub fn solve_dense(k: &Mat<f64>, m: &Mat<f64>, opts: &SolveOptions) -> Result<Spectrum, SolverError> {
    let n = k.nrows();
    if k.ncols() != n || m.nrows() != n || m.ncols() != n {
        return Err(SolverError::Dimension);
    }
    if n == 0 {
        return Ok(Spectrum::empty(opts));
    }
    let method = match opts.method {
        Method::Auto if opts.want_vectors || n > AUTO_QZ_LIMIT => Method::ShiftedCholesky,
        Method::Auto => Method::Qz,
        other => other,
    };
    let raw = match method {
        Method::Qz => qz(k, m, opts)?,
        Method::ShiftedCholesky => shifted_cholesky(k, m, opts)?,
        _ => m_cholesky(k, m, opts)?,
    };
    classify(raw, k, m, opts)
}

fn max_abs(a: &Mat<f64>) -> f64 {
    let mut v = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            v = v.max(a[(i, j)].abs());
        }
    }
    v
}

fn qz(k: &Mat<f64>, m: &Mat<f64>, opts: &SolveOptions) -> Result<Raw, SolverError> {
    let n = k.nrows();
    let (mut a, mut b) = (k.clone(), m.clone());
    let mut sr = Diag::<f64>::zeros(n);
    let mut si = Diag::<f64>::zeros(n);
    let mut beta = Diag::<f64>::zeros(n);
    // faer 0.24's eigenvalue-only QZ path is unreliable beyond a few dozen rows
    let mut right = Mat::<f64>::zeros(n, n);
    let par = Par::Seq;
    // the blocked sweep with aggressive deflation stalls for seconds on some FEM pencils
    let mut params = <GevdParams as Auto<f64>>::auto();
    params.schur.blocking_threshold = usize::MAX;
    let scratch = gevd_scratch::<f64>(n, ComputeEigenvectors::No, ComputeEigenvectors::Yes, par, params.into())
        // under-reported for tiny pencils
        .and(StackReq::new::<f64>(8 * n + 64));
    gevd_real(
        a.as_mut(),
        b.as_mut(),
        sr.as_mut(),
        si.as_mut(),
        beta.as_mut(),
        None,
        Some(right.as_mut()),
        par,
        MemStack::new(&mut MemBuffer::new(scratch)),
        params.into(),
    )
    .map_err(|e| SolverError::Factorization(format!("QZ failed: {e:?}")))?;
    let (sr, beta) = (sr.column_vector(), beta.column_vector());
    let bmax = (0..n).fold(0.0f64, |acc, i| acc.max(beta[i].abs()));
    let mut finite = Vec::with_capacity(n);
    let mut infinite = 0;
    for i in 0..n {
        if beta[i].abs() <= opts.inf_rel_tol * bmax {
            infinite += 1;
        } else {
            finite.push(sr[i] / beta[i]);
        }
    }
    Ok(Raw {
        finite,
        vectors: None,
        infinite,
        method: Method::Qz,
    })
}

fn shifted_cholesky(k: &Mat<f64>, m: &Mat<f64>, opts: &SolveOptions) -> Result<Raw, SolverError> {
    let n = k.nrows();
    let mut sigma = opts.shift;
    let mut attempt = 0;
    let llt = loop {
        let c = Mat::<f64>::from_fn(n, n, |i, j| k[(i, j)] + sigma * m[(i, j)]);
        match c.llt(Side::Lower) {
            Ok(l) => break l,
            Err(e) if attempt >= 3 => {
                return Err(SolverError::Factorization(format!(
                    "K + sigma M is not positive definite (sigma = {sigma}): {e:?}"
                )))
            }
            Err(_) => {
                attempt += 1;
                sigma *= 10.0;
            }
        }
    };
    let l = llt.L();
    let mut x = m.clone();
    solve_lower_triangular_in_place(l, x.as_mut(), Par::Seq);
    let mut y = x.transpose().to_owned();
    solve_lower_triangular_in_place(l, y.as_mut(), Par::Seq);
    let y = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (y[(i, j)] + y[(j, i)]));
    let (mu, u) = if opts.want_vectors {
        let evd = y
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| SolverError::Factorization(format!("eigensolver failed: {e:?}")))?;
        let s = evd.S().column_vector();
        let mu: Vec<f64> = (0..n).map(|i| s[i]).collect();
        (mu, Some(evd.U().to_owned()))
    } else {
        let mu = y
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| SolverError::Factorization(format!("eigensolver failed: {e:?}")))?;
        (mu, None)
    };
    let mu_max = mu.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let mut finite = Vec::with_capacity(n);
    let mut cols = Vec::new();
    let mut infinite = 0;
    for (i, &v) in mu.iter().enumerate() {
        if v <= opts.inf_rel_tol * mu_max {
            infinite += 1;
        } else {
            finite.push(1.0 / v - sigma);
            cols.push(i);
        }
    }
    let vectors = u.map(|mut u| {
        solve_upper_triangular_in_place(l.transpose(), u.as_mut(), Par::Seq);
        cols.iter().map(|&c| (0..n).map(|r| u[(r, c)]).collect()).collect()
    });
    Ok(Raw {
        finite,
        vectors,
        infinite,
        method: Method::ShiftedCholesky,
    })
}

fn m_cholesky(k: &Mat<f64>, m: &Mat<f64>, opts: &SolveOptions) -> Result<Raw, SolverError> {
    let n = k.nrows();
    let llt = m
        .llt(Side::Lower)
        .map_err(|e| SolverError::Factorization(format!("M is not positive definite: {e:?}")))?;
    let l = llt.L();
    let mut x = k.clone();
    solve_lower_triangular_in_place(l, x.as_mut(), Par::Seq);
    let mut y = x.transpose().to_owned();
    solve_lower_triangular_in_place(l, y.as_mut(), Par::Seq);
    let y = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (y[(i, j)] + y[(j, i)]));
    let (finite, vectors) = if opts.want_vectors {
        let evd = y
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| SolverError::Factorization(format!("eigensolver failed: {e:?}")))?;
        let s = evd.S().column_vector();
        let mut u = evd.U().to_owned();
        solve_upper_triangular_in_place(l.transpose(), u.as_mut(), Par::Seq);
        let vecs = (0..n).map(|c| (0..n).map(|r| u[(r, c)]).collect()).collect();
        ((0..n).map(|i| s[i]).collect(), Some(vecs))
    } else {
        let v = y
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| SolverError::Factorization(format!("eigensolver failed: {e:?}")))?;
        (v, None)
    };
    Ok(Raw {
        finite,
        vectors,
        infinite: 0,
        method: Method::MCholesky,
    })
}

/// Nearly singular directions of `M` come out of QZ as huge finite values, so the zero
/// threshold is also capped by the entry scale of the pencil.
fn classify(raw: Raw, k: &Mat<f64>, m: &Mat<f64>, opts: &SolveOptions) -> Result<Spectrum, SolverError> {
    let lambda_max = raw.finite.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let m_max = max_abs(m);
    let pencil_scale = if m_max > 0.0 { max_abs(k) / m_max } else { f64::MAX };
    let tau = opts.zero_rel_tol * lambda_max.min(pencil_scale);
    let mut order: Vec<usize> = (0..raw.finite.len()).collect();
    order.sort_by(|&a, &b| raw.finite[a].total_cmp(&raw.finite[b]));
    let finite: Vec<f64> = order.iter().map(|&i| raw.finite[i]).collect();
    if let Some(&v) = finite.first() {
        if v < -tau {
            return Err(SolverError::Indefinite { value: v });
        }
    }
    let zero_count = finite.iter().take_while(|v| v.abs() <= tau).count();
    let vectors = raw.vectors.map(|vs| {
        let keep = opts.k_max.map_or(finite.len(), |k| (zero_count + k).min(finite.len()));
        order
            .iter()
            .take(keep)
            .map(|&i| m_normalise(vs[i].clone(), m))
            .collect()
    });
    Ok(Spectrum {
        finite,
        zero_count,
        infinite_count: raw.infinite,
        vectors,
        tolerances: Tolerances {
            zero_rel_tol: opts.zero_rel_tol,
            inf_rel_tol: opts.inf_rel_tol,
            zero_threshold: tau,
            lambda_max,
            pencil_scale,
        },
        method: raw.method,
    })
}

fn m_normalise(mut x: Vec<f64>, m: &Mat<f64>) -> Vec<f64> {
    let n = x.len();
    let mut q = 0.0;
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            s += m[(i, j)] * x[i];
        }
        q += s * x[j];
    }
    if q > 0.0 {
        let s = q.sqrt();
        x.iter_mut().for_each(|v| *v /= s);
    }
    x
}
