//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use maxwell_eigen::bench::{
    distortion_study, find_case, min_fdof_sweep, run_benchmark, BenchReport, RunSpec, SweepOptions, SweepResult,
};
use maxwell_eigen::mesh::{ElementKind, Resolution};
use maxwell_eigen::Error;

use common::Check;
use ElementKind::{EQ12, EQ4, ET8, Q4, Q9, T6};

const EDGE: [ElementKind; 3] = [EQ4, EQ12, ET8];
const NODAL: [ElementKind; 3] = [Q4, Q9, T6];

fn run(case: &str, kind: ElementKind, res: impl Into<Resolution>) -> Result<BenchReport, Error> {
    let case = find_case(case)?;
    Ok(run_benchmark(case, &RunSpec::new(kind, res))?.1)
}

fn table(case: &str, kind: ElementKind) -> Result<BenchReport, Error> {
    run(case, kind, find_case(case)?.table_resolution(kind)?)
}

fn slot_error(r: &BenchReport, slot: usize) -> Option<f64> {
    r.matches.slot_errors.get(slot - 1).copied().flatten()
}

fn fail<T>(msg: String) -> Result<T, String> {
    Err(msg)
}

fn err(e: Error) -> String {
    e.to_string()
}

fn first_k_within(r: &BenchReport, k: usize, tol: f64) -> Result<f64, String> {
    let worst = r.matches.max_error_first_k(k).ok_or_else(|| format!("{}: a slot among the first {k} missed", r.kind))?;
    let clean = r.matches.spurious.iter().all(|&v| v > r.matches.pairs[k - 1].computed);
    if worst > tol || !clean {
        return fail(format!("{} worst {worst:.3}% (limit {tol}%), spurious {:?}", r.kind, r.matches.spurious));
    }
    Ok(worst)
}

fn square() -> Check {
    let e = run("square", EQ12, 10).map_err(err)?;
    let q = run("square", Q9, 8).map_err(err)?;
    let (we, wq) = (first_k_within(&e, 16, 1.0)?, first_k_within(&q, 16, 1.0)?);
    Ok(format!(
        "EQ12 {} cells {} FDOF worst {we:.3}%; Q9 {} cells {} FDOF worst {wq:.3}%; 16 slots with multiplicity",
        e.cells, e.fdof, q.cells, q.fdof
    ))
}

fn circle() -> Check {
    let r = table("circle", EQ12).map_err(err)?;
    let (a, b) = (slot_error(&r, 1), slot_error(&r, 2));
    match (a, b) {
        (Some(a), Some(b)) if a <= 0.5 && b <= 0.5 => Ok(format!(
            "mixed EQ12/ET8 {} FDOF: {:.6} ({a:.3}%) twice",
            r.fdof, r.matches.pairs[0].computed
        )),
        _ => fail(format!("first pair errors {a:?} {b:?}")),
    }
}

/// The first reference (the singular one) has no computed partner.
fn singular_missed(r: &BenchReport) -> bool {
    slot_error(r, 1).is_none() && r.matches.missed.iter().any(|m| m.singular)
}

fn l_shape() -> Check {
    let mut out = Vec::new();
    for kind in EDGE {
        let r = table("l_shape", kind).map_err(err)?;
        match slot_error(&r, 1) {
            Some(e) if e <= 1.0 => out.push(format!("{kind} {e:.2}%")),
            e => return fail(format!("{kind}: singular value error {e:?}")),
        }
    }
    for kind in NODAL {
        let r = table("l_shape", kind).map_err(err)?;
        let inside = r.matches.spurious_between(1.43, 4.00);
        if !singular_missed(&r) || inside != 1 {
            return fail(format!("{kind}: missed {:?}, spurious {:?}", r.matches.missed, r.matches.spurious));
        }
        out.push(format!("{kind} misses, spurious {:.4}", r.matches.spurious[0]));
    }
    Ok(out.join("; "))
}

fn cracked() -> Check {
    let mut out = Vec::new();
    for kind in [EQ4, EQ12] {
        let r = table("cracked_circle", kind).map_err(err)?;
        match slot_error(&r, 1) {
            Some(e) if e <= 3.0 => out.push(format!("{kind} {:.6} ({e:.2}%)", r.matches.pairs[0].computed)),
            e => return fail(format!("{kind}: error {e:?}")),
        }
    }
    let r = table("cracked_circle", Q9).map_err(err)?;
    if !singular_missed(&r) {
        return fail(format!("Q9 captured the singular value: {:?}", r.matches.pairs.first()));
    }
    out.push("Q9 misses".into());
    Ok(out.join("; "))
}

/// Band in which the nodal spurious value is expected, widened by 5% for "near".
const CURVED_SPURIOUS: (f64, f64) = (5.03 * 0.95, 6.89 * 1.05);

fn curved() -> Check {
    let mut out = Vec::new();
    for kind in EDGE {
        let r = table("curved_l", kind).map_err(err)?;
        match slot_error(&r, 1) {
            Some(e) if e <= 1.1 => out.push(format!("{kind} {e:.2}%")),
            e => return fail(format!("{kind}: error {e:?}")),
        }
    }
    for kind in NODAL {
        let r = table("curved_l", kind).map_err(err)?;
        let s = &r.matches.spurious;
        let near = s.len() == 1 && s[0] >= CURVED_SPURIOUS.0 && s[0] <= CURVED_SPURIOUS.1;
        if !singular_missed(&r) || !near {
            return fail(format!("{kind}: missed {:?}, spurious {s:?}", r.matches.missed));
        }
        out.push(format!("{kind} spurious {:.3}", s[0]));
    }
    Ok(out.join("; "))
}

fn inhomogeneous() -> Check {
    let mut out = Vec::new();
    for kind in EDGE {
        let r = table("inhomogeneous_l", kind).map_err(err)?;
        match (slot_error(&r, 1), slot_error(&r, 2)) {
            (Some(a), Some(b)) if a <= 0.5 && b <= 0.5 => out.push(format!("{kind} {a:.3}%/{b:.3}%")),
            e => return fail(format!("{kind}: errors {e:?}")),
        }
    }
    Ok(out.join("; "))
}

fn distortion() -> Check {
    let case = find_case("curved_l").map_err(err)?;
    let mut out = Vec::new();
    for kind in EDGE.into_iter().chain(NODAL) {
        let spec = RunSpec::new(kind, case.distortion_resolution(kind).map_err(err)?);
        let s = distortion_study(case, &spec, 0.2, 7).map_err(err)?;
        if kind.is_edge() {
            let m = s.max_shift_pct();
            if m >= 1.0 {
                return fail(format!("{kind} ({} cells): shift {m:.3}%", s.normal.cells));
            }
            out.push(format!("{kind} {} cells {m:.3}%", s.normal.cells));
        } else if !s.pattern_preserved() {
            return fail(format!("{kind}: pattern changed"));
        }
    }
    out.push("nodal pattern unchanged".into());
    Ok(out.join("; "))
}

/// `a` needs fewer FDOF than `b`. `b` only walks up to `a`'s minimum: reaching the
/// threshold there would already break the claim.
fn fewer(case: &str, a: ElementKind, b: ElementKind, opts: SweepOptions) -> Result<String, String> {
    let c = find_case(case).map_err(err)?;
    let sa: SweepResult = min_fdof_sweep(c, &RunSpec::new(a, 1), &opts).map_err(err)?;
    let Some(fa) = sa.min_fdof else {
        return fail(format!("{case} {a}: threshold not reached ({:?})", sa.stop));
    };
    let mut capped = opts;
    capped.fdof_cap = fa;
    let sb = min_fdof_sweep(c, &RunSpec::new(b, 1), &capped).map_err(err)?;
    match sb.min_fdof {
        Some(fb) => fail(format!("{case}: {b} reaches {}% at {fb} <= {a} {fa}", opts.threshold_pct)),
        None => Ok(format!("{case} {a} {fa} < {b} (none up to {fa})")),
    }
}

fn sweeps() -> Check {
    Ok([
        fewer("square", EQ12, Q9, SweepOptions::new(1.0, 16, 1))?,
        fewer("l_shape", EQ12, Q9, SweepOptions::new(6.0, 5, 2))?,
        fewer("l_shape", EQ4, Q4, SweepOptions::new(6.0, 5, 2))?,
    ]
    .join("; "))
}

fn properties() -> Check {
    let checks: [(&str, fn() -> Check); 9] = [
        ("partition of unity", common::partition_of_unity),
        ("Kronecker delta", common::kronecker_delta),
        ("tangential traces", common::tangential_traces),
        ("analytic vs FD", common::analytic_vs_fd),
        ("K/M symmetry", common::symmetry),
        ("null space", common::null_space),
        ("QZ vs Cholesky", common::qz_vs_cholesky),
        ("patch test", common::patch_test),
        ("quadrature", common::quadrature),
    ];
    let mut out = Vec::new();
    for (name, f) in checks {
        out.push(format!("{name}: {}", f().map_err(|e| format!("{name}: {e}"))?));
    }
    Ok(out.join("; "))
}

fn zeros_reported() -> Check {
    let r = run("l_shape", EQ4, 4).map_err(err)?;
    let json = serde_json::to_value(&r).map_err(|e| e.to_string())?;
    match json.get("zero_count").and_then(|v| v.as_u64()) {
        Some(z) => Ok(format!("zero_count {z} in the run report (informational)")),
        None => fail("zero_count missing from the run report".into()),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("square", square),
        ("circle", circle),
        ("L-shape", l_shape),
        ("cracked circle", cracked),
        ("curved L", curved),
        ("inhomogeneous L", inhomogeneous),
        ("distortion", distortion),
        ("coarse-mesh superiority", sweeps),
        ("property suite", properties),
        ("zeros reported", zeros_reported),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
