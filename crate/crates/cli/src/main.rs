mod args;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use maxwell_eigen::assembly::write_matrix_market;
use maxwell_eigen::bench::report::{comparison_table, min_fdof_svg, write_runs_csv, write_sweeps_csv};
use maxwell_eigen::bench::{
    assemble_reduced, benchmark_mesh, distortion_study, find_case, min_fdof_sweep, par_map, registry, run_benchmark,
    run_on_system, BenchReport, BenchmarkCase, Distortion, RunSpec, SweepOptions,
};
use maxwell_eigen::eigensolver::classify_spectrum;
use maxwell_eigen::mesh::{
    distort_mesh, generate_mesh_with, mesh_from_json, mesh_to_json, DomainSpec, ElementKind, Mesh, Resolution,
};
use maxwell_eigen::{Error, SolverError};
use serde::Serialize;
use serde_json::json;

use args::{BenchArgs, Cli, Command, DistortArgs, MeshCommand, NumericArgs, SolveArgs, SweepArgs};

/// Failure with its exit status: 1 for numerical failures, 2 for usage errors.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numerical() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 1,
            message: format!("i/o: {e}"),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = (cli.jobs > 0).then_some(cli.jobs);
    let result = match &cli.command {
        Command::Mesh(MeshCommand::Gen(a)) => mesh_gen(a),
        Command::Mesh(MeshCommand::Distort(a)) => mesh_distort(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a, jobs),
        Command::Sweep(a) => sweep(a),
        Command::DistortStudy(a) => distort_study(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// JSON document `{command, config, result, metadata}`; only `metadata` varies between
/// identical invocations.
fn document(command: &str, config: &impl Serialize, result: &impl Serialize, started: Instant) -> String {
    let doc = json!({
        "command": command,
        "config": config,
        "result": result,
        "metadata": {
            "version": env!("CARGO_PKG_VERSION"),
            "elapsed_seconds": started.elapsed().as_secs_f64(),
        },
    });
    serde_json::to_string_pretty(&doc).expect("report serialises") + "\n"
}

fn case_for(name: &str) -> Result<&'static BenchmarkCase, Failure> {
    find_case(name).map_err(|e| Failure {
        code: 2,
        message: e.to_string(),
    })
}

fn domain_spec(sel: &args::MeshSelect) -> DomainSpec {
    DomainSpec::new(sel.domain).with_inclusion(sel.inclusion)
}

fn mesh_gen(a: &args::MeshGenArgs) -> Outcome {
    let mesh: Mesh<f64> = generate_mesh_with(&domain_spec(&a.select), a.select.kind, a.select.resolution()).map_err(Error::from)?;
    write_text(a.out.as_deref(), &mesh_to_json(&mesh))
}

fn mesh_distort(a: &args::MeshDistortArgs) -> Outcome {
    let text = fs::read_to_string(&a.input)?;
    let mesh: Mesh<f64> = mesh_from_json(&text).map_err(Error::from)?;
    let out = distort_mesh(&mesh, a.magnitude, a.seed).map_err(Error::from)?;
    write_text(a.out.as_deref(), &mesh_to_json(&out))
}

fn run_spec(kind: ElementKind, res: Resolution, n: &NumericArgs) -> RunSpec {
    let mut spec = RunSpec::new(kind, res);
    spec.nodal_bc = n.nodal_bc();
    spec.window_pct = n.window;
    spec.solve = n.solve_options();
    spec.assembly = n.assembly_options();
    spec
}

fn solve(a: &SolveArgs) -> Outcome {
    let started = Instant::now();
    let mut case = case_for(a.select.domain.name())?.clone();
    case.domain = domain_spec(&a.select);
    let mut spec = run_spec(a.select.kind, a.select.resolution(), &a.numeric);
    spec.distortion = a.distort.map(|magnitude| Distortion { magnitude, seed: a.seed });
    let mesh = match &a.mesh {
        Some(p) => {
            let mesh: Mesh<f64> = mesh_from_json(&fs::read_to_string(p)?).map_err(Error::from)?;
            match spec.distortion {
                Some(d) => distort_mesh(&mesh, d.magnitude, d.seed).map_err(Error::from)?,
                None => mesh,
            }
        }
        None => benchmark_mesh(&case, &spec)?,
    };
    let sys = assemble_reduced(&mesh, &case.domain.materials, spec.formulation(), spec.assembly)?;
    if let Some(dir) = &a.dump_matrices {
        fs::create_dir_all(dir)?;
        write_matrix_market(&sys.k, io::BufWriter::new(fs::File::create(dir.join("K.mtx"))?))?;
        write_matrix_market(&sys.m, io::BufWriter::new(fs::File::create(dir.join("M.mtx"))?))?;
    }
    let (spectrum, report) = run_on_system(&case, &mesh, &sys, &spec)?;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{} {} {}: {} cells, {} FDOF, {} zero, {} infinite ({:?})",
        report.case, report.kind, report.formulation, report.cells, report.fdof, report.zero_count,
        report.infinite_count, report.method
    )?;
    if sys.fdof == 0 {
        writeln!(out, "empty system after BCs")?;
    }
    for (i, v) in classify_spectrum(&spectrum, a.k).iter().enumerate() {
        writeln!(out, "{:>4} {v:.6}", i + 1)?;
    }
    writeln!(out, "zero_count {}", report.zero_count)?;
    if let Some(p) = &a.report {
        fs::write(p, document("solve", a, &report, started))?;
    }
    Ok(())
}

fn kinds_of(case: &BenchmarkCase, chosen: &[ElementKind], table: bool) -> Vec<ElementKind> {
    let own: Vec<_> = if table {
        case.table.keys().copied().collect()
    } else {
        case.ladder.keys().copied().collect()
    };
    if chosen.is_empty() {
        own
    } else {
        chosen.iter().copied().filter(|k| own.contains(k)).collect()
    }
}

fn bench(a: &BenchArgs, jobs: Option<usize>) -> Outcome {
    let cases: Vec<&BenchmarkCase> = if a.case == "all" {
        registry().iter().collect()
    } else {
        vec![case_for(&a.case)?]
    };
    fs::create_dir_all(&a.out)?;
    for case in cases {
        if a.tables {
            bench_tables(case, a, jobs)?;
        } else {
            bench_matrix(case, a, jobs)?;
        }
    }
    Ok(())
}

fn file(a: &BenchArgs, name: String) -> PathBuf {
    a.out.join(name)
}

fn bench_tables(case: &BenchmarkCase, a: &BenchArgs, jobs: Option<usize>) -> Outcome {
    let kinds = kinds_of(case, &a.kinds, true);
    let specs: Vec<RunSpec> = kinds
        .iter()
        .map(|&k| Ok(run_spec(k, case.table_resolution(k)?, &a.numeric)))
        .collect::<Result<_, Error>>()?;
    let reports = collect(par_map(&specs, jobs, |s| run_benchmark(case, s).map(|(_, r)| r))?)?;
    let columns: Vec<(String, &BenchReport)> = reports.iter().map(|r| (r.kind.to_string(), r)).collect();
    let path = file(a, format!("{}_table.csv", case.name));
    comparison_table(case, &columns).write_csv(fs::File::create(&path)?)?;
    println!("{}", path.display());
    if !case.distortion.is_empty() {
        let kinds: Vec<_> = kinds_of(case, &a.kinds, false)
            .into_iter()
            .filter(|k| case.distortion.contains_key(k))
            .collect();
        let studies = collect(par_map(&kinds, jobs, |&k| {
            let spec = run_spec(k, case.distortion_resolution(k)?, &a.numeric);
            distortion_study(case, &spec, a.magnitude, a.seed)
        })?)?;
        let columns: Vec<(String, &BenchReport)> = studies
            .iter()
            .flat_map(|s| {
                [
                    (format!("{} normal", s.normal.kind), &s.normal),
                    (format!("{} distorted", s.distorted.kind), &s.distorted),
                ]
            })
            .collect();
        let path = file(a, format!("{}_distortion_table.csv", case.name));
        comparison_table(case, &columns).write_csv(fs::File::create(&path)?)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn collect<T>(results: Vec<Result<T, Error>>) -> Result<Vec<T>, Failure> {
    results.into_iter().map(|r| r.map_err(Failure::from)).collect()
}

fn bench_matrix(case: &BenchmarkCase, a: &BenchArgs, jobs: Option<usize>) -> Outcome {
    let started = Instant::now();
    let kinds = kinds_of(case, &a.kinds, false);
    let mut specs = Vec::new();
    for &k in &kinds {
        for level in 1..=a.levels {
            specs.push(run_spec(k, case.ladder_resolution(k, level)?, &a.numeric));
        }
    }
    let runs = par_map(&specs, jobs, |s| run_benchmark(case, s).map(|(_, r)| r))?;
    let mut reports = Vec::new();
    for (spec, r) in specs.iter().zip(runs) {
        match r {
            Ok(r) => {
                println!(
                    "{} {} {}: fdof {}, first error {}, spurious {}, missed {}",
                    case.name,
                    r.kind,
                    r.resolution,
                    r.fdof,
                    r.matches.slot_errors.first().copied().flatten().map_or("-".into(), |e| format!("{e:.3}%")),
                    r.matches.spurious.len(),
                    r.matches.missed.len()
                );
                reports.push(r);
            }
            Err(e @ Error::Solver(SolverError::TooLarge { .. })) => {
                println!("{} {} {}: skipped ({e})", case.name, spec.kind, spec.resolution);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let path = file(a, format!("{}_runs.csv", case.name));
    write_runs_csv(&reports, fs::File::create(&path)?)?;
    println!("{}", path.display());
    let path = file(a, format!("{}_runs.json", case.name));
    fs::write(&path, document("bench", a, &reports, started))?;
    println!("{}", path.display());
    if a.no_sweep {
        return Ok(());
    }
    let start = a.start.unwrap_or(if case.domain.domain.is_nonconvex() { 2 } else { 1 });
    let mut opts = SweepOptions::new(a.threshold, a.k, start);
    opts.fdof_cap = a.fdof_cap;
    let sweeps = collect(par_map(&kinds, jobs, |&k| {
        min_fdof_sweep(case, &run_spec(k, 1.into(), &a.numeric), &opts)
    })?)?;
    for s in &sweeps {
        match s.min_fdof {
            Some(f) => println!("{} {}: min FDOF {f} below {}%", case.name, s.kind, a.threshold),
            None => println!(
                "{} {}: not achieved ({:?}), best {}",
                case.name,
                s.kind,
                s.stop,
                s.best.map_or("-".into(), |(f, e)| format!("{e:.2}% at {f} FDOF"))
            ),
        }
    }
    let path = file(a, format!("{}_sweep.csv", case.name));
    write_sweeps_csv(&sweeps, fs::File::create(&path)?)?;
    println!("{}", path.display());
    let title = format!(
        "{}: minimum FDOF for less than {}% error (slots {}..{})",
        case.name,
        a.threshold,
        start,
        start + a.k - 1
    );
    let path = file(a, format!("{}_min_fdof.svg", case.name));
    fs::write(&path, min_fdof_svg(&title, &sweeps))?;
    println!("{}", path.display());
    Ok(())
}

fn sweep(a: &SweepArgs) -> Outcome {
    let started = Instant::now();
    let case = case_for(&a.case)?;
    let mut opts = SweepOptions::new(a.threshold, a.k, a.start);
    opts.fdof_cap = a.fdof_cap;
    let s = min_fdof_sweep(case, &run_spec(a.kind, 1.into(), &a.numeric), &opts)?;
    for l in &s.levels {
        println!(
            "level {:>2} {:>7} fdof {:>5} max error {}",
            l.level,
            l.resolution.to_string(),
            l.fdof,
            l.max_error.map_or("missed".into(), |e| format!("{e:.3}%"))
        );
    }
    match s.min_fdof {
        Some(f) => println!("min FDOF {f}"),
        None => println!(
            "not achieved ({:?}); best {}",
            s.stop,
            s.best.map_or("-".into(), |(f, e)| format!("{e:.3}% at {f} FDOF"))
        ),
    }
    if let Some(p) = &a.out {
        fs::write(p, document("sweep", a, &s, started))?;
    }
    Ok(())
}

fn distort_study(a: &DistortArgs) -> Outcome {
    let started = Instant::now();
    let case = case_for(&a.case)?;
    let res = match a.n {
        Some(n) => Resolution { n, m: a.m },
        None => case.distortion_resolution(a.kind)?,
    };
    let study = distortion_study(case, &run_spec(a.kind, res, &a.numeric), a.magnitude, a.seed)?;
    println!(
        "{} {} {}: {} cells, {} FDOF; spurious {} / {}",
        case.name,
        a.kind,
        res,
        study.normal.cells,
        study.normal.fdof,
        study.normal.matches.spurious.len(),
        study.distorted.matches.spurious.len()
    );
    for s in &study.shifts {
        println!(
            "{:>12.6} {:>12.6} {:>12.6} {:>8.4}%",
            s.reference, s.normal, s.distorted, s.shift_pct
        );
    }
    println!("max shift {:.4}%", study.max_shift_pct());
    if let Some(p) = &a.out {
        fs::write(p, document("distort-study", a, &study, started))?;
    }
    Ok(())
}
