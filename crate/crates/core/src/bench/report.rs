use std::io::Write;

use serde::Serialize;

use super::cases::BenchmarkCase;
use super::run::BenchReport;
use super::sweep::SweepResult;
use crate::error::Error;

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Bench(format!("csv output: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Matched,
    Spurious,
    Missed,
    BeyondRange,
}

/// One row of the aggregate CSV: a computed eigenvalue or a missed reference of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRow {
    pub case: String,
    pub kind: String,
    pub formulation: String,
    pub resolution: String,
    pub distortion: Option<f64>,
    pub cells: usize,
    pub fdof: usize,
    pub zero_count: usize,
    /// 1-based rank among the run's nonzero eigenvalues.
    pub rank: Option<usize>,
    pub computed: Option<f64>,
    /// 1-based reference slot.
    pub slot: Option<usize>,
    pub reference: Option<f64>,
    pub error_pct: Option<f64>,
    pub status: RowStatus,
    pub singular: bool,
}

/// Rows of one run in ascending order of value, missed references included.
pub fn eigen_rows(report: &BenchReport) -> Vec<EigenRow> {
    let m = &report.matches;
    let base = |status| EigenRow {
        case: report.case.clone(),
        kind: report.kind.to_string(),
        formulation: report.formulation.clone(),
        resolution: report.resolution.to_string(),
        distortion: report.distortion.map(|d| d.magnitude),
        cells: report.cells,
        fdof: report.fdof,
        zero_count: report.zero_count,
        rank: None,
        computed: None,
        slot: None,
        reference: None,
        error_pct: None,
        status,
        singular: false,
    };
    let mut rows = Vec::new();
    let mut pairs = m.pairs.iter().peekable();
    let first_beyond = report.eigenvalues.len() - m.beyond_range.len();
    for (i, &v) in report.eigenvalues.iter().enumerate() {
        let mut row = base(RowStatus::Spurious);
        row.rank = Some(i + 1);
        row.computed = Some(v);
        if let Some(p) = pairs.next_if(|p| p.computed.to_bits() == v.to_bits()) {
            row.status = RowStatus::Matched;
            row.slot = Some(p.slot + 1);
            row.reference = Some(p.reference);
            row.error_pct = Some(p.error_pct);
        } else if i >= first_beyond {
            row.status = RowStatus::BeyondRange;
        }
        rows.push(row);
    }
    for missed in &m.missed {
        let mut row = base(RowStatus::Missed);
        row.slot = Some(missed.slot + 1);
        row.reference = Some(missed.reference);
        row.singular = missed.singular;
        rows.push(row);
    }
    rows.sort_by(|a, b| {
        let key = |r: &EigenRow| r.computed.or(r.reference).unwrap_or(0.0);
        key(a).total_cmp(&key(b)).then(a.status.cmp(&b.status))
    });
    rows
}

/// Aggregate CSV with one row per eigenvalue per run.
pub fn write_runs_csv<W: Write>(reports: &[BenchReport], w: W) -> Result<(), Error> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        for row in eigen_rows(r) {
            out.serialize(row).map_err(csv_error)?;
        }
    }
    out.flush().map_err(csv_error)
}

#[derive(Debug, Serialize)]
struct SweepRow<'a> {
    case: &'a str,
    kind: String,
    threshold_pct: f64,
    start: usize,
    k: usize,
    level: usize,
    resolution: String,
    cells: usize,
    fdof: usize,
    max_error_pct: Option<f64>,
    spurious: usize,
    passes: bool,
}

/// One row per sweep rung.
pub fn write_sweeps_csv<W: Write>(sweeps: &[SweepResult], w: W) -> Result<(), Error> {
    let mut out = csv::Writer::from_writer(w);
    for s in sweeps {
        for l in &s.levels {
            out.serialize(SweepRow {
                case: &s.case,
                kind: s.kind.to_string(),
                threshold_pct: s.options.threshold_pct,
                start: s.options.start,
                k: s.options.k,
                level: l.level,
                resolution: l.resolution.to_string(),
                cells: l.cells,
                fdof: l.fdof,
                max_error_pct: l.max_error,
                spurious: l.spurious.len(),
                passes: l.max_error.is_some_and(|e| e < s.options.threshold_pct),
            })
            .map_err(csv_error)?;
        }
    }
    out.flush().map_err(csv_error)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Static SVG bar chart of the minimum FDOF of each sweep; sweeps that never met the
/// threshold are drawn as a cross with their best error.
pub fn min_fdof_svg(title: &str, sweeps: &[SweepResult]) -> String {
    let (bar_w, gap, left, top, height) = (60.0, 30.0, 70.0, 50.0, 300.0);
    let width = left + sweeps.len() as f64 * (bar_w + gap) + gap;
    let max = sweeps.iter().filter_map(|s| s.min_fdof).max().unwrap_or(1).max(1) as f64;
    let base = top + height;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        base + 60.0
    );
    svg += &format!(
        "<text x=\"{}\" y=\"25\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        width / 2.0,
        escape(title)
    );
    svg += &format!("<line x1=\"{left}\" y1=\"{base}\" x2=\"{}\" y2=\"{base}\" stroke=\"black\"/>\n", width - gap / 2.0);
    svg += &format!("<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{base}\" stroke=\"black\"/>\n");
    svg += &format!(
        "<text x=\"15\" y=\"{}\" transform=\"rotate(-90 15 {})\" text-anchor=\"middle\">min FDOF</text>\n",
        top + height / 2.0,
        top + height / 2.0
    );
    for (i, s) in sweeps.iter().enumerate() {
        let x = left + gap + i as f64 * (bar_w + gap);
        let cx = x + bar_w / 2.0;
        let label = format!("{} ({})", s.kind, s.formulation);
        match s.min_fdof {
            Some(f) => {
                let h = f as f64 / max * height;
                let fill = if s.kind.is_edge() { "#4a7ab5" } else { "#c8743a" };
                svg += &format!(
                    "<rect x=\"{x}\" y=\"{}\" width=\"{bar_w}\" height=\"{h}\" fill=\"{fill}\"/>\n",
                    base - h
                );
                svg += &format!("<text x=\"{cx}\" y=\"{}\" text-anchor=\"middle\">{f}</text>\n", base - h - 5.0);
            }
            None => {
                let y = base - 20.0;
                svg += &format!(
                    "<path d=\"M{} {} L{} {} M{} {} L{} {}\" stroke=\"black\" stroke-width=\"3\"/>\n",
                    cx - 10.0,
                    y - 10.0,
                    cx + 10.0,
                    y + 10.0,
                    cx - 10.0,
                    y + 10.0,
                    cx + 10.0,
                    y - 10.0
                );
                let note = s.best.map_or("no match".to_string(), |(f, e)| format!("best {e:.1}% @ {f}"));
                svg += &format!("<text x=\"{cx}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", y - 15.0, escape(&note));
            }
        }
        svg += &format!(
            "<text x=\"{cx}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            base + 18.0,
            escape(&label)
        );
    }
    svg += "</svg>\n";
    svg
}

/// A rectangular table of strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header).map_err(csv_error)?;
        for r in &self.rows {
            out.write_record(r).map_err(csv_error)?;
        }
        out.flush().map_err(csv_error)
    }
}

/// Side-by-side comparison of several runs of `case`, one column per run.
///
/// Rows follow the reference slots; a missed slot shows `-`. Spurious values get rows of
/// their own with `-` as reference, placed before the first slot whose reference exceeds
/// them. Trailing rows give the mesh size and the number of computed zeros.
pub fn comparison_table(case: &BenchmarkCase, columns: &[(String, &BenchReport)]) -> Table {
    let slots = case.slots();
    let dash = || "-".to_string();
    let fmt = |v: f64| format!("{v:.6}");
    let group = |v: f64| slots.iter().take_while(|s| s.value < v).count();
    let mut header = vec!["reference".to_string()];
    header.extend(columns.iter().map(|(h, _)| h.clone()));
    let mut rows = Vec::new();
    for g in 0..=slots.len() {
        let extra: Vec<Vec<f64>> = columns
            .iter()
            .map(|(_, r)| r.matches.spurious.iter().copied().filter(|&v| group(v) == g).collect())
            .collect();
        let depth = extra.iter().map(Vec::len).max().unwrap_or(0);
        for d in 0..depth {
            let mut row = vec![dash()];
            row.extend(extra.iter().map(|e| e.get(d).map_or_else(String::new, |&v| fmt(v))));
            rows.push(row);
        }
        if let Some(s) = slots.get(g) {
            let mut row = vec![fmt(s.value)];
            row.extend(columns.iter().map(|(_, r)| {
                r.matches
                    .pairs
                    .iter()
                    .find(|p| p.slot == g)
                    .map_or_else(dash, |p| fmt(p.computed))
            }));
            rows.push(row);
        }
    }
    for (name, get) in [
        ("cells", (|r: &BenchReport| r.cells) as fn(&BenchReport) -> usize),
        ("fdof", |r| r.fdof),
        ("zeros", |r| r.zero_count),
    ] {
        let mut row = vec![name.to_string()];
        row.extend(columns.iter().map(|(_, r)| get(r).to_string()));
        rows.push(row);
    }
    Table { header, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{find_case, match_eigenvalues, MatchReport, DEFAULT_WINDOW};
    use crate::eigensolver::Method;
    use crate::mesh::{ElementKind, Resolution};

    fn report(values: &[f64]) -> BenchReport {
        let case = find_case("l_shape").unwrap();
        let matches: MatchReport = match_eigenvalues(values, &case.slots(), DEFAULT_WINDOW);
        BenchReport {
            case: case.name.clone(),
            domain: case.domain.domain,
            kind: ElementKind::Q4,
            formulation: "nodal_potential".into(),
            resolution: Resolution::new(16),
            distortion: None,
            cells: 768,
            fdof: 2000,
            zero_count: 700,
            infinite_count: 0,
            method: Method::ShiftedCholesky,
            eigenvalues: values.to_vec(),
            matches,
        }
    }

    #[test]
    fn rows_cover_every_value_and_missed_slot() {
        let r = report(&[1.479654, 1.620830, 4.012869]);
        let rows = eigen_rows(&r);
        let statuses: Vec<_> = rows.iter().map(|r| r.status).collect();
        assert_eq!(statuses[0], RowStatus::Missed);
        assert!(rows[0].singular);
        assert_eq!(rows.iter().filter(|r| r.status == RowStatus::Spurious).count(), 1);
        assert_eq!(rows.iter().filter(|r| r.status == RowStatus::Matched).count(), 2);
        assert_eq!(rows.len(), 3 + r.matches.missed.len());
        let mut buf = Vec::new();
        write_runs_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("case,kind,formulation,resolution"));
        assert_eq!(text.lines().count(), rows.len() + 1);
    }

    #[test]
    fn table_places_spurious_rows_between_slots() {
        let case = find_case("l_shape").unwrap();
        let r = report(&[1.479654, 1.620830, 4.012869]);
        let t = comparison_table(case, &[("Q4".into(), &r)]);
        assert_eq!(t.rows[0], vec!["0.591790", "-"]);
        assert_eq!(t.rows[1], vec!["1.432320", "1.479654"]);
        assert_eq!(t.rows[2], vec!["-", "1.620830"]);
        assert_eq!(t.rows[3], vec!["4.005540", "4.012869"]);
        assert_eq!(t.rows.last().unwrap()[0], "zeros");
    }

    #[test]
    fn svg_marks_unmet_sweeps() {
        use crate::bench::{SweepOptions, SweepResult, StopReason};
        let mk = |kind, min| SweepResult {
            case: "square".into(),
            kind,
            formulation: "edge".into(),
            options: SweepOptions::new(1.0, 5, 1),
            levels: Vec::new(),
            min_fdof: min,
            best: Some((900, 3.5)),
            stop: StopReason::FdofCap,
            rejected_fdof: None,
        };
        let svg = min_fdof_svg("a < b", &[mk(ElementKind::EQ12, Some(400)), mk(ElementKind::Q9, None)]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b") && svg.contains(">400<") && svg.contains("best 3.5% @ 900"));
    }
}
