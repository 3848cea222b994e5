//! Command implementations behind the `hcp` binary. Each command renders its
//! result to a string so it can be exercised without spawning a process.

pub mod cache;
pub mod sweep;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::classpoly::IntPolynomial;
use crate::criterion::{predict, CriterionReport};
use crate::error::{Error, Result};
use crate::quadform::{enumerate_class_group, ClassGroupTable, Discriminant, QuadForm};

use cache::PolyCache;
use sweep::{SweepParams, SweepRecord, SweepReport};

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const DISAGREEMENT: i32 = 3;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?} (expected json, csv or text)")),
        }
    }
}

/// Exit status for a library error.
pub fn status_for(err: &Error) -> i32 {
    match err {
        Error::Usage(_) => exit::USAGE,
        _ => exit::VALIDATION,
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ClassGroupView<'a> {
    #[serde(rename = "D")]
    disc: Discriminant,
    h: usize,
    forms: &'a [QuadForm],
    two_torsion: &'a [QuadForm],
    mu: u32,
    two_torsion_order: u64,
}

pub fn render_classgroup(table: &ClassGroupTable, format: Format) -> String {
    match format {
        Format::Json => json(&ClassGroupView {
            disc: table.disc,
            h: table.h,
            forms: &table.forms,
            two_torsion: &table.two_torsion,
            mu: table.mu,
            two_torsion_order: table.two_torsion_order(),
        }),
        Format::Csv => {
            let mut out = String::from("a,b,c,two_torsion\n");
            for f in &table.forms {
                let _ = writeln!(out, "{},{},{},{}", f.a(), f.b(), f.c(), table.two_torsion.contains(f));
            }
            out
        }
        Format::Text => {
            let mut out = format!("D = {}\nh = {}\nforms:", table.disc, table.h);
            for f in &table.forms {
                let _ = write!(out, " {f}");
            }
            out.push_str("\n2-torsion:");
            for f in &table.two_torsion {
                let _ = write!(out, " {f}");
            }
            let _ = writeln!(out, "\nmu = {}\n|Pic[2]| = 2^(mu-1) = {}", table.mu, table.two_torsion_order());
            out
        }
    }
}

pub fn cmd_classgroup(d: i64, format: Format) -> Result<String> {
    let disc = Discriminant::new(d)?;
    Ok(render_classgroup(&enumerate_class_group(disc), format))
}

#[derive(Serialize)]
struct HpolyView {
    #[serde(rename = "D")]
    disc: Discriminant,
    h: usize,
    /// Decimal strings, ascending degree.
    coeffs: Vec<String>,
    poly: String,
}

pub fn render_hpoly(disc: Discriminant, poly: &IntPolynomial, format: Format) -> String {
    match format {
        Format::Json => json(&HpolyView {
            disc,
            h: poly.degree(),
            coeffs: poly.coeffs().iter().map(|c| c.to_string()).collect(),
            poly: poly.to_string(),
        }),
        Format::Csv => {
            let mut out = String::from("degree,coefficient\n");
            for (k, c) in poly.coeffs().iter().enumerate() {
                let _ = writeln!(out, "{k},{c}");
            }
            out
        }
        Format::Text => format!("{poly}\n"),
    }
}

/// `H_D`, served from the cache when present; new entries are flushed.
pub fn cmd_hpoly(d: i64, format: Format, cache: &mut PolyCache) -> Result<String> {
    let disc = Discriminant::new(d)?;
    let (poly, _) = cache.get_or_compute(disc)?;
    cache.flush()?;
    Ok(render_hpoly(disc, &poly, format))
}

#[derive(Serialize)]
struct RootsView<'a> {
    record: &'a SweepRecord,
    criterion: &'a CriterionReport,
}

/// Output of `roots`; `applicable` is false when `(D, p)` is outside the
/// criterion's hypotheses (the observed data is still reported).
pub struct RootsOutput {
    pub text: String,
    pub record: SweepRecord,
    pub criterion: CriterionReport,
}

impl RootsOutput {
    pub fn status(&self) -> i32 {
        if !self.criterion.applicable {
            exit::VALIDATION
        } else if !self.record.agreement {
            exit::DISAGREEMENT
        } else {
            exit::SUCCESS
        }
    }
}

pub fn cmd_roots(d: i64, p: u64, list_roots: bool, format: Format, cache: &mut PolyCache) -> Result<RootsOutput> {
    let disc = Discriminant::new(d)?;
    let table = enumerate_class_group(disc);
    let (poly, _) = cache.get_or_compute(disc)?;
    cache.flush()?;
    let (record, criterion) = sweep::pair_record(&table, &poly, p, list_roots)?;
    let text = match format {
        Format::Json => json(&RootsView { record: &record, criterion: &criterion }),
        Format::Csv => sweep::to_csv(std::slice::from_ref(&record))?,
        Format::Text => {
            let mut out = String::new();
            if let Some(reason) = &criterion.reason {
                let _ = writeln!(out, "inapplicable: {reason}");
            }
            let _ = writeln!(out, "D = {} p = {} h = {} |Pic[2]| = {}", disc, p, record.h, record.two_torsion_order);
            let _ = writeln!(out, "observed_count = {}", record.observed_count);
            if let Some(roots) = &record.observed_roots {
                let list: Vec<String> = roots.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "roots = [{}]", list.join(", "));
            }
            let _ = writeln!(out, "squarefree = {}", record.squarefree);
            if let Some(count) = record.predicted_count {
                let _ = writeln!(out, "predicted_count = {count}");
                let _ = writeln!(out, "agreement = {}", record.agreement);
            }
            out
        }
    };
    Ok(RootsOutput { text, record, criterion })
}

pub fn render_predict(report: &CriterionReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut out = String::from("ell,condition_met,which_subcase\n");
            for c in &report.per_ell {
                let _ = writeln!(out, "{},{},{}", c.ell, c.condition_met, c.which_subcase);
            }
            out
        }
        Format::Text => {
            let mut out = format!("D = {} p = {} inert = {}\n", report.disc, report.p, report.inert);
            match &report.reason {
                Some(reason) => {
                    let _ = writeln!(out, "inapplicable: {reason}");
                }
                None => {
                    for c in &report.per_ell {
                        let _ = writeln!(out, "ell = {}: {} ({})", c.ell, c.condition_met, c.which_subcase);
                    }
                    let _ = writeln!(
                        out,
                        "predicted_nonempty = {}\npredicted_count = {}",
                        report.predicted_nonempty.unwrap_or(false),
                        report.predicted_count.unwrap_or(0)
                    );
                }
            }
            out
        }
    }
}

pub fn cmd_predict(d: i64, p: u64, format: Format) -> Result<(String, CriterionReport)> {
    let disc = Discriminant::new(d)?;
    let report = predict(disc, p)?;
    Ok((render_predict(&report, format), report))
}

pub fn render_sweep(report: &SweepReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut s = sweep::to_json(report);
            s.push('\n');
            s
        }
        Format::Csv => sweep::to_csv(&report.records)?,
        Format::Text => sweep::to_text(report),
    })
}

/// Runs the sweep; writes the report to `out` (or returns it for stdout).
/// The returned string is the summary line when `out` is given.
pub fn cmd_sweep(
    params: SweepParams,
    format: Format,
    cache: &mut PolyCache,
    out: Option<&Path>,
) -> Result<(String, SweepReport)> {
    let report = sweep::run_sweep(params, cache)?;
    cache.flush()?;
    let rendered = render_sweep(&report, format)?;
    let shown = match out {
        Some(path) => {
            std::fs::write(path, rendered).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            format!("{}\n", sweep::summary_line(&report))
        }
        None => rendered,
    };
    Ok((shown, report))
}
