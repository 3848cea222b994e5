//! End-to-end check over all `(D, p)` pairs: observed root counts of
//! `H_D mod p` against the criterion's prediction.

use serde::Serialize;

use crate::arith::odd_primes_in;
use crate::classpoly::IntPolynomial;
use crate::criterion::{is_inert, predict, CriterionReport};
use crate::error::{Error, Result};
use crate::gfp::{count_fp_roots, is_squarefree, list_fp_roots, reduce_mod_p, LIST_ROOTS_MAX_P};
use crate::harness::cache::PolyCache;
use crate::quadform::{enumerate_class_group, ClassGroupTable, Discriminant};

pub const MAX_DISC_CAP: u64 = 20_000;
pub const MAX_PRIME_CAP: u64 = 10_000_000;

/// One `(D, p)` pair. Prediction fields are `None` when the pair is outside
/// the criterion's hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    #[serde(rename = "D")]
    pub disc: Discriminant,
    pub p: u64,
    pub h: usize,
    pub mu: u32,
    pub two_torsion_order: u64,
    pub inert: bool,
    pub predicted_nonempty: Option<bool>,
    pub predicted_count: Option<u64>,
    pub observed_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_roots: Option<Vec<u64>>,
    pub squarefree: bool,
    pub agreement: bool,
}

/// Computes the record for one pair from an already known `H_D`.
pub fn pair_record(
    table: &ClassGroupTable,
    hpoly: &IntPolynomial,
    p: u64,
    list_roots: bool,
) -> Result<(SweepRecord, CriterionReport)> {
    let report = predict(table.disc, p)?;
    let reduced = reduce_mod_p(hpoly, p)?;
    let observed_count = count_fp_roots(&reduced)?;
    let observed_roots = if list_roots && p <= LIST_ROOTS_MAX_P {
        Some(list_fp_roots(&reduced)?)
    } else {
        None
    };
    let squarefree = is_squarefree(&reduced)?;
    let tto = table.two_torsion_order();
    let agreement = report.predicted_count == Some(observed_count as u64)
        && (observed_count == 0 || observed_count as u64 == tto)
        && squarefree;
    let record = SweepRecord {
        disc: table.disc,
        p,
        h: table.h,
        mu: table.mu,
        two_torsion_order: tto,
        inert: report.inert,
        predicted_nonempty: report.predicted_nonempty,
        predicted_count: report.predicted_count,
        observed_count,
        observed_roots,
        squarefree,
        agreement,
    };
    Ok((record, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepParams {
    pub max_disc: u64,
    pub max_prime: u64,
    pub list_roots: bool,
}

impl SweepParams {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(3..=MAX_DISC_CAP).contains(&self.max_disc) {
            return Err(format!("--max-disc must lie in [3, {MAX_DISC_CAP}], got {}", self.max_disc));
        }
        if !(5..=MAX_PRIME_CAP).contains(&self.max_prime) {
            return Err(format!("--max-prime must lie in [5, {MAX_PRIME_CAP}], got {}", self.max_prime));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub pairs: usize,
    pub nonempty: usize,
    pub empty: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub params: SweepParams,
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn all_agree(&self) -> bool {
        self.summary.disagreements == 0
    }
}

/// Every valid `D` with `3 <= |D| <= max_disc` and every inert prime
/// `|D| < p <= max_prime`, ordered by `(|D|, p)`.
pub fn run_sweep(params: SweepParams, cache: &mut PolyCache) -> Result<SweepReport> {
    params.validate().map_err(Error::Usage)?;
    let mut records = Vec::new();
    let mut summary = SweepSummary::default();
    for disc in Discriminant::all_up_to(params.max_disc) {
        let primes: Vec<u64> = odd_primes_in(disc.abs() + 1, params.max_prime)
            .into_iter()
            .filter(|&p| p > 3 && is_inert(disc, p))
            .collect();
        if primes.is_empty() {
            continue;
        }
        let table = enumerate_class_group(disc);
        let (hpoly, _) = cache.get_or_compute(disc)?;
        for p in primes {
            let (record, _) = pair_record(&table, &hpoly, p, params.list_roots)?;
            summary.pairs += 1;
            if record.observed_count > 0 {
                summary.nonempty += 1;
            } else {
                summary.empty += 1;
            }
            if !record.agreement {
                log::error!("disagreement at D = {}, p = {}: {record:?}", record.disc, record.p);
                summary.disagreements += 1;
            }
            records.push(record);
        }
    }
    Ok(SweepReport { params, records, summary })
}

pub fn to_json(report: &SweepReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), |x| x.to_string())
}

pub fn to_csv(records: &[SweepRecord]) -> Result<String> {
    let err = |e: csv::Error| Error::Io(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "D",
        "p",
        "h",
        "mu",
        "two_torsion_order",
        "inert",
        "predicted_nonempty",
        "predicted_count",
        "observed_count",
        "observed_roots",
        "squarefree",
        "agreement",
    ])
    .map_err(err)?;
    for r in records {
        let roots = r
            .observed_roots
            .as_ref()
            .map(|v| v.iter().map(u64::to_string).collect::<Vec<_>>().join(";"))
            .unwrap_or_default();
        w.write_record([
            r.disc.to_string(),
            r.p.to_string(),
            r.h.to_string(),
            r.mu.to_string(),
            r.two_torsion_order.to_string(),
            r.inert.to_string(),
            opt(&r.predicted_nonempty),
            opt(&r.predicted_count),
            r.observed_count.to_string(),
            roots,
            r.squarefree.to_string(),
            r.agreement.to_string(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn summary_line(report: &SweepReport) -> String {
    let s = &report.summary;
    format!(
        "pairs={} nonempty={} empty={} disagreements={} (|D| <= {}, p <= {})",
        s.pairs, s.nonempty, s.empty, s.disagreements, report.params.max_disc, report.params.max_prime
    )
}

pub fn to_text(report: &SweepReport) -> String {
    let mut out = String::new();
    for r in &report.records {
        out.push_str(&format!(
            "D={} p={} h={} |Pic[2]|={} predicted={} observed={} squarefree={} {}\n",
            r.disc,
            r.p,
            r.h,
            r.two_torsion_order,
            opt(&r.predicted_count),
            r.observed_count,
            r.squarefree,
            if r.agreement { "ok" } else { "DISAGREE" }
        ));
    }
    out.push_str(&summary_line(report));
    out.push('\n');
    out
}
