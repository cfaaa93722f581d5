//! Subcommand implementations. Each returns a [`RunReport`] or a
//! [`CliError`] carrying the exit code.

use std::path::PathBuf;
use std::time::Instant;

use clustagree::extremal::Objective;
use clustagree::indices::conventional_adjusted_index;
use clustagree::oracle::{conjecture_cases, enumerate_tables, evaluate_case, ExtremumTracker};
use clustagree::{
    canonicalize, expected_index, extremal_tables, index, max_adjusted_index, maximize, minimize,
    semimetric, ConjectureReport, ContingencyTable, IndexError, IndexKind, MarginalSpec,
    OracleError,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::input::{parse_counts, parse_marginals, read_file, table_from_labels_file};
use crate::report::{self, RunReport};

/// Where a contingency table comes from.
#[derive(Debug, Clone)]
pub enum TableSource {
    Labels(PathBuf),
    Counts(PathBuf),
}

impl TableSource {
    /// The table and the raw bytes it was read from, tagged with the format.
    fn load(&self) -> Result<(ContingencyTable, Vec<u8>), CliError> {
        let (tag, path) = match self {
            TableSource::Labels(p) => ("labels", p),
            TableSource::Counts(p) => ("counts", p),
        };
        let bytes = read_file(path)?;
        let table = match self {
            TableSource::Labels(_) => table_from_labels_file(&bytes)?,
            TableSource::Counts(_) => parse_counts(&bytes)?,
        };
        let mut payload = format!("{tag}\n").into_bytes();
        payload.extend_from_slice(&bytes);
        Ok((table, payload))
    }
}

fn kind_map(f: impl Fn(IndexKind) -> Value) -> Value {
    let mut out = Map::new();
    for kind in IndexKind::ALL {
        out.insert(kind.name().into(), f(kind));
    }
    Value::Object(out)
}

pub fn cmd_table(source: &TableSource) -> Result<RunReport, CliError> {
    let (t, payload) = source.load()?;
    let p = t.pair_counts();
    let results = json!({
        "table": report::table(&t),
        "pair_counts": report::pair_counts(&p),
        "q": t.q_statistic(),
        "indices": kind_map(|kind| report::index_outcome(&index(kind, &p))),
        "semimetrics": kind_map(|kind| report::index_outcome(&semimetric(kind, &p))),
    });
    Ok(RunReport::new("table", &payload, results))
}

fn two_marginals(flag: &str, value: &str) -> Result<[i64; 2], CliError> {
    let parsed = parse_marginals(flag, value)?;
    <[i64; 2]>::try_from(parsed.as_slice()).map_err(|_| {
        CliError::input(format!(
            "--{flag}: extremes needs exactly two marginals, got {} (use enumerate for r x s)",
            parsed.len()
        ))
    })
}

pub fn cmd_extremes(rows: &str, cols: &str) -> Result<RunReport, CliError> {
    let r = two_marginals("rows", rows)?;
    let c = two_marginals("cols", cols)?;
    let n = r[0] + r[1];
    let form = canonicalize(r, c, n)?;
    let range = form.k_range();
    let results = json!({
        "rows": r,
        "cols": c,
        "n": n,
        "canonical": report::canonical(&form),
        "k_range": { "lo": range.lo, "hi": range.hi },
        "maximum": report::extremal(&maximize(&form)),
        "minimum": report::extremal(&minimize(&form)),
    });
    let payload = format!("rows={rows}\ncols={cols}\n");
    Ok(RunReport::new("extremes", payload.as_bytes(), results))
}

pub fn cmd_adjusted(
    source: &TableSource,
    kind: IndexKind,
    oracle: bool,
    budget: u64,
) -> Result<RunReport, CliError> {
    if !kind.has_expectation() {
        return Err(IndexError::Unsupported { kind }.into());
    }
    let (t, mut payload) = source.load()?;
    payload
        .extend_from_slice(format!("\nkind={kind}\noracle={oracle}\nbudget={budget}\n").as_bytes());

    let (max_q, source_name) = if oracle {
        let spec = MarginalSpec::of_table(&t);
        let mut tracker = ExtremumTracker::new(Objective::Maximum);
        for table in enumerate_tables(&spec, budget) {
            match table {
                Ok(table) => tracker.offer(table),
                Err(e) => {
                    let partial = json!({
                        "kind": kind.name(),
                        "table": report::table(&t),
                        "partial": true,
                        "tables_scanned": tracker.scanned(),
                    });
                    return Err(CliError::Budget {
                        message: e.to_string(),
                        partial: Box::new(RunReport::new("adjusted", &payload, partial)),
                    });
                }
            }
        }
        let q = tracker.finish().expect("at least one table").q_value;
        (q, "enumeration")
    } else if t.rows() == 2 && t.cols() == 2 {
        let rows = [t.row_marginals()[0], t.row_marginals()[1]];
        let cols = [t.col_marginals()[0], t.col_marginals()[1]];
        let q = extremal_tables(rows, cols, t.n(), Objective::Maximum)?.q_value;
        (q, "closed_form")
    } else {
        return Err(CliError::Unsupported(format!(
            "the closed-form maximum covers 2x2 tables only; this table is {}x{} (pass --oracle to enumerate)",
            t.rows(),
            t.cols()
        )));
    };

    let p = t.pair_counts();
    let conventional = conventional_adjusted_index(kind, &t);
    let max_adjusted = max_adjusted_index(kind, &t, max_q);
    let results = json!({
        "kind": kind.name(),
        "table": report::table(&t),
        "q": t.q_statistic(),
        "max_q": max_q,
        "max_q_source": source_name,
        "index": report::index_outcome(&index(kind, &p)),
        "expected": report::index_outcome(&expected_index(kind, &t)),
        "conventional_adjusted": report::index_outcome(&conventional),
        "max_adjusted": report::index_outcome(&max_adjusted),
        "degenerate_normalization": matches!(max_adjusted, Err(IndexError::Degenerate { .. })),
    });
    Ok(RunReport::new("adjusted", &payload, results))
}

pub fn cmd_enumerate(
    rows: &str,
    cols: &str,
    objective: Objective,
    budget: u64,
) -> Result<RunReport, CliError> {
    let spec = MarginalSpec::new(
        parse_marginals("rows", rows)?,
        parse_marginals("cols", cols)?,
    )?;
    let payload = format!(
        "rows={rows}\ncols={cols}\nobjective={}\nbudget={budget}\n",
        objective.name()
    );
    let mut tracker = ExtremumTracker::new(objective);
    let mut exceeded = None;
    for table in enumerate_tables(&spec, budget) {
        match table {
            Ok(table) => tracker.offer(table),
            Err(e) => {
                exceeded = Some(e);
                break;
            }
        }
    }
    let scanned = tracker.scanned();
    let extremum = tracker.finish();
    let mut results = Map::new();
    results.insert("spec".into(), report::marginal_spec(&spec));
    results.insert("objective".into(), json!(objective.name()));
    results.insert("partial".into(), json!(exceeded.is_some()));
    results.insert("table_count".into(), json!(scanned));
    if let Some(e) = &extremum {
        results.insert("extremal_q".into(), json!(e.q_value));
        results.insert(
            "tables".into(),
            Value::Array(e.tables.iter().map(report::table).collect()),
        );
    }
    if let Some(e) = exceeded {
        let partial = RunReport::new("enumerate", payload.as_bytes(), Value::Object(results));
        return Err(CliError::Budget {
            message: e.to_string(),
            partial: Box::new(partial),
        });
    }
    let extremum = extremum.expect("complete enumeration saw a table");
    if spec.rows().len() == 2 && spec.cols().len() == 2 {
        let r = [spec.rows()[0], spec.rows()[1]];
        let c = [spec.cols()[0], spec.cols()[1]];
        let closed = extremal_tables(r, c, spec.n(), objective)?;
        let mut closed_tables = closed.tables.clone();
        closed_tables.sort();
        let agreement = closed.q_value == extremum.q_value && closed_tables == extremum.tables;
        results.insert("closed_form".into(), report::extremal(&closed));
        results.insert("agreement".into(), json!(agreement));
    }
    Ok(RunReport::new(
        "enumerate",
        payload.as_bytes(),
        Value::Object(results),
    ))
}

/// Evaluates every 3x3 marginal pair concurrently and merges in case order.
pub fn parallel_scan(n_max: i64, budget: u64) -> Result<ConjectureReport, OracleError> {
    if n_max < 3 {
        return Err(OracleError::ScanBoundTooSmall { n_max });
    }
    let start = Instant::now();
    let results: Vec<_> = conjecture_cases(n_max)
        .into_par_iter()
        .map(|spec| {
            let result = evaluate_case(&spec, budget);
            (spec, result)
        })
        .collect();
    let mut report = ConjectureReport::from_results(n_max, results);
    report.elapsed = Some(start.elapsed());
    Ok(report)
}

#[derive(Debug)]
pub struct ScanOutput {
    pub report: RunReport,
    pub summary: String,
}

pub fn cmd_scan_conjecture(n_max: i64, budget: u64, timing: bool) -> Result<ScanOutput, CliError> {
    let scan = parallel_scan(n_max, budget)?;
    let payload = format!("n_max={n_max}\nbudget={budget}\ntiming={timing}\n");
    let report = RunReport::new(
        "scan-conjecture",
        payload.as_bytes(),
        report::conjecture(&scan, timing),
    );
    let summary = format!(
        "scanned {} marginal pairs (n <= {}): {} maximizers, {} specs with no contained maximizer, {} maximizers failing containment{}{}",
        scan.cases_scanned,
        scan.n_max,
        scan.maximizers_found,
        scan.specs_without_contained_maximizer,
        scan.counterexamples.len(),
        if scan.complete {
            String::new()
        } else {
            format!(", {} specs skipped over budget", scan.skipped.len())
        },
        scan.elapsed
            .map(|d| format!(" in {:.3}s", d.as_secs_f64()))
            .unwrap_or_default(),
    );
    if !scan.complete {
        return Err(CliError::Budget {
            message: summary,
            partial: Box::new(report),
        });
    }
    Ok(ScanOutput { report, summary })
}
