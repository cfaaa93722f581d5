//! JSON report assembly.
//!
//! Exact rationals are written as integer `numerator`/`denominator` pairs
//! (arbitrary size) with a 15-significant-digit `decimal` rendering.

use clustagree::extremal::Branch;
use clustagree::oracle::{ConjectureReport, Counterexample};
use clustagree::rational::{ratio_parts, BigInt, BigRational};
use clustagree::{
    CanonicalForm, ContingencyTable, ExtremalResult, IndexError, IndexValue, MarginalSpec,
    PairCounts,
};
use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = concat!("clustagree ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub tool_version: String,
}

impl RunReport {
    pub fn new(command: &str, payload: &[u8], results: Value) -> Self {
        Self {
            command: command.to_owned(),
            inputs_digest: digest(payload),
            results,
            tool_version: TOOL_VERSION.to_owned(),
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "tool_version": self.tool_version,
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let value: Value = serde_json::from_str(text)?;
        let field = |name: &str| {
            value
                .get(name)
                .and_then(Value::as_str)
                .unwrap_or_default()
                .to_owned()
        };
        Ok(Self {
            command: field("command"),
            inputs_digest: field("inputs_digest"),
            results: value.get("results").cloned().unwrap_or(Value::Null),
            tool_version: field("tool_version"),
        })
    }
}

pub fn digest(payload: &[u8]) -> String {
    let hash = Sha256::digest(payload);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn integer(text: &str) -> Value {
    Value::Number(text.parse::<Number>().expect("decimal integer"))
}

pub fn big_integer(value: &BigInt) -> Value {
    integer(&value.to_str_radix(10))
}

fn rational(r: &BigRational) -> Value {
    let (numerator, denominator) = ratio_parts(r);
    json!({
        "numerator": integer(&numerator),
        "denominator": integer(&denominator),
    })
}

pub fn index_value(v: &IndexValue) -> Value {
    match v {
        IndexValue::Exact(r) => {
            let mut out = rational(r);
            out["decimal"] = Value::String(v.to_decimal());
            out
        }
        IndexValue::Surd {
            offset,
            negated,
            radicand,
        } => json!({
            "offset": rational(offset),
            "sqrt_sign": if *negated { -1 } else { 1 },
            "radicand": rational(radicand),
            "decimal": v.to_decimal(),
        }),
    }
}

/// A value, or a marker string for undefined / degenerate / unsupported cases.
pub fn index_outcome(result: &Result<IndexValue, IndexError>) -> Value {
    match result {
        Ok(v) => index_value(v),
        Err(IndexError::Undefined { .. }) => Value::String("undefined".into()),
        Err(IndexError::Degenerate { .. }) => Value::String("degenerate".into()),
        Err(IndexError::Unsupported { .. }) => Value::String("unsupported".into()),
        Err(IndexError::InvalidMaximum { .. }) => Value::String("invalid_maximum".into()),
    }
}

pub fn table(t: &ContingencyTable) -> Value {
    json!({
        "counts": t.to_rows(),
        "row_marginals": t.row_marginals(),
        "col_marginals": t.col_marginals(),
        "n": t.n(),
    })
}

pub fn pair_counts(p: &PairCounts) -> Value {
    json!({ "a": p.a, "b": p.b, "c": p.c, "d": p.d })
}

pub fn marginal_spec(m: &MarginalSpec) -> Value {
    json!({ "rows": m.rows(), "cols": m.cols(), "n": m.n() })
}

pub fn canonical(c: &CanonicalForm) -> Value {
    json!({
        "n": c.n,
        "x": c.x,
        "y": c.y,
        "transform": {
            "row_swap": c.transform.row_swap,
            "col_swap": c.transform.col_swap,
            "transposed": c.transform.transposed,
        },
    })
}

fn branch(b: Branch) -> Value {
    Value::String(b.name().into())
}

pub fn extremal(r: &ExtremalResult) -> Value {
    json!({
        "objective": r.objective.name(),
        "branch": branch(r.branch),
        "k_values": r.k_values,
        "q": r.q_value,
        "tables": r.tables.iter().map(table).collect::<Vec<_>>(),
    })
}

fn counterexample(c: &Counterexample) -> Value {
    json!({
        "spec": marginal_spec(&c.spec),
        "table": table(&c.table),
        "max_q": c.max_q,
        "maximizers": c.maximizers.iter().map(table).collect::<Vec<_>>(),
    })
}

pub fn conjecture(r: &ConjectureReport, include_elapsed: bool) -> Value {
    let mut out = Map::new();
    out.insert("n_max".into(), json!(r.n_max));
    out.insert(
        "tie_rule".into(),
        json!("a largest cluster counts as contained if any cluster of the largest size is"),
    );
    out.insert("complete".into(), json!(r.complete));
    out.insert("cases_scanned".into(), json!(r.cases_scanned));
    out.insert("tables_scanned".into(), json!(r.tables_scanned));
    out.insert("maximizers_found".into(), json!(r.maximizers_found));
    out.insert(
        "specs_without_contained_maximizer".into(),
        json!(r.specs_without_contained_maximizer),
    );
    out.insert(
        "specs_with_uncontained_maximizer".into(),
        json!(r.specs_with_uncontained_maximizer),
    );
    out.insert(
        "counterexample_count".into(),
        json!(r.counterexamples.len()),
    );
    out.insert(
        "counterexamples".into(),
        Value::Array(r.counterexamples.iter().map(counterexample).collect()),
    );
    out.insert(
        "skipped".into(),
        Value::Array(r.skipped.iter().map(marginal_spec).collect()),
    );
    if include_elapsed {
        let ms = r.elapsed.map(|d| d.as_millis() as u64);
        out.insert("elapsed_ms".into(), json!(ms));
    }
    Value::Object(out)
}

/// Inverse of [`index_value`] for exact values, used by round-trip checks.
pub fn parse_exact(v: &Value) -> Option<BigRational> {
    let part = |name: &str| -> Option<BigInt> {
        let text = v.get(name)?.as_number()?.to_string();
        BigInt::parse_bytes(text.as_bytes(), 10)
    };
    let numerator = part("numerator")?;
    let denominator = part("denominator")?;
    if denominator <= BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(numerator, denominator))
}
