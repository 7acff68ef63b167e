//! Output records. Rationals always leave as `"a/b"` strings in lowest terms
//! (`"a"` for integers), and every map is ordered, so identical inputs give
//! byte-identical output.

use lensurg_core::exactlin::Rational;
use lensurg_core::obstruction::Verdict;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Algorithm,
    PriorWork,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub provenance: Vec<Provenance>,
}

impl OutputRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records always serialize");
        s.push('\n');
        s
    }
}

pub fn rational(r: &Rational) -> String {
    r.to_string()
}

pub fn opt_rational(r: Option<&Rational>) -> Value {
    r.map_or(Value::Null, |r| Value::String(rational(r)))
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "n": v.case.n,
        "k": v.case.k,
        "m": v.case.m,
        "s": v.s(),
        "kind": v.kind.as_str(),
        "reason": v.reason.as_str(),
        "equation_tag": v.equation_tag,
        "details": v.details,
    })
}
