//! Command-line surface.
//!
//! Exit codes: 0 success, 2 bad input, 3 algorithm inapplicable, 4 internal
//! cross-check disagreement.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lensurg_core::exactlin::{CharVector, Rational};
use lensurg_core::lens::{LensSpace, SpincLabel};
use lensurg_core::obstruction::{check_case, classify_range, ClassifiedPair, SurgeryCase, VerdictReason};
use lensurg_core::plumbing::{PlumbingError, ScanOptions, SupporterScan};
use lensurg_core::seifert::{
    dinv_closed_tm, dinv_closed_tm_mu, maximiser_families, seifert_plumbing, tm_values, SeifertError, SeifertParams,
};
use serde_json::{json, Value};

use crate::graph_json::{read_graph, GraphDoc, GraphFileError};
use crate::parallel::{dinv_plumbed_par, supporters, with_jobs};
use crate::record::{opt_rational, rational, verdict_json, OutputRecord, Provenance};

#[derive(Debug, Parser)]
#[command(name = "lensurg", version, about = "d-invariants of lens spaces and plumbings, and distance one surgery obstructions")]
pub struct Cli {
    /// Worker threads for brute-force scans (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute d-invariants.
    #[command(subcommand)]
    Dinv(Dinv),
    /// Decide one surgery hypothesis L(n,1) -> L(sign·|nm-k²|,1).
    #[command(allow_negative_numbers = true)]
    Obstruct { n: i64, k: i64, m: i64, sign: String },
    /// Final classification for one odd n or a range.
    Classify(ClassifyArgs),
    /// Brute-force cross-checks.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Debug, Subcommand)]
pub enum Dinv {
    /// d(L(p,q), i) by the recursive formula.
    #[command(allow_negative_numbers = true)]
    Lens {
        p: u64,
        q: i64,
        /// Spin^c label, reduced mod p.
        label: Option<i64>,
        /// Print every label.
        #[arg(long, conflicts_with = "label")]
        all: bool,
        /// Print the self-conjugate labels and their values.
        #[arg(long, conflicts_with_all = ["label", "all"])]
        self_conjugate: bool,
    },
    /// Maximisation over a plumbing graph read from a JSON file.
    Plumbing(PlumbingArgs),
    /// d(M, t_M) and d(M, t_M + PD[mu]) for M(0,0;(m-k,1),(n-k,1),(k,1)).
    #[command(allow_negative_numbers = true)]
    Seifert {
        n: i64,
        k: i64,
        m: i64,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
        /// Print the plumbing graph JSON instead of d-invariants.
        #[arg(long)]
        emit_graph: bool,
    },
}

#[derive(Debug, Args)]
pub struct PlumbingArgs {
    pub file: PathBuf,
    /// Print every class (the default).
    #[arg(long, conflicts_with = "class")]
    pub all: bool,
    /// Only the class of this characteristic vector, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub class: Option<String>,
    /// Skip starting vectors that contain 2,0,...,0,2 inside a -2 chain.
    #[arg(long)]
    pub prune: bool,
    /// Full brute force; overrides --prune.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Closed,
    Algorithm,
    Both,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// A single odd n >= 5.
    #[arg(conflicts_with = "range")]
    pub n: Option<i64>,
    /// Inclusive range a:b; even values are skipped.
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Oracle {
    /// Compare brute-force supporters with the four maximiser families.
    #[command(allow_negative_numbers = true)]
    Maximisers { n: i64, k: i64, m: i64 },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Inapplicable(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Inapplicable(_) => 3,
        }
    }
}

impl From<GraphFileError> for CliError {
    fn from(e: GraphFileError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PlumbingError> for CliError {
    fn from(e: PlumbingError) -> Self {
        match e {
            PlumbingError::AlgorithmInapplicable(_) | PlumbingError::StepBudgetExceeded(_) => {
                CliError::Inapplicable(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SeifertError> for CliError {
    fn from(e: SeifertError) -> Self {
        match e {
            SeifertError::Plumbing(p) => p.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Text to print and the exit code to finish with.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn ok(record: OutputRecord) -> Self {
        Self { text: record.to_json(), code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    with_jobs(cli.jobs, || match &cli.command {
        Command::Dinv(Dinv::Lens { p, q, label, all, self_conjugate }) => dinv_lens(*p, *q, *label, *all, *self_conjugate),
        Command::Dinv(Dinv::Plumbing(args)) => dinv_plumbing(args),
        Command::Dinv(Dinv::Seifert { n, k, m, route, emit_graph }) => dinv_seifert(*n, *k, *m, *route, *emit_graph),
        Command::Obstruct { n, k, m, sign } => obstruct(*n, *k, *m, sign),
        Command::Classify(args) => classify(args),
        Command::Oracle(Oracle::Maximisers { n, k, m }) => oracle_maximisers(*n, *k, *m),
    })
}

fn dinv_lens(p: u64, q: i64, label: Option<i64>, all: bool, self_conjugate: bool) -> Result<Outcome, CliError> {
    let lens = LensSpace::new(p, q).map_err(|e| CliError::Input(e.to_string()))?;
    let labels: Vec<SpincLabel> = if all {
        (0..lens.p()).map(SpincLabel).collect()
    } else if self_conjugate {
        lens.self_conjugate_labels().into_iter().collect()
    } else {
        vec![lens.label(label.unwrap_or(0))]
    };
    let values: Vec<Value> = labels
        .iter()
        .map(|&l| json!({ "label": l.0, "d": rational(&lens.d(l)) }))
        .collect();
    Ok(Outcome::ok(OutputRecord {
        command: "dinv lens".into(),
        inputs: json!({ "p": lens.p(), "q": lens.q(), "label": label, "all": all, "self_conjugate": self_conjugate }),
        results: json!({ "lens": lens.to_string(), "values": values }),
        provenance: vec![Provenance::ClosedForm],
    }))
}

fn parse_vector(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::Input(format!("bad vector entry {x:?}"))))
        .collect()
}

fn dinv_plumbing(args: &PlumbingArgs) -> Result<Outcome, CliError> {
    let g = read_graph(&args.file)?;
    let options = ScanOptions { prune_substrings: args.prune && !args.oracle, max_steps: None };
    let d = dinv_plumbed_par(&g, options)?;
    let form = g.intersection_form();
    let results = if let Some(text) = &args.class {
        let w = CharVector::new(parse_vector(text)?, &form).map_err(|e| CliError::Input(e.to_string()))?;
        let value = d.d_at(&w)?;
        json!({
            "class": w.entries(),
            "d": opt_rational(value),
            "note": if value.is_none() { "no supporter in this class" } else { "" },
        })
    } else {
        let classes: Vec<Value> = d
            .classes()
            .values()
            .map(|c| json!({ "representative": c.representative.entries(), "d": rational(&c.value), "supporters": c.supporters }))
            .collect();
        let values: Vec<String> = d.values().iter().map(rational).collect();
        json!({
            "det": d.classifier().det_abs().to_string(),
            "classes": classes,
            "values": values,
            "missing_classes": d.missing().to_string(),
        })
    };
    Ok(Outcome::ok(OutputRecord {
        command: "dinv plumbing".into(),
        inputs: json!({ "file": args.file.display().to_string(), "prune": options.prune_substrings, "oracle": args.oracle }),
        results,
        provenance: vec![Provenance::Algorithm],
    }))
}

fn dinv_seifert(n: i64, k: i64, m: i64, route: Route, emit_graph: bool) -> Result<Outcome, CliError> {
    let p = SeifertParams::new(n, k, m)?;
    let graph = seifert_plumbing(&p)?;
    let inputs = json!({ "n": n, "k": k, "m": m, "route": format!("{route:?}").to_lowercase() });
    if emit_graph {
        return Ok(Outcome { text: serde_json::to_string_pretty(&GraphDoc::from_graph(&graph)).unwrap() + "\n", code: 0 });
    }
    let mut results = serde_json::Map::new();
    let mut provenance = Vec::new();
    let mut closed: Option<(Rational, Option<Rational>)> = None;
    if route != Route::Algorithm {
        let tm = dinv_closed_tm(&p)?;
        let mu = match dinv_closed_tm_mu(&p) {
            Ok(v) => Some(v),
            Err(SeifertError::NotCovered) => None,
            Err(e) => return Err(e.into()),
        };
        results.insert("closed".into(), json!({ "tm": rational(&tm), "tm_mu": opt_rational(mu.as_ref()) }));
        provenance.push(Provenance::ClosedForm);
        closed = Some((tm, mu));
    }
    let mut code = 0;
    if route != Route::Closed {
        let d = dinv_plumbed_par(&graph, ScanOptions::default())?;
        let v = tm_values(&p, &d)?;
        results.insert(
            "algorithm".into(),
            json!({
                "tm": opt_rational(v.tm.as_ref()),
                "tm_mu_plus": opt_rational(v.tm_mu_plus.as_ref()),
                "tm_mu_minus": opt_rational(v.tm_mu_minus.as_ref()),
            }),
        );
        provenance.push(Provenance::Algorithm);
        if let Some((tm, mu)) = &closed {
            let tm_ok = v.tm.as_ref() == Some(tm);
            let mu_ok = match mu {
                Some(mu) => v.tm_mu_plus.as_ref() == Some(mu) || v.tm_mu_minus.as_ref() == Some(mu),
                None => true,
            };
            let agree = tm_ok && mu_ok;
            results.insert("agreement".into(), json!(if agree { "AGREE" } else { "DISAGREE" }));
            if !agree {
                code = 4;
            }
        }
    }
    let record = OutputRecord { command: "dinv seifert".into(), inputs, results: Value::Object(results), provenance };
    Ok(Outcome { text: record.to_json(), code })
}

fn parse_sign(text: &str) -> Result<i64, CliError> {
    match text.trim() {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        other => Err(CliError::Input(format!("sign must be +1 or -1, got {other:?}"))),
    }
}

fn obstruct(n: i64, k: i64, m: i64, sign: &str) -> Result<Outcome, CliError> {
    let s_sign = parse_sign(sign)?;
    let c = SurgeryCase::new(n, k, m, s_sign).map_err(|e| CliError::Input(e.to_string()))?;
    let v = check_case(&c);
    let provenance = match v.reason {
        VerdictReason::PriorWork | VerdictReason::EvenCaseRule => Provenance::PriorWork,
        _ => Provenance::ClosedForm,
    };
    Ok(Outcome::ok(OutputRecord {
        command: "obstruct".into(),
        inputs: json!({ "n": n, "k": k, "m": m, "sign": s_sign }),
        results: verdict_json(&v),
        provenance: vec![provenance],
    }))
}

fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Input(format!("range must look like a:b, got {text:?}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn classify(args: &ClassifyArgs) -> Result<Outcome, CliError> {
    let (lo, hi) = match (&args.n, &args.range) {
        (Some(n), None) => {
            if *n < 5 || n % 2 == 0 {
                return Err(CliError::Input(format!("n = {n} must be odd and at least 5")));
            }
            (*n, *n)
        }
        (None, Some(r)) => {
            let (a, b) = parse_range(r)?;
            let a = a.max(5);
            (if a % 2 == 0 { a + 1 } else { a }, b)
        }
        _ => return Err(CliError::Input("give either n or --range".into())),
    };
    if lo > hi {
        return Err(CliError::Input("range contains no odd n >= 5".into()));
    }
    let table = classify_range(lo, hi).map_err(|e| CliError::Input(e.to_string()))?;
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "s", "status", "provenance", "citation"]).unwrap();
            for rows in table.values() {
                for r in rows {
                    w.write_record([r.n.to_string(), r.s.to_string(), r.status.as_str().into(), r.provenance.into(), r.citation.clone()])
                        .unwrap();
                }
            }
            Ok(Outcome { text: String::from_utf8(w.into_inner().unwrap()).unwrap(), code: 0 })
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .iter()
                .map(|(n, rows)| {
                    let kept: BTreeSet<i64> = rows.iter().filter(|r| r.status.as_str() != "pruned").map(|r| r.s).collect();
                    json!({ "n": n, "s": kept, "pairs": rows.iter().map(pair_json).collect::<Vec<_>>() })
                })
                .collect();
            Ok(Outcome::ok(OutputRecord {
                command: "classify".into(),
                inputs: json!({ "from": lo, "to": hi }),
                results: Value::Array(rows),
                provenance: vec![Provenance::ClosedForm, Provenance::PriorWork],
            }))
        }
    }
}

fn pair_json(r: &ClassifiedPair) -> Value {
    json!({
        "s": r.s,
        "status": r.status.as_str(),
        "reason": r.reason.as_str(),
        "provenance": r.provenance,
        "citation": r.citation,
    })
}

fn oracle_maximisers(n: i64, k: i64, m: i64) -> Result<Outcome, CliError> {
    let p = SeifertParams::new(n, k, m)?;
    let families: BTreeSet<Vec<i64>> = maximiser_families(&p)?.into_iter().map(|f| f.vector.into_entries()).collect();
    let scan = SupporterScan::new(&seifert_plumbing(&p)?, ScanOptions::default())?;
    let sup = supporters(&scan)?;
    let brute: BTreeSet<Vec<i64>> = sup.iter().map(|s| s.initial.entries().to_vec()).collect();
    let d = scan.assemble(&sup)?;
    let once = d.classes().len() == sup.len() && d.missing() == 0.into();
    let agree = brute == families && once;
    let record = OutputRecord {
        command: "oracle maximisers".into(),
        inputs: json!({ "n": n, "k": k, "m": m }),
        results: json!({
            "expected_count": k * k - n * m,
            "brute_force_count": brute.len(),
            "family_count": families.len(),
            "only_brute_force": brute.difference(&families).collect::<Vec<_>>(),
            "only_families": families.difference(&brute).collect::<Vec<_>>(),
            "one_per_class": once,
            "agreement": if agree { "AGREE" } else { "DISAGREE" },
        }),
        provenance: vec![Provenance::Algorithm, Provenance::ClosedForm],
    };
    Ok(Outcome { text: record.to_json(), code: if agree { 0 } else { 4 } })
}
