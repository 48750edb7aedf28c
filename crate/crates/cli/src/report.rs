//! The machine-readable report.
//!
//! Reports are JSON with a fixed field order and no timings, so that the same
//! job against the same cache prints the same bytes. Exact numbers appear as
//! strings `"p/q"`; floating-point numbers appear as JSON numbers.

use linearize::{TzSeed, VerifyReport};
use obstruction::TypoEntry;
use polyalg::{Root, RootValue};
use serde::Serialize;
use serde_json::Value;
use symexpr::{fmt_rational, NumValue};

pub const REPORT_SCHEMA: &str = "weblin-report/1";

/// Upper bound on projectively distinct linearizations of a web.
pub const CLASS_BOUND: usize = 15;

pub fn num(v: &NumValue) -> Value {
    match v {
        NumValue::Exact(q) => Value::String(fmt_rational(q)),
        NumValue::Float(x) => json_f64(*x),
    }
}

pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Linearizable,
    NotLinearizable,
    Parallelizable,
    InconclusiveNumeric,
}

impl Verdict {
    pub fn is_decisive(self) -> bool {
        self != Verdict::InconclusiveNumeric
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub f: String,
    pub point: [String; 2],
    pub mode: &'static str,
    pub gauge: String,
    pub grid_h: f64,
    pub grid_n: usize,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_tol: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureStanza {
    pub value: Value,
    pub exact: bool,
    pub branch: &'static str,
    pub parallelizable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerEntry {
    pub table: String,
    pub monomial: String,
    pub printed: String,
    pub derived: String,
}

impl From<&TypoEntry> for LedgerEntry {
    fn from(e: &TypoEntry) -> LedgerEntry {
        LedgerEntry {
            table: e.table.clone(),
            monomial: e.monomial.clone(),
            printed: fmt_rational(&e.printed),
            derived: fmt_rational(&e.derived),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerStanza {
    pub cache: String,
    pub cache_dir: String,
    pub pipeline: String,
    pub typo_ledger: Vec<LedgerEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_table: Option<DegreeTable>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeTable {
    pub bindings: usize,
    pub det_degrees: [Option<usize>; 4],
    pub det_expected: [usize; 4],
    pub q_degrees: [Option<usize>; 7],
    pub q_bounds: [usize; 7],
    pub generic: bool,
    pub det4_vanishes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootEntry {
    pub value: Value,
    pub kind: &'static str,
    pub multiplicity: usize,
}

impl From<&Root> for RootEntry {
    fn from(r: &Root) -> RootEntry {
        let (value, kind) = match &r.value {
            RootValue::Rational(q) => (Value::String(fmt_rational(q)), "rational"),
            RootValue::Real(x) => (json_f64(*x), "real"),
            RootValue::Complex(z) => (Value::Array(vec![json_f64(z.re), json_f64(z.im)]), "complex"),
        };
        RootEntry { value, kind, multiplicity: r.multiplicity }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// The pair `[i, j]` of obstruction indices, counted from 1.
    pub pair: [usize; 2],
    pub resultant: Value,
    pub nonzero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionStanza {
    pub exact: bool,
    pub det_degrees: [Option<usize>; 4],
    pub q_degrees: [Option<usize>; 7],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical_degree: Option<usize>,
    pub roots: Vec<RootEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub point: [String; 2],
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NeighborhoodStanza {
    pub radius: String,
    pub requested: usize,
    pub evaluated: usize,
    pub samples: Vec<Sample>,
    /// Every evaluated sample has a radical of the same degree as the point.
    pub degree_constant: bool,
    /// Every evaluated sample has the same radical as the point.
    pub radical_constant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassStanza {
    pub count: usize,
    pub bound: usize,
    pub within_bound: bool,
    pub radical_degree: usize,
    pub pairwise_inequivalent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedStanza {
    pub t0: f64,
    pub z0: f64,
    pub determined: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub consistency: Vec<Value>,
}

impl SeedStanza {
    pub fn free(t0: f64, z0: f64) -> SeedStanza {
        SeedStanza { t0, z0, determined: false, consistency: Vec::new() }
    }
}

impl From<&TzSeed> for SeedStanza {
    fn from(s: &TzSeed) -> SeedStanza {
        SeedStanza {
            t0: s.t0,
            z0: s.z0,
            determined: s.determined,
            consistency: s.consistency.iter().map(num).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrationStanza {
    pub fgh_max: f64,
    pub s_min: f64,
    pub s_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationStanza {
    pub p1: f64,
    pub curvature: f64,
    pub autoparallel: f64,
    pub frobenius: [f64; 3],
    pub interior_nodes: usize,
    pub tol_p1: f64,
    pub tol_curvature: f64,
    pub tol_autoparallel: f64,
    pub tol_frobenius: f64,
    pub passed: bool,
}

impl From<&VerifyReport> for VerificationStanza {
    fn from(r: &VerifyReport) -> VerificationStanza {
        let t = &r.tolerances;
        VerificationStanza {
            p1: r.p1,
            curvature: r.curvature,
            autoparallel: r.autoparallel,
            frobenius: r.frobenius,
            interior_nodes: r.interior_nodes,
            tol_p1: t.p1,
            tol_curvature: t.curvature,
            tol_autoparallel: t.autoparallel,
            tol_frobenius: t.frobenius,
            passed: r.passed(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinStanza {
    pub base: Value,
    pub grid_h: f64,
    pub grid_n: usize,
    pub seed: SeedStanza,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integration: Option<IntegrationStanza>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationStanza>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl LinStanza {
    pub fn verified(&self) -> bool {
        self.verification.as_ref().is_some_and(|v| v.passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorStanza {
    pub stage: &'static str,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureStanza>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerStanza>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionStanza>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighborhood: Option<NeighborhoodStanza>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<ClassStanza>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub linearizations: Vec<LinStanza>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorStanza>,
}

impl Report {
    pub fn new(command: &'static str) -> Report {
        Report {
            schema: REPORT_SCHEMA,
            command,
            input: None,
            curvature: None,
            tower: None,
            obstruction: None,
            neighborhood: None,
            classes: None,
            linearizations: Vec::new(),
            verdict: None,
            notes: Vec::new(),
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
