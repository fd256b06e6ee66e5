//! Formula-versus-oracle comparison reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::cache::Cache;
use super::dedup::{dedup_counts, DEFAULT_BUDGET};
use super::density::density_counts;
use super::tower::tower_counts;
use super::OracleError;
use crate::counts::count;
use crate::padic::{derive_params, FieldSpec};
use crate::params::{FieldParams, GroupTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Density,
    Tower,
    Dedup,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Density, Method::Tower, Method::Dedup];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Density => "density",
            Method::Tower => "tower",
            Method::Dedup => "dedup",
        }
    }

    pub fn groups(self) -> &'static [GroupTag] {
        match self {
            Method::Tower => &[GroupTag::V4, GroupTag::C4, GroupTag::D4],
            _ => &GroupTag::ALL,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| format!("unknown oracle {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub m: u32,
    pub group: GroupTag,
    pub method: Method,
    pub formula: BigUint,
    pub oracle: BigUint,
    /// Largest coefficient truncation used (density), else 0.
    pub precision: u32,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub field: String,
    pub field_hash: String,
    pub params: FieldParams,
    pub m_max: u32,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub cache: Option<PathBuf>,
    pub dedup_budget: Option<usize>,
}

/// Oracle output: counts per row plus the truncation used.
pub type OracleTable = BTreeMap<(u32, GroupTag), (BigUint, u32)>;

pub const CERTIFICATE_NOTE: &str =
    "density classes certified by a root-distance bound: every member of a class generates the same field";

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field,
            "field_hash": self.field_hash,
            "params": self.params,
            "m_max": self.m_max,
            "version": super::VERSION,
            "notes": self.notes,
            "rows": self.rows.iter().map(|r| json!({
                "m": r.m,
                "group": r.group.as_str(),
                "method": r.method.as_str(),
                "formula": r.formula.to_string(),
                "oracle": r.oracle.to_string(),
                "precision": r.precision,
                "status": r.status,
            })).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("field {} ({})\n", self.field, &self.field_hash[..12]);
        s += &format!(
            "params e={} f={} q={} d(-1)={} class={}\n",
            self.params.e, self.params.f, self.params.q, self.params.d_minus_one, self.params.minus_one_class
        );
        s += &format!("{:>4}  {:<5} {:<8} {:>10} {:>10} {:>4}  {}\n", "m", "group", "method", "formula", "oracle", "c", "status");
        for r in &self.rows {
            s += &format!(
                "{:>4}  {:<5} {:<8} {:>10} {:>10} {:>4}  {}\n",
                r.m,
                r.group,
                r.method,
                r.formula,
                r.oracle,
                r.precision,
                if r.status == Status::Pass { "pass" } else { "FAIL" }
            );
        }
        s += &format!("{}: {} rows, {} failed\n", if self.pass() { "pass" } else { "FAIL" }, self.rows.len(), self.failures());
        s
    }
}

fn run_oracle(spec: &FieldSpec, method: Method, m_max: u32, opts: &VerifyOptions) -> Result<OracleTable, OracleError> {
    let cache = opts.cache.as_ref().map(|d| Cache::new(d.clone()));
    if let Some(c) = &cache {
        if let Some(t) = c.load(spec, method, m_max)? {
            return Ok(t);
        }
    }
    let k = spec.build()?;
    let table: OracleTable = match method {
        Method::Density => {
            let r = density_counts(&k, m_max)?;
            r.counts.into_iter().map(|(key, n)| (key, (n, r.precision[&key]))).collect()
        }
        Method::Tower => tower_counts(&k)?.counts.into_iter().map(|(key, n)| (key, (n, 0))).collect(),
        Method::Dedup => dedup_counts(&k, m_max, opts.dedup_budget.unwrap_or(DEFAULT_BUDGET))?
            .into_iter()
            .map(|(key, n)| (key, (n, 0)))
            .collect(),
    };
    if let Some(c) = &cache {
        c.store(spec, method, m_max, &table)?;
    }
    Ok(table)
}

/// Runs the requested oracles and compares every nonzero row with the
/// closed forms at the derived parameters.
pub fn verify(
    spec: &FieldSpec,
    m_max: u32,
    methods: &BTreeSet<Method>,
    opts: &VerifyOptions,
) -> Result<VerificationReport, OracleError> {
    let k = spec.build()?;
    let params = derive_params(&k)?;
    let top = m_max.min(8 * params.e + 3);
    let mut rows = Vec::new();
    for &method in methods {
        let table = run_oracle(spec, method, m_max, opts)?;
        for m in 0..=top {
            for &g in method.groups() {
                let formula = count(&params, m as i64, g)?;
                let (oracle, precision) = table.get(&(m, g)).cloned().unwrap_or((BigUint::zero(), 0));
                if formula.is_zero() && oracle.is_zero() {
                    continue;
                }
                let status = if formula == oracle { Status::Pass } else { Status::Fail };
                rows.push(ReportRow { m, group: g, method, formula, oracle, precision, status });
            }
        }
        let bound = 8 * params.e + 3;
        if let Some(&(m, g)) = table.keys().find(|k| k.0 > bound) {
            return Err(OracleError::ClassInstability(format!("oracle produced a row at m={m} {g} beyond {bound}")));
        }
    }
    let mut notes = Vec::new();
    if methods.contains(&Method::Density) {
        notes.push(CERTIFICATE_NOTE.to_string());
    }
    Ok(VerificationReport { field: spec.describe(), field_hash: spec.hash(), params, m_max, rows, notes })
}
