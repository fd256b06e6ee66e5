//! On-disk oracle results, one JSON file per field, oracle and `m_max`.

use std::fs;
use std::path::PathBuf;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use super::report::{Method, OracleTable};
use super::{OracleError, VERSION};
use crate::padic::FieldSpec;
use crate::params::GroupTag;

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Cache {
        Cache { dir }
    }

    pub fn path(&self, spec: &FieldSpec, method: Method, m_max: u32) -> PathBuf {
        let m = if method == Method::Tower { "all".to_string() } else { m_max.to_string() };
        self.dir.join(format!("{}-{}-m{}-v{}.json", &spec.hash()[..16], method, m, VERSION))
    }

    pub fn load(&self, spec: &FieldSpec, method: Method, m_max: u32) -> Result<Option<OracleTable>, OracleError> {
        let path = self.path(spec, method, m_max);
        let Ok(text) = fs::read_to_string(&path) else { return Ok(None) };
        let bad = |why: &str| OracleError::Cache(format!("{}: {why}", path.display()));
        let v: Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
        let meta = &v["metadata"];
        if meta["field_hash"] != json!(spec.hash()) || meta["version"] != json!(VERSION) || meta["method"] != json!(method.as_str())
        {
            return Ok(None);
        }
        let mut table = OracleTable::new();
        for row in v["rows"].as_array().ok_or_else(|| bad("no rows"))? {
            let m = row["m"].as_u64().ok_or_else(|| bad("m"))? as u32;
            let g: GroupTag = row["group"].as_str().ok_or_else(|| bad("group"))?.parse().map_err(|_| bad("group"))?;
            let n: BigUint = row["count"].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("count"))?;
            let c = row["precision"].as_u64().unwrap_or(0) as u32;
            table.insert((m, g), (n, c));
        }
        Ok(Some(table))
    }

    pub fn store(&self, spec: &FieldSpec, method: Method, m_max: u32, table: &OracleTable) -> Result<(), OracleError> {
        fs::create_dir_all(&self.dir).map_err(|e| OracleError::Cache(e.to_string()))?;
        let mut meta = Map::new();
        meta.insert("field".into(), json!(spec.describe()));
        meta.insert("field_hash".into(), json!(spec.hash()));
        meta.insert("method".into(), json!(method.as_str()));
        meta.insert("m_max".into(), json!(m_max));
        meta.insert("version".into(), json!(VERSION));
        let rows: Vec<Value> = table
            .iter()
            .map(|((m, g), (n, c))| json!({"m": m, "group": g.as_str(), "count": n.to_string(), "precision": c}))
            .collect();
        let v = json!({"metadata": meta, "rows": rows});
        let text = serde_json::to_string_pretty(&v).expect("cache serializes");
        fs::write(self.path(spec, method, m_max), text).map_err(|e| OracleError::Cache(e.to_string()))
    }
}
