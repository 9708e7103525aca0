//! Suite files: a TOML list of cases with optional per-case settings.
//!
//! ```toml
//! [defaults]
//! rel_tol = 1e-6
//! mc_samples = 1000000
//!
//! [[case]]
//! id = "CB-1"
//! params = { alpha1 = [1.0, 0.5], alpha2 = [1.0, -0.5], sigma1 = 1, sigma2 = 1 }
//!
//! [[case]]
//! id = "MC-1"
//! params = { d = 2, alpha1 = 2, alpha2 = 2, Sigma1 = [[1, 0], [0, 2]] }
//! engine = "mc"
//! samples = 2000000
//! seed = 11
//! ```
//!
//! Complex scalars are `[re, im]` or `{ re, im }`; matrices are arrays of
//! rows. Omitted `Sigma*` matrices default to the identity.

use super::{is_dim_name, is_matrix_name, CaseSettings, Engine, IdentityCase, IdentityId, ParamValue, RunSettings};
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::special::c64;
use std::path::Path;
use toml::{Table, Value};

/// The bundled verification grid.
pub const DEFAULT_SUITE: &str = include_str!("../../suites/default.toml");

/// Run-wide settings a suite may carry; command-line flags override them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteDefaults {
    pub rel_tol: Option<f64>,
    pub abs_floor: Option<f64>,
    pub mc_sigma_multiplier: Option<f64>,
    pub mc_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl SuiteDefaults {
    /// Writes the set fields into `run`.
    pub fn apply(&self, run: &mut RunSettings) {
        if let Some(v) = self.rel_tol {
            run.tol.rel_tol = v;
        }
        if let Some(v) = self.abs_floor {
            run.tol.abs_floor = v;
        }
        if let Some(v) = self.mc_sigma_multiplier {
            run.tol.mc_sigma_multiplier = v;
        }
        if let Some(v) = self.mc_samples {
            run.mc_samples = v;
        }
        if let Some(v) = self.seed {
            run.master_seed = v;
        }
    }
}

/// A parsed, validated list of cases.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Suite {
    pub defaults: SuiteDefaults,
    pub cases: Vec<IdentityCase>,
}

impl Suite {
    /// The bundled grid.
    pub fn bundled() -> Result<Suite> {
        Suite::parse(DEFAULT_SUITE)
    }

    /// `"default"` selects the bundled grid; anything else is a path.
    pub fn resolve(name_or_path: &str) -> Result<Suite> {
        if name_or_path == "default" {
            Suite::bundled()
        } else {
            Suite::load(name_or_path)
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Suite> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read suite '{}': {e}", path.display())))?;
        Suite::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Suite> {
        let table: Table = toml::from_str(text).map_err(|e| Error::Config(format!("suite: {e}")))?;
        let mut suite = Suite::default();
        for (key, value) in &table {
            match key.as_str() {
                "defaults" => suite.defaults = parse_defaults(value)?,
                "case" => {
                    let cases = value
                        .as_array()
                        .ok_or_else(|| Error::Config("suite: 'case' must be an array of tables".into()))?;
                    for (i, c) in cases.iter().enumerate() {
                        let case = parse_case(c).map_err(|e| Error::Config(format!("suite case {}: {e}", i + 1)))?;
                        suite.cases.push(case);
                    }
                }
                other => return Err(Error::Config(format!("suite: unknown key '{other}'"))),
            }
        }
        Ok(suite)
    }

    /// Keeps the cases whose id is in `ids`, in suite order.
    pub fn filter(mut self, ids: &[IdentityId]) -> Suite {
        self.cases.retain(|c| ids.contains(&c.id));
        self
    }
}

/// Parses a comma-separated id list such as `CB-1,CB-0`.
pub fn parse_id_list(text: &str) -> Result<Vec<IdentityId>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Parses one parameter value written as a TOML value.
pub fn parse_param(name: &str, text: &str) -> Result<ParamValue> {
    let table: Table =
        toml::from_str(&format!("v = {text}")).map_err(|_| Error::Config(format!("cannot parse value '{text}' for '{name}'")))?;
    param_value(name, &table["v"])
}

fn number(value: &Value) -> Option<f64> {
    match value {
        Value::Integer(i) => Some(*i as f64),
        Value::Float(f) => Some(*f),
        _ => None,
    }
}

fn positive(name: &str, value: &Value) -> Result<f64> {
    match number(value) {
        Some(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(Error::Config(format!("'{name}' must be a positive number"))),
    }
}

fn count(name: &str, value: &Value) -> Result<u64> {
    match value {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(Error::Config(format!("'{name}' must be a non-negative integer"))),
    }
}

fn param_value(name: &str, value: &Value) -> Result<ParamValue> {
    let bad = || Error::Config(format!("parameter '{name}' has an invalid value"));
    if is_dim_name(name) {
        return match value {
            Value::Integer(i) if *i >= 1 => Ok(ParamValue::Dim(*i as usize)),
            _ => Err(Error::Config("'d' must be a positive integer".into())),
        };
    }
    if is_matrix_name(name) {
        let rows = value.as_array().ok_or_else(bad)?;
        let d = rows.len();
        let mut flat = Vec::with_capacity(d * d);
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == d).ok_or_else(bad)?;
            for x in row {
                flat.push(number(x).ok_or_else(bad)?);
            }
        }
        return SymMatrix::from_rows(d, &flat)
            .map(ParamValue::Matrix)
            .map_err(|e| Error::Config(format!("parameter '{name}': {e}")));
    }
    let z = match value {
        Value::Array(a) if a.len() == 2 => c64(number(&a[0]).ok_or_else(bad)?, number(&a[1]).ok_or_else(bad)?),
        Value::Table(t) => {
            let part = |k: &str| t.get(k).map_or(Some(0.0), number).ok_or_else(bad);
            if t.keys().any(|k| k != "re" && k != "im") {
                return Err(bad());
            }
            c64(part("re")?, part("im")?)
        }
        v => c64(number(v).ok_or_else(bad)?, 0.0),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(ParamValue::Scalar(z))
}

fn parse_defaults(value: &Value) -> Result<SuiteDefaults> {
    let t = value
        .as_table()
        .ok_or_else(|| Error::Config("suite: 'defaults' must be a table".into()))?;
    let mut d = SuiteDefaults::default();
    for (k, v) in t {
        match k.as_str() {
            "rel_tol" => d.rel_tol = Some(positive(k, v)?),
            "abs_floor" => d.abs_floor = Some(positive(k, v)?),
            "mc_sigma_multiplier" => d.mc_sigma_multiplier = Some(positive(k, v)?),
            "mc_samples" => d.mc_samples = Some(count(k, v)? as usize),
            "seed" => d.seed = Some(count(k, v)?),
            other => return Err(Error::Config(format!("suite defaults: unknown key '{other}'"))),
        }
    }
    Ok(d)
}

fn parse_case(value: &Value) -> Result<IdentityCase> {
    let t = value.as_table().ok_or_else(|| Error::Config("expected a table".into()))?;
    let id: IdentityId = t
        .get("id")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Config("missing string 'id'".into()))?
        .parse()?;
    let mut params = Vec::new();
    let mut settings = CaseSettings::default();
    for (k, v) in t {
        match k.as_str() {
            "id" => {}
            "params" => {
                let p = v.as_table().ok_or_else(|| Error::Config("'params' must be a table".into()))?;
                for (name, pv) in p {
                    params.push((name.clone(), param_value(name, pv)?));
                }
            }
            "rel_tol" => settings.rel_tol = Some(positive(k, v)?),
            "samples" => settings.samples = Some(count(k, v)? as usize),
            "seed" => settings.seed = Some(count(k, v)?),
            "engine" => {
                let e: Engine = v
                    .as_str()
                    .ok_or_else(|| Error::Config("'engine' must be a string".into()))?
                    .parse()?;
                settings.engine = Some(e);
            }
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
    }
    IdentityCase::new(id, params)?.with_settings(settings)
}
