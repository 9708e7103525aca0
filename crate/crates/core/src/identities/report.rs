//! Report emission and parsing in JSON, CSV and plain-table form.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), so
//! `parse(emit(records)) == records` for finite values. Missing values are
//! JSON `null` and empty CSV cells.

use super::{is_dim_name, is_matrix_name, ParamValue, Params, VerificationRecord};
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::special::c64;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;
use std::fmt::Write as _;
use std::str::FromStr;

/// Output format of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Table,
}

impl ReportFormat {
    pub fn emit(self, records: &[VerificationRecord]) -> Result<String> {
        match self {
            ReportFormat::Json => to_json(records),
            ReportFormat::Csv => to_csv(records),
            ReportFormat::Table => Ok(to_table(records)),
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "table" => Ok(ReportFormat::Table),
            _ => Err(Error::Config(format!("unknown format '{s}' (expected json, csv or table)"))),
        }
    }
}

/// Column order shared by every format.
pub const FIELDS: [&str; 14] = [
    "id",
    "params",
    "lhs_re",
    "lhs_im",
    "lhs_err",
    "rhs_re",
    "rhs_im",
    "abs_err",
    "rel_err",
    "verdict",
    "evals_or_samples",
    "seed",
    "wall_ms",
    "error",
];

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> Option<String> {
    x.filter(|v| v.is_finite()).map(float)
}

fn parse_float(field: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("report: field '{field}' is not a number: '{s}'")))
}

/// Canonical compact JSON for a parameter assignment: `d` as an integer,
/// matrices as arrays of rows, real scalars as numbers and complex ones as
/// `{"re":…,"im":…}`.
pub fn params_json(params: &Params) -> String {
    let mut out = String::from("{");
    for (i, (name, value)) in params.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&serde_json::to_string(name).expect("string serialization"));
        out.push(':');
        match value {
            ParamValue::Dim(d) => write!(out, "{d}").unwrap(),
            ParamValue::Scalar(z) if z.im == 0.0 => out.push_str(&float(z.re)),
            ParamValue::Scalar(z) => write!(out, "{{\"re\":{},\"im\":{}}}", float(z.re), float(z.im)).unwrap(),
            ParamValue::Matrix(m) => {
                let d = m.dim();
                out.push('[');
                for r in 0..d {
                    if r > 0 {
                        out.push(',');
                    }
                    out.push('[');
                    for c in 0..d {
                        if c > 0 {
                            out.push(',');
                        }
                        out.push_str(&float(m.get(r, c)));
                    }
                    out.push(']');
                }
                out.push(']');
            }
        }
    }
    out.push('}');
    out
}

fn params_from_json(text: &str) -> Result<Params> {
    let bad = |name: &str| Error::Config(format!("report: parameter '{name}' is malformed"));
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("report params: {e}")))?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::Config("report: params must be an object".into()))?;
    let mut out = Vec::with_capacity(object.len());
    for (name, v) in object {
        let pv = if is_dim_name(name) {
            ParamValue::Dim(v.as_u64().ok_or_else(|| bad(name))? as usize)
        } else if is_matrix_name(name) {
            let rows = v.as_array().ok_or_else(|| bad(name))?;
            let d = rows.len();
            let mut flat = Vec::with_capacity(d * d);
            for row in rows {
                for x in row.as_array().ok_or_else(|| bad(name))? {
                    flat.push(x.as_f64().ok_or_else(|| bad(name))?);
                }
            }
            ParamValue::Matrix(SymMatrix::from_rows(d, &flat).map_err(|_| bad(name))?)
        } else if let Some(x) = v.as_f64() {
            ParamValue::Scalar(c64(x, 0.0))
        } else {
            let part = |k: &str| v.get(k).and_then(Value::as_f64).ok_or_else(|| bad(name));
            ParamValue::Scalar(c64(part("re")?, part("im")?))
        };
        out.push((name.clone(), pv));
    }
    Ok(Params(out))
}

/// One record as strings, in column order; `None` is a missing value.
fn cells(r: &VerificationRecord) -> [Option<String>; 14] {
    [
        Some(r.id.as_str().to_string()),
        Some(params_json(&r.params)),
        opt_float(r.lhs.map(|z| z.re)),
        opt_float(r.lhs.map(|z| z.im)),
        opt_float(r.lhs_err),
        opt_float(r.rhs.map(|z| z.re)),
        opt_float(r.rhs.map(|z| z.im)),
        opt_float(r.abs_err),
        opt_float(r.rel_err),
        Some(r.verdict.as_str().to_string()),
        Some(r.evals_or_samples.to_string()),
        r.seed.map(|s| s.to_string()),
        opt_float(r.wall_ms),
        r.error.clone(),
    ]
}

fn from_cells(c: [Option<String>; 14]) -> Result<VerificationRecord> {
    let required = |i: usize| {
        c[i].clone()
            .ok_or_else(|| Error::Config(format!("report: field '{}' is missing", FIELDS[i])))
    };
    let num = |i: usize| c[i].as_deref().map(|s| parse_float(FIELDS[i], s)).transpose();
    let pair = |i: usize, j: usize| -> Result<Option<_>> {
        match (num(i)?, num(j)?) {
            (Some(re), Some(im)) => Ok(Some(c64(re, im))),
            (None, None) => Ok(None),
            _ => Err(Error::Config(format!("report: '{}' and '{}' must both be set", FIELDS[i], FIELDS[j]))),
        }
    };
    let int = |i: usize| -> Result<Option<u64>> {
        c[i].as_deref()
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("report: field '{}' is not an integer", FIELDS[i])))
            })
            .transpose()
    };
    Ok(VerificationRecord {
        id: required(0)?.parse()?,
        params: params_from_json(&required(1)?)?,
        lhs: pair(2, 3)?,
        lhs_err: num(4)?,
        rhs: pair(5, 6)?,
        abs_err: num(7)?,
        rel_err: num(8)?,
        verdict: required(9)?.parse()?,
        evals_or_samples: int(10)?.ok_or_else(|| Error::Config("report: 'evals_or_samples' is missing".into()))?,
        seed: int(11)?,
        wall_ms: num(12)?,
        error: c[13].clone(),
    })
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    id: String,
    params: Box<RawValue>,
    lhs_re: Option<Box<RawValue>>,
    lhs_im: Option<Box<RawValue>>,
    lhs_err: Option<Box<RawValue>>,
    rhs_re: Option<Box<RawValue>>,
    rhs_im: Option<Box<RawValue>>,
    abs_err: Option<Box<RawValue>>,
    rel_err: Option<Box<RawValue>>,
    verdict: String,
    evals_or_samples: u64,
    seed: Option<u64>,
    wall_ms: Option<Box<RawValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn raw(s: Option<String>) -> Result<Option<Box<RawValue>>> {
    s.map(|s| RawValue::from_string(s).map_err(|e| Error::Config(format!("report: {e}"))))
        .transpose()
}

fn unraw(r: &Option<Box<RawValue>>) -> Option<String> {
    r.as_ref().map(|v| v.get().to_string())
}

/// JSON array of records, one object per line.
pub fn to_json(records: &[VerificationRecord]) -> Result<String> {
    let mut out = String::from("[\n");
    for (i, r) in records.iter().enumerate() {
        let [_, params, lhs_re, lhs_im, lhs_err, rhs_re, rhs_im, abs_err, rel_err, _, _, _, wall_ms, _] = cells(r);
        let row = JsonRecord {
            id: r.id.as_str().to_string(),
            params: raw(params)?.expect("params always present"),
            lhs_re: raw(lhs_re)?,
            lhs_im: raw(lhs_im)?,
            lhs_err: raw(lhs_err)?,
            rhs_re: raw(rhs_re)?,
            rhs_im: raw(rhs_im)?,
            abs_err: raw(abs_err)?,
            rel_err: raw(rel_err)?,
            verdict: r.verdict.as_str().to_string(),
            evals_or_samples: r.evals_or_samples,
            seed: r.seed,
            wall_ms: raw(wall_ms)?,
            error: r.error.clone(),
        };
        out.push_str("  ");
        out.push_str(&serde_json::to_string(&row).map_err(|e| Error::Config(format!("report: {e}")))?);
        if i + 1 < records.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    Ok(out)
}

pub fn from_json(text: &str) -> Result<Vec<VerificationRecord>> {
    let rows: Vec<JsonRecord> = serde_json::from_str(text).map_err(|e| Error::Config(format!("report: {e}")))?;
    rows.into_iter()
        .map(|r| {
            from_cells([
                Some(r.id),
                Some(r.params.get().to_string()),
                unraw(&r.lhs_re),
                unraw(&r.lhs_im),
                unraw(&r.lhs_err),
                unraw(&r.rhs_re),
                unraw(&r.rhs_im),
                unraw(&r.abs_err),
                unraw(&r.rel_err),
                Some(r.verdict),
                Some(r.evals_or_samples.to_string()),
                r.seed.map(|s| s.to_string()),
                unraw(&r.wall_ms),
                r.error,
            ])
        })
        .collect()
}

/// CSV with a header row; params are a JSON string, missing values empty.
pub fn to_csv(records: &[VerificationRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Config(format!("report: {e}"));
    w.write_record(FIELDS).map_err(err)?;
    for r in records {
        w.write_record(cells(r).iter().map(|c| c.as_deref().unwrap_or("")))
            .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("report: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(format!("report: {e}")))
}

pub fn from_csv(text: &str) -> Result<Vec<VerificationRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let err = |e: csv::Error| Error::Config(format!("report: {e}"));
    let header = rdr.headers().map_err(err)?.clone();
    let index: Vec<Option<usize>> = FIELDS.iter().map(|f| header.iter().position(|h| h == *f)).collect();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(err)?;
        let mut c: [Option<String>; 14] = Default::default();
        for (k, idx) in index.iter().enumerate() {
            c[k] = idx.and_then(|i| row.get(i)).filter(|s| !s.is_empty()).map(str::to_string);
        }
        out.push(from_cells(c)?);
    }
    Ok(out)
}

/// Aligned plain-text table with the same number strings as the JSON form.
pub fn to_table(records: &[VerificationRecord]) -> String {
    const COLUMNS: [usize; 13] = [0, 9, 2, 3, 5, 6, 7, 8, 4, 10, 11, 12, 1];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let c = cells(r);
            COLUMNS.iter().map(|&i| c[i].clone().unwrap_or_else(|| "-".into())).collect()
        })
        .collect();
    let header: Vec<&str> = COLUMNS.iter().map(|&i| FIELDS[i]).collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let last = cells.len() - 1;
        for (i, cell) in cells.iter().enumerate() {
            if i == last {
                out.push_str(cell);
            } else {
                write!(out, "{cell:<width$}  ", width = widths[i]).unwrap();
            }
        }
        out.push('\n');
    };
    line(&header);
    for row in &rows {
        line(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    for r in records.iter().filter(|r| r.error.is_some()) {
        writeln!(out, "{}: {}", r.id, r.error.as_deref().unwrap_or_default()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{IdentityCase, IdentityId, Verdict};
    use std::f64::consts::PI;

    fn sample() -> Vec<VerificationRecord> {
        let cb = IdentityCase::new(
            IdentityId::Cb1,
            vec![
                ("alpha1".into(), ParamValue::Scalar(c64(1.0, 0.5))),
                ("alpha2".into(), ParamValue::Scalar(c64(1.0, -0.5))),
                ("sigma1".into(), ParamValue::Scalar(c64(1.0, 0.0))),
                ("sigma2".into(), ParamValue::Scalar(c64(0.1, 0.0))),
            ],
        )
        .unwrap();
        let mc = IdentityCase::new(
            IdentityId::Mc0,
            vec![
                ("d".into(), ParamValue::Dim(2)),
                ("alpha1".into(), ParamValue::Scalar(c64(2.0, 0.0))),
                ("alpha2".into(), ParamValue::Scalar(c64(2.0, 0.0))),
                ("Sigma1".into(), ParamValue::Matrix(SymMatrix::diag(&[1.0, 1.0 / 3.0]))),
            ],
        )
        .unwrap();
        vec![
            VerificationRecord {
                id: cb.id,
                params: cb.params().clone(),
                lhs: Some(c64(PI, -1e-17)),
                lhs_err: Some(1.234e-11),
                rhs: Some(c64(PI, 0.0)),
                abs_err: Some(1e-17),
                rel_err: Some(1e-17 / PI),
                verdict: Verdict::Pass,
                evals_or_samples: 1234,
                seed: None,
                wall_ms: Some(0.1),
                error: None,
            },
            VerificationRecord {
                id: mc.id,
                params: mc.params().clone(),
                lhs: None,
                lhs_err: None,
                rhs: Some(c64(0.0, 0.0)),
                abs_err: None,
                rel_err: None,
                verdict: Verdict::EngineError,
                evals_or_samples: 0,
                seed: Some(u64::MAX),
                wall_ms: None,
                error: Some("importance weights are not finite, \"quoted\"".into()),
            },
        ]
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = to_json(&r).unwrap();
        assert_eq!(from_json(&text).unwrap(), r);
        assert!(text.contains("\"rel_err\":null"));
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        let text = to_csv(&r).unwrap();
        assert!(text.starts_with("id,params,lhs_re"));
        assert_eq!(from_csv(&text).unwrap(), r);
    }

    #[test]
    fn table_matches_json_numbers() {
        let r = sample();
        let table = to_table(&r);
        let json = to_json(&r).unwrap();
        let lhs = float(PI);
        assert!(table.contains(&lhs) && json.contains(&lhs));
        assert!(table.contains(&float(1.234e-11)));
    }

    #[test]
    fn params_are_typed() {
        let r = sample();
        assert_eq!(
            params_json(&r[1].params),
            format!(
                "{{\"d\":2,\"alpha1\":{two},\"alpha2\":{two},\"Sigma1\":[[{one},{zero}],[{zero},{third}]],\"Sigma2\":[[{one},{zero}],[{zero},{one}]]}}",
                two = float(2.0),
                one = float(1.0),
                zero = float(0.0),
                third = float(1.0 / 3.0)
            )
        );
        assert!(params_json(&r[0].params).contains("{\"re\":"));
    }
}
