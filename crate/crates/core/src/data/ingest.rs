use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::design_set::{ColumnNames, DesignSet};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Design,
    Performance,
    Valid,
    Condition,
    /// Precomputed signed distance to one constraint boundary.
    Sdf,
    Ignore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveDirection {
    #[default]
    Maximize,
    Minimize,
}

impl ObjectiveDirection {
    /// Multiplier taking a raw value into the maximization frame (and back).
    pub fn sign(self) -> f64 {
        match self {
            ObjectiveDirection::Maximize => 1.0,
            ObjectiveDirection::Minimize => -1.0,
        }
    }
}

/// Column name → role. Every CSV column must appear exactly once.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schema {
    roles: IndexMap<String, Role>,
}

impl Schema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, column: impl Into<String>, role: Role) -> Self {
        self.roles.insert(column.into(), role);
        self
    }

    pub fn designs<S: AsRef<str>>(columns: &[S]) -> Self {
        columns
            .iter()
            .fold(Schema::new(), |s, c| s.with(c.as_ref(), Role::Design))
    }

    pub fn role(&self, column: &str) -> Option<Role> {
        self.roles.get(column).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    /// The same roles restricted to `columns`.
    pub fn restricted_to<S: AsRef<str>>(&self, columns: &[S]) -> Schema {
        Schema {
            roles: self
                .roles
                .iter()
                .filter(|(c, _)| columns.iter().any(|h| h.as_ref() == c.as_str()))
                .map(|(c, r)| (c.clone(), *r))
                .collect(),
        }
    }
}

/// Load a CSV file into a [`DesignSet`].
///
/// Objective columns flagged `minimize` in `directions` are negated so that
/// the stored performance is maximization-framed; unlisted objectives are
/// taken as `maximize`. An empty schema treats every column as a design column.
pub fn load_design_set(
    path: &Path,
    schema: &Schema,
    directions: &HashMap<String, ObjectiveDirection>,
) -> Result<DesignSet> {
    let file = File::open(path)?;
    read_design_set(file, schema, directions)
}

pub fn read_design_set<R: Read>(
    reader: R,
    schema: &Schema,
    directions: &HashMap<String, ObjectiveDirection>,
) -> Result<DesignSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();

    let mut roles = Vec::with_capacity(headers.len());
    for h in &headers {
        let role = if schema.is_empty() {
            Role::Design
        } else {
            schema.role(h).ok_or_else(|| {
                EvalError::Schema(format!("column `{h}` has no role in the schema"))
            })?
        };
        roles.push(role);
    }
    for col in schema.roles.keys() {
        if !headers.contains(col) {
            return Err(EvalError::Schema(format!(
                "schema column `{col}` not found in the CSV header"
            )));
        }
    }
    if roles.iter().filter(|r| **r == Role::Valid).count() > 1 {
        return Err(EvalError::Schema("at least two columns have role `valid`".into()));
    }
    if !roles.contains(&Role::Design) {
        return Err(EvalError::Schema("no design columns".into()));
    }
    for name in directions.keys() {
        let idx = headers.iter().position(|h| h == name);
        if idx.map(|i| roles[i]) != Some(Role::Performance) {
            return Err(EvalError::Schema(format!(
                "direction given for `{name}`, which is not a performance column"
            )));
        }
    }

    let cols_of = |role: Role| -> Vec<usize> {
        (0..headers.len()).filter(|&i| roles[i] == role).collect()
    };
    let design_cols = cols_of(Role::Design);
    let perf_cols = cols_of(Role::Performance);
    let cond_cols = cols_of(Role::Condition);
    let sdf_cols = cols_of(Role::Sdf);
    let valid_col = cols_of(Role::Valid).first().copied();
    let perf_sign: Vec<f64> = perf_cols
        .iter()
        .map(|&i| directions.get(&headers[i]).copied().unwrap_or_default().sign())
        .collect();

    let mut designs = Vec::new();
    let mut perf = Vec::new();
    let mut conds = Vec::new();
    let mut sdfs = Vec::new();
    let mut valid = Vec::new();

    for (r, rec) in rdr.records().enumerate() {
        let row = r + 1;
        let rec = rec.map_err(|e| EvalError::Ingest {
            row,
            column: "*".into(),
            message: e.to_string(),
        })?;
        if rec.len() != headers.len() {
            return Err(EvalError::Ingest {
                row,
                column: "*".into(),
                message: format!("expected {} fields, found {}", headers.len(), rec.len()),
            });
        }
        let num = |i: usize| -> Result<f64> {
            let cell = &rec[i];
            let v: f64 = cell.parse().map_err(|_| EvalError::Ingest {
                row,
                column: headers[i].clone(),
                message: format!("cannot parse `{cell}` as a number"),
            })?;
            if !v.is_finite() {
                return Err(EvalError::Ingest {
                    row,
                    column: headers[i].clone(),
                    message: format!("non-finite value `{cell}`"),
                });
            }
            Ok(v)
        };
        for &i in &design_cols {
            designs.push(num(i)?);
        }
        for (&i, s) in perf_cols.iter().zip(&perf_sign) {
            // `0.0 * -1.0` is -0.0; normalize so orientation flips compare equal.
            perf.push(num(i)? * s + 0.0);
        }
        for &i in &cond_cols {
            conds.push(num(i)?);
        }
        for &i in &sdf_cols {
            sdfs.push(num(i)?);
        }
        if let Some(i) = valid_col {
            valid.push(parse_flag(&rec[i]).ok_or_else(|| EvalError::Ingest {
                row,
                column: headers[i].clone(),
                message: format!("cannot parse `{}` as a validity flag", &rec[i]),
            })?);
        }
    }

    let n = designs.len() / design_cols.len();
    if n == 0 {
        return Err(EvalError::Empty("design set"));
    }
    let names = ColumnNames {
        design: design_cols.iter().map(|&i| headers[i].clone()).collect(),
        performance: perf_cols.iter().map(|&i| headers[i].clone()).collect(),
        conditions: cond_cols.iter().map(|&i| headers[i].clone()).collect(),
        sdfs: sdf_cols.iter().map(|&i| headers[i].clone()).collect(),
    };
    let mut set = DesignSet::new(Matrix::from_vec(n, design_cols.len(), designs)?)?;
    if !perf_cols.is_empty() {
        set = set.with_performance(Matrix::from_vec(n, perf_cols.len(), perf)?)?;
    }
    if !cond_cols.is_empty() {
        set = set.with_conditions(Matrix::from_vec(n, cond_cols.len(), conds)?)?;
    }
    if !sdf_cols.is_empty() {
        set = set.with_sdfs(Matrix::from_vec(n, sdf_cols.len(), sdfs)?)?;
    }
    if valid_col.is_some() {
        set = set.with_valid(valid)?;
    }
    Ok(set.with_names(names))
}

fn parse_flag(cell: &str) -> Option<bool> {
    match cell.to_ascii_lowercase().as_str() {
        "1" | "1.0" | "true" | "t" | "yes" => Some(true),
        "0" | "0.0" | "false" | "f" | "no" => Some(false),
        _ => None,
    }
}

/// Write a design set in the CSV schema `read_design_set` accepts.
/// Performance is written back in its raw orientation using `directions`.
pub fn write_design_set<W: Write>(
    writer: W,
    set: &DesignSet,
    directions: &HashMap<String, ObjectiveDirection>,
) -> Result<Schema> {
    let names = set.names().cloned().unwrap_or_default();
    let pick = |given: &[String], prefix: &str, n: usize| -> Vec<String> {
        if given.len() == n {
            given.to_vec()
        } else {
            (0..n).map(|i| format!("{prefix}{i}")).collect()
        }
    };
    let design = pick(&names.design, "x", set.dim());
    let perf = set
        .performance()
        .map(|p| pick(&names.performance, "f", p.ncols()))
        .unwrap_or_default();
    let conds = set
        .conditions()
        .map(|c| pick(&names.conditions, "c", c.ncols()))
        .unwrap_or_default();
    let sdfs = set
        .sdfs()
        .map(|s| pick(&names.sdfs, "sdf", s.ncols()))
        .unwrap_or_default();

    let mut schema = Schema::new();
    let mut header = Vec::new();
    for (cols, role) in [
        (&design, Role::Design),
        (&perf, Role::Performance),
        (&conds, Role::Condition),
        (&sdfs, Role::Sdf),
    ] {
        for c in cols {
            schema = schema.with(c.clone(), role);
            header.push(c.clone());
        }
    }
    if set.valid().is_some() {
        schema = schema.with("valid", Role::Valid);
        header.push("valid".into());
    }
    let signs: Vec<f64> = perf
        .iter()
        .map(|c| directions.get(c).copied().unwrap_or_default().sign())
        .collect();

    let mut w = csv::Writer::from_writer(writer);
    w.write_record(&header)?;
    for i in 0..set.len() {
        let mut rec: Vec<String> = set.designs().row(i).iter().map(|v| v.to_string()).collect();
        if let Some(p) = set.performance() {
            rec.extend(p.row(i).iter().zip(&signs).map(|(v, s)| (v * s + 0.0).to_string()));
        }
        if let Some(c) = set.conditions() {
            rec.extend(c.row(i).iter().map(|v| v.to_string()));
        }
        if let Some(s) = set.sdfs() {
            rec.extend(s.row(i).iter().map(|v| v.to_string()));
        }
        if let Some(v) = set.valid() {
            rec.push(if v[i] { "1".into() } else { "0".into() });
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(schema)
}
