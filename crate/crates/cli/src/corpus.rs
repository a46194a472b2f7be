//! The golden corpus: one JSON document per worked example, each row an
//! input, a check and the expected fields of the check's result. Expected
//! keys starting with `/` are JSON pointers into the result.

use std::path::Path;

use serde_json::{json, Value};

use crate::input::parse_input;
use crate::payloads::check;
use crate::CliError;

/// Bundled documents, by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "segments.json",
        include_str!("../../../corpus/segments.json"),
    ),
    (
        "fails-condition-i.json",
        include_str!("../../../corpus/fails-condition-i.json"),
    ),
    (
        "fails-condition-ii.json",
        include_str!("../../../corpus/fails-condition-ii.json"),
    ),
    ("polygon.json", include_str!("../../../corpus/polygon.json")),
    (
        "tetrahedron.json",
        include_str!("../../../corpus/tetrahedron.json"),
    ),
    (
        "relations.json",
        include_str!("../../../corpus/relations.json"),
    ),
    (
        "dual-223.json",
        include_str!("../../../corpus/dual-223.json"),
    ),
    (
        "product-simplices.json",
        include_str!("../../../corpus/product-simplices.json"),
    ),
    (
        "rhombus-hull.json",
        include_str!("../../../corpus/rhombus-hull.json"),
    ),
    (
        "hexagon-hull.json",
        include_str!("../../../corpus/hexagon-hull.json"),
    ),
    (
        "unit-square.json",
        include_str!("../../../corpus/unit-square.json"),
    ),
    (
        "triangle-family.json",
        include_str!("../../../corpus/triangle-family.json"),
    ),
    (
        "g-stable-fans.json",
        include_str!("../../../corpus/g-stable-fans.json"),
    ),
];

#[derive(Clone, Debug)]
pub struct Row {
    pub label: String,
    pub id: String,
    pub check: String,
    pub input: Value,
    pub expect: serde_json::Map<String, Value>,
}

impl Row {
    pub fn name(&self) -> String {
        format!("{}/{}", self.label, self.id)
    }
}

pub struct Document {
    pub file: String,
    pub bytes: Vec<u8>,
    pub rows: Vec<Row>,
}

fn corrupt(file: &str, why: impl std::fmt::Display) -> CliError {
    CliError::usage(format!("corrupt corpus file {file}: {why}"))
}

pub fn parse_document(file: &str, bytes: &[u8]) -> Result<Document, CliError> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| corrupt(file, e))?;
    let label = v
        .get("label")
        .and_then(Value::as_str)
        .ok_or_else(|| corrupt(file, "missing label"))?;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| corrupt(file, "missing rows"))?;
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let field = |k: &str| {
            r.get(k)
                .ok_or_else(|| corrupt(file, format!("row {i} missing {k}")))
        };
        let id = field("id")?
            .as_str()
            .ok_or_else(|| corrupt(file, format!("row {i}: id")))?;
        let check = field("check")?
            .as_str()
            .ok_or_else(|| corrupt(file, format!("row {i}: check")))?;
        let expect = field("expect")?
            .as_object()
            .ok_or_else(|| corrupt(file, format!("row {i}: expect must be an object")))?;
        let input = field("input")?.clone();
        parse_input(&input).map_err(|e| corrupt(file, format!("row {i}: {}", e.message)))?;
        out.push(Row {
            label: label.to_string(),
            id: id.to_string(),
            check: check.to_string(),
            input,
            expect: expect.clone(),
        });
    }
    Ok(Document {
        file: file.to_string(),
        bytes: bytes.to_vec(),
        rows: out,
    })
}

pub fn bundled() -> Result<Vec<Document>, CliError> {
    BUNDLED
        .iter()
        .map(|(f, s)| parse_document(f, s.as_bytes()))
        .collect()
}

/// Every `*.json` file of `dir`, by file name.
pub fn from_dir(dir: &Path) -> Result<Vec<Document>, CliError> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| CliError::usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| {
            let bytes =
                std::fs::read(p).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            parse_document(&name, &bytes)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RowOutcome {
    pub name: String,
    pub check: String,
    pub passed: bool,
    /// Mismatched keys, or the error that stopped the row.
    pub diff: Vec<Value>,
}

pub fn run_row(row: &Row) -> RowOutcome {
    let mut diff = Vec::new();
    match parse_input(&row.input).and_then(|i| check(&row.check, &i)) {
        Ok(c) => {
            for (k, want) in &row.expect {
                let got = if k.starts_with('/') {
                    c.result.pointer(k).cloned().unwrap_or(Value::Null)
                } else {
                    c.result.get(k).cloned().unwrap_or(Value::Null)
                };
                if &got != want {
                    diff.push(json!({ "key": k, "expected": want, "actual": got }));
                }
            }
        }
        Err(e) => diff.push(json!({ "error": e.message })),
    }
    RowOutcome {
        name: row.name(),
        check: row.check.clone(),
        passed: diff.is_empty(),
        diff,
    }
}

/// Rows whose label or `label/id` equals `filter`.
pub fn select<'a>(docs: &'a [Document], filter: Option<&str>) -> Vec<&'a Row> {
    docs.iter()
        .flat_map(|d| &d.rows)
        .filter(|r| filter.is_none_or(|f| f == r.label || f == r.name()))
        .collect()
}
