//! `--format table`: one `path  value` line per scalar of the payload.

use serde_json::Value;

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Vectors print as `(a,b)`, lists of vectors as `{(a,b), (c,d)}`.
fn compact(v: &Value) -> Option<String> {
    let items = v.as_array()?;
    if items.is_empty() {
        return Some("[]".into());
    }
    if items.iter().all(is_scalar) {
        return Some(format!(
            "({})",
            items.iter().map(scalar).collect::<Vec<_>>().join(",")
        ));
    }
    let inner: Option<Vec<String>> = items
        .iter()
        .map(|x| {
            x.as_array()
                .filter(|a| a.iter().all(is_scalar))
                .map(|_| compact(x).unwrap())
        })
        .collect();
    inner.map(|xs| format!("{{{}}}", xs.join(", ")))
}

fn walk(path: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    if let Some(s) = compact(v) {
        rows.push((path.to_string(), s));
        return;
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                walk(&p, x, rows);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(&format!("{path}[{i}]"), x, rows);
            }
        }
        other => rows.push((path.to_string(), scalar(other))),
    }
}

pub fn render(v: &Value) -> String {
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, x)| format!("{k:<width$}  {x}\n"))
        .collect()
}

/// Fixed columns for corpus runs.
pub fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i].len())
                .chain([header[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        let s: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", s.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
