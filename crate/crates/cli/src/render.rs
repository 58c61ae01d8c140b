use serde_json::Value;

use thicksum::io::Report;

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| x.is_number()) && !items.is_empty() => {
            let parts: Vec<String> = items.iter().map(number).collect();
            out.push((prefix.to_string(), format!("[{}]", parts.join(", "))));
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(_) => out.push((prefix.to_string(), "[]".into())),
        Value::Number(_) => out.push((prefix.to_string(), number(v))),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), "-".into())),
    }
}

fn number(v: &Value) -> String {
    if let Some(i) = v.as_u64() {
        return i.to_string();
    }
    if let Some(i) = v.as_i64() {
        return i.to_string();
    }
    let x = v.as_f64().unwrap_or(f64::NAN);
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&mag) {
        return format!("{x:.14e}");
    }
    // 15 significant digits
    format!("{x:.*}", (14 - mag) as usize)
}

/// Aligned `key  value` lines; optionally followed by the JSON report.
pub fn text(report: &Report, with_json: bool) -> String {
    let mut rows = vec![
        ("command".to_string(), report.command.join(" ")),
        (
            "status".to_string(),
            format!("{:?}", report.status).to_lowercase(),
        ),
        ("config.seed".to_string(), report.config.seed.to_string()),
    ];
    flatten("", &report.results, &mut rows);
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    if with_json {
        s.push('\n');
        s.push_str(&report.to_json());
        s.push('\n');
    }
    s
}
