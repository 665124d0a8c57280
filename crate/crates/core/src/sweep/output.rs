use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Map, Value};

use super::{method_name, parse_method, Format, Quantity, SweepConfig, SweepResult};
use crate::error::{Error, Result};
use crate::numfmt::format_sig12;

/// Columns and rows read back from an emitted file.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn config_json(c: &SweepConfig) -> Value {
    json!({
        "quantity": c.quantity.name(),
        "bz_min": c.bz_min,
        "bz_max": c.bz_max,
        "steps": c.steps,
        "bx": c.bx,
        "eps": c.eps,
        "tau": c.tau,
        "method": method_name(c.method),
        "trotter_steps": c.trotter_steps,
        "n": c.n,
        "compare": c.compare,
    })
}

fn number(x: f64) -> Value {
    // rows are pre-rounded; -0 collapses to 0 as in the CSV form
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Renders the result. CSV carries columns and rows only; JSON is a single
/// object with sorted keys `columns`, `config`, `metadata`, `rows`.
pub fn emit(r: &SweepResult, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = r.columns.join(",");
            out.push('\n');
            for row in &r.rows {
                let cells: Vec<String> = row.iter().map(|&x| format_sig12(x)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("columns".into(), json!(r.columns));
            obj.insert("config".into(), config_json(&r.config));
            obj.insert("metadata".into(), r.metadata.clone().unwrap_or(Value::Null));
            let rows = r.rows.iter().map(|row| Value::Array(row.iter().map(|&x| number(x)).collect()));
            obj.insert("rows".into(), Value::Array(rows.collect()));
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
            s.push('\n');
            s
        }
    }
}

/// Emits in the configured format to the configured path, or to standard
/// output when no path is set.
pub fn write_result(r: &SweepResult) -> Result<()> {
    let text = emit(r, r.config.format);
    match &r.config.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io { path: path.clone(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines {
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.parse().map_err(|_| perr(i + 1, format!("bad number {c:?}"))))
            .collect::<Result<_>>()?;
        if row.len() != columns.len() {
            return Err(perr(i + 1, format!("expected {} fields, got {}", columns.len(), row.len())));
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(0, format!("missing key {key:?}")))
}

fn f64_field(obj: &Map<String, Value>, key: &str) -> Result<f64> {
    field(obj, key)?.as_f64().ok_or_else(|| perr(0, format!("{key} is not a number")))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| perr(0, format!("{key} is not an unsigned integer")))
}

fn str_field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    field(obj, key)?.as_str().ok_or_else(|| perr(0, format!("{key} is not a string")))
}

/// Reads a JSON payload back. Output routing (`out`, `parallel`) is not part
/// of the payload and comes back at its defaults.
pub fn parse_json(text: &str) -> Result<SweepResult> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr(e.line(), e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| perr(1, "top level is not an object"))?;
    let cfg = field(obj, "config")?.as_object().ok_or_else(|| perr(0, "config is not an object"))?;
    let quantity: Quantity = str_field(cfg, "quantity")?.parse()?;
    let metadata = match field(obj, "metadata")? {
        Value::Null => None,
        m => Some(m.clone()),
    };
    let config = SweepConfig {
        bz_min: f64_field(cfg, "bz_min")?,
        bz_max: f64_field(cfg, "bz_max")?,
        steps: usize_field(cfg, "steps")?,
        bx: f64_field(cfg, "bx")?,
        eps: f64_field(cfg, "eps")?,
        tau: f64_field(cfg, "tau")?,
        method: parse_method(str_field(cfg, "method")?)?,
        trotter_steps: usize_field(cfg, "trotter_steps")?,
        n: usize_field(cfg, "n")?,
        compare: field(cfg, "compare")?.as_bool().ok_or_else(|| perr(0, "compare is not a bool"))?,
        format: Format::Json,
        metadata: metadata.is_some(),
        ..SweepConfig::new(quantity)
    };
    let columns = field(obj, "columns")?
        .as_array()
        .ok_or_else(|| perr(0, "columns is not an array"))?
        .iter()
        .map(|c| c.as_str().map(str::to_string).ok_or_else(|| perr(0, "column name is not a string")))
        .collect::<Result<_>>()?;
    let rows = field(obj, "rows")?
        .as_array()
        .ok_or_else(|| perr(0, "rows is not an array"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| perr(0, "row is not an array"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| perr(0, "row entry is not a number")))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult { config, columns, rows, metadata })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::run;

    fn spectrum_at_zero() -> SweepResult {
        let c = SweepConfig { bz_min: 0.0, bz_max: 0.0, steps: 1, metadata: false, ..SweepConfig::new(Quantity::Spectrum) };
        run(&c).unwrap()
    }

    #[test]
    fn csv_spectrum_example() {
        assert_eq!(emit(&spectrum_at_zero(), Format::Csv), "bz,e1,e2,e3,e4\n0,-1,-1,1,1\n");
    }

    #[test]
    fn json_keys_sorted_and_null_metadata() {
        let text = emit(&spectrum_at_zero(), Format::Json);
        let keys: Vec<usize> = ["\"columns\"", "\"config\"", "\"metadata\"", "\"rows\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(text.contains("\"metadata\": null"));
    }

    #[test]
    fn round_trips() {
        let r = spectrum_at_zero();
        let t = parse_csv(&emit(&r, Format::Csv)).unwrap();
        assert_eq!((t.columns, t.rows), (r.columns.clone(), r.rows.clone()));
        let back = parse_json(&emit(&r, Format::Json)).unwrap();
        assert_eq!(back, SweepResult { config: SweepConfig { format: Format::Json, ..r.config.clone() }, ..r });
    }

    #[test]
    fn csv_parse_errors() {
        assert!(matches!(parse_csv("bz,L\n0,x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_csv("bz,L\n0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let mut r = spectrum_at_zero();
        r.config.out = Some(PathBuf::from("/nonexistent-dir/x.csv"));
        assert!(matches!(write_result(&r), Err(Error::Io { .. })));
    }
}
