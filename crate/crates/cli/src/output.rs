use std::io::Write;

use anyhow::Result;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `{rows, cols, entries, report}` with entries row-major as `[re, im]`.
#[derive(Serialize)]
pub struct MatrixReport<R: Serialize> {
    pub rows: Vec<Vec<i32>>,
    pub cols: Vec<Vec<i32>>,
    pub entries: Vec<Vec<[f64; 2]>>,
    pub report: R,
}

impl<R: Serialize> MatrixReport<R> {
    pub fn new(rows: Vec<Vec<i32>>, cols: Vec<Vec<i32>>, m: &DMatrix<Complex64>, report: R) -> Self {
        let entries = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect()).collect();
        MatrixReport { rows, cols, entries, report }
    }
}

pub fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

pub fn point(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|&c| pair(c)).collect()
}

pub fn emit<T: Serialize>(value: &T, format: Format) -> Result<()> {
    let value = serde_json::to_value(value)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &value)?;
            writeln!(out)?;
        }
        Format::Csv => write_csv(&mut out, &value)?,
    }
    Ok(())
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Arrays of objects become one table; a matrix report becomes
/// `row,col,re,im` records after its `key,value` report lines; any other
/// object is written as `key,value` lines.
fn write_csv<W: Write>(out: &mut W, value: &Value) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    match value {
        Value::Array(items) => {
            let header: Vec<String> = match items.first() {
                Some(Value::Object(o)) => o.keys().cloned().collect(),
                _ => vec!["value".into()],
            };
            w.write_record(&header)?;
            for item in items {
                let row: Vec<String> = match item {
                    Value::Object(o) => header.iter().map(|k| cell(o.get(k).unwrap_or(&Value::Null))).collect(),
                    other => vec![cell(other)],
                };
                w.write_record(&row)?;
            }
        }
        Value::Object(o) if o.contains_key("entries") && o.contains_key("rows") => {
            if let Some(Value::Object(report)) = o.get("report") {
                for (k, v) in report {
                    w.write_record([k.as_str(), &cell(v)])?;
                }
            }
            w.write_record(["row", "col", "re", "im"])?;
            let labels = |key: &str| -> Vec<String> { o[key].as_array().map(|a| a.iter().map(cell).collect()).unwrap_or_default() };
            let (rows, cols) = (labels("rows"), labels("cols"));
            if let Some(Value::Array(entries)) = o.get("entries") {
                for (i, row) in entries.iter().enumerate() {
                    for (j, e) in row.as_array().into_iter().flatten().enumerate() {
                        let (re, im) = (cell(&e[0]), cell(&e[1]));
                        w.write_record([rows[i].as_str(), cols[j].as_str(), &re, &im])?;
                    }
                }
            }
        }
        Value::Object(o) => {
            w.write_record(["key", "value"])?;
            for (k, v) in o {
                w.write_record([k.as_str(), &cell(v)])?;
            }
        }
        other => w.write_record([cell(other)])?,
    }
    w.flush()?;
    Ok(())
}
