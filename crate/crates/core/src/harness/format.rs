//! CSV and JSON rendering of result tables.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Input echoed exactly as the user wrote it.
    Echo(String),
    Text(String),
    Num(f64),
    Int(u64),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// 17 significant digits, or a fixed number of decimals when given.
pub fn format_number(v: f64, decimals: Option<usize>) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if let Some(d) = decimals {
        return format!("{v:.d$}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp10 = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp10) {
        let d = (16 - exp10).max(0) as usize;
        format!("{v:.d$}")
    } else {
        format!("{v:.16e}")
    }
}

fn csv_field(cell: &Cell, decimals: Option<usize>) -> String {
    match cell {
        Cell::Echo(s) | Cell::Text(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        }
        Cell::Num(v) => format_number(*v, decimals),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Missing => String::new(),
    }
}

pub fn to_csv(table: &Table, decimals: Option<usize>) -> String {
    let mut out = table.header.join(",");
    out.push('\n');
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(|c| csv_field(c, decimals)).collect();
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}

fn json_number(v: f64, decimals: Option<usize>) -> Value {
    let v = match decimals {
        Some(_) => format_number(v, decimals).parse().unwrap_or(v),
        None => v,
    };
    Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn json_cell(cell: &Cell, decimals: Option<usize>) -> Value {
    match cell {
        Cell::Echo(s) => s
            .parse::<f64>()
            .ok()
            .and_then(Number::from_f64)
            .map_or_else(|| Value::String(s.clone()), Value::Number),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Num(v) => json_number(*v, decimals),
        Cell::Int(v) => Value::from(*v),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Missing => Value::Null,
    }
}

pub fn rows_to_json(table: &Table, decimals: Option<usize>) -> Value {
    Value::Array(
        table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = table
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| (h.to_string(), json_cell(c, decimals)))
                    .collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

/// Renders `table`; `meta` entries become top-level JSON fields next to `rows`.
pub fn render(table: &Table, format: Format, decimals: Option<usize>, meta: Option<Map<String, Value>>) -> String {
    match format {
        Format::Csv => to_csv(table, decimals),
        Format::Json => {
            let rows = rows_to_json(table, decimals);
            let value = match meta {
                Some(mut m) => {
                    m.insert("rows".into(), rows);
                    Value::Object(m)
                }
                None => rows,
            };
            let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(format_number(0.084949518, Some(6)), "0.084950");
        assert_eq!(format_number(1.0, None), "1.0000000000000000");
        let v = std::f64::consts::PI;
        assert_eq!(format_number(v, None).parse::<f64>().unwrap(), v);
        let tiny = 1.234e-30;
        assert_eq!(format_number(tiny, None).parse::<f64>().unwrap(), tiny);
        let s = format_number(5.053670236, None);
        assert_eq!(s.len(), 18);
        assert_eq!(format_number(f64::INFINITY, None), "inf");
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["x", "value", "note", "missing"]);
        t.push(vec![Cell::Echo("0.50".into()), 0.25.into(), "a,b".into(), Cell::Missing]);
        assert_eq!(to_csv(&t, Some(3)), "x,value,note,missing\n0.50,0.250,\"a,b\",\n");
        let j = rows_to_json(&t, None);
        assert_eq!(j[0]["x"], Value::from(0.5));
        assert_eq!(j[0]["missing"], Value::Null);
        let mut meta = Map::new();
        meta.insert("n".into(), Value::from(3));
        let out = render(&t, Format::Json, None, Some(meta));
        let back: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(back["n"], Value::from(3));
        assert_eq!(back["rows"][0]["note"], Value::from("a,b"));
    }
}
