//! Tabular reports and their CSV, JSON and plain-text renderings.

use std::fmt;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Empty,
}

impl Field {
    /// Inverse of the CSV cell encoding.
    fn parse_cell(s: &str) -> Field {
        if s.is_empty() {
            Field::Empty
        } else if let Ok(i) = s.parse::<i64>() {
            Field::Int(i)
        } else if let Ok(f) = s.parse::<f64>() {
            Field::Float(f)
        } else if let Ok(b) = s.parse::<bool>() {
            Field::Bool(b)
        } else {
            Field::Str(s.to_string())
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Field::Int(i) => json!(i),
            Field::Float(f) => json!(f),
            Field::Bool(b) => json!(b),
            Field::Str(s) => json!(s),
            Field::Empty => Value::Null,
        }
    }

    fn from_json(v: &Value) -> Result<Field, String> {
        Ok(match v {
            Value::Null => Field::Empty,
            Value::Bool(b) => Field::Bool(*b),
            Value::String(s) => Field::Str(s.clone()),
            Value::Number(n) => match n.as_i64() {
                Some(i) => Field::Int(i),
                None => Field::Float(n.as_f64().ok_or("unrepresentable number")?),
            },
            other => return Err(format!("unexpected JSON value {other}")),
        })
    }

    fn display(&self) -> String {
        match self {
            Field::Float(f) => format!("{f:.6}"),
            other => other.to_string(),
        }
    }
}

/// Cell text in CSV. Floats use the shortest representation that parses
/// back to the same value, with a decimal point or exponent.
impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Int(i) => write!(f, "{i}"),
            Field::Float(x) => write!(f, "{x:?}"),
            Field::Bool(b) => write!(f, "{b}"),
            Field::Str(s) => f.write_str(s),
            Field::Empty => Ok(()),
        }
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Int(v)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i64)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Str(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Str(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Report {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|f| f.to_string()))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns = r
            .headers()
            .map_err(|e| e.to_string())?
            .iter()
            .map(String::from)
            .collect();
        let mut report = Report {
            columns,
            rows: Vec::new(),
        };
        for rec in r.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            report
                .rows
                .push(rec.iter().map(Field::parse_cell).collect());
        }
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Field::to_json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let columns: Vec<String> = doc["columns"]
            .as_array()
            .ok_or("missing columns")?
            .iter()
            .map(|c| {
                c.as_str()
                    .map(String::from)
                    .ok_or("column names must be strings")
            })
            .collect::<Result<_, _>>()?;
        let mut report = Report {
            columns,
            rows: Vec::new(),
        };
        for row in doc["rows"].as_array().ok_or("missing rows")? {
            let cells = report
                .columns
                .iter()
                .map(|c| Field::from_json(row.get(c).unwrap_or(&Value::Null)))
                .collect::<Result<_, _>>()?;
            report.rows.push(cells);
        }
        Ok(report)
    }

    /// Space-aligned table for terminals; numbers right-aligned.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Field::display).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([c.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let numeric: Vec<bool> = (0..self.columns.len())
            .map(|i| {
                self.rows
                    .iter()
                    .all(|r| matches!(r[i], Field::Int(_) | Field::Float(_) | Field::Empty))
            })
            .collect();
        let line = |items: &[String]| {
            let parts: Vec<String> = items
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    if numeric[i] {
                        format!("{s:>w$}", w = widths[i])
                    } else {
                        format!("{s:<w$}", w = widths[i])
                    }
                })
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.columns);
        for r in &cells {
            out += &line(r);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> Report {
        let mut r = Report::new(["q", "mu", "ok", "note", "gap"]);
        r.push(vec![
            2u64.into(),
            (-0.25).into(),
            true.into(),
            "a, \"b\"".into(),
            Field::Empty,
        ]);
        r.push(vec![
            3u64.into(),
            5.0.into(),
            false.into(),
            "".into(),
            1e-300.into(),
        ]);
        r
    }

    #[test]
    fn csv_shape() {
        let csv = sample().to_csv();
        assert!(csv.starts_with("q,mu,ok,note,gap\n2,-0.25,true,\"a, \"\"b\"\"\",\n"));
    }

    #[test]
    fn json_has_rows_array() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 2);
        assert_eq!(v["rows"][0]["q"], json!(2));
        assert_eq!(v["rows"][1]["mu"], json!(5.0));
    }

    #[test]
    fn text_alignment() {
        let t = sample().to_text();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("2  -0.250000"));
    }

    fn field() -> impl Strategy<Value = Field> {
        prop_oneof![
            any::<i64>().prop_map(Field::Int),
            prop::num::f64::NORMAL.prop_map(Field::Float),
            (-1e6f64..1e6).prop_map(Field::Float),
            any::<bool>().prop_map(Field::Bool),
            "[a-z][a-z ,\"]{0,8}"
                .prop_filter("not a literal", |s| s.parse::<f64>().is_err()
                    && s.parse::<bool>().is_err())
                .prop_map(Field::Str),
            Just(Field::Empty),
        ]
    }

    proptest! {
        #[test]
        fn round_trips(rows in prop::collection::vec(prop::collection::vec(field(), 3), 0..6)) {
            let mut r = Report::new(["a", "b", "c"]);
            for row in rows {
                r.push(row);
            }
            prop_assert_eq!(Report::from_csv(&r.to_csv()).unwrap(), r.clone());
            prop_assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        }
    }
}
