use crate::error::{Error, Result};
use std::io::{Read, Write};

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(t) => parse_number(t),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Shortest representation that parses back to the same `f64`; infinities
/// and NaN as `inf`, `-inf`, `nan`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

pub fn parse_number(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        t => t.parse().ok().filter(|v: &f64| v.is_finite()),
    }
}

/// Column-named table; CSV is its only serialization.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.iter().any(|c| c == name)
    }

    /// Numeric view of a column; text cells that are not numbers read as NaN.
    pub fn numeric(&self, name: &str) -> Result<Vec<f64>> {
        let k = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[k].as_f64().unwrap_or(f64::NAN)).collect())
    }

    /// The cell as printed in CSV.
    pub fn printed(&self, row: usize, name: &str) -> Result<String> {
        let k = self.column_index(name)?;
        Ok(match &self.rows[row][k] {
            Cell::Num(v) => format_number(*v),
            Cell::Text(t) => t.clone(),
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(v) => format_number(*v),
                Cell::Text(t) => t.clone(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory does not fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    /// Reads a header row plus records. Cells that parse as numbers
    /// (including `inf`/`nan`) become numeric.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut table = Table {
            columns,
            rows: Vec::new(),
        };
        for record in r.records() {
            let record = record?;
            table.rows.push(
                record
                    .iter()
                    .map(|s| match parse_number(s) {
                        Some(v) => Cell::Num(v),
                        None => Cell::Text(s.to_string()),
                    })
                    .collect(),
            );
        }
        Ok(table)
    }
}
