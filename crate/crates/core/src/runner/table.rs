use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use crate::{Error, Result};

/// A numeric CSV file: header plus rows of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut r = csv::Reader::from_reader(file);
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|v| {
                    v.parse::<f64>().map_err(|_| {
                        Error::Format(format!(
                            "{}: row {}: '{v}' is not a number",
                            path.display(),
                            i + 1
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Table { columns, rows })
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Like [`Table::column`] but with a named error for a missing column.
    pub fn require(&self, name: &str, source: &Path) -> Result<Vec<f64>> {
        self.column(name)
            .ok_or_else(|| Error::Format(format!("{}: missing column '{name}'", source.display())))
    }
}

/// Formats a value; the first `integer_columns` columns are written as
/// integers, the rest in shortest round-trip exponent form.
pub(crate) fn format_row(row: &[f64], integer_columns: usize) -> Vec<String> {
    row.iter()
        .enumerate()
        .map(|(i, v)| {
            if i < integer_columns {
                format!("{}", *v as u64)
            } else {
                format!("{v:e}")
            }
        })
        .collect()
}

pub(crate) type CsvOut = csv::Writer<BufWriter<File>>;

pub(crate) fn create_csv(path: &Path, header: &[String]) -> Result<CsvOut> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(header)?;
    Ok(w)
}

pub(crate) fn flush(w: &mut CsvOut, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}
