use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Column-oriented CSV table with `xi` in the first column.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<String>,
    columns: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(xi: &[f64]) -> Self {
        Self { header: vec!["xi".into()], columns: vec![xi.iter().copied().map(Some).collect()] }
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.push_sparse(name, values.into_iter().map(Some).collect());
    }

    /// A column with empty cells where the value is undefined.
    pub fn push_sparse(&mut self, name: impl Into<String>, values: Vec<Option<f64>>) {
        assert_eq!(values.len(), self.columns[0].len(), "column length");
        self.header.push(name.into());
        self.columns.push(values);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.header.iter().position(|h| h == name).map(|i| self.columns[i].as_slice())
    }

    /// Fails on the first non-finite cell so that NaN never reaches a file.
    fn check_finite(&self) -> CliResult<()> {
        for (name, col) in self.header.iter().zip(&self.columns) {
            if let Some(row) = col.iter().position(|v| v.is_some_and(|x| !x.is_finite())) {
                return Err(CliError::Numerical(symdecon::DeconError::Range(format!(
                    "non-finite value in column `{name}` at row {row}"
                ))));
            }
        }
        Ok(())
    }

    pub fn write_to<W: Write>(&self, out: W) -> CliResult<()> {
        self.check_finite()?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in 0..self.columns[0].len() {
            w.write_record(self.columns.iter().map(|c| c[r].map(format_number).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes to `path`, or to standard output when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> CliResult<()> {
        match path {
            Some(p) => {
                let f = std::fs::File::create(p)
                    .map_err(|e| CliError::Input(format!("cannot create {}: {e}", p.display())))?;
                self.write_to(std::io::BufWriter::new(f))
            }
            None => self.write_to(std::io::stdout().lock()),
        }
    }
}

/// Shortest round-trip representation; scientific notation outside
/// `[1e-4, 1e15)` so tiny values stay short.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
