//! Count tables: headered CSV, one observation per row, integer cells.
//!
//! ```text
//! # lines starting with '#' are ignored
//! a,b,c
//! 3,0,7
//! 1,2,2
//! ```
//!
//! A first row made only of integers is read as data and the table then has
//! no column names.

use std::io::{self, Write};

use thiserror::Error;

use crate::counts::CountVector;
use crate::estimate::Dataset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: row {row} has {found} columns, expected {expected}")]
    Ragged {
        line: u64,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("input contains no observations")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub column_names: Option<Vec<String>>,
    pub rows: Vec<CountVector>,
    /// Source line of each row, for error messages.
    pub lines: Vec<u64>,
}

impl CountTable {
    pub fn new(column_names: Option<Vec<String>>, rows: Vec<CountVector>) -> Self {
        let lines = (1..=rows.len() as u64).collect();
        Self {
            column_names,
            rows,
            lines,
        }
    }

    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut column_names = None;
        let mut rows = Vec::new();
        let mut lines = Vec::new();
        let mut width = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx as u64 + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cells: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if width.is_none() && cells.iter().any(|c| c.parse::<u64>().is_err()) {
                column_names = Some(cells.iter().map(|c| c.to_string()).collect::<Vec<_>>());
                width = Some(cells.len());
                continue;
            }
            let expected = *width.get_or_insert(cells.len());
            if cells.len() != expected {
                return Err(TableError::Ragged {
                    line,
                    row: rows.len() + 1,
                    expected,
                    found: cells.len(),
                });
            }
            let counts = cells
                .iter()
                .enumerate()
                .map(|(col, cell)| {
                    cell.parse::<u64>().map_err(|_| TableError::Parse {
                        line,
                        message: format!(
                            "column {}: '{cell}' is not a non-negative integer",
                            col + 1
                        ),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let counts = CountVector::new(counts).map_err(|e| TableError::Parse {
                line,
                message: e.to_string(),
            })?;
            rows.push(counts);
            lines.push(line);
        }
        if rows.is_empty() {
            return Err(TableError::Empty);
        }
        Ok(Self {
            column_names,
            rows,
            lines,
        })
    }

    pub fn categories(&self) -> usize {
        self.rows.first().map_or(0, CountVector::len)
    }

    pub fn to_dataset(&self) -> crate::error::Result<Dataset> {
        Dataset::new(self.rows.clone())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let k = self.categories();
        match &self.column_names {
            Some(names) => writeln!(out, "{}", names.join(","))?,
            None => {
                let names: Vec<String> = (1..=k).map(|i| format!("c{i}")).collect();
                writeln!(out, "{}", names.join(","))?
            }
        }
        for row in &self.rows {
            let cells: Vec<String> = row.counts().iter().map(u64::to_string).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

impl From<&Dataset> for CountTable {
    fn from(d: &Dataset) -> Self {
        CountTable::new(None, d.observations().to_vec())
    }
}
