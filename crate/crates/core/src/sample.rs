//! Observations of the exponential functional and their CSV representation.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CSV column header for sample files.
pub const SAMPLE_HEADER: &str = "a_infinity";

/// Positive observations `A_1, ..., A_n` of the exponential functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub values: Vec<f64>,
    pub label: String,
    pub seed: Option<u64>,
}

impl SampleSet {
    /// Validates that the set is nonempty and every value is positive and finite.
    ///
    /// Estimators additionally require at least two observations, see
    /// [`SampleSet::require_estimable`].
    pub fn new(values: Vec<f64>, label: impl Into<String>, seed: Option<u64>) -> Result<Self> {
        let set = Self {
            values,
            label: label.into(),
            seed,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidSamples("sample set is empty".into()));
        }
        if let Some((k, v)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidSamples(format!(
                "samples must be positive (value {v} at index {k})"
            )));
        }
        Ok(())
    }

    pub fn require_estimable(&self) -> Result<()> {
        self.validate()?;
        if self.values.len() < 2 {
            return Err(Error::InvalidSamples(format!(
                "at least two samples are required, got {}",
                self.values.len()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([SAMPLE_HEADER])?;
        for v in &self.values {
            w.write_record([v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Reads the first column of a CSV file with a header row. Blank lines are skipped.
    pub fn read_csv<R: Read>(reader: R, label: impl Into<String>) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut values = Vec::new();
        for (line, record) in r.records().enumerate() {
            let record = record?;
            let Some(field) = record.get(0) else { continue };
            if field.is_empty() {
                continue;
            }
            let v: f64 = field.parse().map_err(|_| {
                Error::InvalidSamples(format!("cannot parse '{field}' on data row {}", line + 1))
            })?;
            values.push(v);
        }
        Self::new(values, label, None)
    }

    pub fn read_csv_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(file, path.display().to_string())
    }
}
