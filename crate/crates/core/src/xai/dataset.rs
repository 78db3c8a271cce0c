//! Delimited-text dataset files: a header row of feature names with a final
//! `label` column, then one sample per row.

use super::ScadaSample;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DatasetError {
    #[error("dataset parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> DatasetError {
    DatasetError::Parse { line, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub samples: Vec<ScadaSample>,
}

impl Dataset {
    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.feature_names.join(","));
        out.push_str(",label\n");
        for sample in &self.samples {
            for (i, v) in sample.values.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format!("{v}"));
            }
            match sample.label {
                Some(label) => out.push_str(&format!(",{label}\n")),
                None => out.push_str(",\n"),
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, DatasetError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty dataset"))?;
        let mut columns: Vec<&str> = header.split(',').map(str::trim).collect();
        match columns.pop() {
            Some("label") => {}
            _ => return Err(parse_err(1, "header must end with a `label` column")),
        }
        if columns.is_empty() {
            return Err(parse_err(1, "header declares no features"));
        }
        let feature_names: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
        let mut samples = Vec::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if cells.len() != feature_names.len() + 1 {
                return Err(parse_err(
                    line_no,
                    format!("expected {} columns, found {}", feature_names.len() + 1, cells.len()),
                ));
            }
            let mut values = Vec::with_capacity(feature_names.len());
            for (c, cell) in cells[..feature_names.len()].iter().enumerate() {
                let value: f64 = cell.parse().map_err(|_| {
                    parse_err(line_no, format!("column {} is not a number: `{cell}`", c + 1))
                })?;
                if !value.is_finite() {
                    return Err(parse_err(line_no, format!("column {} is not finite", c + 1)));
                }
                values.push(value);
            }
            let label_cell = cells[feature_names.len()];
            let label = if label_cell.is_empty() {
                None
            } else {
                Some(label_cell.parse().map_err(|_| {
                    parse_err(line_no, format!("label is not an integer: `{label_cell}`"))
                })?)
            };
            samples.push(ScadaSample { values, label });
        }
        Ok(Dataset { feature_names, samples })
    }
}
