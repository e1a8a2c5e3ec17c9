use std::path::Path;

use crate::error::StepError;
use crate::functions::StepFunction;

/// Reads `breakpoint,value` rows; each breakpoint is the right end of a piece.
pub fn step_from_csv(text: &str) -> Result<StepFunction, StepError> {
    let rows = read_pairs(text, "breakpoint", "value")?;
    StepFunction::from_right_ends(&rows)
}

pub fn step_from_path(path: &Path) -> Result<StepFunction, StepError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| StepError::Csv { line: 0, message: e.to_string() })?;
    step_from_csv(&text)
}

/// Writes with shortest round-trip float formatting, so reading back is bit-exact.
pub fn step_to_csv(f: &StepFunction) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["breakpoint", "value"]).expect("in-memory write");
    for (_, b, v) in f.pieces() {
        w.write_record([b.to_string(), v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Parses a two-column numeric CSV with the given header names.
pub fn read_pairs(text: &str, first: &str, second: &str) -> Result<Vec<(f64, f64)>, StepError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| StepError::Csv { line: 1, message: e.to_string() })?;
    if header.len() != 2 || &header[0] != first || &header[1] != second {
        return Err(StepError::Csv { line: 1, message: format!("expected header `{first},{second}`") });
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| StepError::Csv { line, message: e.to_string() })?;
        if rec.len() != 2 {
            return Err(StepError::Csv { line, message: "expected two fields".into() });
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| StepError::Csv { line, message: format!("`{s}` is not a number") })
        };
        out.push((parse(&rec[0])?, parse(&rec[1])?));
    }
    Ok(out)
}
