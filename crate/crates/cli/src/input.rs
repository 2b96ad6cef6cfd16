//! Reading and writing sample pairs: either two one-column CSV files or a
//! JSON object `{"x": [...], "y": [...]}`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use exceedance_core::{Error as CoreError, Group, SamplePair};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize, Deserialize)]
struct SampleFile {
    x: Vec<f64>,
    y: Vec<f64>,
}

/// Where each observation came from, for error messages.
#[derive(Debug, Clone)]
enum Origin {
    Csv { path: String, lines: Vec<u64> },
    Json { path: String, key: &'static str },
}

impl Origin {
    fn describe(&self, index: usize) -> String {
        match self {
            Origin::Csv { path, lines } => format!("{path} line {}", lines[index]),
            Origin::Json { path, key } => format!("{path} {key}[{index}]"),
        }
    }
}

/// A sample pair together with the location of every value in its source.
#[derive(Debug, Clone)]
pub struct LoadedSample {
    pub pair: SamplePair,
    x_origin: Origin,
    y_origin: Origin,
}

impl LoadedSample {
    /// Turns a core tie error into one that names the rows holding the value.
    pub fn locate(&self, err: CoreError) -> CliError {
        match err {
            CoreError::Tie { value, .. } => {
                let mut places = Vec::new();
                for (data, origin) in [(self.pair.x(), &self.x_origin), (self.pair.y(), &self.y_origin)] {
                    for (idx, v) in data.iter().enumerate() {
                        if *v == value {
                            places.push(origin.describe(idx));
                        }
                    }
                }
                CliError::Tie(format!("value {value} is tied across samples at a threshold ({})", places.join(", ")))
            }
            other => other.into(),
        }
    }
}

fn read_column(path: &Path) -> CliResult<(Vec<f64>, Vec<u64>)> {
    let name = path.display().to_string();
    let file = File::open(path).map_err(|e| CliError::input(&name, e.to_string()))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let mut values = Vec::new();
    let mut lines = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(&name, e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(n as u64 + 1);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 1 {
            return Err(CliError::input(&name, format!("line {line}: expected one column, found {}", record.len())));
        }
        match record[0].parse::<f64>() {
            Ok(v) if v.is_finite() => {
                values.push(v);
                lines.push(line);
            }
            Ok(_) => return Err(CliError::input(&name, format!("line {line}: non-finite value {:?}", &record[0]))),
            // a non-numeric first row is a header
            Err(_) if n == 0 => {}
            Err(_) => return Err(CliError::input(&name, format!("line {line}: cannot parse {:?} as a number", &record[0]))),
        }
    }
    if values.is_empty() {
        return Err(CliError::input(&name, "no observations"));
    }
    Ok((values, lines))
}

pub fn read_csv_pair(x_path: &Path, y_path: &Path) -> CliResult<LoadedSample> {
    let (x, x_lines) = read_column(x_path)?;
    let (y, y_lines) = read_column(y_path)?;
    Ok(LoadedSample {
        pair: SamplePair::new(x, y)?,
        x_origin: Origin::Csv { path: x_path.display().to_string(), lines: x_lines },
        y_origin: Origin::Csv { path: y_path.display().to_string(), lines: y_lines },
    })
}

pub fn read_json_pair(path: &Path) -> CliResult<LoadedSample> {
    let name = path.display().to_string();
    let file = File::open(path).map_err(|e| CliError::input(&name, e.to_string()))?;
    let data: SampleFile =
        serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| CliError::input(&name, e.to_string()))?;
    for (key, values) in [("x", &data.x), ("y", &data.y)] {
        if values.is_empty() {
            return Err(CliError::input(&name, format!("{key:?} has no observations")));
        }
    }
    let pair = SamplePair::new(data.x, data.y).map_err(|e| match e {
        CoreError::NonFinite { group, index } => {
            let key = if group == Group::X { "x" } else { "y" };
            CliError::input(&name, format!("{key}[{index}] is not finite"))
        }
        other => other.into(),
    })?;
    Ok(LoadedSample {
        pair,
        x_origin: Origin::Json { path: name.clone(), key: "x" },
        y_origin: Origin::Json { path: name, key: "y" },
    })
}

/// Values are written in Rust's shortest round-trip form, so reading the
/// files back gives the identical sample.
pub fn write_csv_column(path: &Path, values: &[f64]) -> CliResult<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for v in values {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn sample_json(pair: &SamplePair) -> CliResult<String> {
    Ok(serde_json::to_string(&SampleFile { x: pair.x().to_vec(), y: pair.y().to_vec() })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn csv_round_trip_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let pair = SamplePair::new(vec![0.1, 1.0 / 3.0, 2e-300, 7.25], vec![5e10, -0.0, 0.30000000000000004]).unwrap();
        let (xp, yp) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
        write_csv_column(&xp, pair.x()).unwrap();
        write_csv_column(&yp, pair.y()).unwrap();
        assert_eq!(read_csv_pair(&xp, &yp).unwrap().pair, pair);

        let jp = dir.path().join("s.json");
        fs::write(&jp, sample_json(&pair).unwrap()).unwrap();
        assert_eq!(read_json_pair(&jp).unwrap().pair, pair);
    }

    #[test]
    fn header_and_comments_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let xp = dir.path().join("x.csv");
        let yp = dir.path().join("y.csv");
        fs::write(&xp, "hours\n# pilot\n1.5\n2.5\n").unwrap();
        fs::write(&yp, "3\n").unwrap();
        let s = read_csv_pair(&xp, &yp).unwrap();
        assert_eq!(s.pair.x(), &[1.5, 2.5]);
    }

    #[test]
    fn bad_rows_are_located() {
        let dir = tempfile::tempdir().unwrap();
        let xp = dir.path().join("x.csv");
        let yp = dir.path().join("y.csv");
        fs::write(&xp, "1\n2\nabc\n").unwrap();
        fs::write(&yp, "").unwrap();
        let err = read_csv_pair(&xp, &yp).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        fs::write(&xp, "1\n").unwrap();
        let err = read_csv_pair(&xp, &yp).unwrap_err();
        assert!(err.to_string().contains("y.csv"), "{err}");
        assert_eq!(err.exit_code(), 3);
    }
}
