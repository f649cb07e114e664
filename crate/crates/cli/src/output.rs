use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::validate::ValidationReport;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// File suffix; the main dataset has none.
    pub name: Option<&'static str>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn new(name: Option<&'static str>, header: &[&str]) -> Self {
        Dataset {
            name,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_header(name: Option<&'static str>, header: Vec<String>) -> Self {
        Dataset {
            name,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }

    pub fn path(&self, prefix: &Path) -> PathBuf {
        let base = prefix.as_os_str().to_string_lossy();
        PathBuf::from(match self.name {
            Some(n) => format!("{base}.{n}.csv"),
            None => format!("{base}.csv"),
        })
    }
}

/// Everything a command produced, ready to be written.
#[derive(Debug, Default)]
pub struct Artifact {
    pub datasets: Vec<Dataset>,
    pub flags: BTreeMap<String, serde_json::Value>,
    pub validation: Option<ValidationReport>,
}

#[derive(Serialize)]
struct DatasetInfo {
    file: String,
    columns: Vec<String>,
    rows: usize,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    library: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    datasets: Vec<DatasetInfo>,
    flags: &'a BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    validation: Option<&'a ValidationReport>,
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Serializes all datasets before touching the disk, so a failure leaves
/// no partial output behind.
pub fn write_artifact(cfg: &RunConfig, art: &Artifact) -> Result<Vec<PathBuf>, CliError> {
    let out_err = |path: &Path, e: &dyn std::fmt::Display| CliError::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut files = Vec::new();
    let mut infos = Vec::new();
    for d in &art.datasets {
        let path = d.path(&cfg.out);
        let bytes = d.to_csv().map_err(|e| out_err(&path, &e))?;
        infos.push(DatasetInfo {
            file: file_name(&path),
            columns: d.header.clone(),
            rows: d.rows.len(),
        });
        files.push((path, bytes));
    }
    let sidecar = Sidecar {
        library: "hopfield",
        version: hopfield::VERSION,
        command: cfg.command.name(),
        config: cfg,
        datasets: infos,
        flags: &art.flags,
        validation: art.validation.as_ref(),
    };
    let json_path = PathBuf::from(format!("{}.json", cfg.out.as_os_str().to_string_lossy()));
    let mut json = serde_json::to_vec_pretty(&sidecar).map_err(|e| out_err(&json_path, &e))?;
    json.push(b'\n');
    files.push((json_path, json));

    if let Some(dir) = cfg.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| out_err(dir, &e))?;
    }
    for (path, bytes) in &files {
        fs::write(path, bytes).map_err(|e| out_err(path, &e))?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(0.7), "6.9999999999999996e-1");
        assert_eq!(format_number(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut d = Dataset::new(None, &["g/omega_c", "phase", "omega_y/omega_c"]);
        d.push(vec![0.5.into(), "critical".into(), Cell::Empty]);
        let s = String::from_utf8(d.to_csv().unwrap()).unwrap();
        assert_eq!(s, "g/omega_c,phase,omega_y/omega_c\n5.0000000000000000e-1,critical,\n");
        assert_eq!(d.path(Path::new("out/run")), PathBuf::from("out/run.csv"));
    }
}
