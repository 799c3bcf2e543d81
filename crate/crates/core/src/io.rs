//! File formats for trajectories and systems.
//!
//! Trajectory CSV: one row per time step under the header `t,u1..um,y1..yp`.
//! Trajectory JSON: `{"m","p","T","u","y"}` with `u` and `y` stored
//! row-major, one row per signal. System JSON: `{"n","m","p","A","B","C","D"}`,
//! row-major.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{mat_from_rows, mat_to_rows, Mat};
use crate::system::IsoSystem;
use crate::trajectory::IOTrajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Json,
}

impl DataFormat {
    /// Guess from the file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> DataFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => DataFormat::Json,
            _ => DataFormat::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TrajectoryJson {
    m: usize,
    p: usize,
    #[serde(rename = "T")]
    t: usize,
    u: Vec<Vec<f64>>,
    y: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    n: usize,
    m: usize,
    p: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    d: Vec<Vec<f64>>,
}

/// Raw signal columns read from a CSV or JSON file.
struct Signals {
    u: Mat,
    y: Option<Mat>,
}

fn signal_rows(rows: Vec<Vec<f64>>, count: usize, t: usize, name: &str) -> Result<Mat> {
    if rows.len() != count {
        return Err(Error::InvalidInput(format!(
            "\"{name}\" has {} rows, header says {count}",
            rows.len()
        )));
    }
    mat_from_rows(&rows, t).map_err(|_| {
        Error::InvalidInput(format!("every row of \"{name}\" must have T = {t} entries"))
    })
}

fn read_csv_signals<R: Read>(reader: R) -> Result<Signals> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    let mut u_cols = Vec::new();
    let mut y_cols = Vec::new();
    for (i, name) in header.iter().enumerate() {
        let lower = name.to_ascii_lowercase();
        if lower == "t" {
            continue;
        }
        let (kind, idx) = lower.split_at(1.min(lower.len()));
        match (kind, idx.parse::<usize>()) {
            ("u", Ok(k)) if k >= 1 => u_cols.push((k, i)),
            ("y", Ok(k)) if k >= 1 => y_cols.push((k, i)),
            _ => return Err(Error::Format(format!("unexpected CSV column \"{name}\""))),
        }
    }
    u_cols.sort_unstable();
    y_cols.sort_unstable();
    for (cols, kind) in [(&u_cols, "u"), (&y_cols, "y")] {
        if cols.iter().enumerate().any(|(j, &(k, _))| k != j + 1) {
            return Err(Error::Format(format!("{kind} columns must be numbered 1..")));
        }
    }
    if u_cols.is_empty() {
        return Err(Error::Format("no input columns (u1..um)".into()));
    }

    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("");
            s.parse::<f64>()
                .map_err(|_| Error::Format(format!("cannot parse \"{s}\" as a number")))
        };
        let u: Vec<f64> = u_cols.iter().map(|&(_, i)| parse(i)).collect::<Result<_>>()?;
        let y: Vec<f64> = y_cols.iter().map(|&(_, i)| parse(i)).collect::<Result<_>>()?;
        records.push((u, y));
    }
    let t = records.len();
    let u = Mat::from_fn(u_cols.len(), t, |i, j| records[j].0[i]);
    let y = (!y_cols.is_empty()).then(|| Mat::from_fn(y_cols.len(), t, |i, j| records[j].1[i]));
    Ok(Signals { u, y })
}

fn read_json_signals<R: Read>(reader: R) -> Result<Signals> {
    let value: serde_json::Value = serde_json::from_reader(reader)?;
    let get_usize = |key: &str| -> Result<usize> {
        value
            .get(key)
            .and_then(|v| v.as_u64())
            .map(|v| v as usize)
            .ok_or_else(|| Error::Format(format!("missing or invalid \"{key}\"")))
    };
    let get_rows = |key: &str| -> Result<Option<Vec<Vec<f64>>>> {
        match value.get(key) {
            None => Ok(None),
            Some(v) => Ok(Some(serde_json::from_value(v.clone())?)),
        }
    };
    let (m, t) = (get_usize("m")?, get_usize("T")?);
    let u_rows = get_rows("u")?.ok_or_else(|| Error::Format("missing \"u\"".into()))?;
    let u = signal_rows(u_rows, m, t, "u")?;
    let y = match get_rows("y")? {
        Some(rows) => Some(signal_rows(rows, get_usize("p")?, t, "y")?),
        None => None,
    };
    Ok(Signals { u, y })
}

fn read_signals(path: &Path, format: DataFormat) -> Result<Signals> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        DataFormat::Csv => read_csv_signals(reader),
        DataFormat::Json => read_json_signals(reader),
    }
}

pub fn load_trajectory(path: &Path, format: DataFormat) -> Result<IOTrajectory> {
    let s = read_signals(path, format)?;
    let y = s
        .y
        .ok_or_else(|| Error::Format("no output columns (y1..yp)".into()))?;
    IOTrajectory::new(s.u, y)
}

/// Input signal only; any output columns in the file are ignored.
pub fn load_input(path: &Path, format: DataFormat) -> Result<Mat> {
    Ok(read_signals(path, format)?.u)
}

/// Write `u` and `y` without the trajectory validation, so that for instance
/// all-zero simulations can be stored.
pub fn write_signals<W: Write>(mut w: W, u: &Mat, y: &Mat, format: DataFormat) -> Result<()> {
    if u.ncols() != y.ncols() {
        return Err(Error::InvalidInput(format!(
            "u has {} samples, y has {}",
            u.ncols(),
            y.ncols()
        )));
    }
    match format {
        DataFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(w);
            let mut header = vec!["t".to_string()];
            header.extend((1..=u.nrows()).map(|i| format!("u{i}")));
            header.extend((1..=y.nrows()).map(|i| format!("y{i}")));
            wtr.write_record(&header)?;
            for t in 0..u.ncols() {
                let mut row = vec![t.to_string()];
                row.extend(u.column(t).iter().map(|v| v.to_string()));
                row.extend(y.column(t).iter().map(|v| v.to_string()));
                wtr.write_record(&row)?;
            }
            wtr.flush()?;
        }
        DataFormat::Json => {
            let doc = TrajectoryJson {
                m: u.nrows(),
                p: y.nrows(),
                t: u.ncols(),
                u: mat_to_rows(u),
                y: mat_to_rows(y),
            };
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn save_trajectory(traj: &IOTrajectory, path: &Path, format: DataFormat) -> Result<()> {
    let f = File::create(path)?;
    write_signals(f, traj.u(), traj.y(), format)
}

pub fn system_to_json(sys: &IsoSystem) -> serde_json::Value {
    let doc = SystemJson {
        n: sys.n(),
        m: sys.m(),
        p: sys.p(),
        a: mat_to_rows(sys.a()),
        b: mat_to_rows(sys.b()),
        c: mat_to_rows(sys.c()),
        d: mat_to_rows(sys.d()),
    };
    serde_json::to_value(doc).expect("plain numbers serialize")
}

pub fn system_from_json(value: serde_json::Value) -> Result<IsoSystem> {
    let doc: SystemJson = serde_json::from_value(value)?;
    let block = |rows: &[Vec<f64>], r: usize, c: usize, name: &str| -> Result<Mat> {
        if rows.len() != r {
            return Err(Error::InvalidShape(format!(
                "{name} has {} rows, expected {r}",
                rows.len()
            )));
        }
        mat_from_rows(rows, c).map_err(|_| {
            Error::InvalidShape(format!("every row of {name} must have {c} entries"))
        })
    };
    let (n, m, p) = (doc.n, doc.m, doc.p);
    IsoSystem::new(
        block(&doc.a, n, n, "A")?,
        block(&doc.b, n, m, "B")?,
        block(&doc.c, p, n, "C")?,
        block(&doc.d, p, m, "D")?,
    )
}

pub fn load_system(path: &Path) -> Result<IsoSystem> {
    let value: serde_json::Value = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    system_from_json(value)
}

pub fn save_system(sys: &IsoSystem, path: &Path) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, &system_to_json(sys))?;
    writeln!(f)?;
    Ok(())
}
