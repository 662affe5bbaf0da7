//! Output directories, CSV/JSON writers and content digests.

use std::fs;
use std::path::{Path, PathBuf};

use pslab_core::exact::ExactSpectrum;
use pslab_core::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SPECTRUM_HEADER: [&str; 5] = ["index", "re", "im", "modulus", "kind"];

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Nonzero,
    Outlier,
    Zero,
}

impl RootKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RootKind::Nonzero => "nonzero",
            RootKind::Outlier => "outlier",
            RootKind::Zero => "zero",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "nonzero" => Some(RootKind::Nonzero),
            "outlier" => Some(RootKind::Outlier),
            "zero" => Some(RootKind::Zero),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    pub kind: RootKind,
}

/// Nonzero roots in solver order followed by one row per zero eigenvalue.
pub fn exact_rows(ex: &ExactSpectrum<f64>) -> Vec<SpectrumRow> {
    let mut rows: Vec<SpectrumRow> = ex
        .nonzero_roots
        .iter()
        .enumerate()
        .map(|(i, z)| SpectrumRow {
            index: i,
            re: z.re,
            im: z.im,
            modulus: z.norm(),
            kind: if i == ex.outlier_index { RootKind::Outlier } else { RootKind::Nonzero },
        })
        .collect();
    let start = rows.len();
    rows.extend((0..ex.zero_algebraic_multiplicity).map(|k| SpectrumRow {
        index: start + k,
        re: 0.0,
        im: 0.0,
        modulus: 0.0,
        kind: RootKind::Zero,
    }));
    rows
}

/// Rows for numerically computed eigenvalues: moduli at or below `zero_tol`
/// are tagged `zero`, the largest modulus `outlier`.
pub fn dense_rows(values: &[Complex64], zero_tol: f64) -> Vec<SpectrumRow> {
    let outlier = (!values.is_empty()).then(|| pslab_core::exact::outlier_position(values));
    values
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let kind = if z.norm() <= zero_tol {
                RootKind::Zero
            } else if Some(i) == outlier {
                RootKind::Outlier
            } else {
                RootKind::Nonzero
            };
            SpectrumRow { index: i, re: z.re, im: z.im, modulus: z.norm(), kind }
        })
        .collect()
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, CliError> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| CliError::csv(path, e))
}

/// Writes rows of preformatted cells under `header`.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(|e| CliError::csv(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::csv(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_spectrum_csv(path: &Path, rows: &[SpectrumRow]) -> Result<(), CliError> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![r.index.to_string(), fmt_f64(r.re), fmt_f64(r.im), fmt_f64(r.modulus), r.kind.as_str().to_string()]
        })
        .collect();
    write_table(path, &SPECTRUM_HEADER, &cells)
}

pub fn read_spectrum_csv(path: &Path) -> Result<Vec<SpectrumRow>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::csv(path, e))?;
    let header = r.headers().map_err(|e| CliError::csv(path, e))?.clone();
    if header.iter().ne(SPECTRUM_HEADER.iter().copied()) {
        return Err(CliError::Format { path: path.to_path_buf(), reason: format!("unexpected header {header:?}") });
    }
    let bad = |reason: String| CliError::Format { path: path.to_path_buf(), reason };
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::csv(path, e))?;
        let num = |i: usize| -> Result<f64, CliError> {
            rec[i].parse().map_err(|_| bad(format!("bad number `{}`", &rec[i])))
        };
        rows.push(SpectrumRow {
            index: rec[0].parse().map_err(|_| bad(format!("bad index `{}`", &rec[0])))?,
            re: num(1)?,
            im: num(2)?,
            modulus: num(3)?,
            kind: RootKind::parse(&rec[4]).ok_or_else(|| bad(format!("bad kind `{}`", &rec[4])))?,
        });
    }
    Ok(rows)
}

pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::Json)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// `<out>/<command>-<timestamp>`, with a numeric suffix if that exists.
pub fn create_run_dir(out: &Path, command: &str, stamp: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let base = format!("{command}-{stamp}");
    let mut dir = out.join(&base);
    let mut k = 1;
    loop {
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                dir = out.join(format!("{base}-{k}"));
                k += 1;
            }
            Err(e) => return Err(CliError::io(&dir, e)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pslab_core::exact::exact_spectrum;
    use pslab_core::Model64;

    #[test]
    fn spectrum_round_trip_is_bit_exact() {
        let ex = exact_spectrum(&Model64::model2(40, 3, 0.01, 0.7), 1e-12).unwrap();
        let rows = exact_rows(&ex);
        assert_eq!(rows.len(), 40);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_spectrum_csv(&path, &rows).unwrap();
        let back = read_spectrum_csv(&path).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
            assert_eq!(a.modulus.to_bits(), b.modulus.to_bits());
            assert_eq!(a.kind, b.kind);
        }
    }

    #[test]
    fn extreme_values_round_trip() {
        for x in [f64::MIN_POSITIVE, 5e-324, f64::MAX, -0.1, 1.0 / 3.0, 2.994_987_437_106_62] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn empty_spectrum_keeps_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.csv");
        write_spectrum_csv(&path, &[]).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "index,re,im,modulus,kind\n");
        assert!(read_spectrum_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn dense_rows_tag_zero_and_outlier() {
        let v = [Complex64::new(1e-18, 0.0), Complex64::new(0.5, 0.5), Complex64::new(2.0, 0.0)];
        let kinds: Vec<RootKind> = dense_rows(&v, 1e-12).iter().map(|r| r.kind).collect();
        assert_eq!(kinds, [RootKind::Zero, RootKind::Nonzero, RootKind::Outlier]);
    }

    #[test]
    fn bad_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.csv");
        fs::write(&path, "i,re,im\n0,1,2\n").unwrap();
        assert!(matches!(read_spectrum_csv(&path), Err(CliError::Format { .. })));
        assert!(matches!(read_spectrum_csv(&dir.path().join("missing.csv")), Err(CliError::Csv { .. })));
    }

    #[test]
    fn run_dirs_never_collide() {
        let dir = tempfile::tempdir().unwrap();
        let a = create_run_dir(dir.path(), "x", "t").unwrap();
        let b = create_run_dir(dir.path(), "x", "t").unwrap();
        assert_ne!(a, b);
        assert!(b.ends_with("x-t-1"));
    }
}
