//! CSV files for potentials and spectra.
//!
//! Numbers are written as `{:.16e}`, which reads back to the same `f64`.
//! Files are UTF-8 with LF line endings.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::path::Path;

use num_complex::Complex64;

use super::CliError;
use crate::domain::{SpectralData, Spectrum};
use crate::grid::{SampledFunction, UniformGrid};

pub const POTENTIAL_HEADER: [&str; 5] = ["x", "q_re", "q_im", "p_re", "p_im"];
pub const SPECTRA_HEADER: [&str; 4] = ["j", "n", "lambda_re", "lambda_im"];

/// Relative tolerance for recognising a uniform `x` column.
const GRID_TOL: f64 = 1e-9;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        kind => parse_err(path, line, format!("{kind:?}")),
    }
}

/// Writes a header and rows of preformatted fields.
pub fn write_table<I>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

/// Rows of a CSV file with the given header, with their line numbers.
fn read_table(path: &Path, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>, CliError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let found = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(parse_err(
            path,
            1,
            format!(
                "expected header `{}`, found `{}`",
                header.join(","),
                found.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        rows.push((line, rec));
    }
    Ok(rows)
}

fn field<T: std::str::FromStr>(
    path: &Path,
    line: u64,
    rec: &csv::StringRecord,
    i: usize,
    name: &str,
) -> Result<T, CliError> {
    let raw = rec.get(i).unwrap_or("");
    raw.parse()
        .map_err(|_| parse_err(path, line, format!("column `{name}`: cannot parse `{raw}`")))
}

pub fn write_potential(
    path: &Path,
    grid: &UniformGrid,
    q: &[Complex64],
    p: &[Complex64],
) -> Result<(), CliError> {
    let rows = grid.nodes().zip(q.iter().zip(p)).map(|(x, (q, p))| {
        vec![
            fmt_f64(x),
            fmt_f64(q.re),
            fmt_f64(q.im),
            fmt_f64(p.re),
            fmt_f64(p.im),
        ]
    });
    write_table(path, &POTENTIAL_HEADER, rows)
}

/// `(q, p)` sampled on a uniform grid given by the `x` column.
pub fn read_potential(path: &Path) -> Result<(SampledFunction, SampledFunction), CliError> {
    let rows = read_table(path, &POTENTIAL_HEADER)?;
    if rows.len() < 2 {
        return Err(parse_err(
            path,
            rows.first().map_or(1, |r| r.0),
            "a potential needs at least two rows",
        ));
    }
    let mut xs = Vec::with_capacity(rows.len());
    let mut q = Vec::with_capacity(rows.len());
    let mut p = Vec::with_capacity(rows.len());
    for (line, rec) in &rows {
        let mut v = [0.0f64; 5];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = field(path, *line, rec, i, POTENTIAL_HEADER[i])?;
            if !slot.is_finite() {
                return Err(parse_err(
                    path,
                    *line,
                    format!("column `{}` is not finite", POTENTIAL_HEADER[i]),
                ));
            }
        }
        xs.push(v[0]);
        q.push(Complex64::new(v[1], v[2]));
        p.push(Complex64::new(v[3], v[4]));
    }
    let last = rows.len() - 1;
    let grid = UniformGrid::new(xs[0], xs[last], last)
        .map_err(|e| parse_err(path, rows[0].0, e.to_string()))?;
    for (k, &x) in xs.iter().enumerate() {
        if (x - grid.node(k)).abs() > GRID_TOL * grid.step() {
            return Err(parse_err(
                path,
                rows[k].0,
                format!("x = {x} breaks the uniform spacing {}", grid.step()),
            ));
        }
    }
    Ok((
        SampledFunction::new(grid, q)?,
        SampledFunction::new(grid, p)?,
    ))
}

pub fn write_spectra(path: &Path, data: &SpectralData) -> Result<(), CliError> {
    let rows = [1u8, 2].into_iter().flat_map(|j| {
        data.spectrum(j)
            .iter()
            .map(move |(n, l)| vec![j.to_string(), n.to_string(), fmt_f64(l.re), fmt_f64(l.im)])
            .collect::<Vec<_>>()
    });
    write_table(path, &SPECTRA_HEADER, rows)
}

/// Both spectra; each must list every `n` in `−N..=N` exactly once, with
/// the same `N`.
pub fn read_spectra(path: &Path) -> Result<SpectralData, CliError> {
    let rows = read_table(path, &SPECTRA_HEADER)?;
    let mut by_j: [BTreeMap<i64, Complex64>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for (line, rec) in &rows {
        let j: u8 = field(path, *line, rec, 0, "j")?;
        let n: i64 = field(path, *line, rec, 1, "n")?;
        let re: f64 = field(path, *line, rec, 2, "lambda_re")?;
        let im: f64 = field(path, *line, rec, 3, "lambda_im")?;
        if j != 1 && j != 2 {
            return Err(parse_err(path, *line, format!("j must be 1 or 2, got {j}")));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(parse_err(path, *line, "eigenvalue is not finite"));
        }
        if by_j[j as usize - 1]
            .insert(n, Complex64::new(re, im))
            .is_some()
        {
            return Err(parse_err(
                path,
                *line,
                format!("duplicate entry j={j}, n={n}"),
            ));
        }
    }
    let mut spectra = Vec::with_capacity(2);
    for (idx, map) in by_j.into_iter().enumerate() {
        let j = idx as u8 + 1;
        if map.is_empty() {
            return Err(CliError::Numerics(crate::Error::Input(format!(
                "{}: no eigenvalues for j={j}",
                path.display()
            ))));
        }
        let n = map.keys().map(|k| k.abs()).max().unwrap_or(0);
        if map.len() as i64 != 2 * n + 1 {
            return Err(CliError::Numerics(crate::Error::Input(format!(
                "{}: spectrum j={j} does not list every n in {}..={n}",
                path.display(),
                -n
            ))));
        }
        spectra.push(Spectrum::new(j, map.into_values().collect())?);
    }
    let s2 = spectra.pop().expect("two spectra");
    let s1 = spectra.pop().expect("two spectra");
    Ok(SpectralData::new(s1, s2)?)
}
