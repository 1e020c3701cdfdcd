//! Plain-text table files.
//!
//! Every file this crate writes has the same shape: a single `#`-prefixed
//! header line holding one JSON object (the provenance of the data), an
//! optional `# columns: ...` line naming the columns, and then one numeric
//! row per record. Floats are printed with 17 significant digits, enough
//! for the text to round-trip back to the exact same bit pattern.
//!
//! Two row styles are supported: comma-separated values, and
//! whitespace-separated columns that gnuplot can plot without preprocessing.
//! The gnuplot style is deliberately restricted to two columns (an x and a
//! y) so the files work as direct `plot "file"` input.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequences::{GeneratorDescriptor, TorusSequence};
use crate::statistics::{HistogramReport, Normalization};

/// Row separator style for table files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableStyle {
    /// Comma-separated rows, all columns.
    Csv,
    /// Whitespace-separated rows, reduced to two columns where the full
    /// table has more.
    Gnuplot,
}

impl TableStyle {
    fn sep(self) -> &'static str {
        match self {
            TableStyle::Csv => ",",
            TableStyle::Gnuplot => " ",
        }
    }
}

/// Print a float with 17 significant digits (exact f64 round-trip).
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Attach the file path to an I/O error so the caller sees which file failed.
fn with_path(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| with_path(path, e))?,
    ))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).map_err(|e| with_path(path, e))?,
    ))
}

fn write_header<W: Write, H: Serialize>(out: &mut W, header: &H, columns: &[&str]) -> Result<()> {
    let json = serde_json::to_string(header)
        .map_err(|e| Error::Parse(format!("header serialization failed: {e}")))?;
    writeln!(out, "# {json}")?;
    writeln!(out, "# columns: {}", columns.join(","))?;
    Ok(())
}

/// Write a general numeric table: header JSON, column names, then rows.
pub fn write_table<P: AsRef<Path>, H: Serialize>(
    path: P,
    header: &H,
    columns: &[&str],
    rows: &[Vec<f64>],
    style: TableStyle,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    write_header(&mut out, header, columns)?;
    let sep = style.sep();
    let mut line = String::new();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != columns.len() {
            return Err(Error::InvalidParameter(format!(
                "row {i} has {} fields, expected {} ({})",
                row.len(),
                columns.len(),
                columns.join(",")
            )));
        }
        line.clear();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push_str(sep);
            }
            line.push_str(&format_float(*v));
        }
        writeln!(out, "{line}").map_err(|e| with_path(path, e))?;
    }
    out.flush().map_err(|e| with_path(path, e))?;
    Ok(())
}

/// Everything read back from a table file.
#[derive(Debug, Clone)]
pub struct Table {
    /// The header line's JSON object.
    pub header: serde_json::Value,
    /// Column names from the `# columns:` line (empty if absent).
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Read a table written by [`write_table`] (either style). Malformed input
/// is reported with its 1-based line number.
pub fn read_table<P: AsRef<Path>>(path: P) -> Result<Table> {
    let path = path.as_ref();
    let reader = open(path)?;
    let mut header: Option<serde_json::Value> = None;
    let mut columns: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| with_path(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(cols) = rest.strip_prefix("columns:") {
                columns = cols.split(',').map(|c| c.trim().to_string()).collect();
            } else if header.is_none() && rest.starts_with('{') {
                let parsed: serde_json::Value = serde_json::from_str(rest).map_err(|e| {
                    Error::Parse(format!("{}:{lineno}: bad header JSON: {e}", path.display()))
                })?;
                header = Some(parsed);
            }
            continue;
        }
        let fields: Vec<&str> = if trimmed.contains(',') {
            trimmed.split(',').map(str::trim).collect()
        } else {
            trimmed.split_whitespace().collect()
        };
        let mut row = Vec::with_capacity(fields.len());
        for f in &fields {
            let v: f64 = f.parse().map_err(|_| {
                Error::Parse(format!(
                    "{}:{lineno}: expected a number, got {f:?}",
                    path.display()
                ))
            })?;
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse(format!(
                    "{}:{lineno}: row has {} fields, previous rows had {w}",
                    path.display(),
                    row.len()
                )));
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    let header = header.ok_or_else(|| {
        Error::Parse(format!(
            "{}: missing `# {{...}}` header line",
            path.display()
        ))
    })?;
    if !columns.is_empty() {
        if let Some(w) = width {
            if w != columns.len() {
                return Err(Error::Parse(format!(
                    "{}: {} columns declared but rows have {w} fields",
                    path.display(),
                    columns.len()
                )));
            }
        }
    }
    Ok(Table {
        header,
        columns,
        rows,
    })
}

/// Write a sequence to any sink: its descriptor as the header, one point
/// per row. Streams directly instead of materializing a row table, since
/// direction sequences easily run to millions of points.
pub fn write_sequence_to<W: Write>(
    out: &mut W,
    seq: &TorusSequence,
    style: TableStyle,
) -> Result<()> {
    match style {
        TableStyle::Csv => {
            write_header(out, seq.meta(), &["point"])?;
            for &p in seq.points() {
                writeln!(out, "{}", format_float(p))?;
            }
        }
        TableStyle::Gnuplot => {
            // two columns (index, point) so the file plots as a scatter
            write_header(out, seq.meta(), &["index", "point"])?;
            for (i, &p) in seq.points().iter().enumerate() {
                writeln!(out, "{} {}", i + 1, format_float(p))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// [`write_sequence_to`] a file, with the path attached to any I/O error.
pub fn write_sequence<P: AsRef<Path>>(
    path: P,
    seq: &TorusSequence,
    style: TableStyle,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    write_sequence_to(&mut out, seq, style).map_err(|e| match e {
        Error::Io(io) => with_path(path, io),
        other => other,
    })
}

/// Read a sequence file back: header JSON must be a generator descriptor,
/// and the last column of every row is the point.
pub fn read_sequence<P: AsRef<Path>>(path: P) -> Result<TorusSequence> {
    let path = path.as_ref();
    let table = read_table(path)?;
    let meta: GeneratorDescriptor = serde_json::from_value(table.header.clone()).map_err(|e| {
        Error::Parse(format!(
            "{}:1: header is not a sequence descriptor: {e}",
            path.display()
        ))
    })?;
    if table.rows.is_empty() {
        return Err(Error::EmptyInput(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    let points: Vec<f64> = table
        .rows
        .iter()
        .map(|r| *r.last().expect("read_table rejects empty rows"))
        .collect();
    TorusSequence::from_parts(points, meta)
}

/// Write a histogram report. CSV columns depend on the normalization:
/// binned data gets `lo,hi,mass[,overlay]`, CDFs get `edge,value[,overlay]`.
/// Gnuplot output keeps two columns: bin center (or edge) and mass.
pub fn write_histogram<P: AsRef<Path>, H: Serialize>(
    path: P,
    header: &H,
    report: &HistogramReport,
    style: TableStyle,
) -> Result<()> {
    let is_cdf = report.normalization == Normalization::Cdf;
    let mut columns: Vec<&str> = if is_cdf {
        vec!["edge", "value"]
    } else {
        vec!["lo", "hi", "mass"]
    };
    let overlay = report.overlay.as_deref();
    if overlay.is_some() && style == TableStyle::Csv {
        columns.push("overlay");
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(report.masses.len());
    for (i, &m) in report.masses.iter().enumerate() {
        let mut row = if is_cdf {
            vec![report.bin_edges[i], m]
        } else if style == TableStyle::Gnuplot {
            vec![0.5 * (report.bin_edges[i] + report.bin_edges[i + 1]), m]
        } else {
            vec![report.bin_edges[i], report.bin_edges[i + 1], m]
        };
        if let (Some(o), TableStyle::Csv) = (overlay, style) {
            row.push(o[i]);
        }
        rows.push(row);
    }
    if style == TableStyle::Gnuplot && !is_cdf {
        columns = vec!["center", "mass"];
    }
    write_table(path, header, &columns, &rows, style)
}

/// Complete description of one CLI run: the command, the data source, the
/// requested statistic and its parameters. Written into every output header
/// and summary so results carry their provenance, and reconstructable from
/// that JSON losslessly.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    /// Counting windows, one `[lo, hi)` pair per requested box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<(f64, f64)>>,
    /// Moment exponents, matched to `intervals`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub powers: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    /// Quadrature x-grid size; exact sweeps are used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbor_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style: Option<TableStyle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<String>>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            statistic: None,
            generator: None,
            input: None,
            intervals: None,
            powers: None,
            bins: None,
            x_grid: None,
            neighbor_order: None,
            tolerance: None,
            out: None,
            style: None,
            suites: None,
        }
    }
}

/// Pretty-print any serializable value to a `.json` file.
pub fn write_json<P: AsRef<Path>, T: Serialize>(path: P, value: &T) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    writeln!(out, "{json}").map_err(|e| with_path(path, e))?;
    out.flush().map_err(|e| with_path(path, e))?;
    Ok(())
}

/// Read a JSON file into any deserializable value, with path context.
pub fn read_json<P: AsRef<Path>, T: DeserializeOwned>(path: P) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| with_path(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: bad JSON: {e}", path.display())))
}
