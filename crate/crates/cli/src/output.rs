//! CSV and JSON writers and readers.
//!
//! Every floating-point number is written in scientific notation with 17
//! significant digits (`{:.16e}`), which round-trips an `f64` exactly. CSV
//! files are comma-separated with a header row and LF line endings.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use stirap_core::{PulseSchedule, TimeGrid};

use crate::error::{CliError, CliResult};

/// The one number format used for every output file.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// A header and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        // writing into memory cannot fail
        writer.write_record(&self.header).expect("in-memory csv");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|x| format_number(*x)))
                .expect("in-memory csv");
        }
        writer.into_inner().expect("in-memory csv")
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_csv_bytes()).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        Self::from_csv_bytes(&bytes).map_err(|reason| CliError::input(path, reason))
    }

    pub fn from_csv_bytes(bytes: &[u8]) -> Result<Self, String> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(bytes);
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| e.to_string())?
            .iter()
            .map(str::to_string)
            .collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err("missing header row".into());
        }
        let mut rows = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| e.to_string())?;
            let row = record
                .iter()
                .map(|field| field.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| format!("row {}: {e}", line + 1))?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }
}

pub const SCHEDULE_HEADER: [&str; 4] = ["t", "theta", "omega1", "omega2"];

pub fn schedule_table(schedule: &PulseSchedule) -> Table {
    let mut table = Table::new(&SCHEDULE_HEADER);
    let (o1, o2) = stirap_core::pulse::theta_to_rabi(schedule);
    for (k, t) in schedule.grid().times().into_iter().enumerate() {
        table.push(vec![t, schedule.theta()[k], o1[k], o2[k]]);
    }
    table
}

/// Rebuilds a schedule from its CSV table.
///
/// The node times must form a uniform grid. The total Rabi amplitude is
/// recovered exactly from any row with θ = 0 or θ = π/2 (every designed
/// schedule starts at θ = 0) and otherwise from the first row; every row
/// must then agree with it to 10⁻¹² relative.
pub fn schedule_from_table(table: &Table) -> Result<PulseSchedule, String> {
    if table.header != SCHEDULE_HEADER {
        return Err(format!(
            "expected header {}, got {}",
            SCHEDULE_HEADER.join(","),
            table.header.join(",")
        ));
    }
    let n = table.rows.len();
    if n < 2 {
        return Err(format!("a schedule needs at least 2 rows, got {n}"));
    }
    let times: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let grid = TimeGrid::new(times[0], times[n - 1], n).map_err(|e| e.to_string())?;
    let slack = 1e-9 * grid.spacing();
    if let Some(k) = (0..n).find(|&k| (grid.time(k) - times[k]).abs() > slack) {
        return Err(format!(
            "row {}: time {} is off the uniform grid",
            k + 1,
            times[k]
        ));
    }
    let theta: Vec<f64> = table.rows.iter().map(|r| r[1]).collect();
    let exact = table.rows.iter().find_map(|r| {
        let (s, c) = r[1].sin_cos();
        if c == 1.0 {
            Some(r[3])
        } else if s == 1.0 {
            Some(r[2])
        } else {
            None
        }
    });
    let omega = exact.unwrap_or_else(|| table.rows[0][2].hypot(table.rows[0][3]));
    let schedule = PulseSchedule::new(grid, theta, omega).map_err(|e| e.to_string())?;
    let (o1, o2) = stirap_core::pulse::theta_to_rabi(&schedule);
    let tol = 1e-12 * omega.max(f64::MIN_POSITIVE);
    for (k, row) in table.rows.iter().enumerate() {
        if (row[2] - o1[k]).abs() > tol || (row[3] - o2[k]).abs() > tol {
            return Err(format!("row {}: omega1/omega2 disagree with theta", k + 1));
        }
    }
    Ok(schedule)
}

pub fn read_schedule(path: &Path) -> CliResult<PulseSchedule> {
    let table = Table::read(path)?;
    schedule_from_table(&table).map_err(|reason| CliError::input(path, reason))
}

/// Pretty JSON whose numbers use [`format_number`].
struct ScientificFormatter {
    inner: PrettyFormatter<'static>,
}

impl Formatter for ScientificFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_number(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// JSON text with a trailing newline. Non-finite numbers become `null`.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let formatter = ScientificFormatter {
        inner: PrettyFormatter::new(),
    };
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    value.serialize(&mut ser).expect("serializing plain data");
    out.push(b'\n');
    out
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    fs::write(path, to_json_bytes(value)).map_err(|e| CliError::io(path, e))
}
