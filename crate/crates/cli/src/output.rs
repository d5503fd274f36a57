//! Output formats: aligned tables, CSV and a JSON envelope.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputSpec {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Significant digits for numeric output.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(3..=17))]
    pub precision: u8,
}

/// Formats `x` with `digits` significant digits: positional notation for
/// moderate magnitudes, otherwise `d.ddde-N` with a lowercase exponent.
/// Trailing zeros of the fraction are dropped.
pub fn fmt_num(x: f64, digits: u8) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1) as usize;
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds every floating-point number inside `v` to `digits` significant
/// digits; integers are left alone.
pub fn round_json(v: &mut Value, digits: u8) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let rounded: f64 = fmt_num(x, digits).parse().unwrap_or(x);
            *v = serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_json(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_json(x, digits)),
        _ => {}
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self, digits: u8) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x, digits),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub title: Option<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            title: None,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn rendered(&self, digits: u8) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| c.render(digits)).collect())
            .collect()
    }

    fn write_aligned(&self, out: &mut dyn Write, digits: u8) -> io::Result<()> {
        let rows = self.rendered(digits);
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        if let Some(title) = &self.title {
            writeln!(out, "{title}")?;
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(self.columns.clone()))?;
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        writeln!(out, "{}", rule.join("  "))?;
        for r in &rows {
            writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut dyn Write, digits: u8) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for r in self.rendered(digits) {
            w.write_record(&r)?;
        }
        w.flush()
    }
}

/// Everything a command produces. Table output prints `sections` then
/// `primary`; CSV prints `primary` alone; JSON prints `outputs` in the
/// standard envelope.
pub struct CommandOutput {
    pub command: &'static str,
    pub inputs: Value,
    pub sections: Vec<Table>,
    pub primary: Table,
    pub outputs: Value,
}

pub fn emit(spec: &OutputSpec, output: &CommandOutput) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &spec.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match spec.format {
        Format::Table => {
            for t in &output.sections {
                t.write_aligned(&mut sink, spec.precision)?;
                writeln!(sink)?;
            }
            output.primary.write_aligned(&mut sink, spec.precision)?;
        }
        Format::Csv => output.primary.write_csv(&mut sink, spec.precision)?,
        Format::Json => {
            let mut outputs = output.outputs.clone();
            round_json(&mut outputs, spec.precision);
            let doc = json!({
                "command": output.command,
                "inputs": output.inputs,
                "outputs": outputs,
                "version": typicality::VERSION,
            });
            serde_json::to_writer_pretty(&mut sink, &doc)?;
            writeln!(sink)?;
        }
    }
    sink.flush()
}
