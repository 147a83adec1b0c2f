//! Table output: CSV with a header row and 17-significant-digit scientific
//! notation (locale independent), or a JSON array of row objects.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Writes `rows` (all of width `columns.len()`) to `dest`, or to stdout when
/// `dest` is `None`.
pub fn write_table(
    dest: Option<&Path>,
    format: Format,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> io::Result<()> {
    match dest {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            render(&mut w, format, columns, rows)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            render(&mut w, format, columns, rows)?;
            w.flush()
        }
    }
}

fn render(
    w: &mut dyn Write,
    format: Format,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "{}", columns.join(","))?;
            for row in rows {
                debug_assert_eq!(row.len(), columns.len());
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
                writeln!(w, "{}", cells.join(","))?;
            }
            Ok(())
        }
        Format::Json => {
            let array: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let map: serde_json::Map<String, serde_json::Value> = columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| ((*c).to_string(), serde_json::json!(v)))
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            serde_json::to_writer_pretty(&mut *w, &array)?;
            writeln!(w)
        }
    }
}
