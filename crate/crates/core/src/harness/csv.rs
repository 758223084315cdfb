use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{BucketStats, SamplePoint};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "n,x_center,q99_abs_err,max_abs_err,max_x,max_y,max_rho";

/// 17 significant digits, round-trips every double.
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes header and rows to `out`.
pub fn write_profile_to<W: Write>(stats: &[BucketStats], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in stats {
        let p = s.max_err_input;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.n,
            real(s.x_center),
            real(s.q99_abs_err),
            real(s.max_abs_err),
            real(p.x),
            real(p.y),
            real(p.rho),
        )?;
    }
    out.flush()
}

/// Writes the profile to `path`. Empty input is rejected before the file is created.
pub fn write_profile_csv(stats: &[BucketStats], path: &Path) -> Result<()> {
    if stats.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_profile_to(stats, BufWriter::new(file)).map_err(io_err)
}

/// Parses what [`write_profile_to`] produced. `evaluated` is not stored and reads back as 0.
pub fn parse_profile_csv(text: &str) -> Result<Vec<BucketStats>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                reason: "missing header".into(),
            })
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected 7 fields, found {}", fields.len()),
            });
        }
        let num = |k: usize| {
            fields[k].trim().parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                reason: format!("field {}: {e}", k + 1),
            })
        };
        let n = fields[0]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse {
                line: line_no,
                reason: format!("field 1: {e}"),
            })?;
        out.push(BucketStats {
            n,
            x_center: num(1)?,
            q99_abs_err: num(2)?,
            max_abs_err: num(3)?,
            max_err_input: SamplePoint {
                x: num(4)?,
                y: num(5)?,
                rho: num(6)?,
            },
            evaluated: 0,
        });
    }
    Ok(out)
}

pub fn read_profile_csv(path: &Path) -> Result<Vec<BucketStats>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_profile_csv(&text)
}
