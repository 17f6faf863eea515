//! Loss files: CSV with a `loss` column and an optional 0/1 `censored` column.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::families::{LtrcSample, Window};

const LIMIT_RTOL: f64 = 1e-9;

/// Parse a loss file against the observation window.
///
/// Rows are numbered as file lines, so the header is line 1.
pub fn read_losses<R: Read>(reader: R, window: &Window) -> Result<LtrcSample> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let Some(loss_col) = col("loss") else {
        return Err(Error::Data { row: 1, detail: "missing required column `loss`".into() });
    };
    let cens_col = col("censored");

    let mut xs = Vec::new();
    let mut n_cens = 0;
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |detail: String| Error::Data { row, detail };
        let raw = rec.get(loss_col).unwrap_or("");
        let loss: f64 = raw.parse().map_err(|_| bad(format!("loss `{raw}` is not a number")))?;
        if !(loss.is_finite() && loss > 0.0) {
            return Err(bad(format!("loss {loss} must be positive and finite")));
        }
        let censored = match cens_col.map(|c| rec.get(c).unwrap_or("")) {
            None | Some("") | Some("0") => false,
            Some("1") => true,
            Some(other) => return Err(bad(format!("censored must be 0 or 1, got `{other}`"))),
        };
        if censored {
            if !window.u.is_finite() {
                return Err(bad("censored row but the policy limit u is infinite".into()));
            }
            if (loss - window.u).abs() > LIMIT_RTOL * window.u {
                return Err(bad(format!("censored loss {loss} differs from the policy limit u = {}", window.u)));
            }
            n_cens += 1;
        } else {
            if !(loss > window.d && loss < window.u) {
                return Err(bad(format!(
                    "uncensored loss {loss} outside the open window ({}, {})",
                    window.d, window.u
                )));
            }
            xs.push(loss);
        }
    }
    if xs.is_empty() && n_cens == 0 {
        return Err(Error::Empty("loss file has no data rows".into()));
    }
    LtrcSample::new(xs, n_cens, *window)
}

pub fn read_loss_file(path: &Path, window: &Window) -> Result<LtrcSample> {
    let file = std::fs::File::open(path)?;
    read_losses(std::io::BufReader::new(file), window)
}

/// Write a sample in the loss-file format, censored rows last.
pub fn write_losses<W: std::io::Write>(w: W, sample: &LtrcSample) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["loss", "censored"])?;
    for &x in sample.uncensored() {
        wtr.write_record([format!("{x:?}"), "0".into()])?;
    }
    for _ in 0..sample.n_censored() {
        wtr.write_record([format!("{:?}", sample.window().u), "1".into()])?;
    }
    wtr.flush()?;
    Ok(())
}
