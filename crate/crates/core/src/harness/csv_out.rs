use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::sweep::ResultRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "snr_db,W,N,K,m1,m2,policy,op_closed,op_mc,mc_stderr,trials,seed";

const SIG_DIGITS: usize = 10;

/// Formats `x` with 10 significant digits in the style of C's `%.10g`:
/// fixed notation for exponents in [-4, 10), scientific otherwise, trailing
/// zeros removed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_sig).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.write_record([
            format_sig(r.snr_db),
            format_sig(r.w),
            r.n.to_string(),
            r.k.to_string(),
            format_sig(r.m1),
            format_sig(r.m2),
            r.policy.to_string(),
            format_sig(r.op_closed),
            opt(r.op_mc),
            opt(r.mc_stderr),
            r.trials.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `rows` to `path` with the header line first.
pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to write".into()));
    }
    write_csv(rows, File::create(path)?)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::Config(format!("unexpected CSV header '{header}'")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let num = |j: usize| -> Result<f64> {
            field(j)
                .parse()
                .map_err(|_| Error::Config(format!("line {line}: bad number '{}'", field(j))))
        };
        let int = |j: usize| -> Result<u64> {
            field(j)
                .parse()
                .map_err(|_| Error::Config(format!("line {line}: bad integer '{}'", field(j))))
        };
        let maybe = |j: usize| -> Result<Option<f64>> {
            if field(j).is_empty() {
                Ok(None)
            } else {
                num(j).map(Some)
            }
        };
        rows.push(ResultRow {
            snr_db: num(0)?,
            w: num(1)?,
            n: int(2)? as usize,
            k: int(3)? as usize,
            m1: num(4)?,
            m2: num(5)?,
            policy: field(6).parse()?,
            op_closed: num(7)?,
            op_mc: maybe(8)?,
            mc_stderr: maybe(9)?,
            trials: int(10)?,
            seed: int(11)?,
        });
    }
    Ok(rows)
}
