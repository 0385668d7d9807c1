use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

use super::config::SimConfig;
use super::engine::BerStats;

pub const CSV_HEADER: [&str; 13] = [
    "scheme",
    "mod",
    "decoder",
    "llr_mode",
    "snr_db",
    "blocks",
    "ber_pre",
    "ber_post",
    "block_errors",
    "bdd_calls_avg",
    "eta",
    "seed",
    "wall_seconds",
];

/// One result line of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub snr_db: f64,
    pub stats: BerStats,
}

impl CsvRow {
    pub fn fields(&self, cfg: &SimConfig) -> Vec<String> {
        let s = &self.stats;
        vec![
            cfg.scheme.as_str().to_string(),
            cfg.mod_order.to_string(),
            cfg.decoder.as_str().to_string(),
            cfg.llr_mode.as_str().to_string(),
            fmt_sig6(self.snr_db),
            s.blocks_run.to_string(),
            fmt_sig6(s.ber_pre()),
            fmt_sig6(s.ber_post()),
            s.block_errors.to_string(),
            fmt_sig6(s.bdd_calls_avg()),
            s.eta.map(fmt_sig6).unwrap_or_default(),
            cfg.master_seed.to_string(),
            if cfg.record_timing {
                fmt_sig6(s.wall_seconds)
            } else {
                String::new()
            },
        ]
    }
}

/// Renders like C's `%.6g`: six significant digits, trailing zeros removed,
/// scientific notation for exponents below −4 or above 5.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV sink that flushes after every row so partial sweeps survive.
pub struct CsvSink {
    writer: csv::Writer<File>,
}

impl CsvSink {
    /// Creates the file and writes the header.
    pub fn create(path: &Path) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(File::create(path)?);
        writer.write_record(CSV_HEADER)?;
        writer.flush()?;
        Ok(Self { writer })
    }

    pub fn write_row(&mut self, row: &CsvRow, cfg: &SimConfig) -> Result<()> {
        self.writer.write_record(row.fields(cfg))?;
        self.writer.flush()?;
        Ok(())
    }
}

/// Renders rows to a CSV string.
pub fn render_csv(rows: &[CsvRow], cfg: &SimConfig) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.fields(cfg))?;
    }
    w.flush()?;
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

/// Writes `text` to `out`, used by the mask exporter.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    File::create(path)?.write_all(text.as_bytes())?;
    Ok(())
}
