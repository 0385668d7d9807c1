//! Simulation control: configuration, the Monte Carlo engine, sweeps and
//! CSV output.

mod config;
mod engine;
mod mask;
mod report;

pub use config::{Scheme, SccSettings, SimConfig, StopRule};
pub use engine::{run_point, trial_rng, BerStats};
pub use mask::{mask_stats, non_hrb_mask, MaskStats};
pub use report::{fmt_sig6, render_csv, write_text, CsvRow, CsvSink, CSV_HEADER};

use crate::error::Result;

/// Runs every SNR point of `cfg` in order. When `cfg.out_path` is set the
/// file is created before the first point and each row is flushed as soon
/// as its point completes.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<CsvRow>> {
    run_sweep_with(cfg, |_| {})
}

/// As [`run_sweep`], calling `on_row` after each completed point.
pub fn run_sweep_with(cfg: &SimConfig, mut on_row: impl FnMut(&CsvRow)) -> Result<Vec<CsvRow>> {
    cfg.validate()?;
    let mut sink = cfg.out_path.as_deref().map(CsvSink::create).transpose()?;
    let mut rows = Vec::with_capacity(cfg.snr_points.len());
    for &snr_db in &cfg.snr_points {
        let row = CsvRow {
            snr_db,
            stats: run_point(cfg, snr_db)?,
        };
        if let Some(sink) = sink.as_mut() {
            sink.write_row(&row, cfg)?;
        }
        on_row(&row);
        rows.push(row);
    }
    Ok(rows)
}
