mod args;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use fecmark_core::sim::{self, render_csv, write_text, Scheme, SimConfig, CSV_HEADER};

use args::{Cli, Command, MaskArgs, SccArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Pc(a) => a.to_config(Scheme::Pc).and_then(|cfg| sweep(&cfg)),
        Command::Scc(a) => scc_config(&a).and_then(|cfg| sweep(&cfg)),
        Command::Mask(a) => mask(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn scc_config(a: &SccArgs) -> fecmark_core::Result<SimConfig> {
    let mut cfg = a.sim.to_config(Scheme::Scc)?;
    if let Some(l) = a.window {
        cfg.scc.window = l;
    }
    if let Some(i) = a.scc_iters {
        cfg.scc.iterations = i;
    }
    if let Some(c) = a.chain_blocks {
        cfg.scc.chain_blocks = c;
    }
    Ok(cfg)
}

/// Runs the sweep. Without `--out` the header and each finished row are
/// printed to stdout as they become available.
fn sweep(cfg: &SimConfig) -> fecmark_core::Result<()> {
    cfg.validate()?;
    let to_stdout = cfg.out_path.is_none();
    let stdout = io::stdout();
    if to_stdout {
        writeln!(stdout.lock(), "{}", CSV_HEADER.join(","))?;
    }
    sim::run_sweep_with(cfg, |row| {
        if to_stdout {
            let line = render_csv(std::slice::from_ref(row), cfg).expect("in-memory CSV");
            // Skip the header line render_csv always emits.
            let body = line.split_once('\n').map_or("", |(_, rest)| rest);
            let mut out = stdout.lock();
            let _ = out.write_all(body.as_bytes());
            let _ = out.flush();
        } else {
            eprintln!(
                "snr {} dB: {} blocks, ber_post {:.3e}",
                row.snr_db,
                row.stats.blocks_run,
                row.stats.ber_post()
            );
        }
    })?;
    Ok(())
}

fn mask(a: &MaskArgs) -> fecmark_core::Result<()> {
    let cfg = a.sim.to_config(Scheme::Pc)?;
    let snr = match cfg.snr_points.as_slice() {
        [snr] => *snr,
        _ => {
            return Err(fecmark_core::Error::Config(
                "mask takes exactly one SNR point".into(),
            ))
        }
    };
    cfg.validate()?;
    let stats = sim::mask_stats(&cfg, snr, a.blocks)?;
    let counts = stats.counts_csv()?;
    match &cfg.out_path {
        Some(path) => write_text(path, &counts)?,
        None => io::stdout().lock().write_all(counts.as_bytes())?,
    }
    if let Some(path) = &a.inset {
        write_text(path, &stats.inset_text())?;
    }
    eprintln!(
        "mean non-HRB count {:.1} of {} ({:.2}%)",
        stats.mean_non_hrb_count,
        stats.side * stats.side,
        100.0 * stats.ratio
    );
    Ok(())
}
