use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fecmark_core::scc::DecoderKind;
use fecmark_core::sim::{Scheme, SimConfig};
use fecmark_core::LlrMode;

#[derive(Debug, Parser)]
#[command(name = "fecmark", version, about = "Product and staircase code BER simulator with soft-aided bit marking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a 128x128 extended-BCH product code.
    Pc(SimArgs),
    /// Simulate a staircase code with 128x128 blocks and a sliding-window decoder.
    Scc(SccArgs),
    /// Count the positions left unmarked by the reliability threshold.
    Mask(MaskArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DecoderArg {
    Ibdd,
    Sabm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LlrArg {
    Exact,
    Maxlog,
}

/// Flags shared by every subcommand. Anything left unset keeps the value
/// from `--config`, or the built-in default.
#[derive(Debug, Args)]
pub struct SimArgs {
    /// TOML file mirroring the simulation config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// PAM order.
    #[arg(long = "mod", value_parser = ["2", "4", "8"])]
    pub mod_order: Option<String>,
    /// Comma-separated SNR points in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub snr: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub decoder: Option<DecoderArg>,
    #[arg(long, value_enum)]
    pub llr: Option<LlrArg>,
    /// Reliability threshold; bits with |LLR| above it are never flipped.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub iters: Option<usize>,
    /// Leading iterations that run miscorrection detection.
    #[arg(long = "md-iters")]
    pub md_iters: Option<usize>,
    #[arg(long = "flip-attempts")]
    pub flip_attempts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "min-errors")]
    pub min_errors: Option<u64>,
    #[arg(long = "max-blocks")]
    pub max_blocks: Option<u64>,
    /// CSV destination; rows go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Fill the wall_seconds column.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SccArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Window size L in blocks.
    #[arg(long)]
    pub window: Option<usize>,
    /// Decoding sweeps per window.
    #[arg(long = "scc-iters")]
    pub scc_iters: Option<usize>,
    /// Counted blocks per simulated chain.
    #[arg(long = "chain-blocks")]
    pub chain_blocks: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MaskArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Blocks to simulate.
    #[arg(long, default_value_t = 1000)]
    pub blocks: usize,
    /// Write the first block's mask as a text grid.
    #[arg(long)]
    pub inset: Option<PathBuf>,
}

impl SimArgs {
    /// Loads the config file (if any) and applies the flags on top.
    pub fn to_config(&self, scheme: Scheme) -> fecmark_core::Result<SimConfig> {
        let mut cfg = match &self.config {
            Some(path) => SimConfig::from_file(path)?,
            None => SimConfig::default(),
        };
        cfg.scheme = scheme;
        if let Some(m) = &self.mod_order {
            cfg.mod_order = m.parse().expect("restricted by the value parser");
        }
        if let Some(snr) = &self.snr {
            cfg.snr_points = snr.clone();
        }
        if let Some(d) = self.decoder {
            cfg.decoder = match d {
                DecoderArg::Ibdd => DecoderKind::Ibdd,
                DecoderArg::Sabm => DecoderKind::Sabm,
            };
        }
        if let Some(l) = self.llr {
            cfg.llr_mode = match l {
                LlrArg::Exact => LlrMode::Exact,
                LlrArg::Maxlog => LlrMode::MaxLog,
            };
        }
        set(&mut cfg.sabm.delta, self.delta);
        set(&mut cfg.sabm.total_iters, self.iters);
        set(&mut cfg.sabm.md_iters, self.md_iters);
        set(&mut cfg.sabm.failure_flip_attempts, self.flip_attempts);
        set(&mut cfg.master_seed, self.seed);
        set(&mut cfg.stop.min_word_errors, self.min_errors);
        set(&mut cfg.stop.max_blocks, self.max_blocks);
        if self.out.is_some() {
            cfg.out_path = self.out.clone();
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        cfg.record_timing |= self.timing;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
