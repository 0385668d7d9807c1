//! Seeded Monte Carlo BER engine.
//!
//! Trial `i` of an SNR point draws all of its randomness from a ChaCha
//! stream keyed by `(master_seed, snr_db)` with stream number `i`. Trials
//! run in parallel batches but are folded in index order, and the stopping
//! rule is checked after every trial, so the statistics do not depend on the
//! number of workers.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::block::BitMatrix;
use crate::error::{Error, Result};
use crate::modem::{awgn_transmit, needs_interleaver, Demapper, Direction, Interleaver, Pam, ReliabilityGrid};
use crate::pc::{ibdd_decode, sabm_decode, PcCode};
use crate::scc::{ComplexityStats, DecoderKind, SccCode, SccDecoder};

use super::config::{Scheme, SimConfig};

/// Trials dispatched to the worker pool at a time.
const BATCH: u64 = 16;

/// Aggregated counters of one SNR point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BerStats {
    pub blocks_run: u64,
    pub coded_bits: u64,
    pub info_bits: u64,
    pub pre_fec_bit_errors: u64,
    pub post_fec_bit_errors: u64,
    /// Sum over blocks of the squared post-FEC error count.
    pub post_fec_sq_errors: f64,
    pub block_errors: u64,
    pub bdd_calls_total: u64,
    /// Staircase windows decoded (0 for product codes).
    pub windows: u64,
    /// Relative BDD-call increase, staircase runs only.
    pub eta: Option<f64>,
    pub wall_seconds: f64,
}

impl BerStats {
    pub fn ber_pre(&self) -> f64 {
        ratio(self.pre_fec_bit_errors, self.coded_bits)
    }

    pub fn ber_post(&self) -> f64 {
        ratio(self.post_fec_bit_errors, self.info_bits)
    }

    /// BDD calls per block (product codes) or per window (staircase codes).
    pub fn bdd_calls_avg(&self) -> f64 {
        let denom = if self.windows > 0 { self.windows } else { self.blocks_run };
        ratio(self.bdd_calls_total, denom)
    }

    /// 95% normal-approximation confidence interval of `ber_post`, treating
    /// blocks (whose errors are clustered) as the independent samples.
    pub fn ber_post_ci95(&self) -> (f64, f64) {
        if self.blocks_run < 2 || self.info_bits == 0 {
            return (0.0, 1.0);
        }
        let n = self.blocks_run as f64;
        let mean = self.post_fec_bit_errors as f64 / n;
        let var = ((self.post_fec_sq_errors - n * mean * mean) / (n - 1.0)).max(0.0);
        let half = 1.96 * (var / n).sqrt();
        let per_block = self.info_bits as f64 / n;
        (((mean - half) / per_block).max(0.0), (mean + half) / per_block)
    }

    fn absorb(&mut self, t: &TrialOutcome) {
        self.blocks_run += t.blocks;
        self.coded_bits += t.coded_bits;
        self.info_bits += t.info_bits;
        self.pre_fec_bit_errors += t.pre_errors;
        self.post_fec_bit_errors += t.post_errors.iter().sum::<u64>();
        self.post_fec_sq_errors += t.post_errors.iter().map(|&e| (e * e) as f64).sum::<f64>();
        self.block_errors += t.post_errors.iter().filter(|&&e| e > 0).count() as u64;
        self.bdd_calls_total += t.bdd_calls;
        self.windows += t.windows;
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Counters of one trial: a product-code block or one staircase chain.
#[derive(Debug, Clone, Default)]
struct TrialOutcome {
    blocks: u64,
    coded_bits: u64,
    info_bits: u64,
    pre_errors: u64,
    /// Post-FEC information-bit errors of each counted block.
    post_errors: Vec<u64>,
    bdd_calls: u64,
    windows: u64,
}

/// Generator for trial `index` of the point at `snr_db`.
pub fn trial_rng(master_seed: u64, snr_db: f64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(master_seed ^ splitmix64(snr_db.to_bits())));
    rng.set_stream(index);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn random_bits(n: usize, rng: &mut impl Rng) -> Vec<u8> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let word: u64 = rng.random();
        out.extend((0..64).map(|i| (word >> i & 1) as u8).take(n - out.len()));
    }
    out
}

/// Sends one code block through the channel and demaps it. Returns the LLRs in code
/// positions; multi-bit constellations go through a fresh random interleaver.
pub(crate) fn transmit_block(
    block: &BitMatrix,
    pam: &Pam,
    demapper: &Demapper,
    snr_db: f64,
    rng: &mut impl Rng,
) -> ReliabilityGrid {
    let n = block.bits().len();
    let interleaver = needs_interleaver(pam.order()).then(|| Interleaver::random(n, rng));
    let mut tx = match &interleaver {
        Some(il) => il.apply(block.bits(), Direction::Forward).expect("sizes match"),
        None => block.bits().to_vec(),
    };
    let bps = pam.bits_per_symbol();
    tx.resize(n.div_ceil(bps) * bps, 0);
    let symbols = pam.modulate(&tx).expect("padded to whole symbols");
    let y = awgn_transmit(&symbols, snr_db, rng);
    let mut llr = demapper.demap_all(&y);
    llr.truncate(n);
    if let Some(il) = &interleaver {
        llr = il.apply(&llr, Direction::Inverse).expect("sizes match");
    }
    ReliabilityGrid::new(block.side(), llr).expect("one LLR per bit")
}

fn count_diff(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

/// Per-point state shared by all trials.
struct PointSetup {
    cfg: SimConfig,
    snr_db: f64,
    pam: Pam,
    demapper: Demapper,
    pc: Option<PcCode>,
    scc: Option<SccCode>,
}

impl PointSetup {
    fn new(cfg: &SimConfig, snr_db: f64) -> Result<Self> {
        let pam = Pam::new(cfg.mod_order)?;
        let demapper = Demapper::new(pam.clone(), snr_db, cfg.llr_mode);
        let (pc, scc) = match cfg.scheme {
            Scheme::Pc => (Some(PcCode::ebch_128()), None),
            Scheme::Scc => (None, Some(SccCode::ebch_256())),
        };
        Ok(Self {
            cfg: cfg.clone(),
            snr_db,
            pam,
            demapper,
            pc,
            scc,
        })
    }

    fn run_trial(&self, index: u64) -> TrialOutcome {
        let mut rng = trial_rng(self.cfg.master_seed, self.snr_db, index);
        match (&self.pc, &self.scc) {
            (Some(pc), _) => self.pc_trial(pc, &mut rng),
            (_, Some(scc)) => self.scc_trial(scc, &mut rng),
            _ => unreachable!("one code is always configured"),
        }
    }

    fn pc_trial(&self, code: &PcCode, rng: &mut ChaCha8Rng) -> TrialOutcome {
        let data = random_bits(code.info_bits(), rng);
        let block = code.encode(&data).expect("payload has k*k bits");
        let grid = transmit_block(&block, &self.pam, &self.demapper, self.snr_db, rng);
        let hard = BitMatrix::from_bits(code.w(), grid.hard_decisions()).expect("square grid");
        let (decoded, stats) = match self.cfg.decoder {
            DecoderKind::Ibdd => ibdd_decode(code, &hard, self.cfg.sabm.total_iters),
            DecoderKind::Sabm => {
                sabm_decode(code, &hard, &grid, &self.cfg.sabm).expect("validated parameters")
            }
        };
        TrialOutcome {
            blocks: 1,
            coded_bits: (code.w() * code.w()) as u64,
            info_bits: code.info_bits() as u64,
            pre_errors: count_diff(hard.bits(), block.bits()),
            post_errors: vec![count_diff(&code.extract_info(&decoded), &data)],
            bdd_calls: stats.bdd_calls,
            windows: 0,
        }
    }

    fn scc_trial(&self, code: &SccCode, rng: &mut ChaCha8Rng) -> TrialOutcome {
        let s = self.cfg.scc;
        let counted = s.chain_blocks;
        // The decoder starts out holding B_0 and emits B_e on push L − 1 + e,
        // so B_1..=B_counted need counted + L − 1 pushes.
        let pushes = counted + s.window - 1;
        let mut decoder = SccDecoder::new(
            code.clone(),
            s.window,
            s.iterations,
            self.cfg.decoder,
            self.cfg.sabm,
        )
        .expect("validated window");
        let mut prev = BitMatrix::zeros(code.w());
        let mut sent: Vec<(Vec<u8>, BitMatrix)> = Vec::with_capacity(pushes);
        let mut out = TrialOutcome {
            blocks: counted as u64,
            coded_bits: (counted * code.w() * code.w()) as u64,
            info_bits: (counted * code.info_bits_per_block()) as u64,
            ..TrialOutcome::default()
        };
        let mut emitted = 0usize;
        for i in 1..=pushes {
            let info = random_bits(code.info_bits_per_block(), rng);
            let block = code.encode_next(&prev, &info).expect("info sized per block");
            let grid = transmit_block(&block, &self.pam, &self.demapper, self.snr_db, rng);
            let hard = BitMatrix::from_bits(code.w(), grid.hard_decisions()).expect("square grid");
            if i <= counted {
                out.pre_errors += count_diff(hard.bits(), block.bits());
            }
            sent.push((info, block.clone()));
            prev = block;
            let llrs = (self.cfg.decoder == DecoderKind::Sabm).then_some(&grid);
            if let Some(decided) = decoder.push(hard, llrs).expect("block sizes match") {
                if (1..=counted).contains(&emitted) {
                    let (info, _) = &sent[emitted - 1];
                    out.post_errors.push(count_diff(&code.extract_info(&decided), info));
                }
                emitted += 1;
            }
        }
        debug_assert_eq!(out.post_errors.len(), counted);
        out.bdd_calls = decoder.totals().bdd_calls;
        out.windows = decoder.windows_decoded();
        out
    }
}

pub(crate) fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Simulates one SNR point until the stopping rule fires.
pub fn run_point(cfg: &SimConfig, snr_db: f64) -> Result<BerStats> {
    let mut check = cfg.clone();
    check.snr_points = vec![snr_db];
    check.validate()?;
    let setup = PointSetup::new(cfg, snr_db)?;
    let start = Instant::now();

    let mut stats = with_pool(cfg.workers, || {
        let mut stats = BerStats::default();
        let mut next = 0u64;
        'outer: loop {
            let batch: Vec<TrialOutcome> = (next..next + BATCH)
                .into_par_iter()
                .map(|i| setup.run_trial(i))
                .collect();
            next += BATCH;
            for t in &batch {
                stats.absorb(t);
                if stats.block_errors >= cfg.stop.min_word_errors
                    || stats.blocks_run >= cfg.stop.max_blocks
                {
                    break 'outer;
                }
            }
        }
        stats
    })?;

    if let Some(scc) = &setup.scc {
        stats.eta = Some(
            ComplexityStats::from_totals(
                stats.bdd_calls_total,
                stats.windows,
                scc.w(),
                cfg.scc.window,
                cfg.scc.iterations,
            )?
            .eta,
        );
    }
    stats.wall_seconds = start.elapsed().as_secs_f64();
    Ok(stats)
}
