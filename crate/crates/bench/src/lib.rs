//! Seeded fixtures shared by the decoder benchmarks.

use fecmark_core::modem::{awgn_transmit, Demapper, LlrMode, Pam};
use fecmark_core::{BitMatrix, PcCode, ReliabilityGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A received 2-PAM product-code block with its reliabilities.
pub struct NoisyBlock {
    pub sent: BitMatrix,
    pub hard: BitMatrix,
    pub llrs: ReliabilityGrid,
}

pub fn random_bits(n: usize, rng: &mut impl Rng) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

/// Encodes random data and sends it through the channel at `snr_db`.
pub fn noisy_pc_block(code: &PcCode, snr_db: f64, seed: u64) -> NoisyBlock {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sent = code.encode(&random_bits(code.info_bits(), &mut rng)).expect("payload size");
    let demapper = Demapper::new(Pam::new(2).expect("valid order"), snr_db, LlrMode::Exact);
    let symbols = demapper.pam().modulate(sent.bits()).expect("one bit per symbol");
    let y = awgn_transmit(&symbols, snr_db, &mut rng);
    let llrs = ReliabilityGrid::new(code.w(), demapper.demap_all(&y)).expect("square block");
    let hard = BitMatrix::from_bits(code.w(), llrs.hard_decisions()).expect("square block");
    NoisyBlock { sent, hard, llrs }
}
