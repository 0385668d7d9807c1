//! Product codes over an extended BCH component, with standard iterative
//! bounded-distance decoding (iBDD) and the soft-aided bit-marking decoder.
//!
//! A block is a `w × w` bit matrix whose rows and columns are all component
//! codewords. The `k × k` payload occupies the top-left corner.

mod marking;
mod sabm;

use std::ops::AddAssign;

pub use marking::{mark_bits, MarkState, SabmParams};
pub use sabm::{
    bit_flip_recover, detect_miscorrection, flags_miscorrection, sabm_decode, FlipReason,
    Recovery, WordContext,
};
pub(crate) use marking::select_hubs;
pub(crate) use sabm::sabm_component;

use serde::{Deserialize, Serialize};

use crate::bch::{apply_pattern, BchCode, BddOutcome};
use crate::block::BitMatrix;
use crate::error::{Error, Result};

/// Which family of component words a decode step works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Row,
    Column,
}

/// Counters collected during one decode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeStats {
    /// Component BDD invocations, retries included.
    pub bdd_calls: u64,
    pub miscorrections_detected: u64,
    /// Bit-flip retries (one per re-run of BDD on a flipped word).
    pub flips_attempted: u64,
    pub flips_accepted: u64,
    /// Iterations actually executed (early exit included).
    pub iterations: u64,
}

impl AddAssign for DecodeStats {
    fn add_assign(&mut self, rhs: Self) {
        self.bdd_calls += rhs.bdd_calls;
        self.miscorrections_detected += rhs.miscorrections_detected;
        self.flips_attempted += rhs.flips_attempted;
        self.flips_accepted += rhs.flips_accepted;
        self.iterations += rhs.iterations;
    }
}

/// Product code with identical row and column components.
#[derive(Debug, Clone)]
pub struct PcCode {
    component: BchCode,
}

impl PcCode {
    pub fn new(component: BchCode) -> Self {
        Self { component }
    }

    /// The product of eBCH(128,113) with itself.
    pub fn ebch_128() -> Self {
        Self::new(BchCode::new(7, 2, true).expect("eBCH(128,113) parameters are valid"))
    }

    pub fn component(&self) -> &BchCode {
        &self.component
    }

    /// Block side length, equal to the component length.
    pub fn w(&self) -> usize {
        self.component.n()
    }

    pub fn k(&self) -> usize {
        self.component.k()
    }

    pub fn rate(&self) -> f64 {
        self.component.rate().powi(2)
    }

    pub fn info_bits(&self) -> usize {
        self.k() * self.k()
    }

    /// Encodes a `k × k` payload (row-major) into a `w × w` block.
    pub fn encode(&self, data: &[u8]) -> Result<BitMatrix> {
        let (w, k) = (self.w(), self.k());
        if data.len() != k * k {
            return Err(Error::Domain(format!(
                "payload of {} bits does not match {k}x{k}",
                data.len()
            )));
        }
        let mut block = BitMatrix::zeros(w);
        for (r, msg) in data.chunks_exact(k).enumerate() {
            self.component.encode_into(msg, block.row_mut(r))?;
        }
        let mut msg = vec![0u8; k];
        let mut col = vec![0u8; w];
        for c in 0..w {
            for (r, m) in msg.iter_mut().enumerate() {
                *m = block.get(r, c);
            }
            self.component.encode_into(&msg, &mut col)?;
            block.write_column(c, &col);
        }
        Ok(block)
    }

    /// The `k × k` payload of a block, row-major.
    pub fn extract_info(&self, block: &BitMatrix) -> Vec<u8> {
        let k = self.k();
        (0..k).flat_map(|r| block.row(r)[..k].iter().copied()).collect()
    }

    pub fn row_is_codeword(&self, block: &BitMatrix, row: usize) -> bool {
        self.component.is_codeword(block.row(row))
    }

    pub fn column_is_codeword(&self, block: &BitMatrix, col: usize) -> bool {
        self.component.syndromes_of(block.column(col)).is_zero()
    }

    /// True when every row and column is a component codeword.
    pub fn is_valid_block(&self, block: &BitMatrix) -> bool {
        (0..self.w()).all(|i| self.row_is_codeword(block, i) && self.column_is_codeword(block, i))
    }
}

/// Free-function form of [`PcCode::encode`].
pub fn pc_encode(code: &PcCode, data: &[u8]) -> Result<BitMatrix> {
    code.encode(data)
}

/// Standard iBDD: alternate row and column passes, stopping early once a
/// full iteration leaves the block unchanged.
pub fn ibdd_decode(code: &PcCode, block: &BitMatrix, iters: usize) -> (BitMatrix, DecodeStats) {
    ibdd_decode_with(code, block, iters, true)
}

/// iBDD with explicit control over early exit.
pub fn ibdd_decode_with(
    code: &PcCode,
    block: &BitMatrix,
    iters: usize,
    early_exit: bool,
) -> (BitMatrix, DecodeStats) {
    let bch = code.component();
    let w = code.w();
    let mut out = block.clone();
    let mut stats = DecodeStats::default();
    let mut col = vec![0u8; w];
    for _ in 0..iters {
        stats.iterations += 1;
        let mut changed = false;
        for r in 0..w {
            stats.bdd_calls += 1;
            if let BddOutcome::Success(e) = bch.bdd_decode(out.row(r)) {
                if !e.is_empty() {
                    apply_pattern(out.row_mut(r), &e);
                    changed = true;
                }
            }
        }
        for c in 0..w {
            out.copy_column(c, &mut col);
            stats.bdd_calls += 1;
            if let BddOutcome::Success(e) = bch.bdd_decode(&col) {
                if !e.is_empty() {
                    for &p in &e {
                        out.flip(p, c);
                    }
                    changed = true;
                }
            }
        }
        if early_exit && !changed {
            break;
        }
    }
    (out, stats)
}
