use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modem::ReliabilityGrid;

use super::PcCode;

/// Tuning knobs of the bit-marking decoder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SabmParams {
    /// Reliability threshold: a bit is highly reliable iff |λ| > delta.
    pub delta: f64,
    /// Total decoding iterations.
    pub total_iters: usize,
    /// Leading iterations with miscorrection detection and bit flipping.
    pub md_iters: usize,
    /// Sequential single-bit flip attempts after a BDD failure.
    pub failure_flip_attempts: usize,
    /// Skip iterations that provably cannot change the block.
    pub early_exit: bool,
}

impl Default for SabmParams {
    fn default() -> Self {
        Self {
            delta: 5.0,
            total_iters: 10,
            md_iters: 5,
            failure_flip_attempts: 1,
            early_exit: true,
        }
    }
}

impl SabmParams {
    pub fn validate(&self) -> Result<()> {
        if self.delta.is_nan() || self.delta < 0.0 {
            return Err(Error::Config(format!("delta must be >= 0, got {}", self.delta)));
        }
        if self.total_iters == 0 {
            return Err(Error::Config("at least one iteration is required".into()));
        }
        if self.md_iters > self.total_iters {
            return Err(Error::Config(format!(
                "md_iters={} exceeds total_iters={}",
                self.md_iters, self.total_iters
            )));
        }
        Ok(())
    }

    /// Parameters under which the marking decoder reduces to plain iBDD.
    pub fn plain(total_iters: usize) -> Self {
        Self {
            delta: f64::INFINITY,
            total_iters,
            md_iters: 0,
            failure_flip_attempts: 0,
            early_exit: true,
        }
    }
}

/// Reliability marks of one product-code block, frozen at channel time.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkState {
    w: usize,
    hrb: Vec<bool>,
    /// Column indices of each row's unreliable bits, least reliable first.
    row_hubs: Vec<Vec<usize>>,
    /// Row indices of each column's unreliable bits, least reliable first.
    col_hubs: Vec<Vec<usize>>,
}

impl MarkState {
    pub fn side(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn is_hrb(&self, row: usize, col: usize) -> bool {
        self.hrb[row * self.w + col]
    }

    pub fn row_hubs(&self, row: usize) -> &[usize] {
        &self.row_hubs[row]
    }

    pub fn col_hubs(&self, col: usize) -> &[usize] {
        &self.col_hubs[col]
    }

    /// Positions that are not highly reliable.
    pub fn non_hrb_count(&self) -> usize {
        self.hrb.iter().filter(|&&h| !h).count()
    }
}

/// The `count` least reliable candidates, ties broken by lower position.
pub(crate) fn select_hubs(candidates: impl Iterator<Item = (usize, f64)>, count: usize) -> Vec<usize> {
    let mut c: Vec<(usize, f64)> = candidates.collect();
    c.sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    c.truncate(count);
    c.into_iter().map(|(p, _)| p).collect()
}

/// Marks highly reliable bits (|λ| > δ) and, for every row and column, the
/// `d0 − t − 1` least reliable non-HRB positions.
pub fn mark_bits(llrs: &ReliabilityGrid, params: &SabmParams, code: &PcCode) -> Result<MarkState> {
    let w = code.w();
    if llrs.side() != w {
        return Err(Error::Domain(format!(
            "LLR grid side {} does not match block side {w}",
            llrs.side()
        )));
    }
    let delta = params.delta;
    let hrb: Vec<bool> = llrs.llrs().iter().map(|l| l.abs() > delta).collect();
    let count = code.component().hub_count();
    let row_hubs = (0..w)
        .map(|r| {
            select_hubs(
                (0..w)
                    .filter(|&c| !hrb[r * w + c])
                    .map(|c| (c, llrs.get(r, c).abs())),
                count,
            )
        })
        .collect();
    let col_hubs = (0..w)
        .map(|c| {
            select_hubs(
                (0..w)
                    .filter(|&r| !hrb[r * w + c])
                    .map(|r| (r, llrs.get(r, c).abs())),
                count,
            )
        })
        .collect();
    Ok(MarkState {
        w,
        hrb,
        row_hubs,
        col_hubs,
    })
}
