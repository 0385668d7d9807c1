//! Staircase codes built from a length-`2w` component code, decoded with a
//! sliding window.
//!
//! Every row `r` of `[B_{i−1}ᵀ | B_i]` is a component codeword: word positions
//! `0..w` hold column `r` of the previous block, positions `w..2w` hold row
//! `r` of the current block. The first `k − w` columns of each block carry
//! new information, the rest carry parity. `B_0` is the all-zero block.
//!
//! A window holds `L` consecutive blocks and is swept `ℓ` times over its
//! `L − 1` adjacent pairs, oldest pair first. Marking only uses the LLRs of
//! the newest block, so the marking logic runs only on the newest pair.

use serde::{Deserialize, Serialize};

use crate::bch::BchCode;
use crate::block::BitMatrix;
use crate::error::{Error, Result};
use crate::modem::ReliabilityGrid;
use crate::pc::{sabm_component, select_hubs, DecodeStats, SabmParams, WordContext};

/// Decoder flavour, shared by the product and staircase simulators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    /// Plain iterative bounded-distance decoding.
    #[default]
    Ibdd,
    /// Soft-aided bit marking.
    Sabm,
}

impl DecoderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ibdd => "ibdd",
            Self::Sabm => "sabm",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SccCode {
    component: BchCode,
    w: usize,
}

impl SccCode {
    pub fn new(component: BchCode) -> Result<Self> {
        let n = component.n();
        if !n.is_multiple_of(2) || component.k() <= n / 2 {
            return Err(Error::Config(format!(
                "staircase component needs even n and k > n/2, got ({n}, {})",
                component.k()
            )));
        }
        Ok(Self { w: n / 2, component })
    }

    /// Staircase code over eBCH(256,239), block side 128.
    pub fn ebch_256() -> Self {
        Self::new(BchCode::new(8, 2, true).expect("eBCH(256,239) parameters are valid"))
            .expect("eBCH(256,239) has even length")
    }

    pub fn component(&self) -> &BchCode {
        &self.component
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// Information columns per block, k − w.
    pub fn info_cols(&self) -> usize {
        self.component.k() - self.w
    }

    pub fn info_bits_per_block(&self) -> usize {
        self.w * self.info_cols()
    }

    pub fn rate(&self) -> f64 {
        self.info_cols() as f64 / self.w as f64
    }

    /// Encodes the block following `prev` from `w·(k − w)` information bits (row-major).
    pub fn encode_next(&self, prev: &BitMatrix, info: &[u8]) -> Result<BitMatrix> {
        let (w, ic) = (self.w, self.info_cols());
        if info.len() != w * ic {
            return Err(Error::Domain(format!(
                "block needs {} information bits, got {}",
                w * ic,
                info.len()
            )));
        }
        let mut msg = vec![0u8; self.component.k()];
        let mut word = vec![0u8; self.component.n()];
        let mut block = BitMatrix::zeros(w);
        for r in 0..w {
            prev.copy_column(r, &mut msg[..w]);
            msg[w..].copy_from_slice(&info[r * ic..(r + 1) * ic]);
            self.component.encode_into(&msg, &mut word)?;
            block.row_mut(r).copy_from_slice(&word[w..]);
        }
        Ok(block)
    }

    /// Information bits of a block, row-major.
    pub fn extract_info(&self, block: &BitMatrix) -> Vec<u8> {
        let ic = self.info_cols();
        (0..self.w).flat_map(|r| block.row(r)[..ic].iter().copied()).collect()
    }

    /// Component word `r` spanning `prev` and `cur`.
    pub fn pair_word(&self, prev: &BitMatrix, cur: &BitMatrix, r: usize, out: &mut [u8]) {
        let w = self.w;
        prev.copy_column(r, &mut out[..w]);
        out[w..].copy_from_slice(cur.row(r));
    }

    pub fn pair_row_is_codeword(&self, prev: &BitMatrix, cur: &BitMatrix, r: usize) -> bool {
        self.component
            .syndromes_of(prev.column(r).chain(cur.row(r).iter().copied()))
            .is_zero()
    }

    /// True when all `w` component words of the pair are codewords.
    pub fn pair_is_valid(&self, prev: &BitMatrix, cur: &BitMatrix) -> bool {
        (0..self.w).all(|r| self.pair_row_is_codeword(prev, cur, r))
    }
}

/// Encodes `num_blocks` blocks after the all-zero `B_0` (which is not returned).
pub fn scc_encode(
    code: &SccCode,
    info_stream: impl IntoIterator<Item = u8>,
    num_blocks: usize,
) -> Result<Vec<BitMatrix>> {
    let per_block = code.info_bits_per_block();
    let mut stream = info_stream.into_iter();
    let mut prev = BitMatrix::zeros(code.w());
    let mut out = Vec::with_capacity(num_blocks);
    let mut info = Vec::with_capacity(per_block);
    for i in 0..num_blocks {
        info.clear();
        info.extend(stream.by_ref().take(per_block));
        if info.len() != per_block {
            return Err(Error::Domain(format!(
                "information source exhausted in block {}",
                i + 1
            )));
        }
        let block = code.encode_next(&prev, &info)?;
        out.push(block.clone());
        prev = block;
    }
    Ok(out)
}

/// `L` consecutive received blocks, oldest first, decoded with `ℓ` iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct SccWindow {
    blocks: Vec<BitMatrix>,
    iterations: usize,
}

impl SccWindow {
    pub fn new(blocks: Vec<BitMatrix>, iterations: usize) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::Config("a decoding window needs at least 2 blocks".into()));
        }
        if iterations == 0 {
            return Err(Error::Config("window iterations must be at least 1".into()));
        }
        Ok(Self { blocks, iterations })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn blocks(&self) -> &[BitMatrix] {
        &self.blocks
    }

    /// Appends a newly received block at the newest end.
    pub fn push(&mut self, block: BitMatrix) {
        self.blocks.push(block);
    }
}

/// BDD-call accounting against the standard-decoding baseline `w(L−1)ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityStats {
    /// Average BDD calls per decoded window.
    pub n_bar: f64,
    /// Calls per window of standard decoding, w·(L−1)·ℓ.
    pub n_sd: f64,
    /// Relative increase (n_bar − n_sd)/n_sd.
    pub eta: f64,
}

impl ComplexityStats {
    pub fn new(n_bar: f64, n_sd: f64) -> Result<Self> {
        let eta = relative_increase(n_bar, n_sd)?;
        Ok(Self { n_bar, n_sd, eta })
    }

    /// From a call total over `windows` windows of `L` blocks and `ℓ` iterations.
    pub fn from_totals(
        total_calls: u64,
        windows: u64,
        w: usize,
        window_len: usize,
        iterations: usize,
    ) -> Result<Self> {
        if windows == 0 {
            return Err(Error::Domain("no windows decoded".into()));
        }
        Self::new(
            total_calls as f64 / windows as f64,
            baseline_calls(w, window_len, iterations) as f64,
        )
    }
}

/// N_sd = w·(L−1)·ℓ.
pub fn baseline_calls(w: usize, window_len: usize, iterations: usize) -> u64 {
    (w * window_len.saturating_sub(1) * iterations) as u64
}

fn relative_increase(n_bar: f64, n_sd: f64) -> Result<f64> {
    if n_sd <= 0.0 {
        return Err(Error::Domain("baseline call count must be positive".into()));
    }
    Ok((n_bar - n_sd) / n_sd)
}

/// η = (N̄ − N_sd)/N_sd.
pub fn eta(stats: &ComplexityStats) -> Result<f64> {
    relative_increase(stats.n_bar, stats.n_sd)
}

/// Marks of the newest block in word coordinates of the newest pair.
struct NewestMarks {
    w: usize,
    hrb: Vec<bool>,
    /// Per row of the newest block, word positions (`w + col`) of its HUBs.
    hubs: Vec<Vec<usize>>,
}

impl NewestMarks {
    fn new(llrs: &ReliabilityGrid, params: &SabmParams, hub_count: usize) -> Self {
        let w = llrs.side();
        let hrb: Vec<bool> = llrs.llrs().iter().map(|l| l.abs() > params.delta).collect();
        let hubs = (0..w)
            .map(|r| {
                select_hubs(
                    (0..w)
                        .filter(|&c| !hrb[r * w + c])
                        .map(|c| (w + c, llrs.get(r, c).abs())),
                    hub_count,
                )
            })
            .collect();
        Self { w, hrb, hubs }
    }
}

/// Context of component word `row` in the newest pair of a window.
struct NewestPairContext<'a> {
    code: &'a SccCode,
    marks: &'a NewestMarks,
    /// Block before the pair, if it is inside the window.
    older: Option<&'a BitMatrix>,
    prev: &'a BitMatrix,
    row: usize,
}

impl WordContext for NewestPairContext<'_> {
    fn is_hrb(&self, pos: usize) -> bool {
        let w = self.marks.w;
        pos >= w && self.marks.hrb[self.row * w + (pos - w)]
    }

    fn orthogonal_is_codeword(&self, pos: usize) -> bool {
        // Bits of the newest block have no second word inside the window.
        if pos >= self.marks.w {
            return false;
        }
        // Bit prev[pos][row] also sits in word `pos` of the (older, prev) pair.
        self.older
            .is_some_and(|older| self.code.pair_row_is_codeword(older, self.prev, pos))
    }
}

/// Decodes a full window, removes its oldest block and returns it together
/// with the call accounting of this window.
///
/// In [`DecoderKind::Sabm`] mode `llrs_last` must hold the channel LLRs of
/// the newest block.
pub fn scc_window_decode(
    code: &SccCode,
    window: &mut SccWindow,
    mode: DecoderKind,
    llrs_last: Option<&ReliabilityGrid>,
    params: &SabmParams,
) -> Result<(BitMatrix, ComplexityStats, DecodeStats)> {
    let w = code.w();
    let len = window.blocks.len();
    if len < 2 {
        return Err(Error::Config("a decoding window needs at least 2 blocks".into()));
    }
    let marks = match mode {
        DecoderKind::Ibdd => None,
        DecoderKind::Sabm => {
            let llrs = llrs_last.ok_or_else(|| {
                Error::Config("marking decoder needs the newest block's LLRs".into())
            })?;
            if llrs.side() != w {
                return Err(Error::Domain(format!(
                    "LLR grid side {} does not match block side {w}",
                    llrs.side()
                )));
            }
            Some(NewestMarks::new(llrs, params, code.component().hub_count()))
        }
    };

    let bch = code.component();
    let mut stats = DecodeStats::default();
    let mut buf = vec![0u8; bch.n()];
    let newest = len - 1;
    for iter in 1..=window.iterations {
        stats.iterations += 1;
        let md_active = marks.is_some() && iter <= params.md_iters;
        for j in 1..len {
            for r in 0..w {
                let blocks = &window.blocks;
                code.pair_word(&blocks[j - 1], &blocks[j], r, &mut buf);
                let changed = match (&marks, j == newest) {
                    (Some(m), true) => {
                        let ctx = NewestPairContext {
                            code,
                            marks: m,
                            older: (j >= 2).then(|| &blocks[j - 2]),
                            prev: &blocks[j - 1],
                            row: r,
                        };
                        sabm_component(bch, &mut buf, &m.hubs[r], &ctx, params, md_active, &mut stats)
                    }
                    _ => sabm_component(bch, &mut buf, &[], &NoMarks, params, false, &mut stats),
                };
                if changed {
                    let (left, right) = window.blocks.split_at_mut(j);
                    left[j - 1].write_column(r, &buf[..w]);
                    right[0].row_mut(r).copy_from_slice(&buf[w..]);
                }
            }
        }
    }

    let complexity = ComplexityStats::new(
        stats.bdd_calls as f64,
        baseline_calls(w, len, window.iterations) as f64,
    )?;
    let oldest = window.blocks.remove(0);
    Ok((oldest, complexity, stats))
}

struct NoMarks;

impl WordContext for NoMarks {
    fn is_hrb(&self, _: usize) -> bool {
        false
    }
    fn orthogonal_is_codeword(&self, _: usize) -> bool {
        false
    }
}

/// Streaming decoder: feed received blocks, get decided blocks back.
///
/// The window starts out holding the known all-zero `B_0`; once it holds `L`
/// blocks every push decodes it and emits the oldest block, so the first
/// emission is `B_0` itself.
#[derive(Debug, Clone)]
pub struct SccDecoder {
    code: SccCode,
    window_len: usize,
    mode: DecoderKind,
    params: SabmParams,
    window: SccWindow,
    total: DecodeStats,
    windows: u64,
}

impl SccDecoder {
    pub fn new(
        code: SccCode,
        window_len: usize,
        iterations: usize,
        mode: DecoderKind,
        params: SabmParams,
    ) -> Result<Self> {
        if window_len < 2 {
            return Err(Error::Config(format!("window size L={window_len} must be >= 2")));
        }
        if iterations == 0 {
            return Err(Error::Config("window iterations must be at least 1".into()));
        }
        let window = SccWindow {
            blocks: vec![BitMatrix::zeros(code.w())],
            iterations,
        };
        Ok(Self {
            code,
            window_len,
            mode,
            params,
            window,
            total: DecodeStats::default(),
            windows: 0,
        })
    }

    pub fn push(
        &mut self,
        block: BitMatrix,
        llrs: Option<&ReliabilityGrid>,
    ) -> Result<Option<BitMatrix>> {
        if block.side() != self.code.w() {
            return Err(Error::Domain("received block has the wrong size".into()));
        }
        self.window.push(block);
        if self.window.len() < self.window_len {
            return Ok(None);
        }
        let (oldest, _, stats) =
            scc_window_decode(&self.code, &mut self.window, self.mode, llrs, &self.params)?;
        self.total += stats;
        self.windows += 1;
        Ok(Some(oldest))
    }

    /// Decoding counters summed over all windows so far.
    pub fn totals(&self) -> DecodeStats {
        self.total
    }

    pub fn windows_decoded(&self) -> u64 {
        self.windows
    }

    pub fn complexity(&self) -> Result<ComplexityStats> {
        ComplexityStats::from_totals(
            self.total.bdd_calls,
            self.windows,
            self.code.w(),
            self.window_len,
            self.window.iterations,
        )
    }
}
