//! Soft-aided bit marking on top of iterative BDD.
//!
//! Every component decode in an MD-enabled iteration goes through
//! [`sabm_component`]: a BDD success is screened for miscorrection, and a
//! failure or a detected miscorrection triggers bit flipping on the least
//! reliable bits followed by another BDD call. Whatever a retry proposes must
//! survive the same screening, otherwise the word is left as received.

use crate::bch::{apply_pattern, BchCode, BddOutcome};
use crate::block::BitMatrix;
use crate::error::Result;
use crate::modem::ReliabilityGrid;

use super::marking::{mark_bits, MarkState, SabmParams};
use super::{Axis, DecodeStats, PcCode};

/// What a component decode needs to know about the rest of the code.
pub trait WordContext {
    /// Whether word position `pos` is a highly reliable bit.
    fn is_hrb(&self, pos: usize) -> bool;
    /// Whether the other component word through `pos` currently has zero syndrome.
    fn orthogonal_is_codeword(&self, pos: usize) -> bool;
}

/// Why bit flipping was entered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipReason {
    Failure,
    /// A success of weight `weight` was rejected as a miscorrection.
    Miscorrection { weight: usize },
}

/// Result of [`bit_flip_recover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recovery {
    /// The word was revised; `changed` lists every position that differs from the input.
    Corrected { changed: Vec<usize> },
    /// Nothing survived; the word is untouched.
    Reverted,
}

/// Miscorrection rule: a correction is suspicious if it touches a highly
/// reliable bit or a bit whose orthogonal word is already a codeword.
pub fn flags_miscorrection(changed: &[usize], ctx: &impl WordContext) -> bool {
    changed
        .iter()
        .any(|&p| ctx.is_hrb(p) || ctx.orthogonal_is_codeword(p))
}

/// Bit flipping after a failure or a detected miscorrection.
///
/// `word` is the word as received by the component decoder (the rejected
/// miscorrection, if any, has not been applied). `hubs` lists its least
/// reliable positions in increasing reliability.
pub fn bit_flip_recover(
    code: &BchCode,
    word: &mut [u8],
    hubs: &[usize],
    reason: FlipReason,
    params: &SabmParams,
    ctx: &impl WordContext,
    stats: &mut DecodeStats,
) -> Recovery {
    let mut trial = word.to_vec();
    let mut attempt = |flips: &[usize], stats: &mut DecodeStats| -> Option<Vec<usize>> {
        trial.copy_from_slice(word);
        apply_pattern(&mut trial, flips);
        stats.flips_attempted += 1;
        stats.bdd_calls += 1;
        let BddOutcome::Success(e) = code.bdd_decode(&trial) else {
            return None;
        };
        let mut changed: Vec<usize> = flips.to_vec();
        for p in e {
            match changed.iter().position(|&q| q == p) {
                Some(i) => {
                    changed.swap_remove(i);
                }
                None => changed.push(p),
            }
        }
        if changed.is_empty() || flags_miscorrection(&changed, ctx) {
            return None;
        }
        Some(changed)
    };

    let accepted = match reason {
        FlipReason::Failure => hubs
            .iter()
            .take(params.failure_flip_attempts)
            .find_map(|&h| attempt(&[h], stats)),
        FlipReason::Miscorrection { weight } => {
            let count = code.d0().saturating_sub(weight + 1).min(hubs.len());
            if count == 0 {
                None
            } else {
                attempt(&hubs[..count], stats)
            }
        }
    };

    match accepted {
        Some(mut changed) => {
            apply_pattern(word, &changed);
            changed.sort_unstable();
            stats.flips_accepted += 1;
            Recovery::Corrected { changed }
        }
        None => Recovery::Reverted,
    }
}

/// One component decode with optional marking logic. Returns whether the word changed.
pub(crate) fn sabm_component(
    code: &BchCode,
    word: &mut [u8],
    hubs: &[usize],
    ctx: &impl WordContext,
    params: &SabmParams,
    md_active: bool,
    stats: &mut DecodeStats,
) -> bool {
    stats.bdd_calls += 1;
    let outcome = code.bdd_decode(word);
    if !md_active {
        return match outcome {
            BddOutcome::Success(e) if !e.is_empty() => {
                apply_pattern(word, &e);
                true
            }
            _ => false,
        };
    }
    let reason = match &outcome {
        BddOutcome::Success(e) if e.is_empty() => return false,
        BddOutcome::Success(e) => {
            if !flags_miscorrection(e, ctx) {
                apply_pattern(word, e);
                return true;
            }
            stats.miscorrections_detected += 1;
            FlipReason::Miscorrection { weight: e.len() }
        }
        BddOutcome::Failure => {
            if params.failure_flip_attempts == 0 {
                return false;
            }
            FlipReason::Failure
        }
    };
    matches!(
        bit_flip_recover(code, word, hubs, reason, params, ctx, stats),
        Recovery::Corrected { .. }
    )
}

/// Context of one row or column of a product-code block.
struct PcWordContext<'a> {
    code: &'a PcCode,
    block: &'a BitMatrix,
    marks: &'a MarkState,
    axis: Axis,
    index: usize,
}

impl WordContext for PcWordContext<'_> {
    fn is_hrb(&self, pos: usize) -> bool {
        match self.axis {
            Axis::Row => self.marks.is_hrb(self.index, pos),
            Axis::Column => self.marks.is_hrb(pos, self.index),
        }
    }

    fn orthogonal_is_codeword(&self, pos: usize) -> bool {
        match self.axis {
            Axis::Row => self.code.column_is_codeword(self.block, pos),
            Axis::Column => self.code.row_is_codeword(self.block, pos),
        }
    }
}

/// Miscorrection check for a BDD success on row or column `index` of `block`.
pub fn detect_miscorrection(
    outcome: &BddOutcome,
    axis: Axis,
    index: usize,
    marks: &MarkState,
    block: &BitMatrix,
    code: &PcCode,
) -> bool {
    let ctx = PcWordContext {
        code,
        block,
        marks,
        axis,
        index,
    };
    flags_miscorrection(outcome.error_pattern(), &ctx)
}

/// Decodes a product-code block with bit marking.
///
/// Iterations `1..=md_iters` use miscorrection detection and bit flipping;
/// the rest are plain iBDD. With early exit on, an iteration that changes
/// nothing skips the remaining iterations of the same kind, which cannot
/// change anything either.
pub fn sabm_decode(
    code: &PcCode,
    block: &BitMatrix,
    llrs: &ReliabilityGrid,
    params: &SabmParams,
) -> Result<(BitMatrix, DecodeStats)> {
    params.validate()?;
    let marks = mark_bits(llrs, params, code)?;
    let bch = code.component();
    let w = code.w();
    let mut out = block.clone();
    let mut stats = DecodeStats::default();
    let mut buf = vec![0u8; w];

    let mut iter = 1;
    while iter <= params.total_iters {
        let md_active = iter <= params.md_iters;
        stats.iterations += 1;
        let mut changed = false;
        for axis in [Axis::Row, Axis::Column] {
            for index in 0..w {
                match axis {
                    Axis::Row => buf.copy_from_slice(out.row(index)),
                    Axis::Column => out.copy_column(index, &mut buf),
                }
                let hubs = match axis {
                    Axis::Row => marks.row_hubs(index),
                    Axis::Column => marks.col_hubs(index),
                };
                let ctx = PcWordContext {
                    code,
                    block: &out,
                    marks: &marks,
                    axis,
                    index,
                };
                let word_changed =
                    sabm_component(bch, &mut buf, hubs, &ctx, params, md_active, &mut stats);
                if word_changed {
                    match axis {
                        Axis::Row => out.row_mut(index).copy_from_slice(&buf),
                        Axis::Column => out.write_column(index, &buf),
                    }
                    changed = true;
                }
            }
        }
        if params.early_exit && !changed {
            // A valid block is a fixed point of both iteration kinds.
            if md_active && !code.is_valid_block(&out) {
                iter = params.md_iters + 1;
                continue;
            }
            break;
        }
        iter += 1;
    }
    Ok((out, stats))
}
