//! Flipping-mask diagnostics: how many positions of a product-code block
//! fall at or below the reliability threshold.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modem::{Demapper, Pam, ReliabilityGrid};
use crate::pc::PcCode;

use super::config::{Scheme, SimConfig};
use super::engine::{random_bits, transmit_block, trial_rng, with_pool};

#[derive(Debug, Clone, PartialEq)]
pub struct MaskStats {
    pub per_block_counts: Vec<usize>,
    pub mean_non_hrb_count: f64,
    /// Mean count divided by the block size w².
    pub ratio: f64,
    /// Non-HRB flags of the first block, row-major.
    pub first_mask: Vec<bool>,
    pub side: usize,
}

impl MaskStats {
    /// The first block's mask as `w` lines, `#` for non-HRB and `.` otherwise.
    pub fn inset_text(&self) -> String {
        let mut s = String::with_capacity(self.side * (self.side + 1));
        for row in self.first_mask.chunks(self.side) {
            s.extend(row.iter().map(|&m| if m { '#' } else { '.' }));
            s.push('\n');
        }
        s
    }

    pub fn counts_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["block", "non_hrb_count"])?;
        for (i, c) in self.per_block_counts.iter().enumerate() {
            w.write_record([i.to_string(), c.to_string()])?;
        }
        w.flush()?;
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
    }
}

/// Positions with |λ| ≤ δ.
pub fn non_hrb_mask(grid: &ReliabilityGrid, delta: f64) -> Vec<bool> {
    grid.llrs().iter().map(|l| l.abs() <= delta).collect()
}

/// Simulates `num_blocks` product-code blocks through the channel and counts
/// the positions that are not marked highly reliable.
pub fn mask_stats(cfg: &SimConfig, snr_db: f64, num_blocks: usize) -> Result<MaskStats> {
    if cfg.scheme != Scheme::Pc {
        return Err(Error::Config("mask statistics are defined for product codes".into()));
    }
    if num_blocks == 0 {
        return Err(Error::Config("at least one block is required".into()));
    }
    let pam = Pam::new(cfg.mod_order)?;
    let demapper = Demapper::new(pam.clone(), snr_db, cfg.llr_mode);
    let code = PcCode::ebch_128();
    let delta = cfg.sabm.delta;
    let w = code.w();

    let grid_for = |i: u64| {
        let mut rng = trial_rng(cfg.master_seed, snr_db, i);
        let data = random_bits(code.info_bits(), &mut rng);
        let block = code.encode(&data).expect("payload has k*k bits");
        transmit_block(&block, &pam, &demapper, snr_db, &mut rng)
    };

    let per_block_counts: Vec<usize> = with_pool(cfg.workers, || {
        (0..num_blocks as u64)
            .into_par_iter()
            .map(|i| non_hrb_mask(&grid_for(i), delta).iter().filter(|&&m| m).count())
            .collect()
    })?;
    let mean = per_block_counts.iter().sum::<usize>() as f64 / num_blocks as f64;
    Ok(MaskStats {
        mean_non_hrb_count: mean,
        ratio: mean / (w * w) as f64,
        first_mask: non_hrb_mask(&grid_for(0), delta),
        per_block_counts,
        side: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_threshold_marks_nothing() {
        let cfg = SimConfig {
            sabm: crate::pc::SabmParams {
                delta: 0.0,
                ..Default::default()
            },
            ..SimConfig::default()
        };
        let m = mask_stats(&cfg, 6.2, 3).unwrap();
        assert_eq!(m.per_block_counts, vec![0, 0, 0]);
        assert!(m.inset_text().lines().all(|l| l.len() == 128 && !l.contains('#')));
        assert_eq!(m.inset_text().lines().count(), 128);
    }

    #[test]
    fn inset_matches_first_block_count() {
        let m = mask_stats(&SimConfig::default(), 6.2, 2).unwrap();
        let hashes = m.inset_text().chars().filter(|&c| c == '#').count();
        assert_eq!(hashes, m.per_block_counts[0]);
        let csv = m.counts_csv().unwrap();
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn scc_is_rejected() {
        let cfg = SimConfig {
            scheme: Scheme::Scc,
            ..SimConfig::default()
        };
        assert!(mask_stats(&cfg, 6.0, 1).is_err());
    }
}
