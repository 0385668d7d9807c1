//! Gray-labelled M-PAM over a real AWGN channel, with LLR demapping and a
//! block interleaver for the multi-bit constellations.
//!
//! Channel model: `y = √ρ·x + z` with `z ~ N(0, 1)` and `ρ = 10^(snr_db/10)`,
//! constellation normalized to unit average energy. LLRs follow the
//! convention that a positive value favours bit 0.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of the LLR expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LlrMode {
    /// Log-sum-exp over each labelling subset.
    #[default]
    Exact,
    /// Nearest point of each subset only.
    MaxLog,
}

impl LlrMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::MaxLog => "maxlog",
        }
    }
}

/// Gray-labelled M-PAM constellation.
///
/// Level `i` has amplitude `(M − 1 − 2i)/√E` and label `i ^ (i >> 1)`, so the
/// all-zero label sits on the largest positive amplitude and neighbouring
/// levels differ in a single bit. Label bits are read most significant first.
#[derive(Debug, Clone, PartialEq)]
pub struct Pam {
    order: usize,
    bits_per_symbol: usize,
    /// Amplitude of each level, indexed by level.
    amplitudes: Vec<f64>,
    /// Gray label of each level.
    labels: Vec<usize>,
    /// Level carrying each label.
    level_of_label: Vec<usize>,
}

impl Pam {
    pub fn new(order: usize) -> Result<Self> {
        if !matches!(order, 2 | 4 | 8) {
            return Err(Error::Config(format!(
                "unsupported PAM order {order}; expected 2, 4 or 8"
            )));
        }
        let bits_per_symbol = order.trailing_zeros() as usize;
        let energy = (order * order - 1) as f64 / 3.0;
        let scale = energy.sqrt().recip();
        let amplitudes = (0..order)
            .map(|i| (order as f64 - 1.0 - 2.0 * i as f64) * scale)
            .collect();
        let labels: Vec<usize> = (0..order).map(|i| i ^ (i >> 1)).collect();
        let mut level_of_label = vec![0; order];
        for (level, &label) in labels.iter().enumerate() {
            level_of_label[label] = level;
        }
        Ok(Self {
            order,
            bits_per_symbol,
            amplitudes,
            labels,
            level_of_label,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Bit `k` (0 = most significant) of the label on `level`.
    #[inline]
    pub fn label_bit(&self, level: usize, k: usize) -> u8 {
        (self.labels[level] >> (self.bits_per_symbol - 1 - k) & 1) as u8
    }

    /// Maps each group of `log2 M` bits to an amplitude.
    pub fn modulate(&self, bits: &[u8]) -> Result<Vec<f64>> {
        if !bits.len().is_multiple_of(self.bits_per_symbol) {
            return Err(Error::Domain(format!(
                "{} bits is not a multiple of {} bits per symbol",
                bits.len(),
                self.bits_per_symbol
            )));
        }
        Ok(bits
            .chunks_exact(self.bits_per_symbol)
            .map(|group| {
                let label = group.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
                self.amplitudes[self.level_of_label[label]]
            })
            .collect())
    }
}

/// Converts an SNR in dB to the linear ρ.
pub fn snr_linear(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

/// Scales the symbols by √ρ and adds unit-variance Gaussian noise.
pub fn awgn_transmit(symbols: &[f64], snr_db: f64, rng: &mut impl Rng) -> Vec<f64> {
    awgn_transmit_with(symbols, snr_db, || rng.sample(StandardNormal))
}

/// As [`awgn_transmit`] with an explicit noise source.
pub fn awgn_transmit_with(symbols: &[f64], snr_db: f64, mut noise: impl FnMut() -> f64) -> Vec<f64> {
    let gain = snr_linear(snr_db).sqrt();
    symbols.iter().map(|&x| gain * x + noise()).collect()
}

/// Per-bit LLR computation for one constellation and SNR.
#[derive(Debug, Clone)]
pub struct Demapper {
    pam: Pam,
    gain: f64,
    mode: LlrMode,
}

impl Demapper {
    pub fn new(pam: Pam, snr_db: f64, mode: LlrMode) -> Self {
        Self {
            pam,
            gain: snr_linear(snr_db).sqrt(),
            mode,
        }
    }

    pub fn pam(&self) -> &Pam {
        &self.pam
    }

    /// LLRs of the `log2 M` label bits for one observation.
    pub fn demap(&self, y: f64, out: &mut [f64]) {
        let pam = &self.pam;
        debug_assert_eq!(out.len(), pam.bits_per_symbol);
        let mut metric = [0f64; 8];
        for (d, &a) in metric.iter_mut().zip(&pam.amplitudes) {
            let diff = y - self.gain * a;
            *d = 0.5 * diff * diff;
        }
        let metric = &metric[..pam.order];
        for (k, llr) in out.iter_mut().enumerate() {
            *llr = match self.mode {
                LlrMode::Exact => {
                    log_sum_exp_neg(metric, |i| pam.label_bit(i, k) == 0)
                        - log_sum_exp_neg(metric, |i| pam.label_bit(i, k) == 1)
                }
                LlrMode::MaxLog => {
                    min_metric(metric, |i| pam.label_bit(i, k) == 1)
                        - min_metric(metric, |i| pam.label_bit(i, k) == 0)
                }
            };
        }
    }

    /// Demaps a whole observation sequence, `log2 M` LLRs per symbol.
    pub fn demap_all(&self, ys: &[f64]) -> Vec<f64> {
        let b = self.pam.bits_per_symbol;
        let mut out = vec![0.0; ys.len() * b];
        for (y, chunk) in ys.iter().zip(out.chunks_exact_mut(b)) {
            self.demap(*y, chunk);
        }
        out
    }
}

/// `log Σ exp(−metric_i)` over the selected indices.
fn log_sum_exp_neg(metric: &[f64], select: impl Fn(usize) -> bool) -> f64 {
    let best = min_metric(metric, &select);
    let tail: f64 = metric
        .iter()
        .enumerate()
        .filter(|&(i, _)| select(i))
        .map(|(_, &d)| (best - d).exp())
        .sum();
    -best + tail.ln()
}

fn min_metric(metric: &[f64], select: impl Fn(usize) -> bool) -> f64 {
    metric
        .iter()
        .enumerate()
        .filter(|&(i, _)| select(i))
        .map(|(_, &d)| d)
        .fold(f64::INFINITY, f64::min)
}

/// Channel LLRs of one square code block, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityGrid {
    w: usize,
    llr: Vec<f64>,
}

impl ReliabilityGrid {
    pub fn new(w: usize, llr: Vec<f64>) -> Result<Self> {
        if llr.len() != w * w {
            return Err(Error::Domain(format!(
                "{} LLRs do not fill a {w}x{w} grid",
                llr.len()
            )));
        }
        Ok(Self { w, llr })
    }

    /// A grid with the same LLR at every position.
    pub fn constant(w: usize, value: f64) -> Self {
        Self {
            w,
            llr: vec![value; w * w],
        }
    }

    pub fn side(&self) -> usize {
        self.w
    }

    pub fn llrs(&self) -> &[f64] {
        &self.llr
    }

    pub fn llrs_mut(&mut self) -> &mut [f64] {
        &mut self.llr
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.llr[row * self.w + col]
    }

    /// Hard decisions: 1 iff λ < 0.
    pub fn hard_decisions(&self) -> Vec<u8> {
        self.llr.iter().map(|&l| u8::from(l < 0.0)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A permutation of block positions. Forward maps `out[j] = in[perm[j]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
    seed: Option<u64>,
}

impl Interleaver {
    pub fn identity(len: usize) -> Self {
        Self {
            perm: (0..len).collect(),
            seed: None,
        }
    }

    /// Uniformly random permutation drawn from `rng`.
    pub fn random(len: usize, rng: &mut impl Rng) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(rng);
        Self { perm, seed: None }
    }

    pub fn from_seed(len: usize, seed: u64) -> Self {
        let mut il = Self::random(len, &mut ChaCha8Rng::seed_from_u64(seed));
        il.seed = Some(seed);
        il
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply<T: Copy>(&self, block: &[T], direction: Direction) -> Result<Vec<T>> {
        if block.len() != self.perm.len() {
            return Err(Error::Domain(format!(
                "block of {} entries does not match interleaver of {}",
                block.len(),
                self.perm.len()
            )));
        }
        Ok(match direction {
            Direction::Forward => self.perm.iter().map(|&p| block[p]).collect(),
            Direction::Inverse => {
                let mut out = block.to_vec();
                for (j, &p) in self.perm.iter().enumerate() {
                    out[p] = block[j];
                }
                out
            }
        })
    }
}

/// Interleaving is only used for multi-bit symbols.
pub fn needs_interleaver(order: usize) -> bool {
    order > 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_pam_mapping() {
        let pam = Pam::new(2).unwrap();
        assert_eq!(pam.modulate(&[0, 1]).unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn four_and_eight_pam_levels() {
        let p4 = Pam::new(4).unwrap();
        let s5 = 5f64.sqrt();
        let expected = [3.0 / s5, 1.0 / s5, -1.0 / s5, -3.0 / s5];
        for (a, e) in p4.amplitudes().iter().zip(expected) {
            assert!((a - e).abs() < 1e-12);
        }
        let p8 = Pam::new(8).unwrap();
        let s21 = 21f64.sqrt();
        let mut got: Vec<f64> = p8.amplitudes().iter().map(|a| a * s21).collect();
        got.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip([-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0]) {
            assert!((g - e).abs() < 1e-12);
        }
        for p in [&p4, &p8] {
            let e: f64 = p.amplitudes().iter().map(|a| a * a).sum::<f64>() / p.order() as f64;
            assert!((e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn labels_are_gray() {
        for m in [2, 4, 8] {
            let p = Pam::new(m).unwrap();
            for i in 1..m {
                let diff = (0..p.bits_per_symbol())
                    .filter(|&k| p.label_bit(i, k) != p.label_bit(i - 1, k))
                    .count();
                assert_eq!(diff, 1);
            }
        }
    }

    #[test]
    fn modulate_rejects_partial_symbol() {
        assert!(matches!(
            Pam::new(8).unwrap().modulate(&[0, 1]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(Pam::new(16), Err(Error::Config(_))));
    }

    #[test]
    fn noiseless_channel_scales_only() {
        let y = awgn_transmit_with(&[1.0, -0.5], 6.0, || 0.0);
        let g = snr_linear(6.0).sqrt();
        assert_eq!(y, vec![g, -0.5 * g]);
    }

    #[test]
    fn noise_has_unit_variance_and_is_seeded() {
        let x = vec![1.0; 1_000_000];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = awgn_transmit(&x, 3.0, &mut rng);
        let g = snr_linear(3.0).sqrt();
        let n = y.len() as f64;
        let mean = y.iter().map(|v| v - g).sum::<f64>() / n;
        let var = y.iter().map(|v| (v - g - mean).powi(2)).sum::<f64>() / n;
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
        let again = awgn_transmit(&x[..1000], 3.0, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(&y[..1000], &again[..]);
    }

    #[test]
    fn two_pam_llr_closed_form() {
        // ρ = 4 (≈ 6.0206 dB), y = 0.5 → λ = 2·2·0.5 = 2
        let snr_db = 10.0 * 4f64.log10();
        for mode in [LlrMode::Exact, LlrMode::MaxLog] {
            let d = Demapper::new(Pam::new(2).unwrap(), snr_db, mode);
            let mut out = [0.0];
            d.demap(0.5, &mut out);
            assert!((out[0] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_pam_modes_agree_on_sweep() {
        let snr_db = 5.0;
        let exact = Demapper::new(Pam::new(2).unwrap(), snr_db, LlrMode::Exact);
        let maxlog = Demapper::new(Pam::new(2).unwrap(), snr_db, LlrMode::MaxLog);
        let (mut a, mut b) = ([0.0], [0.0]);
        for i in -5000..=5000 {
            let y = i as f64 * 1e-3;
            exact.demap(y, &mut a);
            maxlog.demap(y, &mut b);
            assert!((a[0] - b[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn four_pam_against_scalar_oracle() {
        // Direct evaluation with the four amplitudes written out by hand.
        let rho: f64 = 4.0;
        let s = rho.sqrt() / 5f64.sqrt();
        let pts = [3.0 * s, s, -s, -3.0 * s]; // labels 00, 01, 11, 10
        let m = |y: f64, x: f64| (y - x).powi(2) / 2.0;
        let oracle_exact_msb = |y: f64| {
            ((-m(y, pts[0])).exp() + (-m(y, pts[1])).exp()).ln()
                - ((-m(y, pts[2])).exp() + (-m(y, pts[3])).exp()).ln()
        };
        let oracle_maxlog_msb =
            |y: f64| m(y, pts[2]).min(m(y, pts[3])) - m(y, pts[0]).min(m(y, pts[1]));
        let snr_db = 10.0 * rho.log10();
        let exact = Demapper::new(Pam::new(4).unwrap(), snr_db, LlrMode::Exact);
        let maxlog = Demapper::new(Pam::new(4).unwrap(), snr_db, LlrMode::MaxLog);
        let (mut a, mut b) = ([0.0; 2], [0.0; 2]);
        for y in [0.0, 2.0 * s, 0.37, -1.9] {
            exact.demap(y, &mut a);
            maxlog.demap(y, &mut b);
            assert!((a[0] - oracle_exact_msb(y)).abs() < 1e-12);
            assert!((b[0] - oracle_maxlog_msb(y)).abs() < 1e-12);
        }
        // At y = 0 the MSB is undecided in both forms.
        exact.demap(0.0, &mut a);
        maxlog.demap(0.0, &mut b);
        assert!(a[0].abs() < 1e-12 && b[0].abs() < 1e-12);
        // Midway between the two bit-0 points the max-log value drops the
        // log 2 contributed by the second equidistant point.
        exact.demap(2.0 * s, &mut a);
        maxlog.demap(2.0 * s, &mut b);
        assert!(a[0] > b[0]);
        assert!((a[0] - b[0] - 2f64.ln()).abs() < 5e-3);
    }

    #[test]
    fn hard_decisions_agree_between_modes() {
        for m in [2, 4, 8] {
            let snr_db = 8.0;
            let g = snr_linear(snr_db).sqrt();
            let exact = Demapper::new(Pam::new(m).unwrap(), snr_db, LlrMode::Exact);
            let maxlog = Demapper::new(Pam::new(m).unwrap(), snr_db, LlrMode::MaxLog);
            let b = exact.pam().bits_per_symbol();
            let (mut a, mut c) = (vec![0.0; b], vec![0.0; b]);
            // Each log-sum-exp over M/2 points sits within ln(M/2) of its
            // largest term, so the two LLRs differ by at most that much.
            let bound = ((m / 2) as f64).ln();
            for i in 0..=60_000 {
                let y = -3.0 * g + 6.0 * g * i as f64 / 60_000.0;
                exact.demap(y, &mut a);
                maxlog.demap(y, &mut c);
                for (x, z) in a.iter().zip(&c) {
                    assert!((x - z).abs() <= bound + 1e-9, "M={m} y={y}");
                    if z.abs() > bound + 1e-9 {
                        assert_eq!(x.signum(), z.signum(), "M={m} y={y}");
                    }
                }
            }
        }
    }

    #[test]
    fn exact_llr_monotone_for_two_pam() {
        let d = Demapper::new(Pam::new(2).unwrap(), 2.0, LlrMode::Exact);
        let mut prev = f64::NEG_INFINITY;
        let mut out = [0.0];
        for i in -1000..=1000 {
            d.demap(i as f64 * 0.01, &mut out);
            assert!(out[0] > prev);
            assert_eq!(out[0] > 0.0, i > 0);
            prev = out[0];
        }
    }

    #[test]
    fn llr_sign_tracks_transmitted_bit_on_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for m in [2, 4, 8] {
            let pam = Pam::new(m).unwrap();
            let b = pam.bits_per_symbol();
            let bits: Vec<u8> = (0..100_000 * b).map(|_| rng.random_range(0..2u8)).collect();
            let y = awgn_transmit(&pam.modulate(&bits).unwrap(), 0.0, &mut rng);
            let llr = Demapper::new(pam, 0.0, LlrMode::Exact).demap_all(&y);
            let (mut s0, mut n0, mut s1, mut n1) = (0.0, 0, 0.0, 0);
            for (&bit, &l) in bits.iter().zip(&llr) {
                if bit == 0 {
                    s0 += l;
                    n0 += 1;
                } else {
                    s1 += l;
                    n1 += 1;
                }
            }
            assert!(s0 / n0 as f64 > 0.0 && s1 / (n1 as f64) < 0.0);
        }
    }

    #[test]
    fn interleaver_round_trip() {
        let data: Vec<u32> = (0..100).collect();
        let id = Interleaver::identity(100);
        assert_eq!(id.apply(&data, Direction::Forward).unwrap(), data);
        for seed in 0..5 {
            let il = Interleaver::from_seed(100, seed);
            let fwd = il.apply(&data, Direction::Forward).unwrap();
            assert_ne!(fwd, data);
            assert_eq!(il.apply(&fwd, Direction::Inverse).unwrap(), data);
        }
        assert!(Interleaver::identity(3).apply(&data, Direction::Forward).is_err());
        assert!(!needs_interleaver(2));
        assert!(needs_interleaver(4));
    }
}
