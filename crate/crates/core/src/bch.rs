//! Double-error-correcting binary BCH codes, optionally extended by one
//! overall parity bit, with Peterson-style bounded-distance decoding.
//!
//! Bit layout of a length-`n` word: positions `0..k` carry the message
//! verbatim, positions `k..n_u` carry the BCH parity (`n_u = 2^m - 1`), and
//! for extended codes position `n - 1` carries the overall parity. Position
//! `i < n_u` is the coefficient of `x^i`, so the syndromes are
//! `S1 = Σ c_i α^i` and `S3 = Σ c_i α^{3i}`.

use std::ops::{Deref, DerefMut};

use arrayvec::ArrayVec;

use crate::error::{Error, Result};
use crate::gf2m::{BinPoly, Element, GaloisField};

/// Largest error pattern a BDD success can report.
pub const MAX_CORRECTABLE: usize = 2;

/// Positions flipped by a successful bounded-distance decode.
pub type ErrorPattern = ArrayVec<usize, MAX_CORRECTABLE>;

/// A hard-decision word of code length, one bit per byte (0 or 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn from_bits(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self(bits)
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn flip(&mut self, pos: usize) {
        self.0[pos] ^= 1;
    }
}

impl Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl DerefMut for Word {
    fn deref_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }
}

/// Result of one bounded-distance decoding attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BddOutcome {
    /// The word lies within distance `t` of a codeword; the pattern lists
    /// the positions to flip (empty if the word already is a codeword).
    Success(ErrorPattern),
    Failure,
}

impl BddOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Self::Success(_))
    }

    pub fn error_pattern(&self) -> &[usize] {
        match self {
            Self::Success(e) => e,
            Self::Failure => &[],
        }
    }

    /// Hamming weight w_H(e) of the proposed correction.
    pub fn weight(&self) -> usize {
        self.error_pattern().len()
    }
}

/// Syndromes of a received word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syndromes {
    pub s1: Element,
    pub s3: Element,
    /// XOR of all `n` bits; always 0 for unextended codes.
    pub parity: u8,
}

impl Syndromes {
    pub fn is_zero(&self) -> bool {
        self.s1 == 0 && self.s3 == 0 && self.parity == 0
    }
}

/// A binary BCH component code with `t = 2`.
#[derive(Debug, Clone)]
pub struct BchCode {
    field: GaloisField,
    n: usize,
    k: usize,
    t: usize,
    d0: usize,
    extended: bool,
    generator: BinPoly,
    /// α^i for each unextended position.
    s1_terms: Vec<Element>,
    /// α^{3i} for each unextended position.
    s3_terms: Vec<Element>,
    /// Parity contribution of each message bit, bit `j` = parity position `k + j`.
    parity_columns: Vec<u32>,
}

impl BchCode {
    /// Builds the narrow-sense BCH code over GF(2^m) with designed distance
    /// `2t + 1`, optionally extended by an overall parity bit.
    pub fn new(m: u32, t: usize, extended: bool) -> Result<Self> {
        if t != 2 {
            return Err(Error::Config(format!(
                "only double-error-correcting codes are supported, got t={t}"
            )));
        }
        if !(4..=8).contains(&m) {
            return Err(Error::Config(format!(
                "component field degree m={m} outside 4..=8"
            )));
        }
        let field = GaloisField::new(m)?;
        let n_u = field.order();
        let generator = field.minimal_poly(1).lcm(&field.minimal_poly(3))?;
        let r = generator.degree().expect("generator is nonzero");
        if r > 31 {
            return Err(Error::Config("generator degree too large".into()));
        }
        let k = n_u - r;
        let n = n_u + usize::from(extended);
        let d0 = 2 * t + 1 + usize::from(extended);

        let s1_terms = (0..n_u).map(|i| field.exp(i as i64)).collect();
        let s3_terms = (0..n_u).map(|i| field.exp(3 * i as i64)).collect();

        // Parity for message x^i is rem(x^{i + r}, g), computed incrementally
        // by repeated multiplication by x modulo g.
        let g_low: u32 = (0..r)
            .filter(|&j| generator.coeff(j))
            .fold(0, |acc, j| acc | 1 << j);
        let top = 1u32 << r;
        let mut state: u32 = g_low; // x^r mod g
        let mut parity_columns = Vec::with_capacity(k);
        for _ in 0..k {
            parity_columns.push(state);
            state <<= 1;
            if state & top != 0 {
                state = (state ^ top) ^ g_low;
            }
        }

        Ok(Self {
            field,
            n,
            k,
            t,
            d0,
            extended,
            generator,
            s1_terms,
            s3_terms,
            parity_columns,
        })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// Code length in bits.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Message length in bits.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Minimum Hamming distance.
    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn extended(&self) -> bool {
        self.extended
    }

    pub fn generator(&self) -> &BinPoly {
        &self.generator
    }

    /// Length of the cyclic part, 2^m − 1.
    pub fn unextended_len(&self) -> usize {
        self.s1_terms.len()
    }

    /// Number of highly unreliable bits marked per word, d0 − t − 1.
    pub fn hub_count(&self) -> usize {
        self.d0 - self.t - 1
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Systematic encoding of `message` (length `k`).
    pub fn encode(&self, message: &[u8]) -> Result<Word> {
        let mut word = Word::zeros(self.n);
        self.encode_into(message, &mut word)?;
        Ok(word)
    }

    /// Encodes into an existing buffer of length `n`.
    pub fn encode_into(&self, message: &[u8], out: &mut [u8]) -> Result<()> {
        if message.len() != self.k {
            return Err(Error::Domain(format!(
                "message length {} does not match k={}",
                message.len(),
                self.k
            )));
        }
        if out.len() != self.n {
            return Err(Error::Domain(format!(
                "output length {} does not match n={}",
                out.len(),
                self.n
            )));
        }
        out[..self.k].copy_from_slice(message);
        let parity = message
            .iter()
            .zip(&self.parity_columns)
            .filter(|(&b, _)| b != 0)
            .fold(0u32, |acc, (_, &col)| acc ^ col);
        let n_u = self.unextended_len();
        for (j, bit) in out[self.k..n_u].iter_mut().enumerate() {
            *bit = (parity >> j & 1) as u8;
        }
        if self.extended {
            out[self.n - 1] = out[..n_u].iter().fold(0, |a, &b| a ^ b);
        }
        Ok(())
    }

    pub fn syndromes(&self, word: &[u8]) -> Syndromes {
        debug_assert_eq!(word.len(), self.n);
        let mut s1 = 0;
        let mut s3 = 0;
        let mut parity = 0;
        for ((&b, &a1), &a3) in word.iter().zip(&self.s1_terms).zip(&self.s3_terms) {
            if b != 0 {
                s1 ^= a1;
                s3 ^= a3;
                parity ^= 1;
            }
        }
        if self.extended {
            parity ^= word[self.n - 1] & 1;
        } else {
            parity = 0;
        }
        Syndromes { s1, s3, parity }
    }

    /// Syndromes of a word supplied bit by bit, e.g. a strided matrix column.
    pub fn syndromes_of(&self, bits: impl IntoIterator<Item = u8>) -> Syndromes {
        let n_u = self.unextended_len();
        let mut s1 = 0;
        let mut s3 = 0;
        let mut parity = 0;
        for (i, b) in bits.into_iter().enumerate().filter(|&(_, b)| b != 0) {
            if i < n_u {
                s1 ^= self.s1_terms[i];
                s3 ^= self.s3_terms[i];
            }
            parity ^= b & 1;
        }
        if !self.extended {
            parity = 0;
        }
        Syndromes { s1, s3, parity }
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        self.syndromes(word).is_zero()
    }

    /// Bounded-distance decoding: corrects every pattern of weight ≤ 2 and
    /// reports failure when no codeword lies within that radius.
    pub fn bdd_decode(&self, word: &[u8]) -> BddOutcome {
        self.decode_syndromes(self.syndromes(word))
    }

    pub fn decode_syndromes(&self, syn: Syndromes) -> BddOutcome {
        let f = &self.field;
        let ext_pos = self.n - 1;
        let Syndromes { s1, s3, parity } = syn;
        let mut e = ErrorPattern::new();

        if s1 == 0 {
            if s3 != 0 {
                return BddOutcome::Failure;
            }
            if parity != 0 {
                // Only the overall parity bit is in error.
                e.push(ext_pos);
            }
            return BddOutcome::Success(e);
        }

        if s3 == f.cube(s1) {
            e.push(f.log_unchecked(s1));
            if self.extended && parity == 0 {
                // One cyclic-part error plus an extension-bit error.
                e.push(ext_pos);
            }
            return BddOutcome::Success(e);
        }

        // Two cyclic-part errors flip the overall parity twice.
        if self.extended && parity != 0 {
            return BddOutcome::Failure;
        }
        // Error locators are the roots of x^2 + S1 x + (S3/S1 + S1^2).
        let c = f.div(s3, s1).expect("s1 nonzero") ^ f.mul(s1, s1);
        if c == 0 {
            return BddOutcome::Failure;
        }
        for x in 1..f.size() as Element {
            if f.mul(x, x) ^ f.mul(s1, x) ^ c == 0 {
                e.push(f.log_unchecked(x));
                if e.is_full() {
                    break;
                }
            }
        }
        if e.len() == 2 {
            BddOutcome::Success(e)
        } else {
            BddOutcome::Failure
        }
    }
}

/// Flips the positions of `pattern` in `word`.
pub fn apply_pattern(word: &mut [u8], pattern: &[usize]) {
    for &p in pattern {
        word[p] ^= 1;
    }
}
