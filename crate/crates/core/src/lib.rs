//! Hard-decision product and staircase codes with extended BCH components,
//! decoded by iterative bounded-distance decoding with optional soft-aided
//! bit marking, plus a seeded Monte Carlo harness to compare the decoders.
//!
//! Module map:
//! - [`gf2m`]: GF(2^m) and binary polynomial arithmetic.
//! - [`bch`]: double-error-correcting (extended) BCH codes and their BDD.
//! - [`modem`]: Gray M-PAM over AWGN with exact or max-log LLR demapping.
//! - [`pc`]: product codes, iBDD and the bit-marking decoder.
//! - [`scc`]: staircase codes with sliding-window decoding and call accounting.
//! - [`sim`]: the seeded BER engine and its CSV reports.

pub mod bch;
pub mod block;
pub mod error;
pub mod gf2m;
pub mod modem;
pub mod pc;
pub mod scc;
pub mod sim;

pub use bch::{BchCode, BddOutcome, Word};
pub use block::BitMatrix;
pub use error::{Error, Result};
pub use gf2m::{BinPoly, GaloisField};
pub use modem::{LlrMode, Pam, ReliabilityGrid};
pub use pc::{DecodeStats, MarkState, PcCode, SabmParams};
pub use scc::{ComplexityStats, DecoderKind, SccCode, SccWindow};
pub use sim::{BerStats, Scheme, SimConfig};
