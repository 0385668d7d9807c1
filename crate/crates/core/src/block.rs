use std::fmt;

use crate::error::{Error, Result};

/// Square matrix of bits stored row-major, one bit per byte.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    side: usize,
    bits: Vec<u8>,
}

impl BitMatrix {
    pub fn zeros(side: usize) -> Self {
        Self {
            side,
            bits: vec![0; side * side],
        }
    }

    pub fn from_bits(side: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != side * side {
            return Err(Error::Domain(format!(
                "{} bits do not fill a {side}x{side} matrix",
                bits.len()
            )));
        }
        Ok(Self { side, bits })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.side + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, bit: u8) {
        self.bits[row * self.side + col] = bit;
    }

    #[inline]
    pub fn flip(&mut self, row: usize, col: usize) {
        self.bits[row * self.side + col] ^= 1;
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.bits[row * self.side..(row + 1) * self.side]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [u8] {
        &mut self.bits[row * self.side..(row + 1) * self.side]
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = u8> + '_ {
        self.bits[col..].iter().step_by(self.side).copied()
    }

    pub fn copy_column(&self, col: usize, out: &mut [u8]) {
        for (o, b) in out.iter_mut().zip(self.column(col)) {
            *o = b;
        }
    }

    pub fn write_column(&mut self, col: usize, src: &[u8]) {
        for (r, &b) in src.iter().enumerate() {
            self.bits[r * self.side + col] = b;
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.side;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.bits[c * n + r] = self.bits[r * n + c];
            }
        }
        out
    }

    /// Number of positions where the two matrices differ.
    pub fn hamming_distance(&self, other: &Self) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ones = self.bits.iter().filter(|&&b| b != 0).count();
        write!(f, "BitMatrix({}x{}, {} ones)", self.side, self.side, ones)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_columns_transpose() {
        let mut m = BitMatrix::zeros(3);
        m.set(0, 2, 1);
        m.flip(2, 1);
        assert_eq!(m.row(0), &[0, 0, 1]);
        assert_eq!(m.column(1).collect::<Vec<_>>(), vec![0, 0, 1]);
        let t = m.transpose();
        assert_eq!(t.get(2, 0), 1);
        assert_eq!(t.get(1, 2), 1);
        let mut buf = [0; 3];
        m.copy_column(2, &mut buf);
        assert_eq!(buf, [1, 0, 0]);
        m.write_column(0, &[1, 1, 1]);
        assert_eq!(m.hamming_distance(&BitMatrix::zeros(3)), 5);
        assert!(BitMatrix::from_bits(2, vec![0; 3]).is_err());
    }
}
