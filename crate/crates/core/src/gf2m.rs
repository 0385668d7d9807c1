//! Arithmetic in GF(2^m) and over binary polynomials.
//!
//! Elements are stored in polynomial basis: bit `i` of an element is the
//! coefficient of `x^i`. Multiplication and inversion go through log/antilog
//! tables built once from a fixed primitive polynomial per degree.

use crate::error::{Error, Result};

/// Field element in polynomial basis.
pub type Element = u16;

/// Smallest and largest supported extension degree.
pub const MIN_DEGREE: u32 = 3;
pub const MAX_DEGREE: u32 = 8;

/// Built-in primitive polynomials, indexed by `m - MIN_DEGREE`.
///
/// x^3+x+1, x^4+x+1, x^5+x^2+1, x^6+x+1, x^7+x^3+1, x^8+x^4+x^3+x^2+1.
const PRIMITIVE_POLYS: [u32; 6] = [0b1011, 0b1_0011, 0b10_0101, 0b100_0011, 0b1000_1001, 0b1_0001_1101];

/// The field GF(2^m) with precomputed exponent and logarithm tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    m: u32,
    primitive_poly: u32,
    /// `exp_table[i] = α^i` for `i` in `0..order`.
    exp_table: Vec<Element>,
    /// `log_table[a] = i` with `α^i = a`; entry 0 is unused.
    log_table: Vec<u16>,
}

impl GaloisField {
    /// Builds GF(2^m) using the built-in primitive polynomial for `m`.
    pub fn new(m: u32) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(Error::Config(format!(
                "field degree m={m} outside supported range {MIN_DEGREE}..={MAX_DEGREE}"
            )));
        }
        let primitive_poly = PRIMITIVE_POLYS[(m - MIN_DEGREE) as usize];
        let size = 1usize << m;
        let order = size - 1;

        let mut exp_table = Vec::with_capacity(order);
        let mut log_table = vec![0u16; size];
        let mut x: u32 = 1;
        for i in 0..order {
            exp_table.push(x as Element);
            log_table[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= primitive_poly;
            }
        }
        debug_assert_eq!(x, 1, "polynomial {primitive_poly:#b} is not primitive");

        Ok(Self {
            m,
            primitive_poly,
            exp_table,
            log_table,
        })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of nonzero elements, 2^m − 1.
    pub fn order(&self) -> usize {
        self.exp_table.len()
    }

    /// Number of elements, 2^m.
    pub fn size(&self) -> usize {
        self.log_table.len()
    }

    /// α^e for any integer exponent (reduced modulo the multiplicative order).
    #[inline]
    pub fn exp(&self, e: i64) -> Element {
        let order = self.order() as i64;
        self.exp_table[e.rem_euclid(order) as usize]
    }

    /// Discrete logarithm of a nonzero element.
    #[inline]
    pub fn log(&self, a: Element) -> Result<usize> {
        if a == 0 || a as usize >= self.size() {
            return Err(Error::Domain(format!("log of invalid element {a}")));
        }
        Ok(self.log_table[a as usize] as usize)
    }

    #[inline]
    pub(crate) fn log_unchecked(&self, a: Element) -> usize {
        self.log_table[a as usize] as usize
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log_table[a as usize] as usize + self.log_table[b as usize] as usize;
        let order = self.order();
        self.exp_table[if s >= order { s - order } else { s }]
    }

    pub fn inv(&self, a: Element) -> Result<Element> {
        if a == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let l = self.log_table[a as usize] as usize;
        Ok(self.exp_table[(self.order() - l) % self.order()])
    }

    pub fn div(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^3, used for the second BCH syndrome.
    #[inline]
    pub fn cube(&self, a: Element) -> Element {
        self.mul(a, self.mul(a, a))
    }

    /// Minimal polynomial of α^e over GF(2), as a binary polynomial.
    pub fn minimal_poly(&self, e: usize) -> BinPoly {
        let order = self.order();
        // Cyclotomic coset of e under doubling.
        let mut coset = Vec::new();
        let mut c = e % order;
        loop {
            if coset.contains(&c) {
                break;
            }
            coset.push(c);
            c = (c * 2) % order;
        }
        // Product of (x + α^c) with GF(2^m) coefficients, ascending degree.
        let mut coeffs: Vec<Element> = vec![1];
        for &c in &coset {
            let root = self.exp_table[c];
            let mut next = vec![0 as Element; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] ^= a;
                next[i] ^= self.mul(a, root);
            }
            coeffs = next;
        }
        debug_assert!(coeffs.iter().all(|&a| a <= 1));
        BinPoly::from_bits(coeffs.iter().map(|&a| a == 1))
    }
}

/// Polynomial over GF(2), coefficients in ascending degree order.
///
/// Stored normalized: no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BinPoly {
    coeffs: Vec<bool>,
}

impl BinPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self { coeffs: vec![true] }
    }

    /// `x^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![false; d + 1];
        coeffs[d] = true;
        Self { coeffs }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut p = Self {
            coeffs: bits.into_iter().collect(),
        };
        p.normalize();
        p
    }

    /// Builds a polynomial from the exponents of its nonzero terms.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let deg = exps.iter().copied().max().map_or(0, |d| d + 1);
        let mut coeffs = vec![false; deg];
        for &e in exps {
            coeffs[e] ^= true;
        }
        Self::from_bits(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&false) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.coeffs.get(i).copied().unwrap_or(false)
    }

    pub fn coeffs(&self) -> &[bool] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_bits((0..len).map(|i| self.coeff(i) ^ other.coeff(i)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![false; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, _) in self.coeffs.iter().enumerate().filter(|(_, &c)| c) {
            for (j, _) in other.coeffs.iter().enumerate().filter(|(_, &c)| c) {
                out[i + j] ^= true;
            }
        }
        Self::from_bits(out)
    }

    /// Quotient and remainder of polynomial long division over GF(2).
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![false; nd - dd + 1];
        for shift in (0..=nd - dd).rev() {
            if rem[shift + dd] {
                quot[shift] = true;
                for (j, &c) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] ^= c;
                }
            }
        }
        Ok((Self::from_bits(quot), Self::from_bits(rem)))
    }

    /// Remainder of division by `divisor`.
    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Evaluates the polynomial at a field element.
    pub fn eval(&self, field: &GaloisField, a: Element) -> Element {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field.mul(acc, a) ^ Element::from(c))
    }

    /// Least common multiple, via gcd.
    pub fn lcm(&self, other: &Self) -> Result<Self> {
        let g = gcd(self, other);
        let (q, r) = self.mul(other).div_rem(&g)?;
        debug_assert!(r.is_zero());
        Ok(q)
    }
}

fn gcd(a: &BinPoly, b: &BinPoly) -> BinPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b).expect("b is nonzero");
        a = b;
        b = r;
    }
    a
}

/// Free-function form of [`BinPoly::rem`].
pub fn poly_rem(dividend: &BinPoly, divisor: &BinPoly) -> Result<BinPoly> {
    dividend.rem(divisor)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Carry-less multiply followed by reduction, independent of the tables.
    fn slow_mul(m: u32, poly: u32, a: u32, b: u32) -> u32 {
        let mut prod = 0u32;
        for i in 0..m {
            if b >> i & 1 == 1 {
                prod ^= a << i;
            }
        }
        for bit in (m..2 * m).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= poly << (bit - m);
            }
        }
        prod
    }

    #[test]
    fn gf16_basics() {
        let f = GaloisField::new(4).unwrap();
        assert_eq!(f.order(), 15);
        assert_eq!(f.exp(1), 0b0010);
        assert_eq!(f.exp(4), 0b0011);
        assert_eq!(f.exp(15), 1);
        assert_eq!(f.mul(0b0010, 0b1000), 0b0011);
        assert_eq!(f.inv(1).unwrap(), 1);
        assert_eq!(f.inv(f.exp(1)).unwrap(), f.exp(14));
        for a in 1..16 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
            assert_eq!(f.add(a, a), 0);
        }
    }

    #[test]
    fn m7_table_length() {
        assert_eq!(GaloisField::new(7).unwrap().order(), 127);
    }

    #[test]
    fn rejects_bad_degree() {
        assert!(matches!(GaloisField::new(2), Err(Error::Config(_))));
        assert!(matches!(GaloisField::new(9), Err(Error::Config(_))));
    }

    #[test]
    fn zero_has_no_inverse_or_log() {
        let f = GaloisField::new(5).unwrap();
        assert!(matches!(f.inv(0), Err(Error::Domain(_))));
        assert!(f.log(0).is_err());
    }

    #[test]
    fn exhaustive_tables_all_degrees() {
        for m in MIN_DEGREE..=MAX_DEGREE {
            let f = GaloisField::new(m).unwrap();
            let order = f.order();
            let mut seen = vec![false; f.size()];
            for i in 0..order {
                let a = f.exp(i as i64);
                assert!(a != 0 && !seen[a as usize]);
                seen[a as usize] = true;
                assert_eq!(f.log(a).unwrap(), i);
            }
            assert_eq!(f.exp(order as i64), 1);
            for a in 1..f.size() as Element {
                for b in 1..f.size() as Element {
                    let p = f.mul(a, b);
                    assert_eq!(
                        f.log(p).unwrap(),
                        (f.log(a).unwrap() + f.log(b).unwrap()) % order
                    );
                    assert_eq!(p as u32, slow_mul(m, f.primitive_poly(), a as u32, b as u32));
                }
            }
        }
    }

    #[test]
    fn poly_rem_examples() {
        let p = |e: &[usize]| BinPoly::from_exponents(e);
        assert!(poly_rem(&p(&[3, 1]), &p(&[1])).unwrap().is_zero());
        assert!(poly_rem(&p(&[4, 1, 0]), &p(&[4, 1, 0])).unwrap().is_zero());
        assert_eq!(poly_rem(&p(&[5]), &p(&[4, 1, 0])).unwrap(), p(&[2, 1]));
        assert!(matches!(
            poly_rem(&p(&[5]), &BinPoly::zero()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn minimal_polys_gf16() {
        let f = GaloisField::new(4).unwrap();
        assert_eq!(f.minimal_poly(1), BinPoly::from_exponents(&[4, 1, 0]));
        assert_eq!(f.minimal_poly(3), BinPoly::from_exponents(&[4, 3, 2, 1, 0]));
        for e in [1, 2, 4, 8] {
            assert_eq!(f.minimal_poly(1).eval(&f, f.exp(e)), 0);
        }
    }

    proptest::proptest! {
        #[test]
        fn div_rem_reconstructs(a in proptest::collection::vec(proptest::bool::ANY, 0..40),
                                b in proptest::collection::vec(proptest::bool::ANY, 1..20)) {
            let a = BinPoly::from_bits(a);
            let mut b = BinPoly::from_bits(b);
            if b.is_zero() {
                b = BinPoly::one();
            }
            let (q, r) = a.div_rem(&b).unwrap();
            proptest::prop_assert_eq!(q.mul(&b).add(&r), a);
            proptest::prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
