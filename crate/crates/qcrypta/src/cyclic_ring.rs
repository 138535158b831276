//! Arithmetic in the cyclic ring F[X]/(X^n - 1).
//!
//! Two representations live here. [`RingElement`] is a dense coefficient
//! vector generic over the coefficient field and multiplies with the naive
//! O(n^2) convolution; it serves as the oracle for the optimized path and as
//! the production representation when the field is an extension field.
//! [`BitRing`] is the bit-packed F_2 representation (64 coefficients per
//! word, little-endian within each word) used by the Hamming-metric scheme.

use crate::error::{Error, Result};
use crate::rng::Expander;
use rand_chacha::rand_core::RngCore;

/// Coefficient field abstraction for the cyclic ring. The convolution in
/// [`RingElement::ring_mul`] is identical for every implementor.
pub trait CoeffField {
    type Elem: Copy + PartialEq + core::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

/// The binary field F_2 with elements stored as 0/1 bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2;

impl CoeffField for Gf2 {
    type Elem = u8;

    fn zero(&self) -> u8 {
        0
    }
    fn one(&self) -> u8 {
        1
    }
    fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }
    fn mul(&self, a: u8, b: u8) -> u8 {
        a & b
    }
}

/// Dense element of F[X]/(X^n - 1).
#[derive(Debug)]
pub struct RingElement<F: CoeffField> {
    n: usize,
    coeffs: Vec<F::Elem>,
}

impl<F: CoeffField> Clone for RingElement<F> {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.clone(),
        }
    }
}

impl<F: CoeffField> PartialEq for RingElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.coeffs == other.coeffs
    }
}

impl<F: CoeffField> Eq for RingElement<F> {}

impl<F: CoeffField> RingElement<F> {
    pub fn zero(field: &F, n: usize) -> Self {
        Self {
            n,
            coeffs: vec![field.zero(); n],
        }
    }

    /// The multiplicative identity (1, 0, ..., 0).
    pub fn one(field: &F, n: usize) -> Self {
        let mut e = Self::zero(field, n);
        e.coeffs[0] = field.one();
        e
    }

    pub fn from_coeffs(coeffs: Vec<F::Elem>) -> Self {
        Self {
            n: coeffs.len(),
            coeffs,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [F::Elem] {
        &mut self.coeffs
    }

    pub fn get(&self, i: usize) -> F::Elem {
        self.coeffs[i]
    }

    pub fn set(&mut self, i: usize, v: F::Elem) {
        self.coeffs[i] = v;
    }

    /// Number of nonzero coordinates.
    pub fn support_weight(&self, field: &F) -> usize {
        self.coeffs.iter().filter(|&&c| !field.is_zero(c)).count()
    }

    /// Coordinate-wise addition.
    pub fn add(&self, field: &F, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| field.add(a, b))
            .collect();
        Ok(Self { n: self.n, coeffs })
    }

    /// Cyclic convolution: c_k = sum_{i+j = k mod n} a_i b_j.
    pub fn ring_mul(&self, field: &F, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zero(field, n);
        for i in 0..n {
            let a = self.coeffs[i];
            if field.is_zero(a) {
                continue;
            }
            for j in 0..n {
                let b = other.coeffs[j];
                if field.is_zero(b) {
                    continue;
                }
                let k = (i + j) % n;
                out.coeffs[k] = field.add(out.coeffs[k], field.mul(a, b));
            }
        }
        Ok(out)
    }
}

/// Circulant matrix rot(x) whose first row is (x_1, x_n, ..., x_2).
#[derive(Debug, Clone)]
pub struct CirculantMatrix<F: CoeffField> {
    n: usize,
    generator: RingElement<F>,
}

/// Builds rot(x) from its generating vector.
pub fn rot<F: CoeffField>(x: &RingElement<F>) -> CirculantMatrix<F> {
    CirculantMatrix {
        n: x.len(),
        generator: x.clone(),
    }
}

impl<F: CoeffField> CirculantMatrix<F> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> &RingElement<F> {
        &self.generator
    }

    /// Entry (i, j), zero-indexed: x_{(i - j) mod n}.
    pub fn entry(&self, i: usize, j: usize) -> F::Elem {
        self.generator.get((i + self.n - j) % self.n)
    }

    pub fn row(&self, i: usize) -> Vec<F::Elem> {
        (0..self.n).map(|j| self.entry(i, j)).collect()
    }

    /// Computes the row-vector/matrix product x . rot(y)^T.
    pub fn row_vec_mul_transpose(&self, field: &F, x: &RingElement<F>) -> Result<RingElement<F>> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut out = RingElement::zero(field, self.n);
        for k in 0..self.n {
            let mut acc = field.zero();
            for j in 0..self.n {
                acc = field.add(acc, field.mul(x.get(j), self.entry(k, j)));
            }
            out.set(k, acc);
        }
        Ok(out)
    }

    /// Matrix-vector product rot(x) . v^T, returned as a vector.
    pub fn mat_vec_mul(&self, field: &F, v: &RingElement<F>) -> Result<RingElement<F>> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let mut out = RingElement::zero(field, self.n);
        for i in 0..self.n {
            let mut acc = field.zero();
            for j in 0..self.n {
                acc = field.add(acc, field.mul(self.entry(i, j), v.get(j)));
            }
            out.set(i, acc);
        }
        Ok(out)
    }
}

/// Target for fixed-weight sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedWeightSpec {
    pub n: usize,
    pub w: usize,
}

impl FixedWeightSpec {
    pub fn new(n: usize, w: usize) -> Result<Self> {
        if w > n {
            return Err(Error::Parameter(format!("weight {w} exceeds length {n}")));
        }
        Ok(Self { n, w })
    }
}

/// Draws exactly `w` distinct positions in [0, n) by drawing indices modulo
/// n and rejecting duplicates. Deterministic in the expander state.
pub fn sample_support(spec: FixedWeightSpec, rng: &mut Expander) -> Vec<usize> {
    let mut picked = vec![false; spec.n];
    let mut out = Vec::with_capacity(spec.w);
    while out.len() < spec.w {
        let idx = (rng.next_u64() % spec.n as u64) as usize;
        if !picked[idx] {
            picked[idx] = true;
            out.push(idx);
        }
    }
    out
}

/// Bit-packed element of F_2[X]/(X^n - 1).
///
/// Coefficient i lives at bit (i mod 64) of word i/64; padding bits of the
/// last word are always zero. Serialization emits ceil(n/8) bytes LSB-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRing {
    n: usize,
    words: Vec<u64>,
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl BitRing {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn one(n: usize) -> Self {
        let mut e = Self::zero(n);
        e.words[0] = 1;
        e
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.n);
        ((self.words[i / 64] >> (i % 64)) & 1) as u8
    }

    pub fn set(&mut self, i: usize, v: u8) {
        debug_assert!(i < self.n);
        let w = i / 64;
        let b = i % 64;
        self.words[w] = (self.words[w] & !(1u64 << b)) | ((v as u64 & 1) << b);
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn mask_top(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// XOR, which is addition over F_2.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self { n: self.n, words })
    }

    /// Iterator over set-bit positions.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Word-level cyclic convolution: xors shifted copies of the denser
    /// operand into a 2n-bit accumulator, iterating over the set bits of the
    /// lighter operand, then folds bits [n, 2n) back onto [0, n).
    pub fn ring_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let (light, heavy) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = vec![0u64; words_for(2 * n) + 1];
        for i in light.support() {
            let off = i / 64;
            let sh = i % 64;
            for (j, &w) in heavy.words.iter().enumerate() {
                acc[j + off] ^= w << sh;
                if sh != 0 {
                    acc[j + off + 1] ^= w >> (64 - sh);
                }
            }
        }
        // fold: result = acc[0..n) ^ (acc >> n)[0..n)
        let mut out = Self::zero(n);
        let nwords = out.words.len();
        out.words.copy_from_slice(&acc[..nwords]);
        let off = n / 64;
        let sh = n % 64;
        for j in 0..nwords {
            let lo = acc.get(j + off).copied().unwrap_or(0);
            let hi = acc.get(j + off + 1).copied().unwrap_or(0);
            let shifted = if sh == 0 { lo } else { (lo >> sh) | (hi << (64 - sh)) };
            out.words[j] ^= shifted;
        }
        out.mask_top();
        Ok(out)
    }

    /// Reference convolution working bit by bit over the supports; the
    /// oracle the optimized multiply is checked against.
    pub fn ring_mul_naive(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zero(n);
        for i in self.support() {
            for j in other.support() {
                out.flip((i + j) % n);
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> RingElement<Gf2> {
        RingElement::from_coeffs((0..self.n).map(|i| self.get(i)).collect())
    }

    pub fn from_dense(d: &RingElement<Gf2>) -> Self {
        let mut e = Self::zero(d.len());
        for i in 0..d.len() {
            e.set(i, d.get(i));
        }
        e
    }

    /// ceil(n/8) bytes, LSB-first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.n.div_ceil(8);
        let mut out = vec![0u8; nbytes];
        for (k, byte) in out.iter_mut().enumerate() {
            let wi = k / 8;
            let sh = (k % 8) * 8;
            *byte = ((self.words.get(wi).copied().unwrap_or(0) >> sh) & 0xff) as u8;
        }
        out
    }

    pub fn from_bytes(n: usize, bytes: &[u8]) -> Result<Self> {
        let nbytes = n.div_ceil(8);
        if bytes.len() != nbytes {
            return Err(Error::LengthMismatch {
                expected: nbytes,
                got: bytes.len(),
            });
        }
        let mut e = Self::zero(n);
        for (k, &byte) in bytes.iter().enumerate() {
            e.words[k / 8] |= (byte as u64) << ((k % 8) * 8);
        }
        let mut check = e.clone();
        check.mask_top();
        if check != e {
            return Err(Error::Malformed("nonzero padding bits".into()));
        }
        Ok(e)
    }

    /// Uniformly random element.
    pub fn random_uniform(n: usize, rng: &mut Expander) -> Self {
        let mut e = Self::zero(n);
        let mut bytes = vec![0u8; e.words.len() * 8];
        rng.fill_bytes(&mut bytes);
        for (i, chunk) in bytes.chunks_exact(8).enumerate() {
            e.words[i] = u64::from_le_bytes(chunk.try_into().unwrap());
        }
        e.mask_top();
        e
    }

    /// Element of Hamming weight exactly `spec.w`, uniform over supports.
    pub fn sample_fixed_weight(spec: FixedWeightSpec, rng: &mut Expander) -> Self {
        let mut e = Self::zero(spec.n);
        for i in sample_support(spec, rng) {
            e.set(i, 1);
        }
        e
    }
}

/// A sampled systematic QCSD instance: the circulant block generators
/// a_1..a_{s-1}, the weight-w error blocks x_1..x_s, and the syndrome
/// blocks. Test-harness use only.
#[derive(Debug, Clone)]
pub struct QcsdInstance {
    pub n: usize,
    pub order: usize,
    pub block_generators: Vec<BitRing>,
    pub error_blocks: Vec<BitRing>,
    pub syndrome_blocks: Vec<BitRing>,
}

/// Draws an instance of the systematic quasi-cyclic syndrome decoding
/// distribution of order s in {2, 3}: syndrome block i is x_i + a_i * x_s.
pub fn sample_qcsd_instance(
    n: usize,
    w: usize,
    order: usize,
    rng: &mut Expander,
) -> Result<QcsdInstance> {
    if !(order == 2 || order == 3) {
        return Err(Error::Parameter(format!("order must be 2 or 3, got {order}")));
    }
    let spec = FixedWeightSpec::new(n, w)?;
    let block_generators: Vec<BitRing> = (0..order - 1)
        .map(|_| BitRing::random_uniform(n, rng))
        .collect();
    let error_blocks: Vec<BitRing> = (0..order)
        .map(|_| BitRing::sample_fixed_weight(spec, rng))
        .collect();
    let last = &error_blocks[order - 1];
    let syndrome_blocks = block_generators
        .iter()
        .zip(&error_blocks)
        .map(|(a, x)| x.add(&a.ring_mul(last)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(QcsdInstance {
        n,
        order,
        block_generators,
        error_blocks,
        syndrome_blocks,
    })
}
