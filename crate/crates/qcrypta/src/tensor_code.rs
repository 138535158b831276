//! The decodable public code: a BCH code tensored with a repetition code.
//!
//! Encoding BCH-encodes the message and repeats every codeword bit n2
//! times; the result is embedded in the cyclic ring by zero-padding the
//! last n_ring - n1*n2 coordinates, which decoding ignores.

use crate::bch::BchCode;
use crate::cyclic_ring::BitRing;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TensorCode {
    bch: BchCode,
    n2: usize,
    n_ring: usize,
}

impl TensorCode {
    pub fn new(bch: BchCode, n2: usize, n_ring: usize) -> Result<Self> {
        if n2 == 0 {
            return Err(Error::Parameter("repetition length must be positive".into()));
        }
        let block_len = bch.length() * n2;
        if n_ring < block_len {
            return Err(Error::Parameter(format!(
                "ring length {n_ring} shorter than tensor length {block_len}"
            )));
        }
        Ok(Self { bch, n2, n_ring })
    }

    pub fn bch(&self) -> &BchCode {
        &self.bch
    }

    pub fn dimension(&self) -> usize {
        self.bch.dimension()
    }

    pub fn repetition_length(&self) -> usize {
        self.n2
    }

    pub fn ring_length(&self) -> usize {
        self.n_ring
    }

    /// Repetition decode radius floor((n2 - 1) / 2).
    pub fn repetition_radius(&self) -> usize {
        (self.n2 - 1) / 2
    }

    pub fn encode(&self, msg: &[u8]) -> Result<BitRing> {
        let inner = self.bch.encode(msg)?;
        let mut out = BitRing::zero(self.n_ring);
        for (i, &bit) in inner.iter().enumerate() {
            if bit != 0 {
                for j in 0..self.n2 {
                    out.set(i * self.n2 + j, 1);
                }
            }
        }
        Ok(out)
    }

    pub fn decode(&self, word: &BitRing) -> Result<Vec<u8>> {
        if word.len() != self.n_ring {
            return Err(Error::LengthMismatch {
                expected: self.n_ring,
                got: word.len(),
            });
        }
        let n1 = self.bch.length();
        let mut inner = vec![0u8; n1];
        for (i, slot) in inner.iter_mut().enumerate() {
            let block: Vec<u8> = (0..self.n2).map(|j| word.get(i * self.n2 + j)).collect();
            *slot = repetition_decode(&block);
        }
        self.bch.decode(&inner)
    }
}

/// Majority vote: 1 iff the block sum reaches ceil((n2 + 1) / 2). For even
/// n2 an exact half therefore decodes to 0, exactly as the threshold rule
/// states.
pub fn repetition_decode(block: &[u8]) -> u8 {
    let n2 = block.len();
    let ones: usize = block.iter().map(|&b| b as usize).sum();
    u8::from(ones >= (n2 + 2) / 2)
}
