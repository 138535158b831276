//! Binary narrow-sense BCH codes with systematic encoding and
//! Berlekamp-Massey + Chien search decoding.
//!
//! Generator polynomials are computed at construction time from cyclotomic
//! cosets for designed distance 2*delta + 1, so no code tables are shipped.

use crate::error::{Error, Result};

/// Primitive polynomials for the host fields GF(2^m), m in {2, 4, 8, 9}.
/// m=8 is X^8+X^4+X^3+X^2+1, m=9 is X^9+X^4+1.
fn primitive_poly(m: u32) -> Option<u32> {
    match m {
        2 => Some(0b111),
        3 => Some(0b1011),
        4 => Some(0b1_0011),
        5 => Some(0b10_0101),
        6 => Some(0b100_0011),
        7 => Some(0b1000_1001),
        8 => Some(0b1_0001_1101),
        9 => Some(0b10_0001_0001),
        _ => None,
    }
}

/// Log/antilog tables for GF(2^m) with alpha = X primitive.
#[derive(Debug, Clone)]
struct Gf2Ext {
    n: usize, // 2^m - 1
    log: Vec<u16>,
    alog: Vec<u16>,
}

impl Gf2Ext {
    fn new(m: u32) -> Result<Self> {
        let poly =
            primitive_poly(m).ok_or_else(|| Error::Parameter(format!("no host field for m={m}")))?;
        let n = (1usize << m) - 1;
        let mut log = vec![0u16; n + 1];
        let mut alog = vec![0u16; n];
        let mut x: u32 = 1;
        for (i, slot) in alog.iter_mut().enumerate() {
            *slot = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::Parameter(format!("polynomial for m={m} is not primitive")));
        }
        Ok(Self { n, log, alog })
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.alog[e % self.n]
    }

    fn inv(&self, a: u16) -> u16 {
        debug_assert_ne!(a, 0);
        self.alog[(self.n - self.log[a as usize] as usize) % self.n]
    }

    /// alpha^e for any integer exponent.
    fn alpha_pow(&self, e: usize) -> u16 {
        self.alog[e % self.n]
    }
}

/// A narrow-sense binary BCH code of length 2^m - 1 correcting `delta`
/// errors via bounded-distance decoding.
#[derive(Debug, Clone)]
pub struct BchCode {
    field: Gf2Ext,
    n1: usize,
    k: usize,
    delta: usize,
    /// Generator polynomial coefficients over F_2, degree n1 - k.
    generator: Vec<u8>,
}

impl BchCode {
    /// Builds the code of length `n1` = 2^m - 1 with designed distance
    /// 2*delta + 1. The dimension falls out of the cyclotomic cosets.
    pub fn new(n1: usize, delta: usize) -> Result<Self> {
        let m = (2..=16u32)
            .find(|&m| (1usize << m) - 1 == n1)
            .ok_or_else(|| Error::Parameter(format!("n1={n1} is not of the form 2^m - 1")))?;
        if delta == 0 || 2 * delta >= n1 {
            return Err(Error::Parameter(format!("delta={delta} out of range for n1={n1}")));
        }
        let field = Gf2Ext::new(m)?;

        // collect cyclotomic cosets of 1..=2*delta mod n1
        let mut in_coset = vec![false; n1];
        let mut roots: Vec<usize> = Vec::new();
        for c in 1..=2 * delta {
            let c = c % n1;
            if in_coset[c] {
                continue;
            }
            let mut x = c;
            loop {
                in_coset[x] = true;
                roots.push(x);
                x = (x * 2) % n1;
                if x == c {
                    break;
                }
            }
        }

        // generator = prod (X - alpha^r) over all coset members, computed
        // over GF(2^m); the result must land in F_2.
        let mut g: Vec<u16> = vec![1];
        for &r in &roots {
            let a = field.alpha_pow(r);
            let mut next = vec![0u16; g.len() + 1];
            for (i, &c) in g.iter().enumerate() {
                next[i + 1] ^= c;
                next[i] ^= field.mul(c, a);
            }
            g = next;
        }
        let generator: Vec<u8> = g
            .iter()
            .map(|&c| {
                debug_assert!(c <= 1, "generator coefficient escaped F_2");
                c as u8
            })
            .collect();
        let k = n1 - (generator.len() - 1);

        Ok(Self {
            field,
            n1,
            k,
            delta,
            generator,
        })
    }

    pub fn length(&self) -> usize {
        self.n1
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn correction_radius(&self) -> usize {
        self.delta
    }

    pub fn generator_poly(&self) -> &[u8] {
        &self.generator
    }

    /// Systematic encoding: message bits occupy the high-order positions,
    /// parity bits the low n1 - k positions.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: msg.len(),
            });
        }
        let r = self.n1 - self.k;
        // remainder of msg(X) * X^r modulo g(X)
        let mut rem = vec![0u8; r];
        for &bit in msg.iter().rev() {
            let feedback = bit ^ rem[r - 1];
            for i in (1..r).rev() {
                rem[i] = rem[i - 1] ^ (feedback & self.generator[i]);
            }
            rem[0] = feedback & self.generator[0];
        }
        let mut cw = vec![0u8; self.n1];
        cw[..r].copy_from_slice(&rem);
        cw[r..].copy_from_slice(msg);
        Ok(cw)
    }

    /// Syndromes S_1..S_{2*delta}: evaluations of the word at alpha^j.
    fn syndromes(&self, word: &[u8]) -> Vec<u16> {
        (1..=2 * self.delta)
            .map(|j| {
                let mut s: u16 = 0;
                for (i, &bit) in word.iter().enumerate() {
                    if bit != 0 {
                        s ^= self.field.alpha_pow(i * j);
                    }
                }
                s
            })
            .collect()
    }

    /// Bounded-distance decoding. Returns the message whenever the input is
    /// within Hamming distance delta of a codeword; miscorrection beyond
    /// delta is possible, as for any bounded-distance decoder.
    pub fn decode(&self, word: &[u8]) -> Result<Vec<u8>> {
        if word.len() != self.n1 {
            return Err(Error::LengthMismatch {
                expected: self.n1,
                got: word.len(),
            });
        }
        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return Ok(word[self.n1 - self.k..].to_vec());
        }

        // Berlekamp-Massey: error locator sigma with sigma(0) = 1.
        let f = &self.field;
        let mut sigma: Vec<u16> = vec![1];
        let mut prev: Vec<u16> = vec![1];
        let mut l: usize = 0;
        let mut shift: usize = 1;
        let mut prev_disc: u16 = 1;
        for r in 0..2 * self.delta {
            let mut disc: u16 = synd[r];
            for i in 1..=l.min(sigma.len() - 1) {
                if r >= i {
                    disc ^= f.mul(sigma[i], synd[r - i]);
                }
            }
            if disc == 0 {
                shift += 1;
            } else if 2 * l <= r {
                let tmp = sigma.clone();
                let scale = f.mul(disc, f.inv(prev_disc));
                sigma = poly_sub_scaled(f, &sigma, &prev, scale, shift);
                prev = tmp;
                prev_disc = disc;
                l = r + 1 - l;
                shift = 1;
            } else {
                let scale = f.mul(disc, f.inv(prev_disc));
                sigma = poly_sub_scaled(f, &sigma, &prev, scale, shift);
                shift += 1;
            }
        }
        while sigma.last() == Some(&0) {
            sigma.pop();
        }
        let deg = sigma.len() - 1;
        if deg > self.delta || deg != l {
            return Err(Error::DecodeFailure);
        }

        // Chien search: position i is in error iff sigma(alpha^{-i}) = 0.
        let mut corrected = word.to_vec();
        let mut nroots = 0usize;
        for i in 0..self.n1 {
            let x = f.alpha_pow(self.field.n - i % self.field.n);
            let mut acc: u16 = 0;
            let mut xp: u16 = 1;
            for &c in &sigma {
                acc ^= f.mul(c, xp);
                xp = f.mul(xp, x);
            }
            if acc == 0 {
                corrected[i] ^= 1;
                nroots += 1;
            }
        }
        if nroots != deg {
            return Err(Error::DecodeFailure);
        }
        // re-check: the corrected word must be a codeword
        if self.syndromes(&corrected).iter().any(|&s| s != 0) {
            return Err(Error::DecodeFailure);
        }
        Ok(corrected[self.n1 - self.k..].to_vec())
    }
}

fn poly_sub_scaled(f: &Gf2Ext, a: &[u16], b: &[u16], scale: u16, shift: usize) -> Vec<u16> {
    let len = a.len().max(b.len() + shift);
    let mut out = vec![0u16; len];
    out[..a.len()].copy_from_slice(a);
    for (i, &c) in b.iter().enumerate() {
        out[i + shift] ^= f.mul(scale, c);
    }
    out
}
