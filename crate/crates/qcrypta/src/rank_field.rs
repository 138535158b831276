//! GF(2^m) arithmetic (m up to 89, elements in u128) and rank-metric
//! vector operations: expansion matrix, rank weight, support spaces and
//! shared-support sampling.
//!
//! The modulus for each m is the lexicographically smallest irreducible
//! trinomial/pentanomial; every descriptor re-verifies irreducibility at
//! construction time rather than trusting the constant.

use crate::cyclic_ring::CoeffField;
use crate::error::{Error, Result};
use crate::rng::Expander;
use rand_chacha::rand_core::RngCore;

/// Low bits of the fixed modulus for the production extension degrees
/// (the X^m term is implied).
fn modulus_tail(m: u32) -> Option<u128> {
    // X^53+X^6+X^2+X+1, X^61+X^5+X^2+X+1, X^83+X^7+X^4+X^2+1, X^89+X^38+1
    match m {
        53 => Some((1 << 6) | (1 << 2) | (1 << 1) | 1),
        61 => Some((1 << 5) | (1 << 2) | (1 << 1) | 1),
        83 => Some((1 << 7) | (1 << 4) | (1 << 2) | 1),
        89 => Some((1 << 38) | 1),
        _ => None,
    }
}

/// Field descriptor for GF(2^m) in polynomial basis: elements are m-bit
/// polynomials in alpha = X, little-endian bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2m {
    m: u32,
    /// modulus without the leading X^m term
    tail: u128,
}

impl Gf2m {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > 89 {
            return Err(Error::Parameter(format!("unsupported extension degree {m}")));
        }
        let tail = match modulus_tail(m) {
            Some(t) => t,
            None => smallest_irreducible_tail(m)?,
        };
        let f = Self { m, tail };
        if !f.modulus_is_irreducible() {
            return Err(Error::Integrity(format!(
                "modulus for m={m} failed the irreducibility check"
            )));
        }
        Ok(f)
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Full modulus bits including X^m, for display/tests (m < 128).
    pub fn modulus(&self) -> u128 {
        (1u128 << self.m) | self.tail
    }

    pub fn zero(&self) -> u128 {
        0
    }

    pub fn one(&self) -> u128 {
        1
    }

    /// alpha = X, the polynomial-basis generator.
    pub fn alpha(&self) -> u128 {
        2
    }

    pub fn add(&self, a: u128, b: u128) -> u128 {
        a ^ b
    }

    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (mut lo, mut hi) = clmul(a, b);
        // reduce degree-(<=2m-2) product; top bit index < 2m-1 <= 177
        for i in (self.m as usize..(2 * self.m as usize).max(1)).rev() {
            let set = if i >= 128 {
                (hi >> (i - 128)) & 1 == 1
            } else {
                (lo >> i) & 1 == 1
            };
            if set {
                let shift = i - self.m as usize;
                let f = self.modulus();
                if shift >= 128 {
                    hi ^= f << (shift - 128);
                } else {
                    lo ^= f << shift;
                    if shift > 0 && 128 - shift < 128 {
                        hi ^= f >> (128 - shift);
                    }
                }
            }
        }
        lo
    }

    pub fn square(&self, a: u128) -> u128 {
        self.mul(a, a)
    }

    /// a^(2^j), the j-fold Frobenius.
    pub fn frobenius(&self, mut a: u128, j: u32) -> u128 {
        for _ in 0..j % self.m {
            a = self.square(a);
        }
        a
    }

    pub fn pow(&self, mut base: u128, mut exp: u128) -> u128 {
        let mut acc = 1u128;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u128) -> Result<u128> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        // a^(2^m - 2)
        let order_minus_1 = if self.m == 128 {
            u128::MAX
        } else {
            (1u128 << self.m) - 1
        };
        Ok(self.pow(a, order_minus_1 - 1))
    }

    pub fn random_element(&self, rng: &mut Expander) -> u128 {
        let mut buf = [0u8; 16];
        rng.fill_bytes(&mut buf);
        u128::from_le_bytes(buf) & ((1u128 << self.m) - 1)
    }

    /// Rabin test: X^(2^m) == X mod f and gcd(X^(2^(m/p)) - X, f) == 1 for
    /// every prime divisor p of m.
    fn modulus_is_irreducible(&self) -> bool {
        let m = self.m;
        let x = self.alpha();
        // X^(2^m) via repeated squaring of X in the quotient ring
        if self.frobenius_raw(x, m) != x {
            return false;
        }
        let mut primes = Vec::new();
        let mut mm = m;
        let mut d = 2;
        while d * d <= mm {
            if mm % d == 0 {
                primes.push(d);
                while mm % d == 0 {
                    mm /= d;
                }
            }
            d += 1;
        }
        if mm > 1 {
            primes.push(mm);
        }
        for p in primes {
            let h = self.frobenius_raw(x, m / p) ^ x;
            if poly_gcd(self.modulus(), h) != 1 {
                return false;
            }
        }
        true
    }

    /// j squarings without the mod-m wraparound of [`Gf2m::frobenius`].
    fn frobenius_raw(&self, mut a: u128, j: u32) -> u128 {
        for _ in 0..j {
            a = self.square(a);
        }
        a
    }
}

/// Carry-less product of two sub-degree-128 polynomials, as (lo, hi) words.
fn clmul(a: u128, mut b: u128) -> (u128, u128) {
    let (mut lo, mut hi) = (0u128, 0u128);
    let (mut sl, mut sh) = (a, 0u128);
    while b != 0 {
        if b & 1 == 1 {
            lo ^= sl;
            hi ^= sh;
        }
        b >>= 1;
        sh = (sh << 1) | (sl >> 127);
        sl <<= 1;
    }
    (lo, hi)
}

fn poly_deg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        // a mod b
        let db = poly_deg(b);
        while poly_deg(a) >= db {
            a ^= b << (poly_deg(a) - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Smallest tail (by integer value) making X^m + tail irreducible; only
/// used for small test degrees without a pinned constant.
fn smallest_irreducible_tail(m: u32) -> Result<u128> {
    if m > 20 {
        return Err(Error::Parameter(format!("no pinned modulus for m={m}")));
    }
    for tail in 1u128..(1 << m) {
        let cand = Gf2m { m, tail };
        // constant term must be 1, else X divides
        if tail & 1 == 1 && cand.modulus_is_irreducible() {
            return Ok(tail);
        }
    }
    Err(Error::Parameter(format!("no irreducible of degree {m}")))
}

impl CoeffField for Gf2m {
    type Elem = u128;

    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        1
    }
    fn add(&self, a: u128, b: u128) -> u128 {
        Gf2m::add(self, a, b)
    }
    fn mul(&self, a: u128, b: u128) -> u128 {
        Gf2m::mul(self, a, b)
    }
}

/// Row-reduced basis of an F_2-subspace of GF(2^m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSpace {
    basis: Vec<u128>,
}

impl SupportSpace {
    /// Reduced row-echelon basis of the span of the given elements.
    pub fn from_elements(elements: &[u128]) -> Self {
        let mut rows: Vec<u128> = Vec::new();
        for &e in elements {
            let mut v = e;
            for &r in &rows {
                let lead = 127 - r.leading_zeros();
                if (v >> lead) & 1 == 1 {
                    v ^= r;
                }
            }
            if v != 0 {
                rows.push(v);
            }
        }
        // back-substitute for a canonical reduced basis
        rows.sort_unstable_by(|a, b| b.cmp(a));
        for i in (0..rows.len()).rev() {
            let lead = 127 - rows[i].leading_zeros();
            for j in 0..i {
                if (rows[j] >> lead) & 1 == 1 {
                    rows[j] ^= rows[i];
                }
            }
        }
        SupportSpace { basis: rows }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u128] {
        &self.basis
    }

    pub fn contains(&self, e: u128) -> bool {
        let mut v = e;
        for &r in &self.basis {
            let lead = 127 - r.leading_zeros();
            if (v >> lead) & 1 == 1 {
                v ^= r;
            }
        }
        v == 0
    }

    /// Random F_2-combination of the basis.
    pub fn random_element(&self, rng: &mut Expander) -> u128 {
        let coeffs = rng.next_u64();
        self.basis
            .iter()
            .enumerate()
            .filter(|(i, _)| (coeffs >> (i % 64)) & 1 == 1)
            .fold(0u128, |acc, (_, &b)| acc ^ b)
    }
}

/// Expansion matrix E(v): m rows, n columns, column i holding the
/// polynomial-basis coordinates of v_i.
pub fn expand(field: &Gf2m, v: &[u128]) -> Vec<Vec<u8>> {
    let m = field.degree() as usize;
    (0..m)
        .map(|row| v.iter().map(|&e| ((e >> row) & 1) as u8).collect())
        .collect()
}

/// Rank of E(v) over F_2: the dimension of the span of the entries.
pub fn rank_weight(v: &[u128]) -> usize {
    SupportSpace::from_elements(v).dim()
}

/// The support Supp(v) = span of the entries of v.
pub fn support(v: &[u128]) -> SupportSpace {
    SupportSpace::from_elements(v)
}

/// Samples a vector of exact rank weight w, reusing `shared` as the
/// support when given. Entries are redrawn until they span the whole
/// support.
pub fn sample_rank_weight(
    field: &Gf2m,
    n: usize,
    w: usize,
    shared: Option<&SupportSpace>,
    rng: &mut Expander,
) -> Result<(Vec<u128>, SupportSpace)> {
    if w > (field.degree() as usize).min(n) {
        return Err(Error::Parameter(format!(
            "rank weight {w} exceeds min(m, n) = {}",
            (field.degree() as usize).min(n)
        )));
    }
    let supp = match shared {
        Some(s) => {
            if s.dim() != w {
                return Err(Error::Parameter(format!(
                    "shared support has dim {}, expected {w}",
                    s.dim()
                )));
            }
            s.clone()
        }
        None => loop {
            let cand: Vec<u128> = (0..w).map(|_| field.random_element(rng)).collect();
            let s = SupportSpace::from_elements(&cand);
            if s.dim() == w {
                break s;
            }
        },
    };
    if w == 0 {
        return Ok((vec![0; n], supp));
    }
    loop {
        let v: Vec<u128> = (0..n).map(|_| supp.random_element(rng)).collect();
        if rank_weight(&v) == w {
            return Ok((v, supp));
        }
    }
}

/// Serializes entries in order, ceil(m/8) little-endian bytes each.
pub fn vector_to_bytes(field: &Gf2m, v: &[u128]) -> Vec<u8> {
    let eb = (field.degree() as usize).div_ceil(8);
    let mut out = Vec::with_capacity(v.len() * eb);
    for &e in v {
        out.extend_from_slice(&e.to_le_bytes()[..eb]);
    }
    out
}

pub fn vector_from_bytes(field: &Gf2m, n: usize, data: &[u8]) -> Result<Vec<u128>> {
    let eb = (field.degree() as usize).div_ceil(8);
    if data.len() != n * eb {
        return Err(Error::LengthMismatch {
            expected: n * eb,
            got: data.len(),
        });
    }
    let mask = (1u128 << field.degree()) - 1;
    let mut out = Vec::with_capacity(n);
    for chunk in data.chunks(eb) {
        let mut buf = [0u8; 16];
        buf[..eb].copy_from_slice(chunk);
        let e = u128::from_le_bytes(buf);
        if e & !mask != 0 {
            return Err(Error::Malformed("field element exceeds m bits".into()));
        }
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::expander;

    #[test]
    fn production_moduli_verify() {
        for m in [53u32, 61, 83, 89] {
            let f = Gf2m::new(m).unwrap();
            assert_eq!(f.degree(), m);
        }
    }

    #[test]
    fn small_field_table_check() {
        // GF(2^3) with X^3 + X + 1: alpha * alpha^2 = alpha + 1
        let f = Gf2m::new(3).unwrap();
        assert_eq!(f.modulus(), 0b1011);
        let a = f.alpha();
        let a2 = f.mul(a, a);
        assert_eq!(f.mul(a, a2), 0b011);
        // alpha has order 7
        assert_eq!(f.pow(a, 7), 1);
        assert_ne!(f.pow(a, 1), 1);
    }

    #[test]
    fn mul_identity_and_inverse() {
        for m in [3u32, 8, 53, 89] {
            let f = Gf2m::new(m).unwrap();
            let mut rng = expander(&[m as u8; 32]);
            for _ in 0..32 {
                let a = f.random_element(&mut rng);
                assert_eq!(f.mul(a, f.one()), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "m={m} a={a:#x}");
                }
            }
        }
        assert!(Gf2m::new(53).unwrap().inv(0).is_err());
    }

    #[test]
    fn field_axioms_random() {
        let f = Gf2m::new(53).unwrap();
        let mut rng = expander(&[5u8; 32]);
        for _ in 0..64 {
            let (a, b, c) = (
                f.random_element(&mut rng),
                f.random_element(&mut rng),
                f.random_element(&mut rng),
            );
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.square(a), f.square(b)));
        }
    }

    #[test]
    fn expand_examples() {
        let f = Gf2m::new(3).unwrap();
        let zero = expand(&f, &[0, 0]);
        assert!(zero.iter().flatten().all(|&b| b == 0));
        // (1, alpha, alpha^2) expands to the 3x3 identity
        let v = [1u128, 2, 4];
        let e = expand(&f, &v);
        for (r, row) in e.iter().enumerate() {
            for (c, &bit) in row.iter().enumerate() {
                assert_eq!(bit, u8::from(r == c));
            }
        }
        assert_eq!(rank_weight(&v), 3);
    }

    #[test]
    fn expand_is_linear() {
        let f = Gf2m::new(8).unwrap();
        let mut rng = expander(&[8u8; 32]);
        let u: Vec<u128> = (0..6).map(|_| f.random_element(&mut rng)).collect();
        let v: Vec<u128> = (0..6).map(|_| f.random_element(&mut rng)).collect();
        let sum: Vec<u128> = u.iter().zip(&v).map(|(&a, &b)| a ^ b).collect();
        let (eu, ev, es) = (expand(&f, &u), expand(&f, &v), expand(&f, &sum));
        for r in 0..8 {
            for c in 0..6 {
                assert_eq!(es[r][c], eu[r][c] ^ ev[r][c]);
            }
        }
    }

    #[test]
    fn rank_weight_examples() {
        assert_eq!(rank_weight(&[0, 0, 0]), 0);
        // all entries equal and nonzero: rank 1
        assert_eq!(rank_weight(&[5, 5, 5, 5]), 1);
        let s = support(&[6, 6, 6]);
        assert_eq!(s.dim(), 1);
        assert!(s.contains(6));
        assert!(!s.contains(1));
    }

    #[test]
    fn support_contains_all_entries() {
        let f = Gf2m::new(53).unwrap();
        let mut rng = expander(&[7u8; 32]);
        let v: Vec<u128> = (0..10).map(|_| f.random_element(&mut rng)).collect();
        let s = support(&v);
        assert!(v.iter().all(|&e| s.contains(e)));
    }

    #[test]
    fn subadditivity_and_isometry() {
        let f = Gf2m::new(8).unwrap();
        let mut rng = expander(&[11u8; 32]);
        let n = 8;
        for _ in 0..20 {
            let u: Vec<u128> = (0..n).map(|_| f.random_element(&mut rng)).collect();
            let v: Vec<u128> = (0..n).map(|_| f.random_element(&mut rng)).collect();
            let sum: Vec<u128> = u.iter().zip(&v).map(|(&a, &b)| a ^ b).collect();
            assert!(rank_weight(&sum) <= rank_weight(&u) + rank_weight(&v));

            // random invertible coordinate matrix over F_2
            let p = random_invertible(n, &mut rng);
            let moved: Vec<u128> = (0..n)
                .map(|j| {
                    (0..n)
                        .filter(|&i| p[i][j] == 1)
                        .fold(0u128, |acc, i| acc ^ u[i])
                })
                .collect();
            assert_eq!(rank_weight(&moved), rank_weight(&u));
        }
    }

    fn random_invertible(n: usize, rng: &mut Expander) -> Vec<Vec<u8>> {
        loop {
            let m: Vec<Vec<u8>> = (0..n)
                .map(|_| (0..n).map(|_| (rng.next_u32() & 1) as u8).collect())
                .collect();
            // rank check over F_2 via packed rows
            let rows: Vec<u128> = m
                .iter()
                .map(|r| r.iter().enumerate().fold(0u128, |a, (i, &b)| a | ((b as u128) << i)))
                .collect();
            if SupportSpace::from_elements(&rows).dim() == n {
                return m;
            }
        }
    }

    #[test]
    fn sampling_contract() {
        let f = Gf2m::new(53).unwrap();
        let mut rng = expander(&[13u8; 32]);
        let (z, _) = sample_rank_weight(&f, 10, 0, None, &mut rng).unwrap();
        assert!(z.iter().all(|&e| e == 0));

        let (x, e) = sample_rank_weight(&f, 53, 4, None, &mut rng).unwrap();
        assert_eq!(rank_weight(&x), 4);
        assert_eq!(support(&x), e);
        let (y, e2) = sample_rank_weight(&f, 53, 4, Some(&e), &mut rng).unwrap();
        assert_eq!(e2, e);
        assert_eq!(support(&y), e);

        assert!(sample_rank_weight(&f, 3, 5, None, &mut rng).is_err());
    }

    #[test]
    fn sampling_rank_exact_many_seeds() {
        let f = Gf2m::new(53).unwrap();
        for s in 0..100u8 {
            let mut rng = expander(&[s; 32]);
            let (x, _) = sample_rank_weight(&f, 53, 4, None, &mut rng).unwrap();
            assert_eq!(rank_weight(&x), 4);
        }
    }

    #[test]
    fn serialization_round_trip() {
        let f = Gf2m::new(53).unwrap();
        let mut rng = expander(&[17u8; 32]);
        let v: Vec<u128> = (0..8).map(|_| f.random_element(&mut rng)).collect();
        let bytes = vector_to_bytes(&f, &v);
        assert_eq!(bytes.len(), 8 * 7);
        assert_eq!(vector_from_bytes(&f, 8, &bytes).unwrap(), v);
        let mut bad = bytes.clone();
        bad[6] = 0xff; // top byte of first entry exceeds 53 bits
        assert!(vector_from_bytes(&f, 8, &bad).is_err());
    }
}
