//! The rank-metric scheme over F_{2^m}[X]/(X^n - 1) with a Gabidulin
//! public code. Parameters satisfy w^2 + eps_w <= floor((n-k)/2), so
//! decryption never fails; a Gabidulin decode failure here signals an
//! implementation bug and surfaces as an integrity error.

use crate::cyclic_ring::RingElement;
use crate::error::{Error, Result};
use crate::gabidulin::GabidulinCode;
use crate::rank_field::{
    rank_weight, sample_rank_weight, vector_from_bytes, vector_to_bytes, Gf2m, SupportSpace,
};
use crate::rng::{expander, Expander, Seed};
use rand_chacha::rand_core::RngCore;

/// File magic for RQC key and ciphertext files.
pub const RQC_MAGIC: &[u8; 8] = b"RQCv1\0\0\0";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RqcParameterSet {
    pub name: &'static str,
    pub n: usize,
    pub k: usize,
    pub m: u32,
    pub q: u32,
    pub w: usize,
    pub eps_w: usize,
    pub security_bits: u32,
    pub id: u8,
}

pub const RQC_ROWS: [RqcParameterSet; 3] = [
    RqcParameterSet {
        name: "RQC-I",
        n: 53,
        k: 13,
        m: 53,
        q: 2,
        w: 4,
        eps_w: 4,
        security_bits: 95,
        id: 1,
    },
    RqcParameterSet {
        name: "RQC-II",
        n: 61,
        k: 3,
        m: 61,
        q: 2,
        w: 5,
        eps_w: 4,
        security_bits: 140,
        id: 2,
    },
    RqcParameterSet {
        name: "RQC-III",
        n: 83,
        k: 3,
        m: 83,
        q: 2,
        w: 6,
        eps_w: 4,
        security_bits: 230,
        id: 3,
    },
];

pub fn rqc_setup(name: &str) -> Result<RqcParameterSet> {
    let row = RQC_ROWS
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .cloned()
        .ok_or_else(|| Error::UnknownInstance(name.to_string()))?;
    row.validate()?;
    Ok(row)
}

pub fn rqc_params_by_id(id: u8) -> Option<RqcParameterSet> {
    RQC_ROWS.iter().find(|p| p.id == id).cloned()
}

impl RqcParameterSet {
    pub fn custom(n: usize, k: usize, m: u32, w: usize, eps_w: usize) -> Result<Self> {
        let p = RqcParameterSet {
            name: "custom",
            n,
            k,
            m,
            q: 2,
            w,
            eps_w,
            security_bits: 0,
            id: 0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Zero-failure inequality: w^2 + eps_w must fit inside the decode
    /// radius floor((n-k)/2).
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n || self.n > self.m as usize {
            return Err(Error::Parameter(format!(
                "need 0 < k <= n <= m, got k={} n={} m={}",
                self.k, self.n, self.m
            )));
        }
        let radius = (self.n - self.k) / 2;
        if self.w * self.w + self.eps_w > radius {
            return Err(Error::Parameter(format!(
                "w^2 + eps_w = {} exceeds decode radius {radius}",
                self.w * self.w + self.eps_w
            )));
        }
        Ok(())
    }

    /// Key size in bits as accounted in the parameter table: n * m.
    pub fn key_size_bits(&self) -> usize {
        self.n * self.m as usize
    }

    /// Plaintext size in bits: k * m.
    pub fn plaintext_bits(&self) -> usize {
        self.k * self.m as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RqcPublicKey {
    pub qr_seed: Seed,
    pub s: Vec<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RqcSecretKey {
    pub x: Vec<u128>,
    pub y: Vec<u128>,
    pub seed: Seed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RqcCiphertext {
    pub v: Vec<u128>,
    pub rho: Vec<u128>,
}

/// The scheme bound to one parameter row.
#[derive(Debug, Clone)]
pub struct Rqc {
    params: RqcParameterSet,
    field: Gf2m,
    code: GabidulinCode,
}

impl Rqc {
    pub fn new(params: &RqcParameterSet) -> Result<Self> {
        params.validate()?;
        let field = Gf2m::new(params.m)?;
        let code = GabidulinCode::new(field, params.n, params.k)?;
        Ok(Self {
            params: params.clone(),
            field,
            code,
        })
    }

    pub fn params(&self) -> &RqcParameterSet {
        &self.params
    }

    pub fn field(&self) -> &Gf2m {
        &self.field
    }

    pub fn code(&self) -> &GabidulinCode {
        &self.code
    }

    fn ring_mul(&self, a: &[u128], b: &[u128]) -> Result<Vec<u128>> {
        let ra = RingElement::<Gf2m>::from_coeffs(a.to_vec());
        let rb = RingElement::<Gf2m>::from_coeffs(b.to_vec());
        Ok(ra.ring_mul(&self.field, &rb)?.coeffs().to_vec())
    }

    fn add(a: &[u128], b: &[u128]) -> Vec<u128> {
        a.iter().zip(b).map(|(&x, &y)| x ^ y).collect()
    }

    pub fn expand_qr(&self, qr_seed: &Seed) -> Vec<u128> {
        let mut rng = expander(qr_seed);
        (0..self.params.n)
            .map(|_| self.field.random_element(&mut rng))
            .collect()
    }

    pub fn keygen(&self, seed: &Seed) -> Result<(RqcPublicKey, RqcSecretKey)> {
        let p = &self.params;
        let mut rng = expander(seed);
        let mut qr_seed: Seed = [0; 32];
        rng.fill_bytes(&mut qr_seed);
        // x and y share one rank support of dimension w
        let (x, supp) = sample_rank_weight(&self.field, p.n, p.w, None, &mut rng)?;
        let (y, _) = sample_rank_weight(&self.field, p.n, p.w, Some(&supp), &mut rng)?;
        let q_r = self.expand_qr(&qr_seed);
        let s = Self::add(&x, &self.ring_mul(&q_r, &y)?);
        Ok((
            RqcPublicKey { qr_seed, s },
            RqcSecretKey { x, y, seed: *seed },
        ))
    }

    /// The (r1, r2, eps) draw of encryption: r1 and r2 share a support,
    /// eps gets an independent one.
    pub fn expand_encryption_randomness(
        &self,
        rng: &mut Expander,
    ) -> Result<(Vec<u128>, Vec<u128>, Vec<u128>, SupportSpace)> {
        let p = &self.params;
        let (r1, supp) = sample_rank_weight(&self.field, p.n, p.w, None, rng)?;
        let (r2, _) = sample_rank_weight(&self.field, p.n, p.w, Some(&supp), rng)?;
        let (eps, _) = sample_rank_weight(&self.field, p.n, p.eps_w, None, rng)?;
        Ok((r1, r2, eps, supp))
    }

    pub fn encrypt(&self, pk: &RqcPublicKey, msg: &[u128], seed: &Seed) -> Result<RqcCiphertext> {
        let p = &self.params;
        if msg.len() != p.k {
            return Err(Error::LengthMismatch {
                expected: p.k,
                got: msg.len(),
            });
        }
        let mut rng = expander(seed);
        let (r1, r2, eps, _) = self.expand_encryption_randomness(&mut rng)?;
        let q_r = self.expand_qr(&pk.qr_seed);
        let v = Self::add(&r1, &self.ring_mul(&q_r, &r2)?);
        let mut rho = self.code.encode(msg)?;
        rho = Self::add(&rho, &self.ring_mul(&pk.s, &r2)?);
        rho = Self::add(&rho, &eps);
        Ok(RqcCiphertext { v, rho })
    }

    pub fn decrypt(&self, sk: &RqcSecretKey, ct: &RqcCiphertext) -> Result<Vec<u128>> {
        let noisy = Self::add(&ct.rho, &self.ring_mul(&ct.v, &sk.y)?);
        self.code.decode(&noisy).map_err(|e| match e {
            // parameters guarantee rank(x*r2 - r1*y + eps) <= w^2 + eps_w
            // <= radius, so a failure here is a bug, not an expected event
            Error::DecodeFailure => Error::Integrity(
                "Gabidulin decode failed inside the zero-failure regime".into(),
            ),
            other => other,
        })
    }

    /// rank weight of x*r2 - r1*y for freshly drawn shared-support tuples;
    /// bounded by w^2.
    pub fn sample_product_rank(&self, seed: &Seed) -> Result<usize> {
        let p = &self.params;
        let mut rng = expander(seed);
        let (x, sx) = sample_rank_weight(&self.field, p.n, p.w, None, &mut rng)?;
        let (y, _) = sample_rank_weight(&self.field, p.n, p.w, Some(&sx), &mut rng)?;
        let (r1, sr) = sample_rank_weight(&self.field, p.n, p.w, None, &mut rng)?;
        let (r2, _) = sample_rank_weight(&self.field, p.n, p.w, Some(&sr), &mut rng)?;
        let t = Self::add(&self.ring_mul(&x, &r2)?, &self.ring_mul(&r1, &y)?);
        Ok(rank_weight(&t))
    }
}

// ---------------------------------------------------------------------------
// wire formats: 8-byte magic, 1-byte params id, entries little-endian
// ---------------------------------------------------------------------------

fn check_header<'a>(data: &'a [u8], expected_id: u8, what: &str) -> Result<&'a [u8]> {
    if data.len() < 9 || &data[..8] != RQC_MAGIC {
        return Err(Error::Malformed(format!("bad {what} header")));
    }
    if data[8] != expected_id {
        return Err(Error::Malformed(format!(
            "{what} params id {} does not match expected {}",
            data[8], expected_id
        )));
    }
    Ok(&data[9..])
}

/// Reads the params id byte of a serialized RQC object.
pub fn peek_params_id(data: &[u8]) -> Result<u8> {
    if data.len() < 9 || &data[..8] != RQC_MAGIC {
        return Err(Error::Malformed("bad header".into()));
    }
    Ok(data[8])
}

impl RqcPublicKey {
    pub fn to_bytes(&self, rqc: &Rqc) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(RQC_MAGIC);
        out.push(rqc.params.id);
        out.extend_from_slice(&self.qr_seed);
        out.extend_from_slice(&vector_to_bytes(&rqc.field, &self.s));
        out
    }

    pub fn from_bytes(rqc: &Rqc, data: &[u8]) -> Result<Self> {
        let body = check_header(data, rqc.params.id, "public key")?;
        if body.len() < 32 {
            return Err(Error::Malformed("public key length".into()));
        }
        let qr_seed: Seed = body[..32].try_into().unwrap();
        let s = vector_from_bytes(&rqc.field, rqc.params.n, &body[32..])?;
        Ok(Self { qr_seed, s })
    }
}

impl RqcSecretKey {
    pub fn to_bytes(&self, rqc: &Rqc) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(RQC_MAGIC);
        out.push(rqc.params.id);
        out.extend_from_slice(&self.seed);
        out.extend_from_slice(&vector_to_bytes(&rqc.field, &self.x));
        out.extend_from_slice(&vector_to_bytes(&rqc.field, &self.y));
        out
    }

    pub fn from_bytes(rqc: &Rqc, data: &[u8]) -> Result<Self> {
        let body = check_header(data, rqc.params.id, "secret key")?;
        let n = rqc.params.n;
        let eb = (rqc.params.m as usize).div_ceil(8);
        if body.len() != 32 + 2 * n * eb {
            return Err(Error::Malformed("secret key length".into()));
        }
        let seed: Seed = body[..32].try_into().unwrap();
        let x = vector_from_bytes(&rqc.field, n, &body[32..32 + n * eb])?;
        let y = vector_from_bytes(&rqc.field, n, &body[32 + n * eb..])?;
        Ok(Self { x, y, seed })
    }
}

impl RqcCiphertext {
    pub fn to_bytes(&self, rqc: &Rqc) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(RQC_MAGIC);
        out.push(rqc.params.id);
        out.extend_from_slice(&vector_to_bytes(&rqc.field, &self.v));
        out.extend_from_slice(&vector_to_bytes(&rqc.field, &self.rho));
        out
    }

    pub fn from_bytes(rqc: &Rqc, data: &[u8]) -> Result<Self> {
        let body = check_header(data, rqc.params.id, "ciphertext")?;
        let n = rqc.params.n;
        let eb = (rqc.params.m as usize).div_ceil(8);
        if body.len() != 2 * n * eb {
            return Err(Error::Malformed("ciphertext length".into()));
        }
        let v = vector_from_bytes(&rqc.field, n, &body[..n * eb])?;
        let rho = vector_from_bytes(&rqc.field, n, &body[n * eb..])?;
        Ok(Self { v, rho })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank_field::support;
    use crate::rng::derive_seed;

    #[test]
    fn setup_rows_and_zero_failure_identity() {
        for (name, n, k, m, w, eps) in [
            ("RQC-I", 53, 13, 53, 4, 4),
            ("RQC-II", 61, 3, 61, 5, 4),
            ("RQC-III", 83, 3, 83, 6, 4),
        ] {
            let p = rqc_setup(name).unwrap();
            assert_eq!(
                (p.n, p.k, p.m as usize, p.w, p.eps_w),
                (n, k, m, w, eps)
            );
            // the rows sit exactly at the zero-failure boundary
            assert_eq!(p.w * p.w + p.eps_w, (p.n - p.k) / 2);
        }
        assert!(rqc_setup("RQC-IV").is_err());
        // violating the inequality is rejected
        assert!(RqcParameterSet::custom(53, 13, 53, 5, 4).is_err());
    }

    #[test]
    fn key_and_plaintext_sizes() {
        let sizes: Vec<(usize, usize)> = RQC_ROWS
            .iter()
            .map(|p| (p.key_size_bits(), p.plaintext_bits()))
            .collect();
        assert_eq!(sizes, vec![(2809, 689), (3721, 183), (6889, 249)]);
    }

    #[test]
    fn keygen_secret_supports_shared() {
        let rqc = Rqc::new(&rqc_setup("RQC-I").unwrap()).unwrap();
        let (pk, sk) = rqc.keygen(&[1u8; 32]).unwrap();
        assert_eq!(rank_weight(&sk.x), 4);
        assert_eq!(rank_weight(&sk.y), 4);
        assert_eq!(support(&sk.x), support(&sk.y));
        // recompute s from the secret key
        let q_r = rqc.expand_qr(&pk.qr_seed);
        let s = Rqc::add(&sk.x, &rqc.ring_mul(&q_r, &sk.y).unwrap());
        assert_eq!(s, pk.s);
    }

    #[test]
    fn zero_randomness_hook() {
        let params = RqcParameterSet::custom(8, 2, 8, 0, 0).unwrap();
        let rqc = Rqc::new(&params).unwrap();
        let (pk, sk) = rqc.keygen(&[2u8; 32]).unwrap();
        let msg = vec![0x1bu128, 0x2d];
        let ct = rqc.encrypt(&pk, &msg, &[3u8; 32]).unwrap();
        assert!(ct.v.iter().all(|&e| e == 0));
        assert_eq!(ct.rho, rqc.code().encode(&msg).unwrap());
        assert_eq!(rqc.decrypt(&sk, &ct).unwrap(), msg);
    }

    #[test]
    fn round_trips_rqc1() {
        let rqc = Rqc::new(&rqc_setup("RQC-I").unwrap()).unwrap();
        let master = [4u8; 32];
        for i in 0..5u64 {
            let (pk, sk) = rqc.keygen(&derive_seed(&master, b"key", i)).unwrap();
            let mut mrng = expander(&derive_seed(&master, b"msg", i));
            let msg: Vec<u128> = (0..13).map(|_| rqc.field().random_element(&mut mrng)).collect();
            let ct = rqc
                .encrypt(&pk, &msg, &derive_seed(&master, b"enc", i))
                .unwrap();
            assert_eq!(rqc.decrypt(&sk, &ct).unwrap(), msg);
        }
    }

    #[test]
    fn error_rank_bounds() {
        let rqc = Rqc::new(&rqc_setup("RQC-I").unwrap()).unwrap();
        let mut at_bound = 0;
        for i in 0..20u8 {
            let r = rqc.sample_product_rank(&[i; 32]).unwrap();
            assert!(r <= 16, "rank {r} exceeds w^2");
            if r == 16 {
                at_bound += 1;
            }
        }
        // "almost always w^2"
        assert!(at_bound >= 15, "only {at_bound}/20 hit the bound");
    }

    #[test]
    fn modulo_change_preserves_rank_bound() {
        // multiply modulo X^8 - 1 and modulo X^8 + X + 1: under either
        // modulus every entry is an F_2-combination of the pairwise
        // products, so both results live in the same product space of
        // dimension <= w^2 and obey the same rank bound. Exact equality of
        // the two ranks is only generic; at this tiny scale it holds for
        // most but not all draws, so it is counted, not asserted.
        let field = Gf2m::new(8).unwrap();
        let mut rng = expander(&[7u8; 32]);
        let mut equal = 0;
        for _ in 0..10 {
            let (a, sa) = sample_rank_weight(&field, 8, 2, None, &mut rng).unwrap();
            let (b, sb) = sample_rank_weight(&field, 8, 2, Some(&sa), &mut rng).unwrap();
            assert_eq!(sa, sb);
            let mut prods = Vec::new();
            for &ea in sa.basis() {
                for &eb in sb.basis() {
                    prods.push(field.mul(ea, eb));
                }
            }
            let product_space = support(&prods);
            let p1 = mul_mod(&field, &a, &b, 0b1);
            let p2 = mul_mod(&field, &a, &b, 0b11);
            for p in [&p1, &p2] {
                assert!(rank_weight(p) <= 4);
                assert!(p.iter().all(|&e| product_space.contains(e)));
            }
            if rank_weight(&p1) == rank_weight(&p2) {
                equal += 1;
            }
        }
        assert!(equal >= 7, "ranks agreed on only {equal}/10 draws");
    }

    /// Product of a and b modulo X^n + tail, tail an F_2 polynomial given
    /// as a bitmask.
    fn mul_mod(field: &Gf2m, a: &[u128], b: &[u128], tail: u64) -> Vec<u128> {
        let n = a.len();
        let mut prod = vec![0u128; 2 * n - 1];
        for i in 0..n {
            for j in 0..n {
                prod[i + j] ^= field.mul(a[i], b[j]);
            }
        }
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for j in 0..64 {
                if (tail >> j) & 1 == 1 {
                    prod[d - n + j] ^= c;
                }
            }
        }
        prod.truncate(n);
        prod
    }

    #[test]
    fn serialization_round_trips() {
        let rqc = Rqc::new(&rqc_setup("RQC-I").unwrap()).unwrap();
        let (pk, sk) = rqc.keygen(&[9u8; 32]).unwrap();
        let mut mrng = expander(&[10u8; 32]);
        let msg: Vec<u128> = (0..13).map(|_| rqc.field().random_element(&mut mrng)).collect();
        let ct = rqc.encrypt(&pk, &msg, &[11u8; 32]).unwrap();

        let pkb = pk.to_bytes(&rqc);
        assert_eq!(RqcPublicKey::from_bytes(&rqc, &pkb).unwrap(), pk);
        let skb = sk.to_bytes(&rqc);
        assert_eq!(RqcSecretKey::from_bytes(&rqc, &skb).unwrap(), sk);
        let ctb = ct.to_bytes(&rqc);
        assert_eq!(RqcCiphertext::from_bytes(&rqc, &ctb).unwrap(), ct);

        let rqc2 = Rqc::new(&rqc_setup("RQC-II").unwrap()).unwrap();
        assert!(RqcCiphertext::from_bytes(&rqc2, &ctb).is_err());
    }
}
