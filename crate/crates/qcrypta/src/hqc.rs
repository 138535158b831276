//! The Hamming-metric scheme over F_2[X]/(X^n - 1): parameter tables,
//! key generation, encryption, decryption and wire formats.

use crate::analysis::is_primitive_prime;
use crate::bch::BchCode;
use crate::cyclic_ring::{BitRing, FixedWeightSpec};
use crate::error::{Error, Result};
use crate::rng::{expander, Expander, Seed};
use crate::tensor_code::TensorCode;
use rand_chacha::rand_core::RngCore;

/// File magic for HQC key and ciphertext files.
pub const HQC_MAGIC: &[u8; 8] = b"HQCv1\0\0\0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Hamming,
    Rank,
}

/// One named parameter row: component code lengths, ring length, weights
/// and the claimed security level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSet {
    pub name: &'static str,
    pub metric: Metric,
    pub n1: usize,
    pub n2: usize,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub w: usize,
    pub eps_w: usize,
    pub security_bits: u32,
    pub quantum: bool,
    pub id: u8,
}

macro_rules! hqc_row {
    ($name:literal, $n1:expr, $n2:expr, $n:expr, $k:expr, $delta:expr, $w:expr, $sec:expr, $q:expr, $id:expr) => {
        ParameterSet {
            name: $name,
            metric: Metric::Hamming,
            n1: $n1,
            n2: $n2,
            n: $n,
            k: $k,
            delta: $delta,
            w: $w,
            eps_w: 3 * $w,
            security_bits: $sec,
            quantum: $q,
            id: $id,
        }
    };
}

/// Classical-security parameter rows.
pub const HQC_CLASSICAL: [ParameterSet; 4] = [
    hqc_row!("Toy", 255, 25, 6379, 63, 30, 36, 64, false, 1),
    hqc_row!("Low", 255, 37, 9437, 79, 27, 45, 80, false, 2),
    hqc_row!("Medium", 255, 53, 13523, 99, 23, 56, 100, false, 3),
    hqc_row!("Strong", 511, 41, 20959, 121, 58, 72, 128, false, 4),
];

/// Quantum-security parameter rows.
pub const HQC_QUANTUM: [ParameterSet; 4] = [
    hqc_row!("Toy", 255, 65, 16603, 63, 87, 72, 64, true, 5),
    hqc_row!("Low", 511, 47, 24019, 76, 85, 89, 80, true, 6),
    hqc_row!("Medium", 255, 141, 35963, 99, 23, 112, 100, true, 7),
    hqc_row!("Strong", 511, 109, 55711, 121, 58, 143, 128, true, 8),
];

/// Looks up a named row from the published tables.
pub fn setup(name: &str, quantum: bool) -> Result<ParameterSet> {
    let table = if quantum { &HQC_QUANTUM } else { &HQC_CLASSICAL };
    table
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .cloned()
        .ok_or_else(|| Error::UnknownInstance(name.to_string()))
}

pub fn params_by_id(id: u8) -> Option<ParameterSet> {
    HQC_CLASSICAL
        .iter()
        .chain(HQC_QUANTUM.iter())
        .find(|p| p.id == id)
        .cloned()
}

impl ParameterSet {
    /// Validated custom Hamming-metric tuple. The ring length must be a
    /// prime with 2 generating its multiplicative group and must exceed
    /// n1 * n2.
    pub fn custom(
        n1: usize,
        n2: usize,
        n: usize,
        k: usize,
        delta: usize,
        w: usize,
        eps_w: usize,
    ) -> Result<Self> {
        if n <= n1 * n2 {
            return Err(Error::Parameter(format!("n={n} must exceed n1*n2={}", n1 * n2)));
        }
        if !is_primitive_prime(n as u64) {
            return Err(Error::Parameter(format!("n={n} is not a primitive prime")));
        }
        if w > n || eps_w > n {
            return Err(Error::Parameter("weights exceed length".into()));
        }
        Ok(ParameterSet {
            name: "custom",
            metric: Metric::Hamming,
            n1,
            n2,
            n,
            k,
            delta,
            w,
            eps_w,
            security_bits: 0,
            quantum: false,
            id: 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HqcPublicKey {
    pub qr_seed: Seed,
    pub s: BitRing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HqcSecretKey {
    pub x: BitRing,
    pub y: BitRing,
    pub seed: Seed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HqcCiphertext {
    pub v: BitRing,
    pub rho: BitRing,
}

impl HqcPublicKey {
    pub fn expand_qr(&self, n: usize) -> BitRing {
        BitRing::random_uniform(n, &mut expander(&self.qr_seed))
    }

    /// Non-seed payload (q_r expanded, then s): exactly 2n bits.
    pub fn payload_bits(&self, n: usize) -> usize {
        debug_assert_eq!(self.s.len(), n);
        2 * n
    }

    pub fn expanded_payload(&self, n: usize) -> Vec<u8> {
        let mut out = self.expand_qr(n).to_bytes();
        out.extend_from_slice(&self.s.to_bytes());
        out
    }
}

impl HqcCiphertext {
    /// Ciphertext payload (v then rho): exactly 2n bits.
    pub fn payload_bits(&self) -> usize {
        self.v.len() + self.rho.len()
    }
}

impl HqcSecretKey {
    /// Compact form: the sorted support indices of x then y, each packed
    /// into ceil(log2 n) bits, 2w indices in total.
    pub fn to_compact_bytes(&self, params: &ParameterSet) -> Vec<u8> {
        let idx_bits = usize::BITS as usize - (params.n - 1).leading_zeros() as usize;
        let mut bits: Vec<u8> = Vec::with_capacity(2 * params.w * idx_bits);
        for ring in [&self.x, &self.y] {
            for pos in ring.support() {
                for b in 0..idx_bits {
                    bits.push(((pos >> b) & 1) as u8);
                }
            }
        }
        let mut out = vec![0u8; bits.len().div_ceil(8)];
        for (i, &b) in bits.iter().enumerate() {
            out[i / 8] |= b << (i % 8);
        }
        out
    }

    /// Compact size in bits: 2 * w * ceil(log2 n).
    pub fn compact_bits(params: &ParameterSet) -> usize {
        let idx_bits = usize::BITS as usize - (params.n - 1).leading_zeros() as usize;
        2 * params.w * idx_bits
    }
}

/// The scheme bound to one parameter row, with the tensor code built once.
/// Construction fails when the cyclotomic-coset dimension of the BCH code
/// disagrees with the row's printed k.
#[derive(Debug, Clone)]
pub struct Hqc {
    params: ParameterSet,
    code: TensorCode,
}

impl Hqc {
    pub fn new(params: &ParameterSet) -> Result<Self> {
        let bch = BchCode::new(params.n1, params.delta)?;
        if bch.dimension() != params.k {
            return Err(Error::Parameter(format!(
                "BCH({}, delta={}) has dimension {}, parameter row says {}",
                params.n1,
                params.delta,
                bch.dimension(),
                params.k
            )));
        }
        let code = TensorCode::new(bch, params.n2, params.n)?;
        Ok(Self {
            params: params.clone(),
            code,
        })
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn code(&self) -> &TensorCode {
        &self.code
    }

    pub fn keygen(&self, seed: &Seed) -> Result<(HqcPublicKey, HqcSecretKey)> {
        let p = &self.params;
        let mut rng = expander(seed);
        let mut qr_seed: Seed = [0; 32];
        rng.fill_bytes(&mut qr_seed);
        let spec = FixedWeightSpec::new(p.n, p.w)?;
        let x = BitRing::sample_fixed_weight(spec, &mut rng);
        let y = BitRing::sample_fixed_weight(spec, &mut rng);
        let q_r = BitRing::random_uniform(p.n, &mut expander(&qr_seed));
        let s = x.add(&q_r.ring_mul(&y)?)?;
        Ok((
            HqcPublicKey { qr_seed, s },
            HqcSecretKey { x, y, seed: *seed },
        ))
    }

    /// Encrypts a k-bit message (one bit per byte).
    pub fn encrypt(&self, pk: &HqcPublicKey, msg: &[u8], seed: &Seed) -> Result<HqcCiphertext> {
        let p = &self.params;
        if msg.len() != p.k {
            return Err(Error::LengthMismatch {
                expected: p.k,
                got: msg.len(),
            });
        }
        let mut rng = expander(seed);
        let (r1, r2, eps) = self.expand_encryption_randomness(&mut rng)?;
        let q_r = pk.expand_qr(p.n);
        let v = r1.add(&q_r.ring_mul(&r2)?)?;
        let rho = self
            .code
            .encode(msg)?
            .add(&pk.s.ring_mul(&r2)?)?
            .add(&eps)?;
        Ok(HqcCiphertext { v, rho })
    }

    /// The (r1, r2, eps) draw of encryption, exposed so tests can replay
    /// the correctness chain on the expanded randomness.
    pub fn expand_encryption_randomness(
        &self,
        rng: &mut Expander,
    ) -> Result<(BitRing, BitRing, BitRing)> {
        let p = &self.params;
        let spec_w = FixedWeightSpec::new(p.n, p.w)?;
        let spec_e = FixedWeightSpec::new(p.n, p.eps_w)?;
        let r1 = BitRing::sample_fixed_weight(spec_w, rng);
        let r2 = BitRing::sample_fixed_weight(spec_w, rng);
        let eps = BitRing::sample_fixed_weight(spec_e, rng);
        Ok((r1, r2, eps))
    }

    pub fn decrypt(&self, sk: &HqcSecretKey, ct: &HqcCiphertext) -> Result<Vec<u8>> {
        // characteristic 2: rho - v*y = rho + v*y
        let noisy = ct.rho.add(&ct.v.ring_mul(&sk.y)?)?;
        self.code.decode(&noisy).map_err(|e| match e {
            Error::DecodeFailure => Error::DecryptFailure,
            other => other,
        })
    }
}

// ---------------------------------------------------------------------------
// wire formats: 8-byte magic, 1-byte params id, bit-packed payload
// ---------------------------------------------------------------------------

fn check_header<'a>(data: &'a [u8], expected_id: u8, what: &str) -> Result<&'a [u8]> {
    if data.len() < 9 || &data[..8] != HQC_MAGIC {
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

/// Reads the params id byte of a serialized HQC object.
pub fn peek_params_id(data: &[u8]) -> Result<u8> {
    if data.len() < 9 || &data[..8] != HQC_MAGIC {
        return Err(Error::Malformed("bad header".into()));
    }
    Ok(data[8])
}

impl HqcPublicKey {
    pub fn to_bytes(&self, params: &ParameterSet) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(HQC_MAGIC);
        out.push(params.id);
        out.extend_from_slice(&self.qr_seed);
        out.extend_from_slice(&self.s.to_bytes());
        out
    }

    pub fn from_bytes(params: &ParameterSet, data: &[u8]) -> Result<Self> {
        let body = check_header(data, params.id, "public key")?;
        if body.len() != 32 + params.n.div_ceil(8) {
            return Err(Error::Malformed("public key length".into()));
        }
        let qr_seed: Seed = body[..32].try_into().unwrap();
        let s = BitRing::from_bytes(params.n, &body[32..])?;
        Ok(Self { qr_seed, s })
    }
}

impl HqcSecretKey {
    pub fn to_bytes(&self, params: &ParameterSet) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(HQC_MAGIC);
        out.push(params.id);
        out.extend_from_slice(&self.seed);
        out.extend_from_slice(&self.x.to_bytes());
        out.extend_from_slice(&self.y.to_bytes());
        out
    }

    pub fn from_bytes(params: &ParameterSet, data: &[u8]) -> Result<Self> {
        let body = check_header(data, params.id, "secret key")?;
        let nb = params.n.div_ceil(8);
        if body.len() != 32 + 2 * nb {
            return Err(Error::Malformed("secret key length".into()));
        }
        let seed: Seed = body[..32].try_into().unwrap();
        let x = BitRing::from_bytes(params.n, &body[32..32 + nb])?;
        let y = BitRing::from_bytes(params.n, &body[32 + nb..])?;
        Ok(Self { x, y, seed })
    }
}

impl HqcCiphertext {
    pub fn to_bytes(&self, params: &ParameterSet) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(HQC_MAGIC);
        out.push(params.id);
        out.extend_from_slice(&self.v.to_bytes());
        out.extend_from_slice(&self.rho.to_bytes());
        out
    }

    pub fn from_bytes(params: &ParameterSet, data: &[u8]) -> Result<Self> {
        let body = check_header(data, params.id, "ciphertext")?;
        let nb = params.n.div_ceil(8);
        if body.len() != 2 * nb {
            return Err(Error::Malformed("ciphertext length".into()));
        }
        let v = BitRing::from_bytes(params.n, &body[..nb])?;
        let rho = BitRing::from_bytes(params.n, &body[nb..])?;
        Ok(Self { v, rho })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_seed;

    #[test]
    fn setup_returns_table_rows() {
        let toy = setup("Toy", false).unwrap();
        assert_eq!(
            (toy.n1, toy.n2, toy.n, toy.k, toy.delta, toy.w, toy.eps_w, toy.security_bits),
            (255, 25, 6379, 63, 30, 36, 108, 64)
        );
        let strong = setup("Strong", false).unwrap();
        assert_eq!(
            (strong.n1, strong.n2, strong.n, strong.k, strong.delta, strong.w, strong.eps_w),
            (511, 41, 20959, 121, 58, 72, 216)
        );
        let qlow = setup("Low", true).unwrap();
        assert_eq!(
            (qlow.n1, qlow.n2, qlow.n, qlow.k, qlow.delta, qlow.w, qlow.eps_w),
            (511, 47, 24019, 76, 85, 89, 267)
        );
        assert!(setup("Gigantic", false).is_err());
    }

    #[test]
    fn custom_params_validation() {
        // 6379 is a primitive prime > 255*25
        assert!(ParameterSet::custom(255, 25, 6379, 63, 30, 36, 108).is_ok());
        // 6380 composite
        assert!(ParameterSet::custom(255, 25, 6380, 63, 30, 36, 108).is_err());
        // too short
        assert!(ParameterSet::custom(255, 25, 127, 63, 30, 36, 108).is_err());
    }

    #[test]
    fn keygen_zero_weight_hook() {
        let params = ParameterSet::custom(15, 5, 83, 5, 3, 0, 0).unwrap();
        let hqc = Hqc::new(&params).unwrap();
        let (pk, sk) = hqc.keygen(&[9u8; 32]).unwrap();
        assert!(sk.x.is_zero() && sk.y.is_zero());
        assert!(pk.s.is_zero(), "s = x + q_r*y collapses to zero");
    }

    #[test]
    fn keygen_deterministic_and_consistent() {
        let params = setup("Toy", false).unwrap();
        let hqc = Hqc::new(&params).unwrap();
        let seed = [1u8; 32];
        let (pk1, sk1) = hqc.keygen(&seed).unwrap();
        let (pk2, sk2) = hqc.keygen(&seed).unwrap();
        assert_eq!(pk1, pk2);
        assert_eq!(sk1, sk2);
        assert_eq!(sk1.x.weight(), 36);
        assert_eq!(sk1.y.weight(), 36);
        // recompute s = x + q_r * y from the secret key
        let q_r = pk1.expand_qr(params.n);
        let s = sk1.x.add(&q_r.ring_mul(&sk1.y).unwrap()).unwrap();
        assert_eq!(s, pk1.s);
    }

    #[test]
    fn zero_randomness_hook_and_round_trip() {
        let params = ParameterSet::custom(15, 5, 83, 5, 3, 0, 0).unwrap();
        let hqc = Hqc::new(&params).unwrap();
        let (pk, sk) = hqc.keygen(&[2u8; 32]).unwrap();
        let msg = vec![1, 0, 1, 1, 0];
        let ct = hqc.encrypt(&pk, &msg, &[3u8; 32]).unwrap();
        assert!(ct.v.is_zero());
        assert_eq!(ct.rho, hqc.code().encode(&msg).unwrap());
        assert_eq!(hqc.decrypt(&sk, &ct).unwrap(), msg);
    }

    #[test]
    fn encrypt_deterministic_and_v_recomputes() {
        let params = setup("Toy", false).unwrap();
        let hqc = Hqc::new(&params).unwrap();
        let (pk, _) = hqc.keygen(&[4u8; 32]).unwrap();
        let msg: Vec<u8> = (0..63).map(|i| (i % 2) as u8).collect();
        let seed = [5u8; 32];
        let c1 = hqc.encrypt(&pk, &msg, &seed).unwrap();
        let c2 = hqc.encrypt(&pk, &msg, &seed).unwrap();
        assert_eq!(c1, c2);
        let (r1, r2, _) = hqc
            .expand_encryption_randomness(&mut expander(&seed))
            .unwrap();
        let q_r = pk.expand_qr(params.n);
        let v = r1.add(&q_r.ring_mul(&r2).unwrap()).unwrap();
        assert_eq!(v, c1.v);
    }

    #[test]
    fn toy_round_trips() {
        let params = setup("Toy", false).unwrap();
        let hqc = Hqc::new(&params).unwrap();
        let master = [6u8; 32];
        for i in 0..20u64 {
            let kseed = derive_seed(&master, b"key", i);
            let eseed = derive_seed(&master, b"enc", i);
            let (pk, sk) = hqc.keygen(&kseed).unwrap();
            let msg: Vec<u8> = (0..63).map(|j| ((i as usize + j) % 2) as u8).collect();
            let ct = hqc.encrypt(&pk, &msg, &eseed).unwrap();
            assert_eq!(hqc.decrypt(&sk, &ct).unwrap(), msg);
        }
    }

    #[test]
    fn beyond_capability_error_pattern() {
        let params = ParameterSet::custom(15, 5, 83, 5, 3, 0, 0).unwrap();
        let hqc = Hqc::new(&params).unwrap();
        let (pk, sk) = hqc.keygen(&[7u8; 32]).unwrap();
        let msg = vec![1, 1, 0, 0, 1];
        let mut ct = hqc.encrypt(&pk, &msg, &[8u8; 32]).unwrap();
        // radius+1 flips in delta1+1 blocks defeats the tensor code
        for block in 0..4 {
            for j in 0..3 {
                ct.rho.flip(block * 5 + j);
            }
        }
        match hqc.decrypt(&sk, &ct) {
            Err(Error::DecryptFailure) => {}
            Ok(m) => assert_ne!(m, msg, "must fail or return a wrong message"),
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn correctness_chain_on_expanded_randomness() {
        let params = setup("Toy", false).unwrap();
        let hqc = Hqc::new(&params).unwrap();
        let (pk, sk) = hqc.keygen(&[10u8; 32]).unwrap();
        let msg: Vec<u8> = (0..63).map(|j| (j % 3 == 0) as u8).collect();
        let seed = [11u8; 32];
        let ct = hqc.encrypt(&pk, &msg, &seed).unwrap();
        let (r1, r2, eps) = hqc
            .expand_encryption_randomness(&mut expander(&seed))
            .unwrap();
        // rho + v*y == encode(msg) + (x*r2 + r1*y + eps)
        let lhs = ct.rho.add(&ct.v.ring_mul(&sk.y).unwrap()).unwrap();
        let e = sk
            .x
            .ring_mul(&r2)
            .unwrap()
            .add(&r1.ring_mul(&sk.y).unwrap())
            .unwrap()
            .add(&eps)
            .unwrap();
        let rhs = hqc.code().encode(&msg).unwrap().add(&e).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn serialization_round_trips_and_sizes() {
        let params = setup("Toy", false).unwrap();
        let hqc = Hqc::new(&params).unwrap();
        let (pk, sk) = hqc.keygen(&[12u8; 32]).unwrap();
        let msg: Vec<u8> = vec![1; 63];
        let ct = hqc.encrypt(&pk, &msg, &[13u8; 32]).unwrap();

        let pkb = pk.to_bytes(&params);
        assert_eq!(HqcPublicKey::from_bytes(&params, &pkb).unwrap(), pk);
        let skb = sk.to_bytes(&params);
        assert_eq!(HqcSecretKey::from_bytes(&params, &skb).unwrap(), sk);
        let ctb = ct.to_bytes(&params);
        assert_eq!(HqcCiphertext::from_bytes(&params, &ctb).unwrap(), ct);

        assert_eq!(pk.payload_bits(params.n), 2 * params.n);
        assert_eq!(ct.payload_bits(), 2 * params.n);
        // 2w ceil(log2 n) = 2*36*13
        assert_eq!(HqcSecretKey::compact_bits(&params), 936);
        assert_eq!(sk.to_compact_bytes(&params).len(), 936usize.div_ceil(8));

        // wrong params id rejected
        let low = setup("Low", false).unwrap();
        assert!(HqcCiphertext::from_bytes(&low, &ctb).is_err());
    }
}
