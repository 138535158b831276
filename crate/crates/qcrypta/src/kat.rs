//! Known-answer test vectors: deterministic seed-to-output regression
//! files shared by both schemes.
//!
//! Text format: per vector the lines `seed = <hex>`, `pk = <hex>`,
//! `sk = <hex>`, `msg = <hex>`, `ct = <hex>`, vectors separated by blank
//! lines; `#` lines are comments.

use crate::error::{Error, Result};
use crate::hqc::{Hqc, HqcCiphertext, HqcPublicKey, HqcSecretKey};
use crate::rank_field::{vector_from_bytes, vector_to_bytes};
use crate::rng::{derive_seed, expander, Seed};
use crate::rqc::{Rqc, RqcCiphertext, RqcPublicKey, RqcSecretKey};
use rand_chacha::rand_core::RngCore;

pub const KAT_COUNT: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatVector {
    pub seed: Seed,
    pub pk: Vec<u8>,
    pub sk: Vec<u8>,
    pub msg: Vec<u8>,
    pub ct: Vec<u8>,
}

/// Packs one-bit-per-byte values LSB-first.
pub fn pack_bits(bits: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        out[i / 8] |= (b & 1) << (i % 8);
    }
    out
}

/// Inverse of [`pack_bits`]; rejects nonzero padding bits.
pub fn unpack_bits(bytes: &[u8], count: usize) -> Result<Vec<u8>> {
    if bytes.len() != count.div_ceil(8) {
        return Err(Error::LengthMismatch {
            expected: count.div_ceil(8),
            got: bytes.len(),
        });
    }
    let bits: Vec<u8> = (0..count).map(|i| (bytes[i / 8] >> (i % 8)) & 1).collect();
    for i in count..bytes.len() * 8 {
        if (bytes[i / 8] >> (i % 8)) & 1 != 0 {
            return Err(Error::Malformed("nonzero padding bits".into()));
        }
    }
    Ok(bits)
}

fn hqc_vector(hqc: &Hqc, seed: &Seed) -> Result<KatVector> {
    let params = hqc.params();
    let (pk, sk) = hqc.keygen(&derive_seed(seed, b"key", 0))?;
    let mut mrng = expander(&derive_seed(seed, b"msg", 0));
    let msg_bits: Vec<u8> = (0..params.k).map(|_| (mrng.next_u32() & 1) as u8).collect();
    let ct = hqc.encrypt(&pk, &msg_bits, &derive_seed(seed, b"enc", 0))?;
    Ok(KatVector {
        seed: *seed,
        pk: pk.to_bytes(params),
        sk: sk.to_bytes(params),
        msg: pack_bits(&msg_bits),
        ct: ct.to_bytes(params),
    })
}

fn rqc_vector(rqc: &Rqc, seed: &Seed) -> Result<KatVector> {
    let (pk, sk) = rqc.keygen(&derive_seed(seed, b"key", 0))?;
    let mut mrng = expander(&derive_seed(seed, b"msg", 0));
    let msg: Vec<u128> = (0..rqc.params().k)
        .map(|_| rqc.field().random_element(&mut mrng))
        .collect();
    let ct = rqc.encrypt(&pk, &msg, &derive_seed(seed, b"enc", 0))?;
    Ok(KatVector {
        seed: *seed,
        pk: pk.to_bytes(rqc),
        sk: sk.to_bytes(rqc),
        msg: vector_to_bytes(rqc.field(), &msg),
        ct: ct.to_bytes(rqc),
    })
}

pub fn generate_hqc(hqc: &Hqc, master: &Seed, count: usize) -> Result<Vec<KatVector>> {
    (0..count as u64)
        .map(|i| hqc_vector(hqc, &derive_seed(master, b"kat", i)))
        .collect()
}

pub fn generate_rqc(rqc: &Rqc, master: &Seed, count: usize) -> Result<Vec<KatVector>> {
    (0..count as u64)
        .map(|i| rqc_vector(rqc, &derive_seed(master, b"kat", i)))
        .collect()
}

fn mismatch(index: usize, field: &str) -> Error {
    Error::Integrity(format!("KAT vector {index}: field `{field}` diverges"))
}

/// Recomputes every vector from its recorded seed and checks all fields
/// bit-exactly, then checks decrypt(sk, ct) == msg.
pub fn verify_hqc(hqc: &Hqc, vectors: &[KatVector]) -> Result<()> {
    let params = hqc.params();
    for (i, v) in vectors.iter().enumerate() {
        let fresh = hqc_vector(hqc, &v.seed)?;
        for (field, got, want) in [
            ("pk", &v.pk, &fresh.pk),
            ("sk", &v.sk, &fresh.sk),
            ("msg", &v.msg, &fresh.msg),
            ("ct", &v.ct, &fresh.ct),
        ] {
            if got != want {
                return Err(mismatch(i, field));
            }
        }
        let sk = HqcSecretKey::from_bytes(params, &v.sk)?;
        let ct = HqcCiphertext::from_bytes(params, &v.ct)?;
        let decrypted = hqc.decrypt(&sk, &ct)?;
        if pack_bits(&decrypted) != v.msg {
            return Err(mismatch(i, "decrypt"));
        }
        // pk must parse back, too
        HqcPublicKey::from_bytes(params, &v.pk)?;
    }
    Ok(())
}

pub fn verify_rqc(rqc: &Rqc, vectors: &[KatVector]) -> Result<()> {
    for (i, v) in vectors.iter().enumerate() {
        let fresh = rqc_vector(rqc, &v.seed)?;
        for (field, got, want) in [
            ("pk", &v.pk, &fresh.pk),
            ("sk", &v.sk, &fresh.sk),
            ("msg", &v.msg, &fresh.msg),
            ("ct", &v.ct, &fresh.ct),
        ] {
            if got != want {
                return Err(mismatch(i, field));
            }
        }
        let sk = RqcSecretKey::from_bytes(rqc, &v.sk)?;
        let ct = RqcCiphertext::from_bytes(rqc, &v.ct)?;
        let decrypted = rqc.decrypt(&sk, &ct)?;
        if vector_to_bytes(rqc.field(), &decrypted) != v.msg {
            return Err(mismatch(i, "decrypt"));
        }
        let pk = RqcPublicKey::from_bytes(rqc, &v.pk)?;
        vector_from_bytes(rqc.field(), rqc.params().n, &vector_to_bytes(rqc.field(), &pk.s))?;
    }
    Ok(())
}

pub fn to_text(vectors: &[KatVector]) -> String {
    let mut out = String::new();
    for v in vectors {
        out.push_str(&format!("seed = {}\n", hex::encode(v.seed)));
        out.push_str(&format!("pk = {}\n", hex::encode(&v.pk)));
        out.push_str(&format!("sk = {}\n", hex::encode(&v.sk)));
        out.push_str(&format!("msg = {}\n", hex::encode(&v.msg)));
        out.push_str(&format!("ct = {}\n", hex::encode(&v.ct)));
        out.push('\n');
    }
    out
}

pub fn from_text(text: &str) -> Result<Vec<KatVector>> {
    let mut vectors = Vec::new();
    let mut fields: Vec<(String, Vec<u8>)> = Vec::new();
    let flush = |fields: &mut Vec<(String, Vec<u8>)>, vectors: &mut Vec<KatVector>| -> Result<()> {
        if fields.is_empty() {
            return Ok(());
        }
        let get = |name: &str| -> Result<Vec<u8>> {
            fields
                .iter()
                .find(|(k, _)| k == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Malformed(format!("KAT vector missing `{name}`")))
        };
        let seed_bytes = get("seed")?;
        let seed: Seed = seed_bytes
            .as_slice()
            .try_into()
            .map_err(|_| Error::Malformed("seed must be 32 bytes".into()))?;
        let v = KatVector {
            seed,
            pk: get("pk")?,
            sk: get("sk")?,
            msg: get("msg")?,
            ct: get("ct")?,
        };
        fields.clear();
        vectors.push(v);
        Ok(())
    };
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut fields, &mut vectors)?;
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Malformed(format!("bad KAT line: {line}")))?;
        let bytes = hex::decode(value.trim())
            .map_err(|e| Error::Malformed(format!("bad hex in KAT file: {e}")))?;
        fields.push((key.trim().to_string(), bytes));
    }
    flush(&mut fields, &mut vectors)?;
    Ok(vectors)
}
