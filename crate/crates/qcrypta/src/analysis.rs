//! Failure-probability pipeline for the Hamming-metric scheme, Monte-Carlo
//! validation of the error model, primitive-prime checking and the rank
//! attack workfactor formula.
//!
//! Probabilities here span thousands of orders of magnitude, far past f64
//! range, and the spec'd precision (~2^-40 relative) rules out log-domain
//! f64 arithmetic (ln-factorials near 6e5 carry ~1e-11 absolute rounding).
//! All binomial sums therefore run in the linear domain on [`Xf`], an f64
//! mantissa with an explicit binary exponent, built by multiplicative
//! recurrences so per-term relative error stays near machine epsilon.

use crate::cyclic_ring::{BitRing, FixedWeightSpec};
use crate::hqc::ParameterSet;
use crate::rng::{derive_seed, expander, Seed};

/// Extended-range nonnegative float: value = m * 2^e with m in [0.5, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Xf {
    m: f64,
    e: i64,
}

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 {
        return (0.0, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 {
        // subnormal: renormalize
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, exp - 1022)
}

impl Xf {
    pub const ZERO: Xf = Xf { m: 0.0, e: 0 };

    pub fn from_f64(x: f64) -> Xf {
        debug_assert!(x >= 0.0 && x.is_finite());
        let (m, e) = frexp(x);
        Xf { m, e }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn mul(self, other: Xf) -> Xf {
        if self.is_zero() || other.is_zero() {
            return Xf::ZERO;
        }
        // product mantissa in [0.25, 1)
        let (m, e) = frexp(self.m * other.m);
        Xf {
            m,
            e: self.e + other.e + e,
        }
    }

    pub fn mul_f64(self, x: f64) -> Xf {
        self.mul(Xf::from_f64(x))
    }

    pub fn add(self, other: Xf) -> Xf {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= other.e {
            (self, other)
        } else {
            (other, self)
        };
        let d = hi.e - lo.e;
        if d > 64 {
            return hi;
        }
        let (m, e) = frexp(hi.m + lo.m * 2f64.powi(-(d as i32)));
        Xf { m, e: hi.e + e }
    }

    pub fn powi(self, mut k: usize) -> Xf {
        let mut acc = Xf::from_f64(1.0);
        let mut base = self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    pub fn to_f64(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.e > 1024 {
            return f64::INFINITY;
        }
        if self.e < -1070 {
            return 0.0;
        }
        self.m * 2f64.powi(self.e as i32)
    }

    pub fn log2(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.e as f64 + self.m.log2()
    }
}

/// All n+1 masses of Binomial(n, p), by the ratio recurrence
/// t_{d} = t_{d-1} * ((n-d+1)/d) * (p/(1-p)) from t_0 = (1-p)^n.
fn binom_pmf(n: usize, p: f64) -> Vec<Xf> {
    debug_assert!((0.0..=1.0).contains(&p));
    if p == 0.0 {
        let mut v = vec![Xf::ZERO; n + 1];
        v[0] = Xf::from_f64(1.0);
        return v;
    }
    if p > 0.5 {
        let mut v = binom_pmf(n, 1.0 - p);
        v.reverse();
        return v;
    }
    let q = 1.0 - p;
    let r = Xf::from_f64(p / q);
    let mut v = Vec::with_capacity(n + 1);
    let mut t = Xf::from_f64(q).powi(n);
    v.push(t);
    for d in 1..=n {
        t = t.mul(r).mul_f64((n - d + 1) as f64 / d as f64);
        v.push(t);
    }
    v
}

/// Per-coordinate probabilities of the error model: p = w/n, p_tilde the
/// 1-probability of a coordinate of x*r2, p_star that of the full error
/// e = x*r2 - r1*y + eps.
#[derive(Debug, Clone, Copy)]
pub struct ErrorModel {
    pub n: usize,
    pub w: usize,
    pub eps_w: usize,
    pub p: f64,
    pub p_tilde: f64,
    pub p_star: f64,
}

impl ErrorModel {
    pub fn new(n: usize, w: usize, eps_w: usize) -> Self {
        ErrorModel {
            n,
            w,
            eps_w,
            p: w as f64 / n as f64,
            p_tilde: p_tilde(n, w),
            p_star: p_star(n, w, eps_w),
        }
    }
}

/// Probability that a sum modulo 2 of n independent Bernoulli(p^2) products
/// is 1, with p = w/n: the odd tail of Binomial(n, p^2).
pub fn p_tilde(n: usize, w: usize) -> f64 {
    if w == 0 {
        return 0.0;
    }
    let p = w as f64 / n as f64;
    let pmf = binom_pmf(n, p * p);
    let mut acc = Xf::ZERO;
    for i in (1..=n).step_by(2) {
        acc = acc.add(pmf[i]);
    }
    acc.to_f64()
}

/// Per-coordinate 1-probability of e = x*r2 - r1*y + eps:
/// 2*pt*(1-pt)*(1-eps/n) + ((1-pt)^2 + pt^2)*(eps/n).
pub fn p_star(n: usize, w: usize, eps_w: usize) -> f64 {
    let pt = p_tilde(n, w);
    let re = eps_w as f64 / n as f64;
    2.0 * pt * (1.0 - pt) * (1.0 - re) + ((1.0 - pt) * (1.0 - pt) + pt * pt) * re
}

/// Binomial mass C(n,d) p^d (1-p)^{n-d} of the error weight.
pub fn weight_pmf(n: usize, p_star: f64, d: usize) -> f64 {
    if d > n {
        return 0.0;
    }
    binom_pmf(n, p_star)[d].to_f64()
}

fn p_bar_gamma_xf(n1: usize, n2: usize, gamma: usize) -> Xf {
    if gamma == 0 {
        return Xf::ZERO;
    }
    let rate = gamma as f64 / (n1 * n2) as f64;
    let pmf = binom_pmf(n2, rate);
    let mut acc = Xf::ZERO;
    for term in pmf.iter().skip((n2 - 1) / 2 + 1) {
        acc = acc.add(*term);
    }
    acc
}

/// Probability that a single repetition block decodes wrongly when the
/// gamma errors are spread uniformly over the n1*n2 tensor coordinates.
pub fn p_bar_gamma(n1: usize, n2: usize, gamma: usize) -> f64 {
    p_bar_gamma_xf(n1, n2, gamma).to_f64()
}

fn p_block_tail_xf(delta1: usize, n1: usize, pb: Xf) -> Xf {
    if delta1 >= n1 || pb.is_zero() {
        return Xf::ZERO;
    }
    // tail of Binomial(n1, pb); pb can be far below f64 range, so the
    // pmf recurrence runs directly in Xf
    let q = 1.0 - pb.to_f64(); // relative error ~pb^2, negligible
    if q <= 0.0 {
        return Xf::from_f64(1.0); // every block fails
    }
    let r = pb.mul_f64(1.0 / q);
    let mut t = Xf::from_f64(q).powi(n1);
    let mut acc = Xf::ZERO;
    for i in 1..=n1 {
        t = t.mul(r).mul_f64((n1 - i + 1) as f64 / i as f64);
        if i > delta1 {
            acc = acc.add(t);
        }
    }
    acc
}

/// Probability that more than delta1 of the n1 repetition blocks decode
/// wrongly, given gamma errors on the tensor coordinates.
pub fn p_block_tail(delta1: usize, n1: usize, n2: usize, gamma: usize) -> f64 {
    p_block_tail_xf(delta1, n1, p_bar_gamma_xf(n1, n2, gamma)).to_f64()
}

/// Total decryption failure probability with per-gamma terms retained.
#[derive(Debug, Clone)]
pub struct FailureReport {
    pub params: ParameterSet,
    pub log2_pfail: f64,
    /// (gamma, log2 of its contribution) for every gamma in the sum range.
    pub gamma_terms: Vec<(usize, f64)>,
}

/// Sum over gamma in [0, min(2w^2 + eps_w, n1*n2)] of
/// Pr[weight(e) = gamma] * P(delta1, n1, n2, gamma).
pub fn p_fail(params: &ParameterSet) -> FailureReport {
    let (n, n1, n2) = (params.n, params.n1, params.n2);
    let cap = (2 * params.w * params.w + params.eps_w).min(n1 * n2);
    let em = ErrorModel::new(n, params.w, params.eps_w);
    let pmf = binom_pmf(n, em.p_star);
    let mut gamma_terms = Vec::with_capacity(cap + 1);
    let mut total = Xf::ZERO;
    for gamma in 0..=cap {
        let pb = p_bar_gamma_xf(n1, n2, gamma);
        let term = pmf[gamma].mul(p_block_tail_xf(params.delta, n1, pb));
        gamma_terms.push((gamma, term.log2()));
        total = total.add(term);
    }
    FailureReport {
        params: params.clone(),
        log2_pfail: total.log2(),
        gamma_terms,
    }
}

/// Samples e = x*r2 + r1*y + eps with exact-weight vectors and returns the
/// per-trial weights. Trial i uses derive_seed(seed, "sim", i), so results
/// are schedule-independent.
pub fn simulate_error_weights(
    n: usize,
    w: usize,
    eps_w: usize,
    trials: usize,
    seed: &Seed,
) -> crate::Result<Vec<usize>> {
    let spec_w = FixedWeightSpec::new(n, w)?;
    let spec_e = FixedWeightSpec::new(n, eps_w)?;
    let mut out = Vec::with_capacity(trials);
    for i in 0..trials as u64 {
        let mut rng = expander(&derive_seed(seed, b"sim", i));
        let x = BitRing::sample_fixed_weight(spec_w, &mut rng);
        let y = BitRing::sample_fixed_weight(spec_w, &mut rng);
        let r1 = BitRing::sample_fixed_weight(spec_w, &mut rng);
        let r2 = BitRing::sample_fixed_weight(spec_w, &mut rng);
        let eps = BitRing::sample_fixed_weight(spec_e, &mut rng);
        let e = x.ring_mul(&r2)?.add(&r1.ring_mul(&y)?)?.add(&eps)?;
        out.push(e.weight());
    }
    Ok(out)
}

fn pow_mod(mut base: u128, mut exp: u64, modulus: u128) -> u128 {
    let mut acc: u128 = 1;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True iff n is prime and 2 generates (Z/nZ)*, i.e. the order of 2 mod n
/// is n - 1 (checked via the prime factorization of n - 1).
pub fn is_primitive_prime(n: u64) -> bool {
    if n < 3 || !is_prime(n) {
        return false;
    }
    if pow_mod(2, n - 1, n as u128) != 1 {
        return false;
    }
    prime_factors(n - 1)
        .into_iter()
        .all(|f| pow_mod(2, (n - 1) / f, n as u128) != 1)
}

/// Multiplicative order of 2 mod prime n; diagnostic companion to
/// is_primitive_prime.
pub fn order_of_two(n: u64) -> u64 {
    let mut ord = n - 1;
    for f in prime_factors(n - 1) {
        while ord % f == 0 && pow_mod(2, ord / f, n as u128) == 1 {
            ord /= f;
        }
    }
    ord
}

/// log2 of the rank syndrome attack cost (n-k)^3 m^3 q^{(r-1) floor((k+1)m/n)}.
pub fn rank_attack_workfactor(n: u64, k: u64, m: u64, q: u64, r: u64) -> f64 {
    3.0 * ((n - k) as f64).log2()
        + 3.0 * (m as f64).log2()
        + (r - 1) as f64 * ((k + 1) * m / n) as f64 * (q as f64).log2()
}
