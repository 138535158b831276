//! Gabidulin [n, k] codes over GF(2^m), k <= n <= m: evaluation encoding of
//! q-polynomials and deterministic bounded-distance decoding up to
//! floor((n-k)/2) rank errors by linearized-polynomial reconstruction.

use crate::error::{Error, Result};
use crate::rank_field::{rank_weight, Gf2m};

/// Linearized polynomial P(X) = sum c_i X^(2^i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    pub coeffs: Vec<u128>,
}

impl QPolynomial {
    pub fn new(coeffs: Vec<u128>) -> Self {
        Self { coeffs }
    }

    /// Largest i with c_i != 0, or None for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    pub fn eval(&self, field: &Gf2m, u: u128) -> u128 {
        let mut acc = 0u128;
        let mut pow = u; // u^(2^i)
        for &c in &self.coeffs {
            acc ^= field.mul(c, pow);
            pow = field.square(pow);
        }
        acc
    }
}

/// Gabidulin code with evaluation points 1, alpha, ..., alpha^(n-1) —
/// the polynomial basis, linearly independent over F_2 by construction.
#[derive(Debug, Clone)]
pub struct GabidulinCode {
    field: Gf2m,
    n: usize,
    k: usize,
    points: Vec<u128>,
}

impl GabidulinCode {
    pub fn new(field: Gf2m, n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n || n > field.degree() as usize {
            return Err(Error::Parameter(format!(
                "need 0 < k <= n <= m, got k={k} n={n} m={}",
                field.degree()
            )));
        }
        let mut points = Vec::with_capacity(n);
        let mut p = field.one();
        for _ in 0..n {
            points.push(p);
            p = field.mul(p, field.alpha());
        }
        Ok(Self { field, n, k, points })
    }

    pub fn field(&self) -> &Gf2m {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    /// floor((n - k) / 2) rank errors are always corrected.
    pub fn decode_radius(&self) -> usize {
        (self.n - self.k) / 2
    }

    pub fn encode(&self, msg: &[u128]) -> Result<Vec<u128>> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: msg.len(),
            });
        }
        let p = QPolynomial::new(msg.to_vec());
        Ok(self.points.iter().map(|&g| p.eval(&self.field, g)).collect())
    }

    /// Reconstruction decoding: find q-polynomials V (q-deg <= t, V != 0)
    /// and N (q-deg < k + t) with V(y_i) == N(g_i) for every i, then
    /// left-divide f = V \ N and verify by re-encoding.
    pub fn decode(&self, word: &[u128]) -> Result<Vec<u128>> {
        if word.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: word.len(),
            });
        }
        let f = &self.field;
        let t = self.decode_radius();
        let nv = t + 1; // V coefficients
        let nn = self.k + t; // N coefficients
        // homogeneous system: sum_j v_j y_i^(2^j) - sum_l n_l g_i^(2^l) = 0
        let mut a = vec![vec![0u128; nv + nn]; self.n];
        for i in 0..self.n {
            let mut yp = word[i];
            for j in 0..nv {
                a[i][j] = yp;
                yp = f.square(yp);
            }
            let mut gp = self.points[i];
            for l in 0..nn {
                a[i][nv + l] = gp; // subtraction == addition in char 2
                gp = f.square(gp);
            }
        }
        let z = kernel_vector(f, a, nv + nn).ok_or(Error::DecodeFailure)?;
        let v = QPolynomial::new(z[..nv].to_vec());
        let nq = QPolynomial::new(z[nv..].to_vec());
        // a nonzero kernel vector always has V != 0: V = 0 forces N to
        // vanish on n >= k + t independent points, hence N = 0
        let msg = left_divide(f, &nq, &v, self.k).ok_or(Error::DecodeFailure)?;
        let reencoded = self.encode(&msg)?;
        let diff: Vec<u128> = reencoded.iter().zip(word).map(|(&c, &y)| c ^ y).collect();
        if rank_weight(&diff) > t {
            return Err(Error::DecodeFailure);
        }
        Ok(msg)
    }
}

/// Nonzero kernel vector of the homogeneous system given by `a` (rows are
/// equations over GF(2^m)), or None when the kernel is trivial.
fn kernel_vector(f: &Gf2m, mut a: Vec<Vec<u128>>, cols: usize) -> Option<Vec<u128>> {
    let rows = a.len();
    let mut pivot_of_col = vec![usize::MAX; cols];
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = f.inv(a[rank][col]).expect("pivot is nonzero");
        for c in col..cols {
            a[rank][c] = f.mul(a[rank][c], inv);
        }
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let factor = a[r][col];
                for c in col..cols {
                    let sub = f.mul(factor, a[rank][c]);
                    a[r][c] ^= sub;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let free_col = (0..cols).find(|&c| pivot_of_col[c] == usize::MAX)?;
    let mut z = vec![0u128; cols];
    z[free_col] = 1;
    for col in 0..cols {
        let pr = pivot_of_col[col];
        if pr != usize::MAX {
            z[col] = a[pr][free_col]; // char 2: -x == x
        }
    }
    Some(z)
}

/// f with V o f == N (composition (V o f)_i = sum_{a+b=i} v_a f_b^(2^a)),
/// or None when V does not left-divide N. The quotient is padded/truncated
/// to exactly k coefficients; a nonzero tail means failure.
fn left_divide(f: &Gf2m, n: &QPolynomial, v: &QPolynomial, k: usize) -> Option<Vec<u128>> {
    let dv = v.q_degree()?;
    let m = f.degree();
    let v_top = v.coeffs[dv];
    let mut rem = n.coeffs.clone();
    let mut quot = vec![0u128; rem.len().max(k)];
    while let Some(dr) = rem.iter().rposition(|&c| c != 0) {
        if dr < dv {
            return None; // nonzero remainder of lower q-degree
        }
        let db = dr - dv;
        // v_top * f_db^(2^dv) = rem_dr  =>  f_db = (rem_dr / v_top)^(2^-dv)
        let ratio = f.mul(rem[dr], f.inv(v_top).ok()?);
        let fb = f.frobenius(ratio, (m - (dv as u32 % m)) % m);
        quot[db] = fb;
        // subtract V o (fb X^(2^db))
        for (a, &va) in v.coeffs.iter().enumerate() {
            if va != 0 {
                let term = f.mul(va, f.frobenius(fb, a as u32));
                rem[a + db] ^= term;
            }
        }
    }
    if quot[k..].iter().any(|&c| c != 0) {
        return None;
    }
    quot.truncate(k);
    Some(quot)
}
