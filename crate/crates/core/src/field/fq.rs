//! The coefficient field F_q = F_p[X]/(modulus), table driven.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Largest field size the table-driven kernel accepts.
pub const MAX_Q: u32 = 1024;

/// User-facing description of F_q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqConfig {
    pub p: u32,
    pub a: u32,
    /// Coefficients of a monic irreducible polynomial of degree `a`, lowest
    /// degree first (length `a + 1`). Ignored when `a == 1`.
    #[serde(default)]
    pub modulus: Vec<u32>,
}

impl FqConfig {
    pub fn prime(p: u32) -> Self {
        FqConfig { p, a: 1, modulus: vec![] }
    }

    pub fn extension(p: u32, modulus: Vec<u32>) -> Self {
        let a = modulus.len().saturating_sub(1) as u32;
        FqConfig { p, a, modulus }
    }
}

/// An element of F_q, stored as the base-p integer encoding of its
/// coefficient vector over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for F_q. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Fq {
    config: FqConfig,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomials over F_p as coefficient vectors, lowest degree first.
fn fp_trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = fp_trim(b.to_vec());
    let mut r = fp_trim(a.to_vec());
    let lb = *b.last().expect("nonzero divisor");
    let lb_inv = pow_mod(lb, p - 2, p);
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = (*r.last().unwrap() as u64 * lb_inv as u64 % p as u64) as u32;
        for (i, &bc) in b.iter().enumerate() {
            let sub = (factor as u64 * bc as u64 % p as u64) as u32;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

/// Exhaustive irreducibility test: no monic factor of degree 1..=deg/2.
pub fn is_irreducible_fp(modulus: &[u32], p: u32) -> bool {
    let m = fp_trim(modulus.iter().map(|c| c % p).collect());
    if m.len() < 2 {
        return false;
    }
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if fp_rem(&m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Fq {
    pub fn new(config: FqConfig) -> Result<Fq> {
        let p = config.p;
        if !is_prime(p) {
            return Err(LabError::Config(format!("p = {p} is not prime")));
        }
        if config.a == 0 {
            return Err(LabError::Config("extension degree a must be positive".into()));
        }
        let q64 = (p as u64).checked_pow(config.a).unwrap_or(u64::MAX);
        if q64 > MAX_Q as u64 {
            return Err(LabError::Config(format!("q = {p}^{} exceeds {MAX_Q}", config.a)));
        }
        let q = q64 as u32;
        let a = config.a as usize;
        let modulus = if a == 1 {
            vec![0, 1]
        } else {
            if config.modulus.len() != a + 1 || config.modulus[a] % p != 1 {
                return Err(LabError::Config(format!(
                    "modulus must be monic of degree {a} (got {:?})",
                    config.modulus
                )));
            }
            if !is_irreducible_fp(&config.modulus, p) {
                return Err(LabError::Config(format!(
                    "modulus {:?} is reducible over F_{p}",
                    config.modulus
                )));
            }
            config.modulus.iter().map(|c| c % p).collect()
        };

        let decode = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(a);
            let mut c = x;
            for _ in 0..a {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 {
            let mut x = 0u32;
            for &c in v.iter().take(a).rev() {
                x = x * p + c;
            }
            x
        };

        let n = q as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for x in 0..q {
            let xv = decode(x);
            for y in 0..q {
                let yv = decode(y);
                let s: Vec<u32> = xv.iter().zip(&yv).map(|(a, b)| (a + b) % p).collect();
                add[(x * q + y) as usize] = encode(&s);
                let mut prod = vec![0u32; 2 * a];
                for (i, &xc) in xv.iter().enumerate() {
                    for (j, &yc) in yv.iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u64 + xc as u64 * yc as u64) % p as u64) as u32;
                    }
                }
                let r = fp_rem(&prod, &modulus, p);
                let mut r = r;
                r.resize(a, 0);
                mul[(x * q + y) as usize] = encode(&r);
            }
        }
        let mut neg = vec![0u32; n];
        let mut inv = vec![0u32; n];
        for x in 0..q {
            for y in 0..q {
                if add[(x * q + y) as usize] == 0 {
                    neg[x as usize] = y;
                }
                if mul[(x * q + y) as usize] == 1 {
                    inv[x as usize] = y;
                }
            }
        }
        Ok(Fq { config: FqConfig { p, a: config.a, modulus }, q, add, mul, neg, inv })
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Fq> {
        Fq::new(FqConfig::prime(p))
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.config.p
    }

    pub fn degree(&self) -> u32 {
        self.config.a
    }

    pub fn config(&self) -> &FqConfig {
        &self.config
    }

    #[inline]
    pub fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        FqElem(self.add[(x.0 * self.q + y.0) as usize])
    }

    #[inline]
    pub fn sub(&self, x: FqElem, y: FqElem) -> FqElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        FqElem(self.mul[(x.0 * self.q + y.0) as usize])
    }

    #[inline]
    pub fn neg(&self, x: FqElem) -> FqElem {
        FqElem(self.neg[x.0 as usize])
    }

    pub fn inv(&self, x: FqElem) -> Result<FqElem> {
        if x.is_zero() {
            return Err(LabError::Domain("inverse of zero in F_q".into()));
        }
        Ok(FqElem(self.inv[x.0 as usize]))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FqElem> {
        (1..self.q).map(FqElem)
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.config.p as i64) as u32)
    }

    /// Coefficient vector over F_p (length a).
    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        let p = self.config.p;
        let mut c = x.0;
        (0..self.config.a)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, v: &[u32]) -> Result<FqElem> {
        if v.len() > self.config.a as usize {
            return Err(LabError::Parse(format!("F_q element {v:?} has more than {} coordinates", self.config.a)));
        }
        let p = self.config.p;
        let mut x = 0u32;
        for &c in v.iter().rev() {
            x = x * p + c % p;
        }
        Ok(FqElem(x))
    }

    pub fn element(&self, index: u32) -> Result<FqElem> {
        if index >= self.q {
            return Err(LabError::Domain(format!("F_q index {index} out of range")));
        }
        Ok(FqElem(index))
    }
}
