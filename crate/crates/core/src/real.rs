//! Positive real constants built from rationals and rational powers of q,
//! compared exactly through shrinking rational enclosures.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LabError, Result};
use crate::field::exponent::{fmt_q, Q};

/// Expression tree of a positive real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Real {
    Rat(BigRational),
    /// q^e.
    QPow(u32, Q),
    Mul(Box<Real>, Box<Real>),
    Div(Box<Real>, Box<Real>),
    /// x^e for rational e.
    Pow(Box<Real>, Q),
    /// 1 - x, for 0 < x < 1.
    OneMinus(Box<Real>),
    Min(Vec<Real>),
}

type Interval = (BigRational, BigRational);

const MAX_BITS: u64 = 1 << 14;

fn two_pow(k: u64) -> BigInt {
    BigInt::one() << k
}

fn round_down(r: &BigRational, k: u64) -> BigRational {
    let s = two_pow(k);
    BigRational::new((r * BigRational::from_integer(s.clone())).floor().to_integer(), s)
}

fn round_up(r: &BigRational, k: u64) -> BigRational {
    let s = two_pow(k);
    BigRational::new((r * BigRational::from_integer(s.clone())).ceil().to_integer(), s)
}

/// Lower and upper bounds on the b-th root of a positive rational, with
/// denominators 2^k.
fn root_bounds(x: &BigRational, b: u32, k: u64) -> Interval {
    if b == 1 {
        return (round_down(x, k), round_up(x, k));
    }
    let scaled = x * BigRational::from_integer(two_pow(k * b as u64));
    let lo_int = scaled.floor().to_integer().to_biguint().unwrap_or_default();
    let hi_int = scaled.ceil().to_integer().to_biguint().unwrap_or_default();
    let lo_root = lo_int.nth_root(b);
    let mut hi_root = hi_int.nth_root(b);
    if num_traits::pow(hi_root.clone(), b as usize) < hi_int {
        hi_root += BigUint::one();
    }
    let den = two_pow(k);
    (
        BigRational::new(BigInt::from(lo_root), den.clone()),
        BigRational::new(BigInt::from(hi_root), den),
    )
}

fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl Real {
    pub fn rat(n: i64, d: i64) -> Real {
        Real::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn int(n: i64) -> Real {
        Real::rat(n, 1)
    }

    pub fn qpow(q: u32, e: Q) -> Real {
        Real::QPow(q, e)
    }

    pub fn mul(self, other: Real) -> Real {
        Real::Mul(Box::new(self), Box::new(other))
    }

    pub fn div(self, other: Real) -> Real {
        Real::Div(Box::new(self), Box::new(other))
    }

    pub fn pow(self, e: Q) -> Real {
        Real::Pow(Box::new(self), e)
    }

    pub fn one_minus(self) -> Real {
        Real::OneMinus(Box::new(self))
    }

    pub fn min_of(v: Vec<Real>) -> Real {
        Real::Min(v)
    }

    /// The exact rational value, when the expression has one syntactically.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Real::Rat(r) => Some(r.clone()),
            Real::QPow(q, e) if e.denom() == &1 => Some(rat_pow(&BigRational::from_integer((*q).into()), *e.numer())),
            Real::QPow(..) => None,
            Real::Mul(a, b) => Some(a.as_rational()? * b.as_rational()?),
            Real::Div(a, b) => {
                let d = b.as_rational()?;
                if d.is_zero() {
                    None
                } else {
                    Some(a.as_rational()? / d)
                }
            }
            Real::Pow(x, e) if e.denom() == &1 => Some(rat_pow(&x.as_rational()?, *e.numer())),
            Real::Pow(..) => None,
            Real::OneMinus(x) => Some(BigRational::one() - x.as_rational()?),
            Real::Min(v) => v.iter().map(|x| x.as_rational()).collect::<Option<Vec<_>>>()?.into_iter().min(),
        }
    }

    /// An enclosure [lo, hi] of the value at working precision k bits, or
    /// `None` if k is too small to keep every intermediate positive.
    fn enclose(&self, k: u64) -> Option<Interval> {
        let positive = |iv: Interval| if iv.0.is_positive() { Some(iv) } else { None };
        match self {
            Real::Rat(r) => Some((r.clone(), r.clone())),
            Real::QPow(q, e) => {
                let base = rat_pow(&BigRational::from_integer((*q).into()), *e.numer());
                positive(root_bounds(&base, *e.denom() as u32, k + 8))
            }
            Real::Mul(a, b) => {
                let (al, ah) = a.enclose(k)?;
                let (bl, bh) = b.enclose(k)?;
                Some((round_down(&(al * bl), k + 8), round_up(&(ah * bh), k + 8)))
            }
            Real::Div(a, b) => {
                let (al, ah) = a.enclose(k)?;
                let (bl, bh) = b.enclose(k)?;
                if !bl.is_positive() {
                    return None;
                }
                Some((round_down(&(al / bh), k + 8), round_up(&(ah / bl), k + 8)))
            }
            Real::Pow(x, e) => {
                let (lo, hi) = x.enclose(k)?;
                let (a, b) = (*e.numer(), *e.denom() as u32);
                let (lo_p, hi_p) = if a >= 0 { (rat_pow(&lo, a), rat_pow(&hi, a)) } else { (rat_pow(&hi, a), rat_pow(&lo, a)) };
                let lo_r = root_bounds(&lo_p, b, k + 8).0;
                let hi_r = root_bounds(&hi_p, b, k + 8).1;
                positive((lo_r, hi_r))
            }
            Real::OneMinus(x) => {
                let (lo, hi) = x.enclose(k)?;
                positive((BigRational::one() - hi, BigRational::one() - lo))
            }
            Real::Min(v) => {
                let ivs: Vec<Interval> = v.iter().map(|x| x.enclose(k)).collect::<Option<_>>()?;
                let lo = ivs.iter().map(|iv| iv.0.clone()).min()?;
                let hi = ivs.iter().map(|iv| iv.1.clone()).min()?;
                Some((lo, hi))
            }
        }
    }

    /// Exact comparison; fails only if the two values cannot be separated
    /// at the maximal working precision and are not both rational.
    pub fn try_cmp(&self, other: &Real) -> Result<Ordering> {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Ok(a.cmp(&b));
        }
        let mut k = 32;
        while k <= MAX_BITS {
            if let (Some((al, ah)), Some((bl, bh))) = (self.enclose(k), other.enclose(k)) {
                if ah < bl {
                    return Ok(Ordering::Less);
                }
                if bh < al {
                    return Ok(Ordering::Greater);
                }
                if al == ah && bl == bh && al == bl {
                    return Ok(Ordering::Equal);
                }
            }
            k *= 2;
        }
        Err(LabError::Undecided(format!("{self} vs {other}")))
    }

    pub fn lt(&self, other: &Real) -> Result<bool> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    pub fn to_f64(&self) -> f64 {
        match self.enclose(64) {
            Some((lo, hi)) => {
                let mid = (lo + hi) / BigRational::from_integer(2.into());
                mid.to_f64().unwrap_or(f64::NAN)
            }
            None => 0.0,
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rat(r) => write!(f, "{r}"),
            Real::QPow(q, e) => write!(f, "{q}^({})", fmt_q(e)),
            Real::Mul(a, b) => write!(f, "({a})*({b})"),
            Real::Div(a, b) => write!(f, "({a})/({b})"),
            Real::Pow(x, e) => write!(f, "({x})^({})", fmt_q(e)),
            Real::OneMinus(x) => write!(f, "1-({x})"),
            Real::Min(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "min{{{}}}", parts.join(", "))
            }
        }
    }
}

/// r·q^e with r ≥ 0 rational and e rational, ordered exactly by raising
/// both sides to the denominator of the exponent difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatQPow {
    pub r: BigRational,
    pub q: u32,
    pub e: Q,
}

impl RatQPow {
    pub fn new(r: BigRational, q: u32, e: Q) -> RatQPow {
        RatQPow { r, q, e }
    }

    pub fn one(q: u32) -> RatQPow {
        RatQPow { r: BigRational::one(), q, e: Q::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn mul(&self, other: &RatQPow) -> RatQPow {
        RatQPow { r: &self.r * &other.r, q: self.q, e: self.e + other.e }
    }

    pub fn div_rat(&self, c: &BigRational) -> RatQPow {
        RatQPow { r: &self.r / c, q: self.q, e: self.e }
    }

    pub fn to_real(&self) -> Real {
        Real::Rat(self.r.clone()).mul(Real::qpow(self.q, self.e))
    }

    pub fn to_f64(&self) -> f64 {
        self.r.to_f64().unwrap_or(f64::NAN) * (self.q as f64).powf(*self.e.numer() as f64 / *self.e.denom() as f64)
    }
}

impl Ord for RatQPow {
    fn cmp(&self, other: &RatQPow) -> Ordering {
        match (self.r.is_zero(), other.r.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        // self/other = (r₁/r₂)·q^{a/b}; compare (r₁/r₂)^b·q^a with 1
        let diff = self.e - other.e;
        let b = *diff.denom() as u32;
        let a = *diff.numer();
        let ratio = &self.r / &other.r;
        let mut lhs = num_traits::pow(ratio, b as usize);
        let qp = BigRational::from_integer(BigInt::from(self.q).pow(a.unsigned_abs() as u32));
        if a >= 0 {
            lhs *= qp;
        } else {
            lhs /= qp;
        }
        lhs.cmp(&BigRational::one())
    }
}

impl PartialOrd for RatQPow {
    fn partial_cmp(&self, other: &RatQPow) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RatQPow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_zero() {
            write!(f, "{}", self.r)
        } else if self.r.is_one() {
            write!(f, "{}^({})", self.q, fmt_q(&self.e))
        } else {
            write!(f, "{}*{}^({})", self.r, self.q, fmt_q(&self.e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::exponent::q_frac;

    #[test]
    fn compares_roots_exactly() {
        // 2^(1/2) < 3/2 < 2^(2/3)
        let a = Real::qpow(2, q_frac(1, 2));
        let b = Real::rat(3, 2);
        let c = Real::qpow(2, q_frac(2, 3));
        assert_eq!(a.try_cmp(&b).unwrap(), Ordering::Less);
        assert_eq!(c.try_cmp(&b).unwrap(), Ordering::Greater);
        assert_eq!(Real::qpow(2, q_frac(-3, 1)).try_cmp(&Real::rat(1, 8)).unwrap(), Ordering::Equal);
    }

    #[test]
    fn geometric_series_sum() {
        // 1 / (1 - 2^(-1/6)) ≈ 9.1503
        let k1 = Real::int(1).div(Real::qpow(2, q_frac(-1, 6)).one_minus());
        let v = k1.to_f64();
        let expect = 1.0 / (1.0 - 2f64.powf(-1.0 / 6.0));
        assert!((v - expect).abs() < 1e-12);
        assert!(Real::rat(9, 1).lt(&k1).unwrap());
    }

    #[test]
    fn powers_and_minimum() {
        let x = Real::rat(1, 32).pow(q_frac(3, 1));
        assert_eq!(x.as_rational().unwrap(), BigRational::new(1.into(), 32768.into()));
        let m = Real::min_of(vec![Real::int(1), Real::rat(1, 42), x.clone()]);
        assert_eq!(m.try_cmp(&x).unwrap(), Ordering::Equal);
        let y = Real::qpow(3, q_frac(1, 3)).pow(q_frac(3, 1));
        // equal irrational-looking expressions are reported, not guessed
        assert!(matches!(y.try_cmp(&Real::int(3)), Err(LabError::Undecided(_))));
    }

    #[test]
    fn rat_qpow_order() {
        let a = RatQPow::new(BigRational::new(3.into(), 2.into()), 2, Q::zero());
        let b = RatQPow::new(BigRational::one(), 2, q_frac(1, 2));
        let c = RatQPow::new(BigRational::one(), 2, q_frac(2, 3));
        assert!(b < a && a < c);
        assert_eq!(RatQPow::new(BigRational::new(1.into(), 2.into()), 2, q_frac(1, 1)).cmp(&RatQPow::one(2)), Ordering::Equal);
    }
}
