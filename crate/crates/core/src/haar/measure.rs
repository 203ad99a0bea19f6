use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::real::Real;

/// A Haar measure value count·q^scale, kept normalized (q ∤ count).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMeasure {
    q: u32,
    count: BigUint,
    scale: i64,
}

impl ExactMeasure {
    pub fn new(q: u32, count: impl Into<BigUint>, scale: i64) -> ExactMeasure {
        let mut m = ExactMeasure { q, count: count.into(), scale };
        m.normalize();
        m
    }

    pub fn zero(q: u32) -> ExactMeasure {
        ExactMeasure::new(q, 0u32, 0)
    }

    /// q^k.
    pub fn q_pow(q: u32, k: i64) -> ExactMeasure {
        ExactMeasure::new(q, 1u32, k)
    }

    fn normalize(&mut self) {
        if self.count.is_zero() {
            self.scale = 0;
            return;
        }
        let qb = BigUint::from(self.q);
        loop {
            let (d, r) = self.count.div_rem(&qb);
            if !r.is_zero() {
                break;
            }
            self.count = d;
            self.scale += 1;
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn count(&self) -> &BigUint {
        &self.count
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.count.is_zero()
    }

    pub fn add(&self, other: &ExactMeasure) -> ExactMeasure {
        assert_eq!(self.q, other.q, "measures over different fields");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.scale.min(other.scale);
        let qb = BigUint::from(self.q);
        let a = &self.count * num_traits::pow(qb.clone(), (self.scale - lo) as usize);
        let b = &other.count * num_traits::pow(qb, (other.scale - lo) as usize);
        ExactMeasure::new(self.q, a + b, lo)
    }

    /// Multiplication by q^k.
    pub fn shift(&self, k: i64) -> ExactMeasure {
        if self.is_zero() {
            return self.clone();
        }
        ExactMeasure { q: self.q, count: self.count.clone(), scale: self.scale + k }
    }

    pub fn mul_int(&self, k: u64) -> ExactMeasure {
        ExactMeasure::new(self.q, &self.count * BigUint::from(k), self.scale)
    }

    pub fn to_rational(&self) -> BigRational {
        let qb = BigInt::from(self.q);
        let c = BigRational::from_integer(BigInt::from(self.count.clone()));
        if self.scale >= 0 {
            c * BigRational::from_integer(num_traits::pow(qb, self.scale as usize))
        } else {
            c / BigRational::from_integer(num_traits::pow(qb, (-self.scale) as usize))
        }
    }

    pub fn to_real(&self) -> Real {
        Real::Rat(self.to_rational())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_one(&self) -> bool {
        self.count.is_one() && self.scale == 0
    }
}

impl PartialOrd for ExactMeasure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactMeasure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for ExactMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        match (self.count.is_one(), self.scale) {
            (_, 0) => write!(f, "{}", self.count),
            (true, s) => write!(f, "{}^{}", self.q, s),
            (false, s) => write!(f, "{}*{}^{}", self.count, self.q, s),
        }
    }
}

impl Serialize for ExactMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_addition() {
        let a = ExactMeasure::new(2, 4u32, -3);
        assert_eq!(a, ExactMeasure::q_pow(2, -1));
        let b = ExactMeasure::q_pow(2, -1).add(&ExactMeasure::q_pow(2, -1));
        assert!(b.is_one());
        let c = ExactMeasure::new(3, 2u32, -1).add(&ExactMeasure::new(3, 1u32, 0));
        assert_eq!(c.to_string(), "5*3^-1");
        assert!(ExactMeasure::q_pow(2, -6) < ExactMeasure::q_pow(2, -5));
    }
}
