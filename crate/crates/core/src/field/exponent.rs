//! Absolute values as exact exponents of q.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

/// Exact rational exponent.
pub type Q = Rational64;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

pub fn floor_q(x: &Q) -> i64 {
    Integer::div_floor(x.numer(), x.denom())
}

pub fn ceil_q(x: &Q) -> i64 {
    -Integer::div_floor(&-x.numer(), x.denom())
}

/// |x| expressed as q^e; `Zero` stands for the absolute value 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbsExponent {
    Zero,
    Pow(Q),
}

impl AbsExponent {
    pub fn from_int(e: i64) -> AbsExponent {
        AbsExponent::Pow(q_int(e))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AbsExponent::Zero)
    }

    pub fn exponent(&self) -> Option<Q> {
        match self {
            AbsExponent::Zero => None,
            AbsExponent::Pow(e) => Some(*e),
        }
    }

    /// Exponent of a product.
    pub fn mul(self, other: AbsExponent) -> AbsExponent {
        match (self, other) {
            (AbsExponent::Pow(a), AbsExponent::Pow(b)) => AbsExponent::Pow(a + b),
            _ => AbsExponent::Zero,
        }
    }

    /// Multiplies by q^s.
    pub fn shift(self, s: Q) -> AbsExponent {
        match self {
            AbsExponent::Pow(a) => AbsExponent::Pow(a + s),
            AbsExponent::Zero => AbsExponent::Zero,
        }
    }

    pub fn max(self, other: AbsExponent) -> AbsExponent {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: AbsExponent) -> AbsExponent {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Compares against q^e.
    pub fn cmp_pow(&self, e: Q) -> Ordering {
        self.cmp(&AbsExponent::Pow(e))
    }

    /// Approximate value of the absolute value for display.
    pub fn approx(&self, q: u32) -> f64 {
        match self {
            AbsExponent::Zero => 0.0,
            AbsExponent::Pow(e) => (q as f64).powf(*e.numer() as f64 / *e.denom() as f64),
        }
    }
}

impl PartialOrd for AbsExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbsExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AbsExponent::Zero, AbsExponent::Zero) => Ordering::Equal,
            (AbsExponent::Zero, _) => Ordering::Less,
            (_, AbsExponent::Zero) => Ordering::Greater,
            (AbsExponent::Pow(a), AbsExponent::Pow(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for AbsExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsExponent::Zero => write!(f, "-inf"),
            AbsExponent::Pow(e) => write!(f, "{}", fmt_q(e)),
        }
    }
}

pub fn fmt_q(e: &Q) -> String {
    if e.denom().is_one() {
        format!("{}", e.numer())
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// Parses `a` or `a/b`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().ok()?;
            let b: i64 = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Q::new(a, b))
            }
        }
        None => s.parse().ok().map(Q::from_integer),
    }
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.abs().lcm(&b.abs())
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_puts_zero_first() {
        assert!(AbsExponent::Zero < AbsExponent::from_int(-100));
        assert!(AbsExponent::Pow(q_frac(1, 3)) < AbsExponent::Pow(q_frac(1, 2)));
        assert_eq!(AbsExponent::Zero.mul(AbsExponent::from_int(3)), AbsExponent::Zero);
    }

    #[test]
    fn floors_and_ceils() {
        assert_eq!(floor_q(&q_frac(-7, 3)), -3);
        assert_eq!(ceil_q(&q_frac(-7, 3)), -2);
        assert_eq!(ceil_q(&q_frac(6, 3)), 2);
        assert_eq!(parse_q(" -13/6 "), Some(q_frac(-13, 6)));
    }
}
