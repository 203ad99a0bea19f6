use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{LabError, Result};

/// ψ(q^t) = q^{s(t)}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ApproxFunction {
    /// s(t) = −c·t + b.
    Linear { c: i64, b: i64 },
    /// s(t) listed for t = 0, 1, …; extended linearly with the last slope.
    Table(Vec<i64>),
}

impl ApproxFunction {
    pub fn linear(c: i64, b: i64) -> ApproxFunction {
        ApproxFunction::Linear { c, b }
    }

    pub fn s(&self, t: i64) -> i64 {
        match self {
            ApproxFunction::Linear { c, b } => -c * t + b,
            ApproxFunction::Table(v) => {
                let t = t.max(0) as usize;
                if t < v.len() {
                    return v[t];
                }
                let last = v.len() - 1;
                v[last] + (t - last) as i64 * Self::last_slope(v)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ApproxFunction::Linear { c, .. } if *c < 0 => Err(LabError::Config("ψ must be nonincreasing".into())),
            ApproxFunction::Table(v) if v.is_empty() => Err(LabError::Config("empty ψ table".into())),
            ApproxFunction::Table(v) if v.windows(2).any(|w| w[1] > w[0]) => {
                Err(LabError::Config("ψ must be nonincreasing".into()))
            }
            _ => Ok(()),
        }
    }

    /// ψ(q^t) ≤ q^{−nt} for every t (checked over the table, or in closed form).
    pub fn is_quantitative(&self, n: usize) -> bool {
        let n = n as i64;
        match self {
            ApproxFunction::Linear { c, b } => *b <= 0 && *c >= n,
            ApproxFunction::Table(v) => {
                v.iter().enumerate().all(|(t, &s)| s <= -n * t as i64) && Self::last_slope(v) <= -n
            }
        }
    }

    fn last_slope(v: &[i64]) -> i64 {
        if v.len() < 2 {
            0
        } else {
            v[v.len() - 1] - v[v.len() - 2]
        }
    }

    /// First t with ψ(q^t) < q^{−nt}, searched up to `horizon`.
    pub fn cutoff(&self, n: usize, horizon: i64) -> Option<i64> {
        (0..=horizon).find(|&t| self.s(t) < -(n as i64) * t)
    }
}

fn q_pow_rat(q: u32, e: i64) -> BigRational {
    let qb = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(qb, e as usize)
    } else {
        num_traits::pow(qb.recip(), (-e) as usize)
    }
}

/// Number of q ∈ Λⁿ with ‖q‖ = q^t: q^{nt}(q^n − 1).
pub fn shell_count(q: u32, n: usize, t: i64) -> BigInt {
    let qb = BigInt::from(q);
    num_traits::pow(qb.clone(), n * t as usize) * (num_traits::pow(qb, n) - BigInt::one())
}

/// Σ_{t=0}^{T} ψ(q^t)·q^{nt}(q^n − 1).
pub fn sum_psi_partial(psi: &ApproxFunction, q: u32, n: usize, t_max: i64) -> BigRational {
    (0..=t_max).fold(BigRational::zero(), |acc, t| {
        acc + q_pow_rat(q, psi.s(t)) * BigRational::from_integer(shell_count(q, n, t))
    })
}

/// The full series Σψ in closed form, for linear ψ with slope c > n.
pub fn sum_psi_closed(psi: &ApproxFunction, q: u32, n: usize) -> Option<BigRational> {
    match psi {
        ApproxFunction::Linear { c, b } if *c > n as i64 => {
            let ratio = q_pow_rat(q, n as i64 - c);
            let qn1 = BigRational::from_integer(num_traits::pow(BigInt::from(q), n) - BigInt::one());
            Some(q_pow_rat(q, *b) * qn1 / (BigRational::one() - ratio))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_sum_example() {
        let psi = ApproxFunction::linear(3, 0);
        assert_eq!(sum_psi_partial(&psi, 2, 2, 2), BigRational::new(21.into(), 4.into()));
        // closed form 3/(1 - 1/2) = 6
        assert_eq!(sum_psi_closed(&psi, 2, 2).unwrap(), BigRational::from_integer(6.into()));
        assert!(sum_psi_closed(&ApproxFunction::linear(2, 0), 2, 2).is_none());
    }

    #[test]
    fn divergent_sums_grow() {
        let psi = ApproxFunction::linear(0, 0);
        let a = sum_psi_partial(&psi, 2, 2, 3);
        let b = sum_psi_partial(&psi, 2, 2, 4);
        assert_eq!(b - a, BigRational::from_integer(shell_count(2, 2, 4)));
    }

    #[test]
    fn validation_and_cutoff() {
        assert!(ApproxFunction::Table(vec![0, 1]).validate().is_err());
        assert!(ApproxFunction::linear(-1, 0).validate().is_err());
        let psi = ApproxFunction::linear(3, 1);
        assert_eq!(psi.cutoff(2, 10), Some(2));
        assert!(ApproxFunction::linear(3, 0).is_quantitative(2));
        assert!(!ApproxFunction::linear(1, 0).is_quantitative(2));
        let table = ApproxFunction::Table(vec![0, -3, -6]);
        assert_eq!(table.s(5), -15);
        assert!(table.is_quantitative(2));
        assert!(!ApproxFunction::Table(vec![0]).is_quantitative(2));
    }
}
