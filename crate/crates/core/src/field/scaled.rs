//! Monomial-graded elements of the ramified extension: T^v · (Laurent series).

use num_integer::Integer;
use num_traits::Zero;

use super::exponent::{floor_q, fmt_q, q_frac, q_int, AbsExponent, Q};
use super::fq::{Fq, FqElem};
use super::laurent::Laurent;
use crate::error::{domain, LabError, Result};

/// T^shift · value, with the shift normalized into [0, 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledSeries {
    shift: Q,
    value: Laurent,
}

impl ScaledSeries {
    pub fn new(shift: Q, value: Laurent) -> ScaledSeries {
        let k = floor_q(&shift);
        ScaledSeries { shift: shift - q_int(k), value: value.shift(k) }
    }

    pub fn from_laurent(value: Laurent) -> ScaledSeries {
        ScaledSeries { shift: Q::zero(), value }
    }

    /// The monomial T^v.
    pub fn monomial(v: Q) -> ScaledSeries {
        ScaledSeries::new(v, Laurent::one())
    }

    pub fn zero() -> ScaledSeries {
        ScaledSeries::from_laurent(Laurent::zero())
    }

    pub fn shift(&self) -> Q {
        self.shift
    }

    pub fn mantissa(&self) -> &Laurent {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn abs(&self) -> Result<AbsExponent> {
        Ok(self.value.abs()?.shift(self.shift))
    }

    /// Sum of two elements of the same grade; zero is compatible with all.
    pub fn add(&self, other: &ScaledSeries, fq: &Fq) -> Result<ScaledSeries> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.shift != other.shift {
            return Err(LabError::GradingMismatch(fmt_q(&self.shift), fmt_q(&other.shift)));
        }
        Ok(ScaledSeries { shift: self.shift, value: self.value.add(&other.value, fq) })
    }

    pub fn neg(&self, fq: &Fq) -> ScaledSeries {
        ScaledSeries { shift: self.shift, value: self.value.neg(fq) }
    }

    pub fn mul(&self, other: &ScaledSeries, fq: &Fq) -> ScaledSeries {
        ScaledSeries::new(self.shift + other.shift, self.value.mul(&other.value, fq))
    }

    pub fn mul_laurent(&self, x: &Laurent, fq: &Fq) -> ScaledSeries {
        ScaledSeries { shift: self.shift, value: self.value.mul(x, fq) }
    }

    pub fn scale(&self, c: FqElem, fq: &Fq) -> ScaledSeries {
        ScaledSeries { shift: self.shift, value: self.value.scale(c, fq) }
    }

    /// Multiplication by T^v.
    pub fn shift_by(&self, v: Q) -> ScaledSeries {
        ScaledSeries::new(self.shift + v, self.value.clone())
    }
}

/// The scalars δ′, ε′, ε of the flow together with the ramification index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowScalars {
    pub n: usize,
    pub t: i64,
    pub r: i64,
    pub beta: Q,
    pub ram: i64,
    pub delta_p: ScaledSeries,
    pub eps_p: ScaledSeries,
    pub eps: ScaledSeries,
}

impl FlowScalars {
    pub fn exp_delta_p(&self) -> Q {
        q_int(-(self.n as i64 * self.t + self.r))
    }

    pub fn exp_eps_p(&self) -> Q {
        let n = self.n as i64;
        q_frac((self.t + 1) * (n - 1) - n * self.t - self.r, n + 1)
    }

    pub fn exp_eps(&self) -> Q {
        self.beta * q_int(self.t) + self.exp_eps_p()
    }

    /// Exponents of the diagonal of g_t in the order e0, e*1..e*(n-1), e1..en.
    pub fn gt_exponents(&self) -> Vec<Q> {
        let n = self.n;
        let ee = self.exp_eps();
        let mut v = Vec::with_capacity(2 * n);
        v.push(ee - self.exp_delta_p());
        v.extend(std::iter::repeat_n(ee, n - 1));
        v.extend(std::iter::repeat_n(ee - q_int(self.t + 1), n));
        v
    }
}

/// Builds δ′ = T^{-(nt+r)}, ε′ = (δ′T^{(t+1)(n-1)})^{1/(n+1)} and ε = T^{βt}ε′.
pub fn make_flow_scalars(n: usize, t: i64, r: i64, beta: Q) -> Result<FlowScalars> {
    if n < 2 || t < 0 || r < 0 {
        return domain(format!("flow scalars need n ≥ 2, t ≥ 0, r ≥ 0 (got n={n}, t={t}, r={r})"));
    }
    let upper = q_frac(1, n as i64 + 1);
    if beta <= Q::zero() || beta >= upper {
        return domain(format!("beta = {} outside (0, {})", fmt_q(&beta), fmt_q(&upper)));
    }
    let ram = (n as i64 + 1).lcm(beta.denom());
    let mut fs = FlowScalars {
        n,
        t,
        r,
        beta,
        ram,
        delta_p: ScaledSeries::zero(),
        eps_p: ScaledSeries::zero(),
        eps: ScaledSeries::zero(),
    };
    fs.delta_p = ScaledSeries::monomial(fs.exp_delta_p());
    fs.eps_p = ScaledSeries::monomial(fs.exp_eps_p());
    fs.eps = ScaledSeries::monomial(fs.exp_eps());
    for v in fs.gt_exponents() {
        debug_assert_eq!(ram % v.denom(), 0);
    }
    Ok(fs)
}
