use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::field::exponent::q_int;
use crate::real::Real;

#[derive(Debug, Clone, Serialize)]
pub struct KappaChoice {
    /// κ = q^{−r}.
    pub r: i64,
    /// Index (0, 1, 2) of the binding term of the minimum.
    pub binding: usize,
    pub terms: Vec<String>,
}

/// The smallest r ≥ 0 with q^{−r} < min{1, ξ/(2qΣψ), (ξ/(2K₀K₁))^{n²−1}},
/// decided by exact comparisons.
pub fn kappa_bound(xi: &BigRational, n: usize, q: u32, sum_psi: &BigRational, k0k1: &Real) -> Result<KappaChoice> {
    if *xi <= BigRational::zero() || *xi >= BigRational::one() {
        return domain("ξ must lie in (0, 1)");
    }
    if *sum_psi <= BigRational::zero() {
        return domain("Σψ must be positive");
    }
    let two = BigRational::from_integer(2.into());
    let t1 = Real::int(1);
    let t2 = Real::Rat(xi / (&two * BigRational::from_integer(q.into()) * sum_psi));
    let t3 = Real::Rat(xi / &two).div(k0k1.clone()).pow(q_int((n * n - 1) as i64));
    let terms = [t1, t2, t3];
    let mut binding = 0;
    for (i, t) in terms.iter().enumerate().skip(1) {
        if t.lt(&terms[binding])? {
            binding = i;
        }
    }
    let target = &terms[binding];
    let est = -target.to_f64().log(q as f64);
    let mut r = if est.is_finite() { (est.floor() as i64 - 2).max(0) } else { 0 };
    while !Real::qpow(q, q_int(-r)).lt(target)? {
        r += 1;
    }
    while r > 0 && Real::qpow(q, q_int(-(r - 1))).lt(target)? {
        r -= 1;
    }
    Ok(KappaChoice { r, binding, terms: terms.iter().map(|t| t.to_string()).collect() })
}
