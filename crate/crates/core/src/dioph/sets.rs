//! The sets 𝓛(q, κ) and their gradient split 𝓛ₜ^< / 𝓛ₜ^≥, with κ = q^{kappa_exp}.

use serde::Serialize;

use super::hyperplane::HyperplaneData;
use super::psi::ApproxFunction;
use super::shell::{ball_enumerate, shell_enumerate};
use crate::error::{domain, Result};
use crate::field::{Fq, Laurent, Poly};
use crate::haar::{union_measure, ExactMeasure, FracAffine, UltraBall};

fn norm_exp(qvec: &[Poly]) -> Result<i64> {
    qvec.iter()
        .filter_map(|p| p.degree())
        .max()
        .map(|d| d as i64)
        .ok_or_else(|| crate::error::LabError::Domain("q must be nonzero".into()))
}

/// The predicate x ∈ 𝓛(q, κ) as a fractional-affine form in x.
pub fn form_for(qvec: &[Poly], h: &HyperplaneData, psi: &ApproxFunction, kappa_exp: i64, fq: &Fq) -> Result<FracAffine> {
    if qvec.len() != h.n {
        return domain("q has the wrong length");
    }
    let t = norm_exp(qvec)?;
    Ok(FracAffine { beta: h.gradient(qvec, fq), y: h.offset(qvec, fq), j: -(psi.s(t) + kappa_exp), free_p: true })
}

/// x ∈ 𝓛(q, κ): min_p |(x, x̃·a)·q + p| < κψ(‖q‖).
pub fn membership_l(x: &[Laurent], qvec: &[Poly], h: &HyperplaneData, psi: &ApproxFunction, kappa_exp: i64, fq: &Fq) -> Result<bool> {
    form_for(qvec, h, psi, kappa_exp, fq)?.holds_at(x, fq)
}

/// All |q_i + α_i q_n| < 1 for i ≤ n−1.
pub fn is_small_gradient(qvec: &[Poly], h: &HyperplaneData, fq: &Fq) -> Result<bool> {
    for b in h.gradient(qvec, fq) {
        if !b.abs_lt_pow(0)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SplitFlags {
    pub small: bool,
    pub large: bool,
    pub small_witness: Option<Vec<String>>,
}

/// Which witness classes of the shell ‖q‖ = q^t contain x.
pub fn split_lt(x: &[Laurent], t: i64, h: &HyperplaneData, psi: &ApproxFunction, kappa_exp: i64, fq: &Fq) -> Result<SplitFlags> {
    let mut flags = SplitFlags::default();
    for qvec in shell_enumerate(fq, h.n, t) {
        if !membership_l(x, &qvec, h, psi, kappa_exp, fq)? {
            continue;
        }
        if is_small_gradient(&qvec, h, fq)? {
            if !flags.small {
                flags.small_witness = Some(qvec.iter().map(|p| p.to_string_with(fq)).collect());
            }
            flags.small = true;
        } else {
            flags.large = true;
        }
        if flags.small && flags.large {
            break;
        }
    }
    Ok(flags)
}

/// Fractional-affine forms of the shell, split by gradient size.
pub fn shell_forms(t: i64, h: &HyperplaneData, psi: &ApproxFunction, kappa_exp: i64, fq: &Fq) -> Result<(Vec<FracAffine>, Vec<FracAffine>)> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    for qvec in shell_enumerate(fq, h.n, t) {
        let f = form_for(&qvec, h, psi, kappa_exp, fq)?;
        if is_small_gradient(&qvec, h, fq)? {
            small.push(f);
        } else {
            large.push(f);
        }
    }
    Ok((small, large))
}

/// Exact (λ(𝓛ₜ^<(κ)), λ(𝓛ₜ^≥(κ))) inside U.
pub fn measure_lt(t: i64, h: &HyperplaneData, psi: &ApproxFunction, kappa_exp: i64, u: &UltraBall, fq: &Fq) -> Result<(ExactMeasure, ExactMeasure)> {
    let (small, large) = shell_forms(t, h, psi, kappa_exp, fq)?;
    Ok((union_measure(&small, u, fq)?, union_measure(&large, u, fq)?))
}

/// Exact λ(∪_{0 < ‖q‖ ≤ q^T} 𝓛(q, κ)) inside U.
pub fn measure_union(t_max: i64, h: &HyperplaneData, psi: &ApproxFunction, kappa_exp: i64, u: &UltraBall, fq: &Fq) -> Result<ExactMeasure> {
    let forms = ball_enumerate(fq, h.n, t_max)
        .map(|qvec| form_for(&qvec, h, psi, kappa_exp, fq))
        .collect::<Result<Vec<_>>>()?;
    union_measure(&forms, u, fq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_point_zero_plane() {
        let fq = Fq::prime(2).unwrap();
        let h = HyperplaneData::zero(2);
        let psi = ApproxFunction::linear(3, 0);
        let x = [Laurent::zero()];
        let qvec = [Poly::one(), Poly::zero()];
        assert!(membership_l(&x, &qvec, &h, &psi, 0, &fq).unwrap());
        // a = 0: q = (1, 0) has gradient 1, so it is a large-gradient witness
        let flags = split_lt(&x, 0, &h, &psi, 0, &fq).unwrap();
        assert!(flags.large);
    }

    #[test]
    fn kappa_monotonicity() {
        let fq = Fq::prime(2).unwrap();
        let h = crate::dioph::lacunary_hyperplane(2, -40);
        let psi = ApproxFunction::linear(3, 0);
        let u = UltraBall::unit(1);
        let mut prev = None;
        for k in [-3, -2, -1, 0] {
            let m = measure_union(2, &h, &psi, k, &u, &fq).unwrap();
            if let Some(p) = prev {
                assert!(p <= m);
            }
            prev = Some(m);
        }
    }
}
