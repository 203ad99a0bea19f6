//! The unipotent u_x, the diagonal g_t, and suprema of ‖g_t u_x w‖ over balls.

use super::basis::BasisIndex;
use super::multivector::{Affine, Coeff, MultiVector};
use crate::dioph::HyperplaneData;
use crate::error::{domain, Result};
use crate::field::exponent::Q;
use crate::field::{AbsExponent, FlowScalars, Fq, Laurent, ScaledSeries};
use crate::haar::UltraBall;

/// g_t as a list of diagonal exponents.
pub type FlowStep = FlowScalars;

/// Images u_x e_p as (position, coefficient) lists, with x symbolic.
fn images(h: &HyperplaneData) -> Vec<Vec<(usize, Affine)>> {
    let n = h.n;
    let dim = n - 1;
    let one = || Affine::constant(Laurent::one(), dim);
    let mut out = Vec::with_capacity(2 * n);
    out.push(vec![(0, one())]);
    for i in 1..n {
        out.push(vec![(i, one())]);
    }
    for i in 1..n {
        let mut xi = Affine::constant(Laurent::zero(), dim);
        xi.lin[i - 1] = Laurent::one();
        out.push(vec![(0, xi), (i, one()), (n - 1 + i, one())]);
    }
    let mut last = vec![(0, Affine { c0: h.alpha[0].clone(), lin: h.alpha[1..].to_vec() })];
    for i in 1..n {
        if !h.alpha[i].is_zero() {
            last.push((i, Affine::constant(h.alpha[i].clone(), dim)));
        }
    }
    last.push((2 * n - 1, one()));
    out.push(last);
    out
}

/// u_x w with x left symbolic: every coefficient is affine in x.
pub fn apply_ux_affine(h: &HyperplaneData, w: &MultiVector<Laurent>, fq: &Fq) -> Result<MultiVector<Affine>> {
    if w.n != h.n {
        return domain("multivector and hyperplane disagree on n");
    }
    let n = h.n;
    let img = images(h);
    let mut out = MultiVector::zero(n);
    for (idx, c) in w.terms() {
        let mut partial: Vec<(BasisIndex, Affine)> = vec![(BasisIndex::empty(n), Affine::constant(c.clone(), n - 1))];
        for p in idx.positions() {
            let mut next = Vec::new();
            for (acc, coeff) in &partial {
                for (target, a) in &img[p] {
                    let e = BasisIndex { n, mask: 1 << target };
                    if let Some((k, neg)) = acc.wedge(&e) {
                        let m = coeff.mul(a, fq)?;
                        next.push((k, if neg { m.neg(fq) } else { m }));
                    }
                }
            }
            partial = next;
        }
        for (k, a) in partial {
            out.add_term(k, a, fq)?;
        }
    }
    Ok(out)
}

/// u_x w at a point x ∈ F^{n−1}.
pub fn apply_ux(x: &[Laurent], h: &HyperplaneData, w: &MultiVector<Laurent>, fq: &Fq) -> Result<MultiVector<Laurent>> {
    if x.len() + 1 != h.n {
        return domain("x must lie in F^{n−1}");
    }
    Ok(apply_ux_affine(h, w, fq)?.map(|_, a| a.eval(x, fq)))
}

/// ũ_x w = π_*(u_x w) for w in ⋀(span{e₀, e₁, …, e_n}).
pub fn apply_utilde(x: &[Laurent], h: &HyperplaneData, w: &MultiVector<Laurent>, fq: &Fq) -> Result<MultiVector<Laurent>> {
    Ok(apply_ux(x, h, w, fq)?.project_plain())
}

/// Σ_{p ∈ I} of the diagonal exponents of g_t.
pub fn index_exponent(fs: &FlowStep, idx: &BasisIndex) -> Q {
    let ex = fs.gt_exponents();
    idx.positions().map(|p| ex[p]).sum()
}

/// g_t v: each e_I coefficient times the product of its diagonal monomials.
pub fn apply_gt(fs: &FlowStep, v: &MultiVector<ScaledSeries>) -> Result<MultiVector<ScaledSeries>> {
    if v.n != fs.n {
        return domain("flow step and multivector disagree on n");
    }
    Ok(v.map(|i, c| c.shift_by(index_exponent(fs, i))))
}

pub fn lift(v: &MultiVector<Laurent>) -> MultiVector<ScaledSeries> {
    v.map(|_, c| ScaledSeries::from_laurent(c.clone()))
}

/// g_t u_x w at a point.
pub fn flow_at(x: &[Laurent], fs: &FlowStep, h: &HyperplaneData, w: &MultiVector<Laurent>, fq: &Fq) -> Result<MultiVector<ScaledSeries>> {
    apply_gt(fs, &lift(&apply_ux(x, h, w, fq)?))
}

/// Per-index suprema over U of |coefficient of g_t u_x w|, restricted to 𝓢.
pub fn sup_flow_terms(
    w: &MultiVector<Laurent>,
    fs: &FlowStep,
    h: &HyperplaneData,
    u: &UltraBall,
    fq: &Fq,
) -> Result<Vec<(BasisIndex, AbsExponent)>> {
    let img = apply_ux_affine(h, w, fq)?;
    img.terms()
        .filter(|(i, _)| i.in_s())
        .map(|(i, a)| Ok((*i, a.sup_on(u, fq)?.shift(index_exponent(fs, i)))))
        .collect()
}

/// sup_{x ∈ U} ‖g_t u_x w‖, exactly: the sup of a max is the max of the
/// coefficient-wise sups, each a closed form for an affine function.
pub fn sup_flow_norm_over_u(w: &MultiVector<Laurent>, fs: &FlowStep, h: &HyperplaneData, u: &UltraBall, fq: &Fq) -> Result<AbsExponent> {
    if w.is_zero() {
        return domain("w must be nonzero");
    }
    Ok(sup_flow_terms(w, fs, h, u, fq)?.into_iter().fold(AbsExponent::Zero, |acc, (_, v)| acc.max(v)))
}
