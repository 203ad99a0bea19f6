//! Large-gradient sets measured strip by strip.

use serde::Serialize;

use super::hyperplane::HyperplaneData;
use crate::error::{domain, Result};
use crate::field::{Fq, Laurent, Poly};
use crate::haar::{affine_eval, strip_measure, union_measure, ExactMeasure, FracAffine, UltraBall};

#[derive(Debug, Clone, Serialize)]
pub struct StripBoundReport {
    pub m: i64,
    /// Number of p ∈ Λ whose strip can meet U.
    pub candidate_strips: u64,
    pub nonempty_strips: u64,
    pub measured: ExactMeasure,
    pub bound: ExactMeasure,
    pub pass: bool,
}

/// λ({x ∈ U : |β·x + α₀q_n + p| < q^{−m} for some p ∈ Λ}) as a sum over the
/// disjoint strips S_p, compared with q·λ(U)·q^{−m}.
pub fn verify_strip_bound(qvec: &[Poly], h: &HyperplaneData, m: i64, u: &UltraBall, fq: &Fq) -> Result<StripBoundReport> {
    if m < 0 {
        return domain("m must be nonnegative");
    }
    let beta = h.gradient(qvec, fq);
    let mut large = false;
    for b in &beta {
        large |= !b.abs_lt_pow(0)?;
    }
    if !large {
        return domain("q does not have a large gradient");
    }
    let y0 = h.offset(qvec, fq);
    let e = crate::haar::affine::gradient_exp(&beta)?.expect("large gradient is nonzero");
    let reach = e + u.radius_exp();
    // strips are indexed by p = p0 + δ, deg δ ≤ reach, around the nearest p0
    let v = affine_eval(&beta, u.center(), &y0, fq);
    let p0 = v.poly_part()?.neg(fq);
    let mut measured = ExactMeasure::zero(fq.q());
    let mut candidates = 0u64;
    let mut nonempty = 0u64;
    let deltas: Vec<Poly> = if reach >= 0 { Poly::all_up_to(fq, reach as usize).collect() } else { vec![Poly::zero()] };
    for delta in deltas {
        candidates += 1;
        let y = y0.add(&Laurent::from_poly(&p0.add(&delta, fq)), fq);
        let s = strip_measure(&beta, &y, m, u, fq)?;
        if !s.is_zero() {
            nonempty += 1;
        }
        measured = measured.add(&s);
    }
    let bound = u.measure(fq.q()).shift(1 - m);
    let pass = measured <= bound;
    Ok(StripBoundReport { m, candidate_strips: candidates, nonempty_strips: nonempty, measured, bound, pass })
}

/// The same set measured without the strip decomposition.
pub fn strip_union_direct(qvec: &[Poly], h: &HyperplaneData, m: i64, u: &UltraBall, fq: &Fq) -> Result<ExactMeasure> {
    let form = FracAffine { beta: h.gradient(qvec, fq), y: h.offset(qvec, fq), j: m, free_p: true };
    union_measure(std::slice::from_ref(&form), u, fq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_vector_example() {
        let fq = Fq::prime(2).unwrap();
        let h = HyperplaneData::zero(2);
        let qvec = [Poly::one(), Poly::zero()];
        let u = UltraBall::unit(1);
        let rep = verify_strip_bound(&qvec, &h, 1, &u, &fq).unwrap();
        assert_eq!(rep.measured, ExactMeasure::q_pow(2, -1));
        assert!(rep.bound.is_one());
        assert!(rep.pass);
        assert_eq!(strip_union_direct(&qvec, &h, 1, &u, &fq).unwrap(), rep.measured);
    }

    #[test]
    fn small_gradient_rejected() {
        let fq = Fq::prime(2).unwrap();
        let h = HyperplaneData::zero(2);
        assert!(verify_strip_bound(&[Poly::zero(), Poly::one()], &h, 1, &UltraBall::unit(1), &fq).is_err());
    }
}
