//! Closure properties of good functions, checked on exact certificates.

use num_rational::BigRational;
use serde::Serialize;

use super::certificate::{check_good, GoodCertificate, GoodParams};
use super::function::{SupFamily, TestFunction};
use crate::dioph::HyperplaneData;
use crate::error::{domain, Result};
use crate::exterior::{apply_ux_affine, FlowStep, MultiVector};
use crate::field::exponent::{q_frac, q_int};
use crate::field::{sup_norm, AbsExponent, Fq, Laurent};
use crate::haar::UltraBall;
use crate::real::RatQPow;

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    /// cf passes with the same (C, α) and the same worst ratio.
    pub scalar_multiple: bool,
    /// max(|f₁|, |f₂|) passes when both do.
    pub finite_sup: bool,
    /// g = f·u with |u| = 1 on U passes with C(c₂/c₁)^α = C.
    pub comparable: bool,
    /// (C, α) ⟹ (2C, α/2) for C ≥ 1.
    pub weakening: bool,
    pub base: GoodCertificate,
}

impl ClosureReport {
    pub fn pass(&self) -> bool {
        self.scalar_multiple && self.finite_sup && self.comparable && self.weakening
    }
}

/// Runs items (2)–(5) for f and a second function f₂ on U.
pub fn closure_property_suite(f: &TestFunction, f2: &TestFunction, u: &UltraBall, params: &GoodParams, fq: &Fq) -> Result<ClosureReport> {
    if f.d != u.dim() || f2.d != u.dim() {
        return domain("functions and ball must share a dimension");
    }
    let base = check_good(f, u, params, fq)?;
    let scaled = check_good(&f.scale(&Laurent::t_pow(3), fq), u, params, fq)?;
    let scalar_multiple = scaled.pass == base.pass && scaled.worst == base.worst;

    let other = check_good(f2, u, params, fq)?;
    let sup = check_good(&SupFamily(vec![f.clone(), f2.clone()]), u, params, fq)?;
    let finite_sup = !(base.pass && other.pass) || sup.pass;

    // u = 1 + T^{−k}x₁ with T^{−k} small enough that |u| = 1 on U
    let r = match sup_norm(u.center())? {
        AbsExponent::Pow(e) => (*e.numer()).max(u.radius_exp()),
        AbsExponent::Zero => u.radius_exp(),
    };
    let mut slope = vec![Laurent::zero(); f.d];
    slope[0] = Laurent::t_pow(-(r + 1));
    let unit = TestFunction::affine(slope, Laurent::one(), fq);
    let g = f.mul(&unit, fq)?;
    let gc = check_good(&g, u, params, fq)?;
    let comparable = !base.pass || gc.pass;

    let two = BigRational::from_integer(2.into());
    let weak_params = GoodParams { c: &params.c * &two, alpha: params.alpha / q_int(2), ..params.clone() };
    let weak = check_good(f, u, &weak_params, fq)?;
    let weakening = !(base.pass && params.c >= BigRational::from_integer(1.into())) || weak.pass;

    Ok(ClosureReport { scalar_multiple, finite_sup, comparable, weakening, base })
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowGoodReport {
    pub coefficients: usize,
    /// Coefficients that are constant in x, good for every C ≥ 1.
    pub constant: usize,
    pub alpha: String,
    pub worst_ratio: String,
    pub pass: bool,
    #[serde(skip)]
    pub worst: RatQPow,
}

/// Every 𝓢-coefficient of g_t u_x w is affine in x ∈ F^{n−1}; certifies each
/// as (C, 1/(n−1))-good on U. Monomial scalars of g_t change neither ratio.
pub fn flow_coefficients_good(
    w: &MultiVector<Laurent>,
    _fs: &FlowStep,
    h: &HyperplaneData,
    u: &UltraBall,
    params: &GoodParams,
    fq: &Fq,
) -> Result<FlowGoodReport> {
    let alpha = q_frac(1, h.n as i64 - 1);
    let params = GoodParams { alpha, ..params.clone() };
    let img = apply_ux_affine(h, w, fq)?;
    let mut worst = RatQPow::new(BigRational::from_integer(0.into()), fq.q(), q_int(0));
    let mut count = 0;
    let mut constant = 0;
    let mut pass = true;
    for (i, a) in img.terms() {
        if !i.in_s() {
            continue;
        }
        count += 1;
        if a.is_constant() {
            constant += 1;
        }
        let f = TestFunction::affine(a.lin.clone(), a.c0.clone(), fq);
        let cert = check_good(&f, u, &params, fq)?;
        pass &= cert.pass;
        if cert.worst > worst {
            worst = cert.worst.clone();
        }
    }
    Ok(FlowGoodReport { coefficients: count, constant, alpha: crate::field::exponent::fmt_q(&alpha), worst_ratio: worst.to_string(), pass, worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Poly;

    #[test]
    fn suite_on_affine_pair() {
        let fq = Fq::prime(2).unwrap();
        let f1 = TestFunction::affine(vec![Laurent::one()], Laurent::zero(), &fq);
        let f2 = TestFunction::affine(vec![Laurent::one()], Laurent::one(), &fq);
        let params = GoodParams { c: BigRational::from_integer(1.into()), alpha: q_int(1), m: 3, j_max: 4 };
        let rep = closure_property_suite(&f1, &f2, &UltraBall::unit(1), &params, &fq).unwrap();
        assert!(rep.base.pass);
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn flow_coefficients() {
        let fq = Fq::prime(2).unwrap();
        let h = crate::dioph::lacunary_hyperplane(2, -64);
        let fs = crate::field::make_flow_scalars(2, 1, 0, q_frac(1, 6)).unwrap();
        let w = MultiVector::theta(&Poly::one(), &[Poly::t(), Poly::one()]);
        let params = GoodParams { c: BigRational::from_integer(1.into()), alpha: q_int(1), m: 3, j_max: 4 };
        let u = UltraBall::unit(1).dilate(3, 2);
        let rep = flow_coefficients_good(&w, &fs, &h, &u, &params, &fq).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.worst, RatQPow::one(2));
    }
}
