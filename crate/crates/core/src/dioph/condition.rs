use serde::Serialize;

use super::hyperplane::HyperplaneData;
use crate::error::{domain, Result};
use crate::field::exponent::{fmt_q, q_int, Q};
use crate::field::{AbsExponent, Fq, Laurent, Poly};

/// min_{p∈Λ} |p + α q′| = |frac(α q′)|.
pub fn fractional_part_reduction(alpha: &Laurent, qprime: &Poly, fq: &Fq) -> Result<AbsExponent> {
    alpha.mul(&Laurent::from_poly(qprime), fq).frac_part().abs()
}

/// |frac(P q′/Q)| computed exactly from the remainder of P q′ modulo Q.
pub fn fractional_part_reduction_exact(p: &Poly, q: &Poly, qprime: &Poly, fq: &Fq) -> Result<AbsExponent> {
    let rem = p.mul(qprime, fq).rem(q, fq)?;
    Ok(match rem.degree() {
        None => AbsExponent::Zero,
        Some(d) => AbsExponent::from_int(d as i64 - q.degree().unwrap_or(0) as i64),
    })
}

/// max_i |frac(α_i q′)|, exact for rational coefficients.
pub fn condition_lhs(h: &HyperplaneData, qprime: &Poly, fq: &Fq) -> Result<AbsExponent> {
    (0..h.n).try_fold(AbsExponent::Zero, |acc, i| {
        let v = match &h.rational[i] {
            Some((p, q)) => fractional_part_reduction_exact(p, q, qprime, fq)?,
            None => fractional_part_reduction(&h.alpha[i], qprime, fq)?,
        };
        Ok(acc.max(v))
    })
}

/// Whether q′ satisfies max_i |p_i + α_i q′| > |q′|^{−(n−δ)} for every p.
/// An uncertified fractional part still decides a violation when its
/// precision bound already lies below the threshold.
pub fn satisfies_condition(h: &HyperplaneData, delta: Q, qprime: &Poly, fq: &Fq) -> Result<bool> {
    let deg = qprime.degree().expect("nonzero q′") as i64;
    let bound = -(q_int(h.n as i64) - delta) * q_int(deg);
    let mut any_unknown = None;
    for i in 0..h.n {
        let v = match &h.rational[i] {
            Some((p, q)) => fractional_part_reduction_exact(p, q, qprime, fq)?,
            None => {
                let f = h.alpha[i].mul(&Laurent::from_poly(qprime), fq).frac_part();
                if !f.is_certified() {
                    let p = f.precision().expect("uncertified values carry a precision");
                    if q_int(p) > bound {
                        any_unknown = Some(p);
                    }
                    continue;
                }
                f.abs()?
            }
        };
        if v > AbsExponent::Pow(bound) {
            return Ok(true);
        }
    }
    match any_unknown {
        None => Ok(false),
        Some(p) => Err(crate::error::LabError::PrecisionInsufficient(format!(
            "|frac(α q′)| < q^{p} does not decide against q^{} for q′ = {}",
            fmt_q(&bound),
            qprime.to_string_with(fq)
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CondVerdict {
    /// Only sporadic exceptions up to the degree bound.
    HoldsUpToD { exceptions: usize },
    /// Every multiple of `modulus` up to the bound violates the condition.
    FailsInfinitely { modulus: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct DioCondReport {
    pub delta: String,
    pub degree_bound: usize,
    pub checked: usize,
    pub violations: Vec<String>,
    pub verdict: CondVerdict,
}

impl DioCondReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, CondVerdict::HoldsUpToD { .. })
    }
}

/// Tests the condition for every monic q′ with deg q′ ≤ D. Unit multiples
/// give identical values, so monic q′ cover all nonzero q′. Constants always
/// violate (the bound is 1); those are the finitely many tolerated exceptions.
pub fn check_dioph_condition(h: &HyperplaneData, delta: Q, d_max: usize, fq: &Fq) -> Result<DioCondReport> {
    if delta <= q_int(0) || delta >= q_int(h.n as i64) {
        return domain(format!("δ = {} outside (0, {})", fmt_q(&delta), h.n));
    }
    let mut violators: Vec<Poly> = Vec::new();
    let mut checked = 0;
    for deg in 0..=d_max {
        for qp in Poly::monic_of_degree(fq, deg) {
            checked += 1;
            if !satisfies_condition(h, delta, &qp, fq)? {
                violators.push(qp);
            }
        }
    }
    let verdict = match structural_family(&violators, d_max, fq) {
        Some(m) => CondVerdict::FailsInfinitely { modulus: m.to_string_with(fq) },
        None => CondVerdict::HoldsUpToD { exceptions: violators.len() },
    };
    Ok(DioCondReport {
        delta: fmt_q(&delta),
        degree_bound: d_max,
        checked,
        violations: violators.iter().map(|p| p.to_string_with(fq)).collect(),
        verdict,
    })
}

/// A violator Q of degree < D whose monic multiples up to degree D all
/// violate: the pattern left by rational or polynomial coefficients.
fn structural_family(violators: &[Poly], d_max: usize, fq: &Fq) -> Option<Poly> {
    let set: std::collections::HashSet<&Poly> = violators.iter().collect();
    violators.iter().find(|qq| {
        let dq = qq.degree().unwrap();
        dq < d_max
            && (dq + 1..=d_max).all(|deg| {
                Poly::monic_of_degree(fq, deg - dq).all(|m| set.contains(&m.mul(qq, fq)))
            })
    }).cloned()
}

impl Poly {
    /// Text form over the prime field, e.g. `T^2 + T + 1`.
    pub fn to_string_with(&self, fq: &Fq) -> String {
        Laurent::from_poly(self).display(fq)
    }
}
