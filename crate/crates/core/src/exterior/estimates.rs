//! Lower bounds for sup_{x∈U} ‖g_t u_x w‖ by grade, the constants C′, C″, ρ,
//! and the choice of β.

use rayon::prelude::*;
use serde::Serialize;

use super::basis::{BasisIndex, Label};
use super::flow::{flow_at, index_exponent, sup_flow_norm_over_u, FlowStep};
use super::enough::{decode_wedge, max_pc_norm, wedge_count};
use super::multivector::MultiVector;
use crate::dioph::{check_dioph_condition, condition_lhs, satisfies_condition, shell_enumerate, ApproxFunction, HyperplaneData};
use crate::error::{domain, LabError, Result};
use crate::field::exponent::{fmt_q, q_frac, q_int, Q};
use crate::field::{sup_norm, AbsExponent, Fq, Laurent, Poly};
use crate::haar::{affine_eval, UltraBall};
use crate::real::Real;

/// log_q C′ for U = B(c, q^s): C′ = min(1, q^s)/max(1, ‖c‖), so that
/// sup_{x∈U} |x̃·v| ≥ C′‖v‖ for every v ∈ Fⁿ.
pub fn c_prime_exp(u: &UltraBall) -> Result<Q> {
    let c = match sup_norm(u.center())? {
        AbsExponent::Zero => 0,
        AbsExponent::Pow(e) => (*e.numer()).max(0),
    };
    Ok(q_int(u.radius_exp().min(0) - c))
}

#[derive(Debug, Clone, Serialize)]
pub struct CdpChoice {
    pub c_prime_exp: String,
    pub c_dprime_exp: String,
    /// Monic q′ of degree ≤ D violating the condition.
    pub violators: usize,
    pub binding: Option<String>,
    #[serde(skip)]
    pub c1: Q,
    #[serde(skip)]
    pub c2: Q,
}

/// log_q C″ = log_q C′ + min(0, min over violators q′ of a(q′) + (n−δ)deg q′),
/// where q^{a(q′)} = max_i |frac(α_i q′)|.
pub fn c_dprime(h: &HyperplaneData, delta: Q, d: usize, u: &UltraBall, fq: &Fq) -> Result<CdpChoice> {
    let rep = check_dioph_condition(h, delta, d, fq)?;
    if !rep.holds() {
        return Err(LabError::ConditionUnverified(format!("{:?}", rep.verdict)));
    }
    let c1 = c_prime_exp(u)?;
    let nd = q_int(h.n as i64) - delta;
    let mut worst = Q::from_integer(0);
    let mut binding = None;
    let mut violators = 0;
    for deg in 0..=d {
        for qp in Poly::monic_of_degree(fq, deg) {
            if satisfies_condition(h, delta, &qp, fq)? {
                continue;
            }
            violators += 1;
            let a = match condition_lhs(h, &qp, fq)? {
                AbsExponent::Zero => {
                    return Err(LabError::ConditionUnverified(format!("α·{} is integral", qp.to_string_with(fq))))
                }
                AbsExponent::Pow(a) => a,
            };
            let v = a + nd * q_int(deg as i64);
            if v < worst {
                worst = v;
                binding = Some(qp.to_string_with(fq));
            }
        }
    }
    let c2 = c1 + worst;
    Ok(CdpChoice { c_prime_exp: fmt_q(&c1), c_dprime_exp: fmt_q(&c2), violators, binding, c1, c2 })
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoChoice {
    /// log_q of C′ q^{2(n−1)/(n+1)}/q^{n−1}.
    pub middle_exp: String,
    /// log_q of C″^{1/(n−δ+1)} q^{1/(n−δ+1) − 1}.
    pub one_exp: String,
    pub rho: String,
    pub rho_approx: f64,
    /// 0: the top-grade 1/2, 1: middle grades, 2: grade one.
    pub binding: usize,
    #[serde(skip)]
    pub value: Real,
    #[serde(skip)]
    pub mid: Q,
    #[serde(skip)]
    pub one: Q,
}

pub fn middle_bound_exp(n: usize, c1: Q) -> Q {
    let n = n as i64;
    c1 + q_frac(2 * (n - 1), n + 1) - q_int(n - 1)
}

pub fn one_bound_exp(n: usize, delta: Q, c2: Q) -> Q {
    let k = q_int(n as i64 + 1) - delta;
    (c2 + q_int(1)) / k - q_int(1)
}

/// ρ = min{1/2, C′q^{2(n−1)/(n+1)}/q^{n−1}, C″^{1/(n−δ+1)}q^{1/(n−δ+1)−1}}.
pub fn rho_constant(n: usize, q: u32, delta: Q, c1: Q, c2: Q) -> Result<RhoChoice> {
    let mid = middle_bound_exp(n, c1);
    let one = one_bound_exp(n, delta, c2);
    let terms = [Real::rat(1, 2), Real::qpow(q, mid), Real::qpow(q, one)];
    let mut binding = 0;
    for i in 1..3 {
        if terms[i].lt(&terms[binding])? {
            binding = i;
        }
    }
    let value = terms[binding].clone();
    Ok(RhoChoice {
        middle_exp: fmt_q(&mid),
        one_exp: fmt_q(&one),
        rho: value.to_string(),
        rho_approx: value.to_f64(),
        binding,
        value,
        mid,
        one,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaChoice {
    pub beta: String,
    pub ram: i64,
    pub lower: String,
    pub upper: String,
    pub increased: bool,
    #[serde(skip)]
    pub value: Q,
}

/// β ∈ (1/N)ℤ ∩ (0, 1/(n+1)) with β ≥ 1/(n+1) − δ/(n+1−δ), the midpoint of
/// the admissible interval rounded to the grid; N is doubled until a grid
/// point fits.
pub fn choose_beta(n: usize, delta: Q, ram: i64) -> Result<BetaChoice> {
    if n < 2 || delta <= q_int(0) || delta >= q_int(n as i64) || ram < 1 {
        return domain("choose_beta needs n ≥ 2, δ ∈ (0, n), N ≥ 1");
    }
    let upper = q_frac(1, n as i64 + 1);
    let bound = upper - delta / (q_int(n as i64 + 1) - delta);
    let lower = bound.max(q_int(0));
    let mid = (lower + upper) / q_int(2);
    let mut nn = ram;
    for _ in 0..32 {
        let scaled = mid * q_int(nn);
        for k in [scaled.round(), scaled.floor(), scaled.ceil()] {
            let b = k / q_int(nn);
            if b > q_int(0) && b >= lower && b < upper {
                return Ok(BetaChoice {
                    beta: fmt_q(&b),
                    ram: nn,
                    lower: fmt_q(&lower),
                    upper: fmt_q(&upper),
                    increased: nn != ram,
                    value: b,
                });
            }
        }
        nn *= 2;
    }
    domain("no admissible β found")
}

/// The top-grade identity: the e₀∧e_{*1}∧e₂∧…∧e_n entry of g_t has exponent β(n+1)t.
pub fn top_coefficient_exponent(fs: &FlowStep) -> Result<Q> {
    let n = fs.n;
    let mut labels = vec![Label::Zero, Label::Star(1)];
    labels.extend((2..=n).map(Label::Plain));
    let (idx, _) = BasisIndex::from_labels(n, &labels)?.expect("distinct labels");
    Ok(index_exponent(fs, &idx))
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub grade: usize,
    pub degree_bound: usize,
    pub checked: u64,
    pub bound: String,
    pub failures: u64,
    /// Failures of the intermediate inequality before the final bound.
    pub intermediate_failures: u64,
    /// Grade-one elements with q_n = 0, handled without the condition.
    pub direct_route: u64,
    pub worst_sup: String,
    pub worst_margin: Option<String>,
    pub first_failure: Option<String>,
}

impl EstimateReport {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.intermediate_failures == 0
    }
}

struct Outcome {
    code: u64,
    sup: AbsExponent,
    ok: bool,
    inter_ok: bool,
    direct: bool,
}

/// Checks the grade-ℓ lower bound for every nonzero w ∈ ⋀^ℓ(Θ) with
/// coefficient degree ≤ D. `c1`, `c2` are log_q C′ and log_q C″.
#[allow(clippy::too_many_arguments)]
pub fn verify_estimates(
    grade: usize,
    d: usize,
    fs: &FlowStep,
    h: &HyperplaneData,
    u: &UltraBall,
    delta: Q,
    c1: Q,
    c2: Q,
    fq: &Fq,
) -> Result<EstimateReport> {
    let n = h.n;
    if fs.n != n || !(1..=n + 1).contains(&grade) {
        return domain(format!("grade {grade} outside 1..{}", n + 1));
    }
    if grade == 1 {
        let rep = check_dioph_condition(h, delta, d, fq)?;
        if !rep.holds() {
            return Err(LabError::ConditionUnverified(format!("{:?}", rep.verdict)));
        }
    }
    let q = fq.q();
    let ee = fs.exp_eps();
    let dp = fs.exp_delta_p();
    let t1 = q_int(fs.t + 1);
    let final_exp = match grade {
        1 => Some(one_bound_exp(n, delta, c2)),
        g if g <= n => Some(middle_bound_exp(n, c1)),
        _ => None,
    };
    let half = Real::rat(1, 2);
    let total = wedge_count(q, n, grade, d)?;
    let polys: Vec<Poly> = Poly::all_up_to(fq, d).collect();
    let en = BasisIndex { n, mask: 1 << (2 * n - 1) };
    let outcomes: Vec<Outcome> = (1..total)
        .into_par_iter()
        .map(|code| {
            let w = decode_wedge(code, n, grade, &polys);
            let sup = sup_flow_norm_over_u(&w, fs, h, u, fq)?;
            let ok = match &final_exp {
                Some(b) => sup >= AbsExponent::Pow(*b),
                None => match &sup {
                    AbsExponent::Zero => false,
                    AbsExponent::Pow(e) => !Real::qpow(q, *e).lt(&half)?,
                },
            };
            let mut inter_ok = true;
            let mut direct = false;
            if grade == 1 {
                match w.coeff(&en).map(|c| c.degree()).transpose()?.flatten() {
                    None => direct = true,
                    Some(dq) => {
                        let nd = q_int(n as i64) - delta;
                        let a = c2 + ee - dp - nd * q_int(dq);
                        let b = ee - t1 + q_int(dq);
                        let est3 = AbsExponent::Pow(a.max(b));
                        inter_ok = sup >= est3 && est3 >= AbsExponent::Pow(final_exp.unwrap());
                    }
                }
            } else if grade <= n {
                let l = q_int(grade as i64);
                let pc = max_pc_norm(&w, h, grade, fq)?;
                let est1 = pc.shift(c1 + l * ee - dp - t1 * (l - q_int(1)));
                inter_ok = sup >= est1 && est1 >= AbsExponent::Pow(final_exp.unwrap());
            }
            Ok(Outcome { code, sup, ok, inter_ok, direct })
        })
        .collect::<Result<_>>()?;
    let failures = outcomes.iter().filter(|o| !o.ok).count() as u64;
    let inter = outcomes.iter().filter(|o| !o.inter_ok).count() as u64;
    let worst = outcomes.iter().map(|o| o.sup).min().unwrap_or(AbsExponent::Zero);
    let first = outcomes.iter().find(|o| !o.ok || !o.inter_ok).map(|o| decode_wedge(o.code, n, grade, &polys).display(fq));
    Ok(EstimateReport {
        grade,
        degree_bound: d,
        checked: outcomes.len() as u64,
        bound: final_exp.map_or("1/2".into(), |b| format!("q^{}", fmt_q(&b))),
        failures,
        intermediate_failures: inter,
        direct_route: outcomes.iter().filter(|o| o.direct).count() as u64,
        worst_sup: worst.to_string(),
        worst_margin: match (&worst, final_exp) {
            (AbsExponent::Pow(e), Some(b)) => Some(fmt_q(&(*e - b))),
            _ => None,
        },
        first_failure: first,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub t: i64,
    /// ψ(q^t) ≤ q^{−nt}; outside this regime the check is skipped.
    pub in_regime: bool,
    pub witnesses: usize,
    pub holds: bool,
    pub failure: Option<String>,
}

/// x ∈ 𝓛ₜ^<(q^{−r}) ⟹ ‖g_t u_x θ‖ < |ε| for θ = p e₀ + Σ q_i e_i built from
/// each small-gradient witness.
pub fn check_inclusion_lt(
    x: &[Laurent],
    t: i64,
    fs: &FlowStep,
    h: &HyperplaneData,
    psi: &ApproxFunction,
    fq: &Fq,
) -> Result<InclusionReport> {
    let n = h.n as i64;
    let mut rep = InclusionReport { t, in_regime: psi.s(t) <= -n * t, witnesses: 0, holds: true, failure: None };
    if !rep.in_regime || fs.t != t {
        rep.in_regime = false;
        return Ok(rep);
    }
    let kappa_exp = -fs.r;
    let eps = AbsExponent::Pow(fs.exp_eps());
    for qvec in shell_enumerate(fq, h.n, t) {
        if !crate::dioph::is_small_gradient(&qvec, h, fq)? || !crate::dioph::membership_l(x, &qvec, h, psi, kappa_exp, fq)? {
            continue;
        }
        rep.witnesses += 1;
        let v = affine_eval(&h.gradient(&qvec, fq), x, &h.offset(&qvec, fq), fq);
        let p = v.poly_part()?.neg(fq);
        let theta = MultiVector::theta(&p, &qvec);
        let norm = flow_at(x, fs, h, &theta, fq)?.pi_norm()?;
        if norm >= eps {
            rep.holds = false;
            rep.failure = Some(format!("θ = {} has norm {norm}", theta.display(fq)));
            break;
        }
    }
    Ok(rep)
}
