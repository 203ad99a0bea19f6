//! μ(B ∖ Φ(ε, ρ)) against kC(N_X D_μ²)^k (ε/ρ)^α μ(B) on a grid.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::poset::PosetSlice;
use super::protect::{protected_implies_no_small_vector, witness_from, CoreFailure, PhiTable};
use super::wedge_rows;
use crate::dioph::HyperplaneData;
use crate::error::{domain, LabError, Result};
use crate::exterior::{sup_flow_norm_over_u, FlowStep, RhoChoice};
use crate::field::exponent::{fmt_q, q_int, Q};
use crate::field::{AbsExponent, Fq};
use crate::good::{flow_coefficients_good, GoodParams};
use crate::haar::{ceil_log, CellGrid, ExactMeasure, UltraBall};
use crate::real::RatQPow;

#[derive(Debug, Clone)]
pub struct NondivParams {
    pub eps_exp: Q,
    pub rho_exp: Q,
    pub good_c: BigRational,
    pub alpha: Q,
    /// Grid resolution on B.
    pub m: i64,
    /// Sub-ball resolution and ε-depth of the goodness certificates.
    pub good_m: i64,
    pub good_j: i64,
    /// Degree cap of the θ sweep behind each witness.
    pub theta_degree: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Hypotheses {
    pub chain_length: usize,
    pub chain_ok: bool,
    pub good_ok: bool,
    pub good_worst_ratio: String,
    pub good_failures: Vec<String>,
    /// min over the slice of sup_B φ_Δ, as an exponent.
    pub min_sup_norm: String,
    pub norm_ok: bool,
    pub norm_failures: Vec<String>,
}

impl Hypotheses {
    pub fn hold(&self) -> bool {
        self.chain_ok && self.good_ok && self.norm_ok
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NondivReport {
    pub k: usize,
    #[serde(rename = "C")]
    pub c: String,
    pub alpha: String,
    #[serde(rename = "N_X")]
    pub n_x: u32,
    /// D_μ = q^{d_mu_exp}.
    pub d_mu_exp: i64,
    pub eps_exp: String,
    pub rho_exp: String,
    pub slice_size: usize,
    pub hypotheses: Hypotheses,
    pub skipped: bool,
    pub cells: u64,
    pub protected_cells: u64,
    /// Cells on which some φ_Δ is not certified constant.
    pub uncertified_cells: u64,
    /// μ of the cells whose representative is unprotected.
    pub lhs: String,
    /// lhs plus every uncertified protected cell.
    pub lhs_upper: String,
    pub bound: String,
    pub lhs_upper_approx: f64,
    pub bound_approx: f64,
    pub core_witnesses: u64,
    pub core_thetas: u64,
    pub core_failures: u64,
    pub first_core_failure: Option<CoreFailure>,
    pub pass: bool,
}

/// Exponent of D_μ: the minimal ball containing 3B has radius q^{⌈log_q 3⌉}
/// times that of B.
pub fn d_mu_exp(n: usize, q: u32) -> i64 {
    (n as i64 - 1) * ceil_log(3, q)
}

fn to_qpow(m: &ExactMeasure) -> RatQPow {
    RatQPow::new(BigRational::from_integer(BigInt::from(m.count().clone())), m.q(), q_int(m.scale()))
}

/// An exponent e with q^e ≤ ρ = min{1/2, q^mid, q^one}; exact for q = 2.
pub fn rho_exp_below(rho: &RhoChoice) -> Q {
    q_int(-1).min(rho.mid).min(rho.one)
}

/// kC(N_X D_μ²)^k (ε/ρ)^α μ(B) with N_X = 1 and k = n + 1.
pub fn nondiv_bound(n: usize, q: u32, c: &BigRational, alpha: Q, eps: Q, rho: Q, b: &UltraBall) -> RatQPow {
    let k = n as i64 + 1;
    let r = c * BigRational::from_integer(BigInt::from(k));
    let e = q_int(2 * k * d_mu_exp(n, q)) + alpha * (eps - rho) + q_int(b.radius_exp() * b.dim() as i64);
    RatQPow::new(r, q, e)
}

pub fn check_hypotheses(
    b: &UltraBall,
    p: &NondivParams,
    slice: &PosetSlice,
    fs: &FlowStep,
    h: &HyperplaneData,
    fq: &Fq,
) -> Result<Hypotheses> {
    let k = h.n + 1;
    let chain_length = slice.longest_chain();
    let big = b.dilate(k as u32, fq.q());
    let gp = GoodParams { c: p.good_c.clone(), alpha: p.alpha, m: p.good_m, j_max: p.good_j };
    let rows: Vec<(bool, RatQPow, AbsExponent)> = slice
        .members()
        .par_iter()
        .map(|m| {
            let w = wedge_rows(h.n, m.basis(), fq)?;
            let g = flow_coefficients_good(&w, fs, h, &big, &gp, fq)?;
            let s = sup_flow_norm_over_u(&w, fs, h, b, fq)?;
            Ok((g.pass, g.worst, s))
        })
        .collect::<Result<_>>()?;
    let rho = AbsExponent::Pow(p.rho_exp);
    let mut worst = RatQPow::new(BigRational::from_integer(0.into()), fq.q(), q_int(0));
    let mut min_sup: Option<AbsExponent> = None;
    let mut good_failures = Vec::new();
    let mut norm_failures = Vec::new();
    for (i, (g, w, s)) in rows.iter().enumerate() {
        if *w > worst {
            worst = w.clone();
        }
        min_sup = Some(min_sup.map_or(*s, |m| m.min(*s)));
        if !g && good_failures.len() < 10 {
            good_failures.push(slice.members()[i].dump(fq));
        }
        if *s < rho && norm_failures.len() < 10 {
            norm_failures.push(format!("{} sup q^{s}", slice.members()[i].dump(fq)));
        }
    }
    Ok(Hypotheses {
        chain_length,
        chain_ok: chain_length <= k,
        good_ok: rows.iter().all(|r| r.0),
        good_worst_ratio: worst.to_string(),
        good_failures,
        min_sup_norm: min_sup.map_or("none".into(), |m| m.to_string()),
        norm_ok: rows.iter().all(|r| r.2 >= rho),
        norm_failures,
    })
}

struct CellResult {
    protected: bool,
    certified: bool,
    core_checked: u64,
    core_failures: u64,
    first: Option<CoreFailure>,
}

pub fn nondiv_measure_check(
    b: &UltraBall,
    p: &NondivParams,
    slice: &PosetSlice,
    fs: &FlowStep,
    h: &HyperplaneData,
    fq: &Fq,
) -> Result<NondivReport> {
    if p.eps_exp > p.rho_exp {
        return domain("ε must not exceed ρ");
    }
    if b.dim() + 1 != h.n {
        return domain("B must live in F^{n-1}");
    }
    let q = fq.q();
    let k = h.n + 1;
    let hyp = check_hypotheses(b, p, slice, fs, h, fq)?;
    let bound = nondiv_bound(h.n, q, &p.good_c, p.alpha, p.eps_exp, p.rho_exp, b);
    let mut report = NondivReport {
        k,
        c: p.good_c.to_string(),
        alpha: fmt_q(&p.alpha),
        n_x: 1,
        d_mu_exp: d_mu_exp(h.n, q),
        eps_exp: fmt_q(&p.eps_exp),
        rho_exp: fmt_q(&p.rho_exp),
        slice_size: slice.len(),
        skipped: !hyp.hold(),
        hypotheses: hyp,
        cells: 0,
        protected_cells: 0,
        uncertified_cells: 0,
        lhs: String::new(),
        lhs_upper: String::new(),
        bound: bound.to_string(),
        lhs_upper_approx: 0.0,
        bound_approx: bound.to_f64(),
        core_witnesses: 0,
        core_thetas: 0,
        core_failures: 0,
        first_core_failure: None,
        pass: false,
    };
    if report.skipped {
        return Ok(report);
    }
    let table = PhiTable::new(slice, fs, h, fq)?;
    let grid = CellGrid::new(b.clone(), p.m)?;
    let cells = grid.cell_count(q);
    if cells > 1 << 16 {
        return Err(LabError::Config(format!("{cells} cells exceed the grid cap")));
    }
    let results: Vec<CellResult> = (0..cells)
        .into_par_iter()
        .map(|idx| {
            let x = grid.representative(idx, fq);
            let mut norms = Vec::with_capacity(table.len());
            let mut certified = true;
            for i in 0..table.len() {
                let (v, c) = table.on_cell(i, &x, p.m, fq)?;
                norms.push(v);
                certified &= c;
            }
            let mut res = CellResult { protected: false, certified, core_checked: 0, core_failures: 0, first: None };
            if let Some(w) = witness_from(&x, &norms, p.eps_exp, p.rho_exp, slice, fq) {
                res.protected = true;
                let core = protected_implies_no_small_vector(&w, p.theta_degree, slice, fs, h, fq)?;
                res.core_checked = core.checked as u64;
                res.core_failures = core.failures as u64;
                res.first = core.first_failure;
            }
            Ok(res)
        })
        .collect::<Result<_>>()?;
    let cell = grid.cell_measure(q);
    let unprot = results.iter().filter(|r| !r.protected).count() as u64;
    let loose = results.iter().filter(|r| r.protected && !r.certified).count() as u64;
    let lhs = cell.mul_int(unprot);
    let lhs_upper = cell.mul_int(unprot + loose);
    let upper = to_qpow(&lhs_upper);
    report.cells = cells;
    report.protected_cells = cells - unprot;
    report.uncertified_cells = results.iter().filter(|r| !r.certified).count() as u64;
    report.lhs = lhs.to_string();
    report.lhs_upper = lhs_upper.to_string();
    report.lhs_upper_approx = lhs_upper.to_f64();
    report.core_witnesses = cells - unprot;
    report.core_thetas = results.iter().map(|r| r.core_checked).sum();
    report.core_failures = results.iter().map(|r| r.core_failures).sum();
    report.first_core_failure = results.into_iter().find_map(|r| r.first);
    report.pass = upper <= bound && report.core_failures == 0;
    Ok(report)
}
