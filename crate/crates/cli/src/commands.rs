use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::json;

use fflab::constants::{k1, k1_partial_f64, quant_constants, quantitative_pipeline, QuantConstants};
use fflab::dioph::{check_dioph_condition, measure_lt, shell_count, split_lt, sum_psi_closed, sum_psi_partial};
use fflab::exterior::{c_dprime, check_inclusion_lt, choose_beta, rho_constant};
use fflab::field::exponent::{fmt_q, q_frac, Q};
use fflab::field::{make_flow_scalars, FlowScalars, Laurent};
use fflab::good::{check_good, flow_coefficients_good, closure_property_suite, GoodParams, TestFunction};
use fflab::haar::{CellGrid, ExactMeasure};
use fflab::nondiv::{nondiv_measure_check, rho_exp_below, wedge_rows, NondivParams, PosetSlice};
use fflab::real::Real;
use fflab::{LabError, Result};

use crate::config::Lab;
use crate::report::{Exactness, RunReport};

/// Grid cells swept by the inclusion check, at most.
const INCLUSION_CELL_CAP: u64 = 1 << 12;
/// Denominator grid for β.
const BETA_RAM: i64 = 6;

pub const COMMANDS: [&str; 7] = ["field-selftest", "dioph-check", "khintchine", "quantitative", "good-check", "nondiv", "constants"];

pub fn run(command: &str, lab: &Lab, seed: u64) -> Result<RunReport> {
    let mut rep = RunReport::new(command, &lab.config);
    match command {
        "field-selftest" => crate::selftest::run(&lab.fq, seed, &mut rep)?,
        "dioph-check" => dioph_check(lab, &mut rep)?,
        "khintchine" => khintchine(lab, &mut rep)?,
        "quantitative" => quantitative(lab, &mut rep)?,
        "good-check" => good_check(lab, &mut rep)?,
        "nondiv" => nondiv(lab, &mut rep)?,
        "constants" => constants(lab, &mut rep)?,
        other => return Err(LabError::Config(format!("unknown command {other}"))),
    }
    Ok(rep)
}

fn beta(lab: &Lab) -> Result<Q> {
    Ok(choose_beta(lab.h.n, lab.delta, BETA_RAM)?.value)
}

fn flow(lab: &Lab, t: i64) -> Result<FlowScalars> {
    make_flow_scalars(lab.h.n, t, 0, beta(lab)?)
}

fn dioph_check(lab: &Lab, rep: &mut RunReport) -> Result<()> {
    let d = lab.config.caps.dioph;
    let r = check_dioph_condition(&lab.h, lab.delta, d, &lab.fq)?;
    rep.check(format!("Diophantine condition up to degree {d}"), Exactness::SliceBounded, r.holds(), &r);
    Ok(())
}

fn psi_measure(lab: &Lab, t: i64) -> ExactMeasure {
    // q·λ(U)·ψ(q^t)·#{‖q‖ = q^t}
    let q = lab.fq.q();
    let count: BigUint = shell_count(q, lab.h.n, t).to_biguint().expect("positive");
    ExactMeasure::new(q, count, 1 + lab.u.radius_exp() * lab.u.dim() as i64 + lab.psi.s(t))
}

fn khintchine(lab: &Lab, rep: &mut RunReport) -> Result<()> {
    let (q, n) = (lab.fq.q(), lab.h.n);
    if sum_psi_closed(&lab.psi, q, n).is_none() {
        rep.warn("Σψ(q^t)q^{nt}(q^n−1) diverges or has no closed form; the table is still exact");
    }
    let mut table = Vec::new();
    let mut bound_ok = true;
    let mut totals = Vec::new();
    for t in 0..=lab.config.t_max {
        let (small, large) = measure_lt(t, &lab.h, &lab.psi, 0, &lab.u, &lab.fq)?;
        let bound = psi_measure(lab, t);
        bound_ok &= large <= bound;
        totals.push(small.add(&large));
        table.push(json!({
            "t": t,
            "small": small.to_string(),
            "large": large.to_string(),
            "large_bound": bound.to_string(),
            "sum_psi_partial": sum_psi_partial(&lab.psi, q, n, t).to_string(),
        }));
    }
    rep.check("large-gradient measures under q·λ(U)·ψ(q^t)·shell", Exactness::Exact, bound_ok, &table);
    let tail = totals.windows(2).skip_while(|w| w[1] > w[0]).all(|w| w[1] <= w[0]);
    rep.info("tail nonincreasing", Exactness::Exact, tail);

    let grid = CellGrid::new(lab.u.clone(), lab.config.m)?;
    let cells = grid.cell_count(q);
    if cells > INCLUSION_CELL_CAP {
        return Err(LabError::Config(format!("{cells} grid cells exceed {INCLUSION_CELL_CAP}; lower m")));
    }
    let mut incl = Vec::new();
    let mut incl_ok = true;
    for t in 0..=lab.config.t_max {
        let fs = flow(lab, t)?;
        let mut witnesses = 0;
        let mut failure = None;
        let mut in_regime = true;
        for idx in 0..cells {
            let x = grid.representative(idx, &lab.fq);
            if !split_lt(&x, t, &lab.h, &lab.psi, 0, &lab.fq)?.small {
                continue;
            }
            let r = check_inclusion_lt(&x, t, &fs, &lab.h, &lab.psi, &lab.fq)?;
            in_regime = r.in_regime;
            witnesses += r.witnesses;
            if !r.holds && failure.is_none() {
                failure = r.failure.clone();
            }
        }
        incl_ok &= failure.is_none();
        incl.push(json!({"t": t, "in_regime": in_regime, "witnesses": witnesses, "failure": failure}));
    }
    rep.check("small-gradient points land below ε under the flow", Exactness::SliceBounded, incl_ok, &incl);
    Ok(())
}

fn add_constants(rep: &mut RunReport, c: &QuantConstants) {
    rep.constant("beta", c.beta.beta.clone(), "exterior::choose_beta");
    rep.constant("rho", c.rho.rho.clone(), "exterior::rho_constant");
    rep.constant("C", c.good_c.clone(), "good::flow_coefficients_good");
    rep.constant("C'", format!("q^{}", c.c_prime_exp), "exterior::c_prime_exp");
    rep.constant("C''", format!("q^{}", c.c_dprime.c_dprime_exp), "exterior::c_dprime");
    rep.constant("N_X", c.n_x.to_string(), "nondiv (decision)");
    rep.constant("D_lambda", format!("q^{}", c.d_lambda_exp), "nondiv::d_mu_exp (decision)");
    rep.constant("K0", c.k0.clone(), "constants::k0");
    rep.constant("K1", c.k1.clone(), "constants::k1");
    if let Some(k) = &c.kappa {
        rep.constant("kappa", format!("q^-{}", k.r), "dioph::kappa_bound");
    }
}

/// Certifies every 𝓢-coefficient over the submodule slice on the dilated U.
fn good_slice(lab: &Lab, t: i64, rep: &mut RunReport) -> Result<bool> {
    let n = lab.h.n;
    let slice = PosetSlice::enumerate(n, lab.config.caps.submodule, &lab.fq)?;
    let big = lab.u.dilate(n as u32 + 1, lab.fq.q());
    let fs = flow(lab, t)?;
    let params = GoodParams { c: lab.good_c.clone(), alpha: q_frac(1, n as i64 - 1), m: lab.config.good.m, j_max: lab.config.good.j };
    let mut failures = Vec::new();
    let mut coefficients = 0;
    let mut worst = String::from("0");
    let mut worst_v = None;
    for m in slice.members() {
        let w = wedge_rows(n, m.basis(), &lab.fq)?;
        let g = flow_coefficients_good(&w, &fs, &lab.h, &big, &params, &lab.fq)?;
        coefficients += g.coefficients;
        if worst_v.as_ref().is_none_or(|v| g.worst > *v) {
            worst = g.worst_ratio.clone();
            worst_v = Some(g.worst.clone());
        }
        if !g.pass && failures.len() < 10 {
            failures.push(m.dump(&lab.fq));
        }
    }
    let pass = failures.is_empty();
    rep.check(
        format!("flow coefficients (C, 1/(n-1))-good at t={t}"),
        Exactness::SliceBounded,
        pass,
        json!({"members": slice.len(), "coefficients": coefficients, "C": lab.good_c.to_string(), "worstRatio": worst, "failures": failures}),
    );
    Ok(pass)
}

fn real_of(r: &BigRational) -> Real {
    Real::Rat(r.clone())
}

fn quantitative(lab: &Lab, rep: &mut RunReport) -> Result<()> {
    let (q, n) = (lab.fq.q(), lab.h.n);
    good_slice(lab, 0, rep)?;
    let b = beta(lab)?;
    let closed = k1(n, q, b)?.to_f64();
    let partial = k1_partial_f64(n, q, b, 4000)?;
    rep.check("K1 closed form against partial sums", Exactness::Heuristic, (closed - partial).abs() < 1e-9, json!({"closed": closed, "partial": partial}));
    let r = quantitative_pipeline(&lab.h, &lab.psi, &lab.xi, lab.delta, lab.config.caps.dioph, &lab.u, lab.config.t_max, &real_of(&lab.good_c), &lab.fq)?;
    add_constants(rep, &r.constants);
    for d in &r.constants.decisions {
        rep.warn(format!("decision: {d}"));
    }
    rep.info("kappa", Exactness::Exact, &r.constants.kappa);
    rep.info("per-shell measures", Exactness::Exact, &r.rows);
    rep.check("Σ small < (ξ/2)λ(U)", Exactness::Exact, r.small_ok, json!({"sum": r.small_total, "target": r.half_target}));
    rep.check("Σ large < (ξ/2)λ(U)", Exactness::Exact, r.large_ok, json!({"sum": r.large_total, "target": r.half_target}));
    rep.check("union < ξλ(U)", Exactness::Exact, r.union_ok, json!({"union": r.union, "target": r.target}));
    Ok(())
}

fn good_check(lab: &Lab, rep: &mut RunReport) -> Result<()> {
    let n = lab.h.n;
    for t in 0..=lab.config.t_max {
        good_slice(lab, t, rep)?;
    }
    let params = GoodParams { c: lab.good_c.clone(), alpha: q_frac(1, n as i64 - 1), m: lab.config.good.m, j_max: lab.config.good.j };
    let dim = n - 1;
    let unit = |i: usize| (0..dim).map(|k| if k == i { Laurent::one() } else { Laurent::zero() }).collect::<Vec<_>>();
    let f1 = TestFunction::affine(unit(0), Laurent::zero(), &lab.fq);
    let f2 = TestFunction::affine(unit(dim - 1), Laurent::one(), &lab.fq);
    let cert = check_good(&f1, &lab.u, &params, &lab.fq)?;
    rep.check("coordinate function is (C, α)-good on U", Exactness::SliceBounded, cert.pass, &cert);
    let suite = closure_property_suite(&f1, &f2, &lab.u, &params, &lab.fq)?;
    rep.check("goodness closure properties", Exactness::SliceBounded, suite.pass(), &suite);
    Ok(())
}

fn nondiv(lab: &Lab, rep: &mut RunReport) -> Result<()> {
    let n = lab.h.n;
    let q = lab.fq.q();
    let nd = lab.config.nondiv.clone().ok_or_else(|| LabError::Config("nondiv needs a `nondiv` section".into()))?;
    let rho_exp = match &nd.rho {
        Some(r) => r.to_q("nondiv.rho")?,
        None => {
            let cd = c_dprime(&lab.h, lab.delta, lab.config.caps.dioph, &lab.u, &lab.fq)?;
            rho_exp_below(&rho_constant(n, q, lab.delta, cd.c1, cd.c2)?)
        }
    };
    rep.constant("rho", format!("q^{}", fmt_q(&rho_exp)), "nondiv::rho_exp_below");
    rep.constant("C", lab.good_c.to_string(), "good::flow_coefficients_good");
    rep.constant("N_X", "1", "nondiv (decision)");
    let slice = PosetSlice::enumerate(n, lab.config.caps.submodule, &lab.fq)?;
    let fs = flow(lab, nd.t)?;
    for e in &nd.eps {
        let eps_exp = e.to_q("nondiv.eps")?;
        if eps_exp > rho_exp {
            return Err(LabError::Config(format!("ε = q^{} exceeds ρ = q^{}", fmt_q(&eps_exp), fmt_q(&rho_exp))));
        }
        let p = NondivParams {
            eps_exp,
            rho_exp,
            good_c: lab.good_c.clone(),
            alpha: q_frac(1, n as i64 - 1),
            m: lab.config.m,
            good_m: lab.config.good.m,
            good_j: lab.config.good.j,
            theta_degree: lab.config.caps.wedge,
        };
        let r = nondiv_measure_check(&lab.u, &p, &slice, &fs, &lab.h, &lab.fq)?;
        if r.skipped {
            rep.warn(format!("ε = q^{}: hypotheses fail, inequality not tested", fmt_q(&eps_exp)));
        }
        rep.check(format!("nondivergence at ε = q^{}", fmt_q(&eps_exp)), Exactness::SliceBounded, r.pass, &r);
    }
    Ok(())
}

fn constants(lab: &Lab, rep: &mut RunReport) -> Result<()> {
    let (q, n) = (lab.fq.q(), lab.h.n);
    let mut c = quant_constants(&lab.h, lab.delta, lab.config.caps.dioph, &lab.u, BETA_RAM, &real_of(&lab.good_c), &lab.fq)?;
    match sum_psi_closed(&lab.psi, q, n) {
        Some(s) => {
            c = c.with_kappa(&lab.xi, &s)?;
            rep.info("sum_psi", Exactness::Exact, s.to_string());
        }
        None => rep.warn("Σψ has no closed form; κ not computed"),
    }
    add_constants(rep, &c);
    for d in &c.decisions {
        rep.warn(format!("decision: {d}"));
    }
    rep.info("constants", Exactness::Exact, &c);
    rep.info("shell count at t=1", Exactness::Exact, BigInt::to_string(&shell_count(q, n, 1)));
    Ok(())
}
