//! (C, α)-good certificates over every sub-ball of U down to a resolution.
//!
//! |f| only takes values in q^ℤ, so λ({|f| < ε} ∩ B) is constant for
//! ε ∈ (q^{−j−1}, q^{−j}] while the right-hand side C(ε/‖f‖)^α λ(B) decreases
//! towards ε = q^{−j−1}. The supremum of the ratio over that interval is
//! therefore λ({|f| < q^{−j}} ∩ B)/(C(q^{−j−1}/‖f‖)^α λ(B)): approached,
//! never attained.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::function::GoodTarget;
use crate::error::{domain, LabError, Result};
use crate::field::exponent::{fmt_q, q_int, Q};
use crate::field::{AbsExponent, Fq};
use crate::haar::{CellGrid, UltraBall};
use crate::real::RatQPow;

const BALL_CAP: u64 = 1 << 18;

#[derive(Debug, Clone)]
pub struct GoodParams {
    pub c: BigRational,
    pub alpha: Q,
    /// Smallest sub-ball radius q^{−m}.
    pub m: i64,
    /// ε ranges over (q^{−J−1}, 1].
    pub j_max: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoodFailure {
    pub ball: String,
    pub eps: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoodCertificate {
    #[serde(rename = "C")]
    pub c: String,
    pub alpha: String,
    pub m: i64,
    #[serde(rename = "J")]
    pub j_max: i64,
    pub balls: usize,
    /// Balls on which f vanishes identically.
    pub degenerate_balls: usize,
    /// Supremum of the ratio over real ε ∈ (q^{−J−1}, 1].
    #[serde(rename = "worstRatio")]
    pub worst_ratio: String,
    pub worst_ratio_approx: f64,
    /// Maximum of the ratio over ε ∈ {q^{−j} : 0 ≤ j ≤ J}.
    pub worst_ratio_lattice: String,
    pub precision_failures: usize,
    pub failure_count: usize,
    pub failures: Vec<GoodFailure>,
    pub pass: bool,
    #[serde(skip)]
    pub worst: RatQPow,
    #[serde(skip)]
    pub worst_lattice: RatQPow,
}

/// Every ball B ⊆ U of radius q^{−m} or more, coarsest first.
pub fn sub_balls(u: &UltraBall, m: i64, fq: &Fq) -> Result<Vec<UltraBall>> {
    let q = fq.q() as u64;
    let s = u.radius_exp();
    if m < -s {
        return domain(format!("resolution {m} is coarser than U"));
    }
    let total: u64 = (0..=(s + m) as u32)
        .map(|k| q.checked_pow(k * u.dim() as u32).unwrap_or(u64::MAX))
        .fold(0u64, |a, b| a.saturating_add(b));
    if total > BALL_CAP {
        return Err(LabError::Config(format!("{total} sub-balls exceed the enumeration cap")));
    }
    let mut out = Vec::with_capacity(total as usize);
    for level in -s..=m {
        let grid = CellGrid::new(u.clone(), level)?;
        for idx in 0..grid.cell_count(fq.q()) {
            out.push(grid.cell(idx, fq));
        }
    }
    Ok(out)
}

struct BallResult {
    ratios: Vec<(i64, RatQPow)>,
    degenerate: bool,
    precision_failures: usize,
    ball: String,
}

/// Checks λ({x∈B : |f(x)| < ε}) ≤ C(ε/‖f‖_B)^α λ(B) on every sub-ball B and
/// every real ε ∈ (q^{−J−1}, 1].
pub fn check_good(f: &dyn GoodTarget, u: &UltraBall, params: &GoodParams, fq: &Fq) -> Result<GoodCertificate> {
    if params.c <= BigRational::from_integer(0.into()) || params.alpha <= q_int(0) || params.j_max < 0 {
        return domain("C and α must be positive and J nonnegative");
    }
    if f.dim() != u.dim() {
        return domain("function and ball dimensions differ");
    }
    let q = fq.q();
    let d = u.dim() as i64;
    let balls = sub_balls(u, params.m, fq)?;
    let results: Vec<BallResult> = balls
        .par_iter()
        .map(|b| {
            let mut res = BallResult {
                ratios: Vec::new(),
                degenerate: false,
                precision_failures: 0,
                ball: format!("B({}, {}^{})", show_center(b, fq), q, b.radius_exp()),
            };
            let nf = match f.norm_on_ball(b, fq) {
                Ok(AbsExponent::Pow(e)) => e,
                Ok(AbsExponent::Zero) => {
                    res.degenerate = true;
                    return Ok(res);
                }
                Err(LabError::PrecisionInsufficient(_)) => {
                    res.precision_failures += 1;
                    return Ok(res);
                }
                Err(e) => return Err(e),
            };
            for j in 0..=params.j_max {
                let lhs = match f.measure_below(b, j, fq) {
                    Ok(v) => v,
                    Err(LabError::PrecisionInsufficient(_)) => {
                        res.precision_failures += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                // λ(S)/λ(B)·q^{α(j+1)}‖f‖^α / C
                let e = q_int(lhs.scale() - b.radius_exp() * d) + params.alpha * (q_int(j + 1) + nf);
                let r = BigRational::from_integer(BigInt::from(lhs.count().clone())) / &params.c;
                res.ratios.push((j, RatQPow::new(r, q, e)));
            }
            Ok(res)
        })
        .collect::<Result<_>>()?;
    let one = RatQPow::one(q);
    let zero = RatQPow::new(BigRational::from_integer(0.into()), q, Q::from_integer(0));
    let mut worst = zero.clone();
    let mut failures = Vec::new();
    let mut failure_count = 0;
    let mut degenerate = 0;
    let mut prec = 0;
    for r in &results {
        degenerate += r.degenerate as usize;
        prec += r.precision_failures;
        for (j, ratio) in &r.ratios {
            if *ratio > worst {
                worst = ratio.clone();
            }
            if *ratio > one {
                failure_count += 1;
                if failures.len() < 20 {
                    failures.push(GoodFailure {
                        ball: r.ball.clone(),
                        eps: format!("({q}^{}, {q}^{}]", -j - 1, -j),
                        lhs: format!("ratio {ratio}"),
                        rhs: "1".into(),
                    });
                }
            }
        }
    }
    let lattice_shift = RatQPow::new(BigRational::from_integer(1.into()), q, -params.alpha);
    let worst_lattice = if worst.is_zero() { zero } else { worst.mul(&lattice_shift) };
    Ok(GoodCertificate {
        c: params.c.to_string(),
        alpha: fmt_q(&params.alpha),
        m: params.m,
        j_max: params.j_max,
        balls: balls.len(),
        degenerate_balls: degenerate,
        worst_ratio: worst.to_string(),
        worst_ratio_approx: worst.to_f64(),
        worst_ratio_lattice: worst_lattice.to_string(),
        precision_failures: prec,
        failure_count,
        failures,
        pass: failure_count == 0 && prec == 0,
        worst,
        worst_lattice,
    })
}

fn show_center(b: &UltraBall, fq: &Fq) -> String {
    let parts: Vec<String> = b.center().iter().map(|x| x.display(fq)).collect();
    format!("({})", parts.join(", "))
}

/// The least C for which the certificate passes: the worst ratio at C = 1.
pub fn min_c_for_alpha(f: &dyn GoodTarget, u: &UltraBall, alpha: Q, m: i64, j_max: i64, fq: &Fq) -> Result<RatQPow> {
    let params = GoodParams { c: BigRational::from_integer(1.into()), alpha, m, j_max };
    let cert = check_good(f, u, &params, fq)?;
    if cert.precision_failures > 0 {
        return Err(LabError::PrecisionInsufficient(format!("{} (ball, ε) pairs undecided", cert.precision_failures)));
    }
    Ok(cert.worst)
}

#[cfg(test)]
mod tests {
    use super::super::function::TestFunction;
    use super::*;
    use crate::field::exponent::q_frac;
    use crate::field::Laurent;

    fn params(c: i64, alpha: Q, m: i64, j: i64) -> GoodParams {
        GoodParams { c: BigRational::from_integer(c.into()), alpha, m, j_max: j }
    }

    #[test]
    fn identity_is_sharp() {
        for p in [2, 3] {
            let fq = Fq::prime(p).unwrap();
            let f = TestFunction::affine(vec![Laurent::one()], Laurent::zero(), &fq);
            let cert = check_good(&f, &UltraBall::unit(1), &params(1, q_int(1), 3, 4), &fq).unwrap();
            assert!(cert.pass);
            assert_eq!(cert.worst, RatQPow::one(p));
            assert_eq!(cert.worst_lattice, RatQPow::new(BigRational::from_integer(1.into()), p, q_int(-1)));
            assert_eq!(cert.balls as u64, (0..=3).map(|k| (p as u64).pow(k)).sum::<u64>());
        }
    }

    #[test]
    fn constants_and_scaling() {
        let fq = Fq::prime(2).unwrap();
        let u = UltraBall::unit(1);
        let c = TestFunction::affine(vec![Laurent::zero()], Laurent::t_pow(-2), &fq);
        let cert = check_good(&c, &u, &params(1, q_frac(1, 2), 2, 4), &fq).unwrap();
        assert!(cert.pass);
        assert_eq!(cert.worst, RatQPow::one(2));
        let f = TestFunction::affine(vec![Laurent::t_pow(1)], Laurent::one(), &fq);
        let a = min_c_for_alpha(&f, &u, q_int(1), 3, 4, &fq).unwrap();
        let b = min_c_for_alpha(&f.scale(&Laurent::t_pow(3), &fq), &u, q_int(1), 3, 4, &fq).unwrap();
        assert_eq!(a, b);
        assert!(check_good(&f, &u, &params(1, q_int(2), 3, 4), &fq).unwrap().failure_count > 0);
    }
}
