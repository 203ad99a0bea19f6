//! Affine functions on balls: exact suprema, sublevel measures, and an
//! adaptive engine for unions of sets {x : dist(β·x + y, Λ) < q^{−j}}.

use rayon::prelude::*;

use super::ball::UltraBall;
use super::measure::ExactMeasure;
use crate::error::{domain, Result};
use crate::field::{sup_norm, AbsExponent, Fq, Laurent};

/// β·x + y.
pub fn affine_eval(beta: &[Laurent], x: &[Laurent], y: &Laurent, fq: &Fq) -> Laurent {
    beta.iter().zip(x).fold(y.clone(), |acc, (b, xi)| acc.add(&b.mul(xi, fq), fq))
}

/// Integer gradient exponent max_i deg β_i, or `None` if β = 0.
pub fn gradient_exp(beta: &[Laurent]) -> Result<Option<i64>> {
    Ok(match sup_norm(beta)? {
        AbsExponent::Zero => None,
        AbsExponent::Pow(e) => Some(*e.numer()),
    })
}

/// sup_{x∈B} |β·x + y| = max(|β·c + y|, q^radius·max|β_i|).
pub fn sup_linear_on_ball(beta: &[Laurent], y: &Laurent, ball: &UltraBall, fq: &Fq) -> Result<AbsExponent> {
    if beta.len() != ball.dim() {
        return domain("dimension mismatch");
    }
    let r = ball.radius_exp();
    let mut parts = vec![(affine_eval(beta, ball.center(), y, fq), 0)];
    parts.extend(beta.iter().map(|b| (b.clone(), r)));
    // uncertified parts only bound the sup from above; a certified part
    // reaching that bound decides it
    let mut certified = AbsExponent::Zero;
    let mut unknown: Option<i64> = None;
    for (v, shift) in &parts {
        if v.is_certified() {
            certified = certified.max(v.abs()?.shift((*shift).into()));
        } else {
            let p = v.precision().expect("uncertified values carry a precision") + shift;
            unknown = Some(unknown.map_or(p, |u| u.max(p)));
        }
    }
    match unknown {
        Some(p) if certified < AbsExponent::from_int(p) => Err(crate::error::LabError::PrecisionInsufficient(format!(
            "sup over the ball is below q^{p} but not certified"
        ))),
        _ => Ok(certified),
    }
}

/// λ({x ∈ B : |β·x + y| < q^{−j}}), in closed form.
pub fn strip_measure(beta: &[Laurent], y: &Laurent, j: i64, ball: &UltraBall, fq: &Fq) -> Result<ExactMeasure> {
    let q = fq.q();
    let d = ball.dim() as i64;
    let s = ball.radius_exp();
    // an uncertified slope whose term stays below q^{−j} on B cannot move
    // |β·x + y| across the threshold
    let beta: Vec<Laurent> = beta
        .iter()
        .zip(ball.center())
        .map(|(b, c)| match (b.is_certified(), b.precision()) {
            (false, Some(p)) => {
                let reach = match c.abs()? {
                    AbsExponent::Pow(ce) => ce.to_integer().max(s),
                    AbsExponent::Zero => s,
                };
                Ok(if p - 1 + reach < -j { Laurent::zero() } else { b.clone() })
            }
            _ => Ok(b.clone()),
        })
        .collect::<Result<_>>()?;
    let beta = &beta[..];
    let v = affine_eval(beta, ball.center(), y, fq);
    let e = match gradient_exp(beta)? {
        None => {
            return Ok(if v.abs_lt_pow(-j)? { ball.measure(q) } else { ExactMeasure::zero(q) });
        }
        Some(e) => e,
    };
    if !v.abs_lt_pow(e + s + 1)? {
        // the image ball B(v, q^{e+s}) misses 0: |β·x + y| = |v| throughout
        return Ok(if v.abs_lt_pow(-j)? { ball.measure(q) } else { ExactMeasure::zero(q) });
    }
    Ok(ExactMeasure::q_pow(q, s * (d - 1) + s.min(-j - e - 1)))
}

/// The predicate |β·x + y + p| < q^{−j}, with p ∈ Λ free or p = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracAffine {
    pub beta: Vec<Laurent>,
    pub y: Laurent,
    pub j: i64,
    pub free_p: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallClass {
    AllTrue,
    AllFalse,
    Mixed,
}

impl FracAffine {
    pub fn holds_at(&self, x: &[Laurent], fq: &Fq) -> Result<bool> {
        let z = affine_eval(&self.beta, x, &self.y, fq);
        if self.free_p {
            if self.j <= 0 {
                return Ok(true);
            }
            return z.frac_part().abs_lt_pow(-self.j);
        }
        z.abs_lt_pow(-self.j)
    }

    /// Decides whether the predicate is constant on the ball.
    pub fn classify(&self, ball: &UltraBall, fq: &Fq) -> Result<BallClass> {
        let truth = |b: bool| if b { BallClass::AllTrue } else { BallClass::AllFalse };
        if self.free_p && self.j <= 0 {
            return Ok(BallClass::AllTrue);
        }
        let e = match gradient_exp(&self.beta)? {
            None => return Ok(truth(self.holds_at(ball.center(), fq)?)),
            Some(e) => e,
        };
        let vr = e + ball.radius_exp();
        let mut w = affine_eval(&self.beta, ball.center(), &self.y, fq);
        if self.free_p {
            if vr >= 0 {
                return Ok(BallClass::Mixed);
            }
            // the image ball stays inside one coset of Λ
            w = w.frac_part();
        }
        if vr < -self.j {
            return Ok(truth(w.abs_lt_pow(-self.j)?));
        }
        Ok(if w.abs_lt_pow(vr + 1)? { BallClass::Mixed } else { BallClass::AllFalse })
    }
}

/// Exact λ of the union of the predicates' solution sets inside `ball`.
pub fn union_measure(forms: &[FracAffine], ball: &UltraBall, fq: &Fq) -> Result<ExactMeasure> {
    let refs: Vec<&FracAffine> = forms.iter().collect();
    union_rec(&refs, ball, fq, 0)
}

fn union_rec(forms: &[&FracAffine], ball: &UltraBall, fq: &Fq, depth: usize) -> Result<ExactMeasure> {
    let q = fq.q();
    let mut live = Vec::new();
    for f in forms {
        match f.classify(ball, fq)? {
            BallClass::AllTrue => return Ok(ball.measure(q)),
            BallClass::AllFalse => {}
            BallClass::Mixed => live.push(*f),
        }
    }
    if live.is_empty() {
        return Ok(ExactMeasure::zero(q));
    }
    let children = ball.children(fq);
    let parts: Vec<ExactMeasure> = if depth < 3 {
        children.par_iter().map(|c| union_rec(&live, c, fq, depth + 1)).collect::<Result<_>>()?
    } else {
        children.iter().map(|c| union_rec(&live, c, fq, depth + 1)).collect::<Result<_>>()?
    };
    Ok(parts.iter().fold(ExactMeasure::zero(q), |acc, m| acc.add(m)))
}
