//! Norms ‖h(x)Δ‖, protected points and the chain argument.

use rayon::prelude::*;
use serde::Serialize;

use super::poset::{PosetSlice, SubmoduleHnf};
use super::polymat::Row;
use crate::dioph::HyperplaneData;
use crate::error::{precision, Result};
use crate::exterior::{apply_ux_affine, flow_at, index_exponent, Affine, FlowStep, MultiVector};
use crate::field::exponent::{fmt_q, q_int, Q};
use crate::field::{AbsExponent, Fq, Laurent, Poly, ScaledSeries};

/// Upper bound exponent for |v|, or `None` for v = 0.
fn upper_exp(v: &Laurent) -> Result<Option<Q>> {
    if v.is_certified() {
        return Ok(v.abs()?.exponent());
    }
    Ok(v.precision().map(|p| q_int(p - 1)))
}

/// max_i |v_i|·q^{s_i}, decided when the certified part dominates every
/// uncertified bound.
fn robust_max<'a>(items: impl Iterator<Item = (Q, &'a Laurent)>) -> Result<AbsExponent> {
    let mut best = AbsExponent::Zero;
    let mut loose = AbsExponent::Zero;
    for (s, v) in items {
        if v.is_certified() {
            best = best.max(v.abs()?.shift(s));
        } else if let Some(e) = upper_exp(v)? {
            loose = loose.max(AbsExponent::Pow(e + s));
        }
    }
    if loose > best {
        return precision(format!("uncertified coefficient up to q^{loose} exceeds the certified maximum q^{best}"));
    }
    Ok(best)
}

fn scaled_norm(v: &MultiVector<ScaledSeries>) -> Result<AbsExponent> {
    robust_max(v.terms().filter(|(i, _)| i.in_s()).map(|(_, c)| (c.shift(), c.mantissa())))
}

pub fn theta_of(row: &Row) -> MultiVector<Laurent> {
    MultiVector::theta(&row[0], &row[1..])
}

/// v₁ ∧ … ∧ v_ℓ for the rows of a basis.
pub fn wedge_rows(n: usize, rows: &[Row], fq: &Fq) -> Result<MultiVector<Laurent>> {
    let mut acc = MultiVector::basis(crate::exterior::BasisIndex::empty(n), Laurent::one());
    for r in rows {
        acc = acc.wedge(&theta_of(r), fq)?;
    }
    Ok(acc)
}

/// ‖h(x)v‖ for v = v₁ ∧ … ∧ v_ℓ.
pub fn wedge_norm(x: &[Laurent], fs: &FlowStep, h: &HyperplaneData, rows: &[Row], fq: &Fq) -> Result<AbsExponent> {
    let w = wedge_rows(h.n, rows, fq)?;
    scaled_norm(&flow_at(x, fs, h, &w, fq)?)
}

/// φ_Δ(x) = ‖h(x)Δ‖.
pub fn phi_norm(x: &[Laurent], fs: &FlowStep, h: &HyperplaneData, delta: &SubmoduleHnf, fq: &Fq) -> Result<AbsExponent> {
    wedge_norm(x, fs, h, delta.basis(), fq)
}

/// The 𝓢-coefficients of g_t u_x Δ for every slice member, affine in x.
#[derive(Debug, Clone)]
pub struct PhiTable {
    images: Vec<Vec<(Q, Affine)>>,
}

impl PhiTable {
    pub fn new(slice: &PosetSlice, fs: &FlowStep, h: &HyperplaneData, fq: &Fq) -> Result<PhiTable> {
        let images = slice
            .members()
            .par_iter()
            .map(|m| {
                let img = apply_ux_affine(h, &wedge_rows(h.n, m.basis(), fq)?, fq)?;
                Ok(img.terms().filter(|(i, _)| i.in_s()).map(|(i, a)| (index_exponent(fs, i), a.clone())).collect())
            })
            .collect::<Result<_>>()?;
        Ok(PhiTable { images })
    }

    pub fn at(&self, i: usize, x: &[Laurent], fq: &Fq) -> Result<AbsExponent> {
        let vals: Vec<(Q, Laurent)> = self.images[i].iter().map(|(s, a)| (*s, a.eval(x, fq))).collect();
        robust_max(vals.iter().map(|(s, v)| (*s, v)))
    }

    /// φ at x, and whether φ is constant on x + B(0, q^{−m}): the value
    /// beats every slope contribution |∇a_I|·q^{−m}·q^{s_I}.
    pub fn on_cell(&self, i: usize, x: &[Laurent], m: i64, fq: &Fq) -> Result<(AbsExponent, bool)> {
        let v = self.at(i, x, fq)?;
        let mut slope = AbsExponent::Zero;
        for (s, a) in &self.images[i] {
            for l in &a.lin {
                if let Some(e) = upper_exp(l)? {
                    slope = slope.max(AbsExponent::Pow(e + s - q_int(m)));
                }
            }
        }
        Ok((v, v > slope))
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtectionWitness {
    pub x: Vec<String>,
    /// Slice indices, increasing.
    pub chain: Vec<usize>,
    /// Exponents of ‖h(x)Δ‖ along the chain.
    pub norms: Vec<String>,
    pub eps_exp: String,
    pub rho_exp: String,
    pub label: &'static str,
    #[serde(skip)]
    pub point: Vec<Laurent>,
    #[serde(skip)]
    pub eps: Q,
    #[serde(skip)]
    pub rho: Q,
}

/// Chain search given every φ_Δ(x) on the slice; returns the first chain in
/// order of length, then lexicographic slice indices.
pub fn protection_from_norms(norms: &[AbsExponent], eps: Q, rho: Q, slice: &PosetSlice) -> Option<Vec<usize>> {
    let e = AbsExponent::Pow(eps);
    let r = AbsExponent::Pow(rho);
    let small: Vec<usize> = (0..norms.len()).filter(|&i| norms[i] < r).collect();
    let pinched: Vec<usize> = small.iter().copied().filter(|&i| norms[i] >= e).collect();
    // (b): every small member outside the chain is incomparable to some link
    let ok = |chain: &[usize]| small.iter().all(|&j| chain.contains(&j) || chain.iter().any(|&c| !slice.comparable(j, c)));
    // members with ‖h(x)Δ‖ = ρ exactly may also sit in the chain
    let edge: Vec<usize> = (0..norms.len()).filter(|&i| norms[i] == r).collect();
    let cands: Vec<usize> = {
        let mut v: Vec<usize> = pinched.iter().chain(&edge).copied().collect();
        v.sort_unstable();
        v
    };
    for len in 0..=slice.n + 1 {
        let mut chain = Vec::new();
        if search(&cands, len, slice, &mut chain, &ok) {
            return Some(chain);
        }
    }
    None
}

fn search(cands: &[usize], len: usize, slice: &PosetSlice, chain: &mut Vec<usize>, ok: &dyn Fn(&[usize]) -> bool) -> bool {
    if chain.len() == len {
        return ok(chain);
    }
    for &c in cands {
        if chain.last().is_some_and(|&l| !slice.strictly_below(l, c)) {
            continue;
        }
        chain.push(c);
        if search(cands, len, slice, chain, ok) {
            return true;
        }
        chain.pop();
    }
    false
}

pub fn find_protection(
    x: &[Laurent],
    eps: Q,
    rho: Q,
    slice: &PosetSlice,
    fs: &FlowStep,
    h: &HyperplaneData,
    fq: &Fq,
) -> Result<Option<ProtectionWitness>> {
    let norms = slice.members().iter().map(|m| phi_norm(x, fs, h, m, fq)).collect::<Result<Vec<_>>>()?;
    Ok(witness_from(x, &norms, eps, rho, slice, fq))
}

pub fn witness_from(x: &[Laurent], norms: &[AbsExponent], eps: Q, rho: Q, slice: &PosetSlice, fq: &Fq) -> Option<ProtectionWitness> {
    let chain = protection_from_norms(norms, eps, rho, slice)?;
    Some(ProtectionWitness {
        x: x.iter().map(|v| v.display(fq)).collect(),
        norms: chain.iter().map(|&i| norms[i].to_string()).collect(),
        chain,
        eps_exp: fmt_q(&eps),
        rho_exp: fmt_q(&rho),
        label: "slice-protected",
        point: x.to_vec(),
        eps,
        rho,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreFailure {
    pub theta: String,
    pub norm: String,
    /// i with θ ∈ Δ_i ∖ Δ_{i−1}; chain length + 1 stands for Θ.
    pub level: usize,
    pub delta: String,
    pub delta_in_slice: bool,
    pub delta_is_link: bool,
    pub submultiplicative: bool,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreReport {
    pub degree_cap: usize,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<CoreFailure>,
}

impl CoreReport {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

/// Nonzero vectors of Λ^{n+1} with entries of degree ≤ D, one per F_q^×
/// orbit (leading entry monic).
pub fn small_vectors(n: usize, d: usize, fq: &Fq) -> Vec<Row> {
    let polys: Vec<Poly> = Poly::all_up_to(fq, d).collect();
    let b = polys.len();
    let total = b.pow(n as u32 + 1);
    (1..total)
        .map(|mut code| {
            (0..=n)
                .map(|_| {
                    let p = polys[code % b].clone();
                    code /= b;
                    p
                })
                .collect::<Row>()
        })
        .filter(|v| v.iter().find(|p| !p.is_zero()).is_some_and(|p| p.is_monic()))
        .collect()
}

fn show_row(r: &Row, fq: &Fq) -> String {
    format!("({})", r.iter().map(|p| p.to_string_with(fq)).collect::<Vec<_>>().join(", "))
}

/// For every θ ≠ 0 of degree ≤ D, ‖h(x)θ‖ ≥ ε; failures are localized along
/// the chain as in the proof: Δ = 𝓡(Δ_{i−1} + 𝓡θ) ∩ Θ sits between Δ_{i−1}
/// and Δ_i, and ‖h(x)Δ‖ ≤ ‖h(x)Δ_{i−1}‖·‖h(x)θ‖.
pub fn protected_implies_no_small_vector(
    w: &ProtectionWitness,
    d: usize,
    slice: &PosetSlice,
    fs: &FlowStep,
    h: &HyperplaneData,
    fq: &Fq,
) -> Result<CoreReport> {
    let eps = AbsExponent::Pow(w.eps);
    let thetas = small_vectors(h.n, d, fq);
    let res: Vec<Option<CoreFailure>> = thetas
        .par_iter()
        .map(|th| {
            let norm = wedge_norm(&w.point, fs, h, std::slice::from_ref(th), fq)?;
            if norm >= eps {
                return Ok(None);
            }
            localize(w, th, norm, slice, fs, h, fq).map(Some)
        })
        .collect::<Result<_>>()?;
    let failures = res.iter().flatten().count();
    Ok(CoreReport { degree_cap: d, checked: thetas.len(), failures, first_failure: res.into_iter().flatten().next() })
}

fn localize(
    w: &ProtectionWitness,
    th: &Row,
    norm: AbsExponent,
    slice: &PosetSlice,
    fs: &FlowStep,
    h: &HyperplaneData,
    fq: &Fq,
) -> Result<CoreFailure> {
    let links: Vec<&SubmoduleHnf> = w.chain.iter().map(|&i| &slice.members()[i]).collect();
    let mut level = links.len() + 1;
    for (i, l) in links.iter().enumerate() {
        if l.contains_vector(th, fq)? {
            level = i + 1;
            break;
        }
    }
    let prev: Vec<Row> = if level >= 2 { links[level - 2].basis().to_vec() } else { Vec::new() };
    let prev_norm = if prev.is_empty() { AbsExponent::from_int(0) } else { wedge_norm(&w.point, fs, h, &prev, fq)? };
    let mut gens = prev.clone();
    gens.push(th.clone());
    let delta = SubmoduleHnf::saturate(h.n, &gens, fq)?;
    let dn = phi_norm(&w.point, fs, h, &delta, fq)?;
    let submultiplicative = dn <= prev_norm.mul(norm);
    let delta_in_slice = slice.index_of(&delta).is_some();
    let delta_is_link = level <= links.len() && &delta == links[level - 1];
    let rho = AbsExponent::Pow(w.rho);
    let reason = if !submultiplicative {
        "submultiplicativity fails".to_string()
    } else if rho > AbsExponent::from_int(0) {
        "rho exceeds 1".to_string()
    } else if !delta_in_slice && !delta_is_link {
        format!("saturation of degree {} lies outside the slice", delta.max_degree())
    } else {
        format!("norm of the intermediate module is q^{dn}, below the protection thresholds")
    };
    Ok(CoreFailure {
        theta: show_row(th, fq),
        norm: norm.to_string(),
        level,
        delta: delta.dump(fq),
        delta_in_slice,
        delta_is_link,
        submultiplicative,
        reason,
    })
}

/// ‖h(x)Δ′‖ ≤ ‖h(x)Δ‖·‖h(x)θ‖ for Δ′ = 𝓡(Δ + 𝓡θ) ∩ Θ; `None` when θ ∈ 𝓡Δ.
pub fn submultiplicativity(
    x: &[Laurent],
    delta: &SubmoduleHnf,
    th: &Row,
    fs: &FlowStep,
    h: &HyperplaneData,
    fq: &Fq,
) -> Result<Option<(AbsExponent, AbsExponent)>> {
    let mut gens = delta.basis().to_vec();
    gens.push(th.clone());
    let big = match SubmoduleHnf::saturate(h.n, &gens, fq) {
        Ok(b) => b,
        Err(crate::LabError::RankDeficient(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let lhs = phi_norm(x, fs, h, &big, fq)?;
    let rhs = phi_norm(x, fs, h, delta, fq)?.mul(wedge_norm(x, fs, h, std::slice::from_ref(th), fq)?);
    Ok(Some((lhs, rhs)))
}
