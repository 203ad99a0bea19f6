//! The vectors c_{I,w}, their images P·c_{I,w}, and the exhaustive check that
//! max_{0∈I} ‖P c_{I,w}‖ ≥ 1.

use rayon::prelude::*;
use serde::Serialize;

use super::basis::BasisIndex;
use super::multivector::MultiVector;
use crate::dioph::HyperplaneData;
use crate::error::{domain, Result};
use crate::field::{sup_norm, AbsExponent, Fq, Laurent, Poly};

/// c_{I,w} ∈ F^{n+1} for a plain index I ∋ 0: component 0 is w_I and
/// component i ∉ I is (−1)^k w_J with J = I ∪ {i} ∖ {0} and k the number of
/// labels of J below i (the shuffle sign of moving e₀ to the front).
pub fn coeff_vector_ciw(idx: &BasisIndex, w: &MultiVector<Laurent>, fq: &Fq) -> Result<Vec<Laurent>> {
    let n = idx.n;
    if !idx.is_plain() || idx.mask & 1 == 0 {
        return domain(format!("{idx} must be a plain index containing 0"));
    }
    if w.terms().any(|(i, _)| !i.is_plain()) {
        return domain("w must lie in ⋀(span{e₀, e₁, …, e_n})");
    }
    let get = |i: &BasisIndex| w.coeff(i).cloned().unwrap_or_else(Laurent::zero);
    let mut c = vec![get(idx)];
    let rest = idx.mask & !1;
    for i in 1..=n {
        let bit = 1u64 << (n - 1 + i);
        if rest & bit != 0 {
            c.push(Laurent::zero());
            continue;
        }
        let v = get(&BasisIndex { n, mask: rest | bit });
        let below = (rest & (bit - 1)).count_ones();
        c.push(if below % 2 == 1 { v.neg(fq) } else { v });
    }
    Ok(c)
}

/// P·c with P = [I_n | aᵗ]: (c_j + α_j c_n) for j = 0..n−1.
pub fn p_times(h: &HyperplaneData, c: &[Laurent], fq: &Fq) -> Result<Vec<Laurent>> {
    if c.len() != h.n + 1 {
        return domain("c must have n + 1 components");
    }
    Ok((0..h.n).map(|j| c[j].add(&h.alpha[j].mul(&c[h.n], fq), fq)).collect())
}

/// All plain indices I ∋ 0 of grade ℓ.
pub fn zero_indices(n: usize, grade: usize) -> Vec<BasisIndex> {
    BasisIndex::plain_of_grade(n, grade).into_iter().filter(|i| i.mask & 1 != 0).collect()
}

/// max_{0∈I} ‖P c_{I,w}‖.
pub fn max_pc_norm(w: &MultiVector<Laurent>, h: &HyperplaneData, grade: usize, fq: &Fq) -> Result<AbsExponent> {
    zero_indices(h.n, grade).iter().try_fold(AbsExponent::Zero, |acc, i| {
        let pc = p_times(h, &coeff_vector_ciw(i, w, fq)?, fq)?;
        Ok(acc.max(sup_norm(&pc)?))
    })
}

/// Number of w ∈ ⋀^ℓ(Λ^{n+1}) with every coefficient of degree ≤ D.
pub fn wedge_count(q: u32, n: usize, grade: usize, d: usize) -> Result<u64> {
    let k = BasisIndex::plain_of_grade(n, grade).len() as u32;
    (q as u64)
        .checked_pow((d as u32 + 1) * k)
        .filter(|&c| c <= 1 << 24)
        .ok_or_else(|| crate::error::LabError::Config(format!("enumeration of ⋀^{grade} at degree {d} is too large")))
}

/// The element of ⋀^ℓ(Λ^{n+1}) with code `code` (digits base q^{D+1}, one
/// per plain index).
pub fn decode_wedge(code: u64, n: usize, grade: usize, polys: &[Poly]) -> MultiVector<Laurent> {
    let per = polys.len() as u64;
    let mut c = code;
    let entries: Vec<(BasisIndex, Poly)> = BasisIndex::plain_of_grade(n, grade)
        .into_iter()
        .map(|i| {
            let p = polys[(c % per) as usize].clone();
            c /= per;
            (i, p)
        })
        .collect();
    MultiVector::plain(n, &entries)
}

#[derive(Debug, Clone, Serialize)]
pub struct EnoughReport {
    pub grade: usize,
    pub degree_bound: usize,
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    /// min over w of max_{0∈I} log_q ‖P c_{I,w}‖.
    pub min_exponent: Option<String>,
}

impl EnoughReport {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

/// Brute force over every nonzero w ∈ ⋀^ℓ(Θ) with coefficient degree ≤ D.
pub fn enough_oracle(grade: usize, d: usize, h: &HyperplaneData, fq: &Fq) -> Result<EnoughReport> {
    let n = h.n;
    if !(2..=n + 1).contains(&grade) {
        return domain(format!("grade {grade} outside 2..{}", n + 1));
    }
    let total = wedge_count(fq.q(), n, grade, d)?;
    let polys: Vec<Poly> = Poly::all_up_to(fq, d).collect();
    let results: Vec<(u64, AbsExponent)> = (1..total)
        .into_par_iter()
        .map(|code| {
            let w = decode_wedge(code, n, grade, &polys);
            Ok((code, max_pc_norm(&w, h, grade, fq)?))
        })
        .collect::<Result<_>>()?;
    let mut failures = 0;
    let mut first = None;
    let mut min: Option<AbsExponent> = None;
    for (code, v) in &results {
        if *v < AbsExponent::from_int(0) {
            failures += 1;
            if first.is_none() {
                first = Some(decode_wedge(*code, n, grade, &polys).display(fq));
            }
        }
        min = Some(min.map_or(*v, |m| m.min(*v)));
    }
    Ok(EnoughReport {
        grade,
        degree_bound: d,
        checked: results.len() as u64,
        failures,
        first_failure: first,
        min_exponent: min.map(|m| m.to_string()),
    })
}
