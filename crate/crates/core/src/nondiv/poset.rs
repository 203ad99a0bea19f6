//! Primitive submodules of Θ = Λ^{n+1} with small Hermite entries.

use std::fmt;

use rayon::prelude::*;

use super::polymat::{hnf_contains, minor_gcd, row_hnf, saturate_rows, Row};
use crate::error::{domain, LabError, Result};
use crate::field::{Fq, Poly};

/// Enumerated candidates per slice, at most.
const SLICE_CAP: usize = 1 << 21;
/// Members for which the inclusion relation is tabulated, at most.
const INCLUSION_CAP: usize = 1 << 13;

/// A submodule of Λ^{n+1} in canonical row-Hermite form: basis vector i is
/// row i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubmoduleHnf {
    pub n: usize,
    rows: Vec<Row>,
}

impl SubmoduleHnf {
    /// Primitive closure of the span of `basis`.
    pub fn saturate(n: usize, basis: &[Row], fq: &Fq) -> Result<SubmoduleHnf> {
        if basis.is_empty() {
            return domain("empty basis");
        }
        if basis.iter().any(|r| r.len() != n + 1) {
            return domain(format!("basis vectors must have {} entries", n + 1));
        }
        let sat = saturate_rows(basis, fq)?;
        Ok(SubmoduleHnf { n, rows: row_hnf(&sat, fq)? })
    }

    /// The span of `basis` as given, in normal form.
    pub fn span(n: usize, basis: &[Row], fq: &Fq) -> Result<SubmoduleHnf> {
        let rows = row_hnf(basis, fq)?;
        if rows.len() != basis.len() {
            return Err(LabError::RankDeficient(format!("{} vectors span rank {}", basis.len(), rows.len())));
        }
        Ok(SubmoduleHnf { n, rows })
    }

    pub fn whole(n: usize) -> SubmoduleHnf {
        let rows = (0..=n).map(|i| (0..=n).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect()).collect();
        SubmoduleHnf { n, rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Row] {
        &self.rows
    }

    pub fn is_primitive(&self, fq: &Fq) -> bool {
        minor_gcd(&self.rows, fq).is_unit()
    }

    pub fn contains_vector(&self, v: &Row, fq: &Fq) -> Result<bool> {
        hnf_contains(&self.rows, v, fq)
    }

    /// self ⊆ other.
    pub fn is_subset(&self, other: &SubmoduleHnf, fq: &Fq) -> Result<bool> {
        if self.rank() > other.rank() {
            return Ok(false);
        }
        for r in &self.rows {
            if !other.contains_vector(r, fq)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn max_degree(&self) -> usize {
        self.rows.iter().flatten().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Column-major dump: each basis vector as a bracketed list.
    pub fn dump(&self, fq: &Fq) -> String {
        let cols: Vec<String> =
            self.rows.iter().map(|r| format!("[{}]", r.iter().map(|p| p.to_string_with(fq)).collect::<Vec<_>>().join(", "))).collect();
        format!("rank {} {}", self.rank(), cols.join(" "))
    }
}

impl fmt::Display for SubmoduleHnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<rank {} module in F[T]^{}>", self.rank(), self.n + 1)
    }
}

/// Every primitive submodule whose Hermite form has entries of degree ≤ D,
/// with the inclusion relation.
#[derive(Debug, Clone)]
pub struct PosetSlice {
    pub n: usize,
    pub degree_cap: usize,
    members: Vec<SubmoduleHnf>,
    /// below[i]: indices j ≠ i with members[j] ⊊ members[i].
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
}

fn fill(slots: &[(usize, usize, u8)], k: usize, acc: &mut Vec<Row>, free: &[Poly], monic: &[Poly], out: &mut Vec<Vec<Row>>) -> Result<()> {
    if out.len() > SLICE_CAP {
        return Err(LabError::Config(format!("poset slice exceeds {SLICE_CAP} candidates")));
    }
    let Some(&(r, c, kind)) = slots.get(k) else {
        out.push(acc.clone());
        return Ok(());
    };
    let choices: Vec<&Poly> = match kind {
        0 => monic.iter().collect(),
        2 => free.iter().collect(),
        // above another row's pivot: reduced modulo that pivot
        k2 => {
            let pr = (k2 - 10) as usize;
            let pdeg = acc[pr][c].degree().expect("pivot filled first");
            free.iter().filter(|p| p.degree().is_none_or(|e| e < pdeg)).collect()
        }
    };
    for p in choices {
        acc[r][c] = p.clone();
        fill(slots, k + 1, acc, free, monic, out)?;
    }
    acc[r][c] = Poly::zero();
    Ok(())
}

/// Reorders slots so every pivot is filled before the entries reduced by it.
fn pivot_first(slots: &mut [(usize, usize, u8)]) {
    slots.sort_by_key(|&(r, c, k)| (k != 0, r, c));
}

/// Members of the slice without the inclusion relation, sorted by rank.
pub fn primitive_members(n: usize, degree_cap: usize, fq: &Fq) -> Result<Vec<SubmoduleHnf>> {
    if n < 1 {
        return domain("n must be positive");
    }
    let mut cands = Vec::new();
    for rank in 1..=n + 1 {
        shapes(n + 1, rank, degree_cap, fq, &mut cands)?;
    }
    let mut members: Vec<SubmoduleHnf> =
        cands.into_par_iter().filter(|rows| minor_gcd(rows, fq).is_unit()).map(|rows| SubmoduleHnf { n, rows }).collect();
    members.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.cmp(b)));
    Ok(members)
}

impl PosetSlice {
    pub fn enumerate(n: usize, degree_cap: usize, fq: &Fq) -> Result<PosetSlice> {
        if n < 1 {
            return domain("n must be positive");
        }
        let members = primitive_members(n, degree_cap, fq)?;
        if members.len() > INCLUSION_CAP {
            return Err(LabError::Config(format!("{} members exceed the inclusion cap {INCLUSION_CAP}", members.len())));
        }
        let incl: Vec<Vec<usize>> = (0..members.len())
            .into_par_iter()
            .map(|i| {
                let mut v = Vec::new();
                for j in 0..members.len() {
                    if members[j].rank() < members[i].rank() && members[j].is_subset(&members[i], fq)? {
                        v.push(j);
                    }
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let mut above = vec![Vec::new(); members.len()];
        for (i, b) in incl.iter().enumerate() {
            for &j in b {
                above[j].push(i);
            }
        }
        Ok(PosetSlice { n, degree_cap, members, below: incl, above })
    }

    pub fn members(&self) -> &[SubmoduleHnf] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, m: &SubmoduleHnf) -> Option<usize> {
        self.members.iter().position(|x| x == m)
    }

    /// members[i] ⊊ members[j].
    pub fn strictly_below(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(&i)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        i == j || self.strictly_below(i, j) || self.strictly_below(j, i)
    }

    pub fn below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }

    pub fn above(&self, i: usize) -> &[usize] {
        &self.above[i]
    }

    /// Number of elements of the longest chain.
    pub fn longest_chain(&self) -> usize {
        // members are sorted by rank, so `below` only points backwards
        let mut best = vec![1usize; self.len()];
        for i in 0..self.len() {
            for &j in &self.below[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    pub fn dump(&self, fq: &Fq) -> String {
        let mut s = String::new();
        for m in &self.members {
            s.push_str(&m.dump(fq));
            s.push('\n');
        }
        s
    }
}

/// Row-echelon shapes of one rank: pivot columns, monic pivots of degree
/// ≤ D, entries above pivots reduced, other entries of degree ≤ D.
fn shapes(width: usize, rank: usize, d: usize, fq: &Fq, out: &mut Vec<Vec<Row>>) -> Result<()> {
    let free: Vec<Poly> = Poly::all_up_to(fq, d).collect();
    let monic: Vec<Poly> = (0..=d).flat_map(|k| Poly::monic_of_degree(fq, k).collect::<Vec<_>>()).collect();
    for mask in 0u32..1 << width {
        if mask.count_ones() as usize != rank {
            continue;
        }
        let pivots: Vec<usize> = (0..width).filter(|c| mask & (1 << c) != 0).collect();
        let mut slots = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            slots.push((r, pc, 0u8));
            for c in pc + 1..width {
                match pivots.iter().position(|&p| p == c) {
                    Some(r2) => slots.push((r, c, 10 + r2 as u8)),
                    None => slots.push((r, c, 2)),
                }
            }
        }
        pivot_first(&mut slots);
        let mut acc: Vec<Row> = vec![vec![Poly::zero(); width]; rank];
        fill(&slots, 0, &mut acc, &free, &monic, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_is_canonical_and_graded() {
        let fq = Fq::prime(2).unwrap();
        let s = PosetSlice::enumerate(2, 1, &fq).unwrap();
        assert_eq!(s.longest_chain(), 3);
        assert_eq!(s.members().iter().filter(|m| m.rank() == 3).count(), 1);
        for m in s.members() {
            assert!(m.is_primitive(&fq));
            // the normal form of the saturation is the member itself
            assert_eq!(&SubmoduleHnf::saturate(2, m.basis(), &fq).unwrap(), m);
        }
        let whole = s.index_of(&SubmoduleHnf::whole(2)).unwrap();
        assert_eq!(s.below(whole).len(), s.len() - 1);
        // rank-one members: primitive vectors with monic leading entry
        let ones = s.members().iter().filter(|m| m.rank() == 1).count();
        let polys: Vec<Poly> = Poly::all_up_to(&fq, 1).collect();
        let mut brute = 0;
        for a in &polys {
            for b in &polys {
                for c in &polys {
                    let v = [a, b, c];
                    let monic_lead = v.iter().find(|p| !p.is_zero()).is_some_and(|p| p.is_monic());
                    if monic_lead && v.iter().fold(Poly::zero(), |g, p| g.gcd(p, &fq)).is_unit() {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(ones, brute);
    }
}
