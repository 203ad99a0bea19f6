//! Subsets of the label set {0, *1, …, *(n−1), 1, …, n} as bitmasks.
//!
//! Positions: 0 is e₀, 1..n−1 are e_{*1}..e_{*(n−1)}, n..2n−1 are e₁..e_n.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    Zero,
    Star(usize),
    Plain(usize),
}

impl Label {
    pub fn position(self, n: usize) -> usize {
        match self {
            Label::Zero => 0,
            Label::Star(i) => i,
            Label::Plain(i) => n - 1 + i,
        }
    }

    pub fn from_position(p: usize, n: usize) -> Label {
        if p == 0 {
            Label::Zero
        } else if p < n {
            Label::Star(p)
        } else {
            Label::Plain(p + 1 - n)
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Zero => write!(f, "0"),
            Label::Star(i) => write!(f, "*{i}"),
            Label::Plain(i) => write!(f, "{i}"),
        }
    }
}

/// A basis index e_I of ⋀(𝓡^{2n}), stored in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub n: usize,
    pub mask: u64,
}

impl BasisIndex {
    pub fn empty(n: usize) -> BasisIndex {
        BasisIndex { n, mask: 0 }
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<BasisIndex> {
        if n < 2 || 2 * n > 63 {
            return domain(format!("unsupported n = {n}"));
        }
        if mask >> (2 * n) != 0 {
            return domain("mask has bits beyond position 2n − 1");
        }
        Ok(BasisIndex { n, mask })
    }

    /// e_{l₁} ∧ … ∧ e_{l_k} with its sign relative to the canonical order, or
    /// `None` if a label repeats.
    pub fn from_labels(n: usize, labels: &[Label]) -> Result<Option<(BasisIndex, bool)>> {
        let mut acc = (BasisIndex::empty(n), false);
        for &l in labels {
            let p = match l {
                Label::Zero => 0,
                Label::Star(i) if (1..n).contains(&i) => i,
                Label::Plain(i) if (1..=n).contains(&i) => n - 1 + i,
                _ => return domain(format!("label {l} out of range for n = {n}")),
            };
            match acc.0.wedge(&BasisIndex { n, mask: 1 << p }) {
                None => return Ok(None),
                Some((idx, neg)) => acc = (idx, acc.1 ^ neg),
            }
        }
        Ok(Some(acc))
    }

    pub fn grade(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, l: Label) -> bool {
        self.mask & (1 << l.position(self.n)) != 0
    }

    pub fn labels(&self) -> Vec<Label> {
        self.positions().map(|p| Label::from_position(p, self.n)).collect()
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..2 * self.n).filter(move |p| self.mask & (1 << p) != 0)
    }

    pub fn star_count(&self) -> usize {
        let stars = ((1u64 << self.n) - 1) & !1;
        (self.mask & stars).count_ones() as usize
    }

    /// I ∈ 𝓢: at most one starred label.
    pub fn in_s(&self) -> bool {
        self.star_count() <= 1
    }

    /// I ⊆ {0, 1, …, n}.
    pub fn is_plain(&self) -> bool {
        self.star_count() == 0
    }

    /// e_I ∧ e_J = ±e_{I∪J}; the flag is true for the minus sign.
    pub fn wedge(&self, other: &BasisIndex) -> Option<(BasisIndex, bool)> {
        if self.mask & other.mask != 0 {
            return None;
        }
        // inversions: pairs a ∈ I, b ∈ J with a > b
        let mut inv = 0u32;
        for b in other.positions() {
            inv += (self.mask >> (b + 1)).count_ones();
        }
        Some((BasisIndex { n: self.n, mask: self.mask | other.mask }, inv % 2 == 1))
    }

    /// All plain indices of the given grade, in mask order.
    pub fn plain_of_grade(n: usize, grade: usize) -> Vec<BasisIndex> {
        let plain: Vec<usize> = std::iter::once(0).chain(n..2 * n).collect();
        let mut out = Vec::new();
        for sub in 0u64..(1 << (n + 1)) {
            if sub.count_ones() as usize != grade {
                continue;
            }
            let mask = (0..=n).filter(|k| sub & (1 << k) != 0).fold(0u64, |m, k| m | 1 << plain[k]);
            out.push(BasisIndex { n, mask });
        }
        out.sort();
        out
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "e{{{}}}", parts.join(","))
    }
}
