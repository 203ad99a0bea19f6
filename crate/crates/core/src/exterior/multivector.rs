use std::collections::BTreeMap;
use std::fmt;

use super::basis::{BasisIndex, Label};
use crate::error::{domain, Result};
use crate::field::{AbsExponent, Fq, Laurent, Poly, ScaledSeries};
use crate::haar::{affine_eval, sup_linear_on_ball, UltraBall};

/// Coefficients the exterior algebra can carry.
pub trait Coeff: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self, fq: &Fq) -> Result<Self>;
    fn neg(&self, fq: &Fq) -> Self;
    fn mul(&self, other: &Self, fq: &Fq) -> Result<Self>;
}

impl Coeff for Laurent {
    fn zero_like(&self) -> Self {
        Laurent::zero()
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn add(&self, other: &Self, fq: &Fq) -> Result<Self> {
        Ok(Laurent::add(self, other, fq))
    }
    fn neg(&self, fq: &Fq) -> Self {
        Laurent::neg(self, fq)
    }
    fn mul(&self, other: &Self, fq: &Fq) -> Result<Self> {
        Ok(Laurent::mul(self, other, fq))
    }
}

impl Coeff for ScaledSeries {
    fn zero_like(&self) -> Self {
        ScaledSeries::zero()
    }
    fn is_zero(&self) -> bool {
        ScaledSeries::is_zero(self)
    }
    fn add(&self, other: &Self, fq: &Fq) -> Result<Self> {
        ScaledSeries::add(self, other, fq)
    }
    fn neg(&self, fq: &Fq) -> Self {
        ScaledSeries::neg(self, fq)
    }
    fn mul(&self, other: &Self, fq: &Fq) -> Result<Self> {
        Ok(ScaledSeries::mul(self, other, fq))
    }
}

/// c₀ + Σ c_i x_i, a coefficient that is an affine function of x ∈ F^{n−1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub c0: Laurent,
    pub lin: Vec<Laurent>,
}

impl Affine {
    pub fn constant(c0: Laurent, dim: usize) -> Affine {
        Affine { c0, lin: vec![Laurent::zero(); dim] }
    }

    pub fn is_constant(&self) -> bool {
        self.lin.iter().all(|l| l.is_zero())
    }

    pub fn eval(&self, x: &[Laurent], fq: &Fq) -> Laurent {
        affine_eval(&self.lin, x, &self.c0, fq)
    }

    pub fn sup_on(&self, u: &UltraBall, fq: &Fq) -> Result<AbsExponent> {
        sup_linear_on_ball(&self.lin, &self.c0, u, fq)
    }

    fn scale_by(&self, c: &Laurent, fq: &Fq) -> Affine {
        Affine { c0: self.c0.mul(c, fq), lin: self.lin.iter().map(|l| l.mul(c, fq)).collect() }
    }
}

impl Coeff for Affine {
    fn zero_like(&self) -> Self {
        Affine::constant(Laurent::zero(), self.lin.len())
    }
    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.is_constant()
    }
    fn add(&self, other: &Self, fq: &Fq) -> Result<Self> {
        if self.lin.len() != other.lin.len() {
            return domain("affine coefficients of different dimension");
        }
        Ok(Affine {
            c0: self.c0.add(&other.c0, fq),
            lin: self.lin.iter().zip(&other.lin).map(|(a, b)| a.add(b, fq)).collect(),
        })
    }
    fn neg(&self, fq: &Fq) -> Self {
        Affine { c0: self.c0.neg(fq), lin: self.lin.iter().map(|l| l.neg(fq)).collect() }
    }
    /// Products stay affine only when one factor is constant.
    fn mul(&self, other: &Self, fq: &Fq) -> Result<Self> {
        if self.is_constant() {
            Ok(other.scale_by(&self.c0, fq))
        } else if other.is_constant() {
            Ok(self.scale_by(&other.c0, fq))
        } else {
            domain("product of two nonconstant affine coefficients")
        }
    }
}

/// Σ_I w_I e_I with zero coefficients pruned.
#[derive(Debug, Clone)]
pub struct MultiVector<C> {
    pub n: usize,
    terms: BTreeMap<BasisIndex, C>,
}

impl<C: Coeff> MultiVector<C> {
    pub fn zero(n: usize) -> MultiVector<C> {
        MultiVector { n, terms: BTreeMap::new() }
    }

    pub fn basis(idx: BasisIndex, c: C) -> MultiVector<C> {
        let mut v = MultiVector::zero(idx.n);
        if !c.is_zero() {
            v.terms.insert(idx, c);
        }
        v
    }

    /// The vector e_l with coefficient c.
    pub fn vector(n: usize, l: Label, c: C) -> Result<MultiVector<C>> {
        let (idx, _) = BasisIndex::from_labels(n, &[l])?.expect("single label");
        Ok(MultiVector::basis(idx, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &BasisIndex) -> Option<&C> {
        self.terms.get(idx)
    }

    /// The common grade, if homogeneous and nonzero.
    pub fn grade(&self) -> Option<usize> {
        let mut g = self.terms.keys().map(|i| i.grade());
        let first = g.next()?;
        g.all(|x| x == first).then_some(first)
    }

    pub fn add_term(&mut self, idx: BasisIndex, c: C, fq: &Fq) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        let next = match self.terms.remove(&idx) {
            None => c,
            Some(old) => old.add(&c, fq)?,
        };
        if !next.is_zero() {
            self.terms.insert(idx, next);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiVector<C>, fq: &Fq) -> Result<MultiVector<C>> {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c.clone(), fq)?;
        }
        Ok(out)
    }

    pub fn neg(&self, fq: &Fq) -> MultiVector<C> {
        MultiVector { n: self.n, terms: self.terms.iter().map(|(i, c)| (*i, c.neg(fq))).collect() }
    }

    pub fn wedge(&self, other: &MultiVector<C>, fq: &Fq) -> Result<MultiVector<C>> {
        if self.n != other.n {
            return domain("wedge of multivectors over different n");
        }
        let mut out = MultiVector::zero(self.n);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((k, neg)) = i.wedge(j) {
                    let c = a.mul(b, fq)?;
                    out.add_term(k, if neg { c.neg(fq) } else { c }, fq)?;
                }
            }
        }
        Ok(out)
    }

    /// π: keep only indices with at most one starred label.
    pub fn project_s(&self) -> MultiVector<C> {
        self.filter(|i| i.in_s())
    }

    /// π_*: keep only indices inside ⋀(span{e₀, e₁, …, e_n}).
    pub fn project_plain(&self) -> MultiVector<C> {
        self.filter(|i| i.is_plain())
    }

    fn filter(&self, keep: impl Fn(&BasisIndex) -> bool) -> MultiVector<C> {
        MultiVector { n: self.n, terms: self.terms.iter().filter(|(i, _)| keep(i)).map(|(i, c)| (*i, c.clone())).collect() }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&BasisIndex, &C) -> D) -> MultiVector<D> {
        MultiVector {
            n: self.n,
            terms: self.terms.iter().map(|(i, c)| (*i, f(i, c))).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// Coefficient moduli with a sup-norm.
pub trait Normed {
    fn modulus(&self) -> Result<AbsExponent>;
}

impl Normed for Laurent {
    fn modulus(&self) -> Result<AbsExponent> {
        self.abs()
    }
}

impl Normed for ScaledSeries {
    fn modulus(&self) -> Result<AbsExponent> {
        self.abs()
    }
}

impl<C: Coeff + Normed> MultiVector<C> {
    /// ‖v‖ = sup norm of π(v).
    pub fn pi_norm(&self) -> Result<AbsExponent> {
        self.terms.iter().filter(|(i, _)| i.in_s()).try_fold(AbsExponent::Zero, |acc, (_, c)| Ok(acc.max(c.modulus()?)))
    }

    /// Sup norm over every index.
    pub fn sup_norm(&self) -> Result<AbsExponent> {
        self.terms.values().try_fold(AbsExponent::Zero, |acc, c| Ok(acc.max(c.modulus()?)))
    }
}

impl MultiVector<Laurent> {
    /// θ = p e₀ + Σ q_i e_i ∈ Θ.
    pub fn theta(p: &Poly, qvec: &[Poly]) -> MultiVector<Laurent> {
        let n = qvec.len();
        let mut v = MultiVector::zero(n);
        v.terms.extend(
            std::iter::once((0, p))
                .chain(qvec.iter().enumerate().map(|(i, q)| (n + i, q)))
                .filter(|(_, c)| !c.is_zero())
                .map(|(pos, c)| (BasisIndex { n, mask: 1 << pos }, Laurent::from_poly(c))),
        );
        v
    }

    /// Σ_I w_I e_I over plain indices of one grade, with polynomial w_I.
    pub fn plain(n: usize, entries: &[(BasisIndex, Poly)]) -> MultiVector<Laurent> {
        let mut v = MultiVector::zero(n);
        for (i, p) in entries {
            if !p.is_zero() {
                v.terms.insert(*i, Laurent::from_poly(p));
            }
        }
        v
    }

    pub fn display(&self, fq: &Fq) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|(i, c)| format!("({})·{}", c.display(fq), i)).collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, l: Label) -> MultiVector<Laurent> {
        MultiVector::vector(n, l, Laurent::one()).unwrap()
    }

    #[test]
    fn worked_wedges() {
        let f2 = Fq::prime(2).unwrap();
        let f3 = Fq::prime(3).unwrap();
        let n = 2;
        let e01 = e(n, Label::Zero).wedge(&e(n, Label::Plain(1)), &f3).unwrap();
        let (idx, _) = BasisIndex::from_labels(n, &[Label::Zero, Label::Plain(1)]).unwrap().unwrap();
        assert_eq!(e01.coeff(&idx), Some(&Laurent::one()));
        assert!(e(n, Label::Plain(1)).wedge(&e(n, Label::Plain(1)), &f3).unwrap().is_zero());
        for (fq, expect) in [(&f3, Some(Laurent::constant(fq_from(&f3, 1)))), (&f2, None)] {
            let a = e(n, Label::Zero).add(&e(n, Label::Plain(1)), fq).unwrap();
            let b = e(n, Label::Zero).add(&e(n, Label::Plain(1)).neg(fq), fq).unwrap();
            let w = a.wedge(&b, fq).unwrap();
            // −2 = 1 in F_3
            assert_eq!(w.coeff(&idx).cloned(), expect);
        }
    }

    fn fq_from(fq: &Fq, k: i64) -> crate::field::FqElem {
        fq.from_int(k)
    }

    #[test]
    fn pi_kills_double_stars() {
        let f2 = Fq::prime(2).unwrap();
        let v = e(3, Label::Star(1)).wedge(&e(3, Label::Star(2)), &f2).unwrap();
        assert!(!v.is_zero());
        assert_eq!(v.pi_norm().unwrap(), AbsExponent::Zero);
        let w = MultiVector::basis(
            BasisIndex::from_labels(2, &[Label::Zero, Label::Plain(1)]).unwrap().unwrap().0,
            Laurent::t_pow(2),
        );
        assert_eq!(w.pi_norm().unwrap(), AbsExponent::from_int(2));
    }

    #[test]
    fn affine_products() {
        let f2 = Fq::prime(2).unwrap();
        let a = Affine { c0: Laurent::one(), lin: vec![Laurent::one()] };
        let c = Affine::constant(Laurent::t_pow(1), 1);
        assert_eq!(a.mul(&c, &f2).unwrap().lin[0], Laurent::t_pow(1));
        assert!(a.mul(&a, &f2).is_err());
    }
}
