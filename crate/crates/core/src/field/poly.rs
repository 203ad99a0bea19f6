//! Polynomials over F_q: the ring Λ = F_q[T].

use super::exponent::AbsExponent;
use super::fq::{Fq, FqElem};
use crate::error::{LabError, Result};

/// A polynomial in T with coefficients in F_q, lowest degree first.
/// The coefficient vector never has a trailing zero, so the zero
/// polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![FqElem::ONE] }
    }

    pub fn constant(c: FqElem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial c·T^k.
    pub fn monomial(c: FqElem, k: usize) -> Poly {
        let mut v = vec![FqElem::ZERO; k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    pub fn t() -> Poly {
        Poly::monomial(FqElem::ONE, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// From small integers (reduced mod p), lowest degree first.
    pub fn from_ints(fq: &Fq, ints: &[i64]) -> Poly {
        Poly::from_coeffs(ints.iter().map(|&c| fq.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        self.coeffs.get(k).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FqElem::ONE
    }

    /// |P| = q^{deg P}, and |0| = 0.
    pub fn abs(&self) -> AbsExponent {
        match self.degree() {
            None => AbsExponent::Zero,
            Some(d) => AbsExponent::from_int(d as i64),
        }
    }

    pub fn add(&self, other: &Poly, fq: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| fq.add(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &Poly, fq: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| fq.sub(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn neg(&self, fq: &Fq) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect() }
    }

    pub fn scale(&self, c: FqElem, fq: &Fq) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&x| fq.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &Poly, fq: &Fq) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Euclidean division: `self = quo·divisor + rem` with deg rem < deg divisor.
    pub fn div_rem(&self, divisor: &Poly, fq: &Fq) -> Result<(Poly, Poly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| LabError::Domain("division by the zero polynomial".into()))?;
        let lead_inv = fq.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![FqElem::ZERO; rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let factor = fq.mul(rem[top], lead_inv);
            let shift = top - dd;
            quo[shift] = factor;
            for (k, &c) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] = fq.sub(rem[shift + k], fq.mul(factor, c));
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &Poly, fq: &Fq) -> Result<Poly> {
        Ok(self.div_rem(divisor, fq)?.1)
    }

    /// Scales to a monic polynomial; zero stays zero.
    pub fn monic(&self, fq: &Fq) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = fq.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv, fq)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly, fq: &Fq) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, fq).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(fq)
    }

    /// Extended gcd: returns (g, s, t) with s·self + t·other = g, g monic.
    pub fn ext_gcd(&self, other: &Poly, fq: &Fq) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (quo, rem) = r0.div_rem(&r1, fq).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, rem);
            let s2 = s0.sub(&quo.mul(&s1, fq), fq);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&quo.mul(&t1, fq), fq);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = fq.inv(r0.leading()).expect("nonzero");
        (r0.scale(inv, fq), s0.scale(inv, fq), t0.scale(inv, fq))
    }

    pub fn eval(&self, x: FqElem, fq: &Fq) -> FqElem {
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| fq.add(fq.mul(acc, x), c))
    }

    /// Every polynomial of degree ≤ `max_deg` (including zero), in the
    /// lexicographic order of the base-q encoding.
    pub fn all_up_to(fq: &Fq, max_deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = fq.q() as u64;
        let count = q.pow(max_deg as u32 + 1);
        (0..count).map(move |code| Poly::decode(code, q, max_deg + 1))
    }

    /// Every monic polynomial of degree exactly `deg`.
    pub fn monic_of_degree(fq: &Fq, deg: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = fq.q() as u64;
        let count = q.pow(deg as u32);
        (0..count).map(move |code| {
            let mut p = Poly::decode(code, q, deg).coeffs;
            p.resize(deg, FqElem::ZERO);
            p.push(FqElem::ONE);
            Poly::from_coeffs(p)
        })
    }

    fn decode(mut code: u64, q: u64, len: usize) -> Poly {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(FqElem((code % q) as u32));
            code /= q;
        }
        Poly::from_coeffs(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let fq = Fq::prime(3).unwrap();
        let a = Poly::from_ints(&fq, &[1, 0, 1]); // T^2 + 1
        let b = Poly::from_ints(&fq, &[1, 1]); // T + 1
        let (quo, rem) = a.div_rem(&b, &fq).unwrap();
        assert_eq!(quo.mul(&b, &fq).add(&rem, &fq), a);
        assert!(rem.degree().unwrap_or(0) < 1);
        let (g, s, t) = a.ext_gcd(&b, &fq);
        assert_eq!(s.mul(&a, &fq).add(&t.mul(&b, &fq), &fq), g);
        let ab = a.mul(&b, &fq);
        assert_eq!(ab.gcd(&b.mul(&b, &fq), &fq), b.monic(&fq));
    }

    #[test]
    fn lambda_is_discrete() {
        let fq = Fq::prime(2).unwrap();
        for p in Poly::all_up_to(&fq, 3).filter(|p| !p.is_zero()) {
            assert!(p.abs() >= AbsExponent::from_int(0));
        }
        assert_eq!(Poly::zero().abs(), AbsExponent::Zero);
        assert_eq!(Poly::from_ints(&fq, &[1, 0, 1]).abs(), AbsExponent::from_int(2));
    }

    #[test]
    fn enumeration_counts() {
        let fq = Fq::prime(3).unwrap();
        assert_eq!(Poly::all_up_to(&fq, 2).count(), 27);
        assert_eq!(Poly::monic_of_degree(&fq, 2).count(), 9);
        assert!(Poly::monic_of_degree(&fq, 2).all(|p| p.degree() == Some(2) && p.is_monic()));
    }
}
