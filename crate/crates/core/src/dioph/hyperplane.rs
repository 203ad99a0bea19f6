use crate::error::{domain, Result};
use crate::field::{Fq, FqElem, Laurent, Poly};

/// The affine hyperplane {(x, x̃·a)} ⊂ Fⁿ, x ∈ F^{n−1}, given by
/// a = (α₀, α₁, …, α_{n−1}) with x̃ = (1, x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneData {
    pub n: usize,
    pub alpha: Vec<Laurent>,
    /// Exact P/Q forms of rational coefficients, when known.
    pub rational: Vec<Option<(Poly, Poly)>>,
}

impl HyperplaneData {
    pub fn new(n: usize, alpha: Vec<Laurent>) -> Result<HyperplaneData> {
        if n < 2 {
            return domain("hyperplanes need n ≥ 2");
        }
        if alpha.len() != n {
            return domain(format!("expected {n} coefficients α₀..α_{}, got {}", n - 1, alpha.len()));
        }
        Ok(HyperplaneData { n, alpha, rational: vec![None; n] })
    }

    /// Coefficients α_i = P_i/Q_i, expanded to precision `prec` and also
    /// kept exactly.
    pub fn from_rationals(n: usize, fracs: Vec<(Poly, Poly)>, prec: i64, fq: &Fq) -> Result<HyperplaneData> {
        let alpha = fracs
            .iter()
            .map(|(p, q)| Laurent::from_rational(p, q, prec, fq))
            .collect::<Result<Vec<_>>>()?;
        let mut h = HyperplaneData::new(n, alpha)?;
        h.rational = fracs.into_iter().map(Some).collect();
        Ok(h)
    }

    /// a = 0: the coordinate hyperplane x_n = 0.
    pub fn zero(n: usize) -> HyperplaneData {
        HyperplaneData { n, alpha: vec![Laurent::zero(); n], rational: vec![Some((Poly::zero(), Poly::one())); n] }
    }

    /// x̃·a = α₀ + Σ α_i x_i.
    pub fn eval(&self, x: &[Laurent], fq: &Fq) -> Laurent {
        self.alpha[1..].iter().zip(x).fold(self.alpha[0].clone(), |acc, (a, xi)| acc.add(&a.mul(xi, fq), fq))
    }

    /// β_i = q_i + α_i q_n for i = 1..n−1.
    pub fn gradient(&self, qvec: &[Poly], fq: &Fq) -> Vec<Laurent> {
        let qn = Laurent::from_poly(&qvec[self.n - 1]);
        (1..self.n)
            .map(|i| Laurent::from_poly(&qvec[i - 1]).add(&self.alpha[i].mul(&qn, fq), fq))
            .collect()
    }

    /// α₀ q_n.
    pub fn offset(&self, qvec: &[Poly], fq: &Fq) -> Laurent {
        self.alpha[0].mul(&Laurent::from_poly(&qvec[self.n - 1]), fq)
    }

    /// The least precision among the coefficients (None when all exact).
    pub fn precision(&self) -> Option<i64> {
        self.alpha.iter().filter_map(|a| a.precision()).max()
    }
}

/// Σ_{k≥0} T^{−b^k}, with every term below T^{prec} unknown.
pub fn lacunary(base: i64, prec: i64) -> Laurent {
    let len = (-prec).max(0) as usize;
    let mut desc = vec![FqElem::ZERO; len];
    let mut e: i64 = 1;
    while e <= len as i64 {
        desc[(e - 1) as usize] = FqElem::ONE;
        e *= base;
    }
    Laurent::from_desc(-1, desc, Some(prec))
}

/// Lacunary coefficients with gap bases 2, 3, 5, …: far from every
/// rational, so the Diophantine condition holds for small δ.
pub fn lacunary_hyperplane(n: usize, prec: i64) -> HyperplaneData {
    const BASES: [i64; 5] = [2, 3, 5, 7, 11];
    let alpha = (0..n).map(|i| lacunary(BASES[i % BASES.len()], prec)).collect();
    HyperplaneData { n, alpha, rational: vec![None; n] }
}
