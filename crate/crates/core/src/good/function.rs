//! Polynomials on F^d with Laurent coefficients, and the two quantities
//! Definition-style goodness needs: ‖f‖ on a ball and λ({|f| < q^{−j}} ∩ B).

use crate::error::{domain, precision, Result};
use crate::field::{sup_norm, AbsExponent, Fq, Laurent};
use crate::haar::{exact_measure_of, strip_measure, sup_linear_on_ball, CellGrid, ConstancyCert, ExactMeasure, UltraBall};

/// Cells examined by one grid computation, at most.
const GRID_CAP: u64 = 1 << 20;

/// Something whose sublevel sets can be measured exactly on balls.
pub trait GoodTarget: Sync {
    fn dim(&self) -> usize;
    fn norm_on_ball(&self, b: &UltraBall, fq: &Fq) -> Result<AbsExponent>;
    fn measure_below(&self, b: &UltraBall, j: i64, fq: &Fq) -> Result<ExactMeasure>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestFunction {
    pub d: usize,
    /// (exponent vector, coefficient), merged by monomial.
    terms: Vec<(Vec<u32>, Laurent)>,
}

impl TestFunction {
    pub fn from_terms(d: usize, terms: Vec<(Vec<u32>, Laurent)>, fq: &Fq) -> Result<TestFunction> {
        let mut out: Vec<(Vec<u32>, Laurent)> = Vec::new();
        for (a, c) in terms {
            if a.len() != d {
                return domain("monomial of the wrong dimension");
            }
            match out.iter_mut().find(|(b, _)| *b == a) {
                Some((_, acc)) => *acc = acc.add(&c, fq),
                None => out.push((a, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        out.sort_by(|x, y| x.0.cmp(&y.0));
        Ok(TestFunction { d, terms: out })
    }

    /// β·x + y.
    pub fn affine(beta: Vec<Laurent>, y: Laurent, fq: &Fq) -> TestFunction {
        let d = beta.len();
        let mut terms = vec![(vec![0; d], y)];
        for (i, b) in beta.into_iter().enumerate() {
            let mut a = vec![0; d];
            a[i] = 1;
            terms.push((a, b));
        }
        TestFunction::from_terms(d, terms, fq).expect("dimensions agree")
    }

    pub fn terms(&self) -> &[(Vec<u32>, Laurent)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(a, _)| a.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    /// (β, y) for affine f.
    pub fn as_affine(&self) -> Option<(Vec<Laurent>, Laurent)> {
        if !self.is_affine() {
            return None;
        }
        let mut beta = vec![Laurent::zero(); self.d];
        let mut y = Laurent::zero();
        for (a, c) in &self.terms {
            match a.iter().position(|&k| k == 1) {
                Some(i) => beta[i] = c.clone(),
                None => y = c.clone(),
            }
        }
        Some((beta, y))
    }

    pub fn eval(&self, x: &[Laurent], fq: &Fq) -> Laurent {
        self.terms.iter().fold(Laurent::zero(), |acc, (a, c)| {
            let m = a.iter().zip(x).fold(c.clone(), |m, (&k, xi)| (0..k).fold(m, |m, _| m.mul(xi, fq)));
            acc.add(&m, fq)
        })
    }

    pub fn scale(&self, c: &Laurent, fq: &Fq) -> TestFunction {
        let terms = self.terms.iter().map(|(a, x)| (a.clone(), x.mul(c, fq))).collect();
        TestFunction::from_terms(self.d, terms, fq).expect("same dimension")
    }

    pub fn mul(&self, other: &TestFunction, fq: &Fq) -> Result<TestFunction> {
        if self.d != other.d {
            return domain("product of functions on different spaces");
        }
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                terms.push((a.iter().zip(b).map(|(i, j)| i + j).collect(), x.mul(y, fq)));
            }
        }
        TestFunction::from_terms(self.d, terms, fq)
    }

    /// e with |f(x) − f(x′)| ≤ q^e |x − x′| on B, or `None` for constant f:
    /// each monomial c·x^a contributes |c|·R^{|a|−1} with R = sup_{x∈B} ‖x‖.
    pub fn lipschitz_exp(&self, b: &UltraBall) -> Result<Option<i64>> {
        let r = match sup_norm(b.center())? {
            AbsExponent::Pow(e) => (*e.numer()).max(b.radius_exp()),
            AbsExponent::Zero => b.radius_exp(),
        };
        let mut best: Option<i64> = None;
        for (a, c) in &self.terms {
            let k = a.iter().sum::<u32>() as i64;
            if k == 0 {
                continue;
            }
            let ce = match c.abs()? {
                AbsExponent::Zero => continue,
                AbsExponent::Pow(e) => *e.numer(),
            };
            let v = ce + r * (k - 1);
            best = Some(best.map_or(v, |x| x.max(v)));
        }
        Ok(best)
    }

    fn constant_term(&self) -> Laurent {
        self.terms.iter().find(|(a, _)| a.iter().all(|&k| k == 0)).map_or_else(Laurent::zero, |(_, c)| c.clone())
    }
}

/// Grid resolution needed for a constancy bound, checked against the cap.
fn grid_for(b: &UltraBall, m: i64, q: u32) -> Result<CellGrid> {
    let m = m.max(-b.radius_exp());
    let grid = CellGrid::new(b.clone(), m)?;
    let depth = (b.radius_exp() + m) as u32 * b.dim() as u32;
    if (q as u64).checked_pow(depth).is_none_or(|c| c > GRID_CAP) {
        return precision(format!("grid of resolution {m} is beyond the enumeration cap"));
    }
    Ok(grid)
}

/// sup over B of max_i |f_i| by refining grids until the grid maximum
/// exceeds the Lipschitz slack.
fn grid_norm(fs: &[&TestFunction], b: &UltraBall, fq: &Fq) -> Result<AbsExponent> {
    let e = fs.iter().map(|f| f.lipschitz_exp(b)).collect::<Result<Vec<_>>>()?.into_iter().flatten().max();
    let Some(e) = e else {
        return fs.iter().try_fold(AbsExponent::Zero, |acc, f| Ok(acc.max(f.constant_term().abs()?)));
    };
    let mut m = -b.radius_exp();
    loop {
        let grid = grid_for(b, m, fq.q())?;
        let mut best = AbsExponent::Zero;
        for idx in 0..grid.cell_count(fq.q()) {
            let x = grid.representative(idx, fq);
            for f in fs {
                best = best.max(f.eval(&x, fq).abs()?);
            }
        }
        if best > AbsExponent::from_int(e - m) {
            return Ok(best);
        }
        m += 1;
    }
}

/// λ({x ∈ B : |f_i(x)| < q^{−j} for all i}).
fn grid_measure_below(fs: &[&TestFunction], b: &UltraBall, j: i64, fq: &Fq) -> Result<ExactMeasure> {
    let mut certs = Vec::new();
    for f in fs {
        if let Some(e) = f.lipschitz_exp(b)? {
            certs.push(ConstancyCert { gradient_exp: e, j });
        }
    }
    let m = certs.iter().map(|c| c.gradient_exp + j + 1).max().unwrap_or(0);
    let grid = grid_for(b, m, fq.q())?;
    exact_measure_of(&grid, &certs, fq, |x| {
        for f in fs {
            if !f.eval(x, fq).abs_lt_pow(-j)? {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

impl GoodTarget for TestFunction {
    fn dim(&self) -> usize {
        self.d
    }

    fn norm_on_ball(&self, b: &UltraBall, fq: &Fq) -> Result<AbsExponent> {
        match self.as_affine() {
            Some((beta, y)) => sup_linear_on_ball(&beta, &y, b, fq),
            None => grid_norm(&[self], b, fq),
        }
    }

    fn measure_below(&self, b: &UltraBall, j: i64, fq: &Fq) -> Result<ExactMeasure> {
        match self.as_affine() {
            Some((beta, y)) => strip_measure(&beta, &y, j, b, fq),
            None => grid_measure_below(&[self], b, j, fq),
        }
    }
}

/// x ↦ max_i |f_i(x)| for a finite family.
#[derive(Debug, Clone)]
pub struct SupFamily(pub Vec<TestFunction>);

impl GoodTarget for SupFamily {
    fn dim(&self) -> usize {
        self.0.first().map_or(0, |f| f.d)
    }

    fn norm_on_ball(&self, b: &UltraBall, fq: &Fq) -> Result<AbsExponent> {
        self.0.iter().try_fold(AbsExponent::Zero, |acc, f| Ok(acc.max(f.norm_on_ball(b, fq)?)))
    }

    fn measure_below(&self, b: &UltraBall, j: i64, fq: &Fq) -> Result<ExactMeasure> {
        if self.0.len() == 1 {
            return self.0[0].measure_below(b, j, fq);
        }
        grid_measure_below(&self.0.iter().collect::<Vec<_>>(), b, j, fq)
    }
}
