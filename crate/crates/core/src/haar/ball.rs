use serde::Serialize;

use super::measure::ExactMeasure;
use crate::error::{domain, precision, Result};
use crate::field::{Fq, FqElem, Laurent};

/// Closed ball {x ∈ F^d : ‖x − c‖ ≤ q^radius_exp}.
///
/// The stored center is canonical: only its terms of exponent above the
/// radius are kept, so two descriptions of the same ball compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UltraBall {
    center: Vec<Laurent>,
    radius_exp: i64,
}

impl UltraBall {
    pub fn new(center: Vec<Laurent>, radius_exp: i64) -> Result<UltraBall> {
        let center = center
            .iter()
            .map(|c| c.truncate_below(radius_exp + 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(UltraBall { center, radius_exp })
    }

    /// The ball of radius q^radius_exp about 0 in F^d.
    pub fn centered(d: usize, radius_exp: i64) -> UltraBall {
        UltraBall { center: vec![Laurent::zero(); d], radius_exp }
    }

    pub fn unit(d: usize) -> UltraBall {
        UltraBall::centered(d, 0)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[Laurent] {
        &self.center
    }

    pub fn radius_exp(&self) -> i64 {
        self.radius_exp
    }

    /// λ(B) = q^{radius·d}.
    pub fn measure(&self, q: u32) -> ExactMeasure {
        ExactMeasure::q_pow(q, self.radius_exp * self.dim() as i64)
    }

    pub fn contains(&self, x: &[Laurent], fq: &Fq) -> Result<bool> {
        if x.len() != self.dim() {
            return domain("dimension mismatch");
        }
        for (xi, ci) in x.iter().zip(&self.center) {
            if !xi.sub(ci, fq).abs_lt_pow(self.radius_exp + 1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same ball described from another of its points.
    pub fn recenter(&self, x: &[Laurent], fq: &Fq) -> Result<UltraBall> {
        if !self.contains(x, fq)? {
            return domain("new center is not a member of the ball");
        }
        UltraBall::new(x.to_vec(), self.radius_exp)
    }

    /// Smallest ball of the value group containing B(c, 3^k r):
    /// the radius grows by ⌈log_q 3^k⌉.
    pub fn dilate(&self, k: u32, q: u32) -> UltraBall {
        UltraBall { center: self.center.clone(), radius_exp: self.radius_exp + ceil_log(3u64.pow(k), q) }
    }

    /// The q^d balls of radius q^{radius−1} partitioning this one, in
    /// lexicographic order of their new digits.
    pub fn children(&self, fq: &Fq) -> Vec<UltraBall> {
        let q = fq.q() as usize;
        let d = self.dim();
        let total = q.pow(d as u32);
        (0..total)
            .map(|idx| {
                let digits = base_digits(idx as u64, q as u64, d);
                let center = self
                    .center
                    .iter()
                    .zip(&digits)
                    .map(|(c, &dg)| c.add(&Laurent::monomial(FqElem(dg as u32), self.radius_exp), fq))
                    .collect();
                UltraBall { center, radius_exp: self.radius_exp - 1 }
            })
            .collect()
    }
}

/// ⌈log_q x⌉ for x ≥ 1.
pub fn ceil_log(x: u64, q: u32) -> i64 {
    let mut k = 0;
    let mut p: u64 = 1;
    while p < x {
        p = p.saturating_mul(q as u64);
        k += 1;
    }
    k
}

/// Most significant digit first.
fn base_digits(mut idx: u64, q: u64, len: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = idx % q;
        idx /= q;
    }
    v
}

/// The cosets of radius q^{−m} tiling a ball.
#[derive(Debug, Clone)]
pub struct CellGrid {
    ball: UltraBall,
    m: i64,
}

impl CellGrid {
    pub fn new(ball: UltraBall, m: i64) -> Result<CellGrid> {
        if ball.radius_exp + m < 0 {
            return domain(format!("resolution m={m} is coarser than the ball radius {}", ball.radius_exp));
        }
        Ok(CellGrid { ball, m })
    }

    pub fn ball(&self) -> &UltraBall {
        &self.ball
    }

    pub fn resolution(&self) -> i64 {
        self.m
    }

    /// Digits per coordinate.
    fn depth(&self) -> usize {
        (self.ball.radius_exp + self.m) as usize
    }

    pub fn cell_count(&self, q: u32) -> u64 {
        (q as u64).pow((self.depth() * self.ball.dim()) as u32)
    }

    pub fn cell_measure(&self, q: u32) -> ExactMeasure {
        ExactMeasure::q_pow(q, -self.m * self.ball.dim() as i64)
    }

    /// Representative of cell `idx`: the center plus the digits at
    /// exponents radius, radius−1, …, −m+1, coordinate by coordinate.
    pub fn representative(&self, idx: u64, fq: &Fq) -> Vec<Laurent> {
        let q = fq.q() as u64;
        let depth = self.depth();
        let d = self.ball.dim();
        let digits = base_digits(idx, q, depth * d);
        (0..d)
            .map(|i| {
                let desc: Vec<FqElem> = digits[i * depth..(i + 1) * depth].iter().map(|&g| FqElem(g as u32)).collect();
                let offset = Laurent::from_desc(self.ball.radius_exp, desc, None);
                self.ball.center[i].add(&offset, fq)
            })
            .collect()
    }

    pub fn cell(&self, idx: u64, fq: &Fq) -> UltraBall {
        UltraBall { center: self.representative(idx, fq), radius_exp: -self.m }
    }
}

/// Evidence that a predicate |f(x)| < q^{−j}, f affine with gradient
/// exponent e, is constant on cells of radius q^{−m}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstancyCert {
    pub gradient_exp: i64,
    pub j: i64,
}

impl ConstancyCert {
    pub fn check(&self, m: i64) -> Result<()> {
        if m < self.gradient_exp + self.j + 1 {
            return precision(format!(
                "resolution m={m} below the constancy bound e+j+1={}",
                self.gradient_exp + self.j + 1
            ));
        }
        Ok(())
    }
}

/// Exact measure of the cells whose representative satisfies `pred`.
/// The certificates must show that `pred` is constant on every cell.
pub fn exact_measure_of<P>(grid: &CellGrid, certs: &[ConstancyCert], fq: &Fq, pred: P) -> Result<ExactMeasure>
where
    P: Fn(&[Laurent]) -> Result<bool> + Sync,
{
    use rayon::prelude::*;
    for c in certs {
        c.check(grid.m)?;
    }
    let q = fq.q();
    let total = grid.cell_count(q);
    let hits: Result<Vec<bool>> =
        (0..total).into_par_iter().map(|idx| pred(&grid.representative(idx, fq))).collect();
    let count = hits?.into_iter().filter(|&b| b).count() as u64;
    Ok(grid.cell_measure(q).mul_int(count))
}

/// Grid report: one line per cell with its representative and predicate value.
pub fn grid_report_tsv<P>(grid: &CellGrid, fq: &Fq, pred: P) -> Result<String>
where
    P: Fn(&[Laurent]) -> Result<bool>,
{
    let mut out = String::from("cell\trepresentative\tvalue\n");
    for idx in 0..grid.cell_count(fq.q()) {
        let rep = grid.representative(idx, fq);
        let shown: Vec<String> = rep.iter().map(|x| x.display(fq)).collect();
        out.push_str(&format!("{idx}\t({})\t{}\n", shown.join(", "), pred(&rep)?));
    }
    Ok(out)
}
