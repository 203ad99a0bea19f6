//! Brute-force oracles shared by the oracle and acceptance suites.
#![allow(dead_code)]

use fflab::dioph::{fractional_part_reduction, membership_l, ApproxFunction, HyperplaneData};
use fflab::field::{AbsExponent, Fq, FqElem, Laurent, Poly};
use fflab::haar::{affine_eval, strip_measure, sup_linear_on_ball, CellGrid, UltraBall};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CELL_CAP: u64 = 1 << 13;

#[derive(Debug, Default)]
pub struct Tally {
    pub instances: usize,
    pub mismatches: usize,
    /// Instances where the predicate or set was nonempty.
    pub positives: usize,
    pub first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, positive: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        self.positives += usize::from(positive);
        if !ok {
            self.mismatches += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }
}

pub fn series(rng: &mut ChaCha8Rng, fq: &Fq, top: i64, len: usize) -> Laurent {
    Laurent::from_desc(top, (0..len).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect(), None)
}

/// A series with leading position drawn from `tops`.
pub fn rseries(rng: &mut ChaCha8Rng, fq: &Fq, tops: std::ops::RangeInclusive<i64>, len: usize) -> Laurent {
    let top = rng.gen_range(tops);
    series(rng, fq, top, len)
}

pub fn poly(rng: &mut ChaCha8Rng, fq: &Fq, deg: usize) -> Poly {
    Poly::from_coeffs((0..=deg).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect())
}

pub fn rpoly(rng: &mut ChaCha8Rng, fq: &Fq, max_deg: usize) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    poly(rng, fq, d)
}

fn ball(rng: &mut ChaCha8Rng, fq: &Fq, dim: usize, r: i64) -> UltraBall {
    let center = (0..dim).map(|_| series(rng, fq, 1, 4)).collect();
    UltraBall::new(center, r).unwrap()
}

fn cells<'a>(grid: &'a CellGrid, fq: &'a Fq) -> impl Iterator<Item = Vec<Laurent>> + 'a {
    (0..grid.cell_count(fq.q())).map(move |i| grid.representative(i, fq))
}

/// min over p with deg p ≤ max(deg z, 0) of |z + p|.
fn min_over_p(z: &Laurent, fq: &Fq) -> AbsExponent {
    let bound = z.degree().unwrap().unwrap_or(0).max(0) as usize;
    Poly::all_up_to(fq, bound).map(|p| z.add(&Laurent::from_poly(&p), fq).abs().unwrap()).min().unwrap()
}

/// sup over B of |β·x + y| against the maximum over cell representatives,
/// where it is attained at any resolution finer than the radius.
pub fn sup_linear(fq: &Fq, seed: u64, count: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    while t.instances < count {
        let dim = rng.gen_range(1..=2);
        let r = rng.gen_range(-1..=1);
        let b = ball(&mut rng, fq, dim, r);
        let beta: Vec<Laurent> = (0..dim).map(|_| rseries(&mut rng, fq, -2..=2, 3)).collect();
        let y = series(&mut rng, fq, 2, 6);
        let grid = CellGrid::new(b.clone(), -r + 1).unwrap();
        if grid.cell_count(fq.q()) > CELL_CAP {
            continue;
        }
        let brute = cells(&grid, fq).map(|x| affine_eval(&beta, &x, &y, fq).abs().unwrap()).max().unwrap();
        let got = sup_linear_on_ball(&beta, &y, &b, fq).unwrap();
        t.record(got == brute, brute != AbsExponent::Zero, || format!("β={beta:?} y={y:?} B={b:?}: {got} vs {brute}"));
    }
    t
}

pub fn fractional_part(fq: &Fq, seed: u64, count: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    while t.instances < count {
        let alpha = rseries(&mut rng, fq, -3..=1, 8);
        let qp = rpoly(&mut rng, fq, 3);
        if qp.is_zero() {
            continue;
        }
        let z = alpha.mul(&Laurent::from_poly(&qp), fq);
        let brute = min_over_p(&z, fq);
        let got = fractional_part_reduction(&alpha, &qp, fq).unwrap();
        t.record(got == brute, brute != AbsExponent::Zero, || format!("α={alpha:?} q′={qp:?}: {got} vs {brute}"));
    }
    t
}

/// λ{x ∈ B : |β·x + y| < q^{−j}} against a count of cells fine enough that
/// the predicate is constant on each.
pub fn strip(fq: &Fq, seed: u64, count: usize) -> Tally {
    let q = fq.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    while t.instances < count {
        let dim = rng.gen_range(1..=2);
        let r = rng.gen_range(-1..=1);
        let j = rng.gen_range(-2..=3);
        let b = ball(&mut rng, fq, dim, r);
        let beta: Vec<Laurent> =
            (0..dim).map(|_| if rng.gen_bool(0.1) { Laurent::zero() } else { rseries(&mut rng, fq, -2..=2, 3) }).collect();
        let y = rseries(&mut rng, fq, -3..=2, 6);
        let e = beta.iter().filter_map(|b| b.degree().unwrap()).max().unwrap_or(-10);
        let m = (e + j + 1).max(-r);
        let grid = CellGrid::new(b.clone(), m).unwrap();
        if grid.cell_count(q) > CELL_CAP {
            continue;
        }
        let hits = cells(&grid, fq).filter(|x| affine_eval(&beta, x, &y, fq).abs_lt_pow(-j).unwrap()).count();
        let brute = grid.cell_measure(q).mul_int(hits as u64);
        let got = strip_measure(&beta, &y, j, &b, fq).unwrap();
        t.record(got == brute, hits > 0, || format!("β={beta:?} y={y:?} j={j} B={b:?}: {got} vs {brute}"));
    }
    t
}

/// x ∈ 𝓛(q, κ) against min over enumerated p of |(x, x̃·a)·q + p|.
pub fn membership(fq: &Fq, seed: u64, count: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    while t.instances < count {
        let n = rng.gen_range(2..=3);
        let alpha: Vec<Laurent> = (0..n).map(|_| series(&mut rng, fq, -1, 8)).collect();
        let h = HyperplaneData::new(n, alpha.clone()).unwrap();
        let qvec: Vec<Poly> = (0..n).map(|_| rpoly(&mut rng, fq, 2)).collect();
        if qvec.iter().all(|p| p.is_zero()) {
            continue;
        }
        let x: Vec<Laurent> = (0..n - 1).map(|_| rseries(&mut rng, fq, -2..=1, 5)).collect();
        let psi = ApproxFunction::linear(rng.gen_range(0..=4), rng.gen_range(-1..=1));
        let kappa_exp = rng.gen_range(-2..=0);
        let deg = qvec.iter().filter_map(|p| p.degree()).max().unwrap() as i64;
        // (x, x̃·a)·q with x̃ = (1, x)
        let lin = (1..n).fold(alpha[0].clone(), |acc, i| acc.add(&alpha[i].mul(&x[i - 1], fq), fq));
        let mut z = lin.mul(&Laurent::from_poly(&qvec[n - 1]), fq);
        for i in 0..n - 1 {
            z = z.add(&x[i].mul(&Laurent::from_poly(&qvec[i]), fq), fq);
        }
        let brute = min_over_p(&z, fq) < AbsExponent::from_int(psi.s(deg) + kappa_exp);
        let got = membership_l(&x, &qvec, &h, &psi, kappa_exp, fq).unwrap();
        t.record(got == brute, brute, || format!("q={qvec:?} x={x:?}: {got} vs {brute}"));
    }
    t
}
