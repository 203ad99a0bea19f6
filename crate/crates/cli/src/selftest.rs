//! Invariant suites for the field tower and the ball geometry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use fflab::dioph::{shell_count, shell_enumerate};
use fflab::field::{Fq, FqElem, Laurent, Poly};
use fflab::haar::{CellGrid, ExactMeasure, UltraBall};
use fflab::Result;

use crate::report::{Exactness, RunReport};

/// Triples are enumerated exhaustively up to this field size.
const EXHAUSTIVE_Q: u32 = 32;
const SAMPLES: usize = 4000;

fn triples(fq: &Fq, rng: &mut ChaCha8Rng) -> (Vec<(FqElem, FqElem, FqElem)>, bool) {
    let q = fq.q();
    if q <= EXHAUSTIVE_Q {
        let els: Vec<FqElem> = fq.elements().collect();
        let mut v = Vec::with_capacity((q * q * q) as usize);
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    v.push((a, b, c));
                }
            }
        }
        (v, true)
    } else {
        let v = (0..SAMPLES)
            .map(|_| (FqElem(rng.gen_range(0..q)), FqElem(rng.gen_range(0..q)), FqElem(rng.gen_range(0..q))))
            .collect();
        (v, false)
    }
}

fn field_axioms(fq: &Fq, rng: &mut ChaCha8Rng, rep: &mut RunReport) -> Result<()> {
    let (ts, full) = triples(fq, rng);
    let mut bad = 0usize;
    for &(a, b, c) in &ts {
        let ok = fq.add(fq.add(a, b), c) == fq.add(a, fq.add(b, c))
            && fq.mul(fq.mul(a, b), c) == fq.mul(a, fq.mul(b, c))
            && fq.mul(a, fq.add(b, c)) == fq.add(fq.mul(a, b), fq.mul(a, c))
            && fq.add(a, b) == fq.add(b, a)
            && fq.mul(a, b) == fq.mul(b, a)
            && fq.add(a, fq.neg(a)) == FqElem::ZERO
            && fq.sub(fq.add(a, b), b) == a;
        bad += usize::from(!ok);
    }
    let mut inv_bad = 0usize;
    for a in fq.nonzero() {
        inv_bad += usize::from(fq.mul(a, fq.inv(a)?) != FqElem::ONE);
    }
    let class = if full { Exactness::Exact } else { Exactness::Heuristic };
    rep.check("field axioms", class, bad == 0, json!({"q": fq.q(), "triples": ts.len(), "violations": bad}));
    rep.check("field inverses", Exactness::Exact, inv_bad == 0, json!({"violations": inv_bad}));
    Ok(())
}

fn rand_poly(rng: &mut ChaCha8Rng, fq: &Fq, deg: usize) -> Poly {
    Poly::from_coeffs((0..=deg).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect())
}

fn polynomial_suite(fq: &Fq, rng: &mut ChaCha8Rng, rep: &mut RunReport) -> Result<()> {
    let mut bad = 0usize;
    let mut done = 0usize;
    while done < 300 {
        let (da, db) = (rng.gen_range(0..8), rng.gen_range(0..5));
        let a = rand_poly(rng, fq, da);
        let b = rand_poly(rng, fq, db);
        if b.is_zero() {
            continue;
        }
        done += 1;
        let (quo, r) = a.div_rem(&b, fq)?;
        let deg_ok = r.degree().is_none_or(|d| Some(d) < b.degree());
        let (g, s, t) = a.ext_gcd(&b, fq);
        let bezout = s.mul(&a, fq).add(&t.mul(&b, fq), fq) == g;
        let divides = a.rem(&g, fq)?.is_zero() && b.rem(&g, fq)?.is_zero();
        if quo.mul(&b, fq).add(&r, fq) != a || !deg_ok || !bezout || !divides {
            bad += 1;
        }
    }
    rep.check("polynomial division and Bezout", Exactness::Heuristic, bad == 0, json!({"cases": done, "violations": bad}));
    Ok(())
}

fn laurent_suite(fq: &Fq, rng: &mut ChaCha8Rng, rep: &mut RunReport) -> Result<()> {
    let mut bad = 0usize;
    let mut done = 0usize;
    while done < 300 {
        let top = rng.gen_range(-4..4);
        let desc: Vec<FqElem> = (0..8).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect();
        let x = Laurent::from_desc(top, desc, None);
        if x.is_zero() {
            continue;
        }
        done += 1;
        let inv = x.inverse(-30, fq)?;
        let prod = x.mul(&inv, fq);
        let one_ok = prod.sub(&Laurent::one(), fq).abs_lt_pow(-20)?;
        let round = Laurent::parse(&x.display(fq), fq)? == x;
        let abs_ok = x.abs()? == fflab::field::AbsExponent::from_int(x.degree()?.expect("nonzero"));
        bad += usize::from(!(one_ok && round && abs_ok));
    }
    rep.check("Laurent inverse, valuation and text round trip", Exactness::Heuristic, bad == 0, json!({"cases": done, "violations": bad}));
    Ok(())
}

fn haar_suite(fq: &Fq, rep: &mut RunReport) -> Result<()> {
    let q = fq.q();
    let mut bad = Vec::new();
    for d in 1..=2usize {
        let b = UltraBall::centered(d, 1);
        let kids = b.children(fq);
        let total = kids.iter().fold(ExactMeasure::zero(q), |acc, k| acc.add(&k.measure(q)));
        if total != b.measure(q) {
            bad.push(format!("children of a ball in F^{d}"));
        }
        for m in 0..=2 {
            let g = CellGrid::new(b.clone(), m)?;
            if g.cell_measure(q).mul_int(g.cell_count(q)) != b.measure(q) {
                bad.push(format!("grid d={d} m={m}"));
            }
            let last = g.cell_count(q) - 1;
            if !b.contains(&g.representative(last, fq), fq)? {
                bad.push(format!("representative outside ball d={d} m={m}"));
            }
        }
    }
    rep.check("ball measure additivity", Exactness::Exact, bad.is_empty(), json!({"violations": bad}));
    let mut shell_bad = Vec::new();
    let t_max = if q <= 3 { 2 } else { 1 };
    for n in 1..=2usize {
        for t in 0..=t_max {
            let count = shell_enumerate(fq, n, t).count();
            if num_bigint::BigInt::from(count) != shell_count(q, n, t) {
                shell_bad.push(format!("n={n} t={t}: {count}"));
            }
        }
    }
    rep.check("shell counts", Exactness::Exact, shell_bad.is_empty(), json!({"violations": shell_bad}));
    Ok(())
}

pub fn run(fq: &Fq, seed: u64, rep: &mut RunReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    field_axioms(fq, &mut rng, rep)?;
    polynomial_suite(fq, &mut rng, rep)?;
    laurent_suite(fq, &mut rng, rep)?;
    haar_suite(fq, rep)
}
