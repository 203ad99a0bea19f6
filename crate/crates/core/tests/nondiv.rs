use fflab::dioph::{lacunary_hyperplane, HyperplaneData};
use fflab::field::exponent::{q_frac, q_int};
use fflab::field::{make_flow_scalars, AbsExponent, FlowScalars, Fq, FqElem, Laurent, Poly};
use fflab::nondiv::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup(t: i64) -> (Fq, HyperplaneData, FlowScalars) {
    let fq = Fq::prime(2).unwrap();
    let h = lacunary_hyperplane(2, -64);
    let fs = make_flow_scalars(2, t, 0, q_frac(1, 6)).unwrap();
    (fq, h, fs)
}

fn rand_poly(rng: &mut ChaCha8Rng, fq: &Fq, deg: usize) -> Poly {
    let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(0..fq.q() as i64)).collect();
    Poly::from_ints(fq, &c)
}

fn rand_point(rng: &mut ChaCha8Rng, fq: &Fq, dim: usize) -> Vec<Laurent> {
    (0..dim).map(|_| Laurent::from_desc(0, (0..6).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect(), None)).collect()
}

fn rand_row(rng: &mut ChaCha8Rng, fq: &Fq, n: usize, deg: usize) -> Row {
    loop {
        let r: Row = (0..=n).map(|_| rand_poly(rng, fq, deg)).collect();
        if r.iter().any(|p| !p.is_zero()) {
            return r;
        }
    }
}

#[test]
fn saturation_is_idempotent_and_primitive() {
    let fq = Fq::prime(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 200 {
        let l = rng.gen_range(1..=3);
        let rows: Vec<Row> = (0..l).map(|_| rand_row(&mut rng, &fq, 3, 2)).collect();
        let Ok(s) = SubmoduleHnf::saturate(3, &rows, &fq) else { continue };
        assert!(s.is_primitive(&fq));
        assert_eq!(s.rank(), l);
        for r in &rows {
            assert!(s.contains_vector(r, &fq).unwrap());
        }
        assert_eq!(SubmoduleHnf::saturate(3, s.basis(), &fq).unwrap(), s);
        done += 1;
    }
}

#[test]
fn dependent_rows_are_rejected() {
    let fq = Fq::prime(2).unwrap();
    let v = vec![Poly::one(), Poly::t(), Poly::zero()];
    let w: Row = v.iter().map(|p| p.mul(&Poly::t(), &fq)).collect();
    assert!(matches!(SubmoduleHnf::saturate(2, &[v, w], &fq), Err(fflab::LabError::RankDeficient(_))));
}

#[test]
fn phi_norm_ignores_unimodular_rebasing() {
    let (fq, h, fs) = setup(2);
    let slice = PosetSlice::enumerate(2, 1, &fq).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let m = &slice.members()[rng.gen_range(0..slice.len())];
        let x = rand_point(&mut rng, &fq, 1);
        let mut rows = m.basis().to_vec();
        for _ in 0..4 {
            let l = rows.len();
            let (i, j) = (rng.gen_range(0..l), rng.gen_range(0..l));
            if i != j {
                let c = rand_poly(&mut rng, &fq, 2);
                let add: Row = rows[j].iter().map(|p| p.mul(&c, &fq)).collect();
                rows[i] = rows[i].iter().zip(&add).map(|(a, b)| a.add(b, &fq)).collect();
                rows.swap(i, j);
            }
        }
        assert_eq!(wedge_norm(&x, &fs, &h, &rows, &fq).unwrap(), phi_norm(&x, &fs, &h, m, &fq).unwrap());
        assert_eq!(SubmoduleHnf::span(2, &rows, &fq).unwrap(), *m);
    }
}

#[test]
fn phi_norm_examples() {
    let (fq, h, fs) = setup(1);
    let x = vec![Laurent::t_pow(-1)];
    let e0 = SubmoduleHnf::span(2, &[vec![Poly::one(), Poly::zero(), Poly::zero()]], &fq).unwrap();
    assert_eq!(phi_norm(&x, &fs, &h, &e0, &fq).unwrap(), AbsExponent::Pow(fs.gt_exponents()[0]));
    let whole = phi_norm(&x, &fs, &h, &SubmoduleHnf::whole(2), &fq).unwrap();
    assert!(whole >= AbsExponent::from_int(-1));
}

#[test]
fn protection_cases() {
    let (fq, h, fs) = setup(1);
    let slice = PosetSlice::enumerate(2, 1, &fq).unwrap();
    let x = vec![Laurent::t_pow(-1)];
    let norms: Vec<AbsExponent> = slice.members().iter().map(|m| phi_norm(&x, &fs, &h, m, &fq).unwrap()).collect();

    // everything above ρ: the empty chain protects
    let w = find_protection(&x, q_int(-100), q_int(-100), &slice, &fs, &h, &fq).unwrap().unwrap();
    assert!(w.chain.is_empty());
    assert!(protected_implies_no_small_vector(&w, 1, &slice, &fs, &h, &fq).unwrap().pass());

    // a single member at the bottom of the spectrum
    let low = *norms.iter().min().unwrap();
    let at_low: Vec<usize> = (0..norms.len()).filter(|&i| norms[i] == low).collect();
    assert_eq!(at_low.len(), 1);
    let AbsExponent::Pow(e) = low else { panic!("zero norm") };
    let next = norms.iter().filter(|v| **v > low).min().unwrap().exponent().unwrap();
    let w = find_protection(&x, e, next, &slice, &fs, &h, &fq).unwrap();
    let w = w.expect("singleton witness");
    assert_eq!(w.chain, at_low);
    assert_eq!(w.label, "slice-protected");
    let core = protected_implies_no_small_vector(&w, 1, &slice, &fs, &h, &fq).unwrap();
    assert!(core.pass(), "{core:?}");

    // ε above the smallest norm, ρ strictly between values: nothing covers it
    let mid = e + q_frac(1, 1000);
    assert!(find_protection(&x, mid, mid, &slice, &fs, &h, &fq).unwrap().is_none());
}

#[test]
fn submultiplicativity_on_random_pairs() {
    let fq = Fq::prime(2).unwrap();
    let h = lacunary_hyperplane(2, -64);
    let slice = PosetSlice::enumerate(2, 1, &fq).unwrap();
    let proper: Vec<&SubmoduleHnf> = slice.members().iter().filter(|m| m.rank() < 3).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut checked = 0;
    while checked < 500 {
        let fs = make_flow_scalars(2, rng.gen_range(0..4), rng.gen_range(0..3), q_frac(1, 6)).unwrap();
        let d = proper[rng.gen_range(0..proper.len())];
        let th = rand_row(&mut rng, &fq, 2, 2);
        let x = rand_point(&mut rng, &fq, 1);
        if let Some((lhs, rhs)) = submultiplicativity(&x, d, &th, &fs, &h, &fq).unwrap() {
            assert!(lhs <= rhs, "Δ={} θ={th:?}: {lhs} > {rhs}", d.dump(&fq));
            checked += 1;
        }
    }
}

#[test]
fn slice_sizes_and_chains() {
    for (p, n) in [(2, 2), (3, 2), (2, 3)] {
        let fq = Fq::prime(p).unwrap();
        let s = PosetSlice::enumerate(n, 1, &fq).unwrap();
        assert_eq!(s.longest_chain(), n + 1);
        let dump = s.dump(&fq);
        assert_eq!(dump.lines().count(), s.len());
    }
}

#[test]
fn small_vector_orbits() {
    let fq = Fq::prime(3).unwrap();
    // (9^3 − 1)/2 nonzero vectors up to sign
    assert_eq!(small_vectors(2, 1, &fq).len(), 364);
    let _ = theta_of(&small_vectors(2, 1, &fq)[0]);
}

#[test]
fn slice_members_reach_rho() {
    use fflab::exterior::{apply_ux_affine, c_dprime, choose_beta, index_exponent, rho_constant};
    use rayon::prelude::*;
    use fflab::haar::UltraBall;
    for (p, n) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        let fq = Fq::prime(p).unwrap();
        let h = lacunary_hyperplane(n, -64);
        let u = UltraBall::unit(n - 1);
        let delta = q_frac(1, 2);
        let cd = c_dprime(&h, delta, 1, &u, &fq).unwrap();
        let rho = rho_exp_below(&rho_constant(n, p, delta, cd.c1, cd.c2).unwrap());
        let beta = choose_beta(n, delta, 6).unwrap().value;
        let members = primitive_members(n, 1, &fq).unwrap();
        let flows: Vec<_> = (0..=3).map(|t| make_flow_scalars(n, t, 0, beta).unwrap()).collect();
        members.par_iter().for_each(|m| {
            // x-sups of the 𝓢-coefficients do not depend on t
            let img = apply_ux_affine(&h, &wedge_rows(n, m.basis(), &fq).unwrap(), &fq).unwrap();
            let sups: Vec<_> = img.terms().filter(|(i, _)| i.in_s()).map(|(i, a)| (*i, a.sup_on(&u, &fq).unwrap())).collect();
            for (t, fs) in flows.iter().enumerate() {
                let s = sups.iter().fold(AbsExponent::Zero, |acc, (i, v)| acc.max(v.shift(index_exponent(fs, i))));
                assert!(s >= AbsExponent::Pow(rho), "q={p} n={n} t={t} {}: {s} < {rho}", m.dump(&fq));
            }
        });
    }
}
