//! Primitive submodules of Λ^{n+1}, protection and the nondivergence bound.

pub mod polymat;
pub mod poset;
pub mod measure;
pub mod protect;

pub use polymat::{det, hnf_contains, minor_gcd, row_hnf, saturate_rows, Row};
pub use measure::{check_hypotheses, d_mu_exp, rho_exp_below, nondiv_bound, nondiv_measure_check, Hypotheses, NondivParams, NondivReport};
pub use poset::{primitive_members, PosetSlice, SubmoduleHnf};
pub use protect::{
    find_protection, phi_norm, protected_implies_no_small_vector, protection_from_norms, small_vectors, submultiplicativity, theta_of, wedge_norm, wedge_rows,
    witness_from, CoreFailure, CoreReport, PhiTable, ProtectionWitness,
};

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::field::exponent::q_int;
    use crate::field::{make_flow_scalars, exponent::q_frac, Fq};
    use crate::haar::UltraBall;

    #[test]
    fn unprotected_measure_shrinks_with_eps() {
        let fq = Fq::prime(2).unwrap();
        let h = crate::dioph::lacunary_hyperplane(2, -64);
        let fs = make_flow_scalars(2, 1, 0, q_frac(1, 6)).unwrap();
        let slice = PosetSlice::enumerate(2, 1, &fq).unwrap();
        let u = UltraBall::unit(1);
        let mut last = None;
        for k in 0..2 {
            let p = NondivParams {
                eps_exp: q_int(-k),
                rho_exp: q_int(0),
                good_c: BigRational::from_integer(1.into()),
                alpha: q_int(1),
                m: 3,
                good_m: 1,
                good_j: 3,
                theta_degree: 1,
            };
            let rep = nondiv_measure_check(&u, &p, &slice, &fs, &h, &fq).unwrap();
            assert!(rep.pass, "{rep:?}");
            if let Some(prev) = last {
                assert!(rep.protected_cells >= prev);
            }
            last = Some(rep.protected_cells);
        }
        assert_eq!(last, Some(8));
    }
}
