//! The exterior algebra ⋀(𝓡^{2n}), the flow g_t u_x, and lower bounds for
//! sup_{x∈U} ‖g_t u_x w‖.

pub mod basis;
pub mod estimates;
pub mod flow;
pub mod enough;
pub mod multivector;

pub use basis::{BasisIndex, Label};
pub use estimates::{
    c_dprime, c_prime_exp, check_inclusion_lt, choose_beta, middle_bound_exp, one_bound_exp, rho_constant,
    top_coefficient_exponent, verify_estimates, BetaChoice, CdpChoice, EstimateReport, InclusionReport, RhoChoice,
};
pub use flow::{apply_gt, apply_utilde, apply_ux, apply_ux_affine, flow_at, index_exponent, lift, sup_flow_norm_over_u, sup_flow_terms, FlowStep};
pub use enough::{coeff_vector_ciw, decode_wedge, enough_oracle, max_pc_norm, p_times, wedge_count, zero_indices, EnoughReport};
pub use multivector::{Affine, Coeff, MultiVector, Normed};
