//! Approximation functions, shells of Λⁿ, the hyperplane data, the
//! Diophantine condition and the gradient-split sets.

pub mod condition;
pub mod hyperplane;
pub mod kappa;
pub mod strips;
pub mod psi;
pub mod sets;
pub mod shell;

pub use condition::{
    check_dioph_condition, condition_lhs, fractional_part_reduction, fractional_part_reduction_exact,
    satisfies_condition, CondVerdict, DioCondReport,
};
pub use hyperplane::{lacunary, lacunary_hyperplane, HyperplaneData};
pub use kappa::{kappa_bound, KappaChoice};
pub use strips::{strip_union_direct, verify_strip_bound, StripBoundReport};
pub use psi::{shell_count, sum_psi_closed, sum_psi_partial, ApproxFunction};
pub use sets::{form_for, is_small_gradient, measure_lt, measure_union, membership_l, shell_forms, split_lt, SplitFlags};
pub use shell::{ball_enumerate, shell_enumerate};
