//! (C, α)-good functions: exact certificates over every sub-ball of U.

pub mod certificate;
pub mod function;
pub mod closure;

pub use certificate::{check_good, min_c_for_alpha, sub_balls, GoodCertificate, GoodFailure, GoodParams};
pub use function::{GoodTarget, SupFamily, TestFunction};
pub use closure::{flow_coefficients_good, closure_property_suite, FlowGoodReport, ClosureReport};
