//! The tower F_q → Λ = F_q[T] → F = F_q((T⁻¹)) → monomial-graded extension.

pub mod exponent;
pub mod fq;
pub mod laurent;
pub mod poly;
pub mod scaled;

pub use exponent::{AbsExponent, Q};
pub use fq::{Fq, FqConfig, FqElem};
pub use laurent::{sup_norm, Laurent};
pub use poly::Poly;
pub use scaled::{make_flow_scalars, FlowScalars, ScaledSeries};
