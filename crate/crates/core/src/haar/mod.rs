//! Balls, coset grids and exact Haar measure on F^d, normalized so that the
//! closed unit ball has measure 1.

pub mod affine;
pub mod ball;
pub mod measure;

pub use affine::{affine_eval, strip_measure, sup_linear_on_ball, union_measure, BallClass, FracAffine};
pub use ball::{ceil_log, exact_measure_of, grid_report_tsv, CellGrid, ConstancyCert, UltraBall};
pub use measure::ExactMeasure;
