//! Constrained Hardy quotients as 1D eigenproblems: mode reduction, P1
//! assembly, inertia-bisection eigensolve, refinement traces, and the Lq
//! descent bound.

pub mod assemble;
pub mod eigen;
pub mod lq;
pub mod problem;
pub mod sharp;

pub use assemble::{assemble, SymTridiag, TridiagPair};
pub use eigen::{eigenvalue_count_below, smallest_eigen};
pub use lq::{minimize_lq_quotient, LqBound};
pub use problem::{reduce_mode, Coef, CoefKind, Domain1D, Geometry, ModeProblem, SLProblem1D};
pub use sharp::{sharp_constant, RefinementPlan, SharpEstimate, TraceEntry};
