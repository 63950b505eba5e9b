//! hardylab — sharp Hardy-type constants under spherical-average-zero
//! constraints, with the supporting rearrangement/Lorentz machinery and
//! inequality verification suites.
//!
//! The library is organized around five concerns:
//!
//! * [`grid`], [`profile`], [`weights`], [`modes`], [`quadrature`] — radial
//!   profiles on graded grids and polar-coordinate energies/masses;
//! * [`rearrange`] — exact layer-cake rearrangement, Lorentz norms,
//!   dilations, and tail/head bounds;
//! * [`spectral`] — reduction of mode-restricted quotients to 1D
//!   Sturm–Liouville problems, conforming P1 discretization, the
//!   inertia-bisection eigensolver, refinement traces, and the Lq descent
//!   bound;
//! * [`families`] — the explicit extremizing families and the scaling
//!   transform, with quotient evaluation;
//! * [`verify`] — seeded property suites for the remaining inequalities.
//!
//! All values are immutable after construction and safe to share across
//! threads; sweeps parallelize with deterministic, parameter-ordered
//! output (see [`cli::ordered_parallel_map`]).

// `!(x > y)` is the NaN-rejecting comparison idiom used throughout the
// parameter validation; rewriting it loses the NaN case.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod families;
pub mod grid;
pub mod modes;
pub mod profile;
pub mod quadrature;
pub mod rearrange;
pub mod spectral;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use families::{
    critical_dirichlet_energy, critical_weighted_qnorm, make_family, quotient, transform_u_lambda,
    QuotientReport, TestFamily,
};
pub use grid::{build_grid, two_sided_graded, Grading, Grid};
pub use modes::{unit_sphere_area, AngularMode};
pub use profile::RadialProfile;
pub use quadrature::{integrate, mode_energy, quad_scalar, QuadResult};
pub use rearrange::{symmetrize_radial, BoundSide, LorentzParams, StepFunction};
pub use spectral::{
    assemble, minimize_lq_quotient, reduce_mode, sharp_constant, smallest_eigen, Geometry, LqBound,
    ModeProblem, RefinementPlan, SLProblem1D, SharpEstimate, TraceEntry, TridiagPair,
};
pub use verify::{
    check_hardy_1d, check_interpolation, check_poincare_circle, check_radial_bound, exponent_split,
    holder_conjugate, holder_failure_ratio, holder_slope, InterpolationTriple, SuiteReport,
    TrialConfig,
};
pub use weights::WeightSpec;
