//! Green potentials and Cauchy transforms on the unit disk.
//!
//! The crate evaluates the Green potential of a density g on the unit disk,
//! its Wirtinger derivatives (the Cauchy transform and its conjugate), and
//! the sharp constants that control their Lp -> Lq mapping behavior. Area
//! integrals use the normalized measure dA = (Lebesgue area) / pi, so the
//! disk has mass 1 and the potential u of g satisfies d2u/dz dzbar = g.

pub mod constants;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod norms;
pub mod operators;
pub(crate) mod parallel;
pub mod quadrature;
pub mod series;
pub mod verify;

pub use constants::{
    boundary_moment_quadrature, c_q, c_q_extended, c_q_parts, i_beta, i_beta_quadrature,
    i_beta_uniform_bound, j_beta, j_beta_quadrature, j_beta_uniform_bound, thm1_norm_bound,
    ConstantParameters, ConstantReport,
};
pub use error::{Error, Result};
pub use fields::{FieldFn, FieldMetadata, PolarGrid, ScalarField};
pub use norms::{
    grad_holder_quotient, holder_quotient, linear_fit, lp_norm, lp_norm_annulus,
    lq_norm_of_transform, operator_norm_lower_bound, operator_norm_ratios, transform_grid,
    ExponentPair, GridResolution, HolderReport, LineFit, PairSampler,
};
pub use operators::{
    cauchy_integral, cauchy_transform, conj_cauchy_transform, gradient_modulus, green_potential,
    j0star_transform, mixed_second_fd, wirtinger_fd, GradientModulus,
};
pub use geometry::{
    cauchy_kernel, conj_cauchy_kernel, green_kernel, mobius, pseudo_hyperbolic, DiskPoint,
    KernelValue,
};
pub use quadrature::{
    adaptive_1d, integrate_disk, integrate_disk_real, integrate_plane_split, DiskIntegral,
    DiskIntegrand, LineIntegral,
    QuadratureSpec, SingularitySpec,
};
pub use series::{
    beta_radial_integral, boundary_moment, gamma_ratio, hypergeom, ln_gamma, HypergeomParams,
    SeriesValue,
};
pub use verify::{
    constants_suite, example1_fields, example1_suite, example2_suite, run_suite, thm1_suite,
    thm2_suite, thm3_suite, transform_family, CheckStatus, SuiteCheck, SuiteResult,
};
