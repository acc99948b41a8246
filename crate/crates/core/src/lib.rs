//! Numerical fractional calculus with moduli of continuity.
//!
//! The crate provides Riemann-Liouville fractional integrals and
//! derivatives on uniform grids, the Riesz potential in one and two
//! dimensions, moduli of continuity, Lebesgue / Orlicz / Grand Lebesgue
//! norms, and a harness that checks modulus-of-continuity bounds for these
//! operators against closed-form test functions.

pub mod error;
pub mod fracops;
pub mod gls;
pub mod gridfn;
pub mod harness;
pub mod modulus;
pub mod norms;
pub mod oracle;
pub mod specfun;
pub mod suite;

pub use error::{Error, Result};
pub use fracops::{
    frac_derivative, frac_image_exact, frac_integral, riesz_existence_check, riesz_potential, ExistenceCheck,
    FracOrder, PowerImage, Transform,
};
pub use gls::{default_p_grid, fundamental_function, gls_norm, nu_builder, psi_from_function, GridSup, PsiFunction, PsiTable};
pub use gridfn::{dilate, dilate_onto, sample, ClosedFormFunction, Grid1D, GridFunction, GridFunctionND, Sampled};
pub use modulus::{modulus, modulus_nd, modulus_profile, omega_integral, ModulusProfile};
pub use norms::{
    delta_p, kappa, lp_norm, luxemburg_norm, orlicz_weighted_norm, weighted_norm, young_orlicz, z_constant,
    OrliczParams,
};
pub use specfun::{beta, gamma, log_gamma};
