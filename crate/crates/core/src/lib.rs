//! Numerical toolkit for critical points of Gaussian random monochromatic waves.
//!
//! The crate is organised in layers:
//!
//! * [`bessel`] evaluates blocks of integer-order Bessel functions `J_l(r)` together
//!   with their first two derivatives by normalised backward recurrence.
//! * [`series`] sums weighted Neumann series `Σ l^{-2s} J_{l+m}(r) J_{l+m'}(r)` directly
//!   and through their large-`r` leading terms.
//! * [`kac_rice`] assembles the covariance structure of the gradient and Hessian of the
//!   wave and integrates the Kac–Rice density, producing the growth constants `κ(s)`.
//! * [`wave`] samples the random wave, locates its critical points and runs the
//!   Monte-Carlo estimators.
//! * [`density`] realises the random density on the circle whose Fourier transform is
//!   the wave, and provides the regularity diagnostics.
//! * [`cli`] is the command-line front end (CSV output, benchmarks, self test).

pub mod bessel;
pub mod cli;
pub mod density;
pub mod error;
pub mod kac_rice;
pub mod quadrature;
pub mod regularity;
pub mod rng;
pub mod series;
pub mod special;
pub mod wave;

pub use bessel::{bessel_block, truncation_order, BesselBlock};
pub use density::{DensityCriticalPoints, DensityRealization, DyadicProfile};
pub use error::{Error, Result};
pub use kac_rice::{
    abs_gaussian_integral, covariance_state, expected_critical_points, kac_rice_integrand,
    kappa_constant, kappa_monotonicity_scan, periodic_average, AbsQuadraticCoeffs,
    CovarianceState, GaussianMethod, KappaResult, Regime,
};
pub use regularity::RegularityModel;
pub use series::{
    arccos_moment, derivative_series, series_asymptotic, series_direct, DerivativeKind,
    LeadingOrder, Method, SeriesSpec, SeriesValue,
};
pub use wave::{CriticalKind, CriticalPoint, CountRecord, SearchParams, WaveSample};
