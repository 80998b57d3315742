//! Entanglement of two two-level emitters placed on opposite sides of a thin
//! metallic or hyperbolic film.
//!
//! The pipeline runs material model → film coefficients → Weyl-integral
//! Green's functions → collective rates → analytic density-matrix evolution
//! and concurrence:
//!
//! * [`dispersion`]: Drude, TiO₂ and effective-medium permittivities; ENZ,
//!   ENP and surface-plasmon wavelengths.
//! * [`layer_optics`]: wavenumbers and s/p film coefficients.
//! * [`greens`]: cross-film and single-position Green's functions.
//! * [`dynamics`]: rates, evolution, concurrence.
//! * [`sweep`]: configuration, wavelength sweeps and CSV output.

// `!(x > 0.0)` style checks deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod dynamics;
pub mod error;
pub mod greens;
pub mod layer_optics;
pub mod quadrature;
pub mod sweep;

pub use error::{Error, Result};
