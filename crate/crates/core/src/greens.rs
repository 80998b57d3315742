//! xx and zz components of the dyadic Green's function for two emitters on
//! the film axis, one at depth |z₁| below the film and its mirror image at
//! z₂ = d + |z₁| above it.
//!
//! The Weyl integrals are reduced to one dimension by averaging over the
//! azimuth of κ (⟨k_x²/κ²⟩ = ⟨k_y²/κ²⟩ = 1/2) and evaluated as
//! ∫₀^∞ dκ/2π f(κ), split at the branch point κ = k₀:
//!
//! * κ = k₀ sin θ on [0, k₀], which absorbs the 1/k_z,vac singularity;
//! * κ = k₀ cosh u on [k₀, κ_max], same purpose on the evanescent side.
//!
//! The single-position value keeps the free-space term only on the
//! propagating segment. Its evanescent part is real and divergent (the bare
//! free-space level shift, absorbed into ω₀), so `Re` of
//! [`g_single`] is the environment-induced part only while `Im` is complete.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layer_optics::{film_reflection, film_transmission_phased, FilmStack, Polarization, TransverseWave};
use crate::quadrature;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    X,
    Z,
}

/// Mirror-symmetric emitter pair across a film occupying 0 ≤ z ≤ d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Distance |z₁| of each emitter from its film surface, in m.
    pub z1: f64,
    /// Film thickness in m.
    pub thickness: f64,
    pub orientation: Orientation,
}

impl Geometry {
    pub fn new(z1: f64, thickness: f64, orientation: Orientation) -> Result<Self> {
        if !(z1 > 0.0) || !z1.is_finite() {
            return Err(Error::Domain(format!("z1 = {z1} must be > 0")));
        }
        if !(thickness >= 0.0) || !thickness.is_finite() {
            return Err(Error::Domain(format!("thickness = {thickness} must be >= 0")));
        }
        Ok(Geometry {
            z1,
            thickness,
            orientation,
        })
    }

    /// Position of the second emitter.
    pub fn z2(&self) -> f64 {
        self.thickness + self.z1
    }

    /// Emitter separation d + 2|z₁|.
    pub fn separation(&self) -> f64 {
        self.thickness + 2.0 * self.z1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GreensKind {
    CrossFilm,
    SinglePosition,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensValue {
    /// Green's-function component in 1/m.
    pub value: Complex64,
    pub kind: GreensKind,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Absolute tolerance on the Green's function, in 1/m.
    pub abs_tol: f64,
    /// Initial truncation of the κ integral, in 1/m.
    pub kappa_max: f64,
    pub max_subdivisions: usize,
}

/// Relative size of the integrand bound at κ_max (times κ_max) below which
/// the tail is considered negligible.
pub const TAIL_THRESHOLD: f64 = 1e-14;
const MAX_TAIL_EXTENSIONS: usize = 8;

impl QuadratureSpec {
    /// rel_tol 1e-8, abs_tol 1e-12·k₀ and κ_max = k₀ + 40/min(2|z₁|, d + 2|z₁|).
    pub fn default_for(k0: f64, geometry: &Geometry) -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-12 * k0,
            kappa_max: default_kappa_max(k0, geometry),
            max_subdivisions: 4000,
        }
    }

    pub fn validate(&self, k0: f64) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::Domain(format!("rel_tol = {} must be > 0", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Domain(format!("abs_tol = {} must be >= 0", self.abs_tol)));
        }
        if !(self.kappa_max > k0) {
            return Err(Error::Domain(format!(
                "kappa_max = {:e} must exceed k0 = {k0:e}",
                self.kappa_max
            )));
        }
        Ok(())
    }
}

pub fn default_kappa_max(k0: f64, geometry: &Geometry) -> f64 {
    let shortest = (2.0 * geometry.z1).min(geometry.separation());
    k0 + 40.0 / shortest
}

fn prefactor(w: &TransverseWave) -> Complex64 {
    w.kappa * I / (2.0 * w.kz_vacuum())
}

/// κ-space integrand of the cross-film component (azimuth already
/// integrated, κ Jacobian included).
pub fn cross_integrand(
    orientation: Orientation,
    w: &TransverseWave,
    film: &FilmStack,
    geometry: &Geometry,
) -> Result<Complex64> {
    let kz = w.kz_vacuum();
    let k0_sq = w.k0 * w.k0;
    // e^{i k_z,vac (d + 2|z₁|)} folded into the transmission phase
    let outer = kz * geometry.separation();
    let tp = film_transmission_phased(Polarization::P, w, film, outer)?;
    let pre = prefactor(w);
    Ok(match orientation {
        Orientation::Z => pre * tp * (w.kappa * w.kappa / k0_sq),
        Orientation::X => {
            let ts = film_transmission_phased(Polarization::S, w, film, outer)?;
            pre * 0.5 * (ts + tp * kz * kz / k0_sq)
        }
    })
}

fn single_free(orientation: Orientation, w: &TransverseWave) -> Complex64 {
    let kz = w.kz_vacuum();
    let k0_sq = w.k0 * w.k0;
    let pre = prefactor(w);
    match orientation {
        Orientation::Z => pre * (w.kappa * w.kappa / k0_sq),
        Orientation::X => pre * (k0_sq + kz * kz) / (2.0 * k0_sq),
    }
}

fn single_reflected(
    orientation: Orientation,
    w: &TransverseWave,
    film: &FilmStack,
    z1: f64,
) -> Result<Complex64> {
    if film.medium.is_vacuum() || film.thickness == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kz = w.kz_vacuum();
    let k0_sq = w.k0 * w.k0;
    let bounce = (2.0 * I * kz * z1).exp();
    let rp = film_reflection(Polarization::P, w, film)?;
    let pre = prefactor(w);
    Ok(match orientation {
        Orientation::Z => pre * (w.kappa * w.kappa / k0_sq) * rp * bounce,
        Orientation::X => {
            let rs = film_reflection(Polarization::S, w, film)?;
            pre * bounce * 0.5 * (rs - rp * kz * kz / k0_sq)
        }
    })
}

/// κ-space integrand of the single-position component: free-space term plus
/// the film reflection term.
pub fn single_integrand(
    orientation: Orientation,
    w: &TransverseWave,
    film: &FilmStack,
    z1: f64,
) -> Result<Complex64> {
    Ok(single_free(orientation, w) + single_reflected(orientation, w, film, z1)?)
}

/// ∫₀^∞ dκ/2π f(κ).
pub fn integrate_weyl<F>(f: F, k0: f64, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(&TransverseWave) -> Result<Complex64>,
{
    spec.validate(k0)?;
    let mapped = |s: f64| -> Result<Complex64> {
        if s <= FRAC_PI_2 {
            let w = TransverseWave::propagating(k0, s);
            Ok(f(&w)? * w.kz_vacuum().re)
        } else {
            let w = TransverseWave::evanescent(k0, s - FRAC_PI_2);
            Ok(f(&w)? * w.kz_vacuum().im)
        }
    };
    let abs_tol = spec.abs_tol * 2.0 * PI;
    let mut u_max = (spec.kappa_max / k0).acosh();
    let mut points = vec![0.0, FRAC_PI_2];
    // a few initial cuts on the evanescent side, where resonances sit just above k₀
    for frac in [0.02, 0.05, 0.1, 0.25, 0.5] {
        points.push(FRAC_PI_2 + frac * u_max);
    }
    points.push(FRAC_PI_2 + u_max);
    let mut total = quadrature::integrate(&mapped, &points, abs_tol, spec.rel_tol, spec.max_subdivisions)?.value;

    let mut kappa_max = spec.kappa_max;
    for extension in 0..=MAX_TAIL_EXTENSIONS {
        let bound = tail_bound(&f, k0, kappa_max)?;
        if bound <= TAIL_THRESHOLD * total.norm() {
            break;
        }
        if extension == MAX_TAIL_EXTENSIONS {
            if bound > abs_tol.max(spec.rel_tol * total.norm()) {
                return Err(Error::Convergence {
                    result: format!("{}", total / (2.0 * PI)),
                    estimate: bound / (2.0 * PI),
                });
            }
            break;
        }
        let next_kappa = 2.0 * kappa_max;
        let next_u = (next_kappa / k0).acosh();
        let tail_tol = abs_tol.max(spec.rel_tol * total.norm());
        let tail = quadrature::integrate(
            &mapped,
            &[FRAC_PI_2 + u_max, FRAC_PI_2 + next_u],
            tail_tol,
            spec.rel_tol,
            spec.max_subdivisions,
        )?;
        total += tail.value;
        kappa_max = next_kappa;
        u_max = next_u;
    }
    Ok(total / (2.0 * PI))
}

/// Crude bound on the remaining tail: largest |f| near κ_max times κ_max.
fn tail_bound<F>(f: &F, k0: f64, kappa_max: f64) -> Result<f64>
where
    F: Fn(&TransverseWave) -> Result<Complex64>,
{
    let mut worst: f64 = 0.0;
    for frac in [1.0, 0.97, 0.94, 0.9] {
        let w = TransverseWave::new(frac * kappa_max, k0)?;
        worst = worst.max(f(&w)?.norm());
    }
    Ok(worst * kappa_max)
}

/// G(r₁, r₂) across the film.
pub fn g_cross(geometry: &Geometry, film: &FilmStack, k0: f64, spec: &QuadratureSpec) -> Result<GreensValue> {
    let orientation = geometry.orientation;
    let value = integrate_weyl(|w| cross_integrand(orientation, w, film, geometry), k0, spec)?;
    Ok(GreensValue {
        value,
        kind: GreensKind::CrossFilm,
        orientation,
    })
}

/// G(r₁, r₁) at the initially excited emitter (see the module docs for the
/// treatment of the free-space real part).
pub fn g_single(geometry: &Geometry, film: &FilmStack, k0: f64, spec: &QuadratureSpec) -> Result<GreensValue> {
    let orientation = geometry.orientation;
    let z1 = geometry.z1;
    let value = integrate_weyl(
        |w| {
            if w.kz_vacuum().im > 0.0 {
                single_reflected(orientation, w, film, z1)
            } else {
                single_integrand(orientation, w, film, z1)
            }
        },
        k0,
        spec,
    )?;
    Ok(GreensValue {
        value,
        kind: GreensKind::SinglePosition,
        orientation,
    })
}

/// Free-space dyadic Green's function (I + ∇∇/k₀²) e^{ik₀R}/(4πR) for an
/// on-axis separation R; xx is transverse, zz longitudinal.
pub fn g_vacuum_closed_form(orientation: Orientation, separation: f64, k0: f64) -> Result<Complex64> {
    if !(separation > 0.0) {
        return Err(Error::Domain(format!(
            "free-space Green's function is singular at separation {separation}"
        )));
    }
    let x = k0 * separation;
    let spherical = (I * x).exp() / (4.0 * PI * separation);
    let inv = 1.0 / x;
    Ok(match orientation {
        Orientation::X => spherical * (1.0 + I * inv - inv * inv),
        Orientation::Z => spherical * 2.0 * (inv * inv - I * inv),
    })
}
