//! Plane-wave optics of a uniaxial film (optical axis along the surface
//! normal) of thickness d embedded in vacuum.
//!
//! Every z-wavenumber uses the branch Im k_z ≥ 0 (and Re k_z ≥ 0 on the real
//! axis), so evanescent waves decay away from the source plane.
//!
//! The transmission coefficient carries the phase convention in which the
//! transmitted field is referred back to the entrance plane, i.e. it contains
//! the factor e^{i(k_z − k_z,vac)d}.

use num_complex::Complex64;

use crate::dispersion::UniaxialMedium;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square root on the decaying branch: Im ≥ 0, and Re ≥ 0 when Im = 0.
pub fn sqrt_decaying(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

/// In-plane wave: transverse wavenumber κ together with k₀ = ω/c.
///
/// The vacuum z-wavenumber is fixed at construction. The angle constructors
/// compute it without the cancellation in √(k₀² − κ²) near κ = k₀, which
/// the Weyl quadrature relies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseWave {
    pub kappa: f64,
    pub k0: f64,
    kz_vac: Complex64,
}

impl TransverseWave {
    pub fn new(kappa: f64, k0: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::Domain(format!("kappa = {kappa} must be finite and >= 0")));
        }
        if !(k0 > 0.0) || !k0.is_finite() {
            return Err(Error::Domain(format!("k0 = {k0} must be finite and > 0")));
        }
        let kz_vac = sqrt_decaying(Complex64::from(k0 * k0 - kappa * kappa));
        Ok(TransverseWave { kappa, k0, kz_vac })
    }

    /// κ = k₀ sin θ, k_z = k₀ cos θ for θ ∈ [0, π/2].
    pub(crate) fn propagating(k0: f64, theta: f64) -> Self {
        TransverseWave {
            kappa: k0 * theta.sin(),
            k0,
            kz_vac: Complex64::new(k0 * theta.cos(), 0.0),
        }
    }

    /// κ = k₀ cosh u, k_z = i k₀ sinh u for u ≥ 0.
    pub(crate) fn evanescent(k0: f64, u: f64) -> Self {
        TransverseWave {
            kappa: k0 * u.cosh(),
            k0,
            kz_vac: Complex64::new(0.0, k0 * u.sinh()),
        }
    }

    pub fn kz_vacuum(&self) -> Complex64 {
        self.kz_vac
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilmStack {
    pub medium: UniaxialMedium,
    /// Film thickness in m.
    pub thickness: f64,
}

impl FilmStack {
    pub fn new(medium: UniaxialMedium, thickness: f64) -> Result<Self> {
        if !(thickness >= 0.0) || !thickness.is_finite() {
            return Err(Error::Domain(format!("film thickness {thickness} must be >= 0")));
        }
        Ok(FilmStack { medium, thickness })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    S,
    P,
}

/// k_z,vac = √(k₀² − κ²)
pub fn kz_vacuum(w: &TransverseWave) -> Complex64 {
    w.kz_vacuum()
}

/// k_z,o = √(k₀² ε⊥ − κ²)
pub fn kz_ordinary(w: &TransverseWave, eps_perp: Complex64) -> Complex64 {
    sqrt_decaying(w.k0 * w.k0 * eps_perp - w.kappa * w.kappa)
}

/// k_z,e = √(k₀² ε⊥ − κ² ε⊥/ε∥)
pub fn kz_extraordinary(w: &TransverseWave, medium: &UniaxialMedium) -> Result<Complex64> {
    if medium.eps_par == Complex64::new(0.0, 0.0) {
        return Err(Error::pole(format!(
            "extraordinary wavenumber: eps_par = 0 (kappa = {:e})",
            w.kappa
        )));
    }
    let eps_perp = medium.eps_perp;
    Ok(sqrt_decaying(
        w.k0 * w.k0 * eps_perp - w.kappa * w.kappa * eps_perp / medium.eps_par,
    ))
}

/// Vacuum-side and film-side admittance-like factors (a, b) such that the
/// single-interface coefficient is (a − b)/(a + b) and b is the film's
/// z-wavenumber.
fn interface_pair(
    pol: Polarization,
    w: &TransverseWave,
    medium: &UniaxialMedium,
) -> Result<(Complex64, Complex64)> {
    let kz = w.kz_vacuum();
    match pol {
        Polarization::S => Ok((kz, kz_ordinary(w, medium.eps_perp))),
        Polarization::P => Ok((kz * medium.eps_perp, kz_extraordinary(w, medium)?)),
    }
}

/// Below this |k_z d| the slab coefficients are evaluated in the
/// trigonometric form, which has no 0/0 cancellation as k_z → 0.
const THIN_PHASE: f64 = 1.0;

/// sin(x)/x
fn sinc(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Shared denominator 2a cos(bd) − i(a² + b²) sin(bd)/b of the
/// trigonometric form, and sin(bd)/b.
fn thin_terms(a: Complex64, b: Complex64, d: f64) -> (Complex64, Complex64) {
    let x = b * d;
    let s = sinc(x) * d;
    (2.0 * a * x.cos() - I * (a * a + b * b) * s, s)
}

fn check_denominator(den: Complex64, what: &str, kappa: f64) -> Result<()> {
    if den.norm() == 0.0 || !den.re.is_finite() || !den.im.is_finite() {
        return Err(Error::pole(format!("{what} (kappa = {kappa:e})")));
    }
    Ok(())
}

/// Single vacuum/medium interface: R_s = (k_z,vac − k_z,o)/(k_z,vac + k_z,o),
/// R_p = (ε⊥ k_z,vac − k_z,e)/(ε⊥ k_z,vac + k_z,e).
pub fn interface_reflection(
    pol: Polarization,
    w: &TransverseWave,
    medium: &UniaxialMedium,
) -> Result<Complex64> {
    let (a, b) = interface_pair(pol, w, medium)?;
    let den = a + b;
    check_denominator(den, "interface reflection", w.kappa)?;
    Ok((a - b) / den)
}

/// Film transmission t multiplied by e^{i·extra_phase}.
///
/// Folding the outer propagation phase into the single exponent keeps the
/// product finite where e^{−i k_z,vac d} alone would overflow (large κ in
/// hyperbolic media).
pub(crate) fn film_transmission_phased(
    pol: Polarization,
    w: &TransverseWave,
    film: &FilmStack,
    extra_phase: Complex64,
) -> Result<Complex64> {
    let (a, b) = interface_pair(pol, w, &film.medium)?;
    let d = film.thickness;
    if (b * d).norm() < THIN_PHASE {
        let (den, _) = thin_terms(a, b, d);
        check_denominator(den, "film transmission", w.kappa)?;
        let phase = (I * (extra_phase - w.kz_vacuum() * d)).exp();
        return Ok(2.0 * a * phase / den);
    }
    let round_trip = (2.0 * I * b * d).exp();
    let den = (b + a) * (b + a) - (b - a) * (b - a) * round_trip;
    check_denominator(den, "film transmission", w.kappa)?;
    let phase = (I * (b - w.kz_vacuum()) * d + I * extra_phase).exp();
    Ok(4.0 * a * b * phase / den)
}

/// Amplitude transmission coefficient of the film.
///
/// For p polarization the vacuum-side factor is ε⊥ k_z,vac, the same factor
/// that enters R_p; see [`film_transmission_eps_par`] for the variant with
/// ε∥.
pub fn film_transmission(pol: Polarization, w: &TransverseWave, film: &FilmStack) -> Result<Complex64> {
    film_transmission_phased(pol, w, film, Complex64::new(0.0, 0.0))
}

/// p-polarized film transmission with ε∥ in place of ε⊥ in the vacuum-side
/// factor:
/// t_p = 4 ε∥ k_z,e k_z,vac e^{i(k_z,e − k_z,vac)d}
///       / [(k_z,e + ε∥ k_z,vac)² − (k_z,e − ε∥ k_z,vac)² e^{2i k_z,e d}].
///
/// Identical to [`film_transmission`] for isotropic films. For anisotropic
/// films it is not consistent with R_p (it violates |t|² + |r|² = 1 for
/// lossless films), so the Green's-function pipeline does not use it.
pub fn film_transmission_eps_par(w: &TransverseWave, film: &FilmStack) -> Result<Complex64> {
    let kze = kz_extraordinary(w, &film.medium)?;
    let a = film.medium.eps_par * w.kz_vacuum();
    let d = film.thickness;
    let round_trip = (2.0 * I * kze * d).exp();
    let den = (kze + a) * (kze + a) - (kze - a) * (kze - a) * round_trip;
    check_denominator(den, "film transmission", w.kappa)?;
    let phase = (I * (kze - w.kz_vacuum()) * d).exp();
    Ok(4.0 * a * kze * phase / den)
}

/// r = R (1 − e^{2i k_z d}) / (1 − R² e^{2i k_z d}), with k_z,o for s and
/// k_z,e for p.
pub fn film_reflection(pol: Polarization, w: &TransverseWave, film: &FilmStack) -> Result<Complex64> {
    let (a, b) = interface_pair(pol, w, &film.medium)?;
    if (b * film.thickness).norm() < THIN_PHASE {
        let (den, s) = thin_terms(a, b, film.thickness);
        check_denominator(den, "film reflection", w.kappa)?;
        return Ok(-I * (a * a - b * b) * s / den);
    }
    let den_r = a + b;
    check_denominator(den_r, "interface reflection", w.kappa)?;
    let r = (a - b) / den_r;
    let round_trip = (2.0 * I * b * film.thickness).exp();
    let den = 1.0 - r * r * round_trip;
    check_denominator(den, "film reflection", w.kappa)?;
    Ok(r * (1.0 - round_trip) / den)
}
