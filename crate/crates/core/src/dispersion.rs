//! Material permittivities: Drude metals, the TiO₂ dispersion formula and the
//! effective-medium description of a metal/dielectric multilayer, plus a
//! bisection search for the characteristic wavelengths (ENZ, ENP, surface
//! plasmon) of those models.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Angular frequency (rad/s) of light with vacuum wavelength `wavelength` (m).
pub fn angular_frequency(wavelength: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength
}

/// Vacuum wavenumber k₀ = 2π/λ (1/m).
pub fn vacuum_wavenumber(wavelength: f64) -> f64 {
    2.0 * PI / wavelength
}

/// Free-electron (Drude) metal parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeParams {
    /// High-frequency background permittivity.
    pub eps_inf: f64,
    /// Plasma frequency in rad/s.
    pub omega_p: f64,
    /// Relaxation time in s.
    pub tau: f64,
}

impl DrudeParams {
    /// Silver with the reduced thin-film relaxation time.
    pub const SILVER: DrudeParams = DrudeParams {
        eps_inf: 3.7,
        omega_p: 1.4e16,
        tau: 0.45e-14,
    };

    /// Silver with the bulk relaxation time.
    pub const SILVER_BULK: DrudeParams = DrudeParams {
        eps_inf: 3.7,
        omega_p: 1.4e16,
        tau: 4e-14,
    };

    pub fn new(eps_inf: f64, omega_p: f64, tau: f64) -> Result<Self> {
        let params = DrudeParams {
            eps_inf,
            omega_p,
            tau,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_inf >= 1.0) {
            return Err(Error::Domain(format!("eps_inf = {} must be >= 1", self.eps_inf)));
        }
        if !(self.omega_p > 0.0) {
            return Err(Error::Domain(format!("omega_p = {} must be > 0", self.omega_p)));
        }
        if !(self.tau > 0.0) {
            return Err(Error::Domain(format!("tau = {} must be > 0", self.tau)));
        }
        Ok(())
    }
}

/// ε(ω) = ε∞ − ωp² / (ω(ω + i/τ)).
pub fn drude_permittivity(omega: f64, params: &DrudeParams) -> Result<Complex64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("angular frequency {omega} must be > 0")));
    }
    let denom = Complex64::new(omega * omega, omega / params.tau);
    Ok(params.eps_inf - params.omega_p * params.omega_p / denom)
}

/// Real permittivity of TiO₂, wavelength in micrometres.
pub fn tio2_permittivity(lambda_um: f64) -> Result<f64> {
    let shifted = lambda_um * lambda_um - 0.0803;
    if !(shifted > 0.0) {
        return Err(Error::Domain(format!(
            "TiO2 formula has a pole at or below lambda = {:.4} um (got {lambda_um})",
            0.0803f64.sqrt()
        )));
    }
    Ok(5.913 + 0.2441 / shifted)
}

/// Permittivity pair of a uniaxial medium whose optical axis is the surface
/// normal. `eps_perp` acts on in-plane fields, `eps_par` along the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniaxialMedium {
    pub eps_perp: Complex64,
    pub eps_par: Complex64,
    /// Vacuum wavelength in m at which the pair was evaluated.
    pub wavelength: f64,
}

impl UniaxialMedium {
    pub fn new(eps_perp: Complex64, eps_par: Complex64, wavelength: f64) -> Result<Self> {
        for (name, eps) in [("eps_perp", eps_perp), ("eps_par", eps_par)] {
            if !(eps.re.is_finite() && eps.im.is_finite()) {
                return Err(Error::Domain(format!("{name} = {eps} is not finite")));
            }
            if eps.im < -1e-12 * eps.norm() {
                return Err(Error::Domain(format!("{name} = {eps} is not passive (Im < 0)")));
            }
        }
        if !(wavelength > 0.0) {
            return Err(Error::Domain(format!("wavelength {wavelength} must be > 0")));
        }
        Ok(UniaxialMedium {
            eps_perp,
            eps_par,
            wavelength,
        })
    }

    pub fn isotropic(eps: Complex64, wavelength: f64) -> Result<Self> {
        Self::new(eps, eps, wavelength)
    }

    pub fn vacuum(wavelength: f64) -> Self {
        UniaxialMedium {
            eps_perp: Complex64::new(1.0, 0.0),
            eps_par: Complex64::new(1.0, 0.0),
            wavelength,
        }
    }

    pub fn is_isotropic(&self) -> bool {
        self.eps_perp == self.eps_par
    }

    pub fn is_vacuum(&self) -> bool {
        self.eps_perp == Complex64::new(1.0, 0.0) && self.eps_par == Complex64::new(1.0, 0.0)
    }

    pub fn band(&self) -> BandKind {
        classify_band(self)
    }

    /// Raises the imaginary part of both components to at least `min_loss`.
    pub fn with_min_loss(mut self, min_loss: f64) -> Self {
        self.eps_perp.im = self.eps_perp.im.max(min_loss);
        self.eps_par.im = self.eps_par.im.max(min_loss);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BandKind {
    /// Re ε∥ < 0 < Re ε⊥
    TypeI,
    /// Re ε⊥ < 0 < Re ε∥
    TypeII,
    Dielectric,
    Metallic,
}

/// An exact zero counts as positive, so the boundary case is `Dielectric`.
pub fn classify_band(medium: &UniaxialMedium) -> BandKind {
    let perp_pos = medium.eps_perp.re >= 0.0 || medium.eps_perp.re.is_nan();
    let par_pos = medium.eps_par.re >= 0.0 || medium.eps_par.re.is_nan();
    match (perp_pos, par_pos) {
        (true, true) => BandKind::Dielectric,
        (true, false) => BandKind::TypeI,
        (false, true) => BandKind::TypeII,
        (false, false) => BandKind::Metallic,
    }
}

fn emt_par_denominator(f: f64, eps_metal: Complex64, eps_dielectric: Complex64) -> Complex64 {
    f * eps_dielectric + (1.0 - f) * eps_metal
}

/// Effective permittivities of a subwavelength metal/dielectric multilayer
/// with metal fill fraction `f`.
pub fn emt_permittivities(
    f: f64,
    eps_metal: Complex64,
    eps_dielectric: Complex64,
    wavelength: f64,
) -> Result<UniaxialMedium> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Domain(format!("fill fraction {f} outside [0, 1]")));
    }
    let eps_perp = f * eps_metal + (1.0 - f) * eps_dielectric;
    let denom = emt_par_denominator(f, eps_metal, eps_dielectric);
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Error::pole(format!(
            "eps_par at lambda = {:.4} nm (epsilon-near-pole condition)",
            wavelength * 1e9
        )));
    }
    let eps_par = eps_metal * eps_dielectric / denom;
    UniaxialMedium::new(eps_perp, eps_par, wavelength)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dielectric {
    Tio2,
    Constant(f64),
}

impl Dielectric {
    pub fn permittivity(&self, wavelength: f64) -> Result<f64> {
        match *self {
            Dielectric::Tio2 => tio2_permittivity(wavelength * 1e6),
            Dielectric::Constant(eps) => Ok(eps),
        }
    }
}

/// A wavelength-dependent film material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Material {
    Vacuum,
    /// Non-dispersive medium.
    Uniaxial { eps_perp: Complex64, eps_par: Complex64 },
    Drude(DrudeParams),
    Emt {
        fill_fraction: f64,
        metal: DrudeParams,
        dielectric: Dielectric,
    },
}

impl Material {
    pub fn isotropic(eps: Complex64) -> Self {
        Material::Uniaxial {
            eps_perp: eps,
            eps_par: eps,
        }
    }

    pub fn medium(&self, wavelength: f64) -> Result<UniaxialMedium> {
        match *self {
            Material::Vacuum => Ok(UniaxialMedium::vacuum(wavelength)),
            Material::Uniaxial { eps_perp, eps_par } => {
                UniaxialMedium::new(eps_perp, eps_par, wavelength)
            }
            Material::Drude(params) => {
                let eps = drude_permittivity(angular_frequency(wavelength), &params)?;
                UniaxialMedium::isotropic(eps, wavelength)
            }
            Material::Emt {
                fill_fraction,
                metal,
                dielectric,
            } => {
                let eps_m = drude_permittivity(angular_frequency(wavelength), &metal)?;
                let eps_d = Complex64::from(dielectric.permittivity(wavelength)?);
                emt_permittivities(fill_fraction, eps_m, eps_d, wavelength)
            }
        }
    }

    pub fn is_isotropic(&self) -> bool {
        match *self {
            Material::Vacuum | Material::Drude(_) => true,
            Material::Uniaxial { eps_perp, eps_par } => eps_perp == eps_par,
            Material::Emt { fill_fraction, .. } => fill_fraction == 0.0 || fill_fraction == 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialKind {
    /// Re ε⊥ = 0
    EnzPerp,
    /// Re of the ε∥ denominator = 0 (the lossless pole of ε∥)
    EnpPar,
    /// Re ε = −1, isotropic media only
    SurfacePlasmon,
}

impl SpecialKind {
    pub fn label(&self) -> &'static str {
        match self {
            SpecialKind::EnzPerp => "ENZ",
            SpecialKind::EnpPar => "ENP",
            SpecialKind::SurfacePlasmon => "SP",
        }
    }
}

/// The function whose sign change defines `kind`, in permittivity units.
pub fn special_condition(material: &Material, kind: SpecialKind, wavelength: f64) -> Result<f64> {
    match kind {
        SpecialKind::EnzPerp => Ok(material.medium(wavelength)?.eps_perp.re),
        SpecialKind::SurfacePlasmon => {
            if !material.is_isotropic() {
                return Err(Error::Unsupported(
                    "surface-plasmon condition requires an isotropic medium".into(),
                ));
            }
            Ok(material.medium(wavelength)?.eps_perp.re + 1.0)
        }
        SpecialKind::EnpPar => match *material {
            Material::Emt {
                fill_fraction,
                metal,
                dielectric,
            } => {
                let eps_m = drude_permittivity(angular_frequency(wavelength), &metal)?;
                let eps_d = Complex64::from(dielectric.permittivity(wavelength)?);
                Ok(emt_par_denominator(fill_fraction, eps_m, eps_d).re)
            }
            _ => Err(Error::Unsupported(
                "epsilon-near-pole search needs an effective-medium multilayer".into(),
            )),
        },
    }
}

/// Bisection for the wavelength (m) in `bracket` where the condition of
/// `kind` changes sign.
pub fn find_special_wavelength(
    material: &Material,
    kind: SpecialKind,
    bracket: (f64, f64),
) -> Result<f64> {
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let not_found = || Error::NotFound {
        condition: kind.label(),
        lo_nm: lo * 1e9,
        hi_nm: hi * 1e9,
    };
    let mut f_lo = special_condition(material, kind, lo)?;
    let f_hi = special_condition(material, kind, hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(not_found());
    }
    // Runs far past the 0.1 nm bracket tolerance so that the condition itself
    // is resolved to well below 1e-6.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = special_condition(material, kind, mid)?;
        if f_mid == 0.0 || f_mid.abs() < 1e-10 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn drude_is_passive(omega in 1e13f64..1e17, eps_inf in 1.0f64..10.0,
                            omega_p in 1e15f64..3e16, tau in 1e-16f64..1e-12) {
            let p = DrudeParams::new(eps_inf, omega_p, tau).unwrap();
            prop_assert!(drude_permittivity(omega, &p).unwrap().im > 0.0);
        }

        #[test]
        fn emt_equal_constituents(f in 0.0f64..=1.0, re in -20.0f64..20.0, im in 0.01f64..5.0) {
            let eps = Complex64::new(re, im);
            let m = emt_permittivities(f, eps, eps, 5e-7).unwrap();
            prop_assert!((m.eps_perp - eps).norm() < 1e-12 * (1.0 + eps.norm()));
            prop_assert!((m.eps_par - eps).norm() < 1e-12 * (1.0 + eps.norm()));
        }

        #[test]
        fn band_partition_is_total(a in -10.0f64..10.0, b in -10.0f64..10.0) {
            let m = UniaxialMedium::new(Complex64::from(a), Complex64::from(b), 5e-7).unwrap();
            let kind = classify_band(&m);
            let expected = match (a >= 0.0, b >= 0.0) {
                (true, true) => BandKind::Dielectric,
                (true, false) => BandKind::TypeI,
                (false, true) => BandKind::TypeII,
                (false, false) => BandKind::Metallic,
            };
            prop_assert_eq!(kind, expected);
        }
    }
}
