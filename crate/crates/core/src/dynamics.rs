//! Emission rates from Green's-function values, analytic evolution of the
//! symmetric two-emitter density matrix, and concurrence.
//!
//! Rates are in units of the free-space rate γ₀ and times in units of 1/γ₀.
//! The state is kept in a frame rotating at the transition frequency, so
//! ρ_eg carries no optical phase; that phase never enters the concurrence of
//! the states reached from |e₁g₂⟩.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::{GreensKind, GreensValue};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Collective decay matrix of the symmetric pair, normalized to γ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTriple {
    /// Single-emitter decay rate γ_s.
    pub gamma_s: f64,
    /// Collective decay rate γ_c (signed).
    pub gamma_c: f64,
    /// Collective level shift Ω_c (signed).
    pub omega_c: f64,
}

/// Slack allowed on |γ_c| ≤ γ_s, relative to γ_s.
pub const PHYSICALITY_SLACK: f64 = 1e-9;

impl RateTriple {
    pub fn new(gamma_s: f64, gamma_c: f64, omega_c: f64) -> Result<Self> {
        if !(gamma_s > 0.0) || !gamma_s.is_finite() {
            return Err(Error::Domain(format!("gamma_s = {gamma_s} must be > 0")));
        }
        if !gamma_c.is_finite() || !omega_c.is_finite() {
            return Err(Error::Domain("collective rates must be finite".into()));
        }
        if gamma_c.abs() > gamma_s * (1.0 + PHYSICALITY_SLACK) {
            return Err(Error::Physicality { gamma_s, gamma_c });
        }
        Ok(RateTriple {
            gamma_s,
            gamma_c,
            omega_c,
        })
    }
}

/// γ_s = (6π/k₀) Im G₁₁, γ_c = (6π/k₀) Im G₁₂, Ω_c = −(6π/k₀) Re G₁₂.
pub fn rates_from_greens(single: &GreensValue, cross: &GreensValue, k0: f64) -> Result<RateTriple> {
    if single.kind != GreensKind::SinglePosition || cross.kind != GreensKind::CrossFilm {
        return Err(Error::Domain("expected a single-position and a cross-film value".into()));
    }
    if single.orientation != cross.orientation {
        return Err(Error::Domain("orientations of the two Green's values differ".into()));
    }
    let scale = 6.0 * PI / k0;
    RateTriple::new(
        scale * single.value.im,
        scale * cross.value.im,
        -scale * cross.value.re,
    )
}

/// Density matrix restricted to the elements reachable by the symmetric
/// dynamics, in the collective basis {|e⟩, |s⟩, |a⟩, |g⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    pub rho_ee: f64,
    pub rho_ss: f64,
    pub rho_aa: f64,
    pub rho_gg: f64,
    /// ⟨a|ρ|s⟩
    pub rho_as: Complex64,
    /// ⟨e|ρ|g⟩
    pub rho_eg: Complex64,
}

impl TwoQubitState {
    /// |e₁g₂⟩ = (|s⟩ + |a⟩)/√2.
    pub fn excited_ground() -> Self {
        TwoQubitState {
            rho_ee: 0.0,
            rho_ss: 0.5,
            rho_aa: 0.5,
            rho_gg: 0.0,
            rho_as: Complex64::new(0.5, 0.0),
            rho_eg: ZERO,
        }
    }

    pub fn both_excited() -> Self {
        TwoQubitState {
            rho_ee: 1.0,
            rho_ss: 0.0,
            rho_aa: 0.0,
            rho_gg: 0.0,
            rho_as: ZERO,
            rho_eg: ZERO,
        }
    }

    pub fn population_sum(&self) -> f64 {
        self.rho_ee + self.rho_ss + self.rho_aa + self.rho_gg
    }

    pub fn validate(&self) -> Result<()> {
        let pops = [self.rho_ee, self.rho_ss, self.rho_aa, self.rho_gg];
        if pops.iter().any(|p| !(-1e-12..=1.0 + 1e-12).contains(p)) {
            return Err(Error::InvalidState(format!("populations {pops:?} outside [0, 1]")));
        }
        if (self.population_sum() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "populations sum to {}",
                self.population_sum()
            )));
        }
        Ok(())
    }

    /// Matrix in the product basis {|e₁e₂⟩, |e₁g₂⟩, |g₁e₂⟩, |g₁g₂⟩}.
    pub fn to_product(&self) -> ProductDensityMatrix {
        let (ss, aa) = (Complex64::from(self.rho_ss), Complex64::from(self.rho_aa));
        let r_as = self.rho_as;
        let r_sa = self.rho_as.conj();
        let mut m = Matrix4::<Complex64>::zeros();
        m[(0, 0)] = Complex64::from(self.rho_ee);
        m[(3, 3)] = Complex64::from(self.rho_gg);
        m[(0, 3)] = self.rho_eg;
        m[(3, 0)] = self.rho_eg.conj();
        m[(1, 1)] = 0.5 * (ss + aa + r_as + r_sa);
        m[(1, 2)] = 0.5 * (ss - aa + r_as - r_sa);
        m[(2, 1)] = 0.5 * (ss - aa - r_as + r_sa);
        m[(2, 2)] = 0.5 * (ss + aa - r_as - r_sa);
        ProductDensityMatrix(m)
    }
}

/// Two-qubit density matrix in the product basis
/// {|e₁e₂⟩, |e₁g₂⟩, |g₁e₂⟩, |g₁g₂⟩}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductDensityMatrix(pub Matrix4<Complex64>);

impl ProductDensityMatrix {
    pub fn pure(amplitudes: [Complex64; 4]) -> Self {
        let v = nalgebra::Vector4::from(amplitudes);
        ProductDensityMatrix(v * v.adjoint())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrencePoint {
    /// Time in units of 1/γ₀.
    pub t: f64,
    pub c: f64,
}

/// Below this |γ_s ∓ γ_c|/γ_s the degenerate branch uses its analytic limit.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// (e^{−4γ_s t} − e^{−(4γ_s − 2δ)t}) / δ without cancellation or overflow.
fn feeding_term(gamma_s: f64, delta: f64, t: f64) -> f64 {
    let x = 2.0 * delta * t;
    if x.abs() > 0.5 {
        ((-4.0 * gamma_s * t).exp() - (-(4.0 * gamma_s - 2.0 * delta) * t).exp()) / delta
    } else {
        let ratio = if x == 0.0 || delta.abs() < DEGENERACY_THRESHOLD * gamma_s {
            // analytic limit of expm1(x)/x
            1.0 + x / 2.0 + x * x / 6.0
        } else {
            x.exp_m1() / x
        };
        -(-4.0 * gamma_s * t).exp() * 2.0 * t * ratio
    }
}

/// Analytic solution of the symmetric master equation.
pub fn evolve(rates: &RateTriple, rho0: &TwoQubitState, t: f64) -> Result<TwoQubitState> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time {t} must be >= 0")));
    }
    let RateTriple {
        gamma_s: gs,
        gamma_c: gc,
        omega_c,
    } = *rates;
    let rho_ee = rho0.rho_ee * (-4.0 * gs * t).exp();
    let rho_eg = rho0.rho_eg * (-2.0 * gs * t).exp();
    let rho_as = rho0.rho_as * (Complex64::new(-2.0 * gs, 2.0 * omega_c) * t).exp();
    let rho_aa = rho0.rho_aa * (-2.0 * (gs - gc) * t).exp()
        - (gs - gc) * rho0.rho_ee * feeding_term(gs, gs + gc, t);
    let rho_ss = rho0.rho_ss * (-2.0 * (gs + gc) * t).exp()
        - (gs + gc) * rho0.rho_ee * feeding_term(gs, gs - gc, t);
    let rho_gg = 1.0 - rho_ee - rho_ss - rho_aa;
    Ok(TwoQubitState {
        rho_ee,
        rho_ss,
        rho_aa,
        rho_gg,
        rho_as,
        rho_eg,
    })
}

/// C(t) = e^{−2γ_s t} √(sinh²(2γ_c t) + sin²(2Ω_c t)) for the pair started
/// in |e₁g₂⟩.
pub fn concurrence_closed_form(rates: &RateTriple, t: f64) -> ConcurrencePoint {
    let gs = rates.gamma_s;
    let gc = rates.gamma_c.abs();
    // e^{−2γ_s t} sinh(2|γ_c| t), written to stay finite for large t
    let hyperbolic = 0.5 * ((2.0 * (gc - gs) * t).exp() - (-2.0 * (gc + gs) * t).exp());
    let oscillating = (-2.0 * gs * t).exp() * (2.0 * rates.omega_c * t).sin();
    let c = hyperbolic.hypot(oscillating);
    ConcurrencePoint {
        t,
        c: c.clamp(0.0, 1.0),
    }
}

/// Large-time approximation ½ e^{2(|γ_c| − γ_s)t}; only meaningful once
/// |γ_c| t ≫ 1.
pub fn concurrence_asymptotic(rates: &RateTriple, t: f64) -> ConcurrencePoint {
    ConcurrencePoint {
        t,
        c: 0.5 * (2.0 * (rates.gamma_c.abs() - rates.gamma_s) * t).exp(),
    }
}

/// γ_c² + Ω_c², proportional to |G₁₂|².
pub fn transmission_proxy(rates: &RateTriple) -> f64 {
    rates.gamma_c * rates.gamma_c + rates.omega_c * rates.omega_c
}

fn spin_flip() -> Matrix4<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let sigma_y = [[ZERO, -i], [i, ZERO]];
    Matrix4::from_fn(|r, c| sigma_y[r / 2][c / 2] * sigma_y[r % 2][c % 2])
}

/// Wootters concurrence max(0, √λ₁ − √λ₂ − √λ₃ − √λ₄), λᵢ the eigenvalues
/// of ρ ρ̃ with ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
///
/// The √λᵢ are taken as the singular values of Lᵀ(σ_y⊗σ_y)L, where ρ = LL†.
/// Square roots of the eigenvalues of ρ ρ̃ itself lose half the digits
/// whenever ρ ρ̃ has a (defective) zero eigenvalue, which is the generic case
/// for the states produced by [`evolve`].
pub fn wootters_concurrence(rho: &ProductDensityMatrix) -> Result<f64> {
    let m = &rho.0;
    let hermitian_defect = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if hermitian_defect > 1e-9 {
        return Err(Error::InvalidState(format!(
            "density matrix is not Hermitian (defect {hermitian_defect:e})"
        )));
    }
    let trace = m.trace();
    if (trace - 1.0).norm() > 1e-9 {
        return Err(Error::InvalidState(format!("trace is {trace}")));
    }
    let hermitian = (m + m.adjoint()).scale(0.5);
    let eigen = hermitian.symmetric_eigen();
    let mut sqrt_weights = [0.0; 4];
    for (slot, &w) in sqrt_weights.iter_mut().zip(eigen.eigenvalues.iter()) {
        if w < -1e-12 {
            return Err(Error::InvalidState(format!("negative eigenvalue {w} of rho")));
        }
        *slot = w.max(0.0).sqrt();
    }
    let mut l = eigen.eigenvectors;
    for (j, s) in sqrt_weights.iter().enumerate() {
        l.column_mut(j).scale_mut(*s);
    }
    let tau = l.transpose() * spin_flip() * l;
    let mut roots: Vec<f64> = tau.singular_values().iter().copied().collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}
