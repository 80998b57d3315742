//! Reference implementations shared by the integration tests. None of these
//! call into the library's numerics.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qubit_film::dynamics::RateTriple;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

fn branch_sqrt(z: Complex64) -> Complex64 {
    let w = z.sqrt();
    if w.im < 0.0 || (w.im == 0.0 && w.re < 0.0) {
        -w
    } else {
        w
    }
}

/// Transfer-matrix solution for an isotropic slab of permittivity `eps` and
/// thickness `d` in vacuum. Returns (t, r) with t referred to the entrance
/// plane, i.e. the transmitted amplitude at z = d times e^{-i kz,vac d}.
///
/// Thick layers (|k_z d| ≥ 1) use interface and propagation matrices, in
/// which q₀ ± q₁ appear as single sums and stay accurate near surface-mode
/// poles. Thin layers use the characteristic (Abelès) matrix, which has no
/// 0/0 as k_z → 0.
pub fn slab_transfer_matrix(p_polarized: bool, eps: Complex64, k0: f64, kappa: f64, d: f64) -> (Complex64, Complex64) {
    let kz0 = branch_sqrt(Complex64::from(k0 * k0 - kappa * kappa));
    let kz1 = branch_sqrt(eps * k0 * k0 - kappa * kappa);
    // Tangential-field admittances.
    let (q0, q1) = if p_polarized { (kz0, kz1 / eps) } else { (kz0, kz1) };
    let delta = kz1 * d;
    let (t, r) = if delta.norm() >= 1.0 {
        interface_matrices(q0, q1, delta)
    } else {
        characteristic_matrix(q0, q1, delta)
    };
    (t * (-I * kz0 * d).exp(), r)
}

fn mat_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// (A₀, B₀) = D₀⁻¹ D₁ P D₁⁻¹ D₀ (t', 0) with D = [[1, 1], [q, −q]] and
/// P = diag(e^{−iδ}, e^{iδ}); all factors scaled to stay O(1).
fn interface_matrices(q0: Complex64, q1: Complex64, delta: Complex64) -> (Complex64, Complex64) {
    // 2q₀ D₀⁻¹ D₁ and 2q₁ D₁⁻¹ D₀
    let enter = [[q0 + q1, q0 - q1], [q0 - q1, q0 + q1]];
    let leave = [[q1 + q0, q1 - q0], [q1 - q0, q1 + q0]];
    // e^{iδ} P
    let prop = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), (2.0 * I * delta).exp()]];
    let m = mat_mul(mat_mul(enter, prop), leave);
    let t = 4.0 * q0 * q1 * (I * delta).exp() / m[0][0];
    (t, m[1][0] / m[0][0])
}

/// Abelès matrix [[cos δ, −i sin δ/q₁], [−i q₁ sin δ, cos δ]], scaled by
/// 2e^{iδ} so that no entry grows like e^{|Im δ|}.
fn characteristic_matrix(q0: Complex64, q1: Complex64, delta: Complex64) -> (Complex64, Complex64) {
    let scale = (I * delta).exp() * 2.0;
    let (c, s) = (delta.cos() * scale, delta.sin() * scale);
    let m11 = c;
    let m12 = -I * s / q1;
    let m21 = -I * q1 * s;
    let m22 = c;
    let a = (m11 + m12 * q0) * q0;
    let b = m21 + m22 * q0;
    let r = (a - b) / (a + b);
    let t = 2.0 * q0 * scale / (a + b);
    (t, r)
}

/// Fixed-step RK4 integration of the collective-basis master equations
/// for (ρ_ee, ρ_ss, ρ_aa, ρ_as) up to time `t`.
pub fn rk4_master(rates: &RateTriple, init: [Complex64; 4], t: f64, steps: usize) -> [Complex64; 4] {
    let (gs, gc, oc) = (rates.gamma_s, rates.gamma_c, rates.omega_c);
    let rhs = |y: [Complex64; 4]| -> [Complex64; 4] {
        [
            -4.0 * gs * y[0],
            -2.0 * (y[1] - y[0]) * (gs + gc),
            -2.0 * (y[2] - y[0]) * (gs - gc),
            -2.0 * y[3] * (gs - I * oc),
        ]
    };
    let add = |y: [Complex64; 4], k: [Complex64; 4], h: f64| -> [Complex64; 4] {
        [y[0] + k[0] * h, y[1] + k[1] * h, y[2] + k[2] * h, y[3] + k[3] * h]
    };
    let h = t / steps as f64;
    let mut y = init;
    for _ in 0..steps {
        let k1 = rhs(y);
        let k2 = rhs(add(y, k1, h / 2.0));
        let k3 = rhs(add(y, k2, h / 2.0));
        let k4 = rhs(add(y, k3, h));
        for i in 0..4 {
            y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
        }
    }
    y
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// γ_s ∈ [0.1, 50], |γ_c| ≤ γ_s, |Ω_c| ≤ 100.
pub fn random_rates(rng: &mut ChaCha8Rng) -> RateTriple {
    let gamma_s = rng.gen_range(0.1..50.0);
    RateTriple {
        gamma_s,
        gamma_c: rng.gen_range(-1.0..=1.0) * gamma_s,
        omega_c: rng.gen_range(-100.0..100.0),
    }
}

/// Free-space dyadic Green's function on the axis of separation, written out
/// from (I + ∇∇/k²) e^{ikR}/(4πR): transverse (xx) and longitudinal (zz).
pub fn free_dyadic(transverse: bool, r: f64, k0: f64) -> Complex64 {
    let x = k0 * r;
    let g = (I * x).exp() / (4.0 * std::f64::consts::PI * r);
    if transverse {
        g * (1.0 + I / x - 1.0 / (x * x))
    } else {
        g * 2.0 * (1.0 / (x * x) - I / x)
    }
}
