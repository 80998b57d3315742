//! Python bindings: configuration-driven sweeps plus the rate and
//! concurrence primitives.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qubit_film::dispersion::{self, vacuum_wavenumber, DrudeParams, Material, SpecialKind};
use qubit_film::dynamics::{self, ProductDensityMatrix, TwoQubitState};
use qubit_film::greens::{self, Orientation};
use qubit_film::sweep::{self, SweepConfig};
use qubit_film::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Unsupported(_) | Error::InvalidState(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Collective rates in units of the free-space rate γ₀.
#[pyclass(name = "RateTriple", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyRateTriple {
    inner: dynamics::RateTriple,
}

#[pymethods]
impl PyRateTriple {
    #[new]
    fn new(gamma_s: f64, gamma_c: f64, omega_c: f64) -> PyResult<Self> {
        let inner = dynamics::RateTriple::new(gamma_s, gamma_c, omega_c).map_err(to_py)?;
        Ok(PyRateTriple { inner })
    }

    #[getter]
    fn gamma_s(&self) -> f64 {
        self.inner.gamma_s
    }

    #[getter]
    fn gamma_c(&self) -> f64 {
        self.inner.gamma_c
    }

    #[getter]
    fn omega_c(&self) -> f64 {
        self.inner.omega_c
    }

    /// C(t) for the initial state |e₁g₂⟩, t in units of 1/γ₀.
    fn concurrence(&self, t: f64) -> f64 {
        dynamics::concurrence_closed_form(&self.inner, t).c
    }

    fn concurrence_asymptotic(&self, t: f64) -> f64 {
        dynamics::concurrence_asymptotic(&self.inner, t).c
    }

    fn transmission_proxy(&self) -> f64 {
        dynamics::transmission_proxy(&self.inner)
    }

    /// Density matrix of the evolved |e₁g₂⟩ in the product basis
    /// {|e₁e₂⟩, |e₁g₂⟩, |g₁e₂⟩, |g₁g₂⟩}, as a nested list.
    fn evolve_product(&self, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
        let state = dynamics::evolve(&self.inner, &TwoQubitState::excited_ground(), t).map_err(to_py)?;
        let m = state.to_product().0;
        Ok((0..4).map(|r| (0..4).map(|c| m[(r, c)]).collect()).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "RateTriple(gamma_s={}, gamma_c={}, omega_c={})",
            self.inner.gamma_s, self.inner.gamma_c, self.inner.omega_c
        )
    }
}

type RateRow = (f64, f64, f64, f64, f64);
type MapTables = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

/// Validated sweep configuration.
#[pyclass(name = "Config", frozen)]
struct PyConfig {
    inner: SweepConfig,
}

#[pymethods]
impl PyConfig {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyConfig {
            inner: sweep::parse_config(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(PyConfig {
            inner: sweep::load_config(&path).map_err(to_py)?,
        })
    }

    fn lambda_grid_nm(&self) -> Vec<f64> {
        self.inner.lambda_grid_nm()
    }

    fn time_grid(&self) -> Vec<f64> {
        self.inner.time_grid()
    }

    /// Rates at a single wavelength in nm.
    fn rates(&self, py: Python<'_>, lambda_nm: f64) -> PyResult<PyRateTriple> {
        let material = self.inner.material();
        let inner = py
            .detach(|| sweep::rates_at(&self.inner, &material, lambda_nm))
            .map_err(to_py)?;
        Ok(PyRateTriple { inner })
    }

    /// Rows of (lambda_nm, gamma_s, gamma_c, omega_c, transmission_proxy);
    /// failed wavelengths carry NaN.
    fn rate_spectrum(&self, py: Python<'_>) -> PyResult<Vec<RateRow>> {
        let rows = py.detach(|| sweep::run_rate_spectrum(&self.inner)).map_err(to_py)?;
        Ok(rows
            .iter()
            .map(|r| (r.lambda_nm, r.gamma_s, r.gamma_c, r.omega_c, r.transmission_proxy))
            .collect())
    }

    /// (lambdas_nm, times, C) with C[i][j] = C(λᵢ, tⱼ).
    fn concurrence_map(&self, py: Python<'_>) -> PyResult<MapTables> {
        let map = py.detach(|| sweep::run_concurrence_map(&self.inner)).map_err(to_py)?;
        let rows = (0..map.lambdas_nm.len()).map(|i| map.column(i).to_vec()).collect();
        Ok((map.lambdas_nm.clone(), map.times.clone(), rows))
    }

    /// (label, lambda_nm) for each characteristic wavelength that was found.
    fn special_wavelengths(&self) -> Vec<(String, f64)> {
        sweep::run_special_wavelengths(&self.inner)
            .into_iter()
            .filter_map(|(kind, r)| r.ok().map(|l| (kind.label().to_string(), l)))
            .collect()
    }
}

/// Drude permittivity of silver (or the given parameters) at a wavelength in nm.
#[pyfunction]
#[pyo3(signature = (lambda_nm, eps_inf=3.7, omega_p=1.4e16, tau=0.45e-14))]
fn drude_permittivity(lambda_nm: f64, eps_inf: f64, omega_p: f64, tau: f64) -> PyResult<Complex64> {
    let params = DrudeParams::new(eps_inf, omega_p, tau).map_err(to_py)?;
    dispersion::drude_permittivity(dispersion::angular_frequency(lambda_nm * 1e-9), &params).map_err(to_py)
}

/// (eps_perp, eps_par) of the Ag/TiO₂ multilayer.
#[pyfunction]
#[pyo3(signature = (lambda_nm, fill_fraction=0.35))]
fn emt_permittivities(lambda_nm: f64, fill_fraction: f64) -> PyResult<(Complex64, Complex64)> {
    let material = Material::Emt {
        fill_fraction,
        metal: DrudeParams::SILVER,
        dielectric: dispersion::Dielectric::Tio2,
    };
    let m = material.medium(lambda_nm * 1e-9).map_err(to_py)?;
    Ok((m.eps_perp, m.eps_par))
}

/// Wavelength in nm of "enz", "enp" or "sp" for silver or the multilayer
/// ("hmm"), searched within [lo_nm, hi_nm].
#[pyfunction]
#[pyo3(signature = (film, condition, lo_nm, hi_nm, fill_fraction=0.35))]
fn special_wavelength(film: &str, condition: &str, lo_nm: f64, hi_nm: f64, fill_fraction: f64) -> PyResult<f64> {
    let material = match film {
        "silver" => Material::Drude(DrudeParams::SILVER),
        "hmm" => Material::Emt {
            fill_fraction,
            metal: DrudeParams::SILVER,
            dielectric: dispersion::Dielectric::Tio2,
        },
        other => return Err(PyValueError::new_err(format!("unknown film {other:?}"))),
    };
    let kind = match condition {
        "enz" => SpecialKind::EnzPerp,
        "enp" => SpecialKind::EnpPar,
        "sp" => SpecialKind::SurfacePlasmon,
        other => return Err(PyValueError::new_err(format!("unknown condition {other:?}"))),
    };
    dispersion::find_special_wavelength(&material, kind, (lo_nm * 1e-9, hi_nm * 1e-9))
        .map(|l| l * 1e9)
        .map_err(to_py)
}

/// Wootters concurrence of a 4×4 density matrix in the product basis.
#[pyfunction]
fn wootters_concurrence(rho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    if rho.len() != 4 || rho.iter().any(|r| r.len() != 4) {
        return Err(PyValueError::new_err("rho must be 4x4"));
    }
    let m = product_matrix(&rho);
    dynamics::wootters_concurrence(&m).map_err(to_py)
}

fn product_matrix(rho: &[Vec<Complex64>]) -> ProductDensityMatrix {
    let mut m = TwoQubitState::excited_ground().to_product();
    for (r, row) in rho.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m.0[(r, c)] = *v;
        }
    }
    m
}

/// Free-space Green's function component ("x" or "z") at separation R (nm).
#[pyfunction]
fn vacuum_greens(orientation: &str, separation_nm: f64, lambda_nm: f64) -> PyResult<Complex64> {
    let o = match orientation {
        "x" => Orientation::X,
        "z" => Orientation::Z,
        other => return Err(PyValueError::new_err(format!("unknown orientation {other:?}"))),
    };
    greens::g_vacuum_closed_form(o, separation_nm * 1e-9, vacuum_wavenumber(lambda_nm * 1e-9)).map_err(to_py)
}

#[pymodule]
fn qubit_film_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRateTriple>()?;
    m.add_class::<PyConfig>()?;
    m.add_function(wrap_pyfunction!(drude_permittivity, m)?)?;
    m.add_function(wrap_pyfunction!(emt_permittivities, m)?)?;
    m.add_function(wrap_pyfunction!(special_wavelength, m)?)?;
    m.add_function(wrap_pyfunction!(wootters_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(vacuum_greens, m)?)?;
    Ok(())
}
