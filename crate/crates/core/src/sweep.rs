//! Configuration, wavelength × time sweeps and CSV output.
//!
//! Rates are in units of the free-space emission rate γ₀ and times in units
//! of 1/γ₀. Wavelength points are computed independently and in parallel;
//! results are collected in grid order, so output does not depend on the
//! worker count.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{vacuum_wavenumber, Dielectric, DrudeParams, Material, SpecialKind};
use crate::dynamics::{concurrence_closed_form, rates_from_greens, transmission_proxy, RateTriple};
use crate::error::{Error, Result};
use crate::greens::{g_cross, g_single, Geometry, Orientation, QuadratureSpec};
use crate::layer_optics::FilmStack;

/// Floor applied to Im ε of non-vacuum films so that lossless media do not
/// put guided-mode poles exactly on the integration path.
pub const MIN_LOSS: f64 = 1e-9;

pub const RATE_HEADER: &str = "lambda_nm,gamma_s,gamma_c,omega_c,transmission_proxy";
pub const MAP_HEADER: &str = "lambda_nm,t_gamma0,concurrence";
pub const SPECIAL_HEADER: &str = "condition,lambda_nm";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub geometry: GeometryConfig,
    pub film: FilmConfig,
    #[serde(default)]
    pub sweep: GridConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(default = "default_z1_nm")]
    pub z1_nm: f64,
    #[serde(default = "default_d_nm")]
    pub d_nm: f64,
    #[serde(default = "default_orientation")]
    pub orientation: Orientation,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            z1_nm: default_z1_nm(),
            d_nm: default_d_nm(),
            orientation: default_orientation(),
        }
    }
}

fn default_z1_nm() -> f64 {
    10.0
}
fn default_d_nm() -> f64 {
    10.0
}
fn default_orientation() -> Orientation {
    Orientation::X
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeConfig {
    #[serde(default = "default_eps_inf")]
    pub eps_inf: f64,
    #[serde(default = "default_omega_p")]
    pub omega_p: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
}

impl Default for DrudeConfig {
    fn default() -> Self {
        DrudeConfig {
            eps_inf: default_eps_inf(),
            omega_p: default_omega_p(),
            tau: default_tau(),
        }
    }
}

fn default_eps_inf() -> f64 {
    DrudeParams::SILVER.eps_inf
}
fn default_omega_p() -> f64 {
    DrudeParams::SILVER.omega_p
}
fn default_tau() -> f64 {
    DrudeParams::SILVER.tau
}

impl From<DrudeConfig> for DrudeParams {
    fn from(c: DrudeConfig) -> Self {
        DrudeParams {
            eps_inf: c.eps_inf,
            omega_p: c.omega_p,
            tau: c.tau,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmtConfig {
    #[serde(default = "default_fill_fraction")]
    pub fill_fraction: f64,
    #[serde(default)]
    pub metal: DrudeConfig,
    /// Use the TiO₂ dispersion formula for the dielectric layers; otherwise
    /// `dielectric_eps` is required.
    #[serde(default = "default_tio2")]
    pub tio2: bool,
    #[serde(default)]
    pub dielectric_eps: Option<f64>,
}

fn default_fill_fraction() -> f64 {
    0.35
}
fn default_tio2() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FilmConfig {
    Vacuum,
    Drude(DrudeConfig),
    Emt(EmtConfig),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Defaults to 260 nm for metals and vacuum, 350 nm for multilayers.
    pub lambda_min_nm: Option<f64>,
    /// Defaults to 420 nm for metals and vacuum, 650 nm for multilayers.
    pub lambda_max_nm: Option<f64>,
    pub lambda_count: Option<usize>,
    /// Largest time, in units of 1/γ₀.
    pub t_max_gamma0: Option<f64>,
    pub t_count: Option<usize>,
    /// Worker threads; all available cores when absent.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    /// Absolute tolerance in units of k₀.
    #[serde(default = "default_abs_tol_k0")]
    pub abs_tol_k0: f64,
    /// Initial κ truncation in units of k₀; derived from the geometry when absent.
    #[serde(default)]
    pub kappa_max_k0: Option<f64>,
    #[serde(default = "default_max_subdivisions")]
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: default_rel_tol(),
            abs_tol_k0: default_abs_tol_k0(),
            kappa_max_k0: None,
            max_subdivisions: default_max_subdivisions(),
        }
    }
}

fn default_rel_tol() -> f64 {
    1e-8
}
fn default_abs_tol_k0() -> f64 {
    1e-12
}
fn default_max_subdivisions() -> usize {
    4000
}

/// Output files; a missing entry means standard output.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub rates: Option<PathBuf>,
    pub concurrence: Option<PathBuf>,
    pub special_wavelengths: Option<PathBuf>,
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn check(ok: bool, field: &str, msg: impl std::fmt::Display) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid(field, msg))
    }
}

fn check_drude(prefix: &str, d: &DrudeConfig) -> Result<()> {
    check(d.eps_inf >= 1.0, &format!("{prefix}.eps_inf"), format!("must be >= 1, got {}", d.eps_inf))?;
    check(
        d.omega_p > 0.0 && d.omega_p.is_finite(),
        &format!("{prefix}.omega_p"),
        format!("must be > 0, got {}", d.omega_p),
    )?;
    check(
        d.tau > 0.0 && d.tau.is_finite(),
        &format!("{prefix}.tau"),
        format!("must be > 0, got {}", d.tau),
    )
}

/// Parses and validates a JSON configuration.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let config: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<SweepConfig> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        check(
            g.z1_nm > 0.0 && g.z1_nm.is_finite(),
            "geometry.z1_nm",
            format!("must be > 0, got {}", g.z1_nm),
        )?;
        check(
            g.d_nm >= 0.0 && g.d_nm.is_finite(),
            "geometry.d_nm",
            format!("must be >= 0, got {}", g.d_nm),
        )?;
        match &self.film {
            FilmConfig::Vacuum => {}
            FilmConfig::Drude(d) => check_drude("film.drude", d)?,
            FilmConfig::Emt(e) => {
                check(
                    (0.0..=1.0).contains(&e.fill_fraction),
                    "film.emt.fill_fraction",
                    format!("must lie in [0, 1], got {}", e.fill_fraction),
                )?;
                check_drude("film.emt.metal", &e.metal)?;
                match (e.tio2, e.dielectric_eps) {
                    (true, Some(_)) => {
                        return Err(invalid("film.emt.dielectric_eps", "must be absent when tio2 is true"))
                    }
                    (false, None) => {
                        return Err(invalid("film.emt.dielectric_eps", "required when tio2 is false"))
                    }
                    (false, Some(eps)) => check(
                        eps > 0.0 && eps.is_finite(),
                        "film.emt.dielectric_eps",
                        format!("must be > 0, got {eps}"),
                    )?,
                    (true, None) => {}
                }
            }
        }
        let (lo, hi) = self.lambda_range_nm();
        check(lo > 0.0 && lo.is_finite(), "sweep.lambda_min_nm", format!("must be > 0, got {lo}"))?;
        check(
            hi > lo && hi.is_finite(),
            "sweep.lambda_max_nm",
            format!("must exceed lambda_min_nm = {lo}, got {hi}"),
        )?;
        check(
            self.lambda_count() >= 2,
            "sweep.lambda_count",
            format!("must be >= 2, got {}", self.lambda_count()),
        )?;
        let t_max = self.t_max_gamma0();
        check(
            t_max > 0.0 && t_max.is_finite(),
            "sweep.t_max_gamma0",
            format!("must be > 0, got {t_max}"),
        )?;
        check(self.t_count() >= 2, "sweep.t_count", format!("must be >= 2, got {}", self.t_count()))?;
        if let Some(w) = self.sweep.workers {
            check(w >= 1, "sweep.workers", "must be >= 1")?;
        }
        let q = &self.quadrature;
        check(q.rel_tol > 0.0 && q.rel_tol < 1.0, "quadrature.rel_tol", format!("must lie in (0, 1), got {}", q.rel_tol))?;
        check(
            q.abs_tol_k0 >= 0.0 && q.abs_tol_k0.is_finite(),
            "quadrature.abs_tol_k0",
            format!("must be >= 0, got {}", q.abs_tol_k0),
        )?;
        if let Some(k) = q.kappa_max_k0 {
            check(k > 1.0 && k.is_finite(), "quadrature.kappa_max_k0", format!("must be > 1, got {k}"))?;
        }
        check(q.max_subdivisions >= 1, "quadrature.max_subdivisions", "must be >= 1")?;
        Ok(())
    }

    pub fn material(&self) -> Material {
        match self.film {
            FilmConfig::Vacuum => Material::Vacuum,
            FilmConfig::Drude(d) => Material::Drude(d.into()),
            FilmConfig::Emt(e) => Material::Emt {
                fill_fraction: e.fill_fraction,
                metal: e.metal.into(),
                dielectric: match e.dielectric_eps {
                    Some(eps) if !e.tio2 => Dielectric::Constant(eps),
                    _ => Dielectric::Tio2,
                },
            },
        }
    }

    pub fn lambda_range_nm(&self) -> (f64, f64) {
        let (lo, hi) = match self.film {
            FilmConfig::Emt(_) => (350.0, 650.0),
            _ => (260.0, 420.0),
        };
        (self.sweep.lambda_min_nm.unwrap_or(lo), self.sweep.lambda_max_nm.unwrap_or(hi))
    }

    pub fn lambda_count(&self) -> usize {
        self.sweep.lambda_count.unwrap_or(200)
    }

    pub fn t_max_gamma0(&self) -> f64 {
        self.sweep.t_max_gamma0.unwrap_or(10.0)
    }

    pub fn t_count(&self) -> usize {
        self.sweep.t_count.unwrap_or(200)
    }

    /// Evenly spaced wavelengths in nm, endpoints included.
    pub fn lambda_grid_nm(&self) -> Vec<f64> {
        let (lo, hi) = self.lambda_range_nm();
        linspace(lo, hi, self.lambda_count())
    }

    /// Evenly spaced times in units of 1/γ₀, starting at 0.
    pub fn time_grid(&self) -> Vec<f64> {
        linspace(0.0, self.t_max_gamma0(), self.t_count())
    }

    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::new(self.geometry.z1_nm * 1e-9, self.geometry.d_nm * 1e-9, self.geometry.orientation)
    }

    pub fn quadrature_spec(&self, k0: f64, geometry: &Geometry) -> QuadratureSpec {
        let mut spec = QuadratureSpec::default_for(k0, geometry);
        spec.rel_tol = self.quadrature.rel_tol;
        spec.abs_tol = self.quadrature.abs_tol_k0 * k0;
        spec.max_subdivisions = self.quadrature.max_subdivisions;
        if let Some(k) = self.quadrature.kappa_max_k0 {
            spec.kappa_max = k * k0;
        }
        spec
    }

    /// Same configuration with an explicit worker count.
    pub fn with_workers(&self, workers: usize) -> Self {
        let mut c = self.clone();
        c.sweep.workers = Some(workers);
        c
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSpectrumRow {
    pub lambda_nm: f64,
    pub gamma_s: f64,
    pub gamma_c: f64,
    pub omega_c: f64,
    pub transmission_proxy: f64,
    /// Set when this wavelength failed; the numeric fields are then NaN.
    pub failure: Option<String>,
}

impl RateSpectrumRow {
    fn failed(lambda_nm: f64, err: &Error) -> Self {
        RateSpectrumRow {
            lambda_nm,
            gamma_s: f64::NAN,
            gamma_c: f64::NAN,
            omega_c: f64::NAN,
            transmission_proxy: f64::NAN,
            failure: Some(err.to_string()),
        }
    }

    pub fn rates(&self) -> Option<RateTriple> {
        if self.failure.is_some() {
            return None;
        }
        Some(RateTriple {
            gamma_s: self.gamma_s,
            gamma_c: self.gamma_c,
            omega_c: self.omega_c,
        })
    }
}

/// Collective rates at one wavelength (nm).
pub fn rates_at(config: &SweepConfig, material: &Material, lambda_nm: f64) -> Result<RateTriple> {
    let wavelength = lambda_nm * 1e-9;
    let k0 = vacuum_wavenumber(wavelength);
    let geometry = config.geometry()?;
    let mut medium = material.medium(wavelength)?;
    if !medium.is_vacuum() {
        medium = medium.with_min_loss(MIN_LOSS);
    }
    let film = FilmStack::new(medium, geometry.thickness)?;
    let spec = config.quadrature_spec(k0, &geometry);
    let single = g_single(&geometry, &film, k0, &spec)?;
    let cross = g_cross(&geometry, &film, k0, &spec)?;
    rates_from_greens(&single, &cross, k0)
}

fn rate_row(config: &SweepConfig, material: &Material, lambda_nm: f64) -> RateSpectrumRow {
    match rates_at(config, material, lambda_nm) {
        Ok(r) => RateSpectrumRow {
            lambda_nm,
            gamma_s: r.gamma_s,
            gamma_c: r.gamma_c,
            omega_c: r.omega_c,
            transmission_proxy: transmission_proxy(&r),
            failure: None,
        },
        Err(e) => RateSpectrumRow::failed(lambda_nm, &e),
    }
}

fn run_parallel<T, F>(config: &SweepConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    let grid = config.lambda_grid_nm();
    match config.sweep.workers {
        Some(1) => Ok(grid.into_iter().map(f).collect()),
        workers => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.unwrap_or(0))
                .build()
                .map_err(|e| Error::Config(format!("sweep.workers: {e}")))?;
            Ok(pool.install(|| grid.into_par_iter().map(f).collect()))
        }
    }
}

/// One row per wavelength, in ascending order. Failed wavelengths are
/// flagged in their row rather than aborting the sweep.
pub fn run_rate_spectrum(config: &SweepConfig) -> Result<Vec<RateSpectrumRow>> {
    config.validate()?;
    let material = config.material();
    run_parallel(config, |lambda| rate_row(config, &material, lambda))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceMap {
    pub lambdas_nm: Vec<f64>,
    /// Times in units of 1/γ₀.
    pub times: Vec<f64>,
    /// C(λᵢ, tⱼ) stored λ-major; NaN for failed wavelengths.
    pub values: Vec<f64>,
    pub rates: Vec<RateSpectrumRow>,
}

impl ConcurrenceMap {
    pub fn get(&self, i_lambda: usize, i_t: usize) -> f64 {
        self.values[i_lambda * self.times.len() + i_t]
    }

    pub fn column(&self, i_lambda: usize) -> &[f64] {
        let n = self.times.len();
        &self.values[i_lambda * n..(i_lambda + 1) * n]
    }

    /// Maximum of C over the time grid at each wavelength.
    pub fn peaks(&self) -> Vec<f64> {
        (0..self.lambdas_nm.len())
            .map(|i| self.column(i).iter().copied().fold(f64::NAN, f64::max))
            .collect()
    }

    pub fn failures(&self) -> usize {
        self.rates.iter().filter(|r| r.failure.is_some()).count()
    }
}

/// Concurrence for the initial state |e₁g₂⟩ on the configured λ × t grid.
pub fn run_concurrence_map(config: &SweepConfig) -> Result<ConcurrenceMap> {
    config.validate()?;
    let material = config.material();
    let times = config.time_grid();
    let columns = run_parallel(config, |lambda| {
        let row = rate_row(config, &material, lambda);
        let column: Vec<f64> = match row.rates() {
            Some(r) => times.iter().map(|&t| concurrence_closed_form(&r, t).c).collect(),
            None => vec![f64::NAN; times.len()],
        };
        (row, column)
    })?;
    let mut values = Vec::with_capacity(columns.len() * times.len());
    let mut rates = Vec::with_capacity(columns.len());
    for (row, column) in columns {
        values.extend(column);
        rates.push(row);
    }
    Ok(ConcurrenceMap {
        lambdas_nm: config.lambda_grid_nm(),
        times,
        values,
        rates,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecialWavelength {
    pub kind: SpecialKind,
    pub lambda_nm: f64,
}

/// Search brackets in nm for each film type.
pub fn special_brackets(config: &SweepConfig) -> Vec<(SpecialKind, (f64, f64))> {
    match config.film {
        FilmConfig::Vacuum => vec![],
        FilmConfig::Drude(_) => vec![
            (SpecialKind::EnzPerp, (150.0, 2000.0)),
            (SpecialKind::SurfacePlasmon, (150.0, 2000.0)),
        ],
        FilmConfig::Emt(_) => vec![
            (SpecialKind::EnpPar, (300.0, 2000.0)),
            (SpecialKind::EnzPerp, (300.0, 2000.0)),
        ],
    }
}

/// ENZ/ENP/SP wavelengths of the configured film, in the order of
/// [`special_brackets`].
pub fn run_special_wavelengths(config: &SweepConfig) -> Vec<(SpecialKind, Result<f64>)> {
    let material = config.material();
    special_brackets(config)
        .into_iter()
        .map(|(kind, (lo, hi))| {
            let found = crate::dispersion::find_special_wavelength(&material, kind, (lo * 1e-9, hi * 1e-9))
                .map(|l| l * 1e9);
            (kind, found)
        })
        .collect()
}

/// Decimal rendering with 9 significant digits; scientific notation outside
/// [1e-5, 1e9).
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    // Rounding can carry into the next decade; take the exponent from the
    // scientific rendering instead.
    let sci = format!("{x:.8e}");
    let exp_sci: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(exp);
    if (-5..9).contains(&exp_sci) {
        let decimals = (8 - exp_sci).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn rates_csv(rows: &[RateSpectrumRow]) -> String {
    let mut out = String::from(RATE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_number(r.lambda_nm),
            format_number(r.gamma_s),
            format_number(r.gamma_c),
            format_number(r.omega_c),
            format_number(r.transmission_proxy)
        );
    }
    out
}

pub fn map_csv(map: &ConcurrenceMap) -> String {
    let mut out = String::from(MAP_HEADER);
    out.push('\n');
    for (i, lambda) in map.lambdas_nm.iter().enumerate() {
        let l = format_number(*lambda);
        for (j, t) in map.times.iter().enumerate() {
            let _ = writeln!(out, "{l},{},{}", format_number(*t), format_number(map.get(i, j)));
        }
    }
    out
}

pub fn special_csv(found: &[SpecialWavelength]) -> String {
    let mut out = String::from(SPECIAL_HEADER);
    out.push('\n');
    for s in found {
        let _ = writeln!(out, "{},{}", s.kind.label(), format_number(s.lambda_nm));
    }
    out
}

/// Writes `contents` to `path`, or to standard output when `path` is None.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes()).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

pub fn write_rates_csv(rows: &[RateSpectrumRow], path: &Path) -> Result<()> {
    write_output(Some(path), &rates_csv(rows))
}

pub fn write_map_csv(map: &ConcurrenceMap, path: &Path) -> Result<()> {
    write_output(Some(path), &map_csv(map))
}
