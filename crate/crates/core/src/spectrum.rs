//! Eberly–Wódkiewicz physical spectrum of the field,
//!
//! ```text
//! S(ω, t, Γ) = 2Γ e^{−2Γt} ∫₀ᵗ∫₀ᵗ e^{(Γ−iω)t₁} e^{(Γ+iω)t₂} ⟨a†(t₁) a(t₂)⟩ dt₁ dt₂
//! ```
//!
//! The correlation is a finite sum `Σ_j w_j f_j*(t₁) f_j(t₂)`, so the double
//! integral collapses to `2Γ e^{−2Γt} Σ_j w_j |∫₀ᵗ e^{(Γ+iω)τ} f_j(τ) dτ|²`
//! and each inner integral is a sum of exponentials with closed antiderivatives.
//! Long-time Lorentzian forms and the rotating-wave and deep-strong limits
//! are provided separately.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{mu_coefficients, FockProduct, MuMatrix};
use crate::error::{HopfieldError, Result};
use crate::model::{polariton_frequencies, rwa_frequencies, DiamagneticRule, ModelParams, Phase};

/// Filter half-width, observation time and frequency samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    gamma: f64,
    t_obs: f64,
    omega_grid: Vec<f64>,
}

impl FilterConfig {
    pub fn new(gamma: f64, t_obs: f64, omega_grid: Vec<f64>) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(HopfieldError::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "filter half-width must be positive",
            });
        }
        if !(t_obs.is_finite() && t_obs > 0.0) {
            return Err(HopfieldError::InvalidParameter {
                name: "t_obs",
                value: t_obs,
                reason: "observation time must be positive",
            });
        }
        if omega_grid.is_empty() || omega_grid.iter().any(|w| !w.is_finite()) {
            return Err(HopfieldError::InvalidParameter {
                name: "omega_grid",
                value: f64::NAN,
                reason: "grid must be non-empty and finite",
            });
        }
        if let Some(w) = omega_grid.windows(2).find(|w| w[1] <= w[0]) {
            return Err(HopfieldError::InvalidParameter {
                name: "omega_grid",
                value: w[1],
                reason: "grid must be strictly increasing",
            });
        }
        Ok(Self {
            gamma,
            t_obs,
            omega_grid,
        })
    }

    /// `count` equispaced points on `[start, stop]`.
    pub fn uniform(gamma: f64, t_obs: f64, start: f64, stop: f64, count: usize) -> Result<Self> {
        Self::new(gamma, t_obs, linspace(start, stop, count))
    }

    /// Figure defaults: `Γ = 0.05`, `Γ t = 10`, 3000 points on `[0, 3]`.
    pub fn figure() -> Self {
        Self::uniform(0.05, 200.0, 0.0, 3.0, 3000).expect("static configuration")
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn t_obs(&self) -> f64 {
        self.t_obs
    }

    pub fn omega_grid(&self) -> &[f64] {
        &self.omega_grid
    }

    pub fn with_grid(&self, omega_grid: Vec<f64>) -> Result<Self> {
        Self::new(self.gamma, self.t_obs, omega_grid)
    }

    pub fn with_t_obs(&self, t_obs: f64) -> Result<Self> {
        Self::new(self.gamma, t_obs, self.omega_grid.clone())
    }

    /// Largest spacing of the grid (zero for a single point).
    pub fn max_step(&self) -> f64 {
        self.omega_grid
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

pub(crate) fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (stop - start) / (count - 1) as f64;
            (0..count).map(|i| start + h * i as f64).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    Quadrature,
    ClosedForm,
    Rwa,
    DscLimit,
    /// Long-time limit of the exact spectrum with all cross terms dropped.
    Incoherent,
}

/// One Lorentzian `numerator / (Γ² + (ω − center)²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorentzianComponent {
    pub label: String,
    pub center: f64,
    /// Line weight as it appears in the closed form (`Γ_x`, `Γ'_y`, ...).
    pub weight: f64,
    pub numerator: f64,
    pub height: f64,
}

impl LorentzianComponent {
    fn new(label: impl Into<String>, center: f64, weight: f64, numerator: f64, gamma: f64) -> Self {
        Self {
            label: label.into(),
            center,
            weight,
            numerator,
            height: numerator / (gamma * gamma),
        }
    }

    pub fn eval(&self, omega: f64, gamma: f64) -> f64 {
        self.numerator / (gamma * gamma + (omega - self.center).powi(2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub components: Vec<LorentzianComponent>,
    pub method: SpectrumMethod,
    pub gamma: f64,
    /// Observation time for finite-time spectra.
    pub t_obs: Option<f64>,
    /// Set when the state has `n = m`, outside the stated closed-form domain.
    pub outside_stated_domain: bool,
}

impl SpectrumResult {
    fn from_components(
        filter: &FilterConfig,
        components: Vec<LorentzianComponent>,
        method: SpectrumMethod,
    ) -> Self {
        let gamma = filter.gamma;
        let values = filter
            .omega_grid
            .iter()
            .map(|&w| components.iter().map(|c| c.eval(w, gamma)).sum())
            .collect();
        Self {
            omega: filter.omega_grid.clone(),
            values,
            components,
            method,
            gamma,
            t_obs: None,
            outside_stated_domain: false,
        }
    }

    /// Sum of the Lorentzian components at `omega`, if the spectrum has any.
    pub fn eval_components(&self, omega: f64) -> Option<f64> {
        if self.components.is_empty() {
            return None;
        }
        Some(self.components.iter().map(|c| c.eval(omega, self.gamma)).sum())
    }

    pub fn peak_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `max |a − b| / max |b|` over a shared grid.
    pub fn sup_relative_difference(&self, reference: &SpectrumResult) -> f64 {
        assert_eq!(self.omega.len(), reference.omega.len(), "grids differ");
        let diff = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        diff / reference.peak_value()
    }
}

/// `e^{−Γt} ∫₀ᵗ e^{(Γ+iω)τ} f_j(τ) dτ` for all four `j`.
fn scaled_transforms(mu: &MuMatrix, gamma: f64, t: f64, omega: f64) -> [C64; 4] {
    let decay = (-gamma * t).exp();
    let mut kernel = [C64::new(0.0, 0.0); 4];
    for (k, slot) in kernel.iter_mut().enumerate() {
        let nu = omega + mu.exponent(k);
        let z = C64::new(gamma, nu);
        // (e^{zt} − 1) e^{−Γt} / z without forming e^{Γt}.
        *slot = (C64::from_polar(1.0, nu * t) - decay) / z;
    }
    std::array::from_fn(|j| (0..4).map(|k| mu.entry(j, k) * kernel[k]).sum())
}

/// Finite-time spectrum at a single frequency.
pub fn ew_spectrum_at(mu: &MuMatrix, state: FockProduct, gamma: f64, t_obs: f64, omega: f64) -> f64 {
    let w = state.correlation_weights();
    let s = scaled_transforms(mu, gamma, t_obs, omega);
    2.0 * gamma * (0..4).map(|j| w[j] * s[j].norm_sqr()).sum::<f64>()
}

/// Finite-time spectrum on the filter grid for any Fock product state.
pub fn ew_spectrum_quadrature(p: &ModelParams, state: FockProduct, filter: &FilterConfig) -> Result<SpectrumResult> {
    let mu = mu_coefficients(p)?;
    let values = filter
        .omega_grid
        .iter()
        .map(|&w| ew_spectrum_at(&mu, state, filter.gamma, filter.t_obs, w))
        .collect();
    Ok(SpectrumResult {
        omega: filter.omega_grid.clone(),
        values,
        components: Vec::new(),
        method: SpectrumMethod::Quadrature,
        gamma: filter.gamma,
        t_obs: Some(filter.t_obs),
        outside_stated_domain: state.outside_stated_domain(),
    })
}

/// `Γt → ∞` limit of the exact spectrum keeping only the diagonal terms:
/// `2Γ Σ_j w_j Σ_k |μ_jk|² / (Γ² + (ω + s_k ω_k)²)`.
pub fn ew_spectrum_incoherent(p: &ModelParams, state: FockProduct, filter: &FilterConfig) -> Result<SpectrumResult> {
    let mu = mu_coefficients(p)?;
    let w = state.correlation_weights();
    let gamma = filter.gamma;
    let labels = ["x+", "x-", "y+", "y-"];
    let components = (0..4)
        .map(|k| {
            let weight: f64 = (0..4).map(|j| w[j] * mu.entry(j, k).norm_sqr()).sum();
            LorentzianComponent::new(labels[k], -mu.exponent(k), weight, 2.0 * gamma * weight, gamma)
        })
        .collect();
    let mut result = SpectrumResult::from_components(filter, components, SpectrumMethod::Incoherent);
    result.outside_stated_domain = state.outside_stated_domain();
    Ok(result)
}

struct Mixing {
    wx: f64,
    wy: f64,
    big_omega: f64,
    lambda: f64,
}

fn mixing(p: &ModelParams) -> Result<Mixing> {
    if !p.is_isotropic() {
        return Err(HopfieldError::NotIsotropic {
            g1: p.g1(),
            g2: p.g2(),
        });
    }
    let spectrum = polariton_frequencies(p)?;
    match spectrum.phase {
        Phase::Normal => {}
        Phase::Critical => return Err(HopfieldError::CriticalPhase),
        Phase::Unstable => {
            return Err(HopfieldError::UnstablePhase {
                omega_y_sq: spectrum.omega_y_sq,
            })
        }
    }
    let (wc, wb) = (p.omega_c(), p.omega_b());
    Ok(Mixing {
        wx: spectrum.omega_x(),
        wy: spectrum.omega_y()?,
        big_omega: wc * wc + 4.0 * p.diamagnetic() * wc - wb * wb,
        lambda: 2.0 * p.g1() * (wb * wc).sqrt(),
    })
}

/// `(h_x, h_y) = [1 ± Ω (4λ² + Ω²)^{−1/2}]² / 4`.
pub fn weight_factors(big_omega: f64, lambda: f64) -> (f64, f64) {
    let r = (4.0 * lambda * lambda + big_omega * big_omega).sqrt();
    let c = if r == 0.0 { 1.0 } else { big_omega / r };
    ((1.0 + c).powi(2) / 4.0, (1.0 - c).powi(2) / 4.0)
}

/// `h_xy = 4λ² / (4λ² + Ω²)`.
pub fn cross_weight_factor(big_omega: f64, lambda: f64) -> f64 {
    let l2 = 4.0 * lambda * lambda;
    if l2 == 0.0 {
        0.0
    } else {
        l2 / (l2 + big_omega * big_omega)
    }
}

/// Long-time spectrum for the initial state `|1,0⟩`: two Lorentzians with
/// numerators `Γ_{x,y}/2`.
pub fn ew_spectrum_closed_10(p: &ModelParams, filter: &FilterConfig) -> Result<SpectrumResult> {
    let m = mixing(p)?;
    let wc = p.omega_c();
    let gamma = filter.gamma;
    let (hx, hy) = weight_factors(m.big_omega, m.lambda);
    let weight = |h: f64, w: f64| {
        gamma * h * ((wc + w).powi(4) + 2.0 * (wc * wc - w * w).powi(2)) / (4.0 * wc * wc * w * w)
    };
    let (gx, gy) = (weight(hx, m.wx), weight(hy, m.wy));
    let components = vec![
        LorentzianComponent::new("x", m.wx, gx, gx / 2.0, gamma),
        LorentzianComponent::new("y", m.wy, gy, gy / 2.0, gamma),
    ];
    Ok(SpectrumResult::from_components(filter, components, SpectrumMethod::ClosedForm))
}

/// Long-time spectrum for the initial state `|0,1⟩`: two Lorentzians with
/// numerators `Γ'_{x,y}`.
pub fn ew_spectrum_closed_01(p: &ModelParams, filter: &FilterConfig) -> Result<SpectrumResult> {
    let m = mixing(p)?;
    let (wc, wb) = (p.omega_c(), p.omega_b());
    let gamma = filter.gamma;
    let hxy = cross_weight_factor(m.big_omega, m.lambda);
    let weight = |w: f64| {
        gamma * hxy * (3.0 * wb * wb - 2.0 * wb * w + 3.0 * w * w) * (wc + w).powi(2) / (32.0 * wb * wc * w * w)
    };
    let (gx, gy) = (weight(m.wx), weight(m.wy));
    let components = vec![
        LorentzianComponent::new("x", m.wx, gx, gx, gamma),
        LorentzianComponent::new("y", m.wy, gy, gy, gamma),
    ];
    Ok(SpectrumResult::from_components(filter, components, SpectrumMethod::ClosedForm))
}

/// Closed form for a named single-excitation state.
pub fn ew_spectrum_closed(p: &ModelParams, state: FockProduct, filter: &FilterConfig) -> Result<SpectrumResult> {
    match state {
        FockProduct::FIELD_EXCITED => ew_spectrum_closed_10(p, filter),
        FockProduct::MATTER_EXCITED => ew_spectrum_closed_01(p, filter),
        _ => Err(HopfieldError::InvalidParameter {
            name: "state",
            value: f64::NAN,
            reason: "closed forms exist for |1,0> and |0,1> only",
        }),
    }
}

/// Rotating-wave spectrum for `|1,0⟩`, using `g1` as the coupling. Both
/// lines share `Γ_RWA = 4Γg² / ((ω_b − ω_c)² + 4g²)`.
pub fn ew_spectrum_rwa(p: &ModelParams, filter: &FilterConfig) -> SpectrumResult {
    let (wc, wb, g) = (p.omega_c(), p.omega_b(), p.g1());
    let gamma = filter.gamma;
    let (wx, wy) = rwa_frequencies(p);
    let denom = (wb - wc).powi(2) + 4.0 * g * g;
    let g_rwa = if denom == 0.0 { 0.0 } else { 4.0 * gamma * g * g / denom };
    let components = vec![
        LorentzianComponent::new("x", wx, g_rwa, g_rwa / 2.0, gamma),
        LorentzianComponent::new("y", wy, g_rwa, g_rwa / 2.0, gamma),
    ];
    SpectrumResult::from_components(filter, components, SpectrumMethod::Rwa)
}

/// Deep-strong-coupling single Lorentzian at `ω̃_x = 2g sqrt(ω_c/ω_b)` with
/// numerator `3Γg²/(2ω_bω_c)`.
pub fn dsc_limit_spectrum(p: &ModelParams, filter: &FilterConfig) -> SpectrumResult {
    let (wc, wb, g) = (p.omega_c(), p.omega_b(), p.g1());
    let gamma = filter.gamma;
    let center = 2.0 * g * (wc / wb).sqrt();
    let numerator = 3.0 * gamma * g * g / (2.0 * wb * wc);
    let components = vec![LorentzianComponent::new("x~", center, numerator, numerator, gamma)];
    SpectrumResult::from_components(filter, components, SpectrumMethod::DscLimit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub omega: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VrsReport {
    /// All local maxima, ascending in frequency.
    pub peaks: Vec<Peak>,
    /// Distance between the two highest peaks.
    pub splitting: Option<f64>,
    /// Height of the right peak over the left one (of the two highest).
    pub asymmetry_ratio: Option<f64>,
    pub single_peak: bool,
}

/// Locate the maxima of a sampled spectrum. When the spectrum is a sum of
/// Lorentzians the positions and heights are refined on the exact line
/// shape; otherwise by a parabola through the three samples.
pub fn vrs_analysis(spec: &SpectrumResult) -> Result<VrsReport> {
    let required = spec.gamma / 5.0;
    let step = spec.omega.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if step >= required {
        return Err(HopfieldError::GridTooCoarse { step, required });
    }
    let (w, v) = (&spec.omega, &spec.values);
    let mut peaks = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if v[i] > v[i - 1] && v[i] >= v[i + 1] {
            let peak = match spec.eval_components(w[i]) {
                Some(_) => refine_golden(spec, w[i - 1], w[i + 1]),
                None => refine_parabola(w[i - 1], w[i], w[i + 1], v[i - 1], v[i], v[i + 1]),
            };
            peaks.push(peak);
        }
    }
    let mut top: Vec<Peak> = peaks.clone();
    top.sort_by(|a, b| b.height.total_cmp(&a.height));
    top.truncate(2);
    top.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    let (splitting, asymmetry_ratio) = match top.as_slice() {
        [l, r] => (Some(r.omega - l.omega), Some(r.height / l.height)),
        _ => (None, None),
    };
    Ok(VrsReport {
        single_peak: peaks.len() == 1,
        peaks,
        splitting,
        asymmetry_ratio,
    })
}

fn refine_golden(spec: &SpectrumResult, mut a: f64, mut b: f64) -> Peak {
    let f = |x: f64| spec.eval_components(x).unwrap_or(0.0);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    Peak { omega: x, height: f(x) }
}

fn refine_parabola(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> Peak {
    let d0 = (y1 - y0) / (x1 - x0);
    let d1 = (y2 - y1) / (x2 - x1);
    let curv = (d1 - d0) / (x2 - x0);
    if curv >= 0.0 {
        return Peak { omega: x1, height: y1 };
    }
    // y = y1 + s (x − x1) + curv (x − x1)², s the central slope.
    let s = d0 + curv * (x1 - x0);
    let dx = -s / (2.0 * curv);
    Peak {
        omega: x1 + dx,
        height: y1 + s * dx + curv * dx * dx,
    }
}

/// Spectrum row of a dispersion map with overlaid polariton curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionRow {
    pub omega_b: f64,
    pub spectrum: SpectrumResult,
    pub overlays: Vec<DispersionOverlay>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionOverlay {
    pub rule: String,
    pub omega_x: f64,
    /// `None` when the lower branch is critical or unstable.
    pub omega_y: Option<f64>,
}

/// Polariton dispersion curves `ΔE^{10}_{00} = ω_x`, `ΔE^{01}_{00} = ω_y` under `rule`.
pub fn dispersion_overlay(rule: DiamagneticRule, omega_c: f64, omega_b: f64, g: f64) -> Result<DispersionOverlay> {
    let p = rule.params(omega_c, omega_b, g)?;
    let (omega_x, omega_y) = if rule == DiamagneticRule::Rwa {
        let (x, y) = rwa_frequencies(&p);
        (x, (y > 0.0).then_some(y))
    } else {
        let s = polariton_frequencies(&p)?;
        (s.omega_x(), s.omega_y().ok().filter(|_| s.phase == Phase::Normal))
    };
    Ok(DispersionOverlay {
        rule: rule.label(),
        omega_x,
        omega_y,
    })
}

/// Spectrum for one `ω_b` of a dispersion map. Closed forms are used for
/// `|1,0⟩` and `|0,1⟩`, the finite-time spectrum otherwise; the rotating-wave
/// rule only supports `|1,0⟩`.
pub fn dispersion_row(
    omega_c: f64,
    g: f64,
    omega_b: f64,
    rule: DiamagneticRule,
    overlays: &[DiamagneticRule],
    state: FockProduct,
    filter: &FilterConfig,
) -> Result<DispersionRow> {
    let p = rule.params(omega_c, omega_b, g)?;
    let spectrum = match (rule, state) {
        (DiamagneticRule::Rwa, FockProduct::FIELD_EXCITED) => ew_spectrum_rwa(&p, filter),
        (DiamagneticRule::Rwa, _) => {
            return Err(HopfieldError::NotIsotropic {
                g1: p.g1(),
                g2: p.g2(),
            })
        }
        (_, FockProduct::FIELD_EXCITED | FockProduct::MATTER_EXCITED) => ew_spectrum_closed(&p, state, filter)?,
        _ => ew_spectrum_quadrature(&p, state, filter)?,
    };
    let overlays = overlays
        .iter()
        .map(|&r| dispersion_overlay(r, omega_c, omega_b, g))
        .collect::<Result<_>>()?;
    Ok(DispersionRow {
        omega_b,
        spectrum,
        overlays,
    })
}

/// Rows of `S(ω)` for each `ω_b` in `omega_b_grid`.
pub fn polariton_dispersion_map(
    omega_c: f64,
    g: f64,
    omega_b_grid: &[f64],
    rule: DiamagneticRule,
    overlays: &[DiamagneticRule],
    state: FockProduct,
    filter: &FilterConfig,
) -> Result<Vec<DispersionRow>> {
    omega_b_grid
        .iter()
        .map(|&wb| dispersion_row(omega_c, g, wb, rule, overlays, state, filter))
        .collect()
}
