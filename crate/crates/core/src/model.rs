//! Hamiltonian parameters, exact polariton frequencies and criticality.
//!
//! ```text
//! H = ω_c a†a + ω_b b†b + i g1 (a b† − a† b) + i g2 (a† b† − a b) + D (a + a†)²
//! ```
//!
//! A chain of two rotations and one squeezing maps `H` onto two uncoupled
//! oscillators with squared frequencies
//!
//! ```text
//! 2 ω²_{x,y} = (2 λ1 λ2 + Ωx² + Ωy²) ± sqrt((1 − λ2²)(Ωx² − Ωy²)² + (2 λ1 + λ2 (Ωx² + Ωy²))²)
//! ```
//!
//! with `Ωx² = ω_c² + 4 D ω_c`, `Ωy² = ω_b²`, `λ1 = (g1 + g2) sqrt(ω_c ω_b)` and
//! `λ2 = (g1 − g2) / sqrt(ω_c ω_b)`.

use serde::{Deserialize, Serialize};

use crate::error::{HopfieldError, Result};

/// `|ω_y²| < CRITICAL_TOLERANCE · ω_c²` is classified as [`Phase::Critical`].
pub const CRITICAL_TOLERANCE: f64 = 1e-10;

/// The five Hamiltonian parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    omega_c: f64,
    omega_b: f64,
    g1: f64,
    g2: f64,
    diamagnetic: f64,
}

fn check(name: &'static str, value: f64, positive: bool) -> Result<()> {
    if !value.is_finite() {
        return Err(HopfieldError::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        });
    }
    if positive && value <= 0.0 {
        return Err(HopfieldError::InvalidParameter {
            name,
            value,
            reason: "must be > 0",
        });
    }
    if !positive && value < 0.0 {
        return Err(HopfieldError::InvalidParameter {
            name,
            value,
            reason: "must be >= 0",
        });
    }
    Ok(())
}

impl ModelParams {
    pub fn new(omega_c: f64, omega_b: f64, g1: f64, g2: f64, diamagnetic: f64) -> Result<Self> {
        check("omega_c", omega_c, true)?;
        check("omega_b", omega_b, true)?;
        check("g1", g1, false)?;
        check("g2", g2, false)?;
        check("D", diamagnetic, false)?;
        Ok(Self {
            omega_c,
            omega_b,
            g1,
            g2,
            diamagnetic,
        })
    }

    /// `g1 = g2 = g`.
    pub fn isotropic(omega_c: f64, omega_b: f64, g: f64, diamagnetic: f64) -> Result<Self> {
        Self::new(omega_c, omega_b, g, g, diamagnetic)
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn diamagnetic(&self) -> f64 {
        self.diamagnetic
    }

    pub fn with_diamagnetic(self, diamagnetic: f64) -> Result<Self> {
        Self::new(self.omega_c, self.omega_b, self.g1, self.g2, diamagnetic)
    }

    pub fn is_isotropic(&self) -> bool {
        (self.g1 - self.g2).abs() <= 1e-14 * self.g1.abs().max(self.g2.abs()).max(1.0)
    }

    pub fn is_resonant(&self) -> bool {
        (self.omega_c - self.omega_b).abs() <= 1e-14 * self.omega_c.max(self.omega_b)
    }

    pub fn lambda1(&self) -> f64 {
        (self.g1 + self.g2) * (self.omega_c * self.omega_b).sqrt()
    }

    pub fn lambda2(&self) -> f64 {
        (self.g1 - self.g2) / (self.omega_c * self.omega_b).sqrt()
    }

    /// `|λ₂| < 1`, required for the squeezing step to exist.
    pub fn squeezing_valid(&self) -> bool {
        self.lambda2().abs() < 1.0
    }

    pub fn derived(&self) -> Result<DerivedQuantities> {
        DerivedQuantities::new(self)
    }
}

/// How the diamagnetic strength is tied to the coupling in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiamagneticRule {
    /// Thomas–Reiche–Kuhn value `D = g²/ω_b`.
    Trk,
    /// `D = d g²/ω_b`.
    Scaled(f64),
    /// `D = 0`, both coupling terms kept.
    Zero,
    /// Co-rotating coupling only: `g1 = g`, `g2 = D = 0`.
    Rwa,
    /// Fixed `D` independent of `g`.
    Explicit(f64),
}

impl DiamagneticRule {
    pub fn params(self, omega_c: f64, omega_b: f64, g: f64) -> Result<ModelParams> {
        match self {
            DiamagneticRule::Trk => ModelParams::isotropic(omega_c, omega_b, g, g * g / omega_b),
            DiamagneticRule::Scaled(d) => {
                check("d", d, false)?;
                ModelParams::isotropic(omega_c, omega_b, g, d * g * g / omega_b)
            }
            DiamagneticRule::Zero => ModelParams::isotropic(omega_c, omega_b, g, 0.0),
            DiamagneticRule::Rwa => ModelParams::new(omega_c, omega_b, g, 0.0, 0.0),
            DiamagneticRule::Explicit(d) => ModelParams::isotropic(omega_c, omega_b, g, d),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DiamagneticRule::Trk => "trk".into(),
            DiamagneticRule::Scaled(d) => format!("scaled({d})"),
            DiamagneticRule::Zero => "zero".into(),
            DiamagneticRule::Rwa => "rwa".into(),
            DiamagneticRule::Explicit(d) => format!("explicit({d})"),
        }
    }
}

impl std::str::FromStr for DiamagneticRule {
    type Err = String;

    /// Accepts `trk`, `zero`, `rwa`, `scaled(d)` / `scaled:d` and
    /// `explicit(D)` / `explicit:D`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let arg = |prefix: &str| -> Option<std::result::Result<f64, String>> {
            let rest = s.strip_prefix(prefix)?;
            let rest = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .or_else(|| rest.strip_prefix(':'))?;
            Some(rest.parse::<f64>().map_err(|e| format!("{prefix}: {e}")))
        };
        match s.as_str() {
            "trk" => return Ok(DiamagneticRule::Trk),
            "zero" => return Ok(DiamagneticRule::Zero),
            "rwa" => return Ok(DiamagneticRule::Rwa),
            _ => {}
        }
        if let Some(d) = arg("scaled") {
            return d.map(DiamagneticRule::Scaled);
        }
        if let Some(d) = arg("explicit") {
            return d.map(DiamagneticRule::Explicit);
        }
        Err(format!("unknown diamagnetic rule `{s}`"))
    }
}

/// Intermediate quantities of the rotation–squeeze–rotation chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    pub omega_x_bare_sq: f64,
    pub omega_y_bare_sq: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Squared frequencies in the squeezed frame.
    pub w1_sq: f64,
    pub w2_sq: f64,
    /// `(Ωx² − Ωy²)/2`, the position coupling after the first rotation.
    pub lambda_tilde: f64,
    /// `sqrt(1 − λ2²)(Ωy² − Ωx²)/2`, the position coupling after squeezing.
    pub lambda_coupling: f64,
    /// Final rotation angle, `tan 2θ = 2λ/(w1² − w2²)`.
    pub theta: f64,
    pub r1: f64,
    pub r2: f64,
}

impl DerivedQuantities {
    fn new(p: &ModelParams) -> Result<Self> {
        let lambda2 = p.lambda2();
        if lambda2.abs() >= 1.0 {
            return Err(HopfieldError::InvalidSqueezing { lambda2 });
        }
        let ox = p.omega_c * p.omega_c + 4.0 * p.diamagnetic * p.omega_c;
        let oy = p.omega_b * p.omega_b;
        let lambda1 = p.lambda1();
        let w1_sq = (1.0 + lambda2) * (ox + oy + 2.0 * lambda1) / 2.0;
        let w2_sq = (1.0 - lambda2) * (ox + oy - 2.0 * lambda1) / 2.0;
        let lambda_coupling = (1.0 - lambda2 * lambda2).sqrt() * (oy - ox) / 2.0;
        let split = w1_sq - w2_sq;
        let theta = if split.abs() <= 1e-15 * (w1_sq.abs() + w2_sq.abs()) {
            std::f64::consts::FRAC_PI_4
        } else {
            0.5 * (2.0 * lambda_coupling / split).atan()
        };
        Ok(Self {
            omega_x_bare_sq: ox,
            omega_y_bare_sq: oy,
            lambda1,
            lambda2,
            w1_sq,
            w2_sq,
            lambda_tilde: (ox - oy) / 2.0,
            lambda_coupling,
            theta,
            r1: (1.0 + lambda2).sqrt().ln(),
            r2: (1.0 - lambda2).sqrt().ln(),
        })
    }

    /// Squared normal-mode frequencies obtained by diagonalising the squeezed
    /// frame `(p² + w1² x² + w2² y²)/2 + λ x y` directly.
    pub fn diagonal_frequencies_sq(&self) -> (f64, f64) {
        let mean = (self.w1_sq + self.w2_sq) / 2.0;
        let half = (self.w1_sq - self.w2_sq) / 2.0;
        let r = half.hypot(self.lambda_coupling);
        (mean + r, mean - r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Normal,
    Critical,
    Unstable,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Normal => "normal",
            Phase::Critical => "critical",
            Phase::Unstable => "unstable",
        }
    }
}

/// Squared polariton frequencies. `omega_y_sq` may be zero or negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolaritonSpectrum {
    pub omega_x_sq: f64,
    pub omega_y_sq: f64,
    pub phase: Phase,
}

impl PolaritonSpectrum {
    pub fn omega_x(&self) -> f64 {
        self.omega_x_sq.sqrt()
    }

    /// Lower polariton frequency; `Err(UnstablePhase)` when `ω_y² < 0`.
    /// Returns exactly zero in the critical phase.
    pub fn omega_y(&self) -> Result<f64> {
        match self.phase {
            Phase::Normal => Ok(self.omega_y_sq.sqrt()),
            Phase::Critical => Ok(0.0),
            Phase::Unstable => Err(HopfieldError::UnstablePhase {
                omega_y_sq: self.omega_y_sq,
            }),
        }
    }

    /// Both frequencies, rejecting the unstable phase.
    pub fn frequencies(&self) -> Result<(f64, f64)> {
        Ok((self.omega_x(), self.omega_y()?))
    }
}

/// Exact polariton frequencies of the anisotropic model.
///
/// The lower root is evaluated from the product
/// `ω_x² ω_y² = (1 − λ2²)(Ωx² Ωy² − λ1²)` to avoid cancellation near the
/// superradiant point.
pub fn polariton_frequencies(p: &ModelParams) -> Result<PolaritonSpectrum> {
    let lambda2 = p.lambda2();
    if lambda2.abs() >= 1.0 {
        return Err(HopfieldError::InvalidSqueezing { lambda2 });
    }
    let ox = p.omega_c * p.omega_c + 4.0 * p.diamagnetic * p.omega_c;
    let oy = p.omega_b * p.omega_b;
    let lambda1 = p.lambda1();
    let sum = 2.0 * lambda1 * lambda2 + ox + oy;
    let disc = ((1.0 - lambda2 * lambda2) * (ox - oy).powi(2)
        + (2.0 * lambda1 + lambda2 * (ox + oy)).powi(2))
    .sqrt();
    let omega_x_sq = (sum + disc) / 2.0;
    let product = (1.0 - lambda2 * lambda2) * (ox * oy - lambda1 * lambda1);
    let omega_y_sq = product / omega_x_sq;
    Ok(PolaritonSpectrum {
        omega_x_sq,
        omega_y_sq,
        phase: classify(omega_y_sq, p.omega_c),
    })
}

fn classify(omega_y_sq: f64, omega_c: f64) -> Phase {
    if omega_y_sq.abs() < CRITICAL_TOLERANCE * omega_c * omega_c {
        Phase::Critical
    } else if omega_y_sq > 0.0 {
        Phase::Normal
    } else {
        Phase::Unstable
    }
}

/// Squared frequencies for `g1 = g2 = g` in the reduced isotropic form
/// `2ω² = (ω_c² + ω_b² + 4Dω_c) ± sqrt((ω_c² − ω_b² + 4Dω_c)² + 16 g² ω_c ω_b)`.
pub fn isotropic_frequencies_sq(omega_c: f64, omega_b: f64, g: f64, diamagnetic: f64) -> (f64, f64) {
    let a = omega_c * omega_c + omega_b * omega_b + 4.0 * diamagnetic * omega_c;
    let om = omega_c * omega_c - omega_b * omega_b + 4.0 * diamagnetic * omega_c;
    let r = (om * om + 16.0 * g * g * omega_c * omega_b).sqrt();
    ((a + r) / 2.0, (a - r) / 2.0)
}

/// Rotating-wave polariton frequencies using `g1` as the coupling
/// (`g2` and `D` are ignored): `2ω = (ω_c + ω_b) ± sqrt((ω_c − ω_b)² + 4g²)`.
pub fn rwa_frequencies(p: &ModelParams) -> (f64, f64) {
    rwa_frequencies_raw(p.omega_c, p.omega_b, p.g1)
}

pub fn rwa_frequencies_raw(omega_c: f64, omega_b: f64, g: f64) -> (f64, f64) {
    let r = ((omega_c - omega_b).powi(2) + 4.0 * g * g).sqrt();
    ((omega_c + omega_b + r) / 2.0, (omega_c + omega_b - r) / 2.0)
}

/// `E_mn = ω_x (m + ½) + ω_y (n + ½)`, or `ω_x m + ω_y n` when `shifted`.
pub fn energy_level(p: &ModelParams, m: u32, n: u32, shifted: bool) -> Result<f64> {
    let (wx, wy) = polariton_frequencies(p)?.frequencies()?;
    Ok(level(wx, wy, m, n, shifted))
}

fn level(wx: f64, wy: f64, m: u32, n: u32, shifted: bool) -> f64 {
    let (m, n) = (m as f64, n as f64);
    if shifted {
        wx * m + wy * n
    } else {
        wx * (m + 0.5) + wy * (n + 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub m: u32,
    pub n: u32,
    pub energy: f64,
}

/// All levels `E_mn` with `m ≤ max_m`, `n ≤ max_n`, sorted by energy.
pub fn energy_ladder(p: &ModelParams, max_m: u32, max_n: u32, shifted: bool) -> Result<Vec<EnergyLevel>> {
    let (wx, wy) = polariton_frequencies(p)?.frequencies()?;
    let mut levels: Vec<EnergyLevel> = (0..=max_m)
        .flat_map(|m| (0..=max_n).map(move |n| (m, n)))
        .map(|(m, n)| EnergyLevel {
            m,
            n,
            energy: level(wx, wy, m, n, shifted),
        })
        .collect();
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.m.cmp(&b.m)));
    Ok(levels)
}

/// Transition energy `ΔE^{mn}_{pq} = (m − p) ω_x + (n − q) ω_y`.
pub fn polariton_dispersion(p: &ModelParams, (m, n): (u32, u32), (pm, qn): (u32, u32)) -> Result<f64> {
    let (wx, wy) = polariton_frequencies(p)?.frequencies()?;
    Ok((m as f64 - pm as f64) * wx + (n as f64 - qn as f64) * wy)
}

/// Diamagnetic strength below which the lower polariton softens:
/// `D_crit = (g1 + g2)²/(4ω_b) − ω_c/4`. The Hamiltonian is bounded below
/// for `D > D_crit`.
pub fn critical_diamagnetic(p: &ModelParams) -> f64 {
    (p.g1 + p.g2).powi(2) / (4.0 * p.omega_b) - p.omega_c / 4.0
}

/// Superradiant critical coupling `sqrt(ω_c ω_b)/2` for `D = 0`, `g1 = g2`.
pub fn critical_coupling(omega_c: f64, omega_b: f64) -> f64 {
    (omega_c * omega_b).sqrt() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn iso(wc: f64, wb: f64, g: f64, d: f64) -> ModelParams {
        ModelParams::isotropic(wc, wb, g, d).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModelParams::new(0.0, 1.0, 0.1, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.1, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, -0.1, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, 0.1, -1e-3).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 0.1, 0.1, 0.0).is_err());
    }

    #[test]
    fn invalid_squeezing_is_an_error() {
        let p = ModelParams::new(1.0, 1.0, 1.2, 0.1, 0.0).unwrap();
        assert!(!p.squeezing_valid());
        assert!(matches!(
            polariton_frequencies(&p),
            Err(HopfieldError::InvalidSqueezing { .. })
        ));
        assert!(p.derived().is_err());
    }

    #[test]
    fn uncoupled_resonant_oscillators() {
        let s = polariton_frequencies(&iso(1.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(s.phase, Phase::Normal);
        assert_relative_eq!(s.omega_x(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.omega_y().unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn superradiant_point_is_critical() {
        let s = polariton_frequencies(&iso(1.0, 1.0, 0.5, 0.0)).unwrap();
        assert_eq!(s.phase, Phase::Critical);
        assert_eq!(s.omega_y().unwrap(), 0.0);
        let beyond = polariton_frequencies(&iso(1.0, 1.0, 0.6, 0.0)).unwrap();
        assert_eq!(beyond.phase, Phase::Unstable);
        assert!(beyond.omega_y().is_err());
    }

    #[test]
    fn frozen_isotropic_value() {
        // Confirmed against truncated-Fock gaps at cutoff 150.
        let s = polariton_frequencies(&iso(1.0, 1.0, 0.3, 0.09)).unwrap();
        assert_relative_eq!(s.omega_x(), 1.344_030_650_891_055, epsilon = 1e-12);
        assert_relative_eq!(s.omega_y().unwrap(), 0.744_030_650_891_055, epsilon = 1e-12);
    }

    #[test]
    fn rwa_examples() {
        let (x, y) = rwa_frequencies_raw(1.0, 1.0, 0.0);
        assert_eq!((x, y), (1.0, 1.0));
        let (x, y) = rwa_frequencies_raw(1.0, 1.0, 0.2);
        assert_relative_eq!(x, 1.2, epsilon = 1e-15);
        assert_relative_eq!(y, 0.8, epsilon = 1e-15);
        let p = ModelParams::new(1.0, 2.0, 0.3, 0.0, 0.0).unwrap();
        let s = polariton_frequencies(&p).unwrap();
        let (x, y) = rwa_frequencies(&p);
        // g2 = D = 0 is number conserving, so the exact frequencies are the
        // RWA ones.
        assert_relative_eq!(s.omega_x(), x, epsilon = 1e-12);
        assert_relative_eq!(s.omega_y().unwrap(), y, epsilon = 1e-12);
    }

    #[test]
    fn levels_and_collapse() {
        let p = iso(1.0, 1.0, 0.3, 0.09);
        assert_eq!(energy_level(&p, 0, 0, true).unwrap(), 0.0);
        let crit = iso(1.0, 1.0, 0.5, 0.0);
        for n in 0..20 {
            assert_eq!(energy_level(&crit, 0, n, true).unwrap(), 0.0);
        }
        let dsc = iso(1.0, 1.0, 3.0, 9.0);
        let wx = polariton_frequencies(&dsc).unwrap().omega_x();
        for m in 1..10 {
            let step = energy_level(&dsc, m, 0, false).unwrap() - energy_level(&dsc, m - 1, 0, false).unwrap();
            assert_relative_eq!(step, wx, epsilon = 1e-12);
        }
        assert!(matches!(
            energy_level(&iso(1.0, 1.0, 0.7, 0.0), 1, 0, true),
            Err(HopfieldError::UnstablePhase { .. })
        ));
    }

    #[test]
    fn ladder_is_sorted() {
        let l = energy_ladder(&iso(1.0, 1.0, 0.35, 0.1225), 4, 4, true).unwrap();
        assert_eq!(l.len(), 25);
        assert!(l.windows(2).all(|w| w[0].energy <= w[1].energy));
        assert_eq!((l[0].m, l[0].n), (0, 0));
        let d = polariton_dispersion(&iso(1.0, 1.0, 0.35, 0.1225), (1, 0), (0, 0)).unwrap();
        let s = polariton_frequencies(&iso(1.0, 1.0, 0.35, 0.1225)).unwrap();
        assert_relative_eq!(d, s.omega_x(), epsilon = 1e-15);
    }

    #[test]
    fn critical_quantities() {
        assert_relative_eq!(critical_diamagnetic(&iso(1.0, 1.0, 0.5, 0.0)), 0.0, epsilon = 1e-15);
        let p = ModelParams::new(1.0, 2.0, 0.4, 0.6, 0.0).unwrap();
        assert_relative_eq!(critical_diamagnetic(&p), -0.125, epsilon = 1e-15);
        // D_crit < 0 means D = 0 is already bounded below.
        assert_eq!(polariton_frequencies(&p).unwrap().phase, Phase::Normal);
        assert_eq!(critical_coupling(1.0, 1.0), 0.5);
        assert_eq!(critical_coupling(1.0, 4.0), 1.0);
        assert_eq!(critical_coupling(2.0, 2.0), 1.0);
        let at = iso(2.0, 2.0, critical_coupling(2.0, 2.0), 0.0);
        assert_eq!(polariton_frequencies(&at).unwrap().phase, Phase::Critical);
    }

    #[test]
    fn theta_limit_at_equal_squeezed_frequencies() {
        // Resonant, D = 0 and g2 = g1 gives w1 ≠ w2 in general; pick the
        // degenerate case g = 0 with Ωx = Ωy.
        let d = iso(1.0, 1.0, 0.0, 0.0).derived().unwrap();
        assert_eq!(d.theta, std::f64::consts::FRAC_PI_4);
    }

    #[test]
    fn rule_parsing() {
        assert_eq!("trk".parse::<DiamagneticRule>().unwrap(), DiamagneticRule::Trk);
        assert_eq!("scaled(0.5)".parse::<DiamagneticRule>().unwrap(), DiamagneticRule::Scaled(0.5));
        assert_eq!("explicit:0.2".parse::<DiamagneticRule>().unwrap(), DiamagneticRule::Explicit(0.2));
        assert!("foo".parse::<DiamagneticRule>().is_err());
        let p = DiamagneticRule::Rwa.params(1.0, 1.0, 0.3).unwrap();
        assert_eq!((p.g1(), p.g2(), p.diamagnetic()), (0.3, 0.0, 0.0));
    }

    #[test]
    fn trk_resonant_monotonicity() {
        let mut last = (1.0, 1.0);
        for i in 1..=300 {
            let g = i as f64 * 0.01;
            let s = polariton_frequencies(&DiamagneticRule::Trk.params(1.0, 1.0, g).unwrap()).unwrap();
            let cur = (s.omega_x(), s.omega_y().unwrap());
            assert!(cur.0 > last.0 && cur.1 < last.1, "g = {g}");
            last = cur;
        }
    }

    proptest! {
        #[test]
        fn isotropic_reduction(wc in 0.2f64..3.0, wb in 0.2f64..3.0, g in 0.0f64..2.0, d in 0.0f64..2.0) {
            let s = polariton_frequencies(&iso(wc, wb, g, d)).unwrap();
            let (x, y) = isotropic_frequencies_sq(wc, wb, g, d);
            let scale = x.abs().max(1.0);
            prop_assert!((s.omega_x_sq - x).abs() <= 1e-12 * scale);
            prop_assert!((s.omega_y_sq - y).abs() <= 1e-11 * scale);
        }

        #[test]
        fn chain_matches_closed_form(wc in 0.2f64..3.0, wb in 0.2f64..3.0, g1 in 0.0f64..1.5, g2 in 0.0f64..1.5, d in 0.0f64..1.0) {
            let p = ModelParams::new(wc, wb, g1, g2, d).unwrap();
            prop_assume!(p.lambda2().abs() < 0.95);
            let s = polariton_frequencies(&p).unwrap();
            let (x, y) = p.derived().unwrap().diagonal_frequencies_sq();
            let scale = s.omega_x_sq.abs().max(1.0);
            prop_assert!((s.omega_x_sq - x).abs() <= 1e-11 * scale);
            prop_assert!((s.omega_y_sq - y).abs() <= 1e-10 * scale);
            prop_assert!(s.omega_x_sq >= s.omega_y_sq);
        }

        #[test]
        fn trk_product_identity(wc in 0.2f64..3.0, wb in 0.2f64..3.0, g in 0.0f64..5.0) {
            let s = polariton_frequencies(&DiamagneticRule::Trk.params(wc, wb, g).unwrap()).unwrap();
            let prod = s.omega_x() * s.omega_y().unwrap();
            prop_assert!((prod - wc * wb).abs() <= 1e-12 * wc * wb);
        }

        #[test]
        fn weak_coupling_matches_rwa(wb in 0.5f64..2.0, g in 0.0f64..0.01, trk in proptest::bool::ANY) {
            let rule = if trk { DiamagneticRule::Trk } else { DiamagneticRule::Zero };
            let p = rule.params(1.0, wb, g).unwrap();
            let s = polariton_frequencies(&p).unwrap();
            let (x, y) = rwa_frequencies(&p);
            prop_assert!((s.omega_x() - x).abs() < 1e-3);
            prop_assert!((s.omega_y().unwrap() - y).abs() < 1e-3);
        }

        #[test]
        fn trk_always_above_critical_diamagnetic(wc in 0.2f64..3.0, wb in 0.2f64..3.0, g in 0.0f64..5.0) {
            let p = DiamagneticRule::Trk.params(wc, wb, g).unwrap();
            prop_assert!(p.diamagnetic() > critical_diamagnetic(&p));
        }
    }
}
