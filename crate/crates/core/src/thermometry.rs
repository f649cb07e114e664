//! Equilibrium thermometry with the two polariton modes as a probe.
//!
//! The thermal state factorizes over the normal modes, so with `x = ω/(2T)`
//!
//! ```text
//! Z = Π csch(x)/2,   U = Σ (ω/2) coth(x),   C = Σ x² csch²(x),   F = C/T²
//! ```
//!
//! where `F` is the quantum Fisher information for temperature. For `D = 0`
//! at resonance the lower frequency `ω_y² = ω_c² − 2gω_c` turns negative past
//! `g = ω_c/2`; the QFI is then continued with `csch(i y) = −i csc(y)`, which
//! produces a sequence of poles at `g = ω_c/2 + 2(nπT)²/ω_c`.

use serde::{Deserialize, Serialize};

use crate::error::{HopfieldError, Result};
use crate::model::{polariton_frequencies, ModelParams, Phase};

/// `|sin y|` below which a continued mode is reported as sitting on a pole.
pub const POLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchFlag {
    Hyperbolic,
    Trigonometric,
    PoleNearby,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub temperature: f64,
    pub z: f64,
    pub ln_z: f64,
    pub u: f64,
    pub c: f64,
    pub qfi: f64,
    /// `T sqrt(F)`.
    pub snr: f64,
    /// Flags for the `x` and `y` modes.
    pub branch: [BranchFlag; 2],
    /// Set for `g1 ≠ g2`, which the closed forms support but the critical
    /// analysis does not cover.
    pub anisotropic: bool,
}

/// `x csch x`, equal to one at `x = 0`.
pub fn x_csch(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return 1.0;
    }
    if x > 700.0 {
        return 0.0;
    }
    2.0 * x * (-x).exp() / -(-2.0 * x).exp_m1()
}

/// `coth x` for `x > 0`.
pub fn coth(x: f64) -> f64 {
    let e = (-2.0 * x).exp();
    (1.0 + e) / -(-2.0 * x).exp_m1()
}

/// `ln(csch(x)/2) = −x − ln(1 − e^{−2x})`.
fn ln_mode_partition(x: f64) -> f64 {
    -x - (-(-2.0 * x).exp_m1()).ln()
}

fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(HopfieldError::InvalidParameter {
            name: "temperature",
            value: t,
            reason: "must be positive",
        })
    }
}

fn normal_frequencies(p: &ModelParams) -> Result<(f64, f64)> {
    let s = polariton_frequencies(p)?;
    match s.phase {
        Phase::Normal => s.frequencies(),
        Phase::Critical => Err(HopfieldError::CriticalPhase),
        Phase::Unstable => Err(HopfieldError::UnstablePhase {
            omega_y_sq: s.omega_y_sq,
        }),
    }
}

/// `Z = Z_x Z_y`, `Z_{x,y} = csch(ω/(2T))/2`.
pub fn partition_function(p: &ModelParams, t: f64) -> Result<f64> {
    check_temperature(t)?;
    let (wx, wy) = normal_frequencies(p)?;
    Ok((ln_mode_partition(wx / (2.0 * t)) + ln_mode_partition(wy / (2.0 * t))).exp())
}

/// Thermodynamics of two independent oscillators. A zero frequency is
/// allowed and contributes its `x → 0` limits (`Z = ∞`, `C = 1`).
pub fn thermo_from_frequencies(omega_x: f64, omega_y: f64, t: f64) -> Result<ThermoPoint> {
    check_temperature(t)?;
    for (name, w) in [("omega_x", omega_x), ("omega_y", omega_y)] {
        if !(w.is_finite() && w >= 0.0) {
            return Err(HopfieldError::InvalidParameter {
                name,
                value: w,
                reason: "mode frequency must be non-negative",
            });
        }
    }
    let modes = [omega_x, omega_y];
    let mut ln_z = 0.0;
    let mut u = 0.0;
    let mut c = 0.0;
    let mut qfi = 0.0;
    for &w in &modes {
        let x = w / (2.0 * t);
        if x == 0.0 {
            ln_z = f64::INFINITY;
            u += t;
        } else {
            ln_z += ln_mode_partition(x);
            u += 0.5 * w * coth(x);
        }
        let xc = x_csch(x);
        c += xc * xc;
        // (ω/(2T²))² csch²(ω/(2T)), written without going through C.
        let a = w / (2.0 * t * t);
        qfi += if x == 0.0 { 1.0 / (t * t) } else { (a * xc / x).powi(2) };
    }
    debug_assert!(
        (qfi - c / (t * t)).abs() <= 1e-12 * qfi.max(f64::MIN_POSITIVE),
        "F = C/T² violated: {qfi} vs {}",
        c / (t * t)
    );
    Ok(ThermoPoint {
        temperature: t,
        z: ln_z.exp(),
        ln_z,
        u,
        c,
        qfi,
        snr: t * qfi.sqrt(),
        branch: [BranchFlag::Hyperbolic; 2],
        anisotropic: false,
    })
}

pub fn thermo_point(p: &ModelParams, t: f64) -> Result<ThermoPoint> {
    check_temperature(t)?;
    let (wx, wy) = normal_frequencies(p)?;
    let mut point = thermo_from_frequencies(wx, wy, t)?;
    point.anisotropic = !p.is_isotropic();
    Ok(point)
}

/// QFI of the resonant `D = 0` probe, continued past the critical coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalQfi {
    pub g: f64,
    pub temperature: f64,
    pub qfi: f64,
    pub branch: BranchFlag,
    /// The thermal state does not exist for `g > ω_c/2`; the value is the
    /// formal continuation.
    pub formal_continuation: bool,
}

/// ```text
/// F = ω_x²/(4T⁴) csch²(ω_x/2T) + ω_y²/(4T⁴) csch²(ω_y/2T)
/// ```
/// with `ω_{x,y}² = ω_c² ± 2gω_c`. For `ω_y² < 0` the second term becomes
/// `|ω_y²|/(4T⁴) csc²(|ω_y|/2T)`.
pub fn qfi_critical_d0(omega_c: f64, g: f64, t: f64) -> Result<CriticalQfi> {
    check_temperature(t)?;
    if !(omega_c > 0.0 && g >= 0.0 && g.is_finite()) {
        return Err(HopfieldError::InvalidParameter {
            name: "g",
            value: g,
            reason: "need omega_c > 0 and finite g >= 0",
        });
    }
    let wx = (omega_c * omega_c + 2.0 * g * omega_c).sqrt();
    let wy_sq = omega_c * omega_c - 2.0 * g * omega_c;
    let first = (x_csch(wx / (2.0 * t)) / t).powi(2);
    let (second, branch) = if wy_sq >= 0.0 {
        ((x_csch(wy_sq.sqrt() / (2.0 * t)) / t).powi(2), BranchFlag::Hyperbolic)
    } else {
        let y = (-wy_sq).sqrt() / (2.0 * t);
        let s = y.sin();
        if s.abs() < POLE_TOLERANCE {
            return Err(HopfieldError::PoleAt {
                g,
                n: (y / std::f64::consts::PI).round() as u64,
            });
        }
        ((y / s / t).powi(2), BranchFlag::Trigonometric)
    };
    Ok(CriticalQfi {
        g,
        temperature: t,
        qfi: first + second,
        branch,
        formal_continuation: wy_sq < 0.0,
    })
}

/// Couplings where the continued QFI diverges:
/// `g_n = ω_c/2 + 2(nπT)²/ω_c`.
pub fn pole_locus(omega_c: f64, t: f64, n: u64) -> f64 {
    let k = n as f64 * std::f64::consts::PI * t;
    omega_c / 2.0 + 2.0 * k * k / omega_c
}

/// Poles located by bracketing sign changes of `sin(|ω_y|/2T)` on a uniform
/// grid of `samples` couplings in `(ω_c/2, g_max]`, then bisecting.
pub fn find_poles(omega_c: f64, t: f64, g_max: f64, samples: usize) -> Vec<f64> {
    let arg = |g: f64| ((2.0 * g * omega_c - omega_c * omega_c).max(0.0)).sqrt() / (2.0 * t);
    let f = |g: f64| arg(g).sin();
    let g0 = omega_c / 2.0;
    let h = (g_max - g0) / samples as f64;
    let mut poles = Vec::new();
    let mut a = g0 + 0.5 * h;
    let mut fa = f(a);
    for i in 1..samples {
        let b = g0 + (i as f64 + 0.5) * h;
        let fb = f(b);
        if fa == 0.0 {
            poles.push(a);
        } else if fa * fb < 0.0 {
            poles.push(bisect(&f, a, b));
        }
        a = b;
        fa = fb;
    }
    poles
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    while b - a > 4.0 * f64::EPSILON * b.abs() {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub g: f64,
    /// `T sqrt(F)`; `None` on a pole.
    pub snr: Option<f64>,
    pub qfi: Option<f64>,
    pub branch: BranchFlag,
    pub pole: Option<u64>,
    pub formal_continuation: bool,
}

/// `T sqrt(F)` of the resonant `D = 0` probe across `g_grid`.
pub fn snr_curve(omega_c: f64, t: f64, g_grid: &[f64]) -> Result<Vec<SnrPoint>> {
    g_grid
        .iter()
        .map(|&g| match qfi_critical_d0(omega_c, g, t) {
            Ok(q) => Ok(SnrPoint {
                g,
                snr: Some(t * q.qfi.sqrt()),
                qfi: Some(q.qfi),
                branch: q.branch,
                pole: None,
                formal_continuation: q.formal_continuation,
            }),
            Err(HopfieldError::PoleAt { n, .. }) => Ok(SnrPoint {
                g,
                snr: None,
                qfi: None,
                branch: BranchFlag::PoleNearby,
                pole: Some(n),
                formal_continuation: true,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// Smallest temperature uncertainty after `n` independent measurements,
/// `ΔT = 1/sqrt(n F)`.
pub fn cramer_rao_bound(qfi: f64, n: u64) -> f64 {
    1.0 / (n as f64 * qfi).sqrt()
}

/// Equilibrium critical coupling of the Dicke model,
/// `λ_c = sqrt(ω_c ω_z coth(ω_z/(2T)))/2`.
pub fn dicke_equilibrium_critical_coupling(omega_c: f64, omega_z: f64, t: f64) -> Result<f64> {
    check_temperature(t)?;
    Ok((omega_c * omega_z * coth(omega_z / (2.0 * t))).sqrt() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rwa_frequencies_raw, DiamagneticRule};
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn special_functions() {
        for x in [1e-8, 1e-3, 0.5, 1.0, 3.0, 20.0] {
            assert!(close(x_csch(x), x / x.sinh(), 1e-14), "{x}");
            assert!(close(coth(x), 1.0 / x.tanh(), 1e-14), "{x}");
            assert!(close(ln_mode_partition(x), (0.5 / x.sinh()).ln(), 1e-13), "{x}");
        }
        assert_eq!(x_csch(0.0), 1.0);
        assert_eq!(x_csch(1e4), 0.0);
    }

    #[test]
    fn ground_state_dominates_at_low_temperature() {
        let p = thermo_from_frequencies(1.0, 1.0, 0.01).unwrap();
        assert!(close(p.ln_z, -1.0 / 0.01, 1e-12));
        assert!(p.c < 1e-38);
    }

    #[test]
    fn classical_limits() {
        let t = 50.0 * 1.5;
        let p = thermo_from_frequencies(1.5, 0.7, t).unwrap();
        assert!(close(p.c, 2.0, 1e-3));
        assert!(close(p.qfi * t * t, 2.0, 1e-3));
        assert!(close((p.ln_z).exp(), (t / 1.5) * (t / 0.7), 1e-3));
    }

    #[test]
    fn qfi_grows_with_coupling_under_trk() {
        let t = 0.1;
        let values: Vec<f64> = [0.0, 0.2, 0.5, 1.0, 2.0]
            .iter()
            .map(|&g| thermo_point(&DiamagneticRule::Trk.params(1.0, 1.0, g).unwrap(), t).unwrap().qfi)
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
    }

    #[test]
    fn critical_and_unstable_points_are_errors() {
        let crit = ModelParams::isotropic(1.0, 1.0, 0.5, 0.0).unwrap();
        assert_eq!(partition_function(&crit, 0.1), Err(HopfieldError::CriticalPhase));
        let bad = ModelParams::isotropic(1.0, 1.0, 0.7, 0.0).unwrap();
        assert!(matches!(thermo_point(&bad, 0.1), Err(HopfieldError::UnstablePhase { .. })));
        assert!(thermo_point(&ModelParams::isotropic(1.0, 1.0, 0.2, 0.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn pole_locus_values() {
        assert!((pole_locus(1.0, 0.05, 1) - 0.549348022005446).abs() < 1e-12);
        let poles = find_poles(1.0, 0.05, 2.0, 200_000);
        for (n, g) in poles.iter().take(5).enumerate() {
            assert!((g - pole_locus(1.0, 0.05, n as u64 + 1)).abs() < 1e-10);
        }
        assert!(matches!(
            qfi_critical_d0(1.0, pole_locus(1.0, 0.05, 2), 0.05),
            Err(HopfieldError::PoleAt { n: 2, .. })
        ));
    }

    #[test]
    fn poles_move_outward_with_temperature() {
        let cold = find_poles(1.0, 0.05, 3.0, 100_000);
        let warm = find_poles(1.0, 0.1, 3.0, 100_000);
        assert!(warm[0] > cold[0]);
        assert!(cold.len() > warm.len());
    }

    #[test]
    fn critical_point_qfi_scales_as_inverse_square() {
        for t in [1e-3, 3e-3, 1e-2] {
            let q = qfi_critical_d0(1.0, 0.5, t).unwrap();
            assert!(close(q.qfi * t * t, 1.0, 1e-12));
            assert!(!q.formal_continuation);
        }
        let above = qfi_critical_d0(1.0, 0.52, 0.05).unwrap();
        assert_eq!(above.branch, BranchFlag::Trigonometric);
        assert!(above.formal_continuation && above.qfi > 0.0);
    }

    #[test]
    fn matches_general_form_below_critical() {
        for g in [0.0, 0.1, 0.3, 0.45] {
            let p = ModelParams::isotropic(1.0, 1.0, g, 0.0).unwrap();
            let a = thermo_point(&p, 0.2).unwrap().qfi;
            let b = qfi_critical_d0(1.0, g, 0.2).unwrap().qfi;
            assert!(close(a, b, 1e-12));
        }
    }

    #[test]
    fn gapped_snr_vanishes_at_low_temperature() {
        let s = snr_curve(1.0, 0.01, &[0.3]).unwrap();
        let s2 = snr_curve(1.0, 0.02, &[0.3]).unwrap();
        assert!(s[0].snr.unwrap() < 1e-8 && s[0].snr.unwrap() < s2[0].snr.unwrap());
        let on_pole = snr_curve(1.0, 0.05, &[pole_locus(1.0, 0.05, 1)]).unwrap();
        assert_eq!(on_pole[0].branch, BranchFlag::PoleNearby);
        assert_eq!(on_pole[0].pole, Some(1));
    }

    #[test]
    fn measurement_scaling() {
        assert!(close(cramer_rao_bound(3.0, 1) / cramer_rao_bound(3.0, 4), 2.0, 1e-15));
    }

    #[test]
    fn critical_heat_capacity_stays_finite() {
        // Third-law tension at the critical point: C → 1 from the soft mode.
        let c: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&t| thermo_from_frequencies(2f64.sqrt(), 0.0, t).unwrap().c)
            .collect();
        assert!(c.iter().all(|c| close(*c, 1.0, 1e-12)));
    }

    #[test]
    fn rwa_frequencies_give_finite_qfi() {
        for g in [0.1, 0.5, 0.9, 0.99] {
            let (x, y) = rwa_frequencies_raw(1.0, 1.0, g);
            let q = thermo_from_frequencies(x, y, 0.3).unwrap().qfi;
            assert!(q.is_finite() && q > 0.0);
        }
    }

    #[test]
    fn dicke_coupling() {
        assert!(close(dicke_equilibrium_critical_coupling(1.0, 1.0, 1e-4).unwrap(), 0.5, 1e-12));
        let v = dicke_equilibrium_critical_coupling(1.0, 1.0, 0.5).unwrap();
        assert!(close(v, (1.0 / 1f64.tanh()).sqrt() / 2.0, 1e-14));
        assert!((v - 0.5729388).abs() < 1e-7);
        let hot = dicke_equilibrium_critical_coupling(1.0, 1.0, 1e3).unwrap();
        assert!(close(hot, (2.0f64 * 1e3).sqrt() / 2.0, 1e-6));
    }

    proptest! {
        #[test]
        fn qfi_is_heat_capacity_over_t_squared(wx in 1e-3f64..10.0, wy in 1e-3f64..10.0, t in 1e-3f64..100.0) {
            let p = thermo_from_frequencies(wx.max(wy), wx.min(wy), t).unwrap();
            prop_assert!(close(p.qfi, p.c / (t * t), 1e-12));
            prop_assert!(p.c >= 0.0 && p.c <= 2.0 && p.qfi >= 0.0);
            prop_assert!(p.snr * p.snr <= p.c * (1.0 + 1e-12));
        }

        #[test]
        fn continued_qfi_positive_between_poles(g in 0.5f64..2.0, t in 0.02f64..0.5) {
            match qfi_critical_d0(1.0, g, t) {
                Ok(q) => prop_assert!(q.qfi > 0.0 && q.qfi.is_finite()),
                Err(HopfieldError::PoleAt { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
