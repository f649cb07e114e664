use serde::Serialize;

use crate::error::{HopfieldError, Result};
use crate::model::{polariton_frequencies, ModelParams, Phase};

/// Relative weight of the discarded levels that is tolerated.
const TAIL_TOLERANCE: f64 = 1e-12;
const MAX_TERMS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderThermo {
    pub z: f64,
    pub ln_z: f64,
    pub u: f64,
    pub c: f64,
    /// Levels kept per ladder, `(m_max, n_max)`.
    pub cutoff: (usize, usize),
    /// Bound on the discarded fraction of `Z`.
    pub tail: f64,
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Ladder length for a mode with `x = ω/T`, `q = e^{−x}`: stops once the
/// level weight, including its `(jx)²` heat-capacity leverage, is below
/// `tol` of the first excitation's contribution.
fn levels_needed(x: f64, tol: f64) -> usize {
    let q = (-x).exp();
    if q == 0.0 {
        return 1;
    }
    let scale = tol * q * x.min(1.0).powi(2) * (1.0 - q).powi(2);
    let mut j = 1usize;
    while q.powi(j as i32) * (1.0 + (j as f64 * x).powi(2)) > scale && j < MAX_TERMS {
        j += 1;
    }
    j
}

/// `Z`, `U`, `C` summed directly over `E_mn = ω_x (m + ½) + ω_y (n + ½)`.
/// With `cutoff = None` the ladders are cut where the discarded levels no
/// longer matter at `1e-14` relative accuracy.
pub fn ladder_thermo(p: &ModelParams, t: f64, cutoff: Option<usize>) -> Result<LadderThermo> {
    if !(t.is_finite() && t > 0.0) {
        return Err(HopfieldError::InvalidParameter {
            name: "temperature",
            value: t,
            reason: "must be positive",
        });
    }
    let s = polariton_frequencies(p)?;
    match s.phase {
        Phase::Normal => {}
        Phase::Critical => return Err(HopfieldError::CriticalPhase),
        Phase::Unstable => {
            return Err(HopfieldError::UnstablePhase {
                omega_y_sq: s.omega_y_sq,
            })
        }
    }
    let (wx, wy) = s.frequencies()?;
    let (qx, qy) = ((-wx / t).exp(), (-wy / t).exp());
    let (mx, ny) = match cutoff {
        Some(n) => (n, n),
        None => (levels_needed(wx / t, 0.01 * TAIL_TOLERANCE), levels_needed(wy / t, 0.01 * TAIL_TOLERANCE)),
    };
    let tail = qx.powi(mx as i32 + 1) / (1.0 - qx) + qy.powi(ny as i32 + 1) / (1.0 - qy);
    if tail > TAIL_TOLERANCE || (mx + 1).saturating_mul(ny + 1) > MAX_TERMS {
        return Err(HopfieldError::TailNotConverged { tail });
    }

    let e0 = 0.5 * (wx + wy);
    let excitation = |m: usize, n: usize| wx * m as f64 + wy * n as f64;
    let mut z = Neumaier::default();
    let mut first = Neumaier::default();
    for m in 0..=mx {
        for n in 0..=ny {
            let e = excitation(m, n);
            let w = (-e / t).exp();
            z.add(w);
            first.add(w * e);
        }
    }
    let z_rel = z.value();
    let mean = first.value() / z_rel;
    let mut second = Neumaier::default();
    for m in 0..=mx {
        for n in 0..=ny {
            let e = excitation(m, n);
            second.add((-e / t).exp() * (e - mean).powi(2));
        }
    }
    let ln_z = z_rel.ln() - e0 / t;
    Ok(LadderThermo {
        z: ln_z.exp(),
        ln_z,
        u: e0 + mean,
        c: second.value() / z_rel / (t * t),
        cutoff: (mx, ny),
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DiamagneticRule;
    use crate::thermometry::thermo_point;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn matches_closed_forms() {
        for (p, t) in [
            (ModelParams::isotropic(1.0, 1.0, 0.3, 0.09).unwrap(), 0.5),
            (DiamagneticRule::Trk.params(1.0, 1.0, 0.3).unwrap(), 0.5),
            (ModelParams::new(1.0, 1.4, 0.3, 0.1, 0.05).unwrap(), 2.0),
            (DiamagneticRule::Zero.params(1.0, 1.0, 0.45).unwrap(), 0.05),
        ] {
            let l = ladder_thermo(&p, t, None).unwrap();
            let c = thermo_point(&p, t).unwrap();
            assert!(close(l.z, c.z, 1e-10) && close(l.u, c.u, 1e-10) && close(l.c, c.c, 1e-10), "{l:?} {c:?}");
            assert!(l.tail <= 1e-12);
        }
    }

    #[test]
    fn fixed_cutoff_and_tail() {
        let p = ModelParams::isotropic(1.0, 1.0, 0.3, 0.09).unwrap();
        let l = ladder_thermo(&p, 0.5, Some(200)).unwrap();
        assert!(close(l.z, thermo_point(&p, 0.5).unwrap().z, 1e-10));
        assert!(matches!(ladder_thermo(&p, 5.0, Some(10)), Err(HopfieldError::TailNotConverged { .. })));
    }

    #[test]
    fn gapped_heat_capacity_vanishes() {
        let p = DiamagneticRule::Trk.params(1.0, 1.0, 0.3).unwrap();
        let c: Vec<f64> = [0.1, 0.05, 0.02].iter().map(|&t| ladder_thermo(&p, t, None).unwrap().c).collect();
        assert!(c[0] > c[1] && c[1] > c[2] && c[2] < 1e-10);
    }

    #[test]
    fn equal_frequencies_geometric() {
        let p = ModelParams::isotropic(1.0, 1.0, 0.0, 0.0).unwrap();
        let l = ladder_thermo(&p, 0.1, None).unwrap();
        let zx = 0.5 / (0.5f64 / 0.1).sinh();
        assert!(close(l.z, zx * zx, 1e-12));
    }
}
