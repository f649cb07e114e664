//! Heisenberg-picture field operator for `g1 = g2 = g`.
//!
//! The evolved field operator is linear in the bare operators,
//! `a(t) = f1(t) a + f2(t) a† + f3(t) b + f4(t) b†`, with
//!
//! ```text
//! f_j(t) = μ_j1 e^{+iω_x t} + μ_j2 e^{−iω_x t} + μ_j3 e^{+iω_y t} + μ_j4 e^{−iω_y t}
//! ```
//!
//! The coefficient table is expressed through the mixing angle `φ` of the
//! field and matter quadratures, `tan 2φ = 2λ / (ω_c² + 4Dω_c − ω_b²)` with
//! `λ = 2g sqrt(ω_c ω_b)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{HopfieldError, Result};
use crate::model::{polariton_frequencies, ModelParams, Phase};

/// Sign of the exponent attached to `μ_jk`: `e^{s_k i ω_k t}`.
pub const EXPONENT_SIGNS: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

/// Fock product `|field, matter⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockProduct {
    pub field: u32,
    pub matter: u32,
}

impl FockProduct {
    pub const fn new(field: u32, matter: u32) -> Self {
        Self { field, matter }
    }

    /// `|1, 0⟩`: one photon, matter in its ground state.
    pub const FIELD_EXCITED: FockProduct = FockProduct::new(1, 0);
    /// `|0, 1⟩`: field vacuum, one matter excitation.
    pub const MATTER_EXCITED: FockProduct = FockProduct::new(0, 1);

    /// The closed-form correlation was derived for `n ≠ m`; the formula is
    /// still exact for `n = m` but such results are flagged.
    pub fn outside_stated_domain(&self) -> bool {
        self.field == self.matter
    }

    /// Weights of `f_j*(t1) f_j(t2)` in `⟨n,m| a†(t1) a(t2) |n,m⟩`:
    /// `(n, n + 1, m, m + 1)`.
    pub fn correlation_weights(&self) -> [f64; 4] {
        let n = self.field as f64;
        let m = self.matter as f64;
        [n, n + 1.0, m, m + 1.0]
    }
}

impl std::fmt::Display for FockProduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{},{}>", self.field, self.matter)
    }
}

impl std::str::FromStr for FockProduct {
    type Err = String;

    /// `"10"`, `"1,0"` or `"|1,0>"`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('|').trim_end_matches('>');
        let parts: Vec<&str> = if t.contains(',') {
            t.split(',').collect()
        } else if t.len() == 2 {
            vec![&t[..1], &t[1..]]
        } else {
            return Err(format!("cannot parse Fock state `{s}`"));
        };
        let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("`{s}`: {e}"));
        match parts.as_slice() {
            [n, m] => Ok(FockProduct::new(parse(n)?, parse(m)?)),
            _ => Err(format!("cannot parse Fock state `{s}`")),
        }
    }
}

/// The 4×4 coefficient table `μ_jk` and mixing angle `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuMatrix {
    mu: [[C64; 4]; 4],
    phi: f64,
    lambda: f64,
    omega_x: f64,
    omega_y: f64,
}

/// Coefficient table for an isotropic model in the normal phase.
pub fn mu_coefficients(p: &ModelParams) -> Result<MuMatrix> {
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
    let (wc, wb, d, g) = (p.omega_c(), p.omega_b(), p.diamagnetic(), p.g1());
    let wx = spectrum.omega_x();
    let wy = spectrum.omega_y()?;

    let lambda = 2.0 * g * (wc * wb).sqrt();
    let detuning = wc * wc + 4.0 * d * wc - wb * wb;
    let phi = 0.5 * (2.0 * lambda).atan2(detuning);

    let c2 = phi.cos().powi(2);
    let s2 = phi.sin().powi(2);
    let sn = (2.0 * phi).sin();
    let r = (wb * wc).sqrt();
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);

    let mu = [
        [
            re(-c2 * (wc - wx).powi(2) / (4.0 * wc * wx)),
            re(c2 * (wc + wx).powi(2) / (4.0 * wc * wx)),
            re(-s2 * (wc - wy).powi(2) / (4.0 * wc * wy)),
            re(s2 * (wc + wy).powi(2) / (4.0 * wc * wy)),
        ],
        [
            re(c2 * (wc - wx) * (wc + wx) / (4.0 * wc * wx)),
            re(c2 * (wx * wx - wc * wc) / (4.0 * wc * wx)),
            re(s2 * (wc - wy) * (wc + wy) / (4.0 * wc * wy)),
            re(s2 * (wy * wy - wc * wc) / (4.0 * wc * wy)),
        ],
        [
            im(sn * (wb - wx) * (wc - wx) / (8.0 * wx * r)),
            im(-sn * (wb + wx) * (wc + wx) / (8.0 * wx * r)),
            im(sn * (wb - wy) * (wy - wc) / (8.0 * wy * r)),
            im(sn * (wb + wy) * (wc + wy) / (8.0 * wy * r)),
        ],
        [
            im(sn * (wb + wx) * (wc - wx) / (8.0 * wx * r)),
            im(-sn * (wb - wx) * (wc + wx) / (8.0 * wx * r)),
            im(-sn * (wb + wy) * (wc - wy) / (8.0 * wy * r)),
            im(sn * (wb - wy) * (wc + wy) / (8.0 * wy * r)),
        ],
    ];

    Ok(MuMatrix {
        mu,
        phi,
        lambda,
        omega_x: wx,
        omega_y: wy,
    })
}

impl MuMatrix {
    /// `μ_jk` with zero-based `j, k`.
    pub fn entry(&self, j: usize, k: usize) -> C64 {
        self.mu[j][k]
    }

    pub fn table(&self) -> &[[C64; 4]; 4] {
        &self.mu
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `λ = 2g sqrt(ω_c ω_b)`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega_x(&self) -> f64 {
        self.omega_x
    }

    pub fn omega_y(&self) -> f64 {
        self.omega_y
    }

    /// Angular frequency multiplying `i t` in the exponent of column `k`.
    pub fn exponent(&self, k: usize) -> f64 {
        let w = if k < 2 { self.omega_x } else { self.omega_y };
        EXPONENT_SIGNS[k] * w
    }

    /// `[f1(t), f2(t), f3(t), f4(t)]`.
    pub fn field_coefficients(&self, t: f64) -> [C64; 4] {
        let phases: [C64; 4] = std::array::from_fn(|k| C64::from_polar(1.0, self.exponent(k) * t));
        std::array::from_fn(|j| (0..4).map(|k| self.mu[j][k] * phases[k]).sum())
    }

    /// `df_j/dt` at `t = 0`.
    pub fn derivative_at_zero(&self) -> [C64; 4] {
        std::array::from_fn(|j| {
            (0..4)
                .map(|k| self.mu[j][k] * C64::new(0.0, self.exponent(k)))
                .sum()
        })
    }

    /// `|f1|² − |f2|² + |f3|² − |f4|²`, equal to one when `[a(t), a†(t)] = 1`.
    pub fn commutator(&self, t: f64) -> f64 {
        let f = self.field_coefficients(t);
        f[0].norm_sqr() - f[1].norm_sqr() + f[2].norm_sqr() - f[3].norm_sqr()
    }
}

/// `⟨n,m| a†(t1) a(t2) |n,m⟩`.
pub fn autocorrelation(mu: &MuMatrix, state: FockProduct, t1: f64, t2: f64) -> C64 {
    let f1 = mu.field_coefficients(t1);
    let f2 = mu.field_coefficients(t2);
    state
        .correlation_weights()
        .iter()
        .zip(f1.iter().zip(f2.iter()))
        .map(|(w, (a, b))| a.conj() * b * *w)
        .sum()
}

/// `C(t1, t2) = conj(C(t2, t1))` on every pair of sample times.
pub fn hermitian_check(mu: &MuMatrix, state: FockProduct, times: &[f64], tol: f64) -> bool {
    times.iter().all(|&t1| {
        times.iter().all(|&t2| {
            let a = autocorrelation(mu, state, t1, t2);
            let b = autocorrelation(mu, state, t2, t1).conj();
            (a - b).norm() <= tol * a.norm().max(1.0)
        })
    })
}

/// Generator `G` of the closed linear system
/// `d/dt (a, a†, b, b†)ᵀ = G (a, a†, b, b†)ᵀ` obtained from `i[H, ·]`.
///
/// Row `j` lists the coefficients of `i[H, O_j]` on `(a, a†, b, b†)`, so the
/// first row of `exp(G t)` is `(f1, f2, f3, f4)(t)`. Valid for any `g1, g2`.
pub fn heisenberg_generator(p: &ModelParams) -> [[C64; 4]; 4] {
    let (wc, wb, d, g1, g2) = (p.omega_c(), p.omega_b(), p.diamagnetic(), p.g1(), p.g2());
    let c = |re: f64, im: f64| C64::new(re, im);
    [
        [c(0.0, -(wc + 2.0 * d)), c(0.0, -2.0 * d), c(-g1, 0.0), c(g2, 0.0)],
        [c(0.0, 2.0 * d), c(0.0, wc + 2.0 * d), c(g2, 0.0), c(-g1, 0.0)],
        [c(g1, 0.0), c(g2, 0.0), c(0.0, -wb), c(0.0, 0.0)],
        [c(g2, 0.0), c(g1, 0.0), c(0.0, 0.0), c(0.0, wb)],
    ]
}
