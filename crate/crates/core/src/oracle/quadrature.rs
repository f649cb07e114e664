use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::propagate::Propagator;
use crate::dynamics::FockProduct;
use crate::error::{HopfieldError, Result};

/// Physical spectrum from a 2-D trapezoid rule over `[0, t_obs]²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapezoidSpectrum {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest `|Im S| / max Re S`.
    pub max_imag: f64,
    /// Time intervals per axis.
    pub intervals: usize,
}

/// `C(t_i, t_j)` on `n + 1` equispaced nodes per axis.
pub fn correlation_grid(corr: impl Fn(f64, f64) -> C64, t_obs: f64, n: usize) -> DMatrix<C64> {
    let h = t_obs / n as f64;
    DMatrix::from_fn(n + 1, n + 1, |i, j| corr(i as f64 * h, j as f64 * h))
}

/// Same grid with `⟨ψ|a†(t_i) a(t_j)|ψ⟩ = ⟨a(t_i)ψ|a(t_j)ψ⟩` from propagated
/// states, so each node costs one inner product.
pub fn propagated_correlation_grid<P: Propagator>(prop: &P, state: FockProduct, t_obs: f64, n: usize) -> DMatrix<C64> {
    let h = prop.hamiltonian();
    let psi = h.fock_state(state.field as usize, state.matter as usize);
    let times: Vec<f64> = (0..=n).map(|i| t_obs * i as f64 / n as f64).collect();
    let forward = prop.propagate_series(&psi, &times);
    let mut lowered = vec![C64::default(); h.dim()];
    let applied: Vec<Vec<C64>> = forward
        .iter()
        .zip(&times)
        .map(|(v, &t)| {
            h.lower_field(v, &mut lowered);
            prop.propagate(&lowered, -t)
        })
        .collect();
    DMatrix::from_fn(n + 1, n + 1, |i, j| {
        applied[i].iter().zip(&applied[j]).map(|(x, y)| x.conj() * y).sum()
    })
}

pub fn trapezoid_spectrum(grid: &DMatrix<C64>, t_obs: f64, gamma: f64, omegas: &[f64]) -> TrapezoidSpectrum {
    let n = grid.nrows() - 1;
    let h = t_obs / n as f64;
    let weight = |i: usize| if i == 0 || i == n { 0.5 * h } else { h };
    let mut values = Vec::with_capacity(omegas.len());
    let mut imag: f64 = 0.0;
    for &w in omegas {
        // e^{−2Γt} is split between the two factors to keep them bounded.
        let u: Vec<C64> = (0..=n)
            .map(|i| {
                let t = i as f64 * h;
                C64::from_polar(weight(i) * (gamma * (t - t_obs)).exp(), -w * t)
            })
            .collect();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..=n {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..=n {
                row += grid[(i, j)] * u[j].conj();
            }
            acc += u[i] * row;
        }
        let s = acc * (2.0 * gamma);
        values.push(s.re);
        imag = imag.max(s.im.abs());
    }
    let peak = values.iter().copied().fold(0.0, f64::max);
    TrapezoidSpectrum {
        omega: omegas.to_vec(),
        values,
        max_imag: if peak > 0.0 { imag / peak } else { imag },
        intervals: n,
    }
}

/// Doubles the number of intervals from `n0` until the sup-norm change
/// relative to the peak drops below `rtol`.
pub fn trapezoid_spectrum_refined(
    grid_at: impl Fn(usize) -> DMatrix<C64>,
    t_obs: f64,
    gamma: f64,
    omegas: &[f64],
    n0: usize,
    max_n: usize,
    rtol: f64,
) -> Result<TrapezoidSpectrum> {
    let mut n = n0.max(2);
    let mut prev = trapezoid_spectrum(&grid_at(n), t_obs, gamma, omegas);
    let mut change = f64::INFINITY;
    while n * 2 <= max_n {
        n *= 2;
        let next = trapezoid_spectrum(&grid_at(n), t_obs, gamma, omegas);
        let peak = next.values.iter().copied().fold(0.0, f64::max);
        change = prev
            .values
            .iter()
            .zip(&next.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / peak;
        prev = next;
        if change < rtol {
            return Ok(prev);
        }
    }
    Err(HopfieldError::QuadratureNotConverged {
        rel_change: change,
        rtol,
    })
}
