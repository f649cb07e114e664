use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::eigen::DENSE_MAX_DIM;
use super::hamiltonian::{Hamiltonian, Representation};
use crate::dynamics::FockProduct;
use crate::error::{HopfieldError, Result};

/// Edge population above which propagated states are reported as leaking.
pub const LEAK_THRESHOLD: f64 = 1e-8;

/// `J_0(x), …, J_kmax(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; kmax + 1];
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = kmax.max(ax.ceil() as usize);
    let mut m = top + 30 + (40.0 * top as f64).sqrt() as usize;
    m += m % 2;
    let mut j = vec![0.0; m + 2];
    j[m] = 1e-30;
    for k in (1..=m).rev() {
        j[k - 1] = (2.0 * k as f64 / ax) * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            j[k - 1..].iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    j.truncate(kmax + 1);
    j.iter_mut().enumerate().for_each(|(k, v)| {
        *v /= norm;
        if x < 0.0 && k % 2 == 1 {
            *v = -*v;
        }
    });
    j
}

/// `e^{−iHt}` applied to state vectors.
pub trait Propagator {
    fn hamiltonian(&self) -> &Hamiltonian;

    fn propagate(&self, v: &[C64], t: f64) -> Vec<C64>;

    /// `U(t_k) v` for ascending `times`, stepping from one sample to the next.
    fn propagate_series(&self, v: &[C64], times: &[f64]) -> Vec<Vec<C64>> {
        let mut out = Vec::with_capacity(times.len());
        let mut state = v.to_vec();
        let mut now = 0.0;
        for &t in times {
            state = self.propagate(&state, t - now);
            now = t;
            out.push(state.clone());
        }
        out
    }

    /// `a(t) ψ = U(t)† a U(t) ψ`.
    fn heisenberg_field_on(&self, psi: &[C64], t: f64) -> Vec<C64> {
        let h = self.hamiltonian();
        let forward = self.propagate(psi, t);
        let mut lowered = vec![C64::default(); h.dim()];
        h.lower_field(&forward, &mut lowered);
        self.propagate(&lowered, -t)
    }

    /// `⟨n,m| a†(t1) a(t2) |n,m⟩`.
    fn autocorrelation(&self, state: FockProduct, t1: f64, t2: f64) -> C64 {
        let psi = self.hamiltonian().fock_state(state.field as usize, state.matter as usize);
        let u = self.heisenberg_field_on(&psi, t1);
        let v = self.heisenberg_field_on(&psi, t2);
        u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum()
    }

    /// `(f1, f2, f3, f4)(t)` in `a(t) = f1 a + f2 a† + f3 b + f4 b†`, read off
    /// the matrix elements `⟨00|a(t)|10⟩`, `⟨10|a(t)|00⟩`, `⟨00|a(t)|01⟩` and
    /// `⟨01|a(t)|00⟩`, expressed in the operators of the original Hamiltonian.
    fn field_coefficients(&self, times: &[f64]) -> FieldCoefficients {
        let h = self.hamiltonian();
        let starts = [h.fock_state(0, 0), h.fock_state(1, 0), h.fock_state(0, 1)];
        let series: Vec<Vec<Vec<C64>>> = starts.iter().map(|s| self.propagate_series(s, times)).collect();
        let (rot3, rot4) = match h.trunc.representation {
            Representation::Original => (C64::new(1.0, 0.0), C64::new(1.0, 0.0)),
            // b(t) picks up b → −i b, b† → i b† when mapped back.
            Representation::Rotated => (C64::new(0.0, -1.0), C64::new(0.0, 1.0)),
        };
        let mut values = Vec::with_capacity(times.len());
        let mut edge: f64 = 0.0;
        let mut buf = vec![C64::default(); h.dim()];
        for k in 0..times.len() {
            let (s00, s10, s01) = (&series[0][k], &series[1][k], &series[2][k]);
            for s in [s00, s10, s01] {
                edge = edge.max(h.edge_population(s, 2));
            }
            let mut element = |bra: &[C64], ket: &[C64]| -> C64 {
                h.lower_field(ket, &mut buf);
                bra.iter().zip(&buf).map(|(x, y)| x.conj() * y).sum()
            };
            values.push([
                element(s00, s10),
                element(s10, s00),
                element(s00, s01) * rot3,
                element(s01, s00) * rot4,
            ]);
        }
        if edge > LEAK_THRESHOLD {
            log::warn!("truncation leak: edge population {edge:e} exceeds {LEAK_THRESHOLD:e}");
        }
        FieldCoefficients {
            times: times.to_vec(),
            values,
            edge_population: edge,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldCoefficients {
    pub times: Vec<f64>,
    pub values: Vec<[C64; 4]>,
    /// Largest population found within two quanta of the cutoff.
    pub edge_population: f64,
}

impl FieldCoefficients {
    pub fn leaking(&self) -> bool {
        self.edge_population > LEAK_THRESHOLD
    }
}

/// Chebyshev expansion of `e^{−iHt}` on the Gershgorin interval of `H`.
#[derive(Debug, Clone)]
pub struct ChebyshevPropagator<'a> {
    h: &'a Hamiltonian,
    center: f64,
    half_width: f64,
    /// Largest `half_width · |Δt|` handled in one expansion.
    max_phase: f64,
}

impl<'a> ChebyshevPropagator<'a> {
    pub fn new(h: &'a Hamiltonian) -> Self {
        let (lo, hi) = h.spectral_bounds();
        Self {
            h,
            center: 0.5 * (lo + hi),
            half_width: 0.5 * (hi - lo) * 1.01 + 1e-12,
            max_phase: 40.0,
        }
    }

    fn step(&self, v: &[C64], dt: f64) -> Vec<C64> {
        let n = v.len();
        let x = self.half_width * dt;
        let kmax = (x.abs() + 10.0 * x.abs().cbrt() + 30.0) as usize;
        let j = bessel_j_sequence(x, kmax);
        let last = j.iter().rposition(|c| c.abs() > 1e-17).unwrap_or(0);
        let (c, r) = (self.center, self.half_width);
        let scaled = |src: &[C64], dst: &mut [C64]| {
            self.h.apply(src, dst);
            dst.iter_mut().zip(src).for_each(|(d, s)| *d = (*d - s * c) / r);
        };
        let mut out: Vec<C64> = v.iter().map(|z| z * j[0]).collect();
        let mut prev = v.to_vec();
        let mut cur = vec![C64::default(); n];
        scaled(&prev, &mut cur);
        let mut phase = C64::new(0.0, -1.0);
        let mut next = vec![C64::default(); n];
        for (k, jk) in j.iter().enumerate().take(last + 1).skip(1) {
            let coef = phase * (2.0 * jk);
            out.iter_mut().zip(&cur).for_each(|(o, z)| *o += coef * z);
            if k == last {
                break;
            }
            scaled(&cur, &mut next);
            next.iter_mut().zip(&prev).for_each(|(nx, p)| *nx = 2.0 * *nx - p);
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
            phase *= C64::new(0.0, -1.0);
        }
        let global = C64::from_polar(1.0, -c * dt);
        out.iter_mut().for_each(|z| *z *= global);
        out
    }
}

impl Propagator for ChebyshevPropagator<'_> {
    fn hamiltonian(&self) -> &Hamiltonian {
        self.h
    }

    fn propagate(&self, v: &[C64], t: f64) -> Vec<C64> {
        if t == 0.0 {
            return v.to_vec();
        }
        let steps = (self.half_width * t.abs() / self.max_phase).ceil().max(1.0) as usize;
        let dt = t / steps as f64;
        (0..steps).fold(v.to_vec(), |acc, _| self.step(&acc, dt))
    }
}

/// `e^{−iHt} = V e^{−iEt} V†` from one dense diagonalization.
#[derive(Debug, Clone)]
pub struct DensePropagator<'a> {
    h: &'a Hamiltonian,
    energies: DVector<f64>,
    vectors: DMatrix<C64>,
}

impl<'a> DensePropagator<'a> {
    pub fn new(h: &'a Hamiltonian) -> Result<Self> {
        if h.dim() > DENSE_MAX_DIM {
            return Err(HopfieldError::CutoffTooLarge {
                cutoff: h.trunc.cutoff,
                dim: h.dim(),
                budget: DENSE_MAX_DIM,
            });
        }
        let eig = SymmetricEigen::new(h.dense());
        Ok(Self {
            h,
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    /// `U(t)† O U(t)` as a dense matrix.
    pub fn heisenberg_matrix(&self, op: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
        let phases = DVector::from_iterator(
            self.energies.len(),
            self.energies.iter().map(|e| C64::from_polar(1.0, -e * t)),
        );
        let u = &self.vectors * DMatrix::from_diagonal(&phases) * self.vectors.adjoint();
        u.adjoint() * op * u
    }

    /// Truncated `a` as a dense matrix.
    pub fn field_operator(&self) -> DMatrix<C64> {
        let n = self.h.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut col = vec![C64::default(); n];
        for j in 0..n {
            let e = self.h.fock_state(self.h.trunc.occupations(j).0, self.h.trunc.occupations(j).1);
            self.h.lower_field(&e, &mut col);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }
}

impl Propagator for DensePropagator<'_> {
    fn hamiltonian(&self) -> &Hamiltonian {
        self.h
    }

    fn propagate(&self, v: &[C64], t: f64) -> Vec<C64> {
        let x = DVector::from_column_slice(v);
        let mut c = self.vectors.adjoint() * x;
        c.iter_mut()
            .zip(self.energies.iter())
            .for_each(|(z, e)| *z *= C64::from_polar(1.0, -e * t));
        (&self.vectors * c).iter().copied().collect()
    }
}
