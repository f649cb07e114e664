use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{HopfieldError, Result};
use crate::model::ModelParams;

/// Which unitarily equivalent form of the Hamiltonian to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    /// `ω_c a†a + ω_b b†b + i g1 (a b† − a† b) + i g2 (a† b† − a b) + D (a + a†)²`,
    /// complex Hermitian.
    Original,
    /// The same with `b → i b`:
    /// `ω_c a†a + ω_b b†b + g1 (a b† + a† b) + g2 (a† b† + a b) + D (a + a†)²`,
    /// real symmetric.
    Rotated,
}

/// Maximum occupation `cutoff` per mode, basis size `(cutoff + 1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockTruncation {
    pub cutoff: usize,
    pub representation: Representation,
    /// Largest basis dimension that may be assembled.
    pub max_dim: usize,
}

impl FockTruncation {
    pub const DEFAULT_MAX_DIM: usize = 250_000;

    pub fn new(cutoff: usize, representation: Representation) -> Result<Self> {
        if cutoff < 2 {
            return Err(HopfieldError::InvalidParameter {
                name: "cutoff",
                value: cutoff as f64,
                reason: "need at least two quanta per mode",
            });
        }
        Ok(Self {
            cutoff,
            representation,
            max_dim: Self::DEFAULT_MAX_DIM,
        })
    }

    pub fn rotated(cutoff: usize) -> Result<Self> {
        Self::new(cutoff, Representation::Rotated)
    }

    pub fn original(cutoff: usize) -> Result<Self> {
        Self::new(cutoff, Representation::Original)
    }

    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1) * (self.cutoff + 1)
    }

    /// Basis index of `|field, matter⟩`; the matter occupation is the slow
    /// index, which keeps the Hamiltonian banded with half-width `cutoff + 2`.
    pub fn index(&self, field: usize, matter: usize) -> usize {
        matter * (self.cutoff + 1) + field
    }

    /// `(field, matter)` of a basis index.
    pub fn occupations(&self, index: usize) -> (usize, usize) {
        (index % (self.cutoff + 1), index / (self.cutoff + 1))
    }

    pub fn parity(&self, index: usize) -> i8 {
        let (m, n) = self.occupations(index);
        if (m + n) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.cutoff + 2
    }
}

/// Hermitian matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub trunc: FockTruncation,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

pub fn build_hamiltonian(p: &ModelParams, trunc: FockTruncation) -> Result<Hamiltonian> {
    let dim = trunc.dim();
    if dim > trunc.max_dim {
        return Err(HopfieldError::CutoffTooLarge {
            cutoff: trunc.cutoff,
            dim,
            budget: trunc.max_dim,
        });
    }
    let n_max = trunc.cutoff;
    let (wc, wb, g1, g2, d) = (p.omega_c(), p.omega_b(), p.g1(), p.g2(), p.diamagnetic());
    let (c1, c2) = match trunc.representation {
        // Coefficients of (a b†, a† b) and (a† b†, a b).
        Representation::Original => ((C64::new(0.0, g1), C64::new(0.0, -g1)), (C64::new(0.0, g2), C64::new(0.0, -g2))),
        Representation::Rotated => ((C64::new(g1, 0.0), C64::new(g1, 0.0)), (C64::new(g2, 0.0), C64::new(g2, 0.0))),
    };
    let sq2 = |a: usize, b: usize| ((a * b) as f64).sqrt();

    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols = Vec::with_capacity(9 * dim);
    let mut vals = Vec::with_capacity(9 * dim);
    row_ptr.push(0);
    let mut row: Vec<(usize, C64)> = Vec::with_capacity(9);
    for i in 0..dim {
        // Row i holds ⟨i|H|j⟩, i.e. the coefficient of |i⟩ in H|j⟩.
        let (m, n) = trunc.occupations(i);
        row.clear();
        let mf = m as f64;
        row.push((i, C64::new(wc * mf + wb * n as f64 + d * (2.0 * mf + 1.0), 0.0)));
        // D a² |m+2⟩ and D a†² |m−2⟩.
        if m + 2 <= n_max {
            row.push((trunc.index(m + 2, n), C64::new(d * sq2(m + 1, m + 2), 0.0)));
        }
        if m >= 2 {
            row.push((trunc.index(m - 2, n), C64::new(d * sq2(m, m - 1), 0.0)));
        }
        // a b† |m+1, n−1⟩ = sqrt(m+1) sqrt(n) |m, n⟩.
        if m < n_max && n >= 1 {
            row.push((trunc.index(m + 1, n - 1), c1.0 * (sq2(m + 1, n))));
        }
        // a† b |m−1, n+1⟩ = sqrt(m) sqrt(n+1) |m, n⟩.
        if m >= 1 && n < n_max {
            row.push((trunc.index(m - 1, n + 1), c1.1 * (sq2(m, n + 1))));
        }
        // a† b† |m−1, n−1⟩ = sqrt(m) sqrt(n) |m, n⟩.
        if m >= 1 && n >= 1 {
            row.push((trunc.index(m - 1, n - 1), c2.0 * (sq2(m, n))));
        }
        // a b |m+1, n+1⟩ = sqrt(m+1) sqrt(n+1) |m, n⟩.
        if m < n_max && n < n_max {
            row.push((trunc.index(m + 1, n + 1), c2.1 * (sq2(m + 1, n + 1))));
        }
        row.sort_by_key(|e| e.0);
        for &(j, v) in &row {
            if v != C64::new(0.0, 0.0) || j == i {
                cols.push(j);
                vals.push(v);
            }
        }
        row_ptr.push(cols.len());
    }
    Ok(Hamiltonian {
        trunc,
        row_ptr,
        cols,
        vals,
    })
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_real(&self) -> bool {
        self.vals.iter().all(|v| v.im == 0.0)
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.row(i).find(|e| e.0 == j).map(|e| e.1).unwrap_or_default()
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    /// `y = H x` for real `H` and `x`.
    pub fn apply_real(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k].re * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim() {
            let mut diag = 0.0;
            let mut radius = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    diag = v.re;
                } else {
                    radius += v.norm();
                }
            }
            lo = lo.min(diag - radius);
            hi = hi.max(diag + radius);
        }
        (lo, hi)
    }

    /// Largest `|H_ij − conj(H_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (0..self.dim())
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .map(|(i, j, v)| (v - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|H_ij|` between opposite parity sectors.
    pub fn parity_leakage(&self) -> f64 {
        (0..self.dim())
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .filter(|&(i, j, _)| self.trunc.parity(i) != self.trunc.parity(j))
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Basis indices of one parity sector.
    pub fn sector(&self, parity: i8) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.trunc.parity(i) == parity).collect()
    }

    /// Dense copy restricted to `indices`.
    pub fn dense_block(&self, indices: &[usize]) -> nalgebra::DMatrix<C64> {
        let mut pos = vec![usize::MAX; self.dim()];
        for (k, &i) in indices.iter().enumerate() {
            pos[i] = k;
        }
        let mut m = nalgebra::DMatrix::zeros(indices.len(), indices.len());
        for (k, &i) in indices.iter().enumerate() {
            for (j, v) in self.row(i) {
                if pos[j] != usize::MAX {
                    m[(k, pos[j])] = v;
                }
            }
        }
        m
    }

    pub fn dense(&self) -> nalgebra::DMatrix<C64> {
        let all: Vec<usize> = (0..self.dim()).collect();
        self.dense_block(&all)
    }

    /// `y = a x` in the truncated basis.
    pub fn lower_field(&self, x: &[C64], y: &mut [C64]) {
        let t = &self.trunc;
        for (i, yi) in y.iter_mut().enumerate() {
            let (m, n) = t.occupations(i);
            *yi = if m < t.cutoff {
                x[t.index(m + 1, n)] * ((m + 1) as f64).sqrt()
            } else {
                C64::new(0.0, 0.0)
            };
        }
    }

    /// `y = b x` in the truncated basis.
    pub fn lower_matter(&self, x: &[C64], y: &mut [C64]) {
        let t = &self.trunc;
        for (i, yi) in y.iter_mut().enumerate() {
            let (m, n) = t.occupations(i);
            *yi = if n < t.cutoff {
                x[t.index(m, n + 1)] * ((n + 1) as f64).sqrt()
            } else {
                C64::new(0.0, 0.0)
            };
        }
    }

    /// Population of basis states within `margin` quanta of the cutoff in
    /// either mode.
    pub fn edge_population(&self, x: &[C64], margin: usize) -> f64 {
        let t = &self.trunc;
        x.iter()
            .enumerate()
            .filter(|(i, _)| {
                let (m, n) = t.occupations(*i);
                m + margin >= t.cutoff || n + margin >= t.cutoff
            })
            .map(|(_, v)| v.norm_sqr())
            .sum()
    }

    /// Unit vector on `|field, matter⟩`.
    pub fn fock_state(&self, field: usize, matter: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.dim()];
        v[self.trunc.index(field, matter)] = C64::new(1.0, 0.0);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g1: f64, g2: f64, d: f64) -> ModelParams {
        ModelParams::new(1.0, 1.3, g1, g2, d).unwrap()
    }

    #[test]
    fn uncoupled_is_diagonal() {
        let t = FockTruncation::rotated(6).unwrap();
        let h = build_hamiltonian(&params(0.0, 0.0, 0.0), t).unwrap();
        assert_eq!(h.nnz(), h.dim());
        for i in 0..h.dim() {
            let (m, n) = t.occupations(i);
            assert_eq!(h.get(i, i).re, m as f64 + 1.3 * n as f64);
        }
    }

    #[test]
    fn hermitian_parity_and_band() {
        for rep in [Representation::Original, Representation::Rotated] {
            let t = FockTruncation::new(9, rep).unwrap();
            let h = build_hamiltonian(&params(0.3, 0.2, 0.15), t).unwrap();
            assert_eq!(h.hermiticity_defect(), 0.0);
            assert_eq!(h.parity_leakage(), 0.0);
            assert_eq!(h.is_real(), rep == Representation::Rotated);
            let band = (0..h.dim())
                .flat_map(|i| h.row(i).map(move |(j, _)| i.abs_diff(j)))
                .max()
                .unwrap();
            assert_eq!(band, t.bandwidth());
        }
    }

    #[test]
    fn matrix_elements() {
        let t = FockTruncation::original(5).unwrap();
        let h = build_hamiltonian(&params(0.3, 0.2, 0.15), t).unwrap();
        // ⟨0,1| i g1 a b† |1,0⟩ = i g1.
        assert_eq!(h.get(t.index(0, 1), t.index(1, 0)), C64::new(0.0, 0.3));
        // ⟨1,1| i g2 a† b† |0,0⟩ = i g2.
        assert_eq!(h.get(t.index(1, 1), t.index(0, 0)), C64::new(0.0, 0.2));
        // ⟨2,0| D a†² |0,0⟩ = sqrt(2) D.
        assert!((h.get(t.index(2, 0), t.index(0, 0)).re - 0.15 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(h.get(t.index(0, 0), t.index(0, 0)).re, 0.15);
    }

    #[test]
    fn budget() {
        let t = FockTruncation::rotated(100).unwrap().with_max_dim(1000);
        assert!(matches!(
            build_hamiltonian(&params(0.1, 0.1, 0.0), t),
            Err(HopfieldError::CutoffTooLarge { dim: 10201, .. })
        ));
        assert!(FockTruncation::rotated(1).is_err());
    }

    #[test]
    fn lowering_operators() {
        let t = FockTruncation::rotated(4).unwrap();
        let h = build_hamiltonian(&params(0.1, 0.1, 0.0), t).unwrap();
        let x = h.fock_state(3, 2);
        let mut y = vec![C64::default(); h.dim()];
        h.lower_field(&x, &mut y);
        assert!((y[t.index(2, 2)].re - 3f64.sqrt()).abs() < 1e-15);
        h.lower_matter(&x, &mut y);
        assert!((y[t.index(3, 1)].re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(h.edge_population(&x, 1), 1.0);
        assert_eq!(h.edge_population(&x, 0), 0.0);
    }
}
