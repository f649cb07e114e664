use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::hamiltonian::{build_hamiltonian, FockTruncation, Hamiltonian};
use crate::error::{HopfieldError, Result};
use crate::model::ModelParams;

/// Largest dimension diagonalized densely.
pub const DENSE_MAX_DIM: usize = 3000;

/// All eigenvalues, ascending, by dense diagonalization.
pub fn dense_eigenvalues(h: &Hamiltonian) -> Result<Vec<f64>> {
    if h.dim() > DENSE_MAX_DIM {
        return Err(HopfieldError::CutoffTooLarge {
            cutoff: h.trunc.cutoff,
            dim: h.dim(),
            budget: DENSE_MAX_DIM,
        });
    }
    let mut ev: Vec<f64> = if h.is_real() {
        let m = h.dense().map(|v| v.re);
        SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
    } else {
        SymmetricEigen::new(h.dense()).eigenvalues.iter().copied().collect()
    };
    if ev.iter().any(|v| !v.is_finite()) {
        return Err(HopfieldError::Eigensolver("non-finite eigenvalue".into()));
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Real symmetric band matrix, lower triangle stored row by row:
/// row `i` holds columns `i − w ..= i` at offsets `0 ..= w`.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    w: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn from_hamiltonian(h: &Hamiltonian) -> Result<Self> {
        if !h.is_real() {
            return Err(HopfieldError::Eigensolver("band storage needs a real matrix".into()));
        }
        let n = h.dim();
        let w = h.trunc.bandwidth();
        let mut data = vec![0.0; n * (w + 1)];
        for i in 0..n {
            for (j, v) in h.row(i) {
                if j <= i {
                    if i - j > w {
                        return Err(HopfieldError::Eigensolver("entry outside the band".into()));
                    }
                    data[i * (w + 1) + (j + w - i)] = v.re;
                }
            }
        }
        Ok(Self { n, w, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.w
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.w + 1) + (j + self.w - i)]
    }

    pub fn min_diagonal(&self) -> f64 {
        (0..self.n).map(|i| self.at(i, i)).fold(f64::INFINITY, f64::min)
    }
}

/// `A − σ = L Lᵀ` for a banded `A`.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    w: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// Fails with `None` when `A − σ` is not positive definite.
    pub fn factor(a: &BandMatrix, sigma: f64) -> Option<Self> {
        let (n, w) = (a.n, a.w);
        let s = w + 1;
        let mut l = a.data.clone();
        for i in 0..n {
            l[i * s + w] -= sigma;
        }
        for i in 0..n {
            let lo_i = i.saturating_sub(w);
            for j in lo_i..=i {
                let lo = lo_i.max(j.saturating_sub(w));
                let ri = i * s + w - i;
                let rj = j * s + w - j;
                let mut acc = l[ri + j];
                for k in lo..j {
                    acc -= l[ri + k] * l[rj + k];
                }
                if j == i {
                    if acc <= 0.0 || !acc.is_finite() {
                        return None;
                    }
                    l[ri + i] = acc.sqrt();
                } else {
                    l[ri + j] = acc / l[rj + j];
                }
            }
        }
        Some(Self { n, w, l })
    }

    /// Overwrite `x` with `(A − σ)⁻¹ x`.
    pub fn solve(&self, x: &mut [f64]) {
        let (n, w) = (self.n, self.w);
        let s = w + 1;
        for i in 0..n {
            let ri = i * s + w - i;
            let lo = i.saturating_sub(w);
            let mut acc = x[i];
            for k in lo..i {
                acc -= self.l[ri + k] * x[k];
            }
            x[i] = acc / self.l[ri + i];
        }
        for i in (0..n).rev() {
            let ri = i * s + w - i;
            x[i] /= self.l[ri + i];
            let xi = x[i];
            let lo = i.saturating_sub(w);
            for k in lo..i {
                x[k] -= self.l[ri + k] * xi;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    /// Number of lowest eigenvalues wanted.
    pub count: usize,
    /// Relative residual of the shift-inverted Ritz pairs.
    pub tol: f64,
    pub max_krylov: usize,
}

impl LanczosConfig {
    pub fn lowest(count: usize) -> Self {
        Self {
            count,
            tol: 1e-10,
            max_krylov: (4 * count + 80).max(120),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Deterministic start vector with weight on every basis state.
fn start_vector(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let x = i as f64;
            1.0 + 0.5 * (1.37 * x + 0.41).sin() + 0.25 * (0.173 * x * x).cos()
        })
        .collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Orthogonalize against the basis twice and normalize; returns the norm
/// before normalization.
fn orthonormalize(v: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
    let b = norm(v);
    if b > 0.0 {
        v.iter_mut().for_each(|x| *x /= b);
    }
    b
}

/// Lanczos on `op` with full reorthogonalization; returns the `count`
/// largest Ritz values and whether their residuals reached `tol`.
fn lanczos_largest(n: usize, op: &dyn Fn(&[f64], &mut [f64]), cfg: &LanczosConfig) -> (Vec<f64>, bool) {
    let count = cfg.count.min(n);
    let max_k = cfg.max_krylov.min(n);
    let mut basis: Vec<Vec<f64>> = vec![start_vector(n)];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut next_check = count.max(10);
    loop {
        let k = basis.len();
        op(&basis[k - 1], &mut w);
        let a = dot(&w, &basis[k - 1]);
        alpha.push(a);
        let b = orthonormalize(&mut w, &basis);
        let exhausted = b <= 1e-14 * a.abs().max(1.0) || k == max_k;
        if k >= next_check || exhausted {
            next_check = k + (k / 8).max(10);
            let t = DMatrix::from_fn(k, k, |i, j| {
                if i == j {
                    alpha[i]
                } else if i + 1 == j || j + 1 == i {
                    beta[i.min(j)]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
            let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let converged = order[..count.min(k)]
                .iter()
                .all(|&i| (b * eig.eigenvectors[(k - 1, i)]).abs() <= cfg.tol * scale);
            if converged || exhausted {
                let values = order[..count.min(k)].iter().map(|&i| eig.eigenvalues[i]).collect();
                return (values, converged || b <= 1e-14 * a.abs().max(1.0));
            }
        }
        beta.push(b);
        basis.push(std::mem::replace(&mut w, vec![0.0; n]));
    }
}

/// Lowest `cfg.count` eigenvalues of a real Hamiltonian by shift-invert
/// Lanczos on a banded Cholesky factor.
pub fn lowest_eigenvalues(h: &Hamiltonian, cfg: &LanczosConfig) -> Result<Vec<f64>> {
    let band = BandMatrix::from_hamiltonian(h)?;
    let n = band.dim();
    // Plain Lanczos for a ground-state estimate, then step below it until
    // the shifted matrix is positive definite.
    let plain = LanczosConfig {
        count: 1,
        tol: 1e-6,
        max_krylov: 80,
    };
    let apply = |x: &[f64], y: &mut [f64]| h.apply_real(x, y);
    let negated = |x: &[f64], y: &mut [f64]| {
        apply(x, y);
        y.iter_mut().for_each(|v| *v = -*v);
    };
    let e0 = -lanczos_largest(n, &negated, &plain).0[0];
    let mut delta = 1.0;
    let (sigma, chol) = loop {
        let sigma = e0.min(band.min_diagonal()) - delta;
        if let Some(c) = BandCholesky::factor(&band, sigma) {
            break (sigma, c);
        }
        delta *= 2.0;
        if delta > 1e12 {
            return Err(HopfieldError::Eigensolver("no positive definite shift found".into()));
        }
    };
    let inverse = |x: &[f64], y: &mut [f64]| {
        y.copy_from_slice(x);
        chol.solve(y);
    };
    let (theta, converged) = lanczos_largest(n, &inverse, cfg);
    if !converged {
        return Err(HopfieldError::Eigensolver(format!(
            "shift-invert Lanczos did not converge {} values within {} vectors",
            cfg.count, cfg.max_krylov
        )));
    }
    let mut ev: Vec<f64> = theta.iter().map(|t| sigma + 1.0 / t).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergedLevel {
    pub energy: f64,
    /// `|E_k(N) − E_k(N − ΔN)|`.
    pub delta: f64,
    pub converged: bool,
}

/// Lowest `count` levels at `trunc.cutoff`, each compared with the same
/// level at `trunc.cutoff − delta_n`.
pub fn converged_spectrum(
    p: &ModelParams,
    trunc: FockTruncation,
    count: usize,
    delta_n: usize,
    tol: f64,
) -> Result<Vec<ConvergedLevel>> {
    let coarse = FockTruncation {
        cutoff: trunc.cutoff.saturating_sub(delta_n).max(2),
        ..trunc
    };
    let levels = |t: FockTruncation| -> Result<Vec<f64>> {
        let h = build_hamiltonian(p, t)?;
        if h.is_real() && h.dim() > 400 {
            lowest_eigenvalues(&h, &LanczosConfig::lowest(count))
        } else {
            let mut ev = dense_eigenvalues(&h)?;
            ev.truncate(count);
            Ok(ev)
        }
    };
    let fine = levels(trunc)?;
    let rough = levels(coarse)?;
    Ok(fine
        .iter()
        .zip(rough.iter().chain(std::iter::repeat(&f64::NAN)))
        .map(|(&e, &r)| {
            let delta = (e - r).abs();
            ConvergedLevel {
                energy: e,
                delta,
                converged: delta <= tol,
            }
        })
        .collect())
}

/// `(ω_y, ω_x)` read off a low spectrum: the first gap is `ω_y` and `ω_x` is
/// the first gap not on the ladder `k ω_y` (within `rel` of `ω_y`).
pub fn polariton_gaps(levels: &[f64], rel: f64) -> Option<(f64, f64)> {
    let e0 = *levels.first()?;
    let wy = levels.get(1)? - e0;
    levels[2..].iter().map(|e| e - e0).find_map(|gap| {
        let k = (gap / wy).round();
        ((gap - k * wy).abs() > rel * wy).then_some((wy, gap))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{polariton_frequencies, DiamagneticRule};
    use crate::oracle::hamiltonian::Representation;

    #[test]
    fn diagonal_input_sorted() {
        let t = FockTruncation::rotated(4).unwrap();
        let h = build_hamiltonian(&ModelParams::new(1.0, 0.7, 0.0, 0.0, 0.0).unwrap(), t).unwrap();
        let ev = dense_eigenvalues(&h).unwrap();
        let mut diag: Vec<f64> = (0..h.dim()).map(|i| h.get(i, i).re).collect();
        diag.sort_by(f64::total_cmp);
        assert_eq!(ev, diag);
    }

    #[test]
    fn representations_agree() {
        let p = ModelParams::new(1.0, 1.2, 0.35, 0.2, 0.1).unwrap();
        let a = dense_eigenvalues(&build_hamiltonian(&p, FockTruncation::original(12).unwrap()).unwrap()).unwrap();
        let b = dense_eigenvalues(&build_hamiltonian(&p, FockTruncation::rotated(12).unwrap()).unwrap()).unwrap();
        let dev = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(dev < 1e-10, "{dev}");
    }

    #[test]
    fn parity_sectors_reproduce_spectrum() {
        let p = ModelParams::new(1.0, 0.9, 0.3, 0.25, 0.05).unwrap();
        let h = build_hamiltonian(&p, FockTruncation::original(10).unwrap()).unwrap();
        let full = dense_eigenvalues(&h).unwrap();
        let mut split: Vec<f64> = [1, -1]
            .iter()
            .flat_map(|&s| {
                let block = h.dense_block(&h.sector(s));
                SymmetricEigen::new(block).eigenvalues.iter().copied().collect::<Vec<_>>()
            })
            .collect();
        split.sort_by(f64::total_cmp);
        let dev = full.iter().zip(&split).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(dev < 1e-10);
    }

    #[test]
    fn band_cholesky_solves() {
        let p = ModelParams::isotropic(1.0, 1.0, 0.3, 0.09).unwrap();
        let h = build_hamiltonian(&p, FockTruncation::rotated(8).unwrap()).unwrap();
        let band = BandMatrix::from_hamiltonian(&h).unwrap();
        let chol = BandCholesky::factor(&band, -2.0).unwrap();
        let x: Vec<f64> = (0..h.dim()).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut y = vec![0.0; h.dim()];
        h.apply_real(&x, &mut y);
        y.iter_mut().zip(&x).for_each(|(a, b)| *a += 2.0 * b);
        chol.solve(&mut y);
        let dev = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev < 1e-12);
        assert!(BandCholesky::factor(&band, 5.0).is_none());
    }

    #[test]
    fn lanczos_matches_dense() {
        let p = ModelParams::new(1.0, 1.1, 0.4, 0.3, 0.12).unwrap();
        let h = build_hamiltonian(&p, FockTruncation::rotated(30).unwrap()).unwrap();
        let dense = dense_eigenvalues(&h).unwrap();
        let lz = lowest_eigenvalues(&h, &LanczosConfig::lowest(25)).unwrap();
        for (a, b) in lz.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-9, "{a} {b}");
        }
    }

    #[test]
    fn lowest_gaps_example() {
        let p = ModelParams::isotropic(1.0, 1.0, 0.3, 0.09).unwrap();
        let h = build_hamiltonian(&p, FockTruncation::rotated(60).unwrap()).unwrap();
        let ev = lowest_eigenvalues(&h, &LanczosConfig::lowest(6)).unwrap();
        let (wy, wx) = polariton_gaps(&ev, 0.01).unwrap();
        assert!((wy - 0.744031).abs() < 1e-6 && (wx - 1.344031).abs() < 1e-6);
        let s = polariton_frequencies(&p).unwrap();
        assert!((wy - s.omega_y().unwrap()).abs() < 1e-9 && (wx - s.omega_x()).abs() < 1e-9);
    }

    #[test]
    fn spectral_collapse_at_critical_coupling() {
        let p = DiamagneticRule::Zero.params(1.0, 1.0, 0.5).unwrap();
        let gaps: Vec<f64> = [10, 20, 40]
            .iter()
            .map(|&n| {
                let h = build_hamiltonian(&p, FockTruncation::new(n, Representation::Rotated).unwrap()).unwrap();
                let ev = dense_eigenvalues(&h).unwrap();
                ev[1] - ev[0]
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn convergence_flags() {
        let p = ModelParams::isotropic(1.0, 1.0, 0.3, 0.09).unwrap();
        let levels = converged_spectrum(&p, FockTruncation::rotated(40).unwrap(), 8, 10, 1e-8).unwrap();
        assert!(levels.iter().all(|l| l.converged));
        let few = converged_spectrum(&p, FockTruncation::rotated(6).unwrap(), 30, 2, 1e-8).unwrap();
        assert!(few.iter().any(|l| !l.converged));
    }
}
