//! Brute-force check of the channel decomposition on a finite cyclic tube.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::armchair::decompose_armchair;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_residual};
use crate::model::Model;
use crate::spectral::{floquet_block, floquet_scalar};
use crate::zigzag::decompose_zigzag;

/// Largest number of axial cells accepted by [`build_full_hamiltonian`].
pub const MAX_CELLS: usize = 64;

/// Default multiset tolerance of [`compare_decomposition`].
pub const ORACLE_TOL: f64 = 1e-8;

/// The tube Hamiltonian on `L` axial cells of `2N` sites, cyclic in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteHamiltonian {
    pub n_hex: usize,
    pub cells: usize,
    pub matrix: DMatrix<Complex64>,
}

impl FiniteHamiltonian {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Row of site `(n, j, k)`, with `n` and `k` taken cyclically.
    pub fn index(&self, n: i64, j: usize, k: i64) -> usize {
        site_index(self.n_hex, self.cells, n, j, k)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.matrix.clone())
    }

    pub fn hermitian_residual(&self) -> f64 {
        hermitian_residual(&self.matrix)
    }
}

fn site_index(n_hex: usize, cells: usize, n: i64, j: usize, k: i64) -> usize {
    let n = n.rem_euclid(cells as i64) as usize;
    let k = k.rem_euclid(n_hex as i64) as usize;
    (2 * n + j) * n_hex + k
}

/// Hopping data of `(n, 0, k)`: neighbour offsets `(Δn, Δk)` on sublattice 1 and phases.
fn hoppings(model: &Model) -> [((i64, i64), f64); 3] {
    match model {
        Model::Zigzag(m) => {
            let b = m.b();
            [((-1, 0), -b), ((-1, -1), b), ((0, 0), 0.0)]
        }
        Model::Armchair(m) => {
            let [b1, b2, b3] = m.phases();
            [((1, 0), b2), ((-1, -1), b1), ((0, 0), b3)]
        }
    }
}

/// Potential `t·v` on sites `(n, j, ·)`.
fn site_potential(model: &Model, n: i64, j: usize) -> f64 {
    match model {
        Model::Zigzag(m) => m.t() * m.potential().value(2 * n + 1 + j as i64),
        Model::Armchair(m) => m.t() * m.potential().value(2 * n + j as i64),
    }
}

fn check_cells(model: &Model, cells: usize) -> Result<usize> {
    let p = model.effective_period();
    if cells == 0 || !cells.is_multiple_of(p) || cells > MAX_CELLS {
        return Err(Error::InvalidTruncation { l: cells, p, max: MAX_CELLS });
    }
    Ok(p)
}

/// Assembles the full Hamiltonian directly from the lattice adjacency.
///
/// Zigzag: `(n,0,k)` couples to `(n−1,1,k)` with `e^{ib₂}`, `(n−1,1,k−1)` with
/// `e^{ib₁}` and `(n,1,k)` with `1`, where `b₁ = −b₂ = b`; the potential is
/// `t v_{2n+1}` on `(n,0,·)` and `t v_{2n+2}` on `(n,1,·)`.
/// Armchair: `(n,0,k)` couples to `(n+1,1,k)` with `e^{ib₂}`, `(n−1,1,k−1)` with
/// `e^{ib₁}` and `(n,1,k)` with `e^{ib₃}`; the potential is `t v_{2n}` and `t v_{2n+1}`.
pub fn build_full_hamiltonian(model: &Model, cells: usize) -> Result<FiniteHamiltonian> {
    check_cells(model, cells)?;
    let n_hex = model.n();
    let dim = 2 * n_hex * cells;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    let hops = hoppings(model);
    for n in 0..cells as i64 {
        for k in 0..n_hex as i64 {
            let row = site_index(n_hex, cells, n, 0, k);
            for ((dn, dk), phase) in hops {
                let col = site_index(n_hex, cells, n + dn, 1, k + dk);
                let w = Complex64::from_polar(1.0, phase);
                h[(row, col)] += w;
                h[(col, row)] += w.conj();
            }
            for j in 0..2 {
                let i = site_index(n_hex, cells, n, j, k);
                h[(i, i)] += site_potential(model, n, j);
            }
        }
    }
    Ok(FiniteHamiltonian { n_hex, cells, matrix: h })
}

/// Multiset comparison of the full spectrum with the channel decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub dim: usize,
    pub max_abs_dev: f64,
    pub pass: bool,
}

/// Eigenvalues of all channel Floquet matrices at the `L/p` Floquet
/// parameters compatible with the cyclic closure, sorted.
///
/// Zigzag channels are gauge-reduced to real bonds, so the flux
/// `L·(b₃ − arg w_k)` of the complex even bond `w_k = e^{ib₂} + e^{ib₁}e^{2πik/N}`
/// shifts their Floquet parameters.
pub fn decomposition_eigenvalues(model: &Model, cells: usize) -> Result<Vec<f64>> {
    let p = check_cells(model, cells)?;
    let m = cells / p;
    let mut out = Vec::with_capacity(2 * model.n() * cells);
    match model {
        Model::Zigzag(z) => {
            let n_hex = z.n() as f64;
            let b = z.b();
            for (idx, ch) in decompose_zigzag(z).iter().enumerate() {
                let k = (idx + 1) as f64;
                let w = Complex64::from_polar(1.0, -b) + Complex64::from_polar(1.0, b + 2.0 * PI * k / n_hex);
                let flux = if ch.is_flat() { 0.0 } else { -(cells as f64) * w.arg() };
                for r in 0..m {
                    let tau = Complex64::from_polar(1.0, (flux + 2.0 * PI * r as f64) / m as f64);
                    out.extend(floquet_scalar(ch, tau)?.eigenvalues());
                }
            }
        }
        Model::Armchair(a) => {
            for ch in decompose_armchair(a) {
                for r in 0..m {
                    let tau = Complex64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64);
                    out.extend(floquet_block(&ch, tau)?.eigenvalues());
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Compares sorted eigenvalues of [`build_full_hamiltonian`] with
/// [`decomposition_eigenvalues`]; passes when every deviation is below `tol`.
pub fn compare_decomposition(model: &Model, cells: usize, tol: f64) -> Result<OracleReport> {
    let full = build_full_hamiltonian(model, cells)?.eigenvalues();
    let split = decomposition_eigenvalues(model, cells)?;
    if full.len() != split.len() {
        return Err(Error::Internal(format!(
            "dimension mismatch: {} full vs {} decomposed",
            full.len(),
            split.len()
        )));
    }
    let max_abs_dev = full.iter().zip(&split).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(OracleReport { dim: full.len(), max_abs_dev, pass: max_abs_dev < tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArmchairModel, PotentialProfile, ZigzagModel};

    #[test]
    fn free_zigzag_row_sums() {
        let m: Model = ZigzagModel::new(3, 0.0, PotentialProfile::zero(), 0.0).unwrap().into();
        let h = build_full_hamiltonian(&m, 2).unwrap();
        assert_eq!(h.dimension(), 12);
        for i in 0..12 {
            let s: Complex64 = h.matrix.row(i).iter().sum();
            assert!((s - Complex64::new(3.0, 0.0)).norm() < 1e-14);
        }
        let ev = h.eigenvalues();
        assert!((ev[11] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_truncation() {
        let v = PotentialProfile::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let m: Model = ZigzagModel::new(3, 0.0, v, 1.0).unwrap().into();
        assert!(matches!(build_full_hamiltonian(&m, 3), Err(Error::InvalidTruncation { .. })));
        assert!(build_full_hamiltonian(&m, 66).is_err());
    }

    #[test]
    fn small_cases_match() {
        let v = PotentialProfile::new(vec![0.3, -1.2, 0.7, 0.1]).unwrap();
        let z: Model = ZigzagModel::new(4, 0.3, v, 1.0).unwrap().into();
        let r = compare_decomposition(&z, 6, ORACLE_TOL).unwrap();
        assert!(r.pass, "{r:?}");
        let pv = PotentialProfile::new(vec![0.4, 0.4]).unwrap();
        let a: Model = ArmchairModel::new(3, [0.2, -0.1, 0.3], pv, 1.0).unwrap().into();
        let r = compare_decomposition(&a, 3, ORACLE_TOL).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
