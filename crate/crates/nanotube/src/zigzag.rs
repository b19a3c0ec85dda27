//! Scalar Jacobi channels of the zigzag tube.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ZigzagModel;

/// Channels with `|c_k|` below this are treated as flat bands.
pub const FLAT_THRESHOLD: f64 = 1e-12;

/// One 2p-periodic scalar Jacobi channel.
///
/// `a[i]` is the bond `a_{i+1}` between Jacobi sites `i+1` and `i+2`
/// (site `2p+1` wraps to site 1) and `v[i]` is the diagonal `v_{i+1}`,
/// already scaled by `t`. For a zigzag channel `a_{odd} = 1` and
/// `a_{even} = 2|c_k|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarPeriodicJacobi {
    pub p: usize,
    pub a: Vec<f64>,
    pub v: Vec<f64>,
    pub c_k: f64,
}

impl ScalarPeriodicJacobi {
    pub fn new(a: Vec<f64>, v: Vec<f64>, c_k: f64) -> Result<Self> {
        if a.is_empty() || !a.len().is_multiple_of(2) || a.len() != v.len() {
            return Err(Error::InvalidParameter(format!(
                "need equal even lengths for a ({}) and v ({})",
                a.len(),
                v.len()
            )));
        }
        if a.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite, a_n >= 0".into()));
        }
        Ok(Self { p: a.len() / 2, a, v, c_k })
    }

    /// Zigzag channel with even bonds `2|c|` and diagonal `v` (length 2p).
    pub fn zigzag(c_k: f64, v: Vec<f64>) -> Result<Self> {
        let a = (0..v.len()).map(|i| if i % 2 == 0 { 1.0 } else { 2.0 * c_k.abs() }).collect();
        Self::new(a, v, c_k)
    }

    /// Discrete Schrödinger operator (all bonds 1) with the given periodic
    /// potential. The period is doubled when odd so that it fits the 2p layout.
    pub fn schroedinger(q: &[f64]) -> Result<Self> {
        let mut v = q.to_vec();
        if v.len() % 2 == 1 {
            v.extend_from_slice(q);
        }
        Self::new(vec![1.0; v.len()], v, 0.5)
    }

    /// Bond `a_n` with cyclic 1-based index.
    pub fn bond(&self, n: i64) -> f64 {
        self.a[(n - 1).rem_euclid(self.a.len() as i64) as usize]
    }

    /// Diagonal `v_n` with cyclic 1-based index.
    pub fn diag(&self, n: i64) -> f64 {
        self.v[(n - 1).rem_euclid(self.v.len() as i64) as usize]
    }

    /// True when some bond vanishes (the chain falls apart into finite blocks).
    pub fn is_flat(&self) -> bool {
        self.a.iter().any(|&x| x < 2.0 * FLAT_THRESHOLD)
    }
}

/// The `N` channels of a zigzag model, `k = 1..N`.
pub fn decompose_zigzag(model: &ZigzagModel) -> Vec<ScalarPeriodicJacobi> {
    let v: Vec<f64> = model.potential().jacobi_diagonal().iter().map(|x| x * model.t()).collect();
    (1..=model.n())
        .map(|k| {
            let c = model.c(k);
            let c = if c.abs() < FLAT_THRESHOLD { 0.0 } else { c };
            ScalarPeriodicJacobi::zigzag(c, v.clone()).expect("valid zigzag channel")
        })
        .collect()
}

/// Replaces complex off-diagonals by their moduli.
///
/// A diagonal unitary conjugation removes every phase except the total flux
/// `arg Π offdiag`, which only relabels the Floquet parameter. The stored
/// `c_k` is half of the second bond.
pub fn gauge_reduce(offdiag: &[Complex64], diag: &[f64]) -> Result<ScalarPeriodicJacobi> {
    let a: Vec<f64> = offdiag.iter().map(|z| z.norm()).collect();
    let c = a.get(1).copied().unwrap_or(0.0) / 2.0;
    ScalarPeriodicJacobi::new(a, diag.to_vec(), c)
}

/// Total flux `Σ arg(offdiag)` removed by [`gauge_reduce`].
pub fn gauge_flux(offdiag: &[Complex64]) -> f64 {
    offdiag.iter().map(|z| z.arg()).sum()
}

/// Channel identified with channel `k` under a change of field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryImage {
    /// The transformed phase.
    pub field: f64,
    /// Channel index `k'` such that `J_k` at `field` equals `J_{k'}` at the original `b`.
    pub k: usize,
}

/// Images of channel `k` under `b -> b + π/N` and `b -> -b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSymmetry {
    pub shift: SymmetryImage,
    pub reflection: SymmetryImage,
}

/// `J_k^{b+π/N} = J_{k+1}^b` and `J_k^{-b} = J_{N-k}^b`, with channels labelled `1..N`.
pub fn channel_symmetry_map(n: usize, b: f64, k: usize) -> Result<ChannelSymmetry> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("channel k = {k} outside 1..={n}")));
    }
    let wrap = |j: usize| if j.is_multiple_of(n) { n } else { j % n };
    Ok(ChannelSymmetry {
        shift: SymmetryImage { field: b + std::f64::consts::PI / n as f64, k: wrap(k + 1) },
        reflection: SymmetryImage { field: -b, k: wrap(n - k) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PotentialProfile;
    use std::f64::consts::PI;

    #[test]
    fn free_channel_is_schroedinger() {
        let m = ZigzagModel::new(3, 0.0, PotentialProfile::zero(), 0.0).unwrap();
        let ch = decompose_zigzag(&m);
        assert_eq!(ch.len(), 3);
        assert!((ch[0].c_k - 0.5).abs() < 1e-15);
        assert!(ch[0].a.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn flat_channel_detected() {
        let m = ZigzagModel::new(2, 0.0, PotentialProfile::zero(), 1.0).unwrap();
        let ch = decompose_zigzag(&m);
        assert!(ch[0].is_flat());
        assert_eq!(ch[0].a[1], 0.0);
        assert!(!ch[1].is_flat());
    }

    #[test]
    fn channel_coefficients() {
        let v = PotentialProfile::new(vec![1.0, -1.0]).unwrap();
        let m = ZigzagModel::new(4, 0.1, v, 2.0).unwrap();
        let ch = &decompose_zigzag(&m)[2];
        let a = 2.0 * (0.1 + 3.0 * PI / 4.0).cos().abs();
        assert_eq!(ch.a, vec![1.0, a]);
        assert_eq!(ch.v, vec![2.0, -2.0]);
    }

    #[test]
    fn gauge_strips_phases() {
        let z = Complex64::from_polar(1.0, 0.7);
        let j = gauge_reduce(&[z; 4], &[0.0; 4]).unwrap();
        assert!(j.a.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let c = 0.3_f64;
        let k = Complex64::from_polar(2.0 * c, -PI / 5.0);
        let j = gauge_reduce(&[Complex64::new(1.0, 0.0), k], &[0.1, 0.2]).unwrap();
        assert!((j.a[1] - 2.0 * c).abs() < 1e-15);
    }

    #[test]
    fn symmetry_map_examples() {
        let s = channel_symmetry_map(5, 0.2, 2).unwrap();
        assert_eq!(s.shift.k, 3);
        assert_eq!(s.reflection.k, 3);
        assert_eq!(s.reflection.field, -0.2);
        let s = channel_symmetry_map(2, 0.0, 2).unwrap();
        assert_eq!(s.reflection.k, 2);
        assert!(channel_symmetry_map(3, 0.0, 0).is_err());
    }
}
