//! Block Jacobi channels, tube geometry and magnetic constants of the armchair tube.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ArmchairModel, PotentialProfile, ZigzagModel};
use crate::spectral::{
    band_edges_scalar, full_spectrum_armchair, full_spectrum_zigzag, interval_contained,
    merge_intervals, Interval, GAP_TOL,
};
use crate::zigzag::ScalarPeriodicJacobi;

/// One armchair channel: constant off-diagonal block `a` and periodic
/// diagonal blocks `d_0, ..., d_{p-1}` acting on `ℓ²(ℤ) ⊕ ℓ²(ℤ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPeriodicJacobi {
    /// Number of distinct diagonal blocks per period.
    pub p: usize,
    pub a_block: Matrix2<Complex64>,
    pub d_blocks: Vec<Matrix2<Complex64>>,
    /// Channel index `1..=N`.
    pub k: usize,
    /// `cos(πk/N)`, reported for labelling only.
    pub c_k: f64,
}

impl BlockPeriodicJacobi {
    /// `‖a a* − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.a_block * self.a_block.adjoint() - Matrix2::identity();
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `‖d_n − d_n*‖_max` over the diagonal blocks.
    pub fn hermitian_defect(&self) -> f64 {
        self.d_blocks
            .iter()
            .flat_map(|d| (d - d.adjoint()).iter().map(|z| z.norm()).collect::<Vec<_>>())
            .fold(0.0, f64::max)
    }
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// The `N` channels `a_k = [[0, e^{ib₁}s^k], [e^{-ib₂}, 0]]`, `s = e^{2πi/N}`,
/// with `d_n = [[t v_{2n}, e^{ib₃}], [e^{-ib₃}, t v_{2n+1}]]`.
pub fn decompose_armchair(model: &ArmchairModel) -> Vec<BlockPeriodicJacobi> {
    let n = model.n();
    let [b1, b2, b3] = model.phases();
    let t = model.t();
    let v = model.potential();
    let p = model.effective_period();
    let zero = Complex64::new(0.0, 0.0);
    let d_blocks: Vec<Matrix2<Complex64>> = (0..p as i64)
        .map(|m| {
            Matrix2::new(
                Complex64::new(t * v.value(2 * m), 0.0),
                cis(b3),
                cis(-b3),
                Complex64::new(t * v.value(2 * m + 1), 0.0),
            )
        })
        .collect();
    (1..=n)
        .map(|k| {
            let sk = cis(2.0 * PI * k as f64 / n as f64);
            BlockPeriodicJacobi {
                p,
                a_block: Matrix2::new(zero, cis(b1) * sk, cis(-b2), zero),
                d_blocks: d_blocks.clone(),
                k,
                c_k: (PI * k as f64 / n as f64).cos(),
            }
        })
        .collect()
}

/// Radius `R = sqrt(cos(π/N) + 5/4) / sin(π/N)` of the armchair tube with unit bonds.
pub fn tube_radius(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("N = {n} must be at least 2")));
    }
    let th = PI / n as f64;
    Ok((th.cos() + 1.25).sqrt() / th.sin())
}

fn radii(n: usize) -> Result<(f64, f64, f64, f64)> {
    let r = tube_radius(n)?;
    let r1sq = r * r - 1.0;
    let r2sq = 4.0 * r * r - 1.0;
    if r1sq < 0.0 || r2sq < 0.0 {
        return Err(Error::GeometryDegenerate(format!("R_j² < 0 for N = {n}")));
    }
    let (r1, r2) = (r1sq.sqrt(), r2sq.sqrt());
    let h2 = 2.0 + r1 * r2 - 2.0 * r * r;
    if h2 < 0.0 {
        return Err(Error::GeometryDegenerate(format!("h² = {h2} < 0 for N = {n}")));
    }
    Ok((r, r1, r2, h2.sqrt()))
}

/// Physical phases `(b₁, b₂, b₃) = (B(R₂−R₁)/4, B(R₂−R₁)/4, −B R₂/4)`.
pub fn magnetic_constants(n: usize, field: f64) -> Result<[f64; 3]> {
    if !field.is_finite() {
        return Err(Error::InvalidParameter(format!("field amplitude {field} is not finite")));
    }
    let (_, r1, r2, _) = radii(n)?;
    let b = field * (r2 - r1) / 4.0;
    Ok([b, b, -field * r2 / 4.0])
}

/// One atom position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub n: i64,
    pub j: usize,
    pub k: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Atom positions of a finite piece of the armchair tube.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeGeometry {
    pub n_hex: usize,
    pub radius: f64,
    pub axial_step: f64,
    pub atoms: Vec<Atom>,
}

impl TubeGeometry {
    /// Angle `α_{n,j,k}`.
    pub fn angle(&self, n: i64, j: usize, k: usize) -> f64 {
        let nn = self.n_hex as f64;
        let r = self.radius;
        let at = (1.0 / (2.0 * r)).asin();
        let bt = (1.0 / r).asin();
        let m = n.div_euclid(2);
        let base = match (n.rem_euclid(2), j) {
            (0, 0) => 2.0 * bt,
            (0, _) => 2.0 * PI / nn,
            (_, 0) => bt - at,
            _ => PI / nn,
        };
        2.0 * PI * (k as f64 - m as f64) / nn + base
    }

    /// Position `r_{n,j,k}`.
    pub fn position(&self, n: i64, j: usize, k: usize) -> [f64; 3] {
        let a = self.angle(n, j, k);
        [self.radius * a.cos(), self.radius * a.sin(), n as f64 * self.axial_step]
    }

    /// The three neighbours of `(n, 0, k)`: `(n, 1, k)`, `(n+1, 1, k)`, `(n−1, 1, k−1)`.
    pub fn neighbours(&self, n: i64, k: usize) -> [(i64, usize, usize); 3] {
        let km = (k + self.n_hex - 1) % self.n_hex;
        [(n, 1, k), (n + 1, 1, k), (n - 1, 1, km)]
    }

    /// Largest `| |r − r'| − 1 |` over all bonds of atoms `(n, 0, k)` in the stored rings.
    pub fn max_bond_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in self.atoms.iter().filter(|a| a.j == 0) {
            let p = [a.x, a.y, a.z];
            for (n, j, k) in self.neighbours(a.n, a.k) {
                let q = self.position(n, j, k);
                let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
                worst = worst.max((d - 1.0).abs());
            }
        }
        worst
    }
}

/// Geometry of `rings` consecutive rings `n = 0..rings` plus the phases for field `B`.
pub fn tube_geometry_rings(n: usize, field: f64, rings: usize) -> Result<(TubeGeometry, [f64; 3])> {
    let (r, _, _, h) = radii(n)?;
    let phases = magnetic_constants(n, field)?;
    let mut g = TubeGeometry { n_hex: n, radius: r, axial_step: h, atoms: Vec::new() };
    for ring in 0..rings as i64 {
        for j in 0..2 {
            for k in 0..n {
                let [x, y, z] = g.position(ring, j, k);
                g.atoms.push(Atom { n: ring, j, k, x, y, z });
            }
        }
    }
    let dev = g.max_bond_deviation();
    if dev > 1e-10 {
        return Err(Error::GeometryDegenerate(format!("bond length deviation {dev}")));
    }
    Ok((g, phases))
}

/// Geometry of one axial period (two rings) plus the phases for field `B`.
pub fn tube_geometry(n: usize, field: f64) -> Result<(TubeGeometry, [f64; 3])> {
    tube_geometry_rings(n, field, 2)
}

/// Result of one spectral inclusion check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionCheck {
    /// Intervals that should be covered.
    pub inner: Vec<Interval>,
    /// Merged covering spectrum.
    pub outer: Vec<Interval>,
    pub holds: bool,
}

/// Comparison of the armchair (and, for `N ∈ 3ℤ`, zigzag) spectrum with
/// shifted scalar Schrödinger spectra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    /// `σ(J(v^{ev}))`.
    pub schroedinger: Vec<Interval>,
    /// `(σ(J) + 1) ∪ (σ(J) − 1) ⊆ σ(H_ar)`.
    pub armchair: InclusionCheck,
    /// `σ(J(v)) ⊆ σ(H_zi)` when `N` is a multiple of 3.
    pub zigzag: Option<InclusionCheck>,
}

fn check_inclusion(inner: Vec<Interval>, outer: Vec<Interval>, slack: f64) -> InclusionCheck {
    let holds = inner.iter().all(|iv| interval_contained(&outer, *iv, slack));
    InclusionCheck { inner, outer, holds }
}

fn schroedinger_bands(values: &[f64]) -> Result<Vec<Interval>> {
    let j = ScalarPeriodicJacobi::schroedinger(values)?;
    Ok(merge_intervals(band_edges_scalar(&j)?.bands(), GAP_TOL))
}

/// Checks `(σ(J(v^{ev})) ± 1) ⊆ σ(H_ar)` at zero field for a paired potential
/// `v_{2n} = v_{2n+1}`, and `σ(J(v)) ⊆ σ(H_zi)` when `3 | N`.
///
/// The potential enters as `t·v` on both sides; containment allows `slack`.
pub fn shifted_schroedinger_inclusion(
    n: usize,
    v: &PotentialProfile,
    t: f64,
    grid_size: usize,
    slack: f64,
) -> Result<InclusionReport> {
    if !v.is_paired(1e-12) {
        return Err(Error::Precondition("potential must satisfy v_{2n} = v_{2n+1}".into()));
    }
    let arm = ArmchairModel::new(n, [0.0; 3], v.clone(), t)?;
    let p = arm.effective_period() as i64;
    let ev: Vec<f64> = (0..p).map(|m| t * v.value(2 * m)).collect();
    let sch = schroedinger_bands(&ev)?;
    let shifted: Vec<Interval> =
        sch.iter().flat_map(|b| [b.shifted(-1.0), b.shifted(1.0)]).collect();
    let arm_union = full_spectrum_armchair(&arm, grid_size)?.ac_union();
    let armchair = check_inclusion(shifted, arm_union, slack);
    let zigzag = if n.is_multiple_of(3) {
        let zz = ZigzagModel::new(n, 0.0, v.clone(), t)?;
        let vals: Vec<f64> = v.values().iter().map(|x| x * t).collect();
        let inner = schroedinger_bands(&vals)?;
        Some(check_inclusion(inner, full_spectrum_zigzag(&zz)?.ac_union(), slack))
    } else {
        None
    };
    Ok(InclusionReport { schroedinger: sch, armchair, zigzag })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_blocks_n3() {
        let m = ArmchairModel::new(3, [0.0; 3], PotentialProfile::zero(), 0.0).unwrap();
        let ch = decompose_armchair(&m);
        let a = ch[2].a_block;
        assert!((a[(0, 1)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((a[(1, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(ch[2].d_blocks[0][(0, 1)], Complex64::new(1.0, 0.0));
        assert!(ch.iter().all(|c| c.unitarity_defect() < 1e-14));
    }

    #[test]
    fn channel_blocks_general() {
        let v = PotentialProfile::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let m = ArmchairModel::new(4, [0.1, 0.1, -0.2], v, 1.0).unwrap();
        let ch = &decompose_armchair(&m)[1];
        assert_eq!(ch.p, 2);
        let want = cis(0.1) * Complex64::new(0.0, 1.0).powi(2);
        assert!((ch.a_block[(0, 1)] - want).norm() < 1e-14);
        assert_eq!(ch.d_blocks[0][(0, 0)].re, 4.0);
        assert_eq!(ch.d_blocks[0][(1, 1)].re, 1.0);
        assert_eq!(ch.d_blocks[1][(0, 0)].re, 2.0);
        assert_eq!(ch.d_blocks[1][(1, 1)].re, 3.0);
        assert!(ch.hermitian_defect() < 1e-15);
    }

    #[test]
    fn geometry_n6() {
        let (g, phases) = tube_geometry(6, 0.0).unwrap();
        assert_eq!(phases, [0.0, 0.0, -0.0]);
        assert!((g.radius - 2.909312911).abs() < 1e-8);
        assert!(g.max_bond_deviation() < 1e-10);
        for a in &g.atoms {
            assert!(((a.x * a.x + a.y * a.y).sqrt() - g.radius).abs() < 1e-12);
        }
    }

    #[test]
    fn geometry_bonds_many_n() {
        for n in 2..=20 {
            let (g, _) = tube_geometry_rings(n, 0.3, 5).unwrap();
            assert!(g.max_bond_deviation() < 1e-10, "N = {n}");
        }
    }

    #[test]
    fn magnetic_constants_linear() {
        let p1 = magnetic_constants(5, 1.0).unwrap();
        let p2 = magnetic_constants(5, 2.0).unwrap();
        assert_eq!(p1[0], p1[1]);
        for i in 0..3 {
            assert!((p2[i] - 2.0 * p1[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn inclusion_zero_potential() {
        let r = shifted_schroedinger_inclusion(3, &PotentialProfile::zero(), 1.0, 64, 1e-8).unwrap();
        assert!(r.armchair.holds);
        assert!(r.zigzag.unwrap().holds);
        let bad = PotentialProfile::new(vec![1.0, 0.0]).unwrap();
        assert!(shifted_schroedinger_inclusion(3, &bad, 1.0, 64, 1e-8).is_err());
    }
}
