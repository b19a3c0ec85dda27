//! Monodromy matrices, discriminants, Floquet matrices, band edges and
//! the union band structure of the full Hamiltonian.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::armchair::{decompose_armchair, BlockPeriodicJacobi};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_residual};
use crate::model::{ArmchairModel, Model, PotentialProfile, ZigzagModel};
use crate::zigzag::{decompose_zigzag, ScalarPeriodicJacobi};

/// Gaps narrower than this are treated as closed.
pub const GAP_TOL: f64 = 1e-9;
/// Default number of τ samples for block channels.
pub const DEFAULT_GRID: usize = 512;
/// Target accuracy of refined block band edges.
pub const REFINE_TOL: f64 = 1e-9;

/// Closed real interval `[lo, hi]`, serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo: lo.min(hi), hi: lo.max(hi) }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn shifted(&self, s: f64) -> Interval {
        Interval { lo: self.lo + s, hi: self.hi + s }
    }
}

impl From<[f64; 2]> for Interval {
    fn from(x: [f64; 2]) -> Self {
        Interval::new(x[0], x[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(x: Interval) -> Self {
        [x.lo, x.hi]
    }
}

/// Sorts and merges intervals whose separation is at most `tol`.
pub fn merge_intervals(mut items: Vec<Interval>, tol: f64) -> Vec<Interval> {
    items.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(items.len());
    for iv in items {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi + tol => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    out
}

/// True when `iv` lies inside a single interval of the merged `union`, allowing `slack`.
pub fn interval_contained(union: &[Interval], iv: Interval, slack: f64) -> bool {
    union.iter().any(|u| iv.lo >= u.lo - slack && iv.hi <= u.hi + slack)
}

/// Pieces of the merged `union` that fall inside `window`.
pub fn restrict(union: &[Interval], window: Interval) -> Vec<Interval> {
    union.iter().filter_map(|u| u.intersect(&window)).collect()
}

/// Open gaps between consecutive merged intervals wider than `tol`.
pub fn gaps_of(merged: &[Interval], tol: f64) -> Vec<Interval> {
    merged
        .windows(2)
        .filter(|w| w[1].lo - w[0].hi > tol)
        .map(|w| Interval { lo: w[0].hi, hi: w[1].lo })
        .collect()
}

pub type Mat2 = [[f64; 2]; 2];

fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

fn monodromy_with_bound(j: &ScalarPeriodicJacobi, z: f64) -> Result<(Mat2, f64)> {
    if j.is_flat() {
        return Err(Error::FlatBandChannel);
    }
    let mut m: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut bound = 1.0;
    for n in 1..=(2 * j.p) as i64 {
        let an = j.bond(n);
        let t: Mat2 = [[0.0, 1.0], [-j.bond(n - 1) / an, (z - j.diag(n)) / an]];
        bound *= 1.0f64.max(t[1][0].abs() + t[1][1].abs());
        m = mat2_mul(&t, &m);
    }
    Ok((m, bound))
}

/// Monodromy `M_{2p}(z) = T_{2p} ... T_1` with
/// `T_n = [[0, 1], [-a_{n-1}/a_n, (z - v_n)/a_n]]` acting on `(y_{n-1}, y_n)`.
pub fn monodromy(j: &ScalarPeriodicJacobi, z: f64) -> Result<Mat2> {
    monodromy_with_bound(j, z).map(|(m, _)| m)
}

/// Lyapunov function `Δ(z) = tr M_{2p}(z) / 2`.
pub fn discriminant(j: &ScalarPeriodicJacobi, z: f64) -> Result<f64> {
    let m = monodromy(j, z)?;
    Ok(0.5 * (m[0][0] + m[1][1]))
}

/// A Floquet matrix at parameter `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetMatrix {
    pub tau: Complex64,
    pub matrix: DMatrix<Complex64>,
}

impl FloquetMatrix {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.matrix.clone())
    }

    pub fn hermitian_residual(&self) -> f64 {
        hermitian_residual(&self.matrix)
    }
}

fn check_unimodular(tau: Complex64) -> Result<()> {
    if (tau.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("|τ| = {} is not 1", tau.norm())));
    }
    Ok(())
}

/// `K(τ) + diag(v)`: bonds `a_n` on the super- and subdiagonal, corner
/// entries `a_{2p}/τ` at `(1, 2p)` and `τ a_{2p}` at `(2p, 1)`.
pub fn floquet_scalar(j: &ScalarPeriodicJacobi, tau: Complex64) -> Result<FloquetMatrix> {
    check_unimodular(tau)?;
    let n = 2 * j.p;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(j.v[i], 0.0);
    }
    for i in 0..n - 1 {
        m[(i, i + 1)] += j.a[i];
        m[(i + 1, i)] += j.a[i];
    }
    let corner = j.a[n - 1];
    m[(0, n - 1)] += Complex64::new(corner, 0.0) / tau;
    m[(n - 1, 0)] += Complex64::new(corner, 0.0) * tau;
    Ok(FloquetMatrix { tau, matrix: m })
}

/// `L(τ)` for a block channel: diagonal blocks `d_n`, `a*` above and `a`
/// below the block diagonal, corners `a/τ` at `(1, P)` and `τ a*` at `(P, 1)`.
pub fn floquet_block(j: &BlockPeriodicJacobi, tau: Complex64) -> Result<FloquetMatrix> {
    check_unimodular(tau)?;
    let p = j.p;
    let n = 2 * p;
    let a = j.a_block;
    let ah = a.adjoint();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let mut add = |bi: usize, bj: usize, blk: &nalgebra::Matrix2<Complex64>| {
        for r in 0..2 {
            for c in 0..2 {
                m[(2 * bi + r, 2 * bj + c)] += blk[(r, c)];
            }
        }
    };
    for (i, d) in j.d_blocks.iter().enumerate() {
        add(i, i, d);
    }
    for i in 0..p.saturating_sub(1) {
        add(i, i + 1, &ah);
        add(i + 1, i, &a);
    }
    add(0, p - 1, &(a / tau));
    add(p - 1, 0, &(ah * tau));
    Ok(FloquetMatrix { tau, matrix: m })
}

/// Band edges of a scalar channel: the merged, sorted eigenvalues
/// `e_1 <= ... <= e_{4p}` of `K(1)` and `K(-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarBands {
    edges: Vec<f64>,
}

impl ScalarBands {
    /// Half-period `p`.
    pub fn p(&self) -> usize {
        self.edges.len() / 4
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// `z_n^+ = e_{2n+1}` for `n = 0..2p-1`.
    pub fn z_plus(&self, n: usize) -> f64 {
        self.edges[2 * n]
    }

    /// `z_n^- = e_{2n}` for `n = 1..2p`.
    pub fn z_minus(&self, n: usize) -> f64 {
        self.edges[2 * n - 1]
    }

    /// Band `σ_n = [z_{n-1}^+, z_n^-]` for `n = 1..2p`.
    pub fn band(&self, n: usize) -> Interval {
        Interval { lo: self.z_plus(n - 1), hi: self.z_minus(n) }
    }

    pub fn bands(&self) -> Vec<Interval> {
        (1..=2 * self.p()).map(|n| self.band(n)).collect()
    }

    /// Open gaps `(z_n^-, z_n^+)` wider than [`GAP_TOL`].
    pub fn gaps(&self) -> Vec<Interval> {
        (1..2 * self.p())
            .map(|n| Interval { lo: self.z_minus(n), hi: self.z_plus(n) })
            .filter(|g| g.width() > GAP_TOL)
            .collect()
    }
}

/// Band edges of a non-flat scalar channel, checked against the discriminant.
pub fn band_edges_scalar(j: &ScalarPeriodicJacobi) -> Result<ScalarBands> {
    if j.is_flat() {
        return Err(Error::FlatBandChannel);
    }
    let mut edges = floquet_scalar(j, Complex64::new(1.0, 0.0))?.eigenvalues();
    edges.extend(floquet_scalar(j, Complex64::new(-1.0, 0.0))?.eigenvalues());
    edges.sort_by(f64::total_cmp);
    let bands = ScalarBands { edges };
    let tol = |bound: f64| 1e-8 + 64.0 * f64::EPSILON * bound;
    for (n, b) in bands.bands().iter().enumerate() {
        let (m, bound) = monodromy_with_bound(j, b.midpoint())?;
        let d = 0.5 * (m[0][0] + m[1][1]);
        if d.abs() > 1.0 + tol(bound) {
            return Err(Error::Internal(format!(
                "band {} midpoint {} has |Δ| = {} > 1",
                n + 1,
                b.midpoint(),
                d.abs()
            )));
        }
    }
    for g in bands.gaps() {
        let (m, bound) = monodromy_with_bound(j, g.midpoint())?;
        let d = 0.5 * (m[0][0] + m[1][1]);
        if d.abs() < 1.0 - tol(bound) {
            return Err(Error::Internal(format!(
                "gap midpoint {} has |Δ| = {} < 1",
                g.midpoint(),
                d.abs()
            )));
        }
    }
    Ok(bands)
}

/// Flat-band energies `t v_n^+ ± sqrt((t v_n^-)^2 + 1)` with
/// `v_n^± = (v_{2n-1} ± v_{2n})/2`, `n = 1..p`, sorted ascending.
pub fn flat_band_spectrum(v: &PotentialProfile, t: f64) -> Vec<f64> {
    let diag: Vec<f64> = v.jacobi_diagonal().iter().map(|x| x * t).collect();
    flat_levels(&diag)
}

fn flat_levels(diag: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(diag.len());
    for pair in diag.chunks(2) {
        let plus = 0.5 * (pair[0] + pair[1]);
        let minus = 0.5 * (pair[0] - pair[1]);
        let r = minus.hypot(1.0);
        out.push(plus - r);
        out.push(plus + r);
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Flat-band energies of a zigzag channel whose even bonds vanish.
pub fn flat_band_channel(j: &ScalarPeriodicJacobi) -> Result<Vec<f64>> {
    if !j.is_flat() {
        return Err(Error::NotApplicable("channel has nonzero c_k".into()));
    }
    Ok(flat_levels(&j.v))
}

/// Band ranges of the sorted eigenvalue branches of a block channel.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockBands {
    pub branches: Vec<Interval>,
}

impl BlockBands {
    /// Union of the branch ranges, merged with [`GAP_TOL`].
    pub fn union(&self) -> Vec<Interval> {
        merge_intervals(self.branches.clone(), GAP_TOL)
    }
}

fn block_branch_values(j: &BlockPeriodicJacobi, theta: f64) -> Vec<f64> {
    floquet_block(j, Complex64::from_polar(1.0, theta))
        .expect("unimodular τ")
        .eigenvalues()
}

fn golden_extremum(f: impl Fn(f64) -> f64, lo: f64, hi: f64, maximize: bool) -> f64 {
    let g = |x: f64| if maximize { -f(x) } else { f(x) };
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    let mut best = g(lo).min(g(hi)).min(fc).min(fd);
    while b - a > 1e-11 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c);
            best = best.min(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d);
            best = best.min(fd);
        }
    }
    if maximize {
        -best
    } else {
        best
    }
}

/// Bands of a block channel from a τ-sweep of `L(τ)`.
///
/// Each sorted branch `λ_j(θ)`, `τ = e^{iθ}`, is sampled on `grid_size`
/// points; every grid local extremum is refined by golden-section search
/// on the neighbouring grid cells, which also handles kinks where two
/// branches touch.
pub fn spectrum_block(j: &BlockPeriodicJacobi, grid_size: usize) -> Result<BlockBands> {
    if grid_size < 16 || !grid_size.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "grid size {grid_size} must be a power of two >= 16"
        )));
    }
    let dtheta = 2.0 * PI / grid_size as f64;
    let mut samples = Vec::with_capacity(grid_size);
    for m in 0..grid_size {
        let f = floquet_block(j, Complex64::from_polar(1.0, m as f64 * dtheta))?;
        let res = f.hermitian_residual();
        if res > 1e-12 {
            return Err(Error::Internal(format!("L(τ) not Hermitian, residual {res}")));
        }
        samples.push(f.eigenvalues());
    }
    let nb = 2 * j.p;
    let mut branches = Vec::with_capacity(nb);
    for b in 0..nb {
        let vals: Vec<f64> = samples.iter().map(|s| s[b]).collect();
        let spread = vals.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
            - vals.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        let branch = |theta: f64| block_branch_values(j, theta)[b];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for m in 0..grid_size {
            let prev = vals[(m + grid_size - 1) % grid_size];
            let next = vals[(m + 1) % grid_size];
            let x = vals[m];
            lo = lo.min(x);
            hi = hi.max(x);
            if spread < REFINE_TOL {
                continue;
            }
            let th = m as f64 * dtheta;
            if x <= prev && x <= next {
                lo = lo.min(golden_extremum(branch, th - dtheta, th + dtheta, false));
            }
            if x >= prev && x >= next {
                hi = hi.max(golden_extremum(branch, th - dtheta, th + dtheta, true));
            }
        }
        branches.push(Interval { lo, hi });
    }
    Ok(BlockBands { branches })
}

/// Spectral multiplicity of a union band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(usize),
    Infinite,
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(m) => s.serialize_u64(*m as u64),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Bands, flat bands and gaps of one channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelBands {
    pub k: usize,
    pub c_k: f64,
    pub bands: Vec<Interval>,
    pub flat_bands: Vec<f64>,
    pub gaps: Vec<Interval>,
}

impl ChannelBands {
    pub fn new(k: usize, c_k: f64, bands: Vec<Interval>, flat_bands: Vec<f64>) -> Self {
        let merged = merge_intervals(bands.clone(), GAP_TOL);
        let gaps = gaps_of(&merged, GAP_TOL);
        Self { k, c_k, bands, flat_bands, gaps }
    }

    /// Merged absolutely continuous part.
    pub fn union(&self) -> Vec<Interval> {
        merge_intervals(self.bands.clone(), GAP_TOL)
    }
}

/// One band of the union spectrum with its covering channels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionBand {
    pub lo: f64,
    pub hi: f64,
    pub multiplicity: Multiplicity,
    pub channels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionSpectrum {
    pub bands: Vec<UnionBand>,
    pub gaps: Vec<Interval>,
}

/// Per-channel bands and their union over all channels.
///
/// A union band of the absolutely continuous part carries multiplicity
/// `2 ×` (number of channels contributing to it); flat bands are listed as
/// degenerate bands with infinite multiplicity. Pointwise multiplicity is
/// available through [`BandStructure::multiplicity_at`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandStructure {
    pub channels: Vec<ChannelBands>,
    pub union: UnionSpectrum,
}

impl BandStructure {
    pub fn from_channels(channels: Vec<ChannelBands>) -> Self {
        let mut tagged: Vec<(Interval, usize)> = channels
            .iter()
            .flat_map(|c| c.bands.iter().map(move |b| (*b, c.k)))
            .collect();
        tagged.sort_by(|x, y| x.0.lo.total_cmp(&y.0.lo));
        let mut bands: Vec<UnionBand> = Vec::new();
        let mut current: Option<(Interval, Vec<usize>)> = None;
        for (iv, k) in tagged {
            match current.as_mut() {
                Some((cur, ks)) if iv.lo <= cur.hi + GAP_TOL => {
                    cur.hi = cur.hi.max(iv.hi);
                    ks.push(k);
                }
                _ => {
                    if let Some((cur, ks)) = current.take() {
                        bands.push(union_band(cur, ks));
                    }
                    current = Some((iv, vec![k]));
                }
            }
        }
        if let Some((cur, ks)) = current {
            bands.push(union_band(cur, ks));
        }
        let mut flats: Vec<(f64, usize)> =
            channels.iter().flat_map(|c| c.flat_bands.iter().map(move |&e| (e, c.k))).collect();
        flats.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut flat_bands: Vec<UnionBand> = Vec::new();
        for (e, k) in flats {
            match flat_bands.last_mut() {
                Some(last) if (e - last.lo).abs() <= 1e-12 => {
                    if !last.channels.contains(&k) {
                        last.channels.push(k);
                    }
                }
                _ => flat_bands.push(UnionBand {
                    lo: e,
                    hi: e,
                    multiplicity: Multiplicity::Infinite,
                    channels: vec![k],
                }),
            }
        }
        let mut cover: Vec<Interval> = bands.iter().map(|b| Interval { lo: b.lo, hi: b.hi }).collect();
        cover.extend(flat_bands.iter().map(|b| Interval { lo: b.lo, hi: b.hi }));
        let cover = merge_intervals(cover, GAP_TOL);
        let gaps = gaps_of(&cover, GAP_TOL);
        bands.extend(flat_bands);
        bands.sort_by(|x, y| x.lo.total_cmp(&y.lo).then(x.hi.total_cmp(&y.hi)));
        Self { channels, union: UnionSpectrum { bands, gaps } }
    }

    /// Merged absolutely continuous spectrum.
    pub fn ac_union(&self) -> Vec<Interval> {
        self.union
            .bands
            .iter()
            .filter(|b| b.multiplicity != Multiplicity::Infinite)
            .map(|b| Interval { lo: b.lo, hi: b.hi })
            .collect()
    }

    /// All flat-band energies.
    pub fn flat_energies(&self) -> Vec<f64> {
        self.union
            .bands
            .iter()
            .filter(|b| b.multiplicity == Multiplicity::Infinite)
            .map(|b| b.lo)
            .collect()
    }

    /// Smallest interval containing the whole spectrum.
    pub fn hull(&self) -> Option<Interval> {
        let lo = self.union.bands.iter().map(|b| b.lo).fold(f64::INFINITY, f64::min);
        let hi = self.union.bands.iter().map(|b| b.hi).fold(f64::NEG_INFINITY, f64::max);
        lo.is_finite().then_some(Interval { lo, hi })
    }

    pub fn channel(&self, k: usize) -> Option<&ChannelBands> {
        self.channels.iter().find(|c| c.k == k)
    }

    /// `2 ×` the number of channels whose bands contain `e`, or infinite on a flat band.
    pub fn multiplicity_at(&self, e: f64, tol: f64) -> Multiplicity {
        if self.flat_energies().iter().any(|&f| (f - e).abs() <= tol) {
            return Multiplicity::Infinite;
        }
        let count = self
            .channels
            .iter()
            .filter(|c| c.bands.iter().any(|b| b.contains(e, tol)))
            .count();
        Multiplicity::Finite(2 * count)
    }
}

fn union_band(iv: Interval, mut ks: Vec<usize>) -> UnionBand {
    ks.sort_unstable();
    ks.dedup();
    UnionBand { lo: iv.lo, hi: iv.hi, multiplicity: Multiplicity::Finite(2 * ks.len()), channels: ks }
}

/// Band structure of a zigzag model, channel by channel.
pub fn full_spectrum_zigzag(model: &ZigzagModel) -> Result<BandStructure> {
    let mut channels = Vec::with_capacity(model.n());
    for (idx, j) in decompose_zigzag(model).iter().enumerate() {
        let k = idx + 1;
        let cb = if j.is_flat() {
            ChannelBands::new(k, j.c_k, Vec::new(), flat_band_channel(j)?)
        } else {
            ChannelBands::new(k, j.c_k, band_edges_scalar(j)?.bands(), Vec::new())
        };
        channels.push(cb);
    }
    Ok(BandStructure::from_channels(channels))
}

/// Band structure of an armchair model from τ-sweeps of every channel.
pub fn full_spectrum_armchair(model: &ArmchairModel, grid_size: usize) -> Result<BandStructure> {
    let mut channels = Vec::with_capacity(model.n());
    for j in decompose_armchair(model) {
        let bands = spectrum_block(&j, grid_size)?;
        channels.push(ChannelBands::new(j.k, j.c_k, bands.branches, Vec::new()));
    }
    Ok(BandStructure::from_channels(channels))
}

/// Band structure of either lattice. `grid_size` only affects armchair models.
pub fn full_spectrum(model: &Model, grid_size: usize) -> Result<BandStructure> {
    match model {
        Model::Zigzag(m) => full_spectrum_zigzag(m),
        Model::Armchair(m) => full_spectrum_armchair(m, grid_size),
    }
}

/// Closed-form spectrum of the armchair tube at zero field with potential
/// `v_{2n} = -ṽ`, `v_{2n+1} = ṽ`.
///
/// Channel `k` has bands `±[sqrt(ṽ² + s_k²), sqrt(5 + ṽ² ± 4c_k)]` with
/// `c_k = cos(πk/N)`, `s_k = sin(πk/N)`.
pub fn armchair_unperturbed(n: usize, vt: f64) -> Result<BandStructure> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("N = {n} must be at least 2")));
    }
    let channels = (1..=n)
        .map(|k| {
            let th = PI * k as f64 / n as f64;
            let (c, s) = (th.cos(), th.sin());
            let lo = (vt * vt + s * s).sqrt();
            let h1 = (5.0 + vt * vt + 4.0 * c).max(0.0).sqrt();
            let h2 = (5.0 + vt * vt - 4.0 * c).max(0.0).sqrt();
            let bands = vec![
                Interval::new(-h1, -lo),
                Interval::new(-h2, -lo),
                Interval::new(lo, h2),
                Interval::new(lo, h1),
            ];
            ChannelBands::new(k, c, bands, Vec::new())
        })
        .collect();
    Ok(BandStructure::from_channels(channels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(a: f64, v: Vec<f64>) -> ScalarPeriodicJacobi {
        ScalarPeriodicJacobi::zigzag(a / 2.0, v).unwrap()
    }

    #[test]
    fn discriminant_free_chain() {
        let j = chain(1.0, vec![0.0, 0.0]);
        assert!((discriminant(&j, 0.0).unwrap() + 1.0).abs() < 1e-14);
        assert!((discriminant(&j, 2.0).unwrap() - 1.0).abs() < 1e-14);
        for z in [-1.3, 0.4, 2.7] {
            assert!((discriminant(&j, z).unwrap() - (z * z - 2.0) / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn discriminant_p1_pattern() {
        let (v, c) = (0.7, 0.35);
        let j = chain(2.0 * c, vec![v, -v]);
        for z in [-2.0, 0.1, 1.9] {
            let want = (z * z - v * v - 4.0 * c * c - 1.0) / (4.0 * c);
            assert!((discriminant(&j, z).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_channel_rejected() {
        let j = chain(0.0, vec![1.0, 2.0]);
        assert_eq!(monodromy(&j, 0.0), Err(Error::FlatBandChannel));
        assert_eq!(band_edges_scalar(&j), Err(Error::FlatBandChannel));
    }

    #[test]
    fn floquet_periodic_point() {
        let j = chain(1.0, vec![0.0, 0.0]);
        let f = floquet_scalar(&j, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(f.matrix[(0, 1)], Complex64::new(2.0, 0.0));
        let ev = f.eigenvalues();
        assert!((ev[0] + 2.0).abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
        assert!(floquet_scalar(&j, Complex64::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn p1_bands() {
        let j = chain(1.0, vec![1.0, -1.0]);
        let b = band_edges_scalar(&j).unwrap().bands();
        let s5 = 5f64.sqrt();
        assert!((b[0].lo + s5).abs() < 1e-12 && (b[0].hi + 1.0).abs() < 1e-12);
        assert!((b[1].lo - 1.0).abs() < 1e-12 && (b[1].hi - s5).abs() < 1e-12);
    }

    #[test]
    fn free_p2_bands_touch() {
        let j = chain(1.0, vec![0.0; 4]);
        let e = band_edges_scalar(&j).unwrap();
        let want = [-2.0, -2f64.sqrt(), -2f64.sqrt(), 0.0, 0.0, 2f64.sqrt(), 2f64.sqrt(), 2.0];
        for (x, w) in e.edges().iter().zip(want) {
            assert!((x - w).abs() < 1e-12, "{x} vs {w}");
        }
        assert!(e.gaps().is_empty());
    }

    #[test]
    fn flat_levels_examples() {
        let f = flat_band_spectrum(&PotentialProfile::new(vec![0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(f, vec![-1.0, 1.0]);
        let f = flat_band_spectrum(&PotentialProfile::new(vec![2.0, 0.0]).unwrap(), 1.0);
        assert!((f[0] - (1.0 - 2f64.sqrt())).abs() < 1e-14);
        assert!((f[1] - (1.0 + 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn merge_and_gaps() {
        let m = merge_intervals(
            vec![Interval::new(2.0, 3.0), Interval::new(0.0, 1.0), Interval::new(0.5, 2.0 - 1e-12)],
            GAP_TOL,
        );
        assert_eq!(m, vec![Interval::new(0.0, 3.0)]);
        let g = gaps_of(&[Interval::new(0.0, 1.0), Interval::new(2.0, 3.0)], GAP_TOL);
        assert_eq!(g, vec![Interval::new(1.0, 2.0)]);
    }

    #[test]
    fn armchair_closed_form_hulls() {
        let s = armchair_unperturbed(4, 0.0).unwrap();
        assert_eq!(s.ac_union(), vec![Interval::new(-3.0, 3.0)]);
        let s = armchair_unperturbed(4, 1.0).unwrap();
        let u = s.ac_union();
        assert_eq!(u.len(), 2);
        assert!((u[0].lo + 10f64.sqrt()).abs() < 1e-14 && (u[0].hi + 1.0).abs() < 1e-14);
        assert!((u[1].lo - 1.0).abs() < 1e-14 && (u[1].hi - 10f64.sqrt()).abs() < 1e-14);
    }
}
