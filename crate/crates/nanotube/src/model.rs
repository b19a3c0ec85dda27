//! Potential profiles, magnetic field parametrization and model configuration.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Phase `b = (3B/16) cot(π/2N)` for field amplitude `B` on a tube with `N` hexagons.
///
/// The sign of `B` is carried through, so `b` is odd in `B`. Both signs give
/// the same spectrum because `H^{-b}` and `H^b` are unitarily equivalent.
pub fn magnetic_phase(field: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("N = {n} must be at least 2")));
    }
    if !field.is_finite() {
        return Err(Error::InvalidParameter(format!("field amplitude {field} is not finite")));
    }
    Ok(3.0 * field / 16.0 / (PI / (2.0 * n as f64)).tan())
}

/// Field amplitudes `|B| = (16/3)(π/2 − πk/N + πs) tan(π/2N)` that make `c_k` vanish,
/// one per `s` in `s_range`, keeping only nonnegative values.
pub fn flat_field_amplitudes(n: usize, k: usize, s_range: RangeInclusive<i64>) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("N = {n} must be at least 2")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("channel k = {k} outside 1..={n}")));
    }
    let nf = n as f64;
    let scale = 16.0 / 3.0 * (PI / (2.0 * nf)).tan();
    Ok(s_range
        .map(|s| scale * (PI / 2.0 - PI * k as f64 / nf + PI * s as f64))
        .filter(|&b| b >= 0.0)
        .collect())
}

/// Half of the Jacobi coefficient period: `q/2` for even `q`, `q` for odd `q`.
pub fn effective_period(profile: &PotentialProfile) -> usize {
    profile.effective_period()
}

/// A periodic real potential `v_n`, given by one period of values.
///
/// Indexing is 1-based and cyclic: `value(1)` is the first stored entry and
/// `value(n + q) == value(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PotentialProfile {
    values: Vec<f64>,
}

impl PotentialProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidPotential("potential needs at least one value".into()));
        }
        if let Some(x) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidPotential(format!("non-finite value {x}")));
        }
        Ok(Self { values })
    }

    /// The constant zero potential.
    pub fn zero() -> Self {
        Self { values: vec![0.0] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Declared period `q`.
    pub fn period(&self) -> usize {
        self.values.len()
    }

    /// Half-period `p` of the Jacobi coefficients.
    pub fn effective_period(&self) -> usize {
        let q = self.values.len();
        if q.is_multiple_of(2) {
            q / 2
        } else {
            q
        }
    }

    /// `v_n` with 1-based cyclic indexing.
    pub fn value(&self, n: i64) -> f64 {
        let q = self.values.len() as i64;
        self.values[(n - 1).rem_euclid(q) as usize]
    }

    /// `(v_1, ..., v_{2p})`.
    pub fn jacobi_diagonal(&self) -> Vec<f64> {
        (1..=2 * self.effective_period() as i64).map(|n| self.value(n)).collect()
    }

    /// `Σ_{n=1}^{2p} v_n`.
    pub fn period_sum(&self) -> f64 {
        self.jacobi_diagonal().iter().sum()
    }

    /// The profile multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * s).collect() }
    }

    /// True when `v_{2n} = v_{2n+1}` for all `n`, within `tol`.
    pub fn is_paired(&self, tol: f64) -> bool {
        let len = 2 * self.effective_period() as i64;
        (1..=len).all(|n| (self.value(2 * n) - self.value(2 * n + 1)).abs() <= tol)
    }
}

impl TryFrom<Vec<f64>> for PotentialProfile {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<PotentialProfile> for Vec<f64> {
    fn from(p: PotentialProfile) -> Self {
        p.values
    }
}

/// Axial magnetic field, stored canonically as the zigzag phase `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticField {
    b: f64,
}

impl MagneticField {
    pub fn from_phase(b: f64) -> Self {
        Self { b }
    }

    pub fn from_amplitude(field: f64, n: usize) -> Result<Self> {
        Ok(Self { b: magnetic_phase(field, n)? })
    }

    pub fn phase(&self) -> f64 {
        self.b
    }
}

fn check_common(n: usize, potential: &PotentialProfile, t: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("N = {n} must be at least 2")));
    }
    if !t.is_finite() {
        return Err(Error::InvalidModel(format!("coupling t = {t} is not finite")));
    }
    debug_assert!(potential.period() >= 1);
    Ok(())
}

/// Zigzag tube with `N` hexagons around the circumference, phase `b`,
/// potential profile and coupling `t` (the Hamiltonian is `H_0^b + tV`).
#[derive(Debug, Clone, PartialEq)]
pub struct ZigzagModel {
    n: usize,
    b: f64,
    potential: PotentialProfile,
    t: f64,
}

impl ZigzagModel {
    pub fn new(n: usize, b: f64, potential: PotentialProfile, t: f64) -> Result<Self> {
        check_common(n, &potential, t)?;
        if !b.is_finite() {
            return Err(Error::InvalidModel(format!("phase b = {b} is not finite")));
        }
        Ok(Self { n, b, potential, t })
    }

    pub fn with_field(n: usize, field: MagneticField, potential: PotentialProfile, t: f64) -> Result<Self> {
        Self::new(n, field.phase(), potential, t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn potential(&self) -> &PotentialProfile {
        &self.potential
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn effective_period(&self) -> usize {
        self.potential.effective_period()
    }

    /// `c_k = cos(b + πk/N)`.
    pub fn c(&self, k: usize) -> f64 {
        (self.b + PI * k as f64 / self.n as f64).cos()
    }

    pub fn with_b(&self, b: f64) -> Self {
        Self { b, ..self.clone() }
    }

    pub fn with_t(&self, t: f64) -> Self {
        Self { t, ..self.clone() }
    }
}

/// Armchair tube with `N` hexagons, independent phases `(b1, b2, b3)`,
/// potential profile and coupling `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmchairModel {
    n: usize,
    phases: [f64; 3],
    potential: PotentialProfile,
    t: f64,
}

impl ArmchairModel {
    pub fn new(n: usize, phases: [f64; 3], potential: PotentialProfile, t: f64) -> Result<Self> {
        check_common(n, &potential, t)?;
        if phases.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidModel(format!("phases {phases:?} are not finite")));
        }
        Ok(Self { n, phases, potential, t })
    }

    /// Model whose phases come from the tube geometry for field amplitude `field`.
    pub fn with_field(n: usize, field: f64, potential: PotentialProfile, t: f64) -> Result<Self> {
        let phases = crate::armchair::magnetic_constants(n, field)?;
        Self::new(n, phases, potential, t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phases(&self) -> [f64; 3] {
        self.phases
    }

    pub fn potential(&self) -> &PotentialProfile {
        &self.potential
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Number of distinct diagonal blocks per period.
    pub fn effective_period(&self) -> usize {
        self.potential.effective_period()
    }

    pub fn with_t(&self, t: f64) -> Self {
        Self { t, ..self.clone() }
    }

    pub fn with_phases(&self, phases: [f64; 3]) -> Self {
        Self { phases, ..self.clone() }
    }
}

/// Either lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Zigzag(ZigzagModel),
    Armchair(ArmchairModel),
}

impl Model {
    pub fn n(&self) -> usize {
        match self {
            Model::Zigzag(m) => m.n(),
            Model::Armchair(m) => m.n(),
        }
    }

    pub fn potential(&self) -> &PotentialProfile {
        match self {
            Model::Zigzag(m) => m.potential(),
            Model::Armchair(m) => m.potential(),
        }
    }

    pub fn effective_period(&self) -> usize {
        self.potential().effective_period()
    }
}

impl From<ZigzagModel> for Model {
    fn from(m: ZigzagModel) -> Self {
        Model::Zigzag(m)
    }
}

impl From<ArmchairModel> for Model {
    fn from(m: ArmchairModel) -> Self {
        Model::Armchair(m)
    }
}
