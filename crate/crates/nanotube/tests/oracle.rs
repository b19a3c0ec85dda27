//! Full-Hamiltonian oracle against the channel decomposition.

use std::f64::consts::PI;

use proptest::prelude::*;

use nanotube::oracle::{build_full_hamiltonian, compare_decomposition, ORACLE_TOL};
use nanotube::{ArmchairModel, Error, Model, PotentialProfile, ZigzagModel};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

/// Periods whose effective period is at most 3.
fn potential() -> impl Strategy<Value = PotentialProfile> {
    prop::sample::select(vec![1usize, 2, 3, 4, 6])
        .prop_flat_map(|q| prop::collection::vec(-2.0f64..2.0, q))
        .prop_map(|v| PotentialProfile::new(v).unwrap())
}

fn zigzag() -> impl Strategy<Value = ZigzagModel> {
    (2usize..=6, -PI..PI, potential(), 0.0f64..2.0)
        .prop_map(|(n, b, v, t)| ZigzagModel::new(n, b, v, t).unwrap())
}

fn armchair() -> impl Strategy<Value = ArmchairModel> {
    (2usize..=6, [-PI..PI, -PI..PI, -PI..PI], potential(), 0.0f64..2.0)
        .prop_map(|(n, ph, v, t)| ArmchairModel::new(n, ph, v, t).unwrap())
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / gcd(a, b) * b
}

fn multiset_dev(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn zigzag_decomposition_matches(m in zigzag(), mult in 1usize..=3) {
        let cells = m.effective_period() * mult;
        let r = compare_decomposition(&m.into(), cells, ORACLE_TOL).unwrap();
        prop_assert!(r.pass, "{r:?}");
    }

    #[test]
    fn armchair_decomposition_matches(m in armchair(), mult in 1usize..=3) {
        let cells = m.effective_period() * mult;
        let r = compare_decomposition(&m.into(), cells, ORACLE_TOL).unwrap();
        prop_assert!(r.pass, "{r:?}");
    }

    #[test]
    fn full_hamiltonian_is_hermitian(m in armchair()) {
        let h = build_full_hamiltonian(&m.into(), 6).unwrap();
        prop_assert!(h.hermitian_residual() == 0.0);
    }
}

proptest! {
    #![proptest_config(config(12))]

    /// The unitary equivalence is single-valued on the cyclic truncation only
    /// when the number of cells is a multiple of `2N`.
    #[test]
    fn zigzag_gauge_shift_and_reflection(m in zigzag()) {
        let cells = lcm(m.effective_period(), 2 * m.n());
        let eig = |z: ZigzagModel| build_full_hamiltonian(&z.into(), cells).unwrap().eigenvalues();
        let base = eig(m.clone());
        let shifted = eig(m.with_b(m.b() + PI / m.n() as f64));
        let mirrored = eig(m.with_b(-m.b()));
        prop_assert!(multiset_dev(&base, &shifted) < 1e-10);
        prop_assert!(multiset_dev(&base, &mirrored) < 1e-10);
    }
}

#[test]
fn gauge_shift_breaks_on_short_truncation() {
    let v = PotentialProfile::new(vec![0.7, -0.2]).unwrap();
    let m = ZigzagModel::new(3, 0.25, v, 1.0).unwrap();
    let eig = |z: ZigzagModel| build_full_hamiltonian(&z.into(), 2).unwrap().eigenvalues();
    let dev = multiset_dev(&eig(m.clone()), &eig(m.with_b(m.b() + PI / 3.0)));
    assert!(dev > 1e-6, "deviation {dev}");
}

#[test]
fn site_count_and_indexing() {
    let v = PotentialProfile::new(vec![0.5, -0.5]).unwrap();
    let m: Model = ZigzagModel::new(4, 0.2, v, 1.0).unwrap().into();
    let h = build_full_hamiltonian(&m, 3).unwrap();
    assert_eq!(h.dimension(), 24);
    assert_eq!(h.index(0, 0, 0), 0);
    assert_eq!(h.index(-1, 1, -1), h.index(2, 1, 3));
    assert_eq!(h.matrix[(h.index(1, 0, 2), h.index(1, 0, 2))].re, 0.5);
    assert_eq!(h.matrix[(h.index(1, 1, 2), h.index(1, 1, 2))].re, -0.5);
}

#[test]
fn truncation_must_be_a_multiple_of_the_period() {
    let v = PotentialProfile::new(vec![1.0, 2.0, 3.0]).unwrap();
    let m: Model = ArmchairModel::new(3, [0.0; 3], v, 1.0).unwrap().into();
    assert_eq!(m.effective_period(), 3);
    assert!(matches!(compare_decomposition(&m, 4, ORACLE_TOL), Err(Error::InvalidTruncation { l: 4, p: 3, .. })));
    assert!(matches!(build_full_hamiltonian(&m, 0), Err(Error::InvalidTruncation { .. })));
    assert!(compare_decomposition(&m, 6, ORACLE_TOL).unwrap().pass);
}
