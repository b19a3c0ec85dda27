//! Armchair channels, tube geometry and the paired-potential identities.

use std::f64::consts::PI;

use proptest::prelude::*;

use nanotube::armchair::{
    decompose_armchair, magnetic_constants, shifted_schroedinger_inclusion, tube_geometry_rings, tube_radius,
};
use nanotube::spectral::{band_edges_scalar, merge_intervals, spectrum_block, Interval, GAP_TOL};
use nanotube::zigzag::ScalarPeriodicJacobi;
use nanotube::{ArmchairModel, Error, PotentialProfile};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn armchair() -> impl Strategy<Value = ArmchairModel> {
    (2usize..=12, [-PI..PI, -PI..PI, -PI..PI], prop::collection::vec(-3.0f64..3.0, 1..=8), 0.0f64..5.0)
        .prop_map(|(n, ph, v, t)| ArmchairModel::new(n, ph, PotentialProfile::new(v).unwrap(), t).unwrap())
}

/// `v_{2n} = v_{2n+1} = w_n` for `n = 1..P`.
fn paired(w: &[f64]) -> PotentialProfile {
    let p = w.len();
    let mut values = vec![0.0; 2 * p];
    for (n, &x) in w.iter().enumerate() {
        values[(2 * n + 1) % (2 * p)] = x;
        values[(2 * n + 2) % (2 * p)] = x;
    }
    PotentialProfile::new(values).unwrap()
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn blocks_are_unitary_and_hermitian(m in armchair()) {
        let ch = decompose_armchair(&m);
        prop_assert_eq!(ch.len(), m.n());
        for c in &ch {
            prop_assert!(c.unitarity_defect() < 1e-14);
            prop_assert!(c.hermitian_defect() == 0.0);
            prop_assert_eq!(c.p, m.effective_period());
        }
    }
}

proptest! {
    #![proptest_config(config(40))]

    /// Channel `N` at zero phases is `(J(v^{ev}) − 1) ⊕ (J(v^{ev}) + 1)` up to a constant unitary.
    #[test]
    fn channel_n_is_shifted_schroedinger(n in 2usize..=6, w in prop::collection::vec(-2.0f64..2.0, 1..=3), t in 0.1f64..2.0) {
        let v = paired(&w);
        let m = ArmchairModel::new(n, [0.0; 3], v.clone(), t).unwrap();
        let ch = decompose_armchair(&m).into_iter().find(|c| c.k == n).unwrap();
        let swept = spectrum_block(&ch, 256).unwrap().union();
        let ev: Vec<f64> = (0..w.len() as i64).map(|j| t * v.value(2 * j)).collect();
        let sch = band_edges_scalar(&ScalarPeriodicJacobi::schroedinger(&ev).unwrap()).unwrap().bands();
        let shifted: Vec<Interval> = sch.iter().flat_map(|b| [b.shifted(-1.0), b.shifted(1.0)]).collect();
        let want = merge_intervals(shifted, GAP_TOL);
        prop_assert_eq!(swept.len(), want.len());
        for (x, y) in swept.iter().zip(&want) {
            prop_assert!((x.lo - y.lo).abs() < 1e-8 && (x.hi - y.hi).abs() < 1e-8, "{x:?} vs {y:?}");
        }
    }
}

#[test]
fn inclusions_hold_for_paired_potentials() {
    for (n, w) in [(3, vec![0.4, -1.1]), (4, vec![0.9]), (6, vec![1.2, 0.3, -0.8])] {
        let r = shifted_schroedinger_inclusion(n, &paired(&w), 1.0, 256, 1e-8).unwrap();
        assert!(r.armchair.holds);
        assert_eq!(r.zigzag.is_some(), n % 3 == 0);
        assert!(r.zigzag.is_none_or(|z| z.holds));
    }
}

#[test]
fn inclusion_rejects_unpaired_potential() {
    let v = PotentialProfile::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    assert!(matches!(shifted_schroedinger_inclusion(3, &v, 1.0, 64, 1e-8), Err(Error::Precondition(_))));
}

#[test]
fn radius_reference_values() {
    assert!((tube_radius(6).unwrap() - 2.909312911).abs() < 1e-9);
    let th = PI / 10.0;
    assert!((tube_radius(10).unwrap() - (th.cos() + 1.25).sqrt() / th.sin()).abs() < 1e-15);
    assert!(tube_radius(1).is_err());
}

#[test]
fn angular_spacing_and_bonds() {
    for n in 2..=24 {
        let (g, _) = tube_geometry_rings(n, 0.0, 4).unwrap();
        assert!(g.max_bond_deviation() < 1e-10, "N = {n}");
        for ring in 0..4 {
            for j in 0..2 {
                for k in 0..n - 1 {
                    let d = g.angle(ring, j, k + 1) - g.angle(ring, j, k);
                    assert!((d - 2.0 * PI / n as f64).abs() < 1e-14);
                }
            }
        }
        for a in &g.atoms {
            assert!((a.x.hypot(a.y) - g.radius).abs() < 1e-12);
            assert!((a.z - a.n as f64 * g.axial_step).abs() < 1e-15);
        }
    }
}

#[test]
fn field_phases_from_radii() {
    let n = 7;
    let r = tube_radius(n).unwrap();
    let (r1, r2) = ((r * r - 1.0).sqrt(), (4.0 * r * r - 1.0).sqrt());
    let [b1, b2, b3] = magnetic_constants(n, 0.8).unwrap();
    assert!((b1 - 0.8 * (r2 - r1) / 4.0).abs() < 1e-15);
    assert_eq!(b1, b2);
    assert!((b3 + 0.8 * r2 / 4.0).abs() < 1e-15);
    assert!(magnetic_constants(n, f64::NAN).is_err());
}
