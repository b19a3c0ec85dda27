//! Invariants of the scalar and block band solvers.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;

use nanotube::armchair::BlockPeriodicJacobi;
use nanotube::spectral::{
    band_edges_scalar, discriminant, floquet_block, floquet_scalar, gaps_of, merge_intervals,
    monodromy, spectrum_block, Interval, GAP_TOL,
};
use nanotube::zigzag::ScalarPeriodicJacobi;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A non-flat zigzag channel: `p` in `1..=4`, `|c|` in `[0.05, 1]`, diagonal in `[-3, 3]`.
fn channel() -> impl Strategy<Value = ScalarPeriodicJacobi> {
    (1usize..=4, 0.05f64..1.0)
        .prop_flat_map(|(p, c)| (Just(c), prop::collection::vec(-3.0f64..3.0, 2 * p)))
        .prop_map(|(c, v)| ScalarPeriodicJacobi::zigzag(c, v).unwrap())
}

/// The scalar channel rewritten as a 2×2 block Jacobi operator:
/// `d_n = [[v_{2n+1}, a_{2n+1}], [a_{2n+1}, v_{2n+2}]]`, lower block `[[0, a_{2n}], [0, 0]]`.
fn as_block(j: &ScalarPeriodicJacobi) -> BlockPeriodicJacobi {
    let d_blocks = (0..j.p as i64)
        .map(|n| {
            let a = j.bond(2 * n + 1);
            Matrix2::new(c64(j.diag(2 * n + 1)), c64(a), c64(a), c64(j.diag(2 * n + 2)))
        })
        .collect();
    let a_block = Matrix2::new(c64(0.0), c64(j.bond(2)), c64(0.0), c64(0.0));
    BlockPeriodicJacobi { p: j.p, a_block, d_blocks, k: 1, c_k: j.c_k }
}

fn random_block() -> impl Strategy<Value = BlockPeriodicJacobi> {
    let entry = || (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im));
    (1usize..=3)
        .prop_flat_map(move |p| {
            (
                prop::collection::vec((entry(), entry(), entry(), entry()), 1),
                prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, entry()), p),
            )
        })
        .prop_map(|(a, d)| {
            let (x, y, z, w) = a[0];
            let d_blocks = d
                .into_iter()
                .map(|(u, v, o)| Matrix2::new(c64(u), o, o.conj(), c64(v)))
                .collect::<Vec<_>>();
            BlockPeriodicJacobi { p: d_blocks.len(), a_block: Matrix2::new(x, y, z, w), d_blocks, k: 1, c_k: 0.0 }
        })
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn monodromy_is_unimodular(j in channel(), z in -6.0f64..6.0) {
        let m = monodromy(&j, z).unwrap();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let scale = m.iter().flatten().map(|x| x * x).sum::<f64>().max(1.0);
        prop_assert!((det - 1.0).abs() <= 1e-11 * scale, "det = {det}");
    }

    #[test]
    fn floquet_matrices_are_hermitian(j in channel(), b in random_block(), th in 0.0f64..2.0 * PI) {
        let tau = Complex64::from_polar(1.0, th);
        prop_assert!(floquet_scalar(&j, tau).unwrap().hermitian_residual() < 1e-14);
        prop_assert!(floquet_block(&b, tau).unwrap().hermitian_residual() < 1e-14);
    }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn edges_interlace(j in channel()) {
        let e = band_edges_scalar(&j).unwrap();
        let edges = e.edges();
        prop_assert_eq!(edges.len(), 4 * j.p);
        for n in 1..=2 * j.p {
            prop_assert!(e.band(n).width() > 0.0);
            if n < 2 * j.p {
                prop_assert!(e.z_minus(n) <= e.z_plus(n));
            }
        }
        prop_assert!(edges.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn discriminant_sign_at_edges(j in channel()) {
        let e = band_edges_scalar(&j).unwrap();
        let scale = 1.0 + j.v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let tol = 1e-7 * scale.powi(2 * j.p as i32);
        for n in 0..=2 * j.p {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            if n > 0 {
                prop_assert!((discriminant(&j, e.z_minus(n)).unwrap() - sign).abs() <= tol);
            }
            if n < 2 * j.p {
                prop_assert!((discriminant(&j, e.z_plus(n)).unwrap() - sign).abs() <= tol);
            }
        }
        for band in e.bands() {
            prop_assert!(discriminant(&j, band.midpoint()).unwrap().abs() <= 1.0 + tol);
        }
    }

    #[test]
    fn floquet_eigenvalues_lie_in_bands(j in channel(), th in 0.0f64..2.0 * PI) {
        let bands = band_edges_scalar(&j).unwrap().bands();
        let ev = floquet_scalar(&j, Complex64::from_polar(1.0, th)).unwrap().eigenvalues();
        for (x, band) in ev.iter().zip(&bands) {
            prop_assert!(band.contains(*x, 1e-9), "{x} outside {band:?}");
        }
    }

    #[test]
    fn flat_channel_is_tau_independent(v in prop::collection::vec(-3.0f64..3.0, 2..=8), th in 0.0f64..2.0 * PI) {
        let v = if v.len() % 2 == 1 { v[1..].to_vec() } else { v };
        let j = ScalarPeriodicJacobi::zigzag(0.0, v).unwrap();
        let at_one = floquet_scalar(&j, c64(1.0)).unwrap().eigenvalues();
        let at_tau = floquet_scalar(&j, Complex64::from_polar(1.0, th)).unwrap().eigenvalues();
        for (x, y) in at_one.iter().zip(&at_tau) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn block_sweep_reproduces_scalar_bands(j in channel()) {
        let scalar = merge_intervals(band_edges_scalar(&j).unwrap().bands(), GAP_TOL);
        let block = spectrum_block(&as_block(&j), 256).unwrap().union();
        prop_assert_eq!(scalar.len(), block.len());
        for (x, y) in scalar.iter().zip(&block) {
            prop_assert!((x.lo - y.lo).abs() < 1e-9 && (x.hi - y.hi).abs() < 1e-9, "{x:?} vs {y:?}");
        }
    }

    #[test]
    fn block_sweep_shift_equivariance(b in random_block(), s in -5.0f64..5.0) {
        let mut shifted = b.clone();
        for d in shifted.d_blocks.iter_mut() {
            *d += Matrix2::identity() * c64(s);
        }
        let x = spectrum_block(&b, 128).unwrap().branches;
        let y = spectrum_block(&shifted, 128).unwrap().branches;
        for (u, w) in x.iter().zip(&y) {
            prop_assert!((u.lo + s - w.lo).abs() < 1e-9 && (u.hi + s - w.hi).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn merged_intervals_are_disjoint(raw in prop::collection::vec((-10.0f64..10.0, 0.0f64..3.0), 1..20)) {
        let items: Vec<Interval> = raw.iter().map(|&(lo, w)| Interval::new(lo, lo + w)).collect();
        let merged = merge_intervals(items.clone(), 0.0);
        prop_assert!(merged.windows(2).all(|w| w[0].hi < w[1].lo));
        for iv in &items {
            prop_assert!(merged.iter().any(|m| m.lo <= iv.lo && iv.hi <= m.hi));
        }
        let gaps = gaps_of(&merged, 0.0);
        prop_assert_eq!(gaps.len(), merged.len() - 1);
        for g in &gaps {
            prop_assert!(items.iter().all(|iv| iv.hi <= g.lo || iv.lo >= g.hi));
        }
    }
}

#[test]
fn free_chain_edges() {
    let j = ScalarPeriodicJacobi::schroedinger(&[0.0, 0.0]).unwrap();
    let e = band_edges_scalar(&j).unwrap();
    let want = [-2.0, 0.0, 0.0, 2.0];
    for (x, y) in e.edges().iter().zip(want) {
        assert!((x - y).abs() < 1e-12);
    }
}
