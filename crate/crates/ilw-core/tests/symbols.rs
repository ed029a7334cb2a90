use ilw_core::symbols::*;
use proptest::prelude::*;

fn ulps(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / (f64::EPSILON * a.abs().max(b.abs()))
}

// Independent oracle: the textbook formulas in the regime where they are well conditioned.
fn omega_direct(delta: f64, z: f64) -> f64 {
    z * z / (delta * z).tanh() - z / delta
}

fn omega_prime_direct(delta: f64, z: f64) -> f64 {
    let w = delta * z;
    2.0 * z / w.tanh() - delta * z * z / (w.sinh() * w.sinh()) - 1.0 / delta
}

#[test]
fn values_at_origin() {
    assert_eq!(omega(1.0, 0.0), 0.0);
    assert_eq!(omega_prime(1.0, 0.0), 0.0);
    assert_eq!(q_symbol(1.0, 0.0), 0.0);
    assert_eq!(big_l(1.0, 0.0), 0.0);
    assert_eq!(psi_symbol(1.0, 0.0), 0.0);
    assert_eq!(bo_ilw_gap(1.0, 0.0), 0.0);
}

#[test]
fn large_argument_values() {
    // 50^2 coth(50) - 50 = 2450 up to e^{-100}
    assert!((omega(1.0, 50.0) - 2450.0).abs() < 1e-9);
    // mpmath: 1/1000 - coth(1000) = -0.999
    assert!((psi_symbol(1.0, 1e3) + 0.999).abs() < 1e-15);
    // mpmath: sqrt(Omega'(1e4)) = 141.41782065920829...
    let q = q_symbol(1.0, 1e4);
    assert!((q - 141.417_820_659_208_3).abs() < 1e-10);
    assert!((q / (2e4f64).sqrt() - 1.0).abs() < 1e-3);
    assert!(omega(1.0, 1e6).is_finite() && omega_prime(1.0, -1e6).is_finite());
}

#[test]
fn matches_direct_formulas_away_from_origin() {
    for &(d, z) in &[(1.0, 1.0), (1.0, -3.0), (2.0, 0.7), (0.5, 10.0), (3.0, 5.0)] {
        assert!((omega(d, z) / omega_direct(d, z) - 1.0).abs() < 1e-13, "omega {d} {z}");
        assert!((omega_prime(d, z) / omega_prime_direct(d, z) - 1.0).abs() < 1e-12, "omega' {d} {z}");
    }
}

#[test]
fn small_argument_series() {
    for &d in &[0.5f64, 1.0, 4.0] {
        for &w in &[1e-8f64, 1e-5, 1e-3, 0.01, 0.04] {
            let z = w / d;
            let lead = d * z.powi(3) / 3.0;
            let exact = lead * (1.0 - w * w / 15.0 + 2.0 * w.powi(4) / 315.0 - w.powi(6) / 1575.0);
            assert!((omega(d, z) / exact - 1.0).abs() < 1e-12, "delta {d} w {w}");
            assert!(((omega(d, z) - lead) / lead).abs() < 1e-3);
            let dexact = d * z * z * (1.0 - w * w / 9.0 + 2.0 * w.powi(4) / 135.0);
            assert!((omega_prime(d, z) / dexact - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn seams_agree() {
    for w in [SERIES_SWITCH * (1.0 - 1e-12), SERIES_SWITCH * (1.0 + 1e-12)] {
        let direct = 1.0 / w.tanh();
        assert!((coth(w) / direct - 1.0).abs() < 1e-12);
        let s = w.sinh();
        assert!((csch2(w) * s * s - 1.0).abs() < 1e-12);
    }
    let below = REDUCED_SWITCH * (1.0 - 1e-15);
    let above = REDUCED_SWITCH;
    assert!((reduced_g(below) / reduced_g(above) - 1.0).abs() < 1e-12);
    assert!((reduced_k(below) / reduced_k(above) - 1.0).abs() < 1e-12);
    assert!((reduced_g(1.0) - (1.0 / 1f64.tanh() - 1.0)).abs() < 1e-15);
}

#[test]
fn coth_large_argument_is_safe() {
    assert_eq!(coth(800.0), 1.0);
    assert_eq!(coth(-800.0), -1.0);
    assert_eq!(csch2(800.0), 0.0);
}

#[test]
fn gap_bound_and_monotonicity() {
    let z: f64 = 20.0;
    assert!(bo_ilw_gap(1.0, z).abs() < 16.0 * z * z * (-2.0 * z).exp());
    let e = (-2.0 * z).exp();
    assert!(bo_ilw_gap(1.0, z).abs() <= 2.0 * z * z * e / (1.0 - e) * (1.0 + 1e-12));
    let gaps: Vec<f64> = [1.0, 2.0, 4.0, 8.0].iter().map(|&d| bo_ilw_gap(d, 5.0).abs()).collect();
    assert!(gaps.windows(2).all(|p| p[1] < p[0]));
}

#[test]
fn benjamin_ono_limit() {
    let sup = |d: f64| (0..=2000).map(|i| -10.0 + 0.01 * i as f64).map(|z| (omega(d, z) - z * z.abs()).abs()).fold(0.0, f64::max);
    let s: Vec<f64> = [1.0, 10.0, 100.0].iter().map(|&d| sup(d)).collect();
    assert!(s[0] > s[1] && s[1] > s[2], "{s:?}");
}

#[test]
fn derivative_consistency_order() {
    let (d, z) = (2.0, 1.0);
    let errs: Vec<f64> =
        [1e-2, 1e-3, 1e-4].iter().map(|&h| ((omega(d, z + h) - omega(d, z - h)) / (2.0 * h) - omega_prime(d, z)).abs()).collect();
    assert!(errs[2] < 1e-6);
    for p in errs.windows(2) {
        assert!((p[0] / p[1]).log10() >= 1.9, "{errs:?}");
    }
}

#[test]
fn depth_rejects_bad_values() {
    assert!(Depth::new(0.0).is_err());
    assert!(Depth::new(-1.0).is_err());
    assert!(Depth::new(f64::NAN).is_err());
    assert_eq!(Depth::new(2.0).unwrap().get(), 2.0);
}

#[test]
fn table_rows_and_header() {
    let rows = symbol_table(Depth::new(1.0).unwrap(), -10.0, 10.0, 201).unwrap();
    assert_eq!(rows.len(), 201);
    assert_eq!(SYMBOL_TABLE_HEADER.split(',').count(), 7);
    for r in &rows {
        assert!(ulps(r.q * r.q, r.omega_prime) <= 4.0);
        assert_eq!(r.csv().split(',').count(), 7);
    }
    assert!(symbol_table(Depth::new(1.0).unwrap(), 1.0, -1.0, 10).is_err());
}

#[test]
fn custom_table_is_odd_and_interpolates() {
    let t = SymbolTable::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 8.0]).unwrap();
    assert_eq!(t.omega(0.5), 0.5);
    assert_eq!(t.omega(-1.5), -4.5);
    assert_eq!(t.omega_prime(1.5), 7.0);
    assert!(SymbolTable::new(vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
    assert!(SymbolTable::new(vec![1.0, 2.0], vec![0.0, 1.0]).is_err());
}

#[test]
fn commutator_check_on_centered_data() {
    let n = 1024;
    let l = 64.0;
    let gaussian: Vec<f64> = (0..n).map(|j| -0.5 * l + l * j as f64 / n as f64).map(|x: f64| (-x * x).exp()).collect();
    let norm = (gaussian.iter().map(|v| v * v).sum::<f64>() * l / n as f64).sqrt();
    let chord = discrete_commutator_check(&gaussian, l, CommutatorCoordinate::Chord).unwrap();
    assert!(chord < 1e-6 * norm, "{chord}");
    let saw = discrete_commutator_check(&gaussian, l, CommutatorCoordinate::Sawtooth).unwrap();
    eprintln!("sawtooth commutator norm {saw:e}, chord {chord:e}");
    assert_eq!(discrete_commutator_check(&vec![0.0; n], l, CommutatorCoordinate::Chord).unwrap(), 0.0);
    assert!(discrete_commutator_check(&gaussian[..1000], l, CommutatorCoordinate::Chord).is_err());
    let mut bad = gaussian.clone();
    bad[3] = f64::NAN;
    assert!(discrete_commutator_check(&bad, l, CommutatorCoordinate::Sawtooth).is_err());
}

#[test]
fn commutator_check_is_large_for_edge_data() {
    let n = 1024;
    let l = 64.0;
    let edge: Vec<f64> = (0..n).map(|j| -0.5 * l + l * j as f64 / n as f64).map(|x: f64| (-(x.abs() - 0.5 * l).powi(2)).exp()).collect();
    let saw = discrete_commutator_check(&edge, l, CommutatorCoordinate::Sawtooth).unwrap();
    assert!(saw > 1.0, "{saw}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parity_and_factorizations(delta in 1e-3f64..1e3, z in -1e3f64..1e3) {
        prop_assert!(ulps(omega(delta, -z), -omega(delta, z)) <= 2.0);
        prop_assert!(ulps(psi_symbol(delta, -z), -psi_symbol(delta, z)) <= 2.0);
        prop_assert_eq!(omega_prime(delta, -z), omega_prime(delta, z));
        prop_assert_eq!(q_symbol(delta, -z), q_symbol(delta, z));
        prop_assert_eq!(big_l(delta, -z), big_l(delta, z));
        prop_assert!(ulps(z * big_l(delta, z), omega(delta, z)) <= 4.0);
        let q = q_symbol(delta, z);
        prop_assert!(ulps(q * q, omega_prime(delta, z)) <= 4.0);
        prop_assert!(q >= 0.0 && big_l(delta, z) >= 0.0);
        prop_assert!(psi_symbol(delta, z).abs() <= 1.0);
    }

    #[test]
    fn kdv_limit_coefficient(delta in 1e-2f64..1e2, w in -0.05f64..0.05) {
        prop_assume!(w != 0.0);
        let z = w / delta;
        let lead = delta * z.powi(3) / 3.0;
        prop_assert!(((omega(delta, z) - lead) / lead).abs() < 1e-3);
    }
}
