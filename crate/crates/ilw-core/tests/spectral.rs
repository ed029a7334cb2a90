use std::f64::consts::PI;

use ilw_core::spectral::*;
use ilw_core::symbols::Depth;
use ilw_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(grid: &std::sync::Arc<Grid>, modes: usize, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> = (0..modes).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let k0 = 2.0 * PI / grid.length();
    Field::from_fn(grid, |x| {
        coeffs.iter().enumerate().map(|(m, (a, b))| a * (k0 * m as f64 * x).cos() + b * (k0 * m as f64 * x).sin()).sum()
    })
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn grid_invariants() {
    assert!(Grid::new(15, 1.0).is_err());
    assert!(Grid::new(17, 1.0).is_err());
    assert!(Grid::new(16, 0.0).is_err());
    let g = Grid::new(16, 8.0).unwrap();
    assert_eq!(g.x()[0], -4.0);
    assert_eq!(g.k()[8], -8);
    assert!((g.z()[1] - 2.0 * PI / 8.0).abs() < 1e-15);
    assert!((g.z()[15] + 2.0 * PI / 8.0).abs() < 1e-15);
}

#[test]
fn round_trip_and_realness() {
    let g = Grid::new(256, 10.0).unwrap();
    let f = random_field(&g, 40, 1);
    let back = g.inverse(f.spectrum());
    assert!(max_diff(&back, f.values()) < 1e-12 * f.max_abs());
    let mut buf: Vec<num_complex::Complex64> = f.spectrum().to_vec();
    use rustfft::FftPlanner;
    FftPlanner::new().plan_fft_inverse(256).process(&mut buf);
    let imag = buf.iter().map(|c| c.im.abs() / 256.0).fold(0.0, f64::max);
    assert!(imag < 1e-12 * f.max_abs());
}

#[test]
fn parseval() {
    let g = Grid::new(512, 7.0).unwrap();
    let f = random_field(&g, 100, 2);
    let lhs = f.values().iter().map(|v| v * v).sum::<f64>() * g.length() / g.n() as f64;
    let rhs = f.spectrum().iter().map(|c| c.norm_sqr()).sum::<f64>() * g.length() / (g.n() * g.n()) as f64;
    assert!((lhs / rhs - 1.0).abs() < 1e-12);
}

#[test]
fn identity_and_derivative_of_sine() {
    let g = Grid::new(64, 6.0).unwrap();
    let k = 2.0 * PI / 6.0;
    let f = Field::from_fn(&g, |x| (k * x).sin());
    let id = f.apply_multiplier(|_| 1.0, Parity::Even, false).unwrap();
    assert!(max_diff(id.values(), f.values()) < 1e-14);
    let d = f.apply_multiplier(|z| z, Parity::Odd, true).unwrap();
    let exact: Vec<f64> = g.x().iter().map(|&x| k * (k * x).cos()).collect();
    assert!(max_diff(d.values(), &exact) < 1e-13);
    assert!(max_diff(Field::from_fn(&g, |_| 3.0).dx().values(), &vec![0.0; 64]) < 1e-14);
}

#[test]
fn multiplier_realness_rules() {
    let g = Grid::new(32, 1.0).unwrap();
    let f = random_field(&g, 5, 3);
    assert!(matches!(f.apply_multiplier(|z| z, Parity::Odd, false), Err(Error::NonRealMultiplier { .. })));
    assert!(matches!(f.apply_multiplier(|z| z * z, Parity::Even, true), Err(Error::NonRealMultiplier { .. })));
    assert!(matches!(f.apply_multiplier(|z| z, Parity::Even, false), Err(Error::ParityViolation { .. })));
    assert!(f.apply_multiplier(|z| if z == 0.0 { f64::NAN } else { 1.0 }, Parity::Even, false).is_err());
}

#[test]
fn derivative_matches_fourth_order_differences() {
    let g = Grid::new(1024, 2.0 * PI).unwrap();
    let f = random_field(&g, 6, 4);
    let d = f.dx();
    let (u, h, n) = (f.values(), g.dx(), g.n());
    let fd: Vec<f64> = (0..n)
        .map(|j| {
            let at = |o: isize| u[((j as isize + o).rem_euclid(n as isize)) as usize];
            (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h)
        })
        .collect();
    assert!(max_diff(d.values(), &fd) < 1e-6, "{}", max_diff(d.values(), &fd));
}

// Principal-value quadrature of T g(x) = -(1/(2 delta)) p.v. int coth(pi (x - y) / (2 delta)) g(y) dy,
// symmetrized about the singularity.
fn t_quadrature(g: impl Fn(f64) -> f64, x: f64, delta: f64) -> f64 {
    let (span, h) = (40.0, 1e-3);
    let m = (span / h) as usize;
    let gx = g(x);
    let mut sum = 0.0;
    for i in 0..m {
        let s = (i as f64 + 0.5) * h;
        let k = 1.0 / (PI * s / (2.0 * delta)).tanh();
        sum += k * ((g(x - s) - gx) - (g(x + s) - gx));
    }
    -sum * h / (2.0 * delta)
}

#[test]
fn linear_ilw_matches_principal_value_quadrature() {
    let delta = 1.0;
    let g = Grid::new(128, 40.0).unwrap();
    let f = Field::from_fn(&g, |x| (-x * x).exp());
    let spectral = linear_ilw(&f, Depth::new(delta).unwrap());
    let f1 = |x: f64| -2.0 * x * (-x * x).exp();
    let f2 = |x: f64| (4.0 * x * x - 2.0) * (-x * x).exp();
    let oracle: Vec<f64> = g.x().iter().map(|&x| -t_quadrature(f2, x, delta) - f1(x) / delta).collect();
    let err = max_diff(spectral.values(), &oracle) / oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(err < 1e-4, "{err}");
}

#[test]
fn t_dx_zero_mode() {
    let g = Grid::new(64, 10.0).unwrap();
    let c = Field::from_fn(&g, |_| 2.0);
    assert!(max_diff(t_dx(&c, 0.5).values(), &vec![-4.0; 64]) < 1e-13);
    assert!(linear_ilw(&c, Depth::new(0.5).unwrap()).max_abs() < 1e-14);
}

#[test]
fn flux_of_cosine_matches_closed_form() {
    let g = Grid::new(256, 2.0 * PI).unwrap();
    let f = Field::from_fn(&g, |x| x.cos());
    let nl = Nonlinearity::power(2, vec![]).unwrap();
    let d = nonlinear_flux(&f, &nl, Dealias::TwoThirds).unwrap();
    let exact: Vec<f64> = g.x().iter().map(|&x| -(2.0 * x).sin()).collect();
    assert!(max_diff(d.values(), &exact) < 1e-10);
    let zp = nonlinear_flux(&f, &nl, Dealias::ZeroPad).unwrap();
    assert!(max_diff(zp.values(), &exact) < 1e-10);
    assert!(nonlinear_flux(&Field::zeros(&g), &nl, Dealias::TwoThirds).unwrap().max_abs() == 0.0);
    assert!(nonlinear_flux(&Field::from_fn(&g, |_| 3.0), &nl, Dealias::TwoThirds).unwrap().max_abs() < 1e-12);
}

#[test]
fn two_thirds_rule_removes_high_modes() {
    let n = 256;
    let g = Grid::new(n, 2.0 * PI).unwrap();
    let f = Field::from_fn(&g, |x| (60.0 * x).cos());
    let d = nonlinear_flux(&f, &Nonlinearity::power(2, vec![]).unwrap(), Dealias::TwoThirds).unwrap();
    let cutoff = ((n - 1) / 3) as i64;
    let high: f64 = d.spectrum().iter().zip(g.k()).filter(|(_, k)| k.abs() > cutoff).map(|(c, _)| c.norm_sqr()).sum();
    assert!(high < 1e-20);
}

#[test]
fn zero_pad_is_alias_free_for_cubic() {
    let g = Grid::new(64, 2.0 * PI).unwrap();
    let f = Field::from_fn(&g, |x| (15.0 * x).cos() + 0.5 * (3.0 * x).sin());
    let nl = Nonlinearity::power(3, vec![]).unwrap();
    let d = nonlinear_flux(&f, &nl, Dealias::ZeroPad).unwrap();
    let fine = Grid::new(512, 2.0 * PI).unwrap();
    let ff = Field::from_fn(&fine, |x| (15.0 * x).cos() + 0.5 * (3.0 * x).sin());
    let exact = nonlinear_flux(&ff, &nl, Dealias::None).unwrap();
    for (j, &k) in g.k().iter().enumerate() {
        if k.abs() < 32 {
            let jf = if k >= 0 { k as usize } else { (512 + k) as usize };
            let scale = 64.0 / 512.0;
            assert!((d.spectrum()[j] - exact.spectrum()[jf] * scale).norm() < 1e-9, "mode {k}");
        }
    }
}

#[test]
fn flux_overflow_reports_degree() {
    let g = Grid::new(32, 1.0).unwrap();
    let f = Field::from_fn(&g, |x| if x == 0.0 { 1e200 } else { 0.0 });
    let nl = Nonlinearity::power(2, vec![0.0, 1.0]).unwrap();
    match nonlinear_flux(&f, &nl, Dealias::None) {
        Err(Error::NonlinearOverflow { degree }) => assert_eq!(degree, 4),
        other => panic!("{other:?}"),
    }
}

#[test]
fn nonlinearity_potentials() {
    let nl = Nonlinearity::power(2, vec![0.5]).unwrap();
    let s: f64 = 0.7;
    assert!((nl.flux(s) - (s * s + 0.5 * s.powi(3))).abs() < 1e-15);
    assert!((nl.antiderivative(s) - (s.powi(3) / 3.0 + 0.125 * s.powi(4))).abs() < 1e-15);
    // Phi = s F - G
    assert!((nl.moment_potential(s) - (s * nl.flux(s) - nl.antiderivative(s))).abs() < 1e-15);
    assert!(Nonlinearity::power(1, vec![]).is_err());
    assert_eq!(Nonlinearity::classic().flux(2.0), 2.0);
}

#[test]
fn mean_is_annihilated() {
    let g = Grid::new(128, 20.0).unwrap();
    let f = random_field(&g, 20, 5).map(|v| v + 1.0);
    let l = linear_ilw(&f, Depth::new(1.3).unwrap());
    let d = nonlinear_flux(&f, &Nonlinearity::classic(), Dealias::TwoThirds).unwrap();
    assert!(l.integral().abs() < 1e-12);
    assert!(d.integral().abs() < 1e-12);
}

#[test]
fn snapshot_io_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::new(64, 12.5).unwrap();
    let f = random_field(&g, 10, 6);
    let csv = dir.path().join("u.csv");
    write_csv(&f, &csv).unwrap();
    let back = read_csv(&csv).unwrap();
    assert_eq!(back.grid().n(), 64);
    assert!((back.grid().length() - 12.5).abs() < 1e-12);
    assert!(max_diff(back.values(), f.values()) < 1e-15);
    let bin = dir.path().join("u.bin");
    write_binary(&f, 3.25, &bin).unwrap();
    let (b, t) = read_binary(&bin).unwrap();
    assert_eq!(t, 3.25);
    assert_eq!(b.values(), f.values());
    assert_eq!(std::fs::metadata(&bin).unwrap().len(), 24 + 64 * 8);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn operations_keep_fields_real(seed in 0u64..1000, delta in 0.1f64..10.0) {
        let g = Grid::new(64, 9.0).unwrap();
        let f = random_field(&g, 20, seed);
        for out in [linear_ilw(&f, Depth::new(delta).unwrap()), t_dx(&f, delta), f.dx_n(3)] {
            let mut buf = out.spectrum().to_vec();
            rustfft::FftPlanner::new().plan_fft_inverse(64).process(&mut buf);
            let imag = buf.iter().map(|c| c.im.abs() / 64.0).fold(0.0, f64::max);
            prop_assert!(imag < 1e-12 * (1.0 + out.max_abs()));
        }
    }
}
