use std::f64::consts::PI;

use proptest::prelude::*;

use bragg::fourier::{fourier_bohr_averaged, fourier_bohr_closed_with, window_transform, ClosedOptions};
use bragg::measures::{pair_against_test_function, translation_bound_profile, Averaging, CombSource, ModelSetComb};
use bragg::transformability::{pairing_identity_check, positive_definite_check};
use bragg::{
    sap_transformable, AxisBox, Complex64, CutProjectScheme, DiracComb, Profile, SapOptions, TestFunction,
    WindowFunction,
};

fn sigma_min_2x2(b: &[f64; 4]) -> f64 {
    let [a, b, c, d] = *b;
    let p = a * a + b * b + c * c + d * d;
    let q = (a * d - b * c).abs();
    (((p - (p * p - 4.0 * q * q).max(0.0).sqrt()) / 2.0).max(0.0)).sqrt()
}

fn fib_comb(radius: f64, half: f64) -> DiracComb {
    ModelSetComb::new(CutProjectScheme::fibonacci(), WindowFunction::tent(1, radius).unwrap())
        .unwrap()
        .comb_at(half)
        .unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_exhaustive_scan(
        basis in prop::array::uniform4(-3.0..3.0f64),
        x0 in -30.0..30.0f64,
        len in 0.5..30.0f64,
        y0 in -3.0..3.0f64,
        height_frac in 0.01..1.0f64,
    ) {
        prop_assume!(sigma_min_2x2(&basis) > 0.05);
        let height = height_frac * (100.0 / len).min(6.0);
        let scheme = CutProjectScheme::new(1, 1, &basis).unwrap();
        let phys = AxisBox::new(vec![x0], vec![x0 + len]).unwrap();
        let internal = AxisBox::new(vec![y0], vec![y0 + height]).unwrap();
        let mut got: Vec<Vec<i64>> =
            scheme.enumerate(&phys, &internal, 1 << 30).unwrap().into_iter().map(|p| p.index).collect();
        got.sort();
        // ‖n‖ ≤ ‖B⁻¹‖·‖y‖ with ‖B⁻¹‖ = 1/σ_min
        let ymax = (x0.abs().max((x0 + len).abs()).powi(2) + y0.abs().max((y0 + height).abs()).powi(2)).sqrt();
        let k = (ymax / sigma_min_2x2(&basis)).ceil() as i64 + 1;
        let [a, b, c, d] = basis;
        let mut want = Vec::new();
        for n0 in -k..=k {
            for n1 in -k..=k {
                let x = a * n0 as f64 + b * n1 as f64;
                let y = c * n0 as f64 + d * n1 as f64;
                if x >= x0 && x < x0 + len && y >= y0 && y <= y0 + height {
                    want.push(vec![n0, n1]);
                }
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn dual_is_an_involution(basis in prop::array::uniform9(-3.0..3.0f64)) {
        let s = match CutProjectScheme::new(1, 2, &basis) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        prop_assume!(s.density() < 1e3);
        let back = s.dual().unwrap().dual().unwrap();
        for (x, y) in back.basis_row_major().iter().zip(s.basis_row_major()) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0) * s.density().max(1.0));
        }
    }

    #[test]
    fn windows_are_even(t in -2.0..2.0f64, r in 0.1..2.0f64, sigma in 0.05..1.0f64) {
        for p in [Profile::Tent, Profile::PolynomialBump, Profile::TruncatedGaussian { sigma }, Profile::Indicator] {
            let w = WindowFunction::new(p, 1, r).unwrap();
            prop_assert_eq!(w.evaluate(&[t]).unwrap(), w.evaluate(&[-t]).unwrap());
        }
    }

    #[test]
    fn pairing_and_variation_are_linear(c in complex(), center in -10.0..10.0f64, k in -3i32..4) {
        let comb = fib_comb(1.0, 20.0);
        let f = TestFunction::tent(1, 2.0).unwrap().centered_at(vec![center]).unwrap();
        let base = pair_against_test_function(&comb, &f).unwrap();
        let scaled = pair_against_test_function(&comb.scaled(c), &f).unwrap();
        prop_assert!((scaled - c * base).norm() <= 1e-12 * (1.0 + c.norm() * base.norm()));
        for (v, w) in comb.scaled(c).variation().weights().iter().zip(comb.variation().weights()) {
            prop_assert!((v.re - c.norm() * w.re).abs() <= 1e-15 * (1.0 + v.re));
        }
        // exact for scalars whose products do not round
        for e in [Complex64::new(2f64.powi(k), 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let s = pair_against_test_function(&comb.scaled(e), &f).unwrap();
            prop_assert_eq!(s, e * base);
        }
    }

    #[test]
    fn pairing_obeys_the_triangle_inequality(c in complex(), center in -10.0..10.0f64, r in 0.2..3.0f64) {
        let comb = fib_comb(0.7, 20.0).scaled(c);
        let f = TestFunction::new(Profile::PolynomialBump, 1, r).unwrap().centered_at(vec![center]).unwrap();
        let lhs = pair_against_test_function(&comb, &f).unwrap().norm();
        let rhs = pair_against_test_function(&comb.variation(), &f).unwrap().re;
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn riesz_bound_with_covering_factor(edge in 0.3..4.0f64, center in -30.0..30.0f64, c in complex()) {
        let comb = fib_comb(1.0, 50.0).scaled(c);
        let profile = translation_bound_profile(&comb, edge, &[40.0]).unwrap();
        let bound = profile.max_sums[0].1;
        let f = TestFunction::tent(1, edge / 2.0).unwrap().centered_at(vec![center]).unwrap();
        let pairing = pair_against_test_function(&comb, &f).unwrap().norm();
        prop_assert!(pairing <= 2.0 * bound * f.sup_norm() + 1e-12);
    }

    #[test]
    fn transform_at_zero_is_the_integral(r in 0.1..2.0f64, sigma in 0.05..1.0f64, scale in 0.1..5.0f64) {
        for p in [Profile::Tent, Profile::PolynomialBump, Profile::TruncatedGaussian { sigma }, Profile::TentAutocorrelation] {
            let w = WindowFunction::new(p, 1, r).unwrap().with_scale(Complex64::new(scale, 0.0));
            let v = window_transform(&w, &[0.0], 1e-10).unwrap();
            prop_assert!((v.re - w.l1_norm()).abs() <= 1e-9 * (1.0 + w.l1_norm()));
            prop_assert!(v.im.abs() <= 1e-10);
        }
    }

    #[test]
    fn closed_series_of_symmetric_window_is_conjugate_symmetric(r in 0.3..2.0f64, sigma in 0.1..1.0f64) {
        let scheme = CutProjectScheme::fibonacci();
        for p in [Profile::Tent, Profile::PolynomialBump, Profile::TruncatedGaussian { sigma }] {
            let w = WindowFunction::new(p, 1, r).unwrap();
            let s = fourier_bohr_closed_with(&scheme, &w, &AxisBox::centered(1, 1.5), &ClosedOptions::default()).unwrap();
            for a in s.entries() {
                let neg: Vec<f64> = a.frequency.iter().map(|x| -x).collect();
                if let Some(b) = s.coefficient(&neg) {
                    prop_assert_eq!(b, a.coefficient.conj());
                }
            }
        }
    }

    #[test]
    fn averaged_integers_vanish_off_lattice(f in 0.01..0.99f64, shift in -3i32..3) {
        let src = ModelSetComb::new(CutProjectScheme::integer_lattice(1), WindowFunction::point_mass()).unwrap();
        let chi = f + f64::from(shift);
        for scales in [[25.0, 50.0, 100.0], [250.0, 500.0, 1000.0]] {
            let e = fourier_bohr_averaged(&src, &[chi], &scales, Averaging::Box).unwrap();
            // |Σ e^{-2πiχn}| ≤ 1/|sin πχ| over 2s terms
            let bound = 1.0 / ((PI * f).sin() * 2.0 * scales[2]);
            prop_assert!(e.value.norm() <= bound * (1.0 + 1e-9));
            if (0.05..0.95).contains(&f) {
                prop_assert!(e.value.norm() <= 10.0 / scales[2]);
            }
        }
    }

    #[test]
    fn pairing_residual_does_not_grow_with_scale(r in 0.2..2.0f64, atoms in 4usize..40) {
        let mu = ModelSetComb::new(CutProjectScheme::integer_lattice(1), WindowFunction::point_mass()).unwrap();
        let xs: Vec<f64> = (-200..200).map(f64::from).collect();
        let mu_hat = DiracComb::unit_atoms_1d(&xs, AxisBox::centered(1, 200.0)).unwrap();
        let f = TestFunction::tent(1, r).unwrap();
        let scales = [250.0, 500.0, 1000.0, 2000.0];
        for grow in [false, true] {
            let residuals: Vec<f64> = scales
                .iter()
                .map(|&s| {
                    let n = if grow { atoms * (s / 250.0) as usize } else { atoms };
                    pairing_identity_check(&mu, &mu_hat, &f, s, n).unwrap().residual
                })
                .collect();
            let rises = residuals.windows(2).filter(|w| w[1] > w[0] * (1.0 + 1e-9) + 1e-15).count();
            prop_assert!(rises <= 1, "grow={} residuals {:?}", grow, residuals);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn positive_scaling_is_covariant(c in 0.01..100.0f64, r in 0.5..1.5f64) {
        let scheme = CutProjectScheme::fibonacci();
        let region = AxisBox::centered(1, 2.0);
        let base = WindowFunction::tent(1, r).unwrap();
        let scaled = base.clone().with_scale(Complex64::new(c, 0.0));
        let a = fourier_bohr_closed_with(&scheme, &base, &region, &ClosedOptions::default()).unwrap();
        let b = fourier_bohr_closed_with(&scheme, &scaled, &region, &ClosedOptions::default()).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.entries().iter().zip(b.entries()) {
            prop_assert_eq!(y.coefficient, x.coefficient * c);
        }
        let scales = [250.0, 500.0, 1000.0];
        let ra = sap_transformable(&scheme, &base, &region, &scales, &SapOptions::default()).unwrap();
        let rb = sap_transformable(&scheme, &scaled, &region, &scales, &SapOptions::default()).unwrap();
        for (x, y) in ra.checks.iter().zip(&rb.checks) {
            prop_assert_eq!(x.verdict.status, y.verdict.status, "{}", x.name);
        }
    }

    #[test]
    fn positivity_is_reflection_invariant(center in -0.4..0.4f64) {
        let scheme = CutProjectScheme::fibonacci();
        let region = AxisBox::centered(1, 2.0);
        let scales = [250.0, 500.0, 1000.0];
        let opts = SapOptions::default();
        for p in [Profile::Tent, Profile::TentAutocorrelation] {
            let w = WindowFunction::new(p, 1, 1.0).unwrap();
            let h = w.clone().with_center(vec![center]).unwrap();
            let reflected = w.with_center(vec![-center]).unwrap();
            let a = positive_definite_check(&scheme, &h, &region, &scales, &opts).unwrap();
            let b = positive_definite_check(&scheme, &reflected, &region, &scales, &opts).unwrap();
            prop_assert_eq!(a.status, b.status);
        }
    }
}

#[test]
fn integer_lattices_have_unit_window_sums() {
    for d in 1..=2 {
        let s = CutProjectScheme::integer_lattice(d);
        let comb = ModelSetComb::new(s, WindowFunction::new(Profile::Indicator, 0, 1.0).unwrap())
            .unwrap()
            .comb_at(12.0)
            .unwrap();
        let p = translation_bound_profile(&comb, 1.0, &[2.0, 4.0, 8.0]).unwrap();
        assert!(p.max_sums.iter().all(|(_, m)| *m == 1.0), "d={d}: {:?}", p.max_sums);
    }
}

#[test]
fn point_counts_approach_density_times_window() {
    let scheme = CutProjectScheme::fibonacci();
    for r in [0.4, 0.75, 1.3] {
        let w = WindowFunction::indicator(1, r).unwrap();
        let expected = scheme.density() * 2.0 * r;
        let deviations: Vec<f64> = (0..=6)
            .map(|n| {
                let l = 10.0 * f64::from(1 << n);
                let pts = bragg::enumerate_points(&scheme, &AxisBox::new(vec![0.0], vec![l]).unwrap(), &w).unwrap();
                (pts.len() as f64 / l - expected).abs()
            })
            .collect();
        let violations = deviations.windows(2).filter(|p| p[1] > p[0]).count();
        assert!(violations <= 1, "r={r}: {deviations:?}");
        assert!(deviations[6] < 0.02, "r={r}: {deviations:?}");
    }
}

#[test]
fn positive_definite_windows_stay_positive_in_two_internal_dimensions() {
    let basis = [1.0, 0.5, 0.3, 0.2, 1.0, -0.4, -0.7, 0.6, 1.0];
    let scheme = CutProjectScheme::new(1, 2, &basis).unwrap();
    let w = WindowFunction::new(Profile::TentAutocorrelation, 2, 1.0).unwrap();
    let s = fourier_bohr_closed_with(&scheme, &w, &AxisBox::centered(1, 1.0), &ClosedOptions::default()).unwrap();
    assert!(!s.is_empty());
    assert!(s.entries().iter().all(|a| a.coefficient.re >= -1e-12 && a.coefficient.im.abs() <= 1e-12));
}
