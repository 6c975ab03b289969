use std::f64::consts::PI;

use proptest::prelude::*;

use vgl_core::fock::FockSpace;
use vgl_core::kernel::{commutator_kernel_finite, integral_i_cutoff, response_coefficient, IntegralMode};
use vgl_core::modes::{energy, momentum_of_index, spinor, EnergySign, LatticeSpec, ModeFunction};
use vgl_core::response::{
    delta_j_finite_l, delta_j_spectral, electric_field_of, GaugeFunction, GaugeProfile, KGrid, TimeEnvelope,
};

fn lattice() -> impl Strategy<Value = LatticeSpec> {
    (1.0f64..30.0, 1u32..40, 0.1f64..3.0, 0.2f64..2.0)
        .prop_map(|(l, r, m, q)| LatticeSpec::new(l, r, m, q).unwrap())
}

fn sign() -> impl Strategy<Value = EnergySign> {
    prop_oneof![Just(EnergySign::Positive), Just(EnergySign::Negative)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn momentum_is_odd_and_energy_even(r in -500i64..500, l in 0.1f64..100.0, m in 0.01f64..10.0) {
        prop_assert_eq!(momentum_of_index(-r, l), -momentum_of_index(r, l));
        let p = momentum_of_index(r, l);
        prop_assert_eq!(energy(p, m), energy(-p, m));
        prop_assert!(energy(p, m) >= m);
    }

    #[test]
    fn spinors_normalized_and_orthogonal(spec in lattice(), frac in 0.0f64..1.0) {
        let r = ((frac * (2 * spec.r_cut + 1) as f64) as i64 - spec.r_cut as i64).min(spec.r_cut as i64);
        let plus = spinor(EnergySign::Positive, r, &spec).unwrap();
        let minus = spinor(EnergySign::Negative, r, &spec).unwrap();
        prop_assert!((plus.norm_sqr() * spec.length - 1.0).abs() < 1e-13);
        prop_assert!((minus.norm_sqr() * spec.length - 1.0).abs() < 1e-13);
        prop_assert!(plus.inner(&minus).norm() * spec.length < 1e-13);
    }

    #[test]
    fn mode_density_and_current_are_flat(spec in lattice(), lambda in sign(), frac in 0.0f64..1.0, z in -50.0f64..50.0) {
        let r = ((frac * (2 * spec.r_cut + 1) as f64) as i64 - spec.r_cut as i64).min(spec.r_cut as i64);
        let phi = ModeFunction::new(lambda, r, &spec).unwrap().value(z);
        prop_assert!((phi.norm_sqr() * spec.length - 1.0).abs() < 1e-12);
        let p = spec.momentum(r);
        let expected = p / (spec.length * lambda.value() * energy(p, spec.mass));
        prop_assert!((phi.inner_sigma_x(&phi).re - expected).abs() < 1e-12 * expected.abs().max(1.0 / spec.length));
    }

    #[test]
    fn kernel_purely_imaginary_and_odd(spec in lattice(), w in -20.0f64..20.0) {
        let k = commutator_kernel_finite(w, &spec);
        let k_neg = commutator_kernel_finite(-w, &spec);
        let scale = k.norm().max(1e-300);
        prop_assert!(k.re.abs() <= 1e-12 * scale);
        prop_assert!((k + k_neg).norm() <= 1e-12 * scale.max(spec.charge * spec.charge / spec.length));
        prop_assert!(commutator_kernel_finite(0.0, &spec).norm() == 0.0);
    }

    #[test]
    fn kernel_is_box_periodic(spec in lattice(), w in -5.0f64..5.0) {
        let a = commutator_kernel_finite(w, &spec);
        let b = commutator_kernel_finite(w + spec.length, &spec);
        let scale = spec.charge * spec.charge * (2 * spec.r_cut + 1) as f64 / (spec.length * spec.length);
        prop_assert!((a - b).norm() <= 1e-10 * scale);
    }

    #[test]
    fn cutoff_error_law(k in -5.0f64..5.0, m in 0.1f64..3.0, factor in 10.0f64..200.0) {
        let p = factor * k.abs().max(0.1);
        let value = integral_i_cutoff(k, m, p, IntegralMode::ClosedForm).unwrap();
        prop_assert!((value + 2.0 * k).abs() <= 1.1 * m * m * k.abs() / (p * p - k * k) + 1e-14);
    }

    #[test]
    fn response_coefficient_is_odd_and_imaginary(k in 0.0f64..5.0, m in 0.1f64..3.0, q in 0.1f64..2.0) {
        let p = 20.0;
        let plus = response_coefficient(k, m, q, p, IntegralMode::ClosedForm).unwrap();
        let minus = response_coefficient(-k, m, q, p, IntegralMode::ClosedForm).unwrap();
        prop_assert_eq!(plus.re, 0.0);
        prop_assert!((plus + minus).norm() <= 1e-14 * plus.norm().max(1.0));
    }

    #[test]
    fn pure_gauge_has_no_field(a in -3.0f64..3.0, sigma in 0.05f64..2.0, z0 in -1.0f64..1.0,
                               k0 in -4.0f64..4.0, t0 in -10.0f64..-0.1, z in -5.0f64..5.0, frac in 0.0f64..1.0) {
        let env = TimeEnvelope::smoothstep(t0).unwrap();
        let t = t0 * frac;
        for profile in [GaugeProfile::gaussian(a, sigma, z0).unwrap(), GaugeProfile::sinusoid(a, k0).unwrap()] {
            let chi = GaugeFunction::new(profile, Some(env.clone())).unwrap();
            prop_assert_eq!(electric_field_of(&chi, z, t), 0.0);
        }
    }

    #[test]
    fn real_profiles_have_hermitian_spectra(a in -3.0f64..3.0, sigma in 0.05f64..2.0, z0 in -2.0f64..2.0, k in 0.0f64..10.0) {
        let g = GaugeProfile::gaussian(a, sigma, z0).unwrap();
        let s = g.fourier_coefficients(&[k, -k]).unwrap();
        prop_assert!((s.density[0] - s.density[1].conj()).norm() <= 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn responses_are_linear(alpha in -2.0f64..2.0, beta in -2.0f64..2.0, s1 in 0.1f64..0.4, c in -0.5f64..0.5) {
        let spec = LatticeSpec::new(16.0, 48, 1.0, 1.0).unwrap();
        let g1 = GaugeProfile::gaussian(1.0, s1, c).unwrap();
        let g2 = GaugeProfile::box_harmonic(1.0, 2, spec.length).unwrap();
        let combo = GaugeProfile::Sum { terms: vec![(alpha, g1.clone()), (beta, g2.clone())] };
        let chi = |g: GaugeProfile| GaugeFunction::stationary(g).unwrap();
        let z = [-3.0, -0.7, 0.0, 1.3, 4.0];
        let grid = KGrid::new(2.0 * PI / 40.0, 120).unwrap();

        let spectral = |g: GaugeProfile| delta_j_spectral(&chi(g), &spec, 50.0, &grid, &z, IntegralMode::ClosedForm).unwrap();
        let finite = |g: GaugeProfile| delta_j_finite_l(&chi(g), &spec, &z, 512).unwrap();
        for route in [&spectral as &dyn Fn(GaugeProfile) -> Vec<f64>, &finite] {
            let whole = route(combo.clone());
            let a = route(g1.clone());
            let b = route(g2.clone());
            for i in 0..z.len() {
                let parts = alpha * a[i] + beta * b[i];
                prop_assert!((whole[i] - parts).abs() <= 1e-12 * (1.0 + parts.abs()));
            }
        }
    }

    #[test]
    fn fock_vacuum_identities(z in -5.0f64..5.0, x in -5.0f64..5.0, l in 3.0f64..12.0, m in 0.3f64..2.0) {
        let spec = LatticeSpec::new(l, 1, m, 1.0).unwrap();
        let fs = FockSpace::new(&spec).unwrap();
        prop_assert!(fs.charge_commutator_vacuum(z, x).norm() <= 1e-12);
        let oracle = fs.vacuum_commutator(z, x);
        let analytic = commutator_kernel_finite(x - z, &spec);
        prop_assert!((oracle - analytic).norm() <= 1e-12);
        prop_assert!(fs.continuity_residual(z).relative() <= 1e-12);
        let rho = fs.density(z);
        prop_assert!(rho.vacuum_expectation().norm() <= 1e-14);
    }
}
