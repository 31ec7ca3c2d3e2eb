use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use relhur::dirac::{bispinor_u, dispersion_functional, AmplitudePair, MomentumPoint, Spin};
use relhur::hopfion::{
    density, gamma_h, gamma_h_curve, momentum_bispinor, norm_const, norm_ratio, HopfionState, REFERENCE_A,
};
use relhur::quadrature::QuadConfig;
use relhur::specfun::bessel_k;
use relhur::uncertainty::gamma_bound;
use relhur::RelativisticScale;

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn state(a: f64) -> HopfionState {
    HopfionState::new(a).unwrap()
}

#[test]
fn fast_density_equals_component_sum() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let s = state(rng.gen_range(0.05..20.0));
        let pt = MomentumPoint::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
        let sum = momentum_bispinor(&s, &pt).norm_sqr();
        let fast = density(&s, &pt);
        assert!((sum - fast).abs() <= 1e-12 * fast, "{sum} vs {fast}");
    }
}

#[test]
fn density_is_azimuthally_symmetric() {
    let s = state(0.7);
    let base = momentum_bispinor(&s, &MomentumPoint::new(1.2, 0.9, 0.0)).norm_sqr();
    for phi in [0.5, 1.9, -2.7] {
        let v = momentum_bispinor(&s, &MomentumPoint::new(1.2, 0.9, phi)).norm_sqr();
        assert!((v - base).abs() < 1e-15 * base);
    }
}

#[test]
fn state_lies_in_the_positive_energy_sector() {
    let s = state(1.0);
    for &(p, t, f) in &[(0.3, 0.4, 1.0), (2.0, 2.5, -1.0), (7.0, 1.0, 0.2)] {
        let pt = MomentumPoint::new(p, t, f);
        let psi = momentum_bispinor(&s, &pt);
        let up = bispinor_u(&pt, Spin::Up, 1.0);
        let dn = bispinor_u(&pt, Spin::Down, 1.0);
        let proj = up * up.inner(&psi) + dn * dn.inner(&psi);
        assert!((psi - proj).norm_sqr().sqrt() < 1e-14 * psi.norm_sqr().sqrt().max(1e-300));
    }
}

#[test]
fn norm_is_k2_over_a_times_four_pi() {
    let r1 = norm_ratio(&state(1.0), &cfg()).unwrap();
    let r2 = norm_ratio(&state(2.0), &cfg()).unwrap();
    assert!(((r1 - r2) / r1).abs() < 1e-8);
    assert!(((r1 - 4.0 * PI) / r1).abs() < 1e-8);
    for a in [0.1, 5.0, 20.0] {
        let r = norm_ratio(&state(a), &cfg()).unwrap();
        assert!(((r - 4.0 * PI) / r).abs() < 1e-8, "a={a}: {r}");
    }
}

#[test]
fn norm_decays_like_k2_asymptotics() {
    // K₂(x) ~ √(π/(2x)) e^{-x} (1 + 15/(8x)); at x = 40 the next term is ~1e-3
    let a = 20.0;
    let n = norm_const(&state(a), &cfg()).unwrap();
    let x = 2.0 * a;
    let asym = 4.0 * PI / a * (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 15.0 / (8.0 * x));
    assert!(((n - asym) / n).abs() < 2e-3);
    let exact = 4.0 * PI * bessel_k(2, x).unwrap().value / a;
    assert!(((n - exact) / n).abs() < 1e-8);
}

#[test]
fn frozen_norm_at_a1() {
    // frozen from quadrature; equals 4π K₂(2), K₂(2) = 0.253759754566056
    let n = norm_const(&state(1.0), &cfg()).unwrap();
    assert!((n - 3.188_839_122_885_88).abs() < 1e-8 * n, "{n:.16}");
}

#[test]
fn means_have_the_expected_structure() {
    for a in [0.2, 1.0, 10.0] {
        let rep = gamma_h(&state(a), &cfg()).unwrap();
        assert!(rep.mean_p[2] < 0.0, "a={a}");
        assert!(rep.mean_p[0].abs() < 1e-8 && rep.mean_p[1].abs() < 1e-8);
        assert!(rep.mean_r.iter().all(|v| v.abs() < 1e-8), "{:?}", rep.mean_r);
        assert!(rep.gamma > 1.5);
    }
}

#[test]
fn amplitude_route_reproduces_direct_route() {
    let s = state(1.0);
    let amp = |spin: Spin| {
        move |pt: &MomentumPoint| {
            // f(p, s) = u†(p, s) Ψ̃(p), scaled by e^{a}
            bispinor_u(pt, spin, 1.0).inner(&momentum_bispinor(&s, pt)) * 1f64.exp()
        }
    };
    let pair = AmplitudePair::new(amp(Spin::Up), amp(Spin::Down)).with_phi_points(16);
    let a = dispersion_functional(&pair, 1.0, &cfg().with_decay_scale(1.0)).unwrap();
    let b = gamma_h(&s, &cfg()).unwrap();
    assert!((a.gamma - b.gamma).abs() < 1e-6, "{} vs {}", a.gamma, b.gamma);
    assert!((a.mean_p[2] - b.mean_p[2]).abs() < 1e-8);
}

#[test]
fn frozen_gamma_at_a1_from_two_configurations() {
    let loose = gamma_h(&state(1.0), &cfg().with_tolerances(1e-8, 1e-7)).unwrap().gamma;
    let tight = gamma_h(&state(1.0), &cfg().with_tolerances(1e-12, 1e-11))
        .unwrap()
        .gamma;
    assert!((loose - tight).abs() < 1e-5);
    assert!((tight - FROZEN_A1).abs() < 1e-6, "{tight:.15}");
}

// frozen from the tight configuration; the amplitude route agrees to 1e-11
const FROZEN_A1: f64 = 1.964_911_186_995;

#[test]
fn curve_decreases_towards_the_nonrelativistic_limit() {
    let table = gamma_h_curve(&REFERENCE_A, &cfg()).unwrap();
    assert_eq!(table.rows.len(), REFERENCE_A.len());
    assert!(table.is_strictly_decreasing(), "{:?}", table.rows);
    assert!(table.gammas().all(|g| g > 1.5));
    let last = table.rows.last().unwrap().gamma;
    assert!(last - 1.5 < 0.03);

    let single = gamma_h_curve(&[1.0], &cfg()).unwrap();
    assert_eq!(single.rows[0].gamma, gamma_h(&state(1.0), &cfg()).unwrap().gamma);
}

#[test]
fn hopfion_respects_the_bound() {
    for a in REFERENCE_A {
        let rep = gamma_h(&state(a), &cfg()).unwrap();
        let d = rep.scale_parameter(1.0);
        let bound = gamma_bound(RelativisticScale::finite(d).unwrap(), 1e-7).unwrap();
        assert!(rep.gamma >= bound - 1e-3, "a={a}: {} < {bound}", rep.gamma);
    }
}
