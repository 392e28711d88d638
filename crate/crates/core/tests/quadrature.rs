mod common;

use std::f64::consts::PI;

use anharm::frequency::{solve_omega_bar, x_of_omega};
use anharm::quadrature::*;
use anharm::OscillatorParams;
use common::{de_moment, de_v_moment, rel, tanh_sinh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gamma_half(k: u32) -> f64 {
    // Γ((k + 1) / 2) for even k
    let mut v = PI.sqrt();
    for j in 0..k / 2 {
        v *= j as f64 + 0.5;
    }
    v
}

#[test]
fn gaussian_moments_at_zero() {
    assert!(rel(moment(2, 0.0, 0).unwrap(), PI.sqrt()) < 1e-14);
    assert!(rel(moment(2, 0.0, 2).unwrap(), PI.sqrt() / 2.0) < 1e-14);
    for m in 2..=4 {
        for k in (0..=20).step_by(2) {
            assert!(rel(moment(m, 0.0, k).unwrap(), gamma_half(k)) < 1e-13, "m={m} k={k}");
        }
    }
}

#[test]
fn moments_match_double_exponential_rule() {
    assert!(rel(moment(2, 1.0, 0).unwrap(), de_moment(2, 1.0, 0)) < 1e-13);
    for m in 2..=4 {
        for x in [1e-3, 0.1, 1.0, 7.5, 100.0, 1e4, 1e7, 1e10] {
            for k in [0, 2, 4, 8, 16] {
                let a = moment(m, x, k).unwrap();
                let b = de_moment(m, x, k);
                assert!(rel(a, b) < 1e-12, "m={m} x={x} k={k}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn half_line_doubling_matches_full_line() {
    for m in 2..=4 {
        for x in [0.3, 3.0] {
            let full = tanh_sinh(|y| (-y * y - x * y.powi(2 * m as i32)).exp(), -12.0, 12.0);
            assert!(rel(moment(m, x, 0).unwrap(), full) < 1e-13, "m={m} x={x}");
        }
    }
}

#[test]
fn moments_reject_bad_arguments() {
    assert!(moment(2, -0.1, 0).is_err());
    assert!(moment(2, 1.0, 3).is_err());
}

#[test]
fn moments_decrease_in_x() {
    for m in 2..=4 {
        for k in [0, 2, 6] {
            let mut prev = f64::INFINITY;
            for i in 0..40 {
                let x = if i == 0 { 0.0 } else { 10f64.powf(-3.0 + 0.25 * i as f64) };
                let v = moment(m, x, k).unwrap();
                assert!(v > 0.0 && v < prev, "m={m} k={k} x={x}");
                prev = v;
            }
        }
    }
}

#[test]
fn b_is_at_least_one_and_nondecreasing() {
    for m in 2..=4 {
        assert_eq!(big_b(m, 0.0).unwrap(), 1.0);
        let mut prev = 1.0;
        for i in 0..=45 {
            let x = 10f64.powf(-3.0 + 0.2 * i as f64);
            let b = big_b(m, x).unwrap();
            assert!(b >= 1.0 && b >= prev, "m={m} x={x}");
            prev = b;
        }
    }
}

#[test]
fn b_two_schemes() {
    let b = big_b(3, 1.0).unwrap();
    let de = de_moment(3, 1.0, 0) / (2.0 * de_moment(3, 1.0, 2));
    assert!(rel(b, de) < 1e-11);
}

#[test]
fn b_large_x_power_law() {
    // B -> Γ(1/2m) / (2 Γ(3/2m)) x^(1/m); for m = 2 the exponent is 1/2
    let xs: Vec<f64> = (0..16).map(|i| 10f64.powf(3.0 + 0.2 * i as f64)).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| big_b(2, x).unwrap()).collect();
    let slope = anharm::validation::log_log_slope(&xs, &ys);
    assert!((slope - 0.5).abs() < 0.005, "slope {slope}");
    // Γ(1/4) / (2 Γ(3/4))
    let c = 3.625_609_908_221_908 / (2.0 * 1.225_416_702_465_178);
    assert!(rel(ys[15] / xs[15].sqrt(), c) < 0.01);
}

#[test]
fn b_first_derivative_at_zero() {
    let d = big_b_derivatives(2, 0.0, 3).unwrap();
    assert_eq!(d[0], 1.0);
    assert!((d[1] - 3.0).abs() < 1e-12);
    let h = 1e-5;
    let fd = (big_b(2, h).unwrap() - 1.0) / h;
    assert!((fd - 3.0).abs() < 1e-3);
}

#[test]
fn b_derivative_matches_central_difference() {
    for m in 2..=4 {
        let d = big_b_derivatives(m, 1.0, 1).unwrap();
        let h = 1e-5;
        let fd = (big_b(m, 1.0 + h).unwrap() - big_b(m, 1.0 - h).unwrap()) / (2.0 * h);
        assert!((d[1] - fd).abs() < 1e-7 * d[1].abs().max(1.0), "m={m}: {} vs {fd}", d[1]);
    }
}

#[test]
fn b_taylor_series_reproduces_shifted_values() {
    // every derivative enters; a wrong one shows up at its own order in h.
    // The expansion about x0 has radius x0 (essential singularity at 0).
    for m in 2..=4 {
        for x0 in [0.4, 2.0] {
            let d = big_b_derivatives(m, x0, 14).unwrap();
            for h in [0.02f64, 0.05] {
                let mut fact = 1.0;
                let mut taylor = 0.0;
                for (k, dk) in d.iter().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    taylor += dk * h.powi(k as i32) / fact;
                }
                let exact = de_moment(m, x0 + h, 0) / (2.0 * de_moment(m, x0 + h, 2));
                assert!(rel(taylor, exact) < 1e-11, "m={m} x0={x0} h={h}");
            }
        }
    }
}

#[test]
fn alpha_sequence_decays_for_small_x0() {
    for m in 2..=4 {
        for x0 in [0.1, 0.5, 1.0] {
            let d = big_b_derivatives(m, x0, 10).unwrap();
            let mut fact = 1.0;
            let alpha: Vec<f64> = (1..=10)
                .map(|n| {
                    fact *= n as f64;
                    (d[n] / d[0] * x0.powi(n as i32) / fact).abs()
                })
                .collect();
            assert!(alpha.iter().all(|a| a.is_finite()));
            assert!(alpha[9] < alpha[0], "m={m} x0={x0}: {alpha:?}");
        }
    }
}

#[test]
fn moment_table_stores_even_moments() {
    let t = MomentTable::compute(3, 0.5, 8).unwrap();
    assert!(t.get(3).is_none());
    assert!(rel(t.get(8).unwrap(), moment(3, 0.5, 8).unwrap()) < 1e-15);
}

#[test]
fn potential_integral_harmonic() {
    for omega in [0.5, 1.0, 3.0] {
        let p = OscillatorParams::new(omega, 0.0, 2).unwrap();
        for wb in [omega, 2.0 * omega] {
            let exact = (PI * wb).sqrt() / omega;
            assert!(rel(potential_integral_bar(&p, wb).unwrap(), exact) < 1e-13);
        }
    }
}

#[test]
fn potential_integral_moment_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let m = rng.gen_range(2..=4u32);
        let g = 10f64.powf(rng.gen_range(-2.0..3.0));
        let omega = rng.gen_range(0.5..2.0);
        let p = OscillatorParams::new(omega, g, m).unwrap();
        let wb = solve_omega_bar(&p).unwrap().omega_bar;
        let direct = potential_integral_bar(&p, wb).unwrap();
        let identity = wb.sqrt() / omega * moment(m, x_of_omega(&p, wb), 0).unwrap();
        assert!(rel(direct, identity) < 1e-11, "m={m} g={g}");
    }
}

#[test]
fn potential_moments_match_double_exponential_rule() {
    for (m, g) in [(2, 1.0), (3, 0.2), (4, 50.0)] {
        let p = OscillatorParams::new(1.0, g, m).unwrap();
        for tau in [0.3, 1.0, 2.5] {
            for n in [0, 1, 3, 8, 12] {
                let a = v_moment(&p, tau, n).unwrap();
                let b = de_v_moment(1.0, g, m, tau, n);
                assert!(rel(a, b) < 1e-12, "m={m} g={g} tau={tau} n={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn potential_moment_derivative_identity() {
    let p = OscillatorParams::new(1.0, 1.0, 2).unwrap();
    let tau = 1.2;
    let h = 1e-5;
    let fd = -(v_moment(&p, tau + h, 0).unwrap() - v_moment(&p, tau - h, 0).unwrap()) / (2.0 * h);
    assert!(rel(fd, v_moment(&p, tau, 1).unwrap()) < 1e-7);
}

#[test]
fn potential_moments_harmonic_closed_forms() {
    let omega = 1.7;
    let p = OscillatorParams::new(omega, 0.0, 3).unwrap();
    for tau in [0.2, 1.0, 4.0] {
        let i0 = (2.0 * PI / (tau * omega * omega)).sqrt();
        assert!(rel(v_moment(&p, tau, 0).unwrap(), i0) < 1e-13);
        assert!(rel(v_moment(&p, tau, 1).unwrap(), i0 / (2.0 * tau)) < 1e-13);
        assert!(rel(i_g_beta(&p, tau).unwrap(), i0) < 1e-13);
    }
}

#[test]
fn thermal_integral_consistency() {
    let p = OscillatorParams::new(1.0, 1.0, 2).unwrap();
    let wb = solve_omega_bar(&p).unwrap().omega_bar;
    let tau_bar = 2.0 / wb;
    assert!(rel(i_g_beta(&p, tau_bar).unwrap(), potential_integral_bar(&p, wb).unwrap()) < 1e-15);
    assert!(rel(i_g_beta(&p, 1.0).unwrap(), de_v_moment(1.0, 1.0, 2, 1.0, 0)) < 1e-11);
    assert!(i_g_beta(&p, 0.0).is_err());
}
