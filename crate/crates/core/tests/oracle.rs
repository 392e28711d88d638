mod common;

use anharm::oracle::*;
use anharm::validation::grid::richardson_eigenvalue;
use anharm::OscillatorParams;
use common::{rel, tanh_sinh};

fn params(g: f64, m: u32) -> OscillatorParams {
    OscillatorParams::new(1.0, g, m).unwrap()
}

/// Normalised oscillator eigenfunctions of frequency `w` at `x`, `0..n`.
fn hermite_functions(w: f64, x: f64, n: usize) -> Vec<f64> {
    let s = w.sqrt() * x;
    let mut psi = vec![0.0; n];
    psi[0] = (w / std::f64::consts::PI).powf(0.25) * (-0.5 * s * s).exp();
    if n > 1 {
        psi[1] = 2f64.sqrt() * s * psi[0];
    }
    for k in 2..n {
        let kf = k as f64;
        psi[k] = (2.0 / kf).sqrt() * s * psi[k - 1] - ((kf - 1.0) / kf).sqrt() * psi[k - 2];
    }
    psi
}

#[test]
fn harmonic_spectrum_in_mismatched_basis() {
    // Ω ≠ ω: the matrix is no longer diagonal but the levels are still n + 1/2
    let p = OscillatorParams::new(1.0, 0.0, 2).unwrap();
    let ev = basis_eigenvalues(&p, 120, 1.4);
    for n in 0..10 {
        assert!((ev[n] - (n as f64 + 0.5)).abs() < 1e-10, "n={n}: {}", ev[n]);
    }
}

#[test]
fn matrix_elements_match_quadrature() {
    for m in 2..=4u32 {
        let p = OscillatorParams::new(0.8, 0.3, m).unwrap();
        let big = 1.3;
        let n = 14;
        let h = hamiltonian_matrix(&p, n, big);
        // <i|H|j> = <i|(-1/2 d^2 + Ω^2 x^2 / 2)|j> + <i|(ω^2 - Ω^2) x^2 / 2 + g x^2m|j>
        for i in 0..6 {
            for j in i..6 {
                let extra = tanh_sinh(
                    |x| {
                        let psi = hermite_functions(big, x, n);
                        let v = 0.5 * (p.omega * p.omega - big * big) * x * x + p.g * x.powi(2 * m as i32);
                        psi[i] * v * psi[j]
                    },
                    -12.0,
                    12.0,
                );
                let diag = if i == j { big * (i as f64 + 0.5) } else { 0.0 };
                let expect = diag + extra;
                assert!((h.get(i, j) - expect).abs() < 1e-11, "m={m} ({i},{j}): {} vs {expect}", h.get(i, j));
            }
        }
    }
}

#[test]
fn band_and_parity_structure() {
    for m in 2..=4u32 {
        let h = hamiltonian_matrix(&params(2.0, m), 40, 1.7);
        assert_eq!(h.asymmetry(), 0.0);
        for i in 0..40usize {
            for j in 0..40 {
                let d = i.abs_diff(j);
                if d > 2 * m as usize || d % 2 == 1 {
                    assert_eq!(h.get(i, j), 0.0, "m={m} ({i},{j})");
                }
            }
        }
        assert_ne!(h.get(0, 2 * m as usize), 0.0);
    }
}

#[test]
fn jacobi_on_known_matrix() {
    // tridiagonal (2, -1): eigenvalues 2 - 2 cos(k π / (n + 1))
    let n = 12;
    let mut a = SymmetricMatrix::zeros(n);
    for i in 0..n {
        a.set_sym(i, i, 2.0);
        if i + 1 < n {
            a.set_sym(i, i + 1, -1.0);
        }
    }
    let ev = jacobi_eigenvalues(a);
    for (k, e) in ev.iter().enumerate() {
        let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
        assert!((e - exact).abs() < 1e-13);
    }
}

#[test]
fn variational_monotonicity() {
    for m in 2..=4 {
        let p = params(5.0, m);
        let mut prev = vec![f64::INFINITY; 5];
        for size in [20, 30, 45, 68, 100] {
            let ev = basis_eigenvalues(&p, size, 1.0);
            for k in 0..5 {
                assert!(ev[k] <= prev[k] * (1.0 + 1e-14), "m={m} size={size} k={k}");
            }
            prev = ev[..5].to_vec();
        }
    }
}

#[test]
fn converged_levels_independent_of_basis_frequency() {
    // an Ω = ω basis is poorly matched at strong coupling (m = 4, g = 10
    // does not reach 1e-10 by the cap), so stay at moderate g
    for m in 2..=4 {
        for g in [0.1, 1.0] {
            let p = params(g, m);
            let a = exact_levels(&p, 9, 1e-10).unwrap();
            let b = exact_levels_with(&p, 9, 1e-10, 1.0, START_BASIS);
            assert!(a.converged && b.converged);
            for k in 0..9 {
                assert!(rel(a.eigenvalues[k], b.eigenvalues[k]) < 1e-9, "m={m} g={g} k={k}");
            }
        }
    }
}

#[test]
fn agrees_with_finite_difference() {
    for (m, g) in [(2, 1.0), (3, 0.5), (4, 2.0)] {
        let p = params(g, m);
        let o = exact_levels(&p, 4, 1e-11).unwrap();
        for level in [0, 3] {
            let fd = richardson_eigenvalue(&p, 7.0, 1400, level);
            assert!(rel(o.eigenvalues[level], fd) < 1e-7, "m={m} g={g} level={level}: {} vs {fd}", o.eigenvalues[level]);
        }
    }
}

#[test]
fn known_quartic_ground_state() {
    // ω = 1, g = 1, m = 2
    let o = exact_levels(&params(1.0, 2), 1, 1e-12).unwrap();
    assert!((o.eigenvalues[0] - 0.803_770_651_234_9).abs() < 1e-11, "{}", o.eigenvalues[0]);
}

#[test]
fn strong_coupling_scaling() {
    let p0 = OscillatorParams::new(1e-3, 1e2, 2).unwrap();
    let base: Vec<f64> = exact_levels(&p0, 4, 1e-9)
        .unwrap()
        .eigenvalues
        .iter()
        .map(|e| e / 1e2f64.powf(1.0 / 3.0))
        .collect();
    for g in [1e3, 1e4] {
        let p = OscillatorParams::new(1e-3, g, 2).unwrap();
        let o = exact_levels(&p, 4, 1e-9).unwrap();
        for k in 0..4 {
            assert!(rel(o.eigenvalues[k] / g.powf(1.0 / 3.0), base[k]) < 0.01, "g={g} k={k}");
        }
    }
}
