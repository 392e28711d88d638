//! Reference spectrum from diagonalising the Hamiltonian in a truncated
//! harmonic-oscillator basis of frequency `Ω`.
//!
//! Position is tridiagonal in that basis, `x = (a + a†) / sqrt(2 Ω)`, so
//! `x^(2m)` has bandwidth `2m` and never couples states of opposite parity.
//! The even and odd blocks are diagonalised separately with cyclic Jacobi
//! rotations.

use serde::Serialize;

use crate::error::Result;
use crate::frequency::solve_omega_bar_frequency;
use crate::params::OscillatorParams;

pub const START_BASIS: usize = 64;
pub const MAX_BASIS: usize = 2048;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
        if i != j {
            self.data[j * self.n + i] += v;
        }
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Sub-matrix on the given index set.
    pub fn block(&self, idx: &[usize]) -> SymmetricMatrix {
        let mut b = SymmetricMatrix::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                b.data[a * idx.len() + c] = self.get(i, j);
            }
        }
        b
    }

    /// Eigenvalues in ascending order (cyclic Jacobi).
    pub fn eigenvalues(&self) -> Vec<f64> {
        jacobi_eigenvalues(self.clone())
    }
}

/// Cyclic Jacobi sweeps until every off-diagonal element is negligible
/// relative to the geometric mean of its diagonal pair.
pub fn jacobi_eigenvalues(mut a: SymmetricMatrix) -> Vec<f64> {
    let n = a.n;
    let d = &mut a.data;
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = d[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = d[p * n + p];
                let aqq = d[q * n + q];
                if apq.abs() <= f64::EPSILON * 0.5 * (app * aqq).abs().sqrt() {
                    d[p * n + q] = 0.0;
                    d[q * n + p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                d[p * n + p] = app - t * apq;
                d[q * n + q] = aqq + t * apq;
                d[p * n + q] = 0.0;
                d[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = d[k * n + p];
                    let akq = d[k * n + q];
                    let new_kp = akp - s * (akq + tau * akp);
                    let new_kq = akq + s * (akp - tau * akq);
                    d[k * n + p] = new_kp;
                    d[p * n + k] = new_kp;
                    d[k * n + q] = new_kq;
                    d[q * n + k] = new_kq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| d[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Matrix of `H` in the first `basis_size` oscillator states of frequency
/// `basis_frequency`.
pub fn hamiltonian_matrix(params: &OscillatorParams, basis_size: usize, basis_frequency: f64) -> SymmetricMatrix {
    let m = params.m as usize;
    assert!(
        basis_size > 2 * m,
        "basis size {basis_size} must exceed 2m = {}",
        2 * m
    );
    let n = basis_size;
    let big_omega = basis_frequency;
    let mut h = SymmetricMatrix::zeros(n);

    // Kinetic energy and harmonic term from the exact ladder algebra.
    let w2 = params.omega * params.omega;
    for i in 0..n {
        let fi = i as f64;
        h.add_sym(i, i, 0.25 * big_omega * (2.0 * fi + 1.0) + 0.5 * w2 * (2.0 * fi + 1.0) / (2.0 * big_omega));
        if i + 2 < n {
            let r = ((fi + 1.0) * (fi + 2.0)).sqrt();
            h.add_sym(i, i + 2, -0.25 * big_omega * r + 0.5 * w2 * r / (2.0 * big_omega));
        }
    }

    if params.g != 0.0 {
        // x^(2m) as the 2m-th power of the tridiagonal x on a padded basis,
        // stored as band diagonals: band[d][i] = (x^k)_{i, i+d}.
        let padded = n + 2 * m;
        let off: Vec<f64> = (0..padded)
            .map(|i| ((i as f64 + 1.0) / (2.0 * big_omega)).sqrt())
            .collect();
        // Full padded matrix is cheap at this bandwidth.
        let mut pow = vec![0.0; padded * padded];
        for i in 0..padded {
            pow[i * padded + i] = 1.0;
        }
        for _ in 0..2 * m {
            let mut next = vec![0.0; padded * padded];
            for i in 0..padded {
                let lo = i.saturating_sub(2 * m);
                let hi = (i + 2 * m + 1).min(padded);
                for j in lo..hi {
                    let v = pow[i * padded + j];
                    if v == 0.0 {
                        continue;
                    }
                    // (pow * x)_{i, j±1}
                    if j + 1 < padded {
                        next[i * padded + j + 1] += v * off[j];
                    }
                    if j > 0 {
                        next[i * padded + j - 1] += v * off[j - 1];
                    }
                }
            }
            pow = next;
        }
        for i in 0..n {
            for j in i..(i + 2 * m + 1).min(n) {
                let v = pow[i * padded + j];
                if v != 0.0 {
                    h.add_sym(i, j, params.g * v);
                }
            }
        }
    }
    // Parity: states of opposite parity never couple.
    debug_assert!((0..n).all(|i| (0..n).filter(|j| (i + j) % 2 == 1).all(|j| h.get(i, j) == 0.0)));
    h
}

/// Ascending eigenvalues of `H` in a basis of the given size, diagonalising
/// the two parity blocks separately.
pub fn basis_eigenvalues(params: &OscillatorParams, basis_size: usize, basis_frequency: f64) -> Vec<f64> {
    let h = hamiltonian_matrix(params, basis_size, basis_frequency);
    let even: Vec<usize> = (0..basis_size).step_by(2).collect();
    let odd: Vec<usize> = (1..basis_size).step_by(2).collect();
    let mut ev = jacobi_eigenvalues(h.block(&even));
    ev.extend(jacobi_eigenvalues(h.block(&odd)));
    ev.sort_by(f64::total_cmp);
    ev
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSpectrum {
    pub params: OscillatorParams,
    pub basis_size: usize,
    pub basis_frequency: f64,
    /// Lowest requested eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Number of lowest levels whose drift under the last basis growth is
    /// within tolerance.
    pub converged_count: usize,
    /// Largest relative drift among the requested levels.
    pub drift: f64,
    pub converged: bool,
}

/// Lowest `n_levels` eigenvalues, growing the basis until the relative
/// change between successive sizes is below `rel_tol`.
pub fn exact_levels(params: &OscillatorParams, n_levels: usize, rel_tol: f64) -> Result<OracleSpectrum> {
    let omega_bar = solve_omega_bar_frequency(params)?;
    Ok(exact_levels_with(params, n_levels, rel_tol, omega_bar, START_BASIS))
}

pub fn exact_levels_with(
    params: &OscillatorParams,
    n_levels: usize,
    rel_tol: f64,
    basis_frequency: f64,
    start_basis: usize,
) -> OracleSpectrum {
    assert!(n_levels >= 1, "at least one level required");
    let min_size = (2 * params.m as usize + 1).max(n_levels + 2);
    let mut size = start_basis.max(min_size);
    let mut prev = basis_eigenvalues(params, size, basis_frequency);
    loop {
        let next_size = ((size as f64 * 1.5).ceil() as usize).min(MAX_BASIS);
        let cur = basis_eigenvalues(params, next_size, basis_frequency);
        let drifts: Vec<f64> = (0..n_levels)
            .map(|i| (cur[i] - prev[i]).abs() / cur[i].abs().max(f64::MIN_POSITIVE))
            .collect();
        let drift = drifts.iter().cloned().fold(0.0, f64::max);
        let converged_count = drifts.iter().take_while(|&&d| d <= rel_tol).count();
        let done = converged_count == n_levels;
        if done || next_size == MAX_BASIS {
            return OracleSpectrum {
                params: *params,
                basis_size: next_size,
                basis_frequency,
                eigenvalues: cur[..n_levels].to_vec(),
                converged_count,
                drift,
                converged: done,
            };
        }
        size = next_size;
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_basis_is_diagonal() {
        let p = OscillatorParams::new(1.3, 0.0, 2).unwrap();
        let h = hamiltonian_matrix(&p, 10, 1.3);
        for i in 0..10 {
            assert!((h.get(i, i) - (i as f64 + 0.5) * 1.3).abs() < 1e-14);
            for j in 0..10 {
                if i != j {
                    assert!(h.get(i, j).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn ground_matrix_element_quartic() {
        let p = OscillatorParams::new(1.0, 0.7, 2).unwrap();
        let big = 1.6;
        let h = hamiltonian_matrix(&p, 12, big);
        let expect = big / 4.0 + 1.0 / (4.0 * big) + 3.0 * 0.7 / (4.0 * big * big);
        assert!((h.get(0, 0) - expect).abs() < 1e-14);
        assert!(h.asymmetry() < 1e-13);
    }

    #[test]
    fn bandwidth_is_2m() {
        let p = OscillatorParams::new(1.0, 1.0, 3).unwrap();
        let h = hamiltonian_matrix(&p, 20, 1.0);
        for i in 0..20usize {
            for j in 0..20 {
                if i.abs_diff(j) > 6 || (i + j) % 2 == 1 {
                    assert_eq!(h.get(i, j), 0.0);
                }
            }
        }
        assert!(h.get(0, 6) != 0.0);
    }

    #[test]
    fn jacobi_small_matrix() {
        let mut a = SymmetricMatrix::zeros(3);
        a.set_sym(0, 0, 2.0);
        a.set_sym(1, 1, 2.0);
        a.set_sym(2, 2, 2.0);
        a.set_sym(0, 1, -1.0);
        a.set_sym(1, 2, -1.0);
        let ev = a.eigenvalues();
        let s2 = 2f64.sqrt();
        for (e, x) in ev.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!((e - x).abs() < 1e-14);
        }
    }

    #[test]
    fn harmonic_levels_exact() {
        let p = OscillatorParams::new(0.8, 0.0, 2).unwrap();
        let o = exact_levels(&p, 9, 1e-12).unwrap();
        assert!(o.converged);
        for (n, e) in o.eigenvalues.iter().enumerate() {
            assert!((e - (n as f64 + 0.5) * 0.8).abs() < 1e-12);
        }
    }
}
