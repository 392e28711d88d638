//! Finite-difference reference for the lowest eigenvalue: three-point
//! Laplacian on a uniform Dirichlet grid, eigenvalue located by Sturm-sequence
//! bisection, and two rounds of Richardson extrapolation in the step size.

use crate::params::OscillatorParams;

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let prev = if i == 0 { 0.0 } else { off * off / q };
        q = d - x - prev;
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + x.abs()).max(1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// `level`-th eigenvalue (0-based) of `H` on `[-half_width, half_width]` with
/// `intervals` grid intervals.
pub fn grid_eigenvalue(params: &OscillatorParams, half_width: f64, intervals: usize, level: usize) -> f64 {
    let h = 2.0 * half_width / intervals as f64;
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = (1..intervals)
        .map(|i| inv_h2 + params.potential(-half_width + i as f64 * h))
        .collect();
    let off = -0.5 * inv_h2;
    let mut lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * off.abs();
    let mut hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * off.abs();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if sturm_count(&diag, off, mid) > level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Richardson-refined eigenvalue from grids with `intervals`, `2 intervals`
/// and `4 intervals` points (error `O(h^6)`).
pub fn richardson_eigenvalue(params: &OscillatorParams, half_width: f64, intervals: usize, level: usize) -> f64 {
    let e1 = grid_eigenvalue(params, half_width, intervals, level);
    let e2 = grid_eigenvalue(params, half_width, 2 * intervals, level);
    let e4 = grid_eigenvalue(params, half_width, 4 * intervals, level);
    let r1 = (4.0 * e2 - e1) / 3.0;
    let r2 = (4.0 * e4 - e2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_ground_state() {
        let p = OscillatorParams::new(1.0, 0.0, 2).unwrap();
        let e = richardson_eigenvalue(&p, 10.0, 1000, 0);
        assert!((e - 0.5).abs() < 1e-9, "{e}");
        let e1 = richardson_eigenvalue(&p, 10.0, 1000, 1);
        assert!((e1 - 1.5).abs() < 1e-8, "{e1}");
    }
}
