//! Scalar root finders used by the frequency solvers.

use crate::error::{Error, Result};

/// Brent's method on a bracket `[a, b]` with `f(a) f(b) <= 0`.
pub fn brent<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64, max_iter: usize) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "root not bracketed: f({a}) = {fa:e}, f({b}) = {fb:e}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let half = 0.5 * (c - b);
        if half.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = f(b);
    }
    Err(Error::NonConvergence {
        solver: "brent",
        iterations: max_iter,
        residual: fb.abs(),
    })
}

/// Fixed-point iteration `u <- phi(u)` with secant-estimated damping
/// (Wegstein acceleration). Returns `None` when it stalls so callers can fall
/// back to a bracketing method.
pub fn damped_fixed_point<F: Fn(f64) -> f64>(phi: F, start: f64, rel_tol: f64, max_iter: usize) -> Option<f64> {
    let mut u = start;
    let mut gu = phi(u);
    if !gu.is_finite() {
        return None;
    }
    let mut u_next = gu;
    for _ in 0..max_iter {
        let g_next = phi(u_next);
        if !g_next.is_finite() {
            return None;
        }
        if (g_next - u_next).abs() <= rel_tol * u_next.abs().max(1e-300) {
            return Some(g_next);
        }
        let slope = if u_next != u { (g_next - gu) / (u_next - u) } else { 0.0 };
        // Damping weight 1/(1 - slope), clipped to keep the step sane.
        let w = if slope < 1.0 { (1.0 / (1.0 - slope)).clamp(0.05, 20.0) } else { 0.5 };
        u = u_next;
        gu = g_next;
        u_next = u + w * (g_next - u);
    }
    None
}
