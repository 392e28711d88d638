//! Reference integrators for tests: double-exponential rules, independent of
//! the library's Gauss–Kronrod machinery.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `∫_0^∞ f(y) dy` by the exp-sinh rule after rescaling `y = scale * u`.
/// Step halving stops once two successive sums agree to `1e-15`.
pub fn exp_sinh(f: impl Fn(f64) -> f64, scale: f64) -> f64 {
    let t_max = 4.5;
    let node = |t: f64| {
        let u = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * u;
        let v = f(scale * u);
        if v.is_finite() {
            v * w
        } else {
            0.0
        }
    };
    let mut h = 0.5;
    let mut sum: f64 = {
        let n = (t_max / h) as i64;
        (-n..=n).map(|i| node(i as f64 * h)).sum()
    };
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        let n = (t_max / h) as i64;
        // only the new odd nodes
        sum += (-n..=n).filter(|i| i % 2 != 0).map(|i| node(i as f64 * h)).sum::<f64>();
        let cur = sum * h;
        if (cur - prev).abs() <= 1e-15 * cur.abs() {
            return scale * cur;
        }
        prev = cur;
    }
    scale * prev
}

/// `∫_a^b f(x) dx` by the tanh-sinh rule.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, d) = (0.5 * (a + b), 0.5 * (b - a));
    let t_max = 3.5;
    let node = |t: f64| {
        let s = FRAC_PI_2 * t.sinh();
        let x = s.tanh();
        let w = FRAC_PI_2 * t.cosh() / s.cosh().powi(2);
        let v = f(c + d * x);
        if v.is_finite() && w > 0.0 {
            v * w
        } else {
            0.0
        }
    };
    let mut h = 0.5;
    let mut sum: f64 = {
        let n = (t_max / h) as i64;
        (-n..=n).map(|i| node(i as f64 * h)).sum()
    };
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        let n = (t_max / h) as i64;
        sum += (-n..=n).filter(|i| i % 2 != 0).map(|i| node(i as f64 * h)).sum::<f64>();
        let cur = sum * h;
        if (cur - prev).abs() <= 1e-15 * cur.abs() {
            return d * cur;
        }
        prev = cur;
    }
    d * prev
}

/// `M_k(x)` by the exp-sinh rule.
pub fn de_moment(m: u32, x: f64, k: u32) -> f64 {
    let scale = (1.0 + x).powf(-1.0 / (2.0 * m as f64));
    2.0 * exp_sinh(|y| y.powi(k as i32) * (-y * y - x * y.powi(2 * m as i32)).exp(), scale)
}

/// `∫ V^n exp(-tau V) dx` by the exp-sinh rule.
pub fn de_v_moment(omega: f64, g: f64, m: u32, tau: f64, n: u32) -> f64 {
    let v = |x: f64| 0.5 * omega * omega * x * x + g * x.powi(2 * m as i32);
    // width of exp(-tau V)
    let w_h = (2.0 / (tau * omega * omega)).sqrt();
    let w_a = if g > 0.0 { (1.0 / (tau * g)).powf(1.0 / (2.0 * m as f64)) } else { f64::INFINITY };
    let scale = w_h.min(w_a);
    2.0 * exp_sinh(|x| v(x).powi(n as i32) * (-tau * v(x)).exp(), scale)
}
