//! One-dimensional integrals of the model.
//!
//! Two families appear: the moment-generating integrals
//! `M_k(x) = ∫ y^k exp(-y^2 - x y^(2m)) dy` behind the moment ratio
//! `B(x) = M_0 / (2 M_2)`, and potential integrals
//! `∫ V(x)^n exp(-tau V(x)) dx`. Both are even, unimodal on the half line once
//! written as `exp(h(y))`, so they share one integrator: locate the peak of
//! `h`, cut the half line at level sets of `h` below the peak, and run a
//! globally adaptive Gauss-Kronrod (7/15) rule on the panels with the
//! integrand normalised by its peak value.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::OscillatorParams;
use crate::series::CoefficientSeries;

/// Relative accuracy requested from every integral.
pub const REL_TOL: f64 = 1e-13;

const MAX_INTERVALS: usize = 4000;

// Drops of ln(integrand) below its maximum at which panels are cut. The last
// one sets the truncation point: exp(-70) is far below double precision.
const LEVELS: [f64; 7] = [0.5, 2.0, 6.0, 14.0, 28.0, 46.0, 70.0];

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let pair = f(c - h * x) + f(c + h * x);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Globally adaptive Gauss-Kronrod over consecutive breakpoints.
fn adaptive<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], rel_tol: f64, what: &str) -> Result<f64> {
    let mut panels: Vec<Panel> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gauss_kronrod(f, w[0], w[1]))
        .collect();
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let abs_total: f64 = panels.iter().map(|p| p.value.abs()).sum();
        if err <= rel_tol * total.abs() || err <= 64.0 * f64::EPSILON * abs_total {
            return Ok(total);
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                what: what.to_string(),
                tol: rel_tol,
                estimate: err / total.abs(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            // Interval exhausted at machine resolution; accept its estimate.
            panels.push(Panel { error: 0.0, ..p });
            continue;
        }
        panels.push(gauss_kronrod(f, p.a, mid));
        panels.push(gauss_kronrod(f, mid, p.b));
    }
}

/// Point in `(lo, hi)` where the decreasing function `h` crosses `level`.
fn crossing<H: Fn(f64) -> f64>(h: &H, mut lo: f64, mut hi: f64, level: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if h(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `ln ∫_0^∞ exp(h(y)) dy` for `h` increasing on `[0, peak]` and decreasing
/// beyond it.
fn ln_half_line<H: Fn(f64) -> f64>(h: &H, peak: f64, what: &str) -> Result<f64> {
    let h_peak = h(peak);
    if !h_peak.is_finite() {
        return Err(Error::Domain(format!("non-finite peak value in {what}")));
    }
    // Bracket the far tail.
    let mut step = peak.max(1e-6);
    let mut hi = peak + step;
    let mut guard = 0;
    while h(hi) > h_peak - LEVELS[LEVELS.len() - 1] {
        step *= 2.0;
        hi = peak + step;
        guard += 1;
        if guard > 2000 || !hi.is_finite() {
            return Err(Error::Domain(format!("integrand of {what} does not decay")));
        }
    }
    let mut breaks = vec![0.0];
    if peak > 0.0 {
        let h0 = h(0.0);
        for &d in LEVELS.iter().rev() {
            if h0 < h_peak - d {
                breaks.push(crossing(&|y| -h(y), 0.0, peak, -(h_peak - d)));
            }
        }
        breaks.push(peak);
    }
    let mut lo = peak;
    for &d in &LEVELS {
        let y = crossing(h, lo, hi, h_peak - d);
        breaks.push(y);
        lo = y;
    }
    let normalised = |y: f64| (h(y) - h_peak).exp();
    let value = adaptive(&normalised, &breaks, REL_TOL, what)?;
    Ok(h_peak + value.ln())
}

/// `ln M_k(x)` with `M_k(x) = ∫_{-∞}^{∞} y^k exp(-y^2 - x y^(2m)) dy`.
pub fn ln_moment(m: u32, x: f64, k: u32) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("moment argument must be >= 0, got {x}")));
    }
    if k % 2 != 0 {
        return Err(Error::Domain(format!("only even moments are defined, got k = {k}")));
    }
    if x == 0.0 {
        // Γ((k + 1) / 2)
        let ln_gamma = (0..k / 2).map(|j| (j as f64 + 0.5).ln()).sum::<f64>();
        return Ok(0.5 * std::f64::consts::PI.ln() + ln_gamma);
    }
    let two_m = 2 * m as i32;
    let kf = k as f64;
    let h = |y: f64| {
        let base = -y * y - x * y.powi(two_m);
        if k == 0 {
            base
        } else {
            kf * y.ln() + base
        }
    };
    let peak = if k == 0 {
        0.0
    } else {
        // h'(y) = 0  <=>  2y^2 + 2m x y^(2m) = k, monotone in y.
        let stationary = |y: f64| -(2.0 * y * y + two_m as f64 * x * y.powi(two_m) - kf);
        crossing(&stationary, 0.0, (kf / 2.0).sqrt(), 0.0)
    };
    let what = format!("moment M_{k}(x = {x:e}), m = {m}");
    Ok(std::f64::consts::LN_2 + ln_half_line(&h, peak, &what)?)
}

/// `M_k(x)`, the even moment of `exp(-y^2 - x y^(2m))`.
pub fn moment(m: u32, x: f64, k: u32) -> Result<f64> {
    ln_moment(m, x, k).map(f64::exp)
}

/// Even moments `M_0 ... M_max_k` at a fixed argument.
#[derive(Debug, Clone, Serialize)]
pub struct MomentTable {
    pub m: u32,
    pub x: f64,
    pub values: BTreeMap<u32, f64>,
}

impl MomentTable {
    pub fn compute(m: u32, x: f64, max_k: u32) -> Result<Self> {
        let values = (0..=max_k)
            .step_by(2)
            .map(|k| moment(m, x, k).map(|v| (k, v)))
            .collect::<Result<_>>()?;
        Ok(Self { m, x, values })
    }

    pub fn get(&self, k: u32) -> Option<f64> {
        self.values.get(&k).copied()
    }
}

/// `B(x) = M_0(x) / (2 M_2(x))`.
pub fn big_b(m: u32, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(0.5 * (ln_moment(m, x, 0)? - ln_moment(m, x, 2)?).exp())
}

/// `[B(x0), B'(x0), ..., B^(order)(x0)]`.
///
/// Uses `dM_k/dx = -M_(k+2m)`: the Taylor coefficients of `M_0` and `M_2`
/// about `x0` are exact moments, and the quotient is a power-series division.
pub fn big_b_derivatives(m: u32, x0: f64, order: usize) -> Result<Vec<f64>> {
    let order = order.max(1);
    let taylor = |k: u32| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(order + 1);
        let mut ln_fact = 0.0;
        for j in 0..=order {
            if j > 0 {
                ln_fact += (j as f64).ln();
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let ln_m = ln_moment(m, x0, k + 2 * m * j as u32)?;
            out.push(sign * (ln_m - ln_fact).exp());
        }
        Ok(out)
    };
    let num = CoefficientSeries::from_real(&taylor(0)?, order);
    let den = CoefficientSeries::from_real(&taylor(2)?, order);
    let quotient = (&num * &den.recip()).scale(0.5);
    let mut fact = 1.0;
    Ok(quotient
        .at_beta_zero()
        .into_iter()
        .enumerate()
        .map(|(j, b)| {
            if j > 0 {
                fact *= j as f64;
            }
            b * fact
        })
        .collect())
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time step must be positive, got {tau}")))
    }
}

/// `∫ V(x)^n exp(-tau V(x)) dx` over the full line.
pub fn v_moment(params: &OscillatorParams, tau: f64, n: u32) -> Result<f64> {
    check_tau(tau)?;
    let nf = n as f64;
    let h = |x: f64| {
        let v = params.potential(x);
        if n == 0 {
            -tau * v
        } else {
            nf * v.ln() - tau * v
        }
    };
    let peak = if n == 0 {
        0.0
    } else {
        let target = nf / tau;
        let upper = (2.0 * target).sqrt() / params.omega;
        crossing(&|x| target - params.potential(x), 0.0, upper, 0.0)
    };
    let what = format!("potential moment n = {n}, tau = {tau:e}");
    Ok(2.0 * ln_half_line(&h, peak, &what)?.exp())
}

/// `Ī_g = ∫ exp(-(2 / omega_bar) V(x)) dx`.
pub fn potential_integral_bar(params: &OscillatorParams, omega_bar: f64) -> Result<f64> {
    if !(omega_bar > 0.0) {
        return Err(Error::Domain(format!("omega_bar must be positive, got {omega_bar}")));
    }
    v_moment(params, 2.0 / omega_bar, 0)
}

/// `I_g(beta) = ∫ exp(-tau_c V(x)) dx`.
pub fn i_g_beta(params: &OscillatorParams, tau_c: f64) -> Result<f64> {
    v_moment(params, tau_c, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gaussian_moments() {
        assert!(rel(moment(2, 0.0, 0).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(moment(2, 0.0, 2).unwrap(), 0.5 * PI.sqrt()) < 1e-14);
        assert!(rel(moment(3, 0.0, 4).unwrap(), 0.75 * PI.sqrt()) < 1e-14);
        // Gamma(49.5)
        let g = moment(4, 0.0, 98).unwrap();
        assert!(rel(g, 8.667_601_843_135_272e61) < 1e-12, "{g:e}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(moment(2, -1.0, 0), Err(Error::Domain(_))));
        assert!(matches!(moment(2, 1.0, 3), Err(Error::Domain(_))));
        let p = OscillatorParams::new(1.0, 1.0, 2).unwrap();
        assert!(v_moment(&p, 0.0, 0).is_err());
    }

    #[test]
    fn b_at_zero_is_one() {
        for m in 2..=4 {
            assert!((big_b(m, 0.0).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn first_derivative_at_zero_quartic() {
        // B'(0) = -M_4/(2 M_2) + M_0 M_6 / (2 M_2^2) = -3/4 + 15/4 = 3
        let d = big_b_derivatives(2, 0.0, 3).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-14);
        assert!((d[1] - 3.0).abs() < 1e-12, "{}", d[1]);
    }

    #[test]
    fn moments_decrease_in_x() {
        for k in [0, 2, 6] {
            let mut prev = f64::INFINITY;
            for i in 0..30 {
                let x = if i == 0 { 0.0 } else { 10f64.powf(-3.0 + 0.3 * i as f64) };
                let v = moment(3, x, k).unwrap();
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn harmonic_potential_integrals() {
        let w = 1.7;
        let p = OscillatorParams::new(w, 0.0, 2).unwrap();
        let tau = 0.8;
        let i0 = i_g_beta(&p, tau).unwrap();
        assert!(rel(i0, (2.0 * PI / (tau * w * w)).sqrt()) < 1e-13);
        let i1 = v_moment(&p, tau, 1).unwrap();
        let expect = (1.0 / (2.0 * tau)) * (2.0 * PI / (tau * w * w)).sqrt();
        assert!(rel(i1, expect) < 1e-13);
        let ib = potential_integral_bar(&p, w).unwrap();
        assert!(rel(ib, (PI / w).sqrt()) < 1e-13);
    }

    #[test]
    fn moment_table() {
        let t = MomentTable::compute(2, 0.0, 4).unwrap();
        assert_eq!(t.values.len(), 3);
        assert!(rel(t.get(4).unwrap(), 0.75 * PI.sqrt()) < 1e-14);
        assert!(t.get(3).is_none());
    }
}
