//! Explicit closed-form expressions for individual expansion coefficients,
//! written directly from the combinatorial sums (compositions and integer
//! partitions) rather than through the series engine. They exist to check
//! the generic pipeline.

use crate::series::BetaPolynomial;

/// All ordered tuples of `k` positive integers summing to `n`.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in 1..=n.saturating_sub(k - 1) {
            prefix.push(first);
            rec(n - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 && n >= k {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Multiplicity vectors `(m_1, ..., m_n)` with `sum j m_j = n`.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, j: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j > n {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for mult in 0..=rem / j {
            cur.push(mult);
            rec(rem - mult * j, j + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, n, &mut Vec::new(), &mut out);
    out
}

/// `sum over compositions (l_1..l_k) of n` of `prod seq(l_i)`.
fn composition_sum(seq: impl Fn(usize) -> f64, n: usize, k: usize) -> f64 {
    compositions(n, k)
        .iter()
        .map(|c| c.iter().map(|&l| seq(l)).product::<f64>())
        .sum()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Hand-expanded `Q_1 ... Q_5` for `w = [omega_1, ..., omega_5]`.
pub fn q_closed_forms(w: &[f64; 5]) -> [BetaPolynomial; 5] {
    let [w1, w2, w3, w4, w5] = *w;
    [
        BetaPolynomial::from_coeffs(vec![w1]),
        BetaPolynomial::from_coeffs(vec![w2, -w1 * w1]),
        BetaPolynomial::from_coeffs(vec![w3, -3.0 * w1 * w2, 1.5 * w1.powi(3)]),
        BetaPolynomial::from_coeffs(vec![
            w4,
            -2.0 * (2.0 * w1 * w3 + w2 * w2),
            8.0 * w2 * w1 * w1,
            -8.0 / 3.0 * w1.powi(4),
        ]),
        BetaPolynomial::from_coeffs(vec![
            w5,
            -5.0 * (w2 * w3 + w1 * w4),
            12.5 * (w3 * w1 * w1 + w1 * w2 * w2),
            -125.0 / 6.0 * w1.powi(3) * w2,
            125.0 / 24.0 * w1.powi(5),
        ]),
    ]
}

/// `Q_n = omega_n + sum_{k<n} omega_k sum' prod_j (-k beta Q_j)^{m_j} / m_j!`
/// with the primed sum over `sum j m_j = n - k`.
pub fn q_faa_di_bruno(w: &[f64], n_max: usize) -> Vec<BetaPolynomial> {
    let mut q: Vec<BetaPolynomial> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = BetaPolynomial::constant(w[n - 1]);
        for k in 1..n {
            let mut inner = BetaPolynomial::zero();
            for mult in partitions(n - k) {
                let mut term = BetaPolynomial::constant(1.0);
                for (j, &mj) in mult.iter().enumerate() {
                    let base = q[j].shift_beta(1).scale(-(k as f64));
                    for _ in 0..mj {
                        term = &term * &base;
                    }
                    term = term.scale(1.0 / factorial(mj));
                }
                inner = &inner + &term;
            }
            acc = &acc + &inner.scale(w[k - 1]);
        }
        q.push(acc);
    }
    q
}

/// `ΔR_n1 = -sum_{k=1}^{n-1} k omega_{n-k}` (zero for `n = 1`).
pub fn delta_r_n1(w: &[f64], n: usize) -> f64 {
    -(1..n).map(|k| k as f64 * w[n - k - 1]).sum::<f64>()
}

/// `ΔA_n0 = 1/2 sum_k (-1)^(k-1)/k sum_{compositions} [prod(omega_l/omega_bar) - 2^k]`.
pub fn delta_a_n0(w: &[f64], omega_bar: f64, n: usize) -> f64 {
    0.5 * (1..=n)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let s: f64 = compositions(n, k)
                .iter()
                .map(|c| c.iter().map(|&l| w[l - 1] / omega_bar).product::<f64>() - 2f64.powi(k as i32))
                .sum();
            sign * s / k as f64
        })
        .sum::<f64>()
}

/// Which cross term to use in `X_k` of the `Δτ_c` chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossTerm {
    /// `(2 / omega_bar) sum Q_l ΔR_m`, from expanding `(omega_g/omega_bar)(1 + 2ΔR)`.
    FrequencyTimesOccupation,
    /// `(2 / omega_bar) sum Q_l Q_m`; disagrees with the direct series from n = 2.
    FrequencySquared,
}

/// Which sign convention to use in the logarithm of `I_g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogSign {
    /// `ln(1 + u) = sum (-1)^(k+1) u^k / k`
    Standard,
    /// `sum (-1)^k u^k / k`, the opposite sign; disagrees with the direct series.
    Flipped,
}

/// `ΔB_n0` through the `X_k -> Y_n -> Z_n -> ΔB_n` chain at `beta = 0`,
/// where `Q_k(0) = omega_k` and `ΔR_k(0) = 1`. `v_moments` holds `Ī_0 ... Ī_n`.
pub fn delta_b_n0(w: &[f64], omega_bar: f64, v_moments: &[f64], n: usize, cross: CrossTerm, log_sign: LogSign) -> f64 {
    let x = |k: usize| -> f64 {
        let pairs: f64 = (1..k)
            .map(|l| match cross {
                CrossTerm::FrequencyTimesOccupation => w[l - 1],
                CrossTerm::FrequencySquared => w[l - 1] * w[k - l - 1],
            })
            .sum();
        2.0 + w[k - 1] / omega_bar + 2.0 / omega_bar * pairs
    };
    let y = |j: usize| -> f64 {
        2.0 / omega_bar
            * (1..=j)
                .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * composition_sum(x, j, k))
                .sum::<f64>()
    };
    let z = |j: usize| -> f64 {
        (1..=j)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * v_moments[k] / factorial(k) * composition_sum(y, j, k)
            })
            .sum()
    };
    let i_bar = v_moments[0];
    (1..=n)
        .map(|k| {
            let sign = match (log_sign, k % 2) {
                (LogSign::Standard, 1) | (LogSign::Flipped, 0) => 1.0,
                _ => -1.0,
            };
            sign / (k as f64 * i_bar.powi(k as i32)) * composition_sum(z, n, k)
        })
        .sum()
}

/// `P_n1` through the explicit assembly
/// `P_n1 = S_n0 + ΔR_n1 + sum_{k+l=n} S_k0 ΔR_l0` with the explicit `S_n0`.
pub fn p_n1_assembly(w: &[f64], c: &[f64; 7], delta_t_n0: &[f64], n: usize) -> f64 {
    // delta_t_n0[j - 1] = ΔT_j0; ΔR_j0 = 1
    let dt = |j: usize| delta_t_n0[j - 1];
    let om = |j: usize| w[j - 1];
    let pairs = |n: usize, f: &dyn Fn(usize, usize) -> f64| -> f64 { (1..n).map(|k1| f(k1, n - k1)).sum() };
    let s_n0 = |n: usize| -> f64 {
        c[0] * om(n)
            + c[1] * dt(n)
            + c[2]
            + c[3] * pairs(n, &|a, b| om(a) * dt(b))
            + c[4] * pairs(n, &|a, _| om(a))
            + c[5] * pairs(n, &|a, _| dt(a))
            + c[6] * pairs(n, &|k1, _| pairs(k1, &|k3, k4| om(k3) * dt(k4)))
    };
    s_n0(n) + delta_r_n1(w, n) + (1..n).map(s_n0).sum::<f64>()
}
