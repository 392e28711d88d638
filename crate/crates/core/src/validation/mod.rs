//! Acceptance checks run by `anharm validate` and the acceptance test target.
//!
//! Each check is a plain function returning a [`CriterionReport`]; [`run`]
//! strings them together. Tolerances are fixed here and are not affected by
//! the configured oracle tolerance except where the oracle itself is the
//! reference.

pub mod grid;
pub mod reference;

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::frequency::{q_polynomials, solve_omega_bar, x_of_omega};
use crate::oracle::exact_levels;
use crate::params::OscillatorParams;
use crate::partition::{ground_state, model_partition};
use crate::quadrature::{moment, potential_integral_bar};
use crate::report::{figure_file_name, figure_table, parse_figure_csv, FigureData};
use crate::spectrum::{build_expansion, consistency_gap, extract_spectrum};
use crate::sweep::{level_table, log_grid, DEFAULT_ORACLE_TOL};

use reference::{delta_a_n0, delta_b_n0, delta_r_n1, p_n1_assembly, q_closed_forms, CrossTerm, LogSign};

/// Couplings on which per-level accuracy is checked.
pub const ACCURACY_COUPLINGS: [f64; 5] = [0.2, 1.0, 5.0, 50.0, 500.0];
/// Figure grid defaults: 40 log-spaced couplings over `[1e-2, 1e3]`.
pub const FIGURE_G_START: f64 = 1e-2;
pub const FIGURE_G_STOP: f64 = 1e3;
pub const FIGURE_G_COUNT: usize = 40;
pub const FIGURE_N_MAX: usize = 8;
pub const TRUNCATION: usize = 12;

/// Relative level error allowed for anharmonicity `m`.
pub fn accuracy_threshold(m: u32) -> f64 {
    match m {
        2 => 0.05,
        3 => 0.08,
        _ => 0.12,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationConfig {
    pub oracle_tol: f64,
    /// Harmonic limit, Q polynomials and series consistency only.
    pub quick: bool,
    /// Where the figure check writes its CSVs, if anywhere.
    pub figure_dir: Option<PathBuf>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            oracle_tol: DEFAULT_ORACLE_TOL,
            quick: false,
            figure_dir: None,
        }
    }
}

impl ValidationConfig {
    pub fn degraded_oracle(&self) -> bool {
        self.oracle_tol > DEFAULT_ORACLE_TOL
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_s: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_s,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub criteria: Vec<CriterionReport>,
    pub degraded_oracle: bool,
    pub oracle_tol: f64,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(f, "{c}")?;
        }
        if self.degraded_oracle {
            writeln!(
                f,
                "WARNING: degraded oracle (oracle_tol = {:e} > {:e}); oracle-based checks are not conclusive",
                self.oracle_tol, DEFAULT_ORACLE_TOL
            )?;
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} criteria passed", self.criteria.len())
    }
}

/// Run a check, time it, and turn an error into a failed report.
fn timed(id: u32, name: &'static str, limit_s: Option<f64>, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let outcome = body();
    let elapsed_s = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = limit_s {
        if elapsed_s > limit {
            passed = false;
            detail.push_str(&format!("; runtime {elapsed_s:.2}s over the {limit}s limit"));
        }
    }
    CriterionReport {
        id,
        name,
        passed,
        detail,
        elapsed_s,
    }
}

fn params(omega: f64, g: f64, m: u32) -> Result<OscillatorParams> {
    OscillatorParams::new(omega, g, m)
}

pub fn harmonic_limit() -> CriterionReport {
    timed(1, "harmonic limit", Some(1.0), || {
        let mut worst_e = 0.0f64;
        let mut worst_z = 0.0f64;
        for omega in [0.5, 1.0, 2.0] {
            let p = params(omega, 0.0, 2)?;
            let s = extract_spectrum(&p, 8, TRUNCATION)?;
            for (n, e) in s.levels.iter().enumerate() {
                worst_e = worst_e.max((e - (n as f64 + 0.5) * omega).abs());
            }
            for x in log_grid(0.1, 50.0, 60)? {
                let z = model_partition(&p, x / omega)?;
                let exact = 1.0 / (2.0 * (0.5 * x).sinh());
                worst_z = worst_z.max((z.z_value - exact).abs() / exact);
            }
        }
        Ok((
            worst_e <= 1e-10 && worst_z <= 1e-10,
            format!("max |E_n - (n+1/2)omega| = {worst_e:.1e}, max rel Z error = {worst_z:.1e}"),
        ))
    })
}

pub fn q_polynomial_identities() -> CriterionReport {
    timed(2, "Q polynomial identities", None, || {
        let mut worst = 0.0f64;
        for seed in [11u64, 29, 47] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let generic = q_polynomials(&w, 5);
            let listed = q_closed_forms(&w);
            for (a, b) in generic.iter().zip(&listed) {
                for k in 0..=a.degree().max(b.degree()) {
                    worst = worst.max((a.coeff(k) - b.coeff(k)).abs());
                }
            }
        }
        Ok((worst <= 1e-12, format!("max coefficient difference {worst:.1e}")))
    })
}

pub fn series_consistency() -> CriterionReport {
    timed(3, "series/direct Z consistency", Some(30.0), || {
        let cases: Vec<(u32, f64)> = [2u32, 3, 4]
            .iter()
            .flat_map(|&m| [0.1, 1.0, 10.0].map(move |g| (m, g)))
            .collect();
        let results: Vec<Result<Vec<(f64, f64)>>> = cases
            .par_iter()
            .map(|&(m, g)| {
                let p = params(1.0, g, m)?;
                let exp = build_expansion(&p, TRUNCATION)?;
                [3.0, 5.0, 8.0]
                    .iter()
                    .map(|t| {
                        let beta = t / exp.ground.omega_bar;
                        let y0 = (-t).exp();
                        let tol = 1e-6f64.max(10.0 * y0.powi(TRUNCATION as i32 + 1));
                        Ok((consistency_gap(&exp, beta)?, tol))
                    })
                    .collect()
            })
            .collect();
        let mut passed = true;
        let mut worst_ratio = 0.0f64;
        let mut worst_gap = 0.0f64;
        for r in results {
            for (gap, tol) in r? {
                passed &= gap <= tol;
                worst_ratio = worst_ratio.max(gap / tol);
                worst_gap = worst_gap.max(gap);
            }
        }
        Ok((
            passed,
            format!("max gap {worst_gap:.1e}, max gap/tolerance {worst_ratio:.1e}"),
        ))
    })
}

pub fn formula_equivalence() -> CriterionReport {
    timed(4, "closed-form coefficients", None, || {
        let n_max = 6;
        let mut worst = [0.0f64; 5];
        for m in [2u32, 3, 4] {
            for g in [0.5, 5.0] {
                let p = params(1.0, g, m)?;
                let exp = build_expansion(&p, TRUNCATION)?;
                let b = &exp.bundle;
                let w = &exp.frequency.omega_coeffs;
                let wb = exp.ground.omega_bar;
                let mut dt_ref = Vec::with_capacity(n_max);
                for n in 1..=n_max {
                    worst[0] = worst[0].max((b.d_r.term(n).coeff(0) - 1.0).abs());
                    worst[1] = worst[1].max((b.d_r.term(n).coeff(1) - delta_r_n1(w, n)).abs());
                    let da = delta_a_n0(w, wb, n);
                    worst[2] = worst[2].max((b.d_a.term(n).coeff(0) - da).abs());
                    let db = delta_b_n0(w, wb, &exp.v_moments, n, CrossTerm::FrequencyTimesOccupation, LogSign::Standard);
                    worst[3] = worst[3].max((b.d_b.term(n).coeff(0) - db).abs());
                    dt_ref.push(da + db);
                }
                for n in 1..=n_max {
                    let assembled = p_n1_assembly(w, &b.c, &dt_ref, n);
                    worst[4] = worst[4].max((exp.p_n1(n) - assembled).abs());
                }
            }
        }
        let max = worst.iter().cloned().fold(0.0, f64::max);
        Ok((
            max <= 1e-9,
            format!(
                "max |diff|: ΔR_n0 {:.1e}, ΔR_n1 {:.1e}, ΔA_n0 {:.1e}, ΔB_n0 {:.1e}, P_n1 {:.1e}",
                worst[0], worst[1], worst[2], worst[3], worst[4]
            ),
        ))
    })
}

pub fn oracle_convergence() -> CriterionReport {
    timed(5, "oracle self-convergence", Some(120.0), || {
        let cases: Vec<(u32, f64)> = [2u32, 3, 4]
            .iter()
            .flat_map(|&m| [0.1, 1.0, 10.0, 100.0].map(move |g| (m, g)))
            .collect();
        let spectra = cases
            .par_iter()
            .map(|&(m, g)| exact_levels(&params(1.0, g, m)?, 9, DEFAULT_ORACLE_TOL))
            .collect::<Result<Vec<_>>>()?;
        let worst_drift = spectra.iter().map(|s| s.drift).fold(0.0, f64::max);
        let largest_basis = spectra.iter().map(|s| s.basis_size).max().unwrap_or(0);
        let all_converged = spectra.iter().all(|s| s.converged);

        let p = params(1.0, 1.0, 2)?;
        let e0_oracle = exact_levels(&p, 1, 1e-12)?.eigenvalues[0];
        let e0_grid = grid::richardson_eigenvalue(&p, 7.0, 1400, 0);
        let fd_gap = (e0_oracle - e0_grid).abs();
        Ok((
            all_converged && worst_drift <= DEFAULT_ORACLE_TOL && fd_gap <= 1e-7,
            format!(
                "max drift {worst_drift:.1e} (largest basis {largest_basis}); E0(m=2,g=1) oracle {e0_oracle:.12} vs grid {e0_grid:.12}, gap {fd_gap:.1e}"
            ),
        ))
    })
}

/// `rel_err[m - 2][g_index][n]` on the accuracy grid.
fn accuracy_grid(couplings: &[f64], oracle_tol: f64) -> Result<Vec<Vec<Vec<f64>>>> {
    [2u32, 3, 4]
        .iter()
        .map(|&m| {
            level_table(m, 1.0, couplings, FIGURE_N_MAX, TRUNCATION, oracle_tol)
                .into_iter()
                .map(|r| r.map(|row| row.rel_err))
                .collect()
        })
        .collect()
}

/// Threshold and monotonicity checks on `rel_err[m - 2][g_index][n]`.
fn judge_accuracy(errors: &[Vec<Vec<f64>>], couplings: &[f64]) -> (bool, String) {
    let mut passed = true;
    let mut parts = Vec::new();
    for (i, per_m) in errors.iter().enumerate() {
        let m = i as u32 + 2;
        let mut worst = (0.0f64, 0.0, 0usize);
        for (gi, levels) in per_m.iter().enumerate() {
            for (n, e) in levels.iter().enumerate() {
                if e.abs() > worst.0 || e.is_nan() {
                    worst = (e.abs(), couplings[gi], n);
                }
            }
        }
        let ok = worst.0 <= accuracy_threshold(m);
        passed &= ok;
        parts.push(format!(
            "m={m} max {:.2}% at g={}, n={} (limit {}%){}",
            100.0 * worst.0,
            worst.1,
            worst.2,
            100.0 * accuracy_threshold(m),
            if ok { "" } else { " EXCEEDED" }
        ));
    }
    let mut violations = 0;
    for gi in 0..couplings.len() {
        for n in 0..errors[0][gi].len() {
            let e: Vec<f64> = errors.iter().map(|per_m| per_m[gi][n].abs()).collect();
            if !(e[0] <= e[1] && e[1] <= e[2]) {
                violations += 1;
            }
        }
    }
    passed &= violations == 0;
    parts.push(format!("non-monotone (g, n) points: {violations}"));
    (passed, parts.join("; "))
}

pub fn model_accuracy(cfg: &ValidationConfig) -> CriterionReport {
    timed(6, "level accuracy vs oracle", None, || {
        let errors = accuracy_grid(&ACCURACY_COUPLINGS, cfg.oracle_tol)?;
        Ok(judge_accuracy(&errors, &ACCURACY_COUPLINGS))
    })
}

pub fn ground_state_accuracy(cfg: &ValidationConfig) -> CriterionReport {
    timed(7, "ground-state accuracy", None, || {
        let couplings = log_grid(0.1, 1e3, 20)?;
        let errs = couplings
            .par_iter()
            .map(|&g| {
                let p = params(1.0, g, 2)?;
                let model = ground_state(&p)?.e0;
                let exact = exact_levels(&p, 1, cfg.oracle_tol)?.eigenvalues[0];
                Ok((model - exact) / exact)
            })
            .collect::<Result<Vec<f64>>>()?;
        let (gi, worst) = errs
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, e)| if e.abs() > acc.1 { (i, e.abs()) } else { acc });
        Ok((
            worst <= 0.05,
            format!("max |rel err| {:.2}% at g={:.3e}", 100.0 * worst, couplings[gi]),
        ))
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn strong_coupling_scaling(cfg: &ValidationConfig) -> CriterionReport {
    timed(8, "strong-coupling scaling", None, || {
        let couplings = log_grid(1e3, 1e6, 20)?;
        let mut passed = true;
        let mut parts = Vec::new();
        for m in [2u32, 3, 4] {
            let rows = couplings
                .par_iter()
                .map(|&g| {
                    let p = params(1.0, g, m)?;
                    let gs = ground_state(&p)?;
                    let exact = exact_levels(&p, 1, cfg.oracle_tol)?.eigenvalues[0];
                    Ok((gs.omega_bar, gs.e0, exact))
                })
                .collect::<Result<Vec<_>>>()?;
            let target = 1.0 / (m as f64 + 1.0);
            let dev = |ys: Vec<f64>| log_log_slope(&couplings, &ys) / target - 1.0;
            let d_w = dev(rows.iter().map(|r| r.0).collect());
            let d_e = dev(rows.iter().map(|r| r.1).collect());
            let d_x = dev(rows.iter().map(|r| r.2).collect());
            let ok = d_w.abs() <= 0.01 && d_e.abs() <= 0.01;
            passed &= ok;
            parts.push(format!(
                "m={m} slope deviation: omega_bar {:+.2}%, E0 {:+.2}%{} (oracle E0 {:+.2}%)",
                100.0 * d_w,
                100.0 * d_e,
                if ok { "" } else { " EXCEEDED" },
                100.0 * d_x
            ));
        }
        Ok((passed, parts.join("; ")))
    })
}

pub fn moment_identity() -> CriterionReport {
    timed(9, "moment identity", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let m = rng.gen_range(2..=4u32);
            let omega = 10f64.powf(rng.gen_range(-0.5..0.5));
            let g = 10f64.powf(rng.gen_range(-2.0..3.0));
            let p = params(omega, g, m)?;
            let wb = solve_omega_bar(&p)?.omega_bar;
            let direct = potential_integral_bar(&p, wb)?;
            let scaled = wb.sqrt() / omega * moment(m, x_of_omega(&p, wb), 0)?;
            worst = worst.max((direct - scaled).abs() / scaled);
        }
        Ok((worst <= 1e-11, format!("max relative difference {worst:.1e}")))
    })
}

/// CSV text of the figure for anharmonicity `m` on the default grid.
pub fn figure_csv(m: u32, omega: f64, couplings: &[f64], n_max: usize, truncation: usize, oracle_tol: f64) -> Result<(String, bool)> {
    let rows = level_table(m, omega, couplings, n_max, truncation, oracle_tol);
    let ok = rows.iter().all(|r| r.as_ref().is_ok_and(|r| r.oracle_converged));
    let pairs: Vec<(f64, &Result<_>)> = couplings.iter().cloned().zip(rows.iter()).collect();
    let table = figure_table(&pairs, m, omega, n_max, truncation, oracle_tol);
    Ok((table.to_csv()?, ok))
}

/// Pointwise accuracy and monotonicity over parsed figure data for `m = 2, 3, 4`.
pub fn check_figures(figures: &[FigureData; 3]) -> (bool, String) {
    let g = &figures[0].g;
    if figures.iter().any(|f| f.g != *g) {
        return (false, "figures use different coupling grids".into());
    }
    let errors: Vec<Vec<Vec<f64>>> = figures
        .iter()
        .map(|f| {
            f.model
                .iter()
                .zip(&f.oracle)
                .map(|(mo, or)| mo.iter().zip(or).map(|(a, b)| (a - b) / b).collect())
                .collect()
        })
        .collect();
    judge_accuracy(&errors, g)
}

pub fn figure_reproduction(cfg: &ValidationConfig) -> CriterionReport {
    timed(10, "figure reproduction", Some(600.0), || {
        let couplings = log_grid(FIGURE_G_START, FIGURE_G_STOP, FIGURE_G_COUNT)?;
        let mut parsed = Vec::new();
        for m in [2u32, 3, 4] {
            let (csv, _) = figure_csv(m, 1.0, &couplings, FIGURE_N_MAX, TRUNCATION, cfg.oracle_tol)?;
            if let Some(dir) = &cfg.figure_dir {
                std::fs::create_dir_all(dir)
                    .and_then(|_| std::fs::write(dir.join(figure_file_name(m)), &csv))
                    .map_err(|e| crate::Error::Domain(format!("writing figure: {e}")))?;
            }
            parsed.push(parse_figure_csv(&csv)?);
        }
        let figures: [FigureData; 3] = parsed.try_into().expect("three figures");
        Ok(check_figures(&figures))
    })
}

pub fn run(cfg: &ValidationConfig) -> ValidationReport {
    let mut criteria = vec![harmonic_limit(), q_polynomial_identities(), series_consistency()];
    if !cfg.quick {
        criteria.extend([
            formula_equivalence(),
            oracle_convergence(),
            model_accuracy(cfg),
            ground_state_accuracy(cfg),
            strong_coupling_scaling(cfg),
            moment_identity(),
            figure_reproduction(cfg),
        ]);
    }
    ValidationReport {
        criteria,
        degraded_oracle: cfg.degraded_oracle(),
        oracle_tol: cfg.oracle_tol,
    }
}
