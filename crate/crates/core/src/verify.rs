//! Numerical identity suite: every reduced amplitude form and averaging
//! identity is checked against the direct spectral evaluation.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graphs::{make_complete, make_cycle, make_hypercube, Graph};
use crate::mixing::{average_distribution, average_distribution_integrated};
use crate::walk::{
    amplitude_even_cycle, amplitude_half_spectrum, coarse_grain, fold_pair, parity_sums, Walk,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cycles,
    Complete,
    Hypercubes,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Cycles => "cycles",
            Family::Complete => "complete",
            Family::Hypercubes => "hypercubes",
        })
    }
}

impl Family {
    fn member(self, size: usize) -> Result<Graph> {
        Ok(match self {
            Family::Cycles => make_cycle(size)?.into(),
            Family::Complete => make_complete(size)?.into(),
            Family::Hypercubes => make_hypercube(size)?.into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub family: Family,
    /// Inclusive size range: vertex count for cycles and complete graphs,
    /// dimension for hypercubes.
    pub min: usize,
    pub max: usize,
    /// Random times per graph, drawn uniformly from `[0, t_max]`.
    pub times: usize,
    pub t_max: f64,
    pub seed: u64,
    /// Residual bound for the exact identities.
    pub tol: f64,
    /// Bound for the time-integrated average against the collision formula.
    pub oracle_tol: f64,
    pub oracle_horizon: f64,
    pub oracle_step: f64,
    /// Largest graph order given the (slow) integration oracle.
    pub oracle_max_order: usize,
}

impl VerifyConfig {
    pub fn new(family: Family, min: usize, max: usize) -> Self {
        Self {
            family,
            min,
            max,
            times: 20,
            t_max: 100.0,
            seed: 0x5eed_0fc7_c1e5,
            tol: 1e-10,
            oracle_tol: 1e-2,
            oracle_horizon: 2e3,
            oracle_step: 0.05,
            oracle_max_order: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub family: Family,
    pub min: usize,
    pub max: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    max_residual: f64,
}

impl Tally {
    fn record(&mut self, residual: f64) {
        self.cases += 1;
        // NaN must fail the check rather than vanish in a max.
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = residual;
        }
    }

    fn finish(self, name: &'static str, tolerance: f64) -> Option<CheckResult> {
        (self.cases > 0).then_some(CheckResult {
            name,
            cases: self.cases,
            max_residual: self.max_residual,
            tolerance,
            passed: self.max_residual <= tolerance,
        })
    }
}

struct CycleWalks(HashMap<usize, Walk>);

impl CycleWalks {
    fn amps(&mut self, n: usize, t: f64) -> Result<Vec<Complex64>> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.0.entry(n) {
            e.insert(Walk::new(&make_cycle(n)?.into()));
        }
        Ok(self.0[&n].amplitudes(t)?.amps)
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let floor = if cfg.family == Family::Hypercubes { 1 } else { 2 };
    if cfg.min < floor || cfg.min > cfg.max {
        return invalid(format!(
            "size range [{}, {}] is empty or below {floor}",
            cfg.min, cfg.max
        ));
    }
    if !cfg.t_max.is_finite() || cfg.t_max < 0.0 {
        return invalid(format!("t_max must be finite and nonnegative, got {}", cfg.t_max));
    }
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut cycles = CycleWalks(HashMap::new());

    let mut fact = Tally::default();
    let mut decomposition = Tally::default();
    let mut cos_sin = Tally::default();
    let mut quarter = Tally::default();
    let mut real_imag = Tally::default();
    let mut two_one = Tally::default();
    let mut unitarity = Tally::default();
    let mut fft_direct = Tally::default();
    let mut oracle = Tally::default();
    let mut symmetry = Tally::default();

    for size in cfg.min..=cfg.max {
        let graph = cfg.family.member(size)?;
        let walk = Walk::new(&graph);
        let group = walk.spectrum().group().clone();
        let n = group.order();
        let times: Vec<f64> = (0..cfg.times).map(|_| rng.gen_range(0.0..=cfg.t_max)).collect();

        for &t in &times {
            let amps = walk.amplitudes(t)?;
            unitarity.record((amps.norm_sqr() - 1.0).abs());
            if n <= 512 {
                fft_direct.record(max_diff(&amps.amps, &walk.amplitudes_direct(t)?.amps));
            }
            if cfg.family != Family::Cycles {
                continue;
            }
            let amps = amps.amps;
            for m in (2..=n).filter(|m| n.is_multiple_of(*m)) {
                let coarse = coarse_grain(n, m, t)?;
                decomposition.record(max_diff(&coarse, &cycles.amps(m, t)?));
            }
            if !n.is_multiple_of(2) {
                continue;
            }
            for (j, &z) in amps.iter().enumerate() {
                fact.record((amplitude_half_spectrum(n, j, t)? - z).norm());
                quarter.record((amplitude_even_cycle(n, j, t)? - z).norm());
                real_imag.record(if j % 2 == 0 { z.im.abs() } else { z.re.abs() });
                two_one.record((fold_pair(n, j, t)? - z).norm());
            }
            let (even, odd) = parity_sums(n, t)?;
            let expect_even = Complex64::new((2.0 * t).cos(), 0.0);
            let expect_odd = Complex64::new(0.0, -(2.0 * t).sin());
            cos_sin.record((even - expect_even).norm().max((odd - expect_odd).norm()));
        }

        let avg = average_distribution(&graph)?;
        let neg = group.negation_table();
        symmetry.record(
            (0..n)
                .map(|l| (avg.probs[l] - avg.probs[neg[l]]).abs())
                .fold(0.0, f64::max),
        );
        if n <= cfg.oracle_max_order {
            let steps = (cfg.oracle_horizon / cfg.oracle_step).round() as usize;
            let integrated = average_distribution_integrated(&graph, cfg.oracle_horizon, steps)?;
            oracle.record(
                avg.probs
                    .iter()
                    .zip(integrated.probs())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max),
            );
        }
    }

    let checks = [
        fact.finish("fact_half_spectrum", cfg.tol),
        decomposition.finish("decomposition", cfg.tol),
        cos_sin.finish("parity_cos_sin", cfg.tol),
        quarter.finish("quarter_form", cfg.tol),
        real_imag.finish("real_imag_parity", cfg.tol),
        two_one.finish("two_one_fold", cfg.tol),
        unitarity.finish("unitarity", cfg.tol),
        fft_direct.finish("fft_vs_direct", cfg.tol),
        symmetry.finish("average_symmetry", 1e-12),
        oracle.finish("average_oracle", cfg.oracle_tol),
    ]
    .into_iter()
    .flatten()
    .collect();
    Ok(VerifyReport {
        family: cfg.family,
        min: cfg.min,
        max: cfg.max,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cycle_suite_passes() {
        let mut cfg = VerifyConfig::new(Family::Cycles, 2, 12);
        cfg.times = 4;
        cfg.oracle_max_order = 4;
        let report = run(&cfg).unwrap();
        assert!(report.passed(), "{report:#?}");
        let names: Vec<_> = report.checks.iter().map(|c| c.name).collect();
        assert!(names.contains(&"quarter_form") && names.contains(&"average_oracle"));
    }

    #[test]
    fn rejects_empty_ranges() {
        assert!(run(&VerifyConfig::new(Family::Cycles, 5, 4)).is_err());
        assert!(run(&VerifyConfig::new(Family::Cycles, 1, 4)).is_err());
        assert!(run(&VerifyConfig::new(Family::Hypercubes, 0, 2)).is_err());
    }
}
