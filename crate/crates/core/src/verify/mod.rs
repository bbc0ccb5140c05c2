//! One checker per inequality, identity, or asymptotic claim, each producing
//! a [`CheckReport`]; scaling claims run as sweeps producing a
//! [`SweepResult`] alongside the report.
//!
//! Conventions:
//!
//! * an inequality check passes iff `lhs <= rhs + rel_slack * scale` with
//!   `scale = max(|lhs|, |rhs|)` and the slack documented per check (0 for
//!   closed forms, `1e-9` for exact inequalities evaluated by quadrature,
//!   looser where fractional exponents limit the attainable quadrature
//!   accuracy);
//! * `margin` is `rhs - lhs` for same-scale comparisons and a ratio for
//!   sweep checks, noted in the metadata;
//! * asymptotic exponents are fitted by least squares on `(ln n, ln y)`
//!   over the tail half of the sweep (at least three points), so early
//!   transients do not bias the estimate; `exponent_ci` is twice the
//!   standard error of the fitted slope;
//! * growth claims with unspecified constants are verified as boundedness
//!   of the normalised ratio across the sweep, and the empirical constant
//!   is reported, never asserted against a guessed value;
//! * random instances are drawn from seeds fixed in the manifest, so runs
//!   are reproducible record-for-record.

mod checks;
mod manifest;
mod sweeps;

pub use checks::{
    blaschke_to_rational, check_degree_invariant, check_dynkin, check_hardy, check_i_chain,
    check_kernel4, check_operator_norm_bounds, check_peller_equality, check_peller_general,
    check_theorem3, check_uss, random_model_element, BmoaBound, StepFunction,
};
pub use manifest::{default_suite, run_check, run_manifest, CheckParams, ManifestEntry};
pub use sweeps::{
    check_afp_scaling, check_critical_alpha, check_dolzhenko, check_peller_small_p,
    dolzhenko_closed_form, SweepFamily,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::{Error, Result};

/// Outcome of one named inequality check on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub instance: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`, or a ratio where the metadata says so.
    pub margin: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl CheckReport {
    /// Report for the claim `lhs <= rhs`, with relative slack against the
    /// larger magnitude.
    pub fn inequality(name: &str, instance: String, lhs: f64, rhs: f64, rel_slack: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        CheckReport {
            name: name.to_string(),
            instance,
            lhs,
            rhs,
            margin: rhs - lhs,
            pass: lhs <= rhs + rel_slack * scale,
            metadata: BTreeMap::new(),
        }
    }

    /// Report for the claim `|lhs - rhs| <= rel_tol * max(|lhs|, |rhs|, floor)`.
    pub fn agreement(
        name: &str,
        instance: String,
        lhs: f64,
        rhs: f64,
        rel_tol: f64,
        floor: f64,
    ) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(floor);
        let rel = (lhs - rhs).abs() / scale;
        let mut report = CheckReport {
            name: name.to_string(),
            instance,
            lhs,
            rhs,
            margin: rel,
            pass: rel <= rel_tol,
            metadata: BTreeMap::new(),
        };
        report.note("margin_is", "relative difference");
        report
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    /// Marks the report failed if `other` is false, keeping its own fields.
    pub fn and(&mut self, other: bool) {
        self.pass = self.pass && other;
    }

    /// CSV record under the header `name,instance,lhs,rhs,margin,pass`.
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.name,
            self.instance.replace(',', ";"),
            self.lhs,
            self.rhs,
            self.margin,
            self.pass
        )
    }
}

/// A measured scaling sweep with its fitted asymptotic exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Strictly increasing instance sizes.
    pub xs: Vec<f64>,
    /// Positive measured values, one per size.
    pub ys: Vec<f64>,
    /// Least-squares slope of `ln y` against `ln x` over the tail half of
    /// the sweep.
    pub fitted_exponent: f64,
    /// Half-width (two standard errors) of the slope estimate; infinite
    /// when the tail has fewer than three points.
    pub exponent_ci: f64,
}

impl SweepResult {
    /// Fits the tail exponent; errors if the sweep is degenerate (fewer than
    /// two points, non-increasing sizes, or non-positive values).
    pub fn fit(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::DegenerateSweep("xs and ys differ in length".into()));
        }
        if xs.len() < 2 {
            return Err(Error::DegenerateSweep(format!(
                "need at least 2 points, got {}",
                xs.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::DegenerateSweep("sizes must increase strictly".into()));
        }
        if ys.iter().any(|&y| !(y > 0.0) || !y.is_finite()) {
            return Err(Error::DegenerateSweep("values must be positive".into()));
        }
        let tail = tail_len(xs.len());
        let start = xs.len() - tail;
        let (slope, ci) = log_log_slope(&xs[start..], &ys[start..]);
        Ok(SweepResult {
            xs,
            ys,
            fitted_exponent: slope,
            exponent_ci: ci,
        })
    }

    /// Prefix slopes for tabulation: entry `i` is the least-squares slope
    /// over the first `i + 1` points (NaN for the first).
    pub fn cumulative_exponents(&self) -> Vec<f64> {
        (0..self.xs.len())
            .map(|i| {
                if i == 0 {
                    f64::NAN
                } else {
                    log_log_slope(&self.xs[..=i], &self.ys[..=i]).0
                }
            })
            .collect()
    }
}

fn tail_len(n: usize) -> usize {
    ((n + 1) / 2).max(3).min(n)
}

/// Least-squares slope of `ln y` vs `ln x` with twice its standard error.
fn log_log_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len();
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / k as f64;
    let my = ly.iter().sum::<f64>() / k as f64;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    if k <= 2 {
        return (slope, f64::INFINITY);
    }
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let se = (ss_res / (k as f64 - 2.0) / sxx).sqrt();
    (slope, 2.0 * se)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_slack_semantics() {
        let r = CheckReport::inequality("t", "i".into(), 1.0, 1.0, 0.0);
        assert!(r.pass);
        let r = CheckReport::inequality("t", "i".into(), 1.0 + 1e-12, 1.0, 1e-9);
        assert!(r.pass);
        let r = CheckReport::inequality("t", "i".into(), 1.1, 1.0, 1e-9);
        assert!(!r.pass);
        assert!((r.margin - (-0.1)).abs() < 1e-15);
    }

    #[test]
    fn csv_line_is_comma_safe() {
        let mut r = CheckReport::inequality("dynkin", "n=3, seed=1".into(), 0.5, 2.0, 0.0);
        r.note("k", "v");
        let line = r.csv_line();
        assert_eq!(line.split(',').count(), 6);
    }

    #[test]
    fn fit_recovers_pure_power_law() {
        let xs: Vec<f64> = (1..=8).map(|i| (1 << i) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(0.5)).collect();
        let fit = SweepResult::fit(xs, ys).unwrap();
        assert!((fit.fitted_exponent - 0.5).abs() < 1e-12);
        assert!(fit.exponent_ci < 1e-10);
    }

    #[test]
    fn fit_tail_ignores_early_transient() {
        // y = 2(n-1): the local slope at n = 2 is far above 1, the tail fit
        // is close to it.
        let xs: Vec<f64> = (1..=8).map(|i| (1 << i) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * (x - 1.0)).collect();
        let fit = SweepResult::fit(xs, ys).unwrap();
        assert!(
            (fit.fitted_exponent - 1.0).abs() < 0.02,
            "got {}",
            fit.fitted_exponent
        );
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(SweepResult::fit(vec![2.0], vec![1.0]).is_err());
        assert!(SweepResult::fit(vec![2.0, 2.0], vec![1.0, 1.0]).is_err());
        assert!(SweepResult::fit(vec![2.0, 4.0], vec![1.0, 0.0]).is_err());
        // Two points fit with an unbounded confidence band.
        let fit = SweepResult::fit(vec![2.0, 4.0], vec![1.0, 2.0]).unwrap();
        assert!(fit.exponent_ci.is_infinite());
    }

    #[test]
    fn cumulative_exponents_shape() {
        let xs: Vec<f64> = vec![2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let fit = SweepResult::fit(xs, ys).unwrap();
        let cum = fit.cumulative_exponents();
        assert_eq!(cum.len(), 4);
        assert!(cum[0].is_nan());
        assert!((cum[3] - 2.0).abs() < 1e-12);
    }
}
