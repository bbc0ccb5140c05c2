//! Scaling sweeps: asymptotic exponents of Blaschke-derivative norms and
//! their sharpness families.

use super::{CheckReport, SweepResult};
use crate::blaschke::BlaschkeProduct;
use crate::norms::{a1_seminorm, besov_seminorm, i_integral, QuadOpts};
use crate::special::beta;
use crate::{Error, Result};

/// Instance family for a degree sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    /// `B = (-z)^n`: all zeros at the origin.
    Monomial,
    /// Zeros i.i.d. uniform in the disc of the given radius, averaged over
    /// `draws` seeded draws per degree.
    RandomZeros { radius: f64, draws: usize },
}

impl SweepFamily {
    fn label(&self) -> String {
        match self {
            SweepFamily::Monomial => "monomial".into(),
            SweepFamily::RandomZeros { radius, draws } => {
                format!("random radius<={radius} x{draws}")
            }
        }
    }
}

fn family_value(
    family: SweepFamily,
    n: usize,
    p: f64,
    seed: u64,
    opts: QuadOpts,
) -> Result<f64> {
    match family {
        SweepFamily::Monomial => Ok(besov_seminorm(&BlaschkeProduct::monomial(n), p, opts)?.value),
        SweepFamily::RandomZeros { radius, draws } => {
            let mut acc = 0.0;
            for d in 0..draws.max(1) {
                let b = BlaschkeProduct::random(
                    n,
                    radius,
                    seed.wrapping_mul(1013).wrapping_add(31 * n as u64 + d as u64),
                )?;
                acc += besov_seminorm(&b, p, opts)?.value;
            }
            Ok(acc / draws.max(1) as f64)
        }
    }
}

/// Growth of the Besov seminorm of degree-`n` Blaschke products: the fitted
/// exponent must match `1/p` to within 0.05, and the monomial family is
/// additionally pinned to its closed forms at `p = 2` (`sqrt(n)`) and
/// `p = 1` (`2(n-1)`).
pub fn check_afp_scaling(
    p: f64,
    ns: &[usize],
    family: SweepFamily,
    seed: u64,
    opts: QuadOpts,
) -> Result<(SweepResult, CheckReport)> {
    if !(p > 0.5) {
        return Err(Error::Param(format!("scaling sweep needs p > 1/2, got {p}")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut closed_form_ok = true;
    let mut max_closed_err = 0.0f64;
    for &n in ns {
        let y = family_value(family, n, p, seed, opts)?;
        if y == 0.0 {
            // Degenerate instance (constant); excluded from the fit.
            continue;
        }
        if family == SweepFamily::Monomial {
            let exact = if p == 2.0 {
                Some((n as f64).sqrt())
            } else if p == 1.0 {
                Some(2.0 * (n as f64 - 1.0))
            } else {
                None
            };
            if let Some(e) = exact {
                let rel = (y - e).abs() / e.max(1e-300);
                max_closed_err = max_closed_err.max(rel);
                closed_form_ok &= rel <= 1e-10;
            }
        }
        xs.push(n as f64);
        ys.push(y);
    }
    let sweep = SweepResult::fit(xs, ys)?;
    let target = 1.0 / p;
    let dev = (sweep.fitted_exponent - target).abs();
    let mut report = CheckReport::inequality(
        "afp",
        format!("family={}; p={p}; n in {:?}", family.label(), ns),
        dev,
        0.05,
        0.0,
    );
    report.note("margin_is", "0.05 - |exponent - 1/p|");
    report.note("fitted_exponent", sweep.fitted_exponent);
    report.note("exponent_ci", sweep.exponent_ci);
    report.note("target", target);
    if family == SweepFamily::Monomial && (p == 2.0 || p == 1.0) {
        report.note("closed_form_max_rel_err", max_closed_err);
        report.and(closed_form_ok);
    }
    Ok((sweep, report))
}

/// For `1/2 < p <= 1` and inner instances (BMOA norm 1), the ratio
/// `||B||_{B_p} / n^{1/p}` stays within a bounded band across the sweep
/// (largest over smallest at most 4).
pub fn check_peller_small_p(
    p: f64,
    ns: &[usize],
    family: SweepFamily,
    seed: u64,
    opts: QuadOpts,
) -> Result<(SweepResult, CheckReport)> {
    if !(p > 0.5 && p <= 1.0) {
        return Err(Error::Param(format!(
            "small-exponent sweep needs 1/2 < p <= 1, got {p}"
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &n in ns {
        let y = family_value(family, n, p, seed, opts)?;
        if y == 0.0 {
            continue;
        }
        xs.push(n as f64);
        ys.push(y);
    }
    let sweep = SweepResult::fit(xs, ys)?;
    let ratios: Vec<f64> = sweep
        .xs
        .iter()
        .zip(&sweep.ys)
        .map(|(x, y)| y / x.powf(1.0 / p))
        .collect();
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let mut report = CheckReport::inequality(
        "peller_small_p",
        format!("family={}; p={p}; n in {:?}", family.label(), ns),
        hi / lo,
        4.0,
        0.0,
    );
    report.note("margin_is", "4 - (max ratio / min ratio)");
    report.note("normalised_ratio_max", hi);
    report.note("normalised_ratio_min", lo);
    report.note("fitted_exponent", sweep.fitted_exponent);
    Ok((sweep, report))
}

/// Exact p-th power of the derivative norm of the degree-`n` monomial:
/// `||(z^n)'||_{A_p(alpha)}^p = n^p B((pn - p + 2)/2, alpha + 1)`.
pub fn monomial_derivative_power(n: usize, p: f64, alpha: f64) -> f64 {
    let nf = n as f64;
    nf.powf(p) * beta((p * nf - p + 2.0) / 2.0, alpha + 1.0)
}

/// The critical weight exponent is `p - 1`: below it (at
/// `alpha = p - 1 - eps`) the monomial derivative norms grow like
/// `n^{eps/p}`, at it they are bounded, above it they decay. Quadrature is
/// cross-checked against the exact Beta form on the main sweep.
pub fn check_critical_alpha(
    p: f64,
    eps: f64,
    ns: &[usize],
    opts: QuadOpts,
) -> Result<(SweepResult, CheckReport)> {
    if !(p > 1.0) {
        return Err(Error::Param(format!("critical sweep needs p > 1, got {p}")));
    }
    if !(eps > 0.0 && eps < p) {
        return Err(Error::Param(format!(
            "critical sweep needs 0 < eps < p, got eps = {eps}"
        )));
    }
    let alpha = p - 1.0 - eps;
    let mut quad_err = 0.0f64;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &n in ns {
        let exact = monomial_derivative_power(n, p, alpha);
        let quad = a1_seminorm(&BlaschkeProduct::monomial(n), p, alpha, opts)?
            .value
            .powf(p);
        quad_err = quad_err.max((quad - exact).abs() / exact);
        xs.push(n as f64);
        ys.push(exact);
    }
    let sweep = SweepResult::fit(xs, ys)?;
    // Exponent of the p-th power is eps below the critical weight.
    let dev = (sweep.fitted_exponent - eps).abs();
    let mut report = CheckReport::inequality(
        "critical_alpha",
        format!("p={p}; eps={eps}; n in {:?}", ns),
        dev,
        0.05,
        0.0,
    );
    report.note("margin_is", "0.05 - |exponent - eps|");
    report.note("fitted_exponent", sweep.fitted_exponent);
    report.note("quadrature_max_rel_err", quad_err);
    report.and(quad_err <= 1e-8);

    // At the critical weight the values are bounded (exponent 0 +- 0.02).
    let at: Vec<f64> = ns
        .iter()
        .map(|&n| monomial_derivative_power(n, p, p - 1.0))
        .collect();
    let sweep_at = SweepResult::fit(xs_from(ns), at)?;
    report.note("exponent_at_critical", sweep_at.fitted_exponent);
    report.and(sweep_at.fitted_exponent.abs() <= 0.02);

    // Above it they are bounded as well (nonpositive exponent within CI).
    let above: Vec<f64> = ns
        .iter()
        .map(|&n| monomial_derivative_power(n, p, p - 1.0 + eps))
        .collect();
    let sweep_above = SweepResult::fit(xs_from(ns), above)?;
    report.note("exponent_above_critical", sweep_above.fitted_exponent);
    report.and(sweep_above.fitted_exponent <= sweep_above.exponent_ci.max(1e-6));

    Ok((sweep, report))
}

fn xs_from(ns: &[usize]) -> Vec<f64> {
    ns.iter().map(|&n| n as f64).collect()
}

/// The p-th power of `||(b_{-r}^n)'||_{A_p}` in closed form, where known:
/// `n` at `p = 2` (the degree invariant), and the binomial angular average
///
/// ```text
/// n^4/(1-r^2)^2 ∫_0^1 [(1+r^2 t)^2 + 2 r^2 t] t^{2n-2} dt
/// ```
///
/// at `p = 4`.
pub fn dolzhenko_closed_form(n: usize, r: f64, p: f64) -> Option<f64> {
    let nf = n as f64;
    if p == 2.0 {
        return Some(nf);
    }
    if p == 4.0 {
        let r2 = r * r;
        let moment = 1.0 / (2.0 * nf - 1.0) + 4.0 * r2 / (2.0 * nf) + r2 * r2 / (2.0 * nf + 1.0);
        return Some(nf.powi(4) / ((1.0 - r2) * (1.0 - r2)) * moment);
    }
    None
}

/// Derivative-norm inequalities for rational functions with a single pole of
/// high multiplicity, on the family `g = b_{-r}^n`:
///
/// 1. `I_{p,0}` of monomials normalised by `n^{p-1}` (by `ln n` at `p = 1`)
///    stays in a bounded band;
/// 2. for `p > 2`, the empirical constant of
///    `||g'||_{A_p} <= c n^{1/p} (sum (1+|z_k|)/(1-|z_k|))^{1-2/p}` is
///    reported and its band checked;
/// 3. for `p in {2, 4}`, quadrature matches the closed form to `1e-6`, and
///    the sharpness ratio `||g'||_{A_p} / (n^{1-1/p} (1-r)^{-(1-2/p)})`
///    varies by less than a factor 2 across the sweep.
pub fn check_dolzhenko(
    p: f64,
    ns: &[usize],
    r: f64,
    opts: QuadOpts,
) -> Result<(SweepResult, CheckReport)> {
    if !(p >= 1.0) {
        return Err(Error::Param(format!("needs p >= 1, got {p}")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Param(format!("pole radius {r} not in [0,1)")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut closed_ok = true;
    let mut max_closed_err = 0.0f64;
    for &n in ns {
        let g = BlaschkeProduct::mobius_power(n, r)?;
        let norm = a1_seminorm(&g, p, 0.0, opts)?;
        if let Some(exact_pow) = dolzhenko_closed_form(n, r, p) {
            let exact = exact_pow.powf(1.0 / p);
            let rel = (norm.value - exact).abs() / exact;
            max_closed_err = max_closed_err.max(rel);
            closed_ok &= rel <= 1e-6 && norm.converged();
        }
        xs.push(n as f64);
        ys.push(norm.value);
    }
    let sweep = SweepResult::fit(xs, ys)?;

    let mut report = CheckReport {
        name: "dolzhenko".into(),
        instance: format!("g=b_{{-{r}}}^n; p={p}; n in {:?}", ns),
        lhs: 0.0,
        rhs: 0.0,
        margin: 0.0,
        pass: true,
        metadata: Default::default(),
    };

    // (1) comparison-integral growth on monomials.
    let mut i_ratios = Vec::new();
    for &n in ns {
        if p == 1.0 && n < 2 {
            continue;
        }
        let i = i_integral(&BlaschkeProduct::monomial(n), p, 0.0, opts)?.value;
        let scale = if p == 1.0 {
            (n as f64).ln()
        } else {
            (n as f64).powf(p - 1.0)
        };
        i_ratios.push(i / scale);
    }
    let (ilo, ihi) = band(&i_ratios);
    report.note("i_growth_ratio_max", ihi);
    report.note("i_growth_band", ihi / ilo);
    report.and(ihi / ilo <= 4.0);

    // (2) reported constant for the multiplicity bound, p > 2.
    if p > 2.0 {
        let mut cs = Vec::new();
        for (x, y) in sweep.xs.iter().zip(&sweep.ys) {
            let pole_sum = x * (1.0 + r) / (1.0 - r);
            cs.push(y / (x.powf(1.0 / p) * pole_sum.powf(1.0 - 2.0 / p)));
        }
        let (clo, chi) = band(&cs);
        report.note("empirical_constant_max", chi);
        report.note("empirical_constant_band", chi / clo);
        report.and(chi / clo <= 4.0);
    }

    // (3) sharpness of the family.
    if dolzhenko_closed_form(2, r, p).is_some() {
        report.note("closed_form_max_rel_err", max_closed_err);
        report.and(closed_ok);
        let normalised: Vec<f64> = sweep
            .xs
            .iter()
            .zip(&sweep.ys)
            .map(|(x, y)| y / (x.powf(1.0 - 1.0 / p) * (1.0 - r).powf(-(1.0 - 2.0 / p))))
            .collect();
        let (nlo, nhi) = band(&normalised);
        report.lhs = nhi / nlo;
        report.rhs = 2.0;
        report.margin = 2.0 - nhi / nlo;
        report.note("margin_is", "2 - sharpness band");
        report.note("sharpness_band", nhi / nlo);
        report.and(nhi / nlo <= 2.0);
    } else {
        report.lhs = ihi / ilo;
        report.rhs = 4.0;
        report.margin = 4.0 - ihi / ilo;
        report.note("margin_is", "4 - I-growth band");
    }
    Ok((sweep, report))
}

fn band(values: &[f64]) -> (f64, f64) {
    let hi = values.iter().cloned().fold(f64::MIN, f64::max);
    let lo = values.iter().cloned().fold(f64::MAX, f64::min);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn opts() -> QuadOpts {
        QuadOpts::tol(1e-9)
    }

    #[test]
    fn afp_monomials_p2_exact() {
        let ns: Vec<usize> = (1..=8).map(|k| 1usize << k).collect();
        let (sweep, report) =
            check_afp_scaling(2.0, &ns, SweepFamily::Monomial, 0, QuadOpts::tol(1e-12)).unwrap();
        assert!(report.pass, "{report:?}");
        for (x, y) in sweep.xs.iter().zip(&sweep.ys) {
            assert_relative_eq!(*y, x.sqrt(), max_relative = 1e-10);
        }
        assert!((sweep.fitted_exponent - 0.5).abs() <= 0.01);
    }

    #[test]
    fn afp_monomials_p1_exact() {
        let ns: Vec<usize> = (1..=8).map(|k| 1usize << k).collect();
        let (sweep, report) =
            check_afp_scaling(1.0, &ns, SweepFamily::Monomial, 0, QuadOpts::tol(1e-12)).unwrap();
        assert!(report.pass, "{report:?}");
        for (x, y) in sweep.xs.iter().zip(&sweep.ys) {
            assert_relative_eq!(*y, 2.0 * (x - 1.0), max_relative = 1e-10);
        }
    }

    #[test]
    fn small_p_monomials_bounded() {
        let ns: Vec<usize> = vec![4, 8, 16, 32, 64];
        let (_, report) =
            check_peller_small_p(1.0, &ns, SweepFamily::Monomial, 0, opts()).unwrap();
        assert!(report.pass, "{report:?}");
        let (_, report) =
            check_peller_small_p(0.75, &ns, SweepFamily::Monomial, 0, QuadOpts::tol(1e-6))
                .unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn critical_alpha_beta_identities() {
        // n^2 B(n, 2) = n/(n+1).
        for &n in &[2usize, 8, 64] {
            assert_relative_eq!(
                monomial_derivative_power(n, 2.0, 1.0),
                n as f64 / (n as f64 + 1.0),
                max_relative = 1e-13
            );
        }
        // n = 2, p = 2, alpha = 0: 4 B(2, 1) = 2.
        assert_relative_eq!(monomial_derivative_power(2, 2.0, 0.0), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn critical_alpha_sweep() {
        let ns: Vec<usize> = (3..=9).map(|k| 1usize << k).collect();
        let (sweep, report) = check_critical_alpha(2.0, 0.5, &ns, opts()).unwrap();
        assert!(report.pass, "{report:?}");
        assert!((sweep.fitted_exponent - 0.5).abs() <= 0.05);
        let at: f64 = report.metadata["exponent_at_critical"].parse().unwrap();
        assert!(at.abs() <= 0.02, "exponent at critical {at}");
    }

    #[test]
    fn dolzhenko_degree_invariant_at_p2() {
        let ns = vec![2usize, 4, 8, 16];
        let (sweep, report) = check_dolzhenko(2.0, &ns, 0.6, opts()).unwrap();
        assert!(report.pass, "{report:?}");
        for (x, y) in sweep.xs.iter().zip(&sweep.ys) {
            assert_relative_eq!(*y, x.sqrt(), max_relative = 1e-7);
        }
    }

    #[test]
    fn dolzhenko_p4_closed_form() {
        // b_0 = -z at n = 1, r = 0: ||(b_0)'||_{A_4}^4 = 1.
        assert_relative_eq!(dolzhenko_closed_form(1, 0.0, 4.0).unwrap(), 1.0, epsilon = 1e-15);
        let ns = vec![4usize, 8, 16];
        let (_, report) = check_dolzhenko(4.0, &ns, 0.7, QuadOpts::tol(1e-8)).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn dolzhenko_p1_log_normalisation() {
        let ns = vec![2usize, 4, 8, 16, 32];
        let (_, report) = check_dolzhenko(1.0, &ns, 0.5, QuadOpts::tol(1e-7)).unwrap();
        assert!(report.pass, "{report:?}");
    }
}
