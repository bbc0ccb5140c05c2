//! Function-space norms and seminorms on the disc, the comparison integral
//! `I_{p,alpha}`, and the explicit constants of the sharp inequalities.
//!
//! BMOA is not computable as an infimum; the policy here is explicit. Checks
//! that need `||f||_BMOA` use, in order of preference, exact values known
//! for the instance class (finite Blaschke products have BMOA norm 1; a
//! backward shift of an inner function is bounded by 2), else the boundary
//! sup [`bmoa_upper`], a true upper bound, with the consuming check labelled
//! a necessary condition. The Garsia seminorm is reported for diagnostics
//! only; its equivalence constants with BMOA are not pinned anywhere.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::analytic::AnalyticFn;
use crate::blaschke::BlaschkeProduct;
use crate::quadrature::{
    disc_integral, gauss_jacobi_nodes, pow_modulus, unit_circle_nodes, DiscPoint,
    IntegrationResult, KahanSum, QuadratureSpec,
};
use crate::{Error, Result};

/// Which norm or seminorm a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    /// `A_p(alpha)` norm.
    Bergman,
    /// `A_p^1(alpha)` seminorm, the `A_p(alpha)` norm of the derivative.
    A1,
    /// `B_p` seminorm (derivative order from the integrability exponent).
    Besov,
    /// Bloch norm `|f(0)| + sup |f'(z)|(1-|z|)`.
    Bloch,
    /// Computable BMOA surrogate (boundary sup or Garsia; see note).
    Bmoa,
    /// The comparison integral `I_{p,alpha}`.
    #[serde(rename = "I")]
    IIntegral,
}

/// Exponent pair naming a weighted space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceParams {
    pub p: f64,
    pub alpha: f64,
    pub kind: SpaceKind,
}

/// A computed norm with its quadrature metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub value: f64,
    pub params: SpaceParams,
    /// Present when the value came from adaptive integration.
    pub quadrature: Option<IntegrationResult>,
    /// Set for surrogate quantities (BMOA upper bound, Garsia diagnostic).
    pub surrogate_note: Option<String>,
}

impl NormReport {
    pub fn converged(&self) -> bool {
        self.quadrature.map_or(true, |q| q.converged)
    }

    /// Error estimate of the underlying integral (0 for grid-sup reports).
    pub fn error_estimate(&self) -> f64 {
        self.quadrature.map_or(0.0, |q| q.error_estimate)
    }
}

impl Serialize for NormReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = 5 + usize::from(self.surrogate_note.is_some());
        let mut s = serializer.serialize_struct("NormReport", n)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field("p", &self.params.p)?;
        s.serialize_field("alpha", &self.params.alpha)?;
        s.serialize_field("kind", &self.params.kind)?;
        s.serialize_field("error_estimate", &self.error_estimate())?;
        if let Some(note) = &self.surrogate_note {
            s.serialize_field("surrogate_note", note)?;
        }
        s.end()
    }
}

/// Adaptive-quadrature options shared by the integral norms.
#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    pub rel_tol: f64,
    pub max_refinements: u32,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            rel_tol: 1e-9,
            max_refinements: 10,
        }
    }
}

impl QuadOpts {
    pub fn tol(rel_tol: f64) -> Self {
        QuadOpts {
            rel_tol,
            ..QuadOpts::default()
        }
    }

    fn spec_for(&self, f: &(impl AnalyticFn + ?Sized), extra_degree: usize, alpha: f64) -> Result<QuadratureSpec> {
        let mut spec = QuadratureSpec::for_degrees(
            f.total_degree() + extra_degree,
            f.angular_degree(),
            alpha,
            self.rel_tol,
        )?;
        spec.max_refinements = self.max_refinements;
        Ok(spec)
    }
}

/// `A_p(alpha)` norm: `( ∫_D (1-|u|^2)^alpha |f(u)|^p dA )^{1/p}` with the
/// normalised area measure; `p >= 1`, `alpha > -1`.
pub fn bergman_norm(
    f: &(impl AnalyticFn + ?Sized),
    p: f64,
    alpha: f64,
    opts: QuadOpts,
) -> Result<NormReport> {
    if !(p >= 1.0) {
        return Err(Error::Param(format!("Bergman norm needs p >= 1, got {p}")));
    }
    check_alpha(alpha)?;
    let spec = opts.spec_for(f, 0, alpha)?;
    let integral = disc_integral(
        |pt: DiscPoint| pow_modulus(f.jet(pt.u, 0).v0, p),
        alpha,
        &spec,
    )?;
    Ok(NormReport {
        value: integral.value.max(0.0).powf(1.0 / p),
        params: SpaceParams {
            p,
            alpha,
            kind: SpaceKind::Bergman,
        },
        quadrature: Some(integral),
        surrogate_note: None,
    })
}

/// `A_p^1(alpha)` seminorm: the `A_p(alpha)` norm of `f'`.
pub fn a1_seminorm(
    f: &(impl AnalyticFn + ?Sized),
    p: f64,
    alpha: f64,
    opts: QuadOpts,
) -> Result<NormReport> {
    if !(p >= 1.0) {
        return Err(Error::Param(format!("A_p^1 seminorm needs p >= 1, got {p}")));
    }
    check_alpha(alpha)?;
    let spec = opts.spec_for(f, 0, alpha)?;
    let integral = disc_integral(
        |pt: DiscPoint| pow_modulus(f.jet(pt.u, 1).v1, p),
        alpha,
        &spec,
    )?;
    Ok(NormReport {
        value: integral.value.max(0.0).powf(1.0 / p),
        params: SpaceParams {
            p,
            alpha,
            kind: SpaceKind::A1,
        },
        quadrature: Some(integral),
        surrogate_note: None,
    })
}

/// Derivative order of the `B_p` seminorm: the smallest `k` with `p k > 1`.
pub fn besov_order(p: f64) -> u32 {
    let mut k = 1u32;
    while p * k as f64 <= 1.0 {
        k += 1;
    }
    k
}

/// `B_p` seminorm with the canonical derivative order: for `p > 1` this is
/// the `A_p^1(p-2)` seminorm; for `1/2 < p <= 1` the order-2 branch with
/// weight exponent `2p - 2`. Exponents `p <= 1/2` are out of range.
pub fn besov_seminorm(f: &(impl AnalyticFn + ?Sized), p: f64, opts: QuadOpts) -> Result<NormReport> {
    if !(p > 0.5) {
        return Err(Error::Param(format!(
            "Besov seminorm supports p > 1/2, got {p}"
        )));
    }
    besov_seminorm_order(f, p, besov_order(p), opts)
}

/// `B_p`-type seminorm with an explicit derivative order `k <= 3`:
/// `( ∫_D |f^(k)(u)|^p (1-|u|^2)^{pk-2} dA )^{1/p}`, requiring `p k > 1`.
pub fn besov_seminorm_order(
    f: &(impl AnalyticFn + ?Sized),
    p: f64,
    k: u32,
    opts: QuadOpts,
) -> Result<NormReport> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Param(format!("Besov seminorm needs p > 0, got {p}")));
    }
    if k == 0 || k > 3 {
        return Err(Error::Param(format!(
            "Besov derivative order must be 1..=3, got {k}"
        )));
    }
    let alpha = p * k as f64 - 2.0;
    if !(alpha > -1.0) {
        return Err(Error::Param(format!(
            "unsupported exponent p = {p} at order {k}: weight exponent {alpha} <= -1 (needs p k > 1)"
        )));
    }
    let order = k as usize;
    let spec = opts.spec_for(f, 0, alpha)?;
    let integral = disc_integral(
        |pt: DiscPoint| pow_modulus(f.jet(pt.u, order).derivative(order), p),
        alpha,
        &spec,
    )?;
    Ok(NormReport {
        value: integral.value.max(0.0).powf(1.0 / p),
        params: SpaceParams {
            p,
            alpha,
            kind: SpaceKind::Besov,
        },
        quadrature: Some(integral),
        surrogate_note: None,
    })
}

/// Grid resolution for the Bloch sup.
#[derive(Debug, Clone, Copy)]
pub struct BlochGrid {
    pub radial: usize,
    pub angular: usize,
}

impl Default for BlochGrid {
    fn default() -> Self {
        BlochGrid {
            radial: 96,
            angular: 128,
        }
    }
}

/// Bloch norm `|f(0)| + sup_z |f'(z)|(1-|z|)`, by a radial-angular grid scan
/// followed by golden-section refinement around the best point. The sup is a
/// lower bound at grid resolution; the report notes the grid.
pub fn bloch_norm(f: &(impl AnalyticFn + ?Sized), grid: BlochGrid) -> NormReport {
    let angular = grid.angular.max(4 * f.angular_degree()).max(16);
    let objective = |r: f64, theta: f64| -> f64 {
        let u = Complex64::from_polar(r, theta);
        f.jet(u, 1).v1.norm() * (1.0 - r)
    };
    let mut best = (0.0f64, 0.0f64, objective(0.0, 0.0));
    for i in 0..grid.radial {
        let r = i as f64 / grid.radial as f64;
        for j in 0..angular {
            let theta = std::f64::consts::TAU * j as f64 / angular as f64;
            let v = objective(r, theta);
            if v > best.2 {
                best = (r, theta, v);
            }
        }
    }
    // One golden-section pass in each coordinate around the grid argmax.
    let dr = 1.0 / grid.radial as f64;
    let dth = std::f64::consts::TAU / angular as f64;
    let r_star = golden_max(|r| objective(r, best.1), (best.0 - dr).max(0.0), (best.0 + dr).min(1.0));
    let th_star = golden_max(|th| objective(r_star, th), best.1 - dth, best.1 + dth);
    let sup = objective(r_star, th_star).max(best.2);
    NormReport {
        value: f.jet(Complex64::new(0.0, 0.0), 0).v0.norm() + sup,
        params: SpaceParams {
            p: f64::INFINITY,
            alpha: 0.0,
            kind: SpaceKind::Bloch,
        },
        quadrature: None,
        surrogate_note: Some(format!(
            "grid sup (lower bound), {}x{} nodes + golden-section refinement",
            grid.radial, angular
        )),
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// The comparison integral
/// `I_{p,alpha}(Theta) = ∫_D (1-|u|^2)^alpha ((1-|Theta(u)|^2)/(1-|u|^2))^p dA`
/// for a finite Blaschke product; `p > 0`, `alpha > -1`.
///
/// The integrand is evaluated through the stabilised deviation ratio (the
/// telescoped partial-product sum near the boundary), never by separately
/// multiplying and dividing powers of `1-|u|^2`, which would cancel
/// catastrophically near the circle.
pub fn i_integral(
    theta: &BlaschkeProduct,
    p: f64,
    alpha: f64,
    opts: QuadOpts,
) -> Result<NormReport> {
    if !(p > 0.0) {
        return Err(Error::Param(format!("I integral needs p > 0, got {p}")));
    }
    check_alpha(alpha)?;
    let spec = opts.spec_for(theta, 0, alpha)?;
    let integral = disc_integral(
        |pt: DiscPoint| {
            let ratio = theta.deviation_ratio_impl(pt.u, pt.one_minus_abs_sq);
            if p == 2.0 {
                ratio * ratio
            } else if p == 1.0 {
                ratio
            } else {
                ratio.powf(p)
            }
        },
        alpha,
        &spec,
    )?;
    Ok(NormReport {
        value: integral.value,
        params: SpaceParams {
            p,
            alpha,
            kind: SpaceKind::IIntegral,
        },
        quadrature: Some(integral),
        surrogate_note: None,
    })
}

/// Boundary-sup surrogate for the BMOA norm: `max |f|` over `n` circle
/// points with golden-section refinement at the argmax. An upper bound for
/// BMOA since the boundary trace is an admissible representer.
pub fn bmoa_upper(f: &(impl AnalyticFn + ?Sized), n: usize) -> NormReport {
    let n = n.max(16).max(8 * f.angular_degree());
    let modulus = |theta: f64| f.jet(Complex64::from_polar(1.0, theta), 0).v0.norm();
    let mut best = (0.0f64, modulus(0.0));
    for j in 1..n {
        let theta = std::f64::consts::TAU * j as f64 / n as f64;
        let v = modulus(theta);
        if v > best.1 {
            best = (theta, v);
        }
    }
    let dth = std::f64::consts::TAU / n as f64;
    let th_star = golden_max(modulus, best.0 - dth, best.0 + dth);
    let value = modulus(th_star).max(best.1);
    NormReport {
        value,
        params: SpaceParams {
            p: f64::INFINITY,
            alpha: 0.0,
            kind: SpaceKind::Bmoa,
        },
        quadrature: None,
        surrogate_note: Some(format!(
            "H-infinity boundary sup over {n} nodes (UPPER BOUND for BMOA)"
        )),
    }
}

/// Garsia-type seminorm `sup_lam (||f o b_lam||_{H^2}^2 - |f(lam)|^2)^{1/2}`
/// over the given grid of `lam`, each `H^2` norm by an `n`-point boundary
/// rule. Equivalent to BMOA with unspecified constants; diagnostics only.
pub fn garsia_seminorm(
    f: &(impl AnalyticFn + ?Sized),
    lambda_grid: &[Complex64],
    n: usize,
) -> NormReport {
    let n = n.max(64).max(8 * f.angular_degree()).next_power_of_two();
    let mut sup: f64 = 0.0;
    for &lam in lambda_grid {
        let mut acc = KahanSum::new();
        for xi in unit_circle_nodes(n) {
            let w = (lam - xi) / (1.0 - lam.conj() * xi);
            acc.add(f.jet(w, 0).v0.norm_sqr());
        }
        let h2_sq = acc.value() / n as f64;
        let centred = h2_sq - f.jet(lam, 0).v0.norm_sqr();
        sup = sup.max(centred.max(0.0).sqrt());
    }
    NormReport {
        value: sup,
        params: SpaceParams {
            p: f64::INFINITY,
            alpha: 0.0,
            kind: SpaceKind::Bmoa,
        },
        quadrature: None,
        surrogate_note: Some(format!(
            "Garsia seminorm over {} base points (diagnostic; BMOA-equivalent with unknown constants)",
            lambda_grid.len()
        )),
    }
}

/// Default Garsia grid: circles of a few radii.
pub fn default_garsia_grid() -> Vec<Complex64> {
    let mut grid = vec![Complex64::new(0.0, 0.0)];
    for &r in &[0.25, 0.5, 0.7, 0.85, 0.95] {
        for j in 0..12 {
            grid.push(Complex64::from_polar(
                r,
                std::f64::consts::TAU * j as f64 / 12.0,
            ));
        }
    }
    grid
}

/// The explicit constants of the sharp inequalities at exponents `(p, alpha)`
/// with `p > 1`, `alpha > -1`, `p > 1 + alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExplicitConstants {
    /// `K_{p,alpha}`, with `K^p = s/(s-1) (p/(p-1-alpha))^p 2^{p+1}` for
    /// `s = 2^{1/(alpha+1)}`.
    pub k_palpha: f64,
    /// `K_{p,alpha}^p`, the multiplier of the upper comparison bound.
    pub k_pow_p: f64,
    /// `C_{p,alpha} = (p/(p-1-alpha))^p 2^p`, the Hardy-step constant.
    pub c_palpha: f64,
    /// `beta_alpha = 1 - 2^{-1/(alpha+1)}`, the weight-median radius.
    pub beta_alpha: f64,
}

/// Computes [`ExplicitConstants`]; errors outside `p > 1 + alpha`.
///
/// The identity `K^p = (2/beta) C` holds to a few ulps and is asserted in
/// the test suite.
pub fn constants(p: f64, alpha: f64) -> Result<ExplicitConstants> {
    check_alpha(alpha)?;
    if !(p > 1.0) || !(p > 1.0 + alpha) {
        return Err(Error::Param(format!(
            "constants need p > 1 and p > 1 + alpha, got p = {p}, alpha = {alpha}"
        )));
    }
    let s = 2.0f64.powf(1.0 / (alpha + 1.0));
    let hardy = (p / (p - 1.0 - alpha)).powf(p);
    let c_palpha = hardy * 2.0f64.powf(p);
    let k_pow_p = s / (s - 1.0) * hardy * 2.0f64.powf(p + 1.0);
    Ok(ExplicitConstants {
        k_palpha: k_pow_p.powf(1.0 / p),
        k_pow_p,
        c_palpha,
        beta_alpha: 1.0 - 1.0 / s,
    })
}

/// The iterated-integral majorant of `I_{p,alpha}`:
/// `2 ∫_0^1 (1-r)^alpha (mean of |f'|^p on the circle of radius r) dr`,
/// by a Gauss-Jacobi rule in `r` (weight `(1-r)^alpha` directly, no `t = r^2`
/// substitution) with doubling in both directions.
pub fn polar_derivative_integral(
    f: &(impl AnalyticFn + ?Sized),
    p: f64,
    alpha: f64,
    opts: QuadOpts,
) -> Result<IntegrationResult> {
    check_alpha(alpha)?;
    let mut radial = (f.total_degree() + 8).max(16);
    let mut angular = (16 * f.angular_degree()).max(64).next_power_of_two();
    let pass = |m: usize, n: usize| -> Result<f64> {
        let rule = gauss_jacobi_nodes(alpha, m)?;
        let mut total = KahanSum::new();
        for i in 0..m {
            let r = rule.nodes[i];
            let mut ring = KahanSum::new();
            for xi in unit_circle_nodes(n) {
                ring.add(pow_modulus(f.jet(r * xi, 1).v1, p));
            }
            total.add(rule.weights[i] * ring.value() / n as f64);
        }
        Ok(2.0 * total.value())
    };
    let mut prev = pass(radial, angular)?;
    let mut estimate = f64::INFINITY;
    for k in 1..=opts.max_refinements {
        radial *= 2;
        angular *= 2;
        let cur = pass(radial, angular)?;
        estimate = (cur - prev).abs();
        if estimate <= opts.rel_tol * cur.abs() {
            return Ok(IntegrationResult {
                value: cur,
                error_estimate: estimate,
                refinements_used: k,
                converged: true,
            });
        }
        prev = cur;
    }
    Ok(IntegrationResult {
        value: prev,
        error_estimate: estimate,
        refinements_used: opts.max_refinements,
        converged: false,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Param(format!("alpha must exceed -1, got {alpha}")));
    }
    Ok(())
}
