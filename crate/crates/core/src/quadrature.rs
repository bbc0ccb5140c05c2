//! Integration over the unit disc with radial weight `(1-|u|^2)^alpha`
//! (`alpha > -1`, endpoint-singular for negative `alpha`) and over the unit
//! circle, with a-posteriori error estimates.
//!
//! The substitution `t = r^2` is canonical throughout: with the normalised
//! area measure, `∫_D g dA = ∫_0^1 (mean of g on the circle of radius
//! sqrt(t)) dt`, and the weight becomes `(1-t)^alpha`. The radial direction
//! uses a Gauss-Jacobi rule exact for that weight (plain rules diverge for
//! `alpha <= -0.5`); the angular direction uses the trapezoid rule, which is
//! exact for trigonometric polynomials of degree below the node count.
//!
//! Rules refine by doubling both directions until two successive values
//! agree to the requested relative tolerance. Grid rows may be evaluated on
//! worker threads, but each row is summed sequentially and the rows are
//! reduced in index order with compensated accumulation, so the result is
//! bit-identical for any thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

/// Compensated (Neumaier) accumulator; deterministic given insertion order.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Grid parameters for a disc integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Radial (Gauss-Jacobi) node count, `>= 1`.
    pub radial_nodes: usize,
    /// Angular (trapezoid) node count, even and `>= 4`.
    pub angular_nodes: usize,
    /// Weight exponent, `> -1`.
    pub alpha: f64,
    /// Stop once two successive refinements agree to this relative tolerance.
    pub rel_tolerance: f64,
    /// Cap on the number of doublings.
    pub max_refinements: u32,
}

impl QuadratureSpec {
    pub fn new(
        radial_nodes: usize,
        angular_nodes: usize,
        alpha: f64,
        rel_tolerance: f64,
        max_refinements: u32,
    ) -> Result<Self> {
        if radial_nodes < 1 {
            return Err(Error::Param("radial_nodes must be >= 1".into()));
        }
        if angular_nodes < 4 || angular_nodes % 2 != 0 {
            return Err(Error::Param(format!(
                "angular_nodes must be even and >= 4, got {angular_nodes}"
            )));
        }
        if !(alpha > -1.0) {
            return Err(Error::Param(format!("alpha must exceed -1, got {alpha}")));
        }
        if !(rel_tolerance > 0.0) {
            return Err(Error::Param("rel_tolerance must be positive".into()));
        }
        Ok(QuadratureSpec {
            radial_nodes,
            angular_nodes,
            alpha,
            rel_tolerance,
            max_refinements,
        })
    }

    /// Initial grid sized from the integrand's degree hints: the angular
    /// count scales with the effective angular degree (oscillation on
    /// circles), the radial count with the total degree.
    pub fn for_degrees(
        total_degree: usize,
        angular_degree: usize,
        alpha: f64,
        rel_tolerance: f64,
    ) -> Result<Self> {
        let radial = (total_degree + 8).max(16);
        let angular = (16 * angular_degree).max(64).next_power_of_two();
        QuadratureSpec::new(radial, angular, alpha, rel_tolerance, 10)
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationResult {
    pub value: f64,
    /// Difference between the last two refinements; an empirical error bound.
    pub error_estimate: f64,
    pub refinements_used: u32,
    /// Whether the doubling sequence met the requested tolerance.
    pub converged: bool,
}

/// A grid point of the disc rule, carrying the exact radial-node data so
/// integrands can form `1 - |u|^2` without cancellation.
#[derive(Debug, Clone, Copy)]
pub struct DiscPoint {
    pub u: Complex64,
    /// `|u|^2`, the radial node `t`.
    pub abs_sq: f64,
    /// `1 - |u|^2`, computed from the node, not from `u`.
    pub one_minus_abs_sq: f64,
}

/// Nodes and weights of the `m`-point Gauss rule for `∫_0^1 (1-t)^alpha q(t) dt`,
/// exact for polynomials `q` of degree `<= 2m-1`.
///
/// Built by the Golub-Welsch construction from the three-term recurrence of
/// the Jacobi polynomials with exponents `(alpha, 0)`, mapped from `[-1, 1]`.
/// Also returns `1 - t_i` for each node, formed from the eigenvalue on
/// `[-1, 1]` so that nodes near 1 keep full precision in their complement.
pub fn gauss_jacobi_nodes(alpha: f64, m: usize) -> Result<GaussRule> {
    if !(alpha > -1.0) {
        return Err(Error::Param(format!("alpha must exceed -1, got {alpha}")));
    }
    if m < 1 {
        return Err(Error::Param("node count must be >= 1".into()));
    }
    if let Some(rule) = cache_get(alpha, m) {
        return Ok(rule);
    }

    // Monic Jacobi recurrence on [-1, 1] with weight (1-x)^alpha:
    //   a_0 = -alpha/(alpha+2),  a_k = -alpha^2 / ((2k+alpha)(2k+alpha+2))
    //   b_1 = 4(alpha+1) / ((alpha+2)^2 (alpha+3))
    //   b_k = 4 k^2 (k+alpha)^2 / ((2k+alpha)^2 (2k+alpha+1)(2k+alpha-1))
    let mut diag = vec![0.0f64; m];
    let mut off = vec![0.0f64; m];
    diag[0] = -alpha / (alpha + 2.0);
    for k in 1..m {
        let kk = k as f64;
        let s = 2.0 * kk + alpha;
        diag[k] = -(alpha * alpha) / (s * (s + 2.0));
        let b = if k == 1 {
            4.0 * (alpha + 1.0) / ((alpha + 2.0) * (alpha + 2.0) * (alpha + 3.0))
        } else {
            4.0 * kk * kk * (kk + alpha) * (kk + alpha) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[k - 1] = b.sqrt();
    }

    let mut first_components = vec![0.0f64; m];
    first_components[0] = 1.0;
    symmetric_tridiagonal_eigen(&mut diag, &mut off, &mut first_components)?;

    // Total mass on [-1, 1] is 2^(alpha+1)/(alpha+1); mapping t = (1+x)/2
    // scales the weights by 2^-(alpha+1) so they sum to 1/(alpha+1).
    let mu0 = 2.0f64.powf(alpha + 1.0) / (alpha + 1.0);
    let scale = 2.0f64.powf(-(alpha + 1.0));
    let mut nodes = Vec::with_capacity(m);
    let mut complements = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        let x = diag[i];
        nodes.push(0.5 * (1.0 + x));
        complements.push(0.5 * (1.0 - x));
        weights.push(mu0 * scale * first_components[i] * first_components[i]);
    }
    let rule = GaussRule {
        nodes: Arc::new(nodes),
        complements: Arc::new(complements),
        weights: Arc::new(weights),
    };
    cache_put(alpha, m, rule.clone());
    Ok(rule)
}

/// A radial Gauss rule on `[0, 1]`: nodes `t_i`, their complements `1 - t_i`,
/// and positive weights.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Arc<Vec<f64>>,
    pub complements: Arc<Vec<f64>>,
    pub weights: Arc<Vec<f64>>,
}

fn rule_cache() -> &'static Mutex<HashMap<(u64, usize), GaussRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), GaussRule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_get(alpha: f64, m: usize) -> Option<GaussRule> {
    rule_cache().lock().unwrap().get(&(alpha.to_bits(), m)).cloned()
}

fn cache_put(alpha: f64, m: usize, rule: GaussRule) {
    let mut cache = rule_cache().lock().unwrap();
    if cache.len() > 256 {
        cache.clear();
    }
    cache.insert((alpha.to_bits(), m), rule);
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix, tracking
/// the first row of the eigenvector matrix (Golub-Welsch form).
///
/// `diag` holds the diagonal, `off` the subdiagonal in its first `n-1`
/// entries, and `vec` the vector rotated alongside (initially `e_1`). On
/// return `diag` holds ascending eigenvalues and `vec[i]` the first component
/// of the corresponding normalised eigenvector.
fn symmetric_tridiagonal_eigen(diag: &mut [f64], off: &mut [f64], vec: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    let prec = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                if off[m].abs() <= prec * (diag[m].abs() + diag[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenFail);
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * off[i];
                let b = c * off[i];
                if f.abs() >= g.abs() {
                    c = g / f;
                    r = c.hypot(1.0);
                    off[i + 1] = f * r;
                    s = 1.0 / r;
                    c *= s;
                } else {
                    s = f / g;
                    r = s.hypot(1.0);
                    off[i + 1] = g * r;
                    c = 1.0 / r;
                    s *= c;
                }
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = vec[i + 1];
                vec[i + 1] = s * vec[i] + c * f;
                vec[i] = c * vec[i] - s * f;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    // Insertion sort by eigenvalue, carrying the first components.
    for i in 1..n {
        let d = diag[i];
        let v = vec[i];
        let mut j = i;
        while j > 0 && diag[j - 1] > d {
            diag[j] = diag[j - 1];
            vec[j] = vec[j - 1];
            j -= 1;
        }
        diag[j] = d;
        vec[j] = v;
    }
    Ok(())
}

/// One pass of the tensor rule at fixed sizes; rows in parallel, reduction
/// in fixed order.
fn disc_pass<G>(g: &G, alpha: f64, radial: usize, angular: usize) -> Result<f64>
where
    G: Fn(DiscPoint) -> f64 + Sync,
{
    let rule = gauss_jacobi_nodes(alpha, radial)?;
    let inv_n = 1.0 / angular as f64;
    let circle: Vec<Complex64> = (0..angular)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 * inv_n))
        .collect();

    let ring_means: Vec<f64> = (0..radial)
        .into_par_iter()
        .map(|i| {
            let t = rule.nodes[i];
            let omt = rule.complements[i];
            let r = t.sqrt();
            let mut acc = KahanSum::new();
            for xi in &circle {
                acc.add(g(DiscPoint {
                    u: r * xi,
                    abs_sq: t,
                    one_minus_abs_sq: omt,
                }));
            }
            acc.value() * inv_n
        })
        .collect();

    let mut total = KahanSum::new();
    for i in 0..radial {
        total.add(rule.weights[i] * ring_means[i]);
    }
    Ok(total.value())
}

/// Adaptive approximation of `∫_D (1-|u|^2)^alpha g(u) dA(u)` with `dA`
/// normalised (`dA(D) = 1`). The weight is supplied by the rule; `g` is
/// evaluated without it.
///
/// Starts at the sizes in `spec` and doubles both directions until two
/// successive values agree to `spec.rel_tolerance`; if the cap is hit the
/// result carries `converged = false` rather than an error.
pub fn disc_integral<G>(g: G, alpha: f64, spec: &QuadratureSpec) -> Result<IntegrationResult>
where
    G: Fn(DiscPoint) -> f64 + Sync,
{
    let mut radial = spec.radial_nodes;
    let mut angular = spec.angular_nodes;
    let mut prev = disc_pass(&g, alpha, radial, angular)?;
    let mut estimate = f64::INFINITY;
    for k in 1..=spec.max_refinements {
        radial *= 2;
        angular *= 2;
        let cur = disc_pass(&g, alpha, radial, angular)?;
        estimate = (cur - prev).abs();
        if estimate <= spec.rel_tolerance * cur.abs() {
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
        refinements_used: spec.max_refinements,
        converged: false,
    })
}

/// [`disc_integral`] with the grid sized automatically from degree hints.
pub fn refine_until<G>(
    g: G,
    alpha: f64,
    rel_tol: f64,
    total_degree: usize,
    angular_degree: usize,
) -> Result<IntegrationResult>
where
    G: Fn(DiscPoint) -> f64 + Sync,
{
    let spec = QuadratureSpec::for_degrees(total_degree, angular_degree, alpha, rel_tol)?;
    disc_integral(g, alpha, &spec)
}

/// Normalised `p`-th circular mean `(∫_0^{2pi} |g(r e^{i theta})|^p
/// dtheta/(2pi))`, so the constant 1 gives 1; trapezoid rule on `n` nodes.
pub fn circle_mean<G>(g: G, p: f64, r: f64, n: usize) -> f64
where
    G: Fn(Complex64) -> Complex64,
{
    let inv_n = 1.0 / n as f64;
    let mut acc = KahanSum::new();
    for j in 0..n {
        let u = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 * inv_n);
        acc.add(pow_modulus(g(u), p));
    }
    acc.value() * inv_n
}

/// `|z|^p` avoiding a `powf` for the ubiquitous exponents 1 and 2.
#[inline]
pub fn pow_modulus(z: Complex64, p: f64) -> f64 {
    let m2 = z.norm_sqr();
    if p == 2.0 {
        m2
    } else if p == 1.0 {
        m2.sqrt()
    } else {
        m2.powf(0.5 * p)
    }
}

/// The `n` evaluation points `e^{2 pi i j / n}` of the boundary trapezoid
/// rule.
pub fn unit_circle_nodes(n: usize) -> impl Iterator<Item = Complex64> {
    let inv_n = 1.0 / n as f64;
    (0..n).map(move |j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 * inv_n))
}

/// Trapezoid approximation of the boundary pairing `∫_T f conj(g) dm` on `n`
/// uniform nodes; geometric convergence for integrands analytic across `T`.
pub fn boundary_pairing_n<F, G>(f: F, g: G, n: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for xi in unit_circle_nodes(n) {
        let v = f(xi) * g(xi).conj();
        re.add(v.re);
        im.add(v.im);
    }
    let inv_n = 1.0 / n as f64;
    Complex64::new(re.value() * inv_n, im.value() * inv_n)
}

/// Boundary pairing with doubling until two successive values agree to
/// `rel_tol` relative to `max(|value|, 1)`.
///
/// `degree_hint` is the total polynomial-like degree of `f conj(g)`; the
/// rule starts at the smallest power of two at least `64 * max(1, hint)`.
pub fn boundary_pairing_auto<F, G>(
    f: F,
    g: G,
    degree_hint: usize,
    rel_tol: f64,
) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let mut n = (64 * degree_hint.max(1)).next_power_of_two();
    let mut prev = boundary_pairing_n(&f, &g, n);
    const MAX_N: usize = 1 << 21;
    while n <= MAX_N {
        n *= 2;
        let cur = boundary_pairing_n(&f, &g, n);
        let err = (cur - prev).norm();
        if err <= rel_tol * cur.norm().max(1.0) {
            return Ok((cur, err));
        }
        prev = cur;
    }
    Err(Error::NoConverge {
        estimate: f64::NAN,
        refinements: (MAX_N.trailing_zeros()) as u32,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;
    use approx::assert_relative_eq;

    #[test]
    fn one_point_rule_is_midpoint() {
        let rule = gauss_jacobi_nodes(0.0, 1).unwrap();
        assert_relative_eq!(rule.nodes[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn two_point_rule_is_gauss_legendre() {
        let rule = gauss_jacobi_nodes(0.0, 2).unwrap();
        let d = 1.0 / (2.0 * 3.0f64.sqrt());
        assert_relative_eq!(rule.nodes[0], 0.5 - d, epsilon = 1e-14);
        assert_relative_eq!(rule.nodes[1], 0.5 + d, epsilon = 1e-14);
        assert_relative_eq!(rule.weights[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(rule.weights[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn moments_reproduced_exactly() {
        // ∫_0^1 (1-t)^alpha t^j dt = B(j+1, alpha+1) for j <= 2m-1.
        for &alpha in &[-0.9, -0.5, -0.25, 0.0, 0.5, 1.0, 2.7] {
            for &m in &[1usize, 2, 3, 5, 8, 13, 21, 40] {
                let rule = gauss_jacobi_nodes(alpha, m).unwrap();
                assert!(rule.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
                assert!(rule.weights.iter().all(|&w| w > 0.0));
                for j in 0..2 * m {
                    let mut acc = KahanSum::new();
                    for i in 0..m {
                        acc.add(rule.weights[i] * rule.nodes[i].powi(j as i32));
                    }
                    let exact = beta(j as f64 + 1.0, alpha + 1.0);
                    // t^j amplifies node rounding by a factor ~j, so the
                    // attainable accuracy of the j-th moment scales with j.
                    let tol = 1e-14 * (1.0 + 0.2 * j as f64);
                    assert!(
                        (acc.value() - exact).abs() <= tol * exact.max(1.0),
                        "alpha={alpha} m={m} j={j}: {} vs {}",
                        acc.value(),
                        exact
                    );
                }
            }
        }
    }

    #[test]
    fn node_complements_are_consistent() {
        let rule = gauss_jacobi_nodes(-0.5, 200).unwrap();
        for i in 0..200 {
            assert!((rule.nodes[i] + rule.complements[i] - 1.0).abs() < 1e-15);
        }
    }

    fn quick_spec(alpha: f64) -> QuadratureSpec {
        QuadratureSpec::new(16, 64, alpha, 1e-12, 8).unwrap()
    }

    #[test]
    fn disc_integral_of_constants_and_powers() {
        let r = disc_integral(|_| 1.0, 0.0, &quick_spec(0.0)).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 1.0, epsilon = 1e-13);

        let r = disc_integral(|_| 1.0, 1.0, &quick_spec(1.0)).unwrap();
        assert_relative_eq!(r.value, 0.5, epsilon = 1e-13);

        let r = disc_integral(|pt| pt.abs_sq, 0.0, &quick_spec(0.0)).unwrap();
        assert_relative_eq!(r.value, 0.5, epsilon = 1e-13);
    }

    #[test]
    fn disc_integral_polynomial_exactness() {
        // ∫_D |u|^{2j} (1-|u|^2)^alpha dA = B(j+1, alpha+1).
        for &alpha in &[-0.5, 0.0, 1.0] {
            let spec = QuadratureSpec::new(24, 64, alpha, 1e-13, 4).unwrap();
            for j in 0..=20u32 {
                let r = disc_integral(|pt| pt.abs_sq.powi(j as i32), alpha, &spec).unwrap();
                let exact = beta(j as f64 + 1.0, alpha + 1.0);
                assert!(
                    (r.value - exact).abs() <= 1e-14 * exact.max(1.0),
                    "alpha={alpha} j={j}"
                );
            }
        }
    }

    #[test]
    fn refine_until_derivative_energy() {
        // ∫_D |(z^8)'|^2 dA = 8.
        let r = refine_until(
            |pt| 64.0 * pt.abs_sq.powi(7),
            0.0,
            1e-12,
            16,
            0,
        )
        .unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 8.0, max_relative = 1e-10);
        assert!(r.error_estimate <= 1e-10 * 8.0);
    }

    #[test]
    fn disc_integral_flags_nonconvergence() {
        // A genuinely rough integrand with a 1-refinement budget and a
        // hopeless tolerance.
        let spec = QuadratureSpec::new(4, 8, 0.0, 1e-300, 1).unwrap();
        let r = disc_integral(|pt| (50.0 * pt.abs_sq).sin().abs(), 0.0, &spec).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn circle_mean_examples() {
        // |z^3|^p on radius r is r^{3p}.
        let g = |u: Complex64| u * u * u;
        assert_relative_eq!(circle_mean(g, 2.0, 0.5, 64), 0.5f64.powi(6), epsilon = 1e-14);
        assert_relative_eq!(
            circle_mean(|_| Complex64::new(-3.0, 4.0), 2.0, 0.7, 16),
            25.0,
            epsilon = 1e-12
        );
        // Value at the centre for r = 0.
        assert_relative_eq!(
            circle_mean(|u| Complex64::new(1.0, 0.0) + u, 2.0, 0.0, 8),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn circle_mean_is_nondecreasing_in_radius() {
        // Hadamard: r -> mean of |g|^p is nondecreasing for analytic g.
        let cases: Vec<(Box<dyn Fn(Complex64) -> Complex64>, f64)> = vec![
            (Box::new(|u: Complex64| u * u * u - 2.0 * u + Complex64::new(0.5, 1.0)), 2.0),
            (Box::new(|u: Complex64| (Complex64::new(0.3, -0.2) - u)
                / (1.0 - Complex64::new(0.3, 0.2) * u)), 1.5),
            (Box::new(|u: Complex64| Complex64::new(1.0, 0.0) / (1.0 - 0.7 * u)), 0.75),
        ];
        for (g, p) in cases {
            let mut prev = -1.0;
            for k in 0..32 {
                let r = k as f64 / 32.0;
                let mean = circle_mean(&g, p, r, 512);
                assert!(mean >= prev - 1e-10, "p={p} r={r}: {mean} < {prev}");
                prev = mean;
            }
        }
    }

    #[test]
    fn trapezoid_kills_low_harmonics() {
        // Mean of z^k over n nodes is 0 for 0 < k < n (angular exactness).
        for k in 1..8u32 {
            let mean = boundary_pairing_n(
                |xi| xi.powu(k),
                |_| Complex64::new(1.0, 0.0),
                64,
            );
            assert!(mean.norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn boundary_pairing_orthonormal_monomials() {
        let one = |_: Complex64| Complex64::new(1.0, 0.0);
        let z = |xi: Complex64| xi;
        assert!((boundary_pairing_n(z, z, 32).re - 1.0).abs() < 1e-14);
        assert!(boundary_pairing_n(z, one, 32).norm() < 1e-14);
        // <k_a, k_a> = 1/(1-|a|^2) = 4/3 for a = 0.5.
        let k = |xi: Complex64| Complex64::new(1.0, 0.0) / (1.0 - 0.5 * xi);
        let (v, _) = boundary_pairing_auto(k, k, 1, 1e-13).unwrap();
        assert_relative_eq!(v.re, 4.0 / 3.0, epsilon = 1e-12);
        assert!(v.im.abs() < 1e-13);
    }

    #[test]
    fn doubling_estimate_bounds_true_error() {
        // Closed form: ∫_D |u|^2 (1-|u|^2)^0.5 dA = B(2, 1.5).
        let spec = QuadratureSpec::new(2, 4, 0.5, 1e-13, 10).unwrap();
        let r = disc_integral(|pt| pt.abs_sq, 0.5, &spec).unwrap();
        let exact = beta(2.0, 1.5);
        assert!(r.converged);
        assert!((r.value - exact).abs() <= r.error_estimate.max(1e-15));
    }

    #[test]
    fn results_identical_across_thread_counts() {
        let run = || {
            let spec = QuadratureSpec::new(48, 128, -0.25, 1e-12, 6).unwrap();
            disc_integral(
                |pt| (1.0 + pt.u.re + 0.5 * pt.u.im * pt.u.re).abs().powf(1.3),
                -0.25,
                &spec,
            )
            .unwrap()
            .value
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(2)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(single.to_bits(), multi.to_bits());
    }
}
