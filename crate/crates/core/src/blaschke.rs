//! Finite Blaschke products: evaluation, derivative jets, and the pointwise
//! quantities (Schwarz-Pick deviation ratio, partial-product sums, the
//! second-derivative majorant) that the inequality checkers are built from.
//!
//! A product of degree `n` is `B(z) = prod_k b_{z_k}(z)` with elementary
//! factors `b_w(z) = (w - z) / (1 - conj(w) z)`, `|z_k| < 1`. The empty
//! product is the constant 1. No unimodular normalisation is applied to the
//! factors; every quantity computed here depends only on moduli or is used
//! in sign-insensitive combinations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticFn, JetValue};
use crate::{Error, Result};

/// Tolerance for accepting points on the unit circle as in-domain.
pub const DOMAIN_TOL: f64 = 1e-9;

/// Switch point for the stabilised deviation-ratio evaluation: once
/// `|B(u)|^2` exceeds this, `1 - |B(u)|^2` has lost enough leading digits
/// that the exact partial-product sum is used instead.
const SUM_PATH_THRESHOLD_SQ: f64 = 0.8;

#[derive(Serialize, Deserialize)]
struct BlaschkeJson {
    zeros: Vec<[f64; 2]>,
}

/// A finite Blaschke product, stored as its ordered multiset of zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeJson", into = "BlaschkeJson")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl TryFrom<BlaschkeJson> for BlaschkeProduct {
    type Error = Error;
    fn try_from(raw: BlaschkeJson) -> Result<Self> {
        BlaschkeProduct::new(
            raw.zeros
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<BlaschkeProduct> for BlaschkeJson {
    fn from(b: BlaschkeProduct) -> Self {
        BlaschkeJson {
            zeros: b.zeros.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl BlaschkeProduct {
    /// Builds a product from its zeros; every zero must satisfy `|z| < 1`
    /// strictly and have finite components.
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        for (k, z) in zeros.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Param(format!("zero #{k} is not finite")));
            }
            if z.norm_sqr() >= 1.0 {
                return Err(Error::Param(format!(
                    "zero #{k} = {z} lies outside the open unit disc"
                )));
            }
        }
        Ok(BlaschkeProduct { zeros })
    }

    /// The empty product, i.e. the constant function 1.
    pub fn one() -> Self {
        BlaschkeProduct { zeros: Vec::new() }
    }

    /// `n` zeros at the origin; the product is `(-z)^n`.
    pub fn monomial(n: usize) -> Self {
        BlaschkeProduct {
            zeros: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// The power `b_{-r}^n` of a single real factor, `0 <= r < 1`.
    pub fn mobius_power(n: usize, r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Param(format!("mobius radius {r} not in [0,1)")));
        }
        Ok(BlaschkeProduct {
            zeros: vec![Complex64::new(-r, 0.0); n],
        })
    }

    /// `n` zeros drawn i.i.d. uniformly from the disc of radius
    /// `max_radius < 1`; deterministic for a fixed seed.
    pub fn random(n: usize, max_radius: f64, seed: u64) -> Result<Self> {
        if !(max_radius > 0.0 && max_radius < 1.0) {
            return Err(Error::Param(format!(
                "max_radius {max_radius} not in (0,1)"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zeros = (0..n)
            .map(|_| {
                let r = max_radius * rng.gen::<f64>().sqrt();
                let theta = std::f64::consts::TAU * rng.gen::<f64>();
                Complex64::from_polar(r, theta)
            })
            .collect();
        Ok(BlaschkeProduct { zeros })
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// Number of zeros away from the origin; the angular oscillation of
    /// `|B|` and its derivatives on circles is governed by these.
    pub fn nonzero_count(&self) -> usize {
        self.zeros.iter().filter(|z| z.norm_sqr() > 0.0).count()
    }

    fn check_closed_disc(&self, u: Complex64) -> Result<()> {
        if !u.re.is_finite() || !u.im.is_finite() {
            return Err(Error::Domain("evaluation point is not finite".into()));
        }
        if u.norm() > 1.0 + DOMAIN_TOL {
            return Err(Error::Domain(format!(
                "|u| = {} exceeds the closed unit disc",
                u.norm()
            )));
        }
        Ok(())
    }

    /// Evaluates `B(u)` for `|u| <= 1` (up to [`DOMAIN_TOL`]).
    pub fn eval(&self, u: Complex64) -> Result<Complex64> {
        self.check_closed_disc(u)?;
        Ok(self.eval_unchecked(u))
    }

    pub(crate) fn eval_unchecked(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for z in &self.zeros {
            acc *= (z - u) / (1.0 - z.conj() * u);
        }
        acc
    }

    /// Value and derivatives up to `order <= 3` via the running-product
    /// recurrence; `O(n * order)` per point and well defined at zeros of `B`.
    pub fn jet(&self, u: Complex64, order: usize) -> Result<JetValue> {
        self.check_closed_disc(u)?;
        Ok(self.jet_unchecked(u, order))
    }

    pub(crate) fn jet_unchecked(&self, u: Complex64, order: usize) -> JetValue {
        debug_assert!(order <= 3);
        // Powers of a single factor (monomial and Moebius-power families)
        // take the chain-rule shortcut; sweeps push their degree into the
        // hundreds, where the running product is needlessly O(n) per point.
        if self.zeros.len() >= 4 && self.zeros.iter().all(|z| *z == self.zeros[0]) {
            return power_jet(self.zeros[0], u, self.zeros.len(), order);
        }
        let mut acc = JetValue::constant(Complex64::new(1.0, 0.0));
        for z in &self.zeros {
            acc = acc.mul(&factor_jet(*z, u, order), order);
        }
        acc
    }

    /// The Schwarz-Pick deviation ratio `(1 - |B(u)|^2) / (1 - |u|^2)`,
    /// `|u| < 1`.
    ///
    /// Near the boundary of the image (`|B(u)|` close to 1) the numerator is
    /// replaced by its exact telescoped form, the partial-product sum, which
    /// evaluates the ratio without cancellation. The ratio dominates
    /// `|B'(u)|` and extends continuously to `|B'(xi)|` on the circle; see
    /// [`BlaschkeProduct::boundary_deviation`].
    pub fn deviation_ratio(&self, u: Complex64) -> Result<f64> {
        if u.norm_sqr() >= 1.0 {
            return Err(Error::Domain(format!(
                "deviation ratio needs |u| < 1, got |u| = {}; use boundary_deviation on the circle",
                u.norm()
            )));
        }
        Ok(self.deviation_ratio_impl(u, 1.0 - u.norm_sqr()))
    }

    /// Deviation ratio with the caller-supplied value of `1 - |u|^2`.
    ///
    /// Quadrature grids know `1 - |u|^2` exactly from the radial node; using
    /// it avoids recomputing the complement from `u` near the boundary.
    pub(crate) fn deviation_ratio_impl(&self, u: Complex64, one_minus_usq: f64) -> f64 {
        let b_sq = self.eval_unchecked(u).norm_sqr();
        if b_sq > SUM_PATH_THRESHOLD_SQ {
            self.partial_product_sum_unchecked(u)
        } else {
            (1.0 - b_sq) / one_minus_usq
        }
    }

    /// The continuous boundary extension of the deviation ratio: `|B'(xi)|`
    /// for `|xi| = 1`.
    pub fn boundary_deviation(&self, xi: Complex64) -> Result<f64> {
        if (xi.norm() - 1.0).abs() > DOMAIN_TOL {
            return Err(Error::Domain(format!(
                "boundary deviation needs |xi| = 1, got {}",
                xi.norm()
            )));
        }
        Ok(self.jet_unchecked(xi, 1).v1.norm())
    }

    /// The telescoped sum `sum_k |B_k(u)|^2 (1-|z_k|^2)/|1 - conj(z_k) u|^2`
    /// with `B_k = prod_{l<k} b_{z_l}`, `B_1 = 1`.
    ///
    /// Algebraically identical to the deviation ratio for every `|u| < 1`.
    pub fn partial_product_sum(&self, u: Complex64) -> Result<f64> {
        if u.norm_sqr() >= 1.0 {
            return Err(Error::Domain(format!(
                "partial-product sum needs |u| < 1, got |u| = {}",
                u.norm()
            )));
        }
        Ok(self.partial_product_sum_unchecked(u))
    }

    fn partial_product_sum_unchecked(&self, u: Complex64) -> f64 {
        let mut partial_sq = 1.0; // |B_k(u)|^2, starts at |B_1|^2 = 1
        let mut sum = 0.0;
        for z in &self.zeros {
            let den = (1.0 - z.conj() * u).norm_sqr();
            sum += partial_sq * (1.0 - z.norm_sqr()) / den;
            partial_sq *= (z - u).norm_sqr() / den;
        }
        sum
    }

    /// Right-hand side of the second-derivative majorant
    ///
    /// ```text
    /// sum_j (1-|z_j|^2)/|1 - conj(z_j) u|^3  +  ((1-|B(u)|)/(1-|u|))^2 ,
    /// ```
    ///
    /// which bounds `|B''(u)|` up to an absolute constant (8 is asserted in
    /// the test suite, with generous room).
    pub fn second_derivative_bound(&self, u: Complex64) -> Result<f64> {
        let usq = u.norm_sqr();
        if usq >= 1.0 {
            return Err(Error::Domain(format!(
                "second-derivative bound needs |u| < 1, got |u| = {}",
                u.norm()
            )));
        }
        let mut sum = 0.0;
        for z in &self.zeros {
            let den = (1.0 - z.conj() * u).norm();
            sum += (1.0 - z.norm_sqr()) / (den * den * den);
        }
        // (1-|B|)/(1-|u|) = ratio * (1+|u|)/(1+|B|), cancellation-free.
        let ratio = self.deviation_ratio_impl(u, 1.0 - usq);
        let b_abs = self.eval_unchecked(u).norm();
        let first_order = ratio * (1.0 + u.norm()) / (1.0 + b_abs);
        Ok(sum + first_order * first_order)
    }
}

impl AnalyticFn for BlaschkeProduct {
    fn jet(&self, u: Complex64, order: usize) -> JetValue {
        self.jet_unchecked(u, order)
    }
    fn angular_degree(&self) -> usize {
        self.nonzero_count()
    }
    fn total_degree(&self) -> usize {
        self.degree()
    }
}

/// Jet of `b_w^n` by the chain rule on the factor jet.
fn power_jet(w: Complex64, u: Complex64, n: usize, order: usize) -> JetValue {
    let b = factor_jet(w, u, order);
    let nf = n as f64;
    let p = |k: usize| b.v0.powu((n - k) as u32);
    let mut out = JetValue::constant(p(0));
    if order >= 1 {
        out.v1 = nf * p(1) * b.v1;
    }
    if order >= 2 {
        out.v2 = nf * (nf - 1.0) * p(2) * b.v1 * b.v1 + nf * p(1) * b.v2;
    }
    if order >= 3 {
        out.v3 = nf * (nf - 1.0) * (nf - 2.0) * p(3) * b.v1 * b.v1 * b.v1
            + 3.0 * nf * (nf - 1.0) * p(2) * b.v1 * b.v2
            + nf * p(1) * b.v3;
    }
    out
}

/// Jet of a single factor `b_w` at `u`: the derivatives are
/// `b_w^(k)(u) = k! conj(w)^(k-1) (|w|^2 - 1) / (1 - conj(w) u)^(k+1)`.
fn factor_jet(w: Complex64, u: Complex64, order: usize) -> JetValue {
    let wc = w.conj();
    let d = 1.0 / (1.0 - wc * u);
    let c = w.norm_sqr() - 1.0;
    let mut jet = JetValue::constant((w - u) * d);
    if order >= 1 {
        jet.v1 = c * d * d;
    }
    if order >= 2 {
        jet.v2 = 2.0 * wc * c * d * d * d;
    }
    if order >= 3 {
        jet.v3 = 6.0 * wc * wc * c * d * d * d * d;
    }
    jet
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_known_values() {
        let b = BlaschkeProduct::monomial(1);
        assert_relative_eq!(b.eval(c(0.5, 0.0)).unwrap().re, -0.5, epsilon = 1e-15);

        let b = BlaschkeProduct::new(vec![c(0.5, 0.0)]).unwrap();
        assert!(b.eval(c(0.5, 0.0)).unwrap().norm() < 1e-15);

        let b = BlaschkeProduct::monomial(2);
        assert_relative_eq!(b.eval(c(0.5, 0.0)).unwrap().re, 0.25, epsilon = 1e-15);

        assert_relative_eq!(
            BlaschkeProduct::one().eval(c(0.3, 0.1)).unwrap().re,
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn eval_rejects_points_outside() {
        let b = BlaschkeProduct::monomial(1);
        assert!(b.eval(c(1.1, 0.0)).is_err());
        assert!(b.eval(c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn jet_of_square() {
        // zeros (0,0): B = z^2 with jet (0.25, 1, 2, 0) at u = 0.5.
        let b = BlaschkeProduct::monomial(2);
        let j = b.jet(c(0.5, 0.0), 3).unwrap();
        assert_relative_eq!(j.v0.re, 0.25, epsilon = 1e-15);
        assert_relative_eq!(j.v1.re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(j.v2.re, 2.0, epsilon = 1e-15);
        assert!(j.v3.norm() < 1e-15);
    }

    #[test]
    fn jet_first_derivative_of_single_factor() {
        // b'_w(0) = |w|^2 - 1 = -0.75 for w = 0.5.
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0)]).unwrap();
        let j = b.jet(c(0.0, 0.0), 1).unwrap();
        assert_relative_eq!(j.v1.re, -0.75, epsilon = 1e-15);
        assert!(j.v1.im.abs() < 1e-15);
    }

    #[test]
    fn jet_matches_richardson_differences() {
        let b = BlaschkeProduct::random(8, 0.9, 42).unwrap();
        let u = c(0.3, 0.1);
        let j = b.jet(u, 3).unwrap();
        for k in 1..=3usize {
            let fd = richardson_derivative(&b, u, k);
            assert!(
                (j.derivative(k) - fd).norm() <= 1e-6 * fd.norm().max(1.0),
                "order {k}: jet {} vs fd {}",
                j.derivative(k),
                fd
            );
        }
    }

    /// Central finite differences (second-order) with one Richardson step;
    /// the independent oracle for the jet recurrence. The third-derivative
    /// stencil uses a larger step to keep roundoff below the tolerance.
    fn richardson_derivative(b: &BlaschkeProduct, u: Complex64, k: usize) -> Complex64 {
        let d = |h: f64| central_diff(b, u, k, h);
        let h = if k == 3 { 4e-3 } else { 1e-3 };
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    }

    fn central_diff(b: &BlaschkeProduct, u: Complex64, k: usize, h: f64) -> Complex64 {
        let f = |x: Complex64| b.eval_unchecked(x);
        let hh = Complex64::new(h, 0.0);
        match k {
            1 => (f(u + hh) - f(u - hh)) / (2.0 * h),
            2 => (f(u + hh) - 2.0 * f(u) + f(u - hh)) / (h * h),
            3 => {
                (f(u + 2.0 * hh) - 2.0 * f(u + hh) + 2.0 * f(u - hh) - f(u - 2.0 * hh))
                    / (2.0 * h * h * h)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn power_shortcut_matches_running_product() {
        // Same zero repeated takes the chain-rule path; perturbing one zero
        // forces the generic product. Both must agree.
        let w = c(0.37, -0.21);
        let repeated = BlaschkeProduct::new(vec![w; 9]).unwrap();
        let mut zeros = vec![w; 9];
        zeros[4] = c(0.37, -0.21000000000001);
        let generic = BlaschkeProduct::new(zeros).unwrap();
        let u = c(0.52, 0.33);
        let a = repeated.jet_unchecked(u, 3);
        let b = generic.jet_unchecked(u, 3);
        for k in 0..=3 {
            let (x, y) = (a.derivative(k), b.derivative(k));
            assert!((x - y).norm() <= 1e-6 * y.norm().max(1.0), "order {k}");
        }
        // And exactly against an explicit Leibniz product of the same jet.
        let mut acc = JetValue::constant(c(1.0, 0.0));
        for _ in 0..9 {
            acc = acc.mul(&factor_jet(w, u, 3), 3);
        }
        for k in 0..=3 {
            let (x, y) = (a.derivative(k), acc.derivative(k));
            assert!((x - y).norm() <= 1e-12 * y.norm().max(1e-12), "order {k}");
        }
    }

    #[test]
    fn deviation_ratio_known_values() {
        // Single zero at 0: ratio is identically 1.
        let b = BlaschkeProduct::monomial(1);
        assert_relative_eq!(b.deviation_ratio(c(0.7, 0.0)).unwrap(), 1.0, epsilon = 1e-14);

        // z^2 at real u = r: (1 - r^4)/(1 - r^2) = 1 + r^2.
        let b = BlaschkeProduct::monomial(2);
        assert_relative_eq!(
            b.deviation_ratio(c(0.4, 0.0)).unwrap(),
            1.16,
            epsilon = 1e-14
        );

        // Degree 1: Schwarz-Pick is an equality with |b'|.
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0)]).unwrap();
        let expected = (1.0 - 0.25) / ((1.0 - 0.1) * (1.0 - 0.1));
        assert_relative_eq!(
            b.deviation_ratio(c(0.2, 0.0)).unwrap(),
            expected,
            epsilon = 1e-14
        );
    }

    #[test]
    fn deviation_ratio_rejects_boundary() {
        let b = BlaschkeProduct::monomial(2);
        assert!(b.deviation_ratio(c(1.0, 0.0)).is_err());
        // Boundary limit is |B'|: for z^2 at xi=1 that is 2.
        assert_relative_eq!(
            b.boundary_deviation(c(1.0, 0.0)).unwrap(),
            2.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn partial_product_sum_examples() {
        let b = BlaschkeProduct::new(vec![c(0.3, -0.4)]).unwrap();
        // Single term with |B_1| = 1: equals the deviation ratio everywhere.
        let u = c(0.2, 0.55);
        assert_relative_eq!(
            b.partial_product_sum(u).unwrap(),
            b.deviation_ratio(u).unwrap(),
            epsilon = 1e-15
        );

        let b = BlaschkeProduct::monomial(2);
        assert_relative_eq!(
            b.partial_product_sum(c(0.35, 0.0)).unwrap(),
            1.0 + 0.35 * 0.35,
            epsilon = 1e-14
        );
    }

    #[test]
    fn second_derivative_bound_examples() {
        // z^2 at 0: sum = 1 + 1, ratio term = 1, bound 3; |B''| = 2 <= 3.
        let b = BlaschkeProduct::monomial(2);
        let bound = b.second_derivative_bound(c(0.0, 0.0)).unwrap();
        assert_relative_eq!(bound, 3.0, epsilon = 1e-14);
        assert!(b.jet(c(0.0, 0.0), 2).unwrap().v2.norm() <= bound);

        // Degree 1 at the centre of b_0: bound 2, B'' = 0.
        let b = BlaschkeProduct::monomial(1);
        assert_relative_eq!(
            b.second_derivative_bound(c(0.0, 0.0)).unwrap(),
            2.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn second_derivative_bound_majorises_with_constant_8() {
        let b = BlaschkeProduct::random(12, 0.9, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut max_ratio: f64 = 0.0;
        for _ in 0..100 {
            let r = 0.999 * rng.gen::<f64>().sqrt();
            let u = Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>());
            let second = b.jet_unchecked(u, 2).v2.norm();
            let bound = b.second_derivative_bound(u).unwrap();
            max_ratio = max_ratio.max(second / bound);
            assert!(second <= 8.0 * bound, "ratio {} at u = {}", second / bound, u);
        }
        // Empirically the ratio stays well below the asserted constant.
        assert!(max_ratio < 8.0);
    }

    #[test]
    fn random_is_deterministic_and_supported() {
        let a = BlaschkeProduct::random(50, 0.95, 3).unwrap();
        let b = BlaschkeProduct::random(50, 0.95, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.zeros().iter().all(|z| z.norm() < 0.95));
        assert_eq!(BlaschkeProduct::random(0, 0.5, 1).unwrap().degree(), 0);
        assert!(BlaschkeProduct::random(3, 1.0, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let b = BlaschkeProduct::random(5, 0.8, 11).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.contains("\"zeros\""));
        let back: BlaschkeProduct = serde_json::from_str(&text).unwrap();
        assert_eq!(b, back);
        // Zeros outside the disc are rejected at parse time.
        assert!(serde_json::from_str::<BlaschkeProduct>("{\"zeros\":[[1.5,0.0]]}").is_err());
    }

    #[test]
    fn unimodular_on_boundary_grid() {
        let b = BlaschkeProduct::random(64, 0.95, 5).unwrap();
        for j in 0..1024 {
            let xi = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 1024.0);
            assert!(
                (b.eval_unchecked(xi).norm() - 1.0).abs() <= 1e-10,
                "at node {j}"
            );
        }
    }

    prop_compose! {
        fn arb_zero(max_r: f64)(r in 0.0..1.0f64, t in 0.0..std::f64::consts::TAU) -> Complex64 {
            Complex64::from_polar(max_r * r.sqrt(), t)
        }
    }

    prop_compose! {
        fn arb_product(max_deg: usize)(zeros in prop::collection::vec(arb_zero(0.95), 0..=max_deg)) -> BlaschkeProduct {
            BlaschkeProduct::new(zeros).unwrap()
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn partial_product_sum_equals_deviation_ratio(
            b in arb_product(64),
            r in 0.0..0.999f64,
            t in 0.0..std::f64::consts::TAU,
        ) {
            let u = Complex64::from_polar(r, t);
            let sum = b.partial_product_sum(u).unwrap();
            let ratio = b.deviation_ratio(u).unwrap();
            prop_assert!((sum - ratio).abs() <= 1e-12 * sum.abs().max(1e-300));
        }

        #[test]
        fn schwarz_pick_inequality(
            b in arb_product(16),
            r in 0.0..0.99f64,
            t in 0.0..std::f64::consts::TAU,
        ) {
            let u = Complex64::from_polar(r, t);
            let ratio = b.deviation_ratio(u).unwrap();
            let deriv = b.jet_unchecked(u, 1).v1.norm();
            prop_assert!(deriv <= ratio * (1.0 + 1e-12));
            if b.degree() == 1 {
                prop_assert!((deriv - ratio).abs() <= 1e-12 * ratio.max(1e-300));
            }
        }

        #[test]
        fn factor_comparison_bounds(
            w in arb_zero(0.97),
            r in 0.0..0.995f64,
            t in 0.0..std::f64::consts::TAU,
        ) {
            // (1-|w|^2)/(2|1-conj(w)u|^2) <= (1-|b_w(u)|)/(1-|u|) <= 2(1-|w|^2)/|1-conj(w)u|^2
            let u = Complex64::from_polar(r, t);
            let den = (1.0 - w.conj() * u).norm_sqr();
            let base = (1.0 - w.norm_sqr()) / den;
            let b = BlaschkeProduct::new(vec![w]).unwrap();
            let mid = (1.0 - b.eval_unchecked(u).norm()) / (1.0 - u.norm());
            prop_assert!(0.5 * base <= mid * (1.0 + 1e-10));
            prop_assert!(mid <= 2.0 * base * (1.0 + 1e-10));
        }

        #[test]
        fn boundary_modulus_is_one(b in arb_product(32), t in 0.0..std::f64::consts::TAU) {
            let xi = Complex64::from_polar(1.0, t);
            prop_assert!((b.eval(xi).unwrap().norm() - 1.0).abs() <= 1e-10);
        }
    }
}
