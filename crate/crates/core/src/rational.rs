//! Rational functions without poles in the closed unit disc, their model
//! spaces, reproducing kernels, and boundary pairings.
//!
//! A degree-`n` element is `f = P / Q` with `deg P <= n` and `Q(z) =
//! prod_k (1 - z/mu_k)` over the finite poles `|mu_k| > 1`; poles at
//! infinity are an explicit count, so `#finite poles + #infinite poles = n`.
//! If the poles of `f` are `1/conj(s_1), ..., 1/conj(s_n)` (with poles at
//! infinity reflected to 0), then `f` lies in the model space `K_{z B_s}`
//! where `B_s` is the Blaschke product with zeros `s_k`; that correspondence
//! is [`RationalFunction::to_model_space`], and all pairings against the
//! space's reproducing kernels go through boundary quadrature.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticFn, JetValue};
use crate::blaschke::{BlaschkeProduct, DOMAIN_TOL};
use crate::quadrature::{boundary_pairing_auto, pow_modulus, unit_circle_nodes, KahanSum};
use crate::{Error, Result};

/// Relative tolerance used when validating model-space membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Serialize, Deserialize)]
struct RationalJson {
    numerator: Vec<[f64; 2]>,
    poles: Vec<[f64; 2]>,
    poles_at_infinity: usize,
}

/// A rational function `P(z) / prod_k (1 - z/mu_k)` with all poles outside
/// the closed unit disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalJson", into = "RationalJson")]
pub struct RationalFunction {
    /// Coefficients of `P`, constant first.
    numerator: Vec<Complex64>,
    /// Finite poles `mu_k`, `|mu_k| > 1`.
    poles: Vec<Complex64>,
    poles_at_infinity: usize,
}

impl TryFrom<RationalJson> for RationalFunction {
    type Error = Error;
    fn try_from(raw: RationalJson) -> Result<Self> {
        RationalFunction::new(
            raw.numerator
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
            raw.poles
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
            raw.poles_at_infinity,
        )
    }
}

impl From<RationalFunction> for RationalJson {
    fn from(f: RationalFunction) -> Self {
        RationalJson {
            numerator: f.numerator.iter().map(|c| [c.re, c.im]).collect(),
            poles: f.poles.iter().map(|c| [c.re, c.im]).collect(),
            poles_at_infinity: f.poles_at_infinity,
        }
    }
}

impl RationalFunction {
    /// Builds `P / prod (1 - z/mu_k)`; every finite pole must satisfy
    /// `|mu| > 1` strictly and the numerator degree may not exceed the total
    /// pole count.
    pub fn new(
        numerator: Vec<Complex64>,
        poles: Vec<Complex64>,
        poles_at_infinity: usize,
    ) -> Result<Self> {
        for (k, mu) in poles.iter().enumerate() {
            if !mu.re.is_finite() || !mu.im.is_finite() {
                return Err(Error::Param(format!("pole #{k} is not finite")));
            }
            if mu.norm_sqr() <= 1.0 {
                return Err(Error::Param(format!(
                    "pole #{k} = {mu} lies in the closed unit disc"
                )));
            }
        }
        if numerator
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Param("numerator coefficient is not finite".into()));
        }
        let mut numerator = numerator;
        while numerator.len() > 1 && numerator.last() == Some(&Complex64::new(0.0, 0.0)) {
            numerator.pop();
        }
        if numerator.is_empty() {
            numerator.push(Complex64::new(0.0, 0.0));
        }
        let degree = poles.len() + poles_at_infinity;
        if numerator.len() > degree + 1 {
            return Err(Error::Param(format!(
                "numerator degree {} exceeds total degree {degree}",
                numerator.len() - 1
            )));
        }
        Ok(RationalFunction {
            numerator,
            poles,
            poles_at_infinity,
        })
    }

    /// The constant function `c` (degree 0).
    pub fn constant(c: Complex64) -> Self {
        RationalFunction {
            numerator: vec![c],
            poles: Vec::new(),
            poles_at_infinity: 0,
        }
    }

    /// A polynomial, with one pole at infinity per degree.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        let n = coeffs.len().saturating_sub(1);
        RationalFunction::new(coeffs, Vec::new(), n)
    }

    /// Degree as a rational function: the total pole count.
    pub fn degree(&self) -> usize {
        self.poles.len() + self.poles_at_infinity
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.numerator
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn poles_at_infinity(&self) -> usize {
        self.poles_at_infinity
    }

    /// Value and derivatives up to `order <= 3` on the closed disc, by
    /// Horner on the numerator and Leibniz over the pole factors.
    pub fn jet(&self, u: Complex64, order: usize) -> Result<JetValue> {
        if u.norm() > 1.0 + DOMAIN_TOL {
            return Err(Error::Domain(format!(
                "|u| = {} exceeds the closed unit disc",
                u.norm()
            )));
        }
        Ok(self.jet_unchecked(u, order))
    }

    pub(crate) fn jet_unchecked(&self, u: Complex64, order: usize) -> JetValue {
        debug_assert!(order <= 3);
        // Horner with derivative accumulation: p_k holds P^(k)(u) / k!.
        let zero = Complex64::new(0.0, 0.0);
        let (mut p0, mut p1, mut p2, mut p3) = (zero, zero, zero, zero);
        for &c in self.numerator.iter().rev() {
            if order >= 3 {
                p3 = p3 * u + p2;
            }
            if order >= 2 {
                p2 = p2 * u + p1;
            }
            if order >= 1 {
                p1 = p1 * u + p0;
            }
            p0 = p0 * u + c;
        }
        let num = JetValue {
            v0: p0,
            v1: p1,
            v2: 2.0 * p2,
            v3: 6.0 * p3,
        };

        if self.poles.is_empty() {
            return num;
        }
        let mut den = JetValue::constant(Complex64::new(1.0, 0.0));
        for mu in &self.poles {
            let inv = 1.0 / mu;
            let factor = JetValue {
                v0: 1.0 - inv * u,
                v1: -inv,
                ..JetValue::default()
            };
            den = den.mul(&factor, order);
        }

        // From P = f Q: f^(k) = (P^(k) - sum_{j<k} C(k,j) f^(j) Q^(k-j)) / Q.
        let inv_q = 1.0 / den.v0;
        let mut out = JetValue::default();
        out.v0 = num.v0 * inv_q;
        if order >= 1 {
            out.v1 = (num.v1 - out.v0 * den.v1) * inv_q;
        }
        if order >= 2 {
            out.v2 = (num.v2 - 2.0 * out.v1 * den.v1 - out.v0 * den.v2) * inv_q;
        }
        if order >= 3 {
            out.v3 =
                (num.v3 - 3.0 * out.v2 * den.v1 - 3.0 * out.v1 * den.v2 - out.v0 * den.v3) * inv_q;
        }
        out
    }

    /// Function value on the closed disc.
    pub fn eval(&self, u: Complex64) -> Result<Complex64> {
        Ok(self.jet(u, 0)?.v0)
    }

    /// The model space containing `f`: `Theta = z * B_s` where the zeros
    /// `s_k` are the reflected poles `1/conj(mu_k)` (0 for each pole at
    /// infinity).
    pub fn to_model_space(&self) -> Result<ModelSpaceTag> {
        let mut sigma: Vec<Complex64> = self.poles.iter().map(|mu| 1.0 / mu.conj()).collect();
        sigma.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(self.poles_at_infinity));
        Ok(ModelSpaceTag::new(BlaschkeProduct::new(sigma)?, 1))
    }
}

impl AnalyticFn for RationalFunction {
    fn jet(&self, u: Complex64, order: usize) -> JetValue {
        self.jet_unchecked(u, order)
    }
    fn angular_degree(&self) -> usize {
        let num_deg = self.numerator.len() - 1;
        // A monomial over no finite poles has radial modulus on circles.
        if self.poles.is_empty()
            && self.numerator.iter().filter(|c| c.norm_sqr() > 0.0).count() <= 1
        {
            return 0;
        }
        num_deg.max(self.poles.len())
    }
    fn total_degree(&self) -> usize {
        (self.numerator.len() - 1) + self.poles.len()
    }
}

/// An inner function `Theta = z^m B` with `B` a finite Blaschke product;
/// names the model space `K_Theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpaceTag {
    blaschke: BlaschkeProduct,
    shift_multiplicity: usize,
}

impl ModelSpaceTag {
    pub fn new(blaschke: BlaschkeProduct, shift_multiplicity: usize) -> Self {
        ModelSpaceTag {
            blaschke,
            shift_multiplicity,
        }
    }

    /// `Theta = B` with no monomial factor.
    pub fn from_blaschke(blaschke: BlaschkeProduct) -> Self {
        ModelSpaceTag::new(blaschke, 0)
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn shift_multiplicity(&self) -> usize {
        self.shift_multiplicity
    }

    /// Degree of `Theta` as an inner function.
    pub fn degree(&self) -> usize {
        self.shift_multiplicity + self.blaschke.degree()
    }

    /// The zeros of `Theta` as one Blaschke product (the monomial part
    /// becomes zeros at the origin). Equals `Theta` up to a unimodular
    /// constant, so quantities depending only on moduli may use it.
    pub fn modulus_blaschke(&self) -> BlaschkeProduct {
        let mut zeros = vec![Complex64::new(0.0, 0.0); self.shift_multiplicity];
        zeros.extend_from_slice(self.blaschke.zeros());
        BlaschkeProduct::new(zeros).expect("zeros already validated")
    }

    pub(crate) fn jet_unchecked(&self, u: Complex64, order: usize) -> JetValue {
        let mono = monomial_jet(u, self.shift_multiplicity, order);
        mono.mul(&self.blaschke.jet_unchecked(u, order), order)
    }

    /// Jet of `Theta` on the closed disc.
    pub fn jet(&self, u: Complex64, order: usize) -> Result<JetValue> {
        if u.norm() > 1.0 + DOMAIN_TOL {
            return Err(Error::Domain(format!(
                "|u| = {} exceeds the closed unit disc",
                u.norm()
            )));
        }
        Ok(self.jet_unchecked(u, order))
    }

    pub fn eval(&self, u: Complex64) -> Result<Complex64> {
        Ok(self.jet(u, 0)?.v0)
    }

    /// Reproducing kernel of `K_Theta`:
    /// `k_lam(w) = (1 - conj(Theta(lam)) Theta(w)) / (1 - conj(lam) w)`,
    /// for `|lam| < 1`, `|w| <= 1`.
    pub fn kernel_eval(&self, lam: Complex64, w: Complex64) -> Result<Complex64> {
        if lam.norm_sqr() >= 1.0 {
            return Err(Error::Domain(format!(
                "kernel parameter needs |lam| < 1, got {}",
                lam.norm()
            )));
        }
        if w.norm() > 1.0 + DOMAIN_TOL {
            return Err(Error::Domain(format!(
                "kernel argument needs |w| <= 1, got {}",
                w.norm()
            )));
        }
        let theta_lam = self.jet_unchecked(lam, 0).v0;
        let theta_w = self.jet_unchecked(w, 0).v0;
        Ok((1.0 - theta_lam.conj() * theta_w) / (1.0 - lam.conj() * w))
    }

    /// The backward shift `(Theta - Theta(0)) / z` as an explicit rational
    /// function; its boundary modulus is at most `1 + |Theta(0)| <= 2`.
    pub fn backward_shift(&self) -> Result<RationalFunction> {
        // Numerator polynomial of Theta: z^m times one linear factor per
        // zero ((-z) at the origin, (w - z) otherwise); denominator collects
        // (1 - conj(w) z) for the nonzero zeros.
        let mut num: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
        let mut den: Vec<Complex64> = vec![Complex64::new(1.0, 0.0)];
        let mut finite_poles: Vec<Complex64> = Vec::new();
        for _ in 0..self.shift_multiplicity {
            num.insert(0, Complex64::new(0.0, 0.0));
        }
        for &w in self.blaschke.zeros() {
            if w.norm_sqr() == 0.0 {
                num = poly_mul(&num, &[Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]);
            } else {
                num = poly_mul(&num, &[w, Complex64::new(-1.0, 0.0)]);
                den = poly_mul(&den, &[Complex64::new(1.0, 0.0), -w.conj()]);
                finite_poles.push(1.0 / w.conj());
            }
        }
        // Theta(0) = num(0) because den(0) = 1; the constant coefficient of
        // num - Theta(0) den cancels exactly.
        let theta0 = num[0];
        let mut shifted: Vec<Complex64> = Vec::with_capacity(num.len().saturating_sub(1));
        for k in 1..num.len().max(den.len()) {
            let a = num.get(k).copied().unwrap_or_default();
            let b = den.get(k).copied().unwrap_or_default();
            shifted.push(a - theta0 * b);
        }
        if shifted.is_empty() {
            shifted.push(Complex64::new(0.0, 0.0));
        }
        while shifted.len() > 1 && shifted.last() == Some(&Complex64::new(0.0, 0.0)) {
            shifted.pop();
        }
        let num_deg = shifted.len() - 1;
        let degree = num_deg.max(finite_poles.len());
        let at_infinity = degree - finite_poles.len();
        RationalFunction::new(shifted, finite_poles, at_infinity)
    }

    /// Fourth-power boundary norm of the reproducing kernel at `u`, by the
    /// closed formula
    ///
    /// ```text
    /// ||k_u||_4^4 = (1+|u|^2)(1-|Theta(u)|^4)/(1-|u|^2)^3
    ///             - 4 Re(u Theta'(u) conj(Theta(u)))/(1-|u|^2)^2 .
    /// ```
    pub fn kernel4_norm_closed(&self, u: Complex64) -> Result<f64> {
        let usq = u.norm_sqr();
        if usq >= 1.0 {
            return Err(Error::Domain(format!(
                "kernel norm needs |u| < 1, got {}",
                u.norm()
            )));
        }
        let jet = self.jet_unchecked(u, 1);
        let theta_sq = jet.v0.norm_sqr();
        let omt = 1.0 - usq;
        let first = (1.0 + usq) * (1.0 - theta_sq) * (1.0 + theta_sq) / (omt * omt * omt);
        let second = 4.0 * (u * jet.v1 * jet.v0.conj()).re / (omt * omt);
        Ok(first - second)
    }

    /// Largest residual `|<f, Theta z^j>|` for `j = 0..=j_max`; the numerical
    /// membership test for `f` in `K_Theta`.
    pub fn membership_residual(&self, f: &RationalFunction, j_max: usize) -> Result<f64> {
        let hint = f.total_degree() + self.degree() + j_max;
        let mut worst = 0.0f64;
        for j in 0..=j_max {
            let (v, _) = boundary_pairing_auto(
                |xi| f.jet_unchecked(xi, 0).v0,
                |xi| self.jet_unchecked(xi, 0).v0 * xi.powu(j as u32),
                hint,
                1e-12,
            )?;
            worst = worst.max(v.norm());
        }
        Ok(worst)
    }

    /// Errors unless `f` passes the perpendicularity test against
    /// `Theta z^j`, `j = 0..=4`, at [`MEMBERSHIP_TOL`] relative to the
    /// `H^2` norm of `f`.
    pub fn validate_membership(&self, f: &RationalFunction) -> Result<()> {
        let residual = self.membership_residual(f, 4)?;
        let (norm_sq, _) = boundary_pairing_auto(
            |xi| f.jet_unchecked(xi, 0).v0,
            |xi| f.jet_unchecked(xi, 0).v0,
            f.total_degree().max(1),
            1e-12,
        )?;
        let scale = norm_sq.re.max(0.0).sqrt().max(1.0);
        if residual > MEMBERSHIP_TOL * scale {
            return Err(Error::Membership {
                power: 0,
                inner: residual,
            });
        }
        Ok(())
    }
}

impl AnalyticFn for ModelSpaceTag {
    fn jet(&self, u: Complex64, order: usize) -> JetValue {
        self.jet_unchecked(u, order)
    }
    fn angular_degree(&self) -> usize {
        self.blaschke.nonzero_count()
    }
    fn total_degree(&self) -> usize {
        self.degree()
    }
}

fn monomial_jet(u: Complex64, m: usize, order: usize) -> JetValue {
    let mf = m as f64;
    let mut jet = JetValue::default();
    jet.v0 = u.powu(m as u32);
    if order >= 1 && m >= 1 {
        jet.v1 = mf * u.powu(m as u32 - 1);
    }
    if order >= 2 && m >= 2 {
        jet.v2 = mf * (mf - 1.0) * u.powu(m as u32 - 2);
    }
    if order >= 3 && m >= 3 {
        jet.v3 = mf * (mf - 1.0) * (mf - 2.0) * u.powu(m as u32 - 3);
    }
    jet
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Boundary pairing `∫_T f conj(g) dm` of two rational functions with
/// automatic doubling.
pub fn boundary_pairing(
    f: &RationalFunction,
    g: &RationalFunction,
    rel_tol: f64,
) -> Result<Complex64> {
    let hint = f.total_degree() + g.total_degree();
    let (v, _) = boundary_pairing_auto(
        |xi| f.jet_unchecked(xi, 0).v0,
        |xi| g.jet_unchecked(xi, 0).v0,
        hint,
        rel_tol,
    )?;
    Ok(v)
}

/// Derivative of order `order` in `1..=3` of `f` in `K_Theta` through the
/// integral representation `f^(n)(u) = <f, z^n (k_u)^{n+1}>`, evaluated by
/// boundary quadrature.
pub fn derivative_via_kernel(
    f: &RationalFunction,
    tag: &ModelSpaceTag,
    u: Complex64,
    order: usize,
) -> Result<Complex64> {
    if order == 0 || order > 3 {
        return Err(Error::Param(format!(
            "kernel representation implemented for orders 1..=3, got {order}"
        )));
    }
    if u.norm_sqr() >= 1.0 {
        return Err(Error::Domain(format!(
            "representation point needs |u| < 1, got {}",
            u.norm()
        )));
    }
    let theta_u = tag.jet_unchecked(u, 0).v0;
    let uc = u.conj();
    let kernel_pow = |xi: Complex64| -> Complex64 {
        let k = (1.0 - theta_u.conj() * tag.jet_unchecked(xi, 0).v0) / (1.0 - uc * xi);
        xi.powu(order as u32) * k.powu(order as u32 + 1)
    };
    let hint = f.total_degree() + order + (order + 1) * tag.degree();
    let (v, _) = boundary_pairing_auto(|xi| f.jet_unchecked(xi, 0).v0, kernel_pow, hint, 1e-12)?;
    // Cauchy's formula reads f^(n)(u) = n! <f, z^n/(1-conj(u)z)^{n+1}>, and
    // the kernel power differs from that reproducer by an element of
    // Theta H^2, which f is orthogonal to.
    let factorial = [1.0, 1.0, 2.0, 6.0][order];
    Ok(factorial * v)
}

/// Mean of `|k_u^Theta|^4` over the circle with automatic doubling; the
/// quadrature route checked against [`ModelSpaceTag::kernel4_norm_closed`].
pub fn kernel4_norm_quadrature(tag: &ModelSpaceTag, u: Complex64, rel_tol: f64) -> Result<f64> {
    if u.norm_sqr() >= 1.0 {
        return Err(Error::Domain("kernel norm needs |u| < 1".into()));
    }
    let theta_u = tag.jet_unchecked(u, 0).v0;
    let uc = u.conj();
    let sample = |n: usize| -> f64 {
        let mut acc = KahanSum::new();
        for xi in unit_circle_nodes(n) {
            let k = (1.0 - theta_u.conj() * tag.jet_unchecked(xi, 0).v0) / (1.0 - uc * xi);
            acc.add(pow_modulus(k, 4.0));
        }
        acc.value() / n as f64
    };
    let mut n = (64 * (4 * tag.degree()).max(1)).next_power_of_two();
    let mut prev = sample(n);
    const MAX_N: usize = 1 << 21;
    while n <= MAX_N {
        n *= 2;
        let cur = sample(n);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NoConverge {
        estimate: f64::NAN,
        refinements: MAX_N.trailing_zeros(),
    })
}
