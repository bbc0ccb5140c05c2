//! Derivative jets and the common interface for functions analytic on the
//! closed unit disc.

use num_complex::Complex64;

/// Value and first three complex derivatives of an analytic function at a
/// point.
///
/// Orders above the one requested from [`AnalyticFn::jet`] are left at zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JetValue {
    /// Function value.
    pub v0: Complex64,
    /// First derivative.
    pub v1: Complex64,
    /// Second derivative.
    pub v2: Complex64,
    /// Third derivative.
    pub v3: Complex64,
}

impl JetValue {
    /// The constant jet `(c, 0, 0, 0)`.
    pub fn constant(c: Complex64) -> Self {
        JetValue {
            v0: c,
            ..JetValue::default()
        }
    }

    /// Derivative of order `k <= 3`.
    pub fn derivative(&self, k: usize) -> Complex64 {
        match k {
            0 => self.v0,
            1 => self.v1,
            2 => self.v2,
            3 => self.v3,
            _ => panic!("jet holds derivatives up to order 3, requested {k}"),
        }
    }

    /// Leibniz product of two jets truncated at `order`.
    pub fn mul(&self, rhs: &JetValue, order: usize) -> JetValue {
        let mut out = JetValue::default();
        out.v0 = self.v0 * rhs.v0;
        if order >= 1 {
            out.v1 = self.v1 * rhs.v0 + self.v0 * rhs.v1;
        }
        if order >= 2 {
            out.v2 = self.v2 * rhs.v0 + 2.0 * self.v1 * rhs.v1 + self.v0 * rhs.v2;
        }
        if order >= 3 {
            out.v3 = self.v3 * rhs.v0
                + 3.0 * self.v2 * rhs.v1
                + 3.0 * self.v1 * rhs.v2
                + self.v0 * rhs.v3;
        }
        out
    }
}

/// A function analytic on (a neighbourhood of) the closed unit disc that can
/// report its derivative jet and rough oscillation hints for quadrature
/// sizing.
pub trait AnalyticFn: Sync {
    /// Value and derivatives up to `order <= 3` at `u`, `|u| <= 1`.
    ///
    /// Implementations may assume the point is in the closed disc; the
    /// checked public entry points perform the domain test.
    fn jet(&self, u: Complex64, order: usize) -> JetValue;

    /// Function value at `u`.
    fn eval_at(&self, u: Complex64) -> Complex64 {
        self.jet(u, 0).v0
    }

    /// Largest angular frequency (roughly) present in `|f|` on circles.
    ///
    /// Purely radial moduli report 0; the quadrature layer uses this to size
    /// the initial trapezoid rule.
    fn angular_degree(&self) -> usize;

    /// Total algebraic degree, used to size the initial radial rule.
    fn total_degree(&self) -> usize;
}

impl<'a, T: AnalyticFn + ?Sized> AnalyticFn for &'a T {
    fn jet(&self, u: Complex64, order: usize) -> JetValue {
        (**self).jet(u, order)
    }
    fn angular_degree(&self) -> usize {
        (**self).angular_degree()
    }
    fn total_degree(&self) -> usize {
        (**self).total_degree()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_product_matches_polynomial() {
        // (1 + u)^2 via jet multiplication.
        let u = Complex64::new(0.3, -0.2);
        let lin = JetValue {
            v0: Complex64::new(1.0, 0.0) + u,
            v1: Complex64::new(1.0, 0.0),
            ..JetValue::default()
        };
        let sq = lin.mul(&lin, 3);
        let one = Complex64::new(1.0, 0.0);
        assert!((sq.v0 - (one + u) * (one + u)).norm() < 1e-15);
        assert!((sq.v1 - 2.0 * (one + u)).norm() < 1e-15);
        assert!((sq.v2 - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!(sq.v3.norm() < 1e-15);
    }
}
