//! Log-gamma and Beta for the closed-form norm oracles.
//!
//! `ln_gamma` uses the Stirling series with an argument shift below 12; the
//! Bernoulli tail at `x >= 12` is below machine epsilon, so the result is
//! accurate to a few ulps over the whole positive axis. Beta goes through
//! `ln_gamma` to stay finite for the large arguments produced by high-degree
//! sweeps.

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    // Shift the argument above 12 where the asymptotic series converges to
    // full double precision, dividing out the skipped factors.
    let mut shift = 0.0f64;
    let mut y = x;
    while y < 12.0 {
        shift += y.ln();
        y += 1.0;
    }
    // Stirling: (y-1/2) ln y - y + ln(2 pi)/2 + sum B_{2k}/(2k(2k-1) y^{2k-1}).
    const COEFF: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv_sq = 1.0 / (y * y);
    let mut series = 0.0;
    let mut power = 1.0 / y;
    for c in COEFF {
        series += c * power;
        power *= inv_sq;
    }
    const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_74;
    (y - 0.5) * y.ln() - y + HALF_LN_TWO_PI + series - shift
}

/// `ln B(a, b) = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Beta function `B(a, b)` for positive arguments, via log-gamma.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_at_integers_and_half_integers() {
        // Gamma(n) = (n-1)!
        let mut fact = 1.0f64;
        for n in 1..=20u32 {
            assert_relative_eq!(ln_gamma(n as f64), fact.ln(), max_relative = 1e-14, epsilon = 1e-14);
            fact *= n as f64;
        }
        // Gamma(1/2) = sqrt(pi)
        assert_relative_eq!(
            ln_gamma(0.5),
            std::f64::consts::PI.sqrt().ln(),
            epsilon = 1e-14
        );
        // Gamma(3/2) = sqrt(pi)/2
        assert_relative_eq!(
            ln_gamma(1.5),
            (std::f64::consts::PI.sqrt() / 2.0).ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn beta_known_values() {
        assert_relative_eq!(beta(1.0, 1.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(beta(2.0, 3.0), 1.0 / 12.0, max_relative = 1e-14);
        // B(x, 1) = 1/x
        assert_relative_eq!(beta(7.5, 1.0), 1.0 / 7.5, max_relative = 1e-13);
        // B(n, 2) = 1/(n(n+1))
        assert_relative_eq!(beta(64.0, 2.0), 1.0 / (64.0 * 65.0), max_relative = 1e-13);
    }

    #[test]
    fn beta_recurrence_holds_for_large_arguments() {
        // B(a+1, b) = B(a, b) * a / (a + b)
        for &(a, b) in &[(95.5, 0.5), (383.0, 1.5), (768.25, 2.0)] {
            assert_relative_eq!(
                beta(a + 1.0, b),
                beta(a, b) * a / (a + b),
                max_relative = 1e-12
            );
        }
    }
}
