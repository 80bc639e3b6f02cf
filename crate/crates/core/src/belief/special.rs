//! Log-gamma and digamma on the positive reals.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// ln(sqrt(2π))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this, digamma is shifted upward with ψ(x) = ψ(x+1) − 1/x.
const DIGAMMA_ASYMPTOTIC_FROM: f64 = 10.0;

/// B_{2k} / (2k) for k = 1..7.
const DIGAMMA_SERIES: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// Natural log of Γ(x) for x > 0 (Lanczos, g = 7, n = 9).
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "ln_gamma requires finite x > 0, got {x}"
        )));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + sum.ln()
}

/// Digamma ψ(x) = d/dx ln Γ(x) for x > 0.
///
/// Recurrence up to x ≥ 10, then the asymptotic series
/// ψ(x) ≈ ln x − 1/(2x) − Σ B_{2k} / (2k x^{2k}).
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "digamma requires finite x > 0, got {x}"
        )));
    }
    Ok(digamma_unchecked(x))
}

pub(crate) fn digamma_unchecked(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < DIGAMMA_ASYMPTOTIC_FROM {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv_x2 = 1.0 / (x * x);
    let mut term = inv_x2;
    let mut series = 0.0;
    for c in DIGAMMA_SERIES {
        series += c * term;
        term *= inv_x2;
    }
    shift + x.ln() - 0.5 / x - series
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn digamma_reference_points() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-12);
        assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-12);
        let half = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5).unwrap() - half).abs() < 1e-12);
        // Frozen decimal values.
        assert!((digamma(1.0).unwrap() - -0.577_215_664_9).abs() < 1e-10);
        assert!((digamma(2.0).unwrap() - 0.422_784_335_1).abs() < 1e-10);
        assert!((digamma(0.5).unwrap() - -1.963_510_026_0).abs() < 1e-10);
    }

    #[test]
    fn digamma_rejects_non_positive() {
        assert!(matches!(digamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(digamma(-1.5), Err(Error::Domain(_))));
        assert!(digamma(f64::NAN).is_err());
        assert!(ln_gamma(0.0).is_err());
    }

    #[test]
    fn digamma_matches_statrs() {
        for i in 1..2000 {
            let x = i as f64 * 0.037;
            let ours = digamma(x).unwrap();
            let reference = statrs::function::gamma::digamma(x);
            assert!(
                (ours - reference).abs() < 1e-10,
                "x={x}: {ours} vs {reference}"
            );
        }
    }

    #[test]
    fn ln_gamma_matches_statrs_and_factorials() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            let got = ln_gamma(n as f64).unwrap();
            assert!(
                (got - fact.ln()).abs() < 1e-12 * fact.ln().abs().max(1.0),
                "n={n}"
            );
            fact *= n as f64;
        }
        for i in 1..3000 {
            let x = i as f64 * 0.0173;
            let ours = ln_gamma(x).unwrap();
            let reference = statrs::function::gamma::ln_gamma(x);
            assert!(
                (ours - reference).abs() < 1e-11 * reference.abs().max(1.0),
                "x={x}"
            );
        }
    }

    #[test]
    fn recurrence_holds_over_wide_range() {
        let mut x = 1e-3;
        while x <= 1e4 {
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert!((lhs - 1.0 / x).abs() <= 1e-9, "x={x}");
            x *= 1.07;
        }
    }
}
