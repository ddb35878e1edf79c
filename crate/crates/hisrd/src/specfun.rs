//! Scalar special functions used by the radial probability computations.
//!
//! Everything here is pure and deterministic. The chi CDF is the regularized
//! lower incomplete gamma function P(K/2, x^2/2), evaluated by the lower
//! series for small arguments and the continued fraction otherwise; log-gamma
//! comes from a Lanczos approximation, with an exact recursion table for the
//! integer and half-integer orders the chi family actually uses.

use crate::error::{Error, Result};
use std::sync::OnceLock;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// ln Γ(x) for x > 0 (Lanczos, ~1e-14 relative).
pub fn ln_gamma(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // Reflection keeps the approximation in its accurate range.
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

// ln Γ(k/2) for k = 1..=MAX_HALF_TABLE, built by the exact recursion
// Γ(z+1) = z Γ(z) with compensated summation. The chi CDF needs absolute
// accuracy ~1e-12 up to dof 2048, which a plain Lanczos exponent would
// only just meet.
const MAX_HALF_TABLE: usize = 4096;

fn ln_gamma_half_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; MAX_HALF_TABLE + 1];
        // Odd k: Γ(1/2) = sqrt(pi); even k: Γ(1) = 1.
        let ln_sqrt_pi = 0.572_364_942_924_700_1_f64;
        let (mut odd_sum, mut odd_c) = (ln_sqrt_pi, 0.0_f64);
        let (mut even_sum, mut even_c) = (0.0_f64, 0.0_f64);
        for k in 1..=MAX_HALF_TABLE {
            if k % 2 == 1 {
                t[k] = odd_sum;
                let y = (k as f64 / 2.0).ln() - odd_c;
                let s = odd_sum + y;
                odd_c = (s - odd_sum) - y;
                odd_sum = s;
            } else {
                t[k] = even_sum;
                let y = (k as f64 / 2.0).ln() - even_c;
                let s = even_sum + y;
                even_c = (s - even_sum) - y;
                even_sum = s;
            }
        }
        t
    })
}

/// ln Γ(dof/2) using the exact recursion table where possible.
fn ln_gamma_half(dof: u32) -> f64 {
    let k = dof as usize;
    if k <= MAX_HALF_TABLE {
        ln_gamma_half_table()[k]
    } else {
        ln_gamma(dof as f64 / 2.0)
    }
}

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
///
/// `ln_gamma_a` is ln Γ(a), passed in so half-integer callers can use the
/// exact table.
fn gamma_p_with(a: f64, x: f64, ln_gamma_a: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return 1.0;
    }
    // Far right tail: Q underflows below any representable contribution.
    if x > a + 60.0 * a.sqrt().max(1.0) {
        return 1.0;
    }
    if x < a + 1.0 {
        // Lower series.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = 1.0;
        while n < 10_000.0 {
            term *= x / (a + n);
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
            n += 1.0;
        }
        let ln_pref = a * x.ln() - x - ln_gamma_a;
        (ln_pref + sum.ln()).exp().clamp(0.0, 1.0)
    } else {
        // Continued fraction for Q (modified Lentz).
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut i = 1.0;
        while i < 10_000.0 {
            let an = -i * (i - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
            i += 1.0;
        }
        let ln_pref = a * x.ln() - x - ln_gamma_a;
        let q = (ln_pref.exp() * h).clamp(0.0, 1.0);
        1.0 - q
    }
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    gamma_p_with(a, x, ln_gamma(a))
}

/// Chi distribution with `dof` degrees of freedom: the law of the Euclidean
/// norm of a standard Gaussian vector in R^dof.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChiDist {
    dof: u32,
}

impl ChiDist {
    pub fn new(dof: u32) -> Self {
        assert!(dof >= 1, "chi distribution needs dof >= 1");
        ChiDist { dof }
    }

    pub fn dof(&self) -> u32 {
        self.dof
    }

    /// F_chi(x) = P(dof/2, x^2/2), with F(inf) = 1.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x.is_infinite() {
            return 1.0;
        }
        let half_sq = 0.5 * (x * x);
        gamma_p_with(self.dof as f64 / 2.0, half_sq, ln_gamma_half(self.dof))
    }

    /// Density of the chi distribution, with f(inf) = 0.
    pub fn pdf(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return 0.0;
        }
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return if self.dof == 1 {
                (2.0 / std::f64::consts::PI).sqrt()
            } else {
                0.0
            };
        }
        let k = self.dof as f64;
        let ln_f =
            (k - 1.0) * x.ln() - 0.5 * x * x - (0.5 * k - 1.0) * std::f64::consts::LN_2
                - ln_gamma_half(self.dof);
        ln_f.exp()
    }
}

/// Chi CDF shorthand.
pub fn chi_cdf(dof: u32, x: f64) -> f64 {
    ChiDist::new(dof).cdf(x)
}

/// Chi density shorthand.
pub fn chi_pdf(dof: u32, x: f64) -> f64 {
    ChiDist::new(dof).pdf(x)
}

/// Chi-squared CDF. Shares the incomplete-gamma path with `chi_cdf`, so
/// `chi2_cdf(k, x*x) == chi_cdf(k, x)` bit for bit.
pub fn chi2_cdf(dof: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    gamma_p_with(dof as f64 / 2.0, 0.5 * x, ln_gamma_half(dof))
}

/// Complementary error function, accurate to ~1e-15 absolute.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x == 0.0 {
        return 1.0;
    }
    let half = 0.5_f64;
    let x2 = x * x;
    if x2 < 1.5 {
        1.0 - gamma_p_with(half, x2, ln_gamma(half))
    } else {
        // Q(1/2, x^2) directly from the continued fraction branch.
        1.0 - gamma_p_with(half, x2, ln_gamma(half))
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (SQRT_2 * std::f64::consts::PI.sqrt())
}

/// Inverse standard normal CDF: rational approximation (Acklam) refined by
/// one Newton step on `normal_cdf`.
pub fn normal_inv_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_690e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // One Newton refinement.
    let f = normal_cdf(x) - p;
    let d = normal_pdf(x);
    let x = if d > 0.0 { x - f / d } else { x };
    Ok(x)
}

/// Beta(a, b) density at x in [0, 1], evaluated in log space.
pub fn beta_pdf(a: f64, b: f64, x: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "beta_pdf needs positive shape parameters");
    assert!((0.0..=1.0).contains(&x), "beta_pdf argument outside [0, 1]");
    let ln_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    if x == 0.0 {
        return match a.partial_cmp(&1.0).unwrap() {
            std::cmp::Ordering::Greater => 0.0,
            std::cmp::Ordering::Equal => (-ln_beta + (b - 1.0) * 0.0).exp(),
            std::cmp::Ordering::Less => f64::INFINITY,
        };
    }
    if x == 1.0 {
        return match b.partial_cmp(&1.0).unwrap() {
            std::cmp::Ordering::Greater => 0.0,
            std::cmp::Ordering::Equal => (-ln_beta).exp(),
            std::cmp::Ordering::Less => f64::INFINITY,
        };
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln_1p_neg() - ln_beta).exp()
}

// ln(1 - x) with better conditioning near x = 0.
trait Ln1pNeg {
    fn ln_1p_neg(self) -> f64;
}

impl Ln1pNeg for f64 {
    fn ln_1p_neg(self) -> f64 {
        (-self).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent erf oracle: Maclaurin series, converges to machine
    // precision for |x| <= 6. Deliberately avoids the incomplete-gamma path.
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..200 {
            let nf = n as f64;
            term *= -x * x / nf;
            sum += term / (2.0 * nf + 1.0);
        }
        sum * 2.0 / std::f64::consts::PI.sqrt()
    }

    #[test]
    fn chi_cdf_closed_forms() {
        // K=2: 1 - exp(-x^2/2); K=1: 2*Phi(x) - 1 = erf(x/sqrt(2)).
        assert!((chi_cdf(2, 2.0) - (1.0 - (-2.0_f64).exp())).abs() < 1e-14);
        assert!((chi_cdf(1, 1.0) - erf_series(1.0 / SQRT_2)).abs() < 1e-13);
        assert_eq!(chi_cdf(7, 0.0), 0.0);
        assert_eq!(chi_cdf(3, f64::INFINITY), 1.0);
    }

    #[test]
    fn chi_pdf_values() {
        assert_eq!(chi_pdf(3, f64::INFINITY), 0.0);
        assert!((chi_pdf(2, 1.0) - (-0.5_f64).exp()).abs() < 1e-14);
        assert!((chi_pdf(1, 0.0) - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-15);
        assert_eq!(chi_pdf(2, 0.0), 0.0);
    }

    #[test]
    fn chi2_matches_chi_bitwise() {
        for dof in [1_u32, 2, 5, 17, 64, 333] {
            for x in [0.1_f64, 0.9, 2.3, 7.7, 19.0] {
                assert_eq!(chi2_cdf(dof, x * x), chi_cdf(dof, x), "dof={dof} x={x}");
            }
        }
        assert_eq!(chi2_cdf(2, 0.0), 0.0);
        assert!((chi2_cdf(2, 4.0) - (1.0 - (-2.0_f64).exp())).abs() < 1e-14);
        assert_eq!(chi2_cdf(5, 5.0), chi_cdf(5, 5.0_f64.sqrt()));
    }

    #[test]
    fn chi_cdf_monotone_in_x_and_dof() {
        for dof in [1_u32, 2, 3, 8, 33, 128, 1024, 2048] {
            let d = ChiDist::new(dof);
            let mut prev = 0.0;
            for i in 0..400 {
                let x = i as f64 * 0.05;
                let v = d.cdf(x);
                assert!(v >= prev - 1e-15, "dof={dof} x={x}");
                assert!((0.0..=1.0).contains(&v));
                prev = v;
            }
        }
        // Larger dof pushes mass outward.
        for x in [0.5_f64, 1.0, 2.0, 5.0, 10.0] {
            let mut prev = 1.0;
            for dof in [1_u32, 2, 4, 8, 16, 64, 256, 1024] {
                let v = chi_cdf(dof, x);
                assert!(v <= prev + 1e-13, "x={x} dof={dof}");
                prev = v;
            }
        }
    }

    #[test]
    fn chi_pdf_is_cdf_derivative() {
        let h = 1e-6;
        for dof in [1_u32, 2, 5, 20, 64] {
            let d = ChiDist::new(dof);
            for x in [0.3_f64, 0.8, 1.5, 3.0, 6.0] {
                let num = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
                let pdf = d.pdf(x);
                if pdf > 1e-12 {
                    assert!(
                        ((num - pdf) / pdf).abs() < 1e-6,
                        "dof={dof} x={x}: {num} vs {pdf}"
                    );
                }
            }
        }
    }

    #[test]
    fn chi_pdf_integrates_to_one() {
        // Simpson on [0, dof + 12*sqrt(dof)].
        for dof in [1_u32, 2, 3, 8, 17, 64] {
            let d = ChiDist::new(dof);
            let upper = (dof as f64).sqrt() + 12.0;
            let n = 20_000;
            let h = upper / n as f64;
            let mut s = d.pdf(0.0) + d.pdf(upper);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                s += w * d.pdf(i as f64 * h);
            }
            let integral = s * h / 3.0;
            assert!((integral - 1.0).abs() < 1e-8, "dof={dof}: {integral}");
        }
    }

    #[test]
    fn normal_cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_543).abs() < 1e-12);
        let series = 0.5 * (1.0 + erf_series(1.0 / SQRT_2));
        assert!((normal_cdf(1.0) - series).abs() < 1e-14);
    }

    #[test]
    fn normal_inverse_round_trip() {
        assert!((normal_inv_cdf(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-8);
        for i in 1..120 {
            let x = -6.0 + i as f64 * 0.1;
            let p = normal_cdf(x);
            let back = normal_inv_cdf(p).unwrap();
            assert!((back - x).abs() < 1e-9, "x={x} back={back}");
        }
        assert!(normal_inv_cdf(0.0).is_err());
        assert!(normal_inv_cdf(1.0).is_err());
        assert!(normal_inv_cdf(-0.3).is_err());
    }

    #[test]
    fn beta_pdf_values() {
        assert!((beta_pdf(1.0, 1.0, 0.3) - 1.0).abs() < 1e-14);
        assert!((beta_pdf(2.0, 2.0, 0.5) - 1.5).abs() < 1e-13);
        assert!((beta_pdf(1.0, 50.0, 0.0) - 50.0).abs() < 1e-11);
        // Large b stays finite through the log-space path.
        assert!(beta_pdf(0.5, 500.0, 1e-4).is_finite());
    }
}
