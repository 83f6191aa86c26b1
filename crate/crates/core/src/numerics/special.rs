//! Classical orthogonal polynomials by forward three-term recurrence.

use crate::error::{Error, Result};

fn check_param(name: &str, value: f64) -> Result<()> {
    if !(value > -1.0) || !value.is_finite() {
        return Err(Error::Domain(format!("{name} must be > -1, got {value}")));
    }
    Ok(())
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_param("alpha", alpha)?;
    Ok(laguerre_unchecked(n, alpha, x))
}

pub(crate) fn laguerre_unchecked(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)`.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_param("alpha", alpha)?;
    check_param("beta", beta)?;
    Ok(jacobi_unchecked(n, alpha, beta, x))
}

pub(crate) fn jacobi_unchecked(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = 0.5 * ((ab + 2.0) * x + alpha - beta);
    for j in 1..n {
        let jf = j as f64;
        let s = 2.0 * jf + ab;
        let a1 = 2.0 * (jf + 1.0) * (jf + ab + 1.0) * s;
        let a2 = (s + 1.0) * (alpha * alpha - beta * beta);
        let a3 = s * (s + 1.0) * (s + 2.0);
        let a4 = 2.0 * (jf + alpha) * (jf + beta) * (s + 2.0);
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Gamma(x)` for real `x > 0`.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: f64, k: usize) -> f64 {
        // generalized binomial C(n, k)
        (0..k).fold(1.0, |acc, i| acc * (n - i as f64) / (i as f64 + 1.0))
    }

    /// Explicit sum L_n^a(x) = sum_j (-1)^j C(n+a, n-j) x^j / j!.
    fn laguerre_series(n: usize, a: f64, x: f64) -> f64 {
        let mut fact = 1.0;
        let mut sum = 0.0;
        for j in 0..=n {
            if j > 0 {
                fact *= j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom(n as f64 + a, n - j) * x.powi(j as i32) / fact;
        }
        sum
    }

    /// Hypergeometric form P_n^{(a,b)}(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s).
    fn jacobi_series(n: usize, a: f64, b: f64, x: f64) -> f64 {
        (0..=n)
            .map(|s| {
                binom(n as f64 + a, n - s)
                    * binom(n as f64 + b, s)
                    * ((x - 1.0) / 2.0).powi(s as i32)
                    * ((x + 1.0) / 2.0).powi((n - s) as i32)
            })
            .sum()
    }

    #[test]
    fn base_cases() {
        assert_eq!(laguerre(0, 0.7, 2.3).unwrap(), 1.0);
        assert!((laguerre(1, 0.7, 2.3).unwrap() - (1.0 + 0.7 - 2.3)).abs() < 1e-15);
        assert_eq!(jacobi(0, 0.3, 1.2, -0.4).unwrap(), 1.0);
        let (a, b, x) = (0.3, 1.2, -0.4);
        let p1 = ((a + b + 2.0) * x + a - b) / 2.0;
        assert!((jacobi(1, a, b, x).unwrap() - p1).abs() < 1e-15);
    }

    #[test]
    fn laguerre_matches_series() {
        let got = laguerre(5, 0.0, 0.3).unwrap();
        let want = laguerre_series(5, 0.0, 0.3);
        assert!(((got - want) / want).abs() <= 1e-13, "{got} vs {want}");
    }

    #[test]
    fn jacobi_matches_series() {
        let got = jacobi(4, 1.5, 2.5, -0.2).unwrap();
        let want = jacobi_series(4, 1.5, 2.5, -0.2);
        assert!(((got - want) / want).abs() <= 1e-12, "{got} vs {want}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(laguerre(3, -1.0, 0.5).is_err());
        assert!(jacobi(3, 0.0, -1.5, 0.5).is_err());
        assert!(jacobi(3, f64::NAN, 0.0, 0.5).is_err());
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    mod props {
        use super::*;
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use num_traits::{One, ToPrimitive, Zero};
        use proptest::prelude::*;

        fn q(num: i64, den: i64) -> BigRational {
            BigRational::new(BigInt::from(num), BigInt::from(den))
        }

        fn rbinom(n: &BigRational, k: usize) -> BigRational {
            let mut acc = BigRational::one();
            for i in 0..k {
                acc = acc * (n - q(i as i64, 1)) / q(i as i64 + 1, 1);
            }
            acc
        }

        /// Exact rational series for L_j^a(x), j = 0..=n.
        fn laguerre_exact(n: usize, a: &BigRational, x: &BigRational) -> Vec<f64> {
            (0..=n)
                .map(|m| {
                    let mut sum = BigRational::zero();
                    let mut xp = BigRational::one();
                    let mut fact = BigRational::one();
                    for j in 0..=m {
                        if j > 0 {
                            xp *= x;
                            fact *= q(j as i64, 1);
                        }
                        let t = rbinom(&(q(m as i64, 1) + a), m - j) * &xp / &fact;
                        if j % 2 == 0 { sum += t } else { sum -= t }
                    }
                    sum.to_f64().unwrap()
                })
                .collect()
        }

        fn jacobi_exact(n: usize, a: &BigRational, b: &BigRational, x: &BigRational) -> Vec<f64> {
            let xm = (x - q(1, 1)) / q(2, 1);
            let xp = (x + q(1, 1)) / q(2, 1);
            (0..=n)
                .map(|m| {
                    let mut sum = BigRational::zero();
                    for s in 0..=m {
                        let mut t = rbinom(&(q(m as i64, 1) + a), m - s) * rbinom(&(q(m as i64, 1) + b), s);
                        for _ in 0..s { t *= &xm; }
                        for _ in 0..(m - s) { t *= &xp; }
                        sum += t;
                    }
                    sum.to_f64().unwrap()
                })
                .collect()
        }

        /// Relative error with respect to the recurrence's natural scale max_j |P_j(x)|,
        /// which stays meaningful next to a root of P_n.
        fn scaled_err(got: f64, exact: &[f64]) -> f64 {
            let want = *exact.last().unwrap();
            let scale = exact.iter().fold(want.abs(), |m, v| m.max(v.abs()));
            (got - want).abs() / scale
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn laguerre_recurrence_vs_exact_series(n in 0usize..=30, ap in -3i64..24, xq in 0i64..=800) {
                let (a, x) = (q(ap, 4), q(xq, 16));
                let exact = laguerre_exact(n, &a, &x);
                let got = laguerre(n, ap as f64 / 4.0, xq as f64 / 16.0).unwrap();
                prop_assert!(scaled_err(got, &exact) <= 1e-11, "n={} a={} x={}", n, ap, xq);
            }

            #[test]
            fn jacobi_recurrence_vs_exact_series(n in 0usize..=20, ap in -3i64..16, bp in -3i64..16, xq in -64i64..=64) {
                let (a, b, x) = (q(ap, 4), q(bp, 4), q(xq, 64));
                let exact = jacobi_exact(n, &a, &b, &x);
                let got = jacobi(n, ap as f64 / 4.0, bp as f64 / 4.0, xq as f64 / 64.0).unwrap();
                prop_assert!(scaled_err(got, &exact) <= 1e-11, "n={} a={} b={} x={}", n, ap, bp, xq);
            }
        }
    }
}
