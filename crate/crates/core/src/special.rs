//! Generalized exponential integral and the complex-vector norms used by the
//! closed-form capacity expressions.
//!
//! `E_n(x) = ∫₁^∞ e^{-xt} / tⁿ dt` for `n ≥ 1`, `x > 0`.
//!
//! The capacity formulas only ever need `e^x E_n(x)`, which stays O(1) for
//! large `x` while `E_n(x)` itself underflows, so the scaled form is the
//! primary entry point and the unscaled value is derived from it.

use num_complex::Complex64;

use crate::error::{usage, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

fn check_domain(n: u32, x: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain(format!("E_n requires n >= 1, got n = {n}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "E_n requires finite x > 0, got x = {x}"
        )));
    }
    Ok(())
}

/// `E_1(x)` for `0 < x <= 1` from the convergent power series.
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        let k = k as f64;
        term *= -x / k;
        let contrib = -term / k;
        sum += contrib;
        if contrib.abs() < EPS * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// `e^x E_n(x)` for `x > 1` from the modified-Lentz continued fraction.
fn scaled_continued_fraction(n: u32, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let nm1 = f64::from(n - 1);
    let mut b = x + f64::from(n);
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let i = i as f64;
        let a = -i * (nm1 + i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `e^x E_n(x)` for `n = 1..=n_max`, index `k` holding `n = k + 1`.
///
/// For `x <= 1` the values come from the series for `E_1` and the upward
/// recurrence `E_{n+1} = (e^{-x} - x E_n) / n`, which only damps errors in
/// that range. For `x > 1` the recurrence amplifies rounding by up to
/// `x^n / n!`, so each order is evaluated by its own continued fraction.
pub fn scaled_exp_integrals(n_max: u32, x: f64) -> Result<Vec<f64>> {
    check_domain(n_max, x)?;
    let mut out = Vec::with_capacity(n_max as usize);
    if x <= 1.0 {
        let mut s = x.exp() * e1_series(x);
        out.push(s);
        for n in 1..n_max {
            s = (1.0 - x * s) / f64::from(n);
            out.push(s);
        }
    } else {
        out.extend((1..=n_max).map(|n| scaled_continued_fraction(n, x)));
    }
    Ok(out)
}

/// `e^x E_n(x)`.
pub fn scaled_exp_integral(n: u32, x: f64) -> Result<f64> {
    check_domain(n, x)?;
    if x <= 1.0 {
        Ok(*scaled_exp_integrals(n, x)?.last().expect("n >= 1"))
    } else {
        Ok(scaled_continued_fraction(n, x))
    }
}

/// `Σ_{n=1}^{n_max} e^x E_n(x)`, accumulated while the orders are generated.
pub fn scaled_exp_integral_sum(n_max: u32, x: f64) -> Result<f64> {
    check_domain(n_max, x)?;
    if x <= 1.0 {
        let mut s = x.exp() * e1_series(x);
        let mut total = s;
        for n in 1..n_max {
            s = (1.0 - x * s) / f64::from(n);
            total += s;
        }
        Ok(total)
    } else {
        Ok((1..=n_max).map(|n| scaled_continued_fraction(n, x)).sum())
    }
}

/// Generalized exponential integral `E_n(x)`.
pub fn gen_exp_integral(n: u32, x: f64) -> Result<f64> {
    Ok(scaled_exp_integral(n, x)? * (-x).exp())
}

fn non_empty(v: &[Complex64]) -> Result<()> {
    if v.is_empty() {
        Err(usage("norm of an empty vector"))
    } else {
        Ok(())
    }
}

/// Sum of moduli.
pub fn norm_1(v: &[Complex64]) -> Result<f64> {
    non_empty(v)?;
    Ok(v.iter().map(|z| z.norm()).sum())
}

/// Root-sum-square of moduli.
pub fn norm_2(v: &[Complex64]) -> Result<f64> {
    non_empty(v)?;
    Ok(v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// Largest modulus.
pub fn norm_inf(v: &[Complex64]) -> Result<f64> {
    non_empty(v)?;
    Ok(v.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Adaptive Simpson on `∫₀¹ e^{-x/s} s^{n-2} ds`, the defining integral
    /// after the substitution `t = 1/s`.
    fn quadrature_en(n: i32, x: f64) -> f64 {
        let f = |s: f64| {
            if s <= 0.0 {
                0.0
            } else {
                (-x / s).exp() * s.powi(n - 2)
            }
        };
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            let m = 0.5 * (a + b);
            (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
        }
        fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(f, a, m);
            let right = simpson(f, m, b);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            adapt(f, a, m, left, tol / 2.0, depth - 1) + adapt(f, m, b, right, tol / 2.0, depth - 1)
        }
        adapt(&f, 0.0, 1.0, simpson(&f, 0.0, 1.0), 1e-14, 50)
    }

    #[test]
    fn e1_at_one_matches_quadrature() {
        let oracle = quadrature_en(1, 1.0);
        assert!((oracle - 0.219_383_934_395_520_3).abs() < 1e-10, "oracle {oracle}");
        let v = gen_exp_integral(1, 1.0).unwrap();
        assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
        assert!((v - 0.219384).abs() < 5e-7);
    }

    #[test]
    fn quadrature_agreement_over_grid() {
        for n in [1, 2, 3, 7] {
            for x in [0.05, 0.5, 1.0, 1.5, 4.0, 12.0] {
                let oracle = quadrature_en(n, x);
                let v = gen_exp_integral(n as u32, x).unwrap();
                assert!((v - oracle).abs() < 1e-11, "n={n} x={x}: {v} vs {oracle}");
            }
        }
    }

    #[test]
    fn small_argument_limit() {
        let v = gen_exp_integral(2, 1e-9).unwrap();
        assert!((v - 1.0).abs() < 1e-4);
    }

    #[test]
    fn recurrence_n3_x2() {
        let e2 = gen_exp_integral(2, 2.0).unwrap();
        let e3 = gen_exp_integral(3, 2.0).unwrap();
        assert!((e3 - ((-2.0f64).exp() - 2.0 * e2) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(gen_exp_integral(0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(gen_exp_integral(1, 0.0), Err(Error::Domain(_))));
        assert!(matches!(gen_exp_integral(1, -2.0), Err(Error::Domain(_))));
        assert!(matches!(gen_exp_integral(1, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn monotone_in_x_and_n() {
        let xs = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
        for n in 1..=20u32 {
            for w in xs.windows(2) {
                assert!(gen_exp_integral(n, w[0]).unwrap() > gen_exp_integral(n, w[1]).unwrap());
            }
            for &x in &xs {
                assert!(gen_exp_integral(n, x).unwrap() > gen_exp_integral(n + 1, x).unwrap());
            }
        }
    }

    #[test]
    fn sum_matches_sequence() {
        for x in [1e-4, 0.3, 1.0, 3.0, 40.0] {
            let seq = scaled_exp_integrals(64, x).unwrap();
            let sum = scaled_exp_integral_sum(64, x).unwrap();
            assert!((seq.iter().sum::<f64>() - sum).abs() < 1e-12 * sum);
            assert_eq!(seq[9], scaled_exp_integral(10, x).unwrap());
        }
    }

    #[test]
    fn scaled_stays_finite_for_huge_argument() {
        // e^x E_1(x) ~ 1/x for large x.
        let v = scaled_exp_integral(1, 1e4).unwrap();
        assert!((v * 1e4 - 1.0).abs() < 1e-3);
        assert!(scaled_exp_integral_sum(100, 1e4).unwrap().is_finite());
    }

    #[test]
    fn norm_examples() {
        let v = [c(1.0, 0.0), c(0.0, 1.0)];
        assert_eq!(norm_1(&v).unwrap(), 2.0);
        assert!((norm_2(&v).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(norm_inf(&v).unwrap(), 1.0);

        let v = [c(3.0, 4.0)];
        assert_eq!(norm_1(&v).unwrap(), 5.0);
        assert_eq!(norm_2(&v).unwrap(), 5.0);
        assert_eq!(norm_inf(&v).unwrap(), 5.0);

        let v = [c(1.0, 1.0), c(2.0, 0.0)];
        assert!((norm_1(&v).unwrap() - (2f64.sqrt() + 2.0)).abs() < 1e-15);
        assert_eq!(norm_inf(&v).unwrap(), 2.0);

        assert!(matches!(norm_1(&[]), Err(Error::Usage(_))));
        assert!(norm_2(&[]).is_err());
        assert!(norm_inf(&[]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn norm_ordering(parts in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..32)) {
            let v: Vec<Complex64> = parts.into_iter().map(|(a, b)| c(a, b)).collect();
            let (n1, n2, ni) = (norm_1(&v).unwrap(), norm_2(&v).unwrap(), norm_inf(&v).unwrap());
            proptest::prop_assert!(ni <= n2 * (1.0 + 1e-12));
            proptest::prop_assert!(n2 <= n1 * (1.0 + 1e-12));
        }

        #[test]
        fn recurrence_holds(n in 1u32..64, x in 0.01f64..20.0) {
            let en = gen_exp_integral(n, x).unwrap();
            let en1 = gen_exp_integral(n + 1, x).unwrap();
            let rhs = ((-x).exp() - x * en) / f64::from(n);
            proptest::prop_assert!((en1 - rhs).abs() < 1e-10);
        }
    }
}
