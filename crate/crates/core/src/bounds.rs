//! Closed-form and numerically solved lower bounds for |λ₁A + … + λₖA|,
//! plus a report aggregating them against the measured sumset.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::circle::Rational;
use crate::error::{Error, Result};
use crate::zp::{DilateVector, ZpSet};

/// f_λ(α): max(2, x*) where x* solves
/// (λ+1)·sin(π/(λ+1))·(1−αx) = x^{3/2}·sin(π/x) on [2, λ+1].
///
/// The bracket is scanned at 64 points before bisecting; monotonicity is
/// not assumed. No sign change means the solution has dropped below 2 and
/// the value saturates at 2. Two or more sign changes is an error carrying
/// the count.
pub fn plagne_f(lambda: i64, alpha: f64) -> Result<f64> {
    if lambda < 2 {
        return Err(Error::PlagneDomain(lambda));
    }
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::AlphaDomain {
            alpha,
            range: "[0, 1/2)",
        });
    }
    let l = lambda as f64;
    let rhs_const = (l + 1.0) * (std::f64::consts::PI / (l + 1.0)).sin();
    let g = |x: f64| x.powf(1.5) * (std::f64::consts::PI / x).sin() - rhs_const * (1.0 - alpha * x);

    let (lo, hi) = (2.0, l + 1.0);
    const SCAN: usize = 64;
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    let mut exact_roots: Vec<f64> = Vec::new();
    let mut prev_x = lo;
    let mut prev_g = g(lo);
    if prev_g == 0.0 {
        exact_roots.push(lo);
    }
    for i in 1..=SCAN {
        let x = lo + (hi - lo) * i as f64 / SCAN as f64;
        let gx = g(x);
        if gx == 0.0 {
            exact_roots.push(x);
        } else if prev_g != 0.0 && prev_g.signum() != gx.signum() {
            brackets.push((prev_x, x));
        }
        prev_x = x;
        prev_g = gx;
    }
    let count = brackets.len() + exact_roots.len();
    match count {
        0 => Ok(2.0),
        1 => {
            let root = if let Some(&r) = exact_roots.first() {
                r
            } else {
                let (mut a, mut b) = brackets[0];
                let mut ga = g(a);
                while b - a > 1e-9 {
                    let mid = 0.5 * (a + b);
                    let gm = g(mid);
                    if gm == 0.0 {
                        a = mid;
                        b = mid;
                    } else if gm.signum() == ga.signum() {
                        a = mid;
                        ga = gm;
                    } else {
                        b = mid;
                    }
                }
                0.5 * (a + b)
            };
            Ok(root.max(2.0))
        }
        n => Err(Error::MultipleRoots { count: n }),
    }
}

/// Smallest α at which f_λ(α) saturates at 2, located by bisection on the
/// saturation indicator (f is non-increasing in α).
pub fn plagne_threshold(lambda: i64) -> Result<f64> {
    if plagne_f(lambda, 0.0)? <= 2.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5 - 1e-12);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if plagne_f(lambda, mid)? > 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The diameter bound 12·α^{1/4}·√(log(1/α))·N (natural log).
pub fn green_ruzsa_diameter(alpha: f64, n: u64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaDomain {
            alpha,
            range: "(0, 1)",
        });
    }
    Ok(12.0 * alpha.powf(0.25) * (1.0 / alpha).ln().sqrt() * n as f64)
}

/// Exact evaluation of the hypothesis α ≤ (16K)^{−12K²}. The threshold
/// underflows f64 already at K = 3, so the comparison cross-multiplies
/// with integer exponents: writing 12K² = n/q, it checks
/// α^q · (16K)^n ≤ 1.
pub fn green_ruzsa_applicable(alpha: &Rational, k: &Rational) -> Result<bool> {
    if !(alpha > &Rational::zero() && alpha < &Rational::one()) {
        return Err(Error::AlphaDomain {
            alpha: 0.0,
            range: "(0, 1)",
        });
    }
    if !k.is_positive() {
        return Err(Error::Parse(format!("K must be positive, got {k}")));
    }
    let exponent = BigRational::from_integer(BigInt::from(12)) * k * k;
    let n = exponent.numer().clone();
    let q = exponent.denom().clone();
    let base = BigRational::from_integer(BigInt::from(16)) * k;
    let lhs = rational_pow(alpha, &q) * rational_pow(&base, &n);
    Ok(lhs <= Rational::one())
}

fn rational_pow(base: &Rational, e: &BigInt) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    let mut e = e.clone();
    let two = BigInt::from(2);
    while e.is_positive() {
        if (&e % &two).is_one() {
            acc *= &b;
        }
        b = &b * &b;
        e /= &two;
    }
    acc
}

/// Lower bounds evaluated against a measured sumset.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub p: u64,
    pub set_size: u64,
    pub lambdas: DilateVector,
    /// Iterated Cauchy-Davenport: min(k·|A| − (k−1), p).
    pub cd: u64,
    /// Main term Σ|λᵢ|·|A| (error term not included).
    pub bukh_main: u64,
    /// f_λ(α)·|A| when λ̄ = (1, λ), λ ≥ 2. The constant w(λ) is unknown,
    /// so this is an upper estimate of that bound, and flagged as such.
    pub plagne_value: Option<f64>,
    pub plagne_is_upper_estimate: bool,
    /// 12α^{1/4}√(log(1/α))·p.
    pub green_ruzsa_diameter: f64,
    /// Measured |λ₁A + … + λₖA|.
    pub actual: u64,
}

/// Fill every applicable bound for (A, λ̄) and measure the true sumset.
pub fn bound_report(a: &ZpSet, dv: &DilateVector) -> Result<BoundReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = a.modulus();
    let size = a.len();
    let k = dv.len() as u64;
    let cd = (k * size - (k - 1)).min(p);
    let bukh_main = dv.weight() * size;
    let alpha = size as f64 / p as f64;
    let plagne_value = plagne_coefficient(dv, alpha).map(|f| f * size as f64);
    let actual = a.dilate_sum(dv)?.len();
    let report = BoundReport {
        p,
        set_size: size,
        lambdas: dv.clone(),
        cd,
        bukh_main,
        plagne_is_upper_estimate: plagne_value.is_some(),
        plagne_value,
        green_ruzsa_diameter: green_ruzsa_diameter(alpha, p)?,
        actual,
    };
    if dv.coeffs() == [1, 1] {
        debug_assert!(report.actual >= report.cd);
    }
    Ok(report)
}

fn plagne_coefficient(dv: &DilateVector, alpha: f64) -> Option<f64> {
    if dv.len() != 2 || alpha >= 0.5 {
        return None;
    }
    let (a, b) = (dv.coeffs()[0], dv.coeffs()[1]);
    let lambda = match (a, b) {
        (1, l) if l >= 2 => l,
        (l, 1) if l >= 2 => l,
        _ => return None,
    };
    plagne_f(lambda, alpha).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::rat;

    #[test]
    fn plagne_known_shape() {
        // small lambda saturates at 2
        assert_eq!(plagne_f(2, 0.0).unwrap(), 2.0);
        assert_eq!(plagne_f(3, 0.0).unwrap(), 2.0);
        // larger lambda stays strictly between 2 and 2.16
        for l in [4, 10, 50, 100] {
            let f = plagne_f(l, 0.0).unwrap();
            assert!(f > 2.0 && f < 2.16, "f_{l}(0) = {f}");
        }
        assert!(plagne_f(1, 0.0).is_err());
        assert!(plagne_f(5, 0.5).is_err());
    }

    #[test]
    fn plagne_monotone_in_alpha() {
        for l in [4i64, 20, 100] {
            let mut prev = f64::INFINITY;
            for i in 0..50 {
                let alpha = 0.06 * i as f64 / 50.0;
                let f = plagne_f(l, alpha).unwrap();
                assert!(f <= prev + 1e-9, "f_{l} not monotone at alpha={alpha}");
                prev = f;
            }
        }
    }

    #[test]
    fn plagne_continuity_and_residual() {
        let l = 50i64;
        let rhs_const = 51.0 * (std::f64::consts::PI / 51.0).sin();
        for i in 0..30 {
            let alpha = 0.04 * i as f64 / 30.0;
            let f = plagne_f(l, alpha).unwrap();
            let f2 = plagne_f(l, alpha + 1e-6).unwrap();
            if f > 2.0 && f2 > 2.0 {
                assert!((f - f2).abs() < 1e-3);
                let g =
                    f.powf(1.5) * (std::f64::consts::PI / f).sin() - rhs_const * (1.0 - alpha * f);
                assert!(g.abs() < 1e-6, "residual {g} at alpha={alpha}");
            }
        }
    }

    #[test]
    fn threshold_tends_to_limit() {
        // 1/2 - sqrt(2)/pi ~ 0.049841
        let a = plagne_threshold(1000).unwrap();
        assert!((a - (0.5 - std::f64::consts::SQRT_2 / std::f64::consts::PI)).abs() < 0.002);
    }

    #[test]
    fn green_ruzsa_diameter_plugin() {
        let alpha = (-4.0f64).exp();
        let v = green_ruzsa_diameter(alpha, 1000).unwrap();
        assert!((v - 24.0 * 1000.0 / std::f64::consts::E).abs() < 1e-6);
        assert!(green_ruzsa_diameter(0.0, 10).is_err());
    }

    #[test]
    fn green_ruzsa_applicability() {
        // 1e-3 <= 16^{-12} is false
        assert!(!green_ruzsa_applicable(&rat(1, 1000), &rat(1, 1)).unwrap());
        // the true threshold itself is admissible
        let threshold = Rational::one() / rational_pow(&rat(16, 1), &BigInt::from(12));
        assert!(green_ruzsa_applicable(&threshold, &rat(1, 1)).unwrap());
        // far below an astronomically small threshold: alpha = (16*3)^{-12*9-1}
        let tiny = Rational::one() / rational_pow(&rat(48, 1), &BigInt::from(109));
        assert!(green_ruzsa_applicable(&tiny, &rat(3, 1)).unwrap());
        // rational K exercises the cross-power path (12K^2 = 27/4 for K=3/4)
        let k = rat(3, 4);
        assert!(green_ruzsa_applicable(
            &(Rational::one() / rational_pow(&rat(12, 1), &BigInt::from(8))),
            &k
        )
        .unwrap());
    }

    #[test]
    fn smallest_alpha_with_useful_diameter_bound() {
        // numeric scan for the smallest grid alpha with 12 a^{1/4} sqrt(log 1/a) < 1/3
        let mut found = None;
        for i in 1..100000 {
            let alpha = i as f64 * 1e-9;
            if 12.0 * alpha.powf(0.25) * (1.0 / alpha).ln().sqrt() < 1.0 / 3.0 {
                found = Some(alpha);
                break;
            }
        }
        let alpha = found.expect("grid too coarse");
        assert!(green_ruzsa_diameter(alpha, 3).unwrap() < 1.0);
    }

    #[test]
    fn report_examples() {
        let a = ZpSet::from_residues(101, &(0..10).collect::<Vec<_>>()).unwrap();
        let dv = DilateVector::new(vec![1, 1]).unwrap();
        let r = bound_report(&a, &dv).unwrap();
        assert_eq!(r.cd, 19);
        assert_eq!(r.actual, 19);

        let dv = DilateVector::new(vec![1, 2]).unwrap();
        let r = bound_report(&a, &dv).unwrap();
        assert_eq!(r.bukh_main, 30);
        assert_eq!(r.actual, 28);
        assert!(r.plagne_value.is_some());
        assert!(r.plagne_is_upper_estimate);
    }

    #[test]
    fn report_on_cycle_witness() {
        // the cycle construction leaves 0 out of A + 2A, so the measured
        // sumset cannot fill Z_p
        let out = crate::construct::cycle_construction(10007, 1, 2).unwrap();
        let dv = DilateVector::new(vec![1, 2]).unwrap();
        let r = bound_report(&out.set, &dv).unwrap();
        assert!(r.actual <= r.p - 1);
        assert!(r.actual as f64 / r.set_size as f64 >= 1.0);
    }
}
