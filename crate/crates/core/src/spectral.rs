//! Double precision evaluation of the Fourier transform
//! `phi_hat(x) = prod_{m>=1} cos(pi x / 2^m)^m`, its power series, the cosine
//! expansion `phi(t) = 1/2 + sum_k phi_hat((2k+1)/2) cos((2k+1) pi t)` and the
//! Poisson summation identities built from them.
//!
//! Exact values never route through here.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::coefficients::compute_c;
use crate::dyadic_eval::phi_exact;
use crate::numeric::{factorial, thue_morse_sign, BigRational, Dyadic};

pub const DEFAULT_M_MAX: usize = 60;
pub const DEFAULT_K: usize = 64;

/// `sin(x) / x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `prod_{m=1..m_max} cos(pi x / 2^m)^m`.
pub fn ft_product(x: f64, m_max: usize) -> f64 {
    (1..=m_max)
        .map(|m| (PI * x / f64::powi(2.0, m as i32)).cos().powi(m as i32))
        .product()
}

/// Bound on `|1 - prod_{m > m_max} cos(pi x / 2^m)^m|`:
/// `sum_{m > m_max} m (pi x / 2^m)^2 / 2`.
pub fn ft_product_tail_bound(x: f64, m_max: usize) -> f64 {
    (m_max + 1..m_max + 200)
        .map(|m| {
            let a = PI * x / f64::powi(2.0, m as i32);
            m as f64 * a * a / 2.0
        })
        .sum()
}

/// `prod_{m=1..m_max} (1 - x^2/m^2)^{1 + v_2(m)}` times an estimate of the
/// neglected tail, `exp(-x^2 T_2 - x^4 T_4 / 2 - x^6 T_6 / 3)` with
/// `T_p = sum_{m > m_max} (1 + v_2(m)) / m^p`. The full sums are
/// `zeta(p) 2^p / (2^p - 1)`; the tail is that minus the partial sum.
pub fn ft_product_rational(x: f64, m_max: usize) -> f64 {
    let x2 = x * x;
    let mut product = 1.0;
    let mut partial = [0.0f64; 3];
    for m in 1..=m_max {
        let mf = m as f64;
        let weight = 1 + m.trailing_zeros() as i32;
        product *= (1.0 - x2 / (mf * mf)).powi(weight);
        let w = weight as f64;
        partial[0] += w / mf.powi(2);
        partial[1] += w / mf.powi(4);
        partial[2] += w / mf.powi(6);
    }
    let zeta = [PI.powi(2) / 6.0, PI.powi(4) / 90.0, PI.powi(6) / 945.0];
    let tail: Vec<f64> = (0..3)
        .map(|i| {
            let p = 2 * (i as i32 + 1);
            let two_p = f64::powi(2.0, p);
            zeta[i] * two_p / (two_p - 1.0) - partial[i]
        })
        .collect();
    let log_tail = -x2 * tail[0] - x2 * x2 * tail[1] / 2.0 - x2 * x2 * x2 * tail[2] / 3.0;
    product * log_tail.exp()
}

/// Series coefficients `(-1)^k c_k / (2k)! (2 pi)^{2k}` as doubles, rounded once.
pub fn series_coefficients(n: usize) -> Vec<f64> {
    compute_c(n)
        .iter()
        .enumerate()
        .map(|(k, ck)| {
            let exact = ck / BigRational::from_integer(factorial(2 * k as u64));
            let magnitude = exact.to_f64().unwrap_or(0.0) * (2.0 * PI).powi(2 * k as i32);
            if k % 2 == 0 {
                magnitude
            } else {
                -magnitude
            }
        })
        .collect()
}

/// Partial sum `sum_{k<=n} (-1)^k c_k / (2k)! (2 pi x)^{2k}`; meant for `|x| <= 1`.
pub fn ft_series(x: f64, n: usize) -> f64 {
    let x2 = x * x;
    series_coefficients(n)
        .iter()
        .rev()
        .fold(0.0, |acc, a| acc * x2 + a)
}

/// `phi_hat(x)`: the series for `|x| <= 1`, the product beyond.
pub fn phi_hat(x: f64) -> f64 {
    if x.abs() <= 1.0 {
        ft_series(x, 40)
    } else {
        ft_product(x, DEFAULT_M_MAX)
    }
}

/// `a[k] = phi_hat((2k+1)/2)` for `k < count`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub a: Vec<f64>,
    pub m_max: usize,
    /// Magnitudes at or below this are treated as numerically zero.
    pub tolerance: f64,
}

impl FourierCoefficients {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Indices whose sign differs from `(-1)^{s(k)}`, ignoring entries below tolerance.
    pub fn sign_violations(&self) -> Vec<usize> {
        self.a
            .iter()
            .enumerate()
            .filter(|(k, a)| a.abs() > self.tolerance && a.signum() as i32 != thue_morse_sign(*k as u64))
            .map(|(k, _)| k)
            .collect()
    }

    /// `1/2 + sum a[k]`, the series at `t = 0`.
    pub fn value_at_zero(&self) -> f64 {
        0.5 + self.a.iter().sum::<f64>()
    }
}

pub fn fourier_coefficients(count: usize, m_max: usize) -> FourierCoefficients {
    let a: Vec<f64> = (0..count)
        .map(|k| ft_product((2 * k + 1) as f64 / 2.0, m_max))
        .collect();
    let truncation = (0..count)
        .map(|k| ft_product_tail_bound((2 * k + 1) as f64 / 2.0, m_max))
        .fold(0.0, f64::max);
    FourierCoefficients {
        a,
        m_max,
        tolerance: truncation.max(f64::MIN_POSITIVE),
    }
}

/// `1/2 + sum_k a[k] cos((2k+1) pi t)` for `t` in `[-1, 1]`.
pub fn phi_fourier(t: f64, fc: &FourierCoefficients) -> f64 {
    0.5 + fc
        .a
        .iter()
        .enumerate()
        .map(|(k, a)| a * ((2 * k + 1) as f64 * PI * t).cos())
        .sum::<f64>()
}

/// `phi` on the whole line: the cosine series inside `[-1, 1]`, zero outside.
pub fn phi_fourier_extended(t: f64, fc: &FourierCoefficients) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        phi_fourier(t, fc)
    }
}

/// `sum_k phi(t + k/n)` over the lattice points inside `(-1, 1)`; equals `n`.
pub fn partition_of_unity(t: f64, n: u32, fc: &FourierCoefficients) -> f64 {
    let n = n as i64;
    let lo = ((-1.0 - t) * n as f64).floor() as i64;
    let hi = ((1.0 - t) * n as f64).ceil() as i64;
    (lo..=hi)
        .map(|k| phi_fourier_extended(t + k as f64 / n as f64, fc))
        .sum()
}

/// Exact version of [`partition_of_unity`] for a dyadic `t` and `n = 2^level`.
pub fn partition_of_unity_exact(t: &Dyadic, level: u64) -> BigRational {
    let n = 1i64 << level;
    let lo: BigInt = (&Dyadic::from_integer(-1) - t).shl(level as i64).floor();
    let hi: BigInt = (&Dyadic::one() - t).shl(level as i64).floor() + 1;
    let lo = lo.to_i64().unwrap_or(-n);
    let hi = hi.to_i64().unwrap_or(n);
    (lo..=hi)
        .map(|k| phi_exact(&(t + &Dyadic::new(BigInt::from(k), level))))
        .sum()
}

/// Truncated `sum_{|m| <= m_cut} phi_hat(m / a)`, with `m_cut` chosen so that
/// `m / a` reaches `x_max`.
pub fn poisson_rhs(a: f64, x_max: f64, m_max: usize) -> f64 {
    let m_cut = (x_max * a).ceil() as i64;
    let tail: f64 = (1..=m_cut).map(|m| ft_product(m as f64 / a, m_max)).sum();
    1.0 + 2.0 * tail
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl PoissonCheck {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Both sides of `a + 2a phi(a) = sum_m phi_hat(m / a)` for `1/2 <= a <= 1`.
///
/// This is Poisson summation `sum_m phi(ma) = (1/a) sum_m phi_hat(m/a)`
/// multiplied through by `a`, using `phi(ma) = 0` for `|m| >= 2`.
/// `phi(a)` comes from `exact` when supplied, otherwise from the cosine series.
pub fn poisson_check(
    a: f64,
    exact: Option<&BigRational>,
    fc: &FourierCoefficients,
    m_max: usize,
) -> PoissonCheck {
    let phi_a = match exact {
        Some(v) => v.to_f64().unwrap_or(f64::NAN),
        None => phi_fourier_extended(a, fc),
    };
    PoissonCheck {
        lhs: a + 2.0 * a * phi_a,
        rhs: poisson_rhs(a, 400.0, m_max),
    }
}

/// `sum_k phi(t + u k)` using exact dyadic values.
pub fn periodized_sum_exact(t: &Dyadic, u: &Dyadic) -> f64 {
    let uf = u.to_f64();
    let tf = t.to_f64();
    let lo = ((-1.0 - tf) / uf).floor() as i64 - 1;
    let hi = ((1.0 - tf) / uf).ceil() as i64 + 1;
    (lo..=hi)
        .map(|k| phi_exact(&(t + &(u * &Dyadic::from_integer(k)))))
        .sum::<BigRational>()
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// `sum_{|k| <= k_cut} (1/u) phi_hat(k/u) e^{2 pi i k t / u}` (real part; the
/// imaginary parts cancel because `phi_hat` is even).
pub fn periodized_synthesis(t: f64, u: f64, k_cut: usize, m_max: usize) -> f64 {
    let body: f64 = (1..=k_cut)
        .map(|k| {
            let x = k as f64 / u;
            2.0 * ft_product(x, m_max) * (2.0 * PI * x * t).cos()
        })
        .sum();
    (1.0 + body) / u
}

/// CSV rows `t,phi_fourier,phi_exact_if_dyadic,abs_err` over the grid `q/2^level`, `|q| <= 2^level`.
pub fn plot_rows(level: u64, fc: &FourierCoefficients) -> Vec<String> {
    let lim = 1i64 << level;
    (-lim..=lim)
        .map(|q| {
            let t = Dyadic::new(q, level);
            let approx = phi_fourier(t.to_f64(), fc);
            let exact = phi_exact(&t).to_f64().unwrap_or(f64::NAN);
            format!("{:.16e},{:.16e},{:.16e},{:.16e}", t.to_f64(), approx, exact, (approx - exact).abs())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_examples() {
        assert_eq!(ft_product(0.0, 60), 1.0);
        for x in [1.0, 2.0, 3.0, 7.0] {
            assert!(ft_product(x, 60).abs() <= 1e-15 + ft_product_tail_bound(x, 60));
        }
        assert!((ft_product(0.5, 60) - ft_series(0.5, 40)).abs() < 1e-12);
    }

    #[test]
    fn series_examples() {
        assert_eq!(ft_series(0.0, 10), 1.0);
        assert!((ft_series(0.25, 12) - ft_series(0.25, 13)).abs() < 1e-15);
        for x in [0.1, 0.3, 0.7, 1.0] {
            assert!((ft_series(x, 40) - ft_product(x, 60)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn transform_functional_equation() {
        for x in [0.1, 0.5, 1.7, 3.3] {
            let lhs = ft_product(x, 60);
            let rhs = sinc(PI * x) * ft_product(x / 2.0, 60);
            assert!((lhs - rhs).abs() <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn product_forms_agree() {
        for i in 0..=40 {
            let x = i as f64 * 0.1;
            let a = ft_product(x, 60);
            let b = ft_product_rational(x, 20_000);
            assert!((a - b).abs() <= 1e-10, "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn coefficient_signs_and_sum() {
        let fc = fourier_coefficients(64, 60);
        let signs: Vec<f64> = fc.a[..8].iter().map(|a| a.signum()).collect();
        assert_eq!(signs, vec![1.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0]);
        assert!(fc.sign_violations().is_empty());
        assert!((fc.value_at_zero() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn coefficients_decay_fast() {
        let fc = fourier_coefficients(17, 60);
        for k in [1usize, 2, 4, 8] {
            assert!(fc.a[2 * k].abs() < fc.a[k].abs() * 2f64.powi(-(k as i32)), "k = {k}");
        }
    }

    #[test]
    fn cosine_series_examples() {
        let fc = fourier_coefficients(64, 60);
        assert!((phi_fourier(0.0, &fc) - 1.0).abs() <= 1e-10);
        assert!(phi_fourier(1.0, &fc).abs() <= 1e-10);
        assert!(phi_fourier(-1.0, &fc).abs() <= 1e-10);
        assert!((phi_fourier(0.75, &fc) - 5.0 / 72.0).abs() <= 1e-10);
    }

    #[test]
    fn partition_of_unity_examples() {
        let fc = fourier_coefficients(64, 60);
        assert!((partition_of_unity(0.3, 1, &fc) - 1.0).abs() <= 1e-9);
        assert!((partition_of_unity(0.1, 3, &fc) - 3.0).abs() <= 1e-9);
        let exact = partition_of_unity_exact(&Dyadic::new(1, 1), 1);
        assert_eq!(exact, BigRational::from_integer(2.into()));
    }

    #[test]
    fn poisson_examples() {
        let fc = fourier_coefficients(64, 60);
        let one = poisson_check(1.0, Some(&BigRational::from_integer(0.into())), &fc, 60);
        assert_eq!(one.lhs, 1.0);
        assert!(one.gap() <= 1e-8);
        let v = phi_exact(&Dyadic::new(3, 2));
        let c = poisson_check(0.75, Some(&v), &fc, 60);
        assert!((c.lhs - (0.75 + 5.0 / 48.0)).abs() < 1e-15);
        assert!(c.gap() <= 1e-8, "{c:?}");
        let half = poisson_check(0.5, None, &fc, 60);
        assert!((half.lhs - 1.0).abs() <= 1e-10);
        assert!(half.gap() <= 1e-8, "{half:?}");
    }

    #[test]
    fn periodization_matches_synthesis() {
        for u in [1i64, 2] {
            for q in -8..=8 {
                let t = Dyadic::new(q, 3);
                let lhs = periodized_sum_exact(&t, &Dyadic::from_integer(u));
                let rhs = periodized_synthesis(t.to_f64(), u as f64, 200, 60);
                assert!((lhs - rhs).abs() <= 1e-8, "u = {u}, t = {t}: {lhs} vs {rhs}");
            }
        }
    }
}
