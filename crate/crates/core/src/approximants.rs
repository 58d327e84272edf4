//! The polynomials `p_n` and the step functions `phi_n` that converge to `phi`.
//!
//! `p_0 = 1`, `p_n(x) = p_{n-1}(x^2) (1 + x)^n`. The coefficient of `x^m` in
//! `p_n` counts tuples `(s_1, ..., s_n)` with `0 <= s_i <= 2^i - 1` summing
//! to `m`. Replacing `x^m` in `2^{-C(n+1,2)} p_n(x)` by `2^n` times the
//! indicator of `[(2m-1-g_n)/2^{n+1}, (2m+1-g_n)/2^{n+1})` gives `phi_n`.

use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::{choose2, pow2, pow2_rational, BigRational, Dyadic, Pascal};

/// Dense integer polynomial; `coeffs[i]` multiplies `x^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn one() -> Self {
        IntPolynomial::new(vec![BigInt::one()])
    }

    /// `1 + x + ... + x^{len-1}`.
    pub fn geometric(len: usize) -> Self {
        IntPolynomial::new(vec![BigInt::one(); len])
    }

    /// `(1 + x)^n`.
    pub fn binomial(n: usize) -> Self {
        IntPolynomial::new(Pascal::new(n).row(n).to_vec())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `p(x^2)`.
    pub fn compose_square(&self) -> Self {
        let mut out = vec![BigInt::zero(); 2 * self.coeffs.len() - 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        IntPolynomial::new(out)
    }

    /// Sum of coefficients, `p(1)`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact quotient by a monic divisor; `None` when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let dlen = divisor.coeffs.len();
        if dlen > self.coeffs.len() {
            return self.coeffs.iter().all(Zero::is_zero).then(|| IntPolynomial::new(vec![]));
        }
        let lead = divisor.coeffs.last()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dlen + 1];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dlen - 1];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return None;
            }
            let factor = top / lead;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &factor * dc;
            }
            quot[i] = factor;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPolynomial::new(quot))
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

/// `p_n` through `p_n(x) = p_{n-1}(x^2) (1 + x)^n`.
pub fn poly_p(n: usize) -> IntPolynomial {
    (1..=n).fold(IntPolynomial::one(), |p, k| {
        &p.compose_square() * &IntPolynomial::binomial(k)
    })
}

/// `p_n` as `(1 + x)(1 + x + x^2 + x^3) ... (1 + ... + x^{2^n - 1})`.
pub fn poly_p_factored(n: usize) -> IntPolynomial {
    (1..=n).fold(IntPolynomial::one(), |p, k| &p * &IntPolynomial::geometric(1 << k))
}

/// `p_n` as `prod_{k=1..n} (1 - x^{2^k}) / (1 - x)`, each quotient by exact division.
pub fn poly_p_quotients(n: usize) -> IntPolynomial {
    let one_minus_x = IntPolynomial::new(vec![BigInt::one(), BigInt::from(-1)]);
    (1..=n).fold(IntPolynomial::one(), |p, k| {
        let mut num = vec![BigInt::zero(); (1 << k) + 1];
        num[0] = BigInt::one();
        num[1 << k] = BigInt::from(-1);
        let q = IntPolynomial::new(num)
            .div_exact(&one_minus_x)
            .expect("1 - x divides 1 - x^(2^k)");
        &p * &q
    })
}

/// `deg p_n`: `g_0 = 0`, `g_n = 2 g_{n-1} + n`.
pub fn degree_g(n: usize) -> usize {
    (1..=n).fold(0, |g, k| 2 * g + k)
}

/// Number of tuples `(s_1..s_m)` with `0 <= s_i <= 2^i - 1` and sum `r`,
/// by direct enumeration.
pub fn restricted_partitions(m: usize, r: usize) -> BigInt {
    fn count(i: usize, m: usize, remaining: usize) -> u64 {
        if i > m {
            return u64::from(remaining == 0);
        }
        let max = (1usize << i) - 1;
        (0..=max.min(remaining))
            .map(|s| count(i + 1, m, remaining - s))
            .sum()
    }
    BigInt::from(count(1, m, r))
}

/// A step function on the uniform partition of width `2^{-level}` starting
/// at `left`, with plateaus `[left + j w, left + (j+1) w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    level: u64,
    left: Dyadic,
    values: Vec<BigRational>,
}

impl StepFunction {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn left_edge(&self) -> &Dyadic {
        &self.left
    }

    pub fn right_edge(&self) -> Dyadic {
        &self.left + &Dyadic::new(self.values.len() as i64, self.level)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn width(&self) -> Dyadic {
        Dyadic::new(1, self.level)
    }

    /// `[left, right)` of plateau `j`.
    pub fn interval(&self, j: usize) -> (Dyadic, Dyadic) {
        let lo = &self.left + &Dyadic::new(j as i64, self.level);
        let hi = &lo + &self.width();
        (lo, hi)
    }

    /// Value of the plateau containing `t`; zero outside the support.
    pub fn eval(&self, t: &Dyadic) -> BigRational {
        let idx = (t - &self.left).shl(self.level as i64).floor();
        if idx.is_negative() {
            return BigRational::zero();
        }
        idx.to_usize()
            .and_then(|j| self.values.get(j).cloned())
            .unwrap_or_else(BigRational::zero)
    }

    /// `(phi_n(t-) + phi_n(t+)) / 2`: equal to [`StepFunction::eval`] except
    /// on plateau edges, where the two adjacent plateaus are averaged.
    pub fn eval_normalized(&self, t: &Dyadic) -> BigRational {
        let offset = (t - &self.left).shl(self.level as i64);
        if !offset.is_integer() {
            return self.eval(t);
        }
        let below = t - &Dyadic::new(1, self.level + 1);
        (self.eval(&below) + self.eval(t)) / BigRational::from_integer(BigInt::from(2))
    }

    /// `sum values * 2^{-level}`.
    pub fn integral(&self) -> BigRational {
        let sum: BigRational = self.values.iter().sum();
        sum * pow2_rational(-(self.level as i64))
    }

    /// Non-decreasing up to the maximum, non-increasing after it.
    pub fn is_unimodal(&self) -> bool {
        let peak = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1))
            .map_or(0, |(i, _)| i);
        self.values[..=peak].windows(2).all(|w| w[0] <= w[1])
            && self.values[peak..].windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_symmetric(&self) -> bool {
        self.values.iter().eq(self.values.iter().rev())
            && (&self.left + &self.right_edge()).is_zero()
    }

    pub fn max_value(&self) -> BigRational {
        self.values.iter().max().cloned().unwrap_or_default()
    }

    /// CSV rows `left_edge,right_edge,value` in exact serializations.
    pub fn csv_rows(&self) -> Vec<String> {
        (0..self.values.len())
            .map(|j| {
                let (lo, hi) = self.interval(j);
                format!("{lo},{hi},{}", self.values[j])
            })
            .collect()
    }
}

/// The level `n` approximant `phi_n`.
pub fn step_function(n: usize) -> StepFunction {
    let p = poly_p(n);
    let g = degree_g(n) as i64;
    let level = n as u64;
    // 2^n * 2^{-C(n+1,2)}
    let scale = pow2_rational(n as i64 - choose2(level + 1) as i64);
    let values = p
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()) * &scale)
        .collect();
    StepFunction {
        level,
        left: Dyadic::new(-1 - g, level + 1),
        values,
    }
}

/// `2^{C(n+1,2)}`, the value of `p_n(1)`.
pub fn coefficient_sum(n: usize) -> BigInt {
    pow2(choose2(n as u64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn poly(v: &[i64]) -> IntPolynomial {
        IntPolynomial::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn p_examples() {
        assert_eq!(poly_p(0), poly(&[1]));
        assert_eq!(poly_p(1), poly(&[1, 1]));
        assert_eq!(poly_p(2), poly(&[1, 2, 2, 2, 1]));
    }

    #[test]
    fn three_constructions_agree() {
        for n in 0..=8 {
            let p = poly_p(n);
            assert_eq!(p, poly_p_factored(n), "n = {n}");
            assert_eq!(p, poly_p_quotients(n), "n = {n}");
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_g(0), 0);
        assert_eq!(degree_g(2), 4);
        assert_eq!(degree_g(3), 11);
        assert_eq!(degree_g(8), 502);
        for n in 0..=10 {
            assert_eq!(poly_p(n).degree(), degree_g(n));
            // g_n / 2^n = sum_{k<=n} k / 2^k
            let series: BigRational = (1..=n).map(|k| r(&k.to_string()) * pow2_rational(-(k as i64))).sum();
            assert_eq!(r(&degree_g(n).to_string()) * pow2_rational(-(n as i64)), series);
        }
    }

    #[test]
    fn shifted_product_identity() {
        for m in 0..=6 {
            let next = &poly_p(m) * &IntPolynomial::geometric(1 << (m + 1));
            assert_eq!(next, poly_p(m + 1));
        }
    }

    #[test]
    fn coefficients_positive_palindromic_and_sum() {
        for n in 0..=8 {
            let p = poly_p(n);
            assert!(p.is_palindromic());
            assert!(p.coeffs().iter().all(|c| c.is_positive()));
            assert_eq!(p.eval_at_one(), coefficient_sum(n));
        }
    }

    #[test]
    fn partition_examples() {
        assert_eq!(restricted_partitions(2, 2), BigInt::from(2));
        assert_eq!(restricted_partitions(2, 4), BigInt::from(1));
        assert_eq!(restricted_partitions(2, 5), BigInt::from(0));
        for m in 0..=5 {
            assert_eq!(restricted_partitions(m, 0), BigInt::from(1));
        }
    }

    #[test]
    fn partitions_match_coefficients() {
        for n in 0..=5 {
            let p = poly_p(n);
            for m in 0..=p.degree() + 1 {
                assert_eq!(p.coeff(m), restricted_partitions(n, m), "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn div_exact_rejects_remainders() {
        let divisor = poly(&[1, 1]);
        assert_eq!(poly(&[1, 2, 1]).div_exact(&divisor), Some(poly(&[1, 1])));
        assert_eq!(poly(&[1, 0, 1]).div_exact(&divisor), None);
    }

    #[test]
    fn step_function_examples() {
        let s0 = step_function(0);
        assert_eq!(s0.values(), &[r("1")]);
        assert_eq!(s0.interval(0), (Dyadic::new(-1, 1), Dyadic::new(1, 1)));

        let s1 = step_function(1);
        assert_eq!(s1.values(), &[r("1"), r("1")]);
        assert_eq!(s1.left_edge(), &Dyadic::new(-1, 1));
        assert_eq!(s1.right_edge(), Dyadic::new(1, 1));

        let s2 = step_function(2);
        assert_eq!(s2.values(), &[r("1/2"), r("1"), r("1"), r("1"), r("1/2")]);
        assert_eq!(s2.left_edge(), &Dyadic::new(-5, 3));
        assert_eq!(s2.width(), Dyadic::new(1, 2));
    }

    #[test]
    fn step_eval_examples() {
        let s2 = step_function(2);
        assert_eq!(s2.eval(&Dyadic::zero()), r("1"));
        assert_eq!(s2.eval(&Dyadic::new(-5, 3)), r("1/2"));
        assert_eq!(s2.eval(&Dyadic::new(-3, 3)), r("1"));
        assert_eq!(s2.eval(&Dyadic::new(5, 3)), r("0"));
        assert_eq!(s2.eval(&Dyadic::new(-11, 4)), r("0"));
        assert_eq!(s2.eval(&Dyadic::one()), r("0"));
    }

    #[test]
    fn step_functions_are_normalized_unimodal_symmetric() {
        for n in 0..=9 {
            let s = step_function(n);
            assert_eq!(s.integral(), r("1"), "n = {n}");
            assert!(s.is_unimodal());
            assert!(s.is_symmetric());
            assert_eq!(s.max_value(), r("1"));
            assert_eq!(s.eval(&Dyadic::zero()), r("1"));
        }
    }

    #[test]
    fn normalized_eval_averages_edges() {
        let s2 = step_function(2);
        assert_eq!(s2.eval_normalized(&Dyadic::new(-5, 3)), r("1/4"));
        assert_eq!(s2.eval_normalized(&Dyadic::new(-3, 3)), r("3/4"));
        assert_eq!(s2.eval_normalized(&Dyadic::new(-1, 2)), r("1"));
        assert_eq!(s2.eval_normalized(&Dyadic::new(5, 3)), r("1/4"));
    }

    #[test]
    fn csv_rows_use_exact_forms() {
        let rows = step_function(2).csv_rows();
        assert_eq!(rows[0], "-5/2^3,-3/2^3,1/2");
        assert_eq!(rows.len(), 5);
    }
}
