//! Exact values of `phi`, `theta` and every derivative `phi^(k)` at dyadic points.
//!
//! `theta(t) = sum_{k>=0} (-1)^{s(k)} phi(t - 2k - 1)` satisfies
//! `theta'(t) = 2 theta(2t)`, and on `[-1, 1]`
//! `phi^(k)(t) = 2^{C(k+1,2)} theta(2^k t + 2^k)`.
//!
//! For `t = q/2^n` with `|q| <= 2^n`, integrating the order `n` Taylor
//! remainder against that derivative gives
//!
//! ```text
//! phi(q/2^n) = 2 sum_{h=0}^{q+2^n-1} sum_{k=0}^{n/2} (-1)^{s(h)}
//!              2^{C(2k+1,2) - C(n+1,2)} / (n-2k)! (A - 2h)^{n-2k} phi(1 - 2^{-2k-1})
//! ```
//!
//! with `A = 2q + 2^{n+1} - 1`. [`phi_exact_raw`] evaluates this sum term by
//! term. The default path splits `0..H` into aligned power-of-two blocks
//! `[b, b + 2^r)`, on which `(-1)^{s(b + j)} = (-1)^{s(b)} (-1)^{s(j)}`, and
//! expands `(A - 2b - 2j)^p` against the Thue-Morse power sums
//! `M_r(i) = sum_{j<2^r} (-1)^{s(j)} j^i`. The h-sum then costs one block per
//! set bit of `H` instead of `H` terms.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coefficients::{compute_c, phi_near_one_odd_from_c};
use crate::error::{Error, Result};
use crate::numeric::{choose2, digit_sum, factorial, pow2, pow2_rational, BigRational, Dyadic, Pascal};

/// Largest level accepted by [`phi_exact_raw`]; the raw h-sum has `~2^n` terms.
pub const RAW_MAX_LEVEL: u64 = 26;

/// Precomputed tables for evaluation up to a fixed dyadic level.
#[derive(Debug)]
pub struct DyadicEvaluator {
    capacity: u64,
    near_one_odd: Vec<BigRational>,
    pascal: Pascal,
    // tm[r][i] = sum_{j < 2^r} (-1)^{s(j)} j^i
    tm: Vec<Vec<BigInt>>,
    factorials: Vec<BigInt>,
}

impl DyadicEvaluator {
    /// Tables for points `q / 2^n` with `n <= capacity`.
    pub fn new(capacity: u64) -> Self {
        let cap = capacity as usize;
        let c = compute_c(cap / 2);
        let near_one_odd = phi_near_one_odd_from_c(&c);
        let pascal = Pascal::new(cap + 1);
        let mut tm: Vec<Vec<BigInt>> = Vec::with_capacity(cap + 2);
        let mut base = vec![BigInt::zero(); cap + 1];
        base[0] = BigInt::one();
        tm.push(base);
        for r in 0..=cap {
            let prev = &tm[r];
            let next: Vec<BigInt> = (0..=cap)
                .map(|i| {
                    // second half of the block carries the opposite sign and is shifted by 2^r
                    let shifted: BigInt = (0..=i)
                        .map(|l| pascal.get(i, l) * (pow2((r * (i - l)) as u64)) * &prev[l])
                        .sum();
                    &prev[i] - shifted
                })
                .collect();
            tm.push(next);
        }
        let factorials = (0..=capacity).map(factorial).collect();
        DyadicEvaluator {
            capacity,
            near_one_odd,
            pascal,
            tm,
            factorials,
        }
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    /// Exact `phi(t)`.
    pub fn phi(&self, t: &Dyadic) -> BigRational {
        let one = Dyadic::one();
        let mut x = -t.abs();
        if x <= -one.clone() {
            return BigRational::zero();
        }
        // phi(x) = 1 - phi(-1 - x) moves x from [-1/2, 0] into [-1, -1/2]
        let mut complement = false;
        if x > Dyadic::new(-1, 1) {
            x = &(-&x) - &one;
            complement = true;
        }
        if x.exp() > self.capacity {
            return DyadicEvaluator::new(x.exp()).phi(t);
        }
        let value = self.phi_formula(x.num(), x.exp());
        if complement {
            BigRational::one() - value
        } else {
            value
        }
    }

    /// Closed formula at `q / 2^n`, `|q| <= 2^n`, `n <= capacity`.
    fn phi_formula(&self, q: &BigInt, n: u64) -> BigRational {
        let h_count: BigInt = q + pow2(n);
        if !h_count.is_positive() {
            return BigRational::zero();
        }
        let a = BigInt::from(2) * q + pow2(n + 1) - 1;
        let sums = self.signed_power_sums(&a, &h_count, n as usize);
        self.combine(&sums, n)
    }

    /// `P_p = sum_{h < count} (-1)^{s(h)} (a - 2h)^p` for `p = 0..=n`.
    fn signed_power_sums(&self, a: &BigInt, count: &BigInt, n: usize) -> Vec<BigInt> {
        let mut sums = vec![BigInt::zero(); n + 1];
        let bits = count.bits();
        let mut start = BigInt::zero();
        let mut blocks_taken = 0u32;
        for r in (0..bits).rev() {
            if !count.bit(r) {
                continue;
            }
            let negative = blocks_taken % 2 == 1;
            let base: BigInt = a - BigInt::from(2) * &start;
            let mut base_pows = Vec::with_capacity(n + 1);
            base_pows.push(BigInt::one());
            for p in 1..=n {
                let next = &base_pows[p - 1] * &base;
                base_pows.push(next);
            }
            let tm = &self.tm[r as usize];
            for (p, sum) in sums.iter_mut().enumerate() {
                // (base - 2j)^p = sum_i C(p,i) base^{p-i} (-2)^i j^i; M_r(i) = 0 for i < r
                let mut block = BigInt::zero();
                for i in (r as usize).min(p + 1)..=p {
                    if tm[i].is_zero() {
                        continue;
                    }
                    let mut term = self.pascal.get(p, i) * &base_pows[p - i] * &tm[i];
                    term <<= i;
                    if i % 2 == 1 {
                        term = -term;
                    }
                    block += term;
                }
                if negative {
                    *sum -= block;
                } else {
                    *sum += block;
                }
            }
            start += pow2(r);
            blocks_taken += 1;
        }
        sums
    }

    fn combine(&self, sums: &[BigInt], n: u64) -> BigRational {
        let mut total = BigRational::zero();
        for k in 0..=(n / 2) {
            let p = (n - 2 * k) as usize;
            if sums[p].is_zero() {
                continue;
            }
            let scale = pow2_rational(choose2(2 * k + 1) as i64 - choose2(n + 1) as i64);
            let term = BigRational::new(sums[p].clone(), self.factorials[p].clone())
                * scale
                * &self.near_one_odd[k as usize];
            total += term;
        }
        total * BigRational::from_integer(BigInt::from(2))
    }

    /// Exact `theta(t)`.
    pub fn theta(&self, t: &Dyadic) -> BigRational {
        if t.num().is_negative() {
            return BigRational::zero();
        }
        // the only translate whose support meets t: 2k <= t < 2k + 2
        let k = t.shl(-1).floor();
        let shift = Dyadic::from_integer(BigInt::from(2) * &k + 1);
        let u = t - &shift;
        let value = self.phi(&u);
        let parity = k.magnitude().count_ones() % 2;
        if parity == 1 {
            -value
        } else {
            value
        }
    }

    /// Exact `phi^(k)(t)`.
    pub fn derivative(&self, k: u64, t: &Dyadic) -> BigRational {
        if t.abs() > Dyadic::one() {
            return BigRational::zero();
        }
        let arg = (t + &Dyadic::one()).shl(k as i64);
        self.theta(&arg) * pow2_rational(choose2(k + 1) as i64)
    }

    /// Taylor coefficients `phi^(k)(t) / k!` for `k = 0..=max_order`.
    pub fn taylor(&self, t: &Dyadic, max_order: usize) -> TaylorPolynomial {
        let coeffs = (0..=max_order)
            .map(|k| self.derivative(k as u64, t) / BigRational::from_integer(factorial(k as u64)))
            .collect();
        TaylorPolynomial {
            center: t.clone(),
            coeffs,
        }
    }
}

static SHARED: RwLock<Option<Arc<DyadicEvaluator>>> = RwLock::new(None);

/// Process-wide evaluator covering at least `level`. Grows by rebuilding
/// under a write lock; concurrent growth requests converge on one table.
pub fn shared_evaluator(level: u64) -> Arc<DyadicEvaluator> {
    if let Some(ev) = SHARED.read().unwrap_or_else(|e| e.into_inner()).as_ref() {
        if ev.capacity() >= level {
            return Arc::clone(ev);
        }
    }
    let mut guard = SHARED.write().unwrap_or_else(|e| e.into_inner());
    if let Some(ev) = guard.as_ref() {
        if ev.capacity() >= level {
            return Arc::clone(ev);
        }
    }
    let current = guard.as_ref().map_or(0, |ev| ev.capacity());
    let capacity = level.max(16).max(current.saturating_mul(2));
    let ev = Arc::new(DyadicEvaluator::new(capacity));
    *guard = Some(Arc::clone(&ev));
    ev
}

/// Exact `phi(t)` at a dyadic point; zero for `|t| >= 1`.
pub fn phi_exact(t: &Dyadic) -> BigRational {
    shared_evaluator(t.exp() + 1).phi(t)
}

/// Exact `theta(t)`; zero for `t < 0` and at even integers.
pub fn theta_exact(t: &Dyadic) -> BigRational {
    shared_evaluator(t.exp() + 1).theta(t)
}

/// Exact `phi^(k)(t)`; zero outside `[-1, 1]`.
pub fn phi_derivative(k: u64, t: &Dyadic) -> BigRational {
    shared_evaluator(t.exp() + 1).derivative(k, t)
}

pub fn taylor_at(t: &Dyadic, max_order: usize) -> TaylorPolynomial {
    shared_evaluator(t.exp() + 1).taylor(t, max_order)
}

/// Values `phi(q / 2^n)` for `q = 0..=2^n` with their least common denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTable {
    pub level: u64,
    pub denominator: BigInt,
    pub values: Vec<BigRational>,
}

impl LevelTable {
    /// `denominator * phi(q / 2^n)`, always an integer.
    pub fn scaled(&self, q: usize) -> BigInt {
        (&self.values[q] * BigRational::from_integer(self.denominator.clone())).to_integer()
    }
}

pub fn level_table(n: u64) -> LevelTable {
    let ev = shared_evaluator(n + 1);
    let values: Vec<BigRational> = (0..=(1u64 << n)).map(|q| ev.phi(&Dyadic::new(q, n))).collect();
    let denominator = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    LevelTable {
        level: n,
        denominator,
        values,
    }
}

/// The closed double sum evaluated term by term at the point's canonical
/// level, with no symmetry reductions. Intended for differential testing.
pub fn phi_exact_raw(t: &Dyadic) -> Result<BigRational> {
    let n = t.exp();
    if n > RAW_MAX_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "raw evaluation limited to level {RAW_MAX_LEVEL}, got {n}"
        )));
    }
    let bound = 1i64 << n;
    let q = match t.num().to_i64() {
        Some(q) if q.abs() <= bound => q,
        _ => return Ok(BigRational::zero()),
    };
    let near_one = phi_near_one_odd_from_c(&compute_c((n / 2) as usize));
    let a = 2 * q + 2 * bound - 1;
    let mut total = BigRational::zero();
    for k in 0..=(n / 2) {
        let p = (n - 2 * k) as u32;
        let mut sum = BigInt::zero();
        for h in 0..(q + bound).max(0) {
            let term = BigInt::from(a - 2 * h).pow(p);
            if digit_sum(h as u64).is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let scale = pow2_rational(choose2(2 * k + 1) as i64 - choose2(n + 1) as i64);
        total += BigRational::new(sum, factorial(p as u64)) * scale * &near_one[k as usize];
    }
    Ok(total * BigRational::from_integer(BigInt::from(2)))
}

/// `T(t, x) = sum_k phi^(k)(t) / k! x^k`, stored up to the requested order.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPolynomial {
    pub center: Dyadic,
    pub coeffs: Vec<BigRational>,
}

impl TaylorPolynomial {
    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(&self) -> TaylorPolynomial {
        let len = self.degree().map_or(0, |d| d + 1);
        TaylorPolynomial {
            center: self.center.clone(),
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    /// Value at offset `x` from the center.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn d(q: i64, n: u64) -> Dyadic {
        Dyadic::new(q, n)
    }

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_exact(&d(0, 0)), r("1"));
        assert_eq!(phi_exact(&d(31, 5)), r("19/33177600"));
        assert_eq!(phi_exact(&d(3, 2)), r("5/72"));
        assert_eq!(phi_exact(&d(-1, 0)), r("0"));
        assert_eq!(phi_exact(&d(1, 1)), r("1/2"));
        assert_eq!(phi_exact(&d(7, 3)), r("1/288"));
        assert_eq!(phi_exact(&d(5, 1)), r("0"));
    }

    #[test]
    fn raw_formula_hand_values() {
        assert_eq!(phi_exact_raw(&d(0, 0)).unwrap(), r("1"));
        assert_eq!(phi_exact_raw(&d(1, 1)).unwrap(), r("1/2"));
        assert_eq!(phi_exact_raw(&d(-1, 1)).unwrap(), r("1/2"));
        assert_eq!(phi_exact_raw(&d(3, 2)).unwrap(), r("5/72"));
        assert_eq!(phi_exact_raw(&d(-1, 0)).unwrap(), r("0"));
        assert_eq!(phi_exact_raw(&d(1, 0)).unwrap(), r("0"));
        assert!(phi_exact_raw(&d(1, RAW_MAX_LEVEL + 1)).is_err());
    }

    #[test]
    fn raw_and_block_routes_agree() {
        for n in 0..=9u64 {
            let lim = 1i64 << n;
            for q in -lim..=lim {
                let t = Dyadic::new(q, n);
                if t.exp() != n && n > 0 {
                    continue;
                }
                assert_eq!(phi_exact_raw(&t).unwrap(), phi_exact(&t), "t = {t}");
            }
        }
    }

    #[test]
    fn unreduced_block_formula_matches_reduced() {
        // the block decomposition on its own, including q > 0 where H exceeds 2^n
        let ev = DyadicEvaluator::new(8);
        for q in -256i64..=256 {
            let t = Dyadic::new(q, 8);
            let direct = ev.phi_formula(&BigInt::from(q), 8);
            assert_eq!(direct, ev.phi(&t), "q = {q}");
        }
    }

    #[test]
    fn high_level_points_extend_capacity() {
        let ev = DyadicEvaluator::new(4);
        let t = Dyadic::new(-2_000_001, 21);
        assert_eq!(ev.phi(&t), phi_exact(&t));
        assert_eq!(phi_exact(&t), BigRational::one() - phi_exact(&(&t + &Dyadic::one())));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_exact(&d(1, 0)), r("1"));
        assert_eq!(theta_exact(&d(3, 0)), r("-1"));
        assert_eq!(theta_exact(&d(1, 1)), r("1/2"));
        assert_eq!(theta_exact(&d(-1, 1)), r("0"));
        for k in 0..40 {
            assert_eq!(theta_exact(&d(2 * k, 0)), r("0"));
        }
    }

    #[test]
    fn theta_doubling_on_grid() {
        // theta'(t) = 2 theta(2t), checked through phi' = 2(phi(2t+1) - phi(2t-1))
        // applied to each translate: theta'(t) = 2 sum (-1)^{s(k)} (phi(2t-4k-1) - phi(2t-4k-3))
        for q in 0..=(16 * 8) {
            let t = d(q, 4);
            let mut lhs = BigRational::zero();
            for k in 0..5i64 {
                let u = &t - &d(2 * k + 1, 0);
                let du = phi_derivative(1, &u);
                if digit_sum(k as u64).is_multiple_of(2) {
                    lhs += du;
                } else {
                    lhs -= du;
                }
            }
            let rhs = theta_exact(&t.shl(1)) * BigRational::from_integer(2.into());
            assert_eq!(lhs, rhs, "t = {t}");
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(phi_derivative(1, &d(-1, 1)), r("2"));
        assert_eq!(phi_derivative(2, &d(-3, 2)), r("8"));
        assert_eq!(phi_derivative(5, &d(0, 0)), r("0"));
        assert_eq!(phi_derivative(0, &d(3, 2)), phi_exact(&d(3, 2)));
        assert_eq!(phi_derivative(3, &d(5, 1)), r("0"));
    }

    #[test]
    fn taylor_examples() {
        let t = taylor_at(&d(0, 0), 3);
        assert_eq!(t.coeffs, vec![r("1"), r("0"), r("0"), r("0")]);
        let t = taylor_at(&d(-1, 1), 2);
        assert_eq!(t.coeffs, vec![r("1/2"), r("2"), r("0")]);
        assert_eq!(t.degree(), Some(1));
        assert_eq!(t.trimmed().coeffs.len(), 2);
        let t = taylor_at(&d(-1, 0), 5);
        assert_eq!(t.coeffs, vec![r("0"); 6]);
        assert_eq!(t.degree(), None);
    }

    #[test]
    fn taylor_degree_is_level_for_odd_numerators() {
        for n in 1..=5u64 {
            for q in (-(1i64 << n) + 1..(1i64 << n)).step_by(2) {
                let t = taylor_at(&d(q, n), n as usize + 4);
                assert_eq!(t.degree(), Some(n as usize), "q = {q}, n = {n}");
            }
        }
    }

    #[test]
    fn level_five_denominator() {
        let table = level_table(5);
        assert_eq!(table.denominator, BigInt::from(33_177_600u64));
        assert_eq!(table.scaled(16), BigInt::from(16_588_800u64));
        assert_eq!(table.scaled(32), BigInt::zero());
        let t1 = level_table(1);
        assert_eq!(t1.values, vec![r("1"), r("1/2"), r("0")]);
        assert_eq!(t1.denominator, BigInt::from(2));
    }
}
