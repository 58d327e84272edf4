//! Exact coefficient sequences of `phi` and its transform.
//!
//! * `c_k`: power series coefficients of the Fourier transform,
//!   `phi_hat(z) = sum (-1)^k c_k / (2k)! (2 pi z)^{2k}`.
//! * `F_k`: the integers `c_k (2k+1)!! prod_{j<=k} (4^j - 1)`.
//! * `d_n`: Taylor coefficients (times `n!`) of `f(x) = 1 + x int_0^1 e^{xt} phi(t) dt`.
//! * `G_n`: the integers `d_n (n+1)! prod_{j<=n} (2^j - 1)`.
//! * moments `int_0^1 t^n phi(t) dt` and the values `phi(1 - 2^{-n})`.
//!
//! Both recurrences contain the unknown on the right; the top term is moved
//! across and the remaining linear equation solved exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{choose2, factorial, pow2, pow2_rational, BigRational, Pascal};

/// `c_0 ..= c_n`.
pub fn compute_c(n: usize) -> Vec<BigRational> {
    let pascal = Pascal::new(2 * n + 1);
    let mut c: Vec<BigRational> = Vec::with_capacity(n + 1);
    c.push(BigRational::one());
    for k in 1..=n {
        // ((2k+1) 4^k - (2k+1)) c_k = sum_{h<k} C(2k+1, 2h) c_h
        let odd = BigInt::from(2 * k + 1);
        let lhs = &odd * pow2(2 * k as u64) - &odd;
        let rhs: BigRational = (0..k)
            .map(|h| &c[h] * BigRational::from_integer(pascal.get(2 * k + 1, 2 * h)))
            .sum();
        c.push(rhs / BigRational::from_integer(lhs));
    }
    c
}

/// `(2k+1)(2k-1)...1`.
fn odd_double_factorial(k: usize) -> BigInt {
    (0..=k).fold(BigInt::one(), |acc, i| acc * (2 * i + 1))
}

/// `prod_{j=1..k} (base^j - 1)` for `base` a power of two given by its log.
fn mersenne_product(k: usize, log_base: u64) -> BigInt {
    (1..=k as u64).fold(BigInt::one(), |acc, j| acc * (pow2(j * log_base) - 1))
}

fn positive_integer(value: BigRational, table: &'static str, index: usize) -> Result<BigInt> {
    if value.is_integer() && value.is_positive() {
        Ok(value.to_integer())
    } else {
        Err(Error::NotIntegral {
            table,
            index,
            value: value.to_string(),
        })
    }
}

/// `F_k = c_k (2k+1)!! prod_{j=1..k} (4^j - 1)`. Fails if any entry is not a
/// positive integer, which only happens for a corrupted `c` table.
pub fn extract_f(c: &[BigRational]) -> Result<Vec<BigInt>> {
    c.iter()
        .enumerate()
        .map(|(k, ck)| {
            let scale = odd_double_factorial(k) * mersenne_product(k, 2);
            positive_integer(ck * BigRational::from_integer(scale), "F", k)
        })
        .collect()
}

/// `d_0 ..= d_n`.
pub fn compute_d(n: usize) -> Vec<BigRational> {
    let pascal = Pascal::new(n + 1);
    let mut d: Vec<BigRational> = Vec::with_capacity(n + 1);
    d.push(BigRational::one());
    for m in 1..=n {
        // (m+1)(2^m - 1) d_m = sum_{k<m} C(m+1, k) d_k
        let lhs = BigInt::from(m + 1) * (pow2(m as u64) - 1);
        let rhs: BigRational = (0..m)
            .map(|k| &d[k] * BigRational::from_integer(pascal.get(m + 1, k)))
            .sum();
        d.push(rhs / BigRational::from_integer(lhs));
    }
    d
}

/// `G_n = d_n (n+1)! prod_{j=1..n} (2^j - 1)`.
pub fn extract_g(d: &[BigRational]) -> Result<Vec<BigInt>> {
    d.iter()
        .enumerate()
        .map(|(n, dn)| {
            let scale = factorial(n as u64 + 1) * mersenne_product(n, 1);
            positive_integer(dn * BigRational::from_integer(scale), "G", n)
        })
        .collect()
}

/// `int_0^1 t^n phi(t) dt = d_{n+1} / (n+1)`.
pub fn moment(n: usize) -> BigRational {
    let d = compute_d(n + 1);
    moment_from_d(&d, n)
}

fn moment_from_d(d: &[BigRational], n: usize) -> BigRational {
    &d[n + 1] / BigRational::from_integer(BigInt::from(n + 1))
}

/// `phi(1 - 2^{-n}) = moment(n-1) / ((n-1)! 2^{C(n,2)})`, for `n >= 1`.
pub fn phi_near_one(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::OutOfDomain {
            what: "phi_near_one index",
            value: "0".into(),
            domain: "n >= 1",
        });
    }
    Ok(near_one_from_moment(&moment(n - 1), n))
}

fn near_one_from_moment(m: &BigRational, n: usize) -> BigRational {
    let n = n as u64;
    m / BigRational::from_integer(factorial(n - 1)) * pow2_rational(-(choose2(n) as i64))
}

/// `phi(1 - 2^{-2m-1})` through `F_m` alone:
/// `2^{-C(2m+1,2)} / (2 (2m)!) * F_m / ((2m+1)!! prod_{k<=m} (4^k - 1))`.
pub fn phi_near_one_odd_closed_form(m: usize, f_m: &BigInt) -> BigRational {
    let den = BigInt::from(2) * factorial(2 * m as u64) * odd_double_factorial(m) * mersenne_product(m, 2);
    BigRational::new(f_m.clone(), den) * pow2_rational(-(choose2(2 * m as u64 + 1) as i64))
}

/// `phi(1 - 2^{-2k-1})` for `k = 0..=k_max`, computed from `c_k` via the even moments.
pub fn phi_near_one_odd_from_c(c: &[BigRational]) -> Vec<BigRational> {
    c.iter()
        .enumerate()
        .map(|(k, ck)| {
            let half = ck / BigRational::from_integer(BigInt::from(2));
            near_one_from_moment(&half, 2 * k + 1)
        })
        .collect()
}

/// Order-by-order residuals of `f(2x) - ((e^x - 1)/x) f(x)` for
/// `f(x) = sum d_n x^n / n!`. Every entry is zero for a correct `d` table.
pub fn doubling_identity_residuals(d: &[BigRational]) -> Vec<BigRational> {
    let fact: Vec<BigInt> = (0..=d.len() as u64 + 1).map(factorial).collect();
    (0..d.len())
        .map(|n| {
            let lhs = &d[n] * pow2_rational(n as i64) / BigRational::from_integer(fact[n].clone());
            let rhs: BigRational = (0..=n)
                .map(|k| &d[k] / BigRational::from_integer(&fact[k] * &fact[n - k + 1]))
                .sum();
            lhs - rhs
        })
        .collect()
}

/// All exact sequences to a fixed order, built once and then read-only.
///
/// For order `N`: `c[0..=N]`, `d[0..=2N+1]`, `moments[0..=2N]`, and
/// `phi(1 - 2^{-n})` for `n = 1..=2N+1`.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    order: usize,
    c: Vec<BigRational>,
    f: Vec<BigInt>,
    d: Vec<BigRational>,
    g: Vec<BigInt>,
    moments: Vec<BigRational>,
    phi_near_one: Vec<BigRational>,
}

impl CoefficientTable {
    pub fn new(order: usize) -> Result<Self> {
        let c = compute_c(order);
        let f = extract_f(&c)?;
        let d = compute_d(2 * order + 1);
        let g = extract_g(&d)?;
        let moments: Vec<BigRational> = (0..=2 * order).map(|n| moment_from_d(&d, n)).collect();
        let phi_near_one = (1..=2 * order + 1)
            .map(|n| near_one_from_moment(&moments[n - 1], n))
            .collect();
        Ok(CoefficientTable {
            order,
            c,
            f,
            d,
            g,
            moments,
            phi_near_one,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn c(&self) -> &[BigRational] {
        &self.c
    }

    pub fn f(&self) -> &[BigInt] {
        &self.f
    }

    pub fn d(&self) -> &[BigRational] {
        &self.d
    }

    pub fn g(&self) -> &[BigInt] {
        &self.g
    }

    pub fn moments(&self) -> &[BigRational] {
        &self.moments
    }

    /// `phi(1 - 2^{-n})`, `1 <= n <= 2 * order + 1`.
    pub fn phi_near_one(&self, n: usize) -> Option<&BigRational> {
        n.checked_sub(1).and_then(|i| self.phi_near_one.get(i))
    }

    /// Checks the structural identities tying the sequences together.
    pub fn verify(&self) -> bool {
        let positive = self
            .c
            .iter()
            .chain(&self.d)
            .chain(&self.moments)
            .chain(&self.phi_near_one)
            .all(|v| v.is_positive());
        let two = BigRational::from_integer(BigInt::from(2));
        let even_moments = (0..=self.order).all(|m| self.moments[2 * m] == &self.c[m] / &two);
        let odd_closed = (0..=self.order).all(|m| {
            phi_near_one_odd_closed_form(m, &self.f[m]) == self.phi_near_one[2 * m]
        });
        let doubling = doubling_identity_residuals(&self.d).iter().all(Zero::is_zero);
        positive && even_moments && odd_closed && doubling
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn c_examples() {
        assert_eq!(compute_c(0), vec![q("1")]);
        assert_eq!(compute_c(1), vec![q("1"), q("1/9")]);
        let c = compute_c(4);
        assert_eq!(c[2], q("19/675"));
        // frozen from an independent Fraction-based evaluation of the recurrence
        assert_eq!(c[3], q("583/59535"));
        assert_eq!(c[4], q("132809/32531625"));
    }

    #[test]
    fn f_integers() {
        let f = extract_f(&compute_c(7)).unwrap();
        assert_eq!(&f[..5], &ints(&[1, 1, 19, 2915, 2_788_989])[..]);
        assert_eq!(f[5], BigInt::from(14_754_820_185i64));
        assert_eq!(f[6], BigInt::from(402_830_065_455_939i64));
    }

    #[test]
    fn corrupted_c_is_rejected() {
        let mut c = compute_c(3);
        c[2] = q("19/674");
        let err = extract_f(&c).unwrap_err();
        assert!(matches!(err, Error::NotIntegral { table: "F", index: 2, .. }));
        assert!(err.is_invariant_violation());
    }

    #[test]
    fn d_examples() {
        assert_eq!(compute_d(0), vec![q("1")]);
        assert_eq!(compute_d(1)[1], q("1/2"));
        let d = compute_d(3);
        assert_eq!(d[2], q("5/18"));
        assert_eq!(d[3], q("1/6"));
    }

    #[test]
    fn g_integers() {
        let g = extract_g(&compute_d(7)).unwrap();
        assert_eq!(g, ints(&[1, 1, 5, 84, 4004, 494_760, 150_120_600, 107_969_547_840]));
        let mut d = compute_d(3);
        d[3] = q("1/5");
        assert!(extract_g(&d).is_err());
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moment(0), q("1/2"));
        assert_eq!(moment(1), q("5/36"));
        assert_eq!(moment(2), q("1/18"));
        assert_eq!(moment(2), &compute_c(1)[1] / BigRational::from_integer(2.into()));
    }

    #[test]
    fn near_one_examples() {
        assert_eq!(phi_near_one(1).unwrap(), q("1/2"));
        assert_eq!(phi_near_one(2).unwrap(), q("5/72"));
        assert_eq!(phi_near_one(3).unwrap(), q("1/288"));
        assert_eq!(phi_near_one(3).unwrap() * BigRational::from_integer(33_177_600.into()), q("115200"));
        assert_eq!(phi_near_one(5).unwrap(), q("19/33177600"));
        assert!(phi_near_one(0).is_err());
    }

    #[test]
    fn closed_form_matches_moment_route() {
        let c = compute_c(6);
        let f = extract_f(&c).unwrap();
        let from_c = phi_near_one_odd_from_c(&c);
        for m in 0..=6 {
            let closed = phi_near_one_odd_closed_form(m, &f[m]);
            assert_eq!(closed, phi_near_one(2 * m + 1).unwrap());
            assert_eq!(closed, from_c[m]);
        }
    }

    #[test]
    fn doubling_identity_holds() {
        let d = compute_d(20);
        assert!(doubling_identity_residuals(&d).iter().all(Zero::is_zero));
        let mut bad = d.clone();
        bad[5] += q("1/1000");
        assert!(!doubling_identity_residuals(&bad)[5].is_zero());
    }

    #[test]
    fn table_is_consistent() {
        let t = CoefficientTable::new(10).unwrap();
        assert!(t.verify());
        assert_eq!(t.c().len(), 11);
        assert_eq!(t.d().len(), 22);
        assert_eq!(t.moments().len(), 21);
        assert_eq!(t.phi_near_one(5), Some(&q("19/33177600")));
        assert_eq!(t.phi_near_one(0), None);
        assert_eq!(t.phi_near_one(22), None);
        for m in 0..=10 {
            assert_eq!(t.moments()[2 * m], &t.c()[m] / BigRational::from_integer(2.into()));
        }
    }
}
