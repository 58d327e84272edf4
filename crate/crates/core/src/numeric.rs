//! Exact arithmetic substrate: dyadic rationals, rational serialization and
//! the binary digit functions `s(k)` and `v_2(m)`.
//!
//! Arbitrary precision integers and rationals come from `num-bigint` and
//! `num-rational`; `Ratio::new` reduces on construction, so every
//! [`BigRational`] built through the public constructors is canonical.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Number of ones in the binary expansion of `k`.
pub fn digit_sum(k: u64) -> u32 {
    k.count_ones()
}

/// Binary digit sum of a non-negative big integer.
pub fn digit_sum_big(k: &BigUint) -> u64 {
    k.count_ones()
}

/// `(-1)^{s(k)}` as `+1` / `-1`.
pub fn thue_morse_sign(k: u64) -> i32 {
    if digit_sum(k).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Largest `e` with `2^e | m`.
pub fn val2(m: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::ZeroValuation);
    }
    Ok(m.trailing_zeros())
}

/// `2^e` as a big integer.
pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// `2^e` for a signed exponent, as an exact rational.
pub fn pow2_rational(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(pow2(e as u64))
    } else {
        BigRational::new(BigInt::one(), pow2(e.unsigned_abs()))
    }
}

/// `n choose 2`.
pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Rows `0..=n` of Pascal's triangle on `BigInt`.
#[derive(Debug, Clone)]
pub struct Pascal {
    rows: Vec<Vec<BigInt>>,
}

impl Pascal {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        rows.push(vec![BigInt::one()]);
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = Vec::with_capacity(i + 1);
            row.push(BigInt::one());
            for j in 1..i {
                row.push(&prev[j - 1] + &prev[j]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        Pascal { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len() - 1
    }

    /// `n choose k`, zero when `k > n`.
    pub fn get(&self, n: usize, k: usize) -> BigInt {
        if k > n {
            BigInt::zero()
        } else {
            self.rows[n][k].clone()
        }
    }

    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n]
    }
}

/// Serializes a rational as `num/den`, or `num` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Inverse of [`format_rational`]; also reduces non-canonical input.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse {
        kind: "rational",
        input: s.to_string(),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
    let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// An exact dyadic rational `num / 2^exp`, always in canonical form:
/// `exp == 0` or `num` odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    /// Canonical dyadic equal to `num / 2^exp`.
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Self {
        let mut num = num.into();
        let mut exp = exp;
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp);
        if tz > 0 {
            num >>= tz;
            exp -= tz;
        }
        Dyadic { num, exp }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn zero() -> Self {
        Dyadic::from_integer(0)
    }

    pub fn one() -> Self {
        Dyadic::from_integer(1)
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn exp(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    /// Multiplies by `2^k` (`k` may be negative).
    pub fn shl(&self, k: i64) -> Self {
        if k >= 0 {
            let k = k as u64;
            if k <= self.exp {
                Dyadic::new(self.num.clone(), self.exp - k)
            } else {
                Dyadic::new(&self.num << (k - self.exp), 0)
            }
        } else {
            Dyadic::new(self.num.clone(), self.exp + k.unsigned_abs())
        }
    }

    /// Numerator of this value written over `2^exp`, for `exp >= self.exp()`.
    pub fn numerator_at(&self, exp: u64) -> BigInt {
        debug_assert!(exp >= self.exp);
        &self.num << (exp - self.exp)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.exp == 0 {
            self.num.clone()
        } else {
            self.num.div_floor(&pow2(self.exp))
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), pow2(self.exp))
    }

    /// Exact conversion when the rational's denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if den >> tz != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(r.numer().clone(), tz))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn sign(&self) -> Sign {
        self.num.sign()
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        let exp = self.exp.max(other.exp);
        (self.numerator_at(exp), other.numerator_at(exp), exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `num/2^exp`, a plain integer, or `num/den` with `den` a power of two.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            kind: "dyadic",
            input: s.to_string(),
        };
        let s = s.trim();
        if let Some((num, exp)) = s.split_once("/2^") {
            let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
            let exp = exp.trim().parse::<u64>().map_err(|_| err())?;
            return Ok(Dyadic::new(num, exp));
        }
        let r = parse_rational(s).map_err(|_| err())?;
        Dyadic::from_rational(&r).ok_or_else(err)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(rhs);
        Dyadic::new(a + b, exp)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(rhs);
        Dyadic::new(a - b, exp)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_integer(n)
    }
}

/// All points `q / 2^n` for `q` in `lo..=hi`.
pub fn dyadic_grid(lo: i64, hi: i64, n: u64) -> impl Iterator<Item = Dyadic> {
    (lo..=hi).map(move |q| Dyadic::new(q, n))
}
