//! Exact arithmetic foundations: big integers, reduced rationals, p-adic
//! valuations, radicals and trial-division factorization.
//!
//! Nothing in this crate ever rounds. Integers are `num_bigint::BigInt` and
//! rationals are `num_rational::BigRational`, which reduces to lowest terms
//! with a positive denominator after every operation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInt = BigInt;

/// Arbitrary-precision fraction in lowest terms, denominator positive.
pub type ExactRational = BigRational;

/// Primes below this bound are verified by trial division before a
/// valuation is taken.
pub const PRIME_CHECK_BOUND: u64 = 1_000_000_000_000;

/// Default largest trial divisor used by [`odd_prime_factors`].
pub const DEFAULT_FACTOR_LIMIT: u64 = 10_000_000;

pub fn int(v: i64) -> ExactInt {
    BigInt::from(v)
}

pub fn ratio(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_rational(x: &ExactInt) -> ExactRational {
    BigRational::from_integer(x.clone())
}

/// Canonical `"p/q"` rendering used in every serialized artifact.
pub fn fmt_rational(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"` or a bare integer.
pub fn parse_rational(s: &str) -> Option<ExactRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// 2-adic valuation of a nonzero integer.
pub fn nu2(x: &ExactInt) -> Result<u64> {
    x.trailing_zeros().ok_or(Error::ZeroValuation)
}

/// Largest `t` with `p^t | x`.
///
/// `p` is checked for primality by trial division when it is below
/// [`PRIME_CHECK_BOUND`]; larger `p` are trusted.
pub fn nu(p: &ExactInt, x: &ExactInt) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    match p.to_u64() {
        Some(small) if small < PRIME_CHECK_BOUND => {
            if !is_prime_u64(small) {
                return Err(Error::NotPrime(p.to_string()));
            }
        }
        Some(_) => {}
        None if !p.is_positive() => return Err(Error::NotPrime(p.to_string())),
        None => {}
    }
    if p == &BigInt::from(2) {
        return nu2(x);
    }
    let mut rest = x.abs();
    let mut t = 0;
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return Ok(t);
        }
        rest = q;
        t += 1;
    }
}

/// Result of trial division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Primes found, ascending, with multiplicity.
    pub factors: Vec<(ExactInt, u32)>,
    /// Cofactor left over once the divisor limit was exceeded. Its prime
    /// factors all exceed the limit, but it may be composite.
    pub unfactored: Option<ExactInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_none()
    }
}

fn strip(rem: &mut BigInt, d: &BigInt) -> u32 {
    let mut mult = 0;
    loop {
        let (q, r) = rem.div_rem(d);
        if !r.is_zero() {
            return mult;
        }
        *rem = q;
        mult += 1;
    }
}

fn trial_factor_u64(mut n: u64, start: u64, limit: u64, out: &mut Factorization) {
    let mut d = start;
    while d <= limit && d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut mult = 0;
            while n.is_multiple_of(d) {
                n /= d;
                mult += 1;
            }
            out.factors.push((BigInt::from(d), mult));
        }
        d += 2;
    }
    if n > 1 {
        if d.saturating_mul(d) > n {
            out.factors.push((BigInt::from(n), 1));
        } else {
            out.unfactored = Some(BigInt::from(n));
        }
    }
}

/// Factors `x >= 1` by trial division with divisors up to `limit`.
fn trial_factor(x: &ExactInt, limit: u64) -> Factorization {
    let mut out = Factorization {
        factors: Vec::new(),
        unfactored: None,
    };
    let mut rem = x.clone();
    let twos = rem.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        rem >>= twos;
        out.factors.push((BigInt::from(2), twos as u32));
    }
    let mut d = 3u64;
    loop {
        if let Some(small) = rem.to_u64() {
            trial_factor_u64(small, d, limit, &mut out);
            return out;
        }
        if d > limit {
            out.unfactored = Some(rem);
            return out;
        }
        let bd = BigInt::from(d);
        if &bd * &bd > rem {
            out.factors.push((rem, 1));
            return out;
        }
        let mult = strip(&mut rem, &bd);
        if mult > 0 {
            out.factors.push((bd, mult));
        }
        d += 2;
    }
}

/// Product of the distinct primes dividing `x`; `rad(1) = 1`.
pub fn rad(x: &ExactInt) -> Result<ExactInt> {
    if !x.is_positive() {
        return Err(Error::NotPositive(x.to_string()));
    }
    let fac = trial_factor(x, u64::MAX);
    debug_assert!(fac.is_complete());
    Ok(fac.factors.iter().map(|(p, _)| p).product())
}

/// Odd part of `x` factored by trial division up to `limit`.
///
/// The power of two is dropped. If a cofactor survives the limit it is
/// returned in [`Factorization::unfactored`] rather than guessed at.
pub fn odd_prime_factors(x: &ExactInt, limit: u64) -> Result<Factorization> {
    if !x.is_positive() {
        return Err(Error::NotPositive(x.to_string()));
    }
    let mut fac = trial_factor(x, limit.max(3));
    fac.factors.retain(|(p, _)| p != &BigInt::from(2));
    Ok(fac)
}

/// Binomial coefficient `C(n, r)` by the multiplicative formula.
pub fn binomial(n: u32, r: u32) -> ExactInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Row `C(n, 0), ..., C(n, n)`.
pub fn binomial_row(n: u32) -> Vec<ExactInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 0..n {
        c = c * (n - i) / (i + 1);
        row.push(c.clone());
    }
    row
}
