//! Power sums `S_m(k) = 1^m + 2^m + ... + k^m`.
//!
//! Two independent routes are provided: term-by-term summation and the
//! Faulhaber polynomial with exact Bernoulli numbers. Each checks the other.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial_row, nu2, ExactInt};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumQuery {
    k: ExactInt,
    m: u32,
}

impl PowerSumQuery {
    pub fn new(k: ExactInt, m: u32) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::NotPositive(k.to_string()));
        }
        Ok(Self { k, m })
    }

    pub fn k(&self) -> &ExactInt {
        &self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// `S_m(k)` by summing every term.
pub fn powersum_direct(q: &PowerSumQuery) -> ExactInt {
    let mut acc = BigInt::zero();
    let mut i = BigInt::one();
    while i <= q.k {
        acc += num_traits::pow(i.clone(), q.m as usize);
        i += 1u32;
    }
    acc
}

/// Grow-only table of Bernoulli numbers (`B_1 = +1/2`), produced by the
/// Akiyama–Tanigawa recurrence. The working row is kept so the table can be
/// extended without recomputing the prefix.
struct BernoulliCache {
    row: Vec<BigRational>,
    numbers: Vec<BigRational>,
}

impl BernoulliCache {
    const fn new() -> Self {
        Self {
            row: Vec::new(),
            numbers: Vec::new(),
        }
    }

    fn extend_to(&mut self, n: usize) {
        while self.numbers.len() <= n {
            let m = self.numbers.len();
            self.row
                .push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                let diff = &self.row[j - 1] - &self.row[j];
                self.row[j - 1] = diff * BigInt::from(j);
            }
            self.numbers.push(self.row[0].clone());
        }
    }
}

static BERNOULLI: RwLock<BernoulliCache> = RwLock::new(BernoulliCache::new());

/// `B_0, ..., B_n` with the `B_1 = +1/2` convention.
pub fn bernoulli_numbers(n: u32) -> Vec<BigRational> {
    let n = n as usize;
    {
        let cache = BERNOULLI.read().unwrap_or_else(|e| e.into_inner());
        if cache.numbers.len() > n {
            return cache.numbers[..=n].to_vec();
        }
    }
    let mut cache = BERNOULLI.write().unwrap_or_else(|e| e.into_inner());
    cache.extend_to(n);
    cache.numbers[..=n].to_vec()
}

/// Faulhaber evaluation of the power sum for one exponent, given
/// `bern = [B_0..=B_m]`.
fn faulhaber(k: &ExactInt, m: u32, bern: &[BigRational]) -> Result<ExactInt> {
    let common = bern[..=m as usize]
        .iter()
        .fold(BigInt::one(), |acc, b| acc.lcm(b.denom()));
    let row = binomial_row(m + 1);
    // (m+1) * common * S_m(k) = sum_j C(m+1, j) * B_j * common * k^(m+1-j)
    let mut acc = BigInt::zero();
    for j in 0..=m as usize {
        let b = &bern[j];
        acc *= k;
        if !b.numer().is_zero() {
            acc += &row[j] * b.numer() * (&common / b.denom());
        }
    }
    acc *= k;
    let den = common * (m + 1);
    let (q, r) = acc.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::NonIntegralPowerSum {
            k: k.to_string(),
            m,
            value: format!("{}/{}", acc, den),
        });
    }
    Ok(q)
}

/// `S_m(k)` from the degree-`(m+1)` Faulhaber polynomial. The result is
/// verified integral before it is returned.
pub fn powersum_closed(q: &PowerSumQuery) -> Result<ExactInt> {
    let bern = bernoulli_numbers(q.m);
    faulhaber(&q.k, q.m, &bern)
}

/// True iff `k(k+1)/2` divides `S_m(k)`; the Carlitz–von Staudt congruence
/// says this always holds for odd `m`.
pub fn check_carlitz_von_staudt(k: &ExactInt, m: u32) -> Result<bool> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenExponent(m));
    }
    let s = powersum_closed(&PowerSumQuery::new(k.clone(), m)?)?;
    let half_k = k * (k + 1u32) / 2u32;
    Ok((s % half_k).is_zero())
}

/// True iff `nu_2(2 S_m(k)) = 2 nu_2(k(k+1)) - 1` (MacMillan–Sondow, odd
/// `m >= 3`).
pub fn check_macmillan_sondow(k: &ExactInt, m: u32) -> Result<bool> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenExponent(m));
    }
    if m < 3 {
        return Err(Error::ExponentTooSmall(m, 3));
    }
    let s = powersum_closed(&PowerSumQuery::new(k.clone(), m)?)?;
    let f = nu2(&(k * (k + 1u32)))?;
    Ok(nu2(&(s * 2u32))? == 2 * f - 1)
}

/// Which route fills a [`PowerSumTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerSumEngine {
    /// Incremental summation: one word-by-bignum multiply per term and
    /// exponent, `O(k * max_m)` in total.
    #[default]
    Direct,
    /// Faulhaber polynomials, `O(max_m^2)` bignum multiplies.
    Closed,
}

/// `S_0(k), ..., S_max(k)` for one `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumTable {
    k: ExactInt,
    sums: Vec<ExactInt>,
}

impl PowerSumTable {
    pub fn new(k: &ExactInt, max_m: u32, engine: PowerSumEngine) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::NotPositive(k.to_string()));
        }
        let sums = match engine {
            PowerSumEngine::Direct => direct_row(k, max_m),
            PowerSumEngine::Closed => {
                let bern = bernoulli_numbers(max_m);
                (0..=max_m)
                    .map(|m| faulhaber(k, m, &bern))
                    .collect::<Result<_>>()?
            }
        };
        Ok(Self { k: k.clone(), sums })
    }

    pub fn k(&self) -> &ExactInt {
        &self.k
    }

    pub fn max_m(&self) -> u32 {
        self.sums.len() as u32 - 1
    }

    /// `S_m(k)`; panics if `m` exceeds the table.
    pub fn get(&self, m: u32) -> &ExactInt {
        &self.sums[m as usize]
    }
}

fn direct_row(k: &ExactInt, max_m: u32) -> Vec<ExactInt> {
    let mut sums = vec![BigInt::zero(); max_m as usize + 1];
    let mut add_term = |i: &BigInt| {
        let mut p = BigInt::one();
        for s in sums.iter_mut() {
            *s += &p;
            p *= i;
        }
    };
    let mut i = BigInt::one();
    while &i <= k {
        add_term(&i);
        i += 1u32;
    }
    sums
}
