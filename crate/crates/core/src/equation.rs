//! The balanced power-sum equation and its reduced polynomial form.
//!
//! With the center `w = n + k` the equation
//! `n^l + ... + (n+k)^l = (n+k+1)^l + ... + (n+2k)^l` becomes `f(k, w) = 0`
//! where, for odd `l`,
//!
//! ```text
//! f(k, w) = w^l - 2 * sum_{m odd} C(l, m) w^(l-m) S_m(k)
//! ```
//!
//! and for even `l` every term carries a factor `w`, which is divided out.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial_row, ExactInt, ExactRational};
use crate::error::{Error, Result};
use crate::powersum::{PowerSumEngine, PowerSumTable};

/// Bisection stops once the bracket is at most `2^-BRACKET_TOLERANCE_LOG2`
/// wide.
pub const BRACKET_TOLERANCE_LOG2: u32 = 20;

/// One `(l, k)` pair with `K = k(k+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationInstance {
    ell: u32,
    k: ExactInt,
    big_k: ExactInt,
}

impl EquationInstance {
    pub fn new(ell: u32, k: ExactInt) -> Result<Self> {
        if ell == 0 {
            return Err(Error::EllOutOfRange(ell, "ell >= 1"));
        }
        if !k.is_positive() {
            return Err(Error::NotPositive(k.to_string()));
        }
        let big_k = &k * (&k + 1u32);
        Ok(Self { ell, k, big_k })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn k(&self) -> &ExactInt {
        &self.k
    }

    /// `K = k(k+1)`.
    pub fn big_k(&self) -> &ExactInt {
        &self.big_k
    }

    pub fn is_even(&self) -> bool {
        self.ell.is_multiple_of(2)
    }
}

/// `f(k, w)` as a sparse list of `(exponent of w, coefficient)`, exponents
/// strictly descending, zero coefficients omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPolynomial {
    instance: EquationInstance,
    coefficients: Vec<(u32, ExactInt)>,
}

/// Builds `f(k, w)` using the default power-sum engine.
pub fn build_f(inst: &EquationInstance) -> FPolynomial {
    let sums = PowerSumTable::new(inst.k(), inst.ell(), PowerSumEngine::Direct)
        .expect("instance k is positive");
    build_f_from_sums(inst, &sums)
}

/// Builds `f(k, w)` from precomputed power sums (`sums.max_m() >= l`).
pub fn build_f_from_sums(inst: &EquationInstance, sums: &PowerSumTable) -> FPolynomial {
    let ell = inst.ell();
    assert!(sums.max_m() >= ell, "power-sum table too short");
    assert_eq!(sums.k(), inst.k(), "power-sum table for a different k");
    let shift = u32::from(inst.is_even());
    let row = binomial_row(ell);
    let mut coefficients = vec![(ell - shift, BigInt::one())];
    for m in (1..=ell).step_by(2) {
        let c = -(&row[m as usize] * sums.get(m) * 2u32);
        coefficients.push((ell - m - shift, c));
    }
    FPolynomial {
        instance: inst.clone(),
        coefficients,
    }
}

/// Numeric kinds `f` can be evaluated at without rounding.
pub trait FValue: Sized {
    fn eval_f(poly: &FPolynomial, w: &Self) -> Self;
}

impl FValue for ExactInt {
    fn eval_f(poly: &FPolynomial, w: &Self) -> Self {
        poly.eval_int(w)
    }
}

impl FValue for ExactRational {
    fn eval_f(poly: &FPolynomial, w: &Self) -> Self {
        poly.eval_rational(w)
    }
}

/// Exact value of `f(k, w)` at an integer or rational `w`.
pub fn eval_f<T: FValue>(poly: &FPolynomial, w: &T) -> T {
    T::eval_f(poly, w)
}

impl FPolynomial {
    pub fn instance(&self) -> &EquationInstance {
        &self.instance
    }

    pub fn coefficients(&self) -> &[(u32, ExactInt)] {
        &self.coefficients
    }

    pub fn degree(&self) -> u32 {
        self.coefficients.first().map_or(0, |(e, _)| *e)
    }

    /// Horner's rule over the sparse exponent list.
    pub fn eval_int(&self, w: &ExactInt) -> ExactInt {
        let mut acc = BigInt::zero();
        let mut prev = self.degree();
        for (e, c) in &self.coefficients {
            acc = acc * num_traits::pow(w.clone(), (prev - e) as usize) + c;
            prev = *e;
        }
        acc * num_traits::pow(w.clone(), prev as usize)
    }

    /// `q^d * f(p/q)` for `w = p/q` in lowest terms, `d` the degree. Has the
    /// sign of `f(w)` and costs only integer arithmetic.
    pub fn eval_homogenized(&self, w: &ExactRational) -> ExactInt {
        let (p, q) = (w.numer(), w.denom());
        let d = self.degree();
        let mut acc = BigInt::zero();
        let mut q_pow = BigInt::one();
        let mut prev = d;
        for (e, c) in &self.coefficients {
            let gap = (prev - e) as usize;
            if gap > 0 {
                acc *= num_traits::pow(p.clone(), gap);
                q_pow *= num_traits::pow(q.clone(), gap);
            }
            acc += c * &q_pow;
            prev = *e;
        }
        acc * num_traits::pow(p.clone(), prev as usize)
    }

    pub fn eval_rational(&self, w: &ExactRational) -> ExactRational {
        let den = num_traits::pow(w.denom().clone(), self.degree() as usize);
        BigRational::new(self.eval_homogenized(w), den)
    }

    pub fn sign_at(&self, w: &ExactRational) -> Ordering {
        self.eval_homogenized(w).sign().cmp_zero()
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

/// `sum_{i=0..range} (base + i)^ell` for `i` in the given inclusive range.
fn block_sum(base: &ExactInt, from: &ExactInt, to: &ExactInt, ell: u32) -> ExactInt {
    let mut acc = BigInt::zero();
    let mut j = from.clone();
    while &j <= to {
        acc += num_traits::pow(base + &j, ell as usize);
        j += 1u32;
    }
    acc
}

/// Direct check `n^l + ... + (n+k)^l == (n+k+1)^l + ... + (n+2k)^l`.
pub fn verify_instance(n: &ExactInt, k: &ExactInt, ell: u32) -> Result<bool> {
    if !n.is_positive() {
        return Err(Error::NotPositive(n.to_string()));
    }
    if !k.is_positive() {
        return Err(Error::NotPositive(k.to_string()));
    }
    let left = block_sum(n, &BigInt::zero(), k, ell);
    let right = block_sum(n, &(k + 1u32), &(k * 2u32), ell);
    Ok(left == right)
}

/// `f(k, w)` straight from `w^l - sum_{i=1..k} ((w+i)^l - (w-i)^l)`, divided
/// by `w` for even `l`. Shares nothing with the coefficient assembly.
pub fn eval_f_by_expansion(inst: &EquationInstance, w: &ExactInt) -> Result<ExactInt> {
    let ell = inst.ell() as usize;
    let mut acc = num_traits::pow(w.clone(), ell);
    let mut i = BigInt::one();
    while &i <= inst.k() {
        acc -= num_traits::pow(w + &i, ell) - num_traits::pow(w - &i, ell);
        i += 1u32;
    }
    if inst.is_even() {
        if w.is_zero() {
            return Err(Error::VanishingDenominator("w = 0 with even ell"));
        }
        // every term is divisible by w when ell is even
        debug_assert!((&acc % w).is_zero());
        acc /= w;
    }
    Ok(acc)
}

/// Sign changes in the nonzero coefficient sequence, highest exponent first.
pub fn sign_changes(poly: &FPolynomial) -> Result<usize> {
    let signs: Vec<bool> = poly
        .coefficients
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(_, c)| c.is_positive())
        .collect();
    if signs.is_empty() {
        return Err(Error::Polynomial("zero polynomial"));
    }
    Ok(signs.windows(2).filter(|p| p[0] != p[1]).count())
}

/// Exact bracket `[lo, hi]` with `f(lo) < 0 <= f(hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: ExactRational,
    pub hi: ExactRational,
}

impl RootBracket {
    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    /// Halves the bracket, keeping `f(lo) < 0 <= f(hi)`.
    pub fn bisect(&mut self, poly: &FPolynomial) {
        let mid = (&self.lo + &self.hi) / BigInt::from(2);
        if poly.sign_at(&mid) == Ordering::Less {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn contains(&self, w: &ExactRational) -> bool {
        &self.lo <= w && w <= &self.hi
    }
}

/// Brackets the single positive root to width `2^-20` by doubling from 1
/// and then bisecting.
pub fn bracket_unique_root(poly: &FPolynomial) -> Result<RootBracket> {
    if sign_changes(poly)? != 1 {
        return Err(Error::Polynomial("expected exactly one sign change"));
    }
    let zero = BigRational::zero();
    if poly.sign_at(&zero) != Ordering::Less {
        return Err(Error::Polynomial("expected f(0) < 0"));
    }
    let mut lo = zero;
    let mut hi = BigRational::one();
    while poly.sign_at(&hi) == Ordering::Less {
        lo = hi.clone();
        hi *= BigInt::from(2);
    }
    let mut bracket = RootBracket { lo, hi };
    let tol = BigRational::new(BigInt::one(), BigInt::one() << BRACKET_TOLERANCE_LOG2);
    while bracket.width() > tol {
        bracket.bisect(poly);
    }
    Ok(bracket)
}

/// Closed-form solutions for `l = 1` (`w = K`, `n = k^2`) and `l = 2`
/// (`w = 2K`, `n = k(2k+1)`). Returns `(n, w)`.
pub fn solution_family(ell: u32, k: &ExactInt) -> Result<(ExactInt, ExactInt)> {
    if !k.is_positive() {
        return Err(Error::NotPositive(k.to_string()));
    }
    let big_k = k * (k + 1u32);
    let w = match ell {
        1 => big_k,
        2 => big_k * 2u32,
        _ => {
            return Err(Error::EllOutOfRange(
                ell,
                "families exist only for ell in {1, 2}",
            ))
        }
    };
    Ok((&w - k, w))
}
