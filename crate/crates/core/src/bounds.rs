//! Sandwich interval for the center `w(k)`, the finite bound on `K = k(k+1)`,
//! and the rational inequality chain behind the lower bound.
//!
//! With `a = (l-1)(l-2)/(12l)` and `b = (l-1)^2(l-2)^2/(72l^3)` every
//! positive solution satisfies `lK + a - b/K <= w <= lK + a`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{to_rational, ExactInt, ExactRational};
use crate::equation::{bracket_unique_root, build_f, EquationInstance};
use crate::error::{Error, Result};

fn q(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `a = (l-1)(l-2)/(12l)` for a rational `l`.
fn coeff_a(ell: &ExactRational) -> ExactRational {
    (ell - q(1)) * (ell - q(2)) / (ell * q(12))
}

/// `b = (l-1)^2(l-2)^2/(72l^3)` for a rational `l`.
fn coeff_b(ell: &ExactRational) -> ExactRational {
    let t = (ell - q(1)) * (ell - q(2));
    &t * &t / (ell * ell * ell * q(72))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundData {
    pub instance: EquationInstance,
    pub a: ExactRational,
    pub b: ExactRational,
    /// `lK + a - b/K`
    pub lower: ExactRational,
    /// `lK + a`
    pub upper: ExactRational,
}

pub fn compute_bounds(inst: &EquationInstance) -> BoundData {
    let ell = q(inst.ell().into());
    let big_k = to_rational(inst.big_k());
    let a = coeff_a(&ell);
    let b = coeff_b(&ell);
    assert_eq!(b, &a * &a * q(2) / &ell, "b = 2a^2/l");
    let center = &ell * &big_k + &a;
    let lower = &center - &b / &big_k;
    BoundData {
        instance: inst.clone(),
        a,
        b,
        lower,
        upper: center,
    }
}

/// Sharp bound `(l-1)^2(l-2)^2/(12l^2)`: a solution for `l >= 3` needs
/// `K` at most this.
pub fn corollary_k_bound(ell: u32) -> Result<ExactRational> {
    if ell < 3 {
        return Err(Error::EllOutOfRange(ell, "ell >= 3"));
    }
    let l = i64::from(ell);
    Ok(BigRational::new(
        BigInt::from((l - 1) * (l - 1)) * ((l - 2) * (l - 2)),
        BigInt::from(12 * l * l),
    ))
}

/// The weaker displayed form `(l-2)^2/12`.
pub fn corollary_k_bound_weak(ell: u32) -> Result<ExactRational> {
    if ell < 3 {
        return Err(Error::EllOutOfRange(ell, "ell >= 3"));
    }
    let l = i64::from(ell);
    Ok(BigRational::new(
        BigInt::from((l - 2) * (l - 2)),
        BigInt::from(12),
    ))
}

/// Every `k >= 1` with `k(k+1)` at most the sharp bound, ascending.
pub fn candidate_ks(ell: u32) -> Result<Vec<ExactInt>> {
    let bound = corollary_k_bound(ell)?;
    let mut out = Vec::new();
    let mut k = BigInt::one();
    while to_rational(&(&k * (&k + 1u32))) <= bound {
        out.push(k.clone());
        k += 1u32;
    }
    Ok(out)
}

/// Largest admissible integer center: `lK + (l-3)/12` for `l >= 3`, since `a`
/// lies in `[(l-3)/12, (l-2)/12)`. For `l < 3` this is just `upper`.
pub fn refined_upper(bd: &BoundData) -> ExactRational {
    let ell = bd.instance.ell();
    if ell < 3 {
        return bd.upper.clone();
    }
    let refined = q(ell.into()) * to_rational(bd.instance.big_k())
        + BigRational::new(BigInt::from(ell - 3), BigInt::from(12));
    refined.min(bd.upper.clone())
}

fn integers_between(lo: &ExactRational, hi: &ExactRational) -> Vec<ExactInt> {
    let mut w = lo.ceil().to_integer();
    let last = hi.floor().to_integer();
    let mut out = Vec::new();
    while w <= last {
        out.push(w.clone());
        w += 1u32;
    }
    out
}

/// Integers `w` with `lower <= w <= min(upper, lK + (l-3)/12)`, ascending.
pub fn integers_in_window(bd: &BoundData) -> Vec<ExactInt> {
    integers_between(&bd.lower, &refined_upper(bd))
}

/// Integers in `[lower, upper]` without the integrality refinement.
pub fn integers_in_bounds(bd: &BoundData) -> Vec<ExactInt> {
    integers_between(&bd.lower, &bd.upper)
}

/// Truth value of each line of the inequality chain, first line first.
///
/// All eight lines are equivalent for `l > 2`, `K > 0`; evaluating them
/// exactly at a point and comparing checks every rewriting step.
pub fn appendix_chain(ell: &ExactRational, big_k: &ExactRational) -> Result<[bool; 8]> {
    if ell <= &q(2) {
        return Err(Error::VanishingDenominator("need l > 2 so that a > 0"));
    }
    if !big_k.is_positive() {
        return Err(Error::VanishingDenominator("need K > 0"));
    }
    let a = coeff_a(ell);
    let b = coeff_b(ell);
    let lk = ell * big_k;
    let x = &a / &lk; // a/(lK)
    let one = q(1);
    let u = &one - &x * q(2); // 1 - 2a/(lK)
    let v = &one - &x; // 1 - a/(lK)
    let y = &a - &b / big_k; // a - b/K
    let w0 = &lk + &y; // lK + a - b/K
    let l2 = ell * ell;
    let k2 = big_k * big_k;
    let cube = |t: &ExactRational| t * t * t;

    Ok([
        cube(&u) < q(8) * &v,
        &a * cube(&u) - q(8) * &a * &v < BigRational::zero(),
        &u * &u * (q(2) * &lk + &a * &u) < q(2) * &lk,
        &y * &y * (q(2) * &lk + &y) < &b * &l2 * big_k,
        &y * (q(2) * &lk * &y + &y * &y) < &b * &l2 * big_k,
        &y * (&l2 * &k2 + q(2) * &lk * &y + &y * &y) < &l2 * &a * &k2,
        &y * &w0 * &w0 < &l2 * &a * &k2,
        cube(&w0) < &lk * &w0 * &w0 + &l2 * &a * &k2,
    ])
}

/// True iff every adjacent pair of lines in [`appendix_chain`] agrees, in
/// particular the first and the last.
pub fn check_appendix_identity(ell: &ExactRational, big_k: &ExactRational) -> Result<bool> {
    let chain = appendix_chain(ell, big_k)?;
    Ok(chain.windows(2).all(|p| p[0] == p[1]))
}

/// Reproducible random test points with `l` in `(2, 100]` and `K` in
/// `[2, 10^4]`, both exact rationals.
pub fn appendix_sample_points(samples: usize, seed: u64) -> Vec<(ExactRational, ExactRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let den: i64 = rng.gen_range(1..=1000);
            let ell = BigRational::new(
                BigInt::from(2 * den + rng.gen_range(1..=98 * den)),
                den.into(),
            );
            let den: i64 = rng.gen_range(1..=1000);
            let big_k = BigRational::new(
                BigInt::from(2 * den + rng.gen_range(0..=9998 * den)),
                den.into(),
            );
            (ell, big_k)
        })
        .collect()
}

/// True iff the unique positive root of `f(k, .)` lies in `[lower, upper]`.
///
/// Starts from the standard bracket and keeps bisecting until the bracket
/// sits clearly inside or outside the interval. An endpoint that is itself
/// the root is detected by exact evaluation.
pub fn check_sandwich(inst: &EquationInstance) -> Result<bool> {
    let poly = build_f(inst);
    let bd = compute_bounds(inst);
    let mut bracket = bracket_unique_root(&poly)?;
    if poly.sign_at(&bd.lower) == Ordering::Equal || poly.sign_at(&bd.upper) == Ordering::Equal {
        return Ok(bd.lower <= bd.upper);
    }
    // root is in (lo, hi] and differs from both interval endpoints
    loop {
        if bd.lower <= bracket.lo && bracket.hi <= bd.upper {
            return Ok(true);
        }
        if bracket.hi < bd.lower || bracket.lo >= bd.upper {
            return Ok(false);
        }
        bracket.bisect(&poly);
    }
}
