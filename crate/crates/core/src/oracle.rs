//! Brute-force ground truth, independent of the decider.
//!
//! Only `arith` is shared: the box search works on the original equation and
//! the root counter evaluates coefficient lists with its own code.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{ExactInt, ExactRational};
use crate::equation::FPolynomial;

/// Grid cells used by [`count_positive_roots`] by default.
pub const DEFAULT_RESOLUTION: u32 = 1024;

/// Located roots are bisected down to this width, `2^-30`.
pub const ROOT_TOLERANCE_LOG2: u32 = 30;

/// All `(n, k)` with `1 <= n <= n_max`, `1 <= k <= k_max` solving the
/// equation, sorted by `n` then `k`.
///
/// For each `n` the difference right minus left is updated in `O(1)` power
/// lookups per step:
/// `D(k+1) = D(k) - 2(n+k+1)^l + (n+2k+1)^l + (n+2k+2)^l`.
pub fn oracle_search(ell: u32, n_max: u64, k_max: u64) -> Vec<(u64, u64)> {
    search_rows(ell, 1, n_max, k_max)
}

fn powers(ell: u32, upto: u64) -> Vec<ExactInt> {
    (0..=upto)
        .map(|x| num_traits::pow(BigInt::from(x), ell as usize))
        .collect()
}

fn search_rows(ell: u32, n_lo: u64, n_hi: u64, k_max: u64) -> Vec<(u64, u64)> {
    if n_lo > n_hi || k_max == 0 {
        return Vec::new();
    }
    let pw = powers(ell, n_hi + 2 * k_max);
    let mut out = Vec::new();
    for n in n_lo..=n_hi {
        // k = 0: left = n^l, right = 0
        let mut diff = -pw[n as usize].clone();
        for k in 0..k_max {
            let i = |x: u64| &pw[(n + x) as usize];
            diff = diff - i(k + 1) * 2u32 + i(2 * k + 1) + i(2 * k + 2);
            if diff.is_zero() {
                out.push((n, k + 1));
            }
        }
    }
    out
}

/// [`oracle_search`] with the `n` range split across `workers` threads.
/// The output is identical to the single-threaded search.
pub fn oracle_search_parallel(ell: u32, n_max: u64, k_max: u64, workers: usize) -> Vec<(u64, u64)> {
    let workers = workers.max(1) as u64;
    let chunk = n_max.div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|i| {
                let lo = 1 + i * chunk;
                let hi = ((i + 1) * chunk).min(n_max);
                scope.spawn(move || search_rows(ell, lo, hi, k_max))
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("oracle worker panicked"))
            .collect()
    })
}

/// Sign of `q^d * p(x/q)` for the sparse coefficient list, summed term by
/// term.
fn scaled_sign(coeffs: &[(u32, ExactInt)], x: &BigInt, q: &BigInt) -> Ordering {
    let d = coeffs.iter().map(|(e, _)| *e).max().unwrap_or(0);
    let total: BigInt = coeffs
        .iter()
        .map(|(e, c)| {
            c * num_traits::pow(x.clone(), *e as usize)
                * num_traits::pow(q.clone(), (d - e) as usize)
        })
        .sum();
    total.cmp(&BigInt::zero())
}

fn sign_at(coeffs: &[(u32, ExactInt)], w: &ExactRational) -> Ordering {
    scaled_sign(coeffs, w.numer(), w.denom())
}

/// Brackets for each positive real root found on a uniform grid over
/// `(0, 2(1 + max|c|)]`, each refined to width `2^-30`. A grid point where
/// the value is exactly zero is reported as a zero-width bracket.
pub fn locate_positive_roots(
    poly: &FPolynomial,
    resolution: u32,
) -> Vec<(ExactRational, ExactRational)> {
    let coeffs = poly.coefficients();
    let lead = coeffs.first().map(|(_, c)| c.abs()).unwrap_or_default();
    if lead.is_zero() {
        return Vec::new();
    }
    let max_c = coeffs
        .iter()
        .map(|(_, c)| c.abs())
        .max()
        .unwrap_or_default();
    // roots are < 1 + max|c|/|lead| <= 2(1 + max|c|)
    let bound = (max_c + 1u32) * 2u32;
    let res = BigInt::from(resolution.max(1));
    let tol = BigRational::new(BigInt::one(), BigInt::one() << ROOT_TOLERANCE_LOG2);

    let point = |j: u32| BigRational::new(&bound * j, res.clone());
    let mut roots = Vec::new();
    let mut prev = sign_at(coeffs, &BigRational::zero());
    for j in 1..=resolution.max(1) {
        let x = point(j);
        let s = sign_at(coeffs, &x);
        if s == Ordering::Equal {
            roots.push((x.clone(), x));
        } else if prev != Ordering::Equal && s != prev {
            let (mut lo, mut hi) = (point(j - 1), x);
            while &hi - &lo > tol {
                let mid = (&lo + &hi) / BigInt::from(2);
                let sm = sign_at(coeffs, &mid);
                if sm == Ordering::Equal {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                if sm == prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push((lo, hi));
        }
        prev = s;
    }
    roots
}

/// Number of positive real roots located by [`locate_positive_roots`].
pub fn count_positive_roots(poly: &FPolynomial, resolution: u32) -> usize {
    locate_positive_roots(poly, resolution).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::equation::{build_f, eval_f, verify_instance, EquationInstance};

    fn poly(ell: u32, k: i64) -> FPolynomial {
        build_f(&EquationInstance::new(ell, int(k)).unwrap())
    }

    #[test]
    fn search_examples() {
        let sq = oracle_search(1, 200, 10);
        assert_eq!(sq, (1..=10).map(|k| (k * k, k)).collect::<Vec<_>>());
        let dostor = oracle_search(2, 300, 10);
        assert_eq!(
            dostor,
            (1..=10).map(|k| (k * (2 * k + 1), k)).collect::<Vec<_>>()
        );
        assert!(oracle_search(3, 200, 200).is_empty());
        assert!(oracle_search(3, 0, 5).is_empty());
    }

    #[test]
    fn incremental_search_matches_direct_check() {
        for ell in 1..=4 {
            let fast: Vec<_> = oracle_search(ell, 40, 12);
            let mut slow = Vec::new();
            for n in 1..=40u64 {
                for k in 1..=12u64 {
                    if verify_instance(&n.into(), &k.into(), ell).unwrap() {
                        slow.push((n, k));
                    }
                }
            }
            assert_eq!(fast, slow, "ell={ell}");
        }
    }

    #[test]
    fn verified_points_are_roots_of_f() {
        for ell in 1..=2 {
            for (n, k) in oracle_search(ell, 300, 15) {
                let f = poly(ell, k as i64);
                assert!(eval_f(&f, &BigInt::from(n + k)).is_zero());
            }
        }
    }

    #[test]
    fn parallel_search_is_identical() {
        for workers in [1, 3, 8, 500] {
            assert_eq!(
                oracle_search_parallel(1, 200, 20, workers),
                oracle_search(1, 200, 20)
            );
            assert_eq!(
                oracle_search_parallel(2, 150, 9, workers),
                oracle_search(2, 150, 9)
            );
        }
    }

    #[test]
    fn root_count_examples() {
        assert_eq!(count_positive_roots(&poly(3, 1), DEFAULT_RESOLUTION), 1);
        let roots = locate_positive_roots(&poly(1, 4), DEFAULT_RESOLUTION);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].0 <= ratio(20, 1) && ratio(20, 1) <= roots[0].1);
        assert_eq!(count_positive_roots(&poly(6, 2), DEFAULT_RESOLUTION), 1);
    }

    #[test]
    fn root_bracket_is_tight() {
        let roots = locate_positive_roots(&poly(3, 1), DEFAULT_RESOLUTION);
        let (lo, hi) = &roots[0];
        assert!(hi - lo <= ratio(1, 1 << 30));
        assert!(lo > &ratio(6, 1) && hi < &ratio(7, 1));
    }
}
