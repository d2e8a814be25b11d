//! Necessary conditions on a candidate `(l, k, w)` derived from 2-adic
//! valuations, plus a term-by-term check of the congruence argument that
//! rules out solutions for `l >= 5`.
//!
//! A filter `FAIL` means the candidate cannot be a solution. The decider
//! still settles every surviving candidate by exact evaluation, and paranoid
//! mode re-evaluates the excluded ones as well.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial_row, nu2, odd_prime_factors, rad, ExactInt};
use crate::error::{Error, Result};
use crate::powersum::{PowerSumEngine, PowerSumTable};

/// `e = nu_2(l)`, `f = nu_2(k(k+1))`, `g = nu_2(w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationProfile {
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

fn require_positive(x: &ExactInt) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::NotPositive(x.to_string()))
    }
}

pub fn profile(ell: u32, k: &ExactInt, w: &ExactInt) -> Result<ValuationProfile> {
    if ell == 0 {
        return Err(Error::EllOutOfRange(ell, "ell >= 1"));
    }
    require_positive(k)?;
    require_positive(w)?;
    Ok(ValuationProfile {
        e: u64::from(ell.trailing_zeros()),
        f: nu2(&(k * (k + 1u32)))?,
        g: nu2(w)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FilterName {
    #[serde(rename = "radical")]
    Radical,
    #[serde(rename = "g_ge_e_plus_1")]
    GAtLeastEPlusOne,
    #[serde(rename = "w_plus_1_primes")]
    WPlusOnePrimes,
    #[serde(rename = "3f_plus_3")]
    ThreeFPlusThree,
    #[serde(rename = "modular_collapse")]
    ModularCollapse,
}

impl FilterName {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterName::Radical => "radical",
            FilterName::GAtLeastEPlusOne => "g_ge_e_plus_1",
            FilterName::WPlusOnePrimes => "w_plus_1_primes",
            FilterName::ThreeFPlusThree => "3f_plus_3",
            FilterName::ModularCollapse => "modular_collapse",
        }
    }

    /// Whether a `FAIL` from this filter removes a candidate. The collapse
    /// check reports on the proof itself and never removes anything.
    pub fn is_exclusion_filter(self) -> bool {
        self != FilterName::ModularCollapse
    }
}

impl fmt::Display for FilterName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterReport {
    pub name: FilterName,
    pub outcome: Outcome,
    /// Exact witnesses: valuations, primes, residues.
    pub detail: String,
}

impl FilterReport {
    fn new(name: FilterName, outcome: Outcome, detail: String) -> Self {
        Self {
            name,
            outcome,
            detail,
        }
    }

    pub fn excludes_candidate(&self) -> bool {
        self.name.is_exclusion_filter() && self.outcome == Outcome::Fail
    }
}

/// `rad(k(k+1))` must divide `w`.
pub fn filter_radical(k: &ExactInt, w: &ExactInt) -> Result<FilterReport> {
    require_positive(k)?;
    require_positive(w)?;
    let r = rad(&(k * (k + 1u32)))?;
    let rem = w % &r;
    let outcome = if rem.is_zero() {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(FilterReport::new(
        FilterName::Radical,
        outcome,
        format!("rad(k(k+1))={r} w mod rad={rem}"),
    ))
}

/// `nu_2(w) >= nu_2(l) + 1`.
pub fn filter_g_ge_e_plus_1(ell: u32, w: &ExactInt) -> Result<FilterReport> {
    require_positive(w)?;
    let e = u64::from(ell.trailing_zeros());
    let g = nu2(w)?;
    let outcome = if g > e { Outcome::Pass } else { Outcome::Fail };
    Ok(FilterReport::new(
        FilterName::GAtLeastEPlusOne,
        outcome,
        format!("g={g} e={e}"),
    ))
}

/// Every odd prime `p | w+1` must satisfy `p = 1 (mod 2^(e+1))`; only
/// meaningful for even `l`.
///
/// A cofactor left by the trial-division limit is still usable: all its
/// prime factors must be `1 mod 2^(e+1)`, so the cofactor must be too.
pub fn filter_w_plus_1_primes(ell: u32, w: &ExactInt, factor_limit: u64) -> Result<FilterReport> {
    if ell % 2 == 1 {
        return Err(Error::EllOutOfRange(
            ell,
            "the w+1 prime filter needs even ell",
        ));
    }
    require_positive(w)?;
    let e = ell.trailing_zeros();
    let modulus = BigInt::one() << (e + 1);
    let fac = odd_prime_factors(&(w + 1u32), factor_limit)?;
    let name = FilterName::WPlusOnePrimes;
    for (p, _) in &fac.factors {
        let r = p.mod_floor(&modulus);
        if !r.is_one() {
            return Ok(FilterReport::new(
                name,
                Outcome::Fail,
                format!("p={p} p mod {modulus}={r}"),
            ));
        }
    }
    match &fac.unfactored {
        None => Ok(FilterReport::new(
            name,
            Outcome::Pass,
            format!("all odd primes of w+1 are 1 mod {modulus}"),
        )),
        Some(rest) => {
            let r = rest.mod_floor(&modulus);
            let outcome = if r.is_one() {
                Outcome::Inconclusive
            } else {
                Outcome::Fail
            };
            Ok(FilterReport::new(
                name,
                outcome,
                format!("unfactored cofactor {rest} mod {modulus}={r}"),
            ))
        }
    }
}

/// `3 nu_2(k(k+1)) + 3 <= l`.
pub fn filter_3f_plus_3(ell: u32, k: &ExactInt) -> Result<FilterReport> {
    require_positive(k)?;
    let f = nu2(&(k * (k + 1u32)))?;
    let outcome = if 3 * f + 3 <= u64::from(ell) {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(FilterReport::new(
        FilterName::ThreeFPlusThree,
        outcome,
        format!("f={f} 3f+3={}", 3 * f + 3),
    ))
}

/// 2-adic valuations of the right-hand terms of the reduced equation
/// for one candidate, as used by [`check_modular_collapse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseValuations {
    /// `nu_2(s)`.
    pub modulus: u64,
    /// `(m, nu_2(term_m))` for every odd `m`.
    pub terms: Vec<(u32, u64)>,
    /// `nu_2` of the left side, `(l-1)g` or `lg`.
    pub left: u64,
}

/// Computes the valuation of every right-hand term
/// `2 C(l,m) w^(l-m-shift) S_m(k)` from its factors.
pub fn collapse_valuations(
    ell: u32,
    k: &ExactInt,
    w: &ExactInt,
    sums: &PowerSumTable,
) -> Result<CollapseValuations> {
    let p = profile(ell, k, w)?;
    let shift = u32::from(ell.is_multiple_of(2));
    let row = binomial_row(ell);
    let mut terms = Vec::new();
    for m in (1..=ell).step_by(2) {
        let binom = nu2(&row[m as usize])?;
        let s = nu2(sums.get(m))?;
        let w_exp = u64::from(ell - m - shift);
        terms.push((m, 1 + binom + w_exp * p.g + s));
    }
    let modulus = (2 * p.f - 1) + 2 * p.g + if shift == 1 { p.e } else { 0 };
    Ok(CollapseValuations {
        modulus,
        terms,
        left: u64::from(ell - shift) * p.g,
    })
}

/// Replays the congruence argument on a concrete candidate.
///
/// Checks that (i) every middle term vanishes modulo `s`, (ii) the `m = 1`
/// term has valuation `e + (l-2)g + f` (even `l`) or `(l-1)g + f` (odd
/// `l`), (iii) the top term has valuation `e + 2f - 1` or `2f - 1`. When the
/// `m = 1` term also vanishes modulo `s`, a solution would force the left
/// side to share the top term's valuation.
///
/// `PASS`: valuations check out and that forced equality is false, so the
/// candidate is ruled out. `FAIL`: a valuation claim is wrong, or the forced
/// equality holds (the argument does not close). `INCONCLUSIVE`: the `m = 1`
/// term does not vanish modulo `s`, which happens only when `3f + 3 > l`.
pub fn check_modular_collapse_with(
    ell: u32,
    k: &ExactInt,
    w: &ExactInt,
    sums: &PowerSumTable,
) -> Result<FilterReport> {
    if ell < 5 {
        return Err(Error::EllOutOfRange(ell, "modular collapse needs ell >= 5"));
    }
    if w.is_odd() {
        return Err(Error::OddCenter(w.to_string()));
    }
    if filter_radical(k, w)?.outcome == Outcome::Fail {
        return Err(Error::Precondition(format!(
            "rad(k(k+1)) does not divide w={w}"
        )));
    }
    let p = profile(ell, k, w)?;
    let v = collapse_valuations(ell, k, w, sums)?;
    let even = ell.is_multiple_of(2);
    let top_m = if even { ell - 1 } else { ell };
    let name = FilterName::ModularCollapse;
    let ell64 = u64::from(ell);

    let (expect_first, expect_top) = if even {
        (p.e + (ell64 - 2) * p.g + p.f, p.e + 2 * p.f - 1)
    } else {
        ((ell64 - 1) * p.g + p.f, 2 * p.f - 1)
    };
    let mut first = None;
    let mut top = None;
    for &(m, val) in &v.terms {
        if m == 1 {
            first = Some(val);
        } else if m == top_m {
            top = Some(val);
        } else if val < v.modulus {
            return Ok(FilterReport::new(
                name,
                Outcome::Fail,
                format!("middle term m={m} has nu_2={val} < nu_2(s)={}", v.modulus),
            ));
        }
    }
    let (first, top) = (first.expect("m = 1 term"), top.expect("top term"));
    if first != expect_first || top != expect_top {
        return Ok(FilterReport::new(
            name,
            Outcome::Fail,
            format!(
                "valuation claim broken: m=1 {first} (expected {expect_first}), top {top} (expected {expect_top})"
            ),
        ));
    }
    if first < v.modulus || top >= v.modulus {
        return Ok(FilterReport::new(
            name,
            Outcome::Inconclusive,
            format!(
                "m=1 term nu_2={first}, top nu_2={top}, nu_2(s)={}",
                v.modulus
            ),
        ));
    }
    let outcome = if v.left == top {
        Outcome::Fail
    } else {
        Outcome::Pass
    };
    Ok(FilterReport::new(
        name,
        outcome,
        format!(
            "nu_2(s)={} left nu_2={} forced={} (e={} f={} g={})",
            v.modulus, v.left, top, p.e, p.f, p.g
        ),
    ))
}

pub fn check_modular_collapse(ell: u32, k: &ExactInt, w: &ExactInt) -> Result<FilterReport> {
    require_positive(k)?;
    let sums = PowerSumTable::new(k, ell, PowerSumEngine::Direct)?;
    check_modular_collapse_with(ell, k, w, &sums)
}

/// `name=OUTCOME` pairs, space separated.
pub fn summarize(reports: &[FilterReport]) -> String {
    reports
        .iter()
        .map(|r| format!("{}={}", r.name, r.outcome))
        .collect::<Vec<_>>()
        .join(" ")
}
