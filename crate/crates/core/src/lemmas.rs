//! Range runners for the lemma checks, as exposed by the `lemmas`
//! subcommand.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::{fmt_rational, rad, ratio, ExactRational};
use crate::bounds::{
    appendix_sample_points, check_appendix_identity, check_sandwich, compute_bounds,
    integers_in_bounds,
};
use crate::equation::EquationInstance;
use crate::error::Result;
use crate::filters::{check_modular_collapse_with, Outcome};
use crate::powersum::{
    check_carlitz_von_staudt, check_macmillan_sondow, PowerSumEngine, PowerSumTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma {
    CarlitzVonStaudt,
    MacMillanSondow,
    Sandwich,
    Appendix,
    ModularCollapse,
}

impl Lemma {
    pub const ALL: [Lemma; 5] = [
        Lemma::CarlitzVonStaudt,
        Lemma::MacMillanSondow,
        Lemma::Sandwich,
        Lemma::Appendix,
        Lemma::ModularCollapse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::CarlitzVonStaudt => "carlitz-von-staudt",
            Lemma::MacMillanSondow => "macmillan-sondow",
            Lemma::Sandwich => "sandwich",
            Lemma::Appendix => "appendix",
            Lemma::ModularCollapse => "modular-collapse",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown lemma '{s}'"))
    }
}

/// Parameter ranges for [`run_lemma`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaRanges {
    /// Power-sum lemmas: `1 <= k <= k_max`.
    pub k_max: u64,
    /// Power-sum lemmas: odd `m <= m_max`.
    pub m_max: u32,
    /// Sandwich and collapse: `l <= ell_max`.
    pub ell_max: u32,
    /// Sandwich and collapse: `1 <= k <= window_k_max`.
    pub window_k_max: u64,
    /// Random appendix points (fixed points are always included).
    pub samples: usize,
    pub seed: u64,
}

impl Default for LemmaRanges {
    fn default() -> Self {
        Self {
            k_max: 500,
            m_max: 39,
            ell_max: 60,
            window_k_max: 40,
            samples: 500,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub checked: usize,
    /// Points where the argument did not apply (collapse only).
    pub inconclusive: usize,
    /// Human-readable exact witnesses of each failure.
    pub counterexamples: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} checked={} counterexamples={}",
            self.lemma,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checked,
            self.counterexamples.len()
        )?;
        if self.inconclusive > 0 {
            write!(f, " inconclusive={}", self.inconclusive)?;
        }
        Ok(())
    }
}

pub fn run_lemma(lemma: Lemma, r: &LemmaRanges) -> Result<LemmaReport> {
    let mut report = LemmaReport {
        lemma,
        checked: 0,
        inconclusive: 0,
        counterexamples: Vec::new(),
    };
    match lemma {
        Lemma::CarlitzVonStaudt | Lemma::MacMillanSondow => {
            let m_min = if lemma == Lemma::CarlitzVonStaudt {
                1
            } else {
                3
            };
            for k in 1..=r.k_max {
                let k = BigInt::from(k);
                for m in (m_min..=r.m_max).step_by(2) {
                    let ok = if lemma == Lemma::CarlitzVonStaudt {
                        check_carlitz_von_staudt(&k, m)?
                    } else {
                        check_macmillan_sondow(&k, m)?
                    };
                    report.checked += 1;
                    if !ok {
                        report.counterexamples.push(format!("k={k} m={m}"));
                    }
                }
            }
        }
        Lemma::Sandwich => {
            for ell in 3..=r.ell_max {
                for k in 1..=r.window_k_max {
                    let inst = EquationInstance::new(ell, k.into())?;
                    report.checked += 1;
                    if !check_sandwich(&inst)? {
                        let bd = compute_bounds(&inst);
                        report.counterexamples.push(format!(
                            "ell={ell} k={k} window=[{}, {}]",
                            fmt_rational(&bd.lower),
                            fmt_rational(&bd.upper)
                        ));
                    }
                }
            }
        }
        Lemma::Appendix => {
            let mut points: Vec<(ExactRational, ExactRational)> =
                vec![(ratio(3, 1), ratio(2, 1)), (ratio(8, 1), ratio(2, 1))];
            points.extend(appendix_sample_points(r.samples, r.seed));
            for (ell, big_k) in &points {
                report.checked += 1;
                if !check_appendix_identity(ell, big_k)? {
                    report.counterexamples.push(format!(
                        "ell={} K={}",
                        fmt_rational(ell),
                        fmt_rational(big_k)
                    ));
                }
            }
        }
        Lemma::ModularCollapse => {
            for ell in 5..=r.ell_max {
                for k in 1..=r.window_k_max {
                    run_collapse_point(ell, k, &mut report)?;
                }
            }
        }
    }
    Ok(report)
}

/// Every even `w` in the sandwich interval that `rad(K)` divides.
fn run_collapse_point(ell: u32, k: u64, report: &mut LemmaReport) -> Result<()> {
    let kk = BigInt::from(k);
    let inst = EquationInstance::new(ell, kk.clone())?;
    let r = rad(inst.big_k())?;
    let ws: Vec<BigInt> = integers_in_bounds(&compute_bounds(&inst))
        .into_iter()
        .filter(|w| w.is_even() && w.is_multiple_of(&r))
        .collect();
    if ws.is_empty() {
        return Ok(());
    }
    let sums = PowerSumTable::new(&kk, ell, PowerSumEngine::Direct)?;
    for w in ws {
        let rep = check_modular_collapse_with(ell, &kk, &w, &sums)?;
        report.checked += 1;
        match rep.outcome {
            Outcome::Pass => {}
            Outcome::Inconclusive => report.inconclusive += 1,
            Outcome::Fail => report
                .counterexamples
                .push(format!("ell={ell} k={k} w={w}: {}", rep.detail)),
        }
    }
    Ok(())
}
