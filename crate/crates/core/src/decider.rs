//! Finite decision procedure for one exponent `l`, and parallel sweeps.
//!
//! For `l >= 3`: every `k` with `k(k+1)` below the sharp bound is examined,
//! the integers of its sandwich window are listed, filters are applied, and
//! survivors are settled by exact evaluation of `f(k, w)`. Paranoid mode
//! evaluates every listed integer, cross-checks each value against the
//! unexpanded equation, and also scans a few `k` past the bound using the
//! unrefined window.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU32, Ordering as AtomicOrdering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rational, ExactInt, ExactRational, DEFAULT_FACTOR_LIMIT};
use crate::bounds::{candidate_ks, compute_bounds, integers_in_bounds, integers_in_window};
use crate::equation::{
    build_f_from_sums, eval_f_by_expansion, solution_family, verify_instance, EquationInstance,
    FPolynomial,
};
use crate::error::{Error, Result};
use crate::filters::{
    check_modular_collapse_with, filter_3f_plus_3, filter_g_ge_e_plus_1, filter_radical,
    filter_w_plus_1_primes, FilterReport, Outcome,
};
use crate::powersum::{PowerSumEngine, PowerSumTable};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Fast,
    Paranoid,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Fast => "fast",
            Mode::Paranoid => "paranoid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub mode: Mode,
    /// Largest trial divisor when factoring `w + 1`.
    pub factor_limit: u64,
    /// How many family members `k = 1..=n` a `FAMILY` certificate lists.
    pub family_samples: u32,
    /// Paranoid mode also scans this many `k` past the bound.
    pub overshoot: u32,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Fast,
            factor_limit: DEFAULT_FACTOR_LIMIT,
            family_samples: 100,
            overshoot: 2,
        }
    }
}

impl DecideOptions {
    pub fn with_mode(mode: Mode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub k: ExactInt,
    pub n: ExactInt,
    pub w: ExactInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub ell: u32,
    pub samples: Vec<FamilyMember>,
}

impl Family {
    /// Closed form of the center, `"k(k+1)"` or `"2k(k+1)"`.
    pub fn w_formula(&self) -> &'static str {
        if self.ell == 1 {
            "k(k+1)"
        } else {
            "2k(k+1)"
        }
    }

    pub fn n_formula(&self) -> &'static str {
        if self.ell == 1 {
            "k^2"
        } else {
            "k(2k+1)"
        }
    }

    pub fn description(&self) -> String {
        format!("w={}", self.w_formula())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    NoSolution,
    /// `(n, k)` pairs; never expected for `l >= 3`.
    Solutions(Vec<(ExactInt, ExactInt)>),
    Family(Family),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::NoSolution => "NO_SOLUTION",
            Verdict::Solutions(_) => "SOLUTIONS",
            Verdict::Family(_) => "FAMILY",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CandidateStatus {
    ExcludedByFilter,
    ExcludedByEvaluation,
    Solution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WCandidate {
    pub w: ExactInt,
    pub filters: Vec<FilterReport>,
    /// Sign of `f(k, w)`, `None` if it was not evaluated.
    pub f_sign: Option<Ordering>,
    pub status: CandidateStatus,
}

impl WCandidate {
    pub fn excluded_by_filter(&self) -> bool {
        self.filters.iter().any(FilterReport::excludes_candidate)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRecord {
    pub k: ExactInt,
    pub window: (ExactRational, ExactRational),
    pub integer_candidates: Vec<ExactInt>,
    pub per_candidate: Vec<WCandidate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub ell: u32,
    pub verdict: Verdict,
    pub candidates: Vec<CandidateRecord>,
    /// Paranoid-mode scan of `k` just past the bound (unrefined windows).
    pub beyond_bound: Vec<CandidateRecord>,
    pub mode: Mode,
    pub elapsed: Duration,
}

fn sign_label(s: Ordering) -> &'static str {
    match s {
        Ordering::Less => "-",
        Ordering::Equal => "0",
        Ordering::Greater => "+",
    }
}

fn sign_of(x: &ExactInt) -> Ordering {
    x.cmp(&BigInt::zero())
}

/// Examines every integer of one window.
struct KScan<'a> {
    inst: EquationInstance,
    opts: &'a DecideOptions,
    /// Power sums and `f(k, .)`, built on first use.
    prepared: Option<(PowerSumTable, FPolynomial)>,
}

impl<'a> KScan<'a> {
    fn prepared(&mut self) -> Result<&(PowerSumTable, FPolynomial)> {
        if self.prepared.is_none() {
            let sums = PowerSumTable::new(self.inst.k(), self.inst.ell(), PowerSumEngine::Direct)?;
            let poly = build_f_from_sums(&self.inst, &sums);
            self.prepared = Some((sums, poly));
        }
        Ok(self.prepared.as_ref().expect("just filled"))
    }

    fn exclusion_filters(&self, w: &ExactInt) -> Result<Vec<FilterReport>> {
        let ell = self.inst.ell();
        let k = self.inst.k();
        let mut reports = vec![filter_radical(k, w)?, filter_g_ge_e_plus_1(ell, w)?];
        if ell.is_multiple_of(2) {
            reports.push(filter_w_plus_1_primes(ell, w, self.opts.factor_limit)?);
        }
        reports.push(filter_3f_plus_3(ell, k)?);
        Ok(reports)
    }

    fn examine(&mut self, w: &ExactInt) -> Result<WCandidate> {
        let mut filters = self.exclusion_filters(w)?;
        let excluded = filters.iter().any(FilterReport::excludes_candidate);
        if excluded && self.opts.mode == Mode::Fast {
            return Ok(WCandidate {
                w: w.clone(),
                filters,
                f_sign: None,
                status: CandidateStatus::ExcludedByFilter,
            });
        }
        let ell = self.inst.ell();
        let radical_ok = filters[0].outcome == Outcome::Pass;
        let k = self.inst.k().clone();
        let inst = self.inst.clone();
        let paranoid = self.opts.mode == Mode::Paranoid;
        let (sums, poly) = self.prepared()?;
        if ell >= 5 && radical_ok && w.is_even() {
            filters.push(check_modular_collapse_with(ell, &k, w, sums)?);
        }
        let value = poly.eval_int(w);
        if paranoid {
            let check = eval_f_by_expansion(&inst, w)?;
            if check != value {
                return Err(Error::CrossCheck(format!(
                    "f(k={k}, w={w}) for ell={ell}: coefficients give {value}, expansion gives {check}"
                )));
            }
        }
        let status = if value.is_zero() {
            CandidateStatus::Solution
        } else {
            CandidateStatus::ExcludedByEvaluation
        };
        Ok(WCandidate {
            w: w.clone(),
            filters,
            f_sign: Some(sign_of(&value)),
            status,
        })
    }
}

fn scan_k(ell: u32, k: &ExactInt, refined: bool, opts: &DecideOptions) -> Result<CandidateRecord> {
    let inst = EquationInstance::new(ell, k.clone())?;
    let bd = compute_bounds(&inst);
    let ints = if refined {
        integers_in_window(&bd)
    } else {
        integers_in_bounds(&bd)
    };
    let mut scan = KScan {
        inst,
        opts,
        prepared: None,
    };
    let per_candidate = ints
        .iter()
        .map(|w| scan.examine(w))
        .collect::<Result<_>>()?;
    Ok(CandidateRecord {
        k: k.clone(),
        window: (bd.lower, bd.upper),
        integer_candidates: ints,
        per_candidate,
    })
}

fn decide_family(ell: u32, opts: &DecideOptions) -> Result<Family> {
    let mut samples = Vec::with_capacity(opts.family_samples as usize);
    let mut k = BigInt::one();
    for _ in 0..opts.family_samples {
        let (n, w) = solution_family(ell, &k)?;
        if opts.mode == Mode::Paranoid && !verify_instance(&n, &k, ell)? {
            return Err(Error::CrossCheck(format!(
                "family member n={n} k={k} fails the equation for ell={ell}"
            )));
        }
        samples.push(FamilyMember { k: k.clone(), n, w });
        k += 1u32;
    }
    Ok(Family { ell, samples })
}

/// Runs the decision procedure for one exponent.
pub fn decide(ell: u32, opts: &DecideOptions) -> Result<Certificate> {
    let start = Instant::now();
    if ell == 0 {
        return Err(Error::EllOutOfRange(ell, "ell >= 1"));
    }
    if ell <= 2 {
        return Ok(Certificate {
            ell,
            verdict: Verdict::Family(decide_family(ell, opts)?),
            candidates: Vec::new(),
            beyond_bound: Vec::new(),
            mode: opts.mode,
            elapsed: start.elapsed(),
        });
    }
    let ks = candidate_ks(ell)?;
    let candidates = ks
        .iter()
        .map(|k| scan_k(ell, k, true, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut beyond_bound = Vec::new();
    if opts.mode == Mode::Paranoid {
        let mut k = BigInt::from(ks.len() + 1);
        for _ in 0..opts.overshoot {
            beyond_bound.push(scan_k(ell, &k, false, opts)?);
            k += 1u32;
        }
    }
    let solutions: Vec<(ExactInt, ExactInt)> = candidates
        .iter()
        .chain(&beyond_bound)
        .flat_map(|rec| {
            rec.per_candidate
                .iter()
                .filter(|c| c.status == CandidateStatus::Solution)
                .map(|c| (&c.w - &rec.k, rec.k.clone()))
        })
        .collect();
    let verdict = if solutions.is_empty() {
        Verdict::NoSolution
    } else {
        Verdict::Solutions(solutions)
    };
    Ok(Certificate {
        ell,
        verdict,
        candidates,
        beyond_bound,
        mode: opts.mode,
        elapsed: start.elapsed(),
    })
}

/// Runs [`decide`] for every `l` in `ell_min..=ell_max` on `workers` threads
/// and hands the certificates to `sink` in ascending `l` order as soon as
/// each one (and all before it) is done.
pub fn sweep_each<F>(
    ell_min: u32,
    ell_max: u32,
    opts: &DecideOptions,
    workers: usize,
    mut sink: F,
) -> Result<()>
where
    F: FnMut(Certificate) -> Result<()>,
{
    if ell_min == 0 || ell_min > ell_max {
        return Err(Error::EllOutOfRange(
            ell_min,
            "need 1 <= ell_min <= ell_max",
        ));
    }
    let workers = workers.max(1);
    let next = AtomicU32::new(ell_min);
    let stop = AtomicBool::new(false);
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(u32, Result<Certificate>)>();
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, stop) = (&next, &stop);
            scope.spawn(move || loop {
                if stop.load(AtomicOrdering::Relaxed) {
                    return;
                }
                let ell = next.fetch_add(1, AtomicOrdering::Relaxed);
                if ell > ell_max {
                    return;
                }
                if tx.send((ell, decide(ell, opts))).is_err() {
                    return;
                }
            });
        }
        drop(tx);
        let mut pending: HashMap<u32, Result<Certificate>> = HashMap::new();
        let mut expected = ell_min;
        for (ell, cert) in rx {
            pending.insert(ell, cert);
            while let Some(ready) = pending.remove(&expected) {
                let emitted = ready.and_then(&mut sink);
                if let Err(e) = emitted {
                    stop.store(true, AtomicOrdering::Relaxed);
                    return Err(e);
                }
                expected += 1;
            }
        }
        Ok(())
    })
}

/// Collects [`sweep_each`] into a vector ordered by `l`.
pub fn sweep(
    ell_min: u32,
    ell_max: u32,
    opts: &DecideOptions,
    workers: usize,
) -> Result<Vec<Certificate>> {
    let mut out = Vec::with_capacity((ell_max.saturating_sub(ell_min) + 1) as usize);
    sweep_each(ell_min, ell_max, opts, workers, |c| {
        out.push(c);
        Ok(())
    })?;
    Ok(out)
}

// ---- serialization ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterJson {
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WJson {
    pub w: String,
    pub filters: BTreeMap<String, FilterJson>,
    pub f_sign: Option<String>,
    pub status: CandidateStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub k: String,
    pub window: [String; 2],
    pub ws: Vec<WJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMemberJson {
    pub k: String,
    pub n: String,
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub w: String,
    pub n: String,
    pub samples: Vec<FamilyMemberJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub n: String,
    pub k: String,
}

/// Wire form of a [`Certificate`]. Every exact number is a decimal string
/// or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub schema: String,
    pub ell: u32,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub solutions: Vec<SolutionJson>,
    pub candidates: Vec<CandidateJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beyond_bound: Vec<CandidateJson>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

fn candidate_json(rec: &CandidateRecord) -> CandidateJson {
    CandidateJson {
        k: rec.k.to_string(),
        window: [fmt_rational(&rec.window.0), fmt_rational(&rec.window.1)],
        ws: rec
            .per_candidate
            .iter()
            .map(|c| WJson {
                w: c.w.to_string(),
                filters: c
                    .filters
                    .iter()
                    .map(|r| {
                        (
                            r.name.to_string(),
                            FilterJson {
                                outcome: r.outcome,
                                detail: r.detail.clone(),
                            },
                        )
                    })
                    .collect(),
                f_sign: c.f_sign.map(|s| sign_label(s).to_string()),
                status: c.status,
            })
            .collect(),
    }
}

impl Certificate {
    pub fn num_candidate_k(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_integer_candidates(&self) -> usize {
        self.candidates
            .iter()
            .map(|c| c.integer_candidates.len())
            .sum()
    }

    /// Every examined center, including the paranoid overshoot.
    pub fn all_w(&self) -> impl Iterator<Item = (&ExactInt, &WCandidate)> {
        self.candidates
            .iter()
            .chain(&self.beyond_bound)
            .flat_map(|rec| rec.per_candidate.iter().map(move |c| (&rec.k, c)))
    }

    /// Wire form; timing is omitted when `with_timing` is false so that
    /// runs can be compared byte for byte.
    pub fn to_wire(&self, with_timing: bool) -> CertificateJson {
        let (family, solutions) = match &self.verdict {
            Verdict::Family(fam) => (
                Some(FamilyJson {
                    w: fam.w_formula().to_string(),
                    n: fam.n_formula().to_string(),
                    samples: fam
                        .samples
                        .iter()
                        .map(|m| FamilyMemberJson {
                            k: m.k.to_string(),
                            n: m.n.to_string(),
                            w: m.w.to_string(),
                        })
                        .collect(),
                }),
                Vec::new(),
            ),
            Verdict::Solutions(sols) => (
                None,
                sols.iter()
                    .map(|(n, k)| SolutionJson {
                        n: n.to_string(),
                        k: k.to_string(),
                    })
                    .collect(),
            ),
            Verdict::NoSolution => (None, Vec::new()),
        };
        CertificateJson {
            schema: SCHEMA_VERSION.to_string(),
            ell: self.ell,
            verdict: self.verdict.label().to_string(),
            family,
            solutions,
            candidates: self.candidates.iter().map(candidate_json).collect(),
            beyond_bound: self.beyond_bound.iter().map(candidate_json).collect(),
            mode: self.mode,
            elapsed_ms: with_timing.then_some(self.elapsed.as_millis() as u64),
        }
    }

    pub fn to_json_line(&self, with_timing: bool) -> String {
        serde_json::to_string(&self.to_wire(with_timing)).expect("certificate serializes")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        match &self.verdict {
            Verdict::Family(fam) => format!("FAMILY {}", fam.description()),
            v => format!(
                "{} ell={} candidate_k={} integer_candidates={}",
                v.label(),
                self.ell,
                self.num_candidate_k(),
                self.num_integer_candidates()
            ),
        }
    }
}
