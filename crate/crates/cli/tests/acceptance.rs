//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::cmp::Ordering;
use std::process::Command;
use std::time::{Duration, Instant};

use balanced_powersums::bounds::{candidate_ks, compute_bounds, integers_in_window};
use balanced_powersums::decider::{decide, sweep_each, DecideOptions, Mode, Verdict};
use balanced_powersums::equation::{build_f, sign_changes, verify_instance, EquationInstance};
use balanced_powersums::lemmas::{run_lemma, Lemma, LemmaRanges};
use balanced_powersums::oracle::{count_positive_roots, oracle_search, DEFAULT_RESOLUTION};
use num_bigint::BigInt;

const BIN: &str = env!("CARGO_BIN_EXE_balanced-powersums");
const SWEEP_BUDGET: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn run_sweep(workers: usize, extra: &[&str]) -> Result<(Vec<u8>, Duration), String> {
    let start = Instant::now();
    let out = Command::new(BIN)
        .args(["sweep", "--ell-min", "3", "--ell-max", "1000", "--workers"])
        .arg(workers.to_string())
        .args(extra)
        .output()
        .map_err(|e| format!("cannot run sweep: {e}"))?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!(
            "sweep exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok((out.stdout, elapsed))
}

fn criterion_1() -> Outcome {
    let (stdout, elapsed) = run_sweep(1, &[])?;
    let text = String::from_utf8(stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    if lines.next() != Some("ell,verdict,num_candidate_k,num_integer_candidates,elapsed_ms") {
        return Err("missing CSV header".into());
    }
    let mut expected = 3u32;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 || cols[0] != expected.to_string() {
            return Err(format!("unexpected row {line:?}"));
        }
        if cols[1] != "NO_SOLUTION" {
            return Err(format!("ell={} verdict {}", cols[0], cols[1]));
        }
        expected += 1;
    }
    if expected != 1001 {
        return Err(format!("sweep stopped before ell={expected}"));
    }
    if elapsed >= SWEEP_BUDGET {
        return Err(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "998 exponents NO_SOLUTION in {:.1}s, 1 worker",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for ell in [1u32, 2] {
        let cert = decide(ell, &DecideOptions::default()).map_err(|e| e.to_string())?;
        let Verdict::Family(fam) = &cert.verdict else {
            return Err(format!("ell={ell} is not a family"));
        };
        if fam.samples.len() != 100 {
            return Err(format!("ell={ell}: {} samples", fam.samples.len()));
        }
        for (i, m) in fam.samples.iter().enumerate() {
            let k = BigInt::from(i + 1);
            let kk = &k * (&k + 1u32);
            let (w, n) = if ell == 1 {
                (kk.clone(), &k * &k)
            } else {
                (&kk * 2u32, &k * (&k * 2u32 + 1u32))
            };
            if m.k != k || m.w != w || m.n != n {
                return Err(format!(
                    "ell={ell}: bad member k={} n={} w={}",
                    m.k, m.n, m.w
                ));
            }
            if !verify_instance(&m.n, &m.k, ell).map_err(|e| e.to_string())? {
                return Err(format!("ell={ell}: (n={}, k={}) does not verify", m.n, m.k));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} family members verified"))
}

fn criterion_3() -> Outcome {
    for ell in [3, 4] {
        let hits = oracle_search(ell, 200, 200);
        if !hits.is_empty() {
            return Err(format!("ell={ell}: {hits:?}"));
        }
    }
    let squares: Vec<(u64, u64)> = (1..=200u64)
        .map(|k| (k * k, k))
        .filter(|p| p.0 <= 200)
        .collect();
    let triangular_pairs: Vec<(u64, u64)> = (1..=200u64)
        .map(|k| (k * (2 * k + 1), k))
        .filter(|p| p.0 <= 200)
        .collect();
    if oracle_search(1, 200, 200) != squares {
        return Err("ell=1 points differ from n=k^2".into());
    }
    if oracle_search(2, 200, 200) != triangular_pairs {
        return Err("ell=2 points differ from n=k(2k+1)".into());
    }
    Ok(format!(
        "ell 3,4 empty; ell 1: {} points, ell 2: {} points",
        squares.len(),
        triangular_pairs.len()
    ))
}

fn lemma(l: Lemma, r: LemmaRanges) -> Outcome {
    let rep = run_lemma(l, &r).map_err(|e| e.to_string())?;
    if rep.passed() {
        Ok(format!("{} checks", rep.checked))
    } else {
        Err(format!("{rep}; first: {}", rep.counterexamples[0]))
    }
}

fn criterion_4() -> Outcome {
    let r = LemmaRanges {
        k_max: 500,
        m_max: 39,
        ..LemmaRanges::default()
    };
    lemma(Lemma::MacMillanSondow, r)
}

fn criterion_5() -> Outcome {
    let r = LemmaRanges {
        k_max: 500,
        m_max: 39,
        ..LemmaRanges::default()
    };
    lemma(Lemma::CarlitzVonStaudt, r)
}

fn criterion_6() -> Outcome {
    for ell in 1..=20u32 {
        for k in 1..=20u32 {
            let poly = build_f(&EquationInstance::new(ell, k.into()).map_err(|e| e.to_string())?);
            let changes = sign_changes(&poly).map_err(|e| e.to_string())?;
            let roots = count_positive_roots(&poly, DEFAULT_RESOLUTION);
            if changes != 1 || roots != 1 {
                return Err(format!(
                    "ell={ell} k={k}: sign changes {changes}, roots {roots}"
                ));
            }
        }
    }
    Ok("400 polynomials".into())
}

fn criterion_7() -> Outcome {
    let r = LemmaRanges {
        ell_max: 60,
        window_k_max: 40,
        ..LemmaRanges::default()
    };
    let sandwich = lemma(Lemma::Sandwich, r)?;
    for ell in 3..=7u32 {
        let ks = candidate_ks(ell).map_err(|e| e.to_string())?;
        if !ks.is_empty() {
            return Err(format!("ell={ell}: candidate k {ks:?}"));
        }
        for k in 1..=40u32 {
            let inst = EquationInstance::new(ell, k.into()).map_err(|e| e.to_string())?;
            let ws = integers_in_window(&compute_bounds(&inst));
            if !ws.is_empty() {
                return Err(format!("ell={ell} k={k}: refined window holds {ws:?}"));
            }
        }
        let cert = decide(ell, &DecideOptions::default()).map_err(|e| e.to_string())?;
        if cert.num_candidate_k() != 0 {
            return Err(format!("ell={ell}: certificate lists candidates"));
        }
    }
    Ok(format!("sandwich {sandwich}; ell 3..7 have no candidates"))
}

fn criterion_8() -> Outcome {
    let r = LemmaRanges {
        samples: 500,
        ..LemmaRanges::default()
    };
    lemma(Lemma::Appendix, r)
}

fn criterion_9() -> Outcome {
    let opts = DecideOptions::with_mode(Mode::Paranoid);
    let (mut excluded, mut evaluated, mut exponents) = (0usize, 0usize, 0u32);
    let mut violation = None;
    sweep_each(3, 1000, &opts, 1, |cert| {
        exponents += 1;
        if !matches!(cert.verdict, Verdict::NoSolution) {
            violation.get_or_insert(format!("ell={}: {}", cert.ell, cert.verdict.label()));
        }
        for (k, c) in cert.all_w() {
            if c.f_sign.is_some() {
                evaluated += 1;
            }
            if !c.excluded_by_filter() {
                continue;
            }
            excluded += 1;
            match c.f_sign {
                Some(Ordering::Equal) => {
                    violation
                        .get_or_insert(format!("ell={} k={k} w={}: filtered root", cert.ell, c.w));
                }
                None => {
                    violation
                        .get_or_insert(format!("ell={} k={k} w={}: not evaluated", cert.ell, c.w));
                }
                _ => {}
            }
        }
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    if let Some(v) = violation {
        return Err(v);
    }
    if exponents != 998 || excluded == 0 {
        return Err(format!(
            "{exponents} exponents, {excluded} excluded candidates"
        ));
    }
    Ok(format!(
        "{excluded} filter-excluded centers re-evaluated, {evaluated} evaluations, 0 violations"
    ))
}

fn criterion_10() -> Outcome {
    let args = ["--format", "jsonl", "--full", "--no-timing"];
    let (one, _) = run_sweep(1, &args)?;
    let (eight, _) = run_sweep(8, &args)?;
    if one.is_empty() {
        return Err("empty stream".into());
    }
    if one != eight {
        let at = one
            .iter()
            .zip(&eight)
            .position(|(a, b)| a != b)
            .unwrap_or(one.len().min(eight.len()));
        return Err(format!("streams differ at byte {at}"));
    }
    Ok(format!("{} identical bytes", one.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("no solutions for 3 <= l <= 1000", criterion_1),
        ("solution families", criterion_2),
        ("brute-force box", criterion_3),
        ("2-adic valuation of odd power sums", criterion_4),
        ("divisibility of odd power sums", criterion_5),
        ("unique positive root", criterion_6),
        ("sandwich interval", criterion_7),
        ("inequality chain", criterion_8),
        ("filter soundness", criterion_9),
        ("determinism across workers", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
