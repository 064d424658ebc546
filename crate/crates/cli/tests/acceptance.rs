//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use deg2_core::algorithms::{water_level, AlgorithmId};
use deg2_core::certificate::{
    alpha_at, alpha_closed_form, case3_recurrence, certify_fractional_run, certify_integral_run,
    check_claim_case1, check_claim_case2, eta, EtaLinear,
};
use deg2_core::instance::{gen_random, parse_instance, reduce_to_exact_degree2};
use deg2_core::lowerbound::{
    build_phase_graph, estimate_ratio_with_threads, phase_closed_form,
    predicted_unmatched_probability, InstanceDistribution,
};
use deg2_core::numeric::{int, pow2_neg, ratio, to_f64};
use deg2_core::oracle::{
    exact_expected_half_half, exact_reduced_half_half, max_matching, unmatched_probabilities,
};
use deg2_core::{Instance, Rational};
use rayon::prelude::*;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn load(name: &str) -> Instance {
    parse_instance(&std::fs::read(root().join("instances").join(name)).unwrap()).unwrap()
}

fn cli_json(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_deg2"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn parse_rational(s: &str) -> Rational {
    s.parse().unwrap_or_else(|_| panic!("not a rational: {s}"))
}

fn c1_eta() -> Outcome {
    let start = Instant::now();
    let doc = cli_json(&["--format", "json", "eta", "--terms", "8"]);
    let elapsed = start.elapsed();
    let value: f64 = doc["result"]["value"].as_str().unwrap().parse().unwrap();
    check(
        format!("{value:.6}") == "0.717772",
        format!("value {value} does not round to 0.717772"),
    )?;
    let expansion = int(1) - ratio(1, 4) - ratio(1, 32) - pow2_neg(10) - pow2_neg(19);
    let diff = &expansion - &eta(8).value;
    check(
        diff > int(0) && diff < pow2_neg(30),
        "eight-term value is not within 2^-30 of the four-term expansion",
    )?;
    check(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "eta = {value} (8 terms), expansion gap 2^{:.1}, {elapsed:.2?}",
        to_f64(&diff).log2()
    ))
}

fn c2_tightness() -> Outcome {
    let start = Instant::now();
    let inst = load("two_vertex.json");
    let v = water_level(&inst).value();
    let opt = max_matching(&inst).0;
    check(v == ratio(3, 2), format!("value {v}"))?;
    check(opt == 2, format!("opt {opt}"))?;
    check(&v / int(2) == ratio(3, 4), "ratio is not 3/4")?;
    let doc = cli_json(&[
        "--format",
        "json",
        "run",
        "--algo",
        "water-level",
        "--instance",
        root().join("instances/two_vertex.json").to_str().unwrap(),
        "--seed",
        "0",
        "--trials",
        "100",
    ]);
    check(
        doc["result"]["exact_ratio"]["exact"] == "3/4",
        "CLI ratio is not 3/4",
    )?;
    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "value 3/2, OPT 2, ratio 3/4 exactly, {elapsed:.2?}"
    ))
}

/// Instance `i` of a reproducible random family.
fn family(i: u64, max_offline: u64, max_arrivals: u64) -> Instance {
    let n = 2 + i % (max_offline - 1);
    let t = 1 + (i / 7) % max_arrivals.min(2 * n);
    let p2 = [0.0, 0.3, 0.6, 0.9, 1.0][(i % 5) as usize];
    gen_random(n as usize, t as usize, p2, 0xACCE_0000 + i).unwrap()
}

fn c3_fractional() -> Outcome {
    let count = 10_000u64;
    let failures: Vec<String> = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let inst = family(i, 30, 60);
            let opt = max_matching(&inst).0 as i64;
            if water_level(&inst).value() * int(4) < int(3 * opt) {
                return Some(format!("instance {i}: below 3/4 OPT"));
            }
            match certify_fractional_run(&inst) {
                Ok(r) if r.summary.dual.exact == r.summary.primal.exact => None,
                Ok(_) => Some(format!("instance {i}: D != P")),
                Err(e) => Some(format!("instance {i}: {e}")),
            }
        })
        .collect();
    check(failures.is_empty(), failures.join("; "))?;
    Ok(format!(
        "{count} instances, offline <= 30: value >= 3/4 OPT and certificate holds"
    ))
}

fn c4_integral() -> Outcome {
    let count = 1_000u64;
    let upper_eta = eta(8).value;
    let tol = Rational::new(1.into(), 1_000_000_000_000u64.into());
    let worst: Vec<Result<f64, String>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let inst = family(i, 12, 16);
            let opt = max_matching(&inst).0 as i64;
            let e = exact_expected_half_half(&inst).map_err(|e| e.to_string())?;
            // eta lies below its upper enclosure, so this is the stronger inequality
            if e < &upper_eta * int(opt) - &tol {
                return Err(format!("instance {i}: E = {e} below eta * {opt}"));
            }
            let r = certify_integral_run(&inst).map_err(|e| format!("instance {i}: {e}"))?;
            let p = parse_rational(&r.summary.primal.exact);
            if e < p {
                return Err(format!("instance {i}: E = {e} < P = {p}"));
            }
            Ok(if opt == 0 {
                1.0
            } else {
                to_f64(&e) / opt as f64
            })
        })
        .collect();
    let errors: Vec<String> = worst.iter().filter_map(|r| r.clone().err()).collect();
    check(errors.is_empty(), errors.join("; "))?;
    let min = worst
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .fold(f64::INFINITY, |a, &b| a.min(b));
    Ok(format!(
        "{count} instances, offline <= 12: E >= eta*OPT and E >= P (smallest E/OPT {min:.6})"
    ))
}

fn c5_tables() -> Outcome {
    let doc = cli_json(&["--format", "json", "certify", "tables"]);
    let result = &doc["result"];
    check(result["all_passed"] == true, "some table row failed")?;
    let rows = result["rows"].as_array().unwrap();
    let exact: Vec<&str> = rows
        .iter()
        .flat_map(|r| [&r["alpha_new"]["exact"], &r["beta"]["exact"]])
        .filter_map(Value::as_str)
        .collect();
    for want in ["11/4 - 3*eta", "367/64 - 7*eta", "-367/64 + 8*eta"] {
        check(exact.contains(&want), format!("missing entry {want}"))?;
    }
    check(
        alpha_at(3) == EtaLinear::from_parts(ratio(11, 4), -3)
            && alpha_at(7) == EtaLinear::from_parts(ratio(367, 64), -7),
        "table values differ",
    )?;
    Ok(format!(
        "{} rows for k = 1..7 reproduced exactly",
        rows.len()
    ))
}

fn c6_recurrence() -> Outcome {
    let rec = case3_recurrence(127).map_err(|e| e.to_string())?;
    for (t, (v, _)) in rec.iter().enumerate() {
        check(
            v == &alpha_at(t as u64),
            format!("T = {t}: recurrence gives {v}"),
        )?;
    }
    check(alpha_closed_form(2) == alpha_at(3), "closed form m = 2")?;
    check(alpha_closed_form(3) == alpha_at(7), "closed form m = 3")?;
    Ok("recurrence matches the table for T <= 127; closed forms at m = 2, 3".into())
}

fn c7_claims() -> Outcome {
    let mut count = 0;
    let mut smallest = f64::INFINITY;
    for m in 1..=20 {
        let c = check_claim_case1(m).map_err(|e| e.to_string())?;
        check(c.passed(), format!("case 1, m = {m}: {}", c.margin))?;
        smallest = smallest.min(c.lower_log2);
        count += 1;
    }
    for m1 in 1..=12 {
        for m2 in 1..m1 {
            let c = check_claim_case2(m1, m2).map_err(|e| e.to_string())?;
            check(c.passed(), format!("case 2, ({m1}, {m2})"))?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} margins positive with certified enclosures (smallest about 2^{smallest:.0})"
    ))
}

fn c8_probabilities() -> Outcome {
    let mut checked = 0;
    for k in 1..=4u32 {
        let pg = build_phase_graph(k).unwrap();
        let q = unmatched_probabilities(pg.instance()).map_err(|e| e.to_string())?;
        for v in 0..pg.instance().offline_count() as u32 {
            let i = pg.last_phase_of_offline(v);
            if i < k {
                let want = predicted_unmatched_probability(i).unwrap();
                check(
                    q[v as usize] == want,
                    format!("k = {k}, vertex {v}: {}", q[v as usize]),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} vertices match 1/2, 1/8, 1/128 exactly"))
}

fn c9_monte_carlo() -> Outcome {
    let d2 = InstanceDistribution::Permuted(build_phase_graph(2).unwrap().into_instance());
    let a = estimate_ratio_with_threads(AlgorithmId::HalfHalf, &d2, 100_000, 1, Some(1))
        .map_err(|e| e.to_string())?;
    let b = estimate_ratio_with_threads(AlgorithmId::HalfHalf, &d2, 100_000, 1, Some(8))
        .map_err(|e| e.to_string())?;
    check(
        a.mean.to_bits() == b.mean.to_bits(),
        "k = 2 differs across thread counts",
    )?;
    let target = 11.0 / 12.0;
    check(
        (a.mean - target).abs() <= a.half_width,
        format!("k = 2: {} +/- {} misses 11/12", a.mean, a.half_width),
    )?;

    let d12 = InstanceDistribution::Permuted(build_phase_graph(12).unwrap().into_instance());
    let c = estimate_ratio_with_threads(AlgorithmId::HalfHalf, &d12, 100_000, 1, None)
        .map_err(|e| e.to_string())?;
    let d = estimate_ratio_with_threads(AlgorithmId::HalfHalf, &d12, 100_000, 1, Some(3))
        .map_err(|e| e.to_string())?;
    check(
        c.mean.to_bits() == d.mean.to_bits(),
        "k = 12 differs across thread counts",
    )?;
    let cf = phase_closed_form(12).unwrap();
    let (vs_opt, vs_n) = (to_f64(&cf.ratio_vs_opt), to_f64(&cf.ratio_vs_n));
    check(
        (c.mean - vs_opt).abs() < 0.01,
        format!("k = 12: {} vs closed form {vs_opt}", c.mean),
    )?;
    Ok(format!(
        "k = 2: {:.5} +/- {:.5} vs 11/12; k = 12: {:.5} vs {vs_opt:.5} (per-n {vs_n:.5}); bitwise equal across threads",
        a.mean, a.half_width, c.mean
    ))
}

fn c10_lift() -> Outcome {
    let inst = load("corpus_deg1.json");
    check(
        inst.arrivals().iter().any(|a| a.degree() == 1),
        "corpus instance has no degree-1 arrivals",
    )?;
    let opt = max_matching(&inst).0 as i64;
    let mut parts = Vec::new();
    for m in [4usize, 16, 64] {
        let (reduced, _) = reduce_to_exact_degree2(&inst, m).unwrap();
        let reduced_opt = max_matching(&reduced).0 as i64;
        let r = exact_reduced_half_half(&inst, m).map_err(|e| e.to_string())?;
        let gamma = &r.reduced / int(reduced_opt);
        let lifted = &r.lifted / int(opt);
        let bound = (&gamma * int(m as i64) - int(1)) / int(m as i64);
        check(
            lifted > bound,
            format!(
                "m = {m}: lifted {} <= bound {}",
                to_f64(&lifted),
                to_f64(&bound)
            ),
        )?;
        parts.push(format!(
            "m={m}: {:.4} > {:.4}",
            to_f64(&lifted),
            to_f64(&bound)
        ));
    }
    Ok(parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("eta constant", c1_eta),
        ("fractional tightness", c2_tightness),
        ("fractional guarantee", c3_fractional),
        ("integral guarantee", c4_integral),
        ("hand tables", c5_tables),
        ("closed form vs recurrence", c6_recurrence),
        ("claims", c7_claims),
        ("lower-bound probabilities", c8_probabilities),
        ("Monte Carlo consistency", c9_monte_carlo),
        ("exact-degree-2 reduction", c10_lift),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
