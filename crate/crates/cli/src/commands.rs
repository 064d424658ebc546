use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use deg2_core::algorithms::{greedy, water_level, AlgorithmId};
use deg2_core::certificate::{
    alpha_table, case1_tail_dominance, certify_fractional_run, certify_integral_run,
    check_claim_case1, check_claim_case2, eta, series_exponent, verify_hand_tables,
    CertificateReport, ClaimCheck, EtaLinear, Num, MAX_CASE1_M, MAX_CASE2_M,
};
use deg2_core::instance::{
    gen_random, parse_instance, reduce_to_exact_degree2, serialize_instance, Instance,
};
use deg2_core::lowerbound::{build_phase_graph, estimate_ratio_with_threads, InstanceDistribution};
use deg2_core::numeric::{int, to_decimal, to_f64, Rational};
use deg2_core::oracle::{exact_expected_half_half, exact_reduced_half_half, max_matching};
use deg2_core::Error;
use serde_json::{json, Value};

use crate::args::{
    CertifyKind, Cli, Command, EtaArgs, ExactArgs, Format, GenKind, InstanceArg, RunArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{csv_field, emit, write_output, Report};

/// Runs the parsed command; `Ok(false)` means a certificate assertion failed.
pub fn dispatch(cli: &Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Gen(kind) => gen(cli, kind).map(|_| true),
        Command::Run(args) => run(cli, args).map(|_| true),
        Command::Certify(kind) => certify(cli, kind),
        Command::Eta(args) => emit(cli, eta_report(args)?).map(|_| true),
        Command::Oracle(args) => emit(cli, oracle_report(args)?).map(|_| true),
        Command::Exact(args) => emit(cli, exact_report(args)?).map(|_| true),
    }
}

fn read_instance(path: &Path) -> CliResult<Instance> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_instance(&bytes)?)
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn num(x: &Rational) -> Value {
    serde_json::to_value(Num::from(x)).expect("plain struct")
}

fn ratio_to_opt(x: &Rational, opt: usize) -> Rational {
    if opt == 0 {
        int(1)
    } else {
        x / int(opt as i64)
    }
}

fn gen(cli: &Cli, kind: &GenKind) -> CliResult<()> {
    let (inst, name) = match kind {
        GenKind::Phase { k } => (
            build_phase_graph(*k)?.into_instance(),
            format!("phase_k{k}.json"),
        ),
        GenKind::Random {
            offline,
            arrivals,
            p2,
            seed,
        } => (
            gen_random(*offline, *arrivals, *p2, *seed)?,
            format!("random_n{offline}_a{arrivals}_s{seed}.json"),
        ),
        GenKind::Reduce { input, m } => {
            let src = read_instance(input)?;
            let (out, _) = reduce_to_exact_degree2(&src, *m)?;
            (out, format!("{}_m{m}.json", instance_name(input)))
        }
    };
    let mut bytes = serialize_instance(&inst);
    bytes.push(b'\n');
    write_output(cli, &bytes, Some(&name))
}

fn run(cli: &Cli, args: &RunArgs) -> CliResult<()> {
    if cli.format == Format::Json && args.seed.is_none() {
        return Err(CliError::Usage(
            "--seed is required with --format json".into(),
        ));
    }
    let seed = args.seed.unwrap_or(0);
    let algo: AlgorithmId = args.algo.into();
    let (dist, name) = match (&args.instance, &args.dist) {
        (Some(path), _) => {
            let inst = read_instance(path)?;
            let d = if args.permute {
                InstanceDistribution::Permuted(inst)
            } else {
                InstanceDistribution::Fixed(inst)
            };
            (d, instance_name(path))
        }
        (None, Some(spec)) => {
            let bytes = fs::read(spec)?;
            let d = InstanceDistribution::from_spec_json(&bytes, spec.parent())?;
            (d, instance_name(spec))
        }
        (None, None) => return Err(CliError::Usage("--instance or --dist is required".into())),
    };
    let est = estimate_ratio_with_threads(algo, &dist, args.trials, seed, args.threads)?;
    let base = dist.base();
    let exact: Option<Rational> = match algo {
        AlgorithmId::HalfHalf => match exact_expected_half_half(base) {
            Ok(e) => Some(e),
            Err(Error::GuardExceeded(why)) => {
                eprintln!("warning: exact expectation omitted: {why}");
                None
            }
            Err(e) => return Err(e.into()),
        },
        AlgorithmId::WaterLevel => Some(water_level(base).value()),
        AlgorithmId::Greedy => match dist {
            InstanceDistribution::Fixed(_) => Some(int(greedy(base).size() as i64)),
            InstanceDistribution::Permuted(_) => None,
        },
    };
    let exact_ratio = exact.as_ref().map(|e| ratio_to_opt(e, est.opt));
    let within_ci = exact_ratio
        .as_ref()
        .map(|r| (to_f64(r) - est.mean).abs() <= est.half_width.max(1e-12));

    let result = json!({
        "instance": name,
        "distribution": dist.kind(),
        "algo": algo.name(),
        "offline": base.offline_count(),
        "arrivals": base.arrival_count(),
        "opt": est.opt,
        "trials": est.trials,
        "seed": est.seed,
        "mean_ratio": est.mean,
        "ci99": est.half_width,
        "sample_sd": est.sample_sd,
        "exact_expectation": exact.as_ref().map(num),
        "exact_ratio": exact_ratio.as_ref().map(num),
        "exact_within_ci": within_ci,
    });
    let mut text = String::new();
    writeln!(
        text,
        "instance      {name} ({}, {} offline, {} arrivals)",
        dist.kind(),
        base.offline_count(),
        base.arrival_count()
    )
    .ok();
    writeln!(text, "algorithm     {}", algo.name()).ok();
    writeln!(text, "opt           {}", est.opt).ok();
    writeln!(text, "trials        {} (seed {})", est.trials, est.seed).ok();
    writeln!(
        text,
        "mean ratio    {:.6} +/- {:.6} (99% CI)",
        est.mean, est.half_width
    )
    .ok();
    match (&exact, &exact_ratio) {
        (Some(e), Some(r)) => {
            writeln!(
                text,
                "exact E[size] {} = {:.6}",
                deg2_core::numeric::to_fraction_string(e),
                to_f64(e)
            )
            .ok();
            writeln!(text, "exact ratio   {:.6}", to_f64(r)).ok();
        }
        _ => {
            writeln!(text, "exact ratio   unavailable").ok();
        }
    }
    let csv = format!(
        "instance,algo,trials,seed,opt,mean_ratio,ci99,exact_ratio\n{},{},{},{},{},{},{},{}\n",
        csv_field(&name),
        algo.name(),
        est.trials,
        est.seed,
        est.opt,
        est.mean,
        est.half_width,
        exact_ratio
            .as_ref()
            .map(|r| to_f64(r).to_string())
            .unwrap_or_default()
    );
    emit(
        cli,
        Report {
            command: "run",
            result,
            text,
            csv: Some(csv),
        },
    )
}

fn certificate_text(r: &CertificateReport) -> String {
    let mut t = String::new();
    writeln!(
        t,
        "{:>6}  {:<9} {:<14} {:<22} {:<22} {:>10} {:>10} {:>10}",
        "arrival", "case", "neighbors", "before", "after", "delta_p", "beta", "slack"
    )
    .ok();
    for e in &r.trace {
        writeln!(
            t,
            "{:>6}  {:<9} {:<14} {:<22} {:<22} {:>10.6} {:>10.6} {:>10.6}",
            e.arrival,
            e.case,
            format!("{:?}", e.neighbors),
            e.before.join(" "),
            e.after.join(" "),
            e.delta_p.approx,
            e.beta.approx,
            e.slack_min.approx
        )
        .ok();
    }
    let s = &r.summary;
    writeln!(
        t,
        "primal        {} = {:.9}",
        s.primal.exact, s.primal.approx
    )
    .ok();
    writeln!(t, "dual          {} = {:.9}", s.dual.exact, s.dual.approx).ok();
    writeln!(t, "opt           {}", s.opt).ok();
    writeln!(t, "gamma         {} = {:.9}", s.gamma.exact, s.gamma.approx).ok();
    if let Some(m) = &s.slack_min {
        writeln!(t, "slack min     {} = {:.9}", m.exact, m.approx).ok();
    }
    if let Some(e) = &s.expected_size {
        writeln!(t, "E[size]       {} = {:.9}", e.exact, e.approx).ok();
    }
    writeln!(t, "exact check   {}", s.expectation_check).ok();
    writeln!(t, "result        PASS").ok();
    t
}

fn certificate_csv(r: &CertificateReport) -> String {
    let mut s =
        String::from("arrival,case,neighbors,before,after,delta_p,delta_alpha,beta,slack_min\n");
    for e in &r.trace {
        let nb: Vec<String> = e.neighbors.iter().map(|x| x.to_string()).collect();
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            e.arrival,
            e.case,
            nb.join(" "),
            e.before.join(" "),
            e.after.join(" "),
            csv_field(&e.delta_p.exact),
            csv_field(&e.delta_alpha.exact),
            csv_field(&e.beta.exact),
            csv_field(&e.slack_min.exact)
        )
        .ok();
    }
    s
}

fn failed_report(command: &'static str, message: &str) -> Report {
    Report {
        command,
        result: json!({ "passed": false, "error": message }),
        text: format!("result        FAIL\n{message}\n"),
        csv: Some(format!("passed,error\nfalse,{}\n", csv_field(message))),
    }
}

fn certify(cli: &Cli, kind: &CertifyKind) -> CliResult<bool> {
    let outcome = match kind {
        CertifyKind::Integral(InstanceArg { instance })
        | CertifyKind::Fractional(InstanceArg { instance }) => {
            let inst = read_instance(instance)?;
            let (command, res) = match kind {
                CertifyKind::Integral(_) => ("certify integral", certify_integral_run(&inst)),
                _ => ("certify fractional", certify_fractional_run(&inst)),
            };
            match res {
                Ok(r) => {
                    let mut result = serde_json::to_value(&r)?;
                    result["passed"] = Value::Bool(true);
                    result["instance"] = Value::String(instance_name(instance));
                    Ok(Report {
                        command,
                        text: certificate_text(&r),
                        csv: Some(certificate_csv(&r)),
                        result,
                    })
                }
                Err(Error::Certificate(msg)) => Err((command, msg)),
                Err(e) => return Err(e.into()),
            }
        }
        CertifyKind::Tables => Ok(tables_report()?),
        CertifyKind::Claims { max_m, max_m2 } => Ok(claims_report(*max_m, *max_m2)?),
    };
    match outcome {
        Ok(report) => {
            let passed = report.result["passed"].as_bool().unwrap_or(false);
            emit(cli, report)?;
            Ok(passed)
        }
        Err((command, msg)) => {
            eprintln!("certification failed: {msg}");
            emit(cli, failed_report(command, &msg))?;
            Ok(false)
        }
    }
}

fn tables_report() -> CliResult<Report> {
    let r = verify_hand_tables()?;
    let mut text = String::new();
    let mut csv = String::from("k,levels,delta_p,alpha_new,beta,passed\n");
    writeln!(
        text,
        "{:>2}  {:<8} {:<10} {:<20} {:<20} result",
        "k", "levels", "delta_p", "alpha", "beta"
    )
    .ok();
    for row in &r.rows {
        let levels = format!("({},{})", row.levels.0, row.levels.1);
        let verdict = if row.passed() { "ok" } else { "MISMATCH" };
        writeln!(
            text,
            "{:>2}  {:<8} {:<10} {:<20} {:<20} {verdict}",
            row.k,
            levels,
            row.delta_p.to_string(),
            row.alpha_new.to_string(),
            row.beta.to_string()
        )
        .ok();
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            row.k,
            csv_field(&levels),
            csv_field(&row.delta_p.to_string()),
            csv_field(&row.alpha_new.to_string()),
            csv_field(&row.beta.to_string()),
            row.passed()
        )
        .ok();
    }
    writeln!(
        text,
        "result        {}",
        if r.all_passed { "PASS" } else { "FAIL" }
    )
    .ok();
    let mut result = serde_json::to_value(&r)?;
    result["passed"] = Value::Bool(r.all_passed);
    Ok(Report {
        command: "certify tables",
        result,
        text,
        csv: Some(csv),
    })
}

/// Exact margins are printed only while they stay readable.
fn short_exact(x: &EtaLinear) -> Option<String> {
    let bits = x.a.bits().max(x.b.bits());
    (bits <= 512).then(|| x.to_string())
}

fn claim_json(c: &ClaimCheck) -> Value {
    json!({
        "claim": c.claim,
        "params": c.params,
        "passed": c.passed(),
        "forms_agree": c.forms_agree,
        "positive": c.positive,
        "terms_used": c.terms_used,
        "lower_log2": c.lower_log2,
        "upper_log2": c.upper_log2,
        "margin": short_exact(&c.margin),
    })
}

fn claims_report(max_m: u32, max_m2: u32) -> CliResult<Report> {
    if max_m > MAX_CASE1_M || max_m2 > MAX_CASE2_M {
        return Err(CliError::Usage(format!(
            "supported bounds: --max-m <= {MAX_CASE1_M}, --max-m2 <= {MAX_CASE2_M}"
        )));
    }
    let mut checks = Vec::new();
    for m in 1..=max_m {
        checks.push(check_claim_case1(m)?);
    }
    for m1 in 2..=max_m2 {
        for m2 in 1..m1 {
            checks.push(check_claim_case2(m1, m2)?);
        }
    }
    let dominance: Vec<(u32, bool)> = (1..=40)
        .map(|m| case1_tail_dominance(m).map(|ok| (m, ok)))
        .collect::<Result<_, _>>()?;
    let passed = checks.iter().all(ClaimCheck::passed) && dominance.iter().all(|(_, ok)| *ok);

    let mut text = String::new();
    let mut csv =
        String::from("claim,params,passed,forms_agree,terms_used,lower_log2,upper_log2\n");
    writeln!(
        text,
        "{:<6} {:<10} {:<6} {:>6} {:>16} {:>16}",
        "claim", "params", "result", "terms", "lower log2", "upper log2"
    )
    .ok();
    for c in &checks {
        let params = c
            .params
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let verdict = if c.passed() { "ok" } else { "FAIL" };
        writeln!(
            text,
            "{:<6} {:<10} {:<6} {:>6} {:>16.3} {:>16.3}",
            c.claim, params, verdict, c.terms_used, c.lower_log2, c.upper_log2
        )
        .ok();
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            c.claim,
            params,
            c.passed(),
            c.forms_agree,
            c.terms_used,
            c.lower_log2,
            c.upper_log2
        )
        .ok();
    }
    writeln!(
        text,
        "tail dominance for the first claim holds for m = 1..=40: {}",
        dominance.iter().all(|(_, ok)| *ok)
    )
    .ok();
    writeln!(
        text,
        "result        {}",
        if passed { "PASS" } else { "FAIL" }
    )
    .ok();
    Ok(Report {
        command: "certify claims",
        result: json!({
            "passed": passed,
            "checks": checks.iter().map(claim_json).collect::<Vec<_>>(),
            "tail_dominance": dominance.iter().map(|(m, ok)| json!({"m": m, "holds": ok})).collect::<Vec<_>>(),
        }),
        text,
        csv: Some(csv),
    })
}

fn eta_report(args: &EtaArgs) -> CliResult<Report> {
    if args.terms == 0 || args.terms > 24 {
        return Err(CliError::Usage("--terms must lie in 1..=24".into()));
    }
    let e = eta(args.terms);
    let bound_exp = series_exponent(args.terms + 1) - 1;
    let value = to_decimal(&e.value, args.digits);
    let lower = to_decimal(&e.lower(), args.digits);
    let mut text = format!(
        "eta = {value}...\nterms         {}\ntail bound    2^-{bound_exp}\nenclosure     [{lower}, {value}]\n",
        e.terms_used
    );
    let mut result = json!({
        "terms": e.terms_used,
        "digits": args.digits,
        "value": value,
        "approx": e.approx(),
        "lower": lower,
        "tail_bound_log2": -(bound_exp as f64),
    });
    let mut csv = None;
    if args.table {
        let table = alpha_table(args.max_k);
        let mut c = String::from("k,a,b,value\n");
        writeln!(text, "{:>4}  {:<24} value", "k", "alpha_(k)").ok();
        let rows: Vec<Value> = table
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = i + 1;
                let (sa, sb) = (a.a.to_string(), a.b.to_string());
                let shown =
                    short_exact(a).unwrap_or_else(|| format!("{sb}*eta + <{} bits>", a.a.bits()));
                writeln!(text, "{k:>4}  {shown:<24} {:.12}", a.approx()).ok();
                writeln!(
                    c,
                    "{k},{},{},{}",
                    csv_field(&sa),
                    csv_field(&sb),
                    a.approx()
                )
                .ok();
                json!({"k": k, "a": sa, "b": sb, "value": a.approx()})
            })
            .collect();
        result["alpha_table"] = Value::Array(rows);
        csv = Some(c);
    }
    Ok(Report {
        command: "eta",
        result,
        text,
        csv,
    })
}

fn oracle_report(args: &InstanceArg) -> CliResult<Report> {
    let inst = read_instance(&args.instance)?;
    let (opt, m) = max_matching(&inst);
    let pairs: Vec<(u32, u32)> = m.pairs().collect();
    let mut text = format!("opt           {opt}\n");
    let mut csv = String::from("offline,arrival\n");
    for (i, j) in &pairs {
        writeln!(text, "  offline {i} <- arrival {j}").ok();
        writeln!(csv, "{i},{j}").ok();
    }
    Ok(Report {
        command: "oracle",
        result: json!({
            "instance": instance_name(&args.instance),
            "opt": opt,
            "matching": pairs.iter().map(|(i, j)| json!({"offline": i, "arrival": j})).collect::<Vec<_>>(),
        }),
        text,
        csv: Some(csv),
    })
}

fn exact_report(args: &ExactArgs) -> CliResult<Report> {
    let inst = read_instance(&args.instance)?;
    let (opt, _) = max_matching(&inst);
    let e = exact_expected_half_half(&inst)?;
    let ratio = ratio_to_opt(&e, opt);
    let mut text = format!(
        "opt           {opt}\nE[size]       {} = {:.9}\nratio         {:.9}\n",
        deg2_core::numeric::to_fraction_string(&e),
        to_f64(&e),
        to_f64(&ratio)
    );
    let mut result = json!({
        "instance": instance_name(&args.instance),
        "opt": opt,
        "expected_size": num(&e),
        "ratio": num(&ratio),
    });
    if let Some(m) = args.copies {
        let (reduced_inst, _) = reduce_to_exact_degree2(&inst, m)?;
        let (opt_reduced, _) = max_matching(&reduced_inst);
        let r = exact_reduced_half_half(&inst, m)?;
        let gamma = ratio_to_opt(&r.reduced, opt_reduced);
        let lifted_ratio = ratio_to_opt(&r.lifted, opt);
        let bound = (&gamma * int(m as i64) - int(1)) / int(m as i64);
        let exceeds = lifted_ratio > bound;
        writeln!(
            text,
            "copies        {m}\nreduced opt   {opt_reduced}\nreduced ratio {:.9}\nlifted ratio  {:.9}\n(gamma m - 1)/m {:.9}\nexceeds       {exceeds}",
            to_f64(&gamma),
            to_f64(&lifted_ratio),
            to_f64(&bound)
        )
        .ok();
        result["reduction"] = json!({
            "copies": m,
            "reduced_opt": opt_reduced,
            "reduced_expected_size": num(&r.reduced),
            "reduced_ratio": num(&gamma),
            "lifted_expected_size": num(&r.lifted),
            "lifted_ratio": num(&lifted_ratio),
            "dummy_taken": num(&r.dummy_taken),
            "bound": num(&bound),
            "exceeds_bound": exceeds,
        });
    }
    Ok(Report {
        command: "exact",
        result,
        text,
        csv: None,
    })
}
