use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::Context;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sts_core::analysis::{
    auto_mod3_weighting, chromatic_index_exact, chromatic_index_heuristic, enumerate_parallel_classes,
    max_disjoint_pcs, pc_bound_mod3, pc_bound_ws, theorem1_pipeline, ExactHints, HeuristicConfig, HeuristicOutcome,
    PcBoundCertificate, SearchBudget, SearchStatus,
};
use sts_core::constructions::{
    bose, bose_half_sum, conjugate_square, half_sum_square, random_permutation, sts33_fixture, wilson_schreiber,
    ws_factorisation_of,
};
use sts_core::designs::{verify_colouring, verify_sts, Colouring, TripleSystem, VerificationReport};
use sts_core::factorisation::{factorise_g, verify_factorisation_properties};
use sts_core::generator::{colouring_survey_with, derive_seed, random_batch};
use sts_core::numtheory::{f_of, profile, scan_table};
use sts_core::Exec;

use crate::report::{CliError, CliResult, Exit, Report};
use crate::{
    AnalyzeCmd, BoundKind, BudgetArgs, Command, ConstructCmd, FixtureCmd, NumtheoryCmd, SquareKind, SurveyCmd,
};

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Numtheory(NumtheoryCmd::Profile { n }) => numtheory_profile(n),
        Command::Numtheory(NumtheoryCmd::Scan { limit, negative_psi }) => numtheory_scan(limit, negative_psi),
        Command::Factorise { n, out } => factorise(n, out.as_deref()),
        Command::Construct(ConstructCmd::WilsonSchreiber { n, out }) => construct_ws(n, out.as_deref()),
        Command::Construct(ConstructCmd::Bose { n, square, seed, out }) => {
            construct_bose(n, square, seed, out.as_deref())
        }
        Command::Fixture(FixtureCmd::Sts33 { out, colouring_out }) => fixture(out.as_deref(), colouring_out.as_deref()),
        Command::Verify { input, colouring } => verify(&input, colouring.as_deref()),
        Command::Analyze(AnalyzeCmd::Pcs { input, max_disjoint, budget }) => analyze_pcs(&input, max_disjoint, budget),
        Command::Analyze(AnalyzeCmd::Chi {
            input,
            exact: _,
            heuristic,
            target,
            seed,
            restarts,
            colouring,
            colouring_out,
            budget,
        }) => {
            let system = load_system(&input)?;
            match (heuristic, target) {
                (true, Some(target)) => {
                    analyze_chi_heuristic(&system, target, seed, restarts, colouring_out.as_deref())
                }
                (true, None) => Err(CliError::usage("--heuristic needs --target")),
                (false, _) => {
                    let witness = colouring.map(|p| load_colouring(&p, system.order())).transpose()?;
                    analyze_chi_exact(&system, witness.as_ref(), budget, colouring_out.as_deref())
                }
            }
        }
        Command::Analyze(AnalyzeCmd::Bound { input, method, weighting }) => analyze_bound(&input, method, &weighting),
        Command::Theorem1 { v } => theorem1(v),
        Command::Generate { v, count, seed, out_dir } => generate(v, count, seed, out_dir.as_deref()),
        Command::Survey(SurveyCmd::Colouring { v, count, seed, restarts, iterations }) => {
            survey(v, count, seed, HeuristicConfig { restarts, iterations_per_restart: iterations })
        }
    }
}

fn budget_of(args: BudgetArgs) -> SearchBudget {
    SearchBudget {
        max_nodes: args.budget_nodes,
        time_limit: (args.budget_seconds > 0).then(|| Duration::from_secs(args.budget_seconds)),
        max_classes: None,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(CliError::from)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display())).map_err(CliError::from)
}

fn load_system(path: &Path) -> Result<TripleSystem, CliError> {
    let text = read(path)?;
    Ok(TripleSystem::from_text(&text).with_context(|| format!("in {}", path.display()))?)
}

fn load_colouring(path: &Path, v: u32) -> Result<Colouring, CliError> {
    let (cv, colouring) = Colouring::from_text(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if cv != v {
        return Err(CliError::usage(format!("colouring is for order {cv}, system has order {v}")));
    }
    Ok(colouring)
}

/// Writes `text` to `out` and returns a one-line note, or returns `text` itself.
fn emit(text: String, out: Option<&Path>, what: &str) -> Result<String, CliError> {
    match out {
        Some(path) => {
            write(path, &text)?;
            Ok(format!("wrote {what} to {}\n", path.display()))
        }
        None => Ok(text),
    }
}

fn describe(report: &VerificationReport, limit: usize) -> String {
    let mut s = String::new();
    for v in report.violations.iter().take(limit) {
        let _ = writeln!(s, "  {v}");
    }
    if report.count() > limit {
        let _ = writeln!(s, "  ... and {} more", report.count() - limit);
    }
    s
}

fn numtheory_profile(n: u64) -> CliResult {
    let p = profile(n)?;
    Ok(Report::new("numtheory profile", p.to_key_values(), &p))
}

fn numtheory_scan(limit: u64, negative_psi: bool) -> CliResult {
    let rows = scan_table(limit, Exec::default());
    let exceptions: Vec<u64> = rows.iter().filter(|r| r.psi_star <= 0).map(|r| r.n).collect();
    let shown: Vec<_> = rows.iter().filter(|r| !negative_psi || r.psi < 0).collect();
    let mut text = String::from("n\tphi\tf\tpsi\tpsi_star\n");
    for r in &shown {
        let _ = writeln!(text, "{}\t{}\t{}\t{}\t{}", r.n, r.phi, r.f, r.psi, r.psi_star);
    }
    let list: Vec<String> = exceptions.iter().map(u64::to_string).collect();
    let _ = writeln!(text, "# exceptions (psi_star <= 0): {}", list.join(","));
    Ok(Report::new(
        "numtheory scan",
        text,
        json!({ "limit": limit, "negative_psi_only": negative_psi, "rows": shown, "exceptions": exceptions }),
    ))
}

fn factorise(n: u64, out: Option<&Path>) -> CliResult {
    let f = f_of(n)?;
    let fact = factorise_g(n)?;
    let report = verify_factorisation_properties(&fact, f);
    if !report.is_ok() {
        return Err(anyhow::Error::from(sts_core::Error::CertificateRefused(report)).into());
    }
    let text = emit(fact.to_text(), out, &format!("the factorisation of G({n})"))?;
    let g = fact.graph();
    let factors: Vec<Vec<[u64; 3]>> =
        fact.factors().iter().map(|fs| fs.iter().map(|&(x, y)| [x, y, g.weight((x, y))]).collect()).collect();
    Ok(Report::new("factorise", text, json!({ "n": n, "f": f, "factors": factors })))
}

fn system_report(
    command: &'static str,
    system: &TripleSystem,
    out: Option<&Path>,
    extra: serde_json::Value,
) -> CliResult {
    let text = emit(system.to_text(), out, &format!("STS({})", system.order()))?;
    Ok(Report::new(command, text, json!({ "v": system.order(), "triples": system.triples(), "details": extra })))
}

fn construct_ws(n: u64, out: Option<&Path>) -> CliResult {
    let sts = wilson_schreiber(n, &factorise_g(n)?)?;
    system_report("construct wilson-schreiber", &sts.system, out, json!({ "n": n }))
}

fn construct_bose(n: usize, square: SquareKind, seed: u64, out: Option<&Path>) -> CliResult {
    let sts = match square {
        SquareKind::HalfSum => bose_half_sum(n)?,
        SquareKind::Conjugate => {
            let base = half_sum_square(n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let squares = (0..3)
                .map(|_| conjugate_square(&base, &random_permutation(n, &mut rng)))
                .collect::<Result<Vec<_>, _>>()?;
            bose([&squares[0], &squares[1], &squares[2]])?
        }
    };
    let kind = match square {
        SquareKind::HalfSum => "half-sum",
        SquareKind::Conjugate => "conjugate",
    };
    system_report("construct bose", &sts.system, out, json!({ "n": n, "square": kind, "seed": seed }))
}

fn fixture(out: Option<&Path>, colouring_out: Option<&Path>) -> CliResult {
    let (sts, colouring) = sts33_fixture()?;
    let mut text = emit(sts.system.to_text(), out, "STS(33)")?;
    match colouring_out {
        Some(path) => {
            write(path, &colouring.to_text(33))?;
            let _ = writeln!(text, "wrote the {}-class colouring to {}", colouring.num_classes(), path.display());
        }
        None if out.is_some() => {}
        None => text.push_str(&colouring.to_text(33)),
    }
    Ok(Report::new(
        "fixture sts33",
        text,
        json!({ "v": 33, "triples": sts.system.triples(), "colouring": colouring.classes() }),
    ))
}

fn verify(input: &Path, colouring: Option<&Path>) -> CliResult {
    let system = load_system(input)?;
    let v = system.order();
    let report = verify_sts(&system);
    let mut text = if report.is_ok() {
        format!("STS({v}): ok, {} triples\n", system.len())
    } else {
        format!("STS({v}): {} violation(s)\n{}", report.count(), describe(&report, 10))
    };
    let mut ok = report.is_ok();
    let mut col_json = serde_json::Value::Null;
    if let Some(path) = colouring {
        let col = load_colouring(path, v)?;
        let r = verify_colouring(&system, &col);
        if r.is_ok() {
            let _ = writeln!(text, "colouring: ok, {} classes", col.num_classes());
        } else {
            let _ = write!(text, "colouring: {} violation(s)\n{}", r.count(), describe(&r, 10));
        }
        ok &= r.is_ok();
        col_json = json!(r);
    }
    let exit = if ok { Exit::Ok } else { Exit::Failed };
    Ok(Report::new("verify", text, json!({ "v": v, "system": report, "colouring": col_json })).exit(exit))
}

fn analyze_pcs(input: &Path, max_disjoint: bool, budget: BudgetArgs) -> CliResult {
    let system = load_system(input)?;
    let budget = budget_of(budget);
    if max_disjoint {
        let r = max_disjoint_pcs(&system, &budget)?;
        let text = match r.status {
            SearchStatus::Complete => format!("maximum disjoint parallel classes: {}\n", r.size),
            SearchStatus::Inconclusive => format!(
                "disjoint parallel classes: at least {}, at most {} (budget exhausted)\n",
                r.size, r.upper_bound
            ),
        };
        let exit = if r.status == SearchStatus::Complete { Exit::Ok } else { Exit::Inconclusive };
        Ok(Report::new("analyze pcs", text, &r).exit(exit))
    } else {
        let r = enumerate_parallel_classes(&system, &budget)?;
        let text = match r.status {
            SearchStatus::Complete => format!("parallel classes: {}\n", r.classes.len()),
            SearchStatus::Inconclusive => {
                format!("parallel classes: at least {} (budget exhausted)\n", r.classes.len())
            }
        };
        let exit = if r.status == SearchStatus::Complete { Exit::Ok } else { Exit::Inconclusive };
        Ok(Report::new("analyze pcs", text, &r).exit(exit))
    }
}

/// Smallest parallel-class bound this crate can certify for `system`.
fn best_certificate(system: &TripleSystem) -> Option<PcBoundCertificate> {
    let ws = ws_factorisation_of(system).ok().and_then(|(n, fact)| pc_bound_ws(n, &fact).ok());
    let mod3 = auto_mod3_weighting(system).and_then(|w| pc_bound_mod3(system, &w).ok());
    ws.into_iter().chain(mod3).min_by_key(|c| c.bound)
}

fn analyze_chi_exact(
    system: &TripleSystem,
    witness: Option<&Colouring>,
    budget: BudgetArgs,
    out: Option<&Path>,
) -> CliResult {
    let cert = best_certificate(system);
    let hints = ExactHints { certificate: cert.as_ref(), upper_witness: witness };
    let r = chromatic_index_exact(system, &budget_of(budget), hints)?;
    let mut text = match r.value() {
        Some(k) => format!("chromatic index: {k}\n"),
        None => format!("chromatic index: between {} and {} (budget exhausted)\n", r.lower, r.upper),
    };
    if let Some(path) = out {
        write(path, &r.colouring.to_text(system.order()))?;
        let _ = writeln!(text, "wrote a {}-class colouring to {}", r.upper, path.display());
    }
    let exit = if r.value().is_some() { Exit::Ok } else { Exit::Inconclusive };
    Ok(Report::new("analyze chi", text, json!({ "mode": "exact", "result": r, "certificate": cert })).exit(exit))
}

fn analyze_chi_heuristic(
    system: &TripleSystem,
    target: usize,
    seed: u64,
    restarts: u32,
    out: Option<&Path>,
) -> CliResult {
    let outcome = chromatic_index_heuristic(system, target, seed, restarts)?;
    let (mut text, exit) = match &outcome {
        HeuristicOutcome::Success { colouring } => {
            (format!("coloured with {} classes (target {target})\n", colouring.num_classes()), Exit::Ok)
        }
        HeuristicOutcome::Failure { best_uncoloured } => (
            format!(
                "no colouring with {target} classes found; best attempt left {best_uncoloured} triple(s) uncoloured\n"
            ),
            Exit::Inconclusive,
        ),
    };
    if let (Some(path), Some(col)) = (out, outcome.colouring()) {
        write(path, &col.to_text(system.order()))?;
        let _ = writeln!(text, "wrote the colouring to {}", path.display());
    }
    Ok(Report::new(
        "analyze chi",
        text,
        json!({ "mode": "heuristic", "target": target, "seed": seed, "outcome": outcome }),
    )
    .exit(exit))
}

fn parse_weighting(spec: &str) -> Result<Vec<u8>, CliError> {
    spec.split(',').map(|w| w.trim().parse::<u8>().map_err(|_| CliError::usage(format!("bad weight `{w}`")))).collect()
}

fn analyze_bound(input: &Path, method: BoundKind, weighting: &str) -> CliResult {
    let system = load_system(input)?;
    let cert = match method {
        BoundKind::Mod3 => {
            let w = if weighting == "auto" {
                auto_mod3_weighting(&system)
                    .ok_or_else(|| anyhow::anyhow!("no weighting of the form p mod 3 or layer fits this system"))
                    .map_err(|error| CliError { exit: Exit::Failed, error })?
            } else {
                parse_weighting(weighting)?
            };
            pc_bound_mod3(&system, &w)?
        }
        BoundKind::Ws => {
            let (n, fact) = ws_factorisation_of(&system)?;
            pc_bound_ws(n, &fact)?
        }
    };
    let text = format!(
        "at most {} pairwise disjoint parallel classes ({})\n",
        cert.bound,
        serde_json::to_value(cert.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    );
    Ok(Report::new("analyze bound", text, &cert))
}

fn theorem1(v: u32) -> CliResult {
    let r = theorem1_pipeline(v)?;
    let exit = if r.is_positive() { Exit::Ok } else { Exit::Failed };
    Ok(Report::new("theorem1", format!("{r}\n"), &r).exit(exit))
}

fn generate(v: u32, count: usize, seed: u64, out_dir: Option<&Path>) -> CliResult {
    let systems = random_batch(v, count, seed, Exec::default()).into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut text = String::new();
    let mut docs = Vec::new();
    for (i, s) in systems.iter().enumerate() {
        let item_seed = derive_seed(seed, i as u64);
        match out_dir {
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
                let path = dir.join(format!("sts{v}_seed{seed}_{i}.sts"));
                write(&path, &s.to_text())?;
                let _ = writeln!(text, "{}", path.display());
            }
            None => text.push_str(&s.to_text()),
        }
        docs.push(json!({ "index": i, "seed": item_seed, "triples": s.triples() }));
    }
    Ok(Report::new("generate", text, json!({ "v": v, "seed": seed, "systems": docs })))
}

fn survey(v: u32, count: usize, seed: u64, config: HeuristicConfig) -> CliResult {
    let r = colouring_survey_with(v, count, seed, &config, Exec::default())?;
    let mut text = format!("v={v} count={count} seed={seed} m={}\n", r.m);
    let _ = writeln!(text, "colours\tsystems");
    let _ = writeln!(text, "{}\t{}", r.m, r.at_m);
    let _ = writeln!(text, "{}\t{}", r.m + 1, r.at_m_plus_1);
    let _ = writeln!(text, "{}\t{}", r.m + 2, r.at_m_plus_2);
    let _ = writeln!(text, "fail\t{}", r.failed);
    if r.generator_failures > 0 {
        let _ = writeln!(text, "generator failures\t{}", r.generator_failures);
    }
    Ok(Report::new("survey colouring", text, &r))
}
