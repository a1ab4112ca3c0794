//! Implementations of the five subcommands.

use std::io::Write;
use std::path::PathBuf;

use fmfbm::montecarlo::{ComparisonReport, MCEstimate};
use fmfbm::theory::{
    cor28_printed_limit, correlation, correlation_asymptotic_qq13, covariance_asymptotic_q33,
    covariance_q1_tail_expansion, covariance_tc_q1_sym, lrd_condition, paper_decay_exponent,
    AsymptoticValue, FormulaVariant,
};
use fmfbm::{
    alpha1_limit_covariance, compare_covariance, empirical_correlation, fit_decay_exponent,
    generate_ensemble, generate_price_paths, laplace_check, moment_check, variance_tc,
    FmfBmParams, StableIndex, TimeGrid,
};
use serde_json::{json, Value};

use crate::opts::{
    Cli, Command, CommonArgs, LaplaceArgs, LrdArgs, MomentsArgs, OutputFormat, PriceArgs,
    Resolved, VerifyCommand,
};
use crate::CliError;

/// Full-precision decimal formatting (17 significant digits) so CSV output
/// round-trips bit-exactly.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_artifact(out: Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))?;
            Ok(())
        }
        Some(path) => std::fs::write(&path, content)
            .map_err(|e| CliError::Io(format!("cannot write {path:?}: {e}"))),
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn paths_csv(grid: &TimeGrid, paths: &[Vec<f64>]) -> String {
    let mut csv = String::from("path_id,t,value\n");
    for (i, path) in paths.iter().enumerate() {
        for (t, v) in grid.times().iter().zip(path) {
            csv.push_str(&format!("{i},{},{}\n", fmt(*t), fmt(*v)));
        }
    }
    csv
}

fn paths_json(command: &str, grid: &TimeGrid, paths: &[Vec<f64>]) -> Value {
    json!({
        "schema_version": 1,
        "command": command,
        "t": grid.times(),
        "paths": paths
            .iter()
            .enumerate()
            .map(|(i, p)| json!({ "path_id": i, "values": p }))
            .collect::<Vec<_>>(),
    })
}

fn asym_json(v: &AsymptoticValue) -> Value {
    json!({
        "value": v.value,
        "terms": v.terms,
        "dominant_decay_exponent": v.dominant_decay_exponent(),
    })
}

fn params_json(p: &FmfBmParams) -> Value {
    json!({
        "a": p.a,
        "b": p.b,
        "h1": p.h1.value(),
        "h2": p.h2.value(),
        "alpha": p.alpha.value(),
    })
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => simulate(&args),
        Command::Theory(args) => theory(&args),
        Command::Verify(v) => match v {
            VerifyCommand::Laplace(args) => verify_laplace(&args),
            VerifyCommand::Moments(args) => verify_moments(&args),
            VerifyCommand::Cov(args) => verify_cov(&args),
        },
        Command::LrdScan(args) => lrd_scan(&args),
        Command::Price(args) => price(&args),
    }
}

fn simulate(args: &CommonArgs) -> Result<(), CliError> {
    let r = Resolved::new(args)?;
    let params = r.params()?;
    let grid = r.grid("lin:0:1:11")?;
    let delta_r = r.delta_r(params.alpha, grid.last());
    let ens = generate_ensemble(&params, &grid, r.paths(1000), delta_r, r.seed())?;
    match r.format()? {
        OutputFormat::Csv => write_artifact(r.out(), &paths_csv(&grid, &ens.paths)),
        OutputFormat::Json => {
            let doc = paths_json("simulate", &grid, &ens.paths);
            write_artifact(
                r.out(),
                &format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")),
            )
        }
    }
}

fn price(args: &PriceArgs) -> Result<(), CliError> {
    let r = Resolved::new(&args.common)?;
    let params = r.price_params(args)?;
    let grid = r.grid("lin:0:1:11")?;
    let delta_r = r.delta_r(params.mix.alpha, grid.last());
    let paths = generate_price_paths(&params, &grid, r.paths(1000), delta_r, r.seed())?;
    match r.format()? {
        OutputFormat::Csv => write_artifact(r.out(), &paths_csv(&grid, &paths)),
        OutputFormat::Json => {
            let doc = paths_json("price", &grid, &paths);
            write_artifact(
                r.out(),
                &format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")),
            )
        }
    }
}

fn theory(args: &CommonArgs) -> Result<(), CliError> {
    let r = Resolved::new(args)?;
    let params = r.params()?;
    let (s, t) = (r.s(), r.t());
    if !(s > 0.0 && t > 0.0) {
        return Err(CliError::Params(format!(
            "theory needs s > 0 and t > 0, got s = {s}, t = {t}"
        )));
    }
    let paper = FormulaVariant::PaperLemma22;
    let oracle = FormulaVariant::MomentOracle;

    let qq13 = correlation_asymptotic_qq13(&params, s.min(t), s.max(t), paper).ok();
    let q33 = covariance_asymptotic_q33(&params, s.min(t), s.max(t)).ok();
    let tail = covariance_q1_tail_expansion(&params, s.min(t), s.max(t)).ok();

    let identity_params = FmfBmParams::new(
        params.a,
        params.b,
        params.h1,
        params.h2,
        StableIndex::new(1.0).expect("valid index"),
    )?;
    let q33_at_alpha1 = covariance_asymptotic_q33(&identity_params, s.min(t), s.max(t)).ok();

    let doc = json!({
        "schema_version": 1,
        "command": "theory",
        "params": params_json(&params),
        "s": s,
        "t": t,
        "variance": {
            "paper": variance_tc(&params, t, paper),
            "oracle": variance_tc(&params, t, oracle),
        },
        "variance_at_s": {
            "paper": variance_tc(&params, s, paper),
            "oracle": variance_tc(&params, s, oracle),
        },
        "covariance_q1": {
            "paper": covariance_tc_q1_sym(&params, s, t, paper)?,
            "oracle": covariance_tc_q1_sym(&params, s, t, oracle)?,
        },
        "correlation": {
            "paper": correlation(&params, s, t, paper)?,
            "oracle": correlation(&params, s, t, oracle)?,
        },
        "asymptotic_q33": q33.as_ref().map(asym_json),
        "covariance_tail_expansion": tail.as_ref().map(asym_json),
        "correlation_qq13_terms": qq13.as_ref().map(asym_json),
        "lrd": lrd_condition(&params),
        "alpha1_limits": {
            "covariance_q1_limit": alpha1_limit_covariance(
                params.a, params.b, params.h1, params.h2, s.min(t), s.max(t))?,
            "q33_at_alpha1": q33_at_alpha1.as_ref().map(asym_json),
            "cor28_printed": asym_json(&cor28_printed_limit(
                params.a, params.b, params.h2, s.min(t), s.max(t))),
        },
    });
    print_json(&doc);
    Ok(())
}

fn reports_json(command: &str, reports: &[ComparisonReport]) -> Value {
    json!({
        "schema_version": 1,
        "command": command,
        "reports": reports,
    })
}

fn finish_verification(command: &str, reports: &[ComparisonReport]) -> Result<(), CliError> {
    print_json(&reports_json(command, reports));
    if reports.iter().all(|r| r.exact_oracles_pass()) {
        Ok(())
    } else {
        Err(CliError::OracleFailure)
    }
}

fn verify_laplace(args: &LaplaceArgs) -> Result<(), CliError> {
    let r = Resolved::new(&args.common)?;
    let alpha = r.alpha()?;
    let u = r.list(&args.u, "u", "0.5,1,2")?;
    let reports = laplace_check(alpha, &u, r.paths(200_000), r.seed())?;
    finish_verification("verify-laplace", &reports)
}

fn verify_moments(args: &MomentsArgs) -> Result<(), CliError> {
    let r = Resolved::new(&args.common)?;
    let alpha = r.alpha()?;
    let t = r.f64_or(args.common.t, "t", 1.0);
    let orders = r.list(&args.orders, "orders", "1,2")?;
    let delta_r = r.delta_r(alpha, t);
    let reports = moment_check(alpha, t, &orders, r.paths(100_000), delta_r, r.seed())?;
    finish_verification("verify-moments", &reports)
}

fn verify_cov(args: &CommonArgs) -> Result<(), CliError> {
    let r = Resolved::new(args)?;
    let params = r.params()?;
    let (s, t) = (r.s(), r.t());
    let delta_r = r.delta_r(params.alpha, s.max(t));
    let report = compare_covariance(&params, s, t, r.paths(100_000), delta_r, r.seed())?;
    print_json(&json!({
        "schema_version": 1,
        "command": "verify-cov",
        "report": report,
    }));
    if report.exact_oracles_pass() {
        Ok(())
    } else {
        Err(CliError::OracleFailure)
    }
}

fn lrd_scan(args: &LrdArgs) -> Result<(), CliError> {
    let r = Resolved::new(&args.common)?;
    let params = r.params()?;
    let s = r.s();
    if !(s > 0.0) {
        return Err(CliError::Params(format!("lrd-scan needs s > 0, got {s}")));
    }
    let tolerance = r.tolerance();
    let theory_d = paper_decay_exponent(&params);

    let (mode, estimates) = match r.input(&args.input) {
        Some(path) => ("replay", read_corr_csv(&path)?),
        None => {
            let scan_grid = r.grid("log:10:1000:20")?;
            // the ensemble grid carries the anchor s plus every scan time
            let mut all: Vec<f64> = scan_grid.times().to_vec();
            if !all.contains(&s) {
                all.push(s);
            }
            all.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
            all.dedup();
            let full_grid = TimeGrid::new(all)?;
            let delta_r = r.delta_r(params.alpha, full_grid.last());
            let ens =
                generate_ensemble(&params, &full_grid, r.paths(20_000), delta_r, r.seed())?;
            let s_index = full_grid
                .times()
                .iter()
                .position(|&x| x == s)
                .expect("anchor in grid");
            let mut rows = Vec::new();
            for (j, &t) in full_grid.times().iter().enumerate() {
                if t == s {
                    continue;
                }
                let est = empirical_correlation(&ens, s_index, j)?;
                rows.push((t, est));
            }
            let csv = {
                let mut text = String::from("t,corr,stderr\n");
                for (t, est) in &rows {
                    text.push_str(&format!(
                        "{},{},{}\n",
                        fmt(*t),
                        fmt(est.value),
                        fmt(est.std_error)
                    ));
                }
                text
            };
            write_artifact(r.out(), &csv)?;
            ("simulate", rows)
        }
    };

    let t_values: Vec<f64> = estimates.iter().map(|(t, _)| *t).collect();
    let corr: Vec<MCEstimate> = estimates.iter().map(|(_, e)| *e).collect();
    let fit = fit_decay_exponent(s, &t_values, &corr)?;
    let verdict = (fit.exponent_d - theory_d).abs() <= tolerance;

    print_json(&json!({
        "schema_version": 1,
        "command": "lrd-scan",
        "mode": mode,
        "params": params_json(&params),
        "s": s,
        "tolerance": tolerance,
        "theory_d": theory_d,
        "fitted_d": fit.exponent_d,
        "r_squared": fit.r_squared,
        "fit": fit,
        "verdict": verdict,
    }));
    Ok(())
}

fn read_corr_csv(path: &PathBuf) -> Result<Vec<(f64, MCEstimate)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {path:?}: {e}")))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line.trim() != "t,corr,stderr" {
                return Err(CliError::Params(format!(
                    "replay file must start with header t,corr,stderr, got {line:?}"
                )));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Params(format!(
                "replay row {lineno} must have 3 fields, got {line:?}"
            )));
        }
        let parse = |text: &str| -> Result<f64, CliError> {
            text.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Params(format!("bad number {text:?} on row {lineno}")))
        };
        rows.push((
            parse(fields[0])?,
            MCEstimate {
                value: parse(fields[1])?,
                std_error: parse(fields[2])?,
                n: 0,
            },
        ));
    }
    Ok(rows)
}
