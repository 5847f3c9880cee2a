use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};

use dynsis::meanfield::{simulate_trajectory, ProbabilityState};
use dynsis::montecarlo::{
    rep_seed, run_epidemic, sweep as run_sweep, write_sweep_csv, McOptions, SweepConfig,
};
use dynsis::netmodel::{
    complete, gen_barabasi_albert, gen_gilbert, gen_regular, gen_watts_strogatz, star,
    write_edge_list,
};
use dynsis::spectral::{
    build_system_set, expected_column_sum, gilbert_spread_bound, jsr_bracket_with, mc_column_sum,
    product_spectral_radius, ColumnSampling, EnumerationLimits, Verdict,
};
use dynsis::switching::SwitchingPolicy;
use dynsis::{EpidemicParams, Graph, NormKind};

use crate::config::{AnalysisSpec, ExperimentConfig, Mode};
use crate::error::CliError;
use crate::{AppendixArgs, ConfigArgs, Family, GenArgs};

/// Data goes to `path` or stdout; summaries go wherever the data does not.
fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn summary(data_to_file: bool, line: &str) {
    if data_to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn need<T>(v: Option<T>, flag: &str, family: Family) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{family:?} graphs need --{flag}").to_lowercase()))
}

pub fn gen(a: GenArgs) -> Result<(), CliError> {
    let f = a.family;
    let g = match f {
        Family::Regular => gen_regular(a.n, need(a.k, "k", f)?, need(a.seed, "seed", f)?),
        Family::Ws => gen_watts_strogatz(
            a.n,
            need(a.k, "k", f)?,
            need(a.rewire, "rewire", f)?,
            need(a.seed, "seed", f)?,
        ),
        Family::Ba => gen_barabasi_albert(a.n, need(a.m, "m", f)?, need(a.seed, "seed", f)?),
        Family::Gilbert => gen_gilbert(a.n, need(a.p, "p", f)?, a.seed.unwrap_or(0)),
        Family::Star => Ok(star(a.n)),
        Family::Complete => Ok(complete(a.n)),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let rho = g.spectral_radius()?;
    emit(a.out.as_deref(), |w| write_edge_list(&g, w))?;
    summary(a.out.is_some(), &format!("n={} m={} rho={rho:.6}", g.n(), g.edge_count()));
    Ok(())
}

fn load(a: &ConfigArgs) -> Result<(ExperimentConfig, std::path::PathBuf), CliError> {
    let (mut cfg, base) = ExperimentConfig::load(&a.config)?;
    if let Some(s) = a.seed {
        cfg.run.seed = s;
    }
    if let Some(b) = a.beta {
        cfg.epidemic.beta = Some(b);
    }
    if let Some(d) = a.delta {
        cfg.epidemic.delta = d;
    }
    if let Some(h) = a.horizon {
        cfg.run.horizon = h;
    }
    if let Some(r) = a.reps {
        cfg.run.reps = r;
    }
    if let Some(f) = a.init_fraction {
        cfg.run.init_fraction = f;
    }
    if let Some(m) = a.mode {
        cfg.run.mode = m;
    }
    if a.allow_reinfection {
        cfg.run.allow_reinfection = true;
    }
    if let Some(d) = a.max_depth {
        cfg.analysis.max_depth = d;
    }
    if let Some(n) = &a.norm {
        cfg.analysis.norm =
            Some(n.parse::<NormKind>().map_err(|e| CliError::Usage(e.to_string()))?);
    }
    if let Some(o) = &a.out {
        cfg.output.path = Some(o.clone());
    }
    cfg.validate()?;
    if a.dump_config {
        println!("{}", cfg.to_json());
        std::process::exit(0);
    }
    Ok((cfg, base))
}

fn limits(a: &AnalysisSpec) -> EnumerationLimits {
    let mut l = EnumerationLimits::default();
    if let Some(m) = a.max_products {
        l.max_products = m;
    }
    l.time_budget = a.time_budget_secs.map(Duration::from_secs_f64);
    l
}

fn params(beta: f64, delta: f64) -> Result<EpidemicParams, CliError> {
    EpidemicParams::new(beta, delta).map_err(|e| CliError::Config(e.to_string()))
}

/// Graphs in the order a period visits them, or declaration order otherwise.
fn product_order(policy: &SwitchingPolicy, set: &[Graph]) -> Vec<Graph> {
    match policy.cycle() {
        Some(c) => c.into_iter().cloned().collect(),
        None => set.to_vec(),
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::DiesOut => "DiesOut",
        Verdict::Spreads => "Spreads",
        Verdict::Inconclusive => "Inconclusive",
    }
}

pub fn threshold(a: ConfigArgs) -> Result<(), CliError> {
    let (cfg, base) = load(&a)?;
    let pr = params(cfg.single_beta()?, cfg.epidemic.delta)?;
    let graphs = cfg.graphs(&base)?;
    let policy = cfg.policy(graphs.clone())?;

    let report: Value = match policy.gilbert_params() {
        Some((n, p)) => {
            let b = gilbert_spread_bound(n, p, &pr).map_err(|e| CliError::Config(e.to_string()))?;
            // a bound above one says nothing about die-out
            let verdict = if b.raw < 1.0 - dynsis::spectral::VERDICT_TOL {
                Verdict::DiesOut
            } else {
                Verdict::Inconclusive
            };
            json!({
                "criterion": "gilbert_bound",
                "verdict": verdict_name(verdict),
                "value": b.raw,
                "clamped": b.clamped,
                "n": n,
                "p": p,
                "beta": pr.beta,
                "delta": pr.delta,
            })
        }
        None => {
            let set = build_system_set(&graphs, &pr)?;
            let norm = cfg.analysis.norm.unwrap_or_else(|| set.default_norm());
            let b = jsr_bracket_with(&set, cfg.analysis.max_depth, norm, &limits(&cfg.analysis))?;
            let product_rho = product_spectral_radius(&product_order(&policy, &graphs), &pr)?;
            let mut v = json!({
                "criterion": "jsr",
                "verdict": verdict_name(b.verdict()),
                "lower": b.lower,
                "upper": b.upper,
                "depth": b.depth,
                "norm": b.norm,
                "method": b.method,
                "set_size": set.len(),
                "symmetric": set.is_symmetric(),
                "product_rho": product_rho,
                "policy": policy.kind_name(),
                "beta": pr.beta,
                "delta": pr.delta,
            });
            if b.lower == b.upper {
                v["value"] = json!(b.lower);
            }
            v
        }
    };
    emit(cfg.output.path.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        writeln!(w)
    })
}

pub fn simulate(a: ConfigArgs) -> Result<(), CliError> {
    let (cfg, base) = load(&a)?;
    let pr = params(cfg.single_beta()?, cfg.epidemic.delta)?;
    let policy = cfg.policy(cfg.graphs(&base)?)?;
    let run = &cfg.run;
    let out = cfg.output.path.as_deref();

    match run.mode {
        Mode::Meanfield => {
            let p0 = ProbabilityState::uniform(policy.n(), run.init_fraction)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let traj = simulate_trajectory(&policy, &p0, &pr, run.horizon, run.seed)?;
            emit(out, |w| {
                let header: Vec<String> = (0..policy.n()).map(|i| format!("p_{i}")).collect();
                writeln!(w, "t,{}", header.join(","))?;
                for s in &traj.states {
                    let row: Vec<String> = s.p.iter().map(f64::to_string).collect();
                    writeln!(w, "{},{}", s.t, row.join(","))?;
                }
                Ok(())
            })?;
            summary(out.is_some(), &format!("final sup-norm={}", traj.last().sup_norm()));
        }
        Mode::Mc => {
            if run.reps == 0 {
                return Err(CliError::Config("run.reps must be at least 1".into()));
            }
            let opts = McOptions { allow_reinfection: run.allow_reinfection };
            let runs = (0..run.reps)
                .map(|r| {
                    run_epidemic(&policy, &pr, run.init_fraction, run.horizon, rep_seed(run.seed, r), &opts)
                        .map_err(|e| match e {
                            e if e.is_numeric() => CliError::Core(e),
                            e => CliError::Config(e.to_string()),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            emit(out, |w| {
                let header: Vec<String> = (0..runs.len()).map(|r| format!("run_{r}")).collect();
                writeln!(w, "t,{}", header.join(","))?;
                for t in 0..=run.horizon {
                    let row: Vec<String> = runs.iter().map(|r| r.series[t].to_string()).collect();
                    writeln!(w, "{t},{}", row.join(","))?;
                }
                Ok(())
            })?;
            let died = runs.iter().filter(|r| r.died_out()).count();
            let at: Vec<String> = runs
                .iter()
                .map(|r| r.died_out_at.map_or_else(|| "-".to_string(), |t| t.to_string()))
                .collect();
            summary(
                out.is_some(),
                &format!("died out {died}/{}; died_out_at=[{}]", runs.len(), at.join(",")),
            );
        }
    }
    Ok(())
}

pub fn sweep(a: ConfigArgs) -> Result<(), CliError> {
    let (cfg, base) = load(&a)?;
    let range = cfg
        .epidemic
        .beta_range
        .ok_or_else(|| CliError::Config("sweep needs epidemic.beta_range".into()))?;
    let delta = cfg.epidemic.delta;
    let grid: Vec<(f64, f64)> = range.values().into_iter().map(|b| (b, delta)).collect();
    for &(b, d) in &grid {
        params(b, d)?;
    }
    let policy = cfg.policy(cfg.graphs(&base)?)?;
    let sc = SweepConfig {
        grid,
        reps: cfg.run.reps,
        horizon: cfg.run.horizon,
        seed: cfg.run.seed,
        init_fraction: cfg.run.init_fraction,
        mc: McOptions { allow_reinfection: cfg.run.allow_reinfection },
        max_depth: cfg.analysis.max_depth,
        norm: cfg.analysis.norm,
        limits: limits(&cfg.analysis),
    };
    let rows = run_sweep(&policy, &sc).map_err(|e| match e {
        e if e.is_numeric() => CliError::Core(e),
        e => CliError::Config(e.to_string()),
    })?;
    emit(cfg.output.path.as_deref(), |w| write_sweep_csv(&rows, w))?;
    summary(cfg.output.path.is_some(), &format!("{} rows", rows.len()));
    Ok(())
}

pub fn verify_appendix(a: AppendixArgs) -> Result<(), CliError> {
    if a.trials < 1000 {
        return Err(CliError::Usage(format!("--trials must be at least 1000, got {}", a.trials)));
    }
    if a.k_max == 0 {
        return Err(CliError::Usage("--k-max must be at least 1".into()));
    }
    let pr = params(a.beta, a.delta)?;
    let sampling =
        if a.symmetric { ColumnSampling::Symmetric } else { ColumnSampling::IidOffDiagonal };
    let usage = |e: dynsis::Error| CliError::Usage(e.to_string());

    println!("k,formula,mc_mean,std_err,z,pass");
    let mut all = true;
    for k in 1..=a.k_max {
        let want = expected_column_sum(a.n, a.p, &pr, k).map_err(usage)?;
        let est = mc_column_sum(a.n, a.p, &pr, k, a.trials, a.seed, sampling).map_err(usage)?;
        let diff = est.mean - want;
        // zero variance leaves only rounding between the two
        let (z, pass) = if est.std_err > 0.0 {
            let z = diff / est.std_err;
            (z, z.abs() <= 3.0)
        } else {
            (0.0, diff.abs() <= 1e-9 * want.abs().max(1.0))
        };
        all &= pass;
        println!("{k},{want},{},{},{z:.3},{}", est.mean, est.std_err, if pass { "pass" } else { "fail" });
    }
    eprintln!("{}", if all { "all pass" } else { "some rows fail at 3 standard errors" });
    Ok(())
}
