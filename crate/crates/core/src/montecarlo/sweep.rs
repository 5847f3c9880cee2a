//! Parameter sweeps: spectral bounds next to Monte Carlo outcomes, one row per
//! grid point.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_epidemic, McOptions};
use crate::error::{Error, Result};
use crate::matrix::NormKind;
use crate::netmodel::{EpidemicParams, Graph};
use crate::rng;
use crate::spectral::{product_spectral_radius, threshold_jsr, EnumerationLimits, Verdict};
use crate::switching::SwitchingPolicy;

pub const SWEEP_CSV_HEADER: &str =
    "beta,delta,jsr_lower,jsr_upper,product_rho,dieout_prob,final_frac_mean,final_frac_std,reps,T,seed";

const TAG_REP: u64 = 0x5245_5053;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// `(beta, delta)` pairs, reported in this order.
    pub grid: Vec<(f64, f64)>,
    pub reps: usize,
    pub horizon: usize,
    pub seed: u64,
    pub init_fraction: f64,
    pub mc: McOptions,
    pub max_depth: usize,
    /// Norm for the upper bound; the set's default when `None`.
    pub norm: Option<NormKind>,
    pub limits: EnumerationLimits,
}

impl SweepConfig {
    pub fn new(grid: Vec<(f64, f64)>, seed: u64) -> Self {
        Self {
            grid,
            reps: 20,
            horizon: 500,
            seed,
            init_fraction: 0.2,
            mc: McOptions::default(),
            max_depth: 4,
            norm: None,
            limits: EnumerationLimits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    pub delta: f64,
    /// NaN when the policy has no finite graph set.
    pub jsr_lower: f64,
    pub jsr_upper: f64,
    pub product_rho: f64,
    pub dieout_prob: f64,
    pub final_frac_mean: f64,
    /// Sample standard deviation over reps (0 for a single rep).
    pub final_frac_std: f64,
    pub reps: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub seed: u64,
    /// Verdict of the JSR bracket; `None` alongside NaN bounds.
    #[serde(skip)]
    pub verdict: Option<Verdict>,
}

/// Seed of replicate `rep` under master seed `seed`; shared by every grid point.
pub fn rep_seed(seed: u64, rep: usize) -> u64 {
    rng::mix(seed, &[TAG_REP, rep as u64])
}

/// Runs every grid point. Replicate `r` uses the same random numbers at every
/// grid point, so neighbouring rows differ only through `beta` and `delta`.
pub fn sweep(policy: &SwitchingPolicy, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.grid.is_empty() {
        return Err(Error::Parameter("sweep grid is empty".into()));
    }
    if cfg.reps == 0 {
        return Err(Error::Parameter("reps must be at least 1".into()));
    }
    cfg.grid.par_iter().map(|&(beta, delta)| sweep_point(policy, cfg, beta, delta)).collect()
}

fn sweep_point(
    policy: &SwitchingPolicy,
    cfg: &SweepConfig,
    beta: f64,
    delta: f64,
) -> Result<SweepRow> {
    let params = EpidemicParams::new(beta, delta)?;

    let (jsr_lower, jsr_upper, product_rho, verdict) = match policy.graph_set() {
        Some(set) => {
            let v = threshold_jsr(set, &params, cfg.max_depth, cfg.norm, &cfg.limits)?;
            let order: Vec<Graph> = match policy.cycle() {
                Some(c) => c.into_iter().cloned().collect(),
                None => set.to_vec(),
            };
            let rho = product_spectral_radius(&order, &params)?;
            (v.lower.unwrap_or(f64::NAN), v.upper.unwrap_or(f64::NAN), rho, Some(v.verdict))
        }
        None => (f64::NAN, f64::NAN, f64::NAN, None),
    };

    let runs = (0..cfg.reps)
        .into_par_iter()
        .map(|r| {
            run_epidemic(policy, &params, cfg.init_fraction, cfg.horizon, rep_seed(cfg.seed, r), &cfg.mc)
        })
        .collect::<Result<Vec<_>>>()?;

    let reps = runs.len() as f64;
    let died = runs.iter().filter(|r| r.died_out()).count() as f64;
    let fracs: Vec<f64> = runs.iter().map(|r| r.final_fraction).collect();
    let mean = fracs.iter().sum::<f64>() / reps;
    let std = if runs.len() > 1 {
        (fracs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1.0)).sqrt()
    } else {
        0.0
    };

    Ok(SweepRow {
        beta,
        delta,
        jsr_lower,
        jsr_upper,
        product_rho,
        dieout_prob: died / reps,
        final_frac_mean: mean,
        final_frac_std: std,
        reps: cfg.reps,
        horizon: cfg.horizon,
        seed: cfg.seed,
        verdict,
    })
}

/// Header plus one LF-terminated line per row.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.beta,
            r.delta,
            r.jsr_lower,
            r.jsr_upper,
            r.product_rho,
            r.dieout_prob,
            r.final_frac_mean,
            r.final_frac_std,
            r.reps,
            r.horizon,
            r.seed
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::{gen_regular, star};
    use crate::spectral::threshold_static;

    fn small(grid: Vec<(f64, f64)>) -> SweepConfig {
        SweepConfig { reps: 8, horizon: 100, ..SweepConfig::new(grid, 11) }
    }

    #[test]
    fn zero_beta_dies_out() {
        let pol = SwitchingPolicy::iid_uniform(vec![star(5), Graph::empty(5, false)]).unwrap();
        let mut cfg = small(vec![(0.0, 0.3)]);
        cfg.horizon = 300;
        let rows = sweep(&pol, &cfg).unwrap();
        assert_eq!(rows[0].final_frac_mean, 0.0);
        assert_eq!(rows[0].dieout_prob, 1.0);
        assert!((rows[0].jsr_upper - 0.7).abs() < 1e-12);
    }

    #[test]
    fn rows_follow_grid_order_and_are_deterministic() {
        let pol = SwitchingPolicy::iid_uniform(vec![gen_regular(30, 4, 1).unwrap()]).unwrap();
        let grid = vec![(0.3, 0.2), (0.01, 0.2), (0.15, 0.5)];
        let a = sweep(&pol, &small(grid.clone())).unwrap();
        let b = sweep(&pol, &small(grid.clone())).unwrap();
        assert_eq!(a, b);
        let got: Vec<_> = a.iter().map(|r| (r.beta, r.delta)).collect();
        assert_eq!(got, grid);
    }

    #[test]
    fn singleton_verdict_matches_static() {
        let g = star(4);
        let pol = SwitchingPolicy::iid_uniform(vec![g.clone()]).unwrap();
        let grid = vec![(0.05, 0.2), (0.5, 0.2), (0.2, 0.6)];
        for row in sweep(&pol, &small(grid)).unwrap() {
            let pr = EpidemicParams::new(row.beta, row.delta).unwrap();
            assert_eq!(row.verdict, Some(threshold_static(&g, &pr).unwrap().verdict));
            assert!((row.product_rho - row.jsr_lower).abs() < 1e-10);
        }
    }

    #[test]
    fn gilbert_policy_has_no_bounds() {
        let pol = SwitchingPolicy::gilbert_regenerate(20, 0.1).unwrap();
        let rows = sweep(&pol, &small(vec![(0.2, 0.2)])).unwrap();
        assert!(rows[0].jsr_lower.is_nan() && rows[0].product_rho.is_nan());
        assert_eq!(rows[0].verdict, None);
    }

    #[test]
    fn csv_layout() {
        let pol = SwitchingPolicy::periodic(vec![star(3), Graph::empty(3, false)]).unwrap();
        let rows = sweep(&pol, &small(vec![(0.3, 0.2)])).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.split('\n').collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "");
        let fields: Vec<_> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 11);
        assert_eq!(&fields[..2], ["0.3", "0.2"]);
        assert_eq!(&fields[8..], ["8", "100", "11"]);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn empty_grid_rejected() {
        let pol = SwitchingPolicy::iid_uniform(vec![star(3)]).unwrap();
        assert!(sweep(&pol, &small(vec![])).is_err());
        assert!(sweep(&pol, &small(vec![(1.5, 0.2)])).is_err());
    }
}
