//! Agent-based stochastic SIS on switching networks.
//!
//! Updates are synchronous. An infected node recovers with probability
//! `delta`; a susceptible node with `m` infected in-neighbours becomes infected
//! with probability `1 - (1 - beta)^m`. By default a node that recovers cannot
//! be reinfected in the same step, mirroring the two disjoint terms of the
//! mean-field map.
//!
//! Each node-step uses one uniform addressed by `(seed, t, node)`, compared
//! against the node's transition probability. Runs that share a seed therefore
//! share their random numbers, which couples runs at different `beta`.

mod sweep;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::{EpidemicParams, Graph};
use crate::rng;
use crate::switching::{SwitchState, SwitchingPolicy};

pub use sweep::{rep_seed, sweep, write_sweep_csv, SweepConfig, SweepRow, SWEEP_CSV_HEADER};

const TAG_COIN: u64 = 0x434f_494e;
const TAG_INIT: u64 = 0x494e_4954;
const TAG_POLICY: u64 = 0x504f_4c49;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct McOptions {
    /// Let a node that recovers be reinfected within the same step.
    #[serde(default)]
    pub allow_reinfection: bool,
}

/// Counter-addressed uniforms for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coins {
    seed: u64,
}

impl Coins {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn uniform(&self, t: u64, node: usize) -> f64 {
        rng::unit(rng::mix(self.seed, &[TAG_COIN, t, node as u64]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SisState {
    pub infected: Vec<bool>,
    pub t: u64,
}

impl SisState {
    pub fn new(infected: Vec<bool>) -> Self {
        Self { infected, t: 0 }
    }

    pub fn n(&self) -> usize {
        self.infected.len()
    }

    pub fn infected_count(&self) -> usize {
        self.infected.iter().filter(|&&x| x).count()
    }

    pub fn fraction(&self) -> f64 {
        self.infected_count() as f64 / self.n() as f64
    }
}

/// One synchronous step on `graph`.
pub fn mc_step(
    state: &SisState,
    graph: &Graph,
    params: &EpidemicParams,
    coins: &Coins,
    opts: &McOptions,
) -> Result<SisState> {
    if graph.n() != state.n() {
        return Err(Error::Dimension { expected: graph.n(), actual: state.n() });
    }
    let escape = 1.0 - params.beta;
    let infected = (0..state.n())
        .map(|i| {
            let u = coins.uniform(state.t, i);
            let pressure = || {
                let m = graph.in_neighbors(i).iter().filter(|&&j| state.infected[j]).count();
                1.0 - escape.powi(m as i32)
            };
            if state.infected[i] {
                let stay = 1.0 - params.delta;
                if opts.allow_reinfection {
                    u < stay + params.delta * pressure()
                } else {
                    u < stay
                }
            } else {
                u < pressure()
            }
        })
        .collect();
    Ok(SisState { infected, t: state.t + 1 })
}

/// Outcome of one stochastic run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpidemicRun {
    /// Fraction infected at `t = 0..=T`.
    pub series: Vec<f64>,
    /// First `t` with nobody infected.
    pub died_out_at: Option<u64>,
    /// Mean of the last `max(10, T / 10)` entries of `series`.
    pub final_fraction: f64,
}

impl EpidemicRun {
    pub fn died_out(&self) -> bool {
        self.died_out_at.is_some()
    }
}

pub fn final_window(horizon: usize) -> usize {
    (horizon / 10).max(10)
}

/// Initial set: `round(init_fraction * n)` nodes sampled uniformly.
pub fn run_epidemic(
    policy: &SwitchingPolicy,
    params: &EpidemicParams,
    init_fraction: f64,
    horizon: usize,
    seed: u64,
    opts: &McOptions,
) -> Result<EpidemicRun> {
    params.validate()?;
    if !(0.0..=1.0).contains(&init_fraction) {
        return Err(Error::Parameter(format!("init_fraction = {init_fraction} is not in [0, 1]")));
    }
    if horizon == 0 {
        return Err(Error::Parameter("horizon must be at least 1".into()));
    }
    let n = policy.n();
    let k = (init_fraction * n as f64).round() as usize;
    let mut infected = vec![false; n];
    for i in sample(&mut rng::stream(seed, &[TAG_INIT]), n, k) {
        infected[i] = true;
    }
    let init = SisState::new(infected);
    run_from(policy, params, init, horizon, seed, opts)
}

/// Runs from an explicit initial state; `run_epidemic` samples that state first.
pub fn run_from(
    policy: &SwitchingPolicy,
    params: &EpidemicParams,
    init: SisState,
    horizon: usize,
    seed: u64,
    opts: &McOptions,
) -> Result<EpidemicRun> {
    if init.n() != policy.n() {
        return Err(Error::Dimension { expected: policy.n(), actual: init.n() });
    }
    let coins = Coins::new(rng::mix(seed, &[TAG_COIN]));
    let mut switch = SwitchState::new(policy, rng::mix(seed, &[TAG_POLICY]));
    let mut state = SisState { t: 0, ..init };
    let mut series = Vec::with_capacity(horizon + 1);
    series.push(state.fraction());
    let mut died_out_at = (state.infected_count() == 0).then_some(0);

    while died_out_at.is_none() && series.len() <= horizon {
        let (g, next_switch) = switch.matrix_at();
        state = mc_step(&state, &g, params, &coins, opts)?;
        switch = next_switch;
        series.push(state.fraction());
        if state.infected_count() == 0 {
            died_out_at = Some(state.t);
        }
    }
    series.resize(horizon + 1, 0.0);

    let w = final_window(horizon).min(series.len());
    let final_fraction = series[series.len() - w..].iter().sum::<f64>() / w as f64;
    Ok(EpidemicRun { series, died_out_at, final_fraction })
}
