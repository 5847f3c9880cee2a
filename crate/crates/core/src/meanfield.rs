//! Deterministic evolution of per-node infection probabilities.
//!
//! Under the independence approximation node `i` is infected at `t + 1` if it
//! was infected and did not recover, or was healthy and caught the infection
//! from at least one infected neighbour:
//!
//! ```text
//! p_i' = p_i (1 - delta) + (1 - p_i) (1 - prod_{j in N_i} (1 - beta p_j))
//! ```
//!
//! Linearising at the origin gives `p' = M p` with `M = (1 - delta) I + beta A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::netmodel::{EpidemicParams, Graph};
use crate::switching::{SwitchState, SwitchingPolicy};

const RANGE_SLACK: f64 = 1e-12;

/// Infection probabilities at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityState {
    pub p: Vec<f64>,
    pub t: u64,
}

impl ProbabilityState {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some((node, &value)) = p.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfRange { node, value });
        }
        Ok(Self { p, t: 0 })
    }

    pub fn zeros(n: usize) -> Self {
        Self { p: vec![0.0; n], t: 0 }
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.p)
    }
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// States from `t = 0` to `t = T`, each one step of the nonlinear map after the previous.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<ProbabilityState>,
}

impl Trajectory {
    pub fn last(&self) -> &ProbabilityState {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn horizon(&self) -> usize {
        self.states.len() - 1
    }
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::Dimension { expected, actual })
    }
}

/// One application of the nonlinear map. Never clamps: a result outside
/// `[0, 1]` beyond rounding slack is reported as [`Error::OutOfRange`].
pub fn step_nonlinear(
    state: &ProbabilityState,
    graph: &Graph,
    params: &EpidemicParams,
) -> Result<ProbabilityState> {
    check_dim(graph.n(), state.n())?;
    let p = &state.p;
    let mut next = Vec::with_capacity(p.len());
    for (i, &pi) in p.iter().enumerate() {
        let escape: f64 = graph.in_neighbors(i).iter().map(|&j| 1.0 - p[j] * params.beta).product();
        // same as 1 - pi*delta - (1 - pi)*escape, written without cancellation
        let v = pi * (1.0 - params.delta) + (1.0 - pi) * (1.0 - escape);
        if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) {
            return Err(Error::OutOfRange { node: i, value: v });
        }
        next.push(v);
    }
    Ok(ProbabilityState { p: next, t: state.t + 1 })
}

/// Iterates the nonlinear map for `horizon` steps using the graphs chosen by `policy`.
pub fn simulate_trajectory(
    policy: &SwitchingPolicy,
    p0: &ProbabilityState,
    params: &EpidemicParams,
    horizon: usize,
    seed: u64,
) -> Result<Trajectory> {
    check_dim(policy.n(), p0.n())?;
    let mut states = Vec::with_capacity(horizon + 1);
    let mut current = ProbabilityState { p: p0.p.clone(), t: 0 };
    let mut switch = SwitchState::new(policy, seed);
    for _ in 0..horizon {
        let (g, next_switch) = switch.matrix_at();
        let next = step_nonlinear(&current, &g, params)?;
        states.push(std::mem::replace(&mut current, next));
        switch = next_switch;
    }
    states.push(current);
    Ok(Trajectory { states })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumOptions {
    /// Sup-norm bound on `|F(p) - p|`.
    pub tol: f64,
    pub max_iter: usize,
    /// `p <- (1 - damping) p + damping F(p)`; 1 is the plain map.
    pub damping: f64,
}

impl Default for EquilibriumOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 1_000_000, damping: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub state: ProbabilityState,
    pub iterations: usize,
    pub residual: f64,
}

/// Fixed point of the nonlinear map on a static graph, by iterating the map from `p0`.
pub fn solve_equilibrium(
    graph: &Graph,
    params: &EpidemicParams,
    p0: &ProbabilityState,
    opts: &EquilibriumOptions,
) -> Result<Equilibrium> {
    check_dim(graph.n(), p0.n())?;
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(Error::Parameter(format!("damping {} outside (0, 1]", opts.damping)));
    }
    let mut p = ProbabilityState { p: p0.p.clone(), t: 0 };
    let mut residual = f64::INFINITY;
    for iterations in 0..=opts.max_iter {
        let f = step_nonlinear(&p, graph, params)?;
        residual = p.p.iter().zip(&f.p).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if residual <= opts.tol {
            return Ok(Equilibrium { state: ProbabilityState { p: p.p, t: 0 }, iterations, residual });
        }
        if iterations == opts.max_iter {
            break;
        }
        if opts.damping == 1.0 {
            p = f;
        } else {
            for (x, fx) in p.p.iter_mut().zip(&f.p) {
                *x += opts.damping * (fx - *x);
            }
        }
    }
    Err(Error::EquilibriumNotConverged { iterations: opts.max_iter, residual, last: p.p })
}

/// Whether `p` is a fixed point of the map for every graph in `set`.
pub fn check_equilibrium(
    p: &ProbabilityState,
    set: &[Graph],
    params: &EpidemicParams,
    tol: f64,
) -> bool {
    set.iter().all(|g| match step_nonlinear(p, g, params) {
        Ok(next) => p.p.iter().zip(&next.p).all(|(a, b)| (a - b).abs() <= tol),
        Err(_) => false,
    })
}

/// `(1 - delta) I + beta A`.
pub fn system_matrix(graph: &Graph, params: &EpidemicParams) -> Matrix {
    let mut m = Matrix::scaled_identity(graph.n(), 1.0 - params.delta);
    for i in 0..graph.n() {
        for &j in graph.in_neighbors(i) {
            m.set(i, j, params.beta);
        }
    }
    m
}

/// `M p`. The linear model is not confined to `[0, 1]`.
pub fn step_linear(p: &[f64], m: &Matrix) -> Result<Vec<f64>> {
    m.matvec(p)
}
