//! Dynamic networks: a set of adjacency matrices plus a rule choosing the one
//! in force at each time index.
//!
//! Randomness is random-access: the draw for step `t` comes from a stream
//! keyed by `(seed, t)`, so any step can be reproduced without replaying the
//! steps before it.

use std::borrow::Cow;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::netmodel::{gen_gilbert, Graph};
use crate::rng;

const TAG_SWITCH: u64 = 0x5357_4954;
const WEIGHT_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
enum Policy {
    IidUniform { set: Vec<Graph> },
    IidWeighted { set: Vec<Graph>, weights: Vec<f64> },
    Periodic { sequence: Vec<Graph> },
    FixedTrace { set: Vec<Graph>, indices: Vec<usize> },
    GilbertRegenerate { n: usize, p: f64 },
}

/// How the adjacency matrix at each step is chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingPolicy(Policy);

impl SwitchingPolicy {
    /// Each step draws a member of `set` uniformly, independently of the past.
    pub fn iid_uniform(set: Vec<Graph>) -> Result<Self> {
        check_set(&set)?;
        Ok(Self(Policy::IidUniform { set }))
    }

    /// Independent draws with the given probabilities. Weights must already sum
    /// to one (within 1e-9); they are then renormalised exactly.
    pub fn iid_weighted(set: Vec<Graph>, weights: Vec<f64>) -> Result<Self> {
        check_set(&set)?;
        if weights.len() != set.len() {
            return Err(Error::Dimension { expected: set.len(), actual: weights.len() });
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Parameter("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Parameter(format!("weights sum to {total}, not 1")));
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(Self(Policy::IidWeighted { set, weights }))
    }

    /// `sequence[t mod T]`.
    pub fn periodic(sequence: Vec<Graph>) -> Result<Self> {
        check_set(&sequence)?;
        Ok(Self(Policy::Periodic { sequence }))
    }

    /// Explicit index trace over `set`, repeated when `t` runs past its end.
    pub fn fixed_trace(set: Vec<Graph>, indices: Vec<usize>) -> Result<Self> {
        check_set(&set)?;
        if indices.is_empty() {
            return Err(Error::Parameter("trace needs at least one index".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= set.len()) {
            return Err(Error::Parameter(format!("trace index {bad} out of range 0..{}", set.len())));
        }
        Ok(Self(Policy::FixedTrace { set, indices }))
    }

    /// A fresh undirected Gilbert graph `G(n, p)` at every step.
    pub fn gilbert_regenerate(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("p = {p} is not a probability")));
        }
        Ok(Self(Policy::GilbertRegenerate { n, p }))
    }

    pub fn n(&self) -> usize {
        match &self.0 {
            Policy::IidUniform { set }
            | Policy::IidWeighted { set, .. }
            | Policy::FixedTrace { set, .. } => set[0].n(),
            Policy::Periodic { sequence } => sequence[0].n(),
            Policy::GilbertRegenerate { n, .. } => *n,
        }
    }

    /// The finite set of graphs the policy can emit, in declaration order.
    /// `None` for Gilbert regeneration, whose support is every graph on `n` nodes.
    pub fn graph_set(&self) -> Option<&[Graph]> {
        match &self.0 {
            Policy::IidUniform { set }
            | Policy::IidWeighted { set, .. }
            | Policy::FixedTrace { set, .. } => Some(set),
            Policy::Periodic { sequence } => Some(sequence),
            Policy::GilbertRegenerate { .. } => None,
        }
    }

    /// The deterministic cycle of graphs for periodic and trace policies.
    pub fn cycle(&self) -> Option<Vec<&Graph>> {
        match &self.0 {
            Policy::Periodic { sequence } => Some(sequence.iter().collect()),
            Policy::FixedTrace { set, indices } => Some(indices.iter().map(|&i| &set[i]).collect()),
            _ => None,
        }
    }

    pub fn gilbert_params(&self) -> Option<(usize, f64)> {
        match self.0 {
            Policy::GilbertRegenerate { n, p } => Some((n, p)),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.0 {
            Policy::IidUniform { .. } => "iid_uniform",
            Policy::IidWeighted { .. } => "iid_weighted",
            Policy::Periodic { .. } => "periodic",
            Policy::FixedTrace { .. } => "fixed_trace",
            Policy::GilbertRegenerate { .. } => "gilbert_regenerate",
        }
    }

    /// The graph in force at step `t` for the run keyed by `seed`.
    pub fn graph_at(&self, t: u64, seed: u64) -> Cow<'_, Graph> {
        match &self.0 {
            Policy::IidUniform { set } => {
                if set.len() == 1 {
                    return Cow::Borrowed(&set[0]);
                }
                let i = rng::stream(seed, &[TAG_SWITCH, t]).gen_range(0..set.len());
                Cow::Borrowed(&set[i])
            }
            Policy::IidWeighted { set, weights } => {
                let dist = WeightedIndex::new(weights).expect("validated weights");
                let i = dist.sample(&mut rng::stream(seed, &[TAG_SWITCH, t]));
                Cow::Borrowed(&set[i])
            }
            Policy::Periodic { sequence } => {
                Cow::Borrowed(&sequence[(t % sequence.len() as u64) as usize])
            }
            Policy::FixedTrace { set, indices } => {
                Cow::Borrowed(&set[indices[(t % indices.len() as u64) as usize]])
            }
            Policy::GilbertRegenerate { n, p } => Cow::Owned(
                gen_gilbert(*n, *p, rng::mix(seed, &[TAG_SWITCH, t])).expect("validated p"),
            ),
        }
    }
}

fn check_set(set: &[Graph]) -> Result<()> {
    let first = set.first().ok_or_else(|| Error::Parameter("graph set is empty".into()))?;
    if let Some(g) = set.iter().find(|g| g.n() != first.n()) {
        return Err(Error::Dimension { expected: first.n(), actual: g.n() });
    }
    Ok(())
}

/// Position of one run within a policy.
#[derive(Debug, Clone, Copy)]
pub struct SwitchState<'p> {
    policy: &'p SwitchingPolicy,
    t: u64,
    seed: u64,
}

impl<'p> SwitchState<'p> {
    pub fn new(policy: &'p SwitchingPolicy, seed: u64) -> Self {
        Self { policy, t: 0, seed }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The current matrix and the state advanced by one step.
    pub fn matrix_at(self) -> (Cow<'p, Graph>, SwitchState<'p>) {
        let g = self.policy.graph_at(self.t, self.seed);
        (g, Self { t: self.t + 1, ..self })
    }
}

/// The first `horizon` graphs a fresh [`SwitchState`] would emit.
pub fn sample_sequence(policy: &SwitchingPolicy, horizon: usize, seed: u64) -> Result<Vec<Graph>> {
    if horizon == 0 {
        return Err(Error::Parameter("horizon must be at least 1".into()));
    }
    Ok((0..horizon as u64).map(|t| policy.graph_at(t, seed).into_owned()).collect())
}
