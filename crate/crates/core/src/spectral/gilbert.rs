//! Dynamic Gilbert networks: the spread-probability bound and the expected
//! column sum of products of random system matrices, with a Monte Carlo check.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::EpidemicParams;
use crate::rng;

const TAG_COLUMN: u64 = 0x434f_4c53;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GilbertBound {
    /// `1 - delta + (n - 1) beta p`; above 1 it only measures epidemic strength.
    pub raw: f64,
    /// `min(1, raw)`, the bound on the probability that the epidemic spreads.
    pub clamped: f64,
}

pub fn gilbert_spread_bound(n: usize, p: f64, params: &EpidemicParams) -> Result<GilbertBound> {
    if n < 2 {
        return Err(Error::Parameter(format!("need n >= 2, got {n}")));
    }
    check_probability(p)?;
    params.validate()?;
    let raw = 1.0 - params.delta + (n - 1) as f64 * params.beta * p;
    Ok(GilbertBound { raw, clamped: raw.min(1.0) })
}

/// `[1 - delta + (n - 1) beta p]^k`: expected absolute column sum of a product
/// of `k` independent Gilbert system matrices.
pub fn expected_column_sum(n: usize, p: f64, params: &EpidemicParams, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Parameter("product length k must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    check_probability(p)?;
    params.validate()?;
    let per_step = 1.0 - params.delta + (n - 1) as f64 * params.beta * p;
    Ok(per_step.powi(k as i32))
}

/// How off-diagonal adjacency entries are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnSampling {
    /// Every off-diagonal entry independent (directed Gilbert graph).
    IidOffDiagonal,
    /// Undirected Gilbert graph: `A_ij = A_ji`, pairs independent.
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnSumEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: usize,
}

/// Empirical mean and standard error of the first column's absolute sum of
/// `M_k ... M_1`, each factor built from a fresh Gilbert draw.
pub fn mc_column_sum(
    n: usize,
    p: f64,
    params: &EpidemicParams,
    k: u32,
    trials: usize,
    seed: u64,
    sampling: ColumnSampling,
) -> Result<ColumnSumEstimate> {
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    if k == 0 || trials == 0 {
        return Err(Error::Parameter("need k >= 1 and trials >= 1".into()));
    }
    check_probability(p)?;
    params.validate()?;

    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| column_sum_sample(n, p, params, k, sampling, seed, trial as u64))
        .collect();

    // shifted by the first sample so identical samples give exactly zero variance
    let shift = samples[0];
    let (s1, s2) = samples
        .iter()
        .fold((0.0, 0.0), |(a, b), x| (a + (x - shift), b + (x - shift) * (x - shift)));
    let mean = shift + s1 / trials as f64;
    let var = if trials > 1 {
        ((s2 - s1 * s1 / trials as f64) / (trials - 1) as f64).max(0.0)
    } else {
        0.0
    };
    Ok(ColumnSumEstimate { mean, std_err: (var / trials as f64).sqrt(), trials })
}

#[allow(clippy::needless_range_loop)]
fn column_sum_sample(
    n: usize,
    p: f64,
    params: &EpidemicParams,
    k: u32,
    sampling: ColumnSampling,
    seed: u64,
    trial: u64,
) -> f64 {
    let mut r = rng::stream(seed, &[TAG_COLUMN, trial]);
    // v = M_j ... M_1 e_1, applied factor by factor
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    let mut next = vec![0.0; n];
    for _ in 0..k {
        for (o, x) in next.iter_mut().zip(&v) {
            *o = (1.0 - params.delta) * x;
        }
        match sampling {
            ColumnSampling::IidOffDiagonal => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j && r.gen::<f64>() < p {
                            next[i] += params.beta * v[j];
                        }
                    }
                }
            }
            ColumnSampling::Symmetric => {
                for i in 0..n {
                    for j in i + 1..n {
                        if r.gen::<f64>() < p {
                            next[i] += params.beta * v[j];
                            next[j] += params.beta * v[i];
                        }
                    }
                }
            }
        }
        std::mem::swap(&mut v, &mut next);
    }
    v.iter().map(|x| x.abs()).sum()
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("p = {p} is not a probability")))
    }
}
