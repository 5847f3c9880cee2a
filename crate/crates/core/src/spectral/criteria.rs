//! Closed-form die-out criteria for static, periodic and regular networks,
//! the general JSR criterion, and the product-radius comparator.

use super::{
    build_system_set, jsr_bracket_with, Criterion, EnumerationLimits, ThresholdVerdict, Verdict,
    RADIUS_OPTS,
};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, NormKind};
use crate::meanfield::system_matrix;
use crate::netmodel::{spectral_radius_with, EpidemicParams, Graph};

/// Static graph: dies out iff `beta / delta < 1 / rho(A)`, i.e. `1 - delta + beta rho(A) < 1`.
///
/// `value` carries `1 - delta + beta rho(A)`. With `delta = 0`, `beta > 0` and
/// `rho(A) > 0` the ratio form is infinite and the verdict is `Spreads`.
pub fn threshold_static(graph: &Graph, params: &EpidemicParams) -> Result<ThresholdVerdict> {
    params.validate()?;
    let rho = spectral_radius_with(&graph.adjacency_matrix(), &RADIUS_OPTS)?;
    let value = 1.0 - params.delta + params.beta * rho;
    let mut v = ThresholdVerdict::from_value(Criterion::Static, value);
    if params.delta == 0.0 && params.beta > 0.0 && rho > 0.0 {
        v.verdict = Verdict::Spreads;
    }
    Ok(v)
}

/// `M_T ... M_2 M_1`, the first graph acting first.
fn ordered_product(seq: &[Graph], params: &EpidemicParams) -> Result<Matrix> {
    let first = seq.first().ok_or_else(|| Error::Parameter("sequence is empty".into()))?;
    let n = first.n();
    let mut prod = Matrix::identity(n);
    for g in seq {
        if g.n() != n {
            return Err(Error::Dimension { expected: n, actual: g.n() });
        }
        prod = system_matrix(g, params).mul(&prod)?;
    }
    Ok(prod)
}

/// Periodic network repeating `seq`: dies out iff `rho(prod_i M_i) < 1`.
pub fn threshold_periodic(seq: &[Graph], params: &EpidemicParams) -> Result<ThresholdVerdict> {
    params.validate()?;
    let value = spectral_radius_with(&ordered_product(seq, params)?, &RADIUS_OPTS)?;
    Ok(ThresholdVerdict::from_value(Criterion::Periodic, value))
}

/// Regular undirected graphs of degree `k_bar`: dies out iff `beta / delta < 1 / k_bar`.
pub fn threshold_regular(k_bar: usize, params: &EpidemicParams) -> Result<ThresholdVerdict> {
    params.validate()?;
    let value = 1.0 - params.delta + params.beta * k_bar as f64;
    Ok(ThresholdVerdict::from_value(Criterion::Regular, value))
}

/// Spectral radius of the ordered product of system matrices.
///
/// Only a comparator: it decides die-out for periodic sequences, but for
/// arbitrary switching it can sit below 1 while the JSR is above 1.
pub fn product_spectral_radius(seq: &[Graph], params: &EpidemicParams) -> Result<f64> {
    params.validate()?;
    spectral_radius_with(&ordered_product(seq, params)?, &RADIUS_OPTS)
}

/// General criterion for arbitrary switching within `graphs`. Uses the exact
/// symmetric/singleton shortcut when it applies, product enumeration otherwise.
pub fn threshold_jsr(
    graphs: &[Graph],
    params: &EpidemicParams,
    max_depth: usize,
    norm: Option<NormKind>,
    limits: &EnumerationLimits,
) -> Result<ThresholdVerdict> {
    let set = build_system_set(graphs, params)?;
    let norm = norm.unwrap_or_else(|| set.default_norm());
    let bracket = jsr_bracket_with(&set, max_depth, norm, limits)?;
    Ok(ThresholdVerdict::from_bracket(&bracket))
}
