//! Exhaustive product enumeration for `rho_hat_k` and `rho_bar_k`.
//!
//! Products are built depth first, left-multiplying one member per level. A
//! branch is abandoned once `bound(prefix) * max_i ||M_i||^remaining` cannot
//! beat the best leaf seen so far; submultiplicativity makes that bound valid
//! for every completion, so the maximiser is never cut. The first level is
//! explored in parallel and the shared best value only ever increases.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{BracketMethod, JsrBracket, MatrixSet, RADIUS_OPTS};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, NormKind};
use crate::netmodel::spectral_radius_with;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationLimits {
    /// Largest `|M|^k` enumerated at one depth.
    pub max_products: u128,
    pub time_budget: Option<Duration>,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self { max_products: 1_000_000, time_budget: None }
    }
}

/// Monotone max over nonnegative floats; their bit patterns order like the values.
struct SharedMax(AtomicU64);

impl SharedMax {
    fn new() -> Self {
        Self(AtomicU64::new(0f64.to_bits()))
    }

    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    fn offer(&self, v: f64) {
        debug_assert!(v >= 0.0);
        self.0.fetch_max(v.to_bits(), Ordering::Relaxed);
    }
}

struct Search<'a, L, B> {
    set: &'a MatrixSet,
    depth: usize,
    leaf: L,
    bound: B,
    /// `growth[r]` bounds how much `r` more factors can enlarge the pruning quantity.
    growth: Vec<f64>,
    best: SharedMax,
    deadline: Option<Instant>,
}

impl<L, B> Search<'_, L, B>
where
    L: Fn(&Matrix) -> Result<f64> + Sync,
    B: Fn(&Matrix) -> f64 + Sync,
{
    fn run(&self) -> Result<f64> {
        self.set
            .members()
            .par_iter()
            .map(|m| self.descend(m.clone(), 1))
            .collect::<Result<Vec<()>>>()?;
        Ok(self.best.get())
    }

    fn descend(&self, prefix: Matrix, level: usize) -> Result<()> {
        if level == self.depth {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::TimeBudget { depth: self.depth });
                }
            }
            self.best.offer((self.leaf)(&prefix)?);
            return Ok(());
        }
        if (self.bound)(&prefix) * self.growth[self.depth - level] <= self.best.get() {
            return Ok(());
        }
        for m in self.set.members() {
            self.descend(m.mul(&prefix)?, level + 1)?;
        }
        Ok(())
    }
}

fn check_budget(set: &MatrixSet, k: usize, limits: &EnumerationLimits) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter("product length k must be at least 1".into()));
    }
    let products = (set.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if products > limits.max_products {
        return Err(Error::Budget { products, cap: limits.max_products });
    }
    Ok(())
}

fn growth_table(max_norm: f64, k: usize) -> Vec<f64> {
    (0..k).map(|r| max_norm.powi(r as i32)).collect()
}

fn search<L, B>(set: &MatrixSet, k: usize, limits: &EnumerationLimits, leaf: L, bound: B, max_norm: f64) -> Result<f64>
where
    L: Fn(&Matrix) -> Result<f64> + Sync,
    B: Fn(&Matrix) -> f64 + Sync,
{
    check_budget(set, k, limits)?;
    Search {
        set,
        depth: k,
        leaf,
        bound,
        growth: growth_table(max_norm, k),
        best: SharedMax::new(),
        deadline: limits.time_budget.map(|d| Instant::now() + d),
    }
    .run()
}

/// Largest induced norm over all length-`k` products.
pub fn rho_hat_k(set: &MatrixSet, k: usize, norm: NormKind) -> Result<f64> {
    rho_hat_k_with(set, k, norm, &EnumerationLimits::default())
}

pub fn rho_hat_k_with(set: &MatrixSet, k: usize, norm: NormKind, limits: &EnumerationLimits) -> Result<f64> {
    let leaf = move |p: &Matrix| p.norm(norm, &RADIUS_OPTS);
    match norm {
        NormKind::Induced1 => {
            let max = set.members().iter().map(Matrix::norm_1).fold(0.0, f64::max);
            search(set, k, limits, leaf, Matrix::norm_1, max)
        }
        NormKind::InducedInf => {
            let max = set.members().iter().map(Matrix::norm_inf).fold(0.0, f64::max);
            search(set, k, limits, leaf, Matrix::norm_inf, max)
        }
        NormKind::Induced2 => {
            let mut max = 0.0f64;
            for m in set.members() {
                max = max.max(m.norm_2(&RADIUS_OPTS)?);
            }
            // ||P||_2 <= sqrt(||P||_1 ||P||_inf) avoids an eigen-solve per node
            search(set, k, limits, leaf, |p: &Matrix| (p.norm_1() * p.norm_inf()).sqrt(), max)
        }
    }
}

/// Largest spectral radius over all length-`k` products.
pub fn rho_bar_k(set: &MatrixSet, k: usize) -> Result<f64> {
    rho_bar_k_with(set, k, &EnumerationLimits::default())
}

pub fn rho_bar_k_with(set: &MatrixSet, k: usize, limits: &EnumerationLimits) -> Result<f64> {
    let leaf = |p: &Matrix| spectral_radius_with(p, &RADIUS_OPTS);
    let (max1, max_inf) = set
        .members()
        .iter()
        .fold((0.0f64, 0.0f64), |(a, b), m| (a.max(m.norm_1()), b.max(m.norm_inf())));
    // rho <= any induced norm; prune on whichever of the 1/inf norms is tighter
    if max1 <= max_inf {
        search(set, k, limits, leaf, Matrix::norm_1, max1)
    } else {
        search(set, k, limits, leaf, Matrix::norm_inf, max_inf)
    }
}

/// Exact JSR of a set of symmetric matrices: the largest member radius.
pub fn jsr_symmetric(set: &MatrixSet) -> Result<f64> {
    if !set.is_symmetric() {
        return Err(Error::Contract("jsr_symmetric called on a set with non-symmetric members".into()));
    }
    max_member_radius(set)
}

fn max_member_radius(set: &MatrixSet) -> Result<f64> {
    set.members()
        .iter()
        .map(|m| spectral_radius_with(m, &RADIUS_OPTS))
        .try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

pub fn jsr_bracket(set: &MatrixSet, max_depth: usize, norm: NormKind) -> Result<JsrBracket> {
    jsr_bracket_with(set, max_depth, norm, &EnumerationLimits::default())
}

/// `lower = max_{k <= depth} rho_bar_k^(1/k)`, `upper = min_{k <= depth} rho_hat_k^(1/k)`.
///
/// Symmetric sets and singletons have an exact JSR and skip enumeration.
pub fn jsr_bracket_with(
    set: &MatrixSet,
    max_depth: usize,
    norm: NormKind,
    limits: &EnumerationLimits,
) -> Result<JsrBracket> {
    if max_depth == 0 {
        return Err(Error::Parameter("max_depth must be at least 1".into()));
    }
    let exact = if set.is_symmetric() {
        Some(BracketMethod::Symmetric)
    } else if set.len() == 1 {
        Some(BracketMethod::Singleton)
    } else {
        None
    };
    if let Some(method) = exact {
        let v = max_member_radius(set)?;
        return Ok(JsrBracket { lower: v, upper: v, depth: 1, norm, method });
    }

    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for k in 1..=max_depth {
        let inv = 1.0 / k as f64;
        lower = lower.max(rho_bar_k_with(set, k, limits)?.powf(inv));
        upper = upper.min(rho_hat_k_with(set, k, norm, limits)?.powf(inv));
    }
    Ok(JsrBracket { lower, upper, depth: max_depth, norm, method: BracketMethod::Enumerated })
}
