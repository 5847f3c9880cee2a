//! Dominant eigenvalue modulus of nonnegative matrices.
//!
//! The matrix is split into strongly connected components of its nonzero
//! pattern; the spectral radius is the largest radius over the irreducible
//! diagonal blocks. Each nontrivial block is scaled by its largest row sum,
//! shifted by the identity (which makes it primitive and removes the
//! oscillation of bipartite/periodic structure) and power-iterated from the
//! all-ones vector. Termination uses the Collatz-Wielandt bracket
//! `min_i (Bx)_i / x_i <= rho(B) <= max_i (Bx)_i / x_i`, so the reported value
//! is certified to the requested relative tolerance.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusOptions {
    /// Relative tolerance on the result.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 100_000 }
    }
}

pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    spectral_radius_with(m, &RadiusOptions::default())
}

pub fn spectral_radius_with(m: &Matrix, opts: &RadiusOptions) -> Result<f64> {
    if !m.is_nonnegative() {
        return Err(Error::Parameter("spectral radius requires a nonnegative matrix".into()));
    }
    let n = m.dim();
    if n == 0 {
        return Ok(0.0);
    }

    let mut pattern = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| pattern.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && m.get(i, j) > 0.0 {
                pattern.add_edge(nodes[j], nodes[i], ());
            }
        }
    }

    let mut best = 0.0f64;
    for comp in tarjan_scc(&pattern) {
        let idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        let rho = if idx.len() == 1 {
            m.get(idx[0], idx[0])
        } else {
            irreducible_radius(m, &idx, opts)?
        };
        best = best.max(rho);
    }
    Ok(best)
}

fn irreducible_radius(m: &Matrix, idx: &[usize], opts: &RadiusOptions) -> Result<f64> {
    let k = idx.len();
    let mut block = vec![0.0; k * k];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            block[a * k + b] = m.get(i, j);
        }
    }
    let scale = (0..k)
        .map(|a| block[a * k..(a + 1) * k].iter().sum::<f64>())
        .fold(0.0, f64::max);
    for v in &mut block {
        *v /= scale;
    }

    let mut x = vec![1.0; k];
    let mut y = vec![0.0; k];
    let mut estimate = f64::NAN;
    for _ in 0..opts.max_iter {
        // y = (B + I) x
        for a in 0..k {
            let row = &block[a * k..(a + 1) * k];
            y[a] = x[a] + row.iter().zip(&x).map(|(b, xv)| b * xv).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (yv, xv) in y.iter().zip(&x) {
            let r = yv / xv;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let rho_lo = (lo - 1.0).max(0.0);
        let rho_hi = hi - 1.0;
        estimate = 0.5 * (rho_lo + rho_hi) * scale;
        if rho_hi - rho_lo <= 2.0 * opts.tol * rho_lo {
            return Ok(estimate);
        }
        let top = y.iter().cloned().fold(0.0, f64::max);
        for (xv, yv) in x.iter_mut().zip(&y) {
            *xv = yv / top;
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, estimate })
}
