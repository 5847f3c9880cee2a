//! Contact graphs, random generators, edge-list I/O and spectral radius.
//!
//! Orientation convention: adjacency entry `(i, j) = 1` means node `j` can
//! infect node `i`, so the linearised update is a plain `M * p` product. A
//! link written `u v` (in an edge list or passed to [`Graph::new`]) means `u`
//! infects `v`.

pub mod edgelist;
pub mod generators;
pub mod radius;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub use edgelist::{load_edge_list, write_edge_list};
pub use generators::{
    complete, gen_barabasi_albert, gen_gilbert, gen_regular, gen_watts_strogatz, ring_lattice,
    star,
};
pub use radius::{spectral_radius, spectral_radius_with, RadiusOptions};

/// Simple unweighted graph without self-loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    directed: bool,
    /// Sorted, deduplicated in-neighbours: `in_nbrs[i]` holds every `j` with `A[i][j] = 1`.
    in_nbrs: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph with no links.
    pub fn empty(n: usize, directed: bool) -> Self {
        Self { n, directed, in_nbrs: vec![Vec::new(); n] }
    }

    /// Builds a graph from `(u, v)` links, `u` infecting `v`. Undirected graphs
    /// store both orientations. Duplicates collapse.
    pub fn new<I>(n: usize, directed: bool, links: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::Parameter("graph needs at least one node".into()));
        }
        let mut in_nbrs = vec![Vec::new(); n];
        for (u, v) in links {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!("link ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::Parameter(format!("self-loop at node {u}")));
            }
            in_nbrs[v].push(u);
            if !directed {
                in_nbrs[u].push(v);
            }
        }
        for nb in &mut in_nbrs {
            nb.sort_unstable();
            nb.dedup();
        }
        Ok(Self { n, directed, in_nbrs })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Nodes that can infect `i`.
    #[inline]
    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_nbrs[i]
    }

    /// In-degree; the plain degree for undirected graphs.
    pub fn degree(&self, i: usize) -> usize {
        self.in_nbrs[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.in_nbrs.iter().map(Vec::len).collect()
    }

    /// Adjacency entry `(i, j)`: does `j` infect `i`?
    pub fn has_entry(&self, i: usize, j: usize) -> bool {
        self.in_nbrs[i].binary_search(&j).is_ok()
    }

    /// Arcs for directed graphs, unordered pairs for undirected ones.
    pub fn edge_count(&self) -> usize {
        let arcs: usize = self.in_nbrs.iter().map(Vec::len).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    /// Links as `(u, v)` with `u` infecting `v`; undirected links are listed once with `u < v`.
    pub fn links(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for v in 0..self.n {
            for &u in &self.in_nbrs[v] {
                if self.directed || u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn adjacency_matrix(&self) -> Matrix {
        let mut a = Matrix::zeros(self.n);
        for i in 0..self.n {
            for &j in &self.in_nbrs[i] {
                a.set(i, j, 1.0);
            }
        }
        a
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Dimension { expected: self.n, actual: perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parameter("not a permutation".into()));
            }
        }
        let links = self.links().into_iter().map(|(u, v)| (perm[u], perm[v]));
        Self::new(self.n, self.directed, links)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius(&self.adjacency_matrix())
    }
}

/// Per-contact infection probability `beta` and per-step recovery probability `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpidemicParams {
    pub beta: f64,
    pub delta: f64,
}

impl EpidemicParams {
    pub fn new(beta: f64, delta: f64) -> Result<Self> {
        let p = Self { beta, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("beta", self.beta), ("delta", self.delta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Parameter(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(())
    }
}
