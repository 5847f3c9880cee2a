//! Deterministic and random graph generators. All random generators are
//! undirected and reproducible from their seed.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng;

const REGULAR_MAX_RESTARTS: usize = 10_000;

// stream tags, one per generator family
const TAG_REGULAR: u64 = 0x5245_4755;
const TAG_WS: u64 = 0x5753;
const TAG_BA: u64 = 0x4241;
const TAG_GILBERT: u64 = 0x4749_4c42;

/// Star with hub at node 0.
pub fn star(n: usize) -> Graph {
    Graph::new(n, false, (1..n).map(|v| (0, v))).expect("valid star")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, false, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid K_n")
}

/// Ring where every node is joined to its `k` nearest neighbours (`k / 2` per side).
pub fn ring_lattice(n: usize, k: usize) -> Result<Graph> {
    check_even_degree(n, k)?;
    let half = k / 2;
    Graph::new(n, false, (0..n).flat_map(|u| (1..=half).map(move |j| (u, (u + j) % n))))
}

fn check_even_degree(n: usize, k: usize) -> Result<()> {
    if !k.is_multiple_of(2) {
        return Err(Error::Parameter(format!("lattice degree k = {k} must be even")));
    }
    if k >= n {
        return Err(Error::Parameter(format!("degree k = {k} must be below n = {n}")));
    }
    Ok(())
}

/// Uniform-ish random `k`-regular simple graph.
///
/// Stubs are shuffled and paired; pairs that would form a loop or a repeated
/// edge are returned to the pool and re-paired. When no admissible pair is left
/// the attempt restarts from scratch.
pub fn gen_regular(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if n == 0 || k >= n || !(n * k).is_multiple_of(2) {
        return Err(Error::Parameter(format!("no simple {k}-regular graph on {n} nodes")));
    }
    if k == 0 {
        return Ok(Graph::empty(n, false));
    }
    for attempt in 0..REGULAR_MAX_RESTARTS {
        let mut r = rng::stream(seed, &[TAG_REGULAR, attempt as u64]);
        if let Some(edges) = try_pairing(n, k, &mut r) {
            return Graph::new(n, false, edges);
        }
    }
    Err(Error::Parameter(format!(
        "could not build a simple {k}-regular graph on {n} nodes in {REGULAR_MAX_RESTARTS} attempts"
    )))
}

fn try_pairing<R: Rng>(n: usize, k: usize, r: &mut R) -> Option<Vec<(usize, usize)>> {
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(n * k / 2);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(r);
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && edges.insert((a, b)) {
                continue;
            }
            *leftover.entry(a).or_default() += 1;
            *leftover.entry(b).or_default() += 1;
        }
        if !leftover.is_empty() && !can_still_pair(&edges, &leftover) {
            return None;
        }
        stubs = leftover.iter().flat_map(|(&v, &c)| std::iter::repeat_n(v, c)).collect();
    }
    let mut out: Vec<_> = edges.into_iter().collect();
    out.sort_unstable();
    Some(out)
}

fn can_still_pair(edges: &HashSet<(usize, usize)>, leftover: &BTreeMap<usize, usize>) -> bool {
    let nodes: Vec<usize> = leftover.keys().copied().collect();
    nodes
        .iter()
        .enumerate()
        .any(|(i, &a)| nodes[i + 1..].iter().any(|&b| !edges.contains(&(a, b))))
}

/// Watts-Strogatz small world: ring lattice with each edge's far endpoint
/// rewired with probability `p_rewire` to a uniformly chosen node, avoiding
/// self-loops and duplicate edges. The edge count is preserved.
pub fn gen_watts_strogatz(n: usize, k: usize, p_rewire: f64, seed: u64) -> Result<Graph> {
    check_even_degree(n, k)?;
    check_probability("p_rewire", p_rewire)?;
    let mut r = rng::stream(seed, &[TAG_WS]);
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if r.gen::<f64>() >= p_rewire || !adj[u].contains(&v) {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = r.gen_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let links = adj
        .iter()
        .enumerate()
        .flat_map(|(u, s)| s.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect::<Vec<_>>();
    Graph::new(n, false, links)
}

/// Barabasi-Albert preferential attachment grown from an `m`-node clique.
pub fn gen_barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::Parameter(format!("need 1 <= m < n, got m = {m}, n = {n}")));
    }
    let mut r = rng::stream(seed, &[TAG_BA]);
    let mut links: Vec<(usize, usize)> = Vec::with_capacity(m * (m - 1) / 2 + (n - m) * m);
    // every edge endpoint once: sampling from it is sampling proportional to degree
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * links.capacity());
    for u in 0..m {
        for v in u + 1..m {
            links.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for new in m..n {
        let targets: Vec<usize> = if new == m {
            (0..m).collect()
        } else {
            let mut chosen = Vec::with_capacity(m);
            while chosen.len() < m {
                let t = if endpoints.is_empty() {
                    r.gen_range(0..new)
                } else {
                    endpoints[r.gen_range(0..endpoints.len())]
                };
                if !chosen.contains(&t) {
                    chosen.push(t);
                }
            }
            chosen
        };
        for t in targets {
            links.push((t, new));
            endpoints.extend([t, new]);
        }
    }
    Graph::new(n, false, links)
}

/// Gilbert `G(n, p)`: every unordered pair is linked independently with probability `p`.
pub fn gen_gilbert(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability("p", p)?;
    let mut r = rng::stream(seed, &[TAG_GILBERT]);
    let mut links = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen::<f64>() < p {
                links.push((u, v));
            }
        }
    }
    Graph::new(n, false, links)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} = {p} is not a probability")))
    }
}
