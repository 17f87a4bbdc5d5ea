//! Reproducible graph families. All randomness comes from a seeded ChaCha
//! generator.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges_lossy(n, (1..n).map(|i| (i - 1, i)))
}

pub fn cycle(n: usize) -> Graph {
    if n < 3 {
        return path(n);
    }
    Graph::from_edges_lossy(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges_lossy(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Star `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges_lossy(leaves + 1, (1..=leaves).map(|i| (0, i)))
}

/// `rows × cols` grid; vertex `(i, j)` is `i * cols + j`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let v = i * cols + j;
            if j + 1 < cols {
                edges.push((v, v + 1));
            }
            if i + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::from_edges_lossy(rows * cols, edges)
}

/// Erdős–Rényi-style sparse graph with exactly `min(m, n(n-1)/2)` edges.
pub fn random_sparse(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    let max_edges = n * n.saturating_sub(1) / 2;
    let m = m.min(max_edges);
    if m * 2 > max_edges {
        let mut all: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        all.shuffle(rng);
        all.truncate(m);
        return Graph::from_edges_lossy(n, all);
    }
    let mut seen = rustc_hash::FxHashSet::default();
    while seen.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            seen.insert((u.min(v), u.max(v)));
        }
    }
    let mut edges: Vec<_> = seen.into_iter().collect();
    edges.sort_unstable();
    Graph::from_edges_lossy(n, edges)
}

/// Uniform random labelled tree (random attachment).
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    Graph::from_edges_lossy(n, (1..n).map(|v| (rng.gen_range(0..v), v)))
}

/// Random connected graph: a random tree plus `extra` random edges.
pub fn random_connected(n: usize, extra: usize, rng: &mut impl Rng) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..extra {
        if n >= 2 {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            edges.push((u, v));
        }
    }
    Graph::from_edges_lossy(n, edges)
}

/// Random maximal outerplanar graph: a triangulated polygon.
pub fn random_outerplanar(n: usize, rng: &mut impl Rng) -> Graph {
    if n < 3 {
        return path(n);
    }
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let mut polygons = vec![(0..n).collect::<Vec<_>>()];
    while let Some(poly) = polygons.pop() {
        if poly.len() <= 3 {
            continue;
        }
        let k = poly.len();
        let i = rng.gen_range(0..k);
        let j = (i + rng.gen_range(2..k - 1)) % k;
        let (a, b) = (i.min(j), i.max(j));
        edges.push((poly[a], poly[b]));
        polygons.push(poly[a..=b].to_vec());
        let mut rest = poly[b..].to_vec();
        rest.extend_from_slice(&poly[..=a]);
        polygons.push(rest);
    }
    Graph::from_edges_lossy(n, edges)
}

/// Random simple 3-regular graph on an even number of vertices via the
/// configuration model with restarts.
pub fn random_cubic(n: usize, rng: &mut impl Rng) -> Result<Graph, GraphError> {
    if n % 2 == 1 || n < 4 {
        return Err(GraphError::InvalidArgument(format!(
            "a cubic graph needs an even n >= 4 (got {n})"
        )));
    }
    'attempt: for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
        stubs.shuffle(rng);
        let mut seen = rustc_hash::FxHashSet::default();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        return Graph::from_edges(n, seen);
    }
    Err(GraphError::InvalidArgument(
        "failed to sample a simple cubic graph".into(),
    ))
}

/// A named family, e.g. `path:10`, `grid:20x20`, `random:200:400`,
/// `cubic:50`, `tree:30`, `outerplanar:12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Grid(usize, usize),
    Star(usize),
    Complete(usize),
    Random { n: usize, m: usize },
    Cubic(usize),
    Tree(usize),
    Outerplanar(usize),
}

impl Family {
    pub fn build(&self, seed: u64) -> Result<Graph, GraphError> {
        let mut rng = rng(seed);
        Ok(match *self {
            Family::Path(n) => path(n),
            Family::Cycle(n) => cycle(n),
            Family::Grid(a, b) => grid(a, b),
            Family::Star(k) => star(k),
            Family::Complete(n) => complete(n),
            Family::Random { n, m } => random_sparse(n, m, &mut rng),
            Family::Cubic(n) => random_cubic(n, &mut rng)?,
            Family::Tree(n) => random_tree(n, &mut rng),
            Family::Outerplanar(n) => random_outerplanar(n, &mut rng),
        })
    }
}

impl FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidArgument(format!("unknown graph family `{s}`"));
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split([':', 'x'])
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        Ok(match (name, nums.as_slice()) {
            ("path", [n]) => Family::Path(*n),
            ("cycle", [n]) => Family::Cycle(*n),
            ("grid", [a, b]) => Family::Grid(*a, *b),
            ("star", [k]) => Family::Star(*k),
            ("complete", [n]) => Family::Complete(*n),
            ("random", [n, m]) => Family::Random { n: *n, m: *m },
            ("cubic", [n]) => Family::Cubic(*n),
            ("tree", [n]) => Family::Tree(*n),
            ("outerplanar", [n]) => Family::Outerplanar(*n),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path(n) => write!(f, "path:{n}"),
            Family::Cycle(n) => write!(f, "cycle:{n}"),
            Family::Grid(a, b) => write!(f, "grid:{a}x{b}"),
            Family::Star(k) => write!(f, "star:{k}"),
            Family::Complete(n) => write!(f, "complete:{n}"),
            Family::Random { n, m } => write!(f, "random:{n}:{m}"),
            Family::Cubic(n) => write!(f, "cubic:{n}"),
            Family::Tree(n) => write!(f, "tree:{n}"),
            Family::Outerplanar(n) => write!(f, "outerplanar:{n}"),
        }
    }
}
