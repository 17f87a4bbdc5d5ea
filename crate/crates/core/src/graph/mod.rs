//! Undirected and directed simple graphs, coloured graphs and the
//! breadth-first primitives everything else is built on.
//!
//! Vertex ids are dense and 0-based. Adjacency lists are kept sorted so that
//! every traversal visits neighbours in ascending id order, which makes all
//! derived objects (BFS trees, orders, covers) reproducible.

mod bfs;
pub mod generate;
pub mod io;
mod minor;

use std::collections::VecDeque;

use thiserror::Error;

pub use bfs::{Bfs, UNREACHED};
pub use minor::{has_shallow_clique_minor, MINOR_ORACLE_MAX_CLIQUE, MINOR_ORACLE_MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("both arcs ({0}, {1}) and ({1}, {0}) present")]
    AntiparallelArcs(usize, usize),
    #[error("graph is empty")]
    Empty,
    #[error("graph is disconnected; operate per component")]
    Disconnected,
    #[error("vertex {0} carries two colours")]
    ColourClash(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("oracle size guard exceeded: {0}")]
    OracleGuard(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("in-degree {max_in_degree} exceeds the ceiling {ceiling}; input is too dense")]
    DenseInput { max_in_degree: usize, ceiling: usize },
    #[error("property violated: {0}")]
    PropertyViolation(String),
    #[error("splitter budget exceeded: |W| = {size} > m = {budget}")]
    BudgetExceeded { size: usize, budget: usize },
    #[error("splitter game has no rounds left (l = {rounds})")]
    RoundsExhausted { rounds: usize },
    #[error("connected instance has radius {radius}, above the splitter radius {limit}")]
    RadiusExceeded { radius: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: x,
                        vertex_count: n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// Like [`Graph::from_edges`] but silently drops loops and repeated edges.
    pub fn from_edges_lossy<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v && u < n && v < n {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Graph {
            adj,
            edge_count: edge_count / 2,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    /// Induced subgraph on `vertices` (need not be sorted; duplicates are
    /// ignored). Returns the subgraph and the map from new ids to old ids,
    /// which is ascending, so new ids preserve the relative order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut edge_count = 0;
        let adj: Vec<Vec<usize>> = keep
            .iter()
            .map(|&v| {
                let list: Vec<usize> = self.adj[v]
                    .iter()
                    .filter(|&&w| index[w] != usize::MAX).map(|&w| index[w])
                    .collect();
                edge_count += list.len();
                list
            })
            .collect();
        (
            Graph {
                adj,
                edge_count: edge_count / 2,
            },
            keep,
        )
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.components().len() == 1
    }
}

/// Exact BFS distances from `source`; `None` marks unreachable vertices.
pub fn distances_from(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut bfs = Bfs::new(g.vertex_count());
    bfs.run(g, &[source], usize::MAX, |_| true);
    (0..g.vertex_count()).map(|v| bfs.distance(v)).collect()
}

/// The closed ball `N_r(v)` with exact distances, ascending by vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbourhood {
    pub vertices: Vec<usize>,
    pub distances: Vec<usize>,
}

impl Neighbourhood {
    pub fn distance_to(&self, u: usize) -> Option<usize> {
        self.vertices
            .binary_search(&u)
            .ok()
            .map(|i| self.distances[i])
    }
}

pub fn bfs_neighbourhood(g: &Graph, v: usize, r: usize) -> Result<Neighbourhood> {
    g.check_vertex(v)?;
    let mut bfs = Bfs::new(g.vertex_count());
    bfs.run(g, &[v], r, |_| true);
    let mut vertices = bfs.visited().to_vec();
    vertices.sort_unstable();
    let distances = vertices
        .iter()
        .map(|&u| bfs.distance(u).expect("visited vertex has a distance"))
        .collect();
    Ok(Neighbourhood {
        vertices,
        distances,
    })
}

/// Radius of a connected graph and its smallest-id centre.
pub fn radius_and_center(g: &Graph) -> Result<(usize, usize)> {
    if g.is_empty() {
        return Err(GraphError::Empty);
    }
    let n = g.vertex_count();
    let mut bfs = Bfs::new(n);
    let mut best: Option<(usize, usize)> = None;
    for v in 0..n {
        bfs.run(g, &[v], usize::MAX, |_| true);
        if bfs.visited().len() != n {
            return Err(GraphError::Disconnected);
        }
        let ecc = bfs.max_distance();
        if best.is_none_or(|(r, _)| ecc < r) {
            best = Some((ecc, v));
        }
    }
    Ok(best.expect("nonempty graph"))
}

/// Simple directed graph with sorted in- and out-lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiGraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    arc_count: usize,
}

impl DiGraph {
    pub fn new(n: usize) -> Self {
        DiGraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            arc_count: 0,
        }
    }

    /// Builds a digraph, rejecting self-arcs, repeated arcs and antiparallel
    /// pairs.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (u, v) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: x,
                        vertex_count: n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        let mut arc_count = 0;
        for (u, list) in out_adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u, w[0]));
            }
            arc_count += list.len();
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }
        let g = DiGraph {
            out_adj,
            in_adj,
            arc_count,
        };
        for (u, v) in g.arcs() {
            if g.has_arc(v, u) {
                return Err(GraphError::AntiparallelArcs(u.min(v), u.max(v)));
            }
        }
        Ok(g)
    }

    /// Assembles a digraph from per-vertex in-lists that are already known to
    /// be simple and asymmetric.
    pub(crate) fn from_in_lists(mut in_adj: Vec<Vec<usize>>) -> Self {
        let n = in_adj.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut arc_count = 0;
        for (v, list) in in_adj.iter_mut().enumerate() {
            list.sort_unstable();
            arc_count += list.len();
            for &u in list.iter() {
                out_adj[u].push(v);
            }
        }
        DiGraph {
            out_adj,
            in_adj,
            arc_count,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn out_neighbours(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbours(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    /// Δ⁻, the maximum in-degree.
    pub fn max_in_degree(&self) -> usize {
        self.in_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.out_adj.len() && self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    /// The underlying undirected graph.
    pub fn underlying(&self) -> Graph {
        Graph::from_edges_lossy(self.vertex_count(), self.arcs())
    }

    /// A topological order (smallest available id first), or `None` if the
    /// digraph has a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut indeg: Vec<usize> = self.in_adj.iter().map(Vec::len).collect();
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
            .filter(|&v| indeg[v] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(u)) = ready.pop() {
            order.push(u);
            for &v in &self.out_adj[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.push(std::cmp::Reverse(v));
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// Result of the greedy degeneracy elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneracy {
    /// Vertices in the order they were removed.
    pub removal_order: Vec<usize>,
    /// Each edge oriented towards its endpoint removed first.
    pub orientation: DiGraph,
    /// Largest remaining degree seen at a removal; equals Δ⁻ of `orientation`.
    pub max_in_degree: usize,
}

/// Repeatedly removes a vertex of minimum remaining degree (smallest id on
/// ties) and orients its remaining edges towards it.
pub fn degeneracy_orientation(g: &Graph) -> Degeneracy {
    let n = g.vertex_count();
    let removal_order = min_degree_elimination(g);
    let mut rank = vec![0; n];
    for (i, &v) in removal_order.iter().enumerate() {
        rank[v] = i;
    }
    let in_adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.neighbours(v)
                .iter()
                .copied()
                .filter(|&w| rank[w] > rank[v])
                .collect()
        })
        .collect();
    let orientation = DiGraph::from_in_lists(in_adj);
    let max_in_degree = orientation.max_in_degree();
    Degeneracy {
        removal_order,
        orientation,
        max_in_degree,
    }
}

/// Min-degree elimination order with smallest-id tie-break.
pub fn min_degree_elimination(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut queue: std::collections::BTreeSet<(usize, usize)> =
        (0..n).map(|v| (degree[v], v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        removed[v] = true;
        order.push(v);
        for &w in g.neighbours(v) {
            if !removed[w] {
                queue.remove(&(degree[w], w));
                degree[w] -= 1;
                queue.insert((degree[w], w));
            }
        }
    }
    order
}

/// Graph with pairwise disjoint vertex colour classes `C_0..C_{t-1}`;
/// uncoloured vertices are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub graph: Graph,
    color_of: Vec<Option<usize>>,
    color_count: usize,
}

impl ColoredGraph {
    pub fn uncoloured(graph: Graph) -> Self {
        let n = graph.vertex_count();
        ColoredGraph {
            graph,
            color_of: vec![None; n],
            color_count: 0,
        }
    }

    /// From a per-vertex colour map. The colour count is one more than the
    /// largest colour used, unless `color_count` asks for more.
    pub fn from_color_map(graph: Graph, color_of: Vec<Option<usize>>) -> Result<Self> {
        if color_of.len() != graph.vertex_count() {
            return Err(GraphError::InvalidArgument(format!(
                "colour map has {} entries for {} vertices",
                color_of.len(),
                graph.vertex_count()
            )));
        }
        let color_count = color_of.iter().flatten().map(|&c| c + 1).max().unwrap_or(0);
        Ok(ColoredGraph {
            graph,
            color_of,
            color_count,
        })
    }

    /// From explicit colour classes; a vertex in two classes is an error.
    pub fn from_classes(graph: Graph, classes: &[Vec<usize>]) -> Result<Self> {
        let mut color_of = vec![None; graph.vertex_count()];
        for (c, class) in classes.iter().enumerate() {
            for &v in class {
                graph.check_vertex(v)?;
                if color_of[v].is_some_and(|old| old != c) {
                    return Err(GraphError::ColourClash(v));
                }
                color_of[v] = Some(c);
            }
        }
        Ok(ColoredGraph {
            graph,
            color_of,
            color_count: classes.len(),
        })
    }

    pub fn color_of(&self, v: usize) -> Option<usize> {
        self.color_of[v]
    }

    pub fn color_map(&self) -> &[Option<usize>] {
        &self.color_of
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    /// The colour classes, each ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.color_count];
        for (v, c) in self.color_of.iter().enumerate() {
            if let Some(c) = c {
                classes[*c].push(v);
            }
        }
        classes
    }

    pub fn coloured_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.color_of
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|_| v))
    }
}

/// The coloured lexicographic product `G ⊛ K_k`: vertex `(x, y)` is
/// `x * k + y` and carries colour `y`.
pub fn lex_product_colored(g: &Graph, k: usize) -> Result<ColoredGraph> {
    if k == 0 {
        return Err(GraphError::InvalidArgument(
            "lexicographic product needs k >= 1".into(),
        ));
    }
    let n = g.vertex_count();
    let mut adj = Vec::with_capacity(n * k);
    let mut edge_count = 0;
    for x in 0..n {
        for y in 0..k {
            let mut list = Vec::with_capacity(g.degree(x) * k + k - 1);
            // Neighbour copies and same-x copies interleave by id; keep sorted.
            let mut push_block = |xx: usize, skip: Option<usize>| {
                for yy in 0..k {
                    if Some(yy) != skip {
                        list.push(xx * k + yy);
                    }
                }
            };
            let mut own_done = false;
            for &xn in g.neighbours(x) {
                if !own_done && xn > x {
                    push_block(x, Some(y));
                    own_done = true;
                }
                push_block(xn, None);
            }
            if !own_done {
                push_block(x, Some(y));
            }
            edge_count += list.len();
            adj.push(list);
        }
    }
    let graph = Graph {
        adj,
        edge_count: edge_count / 2,
    };
    let color_of = (0..n * k).map(|v| Some(v % k)).collect();
    Ok(ColoredGraph {
        graph,
        color_of,
        color_count: k,
    })
}
