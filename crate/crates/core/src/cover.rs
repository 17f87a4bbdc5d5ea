//! Sparse r-neighbourhood covers of radius at most 2r.
//!
//! Clusters are the sets `X_{2r}[G, <, u] = N_{2r}^{G ∖ S(u)}(u)`, computed
//! by one ascending sweep. A vertex `v` is assigned to the cluster of the
//! first `u` whose r-ball in `G ∖ S(u)` contains `v`, which is the minimum of
//! `N_r(v)`, so `N_r(v)` lies inside that cluster.

use serde::Serialize;
use serde_json::json;

use crate::graph::{Bfs, Graph, GraphError, Result};
use crate::order::{order_from_aug, sweep, wreach_set, VertexOrder};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub center: usize,
    /// Ascending.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub clusters: Vec<Cluster>,
    /// `assignment[v]` indexes `clusters`; its cluster contains `N_r(v)`.
    pub assignment: Vec<usize>,
    pub radius: usize,
    pub order: VertexOrder,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CoverStats {
    /// Δ(X): the largest number of clusters containing one vertex.
    pub max_degree: usize,
    /// Largest distance from a cluster's centre inside the cluster.
    pub max_radius: usize,
    /// ‖X‖ = Σ |X|.
    pub total_size: usize,
}

/// Sweeps `ord` with radius `2r`.
pub fn build_cover(g: &Graph, r: usize, ord: &VertexOrder) -> Cover {
    let n = g.vertex_count();
    let mut clusters = Vec::with_capacity(n);
    let mut assignment = vec![usize::MAX; n];
    sweep(g, ord, 2 * r, |u, found| {
        let idx = clusters.len();
        let mut vertices = Vec::with_capacity(found.len());
        for &(w, dist) in found {
            vertices.push(w);
            if dist <= r && assignment[w] == usize::MAX {
                assignment[w] = idx;
            }
        }
        vertices.sort_unstable();
        clusters.push(Cluster { center: u, vertices });
    });
    Cover {
        clusters,
        assignment,
        radius: r,
        order: ord.clone(),
    }
}

/// Cover along `order_from_aug(G, 2r)`.
pub fn build_cover_default(g: &Graph, r: usize) -> Result<Cover> {
    let (ord, _) = order_from_aug(g, 2 * r)?;
    Ok(build_cover(g, r, &ord))
}

impl Cover {
    pub fn to_json(&self, stats: &CoverStats) -> serde_json::Value {
        json!({
            "radius": self.radius,
            "clusters": self.clusters,
            "assignment": self.assignment,
            "order": self.order.sequence(),
            "stats": stats,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverViolation {
    AssignmentLength { expected: usize, found: usize },
    AssignmentOutOfRange { vertex: usize },
    /// `N_r(vertex)` is not contained in the assigned cluster.
    NotCovered { vertex: usize, missing: usize },
    CenterOutside { cluster: usize },
    VertexOutOfRange { cluster: usize, vertex: usize },
    Disconnected { cluster: usize },
    RadiusExceeded { cluster: usize, radius: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverReport {
    pub violations: Vec<CoverViolation>,
    pub stats: CoverStats,
}

impl CoverReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the cover property, connectivity and radius of every cluster, and
/// recomputes the statistics.
pub fn verify_cover(g: &Graph, r: usize, cover: &Cover) -> CoverReport {
    let n = g.vertex_count();
    let mut violations = Vec::new();
    let mut stats = CoverStats::default();
    let mut degree = vec![0usize; n];
    let mut member = vec![usize::MAX; n];
    let mut bfs = Bfs::new(n);

    for (ci, cluster) in cover.clusters.iter().enumerate() {
        stats.total_size += cluster.vertices.len();
        if let Some(&bad) = cluster.vertices.iter().find(|&&v| v >= n) {
            violations.push(CoverViolation::VertexOutOfRange { cluster: ci, vertex: bad });
            continue;
        }
        for &v in &cluster.vertices {
            degree[v] += 1;
            member[v] = ci;
        }
        if cluster.center >= n || member[cluster.center] != ci {
            violations.push(CoverViolation::CenterOutside { cluster: ci });
            continue;
        }
        bfs.run(g, &[cluster.center], usize::MAX, |w| member[w] == ci);
        if bfs.visited().len() != cluster.vertices.len() {
            violations.push(CoverViolation::Disconnected { cluster: ci });
            continue;
        }
        let radius = bfs.max_distance();
        stats.max_radius = stats.max_radius.max(radius);
        if radius > 2 * r {
            violations.push(CoverViolation::RadiusExceeded { cluster: ci, radius });
        }
    }
    stats.max_degree = degree.iter().copied().max().unwrap_or(0);

    if cover.assignment.len() != n {
        violations.push(CoverViolation::AssignmentLength {
            expected: n,
            found: cover.assignment.len(),
        });
        return CoverReport { violations, stats };
    }
    for v in 0..n {
        let Some(cluster) = cover.clusters.get(cover.assignment[v]) else {
            violations.push(CoverViolation::AssignmentOutOfRange { vertex: v });
            continue;
        };
        for &w in bfs.run(g, &[v], r, |_| true) {
            if cluster.vertices.binary_search(&w).is_err() {
                violations.push(CoverViolation::NotCovered { vertex: v, missing: w });
                break;
            }
        }
    }
    CoverReport { violations, stats }
}

/// Checks `d^X(v) = |wreach_{2r}[G, <, v]|` for every `v`, with the right
/// side computed by the per-vertex pruned search.
pub fn cover_degree_equals_wreach(g: &Graph, r: usize, ord: &VertexOrder) -> Result<()> {
    let cover = build_cover(g, r, ord);
    let mut degree = vec![0usize; g.vertex_count()];
    for c in &cover.clusters {
        for &v in &c.vertices {
            degree[v] += 1;
        }
    }
    for v in g.vertices() {
        let w = wreach_set(g, ord, 2 * r, v).len();
        if degree[v] != w {
            return Err(GraphError::PropertyViolation(format!(
                "vertex {v} lies in {} clusters but |wreach_{}| = {w}",
                degree[v],
                2 * r
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, grid, path, random_sparse, rng};
    use crate::order::{all_wreach, VertexOrder};
    use proptest::prelude::*;

    fn sets(cover: &Cover) -> Vec<Vec<usize>> {
        cover.clusters.iter().map(|c| c.vertices.clone()).collect()
    }

    #[test]
    fn path_example() {
        let cover = build_cover(&path(5), 1, &VertexOrder::identity(5));
        assert_eq!(
            sets(&cover),
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4], vec![4]]
        );
        assert_eq!(cover.assignment, vec![0, 0, 1, 2, 3]);
        let report = verify_cover(&path(5), 1, &cover);
        assert!(report.is_ok());
        assert_eq!(report.stats.max_degree, 3);
        assert!(cover_degree_equals_wreach(&path(5), 1, &VertexOrder::identity(5)).is_ok());
    }

    #[test]
    fn edgeless_and_complete() {
        let g = Graph::new(4);
        let cover = build_cover(&g, 2, &VertexOrder::identity(4));
        assert_eq!(sets(&cover), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(cover.assignment, vec![0, 1, 2, 3]);

        let k4 = complete(4);
        let ord = VertexOrder::from_sequence(vec![2, 0, 3, 1]).unwrap();
        let cover = build_cover(&k4, 1, &ord);
        assert_eq!(cover.clusters[0].center, 2);
        assert_eq!(cover.clusters[0].vertices, vec![0, 1, 2, 3]);
        assert_eq!(cover.assignment, vec![0; 4]);
    }

    #[test]
    fn verify_flags_broken_covers() {
        let g = path(5);
        let whole = Cover {
            clusters: vec![Cluster { center: 2, vertices: (0..5).collect() }],
            assignment: vec![0; 5],
            radius: 1,
            order: VertexOrder::identity(5),
        };
        assert!(verify_cover(&g, 1, &whole).is_ok());
        assert_eq!(
            verify_cover(&g, 0, &whole).violations,
            vec![CoverViolation::RadiusExceeded { cluster: 0, radius: 2 }]
        );

        let mut cover = build_cover(&g, 1, &VertexOrder::identity(5));
        cover.clusters[2].vertices = vec![2, 3];
        let report = verify_cover(&g, 1, &cover);
        assert_eq!(report.violations, vec![CoverViolation::NotCovered { vertex: 3, missing: 4 }]);

        let split = Cover {
            clusters: vec![Cluster { center: 0, vertices: vec![0, 2] }],
            assignment: vec![0; 5],
            radius: 1,
            order: VertexOrder::identity(5),
        };
        assert!(verify_cover(&g, 1, &split)
            .violations
            .contains(&CoverViolation::Disconnected { cluster: 0 }));
    }

    #[test]
    fn default_covers_on_grids() {
        for side in [5, 12, 20] {
            let g = grid(side, side);
            for r in 1..=2 {
                let cover = build_cover_default(&g, r).unwrap();
                let report = verify_cover(&g, r, &cover);
                assert!(report.is_ok(), "{:?}", report.violations);
                let wreach = all_wreach(&g, &cover.order, 2 * r);
                assert_eq!(report.stats.max_degree, wreach.iter().map(Vec::len).max().unwrap());
            }
        }
    }

    #[test]
    fn json_is_sorted_and_stable() {
        let g = path(3);
        let cover = build_cover(&g, 1, &VertexOrder::identity(3));
        let stats = verify_cover(&g, 1, &cover).stats;
        let text = serde_json::to_string(&cover.to_json(&stats)).unwrap();
        assert_eq!(
            text,
            r#"{"assignment":[0,0,1],"clusters":[{"center":0,"vertices":[0,1,2]},{"center":1,"vertices":[1,2]},{"center":2,"vertices":[2]}],"order":[0,1,2],"radius":1,"stats":{"max_degree":3,"max_radius":2,"total_size":6}}"#
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn covers_verify_on_random_graphs(n in 1usize..120, density in 0usize..3, seed in any::<u64>(), r in 1usize..4) {
            let g = random_sparse(n, n * density, &mut rng(seed));
            let cover = build_cover_default(&g, r).unwrap();
            let report = verify_cover(&g, r, &cover);
            prop_assert!(report.is_ok(), "{:?}", report.violations);
            prop_assert!(cover_degree_equals_wreach(&g, r, &cover.order).is_ok());
            // Each vertex goes to the cluster of the minimum of its r-ball.
            let mut bfs = Bfs::new(n);
            for v in 0..n {
                let ball = bfs.run(&g, &[v], r, |_| true);
                let min = *ball.iter().min_by_key(|&&u| cover.order.position(u)).unwrap();
                prop_assert_eq!(cover.clusters[cover.assignment[v]].center, min);
            }
        }
    }
}
