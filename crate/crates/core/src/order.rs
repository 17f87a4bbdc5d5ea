//! Vertex orders, weak reachability and weak colouring numbers.

use itertools::Itertools;

use crate::augment::aug;
use crate::graph::{min_degree_elimination, Bfs, Graph, GraphError, Result};

pub const BRUTE_WCOL_MAX_VERTICES: usize = 8;

/// A linear order of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexOrder {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl VertexOrder {
    /// `sequence[i]` is the vertex at position `i`.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in sequence.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(GraphError::InvalidArgument(format!(
                    "order is not a permutation of 0..{n} (at entry {v})"
                )));
            }
            position[v] = i;
        }
        Ok(VertexOrder { sequence, position })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrder {
            sequence: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }
}

/// Orders `G` via `aug(G, r)`: the underlying graph `H` of the augmentation is
/// ordered by repeatedly removing a vertex of minimum degree and placing it
/// after everything still present. Returns the order and `d = Δ⁻(aug(G, r))`.
pub fn order_from_aug(g: &Graph, r: usize) -> Result<(VertexOrder, usize)> {
    let h = aug(g, r)?;
    let mut sequence = min_degree_elimination(&h.digraph.underlying());
    sequence.reverse();
    Ok((VertexOrder::from_sequence(sequence)?, h.max_indegree))
}

/// `wreach_k[G, <, v]`, including `v`, in ascending id order.
///
/// Each candidate `u < v` within distance `k` is tested by a breadth-first
/// search from `v` that never enters a vertex below `u`.
pub fn wreach_set(g: &Graph, ord: &VertexOrder, k: usize, v: usize) -> Vec<usize> {
    let mut bfs = Bfs::new(g.vertex_count());
    let candidates: Vec<usize> = bfs
        .run(g, &[v], k, |_| true)
        .iter()
        .copied()
        .filter(|&u| ord.less(u, v))
        .collect();
    let mut out = vec![v];
    for u in candidates {
        let pu = ord.position(u);
        bfs.run(g, &[v], k, |w| ord.position(w) >= pu);
        if bfs.reached(u) {
            out.push(u);
        }
    }
    out.sort_unstable();
    out
}

/// The deleted-prefix sweep: vertices are processed in ascending order; for
/// each `u` a BFS of depth `radius` in `G ∖ {w : w < u}` is reported to
/// `visit` as `(vertex, distance)` pairs, then `u` is deleted.
///
/// Adjacency is split into smaller and larger neighbours. Deleting `u` only
/// touches the larger neighbours of `u`, removing `u` from their lists of
/// smaller neighbours.
pub fn sweep<F>(g: &Graph, ord: &VertexOrder, radius: usize, mut visit: F)
where
    F: FnMut(usize, &[(usize, usize)]),
{
    let n = g.vertex_count();
    let mut smaller: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut larger: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        for &w in g.neighbours(v) {
            if ord.less(w, v) {
                smaller[v].push(w);
            } else {
                larger[v].push(w);
            }
        }
    }
    let mut stamp = vec![0u32; n];
    let mut found: Vec<(usize, usize)> = Vec::new();
    for (gen, &u) in ord.sequence().iter().enumerate() {
        let gen = gen as u32 + 1;
        found.clear();
        found.push((u, 0));
        stamp[u] = gen;
        let mut head = 0;
        while head < found.len() {
            let (x, dx) = found[head];
            head += 1;
            if dx == radius {
                continue;
            }
            for &y in larger[x].iter().chain(smaller[x].iter()) {
                if stamp[y] != gen {
                    stamp[y] = gen;
                    found.push((y, dx + 1));
                }
            }
        }
        visit(u, &found);
        for &w in &larger[u] {
            let list = &mut smaller[w];
            if let Some(i) = list.iter().position(|&x| x == u) {
                list.swap_remove(i);
            }
        }
    }
}

/// `X_k[G, <, u] = N_k^{G ∖ S(u)}(u)` for every `u`, sorted ascending.
pub fn sweep_sets(g: &Graph, ord: &VertexOrder, k: usize) -> Vec<Vec<usize>> {
    let mut sets = vec![Vec::new(); g.vertex_count()];
    sweep(g, ord, k, |u, found| {
        let mut s: Vec<usize> = found.iter().map(|&(w, _)| w).collect();
        s.sort_unstable();
        sets[u] = s;
    });
    sets
}

/// All `wreach_k[G, <, v]` at once, by inverting the sweep sets.
pub fn all_wreach(g: &Graph, ord: &VertexOrder, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.vertex_count()];
    sweep(g, ord, k, |u, found| {
        for &(w, _) in found {
            out[w].push(u);
        }
    });
    for list in &mut out {
        list.sort_unstable();
    }
    out
}

/// `max_v |wreach_k[G, <, v]|`, an upper bound on `wcol_k(G)`.
pub fn wcol_of_order(g: &Graph, ord: &VertexOrder, k: usize) -> usize {
    let mut count = vec![0usize; g.vertex_count()];
    sweep(g, ord, k, |_, found| {
        for &(w, _) in found {
            count[w] += 1;
        }
    });
    count.into_iter().max().unwrap_or(0)
}

/// Exact `wcol_k(G)` over all `n!` orders, with one minimising order.
pub fn brute_wcol(g: &Graph, k: usize) -> Result<(usize, VertexOrder)> {
    let n = g.vertex_count();
    if n > BRUTE_WCOL_MAX_VERTICES {
        return Err(GraphError::OracleGuard(format!(
            "exact wcol supports n <= {BRUTE_WCOL_MAX_VERTICES} (got {n})"
        )));
    }
    let mut best = (usize::MAX, VertexOrder::identity(n));
    for perm in (0..n).permutations(n) {
        let ord = VertexOrder::from_sequence(perm)?;
        let value = (0..n).map(|v| wreach_set(g, &ord, k, v).len()).max().unwrap_or(0);
        if value < best.0 {
            best = (value, ord);
        }
    }
    if n == 0 {
        best.0 = 0;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, path, random_connected, random_sparse, rng, star};
    use proptest::prelude::*;

    #[test]
    fn wreach_examples() {
        let p3 = path(3);
        let id = VertexOrder::identity(3);
        assert_eq!(wreach_set(&p3, &id, 2, 2), vec![0, 1, 2]);
        assert_eq!(wreach_set(&p3, &id, 0, 2), vec![2]);
        assert_eq!(wreach_set(&p3, &id, 5, 0), vec![0]);
        // 1 < 0 < 2: from 2 the path 2–1 is fine, 2–1–0 dips below 0.
        let ord = VertexOrder::from_sequence(vec![1, 0, 2]).unwrap();
        assert_eq!(wreach_set(&p3, &ord, 2, 2), vec![1, 2]);
        assert_eq!(wreach_set(&p3, &ord, 2, 0), vec![0, 1]);
    }

    #[test]
    fn wcol_of_order_examples() {
        assert_eq!(wcol_of_order(&Graph::new(4), &VertexOrder::identity(4), 3), 1);
        let k5 = complete(5);
        let ord = VertexOrder::from_sequence(vec![3, 1, 4, 0, 2]).unwrap();
        assert_eq!(wcol_of_order(&k5, &ord, 1), 5);
        assert_eq!(wcol_of_order(&path(5), &VertexOrder::identity(5), 2), 3);
    }

    #[test]
    fn order_from_aug_examples() {
        // The degeneracy tie-break orients the last star edge 5 → 0, so leaf
        // 5 gains transitive arcs to every other leaf. Ordering the augmented
        // graph puts 5 and 4 ahead of the centre, and leaves 1..3 weakly reach
        // 0, 4 and 5 through the centre. A centre-first order gives 2.
        let s = star(5);
        let (ord, _) = order_from_aug(&s, 2).unwrap();
        assert_eq!(ord.sequence(), &[5, 4, 0, 3, 2, 1]);
        assert_eq!(wcol_of_order(&s, &ord, 2), 4);
        let centre_first = VertexOrder::identity(6);
        assert_eq!(wcol_of_order(&s, &centre_first, 2), 2);
        let k4 = complete(4);
        for r in 1..=3 {
            let (ord, _) = order_from_aug(&k4, r).unwrap();
            assert_eq!(wcol_of_order(&k4, &ord, r), 4);
        }
        let p6 = path(6);
        let (ord, _) = order_from_aug(&p6, 2).unwrap();
        assert!((0..6).all(|v| wreach_set(&p6, &ord, 2, v).len() <= 3));
    }

    #[test]
    fn brute_wcol_examples() {
        assert_eq!(brute_wcol(&star(5), 1).unwrap().0, 2);
        assert_eq!(brute_wcol(&star(5), 3).unwrap().0, 2);
        assert_eq!(brute_wcol(&complete(4), 2).unwrap().0, 4);
        assert_eq!(brute_wcol(&path(4), 1).unwrap().0, 2);
        assert!(brute_wcol(&path(9), 1).is_err());
    }

    #[test]
    fn brute_wcol_is_a_lower_bound() {
        let mut rng = rng(3);
        for _ in 0..15 {
            let g = random_connected(7, 4, &mut rng);
            for k in 1..=3 {
                let (best, witness) = brute_wcol(&g, k).unwrap();
                assert_eq!(wcol_of_order(&g, &witness, k), best);
                let (ord, _) = order_from_aug(&g, k).unwrap();
                assert!(wcol_of_order(&g, &ord, k) >= best);
            }
        }
    }

    #[test]
    fn augmentation_bound_holds() {
        let mut rng = rng(8);
        for _ in 0..20 {
            let g = random_sparse(120, 220, &mut rng);
            for r in 1..=3 {
                let (ord, d) = order_from_aug(&g, r).unwrap();
                assert!(wcol_of_order(&g, &ord, r) <= 2 * (d + 1) * (d + 1));
            }
        }
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(VertexOrder::from_sequence(vec![0, 0]).is_err());
        assert!(VertexOrder::from_sequence(vec![0, 2]).is_err());
    }

    proptest! {
        #[test]
        fn sweep_matches_pruned_search(n in 1usize..40, m in 0usize..80, seed in any::<u64>(), k in 0usize..4) {
            use rand::seq::SliceRandom;
            let mut r = rng(seed);
            let g = random_sparse(n, m, &mut r);
            let mut seq: Vec<usize> = (0..n).collect();
            seq.shuffle(&mut r);
            let ord = VertexOrder::from_sequence(seq).unwrap();
            let all = all_wreach(&g, &ord, k);
            for (v, expected) in all.iter().enumerate() {
                let direct = wreach_set(&g, &ord, k, v);
                prop_assert_eq!(expected, &direct);
                prop_assert!(direct.iter().all(|x| wreach_set(&g, &ord, k + 1, v).contains(x)));
            }
        }
    }
}
