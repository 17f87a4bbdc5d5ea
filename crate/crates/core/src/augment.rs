//! Tight transitive fraternal augmentations.
//!
//! One round adds, for every directed 2-path `u → w → v`, the transitive arc
//! `(u, v)`, and for every two in-neighbours `u, v` of a common `w`, one
//! fraternal arc between `u` and `v`. Nothing else is added.
//!
//! For acyclic input the fraternal arcs are oriented so that the result is
//! again acyclic, choosing greedily for small in-degrees (see
//! `orient_acyclic`). Later rounds then never demand both `(u, v)` and
//! `(v, u)`. For cyclic input the in-degree rule is used instead: towards the
//! endpoint of smaller current in-degree, ties towards the larger id.

use crate::graph::{degeneracy_orientation, DiGraph, Graph, GraphError, Result};

pub const DEFAULT_INDEGREE_CEILING: usize = 1 << 20;

/// Why an arc is present. Ordered by priority: an arc that is both original
/// and transitive is reported as original.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcKind {
    Original,
    Transitive,
    Fraternal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationResult {
    pub digraph: DiGraph,
    pub rounds: usize,
    pub max_indegree: usize,
    /// Parallel to `digraph.in_neighbours(v)`.
    kinds: Vec<Vec<ArcKind>>,
    /// Whether `digraph` has no directed cycle.
    acyclic: bool,
}

impl AugmentationResult {
    fn unchanged(d: DiGraph) -> Self {
        let acyclic = d.topological_order().is_some();
        let kinds = (0..d.vertex_count())
            .map(|v| vec![ArcKind::Original; d.in_degree(v)])
            .collect();
        let max_indegree = d.max_in_degree();
        AugmentationResult {
            digraph: d,
            rounds: 0,
            max_indegree,
            kinds,
            acyclic,
        }
    }

    pub fn kind(&self, u: usize, v: usize) -> Option<ArcKind> {
        let pos = self.digraph.in_neighbours(v).binary_search(&u).ok()?;
        Some(self.kinds[v][pos])
    }

    /// Arc counts as `[original, transitive, fraternal]`.
    pub fn counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for k in self.kinds.iter().flatten() {
            c[*k as usize] += 1;
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AugConfig {
    pub indegree_ceiling: usize,
}

impl Default for AugConfig {
    fn default() -> Self {
        AugConfig {
            indegree_ceiling: DEFAULT_INDEGREE_CEILING,
        }
    }
}

/// One tight 1-transitive fraternal augmentation of `d`.
pub fn tight_one_aug(d: &DiGraph) -> Result<AugmentationResult> {
    let prev = AugmentationResult::unchanged(d.clone());
    let mut out = augment_round(&prev)?;
    out.rounds = 1;
    Ok(out)
}

/// `aug(G, r)`: the degeneracy orientation of `G` followed by `r` rounds.
/// For `r = 0` the orientation itself is returned.
pub fn aug(g: &Graph, r: usize) -> Result<AugmentationResult> {
    aug_with(g, r, AugConfig::default())
}

pub fn aug_with(g: &Graph, r: usize, config: AugConfig) -> Result<AugmentationResult> {
    let mut cur = AugmentationResult::unchanged(degeneracy_orientation(g).orientation);
    for round in 1..=r {
        cur = augment_round(&cur)?;
        cur.rounds = round;
        if cur.max_indegree > config.indegree_ceiling {
            return Err(GraphError::DenseInput {
                max_in_degree: cur.max_indegree,
                ceiling: config.indegree_ceiling,
            });
        }
    }
    Ok(cur)
}

fn augment_round(prev: &AugmentationResult) -> Result<AugmentationResult> {
    let d = &prev.digraph;
    let n = d.vertex_count();

    // Original and transitive arcs into each v: in(v) and in(in(v)).
    let mut mark = vec![usize::MAX; n];
    let mut forced: Vec<Vec<(usize, ArcKind)>> = Vec::with_capacity(n);
    for v in 0..n {
        let mut list: Vec<(usize, ArcKind)> = Vec::with_capacity(d.in_degree(v));
        mark[v] = v;
        for (i, &u) in d.in_neighbours(v).iter().enumerate() {
            mark[u] = v;
            list.push((u, prev.kinds[v][i]));
        }
        for &w in d.in_neighbours(v) {
            for &u in d.in_neighbours(w) {
                if mark[u] != v {
                    mark[u] = v;
                    list.push((u, ArcKind::Transitive));
                }
            }
        }
        list.sort_unstable();
        forced.push(list);
    }
    let joined = |forced: &[Vec<(usize, ArcKind)>], a: usize, b: usize| {
        forced[b].binary_search_by_key(&a, |&(u, _)| u).is_ok()
            || forced[a].binary_search_by_key(&b, |&(u, _)| u).is_ok()
    };

    if !prev.acyclic {
        for v in 0..n {
            for &(u, _) in &forced[v] {
                if forced[u].binary_search_by_key(&v, |&(x, _)| x).is_ok() {
                    return Err(GraphError::AntiparallelArcs(u.min(v), u.max(v)));
                }
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for w in 0..n {
        let ins = d.in_neighbours(w);
        for (i, &a) in ins.iter().enumerate() {
            for &b in &ins[i + 1..] {
                if !joined(&forced, a, b) {
                    pairs.push((a, b));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();

    let oriented = if prev.acyclic {
        orient_acyclic(&forced, &pairs)
    } else {
        orient_by_indegree(&forced, &pairs)
    };
    let mut extra: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in oriented {
        extra[v].push(u);
    }
    for (v, more) in extra.into_iter().enumerate() {
        if !more.is_empty() {
            forced[v].extend(more.into_iter().map(|u| (u, ArcKind::Fraternal)));
            forced[v].sort_unstable();
        }
    }
    let out = finish(forced, prev.acyclic);
    if prev.acyclic {
        Ok(out)
    } else {
        let acyclic = out.digraph.topological_order().is_some();
        Ok(AugmentationResult { acyclic, ..out })
    }
}

/// The in-degree rule: towards the endpoint of smaller current in-degree,
/// ties towards the larger id, pairs taken in ascending order.
fn orient_by_indegree(forced_in: &[Vec<(usize, ArcKind)>], pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut indeg: Vec<usize> = forced_in.iter().map(Vec::len).collect();
    pairs
        .iter()
        .map(|&(a, b)| {
            let target = if indeg[a] < indeg[b] { a } else { b };
            let source = if target == a { b } else { a };
            indeg[target] += 1;
            (source, target)
        })
        .collect()
}

/// Orients the fraternal pairs not already joined by a forced arc so that the
/// result stays acyclic, greedily keeping in-degrees small.
///
/// A topological order is built from the back. The next vertex placed is,
/// among those whose forced out-neighbours are all placed, one minimising its
/// final in-degree: forced in-arcs plus fraternal partners not yet placed
/// (ties to the larger id). Fraternal pairs then point towards the later
/// vertex.
fn orient_acyclic(forced_in: &[Vec<(usize, ArcKind)>], pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let n = forced_in.len();
    let mut partners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in pairs {
        partners[a].push(b);
        partners[b].push(a);
    }
    let mut forced_out_left = vec![0usize; n];
    for list in forced_in {
        for &(u, _) in list {
            forced_out_left[u] += 1;
        }
    }
    let mut key: Vec<usize> = (0..n).map(|v| forced_in[v].len() + partners[v].len()).collect();
    let mut placed = vec![false; n];
    let mut heap: BinaryHeap<(Reverse<usize>, usize)> = (0..n)
        .filter(|&v| forced_out_left[v] == 0)
        .map(|v| (Reverse(key[v]), v))
        .collect();
    let mut oriented = Vec::with_capacity(pairs.len());
    while let Some((Reverse(k), v)) = heap.pop() {
        if placed[v] || k != key[v] {
            continue;
        }
        placed[v] = true;
        for &w in &partners[v] {
            if !placed[w] {
                oriented.push((w, v));
                key[w] -= 1;
                if forced_out_left[w] == 0 {
                    heap.push((Reverse(key[w]), w));
                }
            }
        }
        for &(u, _) in &forced_in[v] {
            forced_out_left[u] -= 1;
            if forced_out_left[u] == 0 {
                heap.push((Reverse(key[u]), u));
            }
        }
    }
    debug_assert!(placed.iter().all(|&p| p), "forced arcs must be acyclic");
    oriented
}

fn finish(in_lists: Vec<Vec<(usize, ArcKind)>>, acyclic: bool) -> AugmentationResult {
    let kinds: Vec<Vec<ArcKind>> = in_lists.iter().map(|l| l.iter().map(|&(_, k)| k).collect()).collect();
    let ins: Vec<Vec<usize>> = in_lists.into_iter().map(|l| l.into_iter().map(|(u, _)| u).collect()).collect();
    let digraph = DiGraph::from_in_lists(ins);
    let max_indegree = digraph.max_in_degree();
    AugmentationResult {
        digraph,
        rounds: 0,
        max_indegree,
        kinds,
        acyclic,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugViolation {
    VertexCountMismatch { d: usize, h: usize },
    /// (a): an arc of `D` is missing from `H`.
    MissingOriginal { u: usize, v: usize },
    /// (b): `u → w → v` in `D` but `(u, v)` not in `H`.
    MissingTransitive { u: usize, w: usize, v: usize },
    /// (c): `u → w ← v` in `D` but neither `(u, v)` nor `(v, u)` in `H`.
    MissingFraternal { u: usize, w: usize, v: usize },
    /// (d): an arc of `H` with no justification in `D`.
    Unjustified { u: usize, v: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AugReport {
    pub violations: Vec<AugViolation>,
}

impl AugReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sorted_intersects(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn first_common(a: &[usize], b: &[usize]) -> Option<usize> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// Checks that `h` is a tight 1-transitive fraternal augmentation of `d`.
pub fn verify_aug(d: &DiGraph, h: &DiGraph) -> AugReport {
    let mut violations = Vec::new();
    if d.vertex_count() != h.vertex_count() {
        violations.push(AugViolation::VertexCountMismatch {
            d: d.vertex_count(),
            h: h.vertex_count(),
        });
        return AugReport { violations };
    }
    for (u, v) in d.arcs() {
        if !h.has_arc(u, v) {
            violations.push(AugViolation::MissingOriginal { u, v });
        }
    }
    for w in 0..d.vertex_count() {
        let ins = d.in_neighbours(w);
        for &u in ins {
            for &v in d.out_neighbours(w) {
                if u != v && !h.has_arc(u, v) {
                    violations.push(AugViolation::MissingTransitive { u, w, v });
                }
            }
        }
        for (i, &u) in ins.iter().enumerate() {
            for &v in &ins[i + 1..] {
                if !h.has_arc(u, v) && !h.has_arc(v, u) {
                    violations.push(AugViolation::MissingFraternal { u, w, v });
                }
            }
        }
    }
    for (u, v) in h.arcs() {
        if d.has_arc(u, v) {
            continue;
        }
        let outs = d.out_neighbours(u);
        if !sorted_intersects(outs, d.in_neighbours(v)) && !sorted_intersects(outs, d.out_neighbours(v)) {
            violations.push(AugViolation::Unjustified { u, v });
        }
    }
    AugReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Same,
    Arc(usize, usize),
    CommonInNeighbour(usize),
}

/// Finds the arc or common in-neighbour promised for `v`, `w` at distance
/// at most `r` in `g`, where `h = aug(g, r)`.
pub fn check_neighbourhood_witness(
    g: &Graph,
    h: &AugmentationResult,
    v: usize,
    w: usize,
    r: usize,
) -> Result<Witness> {
    g.check_vertex(v)?;
    g.check_vertex(w)?;
    match crate::graph::distances_from(g, v)[w] {
        Some(dist) if dist <= r => {}
        _ => {
            return Err(GraphError::InvalidArgument(format!(
                "vertices {v} and {w} are not within distance {r}"
            )))
        }
    }
    find_witness(&h.digraph, v, w).ok_or_else(|| {
        GraphError::PropertyViolation(format!("no augmentation witness for {v} and {w}"))
    })
}

/// Witness lookup without the distance precondition check.
pub fn find_witness(h: &DiGraph, v: usize, w: usize) -> Option<Witness> {
    if v == w {
        Some(Witness::Same)
    } else if h.has_arc(v, w) {
        Some(Witness::Arc(v, w))
    } else if h.has_arc(w, v) {
        Some(Witness::Arc(w, v))
    } else {
        first_common(h.in_neighbours(v), h.in_neighbours(w)).map(Witness::CommonInNeighbour)
    }
}
