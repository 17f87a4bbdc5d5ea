//! Distance-r independent sets.
//!
//! A set is r-independent when its members are pairwise at distance > r, and
//! rainbow when its members carry pairwise distinct colours (uncoloured
//! vertices never qualify). `rainbow_dis` decides whether a coloured graph
//! has a rainbow r-independent set of size k by greedy peeling, splitting
//! into components, and one splitter move per connected level, recolouring
//! the survivors by their distances to the deleted vertices. `dis` reduces the
//! plain problem to the rainbow one on `G ⊛ K_k`.
//!
//! All sub-instances live on the vertex set of one graph; a sub-instance is
//! a vertex subset plus a colouring, with distances taken in the induced
//! subgraph.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::graph::{distances_from, lex_product_colored, Bfs, ColoredGraph, Graph, GraphError, Result};
use crate::splitter::{GameParams, GameState};

pub const BRUTE_DIS_MAX_CANDIDATES: usize = 20;
pub const BRUTE_DIS_MAX_K: usize = 4;
pub const DEFAULT_BRUTE_THRESHOLD: usize = 12;
pub const DEFAULT_BRANCH_LIMIT: usize = 1 << 16;

fn guard(candidates: usize, k: usize) -> Result<()> {
    if candidates > BRUTE_DIS_MAX_CANDIDATES || k > BRUTE_DIS_MAX_K {
        return Err(GraphError::OracleGuard(format!(
            "brute-force DIS supports |W| <= {BRUTE_DIS_MAX_CANDIDATES} and k <= {BRUTE_DIS_MAX_K} (got |W| = {candidates}, k = {k})"
        )));
    }
    Ok(())
}

/// Lexicographically least r-independent k-subset of `w`, by exhaustion.
pub fn brute_dis(g: &Graph, w: &[usize], k: usize, r: usize) -> Result<Option<Vec<usize>>> {
    for &v in w {
        g.check_vertex(v)?;
    }
    let w: Vec<usize> = w.iter().copied().sorted_unstable().dedup().collect();
    guard(w.len(), k)?;
    let dist: Vec<Vec<Option<usize>>> = w.iter().map(|&v| distances_from(g, v)).collect();
    let far = |i: usize, j: usize| dist[i][w[j]].is_none_or(|d| d > r);
    Ok((0..w.len())
        .combinations(k)
        .find(|c| c.iter().tuple_combinations().all(|(&i, &j)| far(i, j)))
        .map(|c| c.into_iter().map(|i| w[i]).collect()))
}

/// Lexicographically least rainbow r-independent k-set, by exhaustion over
/// the coloured vertices.
pub fn brute_rainbow_dis(cg: &ColoredGraph, k: usize, r: usize) -> Result<Option<Vec<usize>>> {
    let coloured: Vec<usize> = cg.coloured_vertices().collect();
    guard(coloured.len(), k)?;
    let dist: Vec<Vec<Option<usize>>> = coloured.iter().map(|&v| distances_from(&cg.graph, v)).collect();
    let ok = |i: usize, j: usize| {
        cg.color_of(coloured[i]) != cg.color_of(coloured[j]) && dist[i][coloured[j]].is_none_or(|d| d > r)
    };
    Ok((0..coloured.len())
        .combinations(k)
        .find(|c| c.iter().tuple_combinations().all(|(&i, &j)| ok(i, j)))
        .map(|c| c.into_iter().map(|i| coloured[i]).collect()))
}

/// Checks that `set` has `k` distinct vertices, pairwise at distance > r.
pub fn verify_independent(g: &Graph, set: &[usize], k: usize, r: usize) -> Result<()> {
    for &v in set {
        g.check_vertex(v)?;
    }
    if set.iter().unique().count() != set.len() || set.len() != k {
        return Err(GraphError::PropertyViolation(format!(
            "expected {k} distinct vertices, got {set:?}"
        )));
    }
    for &u in set {
        let dist = distances_from(g, u);
        if let Some(&v) = set.iter().find(|&&v| v != u && dist[v].is_some_and(|d| d <= r)) {
            return Err(GraphError::PropertyViolation(format!(
                "vertices {u} and {v} are within distance {r}"
            )));
        }
    }
    Ok(())
}

/// As `verify_independent`, and every member is coloured with a colour no
/// other member has.
pub fn verify_rainbow(cg: &ColoredGraph, set: &[usize], k: usize, r: usize) -> Result<()> {
    verify_independent(&cg.graph, set, k, r)?;
    let colours: Vec<Option<usize>> = set.iter().map(|&v| cg.color_of(v)).collect();
    if colours.iter().any(Option::is_none) || colours.iter().unique().count() != colours.len() {
        return Err(GraphError::PropertyViolation(format!(
            "{set:?} is not rainbow (colours {colours:?})"
        )));
    }
    Ok(())
}

/// Greedy rainbow r-independent set inside `alive`, scanning the coloured
/// vertices accepted by `candidate` by (colour, id). Distances are taken in
/// `G[alive]`.
fn greedy_in(
    g: &Graph,
    alive: &[bool],
    colours: &[Option<usize>],
    r: usize,
    candidate: impl Fn(usize) -> bool,
    bfs: &mut Bfs,
) -> Vec<usize> {
    let order: Vec<(usize, usize)> = (0..g.vertex_count())
        .filter(|&v| alive[v] && candidate(v))
        .filter_map(|v| colours[v].map(|c| (c, v)))
        .sorted_unstable()
        .collect();
    let mut blocked = vec![false; g.vertex_count()];
    let mut used: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for (c, v) in order {
        if blocked[v] || used.contains(&c) {
            continue;
        }
        used.push(c);
        out.push(v);
        for &w in bfs.run(g, &[v], r, |w| alive[w]) {
            blocked[w] = true;
        }
    }
    out
}

/// Inclusion-maximal rainbow r-independent set, scanning coloured vertices
/// by (colour, id). Returned in scan order.
pub fn greedy_max_rainbow_independent(cg: &ColoredGraph, r: usize) -> Vec<usize> {
    let n = cg.graph.vertex_count();
    greedy_in(&cg.graph, &vec![true; n], cg.color_map(), r, |_| true, &mut Bfs::new(n))
}

/// Colour of a survivor after the splitter move: its old colour and its
/// distances to `m_1, ..., m_|M|`, with `None` standing for "more than r".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistanceVectorColor {
    pub base: usize,
    pub dvec: Vec<Option<usize>>,
}

impl DistanceVectorColor {
    /// Whether two vertices of these colours could lie within distance r of
    /// each other through some m_j, or share a base colour.
    fn conflicts(&self, other: &DistanceVectorColor, r: usize) -> bool {
        self.base == other.base
            || self
                .dvec
                .iter()
                .zip(&other.dvec)
                .any(|(a, b)| matches!((a, b), (Some(x), Some(y)) if x + y <= r))
    }
}

/// Recolours every coloured vertex outside `m` by its distance vector to `m`;
/// vertices of `m` become uncoloured. Colour `i` of the result is
/// `palette[i]`, and the palette is sorted.
pub fn recolor_with_distance_vectors(
    cg: &ColoredGraph,
    m: &[usize],
    r: usize,
) -> Result<(ColoredGraph, Vec<DistanceVectorColor>)> {
    if m.is_empty() {
        return Err(GraphError::InvalidArgument("the deleted set M is empty".into()));
    }
    for &v in m {
        cg.graph.check_vertex(v)?;
    }
    let n = cg.graph.vertex_count();
    let alive = vec![true; n];
    let (colours, palette) = recolor_in(&cg.graph, &alive, cg.color_map(), m, r, &mut Bfs::new(n));
    Ok((ColoredGraph::from_color_map(cg.graph.clone(), colours)?, palette))
}

fn recolor_in(
    g: &Graph,
    alive: &[bool],
    colours: &[Option<usize>],
    m: &[usize],
    r: usize,
    bfs: &mut Bfs,
) -> (Vec<Option<usize>>, Vec<DistanceVectorColor>) {
    let n = g.vertex_count();
    let mut dist = vec![vec![None; m.len()]; n];
    for (j, &mj) in m.iter().enumerate() {
        bfs.run(g, &[mj], r, |w| alive[w]);
        for &w in bfs.visited() {
            dist[w][j] = bfs.distance(w);
        }
    }
    let mut in_m = vec![false; n];
    for &v in m {
        in_m[v] = true;
    }
    let keys: Vec<Option<DistanceVectorColor>> = (0..n)
        .map(|v| match colours[v] {
            Some(base) if alive[v] && !in_m[v] => Some(DistanceVectorColor {
                base,
                dvec: std::mem::take(&mut dist[v]),
            }),
            _ => None,
        })
        .collect();
    let palette: Vec<DistanceVectorColor> = keys.iter().flatten().cloned().sorted().dedup().collect();
    let index: BTreeMap<&DistanceVectorColor, usize> = palette.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let recoloured = keys.iter().map(|k| k.as_ref().map(|c| index[c])).collect();
    (recoloured, palette)
}

/// One greedy peeling round: `I_i`, `X_i = N_r(I_i)`, `Y_i = N_r(X_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelRound {
    pub independent: Vec<usize>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeelOutcome {
    /// Some `I_i` already has k vertices; these are the first k.
    Found(Vec<usize>),
    /// `k_s = k_{s+1}`: the set `I_{s+1}` belongs to some optimal solution.
    Forced(Vec<usize>),
    /// `G_{s+1}` is empty.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peeling {
    pub rounds: Vec<PeelRound>,
    pub outcome: PeelOutcome,
}

fn peel_in(
    g: &Graph,
    alive: &[bool],
    colours: &[Option<usize>],
    k: usize,
    r: usize,
    bfs: &mut Bfs,
) -> Peeling {
    let mut remaining = alive.to_vec();
    let mut rounds = Vec::new();
    let mut previous = None;
    loop {
        let mut i = greedy_in(g, alive, colours, r, |v| remaining[v], bfs);
        if i.len() >= k {
            i.truncate(k);
            return Peeling { rounds, outcome: PeelOutcome::Found(i) };
        }
        if previous == Some(i.len()) {
            return Peeling { rounds, outcome: PeelOutcome::Forced(i) };
        }
        previous = Some(i.len());
        let x: Vec<usize> = bfs.run(g, &i, r, |w| alive[w]).iter().copied().sorted_unstable().collect();
        let y: Vec<usize> = bfs.run(g, &i, 2 * r, |w| alive[w]).iter().copied().sorted_unstable().collect();
        for &v in &y {
            remaining[v] = false;
        }
        rounds.push(PeelRound { independent: i, x, y });
        if !remaining.iter().any(|&b| b) {
            return Peeling { rounds, outcome: PeelOutcome::Exhausted };
        }
    }
}

/// The greedy peeling that opens every level of `rainbow_dis`.
pub fn peel(cg: &ColoredGraph, k: usize, r: usize) -> Peeling {
    let n = cg.graph.vertex_count();
    peel_in(&cg.graph, &vec![true; n], cg.color_map(), k, r, &mut Bfs::new(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisInstance {
    pub colored: ColoredGraph,
    pub k: usize,
    pub r: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisConfig {
    /// ℓ; defaults to the vertex count, enough since each move deletes the
    /// vertex played.
    pub rounds: Option<usize>,
    /// m; defaults to the vertex count.
    pub budget: Option<usize>,
    /// Instances with at most this many vertices are solved by exhaustion.
    pub brute_threshold: usize,
    /// Cap on colour partitions or sub-colourings tried at one node.
    pub branch_limit: usize,
}

impl Default for DisConfig {
    fn default() -> Self {
        DisConfig {
            rounds: None,
            budget: None,
            brute_threshold: DEFAULT_BRUTE_THRESHOLD,
            branch_limit: DEFAULT_BRANCH_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DisStats {
    pub calls: usize,
    pub brute_calls: usize,
    pub splitter_moves: usize,
    pub max_depth: usize,
}

struct Solver<'g> {
    g: &'g Graph,
    r: usize,
    cfg: DisConfig,
    bfs: Bfs,
    stats: DisStats,
}

impl<'g> Solver<'g> {
    fn mask(&self, vertices: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.g.vertex_count()];
        for &v in vertices {
            mask[v] = true;
        }
        mask
    }

    /// A largest rainbow r-independent set of `G[vertices]` with at most k
    /// vertices.
    fn solve(
        &mut self,
        vertices: &[usize],
        colours: &[Option<usize>],
        k: usize,
        game: &GameState<'g>,
        depth: usize,
    ) -> Result<Vec<usize>> {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if k == 0 || vertices.iter().all(|&v| colours[v].is_none()) {
            return Ok(Vec::new());
        }
        if vertices.len() <= self.cfg.brute_threshold {
            self.stats.brute_calls += 1;
            return Ok(self.brute_max(vertices, colours, k));
        }
        let alive = self.mask(vertices);
        let peeling = peel_in(self.g, &alive, colours, k, self.r, &mut self.bfs);
        let forced = match peeling.outcome {
            PeelOutcome::Found(set) => return Ok(set),
            PeelOutcome::Forced(set) => set,
            PeelOutcome::Exhausted => Vec::new(),
        };
        let k = k - forced.len();
        let mut colours = colours.to_vec();
        for &f in &forced {
            let c = colours[f];
            for v in vertices {
                if colours[*v] == c {
                    colours[*v] = None;
                }
            }
        }
        let live: Vec<usize> = vertices.iter().copied().filter(|&v| colours[v].is_some()).collect();
        if k == 0 || live.is_empty() {
            return Ok(forced);
        }
        // Paths of length <= r between live vertices stay inside N_r(live).
        let core: Vec<usize> = self.bfs.run(self.g, &live, self.r, |w| alive[w]).to_vec();
        let core_mask = self.mask(&core);
        let mut seen = vec![false; self.g.vertex_count()];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for &v in &live {
            if !seen[v] {
                let comp: Vec<usize> = self
                    .bfs
                    .run(self.g, &[v], usize::MAX, |w| core_mask[w])
                    .iter()
                    .copied()
                    .sorted_unstable()
                    .collect();
                for &w in &comp {
                    seen[w] = true;
                }
                components.push(comp);
            }
        }
        let mut rest = if components.len() > 1 {
            self.split(&components, &colours, k, game, depth)?
        } else {
            self.connected(&components[0], &colours, k, game, depth)?
        };
        rest.extend(forced);
        rest.sort_unstable();
        Ok(rest)
    }

    /// Tries every assignment of colours to components containing them.
    fn split(
        &mut self,
        components: &[Vec<usize>],
        colours: &[Option<usize>],
        k: usize,
        game: &GameState<'g>,
        depth: usize,
    ) -> Result<Vec<usize>> {
        let mut homes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, comp) in components.iter().enumerate() {
            for c in comp.iter().filter_map(|&v| colours[v]).unique() {
                homes.entry(c).or_default().push(i);
            }
        }
        let count = homes.values().try_fold(1usize, |acc, h| acc.checked_mul(h.len()));
        if count.is_none_or(|c| c > self.cfg.branch_limit) {
            return Err(GraphError::OracleGuard(format!(
                "more than {} colour partitions over {} components",
                self.cfg.branch_limit,
                components.len()
            )));
        }
        let palette: Vec<usize> = homes.keys().copied().collect();
        let mut memo: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
        let mut best: Vec<usize> = Vec::new();
        for choice in homes.values().map(|h| h.iter().copied()).multi_cartesian_product() {
            let mut total = Vec::new();
            for (i, comp) in components.iter().enumerate() {
                let own: Vec<usize> = palette
                    .iter()
                    .zip(&choice)
                    .filter(|&(_, &home)| home == i)
                    .map(|(&c, _)| c)
                    .collect();
                let key = (i, own);
                if !memo.contains_key(&key) {
                    let mut sub = colours.to_vec();
                    for &v in comp {
                        if sub[v].is_some_and(|c| key.1.binary_search(&c).is_err()) {
                            sub[v] = None;
                        }
                    }
                    let mut g = game.clone();
                    g.restrict(comp)?;
                    let found = self.solve(comp, &sub, k, &g, depth)?;
                    memo.insert(key.clone(), found);
                }
                total.extend_from_slice(&memo[&key]);
            }
            total.truncate(k);
            if total.len() > best.len() {
                best = total;
                if best.len() == k {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// One splitter move at a centre, then branching over `X ⊆ M` and valid
    /// sub-colourings of the recoloured rest.
    fn connected(
        &mut self,
        comp: &[usize],
        colours: &[Option<usize>],
        k: usize,
        game: &GameState<'g>,
        depth: usize,
    ) -> Result<Vec<usize>> {
        let alive = self.mask(comp);
        let mut centre = (usize::MAX, usize::MAX);
        for &v in comp {
            self.bfs.run(self.g, &[v], usize::MAX, |w| alive[w]);
            centre = centre.min((self.bfs.max_distance(), v));
        }
        let (radius, v) = centre;
        let limit = game.params().radius;
        if radius > limit {
            return Err(GraphError::RadiusExceeded { radius, limit });
        }
        let mut game = game.clone();
        game.restrict(comp)?;
        let m = game.play_round(v)?;
        self.stats.splitter_moves += 1;
        let rest: Vec<usize> = game.current().to_vec();
        let rest_mask = self.mask(&rest);

        let close: Vec<Vec<usize>> = m
            .iter()
            .map(|&x| self.bfs.run(self.g, &[x], self.r, |w| alive[w]).to_vec())
            .collect();
        let coloured_m: Vec<usize> = (0..m.len()).filter(|&i| colours[m[i]].is_some()).collect();
        let mut best: Vec<usize> = Vec::new();
        for size in (0..=k.min(coloured_m.len())).rev() {
            for pick in coloured_m.iter().copied().combinations(size) {
                let rainbow = pick.iter().map(|&i| colours[m[i]]).unique().count() == size;
                let independent = pick
                    .iter()
                    .tuple_combinations()
                    .all(|(&i, &j)| !close[i].contains(&m[j]));
                if !rainbow || !independent {
                    continue;
                }
                let x: Vec<usize> = pick.iter().map(|&i| m[i]).collect();
                let mut sub = colours.to_vec();
                for &i in &pick {
                    for &w in &close[i] {
                        sub[w] = None;
                    }
                    let c = colours[m[i]];
                    for &w in comp {
                        if sub[w] == c {
                            sub[w] = None;
                        }
                    }
                }
                let mut found = x.clone();
                if k > size {
                    found.extend(self.branch(comp, &alive, &rest, &rest_mask, &sub, &m, k - size, &game, depth)?);
                }
                if found.len() > best.len() {
                    best = found;
                    if best.len() == k {
                        return Ok(best);
                    }
                }
            }
        }
        Ok(best)
    }

    #[allow(clippy::too_many_arguments)]
    fn branch(
        &mut self,
        comp: &[usize],
        alive: &[bool],
        rest: &[usize],
        rest_mask: &[bool],
        colours: &[Option<usize>],
        m: &[usize],
        k: usize,
        game: &GameState<'g>,
        depth: usize,
    ) -> Result<Vec<usize>> {
        debug_assert!(comp.iter().all(|&v| alive[v]));
        let (recoloured, palette) = recolor_in(self.g, alive, colours, m, self.r, &mut self.bfs);
        let recoloured: Vec<Option<usize>> = recoloured
            .into_iter()
            .enumerate()
            .map(|(v, c)| c.filter(|_| rest_mask[v]))
            .collect();
        let present: Vec<usize> = recoloured.iter().flatten().copied().sorted_unstable().dedup().collect();
        let mut best = Vec::new();
        for keep in self.maximal_valid(&present, &palette)? {
            let sub: Vec<Option<usize>> = recoloured
                .iter()
                .map(|c| c.filter(|c| keep.binary_search(c).is_ok()))
                .collect();
            let found = self.solve(rest, &sub, k, game, depth + 1)?;
            if found.len() > best.len() {
                best = found;
                if best.len() == k {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Maximal sets of pairwise non-conflicting colours (Bron–Kerbosch on
    /// the compatibility graph), each ascending.
    fn maximal_valid(&self, present: &[usize], palette: &[DistanceVectorColor]) -> Result<Vec<Vec<usize>>> {
        let t = present.len();
        let compatible: Vec<Vec<bool>> = (0..t)
            .map(|i| {
                (0..t)
                    .map(|j| i != j && !palette[present[i]].conflicts(&palette[present[j]], self.r))
                    .collect()
            })
            .collect();
        fn expand(
            chosen: &mut Vec<usize>,
            p: Vec<usize>,
            x: Vec<usize>,
            adj: &[Vec<bool>],
            out: &mut Vec<Vec<usize>>,
            limit: usize,
        ) -> bool {
            if p.is_empty() && x.is_empty() {
                out.push(chosen.clone());
                return out.len() <= limit;
            }
            let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&w| adj[u][w]).count()).unwrap();
            let mut p = p;
            let mut x = x;
            for v in p.clone().into_iter().filter(|&v| !adj[pivot][v]) {
                chosen.push(v);
                let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
                let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
                if !expand(chosen, np, nx, adj, out, limit) {
                    return false;
                }
                chosen.pop();
                p.retain(|&w| w != v);
                x.push(v);
            }
            true
        }
        let mut out = Vec::new();
        if !expand(&mut Vec::new(), (0..t).collect(), Vec::new(), &compatible, &mut out, self.cfg.branch_limit) {
            return Err(GraphError::OracleGuard(format!(
                "more than {} valid sub-colourings",
                self.cfg.branch_limit
            )));
        }
        Ok(out
            .into_iter()
            .map(|s| s.into_iter().map(|i| present[i]).sorted_unstable().collect())
            .collect())
    }

    /// Largest rainbow set by depth-first search, lexicographically least
    /// among the largest.
    fn brute_max(&mut self, vertices: &[usize], colours: &[Option<usize>], k: usize) -> Vec<usize> {
        let alive = self.mask(vertices);
        let coloured: Vec<usize> = vertices.iter().copied().filter(|&v| colours[v].is_some()).collect();
        let close: Vec<Vec<bool>> = coloured
            .iter()
            .map(|&v| {
                self.bfs.run(self.g, &[v], self.r, |w| alive[w]);
                coloured.iter().map(|&w| self.bfs.reached(w)).collect()
            })
            .collect();
        fn dfs(
            from: usize,
            chosen: &mut Vec<usize>,
            best: &mut Vec<usize>,
            k: usize,
            coloured: &[usize],
            colours: &[Option<usize>],
            close: &[Vec<bool>],
        ) {
            if chosen.len() > best.len() {
                *best = chosen.clone();
            }
            if best.len() == k || chosen.len() + (coloured.len() - from) <= best.len() {
                return;
            }
            for i in from..coloured.len() {
                let fits = chosen
                    .iter()
                    .all(|&j| !close[j][i] && colours[coloured[j]] != colours[coloured[i]]);
                if fits {
                    chosen.push(i);
                    dfs(i + 1, chosen, best, k, coloured, colours, close);
                    chosen.pop();
                    if best.len() == k {
                        return;
                    }
                }
            }
        }
        let mut best = Vec::new();
        dfs(0, &mut Vec::new(), &mut best, k, &coloured, colours, &close);
        best.into_iter().map(|i| coloured[i]).collect()
    }
}

/// A rainbow r-independent set of size k, if one exists, with statistics.
pub fn rainbow_dis_traced(inst: &DisInstance, cfg: &DisConfig) -> Result<(Option<Vec<usize>>, DisStats)> {
    let g = &inst.colored.graph;
    let n = g.vertex_count();
    if inst.r == 0 {
        return Err(GraphError::InvalidArgument("the distance threshold r must be at least 1".into()));
    }
    let rho = 4 * inst.k.max(1) * inst.k.max(1) * inst.r;
    let params = GameParams::new(
        cfg.rounds.unwrap_or(n).max(1),
        cfg.budget.unwrap_or(n).max(1),
        rho,
    )?;
    let game = GameState::new(g, params);
    let mut solver = Solver {
        g,
        r: inst.r,
        cfg: *cfg,
        bfs: Bfs::new(n),
        stats: DisStats::default(),
    };
    let all: Vec<usize> = g.vertices().collect();
    let mut found = solver.solve(&all, inst.colored.color_map(), inst.k, &game, 0)?;
    found.sort_unstable();
    let answer = (found.len() == inst.k).then_some(found);
    Ok((answer, solver.stats))
}

pub fn rainbow_dis(inst: &DisInstance, cfg: &DisConfig) -> Result<Option<Vec<usize>>> {
    rainbow_dis_traced(inst, cfg).map(|(w, _)| w)
}

/// An r-independent k-subset of `w`, through the rainbow problem on
/// `G ⊛ K_k` with colours only on copies of `w`. The splitter budget `m` in
/// `cfg` refers to `G` and is scaled by k.
pub fn dis(g: &Graph, w: &[usize], k: usize, r: usize, cfg: &DisConfig) -> Result<Option<Vec<usize>>> {
    for &v in w {
        g.check_vertex(v)?;
    }
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    let w: Vec<usize> = w.iter().copied().sorted_unstable().dedup().collect();
    if w.len() < k {
        return Ok(None);
    }
    if r == 0 {
        return Ok(Some(w[..k].to_vec()));
    }
    let product = lex_product_colored(g, k)?;
    let mut candidate = vec![false; g.vertex_count()];
    for &v in &w {
        candidate[v] = true;
    }
    let colours: Vec<Option<usize>> = (0..product.graph.vertex_count())
        .map(|p| product.color_of(p).filter(|_| candidate[p / k]))
        .collect();
    let inst = DisInstance {
        colored: ColoredGraph::from_color_map(product.graph, colours)?,
        k,
        r,
    };
    let cfg = DisConfig {
        budget: cfg.budget.map(|m| m * k),
        ..*cfg
    };
    Ok(rainbow_dis(&inst, &cfg)?.map(|set| set.into_iter().map(|p| p / k).sorted_unstable().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, path, random_sparse, rng};
    use rand::Rng;

    fn coloured(g: Graph, colours: Vec<Option<usize>>) -> ColoredGraph {
        ColoredGraph::from_color_map(g, colours).unwrap()
    }

    fn recursive() -> DisConfig {
        DisConfig {
            brute_threshold: 0,
            ..DisConfig::default()
        }
    }

    #[test]
    fn brute_examples() {
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(brute_dis(&path(5), &all, 2, 2).unwrap(), Some(vec![0, 3]));
        assert_eq!(brute_dis(&complete(4), &[0, 1, 2, 3], 2, 1).unwrap(), None);
        assert_eq!(brute_dis(&path(5), &[4, 2], 1, 9).unwrap(), Some(vec![2]));
        assert!(brute_dis(&Graph::new(30), &(0..30).collect::<Vec<_>>(), 2, 1).is_err());
        assert!(brute_dis(&path(5), &[0, 1, 2, 3, 4], 5, 1).is_err());
    }

    #[test]
    fn greedy_examples() {
        let one = coloured(path(5), vec![Some(0); 5]);
        assert_eq!(greedy_max_rainbow_independent(&one, 1).len(), 1);
        let two = coloured(path(5), vec![Some(0), None, None, None, Some(1)]);
        assert_eq!(greedy_max_rainbow_independent(&two, 2), vec![0, 4]);
        assert!(greedy_max_rainbow_independent(&ColoredGraph::uncoloured(path(3)), 1).is_empty());
    }

    #[test]
    fn recolouring_examples() {
        // a=0, m=1, b=2, c=3 on the path a–m–b–c.
        let cg = coloured(path(4), vec![Some(0); 4]);
        let (out, palette) = recolor_with_distance_vectors(&cg, &[1], 2).unwrap();
        assert_eq!(out.color_of(1), None);
        assert_eq!(out.color_of(0), out.color_of(2));
        assert_ne!(out.color_of(2), out.color_of(3));
        assert_eq!(palette[out.color_of(0).unwrap()].dvec, vec![Some(1)]);
        assert_eq!(palette[out.color_of(3).unwrap()].dvec, vec![Some(2)]);
        let (out, palette) = recolor_with_distance_vectors(&coloured(path(6), vec![Some(3); 6]), &[0], 2).unwrap();
        assert_eq!(palette[out.color_of(5).unwrap()], DistanceVectorColor { base: 3, dvec: vec![None] });
        assert!(recolor_with_distance_vectors(&cg, &[], 2).is_err());
        assert!(palette.len() <= (2 + 1));
    }

    #[test]
    fn conflicts_follow_distance_sums() {
        let a = DistanceVectorColor { base: 0, dvec: vec![Some(1), None] };
        let b = DistanceVectorColor { base: 1, dvec: vec![Some(2), Some(1)] };
        let c = DistanceVectorColor { base: 2, dvec: vec![None, Some(1)] };
        assert!(a.conflicts(&b, 3));
        assert!(!a.conflicts(&b, 2));
        assert!(!a.conflicts(&c, 5));
        assert!(b.conflicts(&c, 2));
        let a2 = DistanceVectorColor { base: 0, dvec: vec![None, None] };
        assert!(a.conflicts(&a2, 1));
    }

    #[test]
    fn trivial_instances() {
        let inst = DisInstance { colored: ColoredGraph::uncoloured(path(3)), k: 0, r: 1 };
        assert_eq!(rainbow_dis(&inst, &DisConfig::default()).unwrap(), Some(vec![]));
        let g = Graph::new(5);
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(dis(&g, &all, 5, 7, &DisConfig::default()).unwrap(), Some(all.clone()));
        assert_eq!(dis(&g, &all, 5, 7, &recursive()).unwrap(), Some(all));
        assert_eq!(dis(&path(5), &[], 1, 1, &DisConfig::default()).unwrap(), None);
    }

    #[test]
    fn path_instances() {
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(dis(&path(5), &all, 2, 2, &DisConfig::default()).unwrap(), Some(vec![0, 3]));
        let w = dis(&path(5), &all, 2, 2, &recursive()).unwrap().unwrap();
        verify_independent(&path(5), &w, 2, 2).unwrap();
        assert_eq!(dis(&path(5), &all, 3, 2, &recursive()).unwrap(), None);

        let product = lex_product_colored(&path(5), 2).unwrap();
        let inst = DisInstance { colored: product, k: 2, r: 2 };
        let w = rainbow_dis(&inst, &recursive()).unwrap().unwrap();
        verify_rainbow(&inst.colored, &w, 2, 2).unwrap();
    }

    #[test]
    fn verifiers_reject_bad_witnesses() {
        let g = path(5);
        assert!(verify_independent(&g, &[0, 2], 2, 2).is_err());
        assert!(verify_independent(&g, &[0, 0], 2, 2).is_err());
        assert!(verify_independent(&g, &[0, 3], 2, 2).is_ok());
        let cg = coloured(g, vec![Some(0), None, None, Some(0), Some(1)]);
        assert!(verify_rainbow(&cg, &[0, 3], 2, 2).is_err());
        assert!(verify_rainbow(&cg, &[1, 4], 2, 1).is_err());
        assert!(verify_rainbow(&cg, &[0, 4], 2, 2).is_ok());
    }

    #[test]
    fn peeling_is_sound() {
        let mut rng = rng(17);
        for _ in 0..300 {
            let n = rng.gen_range(1..=14);
            let g = random_sparse(n, rng.gen_range(0..2 * n), &mut rng);
            let t = rng.gen_range(1..=4);
            let cg = coloured(g, (0..n).map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(0..t))).collect());
            let r = rng.gen_range(1..=3);
            let peeling = peel(&cg, 4, r);
            // Vertices of colours missing from I_i never reach G_{i+1}: they
            // were peeled earlier or lie in X_i.
            let mut remaining = vec![true; n];
            for round in &peeling.rounds {
                let present: Vec<Option<usize>> = round.independent.iter().map(|&v| cg.color_of(v)).collect();
                for v in cg.coloured_vertices() {
                    if remaining[v] && !present.contains(&cg.color_of(v)) {
                        assert!(round.x.contains(&v), "vertex {v} escaped the peeling");
                    }
                }
                for &y in &round.y {
                    remaining[y] = false;
                }
            }
            if let PeelOutcome::Forced(set) | PeelOutcome::Found(set) = &peeling.outcome {
                verify_rainbow(&cg, set, set.len(), r).unwrap();
            }
        }
    }

    #[test]
    fn rainbow_matches_brute_force() {
        let mut rng = rng(5);
        for _ in 0..300 {
            let n = rng.gen_range(1..=12);
            let g = random_sparse(n, rng.gen_range(0..2 * n), &mut rng);
            let t = rng.gen_range(1..=4);
            let cg = coloured(g, (0..n).map(|_| rng.gen_bool(0.8).then(|| rng.gen_range(0..t))).collect());
            let (k, r) = (rng.gen_range(0..=3), rng.gen_range(1..=3));
            let expected = brute_rainbow_dis(&cg, k, r).unwrap();
            let inst = DisInstance { colored: cg, k, r };
            let got = rainbow_dis(&inst, &recursive()).unwrap();
            assert_eq!(got.is_some(), expected.is_some(), "{inst:?}");
            if let Some(w) = got {
                verify_rainbow(&inst.colored, &w, k, r).unwrap();
            }
        }
    }

    #[test]
    fn plain_matches_brute_force() {
        let mut rng = rng(6);
        for _ in 0..100 {
            let n = rng.gen_range(1..=10);
            let g = random_sparse(n, rng.gen_range(0..2 * n), &mut rng);
            let w: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
            let (k, r) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let expected = brute_dis(&g, &w, k, r).unwrap();
            for cfg in [DisConfig::default(), recursive()] {
                let got = dis(&g, &w, k, r, &cfg).unwrap();
                assert_eq!(got.is_some(), expected.is_some());
                if let Some(set) = got {
                    verify_independent(&g, &set, k, r).unwrap();
                    assert!(set.iter().all(|v| w.contains(v)));
                }
            }
        }
    }

    #[test]
    fn tight_budgets_surface_errors() {
        let mut rng = rng(9);
        let mut exhausted = 0;
        for _ in 0..200 {
            let n = rng.gen_range(4..=12);
            let g = random_sparse(n, rng.gen_range(n..2 * n), &mut rng);
            let cg = coloured(g, (0..n).map(|_| Some(rng.gen_range(0..3))).collect());
            let inst = DisInstance { colored: cg, k: 3, r: 1 };
            let cfg = DisConfig { rounds: Some(1), ..recursive() };
            match rainbow_dis(&inst, &cfg) {
                Err(GraphError::RoundsExhausted { rounds: 1 }) => exhausted += 1,
                Ok(got) => assert_eq!(got.is_some(), brute_rainbow_dis(&inst.colored, 3, 1).unwrap().is_some()),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(exhausted > 0);
    }
}
