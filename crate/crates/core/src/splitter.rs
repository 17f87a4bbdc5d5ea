//! The (ℓ, m, r)-splitter game.
//!
//! Splitter's strategy: answer the first move `v_1` with `{v_1}`; later
//! answer `v_{i+1}` with the vertices of the tree paths from `v_{i+1}` to
//! every earlier `v_j` (in the stored BFS tree `T_j`) that lie in the current
//! r-ball of `v_{i+1}`.
//!
//! Current graphs are vertex subsets of one underlying graph. A state can be
//! restricted to an induced subgraph of its current graph at any time, which
//! never helps Connector.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::graph::{lex_product_colored, Bfs, Graph, GraphError, Result};

pub const ADVERSARIAL_MAX_VERTICES: usize = 10;
pub const EXHAUSTIVE_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameParams {
    /// ℓ: rounds Connector must survive.
    pub rounds: usize,
    /// m: largest set Splitter may delete.
    pub budget: usize,
    /// r: radius of Connector's localisation.
    pub radius: usize,
}

impl GameParams {
    pub fn new(rounds: usize, budget: usize, radius: usize) -> Result<Self> {
        if rounds == 0 || budget == 0 || radius == 0 {
            return Err(GraphError::InvalidArgument(format!(
                "splitter game needs l, m, r >= 1 (got l = {rounds}, m = {budget}, r = {radius})"
            )));
        }
        Ok(GameParams { rounds, budget, radius })
    }
}

/// BFS tree of depth at most r, as a parent map over its non-root vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsTree {
    pub root: usize,
    pub parent: FxHashMap<usize, usize>,
}

impl BfsTree {
    /// Vertices from `v` up to the root, both included.
    pub fn path_to_root(&self, mut v: usize) -> Option<Vec<usize>> {
        let mut path = vec![v];
        while v != self.root {
            v = *self.parent.get(&v)?;
            path.push(v);
        }
        Some(path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub connector: usize,
    pub splitter: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct GameState<'g> {
    graph: &'g Graph,
    params: GameParams,
    current: Vec<usize>,
    member: Vec<bool>,
    history: Vec<Move>,
    trees: Vec<BfsTree>,
}

impl<'g> GameState<'g> {
    pub fn new(graph: &'g Graph, params: GameParams) -> Self {
        GameState {
            graph,
            params,
            current: graph.vertices().collect(),
            member: vec![true; graph.vertex_count()],
            history: Vec::new(),
            trees: Vec::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    /// Vertices of the current graph `G_i`, ascending.
    pub fn current(&self) -> &[usize] {
        &self.current
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.member.len() && self.member[v]
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn trees(&self) -> &[BfsTree] {
        &self.trees
    }

    pub fn rounds_played(&self) -> usize {
        self.history.len()
    }

    pub fn splitter_won(&self) -> bool {
        self.current.is_empty()
    }

    /// Continues in the induced subgraph on `subset ⊆ V(G_i)`.
    pub fn restrict(&mut self, subset: &[usize]) -> Result<()> {
        let mut keep = vec![false; self.member.len()];
        for &v in subset {
            if !self.contains(v) {
                return Err(GraphError::InvalidArgument(format!(
                    "vertex {v} is not in the current graph"
                )));
            }
            keep[v] = true;
        }
        self.current.retain(|&v| keep[v]);
        self.member = keep;
        Ok(())
    }

    fn check_move(&self, v: usize) -> Result<()> {
        if !self.contains(v) {
            return Err(GraphError::InvalidArgument(format!(
                "vertex {v} is not in the current graph"
            )));
        }
        if self.history.len() >= self.params.rounds {
            return Err(GraphError::RoundsExhausted {
                rounds: self.params.rounds,
            });
        }
        Ok(())
    }

    fn ball(&self, v: usize, bfs: &mut Bfs) {
        let member = &self.member;
        bfs.run(self.graph, &[v], self.params.radius, |w| member[w]);
    }

    /// Splitter's answer to Connector playing `v`.
    pub fn splitter_move(&self, v: usize) -> Result<Vec<usize>> {
        self.check_move(v)?;
        if self.history.is_empty() {
            return Ok(vec![v]);
        }
        let mut bfs = Bfs::new(self.graph.vertex_count());
        self.ball(v, &mut bfs);
        let mut w: Vec<usize> = Vec::new();
        for tree in &self.trees {
            let path = tree.path_to_root(v).ok_or_else(|| {
                GraphError::PropertyViolation(format!("vertex {v} missing from the tree of {}", tree.root))
            })?;
            w.extend(path.into_iter().filter(|&x| bfs.reached(x)));
        }
        w.sort_unstable();
        w.dedup();
        if w.len() > self.params.budget {
            return Err(GraphError::BudgetExceeded {
                size: w.len(),
                budget: self.params.budget,
            });
        }
        Ok(w)
    }

    /// Plays Connector's `v` and Splitter's `w`, which must lie in the
    /// current r-ball of `v` and have at most m vertices.
    pub fn apply(&mut self, v: usize, w: &[usize]) -> Result<()> {
        self.check_move(v)?;
        if w.len() > self.params.budget {
            return Err(GraphError::BudgetExceeded {
                size: w.len(),
                budget: self.params.budget,
            });
        }
        let mut bfs = Bfs::new(self.graph.vertex_count());
        self.ball(v, &mut bfs);
        if let Some(&bad) = w.iter().find(|&&x| !bfs.reached(x)) {
            return Err(GraphError::InvalidArgument(format!(
                "splitter vertex {bad} is outside the {}-ball of {v}",
                self.params.radius
            )));
        }
        let mut parent = FxHashMap::default();
        let mut next = vec![false; self.member.len()];
        for &x in bfs.visited() {
            if let Some(p) = bfs.parent(x) {
                parent.insert(x, p);
            }
            next[x] = true;
        }
        for &x in w {
            next[x] = false;
        }
        self.trees.push(BfsTree { root: v, parent });
        self.current = bfs.visited().iter().copied().filter(|&x| next[x]).sorted_unstable().collect();
        self.member = next;
        let mut splitter = w.to_vec();
        splitter.sort_unstable();
        splitter.dedup();
        self.history.push(Move { connector: v, splitter });
        Ok(())
    }

    /// Connector plays `v`, Splitter answers with the strategy.
    pub fn play_round(&mut self, v: usize) -> Result<Vec<usize>> {
        let w = self.splitter_move(v)?;
        self.apply(v, &w)?;
        Ok(w)
    }
}

pub trait Connector {
    fn choose(&mut self, state: &GameState<'_>) -> Result<usize>;
}

/// Uniformly random vertex of the current graph.
#[derive(Debug, Clone)]
pub struct RandomConnector {
    rng: ChaCha8Rng,
}

impl RandomConnector {
    pub fn new(seed: u64) -> Self {
        RandomConnector {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Connector for RandomConnector {
    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        let cur = state.current();
        if cur.is_empty() {
            return Err(GraphError::Empty);
        }
        Ok(cur[self.rng.gen_range(0..cur.len())])
    }
}

/// A centre (smallest id on ties) of the largest component of the current
/// graph; among equally large components the one with the smallest vertex.
#[derive(Debug, Clone, Copy, Default)]
pub struct CenterConnector;

impl Connector for CenterConnector {
    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        let g = state.graph();
        let mut bfs = Bfs::new(g.vertex_count());
        let mut seen = vec![false; g.vertex_count()];
        let mut best: Vec<usize> = Vec::new();
        for &s in state.current() {
            if seen[s] {
                continue;
            }
            let comp: Vec<usize> = bfs.run(g, &[s], usize::MAX, |w| state.contains(w)).to_vec();
            for &v in &comp {
                seen[v] = true;
            }
            if comp.len() > best.len() {
                best = comp;
            }
        }
        best.sort_unstable();
        let mut centre = None;
        for &v in &best {
            bfs.run(g, &[v], usize::MAX, |w| state.contains(w));
            let ecc = bfs.max_distance();
            if centre.is_none_or(|(e, _)| ecc < e) {
                centre = Some((ecc, v));
            }
        }
        centre.map(|(_, v)| v).ok_or(GraphError::Empty)
    }
}

/// Searches all Connector continuations against the strategy and plays a
/// move that delays Splitter's win longest (smallest id on ties). Only for
/// graphs with at most `ADVERSARIAL_MAX_VERTICES` vertices.
#[derive(Debug, Clone, Copy, Default)]
pub struct AdversarialConnector;

impl AdversarialConnector {
    /// Rounds until Splitter wins from `state`, or `ℓ + 1` if Connector can
    /// survive (or the strategy runs out of budget).
    fn value(state: &GameState<'_>) -> usize {
        if state.splitter_won() {
            return state.rounds_played();
        }
        if state.rounds_played() >= state.params().rounds {
            return state.params().rounds + 1;
        }
        state
            .current()
            .iter()
            .map(|&v| {
                let mut next = state.clone();
                match next.play_round(v) {
                    Ok(_) => Self::value(&next),
                    Err(_) => state.params().rounds + 1,
                }
            })
            .max()
            .unwrap_or(state.rounds_played())
    }
}

impl Connector for AdversarialConnector {
    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        let n = state.graph().vertex_count();
        if n > ADVERSARIAL_MAX_VERTICES {
            return Err(GraphError::OracleGuard(format!(
                "adversarial connector supports n <= {ADVERSARIAL_MAX_VERTICES} (got {n})"
            )));
        }
        let mut best: Option<(usize, usize)> = None;
        for &v in state.current() {
            let mut next = state.clone();
            let value = match next.play_round(v) {
                Ok(_) => Self::value(&next),
                Err(_) => state.params().rounds + 1,
            };
            if best.is_none_or(|(b, _)| value > b) {
                best = Some((value, v));
            }
        }
        best.map(|(_, v)| v).ok_or(GraphError::Empty)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Splitter,
    Connector,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Splitter => "splitter",
            Winner::Connector => "connector",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub params: GameParams,
    pub moves: Vec<Move>,
    /// Vertex sets of `G_1, G_2, ...`.
    pub graphs: Vec<Vec<usize>>,
    pub winner: Winner,
}

impl Transcript {
    pub fn rounds(&self) -> usize {
        self.moves.len()
    }

    /// One line per round, then the outcome.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, (mv, g)) in self.moves.iter().zip(&self.graphs).enumerate() {
            out.push_str(&format!(
                "round {}: connector={} splitter={{{}}} |G|={}\n",
                i + 1,
                mv.connector,
                mv.splitter.iter().join(","),
                g.len()
            ));
        }
        out.push_str(&format!("winner={} rounds={}\n", self.winner, self.rounds()));
        out
    }
}

/// Plays until Splitter empties the graph or ℓ rounds have passed.
pub fn play_game(g: &Graph, params: GameParams, connector: &mut dyn Connector) -> Result<Transcript> {
    let mut state = GameState::new(g, params);
    let mut graphs = Vec::new();
    while !state.splitter_won() && state.rounds_played() < params.rounds {
        let v = connector.choose(&state)?;
        state.play_round(v)?;
        graphs.push(state.current().to_vec());
    }
    Ok(Transcript {
        params,
        moves: state.history().to_vec(),
        graphs,
        winner: if state.splitter_won() { Winner::Splitter } else { Winner::Connector },
    })
}

/// Replays Connector's moves, recomputing Splitter's answers; fails if an
/// answer differs from the recorded one. Returns the vertex sets of `G_i`.
pub fn replay(g: &Graph, transcript: &Transcript) -> Result<Vec<Vec<usize>>> {
    let mut state = GameState::new(g, transcript.params);
    let mut graphs = Vec::new();
    for (i, mv) in transcript.moves.iter().enumerate() {
        let w = state.play_round(mv.connector)?;
        if w != mv.splitter {
            return Err(GraphError::PropertyViolation(format!(
                "round {}: splitter answered {w:?}, transcript has {:?}",
                i + 1,
                mv.splitter
            )));
        }
        graphs.push(state.current().to_vec());
    }
    Ok(graphs)
}

/// Plays on `G • K_k` with budget `k·m`, answering each move `(x, y)` with
/// all copies of the strategy's answer to `x` in a mirrored game on `G`.
pub fn play_lifted(g: &Graph, k: usize, params: GameParams, connector: &mut dyn Connector) -> Result<Transcript> {
    let product = lex_product_colored(g, k)?.graph;
    let lifted = GameParams {
        budget: params.budget * k,
        ..params
    };
    let mut base = GameState::new(g, params);
    let mut state = GameState::new(&product, lifted);
    let mut graphs = Vec::new();
    while !state.splitter_won() && state.rounds_played() < params.rounds {
        let p = connector.choose(&state)?;
        let x = p / k;
        let wb = base.splitter_move(x)?;
        let w: Vec<usize> = wb.iter().flat_map(|&u| (0..k).map(move |y| u * k + y)).collect();
        state.apply(p, &w)?;
        base.apply(x, &wb)?;
        let mirrored: Vec<usize> = base.current().iter().flat_map(|&u| (0..k).map(move |y| u * k + y)).collect();
        if mirrored != state.current() {
            return Err(GraphError::PropertyViolation(
                "lifted game diverged from the base game".into(),
            ));
        }
        graphs.push(state.current().to_vec());
    }
    Ok(Transcript {
        params: lifted,
        moves: state.history().to_vec(),
        graphs,
        winner: if state.splitter_won() { Winner::Splitter } else { Winner::Connector },
    })
}

/// Whether Splitter wins the game on `g` against every Connector, with
/// Splitter free to delete any set of at most m vertices of the ball.
/// Exhaustive over positions; deleting as many vertices as allowed is never
/// worse, so only maximum-size answers are tried.
pub fn splitter_wins_exhaustive(g: &Graph, params: GameParams) -> Result<bool> {
    let n = g.vertex_count();
    if n > EXHAUSTIVE_MAX_VERTICES {
        return Err(GraphError::OracleGuard(format!(
            "exhaustive splitter game supports n <= {EXHAUSTIVE_MAX_VERTICES} (got {n})"
        )));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbours(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let ball = |mask: u32, v: usize| {
        let mut seen = 1u32 << v;
        let mut frontier = seen;
        for _ in 0..params.radius {
            let mut next = 0u32;
            for x in (0..n).filter(|&x| frontier & (1 << x) != 0) {
                next |= adj[x];
            }
            frontier = next & mask & !seen;
            seen |= frontier;
            if frontier == 0 {
                break;
            }
        }
        seen
    };
    fn wins(
        mask: u32,
        left: usize,
        n: usize,
        budget: usize,
        ball: &dyn Fn(u32, usize) -> u32,
        memo: &mut FxHashMap<(u32, usize), bool>,
    ) -> bool {
        if mask == 0 {
            return true;
        }
        if left == 0 {
            return false;
        }
        if let Some(&w) = memo.get(&(mask, left)) {
            return w;
        }
        let result = (0..n).filter(|&v| mask & (1 << v) != 0).all(|v| {
            let b = ball(mask, v);
            let members: Vec<usize> = (0..n).filter(|&x| b & (1 << x) != 0).collect();
            let size = budget.min(members.len());
            members.iter().copied().combinations(size).any(|w| {
                let removed = w.iter().fold(0u32, |m, &x| m | (1 << x));
                wins(b & !removed, left - 1, n, budget, ball, memo)
            })
        });
        memo.insert((mask, left), result);
        result
    }
    let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut memo = FxHashMap::default();
    Ok(wins(full, params.rounds, n, params.budget, &ball, &mut memo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete, grid, path, random_outerplanar, random_tree, rng};

    fn params(l: usize, m: usize, r: usize) -> GameParams {
        GameParams::new(l, m, r).unwrap()
    }

    #[test]
    fn single_vertex_falls_in_one_round() {
        let g = Graph::new(1);
        let t = play_game(&g, params(1, 1, 3), &mut CenterConnector).unwrap();
        assert_eq!(t.winner, Winner::Splitter);
        assert_eq!(t.rounds(), 1);
        assert_eq!(t.moves[0].splitter, vec![0]);
    }

    #[test]
    fn second_move_on_a_path() {
        // Path 0–1–2–3–4, r = 2. Round 1: v = 2, W = {2}; G_1 = {0,1,3,4}.
        // Round 2: v = 1 is adjacent to 2 in G_0; its tree path to 2 is
        // 1, 2 and only 1 survives in G_1.
        let g = path(5);
        let mut state = GameState::new(&g, params(5, 5, 2));
        assert_eq!(state.play_round(2).unwrap(), vec![2]);
        assert_eq!(state.current(), &[0, 1, 3, 4]);
        assert_eq!(state.splitter_move(1).unwrap(), vec![1]);
        state.play_round(1).unwrap();
        assert_eq!(state.current(), &[0]);
        // Vertex 0 is isolated now; the game ends next round.
        assert_eq!(state.play_round(0).unwrap(), vec![0]);
        assert!(state.splitter_won());
    }

    #[test]
    fn tree_paths_are_collected() {
        // Grid 3x3, r = 2. After v_1 = 4 (centre), v_2 = 0 lies at distance
        // 2; its tree path to 4 is 0, 1, 4, and 4 is gone, so W_2 = {0, 1}.
        let g = grid(3, 3);
        let mut state = GameState::new(&g, params(5, 9, 2));
        state.play_round(4).unwrap();
        assert_eq!(state.splitter_move(0).unwrap(), vec![0, 1]);
        assert_eq!(state.trees()[0].path_to_root(0).unwrap(), vec![0, 1, 4]);
    }

    #[test]
    fn moves_are_validated() {
        let g = path(6);
        let mut state = GameState::new(&g, params(2, 1, 2));
        state.play_round(0).unwrap();
        assert_eq!(state.current(), &[1, 2]);
        assert!(state.splitter_move(0).is_err());
        assert!(state.apply(1, &[5]).is_err());
        assert!(matches!(
            state.apply(1, &[1, 2]),
            Err(GraphError::BudgetExceeded { size: 2, budget: 1 })
        ));
        state.apply(1, &[1]).unwrap();
        assert_eq!(state.current(), &[2]);
        assert!(state.splitter_move(2).is_err());
        assert!(GameParams::new(0, 1, 1).is_err());
    }

    #[test]
    fn shrinkage_and_restriction() {
        let g = grid(6, 6);
        let mut state = GameState::new(&g, params(10, 40, 2));
        let mut connector = RandomConnector::new(3);
        while !state.splitter_won() {
            let v = connector.choose(&state).unwrap();
            let before: Vec<usize> = state.current().to_vec();
            let mut bfs = Bfs::new(36);
            bfs.run(&g, &[v], 2, |w| before.contains(&w));
            let w = state.play_round(v).unwrap();
            assert!(w.contains(&v));
            let mut expected: Vec<usize> = bfs.visited().iter().copied().filter(|x| !w.contains(x)).collect();
            expected.sort_unstable();
            assert_eq!(state.current(), expected.as_slice());
        }
        let mut state = GameState::new(&g, params(3, 3, 1));
        state.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(state.current(), &[0, 1, 2]);
        assert!(state.restrict(&[5]).is_err());
    }

    #[test]
    fn exhaustive_on_k5() {
        let k5 = complete(5);
        assert!(!splitter_wins_exhaustive(&k5, params(2, 2, 1)).unwrap());
        assert!(splitter_wins_exhaustive(&k5, params(3, 2, 1)).unwrap());
        assert!(splitter_wins_exhaustive(&k5, params(4, 2, 1)).unwrap());
        assert!(splitter_wins_exhaustive(&Graph::new(13), params(1, 1, 1)).is_err());
    }

    #[test]
    fn connectors() {
        let g = path(5);
        let state = GameState::new(&g, params(3, 3, 1));
        assert_eq!(CenterConnector.choose(&state).unwrap(), 2);
        let p4 = path(4);
        assert_eq!(CenterConnector.choose(&GameState::new(&p4, params(3, 3, 1))).unwrap(), 1);

        let k4 = complete(4);
        let t = play_game(&k4, params(3, 1, 1), &mut AdversarialConnector).unwrap();
        assert_eq!(t.winner, Winner::Connector);
        assert!(!splitter_wins_exhaustive(&k4, params(3, 1, 1)).unwrap());
        assert!(AdversarialConnector.choose(&GameState::new(&path(11), params(1, 1, 1))).is_err());

        let g = grid(5, 5);
        let a = play_game(&g, params(20, 100, 2), &mut RandomConnector::new(7)).unwrap();
        let b = play_game(&g, params(20, 100, 2), &mut RandomConnector::new(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transcripts_replay() {
        let g = grid(8, 8);
        let t = play_game(&g, params(30, 200, 2), &mut RandomConnector::new(1)).unwrap();
        assert_eq!(replay(&g, &t).unwrap(), t.graphs);
        let mut forged = t.clone();
        forged.moves[1].splitter.push(63);
        assert!(replay(&g, &forged).is_err());
        assert!(t.render().ends_with(&format!("winner={} rounds={}\n", t.winner, t.rounds())));
    }

    #[test]
    fn strategy_beats_the_adversary_on_small_sparse_graphs() {
        let mut rng = rng(21);
        for _ in 0..10 {
            for g in [random_tree(8, &mut rng), random_outerplanar(8, &mut rng)] {
                let t = play_game(&g, params(8, 64, 1), &mut AdversarialConnector).unwrap();
                assert_eq!(t.winner, Winner::Splitter);
            }
        }
    }

    #[test]
    fn lifted_strategy_keeps_the_round_bound() {
        let mut rng = rng(4);
        for _ in 0..8 {
            let g = random_tree(7, &mut rng);
            let base = play_game(&g, params(7, 49, 1), &mut AdversarialConnector).unwrap();
            assert_eq!(base.winner, Winner::Splitter);
            let bound = base.rounds();
            let m = base.moves.iter().map(|mv| mv.splitter.len()).max().unwrap();
            for k in 2..=3 {
                for seed in 0..5 {
                    let t = play_lifted(&g, k, params(bound, m, 1), &mut RandomConnector::new(seed)).unwrap();
                    assert_eq!(t.winner, Winner::Splitter);
                    assert!(t.moves.iter().all(|mv| mv.splitter.len() <= k * m));
                }
                let t = play_lifted(&g, k, params(bound, m, 1), &mut CenterConnector).unwrap();
                assert_eq!(t.winner, Winner::Splitter);
            }
        }
    }
}
