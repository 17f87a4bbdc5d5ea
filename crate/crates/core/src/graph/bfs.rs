use std::collections::VecDeque;

use super::Graph;

pub const UNREACHED: usize = usize::MAX;

/// Reusable breadth-first search state.
///
/// Distances are invalidated between runs by a generation stamp, so repeated
/// bounded searches cost time proportional to what they visit rather than to
/// the vertex count.
#[derive(Debug, Clone)]
pub struct Bfs {
    dist: Vec<usize>,
    parent: Vec<usize>,
    stamp: Vec<u32>,
    generation: u32,
    visited: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs {
            dist: vec![UNREACHED; n],
            parent: vec![UNREACHED; n],
            stamp: vec![0; n],
            generation: 0,
            visited: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self, n: usize) {
        if self.dist.len() < n {
            self.dist.resize(n, UNREACHED);
            self.parent.resize(n, UNREACHED);
            self.stamp.resize(n, 0);
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.visited.clear();
        self.queue.clear();
    }

    /// Multi-source BFS up to depth `radius`, only entering vertices for which
    /// `allowed` holds (sources are always entered). Neighbours are scanned in
    /// ascending order, so parent pointers are deterministic.
    pub fn run<F>(&mut self, g: &Graph, sources: &[usize], radius: usize, allowed: F) -> &[usize]
    where
        F: Fn(usize) -> bool,
    {
        self.reset(g.vertex_count());
        for &s in sources {
            if self.stamp[s] != self.generation {
                self.stamp[s] = self.generation;
                self.dist[s] = 0;
                self.parent[s] = UNREACHED;
                self.visited.push(s);
                self.queue.push_back(s);
            }
        }
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du >= radius {
                continue;
            }
            for &w in g.neighbours(u) {
                if self.stamp[w] != self.generation && allowed(w) {
                    self.stamp[w] = self.generation;
                    self.dist[w] = du + 1;
                    self.parent[w] = u;
                    self.visited.push(w);
                    self.queue.push_back(w);
                }
            }
        }
        &self.visited
    }

    /// Vertices reached by the last run, in BFS order.
    pub fn visited(&self) -> &[usize] {
        &self.visited
    }

    pub fn distance(&self, v: usize) -> Option<usize> {
        (v < self.stamp.len() && self.stamp[v] == self.generation).then(|| self.dist[v])
    }

    pub fn reached(&self, v: usize) -> bool {
        v < self.stamp.len() && self.stamp[v] == self.generation
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.distance(v)
            .and_then(|_| (self.parent[v] != UNREACHED).then(|| self.parent[v]))
    }

    pub fn max_distance(&self) -> usize {
        self.visited.iter().map(|&v| self.dist[v]).max().unwrap_or(0)
    }
}
