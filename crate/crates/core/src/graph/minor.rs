//! Exhaustive shallow-clique-minor test for tiny graphs. Only a test oracle.

use super::{Bfs, Graph, GraphError, Result};

pub const MINOR_ORACLE_MAX_VERTICES: usize = 12;
pub const MINOR_ORACLE_MAX_CLIQUE: usize = 4;

/// Decides `K_s ⪯_r G`: are there `s` pairwise disjoint connected branch
/// sets, each of radius at most `r` around some vertex of the set, with an
/// edge between every two of them?
pub fn has_shallow_clique_minor(g: &Graph, s: usize, r: usize) -> Result<bool> {
    let n = g.vertex_count();
    if n > MINOR_ORACLE_MAX_VERTICES || s > MINOR_ORACLE_MAX_CLIQUE {
        return Err(GraphError::OracleGuard(format!(
            "shallow minor oracle supports n <= {MINOR_ORACLE_MAX_VERTICES} and s <= {MINOR_ORACLE_MAX_CLIQUE} (got n = {n}, s = {s})"
        )));
    }
    if s == 0 {
        return Ok(true);
    }
    if s > n {
        return Ok(false);
    }

    let branch_sets: Vec<u32> = (1u32..(1 << n))
        .filter(|&mask| is_shallow_branch_set(g, mask, r))
        .collect();
    let mut neighbourhood = vec![0u32; branch_sets.len()];
    for (i, &mask) in branch_sets.iter().enumerate() {
        let mut nb = 0u32;
        for v in bits(mask) {
            for &w in g.neighbours(v) {
                nb |= 1 << w;
            }
        }
        neighbourhood[i] = nb & !mask;
    }

    // Branch sets are chosen with strictly increasing minimum vertex.
    fn extend(
        sets: &[u32],
        neighbourhood: &[u32],
        chosen: &mut Vec<usize>,
        used: u32,
        s: usize,
    ) -> bool {
        if chosen.len() == s {
            return true;
        }
        let min_floor = chosen
            .last()
            .map_or(0, |&i| sets[i].trailing_zeros() + 1);
        for (i, &mask) in sets.iter().enumerate() {
            if mask.trailing_zeros() < min_floor || mask & used != 0 {
                continue;
            }
            if chosen.iter().all(|&j| neighbourhood[j] & mask != 0) {
                chosen.push(i);
                if extend(sets, neighbourhood, chosen, used | mask, s) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::with_capacity(s);
    Ok(extend(&branch_sets, &neighbourhood, &mut chosen, 0, s))
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask & (1 << b) != 0)
}

fn is_shallow_branch_set(g: &Graph, mask: u32, r: usize) -> bool {
    let size = mask.count_ones() as usize;
    let mut bfs = Bfs::new(g.vertex_count());
    bits(mask).any(|c| {
        bfs.run(g, &[c], r, |w| mask & (1 << w) != 0);
        bfs.visited().len() == size
    })
}
