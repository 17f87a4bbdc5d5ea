//! The ℓ-round EF⁺_q game and Hintikka formulas.
//!
//! Duplicator wins a play if after every round `i` (including round 0) the
//! map `a_j ↦ b_j` is a partial `f_q(ℓ-i)`-isomorphism: it respects
//! equality, edges and every unary predicate, and distances agree or both
//! exceed the bound.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;

use super::eval::{within, Structure};
use super::{f_q, Formula};
use crate::graph::{distances_from, GraphError, Result};

pub const EF_MAX_VERTICES: usize = 8;

type Distances = Vec<Vec<Option<usize>>>;

fn all_pairs(s: &Structure) -> Distances {
    s.graph.vertices().map(|v| distances_from(&s.graph, v)).collect()
}

fn check_args(s: &Structure, tuple: &[usize], q: usize, l: usize) -> Result<()> {
    let n = s.vertex_count();
    if n > EF_MAX_VERTICES {
        return Err(GraphError::OracleGuard(format!(
            "EF games support n <= {EF_MAX_VERTICES} (got {n})"
        )));
    }
    if q == 0 || l > q {
        return Err(GraphError::InvalidArgument(format!(
            "need q >= 1 and 0 <= l <= q (got q = {q}, l = {l})"
        )));
    }
    for &v in tuple {
        s.graph.check_vertex(v)?;
    }
    Ok(())
}

fn agree(da: Option<usize>, db: Option<usize>, bound: &BigUint) -> bool {
    da == db || (!within(da, bound) && !within(db, bound))
}

#[allow(clippy::too_many_arguments)]
fn iso(
    a: &Structure,
    ta: &[usize],
    da: &Distances,
    b: &Structure,
    tb: &[usize],
    db: &Distances,
    vocabulary: &BTreeSet<&String>,
    bound: &BigUint,
) -> bool {
    for i in 0..ta.len() {
        if vocabulary.iter().any(|p| a.holds(p, ta[i]) != b.holds(p, tb[i])) {
            return false;
        }
        for j in i + 1..ta.len() {
            let (x, y) = (ta[i], ta[j]);
            let (u, v) = (tb[i], tb[j]);
            if (x == y) != (u == v)
                || a.graph.has_edge(x, y) != b.graph.has_edge(u, v)
                || !agree(da[x][y], db[u][v], bound)
            {
                return false;
            }
        }
    }
    true
}

/// Whether `ā ↦ b̄` is a partial d-isomorphism.
pub fn partial_iso(a: &Structure, ta: &[usize], b: &Structure, tb: &[usize], d: &BigUint) -> Result<bool> {
    if ta.len() != tb.len() {
        return Err(GraphError::InvalidArgument("tuples differ in length".into()));
    }
    for &v in ta {
        a.graph.check_vertex(v)?;
    }
    for &v in tb {
        b.graph.check_vertex(v)?;
    }
    let vocabulary: BTreeSet<&String> = a.unary.keys().chain(b.unary.keys()).collect();
    Ok(iso(a, ta, &all_pairs(a), b, tb, &all_pairs(b), &vocabulary, d))
}

/// Whether Duplicator wins the ℓ-round EF⁺_q game on `(A, ā, B, b̄)`, by
/// exhaustive search with memoisation on positions.
pub fn ef_plus_equivalent(
    a: &Structure,
    ta: &[usize],
    b: &Structure,
    tb: &[usize],
    q: usize,
    l: usize,
) -> Result<bool> {
    check_args(a, ta, q, l)?;
    check_args(b, tb, q, l)?;
    if ta.len() != tb.len() {
        return Err(GraphError::InvalidArgument("tuples differ in length".into()));
    }
    let vocabulary: BTreeSet<&String> = a.unary.keys().chain(b.unary.keys()).collect();
    let bounds: Vec<BigUint> = (0..=l).map(|i| f_q(q, i)).collect();
    let game = Game {
        a,
        b,
        da: all_pairs(a),
        db: all_pairs(b),
        vocabulary,
        bounds,
    };
    let mut memo = HashMap::new();
    Ok(game.wins(&mut ta.to_vec(), &mut tb.to_vec(), l, &mut memo))
}

struct Game<'s> {
    a: &'s Structure,
    b: &'s Structure,
    da: Distances,
    db: Distances,
    vocabulary: BTreeSet<&'s String>,
    /// `bounds[i] = f_q(i)`.
    bounds: Vec<BigUint>,
}

impl Game<'_> {
    fn wins(
        &self,
        ta: &mut Vec<usize>,
        tb: &mut Vec<usize>,
        left: usize,
        memo: &mut HashMap<(Vec<usize>, Vec<usize>), bool>,
    ) -> bool {
        if let Some(&w) = memo.get(&(ta.clone(), tb.clone())) {
            return w;
        }
        let mut result = iso(self.a, ta, &self.da, self.b, tb, &self.db, &self.vocabulary, &self.bounds[left]);
        if result && left > 0 {
            let (na, nb) = (self.a.vertex_count(), self.b.vertex_count());
            let mut answer = |x: usize, y: usize, ta: &mut Vec<usize>, tb: &mut Vec<usize>| {
                ta.push(x);
                tb.push(y);
                let w = self.wins(ta, tb, left - 1, memo);
                ta.pop();
                tb.pop();
                w
            };
            result = (0..na).all(|x| (0..nb).any(|y| answer(x, y, ta, tb)))
                && (0..nb).all(|y| (0..na).any(|x| answer(x, y, ta, tb)));
        }
        memo.insert((ta.clone(), tb.clone()), result);
        result
    }
}

fn var(i: usize) -> String {
    format!("x{}", i + 1)
}

/// The Hintikka formula `φ_ā^{q,ℓ}(x_1, ..., x_k)` over the predicates of
/// `A` (including empty ones). Free variables are `x1, ..., xk`.
pub fn hintikka(a: &Structure, ta: &[usize], q: usize, l: usize) -> Result<Formula> {
    check_args(a, ta, q, l)?;
    let h = Hintikka {
        a,
        da: all_pairs(a),
        q,
    };
    let mut memo = HashMap::new();
    Ok(h.build(&mut ta.to_vec(), l, &mut memo))
}

struct Hintikka<'s> {
    a: &'s Structure,
    da: Distances,
    q: usize,
}

impl Hintikka<'_> {
    /// `ϑ_ā^{q,ℓ}`: exact distances up to `f_q(ℓ)`, otherwise "farther".
    fn theta(&self, ta: &[usize], l: usize) -> Formula {
        let bound = f_q(self.q, l);
        let mut parts = Vec::new();
        for i in 0..ta.len() {
            for j in i + 1..ta.len() {
                let (x, y) = (var(i), var(j));
                let d = self.da[ta[i]][ta[j]];
                if within(d, &bound) {
                    let d = d.unwrap();
                    parts.push(Formula::dist_le(&x, &y, d));
                    if d > 0 {
                        parts.push(Formula::not(Formula::dist_le(&x, &y, d - 1)));
                    }
                } else {
                    parts.push(Formula::not(Formula::dist_le(&x, &y, bound.clone())));
                }
            }
        }
        Formula::and(parts)
    }

    /// The complete atomic type of the tuple as a conjunction of literals.
    fn atomic(&self, ta: &[usize]) -> Formula {
        let literal = |f: Formula, holds: bool| if holds { f } else { Formula::not(f) };
        let mut parts = Vec::new();
        for i in 0..ta.len() {
            for p in self.a.unary.keys() {
                parts.push(literal(Formula::pred(p, &var(i)), self.a.holds(p, ta[i])));
            }
            for j in i + 1..ta.len() {
                parts.push(literal(Formula::eq(&var(i), &var(j)), ta[i] == ta[j]));
                parts.push(literal(Formula::edge(&var(i), &var(j)), self.a.graph.has_edge(ta[i], ta[j])));
            }
        }
        Formula::and(parts)
    }

    fn build(&self, ta: &mut Vec<usize>, l: usize, memo: &mut HashMap<Vec<usize>, Formula>) -> Formula {
        if let Some(f) = memo.get(ta.as_slice()) {
            return f.clone();
        }
        let f = if l == 0 {
            Formula::and([self.theta(ta, 0), self.atomic(ta)])
        } else {
            let x = var(ta.len());
            let mut children = Vec::new();
            for v in self.a.graph.vertices() {
                ta.push(v);
                children.push(self.build(ta, l - 1, memo));
                ta.pop();
            }
            children.sort();
            children.dedup();
            let exists = children.iter().map(|c| Formula::exists(&x, c.clone()));
            let forall = Formula::forall(&x, Formula::or(children.iter().cloned()));
            Formula::and(std::iter::once(self.theta(ta, l)).chain(exists).chain([forall]))
        };
        memo.insert(ta.clone(), f.clone());
        f
    }
}
