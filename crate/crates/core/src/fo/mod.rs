//! First-order logic with distance atoms (FO⁺).
//!
//! Formulas are built through `Formula::and` / `Formula::or`, which flatten,
//! sort and deduplicate their operands, so structurally equal formulas have
//! one representation and printing then parsing is the identity.

mod eval;
mod game;
mod parse;
mod reduce;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::graph::{GraphError, Result};

pub use eval::{eval, Assignment, Evaluator, Structure};
pub use game::{ef_plus_equivalent, hintikka, partial_iso, EF_MAX_VERTICES};
pub use parse::parse_formula;
pub use reduce::{eval_independence_sentence, remove_and_mark, IndependenceSentence, Marked};

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Eq(Var, Var),
    Edge(Var, Var),
    Pred(String, Var),
    /// `dist(x, y) <= d`.
    DistLe(Var, Var, BigUint),
    Not(Box<Formula>),
    /// Empty conjunction is true.
    And(Vec<Formula>),
    /// Empty disjunction is false.
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn truth() -> Self {
        Formula::And(Vec::new())
    }

    pub fn falsity() -> Self {
        Formula::Or(Vec::new())
    }

    pub fn eq(x: &str, y: &str) -> Self {
        Formula::Eq(x.into(), y.into())
    }

    pub fn edge(x: &str, y: &str) -> Self {
        Formula::Edge(x.into(), y.into())
    }

    pub fn pred(name: &str, x: &str) -> Self {
        Formula::Pred(name.into(), x.into())
    }

    pub fn dist_le(x: &str, y: &str, d: impl Into<BigUint>) -> Self {
        Formula::DistLe(x.into(), y.into(), d.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn exists(x: &str, f: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(f))
    }

    pub fn and(items: impl IntoIterator<Item = Formula>) -> Self {
        Self::connective(items, true)
    }

    pub fn or(items: impl IntoIterator<Item = Formula>) -> Self {
        Self::connective(items, false)
    }

    fn connective(items: impl IntoIterator<Item = Formula>, conj: bool) -> Self {
        let mut flat = Vec::new();
        for f in items {
            match (f, conj) {
                (Formula::And(inner), true) | (Formula::Or(inner), false) => flat.extend(inner),
                (f, _) => flat.push(f),
            }
        }
        flat.sort();
        flat.dedup();
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        if conj {
            Formula::And(flat)
        } else {
            Formula::Or(flat)
        }
    }

    /// Quantifier rank; distance atoms count 0.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Edge(..) | Formula::Pred(..) | Formula::DistLe(..) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_rank).max().unwrap_or(0),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_rank() == 0
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut add = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Eq(x, y) | Formula::Edge(x, y) | Formula::DistLe(x, y, _) => {
                add(x, bound);
                add(y, bound);
            }
            Formula::Pred(_, x) => add(x, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Eq(x, y) | Formula::Edge(x, y) | Formula::DistLe(x, y, _) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::Pred(_, x) | Formula::Exists(x, _) | Formula::Forall(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            _ => {}
        }
    }

    /// Unary predicate names used.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Pred(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Renames free occurrences of `from` to `to` in a quantifier-free
    /// formula.
    pub fn rename_free(&self, from: &str, to: &str) -> Result<Formula> {
        if !self.is_quantifier_free() {
            return Err(GraphError::InvalidArgument(
                "renaming is only supported for quantifier-free formulas".into(),
            ));
        }
        let r = |v: &Var| if v == from { to.to_string() } else { v.clone() };
        Ok(match self {
            Formula::Eq(x, y) => Formula::Eq(r(x), r(y)),
            Formula::Edge(x, y) => Formula::Edge(r(x), r(y)),
            Formula::DistLe(x, y, d) => Formula::DistLe(r(x), r(y), d.clone()),
            Formula::Pred(p, x) => Formula::Pred(p.clone(), r(x)),
            Formula::Not(f) => Formula::not(f.rename_free(from, to)?),
            Formula::And(fs) => Formula::and(fs.iter().map(|f| f.rename_free(from, to)).collect::<Result<Vec<_>>>()?),
            Formula::Or(fs) => Formula::or(fs.iter().map(|f| f.rename_free(from, to)).collect::<Result<Vec<_>>>()?),
            Formula::Exists(..) | Formula::Forall(..) => unreachable!(),
        })
    }

    /// Replaces every distance atom by a plain first-order formula
    /// `δ_{≤d}(x, y)` built by halving the distance. Atoms with
    /// `d > max_distance` are rejected.
    pub fn to_fo(&self, max_distance: usize) -> Result<Formula> {
        let mut used = self.all_vars();
        self.to_fo_inner(max_distance, &mut used)
    }

    fn to_fo_inner(&self, max_distance: usize, used: &mut BTreeSet<Var>) -> Result<Formula> {
        Ok(match self {
            Formula::DistLe(x, y, d) => {
                let d = d.to_usize().filter(|&d| d <= max_distance).ok_or_else(|| {
                    GraphError::InvalidArgument(format!("distance atom bound {d} exceeds {max_distance}"))
                })?;
                delta(x, y, d, used)
            }
            Formula::Not(f) => Formula::not(f.to_fo_inner(max_distance, used)?),
            Formula::And(fs) => Formula::and(
                fs.iter()
                    .map(|f| f.to_fo_inner(max_distance, used))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Formula::Or(fs) => Formula::or(
                fs.iter()
                    .map(|f| f.to_fo_inner(max_distance, used))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Formula::Exists(x, f) => Formula::exists(x, f.to_fo_inner(max_distance, used)?),
            Formula::Forall(x, f) => Formula::forall(x, f.to_fo_inner(max_distance, used)?),
            atom => atom.clone(),
        })
    }
}

fn fresh(used: &mut BTreeSet<Var>) -> Var {
    let name = (0..).map(|i| format!("z_{i}")).find(|n| !used.contains(n)).unwrap();
    used.insert(name.clone());
    name
}

/// `δ_{≤d}(x, y)`.
fn delta(x: &str, y: &str, d: usize, used: &mut BTreeSet<Var>) -> Formula {
    match d {
        0 => Formula::eq(x, y),
        1 => Formula::or([Formula::eq(x, y), Formula::edge(x, y)]),
        _ => {
            let z = fresh(used);
            let left = delta(x, &z, d.div_ceil(2), used);
            let right = delta(&z, y, d / 2, used);
            Formula::exists(&z, Formula::and([left, right]))
        }
    }
}

/// `f_q(ℓ) = (4q)^{q+ℓ}`.
pub fn f_q(q: usize, l: usize) -> BigUint {
    BigUint::from(4 * q).pow((q + l) as u32)
}

/// Whether `φ` has q-rank at most ℓ: quantifier rank at most ℓ, and every
/// distance atom under `i` quantifiers has bound at most `f_q(ℓ - i)`.
pub fn q_rank_check(phi: &Formula, q: usize, l: usize) -> bool {
    fn walk(f: &Formula, q: usize, l: usize, depth: usize) -> bool {
        match f {
            Formula::DistLe(_, _, d) => depth <= l && *d <= f_q(q, l - depth),
            Formula::Not(g) => walk(g, q, l, depth),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().all(|g| walk(g, q, l, depth)),
            Formula::Exists(_, g) | Formula::Forall(_, g) => walk(g, q, l, depth + 1),
            _ => true,
        }
    }
    phi.quantifier_rank() <= l && walk(phi, q, l, 0)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(x, y) => write!(f, "(= {x} {y})"),
            Formula::Edge(x, y) => write!(f, "(E {x} {y})"),
            Formula::Pred(p, x) => write!(f, "({p} {x})"),
            Formula::DistLe(x, y, d) => write!(f, "(distle {x} {y} {d})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) if gs.is_empty() => write!(f, "true"),
            Formula::Or(gs) if gs.is_empty() => write!(f, "false"),
            Formula::And(gs) | Formula::Or(gs) => {
                write!(f, "({}", if matches!(self, Formula::And(_)) { "and" } else { "or" })?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            Formula::Exists(x, g) => write!(f, "(exists {x} {g})"),
            Formula::Forall(x, g) => write!(f, "(forall {x} {g})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_q_values() {
        assert_eq!(f_q(3, 6), BigUint::from(12u32).pow(9));
        assert_eq!(f_q(1, 0), BigUint::from(4u32));
        for q in 1..5 {
            for l in 0..6 {
                assert_eq!(f_q(q, l + 1), f_q(q, l) * BigUint::from(4 * q));
            }
        }
        // Far beyond u64.
        assert!(f_q(10, 10).bits() > 64);
    }

    fn twelve(e: u32) -> BigUint {
        BigUint::from(12u32).pow(e)
    }

    #[test]
    fn q_rank_of_the_displayed_sentence() {
        let inner = Formula::forall(
            "z'",
            Formula::or([
                Formula::not(Formula::dist_le("z", "z'", twelve(4))),
                Formula::dist_le("z'", "y", twelve(4)),
            ]),
        );
        let phi = Formula::exists(
            "x",
            Formula::exists(
                "y",
                Formula::and([
                    Formula::dist_le("x", "y", twelve(5)),
                    Formula::exists("z", Formula::and([Formula::dist_le("x", "z", twelve(6)), inner])),
                ]),
            ),
        );
        assert_eq!(phi.quantifier_rank(), 4);
        assert!(q_rank_check(&phi, 3, 6));
        assert!(!q_rank_check(&phi, 3, 5));
        assert!(phi.free_vars().is_empty());
    }

    #[test]
    fn q_rank_boundaries() {
        let at = Formula::dist_le("x", "y", f_q(2, 1));
        assert!(q_rank_check(&at, 2, 1));
        let over = Formula::dist_le("x", "y", f_q(2, 1) + 1u32);
        assert!(!q_rank_check(&over, 2, 1));
        let plain = Formula::exists("x", Formula::exists("y", Formula::edge("x", "y")));
        assert!(q_rank_check(&plain, 1, 2));
        assert!(!q_rank_check(&plain, 1, 1));
    }

    #[test]
    fn connectives_are_canonical() {
        let a = Formula::edge("x", "y");
        let b = Formula::eq("x", "y");
        let c = Formula::pred("P0", "x");
        let left = Formula::and([a.clone(), Formula::and([c.clone(), b.clone()]), a.clone()]);
        let right = Formula::and([b.clone(), c.clone(), a.clone()]);
        assert_eq!(left, right);
        assert_eq!(Formula::or([a.clone()]), a);
        assert_eq!(Formula::and([]), Formula::truth());
    }

    #[test]
    fn free_variables() {
        let phi = Formula::forall(
            "y",
            Formula::or([Formula::eq("x1", "y"), Formula::eq("x2", "y"), Formula::edge("x1", "y")]),
        );
        assert_eq!(phi.free_vars().into_iter().collect::<Vec<_>>(), vec!["x1", "x2"]);
        assert_eq!(phi.quantifier_rank(), 1);
    }
}
