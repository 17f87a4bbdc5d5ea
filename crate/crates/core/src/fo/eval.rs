use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::Formula;
use crate::graph::{distances_from, ColoredGraph, Graph, GraphError, Result};

/// A graph with named unary predicates; a predicate missing from the map is
/// empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub graph: Graph,
    /// Each extension is ascending.
    pub unary: BTreeMap<String, Vec<usize>>,
}

impl Structure {
    pub fn new(graph: Graph) -> Self {
        Structure {
            graph,
            unary: BTreeMap::new(),
        }
    }

    /// Colour class `i` becomes predicate `P<i>`.
    pub fn from_colored(cg: &ColoredGraph) -> Self {
        let unary = cg
            .classes()
            .into_iter()
            .enumerate()
            .map(|(i, class)| (format!("P{i}"), class))
            .collect();
        Structure {
            graph: cg.graph.clone(),
            unary,
        }
    }

    pub fn with_predicate(mut self, name: &str, mut members: Vec<usize>) -> Result<Self> {
        for &v in &members {
            self.graph.check_vertex(v)?;
        }
        members.sort_unstable();
        members.dedup();
        self.unary.insert(name.to_string(), members);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn holds(&self, name: &str, v: usize) -> bool {
        self.unary.get(name).is_some_and(|m| m.binary_search(&v).is_ok())
    }
}

pub type Assignment = BTreeMap<String, usize>;

/// Naive recursive evaluation; BFS distances are computed per source on
/// first use and cached.
pub struct Evaluator<'a> {
    structure: &'a Structure,
    dist: Vec<Option<Vec<Option<usize>>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(structure: &'a Structure) -> Self {
        Evaluator {
            structure,
            dist: vec![None; structure.vertex_count()],
        }
    }

    pub fn distance(&mut self, u: usize, v: usize) -> Option<usize> {
        let g = &self.structure.graph;
        self.dist[u].get_or_insert_with(|| distances_from(g, u))[v]
    }

    pub fn eval(&mut self, phi: &Formula, assignment: &Assignment) -> Result<bool> {
        let mut stack: Vec<(String, usize)> = assignment.iter().map(|(k, &v)| (k.clone(), v)).collect();
        for &(_, v) in &stack {
            self.structure.graph.check_vertex(v)?;
        }
        self.go(phi, &mut stack)
    }

    fn lookup(stack: &[(String, usize)], x: &str) -> Result<usize> {
        stack
            .iter()
            .rev()
            .find(|(name, _)| name == x)
            .map(|&(_, v)| v)
            .ok_or_else(|| GraphError::InvalidArgument(format!("variable `{x}` is unbound")))
    }

    fn go(&mut self, phi: &Formula, stack: &mut Vec<(String, usize)>) -> Result<bool> {
        Ok(match phi {
            Formula::Eq(x, y) => Self::lookup(stack, x)? == Self::lookup(stack, y)?,
            Formula::Edge(x, y) => self
                .structure
                .graph
                .has_edge(Self::lookup(stack, x)?, Self::lookup(stack, y)?),
            Formula::Pred(p, x) => self.structure.holds(p, Self::lookup(stack, x)?),
            Formula::DistLe(x, y, d) => {
                let (u, v) = (Self::lookup(stack, x)?, Self::lookup(stack, y)?);
                within(self.distance(u, v), d)
            }
            Formula::Not(f) => !self.go(f, stack)?,
            Formula::And(fs) => {
                for f in fs {
                    if !self.go(f, stack)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for f in fs {
                    if self.go(f, stack)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                let want = matches!(phi, Formula::Exists(..));
                for v in 0..self.structure.vertex_count() {
                    stack.push((x.clone(), v));
                    let value = self.go(f, stack);
                    stack.pop();
                    if value? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }
}

/// Whether a (possibly infinite) distance is at most `d`.
pub(crate) fn within(dist: Option<usize>, d: &BigUint) -> bool {
    dist.is_some_and(|x| d.to_usize().is_none_or(|d| x <= d))
}

/// `A ⊨ φ(assignment)`.
pub fn eval(phi: &Formula, structure: &Structure, assignment: &Assignment) -> Result<bool> {
    Evaluator::new(structure).eval(phi, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::parse_formula;
    use crate::graph::generate::{path, random_sparse, rng};
    use proptest::prelude::*;

    fn assign(pairs: &[(&str, usize)]) -> Assignment {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn dominating_pair_on_p3() {
        let phi = parse_formula("(forall y (or (= x1 y) (= x2 y) (E x1 y) (E x2 y)))").unwrap();
        let p3 = Structure::new(path(3));
        assert!(eval(&phi, &p3, &assign(&[("x1", 0), ("x2", 2)])).unwrap());
        let p5 = Structure::new(path(5));
        assert!(!eval(&phi, &p5, &assign(&[("x1", 0), ("x2", 4)])).unwrap());
        assert!(eval(&phi, &p5, &assign(&[("x1", 1), ("x2", 3)])).unwrap());
    }

    #[test]
    fn basic_semantics() {
        let p5 = Structure::new(path(5));
        let trivial = parse_formula("(exists x (= x x))").unwrap();
        assert!(eval(&trivial, &p5, &Assignment::new()).unwrap());
        assert!(!eval(&trivial, &Structure::new(Graph::new(0)), &Assignment::new()).unwrap());
        let d2 = parse_formula("(distle x y 2)").unwrap();
        assert!(!eval(&d2, &p5, &assign(&[("x", 0), ("y", 3)])).unwrap());
        assert!(eval(&d2, &p5, &assign(&[("x", 1), ("y", 3)])).unwrap());
        assert!(eval(&d2, &p5, &assign(&[("x", 1)])).is_err());
        let two = Structure::new(Graph::new(2));
        let far = parse_formula("(distle x y 99999999999999999999999)").unwrap();
        assert!(!eval(&far, &two, &assign(&[("x", 0), ("y", 1)])).unwrap());
        let coloured = Structure::new(path(3)).with_predicate("P1", vec![2]).unwrap();
        let red = parse_formula("(exists x (and (P1 x) (E x y)))").unwrap();
        assert!(eval(&red, &coloured, &assign(&[("y", 1)])).unwrap());
        assert!(!eval(&red, &coloured, &assign(&[("y", 0)])).unwrap());
        // Shadowing: the inner x is the quantified one.
        let shadow = parse_formula("(exists x (E x y))").unwrap();
        assert!(eval(&shadow, &Structure::new(path(2)), &assign(&[("x", 1), ("y", 1)])).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn distance_atoms_match_their_fo_translation(n in 1usize..6, m in 0usize..8, seed in any::<u64>(), d in 0usize..6) {
            let s = Structure::new(random_sparse(n, m, &mut rng(seed)));
            let atom = Formula::dist_le("x", "y", d);
            let quantified = Formula::forall("x", Formula::exists("y", Formula::and([
                Formula::not(Formula::eq("x", "y")),
                Formula::dist_le("x", "y", d),
            ])));
            let atom_fo = atom.to_fo(64).unwrap();
            let quantified_fo = quantified.to_fo(64).unwrap();
            prop_assert!(atom_fo.all_vars().len() >= 2);
            prop_assert_eq!(
                eval(&quantified, &s, &Assignment::new()).unwrap(),
                eval(&quantified_fo, &s, &Assignment::new()).unwrap()
            );
            let mut ev = Evaluator::new(&s);
            for u in 0..n {
                for v in 0..n {
                    let a = assign(&[("x", u), ("y", v)]);
                    prop_assert_eq!(ev.eval(&atom, &a).unwrap(), eval(&atom_fo, &s, &a).unwrap());
                }
            }
        }
    }
}
