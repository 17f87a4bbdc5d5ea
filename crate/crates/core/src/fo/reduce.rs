use itertools::Itertools;

use super::eval::{within, Evaluator, Structure};
use super::{f_q, Formula};
use crate::graph::{distances_from, GraphError, Result};
use crate::indepset::{dis, DisConfig};

/// `∃x_1 … ∃x_q (⋀_{i<j} dist(x_i, x_j) > 2r ∧ ⋀_i φ(x_i))` with `φ`
/// quantifier-free in the single free variable `var`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceSentence {
    pub q: usize,
    pub r: usize,
    pub var: String,
    pub body: Formula,
}

impl IndependenceSentence {
    pub fn new(q: usize, r: usize, var: &str, body: Formula) -> Result<Self> {
        if !body.is_quantifier_free() {
            return Err(GraphError::InvalidArgument("the body must be quantifier-free".into()));
        }
        if body.free_vars().iter().any(|v| v != var) {
            return Err(GraphError::InvalidArgument(format!(
                "the body may only mention the variable `{var}`"
            )));
        }
        Ok(IndependenceSentence {
            q,
            r,
            var: var.to_string(),
            body,
        })
    }

    /// The sentence itself, for direct evaluation.
    pub fn to_formula(&self) -> Result<Formula> {
        let taken = self.body.all_vars();
        let vars: Vec<String> = (1..)
            .map(|i| format!("u{i}"))
            .filter(|v| !taken.contains(v))
            .take(self.q)
            .collect();
        let mut parts = Vec::new();
        for (a, b) in vars.iter().tuple_combinations() {
            parts.push(Formula::not(Formula::dist_le(a, b, 2 * self.r)));
        }
        for v in &vars {
            parts.push(self.body.rename_free(&self.var, v)?);
        }
        Ok(vars.iter().rev().fold(Formula::and(parts), |f, v| Formula::exists(v, f)))
    }
}

/// Evaluates the sentence by collecting `U = {v : φ(v)}` and asking the DIS
/// solver for q elements of `U` pairwise farther apart than 2r.
pub fn eval_independence_sentence(s: &Structure, psi: &IndependenceSentence, cfg: &DisConfig) -> Result<bool> {
    let mut ev = Evaluator::new(s);
    let mut u = Vec::new();
    for v in s.graph.vertices() {
        let assignment = [(psi.var.clone(), v)].into_iter().collect();
        if ev.eval(&psi.body, &assignment)? {
            u.push(v);
        }
    }
    Ok(dis(&s.graph, &u, psi.q, 2 * psi.r, cfg)?.is_some())
}

/// `G ∖ {w_1, …, w_m}` with marks `Q<i>_<j>` on the survivors at distance
/// exactly `i` from `w_j` in `G`, for `1 <= i <= f_q(ℓ)`. Only nonempty
/// marks are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marked {
    pub structure: Structure,
    /// `original[v]` is the id of survivor `v` in `G`.
    pub original: Vec<usize>,
}

pub fn remove_and_mark(s: &Structure, w: &[usize], q: usize, l: usize) -> Result<Marked> {
    let n = s.vertex_count();
    let mut removed = vec![false; n];
    for &v in w {
        s.graph.check_vertex(v)?;
        if std::mem::replace(&mut removed[v], true) {
            return Err(GraphError::InvalidArgument(format!("vertex {v} is removed twice")));
        }
    }
    let survivors: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    let (graph, original) = s.graph.induced_subgraph(&survivors);
    let mut index = vec![usize::MAX; n];
    for (i, &v) in original.iter().enumerate() {
        index[v] = i;
    }
    let mut structure = Structure::new(graph);
    for (name, members) in &s.unary {
        let kept = members.iter().filter(|&&v| !removed[v]).map(|&v| index[v]).collect();
        structure.unary.insert(name.clone(), kept);
    }
    let bound = f_q(q, l);
    for (j, &wj) in w.iter().enumerate() {
        let dist = distances_from(&s.graph, wj);
        for (i, group) in &original
            .iter()
            .filter(|&&v| within(dist[v], &bound))
            .map(|&v| (dist[v].unwrap(), index[v]))
            .sorted_unstable()
            .chunk_by(|&(d, _)| d)
        {
            let name = format!("Q{i}_{}", j + 1);
            structure.unary.insert(name, group.map(|(_, v)| v).collect());
        }
    }
    Ok(Marked { structure, original })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::eval::eval;
    use crate::fo::parse_formula;
    use crate::graph::generate::{complete, path, random_sparse, rng};
    use crate::graph::Graph;
    use rand::Rng;

    #[test]
    fn independence_examples() {
        let p5 = Structure::new(path(5)).with_predicate("P0", vec![0, 4]).unwrap();
        let red = IndependenceSentence::new(2, 1, "x", Formula::pred("P0", "x")).unwrap();
        let cfg = DisConfig::default();
        assert!(eval_independence_sentence(&p5, &red, &cfg).unwrap());
        let far = IndependenceSentence { r: 2, ..red.clone() };
        assert!(!eval_independence_sentence(&p5, &far, &cfg).unwrap());

        let k4 = Structure::new(complete(4));
        for r in 1..4 {
            let any = IndependenceSentence::new(2, r, "x", Formula::truth()).unwrap();
            assert!(!eval_independence_sentence(&k4, &any, &cfg).unwrap());
        }
        let one = IndependenceSentence::new(1, 3, "x", Formula::pred("P9", "x")).unwrap();
        assert!(!eval_independence_sentence(&p5, &one, &cfg).unwrap());
        let one = IndependenceSentence::new(1, 3, "x", Formula::pred("P0", "x")).unwrap();
        assert!(eval_independence_sentence(&p5, &one, &cfg).unwrap());

        assert!(IndependenceSentence::new(2, 1, "x", parse_formula("(exists y (E x y))").unwrap()).is_err());
        assert!(IndependenceSentence::new(2, 1, "x", Formula::edge("x", "y")).is_err());
    }

    #[test]
    fn solver_matches_direct_evaluation() {
        let mut rng = rng(12);
        let bodies = [
            "(P0 x)",
            "(not (P0 x))",
            "(or (P0 x) (P1 x))",
            "(and (not (P1 x)) (distle x x 0))",
            "true",
        ];
        for _ in 0..60 {
            let n = rng.gen_range(1..=8);
            let g = random_sparse(n, rng.gen_range(0..2 * n), &mut rng);
            let p0: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let p1: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let s = Structure::new(g).with_predicate("P0", p0).unwrap().with_predicate("P1", p1).unwrap();
            for body in bodies {
                let q = rng.gen_range(1..=3);
                let r = rng.gen_range(0..=2);
                let psi = IndependenceSentence::new(q, r, "x", parse_formula(body).unwrap()).unwrap();
                let direct = eval(&psi.to_formula().unwrap(), &s, &Default::default()).unwrap();
                assert_eq!(eval_independence_sentence(&s, &psi, &DisConfig::default()).unwrap(), direct);
            }
        }
    }

    #[test]
    fn marks_on_p3() {
        let s = Structure::new(path(3));
        let m = remove_and_mark(&s, &[1], 1, 0).unwrap();
        assert_eq!(m.structure.graph.vertex_count(), 2);
        assert_eq!(m.structure.graph.edge_count(), 0);
        assert_eq!(m.original, vec![0, 2]);
        assert_eq!(m.structure.unary.get("Q1_1"), Some(&vec![0, 1]));
        assert_eq!(m.structure.unary.len(), 1);
    }

    #[test]
    fn marks_edge_cases() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let s = Structure::new(g).with_predicate("P0", vec![0, 2]).unwrap();
        let m = remove_and_mark(&s, &[2], 2, 2).unwrap();
        assert!(m.structure.unary.keys().all(|k| !k.starts_with('Q')));
        assert_eq!(m.structure.unary["P0"], vec![0]);
        let all = remove_and_mark(&s, &[0, 1, 2], 1, 1).unwrap();
        assert_eq!(all.structure.vertex_count(), 0);
        assert!(remove_and_mark(&s, &[1, 1], 1, 1).is_err());
    }

    #[test]
    fn each_survivor_has_one_mark_per_removed_vertex() {
        let mut rng = rng(2);
        for _ in 0..40 {
            let n = rng.gen_range(2..=30);
            let g = random_sparse(n, rng.gen_range(0..2 * n), &mut rng);
            let w: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.2)).collect();
            let s = Structure::new(g);
            let (q, l) = (1, rng.gen_range(0..=1));
            let bound = f_q(q, l);
            let m = remove_and_mark(&s, &w, q, l).unwrap();
            for (j, &wj) in w.iter().enumerate() {
                let dist = distances_from(&s.graph, wj);
                for (v, &old) in m.original.iter().enumerate() {
                    let marks: Vec<&String> = m
                        .structure
                        .unary
                        .iter()
                        .filter(|(k, members)| k.ends_with(&format!("_{}", j + 1)) && members.contains(&v))
                        .map(|(k, _)| k)
                        .collect();
                    match dist[old].filter(|&d| within(Some(d), &bound)) {
                        Some(d) => assert_eq!(marks, vec![&format!("Q{d}_{}", j + 1)]),
                        None => assert!(marks.is_empty()),
                    }
                }
            }
        }
    }
}
