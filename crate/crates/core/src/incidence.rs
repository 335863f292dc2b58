//! Signed incidence graphs `inc(F)` and `inc+u(F)`.
//!
//! Node layout: variables in ascending order occupy `0..num_variables`,
//! clauses follow in formula order, and the universal clause `c*` (when
//! present) is the last node.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::formula::{CnfFormula, Variable};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Variable(Variable),
    Clause(usize),
    Universal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

#[derive(Debug, Clone)]
pub struct SignedBipartiteGraph {
    graph: Graph,
    kinds: Vec<NodeKind>,
    /// Parallel to `graph.neighbors(v)`.
    signs: Vec<Vec<Sign>>,
    var_node: HashMap<Variable, usize>,
    num_variables: usize,
    num_clauses: usize,
}

pub fn build_incidence(f: &CnfFormula, universal: bool) -> SignedBipartiteGraph {
    let nv = f.num_variables();
    let nc = f.num_clauses();
    let n = nv + nc + usize::from(universal);
    let var_node: HashMap<Variable, usize> = f
        .variables()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();

    let mut edges: Vec<(usize, usize, Sign)> = Vec::new();
    for (ci, clause) in f.clauses().iter().enumerate() {
        for lit in clause.literals() {
            let sign = if lit.positive {
                Sign::Positive
            } else {
                Sign::Negative
            };
            edges.push((var_node[&lit.var], nv + ci, sign));
        }
    }
    if universal {
        for vi in 0..nv {
            edges.push((vi, nv + nc, Sign::Positive));
        }
    }

    let mut adj: Vec<Vec<(usize, Sign)>> = vec![Vec::new(); n];
    for &(u, v, s) in &edges {
        adj[u].push((v, s));
        adj[v].push((u, s));
    }
    for list in &mut adj {
        list.sort_by_key(|&(w, _)| w);
    }
    let graph = Graph::from_edges(n, edges.iter().map(|&(u, v, _)| (u, v)));
    let signs = adj
        .into_iter()
        .map(|l| l.into_iter().map(|(_, s)| s).collect())
        .collect();

    let mut kinds: Vec<NodeKind> = f
        .variables()
        .iter()
        .map(|&v| NodeKind::Variable(v))
        .collect();
    kinds.extend((0..nc).map(NodeKind::Clause));
    if universal {
        kinds.push(NodeKind::Universal);
    }

    SignedBipartiteGraph {
        graph,
        kinds,
        signs,
        var_node,
        num_variables: nv,
        num_clauses: nc,
    }
}

impl SignedBipartiteGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_nodes(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.kinds[node]
    }

    pub fn is_variable(&self, node: usize) -> bool {
        matches!(self.kinds.get(node), Some(NodeKind::Variable(_)))
    }

    pub fn is_clause(&self, node: usize) -> bool {
        matches!(self.kinds.get(node), Some(NodeKind::Clause(_)))
    }

    pub fn variable_of(&self, node: usize) -> Option<Variable> {
        match self.kinds.get(node) {
            Some(NodeKind::Variable(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn clause_of(&self, node: usize) -> Option<usize> {
        match self.kinds.get(node) {
            Some(NodeKind::Clause(c)) => Some(*c),
            _ => None,
        }
    }

    pub fn node_of_variable(&self, v: Variable) -> Option<usize> {
        self.var_node.get(&v).copied()
    }

    pub fn node_of_clause(&self, clause: usize) -> Option<usize> {
        (clause < self.num_clauses).then_some(self.num_variables + clause)
    }

    pub fn universal_node(&self) -> Option<usize> {
        match self.kinds.last() {
            Some(NodeKind::Universal) => Some(self.kinds.len() - 1),
            _ => None,
        }
    }

    pub fn sign(&self, u: usize, v: usize) -> Option<Sign> {
        let i = self.graph.neighbors(u).binary_search(&v).ok()?;
        Some(self.signs[u][i])
    }

    /// Neighbours of `v` paired with edge signs, ascending by id.
    pub fn signed_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, Sign)> + '_ {
        self.graph
            .neighbors(v)
            .iter()
            .copied()
            .zip(self.signs[v].iter().copied())
    }

    /// Debug dump: one `u v sign` line per edge.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.graph.edges() {
            let s = self.sign(u, v).expect("edge has a sign");
            let _ = writeln!(out, "{u} {v} {}", s.symbol());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{nested_example, random_formula};
    use crate::formula::Literal;
    use proptest::prelude::*;

    #[test]
    fn nested_example_incidence() {
        let g = build_incidence(&nested_example(), false);
        assert_eq!(g.num_variables(), 7);
        assert_eq!(g.num_clauses(), 8);
        assert_eq!(g.graph().num_edges(), 2 + 3 + 2 + 2 + 2 + 3 + 2 + 3);
        // c1 = t ∨ ¬u
        let c1 = g.node_of_clause(0).unwrap();
        assert_eq!(g.sign(0, c1), Some(Sign::Positive));
        assert_eq!(g.sign(1, c1), Some(Sign::Negative));
        assert_eq!(g.sign(2, c1), None);
    }

    #[test]
    fn empty_formula_gives_empty_graph() {
        let g = build_incidence(&CnfFormula::default(), false);
        assert_eq!(g.num_nodes(), 0);
        let g = build_incidence(&CnfFormula::default(), true);
        assert_eq!(g.num_nodes(), 1);
        assert_eq!(g.universal_node(), Some(0));
    }

    #[test]
    fn universal_clause_is_adjacent_to_every_variable() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]).unwrap();
        let g = build_incidence(&f, true);
        assert_eq!(g.num_nodes(), 4);
        let star = g.universal_node().unwrap();
        assert_eq!(g.graph().neighbors(star), &[0, 1]);
        assert_eq!(g.sign(0, 2), Some(Sign::Positive));
        assert_eq!(g.sign(1, 2), Some(Sign::Negative));
        assert_eq!(g.edge_list(), "0 2 +\n0 3 +\n1 2 -\n1 3 +\n");
    }

    proptest! {
        #[test]
        fn bipartite_and_sign_consistent(seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = random_formula(&mut rng, 7, 9, 1..=4);
            let g = build_incidence(&f, false);
            for (u, v) in g.graph().edges() {
                prop_assert!(g.is_variable(u) && g.is_clause(v));
                let var = g.variable_of(u).unwrap();
                let clause = &f.clauses()[g.clause_of(v).unwrap()];
                let positive = g.sign(u, v) == Some(Sign::Positive);
                prop_assert!(clause.contains(Literal::new(var, positive)));
            }
            let total: usize = f.clauses().iter().map(|c| c.len()).sum();
            prop_assert_eq!(g.graph().num_edges(), total);
        }
    }
}
