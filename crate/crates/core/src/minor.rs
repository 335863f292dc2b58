//! Explicit minor models and their validation.

use crate::graph::Graph;

/// A model of `pattern` in some host graph: one branch set per pattern
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorModel {
    pub pattern: Graph,
    pub branch_sets: Vec<Vec<usize>>,
}

/// Branch sets are nonempty, pairwise disjoint and connected in `host`, and
/// every pattern edge is realised by a host edge between the two sets.
pub fn validate_minor_model(host: &Graph, model: &MinorModel) -> bool {
    if model.branch_sets.len() != model.pattern.num_vertices() {
        return false;
    }
    let mut owner = vec![usize::MAX; host.num_vertices()];
    for (i, set) in model.branch_sets.iter().enumerate() {
        for &v in set {
            if v >= host.num_vertices() || owner[v] != usize::MAX {
                return false;
            }
            owner[v] = i;
        }
        if !host.is_connected_subset(set) {
            return false;
        }
    }
    model.pattern.edges().all(|(i, j)| {
        model.branch_sets[i]
            .iter()
            .any(|&u| host.neighbors(u).iter().any(|&w| owner[w] == j))
    })
}
