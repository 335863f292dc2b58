//! Nested-obstructions in incidence graphs: verification, the K3,3 model
//! inside `inc+u(F)`, a deterministic search, kill classification and the
//! edge-disjoint to independent path rerouting.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Variable};
use crate::graph::{tree_median, tree_path, Graph};
use crate::incidence::{build_incidence, NodeKind, Sign, SignedBipartiteGraph};
use crate::minor::MinorModel;
use crate::paths::{are_edge_disjoint, are_independent, disjoint_paths, Disjointness, Path};

/// Endpoints `a`, `b`, three independent `a`–`b` paths, and one pendant
/// variable per path. `attachments[i]` is the vertex of path `i` that the
/// pendant is joined to; when the pendant lies on its own path it is one of
/// its path neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NestedObstruction {
    pub a: usize,
    pub b: usize,
    pub paths: [Path; 3],
    pub pendants: [usize; 3],
    pub attachments: [usize; 3],
}

impl NestedObstruction {
    pub fn vertices(&self) -> BTreeSet<usize> {
        let mut all: BTreeSet<usize> = self
            .paths
            .iter()
            .flat_map(|p| p.vertices().iter().copied())
            .collect();
        all.extend(self.pendants);
        all
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut all: BTreeSet<(usize, usize)> = self
            .paths
            .iter()
            .flat_map(|p| p.edges().map(|(u, v)| (u.min(v), u.max(v))))
            .collect();
        for (&p, &q) in self.pendants.iter().zip(&self.attachments) {
            all.insert((p.min(q), p.max(q)));
        }
        all
    }

    /// The obstruction as a graph on the host's vertex ids.
    pub fn as_graph(&self, n: usize) -> Graph {
        Graph::from_edges(n, self.edges())
    }

    pub fn variables(&self, inc: &SignedBipartiteGraph) -> BTreeSet<Variable> {
        self.vertices()
            .into_iter()
            .filter_map(|v| inc.variable_of(v))
            .collect()
    }

    pub fn clauses(&self, inc: &SignedBipartiteGraph) -> BTreeSet<usize> {
        self.vertices()
            .into_iter()
            .filter_map(|v| inc.clause_of(v))
            .collect()
    }

    /// Plain-text record with variables printed by DIMACS id and clauses as
    /// `c<index>` (1-based).
    pub fn record(&self, inc: &SignedBipartiteGraph) -> String {
        let label = |v: usize| node_label(inc, v);
        let mut out = String::new();
        let _ = writeln!(out, "obstruction a={} b={}", label(self.a), label(self.b));
        for i in 0..3 {
            let path: Vec<String> = self.paths[i].vertices().iter().map(|&v| label(v)).collect();
            let _ = writeln!(
                out,
                "  path {}: {} | pendant {} attached to {}",
                i + 1,
                path.join(" "),
                label(self.pendants[i]),
                label(self.attachments[i])
            );
        }
        out
    }
}

pub fn node_label(inc: &SignedBipartiteGraph, v: usize) -> String {
    match inc.kind(v) {
        NodeKind::Variable(x) => x.to_string(),
        NodeKind::Clause(c) => format!("c{}", c + 1),
        NodeKind::Universal => "c*".to_string(),
    }
}

/// Checks the obstruction invariants inside `inc`.
///
/// Beyond distinctness and independence, each pendant must either lie in
/// the interior of its own path or attach to an interior vertex of it, and
/// must avoid the other paths. Without this the sets `(P_i ∪ {p_i}) \ {a,b}`
/// need not be disjoint, connected and adjacent to both endpoints, and the
/// K3,3 model can fail to exist.
pub fn verify_obstruction(inc: &SignedBipartiteGraph, o: &NestedObstruction) -> bool {
    check_obstruction(inc, o).is_ok()
}

pub fn check_obstruction(inc: &SignedBipartiteGraph, o: &NestedObstruction) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidObstruction(m.to_string()));
    let g = inc.graph();
    let mut five = vec![o.a, o.b, o.pendants[0], o.pendants[1], o.pendants[2]];
    if five.iter().any(|&v| !g.contains(v)) {
        return bad("vertex out of range");
    }
    five.sort_unstable();
    five.dedup();
    if five.len() != 5 {
        return bad("a, b and the pendants are not pairwise distinct");
    }
    if o.pendants.iter().any(|&p| !inc.is_variable(p)) {
        return bad("pendant is not a variable");
    }
    for p in &o.paths {
        if !p.is_valid_in(g) || p.first() != o.a || p.last() != o.b {
            return bad("path is not an a-b path of the graph");
        }
    }
    let refs: Vec<&Path> = o.paths.iter().collect();
    if !are_independent(&refs) {
        return bad("paths are not independent");
    }
    for i in 0..3 {
        let (p, q, path) = (o.pendants[i], o.attachments[i], &o.paths[i]);
        if !g.has_edge(p, q) || !path.vertices().contains(&q) {
            return bad("attachment edge missing");
        }
        let on_interior = path.internal().contains(&p);
        if !on_interior && !path.internal().contains(&q) {
            return bad("pendant attaches to a path endpoint");
        }
        if (0..3).any(|j| j != i && o.paths[j].vertices().contains(&p)) {
            return bad("pendant lies on another path");
        }
    }
    Ok(())
}

/// The K3,3 model `{a}, {b}, {c*}` against `(P_i ∪ {p_i}) \ {a, b}` in
/// `inc+u(F)`. Pattern vertices 0..3 are the first side.
pub fn k33_model(o: &NestedObstruction, universal: &SignedBipartiteGraph) -> Result<MinorModel> {
    let c_star = universal
        .universal_node()
        .ok_or_else(|| Error::Precondition("graph has no universal clause".into()))?;
    if o.vertices().contains(&c_star) {
        return Err(Error::Precondition(
            "obstruction uses the universal clause".into(),
        ));
    }
    check_obstruction(universal, o).map_err(|e| Error::Precondition(e.to_string()))?;
    let mut branch_sets = vec![vec![o.a], vec![o.b], vec![c_star]];
    for i in 0..3 {
        let mut set: Vec<usize> = o.paths[i].internal().to_vec();
        if !set.contains(&o.pendants[i]) {
            set.push(o.pendants[i]);
        }
        set.sort_unstable();
        branch_sets.push(set);
    }
    Ok(MinorModel {
        pattern: Graph::complete_bipartite(3, 3),
        branch_sets,
    })
}

/// Searches `inc(F)` for an obstruction. Pairs `(a, b)` are scanned in
/// ascending order; for each, three independent paths come from the flow
/// routine (retried without the edge `ab` when the direct edge leaves a path
/// without interior), and pendants prefer interior variables, then adjacent
/// outside variables, by ascending id. A universal clause, if present, is
/// ignored.
pub fn find_obstruction(inc: &SignedBipartiteGraph) -> Option<NestedObstruction> {
    let g = match inc.universal_node() {
        Some(u) => {
            let keep: Vec<bool> = (0..inc.num_nodes()).map(|v| v != u).collect();
            inc.graph().induced(&keep).0
        }
        None => inc.graph().clone(),
    };
    let n = g.num_vertices();
    let heavy: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    for (i, &a) in heavy.iter().enumerate() {
        for &b in &heavy[i + 1..] {
            if let Some(o) = obstruction_between(inc, &g, a, b) {
                return Some(o);
            }
        }
    }
    None
}

fn obstruction_between(
    inc: &SignedBipartiteGraph,
    g: &Graph,
    a: usize,
    b: usize,
) -> Option<NestedObstruction> {
    let paths = disjoint_paths(g, a, b, 3, Disjointness::Vertex).ok()??;
    if let Some(o) = with_pendants(inc, g, a, b, paths) {
        return Some(o);
    }
    if g.has_edge(a, b) {
        let edges: Vec<(usize, usize)> = g.edges().filter(|&e| e != (a.min(b), a.max(b))).collect();
        let h = g.edge_subgraph(&edges);
        let paths = disjoint_paths(&h, a, b, 3, Disjointness::Vertex).ok()??;
        return with_pendants(inc, g, a, b, paths);
    }
    None
}

fn with_pendants(
    inc: &SignedBipartiteGraph,
    g: &Graph,
    a: usize,
    b: usize,
    paths: Vec<Path>,
) -> Option<NestedObstruction> {
    let on_path: HashSet<usize> = paths
        .iter()
        .flat_map(|p| p.vertices().iter().copied())
        .collect();
    let candidates: Vec<Vec<(usize, usize)>> = paths
        .iter()
        .map(|p| {
            let verts = p.vertices();
            let mut own: Vec<(usize, usize)> = (1..verts.len() - 1)
                .filter(|&k| inc.is_variable(verts[k]))
                .map(|k| (verts[k], verts[k - 1]))
                .collect();
            own.sort_unstable();
            let mut outside: Vec<(usize, usize)> = p
                .internal()
                .iter()
                .flat_map(|&q| g.neighbors(q).iter().map(move |&w| (w, q)))
                .filter(|&(w, _)| inc.is_variable(w) && !on_path.contains(&w))
                .collect();
            outside.sort_unstable();
            outside.dedup_by_key(|c| c.0);
            own.extend(outside);
            own
        })
        .collect();
    let mut chosen = [(usize::MAX, usize::MAX); 3];
    if !pick_distinct(&candidates, 0, &mut chosen) {
        return None;
    }
    let paths: [Path; 3] = paths.try_into().ok()?;
    Some(NestedObstruction {
        a,
        b,
        paths,
        pendants: chosen.map(|c| c.0),
        attachments: chosen.map(|c| c.1),
    })
}

fn pick_distinct(
    candidates: &[Vec<(usize, usize)>],
    i: usize,
    chosen: &mut [(usize, usize); 3],
) -> bool {
    if i == 3 {
        return true;
    }
    for &c in &candidates[i] {
        if chosen[..i].iter().any(|d| d.0 == c.0) {
            continue;
        }
        chosen[i] = c;
        if pick_distinct(candidates, i + 1, chosen) {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum KillClassification {
    Internal,
    /// Clause indices of the formula: `x ∈ positive`, `¬x ∈ negative`.
    External {
        positive: usize,
        negative: usize,
    },
    None,
}

pub fn classify_kill(
    x: Variable,
    o: &NestedObstruction,
    f: &CnfFormula,
) -> Result<KillClassification> {
    let inc = build_incidence(f, false);
    check_obstruction(&inc, o).map_err(|e| Error::Precondition(e.to_string()))?;
    Ok(classify_kill_in(&inc, x, o))
}

/// Same as [`classify_kill`] against a prebuilt `inc(F)`; the obstruction is
/// assumed verified.
pub fn classify_kill_in(
    inc: &SignedBipartiteGraph,
    x: Variable,
    o: &NestedObstruction,
) -> KillClassification {
    let vertices = o.vertices();
    let Some(node) = inc.node_of_variable(x) else {
        return KillClassification::None;
    };
    if vertices.contains(&node) {
        return KillClassification::Internal;
    }
    let mut positive = None;
    let mut negative = None;
    for (c, sign) in inc.signed_neighbors(node) {
        if !vertices.contains(&c) {
            continue;
        }
        let Some(idx) = inc.clause_of(c) else {
            continue;
        };
        let slot = match sign {
            Sign::Positive => &mut positive,
            Sign::Negative => &mut negative,
        };
        if slot.is_none_or(|old| idx < old) {
            *slot = Some(idx);
        }
    }
    match (positive, negative) {
        (Some(positive), Some(negative)) => KillClassification::External { positive, negative },
        _ => KillClassification::None,
    }
}

/// Variables that kill every obstruction of `os` externally. The empty
/// family yields every variable.
pub fn common_external_killers(os: &[NestedObstruction], f: &CnfFormula) -> BTreeSet<Variable> {
    let inc = build_incidence(f, false);
    common_external_killers_in(&inc, os)
}

pub fn common_external_killers_in(
    inc: &SignedBipartiteGraph,
    os: &[NestedObstruction],
) -> BTreeSet<Variable> {
    (0..inc.num_variables())
        .filter_map(|v| inc.variable_of(v))
        .filter(|&x| {
            os.iter().all(|o| {
                matches!(
                    classify_kill_in(inc, x, o),
                    KillClassification::External { .. }
                )
            })
        })
        .collect()
}

/// Every variable that kills `o`: internal ones plus external ones.
pub fn killers(inc: &SignedBipartiteGraph, o: &NestedObstruction) -> BTreeSet<Variable> {
    (0..inc.num_variables())
        .filter_map(|v| inc.variable_of(v))
        .filter(|&x| classify_kill_in(inc, x, o) != KillClassification::None)
        .collect()
}

/// Rerouting of three edge-disjoint `x`–`y` paths into three independent
/// paths: `x' = x`, `y'` the median of the first path vertices after `x`
/// in a BFS spanning tree of the component of `G - x` containing `y`.
pub fn three_edge_disjoint_to_independent(
    g: &Graph,
    x: usize,
    y: usize,
    paths: [&Path; 3],
) -> Result<(usize, usize, [Path; 3])> {
    let pre = |m: &str| Err(Error::Precondition(m.to_string()));
    if x == y || !g.contains(x) || !g.contains(y) {
        return pre("endpoints must be distinct vertices of the graph");
    }
    for p in paths {
        if !p.is_valid_in(g) || p.first() != x || p.last() != y {
            return pre("not an x-y path of the graph");
        }
    }
    if !are_edge_disjoint(&paths) {
        return pre("paths are not edge-disjoint");
    }
    let s = paths.map(|p| p.vertices()[1]);
    let allowed: Vec<bool> = (0..g.num_vertices()).map(|v| v != x).collect();
    let parent = g.bfs_tree(y, &allowed);
    let y2 = tree_median(&parent, s[0], s[1], s[2]);
    let rerouted = s.map(|si| {
        let mut vertices = vec![x];
        vertices.extend(tree_path(&parent, si, y2));
        Path::new(vertices)
    });
    Ok((x, y2, rerouted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{disjoint_union, nested_example};
    use crate::minor::validate_minor_model;
    use crate::nested::is_nested;

    /// Small obstruction: a=1, b=2, paths a-c1-3-c2-b,
    /// a-c3-4-c4-b and a-c5-b with variable 5 hanging off c5.
    fn sample_obstruction() -> (CnfFormula, NestedObstruction) {
        let f =
            CnfFormula::from_dimacs_clauses(5, &[&[1, 3], &[3, 2], &[1, 4], &[4, 2], &[1, 2, 5]])
                .unwrap();
        // variables 1..5 are nodes 0..4, clauses are nodes 5..9
        let o = NestedObstruction {
            a: 0,
            b: 1,
            paths: [
                Path::new(vec![0, 5, 2, 6, 1]),
                Path::new(vec![0, 7, 3, 8, 1]),
                Path::new(vec![0, 9, 1]),
            ],
            pendants: [2, 3, 4],
            attachments: [5, 7, 9],
        };
        (f, o)
    }

    #[test]
    fn sample_obstruction_verifies() {
        let (f, o) = sample_obstruction();
        let inc = build_incidence(&f, false);
        assert!(verify_obstruction(&inc, &o));
        assert!(!is_nested(&f));
        let mut same_pendant = o.clone();
        same_pendant.pendants[1] = 2;
        assert!(!verify_obstruction(&inc, &same_pendant));
    }

    #[test]
    fn rerouting_through_another_path_breaks_independence() {
        // add clause c6 = {3, 4} so that path 2 can run a-c3-4-c6-3-c2-b
        let f = CnfFormula::from_dimacs_clauses(
            5,
            &[&[1, 3], &[3, 2], &[1, 4], &[4, 2], &[1, 2, 5], &[3, 4]],
        )
        .unwrap();
        let inc = build_incidence(&f, false);
        let (_, mut o) = sample_obstruction();
        o.paths[1] = Path::new(vec![0, 7, 3, 10, 2, 6, 1]);
        assert!(!verify_obstruction(&inc, &o));
    }

    #[test]
    fn endpoint_attachment_is_rejected() {
        // a direct a-b edge as a path has no interior to attach to
        let f = CnfFormula::from_dimacs_clauses(4, &[&[1, 2], &[1, 3], &[1, 4]]).unwrap();
        let inc = build_incidence(&f, false);
        let o = NestedObstruction {
            a: 0,
            b: 4,
            paths: [
                Path::new(vec![0, 4]),
                Path::new(vec![0, 5, 2]),
                Path::new(vec![0, 6, 3]),
            ],
            pendants: [1, 2, 3],
            attachments: [4, 5, 6],
        };
        assert!(!verify_obstruction(&inc, &o));
    }

    #[test]
    fn k33_model_of_sample() {
        let (f, o) = sample_obstruction();
        let univ = build_incidence(&f, true);
        let model = k33_model(&o, &univ).unwrap();
        assert_eq!(model.branch_sets[2], vec![10]);
        assert_eq!(model.branch_sets[3], vec![2, 5, 6]);
        assert_eq!(model.branch_sets[5], vec![4, 9]);
        assert!(validate_minor_model(univ.graph(), &model));
        assert!(k33_model(&o, &build_incidence(&f, false)).is_err());
    }

    #[test]
    fn interior_pendants_give_path_interiors() {
        let f = disjoint_union(1);
        let inc = build_incidence(&f, false);
        let o = find_obstruction(&inc).unwrap();
        let model = k33_model(&o, &build_incidence(&f, true)).unwrap();
        for i in 0..3 {
            assert_eq!(model.branch_sets[3 + i], o.paths[i].internal().to_vec());
        }
    }

    #[test]
    fn disjoint_union_obstruction() {
        let f = disjoint_union(1);
        let inc = build_incidence(&f, false);
        let o = find_obstruction(&inc).unwrap();
        // variables x,y,z are nodes 0,1,2 (degree 2); clauses c1,c2 are nodes 3,4
        assert_eq!((o.a, o.b), (3, 4));
        let mut paths: Vec<Vec<usize>> = o.paths.iter().map(|p| p.vertices().to_vec()).collect();
        paths.sort();
        assert_eq!(paths, vec![vec![3, 0, 4], vec![3, 1, 4], vec![3, 2, 4]]);
        let mut pendants = o.pendants;
        pendants.sort_unstable();
        assert_eq!(pendants, [0, 1, 2]);
        assert!(verify_obstruction(&inc, &o));
    }

    #[test]
    fn no_obstruction_in_nested_or_tree_inputs() {
        assert!(find_obstruction(&build_incidence(&nested_example(), false)).is_none());
        let tree = CnfFormula::from_dimacs_clauses(5, &[&[1, 2, 3], &[3, 4], &[4, 5]]).unwrap();
        assert!(find_obstruction(&build_incidence(&tree, false)).is_none());
    }

    #[test]
    fn classification() {
        let (mut f, o) = sample_obstruction();
        // variable 6 occurs positively in c1 (on path 1) and negatively in c3 (on path 2)
        let mut clauses = f.clauses().to_vec();
        clauses[0] = crate::Clause::from_dimacs(&[1, 3, 6]).unwrap();
        clauses[2] = crate::Clause::from_dimacs(&[1, 4, -6]).unwrap();
        clauses.push(crate::Clause::from_dimacs(&[7]).unwrap());
        f = CnfFormula::new((1..=7).map(Variable), clauses);
        // the new variables push clause nodes up by two
        let shift = |v: usize| if v >= 5 { v + 2 } else { v };
        let o = NestedObstruction {
            a: o.a,
            b: o.b,
            paths: o
                .paths
                .clone()
                .map(|p| Path::new(p.vertices().iter().map(|&v| shift(v)).collect())),
            pendants: o.pendants,
            attachments: o.attachments.map(shift),
        };
        assert_eq!(
            classify_kill(Variable(3), &o, &f).unwrap(),
            KillClassification::Internal
        );
        assert_eq!(
            classify_kill(Variable(6), &o, &f).unwrap(),
            KillClassification::External {
                positive: 0,
                negative: 2
            }
        );
        assert_eq!(
            classify_kill(Variable(7), &o, &f).unwrap(),
            KillClassification::None
        );
        assert_eq!(
            common_external_killers(std::slice::from_ref(&o), &f),
            BTreeSet::from([Variable(6)])
        );
        assert_eq!(common_external_killers(&[], &f).len(), 7);
    }

    #[test]
    fn record_lists_paths() {
        let (f, o) = sample_obstruction();
        let text = o.record(&build_incidence(&f, false));
        assert!(text.starts_with("obstruction a=1 b=2"));
        assert!(text.contains("path 3: 1 c5 2 | pendant 5 attached to c5"));
    }

    #[test]
    fn rerouting_example() {
        // x=0, a=1, y=2, u=3, v=4, w=5
        let g = Graph::from_edges(
            6,
            [
                (0, 1),
                (1, 2),
                (0, 3),
                (3, 1),
                (1, 4),
                (4, 2),
                (0, 5),
                (5, 2),
            ],
        );
        let p1 = Path::new(vec![0, 1, 2]);
        let p2 = Path::new(vec![0, 3, 1, 4, 2]);
        let p3 = Path::new(vec![0, 5, 2]);
        let (x2, y2, q) = three_edge_disjoint_to_independent(&g, 0, 2, [&p1, &p2, &p3]).unwrap();
        assert_eq!((x2, y2), (0, 1));
        assert_eq!(q[0].vertices(), &[0, 1]);
        assert_eq!(q[1].vertices(), &[0, 3, 1]);
        assert_eq!(q[2].vertices(), &[0, 5, 2, 1]);
        assert!(are_independent(&[&q[0], &q[1], &q[2]]));
        assert!(three_edge_disjoint_to_independent(&g, 0, 2, [&p1, &p1, &p3]).is_err());
    }
}
