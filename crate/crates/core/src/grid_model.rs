//! Grid minor models and the extraction of vertex-disjoint obstructions
//! from them, one per 3×4 block of the grid.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{Cell, GridLayout};
use crate::graph::{tree_median, tree_path, Graph};
use crate::incidence::SignedBipartiteGraph;
use crate::obstruction::{check_obstruction, NestedObstruction};
use crate::paths::Path;

/// A model of the r-grid in a host graph. Grid vertex `(i, j)` (1-based)
/// has index `(i-1)·r + (j-1)`; `edges` maps each grid edge `(lo, hi)` to a
/// host edge `(x, y)` with `x` in the branch set of `lo` and `y` in that of
/// `hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridModel {
    pub r: usize,
    pub branch_sets: Vec<Vec<usize>>,
    pub edges: BTreeMap<(usize, usize), (usize, usize)>,
}

impl GridModel {
    pub fn index(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.r + (j - 1)
    }

    /// Every branch set a single host vertex given by `node(i, j)`.
    pub fn identity(r: usize, node: impl Fn(usize, usize) -> usize) -> Self {
        let branch_sets = (1..=r)
            .flat_map(|i| (1..=r).map(move |j| (i, j)))
            .map(|(i, j)| vec![node(i, j)])
            .collect::<Vec<_>>();
        let edges = Graph::grid(r)
            .edges()
            .map(|(u, w)| ((u, w), (branch_sets[u][0], branch_sets[w][0])))
            .collect();
        GridModel {
            r,
            branch_sets,
            edges,
        }
    }

    /// Identity model of a grid formula's layout inside its incidence graph.
    pub fn from_layout(layout: &GridLayout, inc: &SignedBipartiteGraph) -> Self {
        GridModel::identity(layout.n, |i, j| match layout.cell(i, j) {
            Cell::Var(v) => inc.node_of_variable(v).expect("layout variable"),
            Cell::Clause(c) => inc.node_of_clause(c).expect("layout clause"),
        })
    }

    /// Host endpoint, inside the branch set of `v`, of the representative of
    /// grid edge `vw`.
    fn endpoint(&self, v: usize, w: usize) -> usize {
        let (x, y) = self.edges[&(v.min(w), v.max(w))];
        if v < w {
            x
        } else {
            y
        }
    }
}

pub fn validate_grid_model(model: &GridModel, host: &Graph) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidGridModel(m));
    let r = model.r;
    if model.branch_sets.len() != r * r {
        return bad(format!(
            "{} branch sets for a {r}-grid",
            model.branch_sets.len()
        ));
    }
    let mut owner = vec![usize::MAX; host.num_vertices()];
    for (idx, set) in model.branch_sets.iter().enumerate() {
        for &v in set {
            if v >= host.num_vertices() {
                return bad(format!("unknown host vertex {v}"));
            }
            if owner[v] != usize::MAX {
                return bad(format!("host vertex {v} is in two branch sets"));
            }
            owner[v] = idx;
        }
        if !host.is_connected_subset(set) {
            return bad(format!("branch set {idx} is empty or disconnected"));
        }
    }
    let grid = Graph::grid(r);
    if model.edges.len() != grid.num_edges() {
        return bad("wrong number of representative edges".into());
    }
    for (u, w) in grid.edges() {
        let Some(&(x, y)) = model.edges.get(&(u, w)) else {
            return bad(format!("grid edge {u}-{w} has no representative"));
        };
        if x >= host.num_vertices() || y >= host.num_vertices() {
            return bad(format!("representative of {u}-{w} leaves the host"));
        }
        if owner[x] != u || owner[y] != w || !host.has_edge(x, y) {
            return bad(format!(
                "representative of {u}-{w} is not a host edge between its sets"
            ));
        }
    }
    Ok(())
}

/// One obstruction per block `1 <= i <= r/3`, `1 <= j <= r/4`, between the
/// lifts of `(3i-1, 4j-3)` and `(3i-1, 4j)`. The lifts of `a` and `b` are
/// the medians of their three representative endpoints in a spanning tree
/// of the branch set; paths follow tree subpaths and representative edges.
/// Pendants are the first interior variable of each path.
pub fn extract_obstructions_from_grid(
    model: &GridModel,
    host: &SignedBipartiteGraph,
) -> Result<Vec<NestedObstruction>> {
    validate_grid_model(model, host.graph())?;
    let r = model.r;
    let blocks: Vec<(usize, usize)> = (1..=r / 3)
        .flat_map(|i| (1..=r / 4).map(move |j| (i, j)))
        .collect();
    blocks
        .par_iter()
        .map(|&(i, j)| block_obstruction(model, host, i, j))
        .collect()
}

fn block_obstruction(
    model: &GridModel,
    host: &SignedBipartiteGraph,
    i: usize,
    j: usize,
) -> Result<NestedObstruction> {
    let g = host.graph();
    let (top, mid, bottom) = (3 * i - 2, 3 * i - 1, 3 * i);
    let (left, right) = (4 * j - 3, 4 * j);
    let at = |row: usize, col: usize| model.index(row, col);
    let grid_paths: [Vec<usize>; 3] = [
        std::iter::once(at(mid, left))
            .chain((left..=right).map(|c| at(top, c)))
            .chain(std::iter::once(at(mid, right)))
            .collect(),
        (left..=right).map(|c| at(mid, c)).collect(),
        std::iter::once(at(mid, left))
            .chain((left..=right).map(|c| at(bottom, c)))
            .chain(std::iter::once(at(mid, right)))
            .collect(),
    ];

    let tree = |v: usize| {
        let set = &model.branch_sets[v];
        let mut allowed = vec![false; g.num_vertices()];
        for &x in set {
            allowed[x] = true;
        }
        g.bfs_tree(*set.iter().min().expect("nonempty branch set"), &allowed)
    };
    let (ga, gb) = (at(mid, left), at(mid, right));
    let (tree_a, tree_b) = (tree(ga), tree(gb));
    let ends_a: Vec<usize> = grid_paths
        .iter()
        .map(|p| model.endpoint(ga, p[1]))
        .collect();
    let ends_b: Vec<usize> = grid_paths
        .iter()
        .map(|p| model.endpoint(gb, p[p.len() - 2]))
        .collect();
    let ra = tree_median(&tree_a, ends_a[0], ends_a[1], ends_a[2]);
    let rb = tree_median(&tree_b, ends_b[0], ends_b[1], ends_b[2]);

    let mut paths = Vec::with_capacity(3);
    for (k, gp) in grid_paths.iter().enumerate() {
        let mut vertices = tree_path(&tree_a, ra, ends_a[k]);
        for t in 1..gp.len() - 1 {
            let v = gp[t];
            let enter = model.endpoint(v, gp[t - 1]);
            let leave = model.endpoint(v, gp[t + 1]);
            vertices.extend(tree_path(&tree(v), enter, leave));
        }
        vertices.extend(tree_path(&tree_b, ends_b[k], rb));
        paths.push(Path::new(vertices));
    }

    let mut pendants = [0; 3];
    let mut attachments = [0; 3];
    for (k, p) in paths.iter().enumerate() {
        let verts = p.vertices();
        let idx = (1..verts.len() - 1)
            .find(|&t| host.is_variable(verts[t]))
            .ok_or_else(|| {
                Error::InvalidGridModel(format!("block ({i},{j}) path without interior variable"))
            })?;
        pendants[k] = verts[idx];
        attachments[k] = verts[idx - 1];
    }
    let o = NestedObstruction {
        a: ra,
        b: rb,
        paths: paths.try_into().expect("three paths"),
        pendants,
        attachments,
    };
    check_obstruction(host, &o)?;
    Ok(o)
}
