//! Simple undirected graphs with sorted adjacency lists.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a simple graph; loops are dropped and parallel edges merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(
                u < n && v < n,
                "edge ({u}, {v}) out of range for {n} vertices"
            );
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph { adj }
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Self {
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// The r×r grid; vertex `(i, j)` (1-based) has id `(i-1)·r + (j-1)`.
    pub fn grid(r: usize) -> Self {
        let id = |i: usize, j: usize| i * r + j;
        let mut edges = Vec::new();
        for i in 0..r {
            for j in 0..r {
                if i + 1 < r {
                    edges.push((id(i, j), id(i + 1, j)));
                }
                if j + 1 < r {
                    edges.push((id(i, j), id(i, j + 1)));
                }
            }
        }
        Graph::from_edges(r * r, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `keep`, with vertices renumbered in ascending
    /// order. Returns the graph and the new→old id map.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let old: Vec<usize> = (0..self.adj.len()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.adj.len()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| keep[w])
                    .map(|&w| new_id[w])
                    .collect()
            })
            .collect();
        (Graph { adj }, old)
    }

    /// Same vertex set, only the given edges.
    pub fn edge_subgraph(&self, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(self.adj.len(), edges.iter().copied())
    }

    /// Connected component labels, numbered in order of their smallest vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.adj.len()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.adj.len() {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    /// Whether `set` induces a connected subgraph.
    /// The empty set counts as not connected.
    pub fn is_connected_subset(&self, set: &[usize]) -> bool {
        let mut distinct = set.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let Some(&start) = distinct.first() else {
            return false;
        };
        let mut inside = vec![false; self.adj.len()];
        for &v in &distinct {
            inside[v] = true;
        }
        inside[start] = false;
        let mut stack = vec![start];
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if inside[w] {
                    inside[w] = false;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == distinct.len()
    }

    /// BFS tree from `root` restricted to vertices with `allowed[v]`;
    /// returns parent pointers (`usize::MAX` for root and unreached).
    pub fn bfs_tree(&self, root: usize, allowed: &[bool]) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        parent
    }
}

/// Path between `u` and `v` in a rooted tree given by parent pointers.
pub fn tree_path(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let ancestors = |mut x: usize| {
        let mut chain = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            chain.push(x);
        }
        chain
    };
    let up_u = ancestors(u);
    let up_v = ancestors(v);
    let on_u: std::collections::HashSet<usize> = up_u.iter().copied().collect();
    let meet_idx_v = up_v
        .iter()
        .position(|x| on_u.contains(x))
        .expect("vertices in the same tree");
    let meet = up_v[meet_idx_v];
    let meet_idx_u = up_u.iter().position(|&x| x == meet).unwrap();
    let mut path: Vec<usize> = up_u[..=meet_idx_u].to_vec();
    path.extend(up_v[..meet_idx_v].iter().rev());
    path
}

/// The vertex common to all three pairwise tree paths between `a`, `b`, `c`.
pub fn tree_median(parent: &[usize], a: usize, b: usize, c: usize) -> usize {
    let ab = tree_path(parent, a, b);
    let ac: std::collections::HashSet<usize> = tree_path(parent, a, c).into_iter().collect();
    let bc: std::collections::HashSet<usize> = tree_path(parent, b, c).into_iter().collect();
    ab.into_iter()
        .find(|x| ac.contains(x) && bc.contains(x))
        .expect("tree paths share the median")
}
