//! Paths and the unit-capacity flow search for disjoint paths.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A simple path, stored as its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    /// Panics on an empty vertex list.
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        Path { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn internal(&self) -> &[usize] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.vertices.clone();
        v.reverse();
        Path { vertices: v }
    }

    /// Distinct vertices with every consecutive pair adjacent in `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut seen = self.vertices.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == self.vertices.len()
            && self.vertices.iter().all(|&v| g.contains(v))
            && self.edges().all(|(u, v)| g.has_edge(u, v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disjointness {
    /// Internally vertex-disjoint (independent) paths.
    Vertex,
    /// Pairwise edge-disjoint paths.
    Edge,
}

/// Whether `paths` are pairwise independent: no path contains an internal
/// vertex of another.
pub fn are_independent(paths: &[&Path]) -> bool {
    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            if i != j && q.internal().iter().any(|v| p.vertices().contains(v)) {
                return false;
            }
        }
    }
    true
}

pub fn are_edge_disjoint(paths: &[&Path]) -> bool {
    let mut all: Vec<(usize, usize)> = paths
        .iter()
        .flat_map(|p| p.edges().map(|(u, v)| (u.min(v), u.max(v))))
        .collect();
    let n = all.len();
    all.sort_unstable();
    all.dedup();
    all.len() == n
}

struct FlowNet {
    out: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i32>,
    orig: Vec<i32>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        FlowNet {
            out: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            orig: Vec::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize, cap: i32, back_cap: i32) {
        let e = self.to.len();
        self.to.extend([v, u]);
        self.cap.extend([cap, back_cap]);
        self.orig.extend([cap, back_cap]);
        self.out[u].push(e);
        self.out[v].push(e + 1);
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.out[u] {
                let w = self.to[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    via[w] = e;
                    if w == t {
                        let mut x = t;
                        while x != s {
                            let e = via[x];
                            self.cap[e] -= 1;
                            self.cap[e ^ 1] += 1;
                            x = self.to[e ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(w);
                }
            }
        }
        false
    }

    fn flow(&self, e: usize) -> i32 {
        self.orig[e] - self.cap[e]
    }
}

/// Finds `k` pairwise independent (vertex mode) or edge-disjoint (edge mode)
/// `a`–`b` paths by unit-capacity augmentation, or `None` if fewer exist.
pub fn disjoint_paths(
    g: &Graph,
    a: usize,
    b: usize,
    k: usize,
    mode: Disjointness,
) -> Result<Option<Vec<Path>>> {
    for v in [a, b] {
        if !g.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if a == b {
        return Err(Error::InvalidArgument("path endpoints must differ".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if g.degree(a) < k || g.degree(b) < k {
        return Ok(None);
    }
    Ok(match mode {
        Disjointness::Vertex => vertex_disjoint(g, a, b, k),
        Disjointness::Edge => edge_disjoint(g, a, b, k),
    })
}

fn vertex_disjoint(g: &Graph, a: usize, b: usize, k: usize) -> Option<Vec<Path>> {
    let n = g.num_vertices();
    let (v_in, v_out) = (|v: usize| 2 * v, |v: usize| 2 * v + 1);
    let mut net = FlowNet::new(2 * n);
    for v in 0..n {
        if v != a && v != b {
            net.add(v_in(v), v_out(v), 1, 0);
        }
    }
    for u in 0..n {
        for &w in g.neighbors(u) {
            if u != b && w != a {
                net.add(v_out(u), v_in(w), 1, 0);
            }
        }
    }
    let (s, t) = (v_out(a), v_in(b));
    let mut found = 0;
    while found < k && net.augment(s, t) {
        found += 1;
    }
    if found < k {
        return None;
    }
    let mut paths = Vec::with_capacity(k);
    for _ in 0..k {
        let mut vertices = vec![a];
        let mut x = s;
        while x != t {
            let e = *net.out[x]
                .iter()
                .find(|&&e| e % 2 == 0 && net.flow(e) > 0)
                .expect("flow conservation");
            net.cap[e] += 1;
            x = net.to[e];
            if x % 2 == 0 {
                vertices.push(x / 2);
            }
        }
        paths.push(Path::new(vertices));
    }
    Some(paths)
}

fn edge_disjoint(g: &Graph, a: usize, b: usize, k: usize) -> Option<Vec<Path>> {
    let n = g.num_vertices();
    let mut net = FlowNet::new(n);
    for (u, w) in g.edges() {
        net.add(u, w, 1, 1);
    }
    let mut found = 0;
    while found < k && net.augment(a, b) {
        found += 1;
    }
    if found < k {
        return None;
    }
    let mut used = vec![false; net.to.len()];
    let mut paths = Vec::with_capacity(k);
    for _ in 0..k {
        let mut walk = vec![a];
        let mut x = a;
        while x != b {
            let e = *net.out[x]
                .iter()
                .find(|&&e| !used[e] && net.flow(e) > 0)
                .expect("flow conservation");
            used[e] = true;
            x = net.to[e];
            if let Some(pos) = walk.iter().position(|&y| y == x) {
                walk.truncate(pos + 1);
            } else {
                walk.push(x);
            }
        }
        paths.push(Path::new(walk));
    }
    Some(paths)
}
