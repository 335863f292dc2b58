//! Planarity testing.
//!
//! The graph is split into biconnected blocks; each block is embedded
//! incrementally by the Demoucron–Malgrange–Pertuiset procedure: start from
//! a cycle, repeatedly compute the fragments (bridges) of the block relative
//! to the embedded part, and route a path of a fragment through one of its
//! admissible faces. A fragment with no admissible face proves non-planarity.

use std::collections::HashSet;

use crate::graph::Graph;

pub fn is_planar(g: &Graph) -> bool {
    let n = g.num_vertices();
    let m = g.num_edges();
    if n >= 3 && m > 3 * n - 6 {
        return false;
    }
    biconnected_blocks(g)
        .iter()
        .all(|block| block_is_planar(block))
}

/// A minimal non-planar edge subset (a Kuratowski subdivision), or `None`
/// when `g` is planar.
pub fn kuratowski_edges(g: &Graph) -> Option<Vec<(usize, usize)>> {
    let block = biconnected_blocks(g)
        .into_iter()
        .find(|b| !block_is_planar(b))?;
    let n = g.num_vertices();
    let mut edges = block;
    let mut i = 0;
    while i < edges.len() {
        let removed = edges.remove(i);
        if is_planar(&Graph::from_edges(n, edges.iter().copied())) {
            edges.insert(i, removed);
            i += 1;
        }
    }
    Some(edges)
}

/// Edge sets of the biconnected components (bridges included as one-edge blocks).
pub fn biconnected_blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.num_vertices();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbour index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (u, parent, idx) = *top;
            if idx < g.degree(u) {
                top.2 += 1;
                let w = g.neighbors(u)[idx];
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    edge_stack.push((u, w));
                    stack.push((w, u, 0));
                } else if disc[w] < disc[u] {
                    low[u] = low[u].min(disc[w]);
                    edge_stack.push((u, w));
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] >= disc[parent] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == (parent, u) {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

fn block_is_planar(block: &[(usize, usize)]) -> bool {
    // K5 and K3,3 have 10 and 9 edges
    if block.len() < 9 {
        return true;
    }
    let mut ids: Vec<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let local = |x: usize| ids.binary_search(&x).unwrap();
    let n = ids.len();
    if block.len() > 3 * n - 6 {
        return false;
    }
    let g = Graph::from_edges(n, block.iter().map(|&(u, v)| (local(u), local(v))));
    Embedder::new(&g).run()
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

struct Embedder<'a> {
    g: &'a Graph,
    on: Vec<bool>,
    edges: HashSet<(usize, usize)>,
    faces: Vec<Vec<usize>>,
}

struct Fragment {
    attachments: Vec<usize>,
    /// Component vertices; empty for a chord.
    inner: Vec<usize>,
}

impl<'a> Embedder<'a> {
    fn new(g: &'a Graph) -> Self {
        Embedder {
            g,
            on: vec![false; g.num_vertices()],
            edges: HashSet::new(),
            faces: Vec::new(),
        }
    }

    fn run(mut self) -> bool {
        let cycle = self.find_cycle();
        for w in 0..cycle.len() {
            let (u, v) = (cycle[w], cycle[(w + 1) % cycle.len()]);
            self.on[u] = true;
            self.edges.insert(key(u, v));
        }
        self.faces = vec![cycle.clone(), cycle];

        let total = self.g.num_edges();
        while self.edges.len() < total {
            let fragments = self.fragments();
            let mut vertex_faces: Vec<Vec<usize>> = vec![Vec::new(); self.g.num_vertices()];
            for (fi, face) in self.faces.iter().enumerate() {
                for &v in face {
                    vertex_faces[v].push(fi);
                }
            }
            let mut choice: Option<(usize, usize)> = None;
            for (idx, frag) in fragments.iter().enumerate() {
                let mut admissible = vertex_faces[frag.attachments[0]].clone();
                for &a in &frag.attachments[1..] {
                    admissible.retain(|f| vertex_faces[a].contains(f));
                }
                match admissible.len() {
                    0 => return false,
                    1 => {
                        choice = Some((idx, admissible[0]));
                        break;
                    }
                    _ => {
                        if choice.is_none() {
                            choice = Some((idx, admissible[0]));
                        }
                    }
                }
            }
            let (idx, face) = choice.expect("a non-embedded edge yields a fragment");
            let path = self.fragment_path(&fragments[idx]);
            self.embed_path(face, &path);
        }
        true
    }

    fn find_cycle(&self) -> Vec<usize> {
        let n = self.g.num_vertices();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (u, idx) = *top;
            if idx == self.g.degree(u) {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let w = self.g.neighbors(u)[idx];
            if w == parent[u] {
                continue;
            }
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                parent[w] = u;
                stack.push((w, 0));
            } else if depth[w] < depth[u] {
                let mut cycle = vec![u];
                let mut x = u;
                while x != w {
                    x = parent[x];
                    cycle.push(x);
                }
                return cycle;
            }
        }
        unreachable!("a block with at least two edges contains a cycle")
    }

    fn fragments(&self) -> Vec<Fragment> {
        let n = self.g.num_vertices();
        let mut out = Vec::new();
        for (u, v) in self.g.edges() {
            if self.on[u] && self.on[v] && !self.edges.contains(&(u, v)) {
                out.push(Fragment {
                    attachments: vec![u, v],
                    inner: Vec::new(),
                });
            }
        }
        let mut seen = vec![false; n];
        for s in 0..n {
            if self.on[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut inner = vec![s];
            let mut attachments = Vec::new();
            let mut i = 0;
            while i < inner.len() {
                let u = inner[i];
                i += 1;
                for &w in self.g.neighbors(u) {
                    if self.on[w] {
                        attachments.push(w);
                    } else if !seen[w] {
                        seen[w] = true;
                        inner.push(w);
                    }
                }
            }
            attachments.sort_unstable();
            attachments.dedup();
            out.push(Fragment { attachments, inner });
        }
        out
    }

    fn fragment_path(&self, frag: &Fragment) -> Vec<usize> {
        if frag.inner.is_empty() {
            return frag.attachments.clone();
        }
        let n = self.g.num_vertices();
        let mut inside = vec![false; n];
        for &v in &frag.inner {
            inside[v] = true;
        }
        let start = frag.attachments[0];
        let mut prev = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for &w in self.g.neighbors(start) {
            if inside[w] && prev[w] == usize::MAX {
                prev[w] = start;
                queue.push_back(w);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in self.g.neighbors(u) {
                if self.on[w] && w != start {
                    let mut path = vec![w, u];
                    let mut x = u;
                    while prev[x] != start {
                        x = prev[x];
                        path.push(x);
                    }
                    path.push(start);
                    path.reverse();
                    return path;
                }
                if inside[w] && prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        unreachable!("fragments of a biconnected graph have two attachments")
    }

    fn embed_path(&mut self, face_idx: usize, path: &[usize]) {
        let face = std::mem::take(&mut self.faces[face_idx]);
        let (u, v) = (path[0], *path.last().unwrap());
        let len = face.len();
        let pu = face.iter().position(|&x| x == u).unwrap();
        let pv = face.iter().position(|&x| x == v).unwrap();
        let arc = |from: usize, to: usize| {
            let mut seq = Vec::new();
            let mut i = from;
            loop {
                seq.push(face[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % len;
            }
            seq
        };
        let interior = &path[1..path.len() - 1];
        let mut first = arc(pu, pv);
        first.extend(interior.iter().rev());
        let mut second = arc(pv, pu);
        second.extend(interior.iter());
        self.faces[face_idx] = first;
        self.faces.push(second);
        for &x in path {
            self.on[x] = true;
        }
        for w in path.windows(2) {
            self.edges.insert(key(w[0], w[1]));
        }
    }
}
