//! Tree decompositions: validation, exact small-width construction, a
//! min-fill heuristic, and a line-oriented text format.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const EXACT_WIDTH_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; no validation happens here.
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, edges }
    }

    pub fn trivial(n: usize) -> Self {
        TreeDecomposition::new(vec![(0..n).collect()], Vec::new())
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_nodes(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (0 for decompositions of the empty graph).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub(crate) fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// `b <node> <members...>` lines followed by `e <node> <node>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, bag) in self.bags.iter().enumerate() {
            let _ = write!(out, "b {i}");
            for v in bag {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "e {i} {j}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
        let mut edges = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let err = |m: &str| Error::Parse {
                line: idx + 1,
                message: m.to_string(),
            };
            let mut fields = line.split_whitespace();
            let Some(tag) = fields.next() else { continue };
            let nums = fields
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| err("expected a non-negative integer"))
                })
                .collect::<Result<Vec<_>>>()?;
            match tag {
                "b" => {
                    let (&id, members) =
                        nums.split_first().ok_or_else(|| err("missing node id"))?;
                    if bags.len() <= id {
                        bags.resize(id + 1, None);
                    }
                    if bags[id].replace(members.to_vec()).is_some() {
                        return Err(err("duplicate node id"));
                    }
                }
                "e" if nums.len() == 2 => edges.push((nums[0], nums[1])),
                _ => return Err(err("expected `b <id> <members...>` or `e <id> <id>`")),
            }
        }
        let bags = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                b.ok_or_else(|| Error::InvalidDecomposition(format!("node {i} has no bag")))
            })
            .collect::<Result<Vec<_>>>()?;
        if edges
            .iter()
            .any(|&(i, j)| i >= bags.len() || j >= bags.len())
        {
            return Err(Error::InvalidDecomposition(
                "tree edge refers to a missing node".into(),
            ));
        }
        Ok(TreeDecomposition::new(bags, edges))
    }
}

/// Checks vertex coverage, edge coverage and connectedness of every vertex's
/// occurrence set, plus that the bag graph is a tree.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> bool {
    check_decomposition(g, td).is_ok()
}

pub fn check_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidDecomposition(m));
    let n = g.num_vertices();
    let t = td.num_nodes();
    if t == 0 {
        return if n == 0 {
            Ok(())
        } else {
            bad("no bags".into())
        };
    }
    if td.edges.len() != t - 1 {
        return bad(format!("{} tree edges for {t} nodes", td.edges.len()));
    }
    let tree = Graph::from_edges(t, td.edges.iter().copied());
    if tree.num_edges() != t - 1 || tree.components().0 != 1 {
        return bad("bag graph is not a tree".into());
    }
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return bad(format!("bag {i} contains unknown vertex {v}"));
            }
            occurs[v].push(i);
        }
    }
    if let Some(v) = occurs.iter().position(Vec::is_empty) {
        return bad(format!("vertex {v} is in no bag"));
    }
    for (u, v) in g.edges() {
        if !occurs[u]
            .iter()
            .any(|i| td.bags[*i].binary_search(&v).is_ok())
        {
            return bad(format!("edge {u}-{v} is not covered"));
        }
    }
    for (v, nodes) in occurs.iter().enumerate() {
        if !tree.is_connected_subset(nodes) {
            return bad(format!("bags containing {v} are not connected"));
        }
    }
    Ok(())
}

/// A decomposition of width at most `target_width`, or `None` if the
/// treewidth exceeds it. Exact for `target_width <= EXACT_WIDTH_CAP`.
pub fn decompose(g: &Graph, target_width: usize) -> Result<Option<TreeDecomposition>> {
    if target_width > EXACT_WIDTH_CAP {
        return Err(Error::CapExceeded {
            what: "exact decomposition width",
            value: target_width,
            cap: EXACT_WIDTH_CAP,
        });
    }
    let heuristic = min_fill_order(g);
    if elimination_width(g, &heuristic) <= target_width {
        return Ok(Some(from_elimination_order(g, &heuristic)));
    }
    let (count, label) = g.components();
    let mut order = Vec::with_capacity(g.num_vertices());
    for comp in 0..count {
        let keep: Vec<bool> = label.iter().map(|&l| l == comp).collect();
        let (sub, old) = g.induced(&keep);
        match ExactSearch::new(&sub, target_width).run() {
            Some(local) => order.extend(local.into_iter().map(|v| old[v])),
            None => return Ok(None),
        }
    }
    Ok(Some(from_elimination_order(g, &order)))
}

/// Min-fill heuristic decomposition; valid for any graph, width unbounded.
pub fn heuristic_decomposition(g: &Graph) -> TreeDecomposition {
    from_elimination_order(g, &min_fill_order(g))
}

fn min_fill_order(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a].contains(&b) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, nb.len(), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let v = best.unwrap().2;
        eliminate(&mut adj, v);
        alive[v] = false;
        order.push(v);
    }
    order
}

fn eliminate(adj: &mut [BTreeSet<usize>], v: usize) {
    let nb: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
    for &a in &nb {
        adj[a].remove(&v);
        for &b in &nb {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
}

fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    let mut adj: Vec<BTreeSet<usize>> = (0..g.num_vertices())
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut width = 0;
    for &v in order {
        width = width.max(adj[v].len());
        eliminate(&mut adj, v);
    }
    width
}

/// Standard construction: the bag of `v` is `v` plus its later neighbours in
/// the filled graph, hung below the bag of the earliest such neighbour.
pub fn from_elimination_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.num_vertices();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    }
    let mut rank = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent_vertex = Vec::with_capacity(n);
    for &v in order {
        let later: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = later.clone();
        bag.push(v);
        bags.push(bag);
        parent_vertex.push(later.iter().copied().min_by_key(|&u| rank[u]));
        eliminate(&mut adj, v);
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut roots = Vec::new();
    for (i, p) in parent_vertex.iter().enumerate() {
        match p {
            Some(u) => edges.push((i, rank[*u])),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, edges)
}

type Bits = Vec<u64>;

fn bit(set: &Bits, i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut Bits, i: usize, on: bool) {
    if on {
        set[i / 64] |= 1 << (i % 64);
    } else {
        set[i / 64] &= !(1 << (i % 64));
    }
}

fn popcount(set: &Bits) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn ones(set: &Bits) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(wi, &w)| {
        (0..64)
            .filter(move |b| w >> b & 1 == 1)
            .map(move |b| wi * 64 + b)
    })
}

/// Depth-first search over elimination orders of a connected graph for
/// width at most `k`, with safe reductions and memoised failures.
struct ExactSearch {
    n: usize,
    k: usize,
    failed: HashSet<Bits>,
    adj: Vec<Bits>,
}

impl ExactSearch {
    fn new(g: &Graph, k: usize) -> Self {
        let n = g.num_vertices();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![vec![0u64; words]; n];
        for (u, v) in g.edges() {
            set_bit(&mut adj[u], v, true);
            set_bit(&mut adj[v], u, true);
        }
        ExactSearch {
            n,
            k,
            failed: HashSet::new(),
            adj,
        }
    }

    fn run(&mut self) -> Option<Vec<usize>> {
        let words = self.n.div_ceil(64).max(1);
        let mut alive = vec![0u64; words];
        for v in 0..self.n {
            set_bit(&mut alive, v, true);
        }
        let adj = self.adj.clone();
        let mut order = Vec::new();
        if self.search(adj, alive, &mut order) {
            Some(order)
        } else {
            None
        }
    }

    fn eliminate(adj: &mut [Bits], alive: &mut Bits, v: usize) {
        let nb = adj[v].clone();
        for u in ones(&nb) {
            for (w, other) in adj[u].iter_mut().zip(&nb) {
                *w |= other;
            }
            set_bit(&mut adj[u], u, false);
            set_bit(&mut adj[u], v, false);
        }
        adj[v].iter_mut().for_each(|w| *w = 0);
        set_bit(alive, v, false);
    }

    fn is_clique(adj: &[Bits], members: &[usize]) -> bool {
        members
            .iter()
            .enumerate()
            .all(|(i, &a)| members[i + 1..].iter().all(|&b| bit(&adj[a], b)))
    }

    fn search(&mut self, mut adj: Vec<Bits>, mut alive: Bits, order: &mut Vec<usize>) -> bool {
        let mark = order.len();
        // safe reductions: simplicial or almost simplicial vertices of degree <= k
        loop {
            if popcount(&alive) <= self.k + 1 {
                order.extend(ones(&alive));
                return true;
            }
            let mut reduced = false;
            for v in ones(&alive).collect::<Vec<_>>() {
                let nb: Vec<usize> = ones(&adj[v]).collect();
                let simplicial = Self::is_clique(&adj, &nb);
                if simplicial && nb.len() > self.k {
                    order.truncate(mark);
                    return false;
                }
                let safe = nb.len() <= self.k
                    && (simplicial
                        || (0..nb.len()).any(|skip| {
                            let rest: Vec<usize> = nb
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &u)| u)
                                .collect();
                            Self::is_clique(&adj, &rest)
                        }));
                if safe {
                    Self::eliminate(&mut adj, &mut alive, v);
                    order.push(v);
                    reduced = true;
                    break;
                }
            }
            if !reduced {
                break;
            }
        }
        if self.failed.contains(&alive) {
            order.truncate(mark);
            return false;
        }
        let candidates: Vec<usize> = ones(&alive)
            .filter(|&v| popcount(&adj[v]) <= self.k)
            .collect();
        for v in candidates {
            let mut next_adj = adj.clone();
            let mut next_alive = alive.clone();
            Self::eliminate(&mut next_adj, &mut next_alive, v);
            order.push(v);
            if self.search(next_adj, next_alive, order) {
                return true;
            }
            order.pop();
        }
        self.failed.insert(alive);
        order.truncate(mark);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::nested_example;
    use crate::incidence::build_incidence;

    #[test]
    fn trivial_and_path_decompositions() {
        let g = Graph::path(3);
        let t = TreeDecomposition::trivial(3);
        assert!(validate_decomposition(&g, &t));
        assert_eq!(t.width(), 2);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(validate_decomposition(&g, &td));
        assert_eq!(td.width(), 1);
        let broken = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]);
        assert!(!validate_decomposition(&g, &broken));
    }

    #[test]
    fn connectivity_condition_is_checked() {
        let g = Graph::path(3);
        // vertex 0 occurs in bags 0 and 2, which are not adjacent
        let td =
            TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![0]], vec![(0, 1), (1, 2)]);
        assert!(!validate_decomposition(&g, &td));
        let not_tree = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![]);
        assert!(!validate_decomposition(&g, &not_tree));
    }

    #[test]
    fn path_has_width_one() {
        let td = decompose(&Graph::path(6), 1).unwrap().unwrap();
        assert!(validate_decomposition(&Graph::path(6), &td));
        assert_eq!(td.width(), 1);
        assert!(decompose(&Graph::cycle(5), 1).unwrap().is_none());
    }

    #[test]
    fn nested_example_has_width_at_most_three() {
        let inc = build_incidence(&nested_example(), false);
        let td = decompose(inc.graph(), 3).unwrap().unwrap();
        assert!(validate_decomposition(inc.graph(), &td));
        assert!(td.width() <= 3);
    }

    #[test]
    fn four_grid_exceeds_width_three() {
        assert!(decompose(&Graph::grid(4), 3).unwrap().is_none());
        let td = decompose(&Graph::grid(4), 4).unwrap().unwrap();
        assert!(validate_decomposition(&Graph::grid(4), &td));
        assert!(decompose(&Graph::complete(5), 3).unwrap().is_none());
    }

    #[test]
    fn exact_search_beats_heuristic_when_needed() {
        // the 3-cube has treewidth 3
        let cube = Graph::from_edges(
            8,
            [
                (0, 1),
                (1, 3),
                (3, 2),
                (2, 0),
                (4, 5),
                (5, 7),
                (7, 6),
                (6, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        );
        let mut search = ExactSearch::new(&cube, 3);
        let order = search.run().unwrap();
        let td = from_elimination_order(&cube, &order);
        assert!(validate_decomposition(&cube, &td));
        assert!(td.width() <= 3);
        assert!(ExactSearch::new(&cube, 2).run().is_none());
    }

    #[test]
    fn cap_and_empty_graph() {
        assert!(matches!(
            decompose(&Graph::path(3), 7),
            Err(Error::CapExceeded { .. })
        ));
        let td = decompose(&Graph::new(0), 0).unwrap().unwrap();
        assert!(validate_decomposition(&Graph::new(0), &td));
    }

    #[test]
    fn text_round_trip() {
        let td = decompose(&Graph::grid(3), 3).unwrap().unwrap();
        assert_eq!(TreeDecomposition::from_text(&td.to_text()).unwrap(), td);
        assert!(TreeDecomposition::from_text("b 0 1\nx 3\n").is_err());
        assert!(TreeDecomposition::from_text("b 1 1\n").is_err());
    }

    #[test]
    fn heuristic_is_always_valid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..14);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.3))
                .collect();
            let g = Graph::from_edges(n, edges);
            assert!(validate_decomposition(&g, &heuristic_decomposition(&g)));
            for k in 0..=3 {
                if let Some(td) = decompose(&g, k).unwrap() {
                    assert!(validate_decomposition(&g, &td));
                    assert!(td.width() <= k);
                }
            }
        }
    }
}
