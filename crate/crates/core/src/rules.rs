//! The auxiliary graphs `G_O` and `G_m` on common external killers, the
//! three candidate-set rules, and an enumeration of the guesses that feed
//! them, usable on tiny inputs only.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::formula::Variable;
use crate::incidence::SignedBipartiteGraph;
use crate::obstruction::{
    classify_kill_in, common_external_killers_in, KillClassification, NestedObstruction,
};

pub type Edge = (Variable, Variable);

fn edge(u: Variable, v: Variable) -> Edge {
    (u.min(v), u.max(v))
}

/// Simple graph on the common external killers `Z` for one obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxGraphGO {
    pub z: BTreeSet<Variable>,
    pub edges: BTreeSet<Edge>,
}

impl AuxGraphGO {
    pub fn degree(&self, v: Variable) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn min_degree(&self) -> usize {
        self.z.iter().map(|&v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn has_no_isolated_vertex(&self) -> bool {
        self.z.len() >= 2 && self.min_degree() >= 1
    }

    fn pick_partner(&self, candidates: impl Iterator<Item = Variable>) -> Option<Variable> {
        candidates.min_by_key(|&u| (self.degree(u), u))
    }
}

/// Builds `G_O` in two phases: first pair isolated vertices through a common
/// clause of `O`, then through a path in `O` whose interior avoids the
/// neighbourhood of the other killers. Partners of minimum degree are
/// preferred, ties by ascending id.
pub fn build_go(
    inc: &SignedBipartiteGraph,
    o: &NestedObstruction,
    z: &BTreeSet<Variable>,
) -> Result<AuxGraphGO> {
    if z.len() < 2 {
        return Err(Error::Precondition(
            "G_O needs at least two common killers".into(),
        ));
    }
    let mut nodes = BTreeMap::new();
    for &x in z {
        if !matches!(
            classify_kill_in(inc, x, o),
            KillClassification::External { .. }
        ) {
            return Err(Error::Precondition(format!(
                "{x} is not an external killer"
            )));
        }
        nodes.insert(
            x,
            inc.node_of_variable(x)
                .expect("killer is a variable of the graph"),
        );
    }
    let on_o = o.vertices();
    let g = inc.graph();
    let o_nbrs: BTreeMap<Variable, BTreeSet<usize>> = nodes
        .iter()
        .map(|(&x, &node)| {
            (
                x,
                g.neighbors(node)
                    .iter()
                    .copied()
                    .filter(|w| on_o.contains(w))
                    .collect(),
            )
        })
        .collect();
    let mut go = AuxGraphGO {
        z: z.clone(),
        edges: BTreeSet::new(),
    };

    // phase 1: common neighbour on O
    loop {
        let mut added = None;
        for &v in z.iter().filter(|&&v| go.degree(v) == 0) {
            let partners = z
                .iter()
                .copied()
                .filter(|&u| u != v && !o_nbrs[&u].is_disjoint(&o_nbrs[&v]));
            if let Some(u) = go.pick_partner(partners) {
                added = Some(edge(u, v));
                break;
            }
        }
        match added {
            Some(e) => go.edges.insert(e),
            None => break,
        };
    }

    // phase 2: a path inside O with a clean interior
    let o_graph = o.as_graph(g.num_vertices());
    while let Some(v) = z.iter().copied().find(|&v| go.degree(v) == 0) {
        let clean = |w: usize| {
            !g.neighbors(w).iter().any(|n| {
                inc.variable_of(*n)
                    .is_some_and(|x| x != v && z.contains(&x))
            })
        };
        let mut reached = vec![false; g.num_vertices()];
        let mut queue: VecDeque<usize> = o_nbrs[&v].iter().copied().collect();
        for &s in &queue {
            reached[s] = true;
        }
        let sources = o_nbrs[&v].clone();
        while let Some(w) = queue.pop_front() {
            if !sources.contains(&w) && !clean(w) {
                continue;
            }
            for &n in o_graph.neighbors(w) {
                if !reached[n] {
                    reached[n] = true;
                    queue.push_back(n);
                }
            }
        }
        let partners = z
            .iter()
            .copied()
            .filter(|&u| u != v && o_nbrs[&u].iter().any(|&w| reached[w]));
        let u = go.pick_partner(partners).ok_or_else(|| {
            Error::Structural(format!("G_O has an isolated vertex {v} after both phases"))
        })?;
        go.edges.insert(edge(u, v));
    }
    Ok(go)
}

/// Union of the `G_O` over a family, counting multiplicities and recording
/// the contributing obstruction indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiGraphGm {
    pub z: BTreeSet<Variable>,
    pub origins: BTreeMap<Edge, Vec<usize>>,
}

impl MultiGraphGm {
    pub fn from_multiplicities(
        z: BTreeSet<Variable>,
        edges: impl IntoIterator<Item = (Edge, usize)>,
    ) -> Self {
        let origins = edges
            .into_iter()
            .map(|((u, v), m)| (edge(u, v), (0..m).collect()))
            .collect();
        MultiGraphGm { z, origins }
    }

    pub fn multiplicity(&self, u: Variable, v: Variable) -> usize {
        self.origins.get(&edge(u, v)).map_or(0, Vec::len)
    }

    /// Degree after merging parallel edges.
    pub fn simple_degree(&self, v: Variable) -> usize {
        self.origins
            .keys()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

pub fn build_gm(
    inc: &SignedBipartiteGraph,
    os: &[NestedObstruction],
    z: &BTreeSet<Variable>,
) -> Result<MultiGraphGm> {
    let mut gm = MultiGraphGm {
        z: z.clone(),
        origins: BTreeMap::new(),
    };
    for (idx, o) in os.iter().enumerate() {
        for e in build_go(inc, o, z)?.edges {
            gm.origins.entry(e).or_default().push(idx);
        }
    }
    Ok(gm)
}

/// Rule 1 (`|Z| < |O_s|`: all of `Z`), Rule 2 (first edge of multiplicity
/// at least `2·2^k + 1`: its endpoints), Rule 3 (the `2k` vertices of
/// highest merged degree, ties by id). Returns the rule number and `S`.
pub fn candidate_set(
    z: &BTreeSet<Variable>,
    num_obstructions: usize,
    gm: &MultiGraphGm,
    k: usize,
) -> Result<(u8, BTreeSet<Variable>)> {
    if num_obstructions == 0 {
        return Err(Error::Precondition(
            "candidate sets need a nonempty family".into(),
        ));
    }
    if z.len() < num_obstructions {
        return Ok((1, z.clone()));
    }
    let threshold = 1usize
        .checked_shl(k as u32 + 1)
        .map_or(usize::MAX, |t| t.saturating_add(1));
    if let Some((&(u, v), _)) = gm.origins.iter().find(|(_, o)| o.len() >= threshold) {
        return Ok((2, BTreeSet::from([u, v])));
    }
    let mut by_degree: Vec<Variable> = z.iter().copied().collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(gm.simple_degree(v)), v));
    Ok((3, by_degree.into_iter().take(2 * k).collect()))
}

/// One series of guesses: obstructions allowed to be killed internally, the
/// family `O_s` killed externally by the same backdoor variables, and the
/// resulting candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guess {
    pub internal: Vec<usize>,
    pub selected: Vec<usize>,
    pub z: BTreeSet<Variable>,
    pub rule: Option<u8>,
    pub s: BTreeSet<Variable>,
}

pub const GUESS_CAP: usize = 100_000;

/// Enumerates every guess over a small family of vertex-disjoint
/// obstructions: `min(k, |O|)` internal ones, then `min(same, |O'|)` of the
/// rest. An empty `Z` admits no conforming backdoor and gives `S = ∅`; a
/// single common killer that Rule 1 does not catch is returned as `S = Z`.
pub fn enumerate_guesses(
    inc: &SignedBipartiteGraph,
    obstructions: &[NestedObstruction],
    k: usize,
    same: usize,
) -> Result<Vec<Guess>> {
    let n = obstructions.len();
    let internal_size = k.min(n);
    let selected_size = same.min(n - internal_size);
    let total =
        binomial(n, internal_size).saturating_mul(binomial(n - internal_size, selected_size));
    if total > GUESS_CAP {
        return Err(Error::CapExceeded {
            what: "guess enumeration",
            value: total,
            cap: GUESS_CAP,
        });
    }
    let mut out = Vec::new();
    for internal in combinations(n, internal_size) {
        let rest: Vec<usize> = (0..n).filter(|i| !internal.contains(i)).collect();
        for pick in combinations(rest.len(), selected_size) {
            let selected: Vec<usize> = pick.iter().map(|&i| rest[i]).collect();
            let family: Vec<NestedObstruction> =
                selected.iter().map(|&i| obstructions[i].clone()).collect();
            let z = if family.is_empty() {
                BTreeSet::new()
            } else {
                common_external_killers_in(inc, &family)
            };
            let (rule, s) = if family.is_empty() || z.is_empty() {
                (None, BTreeSet::new())
            } else if z.len() < family.len() {
                (Some(1), z.clone())
            } else if z.len() == 1 {
                (None, z.clone())
            } else {
                let gm = build_gm(inc, &family, &z)?;
                let (rule, s) = candidate_set(&z, family.len(), &gm, k)?;
                (Some(rule), s)
            };
            out.push(Guess {
                internal: internal.clone(),
                selected,
                z,
                rule,
                s,
            });
        }
    }
    Ok(out)
}

/// Union of the candidate sets over all guesses.
pub fn guess_candidates(
    inc: &SignedBipartiteGraph,
    obstructions: &[NestedObstruction],
    k: usize,
    same: usize,
) -> Result<BTreeSet<Variable>> {
    Ok(enumerate_guesses(inc, obstructions, k, same)?
        .into_iter()
        .flat_map(|g| g.s)
        .collect())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backdoor::verify_strong;
    use crate::formula::{CnfFormula, Literal};
    use crate::incidence::build_incidence;
    use crate::paths::Path;

    fn z(ids: &[u32]) -> BTreeSet<Variable> {
        ids.iter().map(|&i| Variable(i)).collect()
    }

    /// Sample obstruction (a=1, b=2, pendants 3,4,5; clauses c1..c5) plus the
    /// given extra clauses over variables 6 and 7.
    fn with_killers(extra: &[(usize, i64)]) -> (SignedBipartiteGraph, NestedObstruction) {
        let mut clauses: Vec<Vec<i64>> = vec![
            vec![1, 3],
            vec![3, 2],
            vec![1, 4],
            vec![4, 2],
            vec![1, 2, 5],
        ];
        for &(c, lit) in extra {
            clauses[c].push(lit);
        }
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        let f = CnfFormula::from_dimacs_clauses(7, &refs).unwrap();
        let inc = build_incidence(&f, false);
        // variables 1..7 are nodes 0..6, clauses c1..c5 are nodes 7..11
        let o = NestedObstruction {
            a: 0,
            b: 1,
            paths: [
                Path::new(vec![0, 7, 2, 8, 1]),
                Path::new(vec![0, 9, 3, 10, 1]),
                Path::new(vec![0, 11, 1]),
            ],
            pendants: [2, 3, 4],
            attachments: [7, 9, 11],
        };
        assert!(crate::obstruction::verify_obstruction(&inc, &o));
        (inc, o)
    }

    #[test]
    fn phase_one_pairs_through_a_common_clause() {
        let (inc, o) = with_killers(&[(0, 6), (2, -6), (0, 7), (3, -7)]);
        let go = build_go(&inc, &o, &z(&[6, 7])).unwrap();
        assert_eq!(go.edges, BTreeSet::from([(Variable(6), Variable(7))]));
        assert!(go.has_no_isolated_vertex());
    }

    #[test]
    fn phase_two_pairs_along_a_path() {
        // 6 touches c1 and c3, 7 touches c2 and c4: no shared clause
        let (inc, o) = with_killers(&[(0, 6), (2, -6), (1, 7), (3, -7)]);
        let go = build_go(&inc, &o, &z(&[6, 7])).unwrap();
        assert_eq!(go.edges, BTreeSet::from([(Variable(6), Variable(7))]));
        assert!(go.has_no_isolated_vertex());
    }

    #[test]
    fn degenerate_and_invalid_killer_sets() {
        let (inc, o) = with_killers(&[(0, 6), (2, -6)]);
        assert!(matches!(
            build_go(&inc, &o, &z(&[6])),
            Err(Error::Precondition(_))
        ));
        // 7 occurs only positively, so it is no killer
        let (inc, o) = with_killers(&[(0, 6), (2, -6), (0, 7)]);
        assert!(matches!(
            build_go(&inc, &o, &z(&[6, 7])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn multigraph_counts_contributions() {
        let (inc, o) = with_killers(&[(0, 6), (2, -6), (0, 7), (3, -7)]);
        let gm = build_gm(&inc, &[o.clone(), o.clone()], &z(&[6, 7])).unwrap();
        assert_eq!(gm.multiplicity(Variable(6), Variable(7)), 2);
        let single = build_gm(&inc, std::slice::from_ref(&o), &z(&[6, 7])).unwrap();
        assert_eq!(single.origins.len(), 1);
        assert_eq!(single.multiplicity(Variable(7), Variable(6)), 1);
    }

    #[test]
    fn rule_one() {
        let gm = MultiGraphGm::default();
        assert_eq!(candidate_set(&z(&[1]), 3, &gm, 1).unwrap(), (1, z(&[1])));
        assert!(candidate_set(&z(&[1]), 0, &gm, 1).is_err());
    }

    #[test]
    fn rule_two_threshold() {
        let zs = z(&[1, 2, 3, 4, 5]);
        let at =
            |m| MultiGraphGm::from_multiplicities(zs.clone(), [((Variable(1), Variable(2)), m)]);
        assert_eq!(candidate_set(&zs, 4, &at(5), 1).unwrap(), (2, z(&[1, 2])));
        assert_eq!(candidate_set(&zs, 4, &at(4), 1).unwrap().0, 3);
    }

    #[test]
    fn rule_three_on_a_star() {
        let zs = z(&[1, 2, 3, 4, 5, 6]);
        let mut edges: Vec<(Edge, usize)> =
            (2..=6).map(|i| ((Variable(1), Variable(i)), 2)).collect();
        edges.push(((Variable(3), Variable(4)), 1));
        let gm = MultiGraphGm::from_multiplicities(zs.clone(), edges);
        assert_eq!(candidate_set(&zs, 6, &gm, 1).unwrap(), (3, z(&[1, 3])));
    }

    fn strong_backdoors_up_to(f: &CnfFormula, k: usize) -> Vec<BTreeSet<Variable>> {
        let vars = f.variables();
        let mut out = Vec::new();
        for size in 1..=k {
            for idx in combinations(vars.len(), size) {
                let b: BTreeSet<Variable> = idx.iter().map(|&i| vars[i]).collect();
                if verify_strong(f, &b).unwrap() {
                    out.push(b);
                }
            }
        }
        out
    }

    fn conforms(
        inc: &SignedBipartiteGraph,
        os: &[NestedObstruction],
        g: &Guess,
        b: &BTreeSet<Variable>,
    ) -> bool {
        let kind = |x: Variable, o: &NestedObstruction| classify_kill_in(inc, x, o);
        let internally = (0..os.len()).filter(|&i| {
            b.iter()
                .any(|&x| kind(x, &os[i]) == KillClassification::Internal)
        });
        if internally.into_iter().any(|i| !g.internal.contains(&i)) {
            return false;
        }
        let killer_sets: Vec<BTreeSet<Variable>> = g
            .selected
            .iter()
            .map(|&i| {
                b.iter()
                    .copied()
                    .filter(|&x| kind(x, &os[i]) != KillClassification::None)
                    .collect()
            })
            .collect();
        !killer_sets.is_empty()
            && !killer_sets[0].is_empty()
            && killer_sets.iter().all(|s| *s == killer_sets[0])
    }

    /// Grid formula on the 8-grid with extra variables inserted into its
    /// clauses by parity: each extra variable `e` gets sign `+` in clauses
    /// with `(i + j) % 4 == 2` and `-` otherwise, restricted to rows `<= rows`.
    fn grid_with_killers(extra: &[usize]) -> (CnfFormula, Vec<NestedObstruction>) {
        let (base, layout) = crate::families::grid_formula(8, false);
        let nv = base.num_variables() as u32;
        let mut clauses = Vec::new();
        for i in 1..=8 {
            for j in 1..=8 {
                if let crate::families::Cell::Clause(c) = layout.cell(i, j) {
                    let mut lits = base.clauses()[c].literals().to_vec();
                    for (t, &rows) in extra.iter().enumerate() {
                        if i <= rows {
                            lits.push(Literal::new(Variable(nv + 1 + t as u32), (i + j) % 4 == 2));
                        }
                    }
                    clauses.push((c, crate::Clause::new(lits).unwrap()));
                }
            }
        }
        clauses.sort_by_key(|(c, _)| *c);
        let f = CnfFormula::new(
            (1..=nv + extra.len() as u32).map(Variable),
            clauses.into_iter().map(|(_, c)| c).collect(),
        );
        let inc = build_incidence(&f, false);
        let model = crate::grid_model::GridModel::from_layout(&layout, &inc);
        let os = crate::grid_model::extract_obstructions_from_grid(&model, &inc).unwrap();
        (f, os)
    }

    #[test]
    fn no_isolated_killers_on_grid_families() {
        let (f, os) = grid_with_killers(&[8, 8, 6]);
        let inc = build_incidence(&f, false);
        assert_eq!(os.len(), 4);
        let zs = common_external_killers_in(&inc, &os);
        assert_eq!(zs, z(&[33, 34, 35]));
        for o in &os {
            assert!(build_go(&inc, o, &zs).unwrap().has_no_isolated_vertex());
        }
    }

    #[test]
    fn rule_soundness_on_small_grids() {
        for extra in [&[8][..], &[8, 8], &[8, 3]] {
            let (f, os) = grid_with_killers(extra);
            let inc = build_incidence(&f, false);
            for k in 1..=2 {
                let backdoors = strong_backdoors_up_to(&f, k);
                for same in 1..=2 {
                    let guesses = enumerate_guesses(&inc, &os, k, same).unwrap();
                    for g in &guesses {
                        for b in &backdoors {
                            if conforms(&inc, &os, g, b) {
                                assert!(
                                    !b.is_disjoint(&g.s),
                                    "extra {extra:?}, k {k}, guess {g:?}, backdoor {b:?}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn combination_helpers() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
