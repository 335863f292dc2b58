//! Model counting by dynamic programming over a tree decomposition of the
//! incidence graph.
//!
//! A table row is a bitmask over the sorted bag: variable bits carry the
//! value, clause bits record whether the clause is already satisfied by a
//! forgotten or present variable.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::decomposition::{check_decomposition, decompose, TreeDecomposition};
use crate::error::{Error, Result};
use crate::formula::CnfFormula;
use crate::incidence::{build_incidence, Sign, SignedBipartiteGraph};
use crate::nested::is_nested;

/// Bags larger than this cannot be indexed by a `u64` row mask.
pub const MAX_BAG: usize = 63;

/// Width guaranteed for the incidence graph of a nested formula.
pub const NESTED_WIDTH: usize = 3;

type Table = HashMap<u64, BigUint>;

struct Dp<'a> {
    inc: &'a SignedBipartiteGraph,
}

fn remove_bit(s: u64, i: usize) -> u64 {
    let low = s & ((1u64 << i) - 1);
    ((s >> (i + 1)) << i) | low
}

fn insert_bit(s: u64, i: usize, value: bool) -> u64 {
    let low = s & ((1u64 << i) - 1);
    ((s >> i) << (i + 1)) | (u64::from(value) << i) | low
}

fn add(table: &mut Table, key: u64, count: BigUint) {
    if count.is_zero() {
        return;
    }
    *table.entry(key).or_default() += count;
}

impl Dp<'_> {
    fn satisfies(&self, var_node: usize, value: bool, clause_node: usize) -> bool {
        match self.inc.sign(var_node, clause_node) {
            Some(Sign::Positive) => value,
            Some(Sign::Negative) => !value,
            None => false,
        }
    }

    fn introduce(&self, bag: &mut Vec<usize>, table: Table, v: usize) -> Table {
        let pos = bag.partition_point(|&u| u < v);
        let mut out = Table::with_capacity(table.len() * 2);
        if self.inc.is_variable(v) {
            for (row, count) in table {
                for value in [false, true] {
                    let mut next = insert_bit(row, pos, value);
                    for (i, &c) in bag.iter().enumerate() {
                        if self.inc.is_clause(c) && self.satisfies(v, value, c) {
                            let j = if i < pos { i } else { i + 1 };
                            next |= 1 << j;
                        }
                    }
                    add(&mut out, next, count.clone());
                }
            }
        } else {
            for (row, count) in table {
                let sat = bag.iter().enumerate().any(|(i, &u)| {
                    self.inc.is_variable(u) && self.satisfies(u, row >> i & 1 == 1, v)
                });
                add(&mut out, insert_bit(row, pos, sat), count);
            }
        }
        bag.insert(pos, v);
        out
    }

    fn forget(&self, bag: &mut Vec<usize>, table: Table, v: usize) -> Table {
        let pos = bag
            .binary_search(&v)
            .expect("forgotten vertex is in the bag");
        let clause = self.inc.is_clause(v);
        let mut out = Table::with_capacity(table.len());
        for (row, count) in table {
            if clause && row >> pos & 1 == 0 {
                continue;
            }
            add(&mut out, remove_bit(row, pos), count);
        }
        bag.remove(pos);
        out
    }

    /// Rows agree on variable bits; clause bits are combined by OR.
    fn join(&self, bag: &[usize], left: Table, right: &Table) -> Table {
        let var_mask: u64 = bag
            .iter()
            .enumerate()
            .filter(|&(_, &u)| self.inc.is_variable(u))
            .fold(0, |m, (i, _)| m | 1 << i);
        let mut by_vars: HashMap<u64, Vec<(u64, &BigUint)>> = HashMap::new();
        for (row, count) in right {
            by_vars
                .entry(row & var_mask)
                .or_default()
                .push((*row, count));
        }
        let mut out = Table::new();
        for (row, count) in left {
            if let Some(matches) = by_vars.get(&(row & var_mask)) {
                for &(other, c) in matches {
                    add(&mut out, row | other, &count * c);
                }
            }
        }
        out
    }

    /// Moves a table from bag `from` to bag `to`.
    fn transfer(&self, from: &[usize], table: Table, to: &[usize]) -> Table {
        let mut bag = from.to_vec();
        let mut table = table;
        for &v in from {
            if to.binary_search(&v).is_err() {
                table = self.forget(&mut bag, table, v);
            }
        }
        for &v in to {
            if bag.binary_search(&v).is_err() {
                table = self.introduce(&mut bag, table, v);
            }
        }
        table
    }
}

/// Counts models of `f` from a tree decomposition of its incidence graph
/// (node ids as laid out by [`build_incidence`] without the universal clause).
pub fn count_models_td(f: &CnfFormula, td: &TreeDecomposition) -> Result<BigUint> {
    let inc = build_incidence(f, false);
    check_decomposition(inc.graph(), td)?;
    if let Some(b) = td.bags().iter().find(|b| b.len() > MAX_BAG) {
        return Err(Error::CapExceeded {
            what: "bag size for counting",
            value: b.len(),
            cap: MAX_BAG,
        });
    }
    let dp = Dp { inc: &inc };
    let adj = td.tree_adjacency();
    let t = td.num_nodes();
    if t == 0 {
        return Ok(BigUint::one());
    }
    // iterative postorder from node 0
    let mut parent = vec![usize::MAX; t];
    let mut order = Vec::with_capacity(t);
    let mut stack = vec![0];
    let mut seen = vec![false; t];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    let mut tables: Vec<Option<Table>> = vec![None; t];
    for &u in order.iter().rev() {
        let bag = &td.bags()[u];
        let mut acc: Option<Table> = None;
        for &c in &adj[u] {
            if c == parent[u] {
                continue;
            }
            let child = tables[c].take().expect("children are processed first");
            let moved = dp.transfer(&td.bags()[c], child, bag);
            acc = Some(match acc {
                None => moved,
                Some(prev) => dp.join(bag, prev, &moved),
            });
        }
        let table = match acc {
            Some(table) => table,
            None => dp.transfer(&[], Table::from([(0, BigUint::one())]), bag),
        };
        tables[u] = Some(table);
    }
    let root = tables[0].take().expect("root table");
    let done = dp.transfer(&td.bags()[0], root, &[]);
    Ok(done.get(&0).cloned().unwrap_or_default())
}

/// Counts models of a nested formula through a width-3 decomposition of its
/// incidence graph.
pub fn count_nested(f: &CnfFormula) -> Result<BigUint> {
    if !is_nested(f) {
        return Err(Error::NotNested);
    }
    let inc = build_incidence(f, false);
    let td = decompose(inc.graph(), NESTED_WIDTH)?.ok_or_else(|| {
        Error::Structural("nested formula without a width-3 decomposition".into())
    })?;
    count_models_td(f, &td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::heuristic_decomposition;
    use crate::families::{disjoint_union, nested_example, random_formula, random_nested_formula};
    use crate::oracle::brute_force_count;
    use rand::{Rng, SeedableRng};

    #[test]
    fn bit_helpers() {
        assert_eq!(remove_bit(0b1011, 1), 0b101);
        assert_eq!(insert_bit(0b101, 1, true), 0b1011);
        assert_eq!(insert_bit(0b101, 0, false), 0b1010);
    }

    #[test]
    fn nested_example_count() {
        assert_eq!(
            count_nested(&nested_example()).unwrap(),
            BigUint::from(12u32)
        );
    }

    #[test]
    fn small_edge_cases() {
        let empty = CnfFormula::default();
        assert_eq!(count_nested(&empty).unwrap(), BigUint::one());
        let free = CnfFormula::new((1..=3).map(crate::Variable), vec![]);
        assert_eq!(count_nested(&free).unwrap(), BigUint::from(8u32));
        let contradiction = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1]]).unwrap();
        assert_eq!(count_nested(&contradiction).unwrap(), BigUint::zero());
        let with_empty =
            CnfFormula::new((1..=2).map(crate::Variable), vec![crate::Clause::empty()]);
        assert_eq!(count_nested(&with_empty).unwrap(), BigUint::zero());
    }

    #[test]
    fn rejects_non_nested_and_bad_decompositions() {
        assert!(matches!(
            count_nested(&disjoint_union(1)),
            Err(Error::NotNested)
        ));
        let f = nested_example();
        let bad = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert!(matches!(
            count_models_td(&f, &bad),
            Err(Error::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn heuristic_decompositions_match_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=9);
            let m = rng.gen_range(0..=10);
            let f = random_formula(&mut rng, n, m, 1..=4);
            let inc = build_incidence(&f, false);
            let td = heuristic_decomposition(inc.graph());
            assert_eq!(
                count_models_td(&f, &td).unwrap(),
                brute_force_count(&f).unwrap(),
                "{f:?}"
            );
        }
    }

    #[test]
    fn nested_counts_match_brute_force_at_width_three() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let n = rng.gen_range(1..=14);
            let m = rng.gen_range(0..=16);
            let f = random_nested_formula(&mut rng, n, m, 5);
            assert!(is_nested(&f));
            let inc = build_incidence(&f, false);
            let td = decompose(inc.graph(), NESTED_WIDTH)
                .unwrap()
                .expect("width <= 3");
            assert!(td.width() <= NESTED_WIDTH);
            assert_eq!(
                count_models_td(&f, &td).unwrap(),
                brute_force_count(&f).unwrap(),
                "{f:?}"
            );
        }
    }
}
