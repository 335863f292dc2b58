//! Membership in the class of nested formulas.
//!
//! Two routes are kept side by side: the order-based definition (checked
//! against a given order, or by trying every order on small inputs) and the
//! planarity test of `inc+u(F)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Variable};
use crate::incidence::build_incidence;
use crate::planarity::is_planar;

pub const DEFAULT_ORDER_CAP: usize = 8;

/// A linear order on variables with O(1) position lookups.
#[derive(Debug, Clone)]
pub struct VariableOrder {
    order: Vec<Variable>,
    position: HashMap<Variable, usize>,
}

impl VariableOrder {
    pub fn new(order: Vec<Variable>) -> Self {
        let position = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        VariableOrder { order, position }
    }

    pub fn as_slice(&self) -> &[Variable] {
        &self.order
    }

    pub fn position(&self, v: Variable) -> Result<usize> {
        self.position
            .get(&v)
            .copied()
            .ok_or(Error::UnknownVariable(v))
    }

    fn span(&self, c: &Clause) -> Result<Option<(usize, usize)>> {
        let mut span: Option<(usize, usize)> = None;
        for v in c.variables() {
            let p = self.position(v)?;
            span = Some(match span {
                None => (p, p),
                Some((lo, hi)) => (lo.min(p), hi.max(p)),
            });
        }
        Ok(span)
    }
}

impl From<Vec<Variable>> for VariableOrder {
    fn from(order: Vec<Variable>) -> Self {
        VariableOrder::new(order)
    }
}

/// `c` straddles `other` when some variable of `other` lies strictly between
/// two variables of `c`.
pub fn straddles(c: &Clause, other: &Clause, order: &VariableOrder) -> Result<bool> {
    let span = order.span(c)?;
    let mut result = false;
    for z in other.variables() {
        let p = order.position(z)?;
        if let Some((lo, hi)) = span {
            result |= lo < p && p < hi;
        }
    }
    Ok(result)
}

pub fn overlap(c: &Clause, other: &Clause, order: &VariableOrder) -> Result<bool> {
    Ok(straddles(c, other, order)? && straddles(other, c, order)?)
}

/// Whether no two clauses of `f` overlap under `order`, which must be a
/// permutation of the formula's variables.
pub fn is_nested_order(f: &CnfFormula, order: &VariableOrder) -> Result<bool> {
    let mut sorted = order.as_slice().to_vec();
    sorted.sort_unstable();
    if sorted != f.variables() {
        return Err(Error::InvalidOrder);
    }
    Ok(first_overlap(f, order).is_none())
}

fn first_overlap(f: &CnfFormula, order: &VariableOrder) -> Option<(usize, usize)> {
    let spans: Vec<Option<(usize, usize)>> = f
        .clauses()
        .iter()
        .map(|c| order.span(c).expect("order covers formula"))
        .collect();
    let strictly_inside = |c: &Clause, span: Option<(usize, usize)>| match span {
        None => false,
        Some((lo, hi)) => c.variables().any(|v| {
            let p = order.position[&v];
            lo < p && p < hi
        }),
    };
    let clauses = f.clauses();
    for i in 0..clauses.len() {
        for j in i + 1..clauses.len() {
            if strictly_inside(&clauses[j], spans[i]) && strictly_inside(&clauses[i], spans[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Nestedness via planarity of `inc+u(F)`. Edge signs play no role.
pub fn is_nested(f: &CnfFormula) -> bool {
    is_planar(build_incidence(f, true).graph())
}

/// The lexicographically first order (by variable id) under which `f` is
/// nested, found by trying every permutation.
pub fn brute_force_nested_order(f: &CnfFormula) -> Result<Option<Vec<Variable>>> {
    brute_force_nested_order_capped(f, DEFAULT_ORDER_CAP)
}

pub fn brute_force_nested_order_capped(
    f: &CnfFormula,
    cap: usize,
) -> Result<Option<Vec<Variable>>> {
    let n = f.num_variables();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "nested-order enumeration variable count",
            value: n,
            cap,
        });
    }
    let mut perm: Vec<Variable> = f.variables().to_vec();
    loop {
        let order = VariableOrder::new(perm.clone());
        if first_overlap(f, &order).is_none() {
            return Ok(Some(perm));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{disjoint_union, nested_example};
    use crate::graph::Graph;

    fn vars(ids: &[u32]) -> Vec<Variable> {
        ids.iter().map(|&i| Variable(i)).collect()
    }

    fn alphabetical() -> VariableOrder {
        VariableOrder::new(vars(&[1, 2, 3, 4, 5, 6, 7]))
    }

    #[test]
    fn straddle_examples_from_nested_example() {
        let f = nested_example();
        let (c2, c6) = (&f.clauses()[1], &f.clauses()[5]);
        assert!(straddles(c6, c2, &alphabetical()).unwrap());
        assert!(!straddles(c2, c6, &alphabetical()).unwrap());
        let unit = Clause::from_dimacs(&[3]).unwrap();
        assert!(!straddles(&unit, c2, &alphabetical()).unwrap());
        let missing = VariableOrder::new(vars(&[1, 2]));
        assert!(straddles(c6, c2, &missing).is_err());
    }

    #[test]
    fn nested_example_is_nested() {
        let f = nested_example();
        assert!(is_nested_order(&f, &alphabetical()).unwrap());
        assert!(is_nested(&f));
    }

    #[test]
    fn disjoint_union_block_is_not_nested() {
        let f = disjoint_union(1);
        let mut perm = vars(&[1, 2, 3]);
        loop {
            assert!(!is_nested_order(&f, &VariableOrder::new(perm.clone())).unwrap());
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert!(!is_nested(&f));
        assert_eq!(brute_force_nested_order(&f).unwrap(), None);
    }

    #[test]
    fn trivial_cases() {
        assert!(is_nested(&CnfFormula::default()));
        let single = CnfFormula::from_dimacs_clauses(3, &[&[1, -2, 3]]).unwrap();
        assert!(is_nested_order(&single, &VariableOrder::new(vars(&[3, 1, 2]))).unwrap());
        assert_eq!(
            brute_force_nested_order(&single).unwrap(),
            Some(vars(&[1, 2, 3]))
        );
        assert!(matches!(
            is_nested_order(&single, &VariableOrder::new(vars(&[1, 2]))),
            Err(Error::InvalidOrder)
        ));
    }

    #[test]
    fn nested_example_prefix_has_an_order() {
        let f = nested_example().select_clauses(&[0, 1, 2, 3, 4]);
        let order = brute_force_nested_order(&f)
            .unwrap()
            .expect("caterpillar is nested");
        assert!(is_nested_order(&f, &VariableOrder::new(order)).unwrap());
    }

    #[test]
    fn order_cap() {
        let f = CnfFormula::new((1..=9).map(Variable), vec![]);
        assert!(matches!(
            brute_force_nested_order(&f),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn planarity_classics_via_graphs() {
        assert!(is_planar(&Graph::complete(4)));
        assert!(!is_planar(&Graph::complete(5)));
        assert!(!is_planar(&Graph::complete_bipartite(3, 3)));
    }

    #[test]
    fn planarity_route_agrees_with_order_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(0..=8);
            let f = crate::families::random_formula(&mut rng, n, m, 1..=4);
            let by_order = brute_force_nested_order(&f).unwrap().is_some();
            assert_eq!(is_nested(&f), by_order, "{f:?}");
        }
    }
}
