//! Shared fixtures for the benchmarks.

use nested_backdoor::families::{disjoint_union, generate_family_by_name, seeded_random_formula};
use nested_backdoor::CnfFormula;

/// Nested formulas of growing size, one per entry of `sizes`.
pub fn nested_suite(sizes: &[u32]) -> Vec<(u32, CnfFormula)> {
    sizes
        .iter()
        .map(|&n| {
            (
                n,
                seeded_random_formula(u64::from(n), n, 2 * n as usize, 4, true),
            )
        })
        .collect()
}

pub fn grid(n: usize) -> CnfFormula {
    generate_family_by_name("grid", n).expect("n >= 2")
}

pub fn grid_plus_x(n: usize) -> CnfFormula {
    generate_family_by_name("grid_plus_x", n).expect("n >= 2")
}

pub fn unions(n: usize) -> CnfFormula {
    disjoint_union(n)
}
