//! Exhaustive model counting, used as the reference for every counting path.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::formula::CnfFormula;

pub const DEFAULT_COUNT_CAP: usize = 24;

pub fn brute_force_count(f: &CnfFormula) -> Result<BigUint> {
    brute_force_count_capped(f, DEFAULT_COUNT_CAP)
}

/// Counts `τ ∈ 2^var(F)` with `F[τ] = ∅` by enumerating all of them.
pub fn brute_force_count_capped(f: &CnfFormula, cap: usize) -> Result<BigUint> {
    let n = f.num_variables();
    if n > cap || n > 40 {
        return Err(Error::CapExceeded {
            what: "brute-force variable count",
            value: n,
            cap: cap.min(40),
        });
    }
    let index = |v| {
        f.variables()
            .binary_search(&v)
            .expect("clause variable in formula")
    };
    let masks: Vec<(u64, u64)> = f
        .clauses()
        .iter()
        .map(|c| {
            c.literals().iter().fold((0u64, 0u64), |(p, q), l| {
                let bit = 1u64 << index(l.var);
                if l.positive {
                    (p | bit, q)
                } else {
                    (p, q | bit)
                }
            })
        })
        .collect();
    let mut count = 0u64;
    for bits in 0u64..(1u64 << n) {
        if masks.iter().all(|&(p, q)| bits & p != 0 || !bits & q != 0) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}
