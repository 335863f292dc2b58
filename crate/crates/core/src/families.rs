//! Formula generators: the grid families, disjoint unions of small
//! non-nested blocks, and random instances for testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Literal, Variable};
use crate::nested;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `F_n`: incidence graph is the n×n grid, clauses where i+j is even.
    Grid,
    /// `F_n^x`: `F_n` plus a fresh variable x with parity-dependent sign.
    GridPlusX,
    /// Variable-disjoint union of n copies of `(x∨y∨z) ∧ (¬x∨y∨z)`.
    DisjointUnion,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Family::Grid),
            "grid_plus_x" | "grid-plus-x" => Ok(Family::GridPlusX),
            "disjoint_union" | "disjoint-union" => Ok(Family::DisjointUnion),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

pub fn generate_family(family: Family, n: usize) -> Result<CnfFormula> {
    match family {
        Family::Grid | Family::GridPlusX if n < 2 => Err(Error::InvalidArgument(format!(
            "grid families need n >= 2, got {n}"
        ))),
        Family::DisjointUnion if n < 1 => Err(Error::InvalidArgument(
            "disjoint_union needs n >= 1".to_string(),
        )),
        Family::Grid => Ok(grid_formula(n, false).0),
        Family::GridPlusX => Ok(grid_formula(n, true).0),
        Family::DisjointUnion => Ok(disjoint_union(n)),
    }
}

pub fn generate_family_by_name(name: &str, n: usize) -> Result<CnfFormula> {
    generate_family(name.parse()?, n)
}

/// What sits at a grid position of `F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Var(Variable),
    Clause(usize),
}

/// Grid position → variable or clause of the grid formula, 1-based `(i, j)`.
#[derive(Debug, Clone)]
pub struct GridLayout {
    pub n: usize,
    cells: Vec<Cell>,
    /// The extra variable of `F_n^x`.
    pub x: Option<Variable>,
}

impl GridLayout {
    pub fn cell(&self, i: usize, j: usize) -> Cell {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.cells[(i - 1) * self.n + (j - 1)]
    }
}

/// Builds `F_n` (or `F_n^x`) together with its grid layout.
/// Positions are numbered row-major with `i` outer; all grid occurrences are positive.
pub fn grid_formula(n: usize, with_x: bool) -> (CnfFormula, GridLayout) {
    let mut cells = Vec::with_capacity(n * n);
    let mut next_var = 1u32;
    let mut next_clause = 0usize;
    for i in 1..=n {
        for j in 1..=n {
            if (i + j) % 2 == 1 {
                cells.push(Cell::Var(Variable(next_var)));
                next_var += 1;
            } else {
                cells.push(Cell::Clause(next_clause));
                next_clause += 1;
            }
        }
    }
    let x = with_x.then_some(Variable(next_var));
    let layout = GridLayout { n, cells, x };

    let mut clauses = Vec::with_capacity(next_clause);
    for i in 1..=n {
        for j in 1..=n {
            if (i + j) % 2 == 1 {
                continue;
            }
            let mut lits = Vec::new();
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni < 1 || nj < 1 || ni > n as i64 || nj > n as i64 {
                    continue;
                }
                if let Cell::Var(v) = layout.cell(ni as usize, nj as usize) {
                    lits.push(Literal::new(v, true));
                }
            }
            if let Some(x) = x {
                // odd clause: i+j not divisible by 4
                lits.push(Literal::new(x, (i + j) % 4 != 0));
            }
            clauses.push(Clause::new(lits).expect("grid clause has distinct variables"));
        }
    }
    let vars = (1..next_var + u32::from(with_x)).map(Variable);
    (CnfFormula::new(vars, clauses), layout)
}

pub fn disjoint_union(n: usize) -> CnfFormula {
    let mut clauses = Vec::with_capacity(2 * n);
    for i in 0..n as u32 {
        let (x, y, z) = (3 * i + 1, 3 * i + 2, 3 * i + 3);
        clauses.push(Clause::new([Literal::pos(x), Literal::pos(y), Literal::pos(z)]).unwrap());
        clauses.push(Clause::new([Literal::neg(x), Literal::pos(y), Literal::pos(z)]).unwrap());
    }
    CnfFormula::new((1..=3 * n as u32).map(Variable), clauses)
}

/// The nested example formula with variables t,u,v,w,x,y,z numbered 1..7.
pub fn nested_example() -> CnfFormula {
    CnfFormula::from_dimacs_clauses(
        7,
        &[
            &[1, -2],
            &[2, 3, 4],
            &[4, 5],
            &[5, -6],
            &[6, -7],
            &[1, 2, -4],
            &[-5, 7],
            &[-1, 4, 5],
        ],
    )
    .expect("static formula")
}

/// Uniform random CNF over `1..=num_vars` with clause lengths in `len_range`.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    num_vars: u32,
    num_clauses: usize,
    len_range: std::ops::RangeInclusive<usize>,
) -> CnfFormula {
    let all: Vec<u32> = (1..=num_vars).collect();
    let mut clauses = Vec::with_capacity(num_clauses);
    for _ in 0..num_clauses {
        let len = rng.gen_range(len_range.clone()).min(num_vars as usize);
        let vars: Vec<u32> = all.choose_multiple(rng, len).copied().collect();
        let lits = vars
            .into_iter()
            .map(|v| Literal::new(Variable(v), rng.gen_bool(0.5)));
        clauses.push(Clause::new(lits).expect("distinct variables"));
    }
    CnfFormula::new((1..=num_vars).map(Variable), clauses)
}

/// Random nested formula: draws a random variable order and keeps adding
/// random clauses that overlap no clause already present.
pub fn random_nested_formula<R: Rng + ?Sized>(
    rng: &mut R,
    num_vars: u32,
    target_clauses: usize,
    max_len: usize,
) -> CnfFormula {
    let mut order: Vec<Variable> = (1..=num_vars).map(Variable).collect();
    order.shuffle(rng);
    let positions = nested::VariableOrder::new(order.clone());
    let mut clauses: Vec<Clause> = Vec::new();
    let attempts = target_clauses * 20;
    for _ in 0..attempts {
        if clauses.len() >= target_clauses {
            break;
        }
        let len = rng.gen_range(1..=max_len.min(num_vars as usize).max(1));
        // Bias towards contiguous windows of the order so that long clauses survive.
        let vars: Vec<Variable> = if rng.gen_bool(0.5) {
            let start = rng.gen_range(0..order.len());
            let window = rng.gen_range(len..=(len + 3)).min(order.len() - start);
            order[start..start + window]
                .choose_multiple(rng, len.min(window))
                .copied()
                .collect()
        } else {
            order.choose_multiple(rng, len).copied().collect()
        };
        let candidate = Clause::new(vars.into_iter().map(|v| Literal::new(v, rng.gen_bool(0.5))))
            .expect("distinct variables");
        let overlaps = clauses
            .iter()
            .any(|c| nested::overlap(c, &candidate, &positions).unwrap_or(true));
        if !overlaps {
            clauses.push(candidate);
        }
    }
    CnfFormula::new((1..=num_vars).map(Variable), clauses)
}

/// Reproducible random instance for a given seed. With `nested` set the
/// clauses are drawn so that the result is nested.
pub fn seeded_random_formula(
    seed: u64,
    num_vars: u32,
    num_clauses: usize,
    max_len: usize,
    nested: bool,
) -> CnfFormula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if nested {
        random_nested_formula(&mut rng, num_vars, num_clauses, max_len)
    } else {
        random_formula(&mut rng, num_vars, num_clauses, 1..=max_len.max(1))
    }
}
