//! CNF data model and the assignment reduction `F[τ]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Variable(pub u32);

impl Variable {
    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Variable,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: Variable, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn pos(var: u32) -> Self {
        Literal::new(Variable(var), true)
    }

    pub fn neg(var: u32) -> Self {
        Literal::new(Variable(var), false)
    }

    /// Signed DIMACS encoding. Returns `None` for 0.
    pub fn from_dimacs(code: i64) -> Option<Self> {
        if code == 0 || code.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal::new(Variable(code.unsigned_abs() as u32), code > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var.0 as i64
        } else {
            -(self.var.0 as i64)
        }
    }

    /// Truth value of the literal under `value` for its variable.
    pub fn eval(self, value: bool) -> bool {
        self.positive == value
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal::new(self.var, !self.positive)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A clause: a set of literals over distinct variables, kept sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, dropping repeated literals. A complementary pair is an error.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        literals.dedup();
        for w in literals.windows(2) {
            if w[0].var == w[1].var {
                return Err(Error::ComplementaryLiterals(w[0].var));
            }
        }
        Ok(Clause { literals })
    }

    pub fn from_dimacs(codes: &[i64]) -> Result<Self> {
        let lits = codes
            .iter()
            .map(|&c| {
                Literal::from_dimacs(c)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad literal {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Clause::new(lits)
    }

    pub fn empty() -> Self {
        Clause::default()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        self.literals.iter().map(|l| l.var)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// The literal of `var` in this clause, if any.
    pub fn literal_of(&self, var: Variable) -> Option<Literal> {
        self.literals
            .binary_search_by(|l| l.var.cmp(&var))
            .ok()
            .map(|i| self.literals[i])
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literal_of(lit.var) == Some(lit)
    }
}

/// Partial truth assignment.
pub type Assignment = BTreeMap<Variable, bool>;

/// A CNF formula over an explicit variable set.
///
/// The variable set may contain variables that occur in no clause; they still
/// contribute a factor of two to the model count.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    variables: Vec<Variable>,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Builds a formula over `variables` (deduplicated, sorted) plus every
    /// variable occurring in `clauses`.
    pub fn new(variables: impl IntoIterator<Item = Variable>, clauses: Vec<Clause>) -> Self {
        let mut set: BTreeSet<Variable> = variables.into_iter().collect();
        for c in &clauses {
            set.extend(c.variables());
        }
        CnfFormula {
            variables: set.into_iter().collect(),
            clauses,
        }
    }

    /// Formula whose variables are exactly those occurring in the clauses.
    pub fn from_clauses(clauses: Vec<Clause>) -> Self {
        CnfFormula::new(std::iter::empty(), clauses)
    }

    /// Convenience constructor from DIMACS-style literal lists.
    pub fn from_dimacs_clauses(num_vars: u32, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| Clause::from_dimacs(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(CnfFormula::new((1..=num_vars).map(Variable), clauses))
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn has_variable(&self, var: Variable) -> bool {
        self.variables.binary_search(&var).is_ok()
    }

    pub fn max_variable(&self) -> u32 {
        self.variables.last().map_or(0, |v| v.0)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// `F[τ]`: drops satisfied clauses, strips falsified literals, removes the
    /// assigned variables from the variable set.
    pub fn reduce(&self, tau: &Assignment) -> CnfFormula {
        self.reduce_with_origin(tau).0
    }

    /// Like [`reduce`](Self::reduce), also returning for each surviving clause
    /// its index in `self`.
    pub fn reduce_with_origin(&self, tau: &Assignment) -> (CnfFormula, Vec<usize>) {
        if tau.is_empty() {
            return (self.clone(), (0..self.clauses.len()).collect());
        }
        let mut clauses = Vec::new();
        let mut origin = Vec::new();
        'clauses: for (idx, clause) in self.clauses.iter().enumerate() {
            let mut kept = Vec::with_capacity(clause.len());
            for &lit in clause.literals() {
                match tau.get(&lit.var) {
                    Some(&value) if lit.eval(value) => continue 'clauses,
                    Some(_) => {}
                    None => kept.push(lit),
                }
            }
            clauses.push(Clause { literals: kept });
            origin.push(idx);
        }
        let variables = self
            .variables
            .iter()
            .copied()
            .filter(|v| !tau.contains_key(v))
            .collect();
        (CnfFormula { variables, clauses }, origin)
    }

    /// `F - B`: removes both literals of every variable in `vars` from all clauses.
    pub fn delete_variables(&self, vars: &BTreeSet<Variable>) -> CnfFormula {
        let clauses = self
            .clauses
            .iter()
            .map(|c| Clause {
                literals: c
                    .literals()
                    .iter()
                    .copied()
                    .filter(|l| !vars.contains(&l.var))
                    .collect(),
            })
            .collect();
        let variables = self
            .variables
            .iter()
            .copied()
            .filter(|v| !vars.contains(v))
            .collect();
        CnfFormula { variables, clauses }
    }

    /// Keeps only the clauses at the given indices, in that order.
    pub fn select_clauses(&self, indices: &[usize]) -> CnfFormula {
        CnfFormula {
            variables: self.variables.clone(),
            clauses: indices.iter().map(|&i| self.clauses[i].clone()).collect(),
        }
    }

    /// Evaluates a total assignment given as a closure.
    pub fn is_satisfied_by(&self, value: impl Fn(Variable) -> bool) -> bool {
        self.clauses
            .iter()
            .all(|c| c.literals().iter().any(|l| l.eval(value(l.var))))
    }
}

/// Iterates all `2^|vars|` assignments of `vars` in counting order: the
/// assignment with index `bits` sets `vars[i]` to bit `i` of `bits`.
pub fn assignments(vars: &[Variable]) -> impl Iterator<Item = Assignment> + '_ {
    assert!(vars.len() < 64);
    (0u64..(1u64 << vars.len())).map(move |bits| assignment_from_bits(vars, bits))
}

pub fn assignment_from_bits(vars: &[Variable], bits: u64) -> Assignment {
    vars.iter()
        .enumerate()
        .map(|(i, &v)| (v, (bits >> i) & 1 == 1))
        .collect()
}
