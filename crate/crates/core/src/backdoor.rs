//! Strong and deletion backdoors into the nested class: verification, an
//! exhaustive oracle, obstruction-guided branching, and the approximation
//! driver.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{assignment_from_bits, Assignment, CnfFormula, Variable};
use crate::incidence::{build_incidence, NodeKind, Sign};
use crate::nested::is_nested;
use crate::obstruction::{find_obstruction, killers};
use crate::planarity::kuratowski_edges;

pub const DEFAULT_STRONG_CAP: usize = 20;
pub const EXACT_VARIABLE_CAP: usize = 20;
pub const EXACT_SIZE_CAP: usize = 4;
pub const BRANCH_SIZE_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackdoorKind {
    ExactMinimum,
    Branching,
    Approximation,
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackdoorResult {
    pub variables: BTreeSet<Variable>,
    pub kind: BackdoorKind,
    /// Size bound guaranteed by the producing procedure.
    pub bound_claim: usize,
}

impl BackdoorResult {
    /// Checks the strong property before handing the set out.
    fn certified(
        f: &CnfFormula,
        variables: BTreeSet<Variable>,
        kind: BackdoorKind,
        bound_claim: usize,
    ) -> Result<Self> {
        if variables.len() > bound_claim || !verify_strong(f, &variables)? {
            return Err(Error::Structural(format!(
                "{kind:?} search returned an invalid backdoor"
            )));
        }
        Ok(BackdoorResult {
            variables,
            kind,
            bound_claim,
        })
    }

    pub fn ids(&self) -> Vec<u32> {
        self.variables.iter().map(|v| v.0).collect()
    }
}

fn check_subset(f: &CnfFormula, b: &BTreeSet<Variable>, cap: usize) -> Result<()> {
    if let Some(&v) = b.iter().find(|&&v| !f.has_variable(v)) {
        return Err(Error::UnknownVariable(v));
    }
    if b.len() > cap {
        return Err(Error::CapExceeded {
            what: "strong backdoor size for verification",
            value: b.len(),
            cap,
        });
    }
    Ok(())
}

/// Whether every assignment to `b` reduces `f` to a nested formula.
pub fn verify_strong(f: &CnfFormula, b: &BTreeSet<Variable>) -> Result<bool> {
    verify_strong_capped(f, b, DEFAULT_STRONG_CAP)
}

pub fn verify_strong_capped(f: &CnfFormula, b: &BTreeSet<Variable>, cap: usize) -> Result<bool> {
    Ok(first_failing_assignment_capped(f, b, cap)?.is_none())
}

/// The first assignment in counting order (bit `i` is the `i`-th smallest
/// variable of `b`) whose reduct is not nested.
pub fn first_failing_assignment(
    f: &CnfFormula,
    b: &BTreeSet<Variable>,
) -> Result<Option<Assignment>> {
    first_failing_assignment_capped(f, b, DEFAULT_STRONG_CAP)
}

fn first_failing_assignment_capped(
    f: &CnfFormula,
    b: &BTreeSet<Variable>,
    cap: usize,
) -> Result<Option<Assignment>> {
    check_subset(f, b, cap)?;
    let vars: Vec<Variable> = b.iter().copied().collect();
    Ok((0..1u64 << vars.len())
        .map(|bits| assignment_from_bits(&vars, bits))
        .find(|tau| !is_nested(&f.reduce(tau))))
}

/// Whether `F - B` is nested. Variables of `b` absent from `f` are ignored.
pub fn verify_deletion(f: &CnfFormula, b: &BTreeSet<Variable>) -> bool {
    is_nested(&f.delete_variables(b))
}

/// Lexicographically first minimum strong backdoor of size at most `k_max`,
/// by trying all sets in order of size.
pub fn exact_smallest_backdoor(f: &CnfFormula, k_max: usize) -> Result<Option<BackdoorResult>> {
    let n = f.num_variables();
    if n > EXACT_VARIABLE_CAP {
        return Err(Error::CapExceeded {
            what: "variables for exhaustive backdoor search",
            value: n,
            cap: EXACT_VARIABLE_CAP,
        });
    }
    let k_max = k_max.min(n);
    if k_max > EXACT_SIZE_CAP {
        return Err(Error::CapExceeded {
            what: "backdoor size for exhaustive search",
            value: k_max,
            cap: EXACT_SIZE_CAP,
        });
    }
    let vars = f.variables();
    for size in 0..=k_max {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let set: BTreeSet<Variable> = idx.iter().map(|&i| vars[i]).collect();
            if verify_strong(f, &set)? {
                return BackdoorResult::certified(f, set, BackdoorKind::ExactMinimum, k_max)
                    .map(Some);
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(None)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Variables whose every setting destroys a Kuratowski subgraph of
/// `inc+u(F)`: those on it, and those occurring with both signs in its
/// clauses. `None` when `F` is nested.
pub fn kuratowski_killers(f: &CnfFormula) -> Option<BTreeSet<Variable>> {
    let inc = build_incidence(f, true);
    let edges = kuratowski_edges(inc.graph())?;
    let nodes: BTreeSet<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut out: BTreeSet<Variable> = nodes.iter().filter_map(|&v| inc.variable_of(v)).collect();
    for x in 0..inc.num_variables() {
        let mut signs = (false, false);
        for (c, sign) in inc.signed_neighbors(x) {
            if nodes.contains(&c) && matches!(inc.kind(c), NodeKind::Clause(_)) {
                match sign {
                    Sign::Positive => signs.0 = true,
                    Sign::Negative => signs.1 = true,
                }
            }
        }
        if signs == (true, true) {
            out.extend(inc.variable_of(x));
        }
    }
    Some(out)
}

/// Killers of an obstruction of a non-nested formula: from
/// [`find_obstruction`] when it succeeds, else from a Kuratowski subgraph.
/// Every strong backdoor contains one of them.
pub fn obstruction_killers(f: &CnfFormula) -> Option<BTreeSet<Variable>> {
    let inc = build_incidence(f, false);
    match find_obstruction(&inc) {
        Some(o) => Some(killers(&inc, &o)),
        None => kuratowski_killers(f),
    }
}

/// Smallest strong backdoor of size at most `k`, by iterative deepening
/// over a search that repeatedly takes the first non-nested reduct and
/// branches on the killers of one of its obstructions.
pub fn branch_search_backdoor(f: &CnfFormula, k: usize) -> Result<Option<BackdoorResult>> {
    if k > BRANCH_SIZE_CAP {
        return Err(Error::CapExceeded {
            what: "backdoor size for branching search",
            value: k,
            cap: BRANCH_SIZE_CAP,
        });
    }
    for depth in 0..=k.min(f.num_variables()) {
        let mut chosen = BTreeSet::new();
        if branch(f, &mut chosen, depth)? {
            return BackdoorResult::certified(f, chosen, BackdoorKind::Branching, k).map(Some);
        }
    }
    Ok(None)
}

fn branch(f: &CnfFormula, chosen: &mut BTreeSet<Variable>, depth: usize) -> Result<bool> {
    let Some(tau) = first_failing_assignment(f, chosen)? else {
        return Ok(true);
    };
    if chosen.len() == depth {
        return Ok(false);
    }
    let reduct = f.reduce(&tau);
    let candidates = obstruction_killers(&reduct)
        .ok_or_else(|| Error::Structural("non-nested reduct without a witness".into()))?;
    for x in candidates {
        chosen.insert(x);
        if branch(f, chosen, depth)? {
            return Ok(true);
        }
        chosen.remove(&x);
    }
    Ok(false)
}

/// Supplies, for a non-nested formula, a nonempty set meeting every strong
/// backdoor within the budget.
pub trait CandidateProvider: Sync {
    fn candidates(&self, f: &CnfFormula, budget: usize) -> Result<BTreeSet<Variable>>;
}

/// All killers of one obstruction (or Kuratowski subgraph) of the formula.
#[derive(Debug, Clone, Copy, Default)]
pub struct KillerProvider;

impl CandidateProvider for KillerProvider {
    fn candidates(&self, f: &CnfFormula, _budget: usize) -> Result<BTreeSet<Variable>> {
        Ok(obstruction_killers(f).unwrap_or_default())
    }
}

/// Either a strong backdoor of size at most `2^k - 1`, or `None`, which
/// certifies that no strong backdoor of size at most `k` exists (for a sound
/// provider).
pub fn approx_backdoor(
    f: &CnfFormula,
    k: usize,
    provider: &dyn CandidateProvider,
) -> Result<Option<BackdoorResult>> {
    if k >= usize::BITS as usize {
        return Err(Error::InvalidArgument(format!("budget {k} too large")));
    }
    let bound = (1usize << k) - 1;
    match approx(f, k, provider)? {
        Some(set) => {
            BackdoorResult::certified(f, set, BackdoorKind::Approximation, bound).map(Some)
        }
        None => Ok(None),
    }
}

fn approx(
    f: &CnfFormula,
    k: usize,
    provider: &dyn CandidateProvider,
) -> Result<Option<BTreeSet<Variable>>> {
    if is_nested(f) {
        return Ok(Some(BTreeSet::new()));
    }
    if k == 0 {
        return Ok(None);
    }
    let candidates = provider.candidates(f, k)?;
    if candidates.is_empty() {
        return Err(Error::ProviderContract);
    }
    for x in candidates {
        let one = f.reduce(&Assignment::from([(x, true)]));
        let zero = f.reduce(&Assignment::from([(x, false)]));
        let (b1, b0) = rayon::join(
            || approx(&one, k - 1, provider),
            || approx(&zero, k - 1, provider),
        );
        if let (Some(mut b1), Some(b0)) = (b1?, b0?) {
            b1.extend(b0);
            b1.insert(x);
            return Ok(Some(b1));
        }
    }
    Ok(None)
}
