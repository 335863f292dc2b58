//! End-to-end solving: obtain a strong backdoor, then decide or count by
//! summing model counts of the nested residual formulas.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::backdoor::{
    approx_backdoor, branch_search_backdoor, exact_smallest_backdoor, first_failing_assignment,
    BackdoorKind, BackdoorResult, KillerProvider,
};
use crate::count::count_nested;
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::formula::{assignment_from_bits, CnfFormula, Variable};
use crate::incidence::build_incidence;
use crate::nested::{brute_force_nested_order, is_nested, DEFAULT_ORDER_CAP};
use crate::obstruction::{find_obstruction, node_label, NestedObstruction};
use crate::planarity::kuratowski_edges;

pub const DEFAULT_BACKDOOR_MAX: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    #[default]
    Branching,
    Exact,
    Approx,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub count: bool,
    /// A strong backdoor to use instead of searching for one.
    pub backdoor: Option<BTreeSet<Variable>>,
    pub backdoor_max: usize,
    pub mode: SearchMode,
    pub emit_witness: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            count: false,
            backdoor: None,
            backdoor_max: DEFAULT_BACKDOOR_MAX,
            mode: SearchMode::Branching,
            emit_witness: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Sat,
    Unsat,
    BudgetExceeded,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
            Status::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// The input is nested: width of the incidence decomposition found, and a
    /// nesting order when the formula is small enough to enumerate orders.
    Nested {
        decomposition_width: usize,
        order: Option<Vec<u32>>,
    },
    Obstruction {
        record: String,
        obstruction: NestedObstruction,
    },
    /// A Kuratowski subgraph of `inc+u(F)` given by node labels.
    Kuratowski { edges: Vec<(String, String)> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub backdoor_ms: f64,
    pub count_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: Status,
    #[serde(serialize_with = "decimal_opt")]
    pub count: Option<BigUint>,
    pub backdoor: Option<Vec<u32>>,
    pub mode: String,
    pub witnesses: Vec<Witness>,
    pub timings: Timings,
}

fn decimal_opt<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.serialize_str(&n.to_str_radix(10)),
        None => s.serialize_none(),
    }
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// Finds (or checks) the backdoor that `solve` would use. `Ok(None)` means
/// none was found within the budget.
pub fn obtain_backdoor(f: &CnfFormula, options: &SolveOptions) -> Result<Option<BackdoorResult>> {
    if let Some(b) = &options.backdoor {
        if let Some(tau) = first_failing_assignment(f, b)? {
            return Err(Error::InvalidBackdoor {
                assignment: tau.into_iter().collect(),
            });
        }
        return Ok(Some(BackdoorResult {
            variables: b.clone(),
            kind: BackdoorKind::Supplied,
            bound_claim: b.len(),
        }));
    }
    match options.mode {
        SearchMode::Branching => branch_search_backdoor(f, options.backdoor_max),
        SearchMode::Exact => exact_smallest_backdoor(f, options.backdoor_max),
        SearchMode::Approx => approx_backdoor(f, options.backdoor_max, &KillerProvider),
    }
}

/// Sum of the nested residual counts over all assignments to `b`, computed
/// in parallel and added up in assignment order.
pub fn count_with_backdoor(f: &CnfFormula, b: &BTreeSet<Variable>) -> Result<BigUint> {
    let vars: Vec<Variable> = b.iter().copied().collect();
    if vars.len() >= 64 {
        return Err(Error::CapExceeded {
            what: "backdoor size for counting",
            value: vars.len(),
            cap: 63,
        });
    }
    let parts: Vec<BigUint> = (0..1u64 << vars.len())
        .into_par_iter()
        .map(|bits| count_nested(&f.reduce(&assignment_from_bits(&vars, bits))))
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(BigUint::zero(), |acc, c| acc + c))
}

/// Whether some residual has a model; stops at the first one.
pub fn satisfiable_with_backdoor(f: &CnfFormula, b: &BTreeSet<Variable>) -> Result<bool> {
    let vars: Vec<Variable> = b.iter().copied().collect();
    for bits in 0..1u64 << vars.len() {
        if !count_nested(&f.reduce(&assignment_from_bits(&vars, bits)))?.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn witnesses(f: &CnfFormula) -> Result<Vec<Witness>> {
    if is_nested(f) {
        let inc = build_incidence(f, false);
        let width = decompose(inc.graph(), 3)?.map_or(usize::MAX, |td| td.width());
        let order = if f.num_variables() <= DEFAULT_ORDER_CAP {
            brute_force_nested_order(f)?.map(|o| o.into_iter().map(|v| v.0).collect())
        } else {
            None
        };
        return Ok(vec![Witness::Nested {
            decomposition_width: width,
            order,
        }]);
    }
    let inc = build_incidence(f, false);
    if let Some(o) = find_obstruction(&inc) {
        return Ok(vec![Witness::Obstruction {
            record: o.record(&inc),
            obstruction: o,
        }]);
    }
    let univ = build_incidence(f, true);
    let edges = kuratowski_edges(univ.graph()).unwrap_or_default();
    Ok(vec![Witness::Kuratowski {
        edges: edges
            .into_iter()
            .map(|(u, v)| (node_label(&univ, u), node_label(&univ, v)))
            .collect(),
    }])
}

pub fn solve(f: &CnfFormula, options: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let mut timings = Timings::default();
    let witnesses = if options.emit_witness {
        witnesses(f)?
    } else {
        Vec::new()
    };
    let found = obtain_backdoor(f, options)?;
    timings.backdoor_ms = millis(start);
    let mode = match &found {
        Some(r) => kind_name(r.kind),
        None => mode_name(options.mode),
    };
    let Some(found) = found else {
        timings.total_ms = millis(start);
        return Ok(SolveReport {
            status: Status::BudgetExceeded,
            count: None,
            backdoor: None,
            mode,
            witnesses,
            timings,
        });
    };
    let counting = Instant::now();
    let (status, count) = if options.count {
        let n = count_with_backdoor(f, &found.variables)?;
        (
            if n.is_zero() {
                Status::Unsat
            } else {
                Status::Sat
            },
            Some(n),
        )
    } else if satisfiable_with_backdoor(f, &found.variables)? {
        (Status::Sat, None)
    } else {
        (Status::Unsat, None)
    };
    timings.count_ms = millis(counting);
    timings.total_ms = millis(start);
    Ok(SolveReport {
        status,
        count,
        backdoor: Some(found.ids()),
        mode,
        witnesses,
        timings,
    })
}

fn kind_name(kind: BackdoorKind) -> String {
    match kind {
        BackdoorKind::ExactMinimum => "exact",
        BackdoorKind::Branching => "branching",
        BackdoorKind::Approximation => "approx",
        BackdoorKind::Supplied => "supplied",
    }
    .to_string()
}

fn mode_name(mode: SearchMode) -> String {
    match mode {
        SearchMode::Branching => "branching",
        SearchMode::Exact => "exact",
        SearchMode::Approx => "approx",
    }
    .to_string()
}
