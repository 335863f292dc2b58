//! Strong backdoor sets to nested CNF formulas.
//!
//! The crate decides satisfiability and counts models of CNF formulas that
//! are a few variables away from being nested. It provides recognition of
//! nested formulas (order checking and the planarity characterization),
//! tree-decomposition model counting, obstruction machinery, backdoor
//! verification and search, and the end-to-end solving pipeline.

pub mod backdoor;
pub mod count;
pub mod decomposition;
pub mod dimacs;
pub mod error;
pub mod families;
pub mod formula;
pub mod graph;
pub mod grid_model;
pub mod incidence;
pub mod minor;
pub mod nested;
pub mod obstruction;
pub mod oracle;
pub mod params;
pub mod paths;
pub mod planarity;
pub mod rules;
pub mod solve;

pub use backdoor::{
    approx_backdoor, branch_search_backdoor, exact_smallest_backdoor, verify_deletion,
    verify_strong, BackdoorKind, BackdoorResult, CandidateProvider, KillerProvider,
};
pub use count::{count_models_td, count_nested};
pub use decomposition::{decompose, validate_decomposition, TreeDecomposition};
pub use error::{Error, Result};
pub use formula::{Assignment, Clause, CnfFormula, Literal, Variable};
pub use graph::Graph;
pub use incidence::{build_incidence, NodeKind, Sign, SignedBipartiteGraph};
pub use minor::{validate_minor_model, MinorModel};
pub use nested::{is_nested, is_nested_order, VariableOrder};
pub use num_bigint::BigUint;
pub use obstruction::{find_obstruction, verify_obstruction, NestedObstruction};
pub use params::{params, ParamBundle};
pub use paths::{disjoint_paths, Disjointness, Path};
pub use planarity::is_planar;
pub use solve::{solve, SearchMode, SolveOptions, SolveReport, Status, Witness};
