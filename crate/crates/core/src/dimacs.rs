//! DIMACS CNF reading and writing.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Literal, Variable};

/// A parsed DIMACS file. Comment lines are kept verbatim (without the leading `c`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimacsFile {
    pub formula: CnfFormula,
    pub comments: Vec<String>,
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    parse_dimacs_with_comments(text).map(|f| f.formula)
}

pub fn parse_dimacs_with_comments(text: &str) -> Result<DimacsFile> {
    let mut comments = Vec::new();
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut clause_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                comments.push(rest.trim_start().to_string());
                continue;
            }
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_error(line_no, "duplicate header"));
            }
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(parse_error(line_no, "clause before `p cnf` header"));
        };
        for tok in line.split_whitespace() {
            let code: i64 = tok
                .parse()
                .map_err(|_| parse_error(line_no, &format!("invalid literal `{tok}`")))?;
            if current.is_empty() {
                clause_line = line_no;
            }
            if code == 0 {
                clauses.push(finish_clause(std::mem::take(&mut current), clause_line)?);
                continue;
            }
            if code.unsigned_abs() > num_vars as u64 {
                return Err(parse_error(
                    line_no,
                    &format!("literal {code} exceeds declared variable count {num_vars}"),
                ));
            }
            current.push(Literal::from_dimacs(code).expect("nonzero literal"));
        }
    }

    let Some((num_vars, num_clauses)) = header else {
        return Err(parse_error(1, "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(parse_error(clause_line, "clause not terminated by 0"));
    }
    if clauses.len() != num_clauses {
        return Err(parse_error(
            1,
            &format!(
                "header declares {num_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    Ok(DimacsFile {
        formula: CnfFormula::new((1..=num_vars).map(Variable), clauses),
        comments,
    })
}

fn parse_header(line: &str, line_no: usize) -> Result<(u32, usize)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
        return Err(parse_error(
            line_no,
            "malformed header, expected `p cnf <vars> <clauses>`",
        ));
    }
    let vars = fields[2]
        .parse()
        .map_err(|_| parse_error(line_no, "malformed variable count"))?;
    let clauses = fields[3]
        .parse()
        .map_err(|_| parse_error(line_no, "malformed clause count"))?;
    Ok((vars, clauses))
}

fn finish_clause(lits: Vec<Literal>, line: usize) -> Result<Clause> {
    Clause::new(lits).map_err(|e| match e {
        Error::ComplementaryLiterals(v) => Error::TautologicalClause { line, var: v.0 },
        other => other,
    })
}

fn parse_error(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// Writes `f` in DIMACS format. The declared variable count is the largest
/// variable id, so formulas over `1..=n` round-trip exactly.
pub fn emit_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.max_variable(), f.num_clauses());
    for clause in f.clauses() {
        for lit in clause.literals() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}
