use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{clause_statement, ParseError, ParsedProblem};
use crate::formulas::{Atom, Clause, Literal};

fn var(i: u64) -> String {
    format!("x{i}")
}

/// Reads `p cnf <vars> <clauses>` followed by zero-terminated clauses.
/// Variable `i` becomes the propositional atom `xi`.
pub fn parse_dimacs(text: &str) -> Result<ParsedProblem, ParseError> {
    let err = |line: usize, message: String| ParseError::Dimacs { line, message };
    let mut header: Option<(u64, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut warnings = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if let Some(rest) = t.strip_prefix('p') {
            if header.is_some() {
                return Err(err(line, "second problem line".into()));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| err(line, format!("bad variable count `{v}`")))?;
                    let c = c.parse().map_err(|_| err(line, format!("bad clause count `{c}`")))?;
                    header = Some((v, c));
                }
                _ => return Err(err(line, format!("expected `p cnf <vars> <clauses>`, found `{t}`"))),
            }
            continue;
        }
        let Some((nvars, _)) = header else {
            return Err(err(line, "clause before the problem line".into()));
        };
        for tok in t.split_whitespace() {
            let k: i64 = tok.parse().map_err(|_| err(line, format!("bad literal `{tok}`")))?;
            if k == 0 {
                clauses.push(Clause::new(current.drain(..)));
                continue;
            }
            let i = k.unsigned_abs();
            if i > nvars {
                warnings.push(format!("line {line}: variable {i} exceeds the declared {nvars}"));
            }
            current.push(Literal::new(Atom::prop(var(i)), k > 0));
        }
    }
    let Some((_, nclauses)) = header else {
        return Err(err(0, "missing problem line".into()));
    };
    if !current.is_empty() {
        warnings.push("last clause is not terminated by 0".into());
        clauses.push(Clause::new(current));
    }
    if clauses.len() != nclauses {
        warnings.push(format!("{} clauses read, {nclauses} declared", clauses.len()));
    }
    let set: BTreeSet<Clause> = clauses.into_iter().collect();
    Ok(ParsedProblem {
        statement: Some(clause_statement(&set)),
        clauses: Some(set),
        expected: None,
        theory: None,
        warnings,
    })
}

/// Writes a propositional clause set as DIMACS. Atoms named `xi` keep their
/// index; other atoms are numbered after the largest such index.
pub fn print_dimacs<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Result<String, String> {
    let clauses: Vec<&Clause> = clauses.into_iter().collect();
    let mut index: BTreeMap<&Atom, u64> = BTreeMap::new();
    let mut others = Vec::new();
    for l in clauses.iter().flat_map(|c| c.iter()) {
        match l.atom() {
            a @ Atom::PropVar(name) => match name.strip_prefix('x').and_then(|d| d.parse::<u64>().ok()) {
                Some(i) if i > 0 => {
                    index.insert(a, i);
                }
                _ => others.push(a),
            },
            a => return Err(format!("{a} is not propositional")),
        }
    }
    let mut next = index.values().copied().max().unwrap_or(0);
    for a in others {
        index.entry(a).or_insert_with(|| {
            next += 1;
            next
        });
    }
    let nvars = index.values().copied().max().unwrap_or(0);
    let mut out = format!("p cnf {nvars} {}\n", clauses.len());
    for c in clauses {
        for l in c.iter() {
            let i = index[l.atom()] as i64;
            let _ = write!(out, "{} ", if l.is_positive() { i } else { -i });
        }
        out.push_str("0\n");
    }
    Ok(out)
}
