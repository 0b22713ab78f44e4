//! A small fragment of SMT-LIB 2: quantifier-free linear real arithmetic and
//! ground equality with uninterpreted functions, plus Boolean constants.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{clause_statement, ParseError, ParsedProblem};
use crate::formulas::{linear_atom, Atom, Clause, GroundTerm, Literal, Relation};
use crate::theories::TheoryKind;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl std::fmt::Display for Sexp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sexp::Atom(s) => f.write_str(s),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ';' => {
                while chars.next_if(|&c| c != '\n').is_some() {}
            }
            '(' | ')' => {
                out.push(c.to_string());
                chars.next();
            }
            '|' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('|') => break,
                        Some(c) => s.push(c),
                        None => return Err(ParseError::Syntax("unterminated |symbol|".into())),
                    }
                }
                out.push(s);
            }
            '"' => {
                chars.next();
                let mut s = String::from("\"");
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(ParseError::Syntax("unterminated string".into())),
                    }
                }
                s.push('"');
                out.push(s);
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(c) =
                    chars.next_if(|&c| !c.is_whitespace() && !matches!(c, '(' | ')' | ';'))
                {
                    s.push(c);
                }
                out.push(s);
            }
        }
    }
    Ok(out)
}

fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    for tok in tokenize(text)? {
        match tok.as_str() {
            "(" => stack.push(Vec::new()),
            ")" => {
                let done = stack.pop().filter(|_| !stack.is_empty());
                let Some(done) = done else {
                    return Err(ParseError::Syntax("unbalanced `)`".into()));
                };
                stack.last_mut().expect("outer level").push(Sexp::List(done));
            }
            _ => stack.last_mut().expect("outer level").push(Sexp::Atom(tok)),
        }
    }
    match stack.len() {
        1 => Ok(stack.pop().unwrap()),
        _ => Err(ParseError::Syntax("missing `)`".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sort {
    Bool,
    Real,
    Named(String),
}

#[derive(Clone, Debug)]
struct Signature {
    args: Vec<Sort>,
    result: Sort,
}

/// Negation normal form with literal leaves.
#[derive(Clone, Debug)]
enum Nnf {
    Const(bool),
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

/// `sum coeffs*vars + constant`.
#[derive(Clone, Debug, Default)]
struct Linear {
    coeffs: BTreeMap<String, BigRational>,
    constant: BigRational,
}

impl Linear {
    fn scale(mut self, k: &BigRational) -> Linear {
        for c in self.coeffs.values_mut() {
            *c *= k;
        }
        self.constant *= k;
        self
    }

    fn add(mut self, other: Linear) -> Linear {
        for (v, c) in other.coeffs {
            *self.coeffs.entry(v).or_insert_with(BigRational::zero) += c;
        }
        self.constant += other.constant;
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    fn as_constant(&self) -> Option<&BigRational> {
        self.coeffs.is_empty().then_some(&self.constant)
    }
}

#[derive(Default)]
struct Reader {
    logic: Option<TheoryKind>,
    sorts: BTreeSet<String>,
    funs: BTreeMap<String, Signature>,
    asserts: Vec<Nnf>,
    check_sat: bool,
    expected: Option<bool>,
    warnings: Vec<String>,
}

fn unsupported(what: impl Into<String>) -> ParseError {
    ParseError::Unsupported(what.into())
}

fn atom_of(s: &Sexp) -> Option<&str> {
    match s {
        Sexp::Atom(a) => Some(a),
        Sexp::List(_) => None,
    }
}

/// Parses a decimal or integer numeral.
fn numeral(s: &str) -> Option<BigRational> {
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(digits, denom))
}

impl Reader {
    fn command(&mut self, cmd: &Sexp) -> Result<(), ParseError> {
        let Sexp::List(items) = cmd else {
            return Err(ParseError::Syntax(format!("expected a command, found `{cmd}`")));
        };
        let head = items.first().and_then(atom_of).unwrap_or("");
        match (head, &items[1..]) {
            ("set-logic", [Sexp::Atom(l)]) => {
                self.logic = Some(match l.as_str() {
                    "QF_LRA" => TheoryKind::Lra,
                    "QF_UF" => TheoryKind::Cc,
                    other => return Err(unsupported(format!("logic {other}"))),
                });
            }
            ("set-info", [Sexp::Atom(k), v]) if k == ":status" => {
                self.expected = match atom_of(v) {
                    Some("unsat") => Some(true),
                    Some("sat") => Some(false),
                    _ => None,
                };
            }
            ("set-info", _) | ("set-option", _) => {}
            ("declare-sort", [Sexp::Atom(name), Sexp::Atom(arity)]) => {
                if arity != "0" {
                    return Err(unsupported("parametric sorts"));
                }
                self.sorts.insert(name.clone());
            }
            ("declare-fun", [Sexp::Atom(name), Sexp::List(args), result]) => {
                let args = args.iter().map(|a| self.sort(a)).collect::<Result<Vec<_>, _>>()?;
                let result = self.sort(result)?;
                if !args.is_empty() && (result == Sort::Real || result == Sort::Bool) {
                    return Err(unsupported(format!("function `{name}` with {result:?} result")));
                }
                if args.iter().any(|a| !matches!(a, Sort::Named(_))) {
                    return Err(unsupported(format!("function `{name}` over interpreted sorts")));
                }
                self.funs.insert(name.clone(), Signature { args, result });
            }
            ("declare-const", [Sexp::Atom(name), result]) => {
                let result = self.sort(result)?;
                self.funs.insert(name.clone(), Signature { args: Vec::new(), result });
            }
            ("assert", [t]) => {
                let f = self.formula(t, true)?;
                self.asserts.push(f);
            }
            ("check-sat", []) => self.check_sat = true,
            ("exit", []) => {}
            ("get-model", []) | ("get-proof", []) => {
                self.warnings.push(format!("ignored `{cmd}`"));
            }
            _ => return Err(unsupported(format!("command `{cmd}`"))),
        }
        Ok(())
    }

    fn sort(&self, s: &Sexp) -> Result<Sort, ParseError> {
        match atom_of(s) {
            Some("Bool") => Ok(Sort::Bool),
            Some("Real") => Ok(Sort::Real),
            Some(n) if self.sorts.contains(n) => Ok(Sort::Named(n.to_string())),
            _ => Err(unsupported(format!("sort `{s}`"))),
        }
    }

    /// The term `t` with the given polarity, in negation normal form.
    fn formula(&self, t: &Sexp, positive: bool) -> Result<Nnf, ParseError> {
        match t {
            Sexp::Atom(a) => match a.as_str() {
                "true" => Ok(Nnf::Const(positive)),
                "false" => Ok(Nnf::Const(!positive)),
                name => match self.funs.get(name) {
                    Some(Signature { args, result: Sort::Bool }) if args.is_empty() => {
                        Ok(Nnf::Lit(Literal::new(Atom::prop(name), positive)))
                    }
                    Some(_) => Err(ParseError::Sort(format!("`{name}` is not Boolean"))),
                    None => Err(ParseError::UnknownSymbol(name.to_string())),
                },
            },
            Sexp::List(items) => {
                let head = items.first().and_then(atom_of).unwrap_or("");
                let args = &items[1.min(items.len())..];
                match head {
                    "not" => match args {
                        [x] => self.formula(x, !positive),
                        _ => Err(ParseError::Syntax(format!("`not` takes one argument: `{t}`"))),
                    },
                    "and" | "or" => {
                        let parts = args.iter().map(|a| self.formula(a, positive)).collect::<Result<_, _>>()?;
                        Ok(if (head == "and") == positive { Nnf::And(parts) } else { Nnf::Or(parts) })
                    }
                    "=>" => match args {
                        [a, b] => {
                            let a = self.formula(a, !positive)?;
                            let b = self.formula(b, positive)?;
                            Ok(if positive { Nnf::Or(vec![a, b]) } else { Nnf::And(vec![a, b]) })
                        }
                        _ => Err(ParseError::Syntax(format!("`=>` takes two arguments: `{t}`"))),
                    },
                    "distinct" => {
                        let mut pairs = Vec::new();
                        for (i, a) in args.iter().enumerate() {
                            for b in &args[i + 1..] {
                                pairs.push(self.equality(a, b, !positive)?);
                            }
                        }
                        Ok(if positive { Nnf::And(pairs) } else { Nnf::Or(pairs) })
                    }
                    "=" => match args {
                        [a, b] => self.equality(a, b, positive),
                        _ => Err(unsupported(format!("chained equality `{t}`"))),
                    },
                    "<" | "<=" | ">" | ">=" => match args {
                        [a, b] => {
                            let (a, b) = (self.linear(a)?, self.linear(b)?);
                            Ok(comparison(head, a, b, positive))
                        }
                        _ => Err(unsupported(format!("chained comparison `{t}`"))),
                    },
                    other => Err(unsupported(format!("`{other}` in `{t}`"))),
                }
            }
        }
    }

    fn equality(&self, a: &Sexp, b: &Sexp, positive: bool) -> Result<Nnf, ParseError> {
        let sort = self.sort_of(a)?;
        if sort != self.sort_of(b)? {
            return Err(ParseError::Sort(format!("`{a}` and `{b}` differ in sort")));
        }
        match sort {
            Sort::Real => Ok(comparison("=", self.linear(a)?, self.linear(b)?, positive)),
            Sort::Named(_) => {
                let atom = Atom::euf_eq(self.ground(a)?, self.ground(b)?);
                Ok(Nnf::Lit(Literal::new(atom, positive)))
            }
            Sort::Bool => Err(unsupported(format!("Boolean equality `(= {a} {b})`"))),
        }
    }

    fn sort_of(&self, t: &Sexp) -> Result<Sort, ParseError> {
        let name = match t {
            Sexp::Atom(a) if numeral(a).is_some() => return Ok(Sort::Real),
            Sexp::Atom(a) => a.as_str(),
            Sexp::List(items) => match items.first().and_then(atom_of) {
                Some("+" | "-" | "*" | "/") => return Ok(Sort::Real),
                Some(f) => f,
                None => return Err(ParseError::Syntax(format!("bad term `{t}`"))),
            },
        };
        match self.funs.get(name) {
            Some(sig) => Ok(sig.result.clone()),
            None if matches!(name, "true" | "false") => Ok(Sort::Bool),
            None => Err(ParseError::UnknownSymbol(name.to_string())),
        }
    }

    fn ground(&self, t: &Sexp) -> Result<GroundTerm, ParseError> {
        let (name, args): (&str, &[Sexp]) = match t {
            Sexp::Atom(a) => (a, &[]),
            Sexp::List(items) => match items.split_first() {
                Some((Sexp::Atom(f), rest)) => (f, rest),
                _ => return Err(ParseError::Syntax(format!("bad term `{t}`"))),
            },
        };
        let sig = self.funs.get(name).ok_or_else(|| ParseError::UnknownSymbol(name.to_string()))?;
        if sig.args.len() != args.len() {
            return Err(ParseError::Sort(format!("`{name}` expects {} arguments", sig.args.len())));
        }
        let mut sub = Vec::with_capacity(args.len());
        for (a, s) in args.iter().zip(&sig.args) {
            if &self.sort_of(a)? != s {
                return Err(ParseError::Sort(format!("argument `{a}` of `{name}`")));
            }
            sub.push(self.ground(a)?);
        }
        Ok(GroundTerm::app(name, sub))
    }

    fn linear(&self, t: &Sexp) -> Result<Linear, ParseError> {
        match t {
            Sexp::Atom(a) => {
                if let Some(q) = numeral(a) {
                    return Ok(Linear { constant: q, ..Linear::default() });
                }
                match self.funs.get(a.as_str()) {
                    Some(Signature { args, result: Sort::Real }) if args.is_empty() => Ok(Linear {
                        coeffs: [(a.clone(), BigRational::one())].into(),
                        constant: BigRational::zero(),
                    }),
                    Some(_) => Err(ParseError::Sort(format!("`{a}` is not Real"))),
                    None => Err(ParseError::UnknownSymbol(a.clone())),
                }
            }
            Sexp::List(items) => {
                let head = items.first().and_then(atom_of).unwrap_or("");
                let args = items[1.min(items.len())..]
                    .iter()
                    .map(|a| self.linear(a))
                    .collect::<Result<Vec<_>, _>>()?;
                match (head, args.as_slice()) {
                    ("+", [_, ..]) => Ok(args.into_iter().fold(Linear::default(), Linear::add)),
                    ("-", [x]) => Ok(x.clone().scale(&-BigRational::one())),
                    ("-", [x, rest @ ..]) => Ok(rest
                        .iter()
                        .fold(x.clone(), |acc, r| acc.add(r.clone().scale(&-BigRational::one())))),
                    ("*", [_, ..]) => {
                        let mut acc = Linear { constant: BigRational::one(), ..Linear::default() };
                        for x in args {
                            acc = match (acc.as_constant(), x.as_constant()) {
                                (Some(k), _) => x.clone().scale(&k.clone()),
                                (_, Some(k)) => acc.scale(k),
                                _ => return Err(unsupported(format!("non-linear term `{t}`"))),
                            };
                        }
                        Ok(acc)
                    }
                    ("/", [x, y]) => match y.as_constant() {
                        Some(k) if !k.is_zero() => Ok(x.clone().scale(&k.recip())),
                        _ => Err(unsupported(format!("division `{t}`"))),
                    },
                    _ => Err(unsupported(format!("arithmetic term `{t}`"))),
                }
            }
        }
    }
}

/// `a op b`, or its negation when `positive` is false.
fn comparison(op: &str, a: Linear, b: Linear, positive: bool) -> Nnf {
    let minus = -BigRational::one();
    // e REL 0 with e = lhs - rhs
    let (e, rel) = match op {
        ">" => (a.add(b.scale(&minus)), Relation::Gt),
        ">=" => (a.add(b.scale(&minus)), Relation::Ge),
        "<" => (b.add(a.scale(&minus)), Relation::Gt),
        "<=" => (b.add(a.scale(&minus)), Relation::Ge),
        _ => (a.add(b.scale(&minus)), Relation::Eq),
    };
    let bound = -e.constant.clone();
    if e.coeffs.is_empty() {
        let zero = BigRational::zero();
        let holds = match rel {
            Relation::Gt => zero > bound,
            Relation::Ge => zero >= bound,
            Relation::Eq => zero == bound,
        };
        return Nnf::Const(holds == positive);
    }
    let (atom, sign) = linear_atom(e.coeffs, rel, bound);
    Nnf::Lit(Literal::new(atom, sign == positive))
}

/// Distributes a negation normal form into clauses. Tautologies are dropped.
fn cnf(f: &Nnf) -> Vec<BTreeSet<Literal>> {
    match f {
        Nnf::Const(true) => Vec::new(),
        Nnf::Const(false) => vec![BTreeSet::new()],
        Nnf::Lit(l) => vec![[l.clone()].into()],
        Nnf::And(parts) => parts.iter().flat_map(cnf).collect(),
        Nnf::Or(parts) => {
            let mut acc: Vec<BTreeSet<Literal>> = vec![BTreeSet::new()];
            for p in parts {
                let sub = cnf(p);
                let mut next = Vec::with_capacity(acc.len() * sub.len());
                for a in &acc {
                    for s in &sub {
                        let c: BTreeSet<Literal> = a.union(s).cloned().collect();
                        if !c.iter().any(|l| c.contains(&l.negate())) {
                            next.push(c);
                        }
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

/// Reads a script in the supported fragment. The statement is present only
/// when the script asserts something and asks `(check-sat)`.
pub fn parse_mini_smt(text: &str) -> Result<ParsedProblem, ParseError> {
    let mut r = Reader::default();
    for cmd in read_all(text)? {
        r.command(&cmd)?;
    }
    let mut out = ParsedProblem {
        expected: r.expected,
        theory: r.logic,
        warnings: r.warnings,
        ..ParsedProblem::default()
    };
    if r.check_sat && !r.asserts.is_empty() {
        let clauses: BTreeSet<Clause> =
            r.asserts.iter().flat_map(cnf).map(Clause::new).collect();
        out.statement = Some(clause_statement(&clauses));
        out.clauses = Some(clauses);
    }
    Ok(out)
}
