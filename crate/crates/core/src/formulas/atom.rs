use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A ground term: a function symbol applied to ground subterms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroundTerm {
    pub symbol: String,
    pub args: Vec<GroundTerm>,
}

impl GroundTerm {
    pub fn constant(symbol: impl Into<String>) -> Self {
        GroundTerm { symbol: symbol.into(), args: Vec::new() }
    }

    pub fn app(symbol: impl Into<String>, args: Vec<GroundTerm>) -> Self {
        GroundTerm { symbol: symbol.into(), args }
    }

    /// All subterms, children before parents.
    pub fn subterms(&self) -> Vec<&GroundTerm> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a GroundTerm, out: &mut Vec<&'a GroundTerm>) {
            for a in &t.args {
                walk(a, out);
            }
            out.push(t);
        }
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for GroundTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Relation of a linear constraint `sum coeff*var REL bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    Gt,
    Ge,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => "≥",
            Relation::Eq => "=",
        }
    }
}

/// The unsigned half of a literal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    PropVar(String),
    LinConstraint {
        coeffs: BTreeMap<String, BigRational>,
        relation: Relation,
        bound: BigRational,
    },
    EufEq(GroundTerm, GroundTerm),
}

impl Atom {
    pub fn prop(name: impl Into<String>) -> Self {
        Atom::PropVar(name.into())
    }

    /// Equality of two ground terms, sides stored in canonical order.
    pub fn euf_eq(lhs: GroundTerm, rhs: GroundTerm) -> Self {
        if rhs < lhs {
            Atom::EufEq(rhs, lhs)
        } else {
            Atom::EufEq(lhs, rhs)
        }
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Atom::PropVar(_))
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Atom::LinConstraint { .. })
    }

    pub fn is_euf(&self) -> bool {
        matches!(self, Atom::EufEq(..))
    }
}

/// Builds the canonical atom for `sum coeffs*vars REL bound`, returning it with
/// the polarity that expresses the requested constraint.
///
/// Zero coefficients are dropped, the leading coefficient is scaled to 1, and a
/// negative leading coefficient flips the constraint into the negation of a
/// positive-leading atom (`-e ≥ -c` is `¬(e > c)`).
pub fn linear_atom(
    coeffs: impl IntoIterator<Item = (String, BigRational)>,
    relation: Relation,
    bound: BigRational,
) -> (Atom, bool) {
    let mut map: BTreeMap<String, BigRational> = BTreeMap::new();
    for (v, c) in coeffs {
        let e = map.entry(v).or_insert_with(BigRational::zero);
        *e += c;
    }
    map.retain(|_, c| !c.is_zero());
    let lead = match map.values().next() {
        Some(c) => c.clone(),
        None => {
            return (
                Atom::LinConstraint { coeffs: map, relation, bound },
                true,
            )
        }
    };
    let scale = lead.abs().recip();
    let negative = lead.is_negative();
    let mut bound = bound * &scale;
    for c in map.values_mut() {
        *c *= &scale;
        if negative {
            *c = -c.clone();
        }
    }
    if negative {
        bound = -bound;
        // -e REL -c  <=>  e REL' c
        match relation {
            Relation::Eq => (Atom::LinConstraint { coeffs: map, relation, bound }, true),
            // -e ≥ -c  <=>  e ≤ c  <=>  ¬(e > c)
            Relation::Ge => (
                Atom::LinConstraint { coeffs: map, relation: Relation::Gt, bound },
                false,
            ),
            // -e > -c  <=>  e < c  <=>  ¬(e ≥ c)
            Relation::Gt => (
                Atom::LinConstraint { coeffs: map, relation: Relation::Ge, bound },
                false,
            ),
        }
    } else {
        (Atom::LinConstraint { coeffs: map, relation, bound }, true)
    }
}

pub(crate) fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom() == &BigInt::one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::PropVar(n) => write!(f, "{n}"),
            Atom::EufEq(l, r) => write!(f, "{l}={r}"),
            Atom::LinConstraint { coeffs, relation, bound } => {
                if coeffs.is_empty() {
                    write!(f, "0")?;
                }
                for (i, (v, c)) in coeffs.iter().enumerate() {
                    if c.is_negative() {
                        write!(f, "-")?;
                    } else if i > 0 {
                        write!(f, "+")?;
                    }
                    let a = c.abs();
                    if !a.is_one() {
                        fmt_rational(&a, f)?;
                        write!(f, "*")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "{}", relation.symbol())?;
                fmt_rational(bound, f)
            }
        }
    }
}
