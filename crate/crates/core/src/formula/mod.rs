//! The formula DSL: typed atoms under Boolean connectives and countable,
//! compact, and Polish quantifiers, with a parser, negation normal form,
//! and the pointclass rank analyzer.

mod catalogue;
mod parser;

pub use catalogue::{catalogue, CatalogueEntry};
pub use parser::{parse, ParseError};

use std::fmt;

use thiserror::Error;

use crate::pointclass::{Connective, Lattice, Pointclass};

/// Atom flavour; determines the base pointclass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomKind {
    Clopen,
    Open,
    Closed,
    /// Existential assertion with a perturbation-stability modulus; ranked
    /// as an open atom.
    StableExists,
    /// Externally known fact of the given class.
    Opaque(Pointclass),
}

impl AtomKind {
    pub fn base_class(&self) -> Pointclass {
        match self {
            AtomKind::Clopen => Pointclass::Delta0(1),
            AtomKind::Open => Pointclass::Sigma0(1),
            AtomKind::Closed => Pointclass::Pi0(1),
            AtomKind::StableExists => Pointclass::Sigma0(1),
            AtomKind::Opaque(g) => *g,
        }
    }
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKind::Clopen => write!(f, "clopen"),
            AtomKind::Open => write!(f, "open"),
            AtomKind::Closed => write!(f, "closed"),
            AtomKind::StableExists => write!(f, "stex"),
            AtomKind::Opaque(g) => write!(f, "borel@{g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub kind: AtomKind,
    pub name: String,
    pub vars: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    /// `A x.` — universal over a countable sort.
    ForallCtbl,
    /// `E x.` — existential over a countable sort.
    ExistsCtbl,
    /// `Ec x.` — existential over a compact space (projection rule).
    ExistsCpt,
    /// `Ep x.` — existential over a Polish space (analytic projection).
    ExistsPolish,
}

impl Quantifier {
    fn keyword(self) -> &'static str {
        match self {
            Quantifier::ForallCtbl => "A",
            Quantifier::ExistsCtbl => "E",
            Quantifier::ExistsCpt => "Ec",
            Quantifier::ExistsPolish => "Ep",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Quant { q: Quantifier, var: String, body: Box<Formula> },
}

impl Formula {
    pub fn atom(kind: AtomKind, name: &str, vars: &[&str]) -> Formula {
        Formula::Atom(Atom {
            kind,
            name: name.to_string(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn quant(q: Quantifier, var: &str, body: Formula) -> Formula {
        Formula::Quant { q, var: var.to_string(), body: Box::new(body) }
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// True when `not` occurs only directly above atoms.
    pub fn is_negation_normal(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom(_)),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_negation_normal() && b.is_negation_normal()
            }
            Formula::Quant { body, .. } => body.is_negation_normal(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("negation above `{0}` has no dual rule")]
    NoDualRule(&'static str),
}

/// Push negations down to the atoms, dualizing countable quantifiers.
///
/// A negation above `Ec` or `Ep` is rejected: the projection rules have no
/// licensed co-projection duals.
pub fn push_negations(f: &Formula) -> Result<Formula, NormalizeError> {
    fn go(f: &Formula, negate: bool) -> Result<Formula, NormalizeError> {
        Ok(match f {
            Formula::Atom(a) => {
                if negate {
                    Formula::Not(Box::new(Formula::Atom(a.clone())))
                } else {
                    Formula::Atom(a.clone())
                }
            }
            Formula::Not(inner) => go(inner, !negate)?,
            Formula::And(a, b) => {
                let (a, b) = (go(a, negate)?, go(b, negate)?);
                if negate {
                    Formula::or(a, b)
                } else {
                    Formula::and(a, b)
                }
            }
            Formula::Or(a, b) => {
                let (a, b) = (go(a, negate)?, go(b, negate)?);
                if negate {
                    Formula::and(a, b)
                } else {
                    Formula::or(a, b)
                }
            }
            Formula::Quant { q, var, body } => {
                let q2 = if negate {
                    match q {
                        Quantifier::ForallCtbl => Quantifier::ExistsCtbl,
                        Quantifier::ExistsCtbl => Quantifier::ForallCtbl,
                        Quantifier::ExistsCpt => {
                            return Err(NormalizeError::NoDualRule("Ec"))
                        }
                        Quantifier::ExistsPolish => {
                            return Err(NormalizeError::NoDualRule("Ep"))
                        }
                    }
                } else {
                    *q
                };
                Formula::Quant { q: q2, var: var.clone(), body: Box::new(go(body, negate)?) }
            }
        })
    }
    go(f, false)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankError {
    #[error("formula is not in negation normal form")]
    NotNegationNormal,
}

/// Outcome of the rank computation: an upper bound for the descriptive
/// complexity of the defined set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranked {
    pub class: Pointclass,
    pub warnings: Vec<String>,
    pub saturated: bool,
}

/// Compute the pointclass of a negation-normal formula, bottom-up.
///
/// Compact projections follow the locally-closed projection rule: a child
/// within `Pi0_1` projects to `Pi0_1`, a child within `LocClosed` projects
/// to `Sigma0_2`, and anything else degrades to `Sigma1_1` with a warning.
pub fn rank(lat: &Lattice, f: &Formula) -> Result<Ranked, RankError> {
    if !f.is_negation_normal() {
        return Err(RankError::NotNegationNormal);
    }
    let mut warnings = Vec::new();
    let mut saturated = false;
    let class = go(lat, f, &mut warnings, &mut saturated);
    return Ok(Ranked { class, warnings, saturated });

    fn go(
        lat: &Lattice,
        f: &Formula,
        warnings: &mut Vec<String>,
        saturated: &mut bool,
    ) -> Pointclass {
        match f {
            Formula::Atom(a) => a.kind.base_class(),
            Formula::Not(inner) => match &**inner {
                Formula::Atom(a) => a.kind.base_class().complement(),
                _ => unreachable!("checked negation normal"),
            },
            Formula::And(a, b) | Formula::Or(a, b) => {
                let conn = if matches!(f, Formula::And(_, _)) {
                    Connective::And
                } else {
                    Connective::Or
                };
                let (ga, gb) = (
                    go(lat, a, warnings, saturated),
                    go(lat, b, warnings, saturated),
                );
                let r = lat.meet_join(ga, gb, conn);
                if r.saturated {
                    *saturated = true;
                    warnings.push(format!(
                        "binary connective on {ga} and {gb} saturated at {}",
                        r.class
                    ));
                }
                r.class
            }
            Formula::Quant { q, body, .. } => {
                let g = go(lat, body, warnings, saturated);
                match q {
                    Quantifier::ForallCtbl => {
                        let r = lat.countable_intersection(g);
                        if r.saturated {
                            *saturated = true;
                            warnings.push(format!("level cap reached above {g}"));
                        }
                        r.class
                    }
                    Quantifier::ExistsCtbl => {
                        let r = lat.countable_union(g);
                        if r.saturated {
                            *saturated = true;
                            warnings.push(format!("level cap reached above {g}"));
                        }
                        r.class
                    }
                    Quantifier::ExistsCpt => {
                        if g.leq(Pointclass::Pi0(1)) {
                            Pointclass::Pi0(1)
                        } else if g.leq(Pointclass::LocallyClosed) {
                            Pointclass::Sigma0(2)
                        } else {
                            warnings.push(format!(
                                "compact projection applied to {g}; only closed and \
                                 locally closed operands project inside Borel, \
                                 degrading to Sigma1_1"
                            ));
                            Pointclass::Sigma11
                        }
                    }
                    Quantifier::ExistsPolish => {
                        if g == Pointclass::Pi11 {
                            warnings.push(
                                "Polish projection applied to Pi1_1; result reported \
                                 as Sigma1_1 (outside the supported lattice)"
                                    .to_string(),
                            );
                        }
                        Pointclass::Sigma11
                    }
                }
            }
        }
    }
}

// Printing follows the concrete grammar; parentheses are inserted exactly
// where re-parsing needs them.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

fn write_formula(formula: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match formula {
        Formula::Quant { q, var, body } => {
            write!(f, "{} {var}. ", q.keyword())?;
            write_formula(body, f)
        }
        _ => write_disj(formula, f),
    }
}

fn write_disj(formula: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match formula {
        Formula::Or(a, b) => {
            write_disj(a, f)?;
            write!(f, " | ")?;
            write_conj(b, f)
        }
        _ => write_conj(formula, f),
    }
}

fn write_conj(formula: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match formula {
        Formula::And(a, b) => {
            write_conj(a, f)?;
            write!(f, " & ")?;
            write_neg(b, f)
        }
        _ => write_neg(formula, f),
    }
}

fn write_neg(formula: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match formula {
        Formula::Not(inner) => {
            write!(f, "not ")?;
            write_neg(inner, f)
        }
        Formula::Atom(a) => {
            write!(f, "{}({}", a.kind, a.name)?;
            for v in &a.vars {
                write!(f, ", {v}")?;
            }
            write!(f, ")")
        }
        other => {
            write!(f, "(")?;
            write_formula(other, f)?;
            write!(f, ")")
        }
    }
}
