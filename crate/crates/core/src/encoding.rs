//! Canonical encoding of a quotient on the fixed domain from a decidable
//! congruence at a finite stage: minimal representatives, the index maps,
//! and total operation tables on class indices.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("partition is not a partition of 0..{domain}: {reason}")]
    BadPartition { domain: usize, reason: String },
    #[error("operation `{op}` result {result} out of domain {domain}")]
    ResultOutOfDomain { op: String, result: usize, domain: usize },
    #[error("operation `{op}` argument tuple {args:?} out of domain {domain}")]
    ArgsOutOfDomain { op: String, args: Vec<usize>, domain: usize },
    #[error("operation `{op}` has entries of arities {first} and {second}")]
    MixedArity { op: String, first: usize, second: usize },
    #[error(
        "operation `{op}` breaks the congruence: f{a:?} = {ra} but f{b:?} = {rb} \
         with congruent arguments in inequivalent classes"
    )]
    NotACongruence { op: String, a: Vec<usize>, b: Vec<usize>, ra: usize, rb: usize },
    #[error("operation tables are missing entries at representative tuples")]
    PartialData { missing: Vec<(String, Vec<usize>)> },
}

/// A partial operation table on the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    pub name: String,
    pub arity: usize,
    pub entries: BTreeMap<Vec<usize>, usize>,
}

/// An equivalence relation on `0..domain_size` with partial operation
/// tables respecting it where defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCongruence {
    domain_size: usize,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    ops: Vec<OpTable>,
}

impl FiniteCongruence {
    /// Build from a partition (one block per entry) and operation tables.
    /// The partition must cover `0..domain_size` exactly once; the tables
    /// must respect the congruence on every pair of congruent defined
    /// tuples.
    pub fn new(
        domain_size: usize,
        partition: Vec<Vec<usize>>,
        ops: Vec<OpTable>,
    ) -> Result<Self, EncodingError> {
        let mut class_of = vec![usize::MAX; domain_size];
        for (c, block) in partition.iter().enumerate() {
            if block.is_empty() {
                return Err(EncodingError::BadPartition {
                    domain: domain_size,
                    reason: format!("class {c} is empty"),
                });
            }
            for &x in block {
                if x >= domain_size {
                    return Err(EncodingError::BadPartition {
                        domain: domain_size,
                        reason: format!("element {x} out of range"),
                    });
                }
                if class_of[x] != usize::MAX {
                    return Err(EncodingError::BadPartition {
                        domain: domain_size,
                        reason: format!("element {x} occurs twice"),
                    });
                }
                class_of[x] = c;
            }
        }
        if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(EncodingError::BadPartition {
                domain: domain_size,
                reason: format!("element {x} is not covered"),
            });
        }
        let mut classes: Vec<Vec<usize>> = partition;
        for block in classes.iter_mut() {
            block.sort_unstable();
        }

        for op in &ops {
            for (args, &result) in &op.entries {
                if args.len() != op.arity {
                    return Err(EncodingError::MixedArity {
                        op: op.name.clone(),
                        first: op.arity,
                        second: args.len(),
                    });
                }
                if args.iter().any(|&a| a >= domain_size) {
                    return Err(EncodingError::ArgsOutOfDomain {
                        op: op.name.clone(),
                        args: args.clone(),
                        domain: domain_size,
                    });
                }
                if result >= domain_size {
                    return Err(EncodingError::ResultOutOfDomain {
                        op: op.name.clone(),
                        result,
                        domain: domain_size,
                    });
                }
            }
            // congruence property on all pairs of congruent defined tuples
            for (a, &ra) in &op.entries {
                for (b, &rb) in &op.entries {
                    let congruent = a
                        .iter()
                        .zip(b)
                        .all(|(&x, &y)| class_of[x] == class_of[y]);
                    if congruent && class_of[ra] != class_of[rb] {
                        return Err(EncodingError::NotACongruence {
                            op: op.name.clone(),
                            a: a.clone(),
                            b: b.clone(),
                            ra,
                            rb,
                        });
                    }
                }
            }
        }
        Ok(FiniteCongruence { domain_size, class_of, classes, ops })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn ops(&self) -> &[OpTable] {
        &self.ops
    }

    /// Increasing list of the least element of each class.
    pub fn min_representatives(&self) -> Vec<usize> {
        let mut mins: Vec<usize> = self.classes.iter().map(|c| c[0]).collect();
        mins.sort_unstable();
        mins
    }

    /// The enumeration `rho` of minimal representatives and the index map
    /// `q` sending each element to the index of its class representative;
    /// `q(rho(k)) = k`.
    pub fn rho_q(&self) -> (Vec<usize>, Vec<usize>) {
        let rho = self.min_representatives();
        let index_of_rep: BTreeMap<usize, usize> =
            rho.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let q = (0..self.domain_size)
            .map(|x| index_of_rep[&self.classes[self.class_of[x]][0]])
            .collect();
        (rho, q)
    }

    /// Total operation tables on class indices, evaluated at representative
    /// tuples. Errors with the list of missing entries when the finite
    /// stage is too small.
    pub fn quotient_tables(&self) -> Result<Vec<QuotientOp>, EncodingError> {
        let (rho, q) = self.rho_q();
        let classes = rho.len();
        let mut out = Vec::new();
        let mut missing = Vec::new();
        for op in &self.ops {
            let mut table = BTreeMap::new();
            for tuple in tuples(classes, op.arity) {
                let reps: Vec<usize> = tuple.iter().map(|&k| rho[k]).collect();
                match op.entries.get(&reps) {
                    Some(&result) => {
                        table.insert(tuple, q[result]);
                    }
                    None => missing.push((op.name.clone(), reps)),
                }
            }
            out.push(QuotientOp { name: op.name.clone(), arity: op.arity, table });
        }
        if !missing.is_empty() {
            return Err(EncodingError::PartialData { missing });
        }
        Ok(out)
    }
}

/// A total operation on class indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientOp {
    pub name: String,
    pub arity: usize,
    pub table: BTreeMap<Vec<usize>, usize>,
}

impl fmt::Display for QuotientOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (args, result) in &self.table {
            let rendered: Vec<String> = args.iter().map(|a| a.to_string()).collect();
            writeln!(f, "{} {} -> {}", self.name, rendered.join(" "), result)?;
        }
        Ok(())
    }
}

/// All tuples over `0..bound` of the given arity, lexicographic.
fn tuples(bound: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * bound);
        for t in &out {
            for x in 0..bound {
                let mut t2 = t.clone();
                t2.push(x);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Parse the combined file format: numeric lines list one class per line;
/// lines `name a b ... -> c` (or with a bare `->`-free arrow form
/// `name a b c` rejected) give operation table entries.
pub fn parse_congruence(text: &str) -> Result<FiniteCongruence, EncodingError> {
    let mut partition: Vec<Vec<usize>> = Vec::new();
    let mut ops: BTreeMap<String, (usize, BTreeMap<Vec<usize>, usize>)> = BTreeMap::new();
    let bad = |reason: String| EncodingError::BadPartition { domain: 0, reason };
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let arrow = line.contains("->") || line.contains('\u{2192}');
        if !arrow {
            let block: Result<Vec<usize>, _> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| bad(format!("bad element `{t}`: {e}"))))
                .collect();
            partition.push(block?);
            continue;
        }
        let normalized = line.replace('\u{2192}', "->");
        let (lhs, rhs) = normalized
            .split_once("->")
            .ok_or_else(|| bad(format!("bad operation line `{line}`")))?;
        let mut lhs_tokens = lhs.split_whitespace();
        let name = lhs_tokens
            .next()
            .ok_or_else(|| bad(format!("missing operation name in `{line}`")))?
            .to_string();
        let args: Result<Vec<usize>, _> = lhs_tokens
            .map(|t| t.parse::<usize>().map_err(|e| bad(format!("bad argument `{t}`: {e}"))))
            .collect();
        let args = args?;
        let result: usize = rhs
            .trim()
            .parse()
            .map_err(|e| bad(format!("bad result in `{line}`: {e}")))?;
        let entry = ops.entry(name.clone()).or_insert_with(|| (args.len(), BTreeMap::new()));
        if entry.0 != args.len() {
            return Err(EncodingError::MixedArity {
                op: name,
                first: entry.0,
                second: args.len(),
            });
        }
        entry.1.insert(args, result);
    }
    let domain_size = partition.iter().flatten().count();
    let ops = ops
        .into_iter()
        .map(|(name, (arity, entries))| OpTable { name, arity, entries })
        .collect();
    FiniteCongruence::new(domain_size, partition, ops)
}
