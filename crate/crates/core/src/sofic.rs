//! Verifier and bounded brute-force searcher for sofic approximations of
//! partially specified groups: maps into finite symmetric groups that are
//! almost multiplicative on the confirmed products and almost free on the
//! confirmed distinctions, under normalized Hamming distance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<u64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SoficError {
    #[error("permutations have degrees {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("map does not cover symbol `{0}`")]
    MissingSymbol(String),
    #[error("`{0}` is not a permutation of its degree")]
    NotAPermutation(String),
    #[error("table has no symbol `{0}`")]
    UnknownSymbol(String),
    #[error("table declares no identity symbol `1`")]
    NoIdentity,
    #[error("symbol `{0}` has no declared inverse")]
    NoInverse(String),
    #[error("symbols `{0}` and `{1}` are confirmed equal and confirmed distinct")]
    EqualAndDistinct(String, String),
    #[error("bad table line `{0}`")]
    BadTableLine(String),
    #[error("bad map input: {0}")]
    BadMapInput(String),
    #[error("epsilon must lie in (0, 1]")]
    BadEpsilon,
}

/// A permutation of `0..d` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(d: usize) -> Permutation {
        Permutation((0..d).collect())
    }

    pub fn new(images: Vec<usize>) -> Option<Permutation> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// Composition acting left-to-right on points: `(self * other)(i) =
    /// self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// The cyclic shift `i -> i + k (mod d)`.
    pub fn shift(d: usize, k: usize) -> Permutation {
        Permutation((0..d).map(|i| (i + k) % d).collect())
    }
}

/// Normalized Hamming distance: the fraction of moved points.
pub fn hamming(p: &Permutation, q: &Permutation) -> Result<Rational, SoficError> {
    if p.degree() != q.degree() {
        return Err(SoficError::DegreeMismatch(p.degree(), q.degree()));
    }
    let moved = p.0.iter().zip(&q.0).filter(|(a, b)| a != b).count();
    Ok(Rational::new(moved as u64, p.degree() as u64))
}

/// Finitely many confirmed facts about a group: the symbol set (closed
/// under formal inverses, with the identity named `1`), confirmed product
/// triples `uv = w`, and confirmed distinctions `u != v`.
#[derive(Debug, Clone)]
pub struct PartialTable {
    symbols: Vec<String>,
    identity: usize,
    inverse: Vec<usize>,
    products: BTreeSet<(usize, usize, usize)>,
    distinctions: BTreeSet<(usize, usize)>,
}

impl PartialTable {
    pub fn new(
        symbols: Vec<String>,
        inverses: &[(String, String)],
        products: &[(String, String, String)],
        distinctions: &[(String, String)],
    ) -> Result<PartialTable, SoficError> {
        let index: BTreeMap<String, usize> =
            symbols.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let lookup = |s: &str| -> Result<usize, SoficError> {
            index.get(s).copied().ok_or_else(|| SoficError::UnknownSymbol(s.to_string()))
        };
        let identity = lookup("1").map_err(|_| SoficError::NoIdentity)?;
        let mut inverse = vec![usize::MAX; symbols.len()];
        inverse[identity] = identity;
        for (a, b) in inverses {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            inverse[ia] = ib;
            inverse[ib] = ia;
        }
        if let Some(missing) = inverse.iter().position(|&i| i == usize::MAX) {
            return Err(SoficError::NoInverse(symbols[missing].clone()));
        }
        let mut table = PartialTable {
            symbols,
            identity,
            inverse,
            products: BTreeSet::new(),
            distinctions: BTreeSet::new(),
        };
        for (u, v, w) in products {
            let t = (lookup(u)?, lookup(v)?, lookup(w)?);
            table.products.insert(t);
        }
        for (u, v) in distinctions {
            let (iu, iv) = (lookup(u)?, lookup(v)?);
            table.distinctions.insert((iu.min(iv), iu.max(iv)));
        }
        table.validate()?;
        Ok(table)
    }

    /// Identity laws on confirmed triples, and no confirmed equality that is
    /// also a confirmed distinction.
    fn validate(&self) -> Result<(), SoficError> {
        let mut equal: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &(u, v, w) in &self.products {
            if u == self.identity && v != w {
                equal.insert((v.min(w), v.max(w)));
            }
            if v == self.identity && u != w {
                equal.insert((u.min(w), u.max(w)));
            }
        }
        for &(a, b) in &equal {
            if self.distinctions.contains(&(a, b)) {
                return Err(SoficError::EqualAndDistinct(
                    self.symbols[a].clone(),
                    self.symbols[b].clone(),
                ));
            }
        }
        Ok(())
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn identity_symbol(&self) -> &str {
        &self.symbols[self.identity]
    }

    pub fn inverse_of(&self, symbol: &str) -> Option<&str> {
        let i = self.symbols.iter().position(|s| s == symbol)?;
        Some(&self.symbols[self.inverse[i]])
    }

    /// The full table of the cyclic group of order n: symbols `1, g1, ...`
    /// with `gk` denoting the k-th power, all products and all distinctions.
    pub fn cyclic(n: usize) -> PartialTable {
        assert!(n >= 1);
        let name = |k: usize| if k == 0 { "1".to_string() } else { format!("g{k}") };
        let symbols: Vec<String> = (0..n).map(name).collect();
        let inverses: Vec<(String, String)> =
            (0..n).map(|k| (symbols[k].clone(), symbols[(n - k) % n].clone())).collect();
        let mut products = Vec::new();
        for a in 0..n {
            for b in 0..n {
                products.push((
                    symbols[a].clone(),
                    symbols[b].clone(),
                    symbols[(a + b) % n].clone(),
                ));
            }
        }
        let mut distinctions = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                distinctions.push((symbols[a].clone(), symbols[b].clone()));
            }
        }
        PartialTable::new(symbols, &inverses, &products, &distinctions)
            .expect("cyclic table is consistent")
    }

    /// Parse the line format `sym a`, `inv a b`, `mul a b c`, `neq a b`.
    pub fn parse(text: &str) -> Result<PartialTable, SoficError> {
        let mut symbols = Vec::new();
        let mut inverses = Vec::new();
        let mut products = Vec::new();
        let mut distinctions = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["sym", a] => symbols.push(a.to_string()),
                ["inv", a, b] => inverses.push((a.to_string(), b.to_string())),
                ["mul", a, b, c] => {
                    products.push((a.to_string(), b.to_string(), c.to_string()))
                }
                ["neq", a, b] => distinctions.push((a.to_string(), b.to_string())),
                _ => return Err(SoficError::BadTableLine(line.to_string())),
            }
        }
        PartialTable::new(symbols, &inverses, &products, &distinctions)
    }
}

/// An assignment of permutations of a common degree to every symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoficMap {
    degree: usize,
    assignment: BTreeMap<String, Permutation>,
}

impl SoficMap {
    pub fn new(
        degree: usize,
        assignment: BTreeMap<String, Permutation>,
    ) -> Result<SoficMap, SoficError> {
        for (symbol, p) in &assignment {
            if p.degree() != degree {
                return Err(SoficError::NotAPermutation(symbol.clone()));
            }
        }
        Ok(SoficMap { degree, assignment })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, symbol: &str) -> Option<&Permutation> {
        self.assignment.get(symbol)
    }

    pub fn assignment(&self) -> &BTreeMap<String, Permutation> {
        &self.assignment
    }

    /// The left regular representation of the cyclic group table.
    pub fn cyclic_regular(n: usize) -> SoficMap {
        let table = PartialTable::cyclic(n);
        let mut assignment = BTreeMap::new();
        for (k, s) in table.symbols().iter().enumerate() {
            assignment.insert(s.clone(), Permutation::shift(n, k));
        }
        SoficMap { degree: n, assignment }
    }

    /// Parse the map format: first line `d`, then `symbol i0 i1 ... i{d-1}`.
    pub fn parse(text: &str) -> Result<SoficMap, SoficError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let degree: usize = lines
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| SoficError::BadMapInput("missing degree line".to_string()))?;
        let mut assignment = BTreeMap::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != degree + 1 {
                return Err(SoficError::BadMapInput(format!(
                    "expected `symbol` plus {degree} images in `{line}`"
                )));
            }
            let images: Result<Vec<usize>, _> =
                fields[1..].iter().map(|t| t.parse::<usize>()).collect();
            let images = images
                .map_err(|e| SoficError::BadMapInput(format!("bad image: {e}")))?;
            let p = Permutation::new(images)
                .ok_or_else(|| SoficError::NotAPermutation(fields[0].to_string()))?;
            assignment.insert(fields[0].to_string(), p);
        }
        SoficMap::new(degree, assignment)
    }
}

/// Which clause of the sofic conditions failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The identity symbol is not sent to the identity permutation.
    IdentityNotFixed,
    /// A confirmed triple `uv = w` with Hamming defect >= epsilon.
    ProductFar { u: String, v: String, w: String, distance: Rational },
    /// A confirmed distinction `u != v` with Hamming distance <= 1 - epsilon.
    DistinctionNear { u: String, v: String, distance: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityNotFixed => write!(f, "clause (i): sigma(1) != id"),
            Violation::ProductFar { u, v, w, distance } => write!(
                f,
                "clause (ii): d_H(sigma({u})sigma({v}), sigma({w})) = {distance}"
            ),
            Violation::DistinctionNear { u, v, distance } => {
                write!(f, "clause (iii): d_H(sigma({u}), sigma({v})) = {distance}")
            }
        }
    }
}

/// Check the three clause families over the confirmed facts; reports the
/// first violation in clause order.
pub fn verify(
    table: &PartialTable,
    map: &SoficMap,
    eps: Rational,
) -> Result<Result<(), Violation>, SoficError> {
    if eps <= Rational::new(0, 1) || eps > Rational::new(1, 1) {
        return Err(SoficError::BadEpsilon);
    }
    let sigma: Vec<&Permutation> = table
        .symbols
        .iter()
        .map(|s| map.get(s).ok_or_else(|| SoficError::MissingSymbol(s.clone())))
        .collect::<Result<_, _>>()?;
    let id = Permutation::identity(map.degree());
    if *sigma[table.identity] != id {
        return Ok(Err(Violation::IdentityNotFixed));
    }
    for &(u, v, w) in &table.products {
        let d = hamming(&sigma[u].compose(sigma[v]), sigma[w])?;
        if d >= eps {
            return Ok(Err(Violation::ProductFar {
                u: table.symbols[u].clone(),
                v: table.symbols[v].clone(),
                w: table.symbols[w].clone(),
                distance: d,
            }));
        }
    }
    let one = Rational::new(1, 1);
    for &(u, v) in &table.distinctions {
        let d = hamming(sigma[u], sigma[v])?;
        if d <= one - eps {
            return Ok(Err(Violation::DistinctionNear {
                u: table.symbols[u].clone(),
                v: table.symbols[v].clone(),
                distance: d,
            }));
        }
    }
    Ok(Ok(()))
}

/// Bounded backtracking search for a verifying map, degree by degree.
///
/// Symbols are assigned in declaration order (the identity is pinned to the
/// identity permutation) and permutations are tried in lexicographic
/// one-line order, so the returned witness is the least one at the least
/// feasible degree. `None` means only "no witness within the bound".
pub fn search(
    table: &PartialTable,
    eps: Rational,
    d_max: usize,
) -> Result<Option<SoficMap>, SoficError> {
    if eps <= Rational::new(0, 1) || eps > Rational::new(1, 1) {
        return Err(SoficError::BadEpsilon);
    }
    for d in 1..=d_max {
        let mut assignment: Vec<Option<Permutation>> = vec![None; table.symbols.len()];
        assignment[table.identity] = Some(Permutation::identity(d));
        if let Some(found) = assign(table, eps, d, &mut assignment, 0) {
            let named = table
                .symbols
                .iter()
                .cloned()
                .zip(found)
                .collect::<BTreeMap<String, Permutation>>();
            return Ok(Some(SoficMap { degree: d, assignment: named }));
        }
    }
    Ok(None)
}

fn assign(
    table: &PartialTable,
    eps: Rational,
    d: usize,
    assignment: &mut Vec<Option<Permutation>>,
    from: usize,
) -> Option<Vec<Permutation>> {
    let next = (from..table.symbols.len()).find(|&i| assignment[i].is_none());
    let Some(slot) = next else {
        let full: Vec<Permutation> =
            assignment.iter().map(|p| p.clone().unwrap()).collect();
        return if consistent(table, eps, assignment) { Some(full) } else { None };
    };
    let mut perm: Vec<usize> = (0..d).collect();
    loop {
        assignment[slot] = Permutation::new(perm.clone());
        if assignment[slot].is_some() && consistent(table, eps, assignment) {
            if let Some(found) = assign(table, eps, d, assignment, slot + 1) {
                return Some(found);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    assignment[slot] = None;
    None
}

/// Partial verification: checks every clause whose symbols are all
/// assigned.
fn consistent(
    table: &PartialTable,
    eps: Rational,
    assignment: &[Option<Permutation>],
) -> bool {
    let one = Rational::new(1, 1);
    for &(u, v, w) in &table.products {
        if let (Some(pu), Some(pv), Some(pw)) = (&assignment[u], &assignment[v], &assignment[w])
        {
            let d = hamming(&pu.compose(pv), pw).expect("degrees agree");
            if d >= eps {
                return false;
            }
        }
    }
    for &(u, v) in &table.distinctions {
        if let (Some(pu), Some(pv)) = (&assignment[u], &assignment[v]) {
            let d = hamming(pu, pv).expect("degrees agree");
            if d <= one - eps {
                return false;
            }
        }
    }
    true
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}
