//! Executable hardness reductions: continuous maps from ultimately periodic
//! elements of Cantor space into kernel and subgroup codes, with exact
//! classification of the limit objects and finite-stage oracles.
//!
//! The input domain is restricted to ultimately periodic sequences, on which
//! eventual vanishing (`Fin`) and infinitely-many-ones (`P∞`) are decidable,
//! so every classification is exact rather than extrapolated.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::abelian::AbelianPresentation;
use crate::pointclass::Pointclass;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("stage must be at least 1")]
    ZeroStage,
    #[error("witness does not fit the truncation: {0}")]
    WitnessOutOfRange(String),
    #[error("witness kind does not match the reduction family")]
    WitnessKindMismatch,
    #[error("bad ultimately periodic literal `{0}`: expected `prefix;period` over {{0,1}}")]
    BadLiteral(String),
    #[error("unknown reduction family `{0}`")]
    BadFamily(String),
}

/// An ultimately periodic element of Cantor space: `prefix . period^infinity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPSequence {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl UPSequence {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Option<UPSequence> {
        if period.is_empty() {
            return None;
        }
        Some(UPSequence { prefix, period })
    }

    pub fn from_bits(prefix: &[u8], period: &[u8]) -> UPSequence {
        UPSequence::new(
            prefix.iter().map(|&b| b != 0).collect(),
            period.iter().map(|&b| b != 0).collect(),
        )
        .expect("nonempty period")
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// The n-th bit, O(1).
    pub fn bit(&self, n: usize) -> bool {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.period[(n - self.prefix.len()) % self.period.len()]
        }
    }

    /// Eventually zero. Decidable here: the period is all zeros.
    pub fn is_fin(&self) -> bool {
        self.period.iter().all(|&b| !b)
    }

    /// Infinitely many ones. Decidable here: the period contains a one.
    pub fn is_p_infinity(&self) -> bool {
        self.period.iter().any(|&b| b)
    }

    /// Partial-sum counter: number of ones strictly below `n`.
    pub fn k_alpha(&self, n: usize) -> usize {
        (0..n).filter(|&i| self.bit(i)).count()
    }

    /// Position of the first 1 at index >= `from`, if any exists.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if !self.is_p_infinity() {
            return (from..self.prefix.len()).find(|&i| self.bit(i));
        }
        let mut i = from;
        loop {
            if self.bit(i) {
                return Some(i);
            }
            i += 1;
        }
    }
}

impl fmt::Display for UPSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.prefix {
            write!(f, "{}", b as u8)?;
        }
        write!(f, ";")?;
        for &b in &self.period {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl FromStr for UPSequence {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ReductionError::BadLiteral(s.to_string());
        let (prefix, period) = s.split_once(';').ok_or_else(bad)?;
        let parse_bits = |part: &str| -> Result<Vec<bool>, ReductionError> {
            part.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(bad()),
                })
                .collect()
        };
        UPSequence::new(parse_bits(prefix)?, parse_bits(period)?).ok_or_else(bad)
    }
}

/// The six reduction families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionFamily {
    GroupFin,
    AbelianFin,
    RingFin,
    LatticeFin,
    AbTorsion,
    AbDivisible,
}

impl ReductionFamily {
    pub const ALL: [ReductionFamily; 6] = [
        ReductionFamily::GroupFin,
        ReductionFamily::AbelianFin,
        ReductionFamily::RingFin,
        ReductionFamily::LatticeFin,
        ReductionFamily::AbTorsion,
        ReductionFamily::AbDivisible,
    ];

    pub fn target_property(self) -> &'static str {
        match self {
            ReductionFamily::GroupFin => "finite group",
            ReductionFamily::AbelianFin => "finite abelian group",
            ReductionFamily::RingFin => "finite ring",
            ReductionFamily::LatticeFin => "finite lattice",
            ReductionFamily::AbTorsion => "torsion abelian group",
            ReductionFamily::AbDivisible => "divisible abelian group",
        }
    }

    /// The complexity class for which the reduction witnesses completeness.
    pub fn expected_class(self) -> Pointclass {
        match self {
            ReductionFamily::GroupFin
            | ReductionFamily::AbelianFin
            | ReductionFamily::RingFin
            | ReductionFamily::LatticeFin => Pointclass::Sigma0(2),
            ReductionFamily::AbTorsion | ReductionFamily::AbDivisible => Pointclass::Pi0(2),
        }
    }

    pub fn is_abelian_backed(self) -> bool {
        matches!(
            self,
            ReductionFamily::AbelianFin
                | ReductionFamily::AbTorsion
                | ReductionFamily::AbDivisible
        )
    }
}

impl fmt::Display for ReductionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ReductionFamily::GroupFin => "group-fin",
            ReductionFamily::AbelianFin => "abelian-fin",
            ReductionFamily::RingFin => "ring-fin",
            ReductionFamily::LatticeFin => "lattice-fin",
            ReductionFamily::AbTorsion => "ab-torsion",
            ReductionFamily::AbDivisible => "ab-divisible",
        };
        write!(f, "{s}")
    }
}

impl FromStr for ReductionFamily {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "group-fin" => Ok(ReductionFamily::GroupFin),
            "abelian-fin" => Ok(ReductionFamily::AbelianFin),
            "ring-fin" => Ok(ReductionFamily::RingFin),
            "lattice-fin" => Ok(ReductionFamily::LatticeFin),
            "ab-torsion" => Ok(ReductionFamily::AbTorsion),
            "ab-divisible" => Ok(ReductionFamily::AbDivisible),
            other => Err(ReductionError::BadFamily(other.to_string())),
        }
    }
}

/// A monomial of degree <= 2 over the ring generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingMonomial {
    pub coeff: i64,
    pub indices: Vec<usize>, // 0, 1, or 2 entries
}

/// Lattice terms over the designated top generator and the singleton
/// generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeTerm {
    Top,
    Generator(usize),
    Meet(Box<LatticeTerm>, Box<LatticeTerm>),
    Join(Box<LatticeTerm>, Box<LatticeTerm>),
}

impl LatticeTerm {
    pub fn meet(a: LatticeTerm, b: LatticeTerm) -> LatticeTerm {
        LatticeTerm::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: LatticeTerm, b: LatticeTerm) -> LatticeTerm {
        LatticeTerm::Join(Box::new(a), Box::new(b))
    }

    fn max_generator(&self) -> Option<usize> {
        match self {
            LatticeTerm::Top => None,
            LatticeTerm::Generator(i) => Some(*i),
            LatticeTerm::Meet(a, b) | LatticeTerm::Join(a, b) => {
                match (a.max_generator(), b.max_generator()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (None, None) => None,
                }
            }
        }
    }
}

/// A membership question for a truncated code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Element of `Z^(stage+1)` for the abelian-backed families.
    Vector(Vec<BigInt>),
    /// Word in the free group on `x_0..x_{stage-1}`: (generator, inverted).
    Word(Vec<(usize, bool)>),
    /// Integer polynomial of degree <= 2 in `X_0..X_{stage-1}`.
    Polynomial(Vec<RingMonomial>),
    /// Pair of lattice terms; membership means the two terms evaluate
    /// equally in the stage lattice.
    TermPair(LatticeTerm, LatticeTerm),
}

impl Witness {
    pub fn vector(v: &[i64]) -> Witness {
        Witness::Vector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// 1 + the largest generator index occurring in the witness, 0 if none.
    pub fn max_index_plus_one(&self) -> usize {
        match self {
            Witness::Vector(v) => v
                .iter()
                .enumerate()
                .rev()
                .find(|(_, x)| !x.is_zero())
                .map_or(0, |(i, _)| i + 1),
            Witness::Word(w) => w.iter().map(|&(i, _)| i + 1).max().unwrap_or(0),
            Witness::Polynomial(p) => p
                .iter()
                .flat_map(|m| m.indices.iter().map(|&i| i + 1))
                .max()
                .unwrap_or(0),
            Witness::TermPair(a, b) => a
                .max_generator()
                .into_iter()
                .chain(b.max_generator())
                .map(|i| i + 1)
                .max()
                .unwrap_or(0),
        }
    }

    /// Largest absolute coefficient (1 for words and term pairs).
    fn max_abs_coeff(&self) -> BigInt {
        match self {
            Witness::Vector(v) => {
                v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
            }
            Witness::Polynomial(p) => p
                .iter()
                .map(|m| BigInt::from(m.coeff.abs()))
                .max()
                .unwrap_or_else(BigInt::zero),
            Witness::Word(_) | Witness::TermPair(_, _) => BigInt::one(),
        }
    }
}

/// Finite-stage code of a reduction: a presentation or a membership oracle.
#[derive(Debug, Clone)]
pub enum TruncatedCode {
    /// Presentation on generators `e_0..e_stage`.
    Abelian(AbelianPresentation),
    /// Oracle data for the free-group kernel on `x_0..x_{stage-1}`.
    Group { stage: usize, k_values: Vec<usize> },
    /// Oracle data for the ring kernel on `X_0..X_{stage-1}`.
    Ring { stage: usize, k_values: Vec<usize> },
    /// Oracle data for the lattice congruence kernel.
    Lattice { stage: usize, k_values: Vec<usize> },
}

impl TruncatedCode {
    pub fn presentation(&self) -> Option<&AbelianPresentation> {
        match self {
            TruncatedCode::Abelian(p) => Some(p),
            _ => None,
        }
    }

    /// Does the witness lie in the coded kernel?
    pub fn membership(&self, w: &Witness) -> Result<bool, ReductionError> {
        match (self, w) {
            (TruncatedCode::Abelian(p), Witness::Vector(v)) => {
                let support = w.max_index_plus_one();
                if support > p.generator_count() {
                    return Err(ReductionError::WitnessOutOfRange(format!(
                        "vector support {} exceeds {} generators",
                        support,
                        p.generator_count()
                    )));
                }
                let mut padded = v[..support].to_vec();
                padded.resize(p.generator_count(), BigInt::zero());
                Ok(p.member(&padded).expect("padded to generator count"))
            }
            (TruncatedCode::Group { stage, k_values }, Witness::Word(word)) => {
                let mut sums = vec![0i64; *stage];
                for &(i, inv) in word {
                    if i >= *stage {
                        return Err(ReductionError::WitnessOutOfRange(format!(
                            "generator x_{i} beyond stage {stage}"
                        )));
                    }
                    sums[i] += if inv { -1 } else { 1 };
                }
                // the target group is elementary abelian of exponent 2:
                // membership is decided in the mod-2 abelianization
                Ok(class_sums_even(k_values, &sums))
            }
            (TruncatedCode::Ring { stage, k_values }, Witness::Polynomial(poly)) => {
                let mut constant = 0i64;
                let mut linear = vec![0i64; *stage];
                for mono in poly {
                    for &i in &mono.indices {
                        if i >= *stage {
                            return Err(ReductionError::WitnessOutOfRange(format!(
                                "generator X_{i} beyond stage {stage}"
                            )));
                        }
                    }
                    match mono.indices.len() {
                        0 => constant += mono.coeff,
                        1 => linear[mono.indices[0]] += mono.coeff,
                        2 => {} // the generator ideal is square-zero
                        d => {
                            return Err(ReductionError::WitnessOutOfRange(format!(
                                "monomial degree {d} exceeds 2"
                            )))
                        }
                    }
                }
                Ok(constant % 2 == 0 && class_sums_even(k_values, &linear))
            }
            (TruncatedCode::Lattice { stage, k_values }, Witness::TermPair(a, b)) => {
                let va = eval_lattice_term(a, *stage, k_values)?;
                let vb = eval_lattice_term(b, *stage, k_values)?;
                Ok(va == vb)
            }
            _ => Err(ReductionError::WitnessKindMismatch),
        }
    }
}

fn class_sums_even(k_values: &[usize], sums: &[i64]) -> bool {
    let mut by_class = std::collections::HashMap::new();
    for (i, &s) in sums.iter().enumerate() {
        *by_class.entry(k_values[i]).or_insert(0i64) += s;
    }
    by_class.values().all(|s| s % 2 == 0)
}

/// Values of the stage lattice: finite subsets of the k-image, or top.
#[derive(Debug, Clone, PartialEq, Eq)]
enum LatticeValue {
    Top,
    Set(std::collections::BTreeSet<usize>),
}

fn eval_lattice_term(
    t: &LatticeTerm,
    stage: usize,
    k_values: &[usize],
) -> Result<LatticeValue, ReductionError> {
    Ok(match t {
        LatticeTerm::Top => LatticeValue::Top,
        LatticeTerm::Generator(i) => {
            if *i >= stage {
                return Err(ReductionError::WitnessOutOfRange(format!(
                    "generator g_{i} beyond stage {stage}"
                )));
            }
            LatticeValue::Set([k_values[*i]].into_iter().collect())
        }
        LatticeTerm::Meet(a, b) => {
            let (va, vb) = (
                eval_lattice_term(a, stage, k_values)?,
                eval_lattice_term(b, stage, k_values)?,
            );
            match (va, vb) {
                (LatticeValue::Top, x) | (x, LatticeValue::Top) => x,
                (LatticeValue::Set(x), LatticeValue::Set(y)) => {
                    LatticeValue::Set(x.intersection(&y).copied().collect())
                }
            }
        }
        LatticeTerm::Join(a, b) => {
            let (va, vb) = (
                eval_lattice_term(a, stage, k_values)?,
                eval_lattice_term(b, stage, k_values)?,
            );
            match (va, vb) {
                (LatticeValue::Top, _) | (_, LatticeValue::Top) => LatticeValue::Top,
                (LatticeValue::Set(x), LatticeValue::Set(y)) => {
                    LatticeValue::Set(x.union(&y).copied().collect())
                }
            }
        }
    })
}

/// Build the stage-`stage` code of the family at `alpha`.
///
/// Abelian-backed families present on generators `e_0..e_stage` with the
/// family's relation vectors restricted to supports inside `[0, stage]`;
/// oracle families fix the k-counter values for their generators.
pub fn truncated_code(
    family: ReductionFamily,
    alpha: &UPSequence,
    stage: usize,
) -> Result<TruncatedCode, ReductionError> {
    if stage == 0 {
        return Err(ReductionError::ZeroStage);
    }
    let k_values: Vec<usize> = (0..=stage).map(|n| alpha.k_alpha(n)).collect();
    Ok(match family {
        ReductionFamily::AbelianFin => {
            let gens = stage + 1;
            let mut rels: Vec<Vec<BigInt>> = Vec::new();
            for n in 0..gens {
                let mut r = vec![BigInt::zero(); gens];
                r[n] = BigInt::from(2);
                rels.push(r);
            }
            for m in 0..gens {
                for n in m + 1..gens {
                    if k_values[m] == k_values[n] {
                        let mut r = vec![BigInt::zero(); gens];
                        r[m] = BigInt::one();
                        r[n] = -BigInt::one();
                        rels.push(r);
                    }
                }
            }
            TruncatedCode::Abelian(AbelianPresentation::new(gens, rels).unwrap())
        }
        ReductionFamily::AbTorsion => {
            let gens = stage + 1;
            let mut rels: Vec<Vec<BigInt>> = Vec::new();
            for n in 0..=stage {
                if alpha.bit(n) {
                    let mut r = vec![BigInt::zero(); gens];
                    r[n] = BigInt::one();
                    rels.push(r);
                } else if n < stage {
                    let mut r = vec![BigInt::zero(); gens];
                    r[n] = BigInt::from(2);
                    r[n + 1] = -BigInt::one();
                    rels.push(r);
                }
            }
            TruncatedCode::Abelian(AbelianPresentation::new(gens, rels).unwrap())
        }
        ReductionFamily::AbDivisible => {
            let gens = stage + 1;
            let mut rels: Vec<Vec<BigInt>> = Vec::new();
            for n in 0..stage {
                let mut r = vec![BigInt::zero(); gens];
                r[n] = BigInt::one();
                r[n + 1] = if alpha.bit(n) { -factorial(n + 2) } else { -BigInt::one() };
                rels.push(r);
            }
            TruncatedCode::Abelian(AbelianPresentation::new(gens, rels).unwrap())
        }
        ReductionFamily::GroupFin => {
            TruncatedCode::Group { stage, k_values: k_values[..stage].to_vec() }
        }
        ReductionFamily::RingFin => {
            TruncatedCode::Ring { stage, k_values: k_values[..stage].to_vec() }
        }
        ReductionFamily::LatticeFin => {
            TruncatedCode::Lattice { stage, k_values: k_values[..stage].to_vec() }
        }
    })
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact truth value of the family's target property for the limit object.
pub fn classify(family: ReductionFamily, alpha: &UPSequence) -> bool {
    match family {
        ReductionFamily::GroupFin
        | ReductionFamily::AbelianFin
        | ReductionFamily::RingFin
        | ReductionFamily::LatticeFin => alpha.is_fin(),
        ReductionFamily::AbTorsion | ReductionFamily::AbDivisible => alpha.is_p_infinity(),
    }
}

/// Returns `M` such that membership of the witness in the coded kernel is
/// determined by the bits of alpha below `M`, at every stage the witness
/// fits in.
///
/// For the four finiteness families and the divisible family this is
/// `1 + (largest generator index in the witness)`. The torsion family needs
/// headroom for carry propagation through the doubling relations: a vector
/// with largest index `m` and largest absolute coefficient `c` is decided by
/// `(m + 1) + (1 + floor(log2 c))` bits.
pub fn locality_radius(family: ReductionFamily, witness: &Witness) -> usize {
    let base = witness.max_index_plus_one();
    match family {
        ReductionFamily::AbTorsion => {
            let c = witness.max_abs_coeff();
            if c.is_zero() {
                0
            } else {
                base + c.bits() as usize
            }
        }
        _ => base,
    }
}
