//! The lattice of descriptive pointclasses and the closure arithmetic that
//! every rank computation reduces to.
//!
//! Borel kinds carry a level `n >= 1`. `LocClosed` is a single distinguished
//! lattice point between the level-1 classes and `Delta0_2`; it stands for
//! finite Boolean combinations of open and closed sets, so it is fixed by
//! complementation and closed under both binary connectives.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A class in the Borel/projective hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pointclass {
    /// Ambiguous class at level `n` (`n >= 1`).
    Delta0(u32),
    /// Open-sided class at level `n` (`n >= 1`).
    Sigma0(u32),
    /// Closed-sided class at level `n` (`n >= 1`).
    Pi0(u32),
    /// Finite Boolean combinations of open and closed sets.
    LocallyClosed,
    /// Analytic sets.
    Sigma11,
    /// Coanalytic sets.
    Pi11,
}

pub use Pointclass::{Delta0, LocallyClosed, Pi0, Pi11, Sigma0, Sigma11};

/// Binary connective for [`Lattice::meet_join`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
}

/// Result of a level-raising lattice operation.
///
/// `saturated` is set when the true result would exceed the configured level
/// cap (the class is then clipped to the cap) or when no upper bound exists in
/// the lattice (mixed `Sigma1_1`/`Pi1_1` joins).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapResult {
    pub class: Pointclass,
    pub saturated: bool,
}

impl CapResult {
    fn exact(class: Pointclass) -> Self {
        CapResult { class, saturated: false }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PointclassParseError {
    #[error("unknown pointclass `{0}`")]
    Unknown(String),
    #[error("pointclass level must be a positive integer, got `{0}`")]
    BadLevel(String),
}

impl Pointclass {
    /// True iff the kind is Borel (including `LocClosed`).
    pub fn is_borel(self) -> bool {
        !matches!(self, Sigma11 | Pi11)
    }

    /// Complementation: swaps the sides, fixes the self-dual classes.
    pub fn complement(self) -> Pointclass {
        match self {
            Delta0(n) => Delta0(n),
            Sigma0(n) => Pi0(n),
            Pi0(n) => Sigma0(n),
            LocallyClosed => LocallyClosed,
            Sigma11 => Pi11,
            Pi11 => Sigma11,
        }
    }

    /// The standard inclusion order on the lattice.
    pub fn leq(self, other: Pointclass) -> bool {
        if self == other {
            return true;
        }
        match (self, other) {
            // Everything Borel sits inside both projective classes.
            (a, Sigma11) | (a, Pi11) => a.is_borel(),
            (Sigma11, _) | (Pi11, _) => false,
            (Delta0(m), Delta0(n)) | (Delta0(m), Sigma0(n)) | (Delta0(m), Pi0(n)) => m <= n,
            (Sigma0(m), Sigma0(n)) | (Pi0(m), Pi0(n)) => m <= n,
            (Sigma0(m), Pi0(n)) | (Pi0(m), Sigma0(n)) => m < n,
            (Sigma0(m), Delta0(n)) | (Pi0(m), Delta0(n)) => m < n,
            (Delta0(m), LocallyClosed) | (Sigma0(m), LocallyClosed) | (Pi0(m), LocallyClosed) => {
                m == 1
            }
            (LocallyClosed, Delta0(n)) | (LocallyClosed, Sigma0(n)) | (LocallyClosed, Pi0(n)) => {
                n >= 2
            }
            (LocallyClosed, LocallyClosed) => true,
        }
    }

    /// Borel level cost, used only to order candidates in the join search.
    /// Strictly increasing along the chain Delta0_1 < Sigma0_1/Pi0_1 <
    /// LocClosed < Delta0_2 < ...
    fn search_rank(self) -> u32 {
        match self {
            Delta0(n) => 3 * (n - 1),
            Sigma0(n) | Pi0(n) => 3 * (n - 1) + 1,
            LocallyClosed => 2,
            Sigma11 | Pi11 => u32::MAX,
        }
    }
}

impl fmt::Display for Pointclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta0(n) => write!(f, "Delta0_{n}"),
            Sigma0(n) => write!(f, "Sigma0_{n}"),
            Pi0(n) => write!(f, "Pi0_{n}"),
            LocallyClosed => write!(f, "LocClosed"),
            Sigma11 => write!(f, "Sigma1_1"),
            Pi11 => write!(f, "Pi1_1"),
        }
    }
}

impl FromStr for Pointclass {
    type Err = PointclassParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "LocClosed" => return Ok(LocallyClosed),
            "Sigma1_1" => return Ok(Sigma11),
            "Pi1_1" => return Ok(Pi11),
            _ => {}
        }
        for (prefix, make) in [
            ("Sigma0_", Sigma0 as fn(u32) -> Pointclass),
            ("Pi0_", Pi0 as fn(u32) -> Pointclass),
            ("Delta0_", Delta0 as fn(u32) -> Pointclass),
        ] {
            if let Some(level) = s.strip_prefix(prefix) {
                let n: u32 = level
                    .parse()
                    .map_err(|_| PointclassParseError::BadLevel(s.to_string()))?;
                if n == 0 {
                    return Err(PointclassParseError::BadLevel(s.to_string()));
                }
                return Ok(make(n));
            }
        }
        Err(PointclassParseError::Unknown(s.to_string()))
    }
}

/// The pointclass lattice with a configurable level cap.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    max_level: u32,
}

pub const DEFAULT_MAX_LEVEL: u32 = 8;

impl Default for Lattice {
    fn default() -> Self {
        Lattice::new(DEFAULT_MAX_LEVEL)
    }
}

impl Lattice {
    pub fn new(max_level: u32) -> Self {
        Lattice { max_level: max_level.max(1) }
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    fn clip(&self, class: Pointclass) -> CapResult {
        let level = match class {
            Delta0(n) | Sigma0(n) | Pi0(n) => n,
            _ => return CapResult::exact(class),
        };
        if level <= self.max_level {
            return CapResult::exact(class);
        }
        let clipped = match class {
            Delta0(_) => Delta0(self.max_level),
            Sigma0(_) => Sigma0(self.max_level),
            Pi0(_) => Pi0(self.max_level),
            other => other,
        };
        CapResult { class: clipped, saturated: true }
    }

    /// Closure under countable unions.
    pub fn countable_union(&self, g: Pointclass) -> CapResult {
        let raw = match g {
            Sigma0(n) => Sigma0(n),
            Delta0(n) => Sigma0(n),
            Pi0(n) => Sigma0(n + 1),
            LocallyClosed => Sigma0(2),
            Sigma11 => Sigma11,
            Pi11 => Pi11,
        };
        self.clip(raw)
    }

    /// Closure under countable intersections; the complement-conjugate of
    /// [`Lattice::countable_union`].
    pub fn countable_intersection(&self, g: Pointclass) -> CapResult {
        let dual = self.countable_union(g.complement());
        CapResult { class: dual.class.complement(), saturated: dual.saturated }
    }

    /// Least class containing both operands and closed under the connective.
    ///
    /// `Sigma1_1` joined with `Pi1_1` has no upper bound among the supported
    /// kinds; the result is clipped to `Pi1_1` and flagged.
    pub fn meet_join(&self, g1: Pointclass, g2: Pointclass, _c: Connective) -> CapResult {
        if g1 == g2 {
            return CapResult::exact(g1);
        }
        if (g1 == Sigma11 && g2 == Pi11) || (g1 == Pi11 && g2 == Sigma11) {
            return CapResult { class: Pi11, saturated: true };
        }
        if !g1.is_borel() || !g2.is_borel() {
            // Exactly one operand is projective; it absorbs the Borel one.
            let proj = if g1.is_borel() { g2 } else { g1 };
            return CapResult::exact(proj);
        }
        let top = 1 + match (g1, g2) {
            (Delta0(m) | Sigma0(m) | Pi0(m), Delta0(n) | Sigma0(n) | Pi0(n)) => m.max(n),
            (Delta0(m) | Sigma0(m) | Pi0(m), LocallyClosed)
            | (LocallyClosed, Delta0(m) | Sigma0(m) | Pi0(m)) => m.max(2),
            (LocallyClosed, LocallyClosed) => 2,
            _ => unreachable!("projective operands handled above"),
        };
        let mut candidates: Vec<Pointclass> = vec![LocallyClosed];
        for n in 1..=top {
            candidates.extend([Delta0(n), Sigma0(n), Pi0(n)]);
        }
        // Every candidate kind is closed under finite AND and OR (LocClosed
        // by Boolean-combination closure), so the connective does not narrow
        // the candidate set.
        let upper: Vec<Pointclass> = candidates
            .into_iter()
            .filter(|&cand| g1.leq(cand) && g2.leq(cand))
            .collect();
        let best = upper
            .iter()
            .copied()
            .min_by_key(|c| c.search_rank())
            .expect("upper bound exists for Borel operands");
        assert!(
            upper.iter().all(|&c| best.leq(c)),
            "join of {g1} and {g2} has no least upper bound"
        );
        self.clip(best)
    }
}
