//! Regular closed subsets of Cantor space as pruned deterministic binary
//! automata: Cantor-Bendixson derivatives, countability and perfect-kernel
//! decisions, and exact sup-distances from cylinder step functions to the
//! vanishing ideal of the set.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CantorError {
    #[error("automaton denotes the empty set")]
    EmptySet,
    #[error("bad automaton input: {0}")]
    BadInput(String),
    #[error("step function must assign all {expected} strings of its depth, got {got}")]
    IncompleteStepFunction { expected: usize, got: usize },
}

/// Raw automaton input before pruning: a partial deterministic transition
/// relation over `{0,1}`.
#[derive(Debug, Clone)]
pub struct RawAutomaton {
    pub state_count: usize,
    pub initial: usize,
    pub transitions: Vec<(usize, u8, usize)>,
}

impl RawAutomaton {
    /// Parse the file format: line 1 `states initial`, then lines
    /// `state bit target`.
    pub fn parse(text: &str) -> Result<RawAutomaton, CantorError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| {
            CantorError::BadInput("missing header line `states initial`".to_string())
        })?;
        let mut parts = header.split_whitespace();
        let state_count: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CantorError::BadInput("bad state count".to_string()))?;
        let initial: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CantorError::BadInput("bad initial state".to_string()))?;
        let mut transitions = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(CantorError::BadInput(format!(
                    "expected `state bit target`, got `{line}`"
                )));
            }
            let parse = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| CantorError::BadInput(format!("bad number `{t}`")))
            };
            let (s, b, t) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
            if b > 1 {
                return Err(CantorError::BadInput(format!("bit must be 0 or 1, got {b}")));
            }
            transitions.push((s, b as u8, t));
        }
        Ok(RawAutomaton { state_count, initial, transitions })
    }
}

/// A nonempty closed subset of Cantor space, presented by a pruned
/// deterministic automaton: every state is reachable from the initial state
/// and carries at least one outgoing transition (hence an infinite path).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularClosedSet {
    initial: usize,
    next: Vec<[Option<usize>; 2]>,
}

impl RegularClosedSet {
    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, state: usize, bit: u8) -> Option<usize> {
        self.next[state][bit as usize]
    }

    /// The full binary tree, `2^N` itself.
    pub fn full() -> RegularClosedSet {
        RegularClosedSet { initial: 0, next: vec![[Some(0), Some(0)]] }
    }

    /// The singleton of one ultimately periodic point with the given prefix
    /// and period.
    pub fn singleton(prefix: &[u8], period: &[u8]) -> RegularClosedSet {
        assert!(!period.is_empty());
        let total = prefix.len() + period.len();
        let mut next = vec![[None, None]; total];
        for (i, &b) in prefix.iter().chain(period).enumerate() {
            let target = if i + 1 == total { prefix.len() } else { i + 1 };
            next[i][(b != 0) as usize] = Some(target);
        }
        RegularClosedSet { initial: 0, next }
    }

    /// Run a bit string from the initial state.
    pub fn run(&self, bits: &[u8]) -> Option<usize> {
        let mut s = self.initial;
        for &b in bits {
            s = self.step(s, b)?;
        }
        Some(s)
    }

    /// Is the string a prefix of some branch?  (All states are live.)
    pub fn feasible(&self, bits: &[u8]) -> bool {
        self.run(bits).is_some()
    }

    /// All feasible strings of exactly the given depth.
    pub fn feasible_strings(&self, depth: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut stack = vec![(self.initial, Vec::new())];
        while let Some((s, prefix)) = stack.pop() {
            if prefix.len() == depth {
                out.push(prefix);
                continue;
            }
            for b in [0u8, 1] {
                if let Some(t) = self.step(s, b) {
                    let mut p = prefix.clone();
                    p.push(b);
                    stack.push((t, p));
                }
            }
        }
        out.sort();
        out
    }

    /// States whose subtree carries exactly one infinite branch, by the
    /// greatest fixpoint: single iff out-degree one and the successor is
    /// single. Cycles of forced transitions stay in.
    fn single_branch_states(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut single = vec![true; n];
        loop {
            let mut changed = false;
            for s in 0..n {
                if !single[s] {
                    continue;
                }
                let succs: Vec<usize> = [0, 1]
                    .into_iter()
                    .filter_map(|b| self.next[s][b])
                    .collect();
                let keep = succs.len() == 1 && single[succs[0]];
                if !keep {
                    single[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        single
    }

    /// Remove the isolated points: delete the single-branch states and
    /// re-prune. `None` when every branch was isolated.
    pub fn cb_derivative(&self) -> Option<RegularClosedSet> {
        let single = self.single_branch_states();
        if single.iter().all(|&s| !s) {
            return Some(self.clone());
        }
        let mut transitions = Vec::new();
        for s in 0..self.state_count() {
            if single[s] {
                continue;
            }
            for b in [0u8, 1] {
                if let Some(t) = self.next[s][b as usize] {
                    if !single[t] {
                        transitions.push((s, b, t));
                    }
                }
            }
        }
        let raw = RawAutomaton {
            state_count: self.state_count(),
            initial: self.initial,
            transitions,
        };
        prune(&raw).ok()
    }

    /// Iterate the derivative to the perfect kernel: the number of
    /// applications and the kernel (None when the set is countable).
    pub fn cb_rank_and_kernel(&self) -> (usize, Option<RegularClosedSet>) {
        let mut current = self.clone();
        let mut rank = 0;
        loop {
            match current.cb_derivative() {
                None => return (rank + 1, None),
                Some(next) => {
                    if next == current {
                        return (rank, Some(current));
                    }
                    rank += 1;
                    current = next;
                }
            }
        }
    }

    /// Countable iff the perfect kernel is empty.
    pub fn is_countable(&self) -> bool {
        self.cb_rank_and_kernel().1.is_none()
    }

    /// Superatomicity of the dual algebra of the set: equivalent to
    /// countability.
    pub fn is_superatomic(&self) -> bool {
        self.is_countable()
    }

    /// Separability of the dual of the continuous functions on the set:
    /// equivalent to countability.
    pub fn dual_separable(&self) -> bool {
        self.is_countable()
    }

    /// Language inclusion via the product construction: every branch of
    /// `self` is a branch of `other`.
    pub fn subset_of(&self, other: &RegularClosedSet) -> bool {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        let start = (self.initial, other.initial);
        seen.insert(start);
        queue.push_back(start);
        while let Some((a, b)) = queue.pop_front() {
            for bit in [0u8, 1] {
                if let Some(na) = self.step(a, bit) {
                    match other.step(b, bit) {
                        // self can take a step other cannot follow; since
                        // every state of self is live, a branch escapes
                        None => return false,
                        Some(nb) => {
                            if seen.insert((na, nb)) {
                                queue.push_back((na, nb));
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn renumber_canonical(initial: usize, next: &[[Option<usize>; 2]]) -> RegularClosedSet {
        // BFS order from the initial state, bit 0 before bit 1
        let mut order = HashMap::new();
        let mut list = Vec::new();
        let mut queue = VecDeque::new();
        order.insert(initial, 0usize);
        list.push(initial);
        queue.push_back(initial);
        while let Some(s) = queue.pop_front() {
            for b in 0..2 {
                if let Some(t) = next[s][b] {
                    if !order.contains_key(&t) {
                        order.insert(t, list.len());
                        list.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        let renamed: Vec<[Option<usize>; 2]> = list
            .iter()
            .map(|&s| [next[s][0].map(|t| order[&t]), next[s][1].map(|t| order[&t])])
            .collect();
        RegularClosedSet { initial: 0, next: renamed }
    }
}

impl fmt::Display for RegularClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.state_count(), self.initial)?;
        for (s, row) in self.next.iter().enumerate() {
            for (b, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    writeln!(f, "{s} {b} {t}")?;
                }
            }
        }
        Ok(())
    }
}

/// Greatest-fixpoint pruning: drop states without an infinite path, then
/// unreachable states; error if nothing survives.
pub fn prune(raw: &RawAutomaton) -> Result<RegularClosedSet, CantorError> {
    let n = raw.state_count;
    if raw.initial >= n {
        return Err(CantorError::BadInput(format!(
            "initial state {} out of range {n}",
            raw.initial
        )));
    }
    let mut next: Vec<[Option<usize>; 2]> = vec![[None, None]; n];
    for &(s, b, t) in &raw.transitions {
        if s >= n || t >= n {
            return Err(CantorError::BadInput(format!(
                "transition ({s}, {b}, {t}) out of range {n}"
            )));
        }
        let slot = &mut next[s][b as usize];
        if let Some(existing) = slot {
            if *existing != t {
                return Err(CantorError::BadInput(format!(
                    "conflicting transitions from state {s} on bit {b}"
                )));
            }
        }
        *slot = Some(t);
    }
    // live states: greatest fixpoint of "has a successor that is live"
    let mut live = vec![true; n];
    loop {
        let mut changed = false;
        for s in 0..n {
            if !live[s] {
                continue;
            }
            let ok = next[s].iter().flatten().any(|&t| live[t]);
            if !ok {
                live[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !live[raw.initial] {
        return Err(CantorError::EmptySet);
    }
    let pruned: Vec<[Option<usize>; 2]> = next
        .iter()
        .enumerate()
        .map(|(s, row)| {
            if live[s] {
                [row[0].filter(|&t| live[t]), row[1].filter(|&t| live[t])]
            } else {
                [None, None]
            }
        })
        .collect();
    Ok(RegularClosedSet::renumber_canonical(raw.initial, &pruned))
}

/// A rational step function determined by cylinders of a fixed depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    depth: usize,
    values: BTreeMap<Vec<u8>, BigRational>,
}

impl StepFunction {
    pub fn new(
        depth: usize,
        values: BTreeMap<Vec<u8>, BigRational>,
    ) -> Result<StepFunction, CantorError> {
        let expected = 1usize << depth;
        let valid = values.len() == expected
            && values
                .keys()
                .all(|k| k.len() == depth && k.iter().all(|&b| b <= 1));
        if !valid {
            return Err(CantorError::IncompleteStepFunction {
                expected,
                got: values.len(),
            });
        }
        Ok(StepFunction { depth, values })
    }

    /// Indicator of the cylinder at the given string.
    pub fn indicator(cylinder: &[u8]) -> StepFunction {
        let depth = cylinder.len();
        let mut values = BTreeMap::new();
        for i in 0..(1usize << depth) {
            let key: Vec<u8> = (0..depth).map(|j| ((i >> (depth - 1 - j)) & 1) as u8).collect();
            let v = if key == cylinder { BigRational::one() } else { BigRational::zero() };
            values.insert(key, v);
        }
        StepFunction { depth, values }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Parse lines of `bitstring value`, values as integers or `p/q`.
    pub fn parse(text: &str) -> Result<StepFunction, CantorError> {
        let mut values = BTreeMap::new();
        let mut depth = None;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let mut parts = line.split_whitespace();
            let (bits, value) = (parts.next(), parts.next());
            let (Some(bits), Some(value)) = (bits, value) else {
                return Err(CantorError::BadInput(format!(
                    "expected `bits value`, got `{line}`"
                )));
            };
            let key: Result<Vec<u8>, _> = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(CantorError::BadInput(format!("bad bit `{other}`"))),
                })
                .collect();
            let key = key?;
            match depth {
                None => depth = Some(key.len()),
                Some(d) if d != key.len() => {
                    return Err(CantorError::BadInput(
                        "step function strings must share one depth".to_string(),
                    ))
                }
                _ => {}
            }
            let rational = parse_rational(value)
                .ok_or_else(|| CantorError::BadInput(format!("bad rational `{value}`")))?;
            values.insert(key, rational);
        }
        let depth = depth.ok_or_else(|| {
            CantorError::BadInput("empty step function file".to_string())
        })?;
        StepFunction::new(depth, values)
    }
}

fn parse_rational(text: &str) -> Option<BigRational> {
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = text.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Sup-distance from the step function to the vanishing ideal of the set:
/// the maximum of `|f|` over the depth-k cylinders meeting the set.
pub fn wijsman_dist(f: &StepFunction, set: &RegularClosedSet) -> BigRational {
    let mut best = BigRational::zero();
    for (bits, value) in &f.values {
        if set.feasible(bits) {
            let a = value.abs();
            if a > best {
                best = a;
            }
        }
    }
    best
}
