//! Shared fixtures and independent oracles for the integration suites.
//! Everything here deliberately avoids the code paths it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::One;
use rand::prelude::*;

use qwb_core::abelian::AbelianInvariants;
use qwb_core::cantorset::{prune, RawAutomaton, RegularClosedSet};
use qwb_core::grothendieck::MonoidData;
use qwb_core::reductions::{LatticeTerm, ReductionFamily, RingMonomial, UPSequence, Witness};

// ---------------------------------------------------------------------------
// finite commutative monoids and the formal-difference Grothendieck oracle

/// A finite commutative monoid given by its Cayley table.
#[derive(Debug, Clone)]
pub struct FiniteMonoid {
    pub name: String,
    pub size: usize,
    pub zero: usize,
    pub add: Vec<Vec<usize>>,
}

impl FiniteMonoid {
    pub fn is_lawful(&self) -> bool {
        let n = self.size;
        let comm = (0..n).all(|a| (0..n).all(|b| self.add[a][b] == self.add[b][a]));
        let unit = (0..n).all(|a| self.add[self.zero][a] == a);
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| self.add[self.add[a][b]][c] == self.add[a][self.add[b][c]])
            })
        });
        comm && unit && assoc
    }

    /// Full Z/E/A tables under the identity enumeration.
    pub fn to_monoid_data(&self) -> MonoidData {
        let n = self.size;
        let zero_set = vec![self.zero];
        let eq_set = (0..n).map(|i| (i, i)).collect();
        let mut add_set = Vec::new();
        for a in 0..n {
            for b in 0..n {
                add_set.push((a, b, self.add[a][b]));
            }
        }
        MonoidData::new(n, zero_set, eq_set, add_set).unwrap()
    }

    /// The same monoid with every element enumerated twice, exercising a
    /// non-injective index map.
    pub fn to_doubled_monoid_data(&self) -> MonoidData {
        let n = self.size;
        let idx = |copy: usize, elem: usize| copy * n + elem;
        let mut eq_set = Vec::new();
        let mut add_set = Vec::new();
        let mut zero_set = Vec::new();
        for c in 0..2 {
            zero_set.push(idx(c, self.zero));
            for c2 in 0..2 {
                for a in 0..n {
                    eq_set.push((idx(c, a), idx(c2, a)));
                    for b in 0..n {
                        add_set.push((idx(c, a), idx(c2, b), idx(0, self.add[a][b])));
                    }
                }
            }
        }
        MonoidData::new(2 * n, zero_set, eq_set, add_set).unwrap()
    }
}

/// The generated family: cyclic groups, saturating truncations of (N, +),
/// idempotent max-monoids, union monoids, and their small products.
pub fn monoid_family() -> Vec<FiniteMonoid> {
    let mut out = Vec::new();
    for n in 1..=6usize {
        out.push(FiniteMonoid {
            name: format!("Z/{n}"),
            size: n,
            zero: 0,
            add: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        });
    }
    for k in 0..=5usize {
        let n = k + 1;
        out.push(FiniteMonoid {
            name: format!("N<={k}"),
            size: n,
            zero: 0,
            add: (0..n).map(|a| (0..n).map(|b| (a + b).min(k)).collect()).collect(),
        });
    }
    for k in 0..=5usize {
        let n = k + 1;
        out.push(FiniteMonoid {
            name: format!("max{k}"),
            size: n,
            zero: 0,
            add: (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect(),
        });
    }
    for bits in 1..=2usize {
        let n = 1 << bits;
        out.push(FiniteMonoid {
            name: format!("union{bits}"),
            size: n,
            zero: 0,
            add: (0..n).map(|a| (0..n).map(|b| a | b).collect()).collect(),
        });
    }
    let base: Vec<FiniteMonoid> = out.clone();
    for a in &base {
        for b in &base {
            if a.size * b.size <= 6 && a.size > 1 && b.size > 1 {
                let size = a.size * b.size;
                let idx = |x: usize, y: usize| x * b.size + y;
                let add = (0..size)
                    .map(|p| {
                        (0..size)
                            .map(|q| {
                                let (pa, pb) = (p / b.size, p % b.size);
                                let (qa, qb) = (q / b.size, q % b.size);
                                idx(a.add[pa][qa], b.add[pb][qb])
                            })
                            .collect()
                    })
                    .collect();
                out.push(FiniteMonoid {
                    name: format!("{}x{}", a.name, b.name),
                    size,
                    zero: idx(a.zero, b.zero),
                    add,
                });
            }
        }
    }
    out
}

/// Brute-force Grothendieck group: formal differences `a - b` with
/// `(a,b) ~ (c,d)` iff `a + d + e = c + b + e` for some `e`, exhaustively
/// enumerated; the resulting finite group is identified by order counting.
pub fn brute_grothendieck(m: &FiniteMonoid) -> AbelianInvariants {
    let n = m.size;
    let equiv = |(a, b): (usize, usize), (c, d): (usize, usize)| -> bool {
        (0..n).any(|e| m.add[m.add[a][d]][e] == m.add[m.add[c][b]][e])
    };
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut class_of = vec![vec![usize::MAX; n]; n];
    for a in 0..n {
        for b in 0..n {
            let found = reps.iter().position(|&r| equiv((a, b), r));
            class_of[a][b] = match found {
                Some(i) => i,
                None => {
                    reps.push((a, b));
                    reps.len() - 1
                }
            };
        }
    }
    let g = reps.len();
    let mut table = vec![vec![0usize; g]; g];
    for (i, &(a, b)) in reps.iter().enumerate() {
        for (j, &(c, d)) in reps.iter().enumerate() {
            table[i][j] = class_of[m.add[a][c]][m.add[b][d]];
        }
    }
    let zero = class_of[m.zero][m.zero];
    invariants_from_table(g, zero, &table)
}

/// Invariant factors of a finite abelian group from its Cayley table, by
/// counting p-power torsion.
fn invariants_from_table(g: usize, zero: usize, table: &[Vec<usize>]) -> AbelianInvariants {
    let mut primes = Vec::new();
    let mut order = g as u64;
    let mut p = 2u64;
    while order > 1 {
        if order % p == 0 {
            primes.push(p);
            while order % p == 0 {
                order /= p;
            }
        }
        p += 1;
    }
    let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
    for &p in &primes {
        let mut lambda: Vec<u32> = Vec::new();
        let mut prev_s = 0u32;
        for k in 1u32.. {
            let pk = p.pow(k);
            let count = (0..g)
                .filter(|&x| {
                    let mut acc = zero;
                    for _ in 0..pk {
                        acc = table[acc][x];
                    }
                    acc == zero
                })
                .count() as u64;
            let s = count.ilog(p);
            let parts_ge_k = s - prev_s;
            if parts_ge_k == 0 {
                break;
            }
            for i in 0..parts_ge_k as usize {
                if lambda.len() <= i {
                    lambda.push(0);
                }
                lambda[i] += 1;
            }
            prev_s = s;
        }
        primary.push((p, lambda));
    }
    let max_parts = primary.iter().map(|(_, l)| l.len()).max().unwrap_or(0);
    let mut torsion: Vec<BigInt> = Vec::new();
    for i in 0..max_parts {
        let mut d = BigInt::one();
        for (p, lambda) in &primary {
            if let Some(&e) = lambda.get(i) {
                d *= BigInt::from(*p).pow(e);
            }
        }
        if !d.is_one() {
            torsion.push(d);
        }
    }
    torsion.sort();
    AbelianInvariants { free_rank: 0, torsion }
}

// ---------------------------------------------------------------------------
// Cantor-set oracles: finite-tree isolated-point detection and the
// branching-cycle countability criterion

fn descendants_capped(
    f: &RegularClosedSet,
    state: usize,
    depth: usize,
    memo: &mut HashMap<(usize, usize), usize>,
) -> usize {
    if depth == 0 {
        return 1;
    }
    if let Some(&v) = memo.get(&(state, depth)) {
        return v;
    }
    let mut total = 0;
    for b in [0, 1] {
        if let Some(t) = f.step(state, b) {
            total += descendants_capped(f, t, depth - 1, memo);
            if total >= 2 {
                total = 2;
                break;
            }
        }
    }
    memo.insert((state, depth), total);
    total
}

/// A state is wide iff it has at least two descendants at depth
/// `state_count` of the unfolded tree: forced chains revisit a state within
/// that horizon, so this detects the single-branch states without the
/// coinductive fixpoint.
pub fn wide_states(f: &RegularClosedSet) -> Vec<bool> {
    let n = f.state_count();
    let mut memo = HashMap::new();
    (0..n).map(|s| descendants_capped(f, s, n, &mut memo) >= 2).collect()
}

/// Per state: does some branch through it avoid all single-branch states?
/// Equivalently, the state is wide and reaches a wide cycle through wide
/// states.
pub fn derivative_feasibility(f: &RegularClosedSet) -> Vec<bool> {
    let n = f.state_count();
    let wide = wide_states(f);
    let wide_succs = |s: usize| -> Vec<usize> {
        [0, 1]
            .into_iter()
            .filter_map(|b| f.step(s, b))
            .filter(|&t| wide[t])
            .collect()
    };
    let mut on_wide_cycle = vec![false; n];
    for s in 0..n {
        if !wide[s] {
            continue;
        }
        let mut seen = HashSet::new();
        let mut stack = wide_succs(s);
        while let Some(x) = stack.pop() {
            if x == s {
                on_wide_cycle[s] = true;
                break;
            }
            if !seen.insert(x) {
                continue;
            }
            stack.extend(wide_succs(x));
        }
    }
    let mut survives = vec![false; n];
    for s in 0..n {
        if !wide[s] {
            continue;
        }
        let mut seen = HashSet::new();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            if on_wide_cycle[x] {
                survives[s] = true;
                break;
            }
            stack.extend(wide_succs(x));
        }
    }
    survives
}

/// Independent countability criterion: a pruned automaton has uncountably
/// many branches iff some branching state has both children able to return
/// to it.
pub fn oracle_uncountable(f: &RegularClosedSet) -> bool {
    let n = f.state_count();
    let reaches = |from: usize, target: usize| -> bool {
        let mut seen = HashSet::new();
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            if x == target {
                return true;
            }
            if !seen.insert(x) {
                continue;
            }
            for b in [0, 1] {
                if let Some(t) = f.step(x, b) {
                    stack.push(t);
                }
            }
        }
        false
    };
    (0..n).any(|s| match (f.step(s, 0), f.step(s, 1)) {
        (Some(a), Some(b)) => reaches(a, s) && reaches(b, s),
        _ => false,
    })
}

/// The subgraph of survive-states as an automaton (empty when none
/// survive); used to compare the derivative against the oracle as whole
/// languages rather than string by string.
pub fn oracle_derivative(f: &RegularClosedSet) -> Option<RegularClosedSet> {
    let survives = derivative_feasibility(f);
    if !survives[f.initial()] {
        return None;
    }
    let mut transitions = Vec::new();
    for s in 0..f.state_count() {
        if !survives[s] {
            continue;
        }
        for b in [0u8, 1] {
            if let Some(t) = f.step(s, b) {
                if survives[t] {
                    transitions.push((s, b, t));
                }
            }
        }
    }
    prune(&RawAutomaton {
        state_count: f.state_count(),
        initial: f.initial(),
        transitions,
    })
    .ok()
}

/// Language equality of two pruned automata (deterministic safety
/// languages): product walk checking definedness agreement everywhere.
pub fn same_language(a: &RegularClosedSet, b: &RegularClosedSet) -> bool {
    let mut seen = HashSet::new();
    let mut stack = vec![(a.initial(), b.initial())];
    seen.insert((a.initial(), b.initial()));
    while let Some((x, y)) = stack.pop() {
        for bit in [0u8, 1] {
            match (a.step(x, bit), b.step(y, bit)) {
                (None, None) => {}
                (Some(_), None) | (None, Some(_)) => return false,
                (Some(nx), Some(ny)) => {
                    if seen.insert((nx, ny)) {
                        stack.push((nx, ny));
                    }
                }
            }
        }
    }
    true
}

/// Enumerate all pruned automata with at most `max_states` states, one per
/// isomorphism class: states are numbered in breadth-first discovery order
/// (bit 0 before bit 1), which is a canonical form for reachable pointed
/// automata, and only fully live automata are kept.
pub fn enumerate_pruned_automata(max_states: usize) -> Vec<RegularClosedSet> {
    let mut out = Vec::new();
    // slots[i] = transitions of state i; discovery order ensures state
    // indices appear in BFS order
    fn go(
        slots: &mut Vec<[Option<usize>; 2]>,
        state: usize,
        bit: usize,
        discovered: usize,
        max_states: usize,
        out: &mut Vec<RegularClosedSet>,
    ) {
        if state == discovered {
            // all discovered states assigned: keep if fully live
            let raw = RawAutomaton {
                state_count: discovered,
                initial: 0,
                transitions: slots
                    .iter()
                    .take(discovered)
                    .enumerate()
                    .flat_map(|(s, row)| {
                        [0u8, 1].into_iter().filter_map(move |b| {
                            row[b as usize].map(|t| (s, b, t))
                        })
                    })
                    .collect(),
            };
            if let Ok(f) = prune(&raw) {
                if f.state_count() == discovered {
                    out.push(f);
                }
            }
            return;
        }
        let (next_state, next_bit) = if bit == 1 { (state + 1, 0) } else { (state, 1) };
        // option: no transition
        slots[state][bit] = None;
        go(slots, next_state, next_bit, discovered, max_states, out);
        // option: an already-discovered state
        for t in 0..discovered {
            slots[state][bit] = Some(t);
            go(slots, next_state, next_bit, discovered, max_states, out);
        }
        // option: discover a new state
        if discovered < max_states {
            slots[state][bit] = Some(discovered);
            go(slots, next_state, next_bit, discovered + 1, max_states, out);
        }
        slots[state][bit] = None;
    }
    let mut slots = vec![[None, None]; max_states];
    go(&mut slots, 0, 0, 1, max_states, &mut out);
    out
}

/// Random pruned automaton with up to `max_states` states.
pub fn random_pruned(rng: &mut impl Rng, min_states: usize, max_states: usize) -> RegularClosedSet {
    loop {
        let n = rng.gen_range(min_states..=max_states);
        let mut ts = Vec::new();
        for s in 0..n {
            for b in [0u8, 1] {
                if rng.gen_bool(0.7) {
                    ts.push((s, b, rng.gen_range(0..n)));
                }
            }
        }
        if let Ok(f) = prune(&RawAutomaton { state_count: n, initial: 0, transitions: ts }) {
            if f.state_count() >= min_states {
                return f;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// ultimately periodic sequences and reduction witnesses

/// All ultimately periodic sequences with prefix length at most 4 and
/// period length 1..=3, deduplicated by the sequence they denote.
pub fn exhaustive_up_sequences() -> Vec<UPSequence> {
    let mut list = Vec::new();
    let mut seen = HashSet::new();
    let bits = |len: usize, code: usize| -> Vec<u8> {
        (0..len).map(|i| ((code >> i) & 1) as u8).collect()
    };
    for plen in 0..=4usize {
        for pcode in 0..(1 << plen) {
            for qlen in 1..=3usize {
                for qcode in 0..(1 << qlen) {
                    let alpha =
                        UPSequence::from_bits(&bits(plen, pcode), &bits(qlen, qcode));
                    // canonical key: first 16 bits plus period behavior
                    let key: (Vec<bool>, bool) =
                        ((0..16).map(|i| alpha.bit(i)).collect(), alpha.is_fin());
                    if seen.insert(key) {
                        list.push(alpha);
                    }
                }
            }
        }
    }
    list
}

pub fn random_up(rng: &mut impl Rng, max_prefix: usize, max_period: usize) -> UPSequence {
    let pl = rng.gen_range(0..=max_prefix);
    let ql = rng.gen_range(1..=max_period);
    UPSequence::new(
        (0..pl).map(|_| rng.gen_bool(0.5)).collect(),
        (0..ql).map(|_| rng.gen_bool(0.5)).collect(),
    )
    .unwrap()
}

pub fn random_witness(rng: &mut impl Rng, family: ReductionFamily, max_idx: usize) -> Witness {
    match family {
        ReductionFamily::AbelianFin | ReductionFamily::AbTorsion | ReductionFamily::AbDivisible => {
            let len = rng.gen_range(1..=max_idx + 1);
            Witness::Vector((0..len).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect())
        }
        ReductionFamily::GroupFin => {
            let len = rng.gen_range(0..=6);
            Witness::Word(
                (0..len).map(|_| (rng.gen_range(0..=max_idx), rng.gen_bool(0.5))).collect(),
            )
        }
        ReductionFamily::RingFin => {
            let len = rng.gen_range(0..=4);
            Witness::Polynomial(
                (0..len)
                    .map(|_| {
                        let deg = rng.gen_range(0..=2);
                        RingMonomial {
                            coeff: rng.gen_range(-4i64..=4),
                            indices: (0..deg).map(|_| rng.gen_range(0..=max_idx)).collect(),
                        }
                    })
                    .collect(),
            )
        }
        ReductionFamily::LatticeFin => {
            fn term(rng: &mut impl Rng, depth: usize, max_idx: usize) -> LatticeTerm {
                if depth == 0 || rng.gen_bool(0.4) {
                    if rng.gen_bool(0.2) {
                        LatticeTerm::Top
                    } else {
                        LatticeTerm::Generator(rng.gen_range(0..=max_idx))
                    }
                } else if rng.gen_bool(0.5) {
                    LatticeTerm::meet(term(rng, depth - 1, max_idx), term(rng, depth - 1, max_idx))
                } else {
                    LatticeTerm::join(term(rng, depth - 1, max_idx), term(rng, depth - 1, max_idx))
                }
            }
            Witness::TermPair(term(rng, 2, max_idx), term(rng, 2, max_idx))
        }
    }
}

// ---------------------------------------------------------------------------
// small helpers

pub fn indicator_values(depth: usize, cylinder: &[u8]) -> BTreeMap<Vec<u8>, bool> {
    let mut m = BTreeMap::new();
    for i in 0..(1usize << depth) {
        let key: Vec<u8> = (0..depth).map(|j| ((i >> (depth - 1 - j)) & 1) as u8).collect();
        let hit = key == cylinder;
        m.insert(key, hit);
    }
    m
}
