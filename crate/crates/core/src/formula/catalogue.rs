//! Built-in regression table of property formulas with their published
//! complexity classes.
//!
//! `expected` is the class stated for the property; `exact` is set only
//! where a matching completeness result pins the class. The computed rank
//! of each entry must lie within `expected`, with equality when `exact`.
//! Formulas are stored in concrete syntax so the table also exercises the
//! parser.

use crate::pointclass::Pointclass::{self, *};

#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub expected: Pointclass,
    pub exact: bool,
}

/// The regression table. Order is stable; names are unique.
pub fn catalogue() -> Vec<CatalogueEntry> {
    let e = |name, source, expected, exact| CatalogueEntry { name, source, expected, exact };
    vec![
        e(
            "ring_commutative",
            "A a. A b. clopen(comm, a, b)",
            Pi0(1),
            false,
        ),
        e(
            "banach_commutative",
            "A u. A v. closed(commnorm, u, v)",
            Pi0(2),
            false,
        ),
        e(
            "group_finite",
            "E t. A g. clopen(transversal, g, t)",
            Sigma0(2),
            true,
        ),
        e(
            "ab_finite",
            "E t. A x. clopen(cover, x, t)",
            Sigma0(2),
            true,
        ),
        e(
            "ab_torsion",
            "A x. E n. clopen(annihilates, x, n)",
            Pi0(2),
            true,
        ),
        e(
            "ab_divisible",
            "A a. A n. E b. clopen(divides, a, n, b)",
            Pi0(2),
            true,
        ),
        e(
            "group_simple",
            "A g. A i. (clopen(inker, g) | E w. clopen(conjprod, g, i, w))",
            Pi0(2),
            false,
        ),
        e(
            "group_locally_finite",
            "A s. E t. A g. clopen(spans, s, t, g)",
            Pi0(3),
            false,
        ),
        e(
            "ab_ulm_trivial",
            "A x. (clopen(zero, x) | E n. A y. clopen(notroot, x, n, y))",
            Pi0(3),
            false,
        ),
        e(
            "ab_slender",
            "(A x. A n. (not clopen(roots, x, n) | clopen(zero, x))) & \
             (A x. (clopen(zero, x) | E n. A y. clopen(notroot, x, n, y)))",
            Pi0(3),
            false,
        ),
        e(
            "group_sofic",
            "A s. A k. E d. clopen(soficapprox, s, k, d)",
            Pi0(2),
            false,
        ),
        e(
            "tsr_le_n",
            "A a. A m. E b. E v. (open(closeto, a, b, m) & open(rightinverse, b, v))",
            Pi0(3),
            false,
        ),
        e(
            "cstar_simple",
            "A c. A t. A n. (open(small, c, t) | E x. open(fullelement, c, x, n))",
            Pi0(2),
            false,
        ),
        e(
            "stably_finite",
            "not (E n. E v. (open(almostisometry, n, v) & open(defectlarge, n, v)))",
            Pi0(1),
            false,
        ),
        e(
            "tracial_state",
            "Ec t. A a. closed(dominated, t, a)",
            Pi0(1),
            false,
        ),
        e(
            "af_algebra",
            "A x. A n. E d. Ec p. (closed(blockhom, p, d) & open(approximates, p, x, n, d))",
            Pi0(3),
            false,
        ),
        e(
            "quasidiagonal",
            "A x. A n. E m. Ec p. (closed(descends, p, m) & open(almostmult, p, x, n, m))",
            Pi0(3),
            false,
        ),
        e(
            "mf_embeddable",
            "A x. A n. E m. E y. (open(matrixmult, y, x, n, m) & open(matrixnorm, y, x, n, m))",
            Pi0(3),
            false,
        ),
        e(
            "nuclear_dim_le_n",
            "A x. A m. E d. (open(orderzero, d, x, m) & \
             Ec p. (closed(cpcmap, p, d) & open(sumclose, p, d, x, m)))",
            Pi0(3),
            false,
        ),
        e(
            "unif_purely_infinite",
            "(E a. E m. A l. closed(farfromscalars, a, m, l)) & \
             (E n. A b. (open(notunitnorm, b, n) | E c. E d. open(piinverts, b, c, d, n)))",
            Sigma0(3),
            false,
        ),
        e(
            "banach_dedekind_finite",
            "A k. A n. A u. A v. (open(toobig, u, k) | open(toobig, v, k) | \
             open(productfar, u, v, k, n) | closed(reversenear, u, v, n))",
            Pi0(2),
            false,
        ),
        e(
            "ring_dedekind_finite",
            "A u. A v. (not clopen(rightinverse, u, v) | clopen(leftinverse, u, v))",
            Pi0(1),
            false,
        ),
        e(
            "unif_open_multiplication",
            "Ep d. A r. A a. A b. A y. (closed(ballfar, y, a, b, r) | \
             E ap. E bp. open(approxfactor, y, ap, bp, r, d))",
            Sigma11,
            false,
        ),
        e(
            "d_absorption",
            "Ep f. A x. A n. closed(absorbing, f, x, n)",
            Sigma11,
            false,
        ),
        e(
            "separable_dual",
            "borel@Pi1_1(sepdual)",
            Pi11,
            true,
        ),
        e(
            "superatomic",
            "borel@Pi1_1(superatomic)",
            Pi11,
            true,
        ),
    ]
}
