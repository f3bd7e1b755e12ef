//! Grothendieck-group presentations from countable monoid data, the
//! finite-dimensional K0 pipeline over rank tuples, and the spectral
//! projection-correction routine.

use std::fmt;

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::{AbelianInvariants, AbelianPresentation};

type C64 = Complex<f64>;

/// Defect threshold for projection correction. Any value in (0, 3/16) works;
/// 1/8 leaves numerical headroom.
pub const ETA0: f64 = 0.125;

/// Output of the correction must be a projection to this tolerance.
pub const PROJECTION_TOL: f64 = 1e-10;

/// Tolerance for Hermitian symmetry and idempotence-of-correction checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues this close to the open band (1/4, 3/4) abort the correction.
pub const BAND_GUARD: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GrothendieckError {
    #[error("monoid data index {index} out of bound {bound}")]
    IndexOutOfBounds { index: usize, bound: usize },
    #[error("rank bound must be at least 1")]
    ZeroRankBound,
    #[error("rank bound {got} below block count {blocks}")]
    RankBoundTooSmall { got: usize, blocks: usize },
    #[error("matrix is not Hermitian to tolerance {tol}: max asymmetry {found}")]
    NotHermitian { tol: f64, found: f64 },
    #[error("defect ||x^2 - x|| = {defect} is not below eta0 = {eta0}")]
    DefectTooLarge { defect: f64, eta0: f64 },
    #[error("eigenvalue {value} lies within {guard} of the band (1/4, 3/4)")]
    SpectralBand { value: f64, guard: f64 },
    #[error("rank tuple has length {got}, algebra has {expected} blocks")]
    TupleLengthMismatch { expected: usize, got: usize },
    #[error("bad matrix input: {0}")]
    BadMatrix(String),
}

/// Countable monoid data: indices denote monoid elements via an implicit
/// surjection; `zero_set`, `eq_set`, `add_set` record the zero element,
/// equalities, and additions among indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidData {
    index_bound: usize,
    zero_set: Vec<usize>,
    eq_set: Vec<(usize, usize)>,
    add_set: Vec<(usize, usize, usize)>,
}

impl MonoidData {
    pub fn new(
        index_bound: usize,
        zero_set: Vec<usize>,
        eq_set: Vec<(usize, usize)>,
        add_set: Vec<(usize, usize, usize)>,
    ) -> Result<Self, GrothendieckError> {
        let check = |index: usize| {
            if index >= index_bound {
                Err(GrothendieckError::IndexOutOfBounds { index, bound: index_bound })
            } else {
                Ok(())
            }
        };
        for &z in &zero_set {
            check(z)?;
        }
        for &(m, n) in &eq_set {
            check(m)?;
            check(n)?;
        }
        for &(m, n, k) in &add_set {
            check(m)?;
            check(n)?;
            check(k)?;
        }
        Ok(MonoidData { index_bound, zero_set, eq_set, add_set })
    }

    pub fn index_bound(&self) -> usize {
        self.index_bound
    }
}

/// Presentation of the Grothendieck group from monoid data: one generator
/// per index, with relations `e_n` for `n` in the zero set, `e_m - e_n` for
/// equalities, and `e_m + e_n - e_k` for additions.
pub fn groth_presentation(m: &MonoidData) -> AbelianPresentation {
    let n = m.index_bound;
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for &z in &m.zero_set {
        let mut r = vec![BigInt::from(0); n];
        r[z] = BigInt::from(1);
        rels.push(r);
    }
    for &(a, b) in &m.eq_set {
        let mut r = vec![BigInt::from(0); n];
        r[a] += 1;
        r[b] -= 1;
        rels.push(r);
    }
    for &(a, b, c) in &m.add_set {
        let mut r = vec![BigInt::from(0); n];
        r[a] += 1;
        r[b] += 1;
        r[c] -= 1;
        rels.push(r);
    }
    AbelianPresentation::new(n, rels).expect("relation lengths match by construction")
}

/// A finite-dimensional C*-algebra, a direct sum of matrix blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FDAlgebra {
    block_dims: Vec<usize>,
}

impl FDAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Option<FDAlgebra> {
        if block_dims.is_empty() || block_dims.iter().any(|&d| d == 0) {
            return None;
        }
        Some(FDAlgebra { block_dims })
    }

    pub fn block_count(&self) -> usize {
        self.block_dims.len()
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    /// Parse a comma-separated dimension list, e.g. `2,5`.
    pub fn parse(text: &str) -> Result<FDAlgebra, String> {
        let dims: Result<Vec<usize>, _> =
            text.split(',').map(|t| t.trim().parse::<usize>()).collect();
        let dims = dims.map_err(|e| format!("bad block dimension: {e}"))?;
        FDAlgebra::new(dims).ok_or_else(|| "block dimensions must be positive".to_string())
    }
}

impl fmt::Display for FDAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.block_dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Index <-> rank-tuple bookkeeping for the truncated projection monoid.
fn tuple_of_index(index: usize, blocks: usize, bound: usize) -> Vec<usize> {
    let mut t = vec![0; blocks];
    let mut rest = index;
    for slot in t.iter_mut().rev() {
        *slot = rest % (bound + 1);
        rest /= bound + 1;
    }
    t
}

/// Projection classes of a finite-dimensional algebra are rank tuples; this
/// enumerates all tuples within `rank_bound` and tabulates the zero tuple,
/// tuple equality (the diagonal), and in-range componentwise addition.
pub fn fd_algebra_v(b: &FDAlgebra, rank_bound: usize) -> Result<MonoidData, GrothendieckError> {
    if rank_bound == 0 {
        return Err(GrothendieckError::ZeroRankBound);
    }
    let blocks = b.block_count();
    let count = (rank_bound + 1).pow(blocks as u32);
    let tuples: Vec<Vec<usize>> =
        (0..count).map(|i| tuple_of_index(i, blocks, rank_bound)).collect();
    let zero_set = vec![0]; // index 0 is the all-zeros tuple
    let eq_set: Vec<(usize, usize)> = (0..count).map(|i| (i, i)).collect();
    let mut add_set = Vec::new();
    for (i, ti) in tuples.iter().enumerate() {
        for (j, tj) in tuples.iter().enumerate() {
            let sum: Vec<usize> = ti.iter().zip(tj).map(|(a, b)| a + b).collect();
            if sum.iter().all(|&s| s <= rank_bound) {
                let k = sum.iter().fold(0, |acc, &s| acc * (rank_bound + 1) + s);
                add_set.push((i, j, k));
            }
        }
    }
    MonoidData::new(count, zero_set, eq_set, add_set)
}

/// K0 of a finite-dimensional algebra through the truncated projection
/// monoid; the result is free of rank equal to the block count.
pub fn k0(b: &FDAlgebra, rank_bound: usize) -> Result<AbelianInvariants, GrothendieckError> {
    if rank_bound < b.block_count() {
        return Err(GrothendieckError::RankBoundTooSmall {
            got: rank_bound,
            blocks: b.block_count(),
        });
    }
    let data = fd_algebra_v(b, rank_bound)?;
    Ok(groth_presentation(&data).invariants())
}

/// Murray-von Neumann equivalence of projections in a finite-dimensional
/// algebra: equality of block-rank tuples.
pub fn mvn_equivalent(
    b: &FDAlgebra,
    p_ranks: &[usize],
    q_ranks: &[usize],
) -> Result<bool, GrothendieckError> {
    let expected = b.block_count();
    for got in [p_ranks.len(), q_ranks.len()] {
        if got != expected {
            return Err(GrothendieckError::TupleLengthMismatch { expected, got });
        }
    }
    Ok(p_ranks == q_ranks)
}

/// A Hermitian complex matrix; symmetry is validated on construction.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    dim: usize,
    data: DMatrix<C64>,
}

impl HermitianMatrix {
    pub fn new(data: DMatrix<C64>) -> Result<Self, GrothendieckError> {
        if data.nrows() != data.ncols() {
            return Err(GrothendieckError::BadMatrix(format!(
                "{}x{} matrix is not square",
                data.nrows(),
                data.ncols()
            )));
        }
        let mut worst = 0.0f64;
        for i in 0..data.nrows() {
            for j in 0..data.ncols() {
                let asym = (data[(i, j)] - data[(j, i)].conj()).norm();
                worst = worst.max(asym);
            }
        }
        if worst > HERMITIAN_TOL {
            return Err(GrothendieckError::NotHermitian { tol: HERMITIAN_TOL, found: worst });
        }
        Ok(HermitianMatrix { dim: data.nrows(), data })
    }

    pub fn from_real_diag(diag: &[f64]) -> HermitianMatrix {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        HermitianMatrix { dim: n, data: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    /// Operator norm via the spectrum (exact for Hermitian matrices up to
    /// the eigensolver).
    pub fn op_norm(&self) -> f64 {
        self.data
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(0.0, |acc, &l| acc.max(l.abs()))
    }

    /// Distance to another Hermitian matrix in operator norm.
    pub fn op_distance(&self, other: &HermitianMatrix) -> f64 {
        let diff = &self.data - &other.data;
        diff.symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(0.0, |acc, &l| acc.max(l.abs()))
    }

    /// The defect `||x^2 - x||` in operator norm.
    pub fn idempotence_defect(&self) -> f64 {
        self.data
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(0.0, |acc, &l| acc.max((l * l - l).abs()))
    }
}

/// Spectral correction of an approximate projection.
///
/// Requires `||x^2 - x|| < ETA0`; then the spectrum avoids `[1/4, 3/4]`,
/// eigenvalues below the band are sent to 0 and above to 1, and the output
/// satisfies `||x_hat - x|| < 1/4` exactly as in the functional-calculus
/// argument. Eigenvalues inside the guarded band abort with an error.
pub fn correct_projection(x: &HermitianMatrix) -> Result<HermitianMatrix, GrothendieckError> {
    let eigen = x.data.clone().symmetric_eigen();
    let defect = eigen
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max((l * l - l).abs()));
    if defect >= ETA0 {
        return Err(GrothendieckError::DefectTooLarge { defect, eta0: ETA0 });
    }
    for &l in eigen.eigenvalues.iter() {
        if l > 0.25 - BAND_GUARD && l < 0.75 + BAND_GUARD {
            return Err(GrothendieckError::SpectralBand { value: l, guard: BAND_GUARD });
        }
    }
    let n = x.dim;
    let mut corrected = DMatrix::<C64>::zeros(n, n);
    for (idx, &l) in eigen.eigenvalues.iter().enumerate() {
        if l > 0.5 {
            let v = eigen.eigenvectors.column(idx);
            // accumulate v v*
            for i in 0..n {
                for j in 0..n {
                    corrected[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
    }
    // enforce exact Hermitian symmetry against rounding
    for i in 0..n {
        for j in 0..i {
            let avg = (corrected[(i, j)] + corrected[(j, i)].conj()) * C64::new(0.5, 0.0);
            corrected[(i, j)] = avg;
            corrected[(j, i)] = avg.conj();
        }
        corrected[(i, i)] = C64::new(corrected[(i, i)].re, 0.0);
    }
    let out = HermitianMatrix { dim: n, data: corrected };
    let out_defect = out.idempotence_defect();
    assert!(
        out_defect <= PROJECTION_TOL,
        "corrected matrix is not a projection: defect {out_defect}"
    );
    let moved = out.op_distance(x);
    assert!(moved < 0.25, "correction moved the input by {moved} >= 1/4");
    Ok(out)
}
