//! Block structure at a degenerate pivot.
//!
//! Any Schmidt projector row restricted to the pivot's support commutes with
//! the pivot marginal and with every "correlation operator"
//! `Tr_{pivot̄}[(E on party m)|ψ⟩⟨ψ|]`, provided the cross-block terms are
//! killed by orthogonality at some third scoped party. The finest common
//! block decomposition of those operators is read off from a random
//! Hermitian element of their commutant.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{complex_gaussian, eigh_desc, frobenius, group_by_gap, hermitian_part, svd_desc};
use crate::tensor::{schmidt_decompose, Projector, SchmidtData, StateVector};
use crate::tolerance::Tolerances;
use crate::CMatrix;

/// Number of independent random commutant elements tried.
pub const COMMUTANT_DRAWS: usize = 8;

/// Correlation operators at `pivot`, compressed to the pivot's support
/// (in the Schmidt basis). The first entry is the marginal `diag(λ)`; the
/// rest are the matrix-unit operators `|a⟩⟨b|` on each other party.
pub fn correlation_operators(state: &StateVector, pivot: usize, tol: &Tolerances) -> Result<Vec<CMatrix>> {
    if state.num_parties() < 3 {
        return Err(Error::InvalidArgument(
            "correlation operators need at least three parties".into(),
        ));
    }
    let sd = schmidt_decompose(state, pivot, tol)?;
    let scope: Vec<usize> = (0..state.num_parties()).collect();
    Ok(scoped_correlation_operators(state, &sd, &scope))
}

/// Parties whose matrix-unit operators are block diagonal for every valid
/// row family on `scope`: parties outside the scope always qualify; scoped
/// parties other than the pivot qualify only when a third scoped party
/// exists to kill the cross terms.
pub(crate) fn probe_parties(n: usize, pivot: usize, scope: &[usize]) -> Vec<usize> {
    (0..n)
        .filter(|&m| m != pivot)
        .filter(|m| !scope.contains(m) || scope.len() >= 3)
        .collect()
}

pub(crate) fn scoped_correlation_operators(state: &StateVector, sd: &SchmidtData, scope: &[usize]) -> Vec<CMatrix> {
    let k = sd.pivot;
    let mut ops = vec![CMatrix::from_diagonal(&DVector::from_iterator(
        sd.rank(),
        sd.coeffs.iter().map(|&l| Complex64::new(l, 0.0)),
    ))];
    let v_adj = sd.left.adjoint();
    for m in probe_parties(state.num_parties(), k, scope) {
        let dm = state.dims()[m];
        // rows: (pivot value, party-m value), pivot slowest
        let phi = state.matricize(&[k, m]);
        let slices: Vec<CMatrix> = (0..dm)
            .map(|c| {
                let rows: Vec<usize> = (0..state.dims()[k]).map(|x| x * dm + c).collect();
                &v_adj * phi.select_rows(rows.iter())
            })
            .collect();
        for a in 0..dm {
            for b in 0..dm {
                // Tr_{k̄}[(|a⟩⟨b|)_m ψψ†] = Φ_b Φ_a†
                ops.push(&slices[b] * slices[a].adjoint());
            }
        }
    }
    ops
}

// rows of (XA − AX) in column-major vec(X) coordinates
fn commutator_rows(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    let mut k = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let row = i + j * d;
            for t in 0..d {
                k[(row, i + t * d)] += a[(t, j)];
                k[(row, t + j * d)] -= a[(i, t)];
            }
        }
    }
    k
}

/// Orthonormal basis (as matrices) of `{X : XA = AX, XA† = A†X ∀A}`.
pub(crate) fn commutant_basis(ops: &[CMatrix], dim: usize, tol: &Tolerances) -> Vec<CMatrix> {
    let n2 = dim * dim;
    let mut r = CMatrix::zeros(0, n2);
    for a in ops {
        for op in [a.clone(), a.adjoint()] {
            let stacked = {
                let k = commutator_rows(&op);
                let mut s = CMatrix::zeros(r.nrows() + k.nrows(), n2);
                s.rows_mut(0, r.nrows()).copy_from(&r);
                s.rows_mut(r.nrows(), k.nrows()).copy_from(&k);
                s
            };
            r = stacked.qr().r();
        }
    }
    if r.nrows() < n2 {
        let mut padded = CMatrix::zeros(n2, n2);
        padded.rows_mut(0, r.nrows()).copy_from(&r);
        r = padded;
    }
    let (_, s, v) = svd_desc(&r);
    let smax = s.first().copied().unwrap_or(0.0);
    (0..n2)
        .filter(|&c| !(smax > 0.0) || s[c] <= tol.rank * smax)
        .map(|c| CMatrix::from_fn(dim, dim, |i, j| v[(i + j * dim, c)]))
        .collect()
}

fn block_diagonalizes(blocks: &[Projector], ops: &[CMatrix], tol: &Tolerances) -> bool {
    ops.iter().all(|a| {
        blocks.iter().enumerate().all(|(l, p)| {
            blocks
                .iter()
                .enumerate()
                .filter(|(m, _)| *m != l)
                .all(|(_, q)| frobenius(&(p.matrix() * a * q.matrix())) <= tol.orth)
        })
    })
}

/// Finest family of orthogonal projectors summing to the identity on
/// `C^dim` that block-diagonalizes every operator in `ops`.
///
/// Each of `draws` attempts takes a random Hermitian element of the
/// commutant of `{A, A†}` and splits its spectrum at gaps larger than
/// `tol.degen` (relative); the finest split that verifiably
/// block-diagonalizes `ops` wins. A single identity block is always valid.
pub fn commutant_partition(ops: &[CMatrix], dim: usize, seed: u64, draws: usize, tol: &Tolerances) -> Result<Vec<Projector>> {
    if ops.iter().any(|a| a.nrows() != dim || a.ncols() != dim) {
        return Err(Error::DimensionMismatch(format!("all operators must be {dim}x{dim}")));
    }
    let trivial = vec![Projector::identity(dim)];
    if dim <= 1 {
        return Ok(trivial);
    }
    let basis = commutant_basis(ops, dim, tol);
    let mut best = trivial;
    for draw in 0..draws {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(draw as u64);
        let y = basis
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, x| acc + x * complex_gaussian(&mut rng));
        let h = hermitian_part(&y);
        let (vals, vecs) = eigh_desc(&h);
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(scale > 0.0) {
            continue;
        }
        let blocks: Vec<Projector> = group_by_gap(&vals, tol.degen * scale)
            .into_iter()
            .map(|g| {
                let cols = CMatrix::from_fn(dim, g.len(), |r, c| vecs[(r, g[c])]);
                Projector::from_orthonormal_columns(&cols)
            })
            .collect();
        if blocks.len() > best.len() && block_diagonalizes(&blocks, ops, tol) {
            best = blocks;
        }
    }
    Ok(best)
}
