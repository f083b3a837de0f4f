use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::tensor::{index_to_tuple, reduced_matrix, schmidt_decompose, support_of, Projector, SchmidtData, StateVector};
use crate::tolerance::Tolerances;
use crate::CMatrix;

use super::certificate::SchmidtProjectorSet;

/// Relative amplitude cutoff for [`basis_connectivity_partition`].
pub const DEFAULT_AMPLITUDE_CUTOFF: f64 = 1e-9;

/// Connected components of the Schmidt indices of `pivot`, where `r` and `t`
/// are joined when the conditionals `ψ_r`, `ψ_t` have non-orthogonal
/// single-party supports at some other party.
///
/// Requires pairwise distinct Schmidt coefficients at the pivot; in that
/// case two or more components is equivalent to undeterminedness.
pub fn generic_partition(state: &StateVector, pivot: usize, tol: &Tolerances) -> Result<Vec<Vec<usize>>> {
    let sd = schmidt_decompose(state, pivot, tol)?;
    if !sd.is_nondegenerate() {
        return Err(Error::Precondition(format!(
            "party {} has degenerate Schmidt coefficients; use the commutant path",
            pivot + 1
        )));
    }
    let scope: Vec<usize> = (0..state.num_parties()).collect();
    Ok(conditional_overlap_partition(&sd, &scope, tol))
}

/// Support projectors of `ρ_j^{ψ_r}` for every Schmidt index `r` and every
/// scoped party `j ≠ pivot`; `out[r][slot]` follows `sd.rest_parties` order
/// restricted to the scope.
pub(crate) fn conditional_supports(sd: &SchmidtData, scope: &[usize], tol: &Tolerances) -> Vec<Vec<Projector>> {
    let slots: Vec<usize> = sd
        .rest_parties
        .iter()
        .enumerate()
        .filter(|(_, p)| scope.contains(p))
        .map(|(slot, _)| slot)
        .collect();
    (0..sd.rank())
        .map(|r| {
            let v = sd.conditional(r);
            slots
                .iter()
                .map(|&slot| {
                    let rho = reduced_matrix(&sd.rest_dims, &v, &[slot]);
                    support_of(&rho, tol.rank).expect("normalized conditional has support")
                })
                .collect()
        })
        .collect()
}

pub(crate) fn conditional_overlap_partition(sd: &SchmidtData, scope: &[usize], tol: &Tolerances) -> Vec<Vec<usize>> {
    let supports = conditional_supports(sd, scope, tol);
    let m = sd.rank();
    let mut uf = UnionFind::<usize>::new(m);
    for r in 0..m {
        for t in r + 1..m {
            let touching = supports[r]
                .iter()
                .zip(&supports[t])
                .any(|(a, b)| a.overlap(b) > tol.orth);
            if touching {
                uf.union(r, t);
            }
        }
    }
    components(uf.into_labeling())
}

// groups indices by label; groups ordered by their smallest member
fn components(labels: Vec<usize>) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot_of: std::collections::HashMap<usize, usize> = Default::default();
    for (i, l) in labels.into_iter().enumerate() {
        let slot = *slot_of.entry(l).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(i);
    }
    groups
}

/// Components of the nonzero computational-basis labels under the relation
/// "agree at some party". Labels are flat amplitude indices; an amplitude
/// counts as nonzero when `|C_I| > cutoff · max|C_I|`.
///
/// Two or more components certify undeterminedness (see
/// [`connectivity_certificate`]); a single component proves nothing, since
/// another product basis may split the state.
pub fn basis_connectivity_partition(state: &StateVector, cutoff: f64) -> Vec<Vec<usize>> {
    let max = state.amps().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let support: Vec<usize> = state
        .amps()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > cutoff * max)
        .map(|(i, _)| i)
        .collect();
    let dims = state.dims();
    let mut uf = UnionFind::<usize>::new(support.len());
    // first member seen with value v at party p
    let mut first: Vec<Vec<Option<usize>>> = dims.iter().map(|&d| vec![None; d]).collect();
    for (k, &flat) in support.iter().enumerate() {
        for (p, v) in index_to_tuple(flat, dims).into_iter().enumerate() {
            match first[p][v] {
                Some(other) => {
                    uf.union(other, k);
                }
                None => first[p][v] = Some(k),
            }
        }
    }
    components(uf.into_labeling())
        .into_iter()
        .map(|g| g.into_iter().map(|k| support[k]).collect())
        .collect()
}

/// Computational-basis projectors built from a connectivity partition:
/// `P_j^k` projects onto the local values used by component `j` at party `k`.
pub fn connectivity_certificate(
    state: &StateVector,
    components: &[Vec<usize>],
    tol: &Tolerances,
) -> Result<SchmidtProjectorSet> {
    let dims = state.dims();
    let rows = components
        .iter()
        .map(|comp| {
            (0..dims.len())
                .map(|p| {
                    let mut diag = vec![0.0; dims[p]];
                    for &flat in comp {
                        diag[index_to_tuple(flat, dims)[p]] = 1.0;
                    }
                    Projector::new(CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                        dims[p],
                        diag.into_iter().map(|v| num_complex::Complex64::new(v, 0.0)),
                    )))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SchmidtProjectorSet::full(rows, None, *tol)
}
