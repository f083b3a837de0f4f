use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::frobenius;
use crate::tensor::{apply_local_ops, apply_on_party, norm_sqr, one_party_reduced, support_projector, BlockVector, Projector, StateVector};
use crate::tolerance::Tolerances;
use crate::CMatrix;

/// A candidate family `{P_j^i}`: `rows[j][i]` acts on party `i`.
///
/// Only parties listed in `scope` carry nontrivial projectors; the rest hold
/// identities. The full-scope case is the ordinary certificate; a proper
/// scope certifies S-local undeterminedness.
#[derive(Debug, Clone)]
pub struct SchmidtProjectorSet {
    rows: Vec<Vec<Projector>>,
    scope: Vec<usize>,
    pivot: Option<usize>,
    tolerances: Tolerances,
}

impl SchmidtProjectorSet {
    /// Shape checks only. Validity against a state is the job of
    /// [`verify_schmidt_projectors`].
    pub fn new(
        rows: Vec<Vec<Projector>>,
        scope: Vec<usize>,
        pivot: Option<usize>,
        tolerances: Tolerances,
    ) -> Result<Self> {
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.is_empty() || n == 0 {
            return Err(Error::InvalidArgument("certificate needs at least one nonempty row".into()));
        }
        for (j, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!("row {} has {} projectors, expected {n}", j + 1, row.len())));
            }
            for (i, p) in row.iter().enumerate() {
                if p.dim() != rows[0][i].dim() {
                    return Err(Error::DimensionMismatch(format!("party {} projector dims disagree across rows", i + 1)));
                }
            }
        }
        let mut scope = scope;
        scope.sort_unstable();
        scope.dedup();
        if scope.iter().any(|&p| p >= n) {
            return Err(Error::InvalidArgument("scope party out of range".into()));
        }
        Ok(Self { rows, scope, pivot, tolerances })
    }

    /// Full-scope certificate.
    pub fn full(rows: Vec<Vec<Projector>>, pivot: Option<usize>, tolerances: Tolerances) -> Result<Self> {
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        Self::new(rows, (0..n).collect(), pivot, tolerances)
    }

    /// Number of rows `L`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn num_parties(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Projector>] {
        &self.rows
    }

    pub fn projector(&self, row: usize, party: usize) -> &Projector {
        &self.rows[row][party]
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn is_full_scope(&self) -> bool {
        self.scope.len() == self.num_parties()
    }

    pub fn pivot(&self) -> Option<usize> {
        self.pivot
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// `⊗_{i∈scope} P_j^i |ψ⟩`.
    pub fn block(&self, state: &StateVector, row: usize) -> BlockVector {
        let ops: Vec<Option<&CMatrix>> = (0..self.num_parties())
            .map(|i| self.scope.contains(&i).then(|| self.rows[row][i].matrix()))
            .collect();
        BlockVector::new(state.dims().to_vec(), apply_local_ops(state.dims(), state.amps(), &ops))
    }

    /// Merges rows according to `groups` (each a list of row indices);
    /// per party the merged projector is the sum of the group's projectors.
    pub fn coarsened(&self, groups: &[Vec<usize>]) -> Result<SchmidtProjectorSet> {
        let mut seen = vec![false; self.len()];
        for g in groups {
            for &j in g {
                if j >= self.len() || std::mem::replace(&mut seen[j], true) {
                    return Err(Error::InvalidArgument("row groups must partition the rows".into()));
                }
            }
        }
        if seen.iter().any(|s| !s) || groups.iter().any(|g| g.is_empty()) {
            return Err(Error::InvalidArgument("row groups must partition the rows".into()));
        }
        let rows = groups
            .iter()
            .map(|g| {
                (0..self.num_parties())
                    .map(|i| {
                        if !self.scope.contains(&i) {
                            return self.rows[g[0]][i].clone();
                        }
                        g[1..].iter().fold(self.rows[g[0]][i].clone(), |acc, &j| acc.merged(&self.rows[j][i]))
                    })
                    .collect()
            })
            .collect();
        Ok(SchmidtProjectorSet {
            rows,
            scope: self.scope.clone(),
            pivot: self.pivot,
            tolerances: self.tolerances,
        })
    }
}

/// Per-clause outcome of checking a candidate against a state.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub enough_rows: bool,
    pub dims_match: bool,
    pub orthogonal: bool,
    pub max_overlap: f64,
    pub nonnull: bool,
    pub min_action: f64,
    pub reconstructs: bool,
    pub reconstruction_residual: f64,
    /// Whether each party's rows sum to the support projector of its
    /// marginal. Reported, not required for validity.
    pub refined: bool,
    pub refinement_residual: f64,
    pub diagnostics: Vec<String>,
}

/// Checks that the rows are pairwise orthogonal per party, that every
/// projector acts nonnull on the state, and that the row blocks sum back to
/// the state; all at the certificate's tolerances, within its scope.
pub fn verify_schmidt_projectors(state: &StateVector, cand: &SchmidtProjectorSet) -> Verification {
    let tol = cand.tolerances;
    let mut diagnostics = Vec::new();
    let enough_rows = cand.len() >= 2;
    if !enough_rows {
        diagnostics.push(format!("certificate has {} row(s); at least 2 are required", cand.len()));
    }
    let dims_match = cand.num_parties() == state.num_parties()
        && (0..cand.num_parties()).all(|i| cand.projector(0, i).dim() == state.dims()[i]);
    if !dims_match {
        diagnostics.push("projector dimensions do not match the state".into());
        return Verification {
            valid: false,
            enough_rows,
            dims_match,
            orthogonal: false,
            max_overlap: f64::NAN,
            nonnull: false,
            min_action: f64::NAN,
            reconstructs: false,
            reconstruction_residual: f64::NAN,
            refined: false,
            refinement_residual: f64::NAN,
            diagnostics,
        };
    }

    let mut max_overlap = 0.0f64;
    for &i in cand.scope() {
        for a in 0..cand.len() {
            for b in a + 1..cand.len() {
                let ov = cand.projector(a, i).overlap(cand.projector(b, i));
                if ov > tol.orth {
                    diagnostics.push(format!(
                        "party {}: rows {} and {} overlap ({ov:.3e})",
                        i + 1,
                        a + 1,
                        b + 1
                    ));
                }
                max_overlap = max_overlap.max(ov);
            }
        }
    }
    let orthogonal = max_overlap <= tol.orth;

    let mut min_action = f64::INFINITY;
    for &i in cand.scope() {
        for j in 0..cand.len() {
            let v = apply_on_party(state.dims(), state.amps(), i, cand.projector(j, i).matrix());
            let a = norm_sqr(&v).sqrt();
            if a <= tol.rank {
                diagnostics.push(format!("party {}: row {} acts null ({a:.3e})", i + 1, j + 1));
            }
            min_action = min_action.min(a);
        }
    }
    let nonnull = min_action > tol.rank;

    let mut sum = vec![num_complex::Complex64::new(0.0, 0.0); state.total_dim()];
    for j in 0..cand.len() {
        for (s, z) in sum.iter_mut().zip(cand.block(state, j).amps()) {
            *s += z;
        }
    }
    let reconstruction_residual = state
        .amps()
        .iter()
        .zip(&sum)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let reconstructs = reconstruction_residual <= tol.recon;
    if !reconstructs {
        diagnostics.push(format!("reconstruction residual {reconstruction_residual:.3e} exceeds {:.1e}", tol.recon));
    }

    let mut refinement_residual = 0.0f64;
    for &i in cand.scope() {
        let d = state.dims()[i];
        let total = (0..cand.len()).fold(CMatrix::zeros(d, d), |acc, j| acc + cand.projector(j, i).matrix());
        let supp = one_party_reduced(state, i)
            .and_then(|rho| support_projector(&rho, tol.rank))
            .map(|p| p.matrix().clone())
            .unwrap_or_else(|_| CMatrix::zeros(d, d));
        refinement_residual = refinement_residual.max(frobenius(&(total - supp)));
    }
    let refined = refinement_residual <= tol.recon;

    Verification {
        valid: enough_rows && orthogonal && nonnull && reconstructs,
        enough_rows,
        dims_match,
        orthogonal,
        max_overlap,
        nonnull,
        min_action,
        reconstructs,
        reconstruction_residual,
        refined,
        refinement_residual,
        diagnostics,
    }
}
