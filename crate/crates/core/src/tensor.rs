//! Dense multipartite pure states and the linear algebra on them.
//!
//! Amplitudes are stored row-major with party 0 the slowest-varying index.
//! Every matricization in the crate goes through [`matricize`] so that this
//! one layout convention is the only one in play.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, eigh_desc, frobenius, svd_desc, ZERO};
use crate::tolerance::Tolerances;
use crate::CMatrix;

/// Upper bound on the total Hilbert-space dimension accepted anywhere.
pub const MAX_TOTAL_DIM: usize = 1 << 22;

pub(crate) fn checked_total_dim(dims: &[usize]) -> Result<usize> {
    if dims.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least two parties, got {}",
            dims.len()
        )));
    }
    let mut total = 1usize;
    for (i, &d) in dims.iter().enumerate() {
        if d == 0 {
            return Err(Error::InvalidArgument(format!("party {} has dimension 0", i + 1)));
        }
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_TOTAL_DIM)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "total dimension exceeds the supported maximum {MAX_TOTAL_DIM}"
                ))
            })?;
    }
    Ok(total)
}

/// Row-major strides: `stride[i] = Π_{j>i} d_j`.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

pub fn index_to_tuple(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut t = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        t[i] = flat % dims[i];
        flat /= dims[i];
    }
    t
}

pub fn tuple_to_index(tuple: &[usize], dims: &[usize]) -> usize {
    tuple.iter().zip(dims).fold(0, |acc, (&t, &d)| acc * d + t)
}

/// Parties of `0..n` not in `rows`, ascending.
pub fn complement_parties(n: usize, rows: &[usize]) -> Vec<usize> {
    (0..n).filter(|p| !rows.contains(p)).collect()
}

/// Reshapes a flat amplitude vector into a matrix whose row index runs over
/// the parties in `rows` (in the given order, row-major) and whose column
/// index runs over the remaining parties in ascending order.
pub fn matricize(dims: &[usize], amps: &[Complex64], rows: &[usize]) -> CMatrix {
    let cols = complement_parties(dims.len(), rows);
    let nrows: usize = rows.iter().map(|&p| dims[p]).product();
    let ncols: usize = cols.iter().map(|&p| dims[p]).product();
    let st = strides(dims);
    let row_offsets = offsets(dims, &st, rows);
    let col_offsets = offsets(dims, &st, &cols);
    CMatrix::from_fn(nrows, ncols, |r, c| amps[row_offsets[r] + col_offsets[c]])
}

/// Inverse of [`matricize`].
pub fn dematricize(dims: &[usize], rows: &[usize], m: &CMatrix) -> Vec<Complex64> {
    let cols = complement_parties(dims.len(), rows);
    let st = strides(dims);
    let row_offsets = offsets(dims, &st, rows);
    let col_offsets = offsets(dims, &st, &cols);
    let total: usize = dims.iter().product();
    let mut out = vec![ZERO; total];
    for (r, &ro) in row_offsets.iter().enumerate() {
        for (c, &co) in col_offsets.iter().enumerate() {
            out[ro + co] = m[(r, c)];
        }
    }
    out
}

// flat-index offset contributed by each joint value of `parties`
fn offsets(dims: &[usize], st: &[usize], parties: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &p in parties {
        let mut next = Vec::with_capacity(out.len() * dims[p]);
        for &o in &out {
            for v in 0..dims[p] {
                next.push(o + v * st[p]);
            }
        }
        out = next;
    }
    out
}

/// Applies `op` (a `d_p × d_p` matrix) to the axis of party `party`.
pub fn apply_on_party(dims: &[usize], amps: &[Complex64], party: usize, op: &CMatrix) -> Vec<Complex64> {
    let d = dims[party];
    let right: usize = dims[party + 1..].iter().product();
    let left: usize = dims[..party].iter().product();
    let mut out = vec![ZERO; amps.len()];
    for l in 0..left {
        let base = l * d * right;
        for a in 0..d {
            for b in 0..d {
                let w = op[(a, b)];
                if w == ZERO {
                    continue;
                }
                let src = base + b * right;
                let dst = base + a * right;
                for r in 0..right {
                    out[dst + r] += w * amps[src + r];
                }
            }
        }
    }
    out
}

/// `(⊗_i op_i) amps`, skipping parties whose operator is `None` (identity).
pub fn apply_local_ops(dims: &[usize], amps: &[Complex64], ops: &[Option<&CMatrix>]) -> Vec<Complex64> {
    let mut cur = amps.to_vec();
    for (p, op) in ops.iter().enumerate() {
        if let Some(op) = op {
            cur = apply_on_party(dims, &cur, p, op);
        }
    }
    cur
}

/// Reduced operator `Tr_{rest}|v⟩⟨v|` on the parties in `keep` (ordered as
/// given). Works for unnormalized vectors.
pub fn reduced_matrix(dims: &[usize], amps: &[Complex64], keep: &[usize]) -> CMatrix {
    let m = matricize(dims, amps, keep);
    &m * m.adjoint()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// A normalized pure state over explicit party dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state whose amplitudes must already be normalized within
    /// the default norm tolerance.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let total = checked_total_dim(&dims)?;
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "expected {total} amplitudes for dims {dims:?}, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > Tolerances::default().norm {
            return Err(Error::InvalidArgument(format!(
                "state is not normalized: squared norm {n2}"
            )));
        }
        Ok(Self { dims, amps })
    }

    /// Builds a state from arbitrary nonzero amplitudes, rescaling to unit norm.
    pub fn from_unnormalized(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let total = checked_total_dim(&dims)?;
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "expected {total} amplitudes for dims {dims:?}, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        let n = norm_sqr(&amps).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument("zero or unbounded state vector".into()));
        }
        let amps = amps.into_iter().map(|z| z / n).collect();
        Ok(Self { dims, amps })
    }

    /// Computational basis product state `|t_1 … t_n⟩`.
    pub fn basis(dims: Vec<usize>, tuple: &[usize]) -> Result<Self> {
        let total = checked_total_dim(&dims)?;
        if tuple.len() != dims.len() || tuple.iter().zip(&dims).any(|(t, d)| t >= d) {
            return Err(Error::InvalidArgument(format!("basis label {tuple:?} out of range")));
        }
        let mut amps = vec![ZERO; total];
        amps[tuple_to_index(tuple, &dims)] = Complex64::new(1.0, 0.0);
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, tuple: &[usize]) -> Complex64 {
        self.amps[tuple_to_index(tuple, &self.dims)]
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_dims(other)?;
        Ok(inner(&self.amps, &other.amps))
    }

    pub fn check_same_dims(&self, other: &StateVector) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, phase: Complex64) -> StateVector {
        StateVector {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|z| z * phase).collect(),
        }
    }

    pub fn matricize(&self, rows: &[usize]) -> CMatrix {
        matricize(&self.dims, &self.amps, rows)
    }

    pub(crate) fn check_party(&self, party: usize) -> Result<()> {
        if party >= self.num_parties() {
            return Err(Error::InvalidArgument(format!(
                "party index {} out of range 1..={}",
                party + 1,
                self.num_parties()
            )));
        }
        Ok(())
    }
}

/// An unnormalized vector on the same layout as a [`StateVector`], e.g. a
/// conditional block `(⊗_i P^i)|ψ⟩`. Never renormalized implicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl BlockVector {
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), amps.len());
        Self { dims, amps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Explicit renormalization; fails on the zero vector.
    pub fn normalize(self) -> Result<StateVector> {
        StateVector::from_unnormalized(self.dims, self.amps)
    }
}

/// A density operator (possibly sub-normalized) on a single space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity and positivity within the default tolerances.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let tol = Tolerances::default();
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "density operator must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > tol.herm {
            return Err(Error::InvalidArgument(format!("not Hermitian (defect {defect:.3e})")));
        }
        let (vals, _) = eigh_desc(&matrix);
        if let Some(&min) = vals.last() {
            if min < -tol.psd() {
                return Err(Error::InvalidArgument(format!(
                    "not positive semidefinite (min eigenvalue {min:.3e})"
                )));
            }
        }
        Ok(Self { matrix })
    }

    /// For operators that are PSD by construction (`M M†`); Hermitian part is taken.
    pub(crate) fn from_gram(matrix: CMatrix) -> Self {
        Self { matrix: linalg::hermitian_part(&matrix) }
    }

    pub fn from_pure(v: &[Complex64]) -> Self {
        let col = DVector::from_column_slice(v);
        Self::from_gram(&col * col.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh_desc(&self.matrix).0
    }
}

/// An orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
    rank: usize,
}

impl Projector {
    /// Validates `P² = P` and `P = P†` within the default tolerances.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let tol = Tolerances::default();
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidArgument("projector must be square".into()));
        }
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > tol.herm {
            return Err(Error::InvalidArgument(format!("projector not Hermitian (defect {herm:.3e})")));
        }
        let idem = frobenius(&(&matrix * &matrix - &matrix));
        if idem > tol.idem.max(tol.idem * matrix.nrows() as f64) {
            return Err(Error::InvalidArgument(format!("projector not idempotent (defect {idem:.3e})")));
        }
        let rank = matrix.trace().re.round().max(0.0) as usize;
        Ok(Self { matrix, rank })
    }

    /// Projector onto the span of orthonormal columns.
    pub fn from_orthonormal_columns(cols: &CMatrix) -> Self {
        Self {
            matrix: linalg::projector_from_columns(cols),
            rank: cols.ncols(),
        }
    }

    /// Cleans an approximately-projective Hermitian matrix by keeping the
    /// eigenvectors with eigenvalue above 1/2.
    pub fn from_approximate(matrix: &CMatrix) -> Self {
        let (vals, vecs) = eigh_desc(matrix);
        let k = vals.iter().take_while(|&&v| v > 0.5).count();
        Self::from_orthonormal_columns(&vecs.columns(0, k).into_owned())
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim), rank: dim }
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim, dim), rank: 0 }
    }

    /// `|v⟩⟨v|` for a nonzero vector (normalized internally).
    pub fn rank_one(v: &[Complex64]) -> Result<Self> {
        let n = norm_sqr(v).sqrt();
        if !(n > 0.0) {
            return Err(Error::NoSupport);
        }
        let col = CMatrix::from_iterator(v.len(), 1, v.iter().map(|z| z / n));
        Ok(Self::from_orthonormal_columns(&col))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.rank == self.dim() && frobenius(&(&self.matrix - CMatrix::identity(self.dim(), self.dim()))) < 1e-12
    }

    /// `‖P Q‖_F`.
    pub fn overlap(&self, other: &Projector) -> f64 {
        frobenius(&(&self.matrix * &other.matrix))
    }

    /// Sum with an orthogonal projector.
    pub fn merged(&self, other: &Projector) -> Projector {
        Projector {
            matrix: &self.matrix + &other.matrix,
            rank: self.rank + other.rank,
        }
    }

    /// `I - P`.
    pub fn complement(&self) -> Projector {
        let d = self.dim();
        Projector {
            matrix: CMatrix::identity(d, d) - &self.matrix,
            rank: d - self.rank,
        }
    }

    /// Orthonormal basis of the range (columns).
    pub fn basis(&self) -> CMatrix {
        let (vals, vecs) = eigh_desc(&self.matrix);
        let k = vals.iter().take_while(|&&v| v > 0.5).count();
        vecs.columns(0, k).into_owned()
    }
}

/// Ordinary Schmidt decomposition of a state across `pivot | rest`.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    pub pivot: usize,
    /// `λ_1 ≥ … ≥ λ_M > 0` (squared singular values).
    pub coeffs: Vec<f64>,
    /// `d_pivot × M`, orthonormal columns `|i⟩_k`.
    pub left: CMatrix,
    /// `D_rest × M`, orthonormal columns `|ψ_i⟩` on the remaining parties.
    pub right: CMatrix,
    /// Remaining parties in ascending order.
    pub rest_parties: Vec<usize>,
    pub rest_dims: Vec<usize>,
    pub degeneracy_classes: Vec<Vec<usize>>,
}

impl SchmidtData {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// True when every degeneracy class is a singleton.
    pub fn is_nondegenerate(&self) -> bool {
        self.degeneracy_classes.iter().all(|c| c.len() == 1)
    }

    pub fn degenerate_class_count(&self) -> usize {
        self.degeneracy_classes.iter().filter(|c| c.len() > 1).count()
    }

    /// Amplitudes of `|ψ_i⟩` over `rest_dims`.
    pub fn conditional(&self, i: usize) -> Vec<Complex64> {
        self.right.column(i).iter().copied().collect()
    }

    /// `Σ_i √λ_i |i⟩|ψ_i⟩` in the original amplitude layout.
    pub fn reconstruct(&self, dims: &[usize]) -> Vec<Complex64> {
        let sqrt = CMatrix::from_diagonal(&DVector::from_iterator(
            self.rank(),
            self.coeffs.iter().map(|&l| Complex64::new(l.sqrt(), 0.0)),
        ));
        let m = &self.left * sqrt * self.right.transpose();
        dematricize(dims, &[self.pivot], &m)
    }
}

/// Reduced density operator after tracing out `traced_parties`.
/// The kept parties appear in ascending order.
pub fn partial_trace(state: &StateVector, traced_parties: &[usize]) -> Result<DensityOperator> {
    let n = state.num_parties();
    let mut traced = traced_parties.to_vec();
    traced.sort_unstable();
    traced.dedup();
    if traced.is_empty() || traced.len() >= n {
        return Err(Error::InvalidArgument(
            "traced parties must form a proper nonempty subset".into(),
        ));
    }
    for &p in &traced {
        state.check_party(p)?;
    }
    let keep = complement_parties(n, &traced);
    Ok(DensityOperator::from_gram(reduced_matrix(state.dims(), state.amps(), &keep)))
}

/// Single-party reduced state `ρ_k`.
pub fn one_party_reduced(state: &StateVector, party: usize) -> Result<DensityOperator> {
    state.check_party(party)?;
    Ok(DensityOperator::from_gram(reduced_matrix(state.dims(), state.amps(), &[party])))
}

pub fn schmidt_decompose(state: &StateVector, pivot: usize, tol: &Tolerances) -> Result<SchmidtData> {
    state.check_party(pivot)?;
    schmidt_decompose_raw(state.dims(), state.amps(), pivot, tol)
}

pub(crate) fn schmidt_decompose_raw(
    dims: &[usize],
    amps: &[Complex64],
    pivot: usize,
    tol: &Tolerances,
) -> Result<SchmidtData> {
    let m = matricize(dims, amps, &[pivot]);
    let (u, s, v) = svd_desc(&m);
    let smax = s.first().copied().unwrap_or(0.0);
    if !(smax > 0.0) {
        return Err(Error::NoSupport);
    }
    let keep = s.iter().take_while(|&&x| x > tol.rank * smax).count();
    let coeffs: Vec<f64> = s[..keep].iter().map(|x| x * x).collect();
    let left = u.columns(0, keep).into_owned();
    // Ψ = Σ σ_i u_i v_i†, so |ψ_i⟩ has amplitudes conj(v_i).
    let right = v.columns(0, keep).map(|z| z.conj());
    let rest_parties = complement_parties(dims.len(), &[pivot]);
    let rest_dims = rest_parties.iter().map(|&p| dims[p]).collect();
    let degeneracy_classes = linalg::group_by_gap(&coeffs, tol.degen * coeffs[0]);
    Ok(SchmidtData {
        pivot,
        coeffs,
        left,
        right,
        rest_parties,
        rest_dims,
        degeneracy_classes,
    })
}

/// Projector onto the span of eigenvectors with eigenvalue above
/// `tol * λ_max`.
pub fn support_projector(rho: &DensityOperator, tol: f64) -> Result<Projector> {
    support_of(rho.matrix(), tol)
}

/// [`support_projector`] for any PSD matrix, including sub-normalized blocks.
pub fn support_of(matrix: &CMatrix, tol: f64) -> Result<Projector> {
    let (vals, vecs) = eigh_desc(matrix);
    let max = vals.first().copied().unwrap_or(0.0);
    if !(max > 0.0) {
        return Err(Error::NoSupport);
    }
    let k = vals.iter().take_while(|&&v| v > tol * max).count();
    Ok(Projector::from_orthonormal_columns(&vecs.columns(0, k).into_owned()))
}

/// True iff `‖P_a P_b‖_F ≤ tol.orth` for the supports of `a` and `b`
/// (supports cut at `tol.rank`).
pub fn orthogonal_supports(a: &DensityOperator, b: &DensityOperator, tol: &Tolerances) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    let pa = support_projector(a, tol.rank)?;
    let pb = support_projector(b, tol.rank)?;
    Ok(pa.overlap(&pb) <= tol.orth)
}

/// `(⊗_i P^i)|ψ⟩`, contracted axis by axis.
pub fn apply_local_projectors(state: &StateVector, projectors: &[Projector]) -> Result<BlockVector> {
    if projectors.len() != state.num_parties() {
        return Err(Error::DimensionMismatch(format!(
            "{} projectors for {} parties",
            projectors.len(),
            state.num_parties()
        )));
    }
    for (i, p) in projectors.iter().enumerate() {
        if p.dim() != state.dims()[i] {
            return Err(Error::DimensionMismatch(format!(
                "projector for party {} has dim {}, expected {}",
                i + 1,
                p.dim(),
                state.dims()[i]
            )));
        }
    }
    let ops: Vec<Option<&CMatrix>> = projectors
        .iter()
        .map(|p| if p.is_identity() { None } else { Some(p.matrix()) })
        .collect();
    Ok(BlockVector::new(
        state.dims().to_vec(),
        apply_local_ops(state.dims(), state.amps(), &ops),
    ))
}

/// `|⟨a|b⟩|`, clamped into `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}
