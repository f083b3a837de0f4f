//! Small dense helpers on top of nalgebra: sorted Hermitian eigendecomposition,
//! thin SVD with descending order, gap grouping, Haar unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::CMatrix;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

// Dense decompositions go through faer: nalgebra's complex SVD can return
// factors that do not reconstruct the input for rank-deficient matrices.
fn to_faer(m: &CMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Column `k` of the returned matrix is the eigenvector for value `k`.
pub fn eigh_desc(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = to_faer(&hermitian_part(m))
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("eigendecomposition of a finite Hermitian matrix");
    let s = eig.S().column_vector();
    let u = eig.U();
    // faer sorts ascending
    let values = (0..n).rev().map(|k| s[k].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| u[(r, n - 1 - c)]);
    (values, vectors)
}

/// Thin SVD `m = U diag(s) V†` with singular values sorted descending.
/// Returns `(U, s, V)` where `V` has the right singular vectors as columns.
pub fn svd_desc(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return (CMatrix::zeros(rows, 0), Vec::new(), CMatrix::zeros(cols, 0));
    }
    let svd = to_faer(m).thin_svd().expect("SVD of a finite matrix");
    let s = svd.S().column_vector();
    let values = (0..k).map(|i| s[i].re).collect();
    (from_faer(svd.U()), values, from_faer(svd.V()))
}

/// Groups a descending (or ascending) sequence into runs whose consecutive
/// gaps are at most `gap`. Transitively closed by construction.
pub fn group_by_gap(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (values[*g.last().unwrap()] - v).abs() <= gap => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// `V V†` for a matrix with orthonormal columns.
pub fn projector_from_columns(cols: &CMatrix) -> CMatrix {
    cols * cols.adjoint()
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// diagonal phases of `R` divided out.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g: CMatrix = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for row in 0..dim {
            u[(row, c)] *= phase;
        }
    }
    u
}

/// Kronecker product (used by tests and small oracles only).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}
