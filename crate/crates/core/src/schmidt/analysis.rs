use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::eigh_desc;
use crate::tensor::{
    apply_on_party, index_to_tuple, reduced_matrix, schmidt_decompose, support_of, Projector, SchmidtData, StateVector,
};
use crate::tolerance::Tolerances;
use crate::CMatrix;

use super::certificate::{verify_schmidt_projectors, SchmidtProjectorSet};
use super::commutant::{commutant_partition, scoped_correlation_operators, COMMUTANT_DRAWS};
use super::partition::conditional_overlap_partition;

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    /// Forces the pivot party; otherwise chosen automatically.
    pub pivot: Option<usize>,
    /// Seed for the commutant draws on the degenerate path.
    pub seed: u64,
    pub draws: usize,
    pub tolerances: Tolerances,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            pivot: None,
            seed: 0x5eed_c0de,
            draws: COMMUTANT_DRAWS,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Determined,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionPath {
    Generic,
    DegenerateCommutant,
    Bipartite,
    QubitFastpath,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Determined => "determined",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl DecisionPath {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionPath::Generic => "generic",
            DecisionPath::DegenerateCommutant => "degenerate-commutant",
            DecisionPath::Bipartite => "bipartite",
            DecisionPath::QubitFastpath => "qubit-fastpath",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub verdict: Verdict,
    /// Largest number of certificate rows found (1 when determined).
    pub schmidt_number: usize,
    /// Set when the degenerate search was used, so `schmidt_number` is only
    /// known to be a lower bound.
    pub lower_bound: bool,
    pub certificate: Option<SchmidtProjectorSet>,
    /// Blocks of pivot Schmidt indices (0-based). On the degenerate path the
    /// Schmidt basis inside each degenerate class is the one adapted to the
    /// blocks.
    pub partition: Option<Vec<Vec<usize>>>,
    pub path: DecisionPath,
    pub pivot: usize,
    pub pivot_coeffs: Vec<f64>,
    pub scope: Vec<usize>,
    pub diagnostics: Vec<String>,
    pub tolerances: Tolerances,
}

impl AnalysisReport {
    pub fn is_undetermined(&self) -> bool {
        self.verdict == Verdict::Undetermined
    }
}

/// Decides whether `state` is locally undetermined and, if so, returns a
/// verified Schmidt projector certificate with as many rows as found.
pub fn analyze(state: &StateVector, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    analyze_scoped(state, (0..state.num_parties()).collect(), opts)
}

/// Undeterminedness with respect to only the `(n-1)`-party marginals that
/// trace out a party in `subset`. Projector rows act on `subset` only.
pub fn s_local_analyze(state: &StateVector, subset: &[usize], opts: &AnalysisOptions) -> Result<AnalysisReport> {
    if subset.len() < 2 {
        return Err(Error::InvalidArgument("subset must contain at least two parties".into()));
    }
    analyze_scoped(state, subset.to_vec(), opts)
}

/// Rows built from a partition of the pivot's Schmidt indices: the pivot
/// gets `Σ_{i∈S_l} |i⟩⟨i|`, every other party the support of the block's
/// marginal. Not verified.
pub fn construct_projectors(
    state: &StateVector,
    pivot: usize,
    partition: &[Vec<usize>],
    tol: &Tolerances,
) -> Result<SchmidtProjectorSet> {
    if partition.len() < 2 {
        return Err(Error::InvalidArgument("partition must have at least two blocks".into()));
    }
    let sd = schmidt_decompose(state, pivot, tol)?;
    let mut seen = vec![false; sd.rank()];
    for &i in partition.iter().flatten() {
        if i >= sd.rank() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(format!(
                "partition is not a partition of the {} Schmidt indices",
                sd.rank()
            )));
        }
    }
    if seen.iter().any(|s| !s) || partition.iter().any(|b| b.is_empty()) {
        return Err(Error::InvalidArgument("partition must cover every Schmidt index".into()));
    }
    let scope: Vec<usize> = (0..state.num_parties()).collect();
    let blocks = pivot_blocks(&sd.left, partition);
    let rows = rows_from_pivot_blocks(state, pivot, &scope, &blocks, tol)?;
    SchmidtProjectorSet::new(rows, scope, Some(pivot), *tol)
}

/// Two-row certificate: the first row of the finest certificate against
/// the sum of all the others.
pub fn two_block_check(state: &StateVector, opts: &AnalysisOptions) -> Result<Option<SchmidtProjectorSet>> {
    let report = analyze(state, opts)?;
    let Some(cert) = report.certificate else {
        return Ok(None);
    };
    if cert.len() == 2 {
        return Ok(Some(cert));
    }
    let merged = cert.coarsened(&[vec![0], (1..cert.len()).collect()])?;
    Ok(verify_schmidt_projectors(state, &merged).valid.then_some(merged))
}

/// `ψ = α|0̂…0̂⟩ + β|1̂…1̂⟩` with `α ≥ β > 0`.
#[derive(Debug, Clone)]
pub struct GhzForm {
    pub alpha: f64,
    pub beta: f64,
    /// Per party a 2×2 unitary whose columns are `|0̂⟩, |1̂⟩`.
    pub bases: Vec<CMatrix>,
    pub residual: f64,
}

/// Generalized-GHZ normal form of an all-qubit state, if it has one.
pub fn qubit_ghz_check(state: &StateVector, opts: &AnalysisOptions) -> Result<Option<GhzForm>> {
    if state.dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidArgument("qubit_ghz_check needs every party to be a qubit".into()));
    }
    let report = analyze(state, opts)?;
    let Some(cert) = report.certificate else {
        return Ok(None);
    };
    if cert.len() != 2 {
        return Ok(None);
    }
    let w0 = cert.block(state, 0).norm_sqr();
    let w1 = cert.block(state, 1).norm_sqr();
    let (r0, r1) = if w0 >= w1 { (0, 1) } else { (1, 0) };
    let mut bases: Vec<CMatrix> = (0..state.num_parties())
        .map(|i| {
            let e0 = cert.projector(r0, i).basis();
            let e1 = cert.projector(r1, i).basis();
            CMatrix::from_fn(2, 2, |r, c| if c == 0 { e0[(r, 0)] } else { e1[(r, 0)] })
        })
        .collect();
    let alpha_hat = product_overlap(state, &bases, 0);
    let beta_hat = product_overlap(state, &bases, 1);
    if !(alpha_hat.norm() > 0.0 && beta_hat.norm() > 0.0) {
        return Ok(None);
    }
    // absorb both phases into party 1
    for (c, z) in [(0, alpha_hat), (1, beta_hat)] {
        let phase = z / z.norm();
        for r in 0..2 {
            bases[0][(r, c)] *= phase;
        }
    }
    let (mut alpha, mut beta) = (alpha_hat.norm(), beta_hat.norm());
    if alpha < beta {
        // equal weights can come out in either order after rounding
        std::mem::swap(&mut alpha, &mut beta);
        for b in &mut bases {
            b.swap_columns(0, 1);
        }
    }
    let dims = state.dims();
    let residual = state
        .amps()
        .iter()
        .enumerate()
        .map(|(flat, &amp)| {
            let t = index_to_tuple(flat, dims);
            let zero: num_complex::Complex64 = (0..dims.len()).map(|i| bases[i][(t[i], 0)]).product();
            let one: num_complex::Complex64 = (0..dims.len()).map(|i| bases[i][(t[i], 1)]).product();
            (amp - zero * alpha - one * beta).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    Ok((residual <= opts.tolerances.recon).then_some(GhzForm { alpha, beta, bases, residual }))
}

// ⟨ĉ…ĉ|ψ⟩ with ĉ = column `col` of each party's basis
fn product_overlap(state: &StateVector, bases: &[CMatrix], col: usize) -> num_complex::Complex64 {
    let dims = state.dims();
    state
        .amps()
        .iter()
        .enumerate()
        .map(|(flat, &amp)| {
            let t = index_to_tuple(flat, dims);
            let coeff: num_complex::Complex64 = (0..dims.len()).map(|i| bases[i][(t[i], col)].conj()).product();
            coeff * amp
        })
        .sum()
}

struct Found {
    cert: SchmidtProjectorSet,
    partition: Vec<Vec<usize>>,
    pivot: usize,
}

fn pivot_blocks(basis: &CMatrix, partition: &[Vec<usize>]) -> Vec<Projector> {
    partition
        .iter()
        .map(|block| Projector::from_orthonormal_columns(&basis.select_columns(block.iter())))
        .collect()
}

fn rows_from_pivot_blocks(
    state: &StateVector,
    pivot: usize,
    scope: &[usize],
    blocks: &[Projector],
    tol: &Tolerances,
) -> Result<Vec<Vec<Projector>>> {
    let dims = state.dims();
    blocks
        .iter()
        .map(|block| {
            let amps = apply_on_party(dims, state.amps(), pivot, block.matrix());
            (0..dims.len())
                .map(|i| {
                    if i == pivot {
                        Ok(block.clone())
                    } else if scope.contains(&i) {
                        support_of(&reduced_matrix(dims, &amps, &[i]), tol.rank)
                    } else {
                        Ok(Projector::identity(dims[i]))
                    }
                })
                .collect()
        })
        .collect()
}

/// Builds rows from a partition of the columns of `basis`, merging blocks
/// whose cross-party supports overlap until none do, then verifies.
fn certify(
    state: &StateVector,
    pivot: usize,
    scope: &[usize],
    basis: &CMatrix,
    partition: Vec<Vec<usize>>,
    tol: &Tolerances,
) -> Option<Found> {
    let mut groups = partition;
    loop {
        if groups.len() < 2 {
            return None;
        }
        let blocks = pivot_blocks(basis, &groups);
        let rows = rows_from_pivot_blocks(state, pivot, scope, &blocks, tol).ok()?;
        let clash = (0..rows.len())
            .flat_map(|a| (a + 1..rows.len()).map(move |b| (a, b)))
            .find(|&(a, b)| {
                scope
                    .iter()
                    .filter(|&&i| i != pivot)
                    .any(|&i| rows[a][i].overlap(&rows[b][i]) > tol.orth)
            });
        if let Some((a, b)) = clash {
            let moved = groups.remove(b);
            groups[a].extend(moved);
            groups[a].sort_unstable();
            continue;
        }
        let cert = SchmidtProjectorSet::new(rows, scope.to_vec(), Some(pivot), *tol).ok()?;
        let check = verify_schmidt_projectors(state, &cert);
        if !check.valid {
            log::debug!("pivot {} partition failed verification: {:?}", pivot + 1, check.diagnostics);
            return None;
        }
        return Some(Found { cert, partition: groups, pivot });
    }
}

/// Schmidt basis adapted to commutant blocks `qs` (given in the support
/// coordinates): inside each degeneracy class, eigenvectors of the
/// restricted block projectors. Returns the adapted basis on `H_pivot` and
/// the induced partition of Schmidt indices.
fn adapt_to_blocks(sd: &SchmidtData, qs: &[Projector]) -> Option<(CMatrix, Vec<Vec<usize>>)> {
    let m = sd.rank();
    let mut adapted = CMatrix::zeros(m, m);
    let mut partition: Vec<Vec<usize>> = vec![Vec::new(); qs.len()];
    for class in &sd.degeneracy_classes {
        let mut next = 0;
        for (l, q) in qs.iter().enumerate() {
            let sub = q.matrix().select_rows(class.iter()).select_columns(class.iter());
            let (vals, vecs) = eigh_desc(&sub);
            for (t, _) in vals.iter().enumerate().filter(|(_, &v)| v > 0.5) {
                if next >= class.len() {
                    return None;
                }
                let col = class[next];
                for (r, &row) in class.iter().enumerate() {
                    adapted[(row, col)] = vecs[(r, t)];
                }
                partition[l].push(col);
                next += 1;
            }
        }
        if next != class.len() {
            return None;
        }
    }
    let mut partition: Vec<Vec<usize>> = partition.into_iter().filter(|b| !b.is_empty()).collect();
    for b in &mut partition {
        b.sort_unstable();
    }
    partition.sort();
    Some((&sd.left * adapted, partition))
}

fn search_pivot(
    state: &StateVector,
    sd: &SchmidtData,
    scope: &[usize],
    opts: &AnalysisOptions,
) -> Option<Found> {
    let tol = &opts.tolerances;
    if sd.is_nondegenerate() {
        let partition = conditional_overlap_partition(sd, scope, tol);
        return certify(state, sd.pivot, scope, &sd.left, partition, tol);
    }
    let ops = scoped_correlation_operators(state, sd, scope);
    let seed = opts.seed ^ (sd.pivot as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let qs = commutant_partition(&ops, sd.rank(), seed, opts.draws, tol).ok()?;
    let (basis, partition) = adapt_to_blocks(sd, &qs)?;
    certify(state, sd.pivot, scope, &basis, partition, tol)
}

fn analyze_scoped(state: &StateVector, scope: Vec<usize>, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let n = state.num_parties();
    let tol = opts.tolerances;
    let mut scope = scope;
    scope.sort_unstable();
    scope.dedup();
    if scope.len() < 2 {
        return Err(Error::InvalidArgument("scope must contain at least two parties".into()));
    }
    if let Some(&p) = scope.iter().find(|&&p| p >= n) {
        return Err(Error::InvalidArgument(format!("party {} out of range 1..={n}", p + 1)));
    }
    if let Some(p) = opts.pivot {
        state.check_party(p)?;
        if !scope.contains(&p) {
            return Err(Error::InvalidArgument(format!("pivot {} is not in the subset", p + 1)));
        }
    }
    let full = scope.len() == n;
    let sds: Vec<SchmidtData> = scope
        .iter()
        .map(|&p| schmidt_decompose(state, p, &tol))
        .collect::<Result<_>>()?;
    let slot_of = |p: usize| scope.iter().position(|&q| q == p).expect("pivot in scope");
    let pivot = opts.pivot.unwrap_or_else(|| {
        let best = (0..scope.len())
            .min_by_key(|&s| (sds[s].degenerate_class_count(), scope[s]))
            .expect("nonempty scope");
        scope[best]
    });
    let sd = &sds[slot_of(pivot)];
    let path = if full && n == 2 {
        DecisionPath::Bipartite
    } else if full && state.dims().iter().all(|&d| d == 2) {
        DecisionPath::QubitFastpath
    } else if sd.is_nondegenerate() {
        DecisionPath::Generic
    } else {
        DecisionPath::DegenerateCommutant
    };
    let mut diagnostics = Vec::new();
    let mut lower_bound = false;

    let found = if let Some(s) = sds.iter().position(|sd| sd.rank() < 2) {
        diagnostics.push(format!(
            "party {} has a rank-one marginal, so no two orthogonal projectors act nonnull there",
            scope[s] + 1
        ));
        None
    } else if path == DecisionPath::Bipartite {
        let singletons = (0..sd.rank()).map(|i| vec![i]).collect();
        certify(state, pivot, &scope, &sd.left, singletons, &tol)
    } else if sd.is_nondegenerate() {
        search_pivot(state, sd, &scope, opts)
    } else {
        lower_bound = true;
        diagnostics.push(format!(
            "pivot {} has degenerate Schmidt coefficients; commutant search used, Schmidt number is a lower bound",
            pivot + 1
        ));
        let mut order = vec![pivot];
        if opts.pivot.is_none() {
            order.extend(scope.iter().copied().filter(|&p| p != pivot));
        }
        let mut best: Option<Found> = None;
        for p in order {
            if let Some(f) = search_pivot(state, &sds[slot_of(p)], &scope, opts) {
                let better = match &best {
                    None => true,
                    Some(b) => (f.cert.len() > b.cert.len()) || (f.cert.len() == b.cert.len() && f.partition < b.partition),
                };
                if better {
                    best = Some(f);
                }
            }
        }
        best
    };

    let report = match found {
        Some(f) => {
            let pivot_coeffs = sds[slot_of(f.pivot)].coeffs.clone();
            AnalysisReport {
                verdict: Verdict::Undetermined,
                schmidt_number: f.cert.len(),
                lower_bound,
                partition: Some(f.partition),
                path,
                pivot: f.pivot,
                pivot_coeffs,
                scope,
                diagnostics,
                tolerances: tol,
                certificate: Some(f.cert),
            }
        }
        None => AnalysisReport {
            verdict: Verdict::Determined,
            schmidt_number: 1,
            lower_bound,
            certificate: None,
            partition: Some(vec![(0..sd.rank()).collect()]),
            path,
            pivot,
            pivot_coeffs: sd.coeffs.clone(),
            scope,
            diagnostics,
            tolerances: tol,
        },
    };
    if let Some(cert) = &report.certificate {
        debug_assert!(verify_schmidt_projectors(state, cert).valid);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius;
    use crate::states;
    use num_complex::Complex64;

    fn opts() -> AnalysisOptions {
        AnalysisOptions::default()
    }

    #[test]
    fn ghz_is_undetermined_with_two_rows() {
        let r = analyze(&states::ghz(3, 2).unwrap(), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Undetermined);
        assert_eq!(r.schmidt_number, 2);
        assert_eq!(r.path, DecisionPath::QubitFastpath);
    }

    #[test]
    fn product_and_w_are_determined() {
        for s in [states::product(vec![2, 2, 2]).unwrap(), states::w(3).unwrap()] {
            let r = analyze(&s, &opts()).unwrap();
            assert_eq!(r.verdict, Verdict::Determined);
            assert_eq!(r.schmidt_number, 1);
            assert!(r.certificate.is_none());
        }
        let r = analyze(&states::w(3).unwrap(), &opts()).unwrap();
        assert!(!r.lower_bound);
        assert_eq!(r.partition, Some(vec![vec![0, 1]]));
    }

    #[test]
    fn completely_gsd_has_three_rows() {
        let s = states::completely_gsd(vec![3, 3, 3], &[0.5, 0.3, 0.2]).unwrap();
        let r = analyze(&s, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Undetermined);
        assert_eq!(r.schmidt_number, 3);
        assert_eq!(r.path, DecisionPath::Generic);
        assert_eq!(r.partition, Some(vec![vec![0], vec![1], vec![2]]));
    }

    #[test]
    fn bipartite_path_uses_schmidt_rank() {
        let r = analyze(&states::ghz(2, 3).unwrap(), &opts()).unwrap();
        assert_eq!(r.path, DecisionPath::Bipartite);
        assert_eq!(r.schmidt_number, 3);
        let r = analyze(&states::product(vec![3, 2]).unwrap(), &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Determined);
    }

    #[test]
    fn construct_projectors_on_ghz() {
        let tol = Tolerances::default();
        let ghz = states::ghz(3, 2).unwrap();
        let cert = construct_projectors(&ghz, 0, &[vec![0], vec![1]], &tol).unwrap();
        assert!(verify_schmidt_projectors(&ghz, &cert).valid);
        for j in 0..2 {
            // every party's row-j projector is the same computational projector
            let p0 = cert.projector(j, 0).matrix().clone();
            assert_eq!(cert.projector(j, 0).rank(), 1);
            assert!((p0[(0, 0)].re - p0[(1, 1)].re).abs() > 0.99);
            for i in 1..3 {
                assert!(frobenius(&(cert.projector(j, i).matrix() - &p0)) < 1e-12);
            }
        }
        assert!(construct_projectors(&ghz, 0, &[vec![0, 1]], &tol).is_err());
        assert!(construct_projectors(&ghz, 0, &[vec![0], vec![0]], &tol).is_err());
    }

    #[test]
    fn construct_projectors_excludes_unused_levels() {
        let tol = Tolerances::default();
        let s = states::completely_gsd(vec![3, 3, 3], &[0.6, 0.4]).unwrap();
        let cert = construct_projectors(&s, 0, &[vec![0], vec![1]], &tol).unwrap();
        for j in 0..2 {
            for i in 0..3 {
                let p = cert.projector(j, i);
                assert_eq!(p.rank(), 1);
                assert!(p.matrix()[(2, 2)].norm() < 1e-12);
                assert!((p.matrix()[(j, j)].re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn construct_projectors_coarse_block_ranks() {
        let tol = Tolerances::default();
        let s = states::completely_gsd(vec![3, 3, 3], &[0.5, 0.3, 0.2]).unwrap();
        let cert = construct_projectors(&s, 0, &[vec![0, 1], vec![2]], &tol).unwrap();
        assert!(verify_schmidt_projectors(&s, &cert).valid);
        for i in 0..3 {
            assert_eq!(cert.projector(0, i).rank(), 2);
            assert_eq!(cert.projector(1, i).rank(), 1);
        }
    }

    #[test]
    fn two_block_examples() {
        let ghz = states::ghz(3, 2).unwrap();
        assert_eq!(two_block_check(&ghz, &opts()).unwrap().unwrap().len(), 2);
        let s = states::completely_gsd(vec![3, 3, 3], &[0.5, 0.3, 0.2]).unwrap();
        let cert = two_block_check(&s, &opts()).unwrap().unwrap();
        assert_eq!(cert.len(), 2);
        assert_eq!(cert.projector(0, 0).rank(), 1);
        assert_eq!(cert.projector(1, 0).rank(), 2);
        assert!(two_block_check(&states::w(3).unwrap(), &opts()).unwrap().is_none());
    }

    #[test]
    fn qubit_ghz_examples() {
        let form = qubit_ghz_check(&states::ghz(3, 2).unwrap(), &opts()).unwrap().unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((form.alpha - s).abs() < 1e-12 && (form.beta - s).abs() < 1e-12);
        for b in &form.bases {
            // computational up to phases and ordering
            assert!(b[(0, 0)].norm() > 1.0 - 1e-9 || b[(1, 0)].norm() > 1.0 - 1e-9);
            assert!(b[(0, 0)].norm() < 1e-9 || b[(1, 0)].norm() < 1e-9);
        }
        assert!(qubit_ghz_check(&states::w(3).unwrap(), &opts()).unwrap().is_none());
        assert!(qubit_ghz_check(&states::ghz(3, 3).unwrap(), &opts()).is_err());

        // 0.8|++⟩ + 0.6|−−⟩
        let h = 1.0 / 2f64.sqrt();
        let plus = [h, h];
        let minus = [h, -h];
        let amps: Vec<Complex64> = (0..4)
            .map(|i| Complex64::new(0.8 * plus[i / 2] * plus[i % 2] + 0.6 * minus[i / 2] * minus[i % 2], 0.0))
            .collect();
        let st = StateVector::new(vec![2, 2], amps).unwrap();
        let form = qubit_ghz_check(&st, &opts()).unwrap().unwrap();
        assert!((form.alpha - 0.8).abs() < 1e-12 && (form.beta - 0.6).abs() < 1e-12);
        for b in &form.bases {
            assert!((b[(0, 0)].norm() - h).abs() < 1e-9 && (b[(1, 0)].norm() - h).abs() < 1e-9);
        }
    }

    #[test]
    fn s_local_examples() {
        let ghz = states::ghz(3, 2).unwrap();
        let r = s_local_analyze(&ghz, &[0, 1], &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::Undetermined);
        let cert = r.certificate.unwrap();
        assert!(cert.projector(0, 2).is_identity());

        let bell = states::ghz(2, 2).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[..4].copy_from_slice(bell.amps());
        let zero_bell = StateVector::new(vec![2, 2, 2], amps).unwrap();
        assert_eq!(s_local_analyze(&zero_bell, &[1, 2], &opts()).unwrap().verdict, Verdict::Undetermined);
        assert_eq!(s_local_analyze(&zero_bell, &[0, 1], &opts()).unwrap().verdict, Verdict::Determined);
        assert!(s_local_analyze(&zero_bell, &[1], &opts()).is_err());
    }

    #[test]
    fn explicit_pivot_must_be_valid() {
        let ghz = states::ghz(3, 2).unwrap();
        let mut o = opts();
        o.pivot = Some(5);
        assert!(analyze(&ghz, &o).is_err());
        o.pivot = Some(2);
        assert_eq!(analyze(&ghz, &o).unwrap().pivot, 2);
        assert!(s_local_analyze(&ghz, &[0, 1], &o).is_err());
    }
}
