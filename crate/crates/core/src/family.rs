//! The family of pure states sharing every `(n-1)`-party marginal with a
//! given undetermined state: phase-twisted sums of certificate blocks.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, random_unitary};
use crate::schmidt::{analyze, verify_schmidt_projectors, AnalysisOptions, SchmidtProjectorSet};
use crate::tensor::{apply_on_party, fidelity, schmidt_decompose, BlockVector, SchmidtData, StateVector};
use crate::tolerance::Tolerances;
use crate::{CMatrix, Complex64};

#[derive(Debug, Clone)]
pub struct ReductionFamily {
    base: StateVector,
    certificate: SchmidtProjectorSet,
    blocks: Vec<BlockVector>,
    /// Bipartite with a degenerate Schmidt spectrum: the family is larger
    /// than the phase family (block unitaries on party 1).
    special: Option<SchmidtData>,
}

impl ReductionFamily {
    /// Wraps a certificate after checking it against `base`.
    pub fn new(base: StateVector, certificate: SchmidtProjectorSet) -> Result<Self> {
        if !certificate.is_full_scope() {
            return Err(Error::InvalidArgument("family needs a certificate over all parties".into()));
        }
        let check = verify_schmidt_projectors(&base, &certificate);
        if !check.valid {
            return Err(Error::InvalidCertificate(check.diagnostics.join("; ")));
        }
        let blocks = (0..certificate.len()).map(|j| certificate.block(&base, j)).collect();
        let special = if base.num_parties() == 2 {
            let sd = schmidt_decompose(&base, 0, certificate.tolerances())?;
            (!sd.is_nondegenerate()).then_some(sd)
        } else {
            None
        };
        Ok(Self { base, certificate, blocks, special })
    }

    /// Analyzes `base` and builds the family from the finest certificate.
    pub fn from_state(base: StateVector, opts: &AnalysisOptions) -> Result<Self> {
        let report = analyze(&base, opts)?;
        match report.certificate {
            Some(cert) => Self::new(base, cert),
            None => Err(Error::Determined),
        }
    }

    pub fn base(&self) -> &StateVector {
        &self.base
    }

    pub fn certificate(&self) -> &SchmidtProjectorSet {
        &self.certificate
    }

    /// Number of phases `L`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_special(&self) -> bool {
        self.special.is_some()
    }

    /// Block weights `‖⊗_i P_j^i ψ‖²`.
    pub fn weights(&self) -> Vec<f64> {
        self.blocks.iter().map(BlockVector::norm_sqr).collect()
    }

    /// `Σ_j e^{iθ_j} ⊗_i P_j^i ψ`, normalized and phase-canonical.
    pub fn member(&self, theta: &[f64]) -> Result<StateVector> {
        if theta.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} phases, got {}",
                self.len(),
                theta.len()
            )));
        }
        if let Some(t) = theta.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument(format!("phase {t} is not finite")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); self.base.total_dim()];
        for (block, &t) in self.blocks.iter().zip(theta) {
            let phase = Complex64::from_polar(1.0, t);
            for (a, &b) in amps.iter_mut().zip(block.amps()) {
                *a += phase * b;
            }
        }
        let state = BlockVector::new(self.base.dims().to_vec(), amps).normalize()?;
        Ok(canonicalize_phase(&state))
    }

    /// Uniform phases; in the bipartite degenerate case a Haar unitary per
    /// degeneracy class on party 1 instead.
    pub fn sample_member(&self, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match &self.special {
            None => {
                let theta: Vec<f64> = (0..self.len()).map(|_| rng.random_range(0.0..TAU)).collect();
                self.member(&theta).expect("phase count matches")
            }
            Some(sd) => {
                let d = self.base.dims()[0];
                let left = &sd.left;
                let mut u = CMatrix::identity(d, d) - left * left.adjoint();
                for class in &sd.degeneracy_classes {
                    let cols = left.select_columns(class.iter());
                    let v = random_unitary(class.len(), &mut rng);
                    u += &cols * v * cols.adjoint();
                }
                let amps = apply_on_party(self.base.dims(), self.base.amps(), 0, &u);
                let state = StateVector::from_unnormalized(self.base.dims().to_vec(), amps)
                    .expect("unitary preserves the norm");
                canonicalize_phase(&state)
            }
        }
    }
}

/// Global phase fixed so that the largest-magnitude amplitude (first index
/// on ties) is real and positive.
pub fn canonicalize_phase(state: &StateVector) -> StateVector {
    let amps = state.amps();
    let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let Some(pivot) = amps.iter().find(|a| a.norm() >= max * (1.0 - 1e-12)) else {
        return state.clone();
    };
    if pivot.norm() == 0.0 {
        return state.clone();
    }
    state.scaled(pivot.conj() / pivot.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionCheck {
    pub same: bool,
    /// Per traced-out party `i`, `‖Tr_i|a⟩⟨a| − Tr_i|b⟩⟨b|‖_F`.
    pub residuals: Vec<f64>,
}

impl ReductionCheck {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Compares all `n` of the `(n-1)`-party marginals of `a` and `b`.
pub fn verify_same_reductions(a: &StateVector, b: &StateVector) -> Result<ReductionCheck> {
    verify_same_reductions_with(a, b, &Tolerances::default())
}

pub fn verify_same_reductions_with(a: &StateVector, b: &StateVector, tol: &Tolerances) -> Result<ReductionCheck> {
    a.check_same_dims(b)?;
    let n = a.num_parties();
    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let rest: Vec<usize> = (0..n).filter(|&p| p != i).collect();
            let ma = a.matricize(&rest);
            let mb = b.matricize(&rest);
            // ρ_a − ρ_b = Q (R_a R_a† − R_b R_b†) Q† with [Ψ_a Ψ_b] = QR, which
            // keeps the residual accurate when the marginals are large
            let cols = ma.ncols();
            let mut stacked = CMatrix::zeros(ma.nrows(), 2 * cols);
            stacked.columns_mut(0, cols).copy_from(&ma);
            stacked.columns_mut(cols, cols).copy_from(&mb);
            let r = stacked.qr().r();
            let ra = r.columns(0, cols);
            let rb = r.columns(cols, cols);
            frobenius(&(ra * ra.adjoint() - rb * rb.adjoint()))
        })
        .collect();
    let same = residuals.iter().all(|&r| r <= tol.recon);
    Ok(ReductionCheck { same, residuals })
}

/// True iff `a` and `b` differ by more than a global phase.
pub fn distinctness(a: &StateVector, b: &StateVector) -> Result<bool> {
    Ok(fidelity(a, b)? < 1.0 - Tolerances::default().recon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;
    use std::f64::consts::PI;

    fn fam(s: StateVector) -> ReductionFamily {
        ReductionFamily::from_state(s, &AnalysisOptions::default()).unwrap()
    }

    #[test]
    fn ghz_members() {
        let ghz = states::ghz(3, 2).unwrap();
        let f = fam(ghz.clone());
        assert_eq!(f.len(), 2);
        let same = f.member(&[0.0, 0.0]).unwrap();
        assert!((fidelity(&same, &ghz).unwrap() - 1.0).abs() < 1e-12);
        let minus = f.member(&[0.0, PI]).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((minus.amps()[0] - Complex64::new(h, 0.0)).norm() < 1e-12);
        assert!((minus.amps()[7] - Complex64::new(-h, 0.0)).norm() < 1e-12);
        assert!(f.member(&[0.0]).is_err());
    }

    #[test]
    fn completely_gsd_member() {
        let lambda = [0.5, 0.3, 0.2];
        let s = states::completely_gsd(vec![3, 3, 3], &lambda).unwrap();
        let f = fam(s);
        let theta = [0.0, PI / 2.0, PI];
        let m = f.member(&theta).unwrap();
        for i in 0..3 {
            let want = Complex64::from_polar(lambda[i].sqrt(), theta[i]);
            assert!((m.amplitude(&[i, i, i]) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn determined_states_have_no_family() {
        let r = ReductionFamily::from_state(states::product(vec![2, 2, 2]).unwrap(), &AnalysisOptions::default());
        assert!(matches!(r, Err(Error::Determined)));
    }

    #[test]
    fn sampled_members_verify() {
        let ghz = states::ghz(3, 2).unwrap();
        let f = fam(ghz.clone());
        let m = f.sample_member(7);
        assert!(verify_same_reductions(&ghz, &m).unwrap().same);
        assert_eq!(f.sample_member(7), m);
    }

    #[test]
    fn bell_special_case() {
        let bell = states::ghz(2, 2).unwrap();
        let f = fam(bell.clone());
        assert!(f.is_special());
        let m = f.sample_member(3);
        let rho = crate::tensor::one_party_reduced(&m, 1).unwrap();
        assert!(frobenius(&(rho.matrix() - CMatrix::identity(2, 2).scale(0.5))) < 1e-12);
        assert!(verify_same_reductions(&bell, &m).unwrap().same);
        // outside the phase family in general
        assert!(distinctness(&bell, &m).unwrap());
    }

    #[test]
    fn reductions_examples() {
        let ghz = states::ghz(3, 2).unwrap();
        assert!(verify_same_reductions(&ghz, &ghz).unwrap().same);
        let h = 1.0 / 2f64.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[0] = Complex64::new(h, 0.0);
        amps[7] = Complex64::from_polar(h, PI / 3.0);
        let twisted = StateVector::new(vec![2, 2, 2], amps).unwrap();
        assert!(verify_same_reductions(&ghz, &twisted).unwrap().same);
        let w = states::w(3).unwrap();
        let check = verify_same_reductions(&ghz, &w).unwrap();
        assert!(!check.same && check.max_residual() > 0.1);
        assert!(verify_same_reductions(&ghz, &states::ghz(3, 3).unwrap()).is_err());
    }

    #[test]
    fn distinctness_examples() {
        let ghz = states::ghz(3, 2).unwrap();
        assert!(!distinctness(&ghz, &ghz).unwrap());
        assert!(!distinctness(&ghz, &ghz.scaled(Complex64::from_polar(1.0, 0.7))).unwrap());
        let minus = fam(ghz.clone()).member(&[0.0, PI]).unwrap();
        assert!(distinctness(&ghz, &minus).unwrap());
    }

    #[test]
    fn phase_merging_matches_coarse_certificate() {
        let s = states::completely_gsd(vec![3, 3, 3], &[0.5, 0.3, 0.2]).unwrap();
        let f = fam(s.clone());
        let coarse = f.certificate().coarsened(&[vec![0, 1], vec![2]]).unwrap();
        let g = ReductionFamily::new(s, coarse).unwrap();
        let a = f.member(&[1.1, 1.1, 2.0]).unwrap();
        let b = g.member(&[1.1, 2.0]).unwrap();
        let diff: f64 = a.amps().iter().zip(b.amps()).map(|(x, y)| (x - y).norm()).sum();
        assert!(diff < 1e-12);
    }
}
