//! Constructors for the standard states used in tests, acceptance runs and
//! the `gen` subcommand.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{complex_gaussian, random_unitary, ZERO};
use crate::tensor::{apply_local_ops, checked_total_dim, tuple_to_index, StateVector};
use crate::CMatrix;

/// `(Σ_{i<d} |i…i⟩)/√d` on `n` parties of dimension `d`.
pub fn ghz(n: usize, d: usize) -> Result<StateVector> {
    if d < 2 {
        return Err(Error::InvalidArgument("GHZ needs local dimension ≥ 2".into()));
    }
    let dims = vec![d; n];
    let total = checked_total_dim(&dims)?;
    let mut amps = vec![ZERO; total];
    let a = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        amps[tuple_to_index(&vec![i; n], &dims)] = Complex64::new(a, 0.0);
    }
    StateVector::new(dims, amps)
}

/// `α|0…0⟩ + β|1…1⟩` on `n` qubits (normalized from the given weights).
pub fn generalized_ghz(n: usize, alpha: f64, beta: f64) -> Result<StateVector> {
    let dims = vec![2; n];
    let total = checked_total_dim(&dims)?;
    let mut amps = vec![ZERO; total];
    amps[0] = Complex64::new(alpha, 0.0);
    amps[total - 1] += Complex64::new(beta, 0.0);
    StateVector::from_unnormalized(dims, amps)
}

/// Dicke state with `k` excitations on `n` qubits.
pub fn dicke(n: usize, k: usize) -> Result<StateVector> {
    if k > n {
        return Err(Error::InvalidArgument(format!("Dicke excitation {k} exceeds {n} qubits")));
    }
    let dims = vec![2; n];
    let total = checked_total_dim(&dims)?;
    let amps = (0..total)
        .map(|i| {
            if (i as u64).count_ones() as usize == k {
                Complex64::new(1.0, 0.0)
            } else {
                ZERO
            }
        })
        .collect();
    StateVector::from_unnormalized(dims, amps)
}

/// W state: the single-excitation Dicke state.
pub fn w(n: usize) -> Result<StateVector> {
    dicke(n, 1)
}

/// `|0…0⟩`.
pub fn product(dims: Vec<usize>) -> Result<StateVector> {
    let zeros = vec![0; dims.len()];
    StateVector::basis(dims, &zeros)
}

/// `Σ_{i<m} √λ_i |i⟩_1…|i⟩_n` with `m = λ.len()`.
pub fn completely_gsd(dims: Vec<usize>, lambda: &[f64]) -> Result<StateVector> {
    let total = checked_total_dim(&dims)?;
    let m = lambda.len();
    if m == 0 {
        return Err(Error::InvalidArgument("lambda must be nonempty".into()));
    }
    let min_d = dims.iter().copied().min().unwrap_or(0);
    if m > min_d {
        return Err(Error::InvalidArgument(format!(
            "{m} coefficients exceed the smallest local dimension {min_d}"
        )));
    }
    if lambda.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidArgument("lambda entries must be positive".into()));
    }
    let sum: f64 = lambda.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("lambda must sum to 1, got {sum}")));
    }
    let mut amps = vec![ZERO; total];
    for (i, &l) in lambda.iter().enumerate() {
        amps[tuple_to_index(&vec![i; dims.len()], &dims)] = Complex64::new((l / sum).sqrt(), 0.0);
    }
    StateVector::from_unnormalized(dims, amps)
}

/// Haar-random pure state.
pub fn haar<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Result<StateVector> {
    let total = checked_total_dim(&dims)?;
    let amps = (0..total).map(|_| complex_gaussian(rng)).collect();
    StateVector::from_unnormalized(dims, amps)
}

/// `(⊗_i U_i)|ψ⟩`.
pub fn apply_local_unitaries(state: &StateVector, unitaries: &[CMatrix]) -> Result<StateVector> {
    if unitaries.len() != state.num_parties()
        || unitaries.iter().zip(state.dims()).any(|(u, &d)| u.nrows() != d || u.ncols() != d)
    {
        return Err(Error::DimensionMismatch("one d_i × d_i unitary per party required".into()));
    }
    let ops: Vec<Option<&CMatrix>> = unitaries.iter().map(Some).collect();
    let amps = apply_local_ops(state.dims(), state.amps(), &ops);
    StateVector::from_unnormalized(state.dims().to_vec(), amps)
}

pub fn random_local_unitaries<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Vec<CMatrix> {
    dims.iter().map(|&d| random_unitary(d, rng)).collect()
}

/// A state made of `blocks` pieces with pairwise disjoint computational
/// supports at every party. Each block fills the full product of its local
/// value sets with random amplitudes, so it is connected on its own and the
/// state has exactly `blocks` Schmidt projector rows.
pub fn planted_blocks<R: Rng + ?Sized>(dims: &[usize], blocks: usize, rng: &mut R) -> Result<StateVector> {
    let total = checked_total_dim(dims)?;
    if blocks == 0 || dims.iter().any(|&d| d < blocks) {
        return Err(Error::InvalidArgument(format!(
            "every local dimension must be at least the block count {blocks}"
        )));
    }
    // values[party][block] = local basis values owned by the block
    let mut values: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dims.len());
    for &d in dims {
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(rng);
        let mut owned = vec![Vec::new(); blocks];
        for (slot, &v) in perm.iter().enumerate() {
            if slot < blocks {
                owned[slot].push(v);
            } else if rng.random_bool(0.75) {
                owned[rng.random_range(0..blocks)].push(v);
            }
        }
        values.push(owned);
    }
    let mut amps = vec![ZERO; total];
    for b in 0..blocks {
        let weight = 0.2 + rng.random::<f64>();
        let sets: Vec<&Vec<usize>> = values.iter().map(|v| &v[b]).collect();
        let mut tuple = vec![0usize; dims.len()];
        fill_block(&sets, 0, &mut tuple, dims, &mut amps, weight, rng);
    }
    StateVector::from_unnormalized(dims.to_vec(), amps)
}

fn fill_block<R: Rng + ?Sized>(
    sets: &[&Vec<usize>],
    party: usize,
    tuple: &mut Vec<usize>,
    dims: &[usize],
    amps: &mut [Complex64],
    weight: f64,
    rng: &mut R,
) {
    if party == sets.len() {
        amps[tuple_to_index(tuple, dims)] = complex_gaussian(rng) * weight;
        return;
    }
    for &v in sets[party] {
        tuple[party] = v;
        fill_block(sets, party + 1, tuple, dims, amps, weight, rng);
    }
}
