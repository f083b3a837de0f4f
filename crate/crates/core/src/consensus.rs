//! One-shot quantum consensus: each agent measures its share of an
//! undetermined state once, with no messages, and announces the outcome.
//!
//! Outcome labels are `0` for the null projector (⊥) and `1..=L` for the
//! certificate rows.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, random_unitary};
use crate::schmidt::{analyze, verify_schmidt_projectors, AnalysisOptions, SchmidtProjectorSet};
use crate::tensor::{apply_on_party, norm_sqr, one_party_reduced, support_projector, Projector, StateVector};
use crate::tolerance::Tolerances;
use crate::{CMatrix, Complex64};

/// Outcome label of the null projector.
pub const NULL_OUTCOME: usize = 0;

#[derive(Debug, Clone)]
pub struct AgentMeasurement {
    null: Projector,
    outcomes: Vec<Projector>,
}

impl AgentMeasurement {
    /// Checks that the projectors are pairwise orthogonal and complete.
    pub fn new(null: Projector, outcomes: Vec<Projector>, tol: &Tolerances) -> Result<Self> {
        let d = null.dim();
        if outcomes.is_empty() {
            return Err(Error::InvalidArgument("an agent needs at least one outcome".into()));
        }
        if let Some(p) = outcomes.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch(format!("projector of dim {} next to dim {d}", p.dim())));
        }
        let all: Vec<&Projector> = std::iter::once(&null).chain(&outcomes).collect();
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                let ov = all[a].overlap(all[b]);
                if ov > tol.recon {
                    return Err(Error::InvalidArgument(format!(
                        "projectors {a} and {b} overlap ({ov:.3e})"
                    )));
                }
            }
        }
        let total = all.iter().fold(CMatrix::zeros(d, d), |acc, p| acc + p.matrix());
        let defect = frobenius(&(total - CMatrix::identity(d, d)));
        if defect > tol.recon {
            return Err(Error::InvalidArgument(format!(
                "projectors do not sum to the identity (defect {defect:.3e})"
            )));
        }
        Ok(Self { null, outcomes })
    }

    pub fn dim(&self) -> usize {
        self.null.dim()
    }

    pub fn null(&self) -> &Projector {
        &self.null
    }

    pub fn outcomes(&self) -> &[Projector] {
        &self.outcomes
    }

    /// Projector for a label (`0` = null).
    pub fn projector(&self, label: usize) -> &Projector {
        if label == NULL_OUTCOME {
            &self.null
        } else {
            &self.outcomes[label - 1]
        }
    }

    fn labels(&self) -> impl Iterator<Item = usize> {
        0..=self.outcomes.len()
    }
}

#[derive(Debug, Clone)]
pub struct MeasurementPlan {
    agents: Vec<AgentMeasurement>,
}

impl MeasurementPlan {
    pub fn new(agents: Vec<AgentMeasurement>) -> Result<Self> {
        if agents.len() < 2 {
            return Err(Error::InvalidArgument("a plan needs at least two agents".into()));
        }
        Ok(Self { agents })
    }

    /// Every agent measures in its computational basis; label `k+1` is `|k⟩`.
    pub fn computational(dims: &[usize]) -> Self {
        let agents = dims
            .iter()
            .map(|&d| AgentMeasurement {
                null: Projector::zero(d),
                outcomes: (0..d)
                    .map(|k| {
                        let mut m = CMatrix::zeros(d, d);
                        m[(k, k)] = Complex64::new(1.0, 0.0);
                        Projector::from_approximate(&m)
                    })
                    .collect(),
            })
            .collect();
        Self { agents }
    }

    pub fn agents(&self) -> &[AgentMeasurement] {
        &self.agents
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.agents.iter().map(AgentMeasurement::dim).collect()
    }

    fn check_state(&self, state: &StateVector) -> Result<()> {
        if self.dims() != state.dims() {
            return Err(Error::DimensionMismatch(format!(
                "plan dims {:?} do not match state dims {:?}",
                self.dims(),
                state.dims()
            )));
        }
        Ok(())
    }
}

/// Agent `i` measures `{P_⊥^i, P_1^i, …, P_L^i}` with `P_⊥^i` the rest of
/// the identity.
pub fn build_consensus_measurements(state: &StateVector, cert: &SchmidtProjectorSet) -> Result<MeasurementPlan> {
    if !cert.is_full_scope() {
        return Err(Error::InvalidCertificate("consensus needs a certificate over all parties".into()));
    }
    let check = verify_schmidt_projectors(state, cert);
    if !check.valid {
        return Err(Error::InvalidCertificate(check.diagnostics.join("; ")));
    }
    let tol = cert.tolerances();
    let agents = (0..state.num_parties())
        .map(|i| {
            let outcomes: Vec<Projector> = (0..cert.len()).map(|j| cert.projector(j, i).clone()).collect();
            let d = state.dims()[i];
            let covered = outcomes.iter().fold(CMatrix::zeros(d, d), |acc, p| acc + p.matrix());
            let null = Projector::from_approximate(&(CMatrix::identity(d, d) - covered));
            AgentMeasurement::new(null, outcomes, tol)
        })
        .collect::<Result<_>>()?;
    MeasurementPlan::new(agents)
}

/// Exact Born probabilities of outcome tuples above `τ_rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub entries: BTreeMap<Vec<usize>, f64>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn probability(&self, tuple: &[usize]) -> f64 {
        self.entries.get(tuple).copied().unwrap_or(0.0)
    }

    /// Mass on tuples that are constant and not ⊥ over `agents`.
    pub fn agreement_probability(&self, agents: &[usize]) -> f64 {
        self.entries
            .iter()
            .filter(|(t, _)| agreed_value(t, agents).is_some())
            .map(|(_, p)| p)
            .sum::<f64>()
            + 0.0 // an empty sum is -0.0
    }

    /// Mass on every other listed tuple. Exactly zero when no disagreeing
    /// tuple survives the cutoff.
    pub fn disagreement_probability(&self, agents: &[usize]) -> f64 {
        self.entries
            .iter()
            .filter(|(t, _)| agreed_value(t, agents).is_none())
            .map(|(_, p)| p)
            .sum::<f64>()
            + 0.0 // an empty sum is -0.0
    }
}

fn agreed_value(tuple: &[usize], agents: &[usize]) -> Option<usize> {
    let first = tuple[*agents.first()?];
    (first != NULL_OUTCOME && agents.iter().all(|&i| tuple[i] == first)).then_some(first)
}

pub fn joint_outcome_distribution(state: &StateVector, plan: &MeasurementPlan) -> Result<OutcomeDistribution> {
    let order: Vec<usize> = (0..state.num_parties()).collect();
    joint_outcome_distribution_ordered(state, plan, &order, &Tolerances::default())
}

/// Same table, computed by measuring agents in `order`.
pub fn joint_outcome_distribution_ordered(
    state: &StateVector,
    plan: &MeasurementPlan,
    order: &[usize],
    tol: &Tolerances,
) -> Result<OutcomeDistribution> {
    plan.check_state(state)?;
    let n = state.num_parties();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument("order must be a permutation of the agents".into()));
    }
    let mut entries = BTreeMap::new();
    let mut tuple = vec![0; n];
    descend(state.dims(), state.amps().to_vec(), plan, order, tol.rank, &mut tuple, &mut entries);
    Ok(OutcomeDistribution { entries })
}

fn descend(
    dims: &[usize],
    amps: Vec<Complex64>,
    plan: &MeasurementPlan,
    order: &[usize],
    cutoff: f64,
    tuple: &mut Vec<usize>,
    out: &mut BTreeMap<Vec<usize>, f64>,
) {
    let Some((&agent, rest)) = order.split_first() else {
        out.insert(tuple.clone(), norm_sqr(&amps));
        return;
    };
    let m = &plan.agents[agent];
    for label in m.labels() {
        let p = m.projector(label);
        if p.rank() == 0 {
            continue;
        }
        let next = apply_on_party(dims, &amps, agent, p.matrix());
        if norm_sqr(&next) <= cutoff {
            continue;
        }
        tuple[agent] = label;
        descend(dims, next, plan, rest, cutoff, tuple, out);
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Fail-stop agents (0-based): measured but silent.
    pub failed_agents: Vec<usize>,
    /// Validated and recorded; the protocol sends no messages to drop.
    pub channel_drop_probability: f64,
    /// Worker threads; results do not depend on it.
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            seed: 0,
            failed_agents: Vec::new(),
            channel_drop_probability: 0.0,
            workers: 1,
        }
    }
}

impl SimConfig {
    fn validate(&self, n: usize) -> Result<Vec<usize>> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.channel_drop_probability) {
            return Err(Error::InvalidArgument(format!(
                "drop probability {} is outside [0, 1]",
                self.channel_drop_probability
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        if let Some(a) = self.failed_agents.iter().find(|&&a| a >= n) {
            return Err(Error::InvalidArgument(format!("failed agent {} out of range 1..={n}", a + 1)));
        }
        let reporting: Vec<usize> = (0..n).filter(|i| !self.failed_agents.contains(i)).collect();
        if reporting.is_empty() {
            return Err(Error::InvalidArgument("at least one agent must not fail".into()));
        }
        Ok(reporting)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationEntry {
    pub outcome: Vec<usize>,
    pub exact: f64,
    pub empirical: f64,
    /// Binomial standard deviation of the empirical frequency.
    pub sigma: f64,
    pub within_3_sigma: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub trials: u64,
    pub seed: u64,
    pub failed_agents: Vec<usize>,
    pub reporting_agents: Vec<usize>,
    pub channel_drop_probability: f64,
    pub outcome_counts: BTreeMap<Vec<usize>, u64>,
    pub agreement_count: u64,
    pub agreement_frequency: f64,
    pub consensus_value_histogram: BTreeMap<usize, u64>,
    pub exact_distribution: OutcomeDistribution,
    pub exact_agreement_probability: f64,
    pub calibration: Vec<CalibrationEntry>,
}

impl TrialStats {
    pub fn calibrated(&self) -> bool {
        self.calibration.iter().all(|c| c.within_3_sigma)
    }
}

/// Samples `trials` runs of the protocol. Trial `t` draws from its own
/// stream of the seeded generator, so results do not depend on `workers`.
pub fn run_trials(state: &StateVector, plan: &MeasurementPlan, config: &SimConfig) -> Result<TrialStats> {
    plan.check_state(state)?;
    let n = state.num_parties();
    let reporting = config.validate(n)?;
    let exact = joint_outcome_distribution(state, plan)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let counts: BTreeMap<Vec<usize>, u64> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .fold(BTreeMap::new, |mut acc: BTreeMap<Vec<usize>, u64>, t| {
                *acc.entry(sample_trial(state, plan, config.seed, t)).or_default() += 1;
                acc
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            })
    });

    let mut agreement_count = 0;
    let mut histogram = BTreeMap::new();
    for (tuple, &c) in &counts {
        if let Some(v) = agreed_value(tuple, &reporting) {
            agreement_count += c;
            *histogram.entry(v).or_default() += c;
        }
    }
    let total = config.trials as f64;
    let mut outcomes: Vec<&Vec<usize>> = exact.entries.keys().chain(counts.keys()).collect();
    outcomes.sort();
    outcomes.dedup();
    let calibration = outcomes
        .into_iter()
        .map(|t| {
            let p = exact.probability(t);
            let empirical = counts.get(t).copied().unwrap_or(0) as f64 / total;
            let sigma = (p * (1.0 - p) / total).max(0.0).sqrt();
            CalibrationEntry {
                outcome: t.clone(),
                exact: p,
                empirical,
                sigma,
                within_3_sigma: (empirical - p).abs() <= (3.0 * sigma).max(1e-9),
            }
        })
        .collect();
    Ok(TrialStats {
        trials: config.trials,
        seed: config.seed,
        failed_agents: config.failed_agents.clone(),
        channel_drop_probability: config.channel_drop_probability,
        agreement_count,
        agreement_frequency: agreement_count as f64 / total,
        consensus_value_histogram: histogram,
        exact_agreement_probability: exact.agreement_probability(&reporting),
        reporting_agents: reporting,
        outcome_counts: counts,
        exact_distribution: exact,
        calibration,
    })
}

// sequential Born sampling: agent 1's marginal, collapse, agent 2, …
fn sample_trial(state: &StateVector, plan: &MeasurementPlan, seed: u64, trial: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let dims = state.dims();
    let mut amps = state.amps().to_vec();
    let mut tuple = Vec::with_capacity(dims.len());
    for (agent, m) in plan.agents.iter().enumerate() {
        let mut branches: Vec<(usize, Vec<Complex64>, f64)> = m
            .labels()
            .filter(|&l| m.projector(l).rank() > 0)
            .map(|l| {
                let v = apply_on_party(dims, &amps, agent, m.projector(l).matrix());
                let p = norm_sqr(&v);
                (l, v, p)
            })
            .collect();
        let mass: f64 = branches.iter().map(|b| b.2).sum();
        let mut u = rng.random::<f64>() * mass;
        let mut pick = branches.len() - 1;
        for (k, b) in branches.iter().enumerate() {
            if u < b.2 {
                pick = k;
                break;
            }
            u -= b.2;
        }
        // never pick a null branch through rounding
        while branches[pick].2 <= 0.0 && pick > 0 {
            pick -= 1;
        }
        let (label, v, p) = branches.swap_remove(pick);
        let scale = 1.0 / p.sqrt();
        amps = v.into_iter().map(|a| a * scale).collect();
        tuple.push(label);
    }
    tuple
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub samples: usize,
    pub seed: u64,
    /// Agents whose marginal has rank 1 and so admit no two nonnull outcomes.
    pub excluded_agents: Vec<usize>,
    pub min_disagreement: Option<f64>,
    pub mean_disagreement: Option<f64>,
    pub undetermined: bool,
    /// Disagreement of the certificate plan, if the state has one.
    pub certificate_disagreement: Option<f64>,
}

/// Random two-outcome plans (a random orthogonal split of each agent's
/// marginal support); reports the smallest exact disagreement seen.
pub fn necessity_probe(state: &StateVector, samples: usize, seed: u64) -> Result<ProbeReport> {
    let tol = Tolerances::default();
    let n = state.num_parties();
    let supports: Vec<Projector> = (0..n)
        .map(|i| support_projector(&one_party_reduced(state, i)?, tol.rank))
        .collect::<Result<_>>()?;
    let excluded: Vec<usize> = (0..n).filter(|&i| supports[i].rank() < 2).collect();
    let everyone: Vec<usize> = (0..n).collect();

    let report = analyze(state, &AnalysisOptions::default())?;
    let certificate_disagreement = match &report.certificate {
        Some(cert) => {
            let plan = build_consensus_measurements(state, cert)?;
            Some(joint_outcome_distribution(state, &plan)?.disagreement_probability(&everyone))
        }
        None => None,
    };

    let (min, mean) = if excluded.is_empty() && samples > 0 {
        let bases: Vec<CMatrix> = supports.iter().map(Projector::basis).collect();
        let values: Vec<f64> = (0..samples as u64)
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(s);
                let agents = bases
                    .iter()
                    .zip(&supports)
                    .map(|(b, supp)| random_split(b, supp, &mut rng, &tol))
                    .collect::<Result<_>>()?;
                let plan = MeasurementPlan::new(agents)?;
                Ok(joint_outcome_distribution(state, &plan)?.disagreement_probability(&everyone))
            })
            .collect::<Result<_>>()?;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        (Some(min), Some(values.iter().sum::<f64>() / values.len() as f64))
    } else {
        (None, None)
    };
    Ok(ProbeReport {
        samples,
        seed,
        excluded_agents: excluded,
        min_disagreement: min,
        mean_disagreement: mean,
        undetermined: report.is_undetermined(),
        certificate_disagreement,
    })
}

fn random_split<R: Rng>(basis: &CMatrix, supp: &Projector, rng: &mut R, tol: &Tolerances) -> Result<AgentMeasurement> {
    let r = basis.ncols();
    let rotated = basis * random_unitary(r, rng);
    let k = rng.random_range(1..r);
    let first = Projector::from_orthonormal_columns(&rotated.columns(0, k).into_owned());
    let second = Projector::from_orthonormal_columns(&rotated.columns(k, r - k).into_owned());
    AgentMeasurement::new(supp.complement(), vec![first, second], tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    fn cert_plan(s: &StateVector) -> MeasurementPlan {
        let r = analyze(s, &AnalysisOptions::default()).unwrap();
        build_consensus_measurements(s, r.certificate.as_ref().unwrap()).unwrap()
    }

    fn dist(entries: &[(&[usize], f64)]) -> BTreeMap<Vec<usize>, f64> {
        entries.iter().map(|(t, p)| (t.to_vec(), *p)).collect()
    }

    fn close(a: &OutcomeDistribution, b: &BTreeMap<Vec<usize>, f64>) -> bool {
        a.entries.len() == b.len()
            && a.entries.iter().all(|(k, v)| b.get(k).is_some_and(|w| (v - w).abs() < 1e-12))
    }

    #[test]
    fn ghz_plan_is_computational() {
        let plan = cert_plan(&states::ghz(3, 2).unwrap());
        for a in plan.agents() {
            assert_eq!(a.null().rank(), 0);
            assert_eq!(a.outcomes().len(), 2);
            assert!(a.outcomes().iter().all(|p| p.rank() == 1));
        }
    }

    #[test]
    fn truncated_support_gets_null_projector() {
        let s = states::completely_gsd(vec![3, 3, 3], &[0.6, 0.4]).unwrap();
        let plan = cert_plan(&s);
        for a in plan.agents() {
            assert_eq!(a.null().rank(), 1);
            assert!((a.null().matrix()[(2, 2)].re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unverified_certificate_is_rejected() {
        let ghz = states::ghz(3, 2).unwrap();
        let cert = analyze(&ghz, &AnalysisOptions::default()).unwrap().certificate.unwrap();
        let w = states::w(3).unwrap();
        assert!(matches!(build_consensus_measurements(&w, &cert), Err(Error::InvalidCertificate(_))));
    }

    #[test]
    fn exact_distribution_examples() {
        let ghz = states::ghz(3, 2).unwrap();
        let comp = MeasurementPlan::computational(&[2, 2, 2]);
        let d = joint_outcome_distribution(&ghz, &comp).unwrap();
        assert!(close(&d, &dist(&[(&[1, 1, 1], 0.5), (&[2, 2, 2], 0.5)])));
        let zero = states::product(vec![2, 2, 2]).unwrap();
        let d = joint_outcome_distribution(&zero, &comp).unwrap();
        assert!(close(&d, &dist(&[(&[1, 1, 1], 1.0)])));
        let w = states::w(3).unwrap();
        let d = joint_outcome_distribution(&w, &comp).unwrap();
        let third = 1.0 / 3.0;
        assert!(close(&d, &dist(&[(&[1, 1, 2], third), (&[1, 2, 1], third), (&[2, 1, 1], third)])));
        assert!((d.disagreement_probability(&[0, 1, 2]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_does_not_change_the_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = states::haar(vec![2, 3, 2], &mut rng).unwrap();
        let plan = MeasurementPlan::computational(&[2, 3, 2]);
        let tol = Tolerances::default();
        let a = joint_outcome_distribution_ordered(&s, &plan, &[0, 1, 2], &tol).unwrap();
        let b = joint_outcome_distribution_ordered(&s, &plan, &[2, 0, 1], &tol).unwrap();
        assert!(close(&a, &b.entries));
        assert!(joint_outcome_distribution_ordered(&s, &plan, &[0, 0, 1], &tol).is_err());
    }

    #[test]
    fn trials_examples() {
        let ghz = states::ghz(3, 2).unwrap();
        let plan = cert_plan(&ghz);
        let cfg = SimConfig { failed_agents: vec![1], ..SimConfig::default() };
        let stats = run_trials(&ghz, &plan, &cfg).unwrap();
        assert_eq!(stats.agreement_frequency, 1.0);
        assert_eq!(stats.reporting_agents, vec![0, 2]);
        assert_eq!(stats.outcome_counts.values().sum::<u64>(), 10_000);

        let w = states::w(3).unwrap();
        let stats = run_trials(&w, &MeasurementPlan::computational(&[2, 2, 2]), &SimConfig::default()).unwrap();
        assert_eq!(stats.agreement_frequency, 0.0);
        assert!(stats.calibrated());

        let zero = states::product(vec![2, 2, 2]).unwrap();
        let stats = run_trials(&zero, &MeasurementPlan::computational(&[2, 2, 2]), &SimConfig::default()).unwrap();
        assert_eq!(stats.agreement_frequency, 1.0);
        assert_eq!(stats.consensus_value_histogram.keys().collect::<Vec<_>>(), vec![&1]);
    }

    #[test]
    fn config_is_validated() {
        let ghz = states::ghz(3, 2).unwrap();
        let plan = MeasurementPlan::computational(&[2, 2, 2]);
        for cfg in [
            SimConfig { trials: 0, ..SimConfig::default() },
            SimConfig { channel_drop_probability: 1.5, ..SimConfig::default() },
            SimConfig { failed_agents: vec![0, 1, 2], ..SimConfig::default() },
            SimConfig { failed_agents: vec![3], ..SimConfig::default() },
            SimConfig { workers: 0, ..SimConfig::default() },
        ] {
            assert!(run_trials(&ghz, &plan, &cfg).is_err());
        }
        assert!(run_trials(&ghz, &MeasurementPlan::computational(&[2, 2, 3]), &SimConfig::default()).is_err());
    }

    #[test]
    fn worker_count_does_not_matter() {
        let w = states::w(3).unwrap();
        let plan = MeasurementPlan::computational(&[2, 2, 2]);
        let one = run_trials(&w, &plan, &SimConfig { trials: 2000, seed: 9, ..SimConfig::default() }).unwrap();
        let four = run_trials(&w, &plan, &SimConfig { trials: 2000, seed: 9, workers: 4, ..SimConfig::default() }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn probe_examples() {
        let w = necessity_probe(&states::w(3).unwrap(), 50, 1).unwrap();
        assert!(w.min_disagreement.unwrap() > 0.0);
        assert!(!w.undetermined && w.certificate_disagreement.is_none());
        let ghz = necessity_probe(&states::ghz(3, 2).unwrap(), 10, 1).unwrap();
        assert_eq!(ghz.certificate_disagreement, Some(0.0));
        let zero = necessity_probe(&states::product(vec![2, 2, 2]).unwrap(), 10, 1).unwrap();
        assert_eq!(zero.excluded_agents, vec![0, 1, 2]);
        assert!(zero.min_disagreement.is_none());
    }

    #[test]
    fn agent_measurement_validation() {
        let tol = Tolerances::default();
        let id = Projector::identity(2);
        assert!(AgentMeasurement::new(Projector::zero(2), vec![id.clone()], &tol).is_ok());
        assert!(AgentMeasurement::new(id.clone(), vec![id.clone()], &tol).is_err());
        assert!(AgentMeasurement::new(Projector::zero(2), vec![Projector::zero(2)], &tol).is_err());
    }
}
