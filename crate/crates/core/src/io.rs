//! JSON formats and flag-list parsers.
//!
//! Parties, agents and Schmidt indices are 1-based in every external format
//! and 0-based in memory. Floats are written in scientific notation with 17
//! significant digits, which round-trips every `f64` exactly.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::consensus::{AgentMeasurement, MeasurementPlan, ProbeReport, TrialStats};
use crate::error::{Error, Result};
use crate::family::ReductionCheck;
use crate::schmidt::{AnalysisReport, DecisionPath, Verdict};
use crate::tensor::{norm_sqr, Projector, StateVector};
use crate::tolerance::Tolerances;
use crate::{CMatrix, Complex64};

/// Norm deviation beyond which loading a state logs a warning.
pub const NORM_WARNING: f64 = 1e-6;

/// An `f64` written as `d.dddddddddddddddde±x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

type SciMatrix = Vec<Vec<[Sci; 2]>>;

fn sci_complex(z: Complex64) -> [Sci; 2] {
    [Sci(z.re), Sci(z.im)]
}

fn sci_matrix(m: &CMatrix) -> SciMatrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| sci_complex(m[(r, c)])).collect())
        .collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

// ---------------------------------------------------------------- states

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFileIn {
    dims: Vec<usize>,
    amps: Vec<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub struct LoadedState {
    pub state: StateVector,
    /// Squared norm of the amplitudes as read.
    pub input_norm_sqr: f64,
    pub renormalized: bool,
    pub warnings: Vec<String>,
}

/// Parses `{"dims":[..],"amps":[[re,im],..]}`. Amplitudes are normalized
/// if their squared norm is off by more than `τ_norm`.
pub fn parse_state_json(text: &str) -> Result<LoadedState> {
    let raw: StateFileIn = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.dims.len() < 2 {
        return Err(Error::Parse(format!("field `dims`: need at least two parties, got {}", raw.dims.len())));
    }
    if let Some(p) = raw.dims.iter().position(|&d| d == 0) {
        return Err(Error::Parse(format!("field `dims[{p}]`: local dimension must be positive")));
    }
    let total = crate::tensor::checked_total_dim(&raw.dims).map_err(|e| Error::Parse(format!("field `dims`: {e}")))?;
    if raw.amps.len() != total {
        return Err(Error::Parse(format!(
            "field `amps`: dims {:?} need {total} amplitudes, found {}",
            raw.dims,
            raw.amps.len()
        )));
    }
    if let Some(p) = raw.amps.iter().position(|a| !a[0].is_finite() || !a[1].is_finite()) {
        return Err(Error::Parse(format!("field `amps[{p}]`: amplitude is not finite")));
    }
    let amps: Vec<Complex64> = raw.amps.iter().map(|a| Complex64::new(a[0], a[1])).collect();
    let n2 = norm_sqr(&amps);
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::Parse("field `amps`: amplitudes have zero or unbounded norm".into()));
    }
    let mut warnings = Vec::new();
    let renormalized = (n2 - 1.0).abs() > Tolerances::default().norm;
    let state = if renormalized {
        if (n2.sqrt() - 1.0).abs() > NORM_WARNING {
            let msg = format!("state norm {:.6e} deviates from 1; amplitudes were normalized", n2.sqrt());
            log::warn!("{msg}");
            warnings.push(msg);
        }
        StateVector::from_unnormalized(raw.dims, amps)
    } else {
        StateVector::new(raw.dims, amps)
    }
    .map_err(|e| Error::Parse(e.to_string()))?;
    Ok(LoadedState { state, input_norm_sqr: n2, renormalized, warnings })
}

/// One amplitude per line for diffability.
pub fn state_to_json(state: &StateVector) -> String {
    let dims: Vec<String> = state.dims().iter().map(usize::to_string).collect();
    let amps: Vec<String> = state
        .amps()
        .iter()
        .map(|z| format!("    [{:.16e}, {:.16e}]", z.re, z.im))
        .collect();
    format!("{{\n  \"dims\": [{}],\n  \"amps\": [\n{}\n  ]\n}}\n", dims.join(", "), amps.join(",\n"))
}

// --------------------------------------------------------------- reports

#[derive(Serialize)]
struct ProjectorOut {
    party: usize,
    rank: usize,
    matrix: SciMatrix,
}

#[derive(Serialize)]
struct CertificateOut {
    rows: Vec<Vec<ProjectorOut>>,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    verdict: Verdict,
    schmidt_number: usize,
    lower_bound: bool,
    path: DecisionPath,
    pivot: usize,
    scope: Vec<usize>,
    pivot_schmidt_coefficients: Vec<Sci>,
    partition: Option<Vec<Vec<usize>>>,
    certificate: Option<CertificateOut>,
    diagnostics: &'a [String],
    tolerances: &'a Tolerances,
}

pub fn report_to_json(report: &AnalysisReport) -> Result<String> {
    let certificate = report.certificate.as_ref().map(|cert| CertificateOut {
        rows: cert
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(i, p)| ProjectorOut { party: i + 1, rank: p.rank(), matrix: sci_matrix(p.matrix()) })
                    .collect()
            })
            .collect(),
    });
    let out = ReportOut {
        verdict: report.verdict,
        schmidt_number: report.schmidt_number,
        lower_bound: report.lower_bound,
        path: report.path,
        pivot: report.pivot + 1,
        scope: one_based(&report.scope),
        pivot_schmidt_coefficients: report.pivot_coeffs.iter().map(|&x| Sci(x)).collect(),
        partition: report.partition.as_ref().map(|p| p.iter().map(|b| one_based(b)).collect()),
        certificate,
        diagnostics: &report.diagnostics,
        tolerances: &report.tolerances,
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

#[derive(Serialize)]
struct ReductionOut {
    same: bool,
    max_residual: Sci,
    residuals: Vec<PartyResidual>,
}

#[derive(Serialize)]
struct PartyResidual {
    traced_party: usize,
    residual: Sci,
}

pub fn reduction_check_to_json(check: &ReductionCheck) -> Result<String> {
    let out = ReductionOut {
        same: check.same,
        max_residual: Sci(check.max_residual()),
        residuals: check
            .residuals
            .iter()
            .enumerate()
            .map(|(i, &r)| PartyResidual { traced_party: i + 1, residual: Sci(r) })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

// ----------------------------------------------------------------- plans

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanIn {
    agents: Vec<AgentIn>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentIn {
    #[serde(default)]
    null: Option<Vec<Vec<[f64; 2]>>>,
    outcomes: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize)]
struct PlanOut {
    agents: Vec<AgentOut>,
}

#[derive(Serialize)]
struct AgentOut {
    null: SciMatrix,
    outcomes: Vec<SciMatrix>,
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>], field: &str) -> Result<CMatrix> {
    let d = rows.len();
    if d == 0 {
        return Err(Error::Parse(format!("field `{field}`: empty matrix")));
    }
    if let Some(r) = rows.iter().position(|row| row.len() != d) {
        return Err(Error::Parse(format!("field `{field}[{r}]`: matrix must be {d}x{d}")));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("field `{field}`: entry is not finite")));
    }
    Ok(CMatrix::from_fn(d, d, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1])))
}

/// Parses `{"agents":[{"null":M|null,"outcomes":[M,..]},..]}` where `M` is a
/// list of rows of `[re,im]` pairs. A missing `null` is the complement of
/// the outcomes.
pub fn parse_plan_json(text: &str) -> Result<MeasurementPlan> {
    let raw: PlanIn = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let tol = Tolerances::default();
    let agents = raw
        .agents
        .iter()
        .enumerate()
        .map(|(a, agent)| {
            let at = |field: String| move |e: Error| Error::Parse(format!("field `agents[{a}].{field}`: {e}"));
            let outcomes = agent
                .outcomes
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let field = format!("agents[{a}].outcomes[{k}]");
                    Projector::new(matrix_from_rows(m, &field)?).map_err(at(format!("outcomes[{k}]")))
                })
                .collect::<Result<Vec<_>>>()?;
            let Some(d) = outcomes.first().map(Projector::dim) else {
                return Err(Error::Parse(format!("field `agents[{a}].outcomes`: no outcomes")));
            };
            if let Some(k) = outcomes.iter().position(|p| p.dim() != d) {
                return Err(Error::Parse(format!("field `agents[{a}].outcomes[{k}]`: dimension differs")));
            }
            let null = match &agent.null {
                Some(m) => Projector::new(matrix_from_rows(m, &format!("agents[{a}].null"))?).map_err(at("null".into()))?,
                None => {
                    let covered = outcomes.iter().fold(CMatrix::zeros(d, d), |acc, p| acc + p.matrix());
                    Projector::from_approximate(&(CMatrix::identity(d, d) - covered))
                }
            };
            AgentMeasurement::new(null, outcomes, &tol).map_err(at("outcomes".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    MeasurementPlan::new(agents).map_err(|e| Error::Parse(format!("field `agents`: {e}")))
}

pub fn plan_to_json(plan: &MeasurementPlan) -> Result<String> {
    let out = PlanOut {
        agents: plan
            .agents()
            .iter()
            .map(|a| AgentOut {
                null: sci_matrix(a.null().matrix()),
                outcomes: a.outcomes().iter().map(|p| sci_matrix(p.matrix())).collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

// ------------------------------------------------------------ simulation

#[derive(Serialize)]
struct CountOut<'a> {
    outcome: &'a [usize],
    count: u64,
}

#[derive(Serialize)]
struct ProbabilityOut<'a> {
    outcome: &'a [usize],
    probability: Sci,
}

#[derive(Serialize)]
struct ValueCount {
    value: usize,
    count: u64,
}

#[derive(Serialize)]
struct CalibrationOut<'a> {
    outcome: &'a [usize],
    exact: Sci,
    empirical: Sci,
    sigma: Sci,
    within_3_sigma: bool,
}

#[derive(Serialize)]
struct StatsOut<'a> {
    trials: u64,
    seed: u64,
    failed_agents: Vec<usize>,
    reporting_agents: Vec<usize>,
    channel_drop_probability: Sci,
    agreement_count: u64,
    agreement_frequency: Sci,
    exact_agreement_probability: Sci,
    calibrated: bool,
    consensus_value_histogram: Vec<ValueCount>,
    outcome_counts: Vec<CountOut<'a>>,
    exact_distribution: Vec<ProbabilityOut<'a>>,
    calibration: Vec<CalibrationOut<'a>>,
}

/// Outcome label `0` is the null outcome ⊥; agents are listed 1-based.
pub fn trial_stats_to_json(stats: &TrialStats) -> Result<String> {
    let out = StatsOut {
        trials: stats.trials,
        seed: stats.seed,
        failed_agents: one_based(&stats.failed_agents),
        reporting_agents: one_based(&stats.reporting_agents),
        channel_drop_probability: Sci(stats.channel_drop_probability),
        agreement_count: stats.agreement_count,
        agreement_frequency: Sci(stats.agreement_frequency),
        exact_agreement_probability: Sci(stats.exact_agreement_probability),
        calibrated: stats.calibrated(),
        consensus_value_histogram: stats
            .consensus_value_histogram
            .iter()
            .map(|(&value, &count)| ValueCount { value, count })
            .collect(),
        outcome_counts: stats.outcome_counts.iter().map(|(t, &count)| CountOut { outcome: t, count }).collect(),
        exact_distribution: stats
            .exact_distribution
            .entries
            .iter()
            .map(|(t, &p)| ProbabilityOut { outcome: t, probability: Sci(p) })
            .collect(),
        calibration: stats
            .calibration
            .iter()
            .map(|c| CalibrationOut {
                outcome: &c.outcome,
                exact: Sci(c.exact),
                empirical: Sci(c.empirical),
                sigma: Sci(c.sigma),
                within_3_sigma: c.within_3_sigma,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

#[derive(Serialize)]
struct ProbeOut {
    samples: usize,
    seed: u64,
    undetermined: bool,
    excluded_agents: Vec<usize>,
    min_disagreement: Option<Sci>,
    mean_disagreement: Option<Sci>,
    certificate_disagreement: Option<Sci>,
}

pub fn probe_report_to_json(report: &ProbeReport) -> Result<String> {
    let out = ProbeOut {
        samples: report.samples,
        seed: report.seed,
        undetermined: report.undetermined,
        excluded_agents: one_based(&report.excluded_agents),
        min_disagreement: report.min_disagreement.map(Sci),
        mean_disagreement: report.mean_disagreement.map(Sci),
        certificate_disagreement: report.certificate_disagreement.map(Sci),
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

// ----------------------------------------------------------------- lists

fn items(s: &str) -> Result<Vec<&str>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Parse(format!("`{s}`: expected a comma-separated list with no empty items")));
    }
    Ok(parts)
}

/// `"1,3"` → `[0, 2]`. Rejects 0, duplicates and empty items.
pub fn parse_party_list(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in items(s)? {
        let p: usize = item
            .parse()
            .map_err(|_| Error::Parse(format!("`{item}` is not a party number")))?;
        if p == 0 {
            return Err(Error::Parse("party numbers start at 1".into()));
        }
        if out.contains(&(p - 1)) {
            return Err(Error::Parse(format!("party {p} listed twice")));
        }
        out.push(p - 1);
    }
    Ok(out)
}

/// Positive integers, e.g. local dimensions.
pub fn parse_dims_list(s: &str) -> Result<Vec<usize>> {
    items(s)?
        .into_iter()
        .map(|item| match item.parse::<usize>() {
            Ok(d) if d > 0 => Ok(d),
            _ => Err(Error::Parse(format!("`{item}` is not a positive integer"))),
        })
        .collect()
}

/// Finite reals.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    items(s)?
        .into_iter()
        .map(|item| match item.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(Error::Parse(format!("`{item}` is not a finite number"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    #[test]
    fn state_round_trip_is_exact() {
        let w = states::w(3).unwrap();
        let back = parse_state_json(&state_to_json(&w)).unwrap();
        assert_eq!(back.state, w);
        assert!(!back.renormalized && back.warnings.is_empty());
    }

    #[test]
    fn unnormalized_input_is_normalized_with_warning() {
        let loaded = parse_state_json(r#"{"dims":[2,2],"amps":[[1,0],[0,0],[0,0],[1,0]]}"#).unwrap();
        assert!(loaded.renormalized);
        assert_eq!(loaded.warnings.len(), 1);
        assert!((loaded.state.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn malformed_states_name_the_problem() {
        let cases = [
            (r#"{"dims":[2,2],"amps":[[1,0]]}"#, "amps"),
            (r#"{"dims":[2],"amps":[[1,0],[0,0]]}"#, "dims"),
            (r#"{"dims":[2,0],"amps":[]}"#, "dims[1]"),
            (r#"{"dims":[2,2],"amps":[[0,0],[0,0],[0,0],[0,0]]}"#, "amps"),
            ("{\"dims\":[2,2],\n\"amps\":[[1,0],[0,0],[0,0],[1]]}", "line 2"),
            (r#"{"dims":[2,2]}"#, "amps"),
            (r#"{"dims":[2,2],"amps":[],"x":1}"#, "unknown field"),
        ];
        for (text, needle) in cases {
            let err = parse_state_json(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{err} should mention {needle}");
        }
    }

    #[test]
    fn sci_floats() {
        assert_eq!(serde_json::to_string(&Sci(0.5)).unwrap(), "5.0000000000000000e-1");
        assert_eq!(serde_json::to_string(&Sci(f64::NAN)).unwrap(), "null");
        let x = std::f64::consts::PI;
        let s = serde_json::to_string(&Sci(x)).unwrap();
        assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn plan_round_trip() {
        let plan = MeasurementPlan::computational(&[2, 3]);
        let back = parse_plan_json(&plan_to_json(&plan).unwrap()).unwrap();
        assert_eq!(back.dims(), vec![2, 3]);
        assert_eq!(back.agents()[1].outcomes().len(), 3);
    }

    #[test]
    fn plan_without_null_is_completed() {
        let text = r#"{"agents":[
            {"outcomes":[[[[1,0],[0,0]],[[0,0],[0,0]]]]},
            {"null":null,"outcomes":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}
        ]}"#;
        let plan = parse_plan_json(text).unwrap();
        assert_eq!(plan.agents()[0].null().rank(), 1);
        assert_eq!(plan.agents()[1].null().rank(), 0);
    }

    #[test]
    fn bad_plans_are_rejected() {
        for text in [
            r#"{"agents":[]}"#,
            r#"{"agents":[{"outcomes":[]},{"outcomes":[]}]}"#,
            r#"{"agents":[{"outcomes":[[[[2,0]]]]},{"outcomes":[[[[1,0]]]]}]}"#,
            r#"{"agents":[{"outcomes":[[[[1,0],[0,0]]]]},{"outcomes":[[[[1,0]]]]}]}"#,
            r#"{"agents":[{"outcomes":[[[[1,0]]],[[[1,0]]]]},{"outcomes":[[[[1,0]]]]}]}"#,
        ] {
            assert!(parse_plan_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!(parse_party_list("1,3").unwrap(), vec![0, 2]);
        assert_eq!(parse_party_list(" 2 , 1 ").unwrap(), vec![1, 0]);
        for bad in ["", "0", "1,,2", "1,1", "x", "-1"] {
            assert!(parse_party_list(bad).is_err(), "{bad}");
        }
        assert_eq!(parse_real_list("0,3.14159265").unwrap(), vec![0.0, 3.14159265]);
        assert!(parse_real_list("1,nan").is_err());
        assert!(parse_real_list("inf").is_err());
        assert_eq!(parse_dims_list("3,3,3").unwrap(), vec![3, 3, 3]);
        assert!(parse_dims_list("3,0").is_err());
    }

    #[test]
    fn report_json_is_one_based() {
        let r = crate::schmidt::analyze(&states::ghz(3, 2).unwrap(), &Default::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report_to_json(&r).unwrap()).unwrap();
        assert_eq!(v["verdict"], "undetermined");
        assert_eq!(v["path"], "qubit-fastpath");
        assert_eq!(v["schmidt_number"], 2);
        assert_eq!(v["scope"], serde_json::json!([1, 2, 3]));
        assert_eq!(v["certificate"]["rows"].as_array().unwrap().len(), 2);
        assert_eq!(v["certificate"]["rows"][0][2]["party"], 3);
    }
}
