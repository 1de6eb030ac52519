//! Self-checking reports shared by the command-line tool and the C API.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::complex::{solve_complex_with_cap, verify_certificate, FeasibilityResult, MarginalComplex, DEFAULT_ATOM_CAP};
use crate::density::{CovarianceTriple, PairDensity};
use crate::error::{Error, Result};
use crate::joint::{chsh_equation_ids, chsh_reconstruct, feasible_t_interval, reconstruct_joint, ChshOutcome, JointDensity3, TInterval};
use crate::polytope::{bell_six_check, chsh_check, tetrahedron_check, CovarianceQuad, InequalityReport};
use crate::rational::Rational;
use crate::sim::{analyze_with, run_experiment, AnalysisOptions, AnalysisReport, EmpiricalRecord, ExperimentPlan, HiddenVariableModel, Verdict};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityTriple {
    f1: PairDensity,
    f2: PairDensity,
    f3: PairDensity,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SigmaList {
    sigma: Vec<Rational>,
}

fn rationals(v: Value, n: usize) -> Result<Vec<Rational>> {
    let list: Vec<Rational> = if v.is_array() {
        serde_json::from_value(v)?
    } else {
        serde_json::from_value::<SigmaList>(v)?.sigma
    };
    if list.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} covariances, got {}", list.len())));
    }
    Ok(list)
}

/// Accepts `{"f1", "f2", "f3"}` pair densities, `{"sigma": [..]}` or a bare
/// array of three rationals.
pub fn parse_triple(v: Value) -> Result<CovarianceTriple> {
    if v.get("f1").is_some() {
        let d: DensityTriple = serde_json::from_value(v)?;
        return CovarianceTriple::from_densities(&d.f1, &d.f2, &d.f3);
    }
    let [a, b, c]: [Rational; 3] = rationals(v, 3)?.try_into().expect("length checked");
    CovarianceTriple::new(a, b, c)
}

/// Accepts `{"sigma": [..]}` or a bare array of four rationals.
pub fn parse_quad(v: Value) -> Result<CovarianceQuad> {
    let arr: [Rational; 4] = rationals(v, 4)?.try_into().expect("length checked");
    Ok(CovarianceQuad::from(arr))
}

fn lp_json<S: Serializer>(lp: &Option<FeasibilityResult>, s: S) -> std::result::Result<S::Ok, S::Error> {
    lp.as_ref().map(FeasibilityResult::to_json).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub covariances: [Rational; 3],
    pub tetrahedron: InequalityReport,
    pub bell_six: InequalityReport,
    #[serde(serialize_with = "lp_json")]
    pub lp: Option<FeasibilityResult>,
    pub feasible: bool,
    /// joint at `t = 0`
    pub witness: Option<JointDensity3>,
    pub t_interval: Option<TInterval>,
}

/// Tetrahedron, six Bell inequalities, closed-form reconstruction and
/// (unless skipped) the LP; any disagreement is an internal error.
pub fn check(s: &CovarianceTriple, skip_lp: bool) -> Result<CheckReport> {
    let tetrahedron = tetrahedron_check(s);
    let bell_six = bell_six_check(s);
    let t_interval = feasible_t_interval(s);
    let witness = reconstruct_joint(s, &Rational::zero()).ok();
    let lp = if skip_lp {
        None
    } else {
        Some(solve_complex_with_cap(&MarginalComplex::from_covariances(s), DEFAULT_ATOM_CAP)?)
    };
    let feasible = tetrahedron.satisfied;
    let agree = bell_six.satisfied == feasible
        && t_interval.is_some() == feasible
        && witness.is_some() == feasible
        && lp.as_ref().is_none_or(|r| r.is_feasible() == feasible);
    if !agree {
        return Err(Error::Internal(format!(
            "verdicts disagree at {:?}: tetrahedron {}, bell {}, t-interval {}, lp {:?}",
            s.sigma(),
            feasible,
            bell_six.satisfied,
            t_interval.is_some(),
            lp.as_ref().map(FeasibilityResult::is_feasible)
        )));
    }
    Ok(CheckReport {
        covariances: s.sigma().clone(),
        tetrahedron,
        bell_six,
        lp,
        feasible,
        witness,
        t_interval,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChshReport {
    pub covariances: [Rational; 4],
    pub chsh: InequalityReport,
    #[serde(serialize_with = "chsh_lp_json")]
    pub lp: Option<ChshOutcome>,
    pub feasible: bool,
    /// satisfied with some slack exactly zero
    pub boundary: bool,
}

fn chsh_lp_json<S: Serializer>(lp: &Option<ChshOutcome>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let v = lp.as_ref().map(|o| match o {
        ChshOutcome::Witness(j) => json!({"feasible": true, "witness": j}),
        ChshOutcome::Infeasible { certificate, .. } => {
            let cert: Map<String, Value> = chsh_equation_ids()
                .into_iter()
                .zip(certificate)
                .map(|(id, y)| (id, Value::String(y.to_string())))
                .collect();
            json!({"feasible": false, "certificate": cert})
        }
    });
    v.serialize(s)
}

pub fn chsh(s: &CovarianceQuad, skip_lp: bool) -> Result<ChshReport> {
    let report = chsh_check(s);
    let lp = if skip_lp { None } else { Some(chsh_reconstruct(s)?) };
    if lp.as_ref().is_some_and(|o| o.is_feasible() != report.satisfied) {
        return Err(Error::Internal(format!("CHSH inequalities and LP disagree at {:?}", s.sigma())));
    }
    let feasible = report.satisfied;
    let boundary = feasible && report.min_slack().is_some_and(Rational::is_zero);
    Ok(ChshReport {
        covariances: s.sigma().clone(),
        chsh: report,
        lp,
        feasible,
        boundary,
    })
}

/// Solves the complex; an infeasibility certificate is re-verified against
/// the original tables and the output gains `"verified": true`.
pub fn vorobev(c: &MarginalComplex, atom_cap: u64) -> Result<(FeasibilityResult, Value)> {
    let result = solve_complex_with_cap(c, atom_cap)?;
    let mut v = result.to_json();
    if let FeasibilityResult::Certificate(cert) = &result {
        if !verify_certificate(c, &cert.coefficients)? {
            return Err(Error::Internal("emitted certificate does not verify".into()));
        }
        v["verified"] = Value::Bool(true);
    }
    Ok((result, v))
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    pub record: EmpiricalRecord,
    pub analysis: AnalysisReport,
}

impl SimulationReport {
    /// Exit-status view: only a significant violation counts as infeasible.
    pub fn feasible(&self) -> bool {
        self.analysis.verdict != Verdict::Infeasible
    }
}

pub fn simulate(model: &HiddenVariableModel, plan: &ExperimentPlan, max_denominator: u64) -> Result<SimulationReport> {
    let record = run_experiment(model, plan)?;
    let analysis = analyze_with(&record, AnalysisOptions { max_denominator })?;
    Ok(SimulationReport { record, analysis })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    #[serde(default)]
    settings: Vec<crate::sim::SettingLabel>,
    categories: Vec<(String, String)>,
    trials: u64,
    seed: Option<u64>,
}

/// Parses a plan whose seed and trial count may be overridden; a plan with
/// no seed is rejected unless one is supplied.
pub fn parse_plan(text: &str, seed: Option<u64>, trials: Option<u64>) -> Result<ExperimentPlan> {
    let raw: RawPlan = serde_json::from_str(text)?;
    let seed = seed
        .or(raw.seed)
        .ok_or_else(|| Error::InvalidPlan("missing field \"seed\"".into()))?;
    let plan = ExperimentPlan {
        settings: raw.settings,
        categories: raw.categories,
        trials: trials.unwrap_or(raw.trials),
        seed,
    };
    plan.validate()?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn triple_forms() {
        let a = parse_triple(json!(["1/2", "1/2", "-1/2"])).unwrap();
        let b = parse_triple(json!({"sigma": ["1/2", "1/2", "-1/2"]})).unwrap();
        let c = parse_triple(json!({
            "f1": {"pp": "3/8", "pm": "1/8", "mp": "1/8", "mm": "3/8"},
            "f2": {"pp": "3/8", "pm": "1/8", "mp": "1/8", "mm": "3/8"},
            "f3": {"pp": "1/8", "pm": "3/8", "mp": "3/8", "mm": "1/8"}
        }))
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(parse_triple(json!(["1/2"])).is_err());
        assert!(parse_triple(json!({"sigma": ["0", "0", "0"], "extra": 1})).is_err());
    }

    #[test]
    fn check_report_shape() {
        let r = check(&CovarianceTriple::new(q(1, 2), q(1, 2), q(-1, 2)).unwrap(), false).unwrap();
        assert!(!r.feasible);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["lp"]["feasible"], false);
        assert!(v["witness"].is_null());
        let r = check(&CovarianceTriple::new(q(0, 1), q(0, 1), q(0, 1)).unwrap(), true).unwrap();
        assert!(r.feasible && r.lp.is_none());
    }

    #[test]
    fn chsh_boundary_flag() {
        let r = chsh(&CovarianceQuad::new(q(1, 2), q(1, 2), q(1, 2), q(-1, 2)), false).unwrap();
        assert!(r.feasible && r.boundary);
        let r = chsh(&CovarianceQuad::new(q(0, 1), q(0, 1), q(0, 1), q(0, 1)), false).unwrap();
        assert!(r.feasible && !r.boundary);
    }

    #[test]
    fn plan_seed_override() {
        let text = r#"{"categories": [["a", "b"]], "trials": 10}"#;
        assert!(matches!(parse_plan(text, None, None), Err(Error::InvalidPlan(_))));
        let p = parse_plan(text, Some(4), Some(20)).unwrap();
        assert_eq!((p.seed, p.trials), (4, 20));
    }
}
