use serde::{Deserialize, Serialize};

use super::EmpiricalRecord;
use crate::density::CovarianceTriple;
use crate::error::{Error, Result};
use crate::joint::{chsh_reconstruct, reconstruct_joint, JointDensity3, JointDensity4, ChshOutcome};
use crate::polytope::{bell_six_check, chsh_check, tetrahedron_check, CovarianceQuad, InequalityReport};
use crate::rational::Rational;

/// Violations smaller than this many combined standard errors are treated
/// as sampling noise.
pub const SIGNIFICANCE: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEstimate {
    pub estimate: f64,
    pub standard_error: f64,
}

/// `(n_pp - n_pm - n_mp + n_mm) / N` and `√((1 - estimate²) / N)` per
/// category, on the raw station outcomes.
pub fn empirical_covariances(r: &EmpiricalRecord) -> Result<Vec<CovarianceEstimate>> {
    r.categories
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = c.counts.total();
            if n == 0 {
                return Err(Error::EmptyCategory(i));
            }
            let signed = c.counts.pp as i128 - c.counts.pm as i128 - c.counts.mp as i128 + c.counts.mm as i128;
            let estimate = signed as f64 / n as f64;
            let standard_error = ((1.0 - estimate * estimate).max(0.0) / n as f64).sqrt();
            Ok(CovarianceEstimate {
                estimate,
                standard_error,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The rounded covariances lie in the polytope.
    Feasible,
    /// Some inequality fails by more than [`SIGNIFICANCE`] combined
    /// standard errors.
    Infeasible,
    /// The rounded point is outside, but only within sampling noise.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackStat {
    pub id: String,
    pub slack: Rational,
    pub combined_standard_error: f64,
    /// slack in units of the combined standard error
    pub z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// `"bell"` for three categories, `"chsh"` for four
    pub kind: String,
    pub estimates: Vec<CovarianceEstimate>,
    pub rounded: Vec<Rational>,
    pub max_denominator: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tetrahedron: Option<InequalityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bell_six: Option<InequalityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chsh: Option<InequalityReport>,
    pub slack_stats: Vec<SlackStat>,
    pub exact_feasible: bool,
    pub significant_violation: bool,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness3: Option<JointDensity3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness4: Option<JointDensity4>,
}

impl AnalysisReport {
    pub fn stat(&self, id: &str) -> Option<&SlackStat> {
        self.slack_stats.iter().find(|s| s.id == id)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    pub max_denominator: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { max_denominator: 10_000 }
    }
}

pub fn analyze(r: &EmpiricalRecord) -> Result<AnalysisReport> {
    analyze_with(r, AnalysisOptions::default())
}

/// Interprets three categories as `(AB, AC, BC)` and four as
/// `(A₁B₁, A₁B₂, A₂B₁, A₂B₂)`, rounds the covariances to rationals and runs
/// the exact checks on them.
pub fn analyze_with(r: &EmpiricalRecord, opts: AnalysisOptions) -> Result<AnalysisReport> {
    let n = r.categories.len();
    if n != 3 && n != 4 {
        return Err(Error::WrongCategoryCount(n));
    }
    let sign = f64::from(r.station2_sign);
    let estimates: Vec<CovarianceEstimate> = empirical_covariances(r)?
        .into_iter()
        .map(|e| CovarianceEstimate {
            estimate: e.estimate * sign,
            standard_error: e.standard_error,
        })
        .collect();
    let rounded = estimates
        .iter()
        .map(|e| Rational::approximate(e.estimate, opts.max_denominator))
        .collect::<Result<Vec<_>>>()?;
    let se: Vec<f64> = estimates.iter().map(|e| e.standard_error).collect();
    let all_se = se.iter().map(|s| s * s).sum::<f64>().sqrt();

    let (tetrahedron, bell_six, chsh, witness3, witness4, exact_feasible, stats) = if n == 3 {
        let s = CovarianceTriple::new(rounded[0].clone(), rounded[1].clone(), rounded[2].clone())?;
        let t = tetrahedron_check(&s);
        let b = bell_six_check(&s);
        if t.satisfied != b.satisfied {
            return Err(Error::Internal("tetrahedron and Bell verdicts disagree".into()));
        }
        let witness = reconstruct_joint(&s, &Rational::zero()).ok();
        if witness.is_some() != t.satisfied {
            return Err(Error::Internal("reconstruction disagrees with the tetrahedron".into()));
        }
        // every tetrahedron and Bell expression involves all three covariances
        let stats: Vec<SlackStat> = t.slacks.iter().chain(&b.slacks).map(|sl| stat(sl.id.clone(), &sl.slack, all_se)).collect();
        let feasible = t.satisfied;
        (Some(t), Some(b), None, witness, None, feasible, stats)
    } else {
        let q = CovarianceQuad::from([rounded[0].clone(), rounded[1].clone(), rounded[2].clone(), rounded[3].clone()]);
        let c = chsh_check(&q);
        let lp = chsh_reconstruct(&q)?;
        if lp.is_feasible() != c.satisfied {
            return Err(Error::Internal("CHSH check and LP disagree".into()));
        }
        let stats: Vec<SlackStat> = c
            .slacks
            .iter()
            .map(|sl| {
                let e = match sl.id.strip_prefix("cube:") {
                    Some(i) => se[i.parse::<usize>().expect("cube index") - 1],
                    None => all_se,
                };
                stat(sl.id.clone(), &sl.slack, e)
            })
            .collect();
        let witness = match lp {
            ChshOutcome::Witness(j) => Some(*j),
            ChshOutcome::Infeasible { .. } => None,
        };
        let feasible = c.satisfied;
        (None, None, Some(c), None, witness, feasible, stats)
    };

    let significant_violation = stats
        .iter()
        .any(|s| s.slack.is_negative() && s.slack.to_f64() < -SIGNIFICANCE * s.combined_standard_error);
    let verdict = match (exact_feasible, significant_violation) {
        (true, _) => Verdict::Feasible,
        (false, true) => Verdict::Infeasible,
        (false, false) => Verdict::Inconclusive,
    };

    Ok(AnalysisReport {
        kind: if n == 3 { "bell" } else { "chsh" }.to_string(),
        estimates,
        rounded,
        max_denominator: opts.max_denominator,
        tetrahedron,
        bell_six,
        chsh,
        slack_stats: stats,
        exact_feasible,
        significant_violation,
        verdict,
        witness3,
        witness4,
    })
}

fn stat(id: String, slack: &Rational, combined: f64) -> SlackStat {
    SlackStat {
        id,
        slack: slack.clone(),
        combined_standard_error: combined,
        z: (combined > 0.0).then(|| slack.to_f64() / combined),
    }
}
