//! Membership tests for the covariance tetrahedron, the six Bell
//! inequalities and the CHSH polytope.
//!
//! Every check reports the exact slack of every inequality it evaluates.
//! A slack is `rhs - lhs`, negative iff the inequality fails.

use serde::{Deserialize, Serialize};

use crate::density::CovarianceTriple;
use crate::error::Result;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slack {
    pub id: String,
    pub slack: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub satisfied: bool,
    pub slacks: Vec<Slack>,
    pub violations: Vec<Slack>,
}

impl InequalityReport {
    fn from_slacks(slacks: Vec<Slack>) -> Self {
        let violations: Vec<Slack> = slacks.iter().filter(|s| s.slack.is_negative()).cloned().collect();
        InequalityReport {
            satisfied: violations.is_empty(),
            slacks,
            violations,
        }
    }

    pub fn slack(&self, id: &str) -> Option<&Rational> {
        self.slacks.iter().find(|s| s.id == id).map(|s| &s.slack)
    }

    pub fn min_slack(&self) -> Option<&Rational> {
        self.slacks.iter().map(|s| &s.slack).min()
    }
}

fn slack(id: impl Into<String>, value: Rational) -> Slack {
    Slack { id: id.into(), slack: value }
}

/// The four tetrahedron expressions `1 ± σ₁ ± σ₂ ± σ₃` with an even number
/// of minus signs, ids `T1`..`T4`.
pub fn tetrahedron_check(s: &CovarianceTriple) -> InequalityReport {
    InequalityReport::from_slacks(
        tetrahedron_slacks(s)
            .into_iter()
            .enumerate()
            .map(|(i, v)| slack(format!("T{}", i + 1), v))
            .collect(),
    )
}

pub(crate) fn tetrahedron_slacks(s: &CovarianceTriple) -> [Rational; 4] {
    let [s1, s2, s3] = s.sigma();
    let one = Rational::one();
    [
        &one + s1 + s2 + s3,
        &one + s1 - s2 - s3,
        &one - s1 + s2 - s3,
        &one - s1 - s2 + s3,
    ]
}

/// The six Bell inequalities `|σᵢ ∓ σⱼ| ≤ 1 ∓ σₖ`, ids `B1`..`B6`.
pub fn bell_six_check(s: &CovarianceTriple) -> InequalityReport {
    let [s1, s2, s3] = s.sigma();
    let one = Rational::one();
    // (i, j, k) in reading order, each with its minus then plus form
    let triples = [(s1, s2, s3), (s1, s3, s2), (s2, s3, s1)];
    let mut slacks = Vec::with_capacity(6);
    for (i, j, k) in triples {
        slacks.push((&one - k) - (i - j).abs());
        slacks.push((&one + k) - (i + j).abs());
    }
    InequalityReport::from_slacks(
        slacks
            .into_iter()
            .enumerate()
            .map(|(n, v)| slack(format!("B{}", n + 1), v))
            .collect(),
    )
}

/// Covariances for the four setting pairs `(a₁,b₁)`, `(a₁,b₂)`, `(a₂,b₁)`,
/// `(a₂,b₂)` of a two-settings-per-side experiment.
///
/// Components outside `[-1, 1]` are representable; [`chsh_check`] reports
/// them as cube-bound violations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[Rational; 4]", into = "[Rational; 4]")]
pub struct CovarianceQuad {
    sigma: [Rational; 4],
}

impl CovarianceQuad {
    pub fn new(s_ab1: Rational, s_ab2: Rational, s_a2b1: Rational, s_a2b2: Rational) -> Self {
        CovarianceQuad {
            sigma: [s_ab1, s_ab2, s_a2b1, s_a2b2],
        }
    }

    pub fn sigma(&self) -> &[Rational; 4] {
        &self.sigma
    }

    pub fn in_cube(&self) -> bool {
        self.sigma.iter().all(|s| s.abs() <= Rational::one())
    }
}

impl From<[Rational; 4]> for CovarianceQuad {
    fn from(sigma: [Rational; 4]) -> Self {
        CovarianceQuad { sigma }
    }
}

impl From<CovarianceQuad> for [Rational; 4] {
    fn from(q: CovarianceQuad) -> Self {
        q.sigma
    }
}

/// Sign patterns of the CHSH forms; `C(n)` carries its single minus sign
/// on component `4 - n`.
pub const CHSH_SIGNS: [[i8; 4]; 4] = [[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]];

/// `|Σ ±σ| ≤ 2` for each pattern with one minus sign (`C1`..`C4`), then
/// `|σᵢ| ≤ 1` (`cube:1`..`cube:4`).
pub fn chsh_check(s: &CovarianceQuad) -> InequalityReport {
    let two = Rational::from_integer(2);
    let mut slacks = Vec::with_capacity(8);
    for (n, signs) in CHSH_SIGNS.iter().enumerate() {
        let value: Rational = s
            .sigma
            .iter()
            .zip(signs)
            .map(|(x, &sg)| if sg > 0 { x.clone() } else { -x })
            .sum();
        slacks.push(slack(format!("C{}", n + 1), &two - value.abs()));
    }
    for (n, x) in s.sigma.iter().enumerate() {
        slacks.push(slack(format!("cube:{}", n + 1), Rational::one() - x.abs()));
    }
    InequalityReport::from_slacks(slacks)
}

/// Parses a comma-separated list of rationals, e.g. `"1/2,1/2,-1/2"`.
pub fn parse_rational_list(input: &str) -> Result<Vec<Rational>> {
    input.split(',').map(|t| t.parse()).collect()
}
