use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::ExperimentPlan;
use crate::density::PairDensity;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_C0: u64 = 1;

fn plus_one() -> i8 {
    1
}

fn default_c0() -> u64 {
    DEFAULT_C0
}

/// Distribution of the source variable `λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lambda {
    /// `λ ∈ {0, …, n-1}` with the given exact weights.
    Finite { weights: Vec<Rational> },
    /// `λ` uniform on `[0, 2π)`.
    UniformAngle,
}

/// Deterministic `±1` response to `λ` for one setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Response {
    /// Outcome per finite `λ` value.
    Table(Vec<i8>),
    /// `sign · sgn(cos(λ - angle))`, with `sgn(0) = +1`.
    Threshold {
        angle: f64,
        #[serde(default = "plus_one")]
        sign: i8,
    },
}

/// Measurement-time interval `[start, end)` reserved for one category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Slot {
    pub category: usize,
    pub start: u64,
    pub end: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HiddenVariableModel {
    /// Station 1 measures `A(s, λ) = responses[s](λ)`, station 2 measures
    /// `station2_sign · responses[s](λ)`. Each setting is one random
    /// variable on the space of `λ`.
    SourceOnly {
        lambda: Lambda,
        responses: BTreeMap<String, Response>,
        #[serde(default = "plus_one")]
        station2_sign: i8,
    },
    /// Category `i` is measured only inside its slot, with outcome pairs
    /// drawn from `densities[i]` on a probability space of its own.
    TimeSlot {
        densities: Vec<PairDensity>,
        schedule: Vec<Slot>,
        #[serde(default = "default_c0")]
        c0: u64,
    },
}

pub(super) struct Trial {
    pub a: i8,
    pub b: i8,
    pub time: Option<f64>,
}

pub(super) enum Compiled {
    Finite {
        cumulative: Vec<f64>,
        tables: Vec<(Vec<i8>, Vec<i8>)>,
    },
    Angle {
        thresholds: Vec<((f64, i8), (f64, i8))>,
    },
    TimeSlot {
        categories: Vec<([f64; 4], u64, u64)>,
    },
}

fn cumulative(weights: &[Rational]) -> Vec<f64> {
    let mut acc = Rational::zero();
    let mut out: Vec<f64> = weights
        .iter()
        .map(|w| {
            acc += w;
            acc.to_f64()
        })
        .collect();
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

fn pick(cumulative: &[f64], u: f64) -> usize {
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

fn check_weights(weights: &[Rational], what: &str) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidModel(format!("{what}: no weights")));
    }
    if weights.iter().any(Rational::is_negative) {
        return Err(Error::InvalidModel(format!("{what}: negative weight")));
    }
    let total: Rational = weights.iter().sum();
    if total != Rational::one() {
        return Err(Error::InvalidModel(format!("{what}: weights sum to {total}")));
    }
    Ok(())
}

impl Compiled {
    pub(super) fn trial(&self, category: usize, u: u64, v: u64) -> Trial {
        match self {
            Compiled::Finite { cumulative, tables } => {
                let lambda = pick(cumulative, super::unit_f64(u));
                let (a, b) = &tables[category];
                Trial {
                    a: a[lambda],
                    b: b[lambda],
                    time: None,
                }
            }
            Compiled::Angle { thresholds } => {
                let lambda = super::unit_f64(u) * TAU;
                let respond = |(angle, sign): (f64, i8)| if (lambda - angle).cos() >= 0.0 { sign } else { -sign };
                let (a, b) = thresholds[category];
                Trial {
                    a: respond(a),
                    b: respond(b),
                    time: None,
                }
            }
            Compiled::TimeSlot { categories } => {
                let (cum, start, end) = &categories[category];
                let time = *start as f64 + super::unit_f64(u) * (end - start) as f64;
                let vertex = pick(cum, super::unit_f64(v));
                let (a, b) = crate::density::VERTICES[vertex];
                Trial { a, b, time: Some(time) }
            }
        }
    }

    pub(super) fn slot(&self, category: usize) -> Option<(u64, u64)> {
        match self {
            Compiled::TimeSlot { categories } => Some((categories[category].1, categories[category].2)),
            _ => None,
        }
    }
}

impl HiddenVariableModel {
    pub fn kind(&self) -> &'static str {
        match self {
            HiddenVariableModel::SourceOnly { .. } => "source_only",
            HiddenVariableModel::TimeSlot { .. } => "time_slot",
        }
    }

    pub fn station2_sign(&self) -> i8 {
        match self {
            HiddenVariableModel::SourceOnly { station2_sign, .. } => *station2_sign,
            HiddenVariableModel::TimeSlot { .. } => 1,
        }
    }

    /// Time-slot model with the given per-category densities in
    /// back-to-back slots of length `slot_len`.
    pub fn time_slots(densities: Vec<PairDensity>, slot_len: u64) -> Self {
        let schedule = (0..densities.len())
            .map(|i| Slot {
                category: i,
                start: i as u64 * slot_len,
                end: (i as u64 + 1) * slot_len,
            })
            .collect();
        HiddenVariableModel::TimeSlot {
            densities,
            schedule,
            c0: DEFAULT_C0,
        }
    }

    pub(super) fn compile(&self, plan: &ExperimentPlan) -> Result<Compiled> {
        match self {
            HiddenVariableModel::SourceOnly {
                lambda,
                responses,
                station2_sign,
            } => {
                if station2_sign.abs() != 1 {
                    return Err(Error::InvalidModel("station2_sign must be 1 or -1".into()));
                }
                let response = |s: &String| {
                    responses
                        .get(s)
                        .ok_or_else(|| Error::InvalidModel(format!("no response function for setting {s:?}")))
                };
                match lambda {
                    Lambda::Finite { weights } => {
                        check_weights(weights, "lambda")?;
                        let mut table_of = BTreeMap::new();
                        for (name, r) in responses {
                            match r {
                                Response::Table(t) if t.len() == weights.len() && t.iter().all(|x| x.abs() == 1) => {
                                    table_of.insert(name, t.clone());
                                }
                                _ => {
                                    return Err(Error::InvalidModel(format!(
                                        "setting {name:?} needs a table of {} entries, each 1 or -1",
                                        weights.len()
                                    )))
                                }
                            }
                        }
                        let tables = plan
                            .categories
                            .iter()
                            .map(|(s1, s2)| {
                                response(s1)?;
                                response(s2)?;
                                let b = table_of[s2].iter().map(|x| x * station2_sign).collect();
                                Ok((table_of[s1].clone(), b))
                            })
                            .collect::<Result<_>>()?;
                        Ok(Compiled::Finite {
                            cumulative: cumulative(weights),
                            tables,
                        })
                    }
                    Lambda::UniformAngle => {
                        let threshold = |s: &String| match response(s)? {
                            Response::Threshold { angle, sign } if sign.abs() == 1 && angle.is_finite() => {
                                Ok((*angle, *sign))
                            }
                            _ => Err(Error::InvalidModel(format!(
                                "setting {s:?} needs a threshold response with finite angle and sign ±1"
                            ))),
                        };
                        let thresholds = plan
                            .categories
                            .iter()
                            .map(|(s1, s2)| {
                                let a = threshold(s1)?;
                                let (angle, sign) = threshold(s2)?;
                                Ok((a, (angle, sign * station2_sign)))
                            })
                            .collect::<Result<_>>()?;
                        Ok(Compiled::Angle { thresholds })
                    }
                }
            }
            HiddenVariableModel::TimeSlot { densities, schedule, c0 } => {
                if *c0 == 0 {
                    return Err(Error::InvalidModel("c0 must be positive".into()));
                }
                for (i, s) in schedule.iter().enumerate() {
                    if s.end <= s.start || s.end - s.start < *c0 {
                        return Err(Error::InvalidModel(format!(
                            "slot for category {} is shorter than c0 = {c0}",
                            s.category
                        )));
                    }
                    for t in &schedule[i + 1..] {
                        if t.category == s.category {
                            return Err(Error::InvalidModel(format!("category {} scheduled twice", s.category)));
                        }
                        if !(s.end <= t.start || t.end <= s.start) {
                            return Err(Error::InvalidModel(format!(
                                "slots of categories {} and {} overlap",
                                s.category, t.category
                            )));
                        }
                    }
                }
                let categories = (0..plan.categories.len())
                    .map(|c| {
                        let slot = schedule
                            .iter()
                            .find(|s| s.category == c)
                            .ok_or(Error::UnscheduledCategory(c))?;
                        let g = densities
                            .get(c)
                            .ok_or_else(|| Error::InvalidModel(format!("no density for category {c}")))?;
                        let masses: Vec<Rational> = g.masses().into_iter().cloned().collect();
                        let cum: [f64; 4] = cumulative(&masses).try_into().expect("four vertices");
                        Ok((cum, slot.start, slot.end))
                    })
                    .collect::<Result<_>>()?;
                Ok(Compiled::TimeSlot { categories })
            }
        }
    }

    /// Exact expected covariance of the raw station outcomes per category
    /// (station-2 sign included); `None` for the angle model.
    pub fn expected_covariances(&self, plan: &ExperimentPlan) -> Result<Option<Vec<Rational>>> {
        match self {
            HiddenVariableModel::SourceOnly {
                lambda: Lambda::Finite { weights },
                ..
            } => {
                let Compiled::Finite { tables, .. } = self.compile(plan)? else {
                    unreachable!("finite lambda compiles to finite tables")
                };
                Ok(Some(
                    tables
                        .iter()
                        .map(|(a, b)| {
                            weights
                                .iter()
                                .zip(a.iter().zip(b))
                                .map(|(w, (x, y))| if x * y > 0 { w.clone() } else { -w })
                                .sum()
                        })
                        .collect(),
                ))
            }
            HiddenVariableModel::TimeSlot { densities, .. } => Ok(Some(
                (0..plan.categories.len())
                    .map(|c| densities.get(c).map(PairDensity::covariance).unwrap_or_default())
                    .collect(),
            )),
            _ => Ok(None),
        }
    }
}
