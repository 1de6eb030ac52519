//! Monte Carlo runs of idealized two-station EPR experiments.
//!
//! A plan lists categories, each a pair of settings measured at stations 1
//! and 2. Two model classes are supported:
//!
//! * source-only models, where every outcome is a deterministic function of
//!   the setting and one source variable `λ` drawn independently of the
//!   settings, so all categories share one probability space;
//! * time-slot models, where each category is measured in its own disjoint
//!   time slot and its outcome pairs are drawn from a per-category density.
//!
//! Every trial draws its randomness from a ChaCha8 stream addressed by
//! `(seed, category, trial index)`, so the tallies do not depend on how the
//! work is split across threads.

mod analysis;
mod model;

use std::collections::BTreeSet;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use analysis::{analyze, analyze_with, empirical_covariances, AnalysisOptions, AnalysisReport, CovarianceEstimate, SlackStat, Verdict, SIGNIFICANCE};
pub use model::{HiddenVariableModel, Lambda, Response, Slot, DEFAULT_C0};

use crate::error::{Error, Result};

/// Trials handed to one task; fixed so that chunking never depends on the
/// thread count.
const CHUNK: u64 = 1 << 16;
/// 32-bit stream words consumed per trial (two `u64` draws).
const WORDS_PER_TRIAL: u128 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingLabel {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub settings: Vec<SettingLabel>,
    /// `(station-1 setting, station-2 setting)` per category
    pub categories: Vec<(String, String)>,
    pub trials: u64,
    pub seed: u64,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.categories.is_empty() {
            return Err(Error::InvalidPlan("at least one category is required".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidPlan("trials must be positive".into()));
        }
        let mut names = BTreeSet::new();
        for s in &self.settings {
            if !names.insert(s.name.as_str()) {
                return Err(Error::InvalidPlan(format!("setting {:?} declared twice", s.name)));
            }
            if let Some(d) = s.direction {
                let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm.is_nan() || (norm - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidPlan(format!("setting {:?} direction has norm {norm}", s.name)));
                }
            }
        }
        if !self.settings.is_empty() {
            for (a, b) in &self.categories {
                for s in [a, b] {
                    if !names.contains(s.as_str()) {
                        return Err(Error::InvalidPlan(format!("category uses undeclared setting {s:?}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Outcome tallies in vertex order `(+,+)`, `(+,-)`, `(-,+)`, `(-,-)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pp: u64,
    pub pm: u64,
    pub mp: u64,
    pub mm: u64,
}

impl Counts {
    pub fn from_array(c: [u64; 4]) -> Self {
        Counts {
            pp: c[0],
            pm: c[1],
            mp: c[2],
            mm: c[3],
        }
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.pp, self.pm, self.mp, self.mm]
    }

    pub fn total(&self) -> u64 {
        self.pp + self.pm + self.mp + self.mm
    }
}

/// Slot bounds and the observed range of measurement times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub start: u64,
    pub end: u64,
    pub first_time: f64,
    pub last_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryRecord {
    pub settings: (String, String),
    pub counts: Counts,
    pub total: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<SlotRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRecord {
    pub model_kind: String,
    pub model_hash: String,
    pub seed: u64,
    pub trials_per_category: u64,
    /// sign applied to station-2 outcomes relative to the setting's
    /// underlying variable; analysis multiplies covariances by it
    pub station2_sign: i8,
    pub categories: Vec<CategoryRecord>,
}

impl EmpiricalRecord {
    /// No two categories share a measurement-time interval and every
    /// recorded time lies in its own category's slot.
    pub fn slots_are_disjoint(&self) -> bool {
        let slots: Vec<&SlotRecord> = self.categories.iter().filter_map(|c| c.slot.as_ref()).collect();
        if slots.is_empty() {
            return true;
        }
        if slots.len() != self.categories.len() {
            return false;
        }
        let inside = slots
            .iter()
            .all(|s| s.first_time >= s.start as f64 && s.last_time < s.end as f64 && s.first_time <= s.last_time);
        let disjoint = slots
            .iter()
            .enumerate()
            .all(|(i, a)| slots[i + 1..].iter().all(|b| a.end <= b.start || b.end <= a.start));
        inside && disjoint
    }
}

pub fn model_hash(model: &HiddenVariableModel) -> String {
    let canonical = serde_json::to_vec(model).expect("model serializes");
    hex::encode(Sha256::digest(canonical))
}

#[derive(Clone, Copy)]
struct Tally {
    counts: [u64; 4],
    first: f64,
    last: f64,
}

impl Tally {
    fn empty() -> Self {
        Tally {
            counts: [0; 4],
            first: f64::INFINITY,
            last: f64::NEG_INFINITY,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.first = self.first.min(other.first);
        self.last = self.last.max(other.last);
        self
    }
}

fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn vertex_index(a: i8, b: i8) -> usize {
    usize::from(a < 0) << 1 | usize::from(b < 0)
}

/// Runs the plan on the current rayon pool.
pub fn run_experiment(model: &HiddenVariableModel, plan: &ExperimentPlan) -> Result<EmpiricalRecord> {
    plan.validate()?;
    let compiled = model.compile(plan)?;
    let base = ChaCha8Rng::seed_from_u64(plan.seed);

    let categories = plan
        .categories
        .iter()
        .enumerate()
        .map(|(c, settings)| {
            let chunks = plan.trials.div_ceil(CHUNK);
            let tally = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let start = chunk * CHUNK;
                    let end = (start + CHUNK).min(plan.trials);
                    let mut rng = base.clone();
                    rng.set_stream(c as u64);
                    rng.set_word_pos(start as u128 * WORDS_PER_TRIAL);
                    let mut t = Tally::empty();
                    for _ in start..end {
                        let u = rng.next_u64();
                        let v = rng.next_u64();
                        let trial = compiled.trial(c, u, v);
                        t.counts[vertex_index(trial.a, trial.b)] += 1;
                        if let Some(time) = trial.time {
                            t.first = t.first.min(time);
                            t.last = t.last.max(time);
                        }
                    }
                    t
                })
                .reduce(Tally::empty, Tally::merge);
            let counts = Counts::from_array(tally.counts);
            CategoryRecord {
                settings: settings.clone(),
                counts,
                total: counts.total(),
                slot: compiled.slot(c).map(|(start, end)| SlotRecord {
                    start,
                    end,
                    first_time: tally.first,
                    last_time: tally.last,
                }),
            }
        })
        .collect();

    Ok(EmpiricalRecord {
        model_kind: model.kind().to_string(),
        model_hash: model_hash(model),
        seed: plan.seed,
        trials_per_category: plan.trials,
        station2_sign: model.station2_sign(),
        categories,
    })
}

/// Runs the plan on a dedicated pool of `threads` workers.
pub fn run_experiment_with_threads(
    model: &HiddenVariableModel,
    plan: &ExperimentPlan,
    threads: usize,
) -> Result<EmpiricalRecord> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| run_experiment(model, plan))
}
