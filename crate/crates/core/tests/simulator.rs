mod common;

use std::collections::BTreeMap;

use bell_marginals::density::PairDensity;
use bell_marginals::rational::Rational;
use bell_marginals::sim::{analyze, empirical_covariances, run_experiment, HiddenVariableModel, Lambda, Response, Verdict};
use common::*;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn time_slot_densities(m: &HiddenVariableModel) -> Vec<PairDensity> {
    match m {
        HiddenVariableModel::TimeSlot { densities, .. } => densities.clone(),
        _ => unreachable!(),
    }
}

fn chi_square(observed: [u64; 4], density: &PairDensity, n: u64) -> f64 {
    observed
        .iter()
        .zip(density.masses())
        .map(|(&o, p)| {
            let e = p.to_f64() * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

#[test]
fn time_slot_counts_follow_configured_densities() {
    let model = load_model("frustrated_time_slot_model.json");
    let g = time_slot_densities(&model);
    let n = 1_000_000u64;
    let seeds = 10;
    let per_seed = ChiSquared::new(3.0).unwrap();
    let pooled = ChiSquared::new(3.0 * seeds as f64).unwrap();
    let mut totals = vec![0.0; g.len()];
    for seed in 0..seeds {
        let record = run_experiment(&model, &bell_plan(n, 500 + seed)).unwrap();
        for ((c, density), total) in record.categories.iter().zip(&g).zip(&mut totals) {
            let stat = chi_square(c.counts.as_array(), density, n);
            assert!(1.0 - per_seed.cdf(stat) > 1e-3, "seed {seed}: chi-square {stat}");
            *total += stat;
        }
    }
    for (k, total) in totals.iter().enumerate() {
        let p_value = 1.0 - pooled.cdf(*total);
        assert!(p_value > 1e-3, "category {k}: pooled chi-square {total}, p = {p_value}");
    }
}

#[test]
fn time_slot_marginals_are_uniform() {
    let model = load_model("frustrated_time_slot_model.json");
    let n = 200_000u64;
    let record = run_experiment(&model, &bell_plan(n, 3)).unwrap();
    let se = (0.25 / n as f64).sqrt();
    for c in &record.categories {
        let [pp, pm, mp, _] = c.counts.as_array();
        let first = (pp + pm) as f64 / n as f64;
        let second = (pp + mp) as f64 / n as f64;
        assert!((first - 0.5).abs() < 5.0 * se, "station 1 marginal {first}");
        assert!((second - 0.5).abs() < 5.0 * se, "station 2 marginal {second}");
    }
}

#[test]
fn random_source_only_models_never_violate() {
    let mut r = rng(9);
    for run in 0..20 {
        let model = random_source_only(&mut r, 16);
        let record = run_experiment(&model, &bell_plan(20_000, run)).unwrap();
        let report = analyze(&record).unwrap();
        assert_ne!(report.verdict, Verdict::Infeasible, "run {run}");
        // raw station outcomes, before the station-2 sign is undone
        let exact = model.expected_covariances(&bell_plan(1, 0)).unwrap().unwrap();
        for (e, x) in empirical_covariances(&record).unwrap().iter().zip(&exact) {
            assert!((e.estimate - x.to_f64()).abs() <= 5.0 * e.standard_error + 1e-12, "run {run}: {e:?} vs {x}");
        }
    }
}

#[test]
fn random_angle_models_never_violate() {
    let mut r = rng(10);
    for run in 0..10 {
        let responses: BTreeMap<String, Response> = ["a", "b", "c"]
            .iter()
            .map(|s| {
                let angle = r.gen_range(0.0..std::f64::consts::TAU);
                let sign = if r.gen_bool(0.5) { 1 } else { -1 };
                (s.to_string(), Response::Threshold { angle, sign })
            })
            .collect();
        let model = HiddenVariableModel::SourceOnly {
            lambda: Lambda::UniformAngle,
            responses,
            station2_sign: 1,
        };
        let report = analyze(&run_experiment(&model, &bell_plan(50_000, run)).unwrap()).unwrap();
        assert_ne!(report.verdict, Verdict::Infeasible, "run {run}");
    }
}

#[test]
fn shipped_source_only_model_matches_its_exact_covariances() {
    let model = load_model("source_only_model.json");
    let plan = bell_plan(200_000, 12);
    let exact = model.expected_covariances(&plan).unwrap().unwrap();
    assert_eq!(exact, vec![Rational::new(1, 4), Rational::new(1, 2), Rational::new(1, 4)]);
    let est = empirical_covariances(&run_experiment(&model, &plan).unwrap()).unwrap();
    for (e, x) in est.iter().zip(&exact) {
        assert!((e.estimate - x.to_f64()).abs() < 5.0 * e.standard_error);
    }
}

#[test]
fn record_json_round_trips() {
    let model = load_model("frustrated_time_slot_model.json");
    let record = run_experiment(&model, &bell_plan(1000, 1)).unwrap();
    let text = serde_json::to_string(&record).unwrap();
    let back: bell_marginals::sim::EmpiricalRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(back, record);
    assert_eq!(record.model_hash.len(), 64);
    assert!(record.slots_are_disjoint());
}
