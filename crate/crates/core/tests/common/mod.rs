#![allow(dead_code)]

use std::collections::BTreeMap;

use bell_marginals::density::{CovarianceTriple, PairDensity};
use bell_marginals::polytope::CovarianceQuad;
use bell_marginals::rational::Rational;
use bell_marginals::sim::{ExperimentPlan, HiddenVariableModel, Lambda, Response};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// A rational `n/d` kept alongside its integer parts for the oracles.
#[derive(Clone, Copy, Debug)]
pub struct Frac {
    pub n: i64,
    pub d: i64,
}

impl Frac {
    pub fn rational(self) -> Rational {
        Rational::new(self.n, self.d)
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform numerator in `[-d, d]` over a random denominator `d ≤ max_den`.
pub fn random_frac(rng: &mut StdRng, max_den: i64) -> Frac {
    let d = rng.gen_range(1..=max_den);
    Frac { n: rng.gen_range(-d..=d), d }
}

/// `{-1, -3/4, …, 1}`.
pub fn grid(points: i64) -> Vec<Frac> {
    let d = (points - 1) / 2;
    (-d..=d).map(|n| Frac { n, d }).collect()
}

pub fn triple(f: [Frac; 3]) -> CovarianceTriple {
    CovarianceTriple::new(f[0].rational(), f[1].rational(), f[2].rational()).unwrap()
}

pub fn quad(f: [Frac; 4]) -> CovarianceQuad {
    CovarianceQuad::from(f.map(Frac::rational))
}

/// 9³ grid followed by `random` random triples.
pub fn triangle_instances(random: usize, seed: u64) -> Vec<[Frac; 3]> {
    let g = grid(9);
    let mut out = Vec::with_capacity(g.len().pow(3) + random);
    for &a in &g {
        for &b in &g {
            for &c in &g {
                out.push([a, b, c]);
            }
        }
    }
    let mut r = rng(seed);
    for _ in 0..random {
        out.push([random_frac(&mut r, 64), random_frac(&mut r, 64), random_frac(&mut r, 64)]);
    }
    out
}

/// 5⁴ grid followed by `random` random quads.
pub fn chsh_instances(random: usize, seed: u64) -> Vec<[Frac; 4]> {
    let g = grid(5);
    let mut out = Vec::with_capacity(g.len().pow(4) + random);
    for &a in &g {
        for &b in &g {
            for &c in &g {
                for &d in &g {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    let mut r = rng(seed);
    for _ in 0..random {
        out.push([0; 4].map(|_| random_frac(&mut r, 48)));
    }
    out
}

/// Integer-arithmetic tetrahedron membership: every `1 + Σ εᵢσᵢ ≥ 0` over
/// sign patterns with `ε₁ε₂ε₃ = 1`.
pub fn tetrahedron_oracle(s: [Frac; 3]) -> bool {
    let big = s[0].d as i128 * s[1].d as i128 * s[2].d as i128;
    let scaled: Vec<i128> = s.iter().map(|f| f.n as i128 * (big / f.d as i128)).collect();
    [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
        .iter()
        .all(|&(a, b, c)| big + a * scaled[0] + b * scaled[1] + c * scaled[2] >= 0)
}

/// Integer-arithmetic CHSH membership, including the cube.
pub fn chsh_oracle(s: [Frac; 4]) -> bool {
    let big: i128 = s.iter().map(|f| f.d as i128).product();
    let scaled: Vec<i128> = s.iter().map(|f| f.n as i128 * (big / f.d as i128)).collect();
    let cube = scaled.iter().all(|x| x.abs() <= big);
    let chsh = (0..4).all(|odd| {
        let sum: i128 = (0..4).map(|i| if i == odd { -scaled[i] } else { scaled[i] }).sum();
        sum.abs() <= 2 * big
    });
    cube && chsh
}

/// `((1+σ)/4, (1-σ)/4, (1-σ)/4, (1+σ)/4)` built from scratch.
pub fn symmetric_density(s: &Rational) -> PairDensity {
    let four = Rational::from_integer(4);
    let plus = (Rational::one() + s) / &four;
    let minus = (Rational::one() - s) / &four;
    PairDensity::new([plus.clone(), minus.clone(), minus, plus]).unwrap()
}

pub fn bell_plan(trials: u64, seed: u64) -> ExperimentPlan {
    ExperimentPlan {
        settings: vec![],
        categories: vec![("a".into(), "b".into()), ("a".into(), "c".into()), ("b".into(), "c".into())],
        trials,
        seed,
    }
}

/// Source-only model on a random finite alphabet of at most `max_alphabet`
/// values with random integer weights and random `±1` responses.
pub fn random_source_only(rng: &mut StdRng, max_alphabet: usize) -> HiddenVariableModel {
    let n = rng.gen_range(1..=max_alphabet);
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
    let total: i64 = raw.iter().sum();
    let weights = raw.iter().map(|&w| Rational::new(w, total)).collect();
    let responses: BTreeMap<String, Response> = ["a", "b", "c"]
        .iter()
        .map(|s| {
            let table = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            (s.to_string(), Response::Table(table))
        })
        .collect();
    HiddenVariableModel::SourceOnly {
        lambda: Lambda::Finite { weights },
        responses,
        station2_sign: if rng.gen_bool(0.5) { 1 } else { -1 },
    }
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn load_model(name: &str) -> HiddenVariableModel {
    serde_json::from_str(&std::fs::read_to_string(data_path(name)).unwrap()).unwrap()
}
