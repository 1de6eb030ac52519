//! Joint densities of three (resp. four) ±1 variables reconstructed from
//! pairwise covariances.
//!
//! For three variables with uniform marginals every joint density with the
//! prescribed pair covariances has the form
//!
//! ```text
//! p(x, y, z) = (1 + σ₁xy + σ₂xz + σ₃yz + t·xyz) / 8
//! ```
//!
//! for one free parameter `t`; the `xyz` term has zero pair marginals.

use serde::{Deserialize, Serialize};

use crate::complex::{MarginalComplex, DEFAULT_ATOM_CAP};
use crate::density::{CovarianceTriple, PairDensity, VERTICES};
use crate::error::{Error, Result};
use crate::lp::{LinearSystem, LpOutcome};
use crate::polytope::{chsh_check, tetrahedron_check, tetrahedron_slacks, CovarianceQuad, InequalityReport};
use crate::rational::Rational;

/// `±1` value of coordinate `bit` (most significant first) of atom `index`
/// in a space of `width` binary coordinates; `+1` sorts first.
fn sign(index: usize, bit: usize, width: usize) -> i8 {
    if index >> (width - 1 - bit) & 1 == 0 {
        1
    } else {
        -1
    }
}

fn check_density(masses: &[Rational]) -> Result<()> {
    if let Some((i, m)) = masses.iter().enumerate().find(|(_, m)| m.is_negative()) {
        return Err(Error::NegativeMass {
            vertex: format!("atom {i}"),
            mass: Box::new(m.clone()),
        });
    }
    let sum: Rational = masses.iter().sum();
    if sum != Rational::one() {
        let deficit = Rational::one() - &sum;
        return Err(Error::MassSumNotOne { sum: Box::new(sum), deficit: Box::new(deficit) });
    }
    Ok(())
}

/// Density on `{±1}³`, atoms ordered `(+,+,+), (+,+,-), …, (-,-,-)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct JointDensity3 {
    p: [Rational; 8],
}

impl JointDensity3 {
    pub fn new(p: [Rational; 8]) -> Result<Self> {
        check_density(&p)?;
        Ok(JointDensity3 { p })
    }

    pub fn masses(&self) -> &[Rational; 8] {
        &self.p
    }

    pub fn mass(&self, x: i8, y: i8, z: i8) -> &Rational {
        let bit = |v: i8| usize::from(v < 0);
        &self.p[bit(x) << 2 | bit(y) << 1 | bit(z)]
    }

    pub fn atom(index: usize) -> (i8, i8, i8) {
        (sign(index, 0, 3), sign(index, 1, 3), sign(index, 2, 3))
    }
}

impl TryFrom<Vec<Rational>> for JointDensity3 {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        let p: [Rational; 8] = v
            .try_into()
            .map_err(|v: Vec<Rational>| Error::InvalidInput(format!("expected 8 masses, got {}", v.len())))?;
        JointDensity3::new(p)
    }
}

impl From<JointDensity3> for Vec<Rational> {
    fn from(j: JointDensity3) -> Self {
        j.p.to_vec()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pair {
    AB,
    AC,
    BC,
}

pub fn joint_pair_marginal(j: &JointDensity3, pair: Pair) -> PairDensity {
    let masses = VERTICES.map(|(u, v)| {
        [1i8, -1]
            .iter()
            .map(|&w| match pair {
                Pair::AB => j.mass(u, v, w),
                Pair::AC => j.mass(u, w, v),
                Pair::BC => j.mass(w, u, v),
            })
            .sum::<Rational>()
    });
    PairDensity::new(masses).expect("marginal of a valid joint density")
}

/// Closed interval of admissible `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl TInterval {
    pub fn contains(&self, t: &Rational) -> bool {
        &self.lo <= t && t <= &self.hi
    }
}

/// `8·p(x,y,z)` split as `constant + t·xyz`, per atom.
fn closed_form_terms(s: &CovarianceTriple) -> [(Rational, i8); 8] {
    let [s1, s2, s3] = s.sigma();
    std::array::from_fn(|i| {
        let (x, y, z) = JointDensity3::atom(i);
        let term = |c: &Rational, sgn: i8| if sgn > 0 { c.clone() } else { -c };
        let constant = Rational::one() + term(s1, x * y) + term(s2, x * z) + term(s3, y * z);
        (constant, x * y * z)
    })
}

/// The set of `t` for which every entry of the closed form is nonnegative;
/// `None` when empty.
pub fn feasible_t_interval(s: &CovarianceTriple) -> Option<TInterval> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (c, e) in closed_form_terms(s) {
        if e > 0 {
            // c + t ≥ 0
            let bound = -c;
            if lo.as_ref().is_none_or(|l| &bound > l) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| &c < h) {
            hi = Some(c);
        }
    }
    let (lo, hi) = (lo.expect("four atoms with xyz = +1"), hi.expect("four with xyz = -1"));
    (lo <= hi).then_some(TInterval { lo, hi })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Infeasible3 {
    pub report: InequalityReport,
    pub interval: Option<TInterval>,
}

/// Evaluates the closed form at `t`. Fails when an entry would be negative,
/// either because `s` is outside the tetrahedron or `t` outside
/// [`feasible_t_interval`].
pub fn reconstruct_joint(s: &CovarianceTriple, t: &Rational) -> std::result::Result<JointDensity3, Box<Infeasible3>> {
    let eighth = Rational::new(1, 8);
    let terms = closed_form_terms(s);
    let p: [Rational; 8] = std::array::from_fn(|i| {
        let (c, e) = &terms[i];
        let v = if *e > 0 { c + t } else { c - t };
        v * &eighth
    });
    if p.iter().any(Rational::is_negative) {
        return Err(Box::new(Infeasible3 {
            report: tetrahedron_check(s),
            interval: feasible_t_interval(s),
        }));
    }
    Ok(JointDensity3::new(p).expect("closed form sums to one"))
}

/// Minimum tetrahedron slack; the feasible interval is `[-m, m]` when `m ≥ 0`.
pub fn tetrahedron_margin(s: &CovarianceTriple) -> Rational {
    tetrahedron_slacks(s).into_iter().min().expect("four slacks")
}

/// Density on `{±1}⁴` over `(A₁, A₂, B₁, B₂)`, lexicographic with `+1` first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct JointDensity4 {
    p: [Rational; 16],
}

impl JointDensity4 {
    pub fn new(p: [Rational; 16]) -> Result<Self> {
        check_density(&p)?;
        Ok(JointDensity4 { p })
    }

    pub fn masses(&self) -> &[Rational; 16] {
        &self.p
    }

    pub fn atom(index: usize) -> [i8; 4] {
        std::array::from_fn(|b| sign(index, b, 4))
    }

    /// Pair marginal of coordinates `(i, j)`.
    pub fn pair_marginal(&self, i: usize, j: usize) -> PairDensity {
        let masses = VERTICES.map(|(u, v)| {
            self.p
                .iter()
                .enumerate()
                .filter(|(k, _)| {
                    let a = JointDensity4::atom(*k);
                    a[i] == u && a[j] == v
                })
                .map(|(_, m)| m)
                .sum::<Rational>()
        });
        PairDensity::new(masses).expect("marginal of a valid joint density")
    }
}

impl TryFrom<Vec<Rational>> for JointDensity4 {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        let p: [Rational; 16] = v
            .try_into()
            .map_err(|v: Vec<Rational>| Error::InvalidInput(format!("expected 16 masses, got {}", v.len())))?;
        JointDensity4::new(p)
    }
}

impl From<JointDensity4> for Vec<Rational> {
    fn from(j: JointDensity4) -> Self {
        j.p.to_vec()
    }
}

/// Coordinates of `(A₁B₁)`, `(A₁B₂)`, `(A₂B₁)`, `(A₂B₂)` in [`JointDensity4`].
pub const CHSH_PAIRS: [(usize, usize); 4] = [(0, 2), (0, 3), (1, 2), (1, 3)];

pub const CHSH_VARIABLES: [&str; 4] = ["A1", "A2", "B1", "B2"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChshOutcome {
    Witness(Box<JointDensity4>),
    Infeasible {
        report: InequalityReport,
        certificate: Vec<Rational>,
    },
}

impl ChshOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ChshOutcome::Witness(_))
    }
}

/// The sixteen equations `P(Aᵢ = x, Bⱼ = y) = (1 + σᵢⱼ·xy)/4`, pair-major in
/// [`CHSH_PAIRS`] order and vertex-minor. Uniform single marginals follow
/// from them; the `A₁A₂` and `B₁B₂` pairs are left free.
pub fn chsh_system(s: &CovarianceQuad) -> LinearSystem {
    let mut sys = LinearSystem::new(16);
    let quarter = Rational::new(1, 4);
    for (&(i, j), sigma) in CHSH_PAIRS.iter().zip(s.sigma()) {
        for (x, y) in VERTICES {
            let support = (0..16)
                .filter(|&k| {
                    let a = JointDensity4::atom(k);
                    a[i] == x && a[j] == y
                })
                .collect();
            let corr = if x * y > 0 { sigma.clone() } else { -sigma };
            sys.push_row(support, (Rational::one() + corr) * &quarter);
        }
    }
    sys
}

pub fn chsh_equation_ids() -> Vec<String> {
    CHSH_PAIRS
        .iter()
        .flat_map(|&(i, j)| {
            VERTICES
                .iter()
                .map(move |(x, y)| format!("{}{}[{x},{y}]", CHSH_VARIABLES[i], CHSH_VARIABLES[j]))
        })
        .collect()
}

/// Exact LP decision for the four-setting experiment.
pub fn chsh_reconstruct(s: &CovarianceQuad) -> Result<ChshOutcome> {
    let sys = chsh_system(s);
    Ok(match sys.solve() {
        LpOutcome::Feasible(x) => {
            let p: [Rational; 16] = x.try_into().expect("sixteen atoms");
            ChshOutcome::Witness(Box::new(JointDensity4::new(p)?))
        }
        LpOutcome::Infeasible(y) => {
            if !sys.is_farkas_certificate(&y) {
                return Err(Error::Internal("solver produced an unverifiable certificate".into()));
            }
            ChshOutcome::Infeasible {
                report: chsh_check(s),
                certificate: y,
            }
        }
    })
}

pub fn verify_chsh_certificate(s: &CovarianceQuad, cert: &[Rational]) -> Result<bool> {
    let sys = chsh_system(s);
    if cert.len() != sys.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: sys.n_rows(),
            got: cert.len(),
        });
    }
    Ok(sys.is_farkas_certificate(cert))
}

/// LP verdict for the covariance triple via the general complex solver.
pub fn lp_feasible(s: &CovarianceTriple) -> Result<bool> {
    Ok(crate::complex::solve_complex_with_cap(&MarginalComplex::from_covariances(s), DEFAULT_ATOM_CAP)?.is_feasible())
}
