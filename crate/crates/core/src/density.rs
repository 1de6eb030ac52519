//! Densities on the four vertices `(±1, ±1)` of a square and their
//! covariance parameterization.
//!
//! Vertex order is fixed everywhere as `(+1,+1)`, `(+1,-1)`, `(-1,+1)`,
//! `(-1,-1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const VERTEX_NAMES: [&str; 4] = ["pp", "pm", "mp", "mm"];
pub const VERTICES: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// A probability density on `{±1}²`.
///
/// Uniform marginals are not enforced here; callers that need them check
/// [`PairDensity::has_uniform_marginals`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPairDensity")]
pub struct PairDensity {
    pp: Rational,
    pm: Rational,
    mp: Rational,
    mm: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPairDensity {
    pp: Rational,
    pm: Rational,
    mp: Rational,
    mm: Rational,
}

impl TryFrom<RawPairDensity> for PairDensity {
    type Error = Error;
    fn try_from(raw: RawPairDensity) -> Result<Self> {
        PairDensity::new([raw.pp, raw.pm, raw.mp, raw.mm])
    }
}

impl PairDensity {
    /// Validates nonnegativity and unit total mass.
    pub fn new(masses: [Rational; 4]) -> Result<Self> {
        for (m, name) in masses.iter().zip(VERTEX_NAMES) {
            if m.is_negative() {
                return Err(Error::NegativeMass {
                    vertex: name.to_string(),
                    mass: Box::new(m.clone()),
                });
            }
        }
        let sum: Rational = masses.iter().sum();
        if sum != Rational::one() {
            let deficit = Rational::one() - &sum;
            return Err(Error::MassSumNotOne { sum: Box::new(sum), deficit: Box::new(deficit) });
        }
        let [pp, pm, mp, mm] = masses;
        Ok(PairDensity { pp, pm, mp, mm })
    }

    pub fn uniform() -> Self {
        let quarter = Rational::new(1, 4);
        PairDensity {
            pp: quarter.clone(),
            pm: quarter.clone(),
            mp: quarter.clone(),
            mm: quarter,
        }
    }

    /// The density `((1+σ)/4, (1-σ)/4, (1-σ)/4, (1+σ)/4)`, the unique one
    /// with uniform marginals and covariance `σ`.
    pub fn from_covariance(sigma: &Rational) -> Result<Self> {
        check_unit_range(sigma)?;
        let four = Rational::from_integer(4);
        let plus = (Rational::one() + sigma) / &four;
        let minus = (Rational::one() - sigma) / &four;
        Ok(PairDensity {
            pp: plus.clone(),
            pm: minus.clone(),
            mp: minus,
            mm: plus,
        })
    }

    pub fn masses(&self) -> [&Rational; 4] {
        [&self.pp, &self.pm, &self.mp, &self.mm]
    }

    pub fn mass(&self, x: i8, y: i8) -> &Rational {
        match (x > 0, y > 0) {
            (true, true) => &self.pp,
            (true, false) => &self.pm,
            (false, true) => &self.mp,
            (false, false) => &self.mm,
        }
    }

    /// `P(X = +1) = P(Y = +1) = 1/2`.
    pub fn has_uniform_marginals(&self) -> bool {
        let half = Rational::new(1, 2);
        &self.pp + &self.pm == half && &self.pp + &self.mp == half
    }

    /// `Σ x f(x, y)`
    pub fn mean_x(&self) -> Rational {
        &self.pp + &self.pm - &self.mp - &self.mm
    }

    /// `Σ y f(x, y)`
    pub fn mean_y(&self) -> Rational {
        &self.pp - &self.pm + &self.mp - &self.mm
    }

    /// `Σ x y f(x, y)`
    pub fn covariance(&self) -> Rational {
        &self.pp - &self.pm - &self.mp + &self.mm
    }
}

pub(crate) fn check_unit_range(sigma: &Rational) -> Result<()> {
    if sigma.abs() > Rational::one() {
        Err(Error::CovarianceOutOfRange(Box::new(sigma.clone())))
    } else {
        Ok(())
    }
}

/// Covariances `(σ₁, σ₂, σ₃)` of the pairs `(A,B)`, `(A,C)`, `(B,C)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Rational; 3]", into = "[Rational; 3]")]
pub struct CovarianceTriple {
    sigma: [Rational; 3],
}

impl CovarianceTriple {
    pub fn new(s1: Rational, s2: Rational, s3: Rational) -> Result<Self> {
        let sigma = [s1, s2, s3];
        for s in &sigma {
            check_unit_range(s)?;
        }
        Ok(CovarianceTriple { sigma })
    }

    /// Covariances of three pair densities; each must have uniform marginals.
    pub fn from_densities(f1: &PairDensity, f2: &PairDensity, f3: &PairDensity) -> Result<Self> {
        for f in [f1, f2, f3] {
            if !f.has_uniform_marginals() {
                return Err(Error::NonUniformMarginals(format_density(f)));
            }
        }
        CovarianceTriple::new(f1.covariance(), f2.covariance(), f3.covariance())
    }

    pub fn sigma(&self) -> &[Rational; 3] {
        &self.sigma
    }

    pub fn s1(&self) -> &Rational {
        &self.sigma[0]
    }

    pub fn s2(&self) -> &Rational {
        &self.sigma[1]
    }

    pub fn s3(&self) -> &Rational {
        &self.sigma[2]
    }

    /// The three uniform-marginal pair densities for `(A,B)`, `(A,C)`, `(B,C)`.
    pub fn pair_densities(&self) -> [PairDensity; 3] {
        self.sigma
            .clone()
            .map(|s| PairDensity::from_covariance(&s).expect("range checked on construction"))
    }
}

impl TryFrom<[Rational; 3]> for CovarianceTriple {
    type Error = Error;
    fn try_from(s: [Rational; 3]) -> Result<Self> {
        let [a, b, c] = s;
        CovarianceTriple::new(a, b, c)
    }
}

impl From<CovarianceTriple> for [Rational; 3] {
    fn from(t: CovarianceTriple) -> Self {
        t.sigma
    }
}

fn format_density(f: &PairDensity) -> String {
    serde_json::to_string(f).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn correlated_f1() -> [Rational; 4] {
        [q(3, 8), q(1, 8), q(1, 8), q(3, 8)]
    }

    #[test]
    fn constructor_examples() {
        assert!(PairDensity::new(correlated_f1()).is_ok());
        assert_eq!(PairDensity::new([q(1, 4), q(1, 4), q(1, 4), q(1, 4)]).unwrap(), PairDensity::uniform());
        match PairDensity::new([q(1, 2), q(1, 2), q(1, 2), q(-1, 1)]) {
            Err(Error::NegativeMass { vertex, mass }) => {
                assert_eq!(vertex, "mm");
                assert_eq!(*mass, q(-1, 1));
            }
            other => panic!("expected NegativeMass, got {other:?}"),
        }
        match PairDensity::new([q(1, 4), q(1, 4), q(1, 4), q(1, 8)]) {
            Err(Error::MassSumNotOne { sum, deficit }) => {
                assert_eq!(*sum, q(7, 8));
                assert_eq!(*deficit, q(1, 8));
            }
            other => panic!("expected MassSumNotOne, got {other:?}"),
        }
    }

    #[test]
    fn uniform_marginal_examples() {
        assert!(PairDensity::new(correlated_f1()).unwrap().has_uniform_marginals());
        assert!(PairDensity::uniform().has_uniform_marginals());
        let skew = PairDensity::new([q(1, 2), q(1, 4), q(1, 4), q(0, 1)]).unwrap();
        assert!(!skew.has_uniform_marginals());
    }

    #[test]
    fn covariance_examples() {
        assert_eq!(PairDensity::new(correlated_f1()).unwrap().covariance(), q(1, 2));
        let f3 = PairDensity::new([q(1, 8), q(3, 8), q(3, 8), q(1, 8)]).unwrap();
        assert_eq!(f3.covariance(), q(-1, 2));
        assert_eq!(PairDensity::uniform().covariance(), q(0, 1));
    }

    #[test]
    fn from_covariance_examples() {
        assert_eq!(PairDensity::from_covariance(&q(0, 1)).unwrap(), PairDensity::uniform());
        assert_eq!(
            PairDensity::from_covariance(&q(1, 1)).unwrap(),
            PairDensity::new([q(1, 2), q(0, 1), q(0, 1), q(1, 2)]).unwrap()
        );
        assert_eq!(
            PairDensity::from_covariance(&q(1, 2)).unwrap(),
            PairDensity::new(correlated_f1()).unwrap()
        );
        assert!(matches!(
            PairDensity::from_covariance(&q(5, 4)),
            Err(Error::CovarianceOutOfRange(_))
        ));
    }

    #[test]
    fn json_form() {
        let f = PairDensity::new(correlated_f1()).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"pp":"3/8","pm":"1/8","mp":"1/8","mm":"3/8"}"#);
        assert_eq!(serde_json::from_str::<PairDensity>(&s).unwrap(), f);
        assert!(serde_json::from_str::<PairDensity>(r#"{"pp":"1/2","pm":"1/2","mp":"1/2","mm":"-1"}"#).is_err());
        assert!(serde_json::from_str::<PairDensity>(r#"{"pp":0.25,"pm":"1/4","mp":"1/4","mm":"1/4"}"#).is_err());
    }

    #[test]
    fn triple_requires_uniform_marginals() {
        let skew = PairDensity::new([q(1, 2), q(1, 4), q(1, 4), q(0, 1)]).unwrap();
        let u = PairDensity::uniform();
        assert!(matches!(
            CovarianceTriple::from_densities(&u, &skew, &u),
            Err(Error::NonUniformMarginals(_))
        ));
        assert!(CovarianceTriple::new(q(0, 1), q(-1, 1), q(3, 2)).is_err());
    }

    fn arb_density() -> impl Strategy<Value = PairDensity> {
        // four nonnegative integer weights normalized by their sum
        let general = (prop::array::uniform4(0i64..50), 1i64..50).prop_map(|(w, bump)| {
            let mut w = w;
            w[0] += bump;
            let total: i64 = w.iter().sum();
            PairDensity::new(w.map(|x| q(x, total))).unwrap()
        });
        // masses (a, 1/2 - a, 1/2 - a, a) built directly
        let uniform = (1i64..100).prop_flat_map(|d| {
            (0..=d).prop_map(move |n| {
                let a = q(n, 2 * d);
                let b = q(1, 2) - &a;
                PairDensity::new([a.clone(), b.clone(), b, a]).unwrap()
            })
        });
        prop_oneof![general, uniform]
    }

    fn arb_sigma() -> impl Strategy<Value = Rational> {
        (1i64..200).prop_flat_map(|d| (-d..=d).prop_map(move |n| q(n, d)))
    }

    proptest! {
        #[test]
        fn uniform_iff_zero_means(f in arb_density()) {
            let zero_means = f.mean_x().is_zero() && f.mean_y().is_zero();
            prop_assert_eq!(f.has_uniform_marginals(), zero_means);
        }

        #[test]
        fn uniform_iff_zero_means_on_uniform_family(s in arb_sigma()) {
            let f = PairDensity::from_covariance(&s).unwrap();
            prop_assert!(f.has_uniform_marginals());
            prop_assert!(f.mean_x().is_zero() && f.mean_y().is_zero());
        }

        #[test]
        fn covariance_round_trip(s in arb_sigma()) {
            let f = PairDensity::from_covariance(&s).unwrap();
            prop_assert_eq!(f.covariance(), s);
        }

        #[test]
        fn density_determined_by_covariance(f in arb_density()) {
            if f.has_uniform_marginals() {
                prop_assert_eq!(PairDensity::from_covariance(&f.covariance()).unwrap(), f);
            }
        }

        #[test]
        fn covariance_order_independent(f in arb_density()) {
            let [a, b, c, d] = f.masses();
            let reordered = (d - c) + (a - b);
            prop_assert_eq!(f.covariance(), reordered);
        }
    }
}
