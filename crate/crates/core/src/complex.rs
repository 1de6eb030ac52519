//! Consistency of a complex of marginal tables over finite-alphabet
//! variables, decided by exact linear programming over the joint atoms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::density::{CovarianceTriple, PairDensity, VERTICES};
use crate::error::{Error, Result};
use crate::lp::{LinearSystem, LpOutcome};
use crate::rational::Rational;

pub const DEFAULT_ATOM_CAP: u64 = 1_000_000;

/// An outcome label: an integer such as `1` / `-1`, or a short string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Symbol {
    Int(i64),
    Text(String),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Int(n) => write!(f, "{n}"),
            Symbol::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variable {
    pub name: String,
    pub alphabet: Vec<Symbol>,
}

/// A prescribed marginal. Table keys are the outcome labels of `over`
/// joined by commas; absent cells carry mass zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constraint {
    pub over: Vec<String>,
    pub table: BTreeMap<String, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginalComplex {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
}

fn binary() -> Vec<Symbol> {
    vec![Symbol::Int(1), Symbol::Int(-1)]
}

fn pair_table(f: &PairDensity) -> BTreeMap<String, Rational> {
    VERTICES
        .iter()
        .map(|&(x, y)| (format!("{x},{y}"), f.mass(x, y).clone()))
        .collect()
}

impl MarginalComplex {
    /// Binary variables `A`, `B`, `C` with `AB → f1`, `AC → f2`, `BC → f3`.
    pub fn from_pair_densities(f1: &PairDensity, f2: &PairDensity, f3: &PairDensity) -> Self {
        let variables = ["A", "B", "C"]
            .iter()
            .map(|n| Variable {
                name: n.to_string(),
                alphabet: binary(),
            })
            .collect();
        let constraints = [(["A", "B"], f1), (["A", "C"], f2), (["B", "C"], f3)]
            .into_iter()
            .map(|(over, f)| Constraint {
                over: over.iter().map(|s| s.to_string()).collect(),
                table: pair_table(f),
            })
            .collect();
        MarginalComplex { variables, constraints }
    }

    /// The complex of the three uniform-marginal pair densities with the
    /// given covariances.
    pub fn from_covariances(s: &CovarianceTriple) -> Self {
        let [f1, f2, f3] = s.pair_densities();
        MarginalComplex::from_pair_densities(&f1, &f2, &f3)
    }

    /// Number of joint atoms, saturating.
    pub fn atom_count(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.alphabet.len() as u128))
    }

    /// Validates the complex and compiles it against a product-space cap.
    pub fn compile(&self, atom_cap: u64) -> Result<CompiledComplex> {
        let mut names = BTreeMap::new();
        for (i, v) in self.variables.iter().enumerate() {
            if v.name.is_empty() || names.insert(v.name.clone(), i).is_some() {
                return Err(Error::InvalidComplex(format!("variable name {:?} empty or repeated", v.name)));
            }
            if v.alphabet.is_empty() {
                return Err(Error::InvalidComplex(format!("variable {} has an empty alphabet", v.name)));
            }
            let distinct: BTreeSet<String> = v.alphabet.iter().map(|s| s.to_string()).collect();
            if distinct.len() != v.alphabet.len() {
                return Err(Error::InvalidComplex(format!("variable {} repeats an outcome", v.name)));
            }
            if distinct.iter().any(|s| s.is_empty() || s.contains(',')) {
                return Err(Error::InvalidComplex(format!(
                    "variable {} has an outcome label that is empty or contains ','",
                    v.name
                )));
            }
        }
        if self.variables.is_empty() {
            return Err(Error::InvalidComplex("no variables".into()));
        }

        let mut subsets = BTreeSet::new();
        let mut scopes = Vec::with_capacity(self.constraints.len());
        for (k, c) in self.constraints.iter().enumerate() {
            let mut vars = Vec::with_capacity(c.over.len());
            for name in &c.over {
                let &i = names
                    .get(name)
                    .ok_or_else(|| Error::InvalidComplex(format!("constraint {k} names undeclared variable {name:?}")))?;
                if vars.contains(&i) {
                    return Err(Error::InvalidComplex(format!("constraint {k} repeats variable {name:?}")));
                }
                vars.push(i);
            }
            if vars.is_empty() {
                return Err(Error::InvalidComplex(format!("constraint {k} is over no variables")));
            }
            let set: BTreeSet<usize> = vars.iter().copied().collect();
            if !subsets.insert(set) {
                return Err(Error::InvalidComplex(format!("constraint {k} repeats the subset {:?}", c.over)));
            }
            scopes.push(vars);
        }

        let atoms = self.atom_count();
        if atoms > atom_cap as u128 {
            return Err(Error::ProductSpaceTooLarge { atoms, cap: atom_cap });
        }

        let radices: Vec<usize> = self.variables.iter().map(|v| v.alphabet.len()).collect();
        let labels: Vec<Vec<String>> = self
            .variables
            .iter()
            .map(|v| v.alphabet.iter().map(|s| s.to_string()).collect())
            .collect();

        let mut constraints = Vec::with_capacity(scopes.len());
        for (k, (c, vars)) in self.constraints.iter().zip(scopes).enumerate() {
            let scope_radices: Vec<usize> = vars.iter().map(|&i| radices[i]).collect();
            let size: usize = scope_radices.iter().product();
            let mut cells = vec![Rational::zero(); size];
            let mut seen = vec![false; size];
            for (key, mass) in &c.table {
                let idx = parse_cell(key, &vars, &labels).ok_or_else(|| {
                    Error::InvalidComplex(format!("constraint {k} has cell {key:?} outside its alphabet"))
                })?;
                if std::mem::replace(&mut seen[idx], true) {
                    return Err(Error::InvalidComplex(format!("constraint {k} names cell {key:?} twice")));
                }
                if mass.is_negative() {
                    return Err(Error::InvalidComplex(format!("constraint {k} cell {key:?} has negative mass {mass}")));
                }
                cells[idx] = mass.clone();
            }
            let total: Rational = cells.iter().sum();
            if total != Rational::one() {
                return Err(Error::InvalidComplex(format!("constraint {k} table sums to {total}, not 1")));
            }
            constraints.push(CompiledConstraint {
                vars,
                radices: scope_radices,
                cells,
            });
        }

        let compiled = CompiledComplex {
            radices,
            labels,
            names: self.variables.iter().map(|v| v.name.clone()).collect(),
            constraints,
        };
        compiled.check_overlaps()?;
        Ok(compiled)
    }
}

fn parse_cell(key: &str, vars: &[usize], labels: &[Vec<String>]) -> Option<usize> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    if parts.len() != vars.len() {
        return None;
    }
    let mut idx = 0;
    for (part, &v) in parts.iter().zip(vars) {
        let pos = labels[v].iter().position(|l| l == part)?;
        idx = idx * labels[v].len() + pos;
    }
    Some(idx)
}

#[derive(Clone, Debug)]
pub struct CompiledConstraint {
    /// variable indices in the constraint's own order
    pub vars: Vec<usize>,
    pub radices: Vec<usize>,
    /// masses over the scope's product alphabet, lexicographic
    pub cells: Vec<Rational>,
}

impl CompiledConstraint {
    /// Marginal of this table onto `shared` (variable indices, each in scope).
    fn project(&self, shared: &[usize], all_radices: &[usize]) -> Vec<Rational> {
        let size: usize = shared.iter().map(|&v| all_radices[v]).product();
        let mut out = vec![Rational::zero(); size];
        let pos: Vec<usize> = shared
            .iter()
            .map(|v| self.vars.iter().position(|w| w == v).expect("shared variable in scope"))
            .collect();
        for (cell, mass) in self.cells.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            let digits = unrank(cell, &self.radices);
            let mut idx = 0;
            for (&p, &v) in pos.iter().zip(shared) {
                idx = idx * all_radices[v] + digits[p];
            }
            out[idx] += mass;
        }
        out
    }
}

fn unrank(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = index % r;
        index /= r;
    }
    digits
}

/// A validated complex, ready to be turned into an equality system.
#[derive(Clone, Debug)]
pub struct CompiledComplex {
    pub radices: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    pub names: Vec<String>,
    pub constraints: Vec<CompiledConstraint>,
}

impl CompiledComplex {
    pub fn n_atoms(&self) -> usize {
        self.radices.iter().product()
    }

    fn check_overlaps(&self) -> Result<()> {
        for (i, a) in self.constraints.iter().enumerate() {
            for (j, b) in self.constraints.iter().enumerate().skip(i + 1) {
                let mut shared: Vec<usize> = a.vars.iter().copied().filter(|v| b.vars.contains(v)).collect();
                if shared.is_empty() {
                    continue;
                }
                shared.sort_unstable();
                let pa = a.project(&shared, &self.radices);
                let pb = b.project(&shared, &self.radices);
                if let Some(cell) = pa.iter().zip(&pb).position(|(x, y)| x != y) {
                    let shared_radices: Vec<usize> = shared.iter().map(|&v| self.radices[v]).collect();
                    let digits = unrank(cell, &shared_radices);
                    let key = self.cell_key(&shared, &digits);
                    return Err(Error::InconsistentOverlap {
                        first: i,
                        second: j,
                        over: shared.iter().map(|&v| self.names[v].clone()).collect(),
                        detail: format!("cell {key}: {} vs {}", pa[cell], pb[cell]),
                    });
                }
            }
        }
        Ok(())
    }

    fn cell_key(&self, vars: &[usize], digits: &[usize]) -> String {
        vars.iter()
            .zip(digits)
            .map(|(&v, &d)| self.labels[v][d].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Key of a joint atom, e.g. `"1,-1,1"`.
    pub fn atom_key(&self, atom: usize) -> String {
        let all: Vec<usize> = (0..self.radices.len()).collect();
        self.cell_key(&all, &unrank(atom, &self.radices))
    }

    /// Identifiers of the scalar equations, in row order: `"total"` then
    /// `"c<k>[<cell>]"` for every cell of constraint `k`.
    pub fn equation_ids(&self) -> Vec<String> {
        let mut ids = vec!["total".to_string()];
        for (k, c) in self.constraints.iter().enumerate() {
            for cell in 0..c.cells.len() {
                ids.push(format!("c{k}[{}]", self.cell_key(&c.vars, &unrank(cell, &c.radices))));
            }
        }
        ids
    }

    /// Total mass plus one row per table cell.
    pub fn equations(&self) -> LinearSystem {
        let n = self.n_atoms();
        let mut sys = LinearSystem::new(n);
        sys.push_row((0..n).collect(), Rational::one());
        for c in &self.constraints {
            let mut support: Vec<Vec<usize>> = vec![Vec::new(); c.cells.len()];
            for atom in 0..n {
                let digits = unrank(atom, &self.radices);
                let cell = c.vars.iter().fold(0, |acc, &v| acc * self.radices[v] + digits[v]);
                support[cell].push(atom);
            }
            for (s, mass) in support.into_iter().zip(&c.cells) {
                sys.push_row(s, mass.clone());
            }
        }
        sys
    }
}

/// A joint density over every atom of a complex, with its atom keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub atoms: Vec<String>,
    pub masses: Vec<Rational>,
}

/// Farkas multipliers, one per scalar equation of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub ids: Vec<String>,
    pub coefficients: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    Witness(Witness),
    Certificate(Certificate),
}

type Wrap = fn(Vec<String>, Vec<Rational>) -> FeasibilityResult;

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Witness(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            FeasibilityResult::Witness(w) => Some(w),
            FeasibilityResult::Certificate(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            FeasibilityResult::Certificate(c) => Some(c),
            FeasibilityResult::Witness(_) => None,
        }
    }

    /// `{"feasible": true, "witness": {atom: mass}}` or
    /// `{"feasible": false, "certificate": {equation: coefficient}}`.
    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        match self {
            FeasibilityResult::Witness(w) => {
                out.insert("feasible".into(), Value::Bool(true));
                out.insert("witness".into(), ordered_map(&w.atoms, &w.masses));
            }
            FeasibilityResult::Certificate(c) => {
                out.insert("feasible".into(), Value::Bool(false));
                out.insert("certificate".into(), ordered_map(&c.ids, &c.coefficients));
            }
        }
        Value::Object(out)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("feasibility result: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("not an object"))?;
        let (key, wrap): (&str, Wrap) =
            match obj.get("feasible").and_then(Value::as_bool) {
                Some(true) => ("witness", |atoms, masses| FeasibilityResult::Witness(Witness { atoms, masses })),
                Some(false) => ("certificate", |ids, coefficients| {
                    FeasibilityResult::Certificate(Certificate { ids, coefficients })
                }),
                None => return Err(bad("missing boolean \"feasible\"")),
            };
        let map = obj.get(key).and_then(Value::as_object).ok_or_else(|| bad("missing table"))?;
        let mut keys = Vec::with_capacity(map.len());
        let mut vals = Vec::with_capacity(map.len());
        for (k, v) in map {
            let s = v.as_str().ok_or_else(|| bad("entries must be \"p/q\" strings"))?;
            keys.push(k.clone());
            vals.push(s.parse()?);
        }
        Ok(wrap(keys, vals))
    }
}

fn ordered_map(keys: &[String], vals: &[Rational]) -> Value {
    Value::Object(
        keys.iter()
            .zip(vals)
            .map(|(k, v)| (k.clone(), Value::String(v.to_string())))
            .collect(),
    )
}

pub fn solve_complex(c: &MarginalComplex) -> Result<FeasibilityResult> {
    solve_complex_with_cap(c, DEFAULT_ATOM_CAP)
}

/// Decides whether the tables of `c` are marginals of one joint density.
///
/// Overlap disagreements are reported as [`Error::InconsistentOverlap`]
/// before any pivoting happens.
pub fn solve_complex_with_cap(c: &MarginalComplex, atom_cap: u64) -> Result<FeasibilityResult> {
    let compiled = c.compile(atom_cap)?;
    let sys = compiled.equations();
    Ok(match sys.solve() {
        LpOutcome::Feasible(x) => {
            debug_assert!(sys.is_solution(&x));
            FeasibilityResult::Witness(Witness {
                atoms: (0..compiled.n_atoms()).map(|a| compiled.atom_key(a)).collect(),
                masses: x,
            })
        }
        LpOutcome::Infeasible(y) => {
            if !sys.is_farkas_certificate(&y) {
                return Err(Error::Internal("solver produced an unverifiable certificate".into()));
            }
            FeasibilityResult::Certificate(Certificate {
                ids: compiled.equation_ids(),
                coefficients: y,
            })
        }
    })
}

/// Checks a Farkas vector (in equation order) against `c`: every atom's
/// combined coefficient is nonnegative and the combined right-hand side is
/// negative.
pub fn verify_certificate(c: &MarginalComplex, cert: &[Rational]) -> Result<bool> {
    let compiled = c.compile(u64::MAX)?;
    let sys = compiled.equations();
    if cert.len() != sys.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: sys.n_rows(),
            got: cert.len(),
        });
    }
    Ok(sys.is_farkas_certificate(cert))
}

/// Like [`verify_certificate`] but keyed by equation id; absent ids count
/// as zero.
pub fn verify_certificate_by_id(c: &MarginalComplex, cert: &Certificate) -> Result<bool> {
    let ids = c.compile(u64::MAX)?.equation_ids();
    if cert.ids.len() != cert.coefficients.len() {
        return Err(Error::DimensionMismatch {
            expected: cert.ids.len(),
            got: cert.coefficients.len(),
        });
    }
    let mut vec = vec![Rational::zero(); ids.len()];
    for (id, v) in cert.ids.iter().zip(&cert.coefficients) {
        let pos = ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::InvalidInput(format!("certificate names unknown equation {id:?}")))?;
        vec[pos] = v.clone();
    }
    verify_certificate(c, &vec)
}

/// Marginal of a witness onto the named variables, keyed like a table.
pub fn witness_marginal(c: &MarginalComplex, w: &Witness, over: &[&str]) -> Result<BTreeMap<String, Rational>> {
    let compiled = c.compile(u64::MAX)?;
    let vars: Vec<usize> = over
        .iter()
        .map(|n| {
            compiled
                .names
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| Error::InvalidInput(format!("unknown variable {n:?}")))
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for (atom, mass) in w.masses.iter().enumerate() {
        let digits = unrank(atom, &compiled.radices);
        let sub: Vec<usize> = vars.iter().map(|&v| digits[v]).collect();
        let key = compiled.cell_key(&vars, &sub);
        *out.entry(key).or_insert_with(Rational::zero) += mass;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn frustrated() -> MarginalComplex {
        let f1 = PairDensity::new([q(3, 8), q(1, 8), q(1, 8), q(3, 8)]).unwrap();
        let f3 = PairDensity::new([q(1, 8), q(3, 8), q(3, 8), q(1, 8)]).unwrap();
        MarginalComplex::from_pair_densities(&f1, &f1, &f3)
    }

    fn strip(c: &mut MarginalComplex, keep: &[usize]) {
        c.constraints = keep.iter().map(|&k| c.constraints[k].clone()).collect();
    }

    #[test]
    fn frustrated_triangle_is_infeasible_with_verified_certificate() {
        let c = frustrated();
        let res = solve_complex(&c).unwrap();
        let cert = res.certificate().expect("infeasible");
        assert_eq!(cert.coefficients.len(), 13);
        assert!(verify_certificate(&c, &cert.coefficients).unwrap());
        assert!(verify_certificate_by_id(&c, cert).unwrap());
        assert!(!verify_certificate(&c, &vec![Rational::zero(); 13]).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let c = frustrated();
        assert!(matches!(
            verify_certificate(&c, &[q(1, 1)]),
            Err(Error::DimensionMismatch { expected: 13, got: 1 })
        ));
    }

    #[test]
    fn single_pair_echoes_input() {
        let f = PairDensity::new([q(1, 2), q(1, 4), q(1, 4), q(0, 1)]).unwrap();
        let c = MarginalComplex {
            variables: vec![
                Variable { name: "A".into(), alphabet: binary() },
                Variable { name: "B".into(), alphabet: binary() },
            ],
            constraints: vec![Constraint {
                over: vec!["A".into(), "B".into()],
                table: pair_table(&f),
            }],
        };
        let res = solve_complex(&c).unwrap();
        let w = res.witness().unwrap();
        assert_eq!(w.atoms, ["1,1", "1,-1", "-1,1", "-1,-1"]);
        let expected: Vec<Rational> = f.masses().into_iter().cloned().collect();
        assert_eq!(w.masses, expected);
    }

    #[test]
    fn two_legs_leave_freedom() {
        let s = CovarianceTriple::new(q(3, 4), q(3, 4), q(0, 1)).unwrap();
        let mut c = MarginalComplex::from_covariances(&s);
        strip(&mut c, &[0, 1]);
        let res = solve_complex(&c).unwrap();
        let w = res.witness().expect("feasible");
        let ab = witness_marginal(&c, w, &["A", "B"]).unwrap();
        assert_eq!(ab, c.constraints[0].table);
        let ac = witness_marginal(&c, w, &["A", "C"]).unwrap();
        assert_eq!(ac, c.constraints[1].table);
    }

    #[test]
    fn feasible_complex_rejects_every_certificate() {
        let s = CovarianceTriple::new(q(0, 1), q(0, 1), q(0, 1)).unwrap();
        let c = MarginalComplex::from_covariances(&s);
        for k in 0..13 {
            for v in [q(1, 1), q(-1, 1), q(-3, 7)] {
                let mut y = vec![Rational::zero(); 13];
                y[k] = v;
                assert!(!verify_certificate(&c, &y).unwrap());
            }
        }
    }

    #[test]
    fn overlap_disagreement_is_reported_before_lp() {
        let mut c = frustrated();
        // AC with a skewed A marginal
        c.constraints[1].table = pair_table(&PairDensity::new([q(1, 2), q(1, 4), q(1, 8), q(1, 8)]).unwrap());
        match solve_complex(&c) {
            Err(Error::InconsistentOverlap { first, second, over, .. }) => {
                assert_eq!((first, second), (0, 1));
                assert_eq!(over, ["A"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        let mut c = frustrated();
        c.constraints[2].over = vec!["B".into(), "D".into()];
        assert!(matches!(solve_complex(&c), Err(Error::InvalidComplex(_))));

        let mut c = frustrated();
        c.constraints[2].over = vec!["B".into(), "A".into()];
        assert!(matches!(solve_complex(&c), Err(Error::InvalidComplex(_))));

        let mut c = frustrated();
        c.constraints[0].table.insert("1,2".into(), q(0, 1));
        assert!(matches!(solve_complex(&c), Err(Error::InvalidComplex(_))));

        let mut c = frustrated();
        c.constraints[0].table.insert("1,1".into(), q(1, 2));
        assert!(matches!(solve_complex(&c), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn product_cap() {
        let variables: Vec<Variable> = (0..21)
            .map(|i| Variable {
                name: format!("X{i}"),
                alphabet: binary(),
            })
            .collect();
        let c = MarginalComplex {
            variables,
            constraints: vec![],
        };
        assert!(matches!(
            solve_complex(&c),
            Err(Error::ProductSpaceTooLarge { atoms: 2_097_152, cap: DEFAULT_ATOM_CAP })
        ));
    }

    #[test]
    fn non_binary_alphabet() {
        // X uniform over three labels, Y = X copy; consistent
        let third = q(1, 3);
        let c = MarginalComplex {
            variables: vec![
                Variable {
                    name: "X".into(),
                    alphabet: vec![Symbol::Text("r".into()), Symbol::Text("g".into()), Symbol::Text("b".into())],
                },
                Variable {
                    name: "Y".into(),
                    alphabet: vec![Symbol::Int(0), Symbol::Int(1), Symbol::Int(2)],
                },
            ],
            constraints: vec![
                Constraint {
                    over: vec!["X".into(), "Y".into()],
                    table: [("r,0", &third), ("g,1", &third), ("b,2", &third)]
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), v.clone()))
                        .collect(),
                },
                Constraint {
                    over: vec!["Y".into()],
                    table: ["0", "1", "2"].iter().map(|k| (k.to_string(), third.clone())).collect(),
                },
            ],
        };
        let res = solve_complex(&c).unwrap();
        assert!(res.is_feasible());
        assert_eq!(res.witness().unwrap().atoms[1], "r,1");
    }

    #[test]
    fn json_round_trip() {
        let c = frustrated();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with(r#"{"variables":[{"name":"A","alphabet":[1,-1]}"#));
        let back: MarginalComplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);

        let res = solve_complex(&c).unwrap();
        let v = res.to_json();
        assert_eq!(v["feasible"], false);
        assert_eq!(FeasibilityResult::from_json(&v).unwrap(), res);
    }
}
