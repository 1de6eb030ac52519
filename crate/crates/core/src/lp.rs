//! Exact feasibility of `A x = b, x ≥ 0` for 0/1 constraint matrices.
//!
//! Phase-one simplex over exact rationals with Bland's rule. An infeasible
//! system yields a Farkas vector `y` with `yᵀA ≥ 0` and `yᵀb < 0`.

use crate::rational::Rational;

/// Equality system whose rows are indicator vectors over `n_atoms` columns.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub n_atoms: usize,
    /// Sorted column indices with coefficient 1 in each row.
    pub rows: Vec<Vec<usize>>,
    pub rhs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

impl LinearSystem {
    pub fn new(n_atoms: usize) -> Self {
        LinearSystem {
            n_atoms,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn push_row(&mut self, support: Vec<usize>, rhs: Rational) {
        debug_assert!(support.iter().all(|&j| j < self.n_atoms));
        self.rows.push(support);
        self.rhs.push(rhs);
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// `x ≥ 0` and `A x = b`.
    pub fn is_solution(&self, x: &[Rational]) -> bool {
        x.len() == self.n_atoms
            && x.iter().all(|v| !v.is_negative())
            && self
                .rows
                .iter()
                .zip(&self.rhs)
                .all(|(row, b)| row.iter().map(|&j| &x[j]).sum::<Rational>() == *b)
    }

    /// `(yᵀA)_j` for every column.
    pub fn combine_columns(&self, y: &[Rational]) -> Vec<Rational> {
        let mut col = vec![Rational::zero(); self.n_atoms];
        for (row, yi) in self.rows.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for &j in row {
                col[j] += yi;
            }
        }
        col
    }

    /// Farkas check: every column combination `≥ 0` and `yᵀb < 0`.
    pub fn is_farkas_certificate(&self, y: &[Rational]) -> bool {
        if y.len() != self.n_rows() {
            return false;
        }
        let rhs: Rational = y.iter().zip(&self.rhs).map(|(a, b)| a * b).sum();
        rhs.is_negative() && self.combine_columns(y).iter().all(|c| !c.is_negative())
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::phase_one(self).run()
    }
}

struct Tableau {
    n: usize,
    m: usize,
    /// `m` rows of `n + m + 1` entries; the last entry is the right-hand side.
    t: Vec<Vec<Rational>>,
    /// reduced costs over the `n + m` columns
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// +1 or -1 per original row, so that every working rhs is nonnegative
    flip: Vec<bool>,
}

impl Tableau {
    fn phase_one(sys: &LinearSystem) -> Self {
        let n = sys.n_atoms;
        let m = sys.n_rows();
        let width = n + m + 1;
        let mut t = Vec::with_capacity(m);
        let mut flip = Vec::with_capacity(m);
        for (i, (row, b)) in sys.rows.iter().zip(&sys.rhs).enumerate() {
            let neg = b.is_negative();
            let unit = if neg { -Rational::one() } else { Rational::one() };
            let mut r = vec![Rational::zero(); width];
            for &j in row {
                r[j] = unit.clone();
            }
            r[n + i] = Rational::one();
            r[width - 1] = if neg { -b } else { b.clone() };
            t.push(r);
            flip.push(neg);
        }
        // minimize the sum of artificials: reduced cost of column j is -Σᵢ t[i][j]
        let mut cost = vec![Rational::zero(); n + m];
        for r in &t {
            for (c, v) in cost.iter_mut().zip(&r[..n]) {
                *c -= v;
            }
        }
        Tableau {
            n,
            m,
            t,
            cost,
            basis: (n..n + m).collect(),
            flip,
        }
    }

    fn run(mut self) -> LpOutcome {
        while let Some(enter) = self.cost.iter().position(|c| c.is_negative()) {
            let leave = self.ratio_test(enter).expect("phase one is bounded below");
            self.pivot(leave, enter);
        }
        let rhs_col = self.n + self.m;
        let objective: Rational = self
            .basis
            .iter()
            .zip(&self.t)
            .filter(|(&b, _)| b >= self.n)
            .map(|(_, r)| &r[rhs_col])
            .sum();
        if objective.is_zero() {
            let mut x = vec![Rational::zero(); self.n];
            for (&b, r) in self.basis.iter().zip(&self.t) {
                if b < self.n {
                    x[b] = r[rhs_col].clone();
                }
            }
            LpOutcome::Feasible(x)
        } else {
            // simplex multipliers y = 1 - (reduced cost of artificial k);
            // the certificate negates them and undoes the row flips
            let cert = (0..self.m)
                .map(|k| {
                    let y = Rational::one() - &self.cost[self.n + k];
                    if self.flip[k] {
                        y
                    } else {
                        -y
                    }
                })
                .collect();
            LpOutcome::Infeasible(cert)
        }
    }

    /// Minimum ratio row; ties go to the smallest basic column index.
    fn ratio_test(&self, enter: usize) -> Option<usize> {
        let rhs_col = self.n + self.m;
        let mut best: Option<(usize, Rational)> = None;
        for (i, r) in self.t.iter().enumerate() {
            let a = &r[enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &r[rhs_col] / a;
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.t[row][col].clone();
        if piv != Rational::one() {
            for v in self.t[row].iter_mut() {
                if !v.is_zero() {
                    *v = &*v / &piv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.t[row]);
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&factor * p);
                }
            }
        }
        let factor = self.cost[col].clone();
        if !factor.is_zero() {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&factor * p);
                }
            }
        }
        self.t[row] = pivot_row;
        self.basis[row] = col;
    }
}
