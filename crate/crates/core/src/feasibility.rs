//! Exact feasibility of rational linear inequality systems by
//! Fourier-Motzkin elimination, with back substitution for a witness point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// One inequality: sum(coeffs[i] * x_i) >= rhs, all integer entries.
/// Scaling by a positive rational preserves the constraint, so every row is
/// kept normalized by the gcd of its entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Row {
    coeffs: Vec<BigInt>,
    rhs: BigInt,
}

impl Row {
    fn normalized(mut coeffs: Vec<BigInt>, mut rhs: BigInt) -> Row {
        let mut g = rhs.clone().abs();
        for c in &coeffs {
            g = g.gcd(c);
        }
        if g > BigInt::from(1) {
            for c in &mut coeffs {
                *c /= &g;
            }
            rhs /= &g;
        }
        Row { coeffs, rhs }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// A constant row 0 >= rhs with rhs > 0 is unsatisfiable.
    fn is_contradiction(&self) -> bool {
        self.is_constant() && self.rhs.is_positive()
    }

    fn is_trivial(&self) -> bool {
        self.is_constant() && !self.rhs.is_positive()
    }
}

/// System of linear inequalities over n_vars rational unknowns.
pub struct System {
    n_vars: usize,
    rows: Vec<Row>,
}

impl System {
    pub fn new(n_vars: usize) -> Self {
        System { n_vars, rows: Vec::new() }
    }

    /// sum(coeffs * x) >= rhs
    pub fn add_ge(&mut self, coeffs: Vec<BigInt>, rhs: BigInt) {
        assert_eq!(coeffs.len(), self.n_vars, "constraint arity mismatch");
        self.rows.push(Row::normalized(coeffs, rhs));
    }

    /// sum(coeffs * x) <= rhs
    pub fn add_le(&mut self, coeffs: Vec<BigInt>, rhs: BigInt) {
        let neg: Vec<BigInt> = coeffs.into_iter().map(|c| -c).collect();
        self.add_ge(neg, -rhs);
    }

    /// sum(coeffs * x) = rhs
    pub fn add_eq(&mut self, coeffs: Vec<BigInt>, rhs: BigInt) {
        self.add_ge(coeffs.clone(), rhs.clone());
        self.add_le(coeffs, rhs);
    }

    /// Eliminates variables from the highest index down, then back
    /// substitutes a rational solution. Returns None iff infeasible over Q.
    pub fn solve(self) -> Option<Vec<BigRational>> {
        let n = self.n_vars;
        let mut current = dedup(self.rows);
        if current.iter().any(Row::is_contradiction) {
            return None;
        }
        // stages[k] is the system over variables 0..=(n-1-k).
        let mut stages: Vec<Vec<Row>> = Vec::with_capacity(n);
        for var in (0..n).rev() {
            stages.push(current.clone());
            let mut next: Vec<Row> = Vec::new();
            let mut pos: Vec<&Row> = Vec::new();
            let mut neg: Vec<&Row> = Vec::new();
            for row in &current {
                match row.coeffs[var].sign() {
                    num_bigint::Sign::Plus => pos.push(row),
                    num_bigint::Sign::Minus => neg.push(row),
                    num_bigint::Sign::NoSign => next.push(row.clone()),
                }
            }
            for p in &pos {
                for q in &neg {
                    // (-q_v) * p + p_v * q cancels variable var; both
                    // multipliers are positive so the implication is valid.
                    let a = p.coeffs[var].clone();
                    let b = -q.coeffs[var].clone();
                    let coeffs: Vec<BigInt> = p
                        .coeffs
                        .iter()
                        .zip(&q.coeffs)
                        .map(|(pc, qc)| &b * pc + &a * qc)
                        .collect();
                    let rhs = &b * &p.rhs + &a * &q.rhs;
                    next.push(Row::normalized(coeffs, rhs));
                }
            }
            current = dedup(next);
            if current.iter().any(Row::is_contradiction) {
                return None;
            }
        }
        debug_assert!(current.iter().all(Row::is_constant));

        let mut vals = vec![BigRational::zero(); n];
        for var in 0..n {
            let stage = &stages[n - 1 - var];
            let mut lower: Option<BigRational> = None;
            let mut upper: Option<BigRational> = None;
            for row in stage {
                if row.coeffs[var].is_zero() {
                    continue;
                }
                let mut acc = BigRational::from_integer(row.rhs.clone());
                for j in 0..var {
                    acc -= BigRational::from_integer(row.coeffs[j].clone()) * &vals[j];
                }
                let bound = acc / BigRational::from_integer(row.coeffs[var].clone());
                if row.coeffs[var].is_positive() {
                    lower = Some(match lower {
                        Some(l) if l >= bound => l,
                        _ => bound,
                    });
                } else {
                    upper = Some(match upper {
                        Some(u) if u <= bound => u,
                        _ => bound,
                    });
                }
            }
            vals[var] = match (lower, upper) {
                (Some(l), Some(u)) => {
                    debug_assert!(l <= u, "elimination guarantees a nonempty interval");
                    (l + u) / BigRational::from_integer(BigInt::from(2))
                }
                (Some(l), None) => l,
                (None, Some(u)) => u,
                (None, None) => BigRational::zero(),
            };
        }
        Some(vals)
    }
}

fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut seen = BTreeSet::new();
    rows.into_iter().filter(|r| !r.is_trivial() && seen.insert(r.clone())).collect()
}
