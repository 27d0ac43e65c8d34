//! Sublattices of Z^d with a canonical Hermite-form basis.

use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Sublattice of Z^d stored as the unique Hermite-form basis of its row span.
/// Two values compare equal exactly when the sublattices coincide.
#[derive(Clone, PartialEq, Eq)]
pub struct SublatticeBasis {
    ambient: usize,
    rows: Vec<Vec<BigInt>>,
}

impl SublatticeBasis {
    /// Canonicalizes an arbitrary generating set.
    pub fn from_generators(ambient: usize, generators: &[Vec<BigInt>]) -> Self {
        assert!(
            generators.iter().all(|g| g.len() == ambient),
            "generator length does not match ambient rank"
        );
        if generators.is_empty() {
            return SublatticeBasis { ambient, rows: Vec::new() };
        }
        let (h, _) = IntMatrix::from_rows(generators).hermite_normal_form();
        let rows = (0..h.rows())
            .map(|i| h.row(i).to_vec())
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        SublatticeBasis { ambient, rows }
    }

    pub fn from_i64_generators(ambient: usize, generators: &[&[i64]]) -> Self {
        let g: Vec<Vec<BigInt>> =
            generators.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        SublatticeBasis::from_generators(ambient, &g)
    }

    /// The zero sublattice.
    pub fn zero(ambient: usize) -> Self {
        SublatticeBasis { ambient, rows: Vec::new() }
    }

    /// All of Z^d.
    pub fn full(ambient: usize) -> Self {
        SublatticeBasis {
            ambient,
            rows: IntMatrix::identity(ambient).row_vecs(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn as_matrix(&self) -> IntMatrix {
        if self.rows.is_empty() {
            IntMatrix::zero(0, self.ambient)
        } else {
            IntMatrix::from_rows(&self.rows)
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.membership(v).is_some()
    }

    /// Integer coordinates of v in the canonical basis, if v lies in the
    /// sublattice. Back substitution along the staircase of pivots.
    pub fn membership(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient rank");
        let mut rem = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let p = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            let (q, r) = rem[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (rv, bv) in rem.iter_mut().zip(row) {
                    *rv -= &q * bv;
                }
            }
            coeffs.push(q);
        }
        if rem.iter().all(Zero::is_zero) {
            Some(coeffs)
        } else {
            None
        }
    }

    /// {w in Z^d : <w, v> = 0 for all v in the sublattice}. Always saturated.
    pub fn annihilator(&self) -> SublatticeBasis {
        if self.rows.is_empty() {
            return SublatticeBasis::full(self.ambient);
        }
        let kernel = self.as_matrix().transpose().left_kernel();
        SublatticeBasis::from_generators(self.ambient, &kernel)
    }

    /// Smallest saturated sublattice containing this one, together with its
    /// index [saturation : self] = product of the nonzero Smith invariants.
    pub fn saturation_and_index(&self) -> (SublatticeBasis, BigInt) {
        let sat = self.annihilator().annihilator();
        let index: BigInt = self
            .as_matrix()
            .smith_diagonal()
            .into_iter()
            .filter(|d| !d.is_zero())
            .product();
        debug_assert!(index >= BigInt::one());
        debug_assert_eq!(sat.rank(), self.rank());
        (sat, index)
    }

    pub fn is_saturated(&self) -> bool {
        let (sat, _) = self.saturation_and_index();
        *self == sat
    }
}

impl fmt::Debug for SublatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SublatticeBasis(ambient={}, rows=[", self.ambient)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({})", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))?;
        }
        write!(f, "])")
    }
}

/// {x in Z^d : map * x lies in target}, for an m-by-d map into Z^m.
/// Computed as the x-projection of the integer kernel of [map | -basis^T].
pub fn preimage(map: &IntMatrix, target: &SublatticeBasis) -> SublatticeBasis {
    assert_eq!(map.rows(), target.ambient_rank(), "map codomain does not match target ambient");
    let d = map.cols();
    let k = target.rank();
    let mut stacked = IntMatrix::zero(d + k, map.rows());
    for i in 0..d {
        for j in 0..map.rows() {
            stacked.set(i, j, map.at(j, i).clone());
        }
    }
    for l in 0..k {
        for j in 0..map.rows() {
            stacked.set(d + l, j, -target.basis()[l][j].clone());
        }
    }
    let kernel = stacked.left_kernel();
    let projected: Vec<Vec<BigInt>> = kernel.into_iter().map(|w| w[..d].to_vec()).collect();
    SublatticeBasis::from_generators(d, &projected)
}

/// Invariant factors of Z^m / A: nonzero torsion factors in a divisibility
/// chain (1s dropped), then one 0 per free factor.
#[derive(Clone, PartialEq, Eq)]
pub struct AbelianGroupInvariants {
    pub factors: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|f| f.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|f| !f.is_zero()).cloned().collect()
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> =
            self.torsion_factors().iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroupInvariants({self})")
    }
}

/// Invariant factor decomposition of Z^m / A via the Smith form of A's basis.
pub fn quotient_invariants(a: &SublatticeBasis) -> AbelianGroupInvariants {
    let m = a.ambient_rank();
    let mut factors: Vec<BigInt> = a
        .as_matrix()
        .smith_diagonal()
        .into_iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .collect();
    factors.extend(std::iter::repeat_with(BigInt::zero).take(m - a.rank()));
    AbelianGroupInvariants { factors }
}

/// A vector of the sublattice with every coordinate strictly positive, if the
/// rational span contains one. Feasibility of x = t * basis, x_i >= 1 over Q;
/// the witness is cleared of denominators and scaled by the saturation index
/// so it lands in the sublattice itself.
pub fn strictly_positive_in_span(l: &SublatticeBasis) -> Option<Vec<BigInt>> {
    span_witness(l, false)
}

/// A nonzero vector of the sublattice with all coordinates >= 0, if the
/// rational span contains one (posed as x >= 0, sum x_i = 1).
pub fn nonneg_nonzero_in_span(l: &SublatticeBasis) -> Option<Vec<BigInt>> {
    span_witness(l, true)
}

fn span_witness(l: &SublatticeBasis, nonneg_nonzero: bool) -> Option<Vec<BigInt>> {
    use crate::feasibility::System;
    use num_rational::BigRational;
    let d = l.ambient_rank();
    if d == 0 {
        // The empty vector is vacuously positive but never nonzero.
        return if nonneg_nonzero { None } else { Some(Vec::new()) };
    }
    let r = l.rank();
    if r == 0 {
        return None;
    }
    let mut sys = System::new(r);
    for j in 0..d {
        let col: Vec<BigInt> = l.basis().iter().map(|b| b[j].clone()).collect();
        let rhs = if nonneg_nonzero { BigInt::zero() } else { BigInt::one() };
        sys.add_ge(col, rhs);
    }
    if nonneg_nonzero {
        let sums: Vec<BigInt> = l.basis().iter().map(|b| b.iter().sum()).collect();
        sys.add_eq(sums, BigInt::one());
    }
    let t = sys.solve()?;
    let x: Vec<BigRational> = (0..d)
        .map(|j| {
            l.basis()
                .iter()
                .zip(&t)
                .map(|(b, ti)| ti * BigRational::from_integer(b[j].clone()))
                .sum()
        })
        .collect();
    let denom_lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let (_, index) = l.saturation_and_index();
    let scale = denom_lcm * index;
    let witness: Vec<BigInt> = x
        .iter()
        .map(|v| {
            let scaled = v * BigRational::from_integer(scale.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    debug_assert!(l.contains(&witness), "scaled witness must lie in the sublattice");
    if nonneg_nonzero {
        debug_assert!(witness.iter().all(|c| !c.is_negative()));
        debug_assert!(witness.iter().any(|c| c.is_positive()));
    } else {
        debug_assert!(witness.iter().all(Signed::is_positive));
    }
    Some(witness)
}
