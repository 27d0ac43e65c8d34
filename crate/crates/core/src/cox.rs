//! Fans of products of punctured affine spaces and their quotients by
//! closed subgroups of the componentwise scaling quasitorus.
//!
//! Sizes (n_1, ..., n_m), all n_j >= 2, fix the space prod_j (K^{n_j} \ 0)
//! with its coordinate fan in Z^d, d = sum n_j: cones are spanned by basis
//! vectors missing at least one coordinate from every block. A closed
//! subgroup S of the scaling torus (K^*)^m is encoded by the sublattice A of
//! characters of (K^*)^m that vanish on S; the quotient fan is the image of
//! the coordinate fan under pairing with a basis of the character lattice
//! M_S, which also absorbs the finite-index overlattice of the quotient.

use crate::fan::{apply_lattice_map, make_fan, Fan};
use crate::lattice::{preimage, SublatticeBasis};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;
use std::ops::Range;

/// Block sizes (n_1, ..., n_m) with m >= 1 and every n_j >= 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupSizes {
    sizes: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvalidSizes(pub String);

impl fmt::Display for InvalidSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid sizes: {}", self.0)
    }
}

impl std::error::Error for InvalidSizes {}

impl GroupSizes {
    pub fn new(sizes: Vec<usize>) -> Result<Self, InvalidSizes> {
        if sizes.is_empty() {
            return Err(InvalidSizes("at least one block is required".into()));
        }
        if let Some(&n) = sizes.iter().find(|&&n| n < 2) {
            return Err(InvalidSizes(format!("block size {n} is below the minimum of 2")));
        }
        Ok(GroupSizes { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of blocks m.
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Total dimension d = sum of the block sizes.
    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Coordinate range of block j.
    pub fn block(&self, j: usize) -> Range<usize> {
        let start: usize = self.sizes[..j].iter().sum();
        start..start + self.sizes[j]
    }
}

/// Closed subgroup S of the scaling torus (K^*)^m, encoded by the sublattice
/// A of Z^m of characters vanishing on S. A = 0 is the whole torus, A = Z^m
/// the trivial subgroup.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupSpec {
    m: usize,
    relations: SublatticeBasis,
}

impl SubgroupSpec {
    pub fn new(m: usize, generators: &[Vec<BigInt>]) -> Self {
        SubgroupSpec { m, relations: SublatticeBasis::from_generators(m, generators) }
    }

    pub fn from_basis(relations: SublatticeBasis) -> Self {
        SubgroupSpec { m: relations.ambient_rank(), relations }
    }

    /// S = the whole scaling torus (no vanishing characters).
    pub fn whole_torus(m: usize) -> Self {
        SubgroupSpec { m, relations: SublatticeBasis::zero(m) }
    }

    /// S = trivial subgroup (every character vanishes).
    pub fn trivial(m: usize) -> Self {
        SubgroupSpec { m, relations: SublatticeBasis::full(m) }
    }

    pub fn torus_count(&self) -> usize {
        self.m
    }

    pub fn relations(&self) -> &SublatticeBasis {
        &self.relations
    }

    pub fn is_whole_torus(&self) -> bool {
        self.relations.rank() == 0
    }
}

/// Fan of prod_j (K^{n_j} \ 0) in Z^d: rays are the standard basis vectors,
/// cones the coordinate subsets that omit at least one index of every block.
/// Cone count is prod_j (2^{n_j} - 1), counting the zero cone.
pub fn punctured_fan(sizes: &GroupSizes) -> Fan {
    let d = sizes.total();
    let rays = IntMatrix::identity(d).row_vecs();
    // Maximal cones drop exactly one coordinate from every block.
    let mut maximal: Vec<Vec<usize>> = vec![Vec::new()];
    for j in 0..sizes.count() {
        let block = sizes.block(j);
        let mut grown = Vec::with_capacity(maximal.len() * block.len());
        for omitted in block.clone() {
            for stem in &maximal {
                let mut cone = stem.clone();
                cone.extend(block.clone().filter(|&i| i != omitted));
                grown.push(cone);
            }
        }
        maximal = grown;
    }
    make_fan(d, rays, maximal).expect("coordinate fan construction cannot fail")
}

/// Expected cone count of the punctured fan for the given sizes.
pub fn expected_cone_count(sizes: &GroupSizes) -> BigInt {
    sizes
        .sizes()
        .iter()
        .map(|&n| (BigInt::one() << n) - BigInt::one())
        .product()
}

/// m-by-d matrix whose row j is the indicator of block j; as a map it sends
/// a character of the big torus to its restriction to the scaling torus.
pub fn degree_matrix(sizes: &GroupSizes) -> IntMatrix {
    let mut f = IntMatrix::zero(sizes.count(), sizes.total());
    for j in 0..sizes.count() {
        for i in sizes.block(j) {
            f.set(j, i, BigInt::one());
        }
    }
    f
}

/// M_S = characters of the big torus whose restriction to the scaling torus
/// vanishes on S: the preimage of A under the degree matrix. Its rank is
/// d - m + rank A.
pub fn character_lattice(sizes: &GroupSizes, subgroup: &SubgroupSpec) -> SublatticeBasis {
    assert_eq!(sizes.count(), subgroup.torus_count(), "block count mismatch");
    preimage(&degree_matrix(sizes), subgroup.relations())
}

/// Quotient fan together with the data used to build it.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub sizes: GroupSizes,
    pub subgroup: SubgroupSpec,
    /// Canonical basis of M_S; also the rows of the projection.
    pub ms_basis: SublatticeBasis,
    /// r-by-d projection onto the quotient cocharacter lattice Z^r,
    /// r = d - m + rank A.
    pub projection: IntMatrix,
    /// Fan ray index of the image of each coordinate vector.
    pub ray_of_coordinate: Vec<usize>,
    pub fan: Fan,
}

/// Image of the coordinate fan under pairing with the canonical basis of
/// M_S. The projection is injective on coordinate rays and on cones, so the
/// quotient keeps d rays and the full cone count.
pub fn quotient_fan(sizes: &GroupSizes, subgroup: &SubgroupSpec) -> QuotientPresentation {
    let ms_basis = character_lattice(sizes, subgroup);
    let projection = ms_basis.as_matrix();
    let source = punctured_fan(sizes);
    let fan = apply_lattice_map(&source, &projection)
        .expect("projection of the coordinate fan is always a fan");

    let d = sizes.total();
    assert_eq!(fan.rays().len(), d, "projection must stay injective on rays");
    assert_eq!(
        BigInt::from(fan.cone_count()),
        expected_cone_count(sizes),
        "projection must preserve the cone count"
    );
    let ray_of_coordinate: Vec<usize> = (0..d)
        .map(|i| {
            let image = projection.col_vec(i);
            let pos = fan
                .rays()
                .iter()
                .position(|r| r.coords() == image.as_slice())
                .expect("coordinate images are primitive");
            pos
        })
        .collect();
    QuotientPresentation { sizes: sizes.clone(), subgroup: subgroup.clone(), ms_basis, projection, ray_of_coordinate, fan }
}

/// Dimensions of the components removed from the affine product: component j
/// (1-based) is a product of a punctured block with the origins of the other
/// blocks and has dimension d - n_j.
pub fn complement_components(sizes: &GroupSizes) -> Vec<(usize, usize)> {
    let d = sizes.total();
    sizes.sizes().iter().enumerate().map(|(j, &n)| (j + 1, d - n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::fan_equal;

    fn sizes(v: &[usize]) -> GroupSizes {
        GroupSizes::new(v.to_vec()).unwrap()
    }

    fn big_rows(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn sizes_are_validated() {
        assert!(GroupSizes::new(vec![]).is_err());
        assert!(GroupSizes::new(vec![2, 1]).is_err());
        let s = sizes(&[2, 3]);
        assert_eq!(s.total(), 5);
        assert_eq!(s.block(1), 2..5);
    }

    #[test]
    fn punctured_fan_counts() {
        let f = punctured_fan(&sizes(&[2]));
        assert_eq!(f.cone_count(), 3);
        assert!(!f.has_full_dim_cone());
        let f = punctured_fan(&sizes(&[2, 2]));
        assert_eq!(f.cone_count(), 9);
        assert_eq!(f.maximal_cones().len(), 4);
        let f = punctured_fan(&sizes(&[2, 3]));
        assert_eq!(f.cone_count(), 21);
        assert_eq!(BigInt::from(f.cone_count()), expected_cone_count(&sizes(&[2, 3])));
        assert!(f.maximal_cones().iter().all(|c| c.len() == 3));
    }

    #[test]
    fn degree_matrix_blocks() {
        let f = degree_matrix(&sizes(&[2, 3]));
        assert_eq!(f, IntMatrix::from_i64_rows(&[&[1, 1, 0, 0, 0], &[0, 0, 1, 1, 1]]));
    }

    #[test]
    fn character_lattice_of_order_two_subgroup() {
        let s = sizes(&[2]);
        let sub = SubgroupSpec::new(1, &big_rows(&[&[2]]));
        let m = character_lattice(&s, &sub);
        assert_eq!(m.basis().len(), 2);
        assert!(m.contains(&big_rows(&[&[1, 1]])[0]));
        assert!(m.contains(&big_rows(&[&[0, 2]])[0]));
        assert!(!m.contains(&big_rows(&[&[1, 0]])[0]));
    }

    #[test]
    fn quotient_by_order_two_subgroup() {
        let q = quotient_fan(&sizes(&[2]), &SubgroupSpec::new(1, &big_rows(&[&[2]])));
        let expected = make_fan(
            2,
            big_rows(&[&[1, 0], &[1, 2]]),
            vec![vec![0], vec![1]],
        )
        .unwrap();
        assert!(fan_equal(&q.fan, &expected));
        assert!(!q.fan.has_full_dim_cone());
    }

    #[test]
    fn quotient_by_whole_torus_is_product_of_projective_lines() {
        let q = quotient_fan(&sizes(&[2, 2]), &SubgroupSpec::whole_torus(2));
        let expected = make_fan(
            2,
            big_rows(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        )
        .unwrap();
        assert!(fan_equal(&q.fan, &expected));
        assert!(q.fan.has_full_dim_cone());
    }

    #[test]
    fn quotient_by_trivial_subgroup_keeps_coordinate_fan() {
        let s = sizes(&[2, 2]);
        let q = quotient_fan(&s, &SubgroupSpec::trivial(2));
        assert!(fan_equal(&q.fan, &punctured_fan(&s)));
    }

    #[test]
    fn quotient_by_diagonal_torus() {
        // x1 + x2 = x3 + x4: three-dimensional quadric cone minus its apex.
        let sub = SubgroupSpec::new(2, &big_rows(&[&[1, 1]]));
        let q = quotient_fan(&sizes(&[2, 2]), &sub);
        assert_eq!(q.fan.rank(), 3);
        assert_eq!(q.fan.rays().len(), 4);
        assert_eq!(q.fan.cone_count(), 9);
        assert!(!q.fan.has_full_dim_cone());
        assert_eq!(q.ms_basis.rank(), 3);
    }

    #[test]
    fn complement_component_dimensions() {
        assert_eq!(complement_components(&sizes(&[2, 2])), vec![(1, 2), (2, 2)]);
        assert_eq!(complement_components(&sizes(&[5])), vec![(1, 0)]);
        assert_eq!(complement_components(&sizes(&[2, 3])), vec![(1, 3), (2, 2)]);
    }
}
