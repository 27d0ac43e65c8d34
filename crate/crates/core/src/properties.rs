//! Geometric properties of a quotient of a product of punctured affine
//! spaces, read off from a verified certificate: the block sizes and the
//! vanishing-character lattice determine everything.

use crate::cox::{character_lattice, quotient_fan, GroupSizes, SubgroupSpec};
use crate::homogeneity::{acting_group_options, HomogeneityCertificate};
use crate::lattice::{
    nonneg_nonzero_in_span, quotient_invariants, strictly_positive_in_span,
    AbelianGroupInvariants,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropertyReport {
    /// Always true: orbit spaces of this shape carry quasiprojective fans.
    pub quasiprojective: bool,
    /// Always false: removing the coordinate subspaces destroys affineness.
    pub affine: bool,
    pub projective: bool,
    pub quasiaffine: bool,
    pub has_nonconstant_regular_functions: bool,
    pub has_torus_fixed_point: bool,
    pub dimension: usize,
    /// Divisor class group of the quotient.
    pub class_group: AbelianGroupInvariants,
    /// Per block: semisimple groups that can act with this block as a
    /// factor.
    pub acting_groups: Vec<Vec<String>>,
}

/// True exactly when the subgroup is the whole scaling torus; equivalently
/// the quotient fan keeps a cone of full dimension.
pub fn is_projective(certificate: &HomogeneityCertificate) -> bool {
    certificate.subgroup.is_whole_torus()
}

/// The quotient is quasiaffine iff some character positive on every
/// coordinate vanishes on the subgroup.
pub fn is_quasiaffine(certificate: &HomogeneityCertificate) -> bool {
    quasiaffine_from_parts(&certificate.sizes, &certificate.subgroup)
}

/// Nonconstant global functions exist iff some nonzero character with
/// nonnegative exponents vanishes on the subgroup.
pub fn has_nonconstant_regular_functions(certificate: &HomogeneityCertificate) -> bool {
    regular_functions_from_parts(&certificate.sizes, &certificate.subgroup)
}

pub fn property_report(certificate: &HomogeneityCertificate) -> PropertyReport {
    property_report_from_parts(&certificate.sizes, &certificate.subgroup)
}

fn quasiaffine_from_parts(sizes: &GroupSizes, subgroup: &SubgroupSpec) -> bool {
    strictly_positive_in_span(&character_lattice(sizes, subgroup)).is_some()
}

fn regular_functions_from_parts(sizes: &GroupSizes, subgroup: &SubgroupSpec) -> bool {
    nonneg_nonzero_in_span(&character_lattice(sizes, subgroup)).is_some()
}

/// Report for the quotient named by block sizes and vanishing characters,
/// without requiring an already-classified certificate.
pub fn property_report_from_parts(
    sizes: &GroupSizes,
    subgroup: &SubgroupSpec,
) -> PropertyReport {
    let a_rank = subgroup.relations().rank();
    let dimension = sizes.total() - (sizes.count() - a_rank);
    let projective = subgroup.is_whole_torus();
    // A torus fixed point is a full-dimensional cone of the quotient fan,
    // which survives the projection exactly in the projective case.
    let has_torus_fixed_point = quotient_fan(sizes, subgroup).fan.has_full_dim_cone();
    assert_eq!(projective, has_torus_fixed_point);
    PropertyReport {
        quasiprojective: true,
        affine: false,
        projective,
        quasiaffine: quasiaffine_from_parts(sizes, subgroup),
        has_nonconstant_regular_functions: regular_functions_from_parts(sizes, subgroup),
        has_torus_fixed_point,
        dimension,
        class_group: quotient_invariants(subgroup.relations()),
        acting_groups: acting_group_options(sizes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homogeneity::classify;
    use num_bigint::BigInt;

    fn sizes(xs: &[usize]) -> GroupSizes {
        GroupSizes::new(xs.to_vec()).unwrap()
    }

    fn subgroup(m: usize, gens: &[&[i64]]) -> SubgroupSpec {
        let rows: Vec<Vec<BigInt>> =
            gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        SubgroupSpec::new(m, &rows)
    }

    fn certified_report(s: &GroupSizes, a: &SubgroupSpec) -> PropertyReport {
        let q = quotient_fan(s, a);
        let cert = classify(&q.fan).expect("constructed quotients classify");
        let direct = property_report_from_parts(s, a);
        let via_cert = property_report(&cert);
        assert_eq!(direct, via_cert);
        direct
    }

    #[test]
    fn projective_space_report() {
        let r = certified_report(&sizes(&[3]), &SubgroupSpec::whole_torus(1));
        assert_eq!(r.dimension, 2);
        assert_eq!(r.class_group.to_string(), "Z");
        assert!(r.projective && r.quasiprojective && r.has_torus_fixed_point);
        assert!(!r.affine && !r.quasiaffine);
        assert!(!r.has_nonconstant_regular_functions);
        assert_eq!(r.acting_groups, vec![vec!["SL(3)".to_string()]]);
    }

    #[test]
    fn punctured_plane_report() {
        let r = certified_report(&sizes(&[2]), &SubgroupSpec::trivial(1));
        assert_eq!(r.dimension, 2);
        assert!(r.class_group.is_trivial());
        assert!(!r.projective && !r.has_torus_fixed_point);
        assert!(r.quasiaffine && r.has_nonconstant_regular_functions);
    }

    #[test]
    fn order_two_quotient_report() {
        let r = certified_report(&sizes(&[2]), &subgroup(1, &[&[2]]));
        assert_eq!(r.dimension, 2);
        assert_eq!(r.class_group.to_string(), "Z/2");
        assert!(!r.projective);
        assert!(r.quasiaffine && r.has_nonconstant_regular_functions);
    }

    #[test]
    fn diagonal_action_report() {
        let r = certified_report(&sizes(&[2, 2]), &subgroup(2, &[&[1, 1]]));
        assert_eq!(r.dimension, 3);
        assert_eq!(r.class_group.to_string(), "Z");
        assert!(!r.projective);
        assert!(r.quasiaffine && r.has_nonconstant_regular_functions);
        assert_eq!(r.acting_groups.len(), 2);
        assert_eq!(r.acting_groups[0], vec!["SL(2)".to_string(), "Sp(2)".to_string()]);
    }

    #[test]
    fn hyperbolic_action_report() {
        let r = certified_report(&sizes(&[2, 2]), &subgroup(2, &[&[1, -1]]));
        assert_eq!(r.dimension, 3);
        assert_eq!(r.class_group.to_string(), "Z");
        assert!(!r.projective && !r.quasiaffine);
        assert!(!r.has_nonconstant_regular_functions);
    }

    #[test]
    fn product_of_projective_lines_report() {
        let r = certified_report(&sizes(&[2, 2]), &SubgroupSpec::whole_torus(2));
        assert_eq!(r.dimension, 2);
        assert_eq!(r.class_group.to_string(), "Z^2");
        assert!(r.projective && r.has_torus_fixed_point);
        assert!(!r.quasiaffine && !r.has_nonconstant_regular_functions);
    }
}
