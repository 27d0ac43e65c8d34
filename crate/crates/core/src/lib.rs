//! Exact-arithmetic toolkit for quotient presentations of products of
//! punctured affine spaces.
//!
//! The ambient object is the product of coordinate spaces with their
//! coordinate subspace arrangements removed, acted on by a diagonalizable
//! subgroup of the scaling torus. The library builds the quotient fan of
//! such an action, recognizes fans of that shape, reports geometric
//! properties of the quotient, and round-trips constructions through
//! recognition. All arithmetic is exact over arbitrary-precision integers
//! and rationals.

pub mod cox;
pub mod fan;
pub mod feasibility;
pub mod homogeneity;
pub mod lattice;
pub mod matrix;
pub mod properties;
pub mod roundtrip;

pub use cox::{
    character_lattice, complement_components, degree_matrix, expected_cone_count,
    punctured_fan, quotient_fan, GroupSizes, InvalidSizes, QuotientPresentation, SubgroupSpec,
};
pub use fan::{apply_lattice_map, fan_equal, make_fan, Fan, FanError, Ray};
pub use homogeneity::{
    acting_group_options, check_overlattice, check_relations, classify, minimal_nonfaces,
    recognize_partition, verify_certificate, GroupPartition, HomogeneityCertificate,
    Rejection, RejectionReason, RejectionWitness,
};
pub use lattice::{
    nonneg_nonzero_in_span, preimage, quotient_invariants, strictly_positive_in_span,
    AbelianGroupInvariants, SublatticeBasis,
};
pub use matrix::{solve_right_integral, IntMatrix};
pub use properties::{
    has_nonconstant_regular_functions, is_projective, is_quasiaffine, property_report,
    property_report_from_parts, PropertyReport,
};
pub use roundtrip::{run_roundtrip, RoundtripConfig, RoundtripReport, TrialOutcome};
