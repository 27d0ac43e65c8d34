//! Recognition of quotient fans.
//!
//! A fan is the quotient presentation of a product of punctured affine
//! spaces iff (1) its rays span the ambient space and the minimal non-faces
//! of its cone complex partition the rays into blocks of size >= 2, (2)
//! every linear relation among the rays is constant on each block, and (3)
//! the ambient lattice is contained in the span of the rays plus the
//! rational span of the block sums. `classify` decides the three conditions,
//! reconstructs the block sizes and the subgroup, and hands back a
//! certificate that re-verifies by rebuilding the quotient.

use crate::cox::{degree_matrix, quotient_fan, GroupSizes, QuotientPresentation, SubgroupSpec};
use crate::fan::Fan;
use crate::lattice::SublatticeBasis;
use crate::matrix::{solve_right_integral, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

/// Ray indices of the input fan grouped into blocks, in canonical order:
/// blocks sorted by size then by their lexicographically smallest ray, rays
/// inside a block sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupPartition {
    pub groups: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RejectionReason {
    RaysDontSpan,
    NotSimplicial,
    NonfacesDontPartition,
    GroupTooSmall,
    MissingCone,
    ExtraCone,
    RelationConditionFailed,
    OverlatticeConditionFailed,
}

impl RejectionReason {
    pub fn code(&self) -> &'static str {
        match self {
            RejectionReason::RaysDontSpan => "RAYS_DONT_SPAN",
            RejectionReason::NotSimplicial => "NOT_SIMPLICIAL",
            RejectionReason::NonfacesDontPartition => "NONFACES_DONT_PARTITION",
            RejectionReason::GroupTooSmall => "GROUP_TOO_SMALL",
            RejectionReason::MissingCone => "MISSING_CONE",
            RejectionReason::ExtraCone => "EXTRA_CONE",
            RejectionReason::RelationConditionFailed => "RELATION_CONDITION_FAILED",
            RejectionReason::OverlatticeConditionFailed => "OVERLATTICE_CONDITION_FAILED",
        }
    }
}

/// Machine-checkable evidence for a rejection; `Rejection::witness_holds`
/// re-validates it against the fan it was issued for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RejectionWitness {
    /// Rank actually spanned by the rays, smaller than the fan rank.
    DeficientSpan { achieved_rank: usize },
    /// The fan has no rays at all.
    EmptyFan,
    /// Ray covered by no minimal non-face.
    UncoveredRay { ray: usize },
    /// Two minimal non-faces sharing a ray.
    OverlappingNonfaces { a: Vec<usize>, b: Vec<usize> },
    /// Minimal non-face with fewer than two rays.
    SmallGroup { group: Vec<usize> },
    /// Set missing from the cone family although it meets no full block.
    MissingCone { groups: Vec<Vec<usize>>, cone: Vec<usize> },
    /// Cone containing a full block.
    ExtraCone { groups: Vec<Vec<usize>>, cone: Vec<usize> },
    /// Kernel vector of the ray matrix that is not constant on some block.
    ViolatingRelation { groups: Vec<Vec<usize>>, relation: Vec<BigInt> },
    /// Lattice point outside the span of the rays plus the rational span of
    /// the block sums.
    UnreachablePoint { groups: Vec<Vec<usize>>, point: Vec<BigInt> },
    /// Dependent cone reported by fan construction (command-line path).
    DependentCone { cone: Vec<usize> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rejection {
    pub reason: RejectionReason,
    pub detail: String,
    pub witness: RejectionWitness,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.reason.code(), self.detail)
    }
}

impl Rejection {
    fn new(reason: RejectionReason, detail: String, witness: RejectionWitness) -> Self {
        Rejection { reason, detail, witness }
    }

    /// Re-checks the stored witness against a fan.
    pub fn witness_holds(&self, fan: &Fan) -> bool {
        match &self.witness {
            RejectionWitness::DeficientSpan { achieved_rank } => {
                *achieved_rank < fan.rank() && ray_span_rank(fan) == *achieved_rank
            }
            RejectionWitness::EmptyFan => fan.rays().is_empty(),
            RejectionWitness::UncoveredRay { ray } => {
                *ray < fan.rays().len()
                    && minimal_nonfaces(fan).iter().all(|nf| !nf.contains(ray))
            }
            RejectionWitness::OverlappingNonfaces { a, b } => {
                let nonfaces = minimal_nonfaces(fan);
                a != b
                    && nonfaces.contains(a)
                    && nonfaces.contains(b)
                    && a.iter().any(|i| b.contains(i))
            }
            RejectionWitness::SmallGroup { group } => {
                group.len() < 2 && minimal_nonfaces(fan).contains(group)
            }
            RejectionWitness::MissingCone { groups, cone } => {
                !fan.contains_cone(cone)
                    && groups.iter().all(|g| !is_subset(g, cone))
                    && is_partition(groups, fan.rays().len())
            }
            RejectionWitness::ExtraCone { groups, cone } => {
                fan.contains_cone(cone) && groups.iter().any(|g| is_subset(g, cone))
            }
            RejectionWitness::ViolatingRelation { groups, relation } => {
                relation.len() == fan.rays().len()
                    && relation.iter().any(|c| !c.is_zero())
                    && combination_of_rays(fan, relation).iter().all(Zero::is_zero)
                    && groups.iter().any(|g| {
                        g.iter().any(|&i| relation[i] != relation[g[0]])
                    })
            }
            RejectionWitness::UnreachablePoint { groups, point } => {
                point.len() == fan.rank() && !point_reachable(fan, groups, point)
            }
            RejectionWitness::DependentCone { cone } => {
                let rows: Vec<Vec<BigInt>> = cone
                    .iter()
                    .filter(|&&i| i < fan.rays().len())
                    .map(|&i| fan.rays()[i].coords().to_vec())
                    .collect();
                rows.len() == cone.len() && IntMatrix::from_rows(&rows).rank() < cone.len()
            }
        }
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|i| b.contains(i))
}

fn is_partition(groups: &[Vec<usize>], n: usize) -> bool {
    let mut seen = vec![false; n];
    for g in groups {
        for &i in g {
            if i >= n || seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

fn ray_span_rank(fan: &Fan) -> usize {
    if fan.rays().is_empty() {
        return 0;
    }
    let rows: Vec<Vec<BigInt>> = fan.rays().iter().map(|r| r.coords().to_vec()).collect();
    IntMatrix::from_rows(&rows).rank()
}

fn combination_of_rays(fan: &Fan, coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); fan.rank()];
    for (c, ray) in coeffs.iter().zip(fan.rays()) {
        for (a, x) in acc.iter_mut().zip(ray.coords()) {
            *a += c * x;
        }
    }
    acc
}

/// Inclusion-minimal ray sets that are not cones. Enumerated level by level:
/// a candidate of size k has all facets among the cones, so it extends a
/// (k-1)-cone by an index above its maximum. Output-sensitive in the cone
/// count, so no ray cap is needed at practical sizes.
pub fn minimal_nonfaces(fan: &Fan) -> Vec<Vec<usize>> {
    let n = fan.rays().len();
    let mut nonfaces: Vec<Vec<usize>> = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    while !level.is_empty() {
        let mut next: Vec<Vec<usize>> = Vec::new();
        for cone in &level {
            let start = cone.last().map_or(0, |&m| m + 1);
            'candidate: for j in start..n {
                let mut cand = cone.clone();
                cand.push(j);
                // The facet dropping j is `cone`; check the others.
                for skip in 0..cand.len() - 1 {
                    let mut facet = cand.clone();
                    facet.remove(skip);
                    if !fan.contains_cone(&facet) {
                        continue 'candidate;
                    }
                }
                if fan.contains_cone(&cand) {
                    next.push(cand);
                } else {
                    nonfaces.push(cand);
                }
            }
        }
        level = next;
    }
    nonfaces
}

/// Condition (1): rays span, minimal non-faces partition the rays, every
/// block has at least two rays, and the cone family is exactly the family of
/// sets containing no full block.
pub fn recognize_partition(fan: &Fan) -> Result<GroupPartition, Rejection> {
    let n = fan.rays().len();
    let achieved = ray_span_rank(fan);
    if achieved != fan.rank() {
        return Err(Rejection::new(
            RejectionReason::RaysDontSpan,
            format!("rays span a subspace of dimension {achieved} < {}", fan.rank()),
            RejectionWitness::DeficientSpan { achieved_rank: achieved },
        ));
    }
    if n == 0 {
        return Err(Rejection::new(
            RejectionReason::NonfacesDontPartition,
            "fan has no rays to partition".into(),
            RejectionWitness::EmptyFan,
        ));
    }
    let nonfaces = minimal_nonfaces(fan);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (gi, nf) in nonfaces.iter().enumerate() {
        for &i in nf {
            if let Some(prev) = owner[i] {
                return Err(Rejection::new(
                    RejectionReason::NonfacesDontPartition,
                    format!(
                        "minimal non-faces {:?} and {:?} overlap in ray {i}",
                        nonfaces[prev], nf
                    ),
                    RejectionWitness::OverlappingNonfaces {
                        a: nonfaces[prev].clone(),
                        b: nf.clone(),
                    },
                ));
            }
            owner[i] = Some(gi);
        }
    }
    if let Some(ray) = owner.iter().position(Option::is_none) {
        return Err(Rejection::new(
            RejectionReason::NonfacesDontPartition,
            format!("ray {ray} lies in no minimal non-face"),
            RejectionWitness::UncoveredRay { ray },
        ));
    }
    for nf in &nonfaces {
        if nf.len() < 2 {
            return Err(Rejection::new(
                RejectionReason::GroupTooSmall,
                format!("block {nf:?} has fewer than two rays"),
                RejectionWitness::SmallGroup { group: nf.clone() },
            ));
        }
    }

    // Canonical order before the family checks so witnesses carry it.
    let mut groups = nonfaces;
    for g in &mut groups {
        g.sort_by(|&a, &b| fan.rays()[a].cmp(&fan.rays()[b]));
    }
    groups.sort_by(|a, b| {
        (a.len(), &fan.rays()[a[0]]).cmp(&(b.len(), &fan.rays()[b[0]]))
    });

    // The cone family of a fan is determined by its minimal non-faces, so
    // once those are exactly the blocks, both checks below always pass; they
    // stay as cheap defenses against internal inconsistencies.
    for cone in fan.cones() {
        if let Some(g) = groups.iter().find(|g| is_subset(g, cone)) {
            return Err(Rejection::new(
                RejectionReason::ExtraCone,
                format!("cone {cone:?} contains the full block {g:?}"),
                RejectionWitness::ExtraCone { groups: groups.clone(), cone: cone.clone() },
            ));
        }
    }
    let expected: BigInt = groups
        .iter()
        .map(|g| (BigInt::one() << g.len()) - BigInt::one())
        .product();
    if BigInt::from(fan.cone_count()) != expected {
        let missing = find_missing_cone(fan, &groups)
            .expect("cone family is determined by its minimal non-faces");
        return Err(Rejection::new(
            RejectionReason::MissingCone,
            format!("set {missing:?} meets no full block but is not a cone"),
            RejectionWitness::MissingCone { groups: groups.clone(), cone: missing },
        ));
    }

    Ok(GroupPartition { groups })
}

fn find_missing_cone(fan: &Fan, groups: &[Vec<usize>]) -> Option<Vec<usize>> {
    // Cartesian product of proper subsets of each block.
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new()];
    for g in groups {
        let mut grown = Vec::new();
        for mask in 0..(1usize << g.len()) - 1 {
            let part: Vec<usize> =
                (0..g.len()).filter(|&i| mask & (1 << i) != 0).map(|i| g[i]).collect();
            for stem in &candidates {
                let mut cand = stem.clone();
                cand.extend(&part);
                grown.push(cand);
            }
        }
        candidates = grown;
    }
    candidates
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .find(|c| !fan.contains_cone(c))
}

/// Condition (2): every kernel vector of the matrix of rays (as columns) is
/// constant on each block; equivalently the relation space is spanned by
/// block-sum relations.
pub fn check_relations(fan: &Fan, partition: &GroupPartition) -> Result<(), Rejection> {
    let rows: Vec<Vec<BigInt>> = fan.rays().iter().map(|r| r.coords().to_vec()).collect();
    let ray_columns = IntMatrix::from_rows(&rows).transpose();
    for relation in ray_columns.right_kernel() {
        for g in &partition.groups {
            if g.iter().any(|&i| relation[i] != relation[g[0]]) {
                return Err(Rejection::new(
                    RejectionReason::RelationConditionFailed,
                    format!(
                        "relation {relation:?} among the rays is not constant on block {g:?}"
                    ),
                    RejectionWitness::ViolatingRelation {
                        groups: partition.groups.clone(),
                        relation,
                    },
                ));
            }
        }
    }
    Ok(())
}

/// True when `point` lies in (span of rays) + (rational span of block sums).
fn point_reachable(fan: &Fan, groups: &[Vec<usize>], point: &[BigInt]) -> bool {
    let (w, image_rays) = overlattice_images(fan, groups);
    let phi: Vec<BigInt> = pair_all(&w, point);
    image_rays.contains(&phi)
}

/// Quotient data for condition (3): a basis of the functionals vanishing on
/// the block sums, and the image of the ray span under them.
fn overlattice_images(fan: &Fan, groups: &[Vec<usize>]) -> (SublatticeBasis, SublatticeBasis) {
    let r = fan.rank();
    let qs: Vec<Vec<BigInt>> = groups
        .iter()
        .map(|g| {
            let mut q = vec![BigInt::zero(); r];
            for &i in g {
                for (a, x) in q.iter_mut().zip(fan.rays()[i].coords()) {
                    *a += x;
                }
            }
            q
        })
        .collect();
    let w = SublatticeBasis::from_generators(r, &qs).annihilator();
    let images: Vec<Vec<BigInt>> =
        fan.rays().iter().map(|ray| pair_all(&w, ray.coords())).collect();
    let image_rays = SublatticeBasis::from_generators(w.rank(), &images);
    (w, image_rays)
}

fn pair_all(basis: &SublatticeBasis, v: &[BigInt]) -> Vec<BigInt> {
    basis.basis().iter().map(|w| w.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Condition (3): the ambient lattice maps onto the image of the ray span in
/// the quotient by the rational span of the block sums. Failure means the
/// fan asks for a strictly larger overlattice than any subgroup provides.
pub fn check_overlattice(fan: &Fan, partition: &GroupPartition) -> Result<(), Rejection> {
    let (w, image_rays) = overlattice_images(fan, partition.groups.as_slice());
    for i in 0..fan.rank() {
        let mut e = vec![BigInt::zero(); fan.rank()];
        e[i] = BigInt::one();
        let phi = pair_all(&w, &e);
        if !image_rays.contains(&phi) {
            return Err(Rejection::new(
                RejectionReason::OverlatticeConditionFailed,
                format!(
                    "basis vector {e:?} is outside the span of the rays plus the rational \
                     span of the block sums"
                ),
                RejectionWitness::UnreachablePoint {
                    groups: partition.groups.clone(),
                    point: e,
                },
            ));
        }
    }
    Ok(())
}

/// Certificate that a fan presents a quotient of a product of punctured
/// affine spaces: block sizes, the subgroup (as its vanishing characters),
/// the assignment of coordinates to fan rays, and the unimodular
/// identification of the rebuilt quotient lattice with the fan lattice.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneityCertificate {
    pub sizes: GroupSizes,
    pub subgroup: SubgroupSpec,
    /// Coordinate k of the rebuilt quotient maps to fan ray
    /// `ray_assignment[k]`; coordinates are grouped into blocks in order.
    pub ray_assignment: Vec<usize>,
    /// Unimodular matrix carrying the rebuilt quotient lattice onto the fan
    /// lattice, column-compatible with the assignment.
    pub identification: IntMatrix,
}

/// Decides whether the fan is a quotient presentation and reconstructs the
/// construction data. The returned certificate has been re-verified against
/// the input by `verify_certificate`; an unverifiable certificate is an
/// internal error and panics.
pub fn classify(fan: &Fan) -> Result<HomogeneityCertificate, Rejection> {
    let partition = recognize_partition(fan)?;
    check_relations(fan, &partition)?;
    check_overlattice(fan, &partition)?;

    let sizes = GroupSizes::new(partition.groups.iter().map(Vec::len).collect())
        .expect("partition blocks have size >= 2");
    let ray_assignment: Vec<usize> = partition.groups.concat();
    let d = sizes.total();
    let r = fan.rank();

    // Characters of the fan lattice, paired against the rays in assignment
    // order, sweep out the character lattice M_S inside Z^d; its image under
    // the degree map is exactly the vanishing-character lattice A.
    let pairing = IntMatrix::from_fn(r, d, |l, i| {
        fan.rays()[ray_assignment[i]].coords()[l].clone()
    });
    let mstar = SublatticeBasis::from_generators(d, &pairing.row_vecs());
    let degrees = degree_matrix(&sizes);
    let a_generators: Vec<Vec<BigInt>> =
        mstar.basis().iter().map(|b| degrees.mul_vec(b)).collect();
    let subgroup = SubgroupSpec::new(sizes.count(), &a_generators);

    let presentation = quotient_fan(&sizes, &subgroup);
    let identification = solve_identification(fan, &presentation, &ray_assignment)
        .expect("INTERNAL_ROUNDTRIP_FAILURE: no unimodular identification for an accepted fan");
    let certificate =
        HomogeneityCertificate { sizes, subgroup, ray_assignment, identification };
    assert!(
        verify_certificate(fan, &certificate),
        "INTERNAL_ROUNDTRIP_FAILURE: certificate failed re-verification"
    );
    Ok(certificate)
}

/// Unimodular psi with psi * (projected coordinate i) = assigned fan ray,
/// for all coordinates. None when the linear system has no such solution.
fn solve_identification(
    fan: &Fan,
    presentation: &QuotientPresentation,
    assignment: &[usize],
) -> Option<IntMatrix> {
    let r = presentation.fan.rank();
    if fan.rank() != r {
        return None;
    }
    let p = &presentation.projection;
    let d = p.cols();
    // Greedily pick coordinates whose projections are linearly independent.
    let mut selected: Vec<usize> = Vec::with_capacity(r);
    for i in 0..d {
        if selected.len() == r {
            break;
        }
        let mut rows: Vec<Vec<BigInt>> = selected.iter().map(|&k| p.col_vec(k)).collect();
        rows.push(p.col_vec(i));
        if IntMatrix::from_rows(&rows).rank() == rows.len() {
            selected.push(i);
        }
    }
    if selected.len() != r {
        return None;
    }
    let pb = IntMatrix::from_fn(r, r, |row, k| p.at(row, selected[k]).clone());
    let tb = IntMatrix::from_fn(r, r, |row, k| {
        fan.rays()[assignment[selected[k]]].coords()[row].clone()
    });
    let psi = solve_right_integral(&pb, &tb)?;
    let full_target = IntMatrix::from_fn(r, d, |row, i| {
        fan.rays()[assignment[i]].coords()[row].clone()
    });
    if psi.mul(p) != full_target || !psi.det().abs().is_one() {
        return None;
    }
    Some(psi)
}

/// Rebuilds the quotient named by the certificate and checks that the
/// identification is a lattice isomorphism matching rays and cones.
pub fn verify_certificate(fan: &Fan, certificate: &HomogeneityCertificate) -> bool {
    let d = certificate.sizes.total();
    if certificate.ray_assignment.len() != d || fan.rays().len() != d {
        return false;
    }
    let mut seen = vec![false; d];
    for &a in &certificate.ray_assignment {
        if a >= d || seen[a] {
            return false;
        }
        seen[a] = true;
    }
    if certificate.sizes.count() != certificate.subgroup.torus_count() {
        return false;
    }
    let presentation = quotient_fan(&certificate.sizes, &certificate.subgroup);
    let r = presentation.fan.rank();
    let psi = &certificate.identification;
    if fan.rank() != r || psi.rows() != r || psi.cols() != r || !psi.det().abs().is_one() {
        return false;
    }
    let mapped = psi.mul(&presentation.projection);
    for i in 0..d {
        if mapped.col_vec(i).as_slice() != fan.rays()[certificate.ray_assignment[i]].coords() {
            return false;
        }
    }
    // Transport of cones: coordinate i sits on presentation ray
    // ray_of_coordinate[i] and on fan ray ray_assignment[i].
    let mut sigma = vec![usize::MAX; d];
    for i in 0..d {
        let k = presentation.ray_of_coordinate[i];
        if sigma[k] != usize::MAX && sigma[k] != certificate.ray_assignment[i] {
            return false;
        }
        sigma[k] = certificate.ray_assignment[i];
    }
    if sigma.iter().any(|&s| s == usize::MAX) {
        return false;
    }
    let transported: BTreeSet<Vec<usize>> = presentation
        .fan
        .cones()
        .iter()
        .map(|c| {
            let mut mapped: Vec<usize> = c.iter().map(|&k| sigma[k]).collect();
            mapped.sort_unstable();
            mapped
        })
        .collect();
    transported == *fan.cones()
}

/// Semisimple factor choices acting on each block: SL(n) always, Sp(n) for
/// even n.
pub fn acting_group_options(sizes: &GroupSizes) -> Vec<Vec<String>> {
    sizes
        .sizes()
        .iter()
        .map(|&n| {
            let mut options = vec![format!("SL({n})")];
            if n % 2 == 0 {
                options.push(format!("Sp({n})"));
            }
            options
        })
        .collect()
}
