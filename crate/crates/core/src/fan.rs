//! Simplicial rational fans with exact validation.
//!
//! A fan is stored as a list of distinct primitive rays plus the set of all
//! cones, each cone being the sorted list of indices of its generating rays.
//! The cone set is closed under subsets and always contains the zero cone.

use crate::feasibility::System;
use crate::lattice::SublatticeBasis;
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Primitive generator of a one-dimensional cone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ray(Vec<BigInt>);

impl Ray {
    /// Accepts only a primitive nonzero vector.
    pub fn new(coords: Vec<BigInt>) -> Option<Ray> {
        if coords.iter().all(Zero::is_zero) || !gcd_all(&coords).is_one() {
            return None;
        }
        Some(Ray(coords))
    }

    /// Divides out the gcd; None for the zero vector.
    pub fn primitivized(coords: Vec<BigInt>) -> Option<Ray> {
        if coords.iter().all(Zero::is_zero) {
            return None;
        }
        let g = gcd_all(&coords);
        Some(Ray(coords.into_iter().map(|c| c / &g).collect()))
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
    }
}

fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FanError {
    RankMismatch { index: usize, expected: usize, found: usize },
    NonPrimitiveRay { index: usize },
    DuplicateRay { index: usize },
    IndexOutOfRange { cone: Vec<usize>, index: usize },
    NotSimplicial { cone: Vec<usize> },
    BadIntersection { a: Vec<usize>, b: Vec<usize> },
    ZeroImageRay { index: usize },
    ImageNotFan { detail: String },
}

impl FanError {
    pub fn code(&self) -> &'static str {
        match self {
            FanError::RankMismatch { .. } => "RANK_MISMATCH",
            FanError::NonPrimitiveRay { .. } => "NON_PRIMITIVE_RAY",
            FanError::DuplicateRay { .. } => "DUPLICATE_RAY",
            FanError::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
            FanError::NotSimplicial { .. } => "NOT_SIMPLICIAL",
            FanError::BadIntersection { .. } => "BAD_INTERSECTION",
            FanError::ZeroImageRay { .. } => "ZERO_IMAGE_RAY",
            FanError::ImageNotFan { .. } => "IMAGE_NOT_FAN",
        }
    }
}

impl fmt::Display for FanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.code())?;
        match self {
            FanError::RankMismatch { index, expected, found } => {
                write!(f, "ray {index} has {found} coordinates, fan rank is {expected}")
            }
            FanError::NonPrimitiveRay { index } => {
                write!(f, "ray {index} is zero or not primitive")
            }
            FanError::DuplicateRay { index } => write!(f, "ray {index} repeats an earlier ray"),
            FanError::IndexOutOfRange { cone, index } => {
                write!(f, "cone {cone:?} references missing ray {index}")
            }
            FanError::NotSimplicial { cone } => {
                write!(f, "cone {cone:?} has linearly dependent generators")
            }
            FanError::BadIntersection { a, b } => {
                write!(f, "cones {a:?} and {b:?} do not meet in a common face")
            }
            FanError::ZeroImageRay { index } => {
                write!(f, "ray {index} maps to zero")
            }
            FanError::ImageNotFan { detail } => write!(f, "{detail}"),
        }
    }
}

impl std::error::Error for FanError {}

#[derive(Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Ray>,
    cones: BTreeSet<Vec<usize>>,
}

impl Fan {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// All cones, including the zero cone, as sorted index lists.
    pub fn cones(&self) -> &BTreeSet<Vec<usize>> {
        &self.cones
    }

    pub fn cone_count(&self) -> usize {
        self.cones.len()
    }

    pub fn contains_cone(&self, cone: &[usize]) -> bool {
        self.cones.contains(cone)
    }

    /// Inclusion-maximal cones. Relies on the cone set being subset-closed.
    pub fn maximal_cones(&self) -> Vec<Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| {
                (0..self.rays.len()).all(|j| {
                    if c.binary_search(&j).is_ok() {
                        return true;
                    }
                    let mut bigger = (*c).clone();
                    bigger.push(j);
                    bigger.sort_unstable();
                    !self.cones.contains(&bigger)
                })
            })
            .cloned()
            .collect()
    }

    /// A simplicial cone has the dimension of its generator count, so a cone
    /// of full rank is exactly a cone with `rank` generators.
    pub fn has_full_dim_cone(&self) -> bool {
        self.cones.iter().any(|c| c.len() == self.rank)
    }

    /// Canonical relabeling: rays sorted lexicographically, cone indices
    /// remapped accordingly. Returns the permutation old index -> new index.
    pub fn canonical_form_with_perm(&self) -> (Fan, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]));
        let mut perm = vec![0usize; self.rays.len()];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let rays: Vec<Ray> = order.iter().map(|&i| self.rays[i].clone()).collect();
        let cones: BTreeSet<Vec<usize>> = self
            .cones
            .iter()
            .map(|c| {
                let mut mapped: Vec<usize> = c.iter().map(|&i| perm[i]).collect();
                mapped.sort_unstable();
                mapped
            })
            .collect();
        (Fan { rank: self.rank, rays, cones }, perm)
    }

    pub fn canonical_form(&self) -> Fan {
        self.canonical_form_with_perm().0
    }
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Fan(rank={}, rays={:?}, cones={})",
            self.rank,
            self.rays,
            self.cones.len()
        )
    }
}

/// Structural equality after canonical relabeling of rays.
pub fn fan_equal(a: &Fan, b: &Fan) -> bool {
    a.canonical_form() == b.canonical_form()
}

/// Builds and fully validates a fan from primitive rays and a list of
/// (typically maximal) cones. The cone set is the subset closure of the list.
pub fn make_fan(
    rank: usize,
    ray_coords: Vec<Vec<BigInt>>,
    cones: Vec<Vec<usize>>,
) -> Result<Fan, FanError> {
    let mut rays: Vec<Ray> = Vec::with_capacity(ray_coords.len());
    for (index, coords) in ray_coords.into_iter().enumerate() {
        if coords.len() != rank {
            return Err(FanError::RankMismatch { index, expected: rank, found: coords.len() });
        }
        let ray = Ray::new(coords).ok_or(FanError::NonPrimitiveRay { index })?;
        if rays.contains(&ray) {
            return Err(FanError::DuplicateRay { index });
        }
        rays.push(ray);
    }
    let mut cone_set: BTreeSet<Vec<usize>> = BTreeSet::new();
    cone_set.insert(Vec::new());
    for cone in cones {
        if let Some(&index) = cone.iter().find(|&&i| i >= rays.len()) {
            return Err(FanError::IndexOutOfRange { cone, index });
        }
        let mut sorted = cone.clone();
        sorted.sort_unstable();
        let had_duplicates = {
            let before = sorted.len();
            sorted.dedup();
            sorted.len() != before
        };
        if had_duplicates {
            // A repeated generator is a linear dependence.
            return Err(FanError::NotSimplicial { cone });
        }
        insert_subsets(&mut cone_set, &sorted);
    }
    let fan = Fan { rank, rays, cones: cone_set };
    match validate_cone_collection(&fan) {
        Ok(()) => Ok(fan),
        Err(Violation::Dependent(cone)) => Err(FanError::NotSimplicial { cone }),
        Err(Violation::BadPair(a, b)) => Err(FanError::BadIntersection { a, b }),
    }
}

fn insert_subsets(set: &mut BTreeSet<Vec<usize>>, cone: &[usize]) {
    // All 2^n subsets; cones stay small because they are simplicial.
    let n = cone.len();
    for mask in 0..(1usize << n) {
        let subset: Vec<usize> =
            (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| cone[i]).collect();
        set.insert(subset);
    }
}

enum Violation {
    Dependent(Vec<usize>),
    BadPair(Vec<usize>, Vec<usize>),
}

/// Checks simpliciality of every maximal cone and the common-face property
/// for every pair of maximal cones; faces inherit both. Pairs of cones share
/// subset ranks and common-face annihilators, so both are memoized across
/// the quadratic pair sweep.
fn validate_cone_collection(fan: &Fan) -> Result<(), Violation> {
    let maximal = fan.maximal_cones();
    let mut ctx = SeparationContext::default();
    for cone in &maximal {
        if ctx.rank(fan, cone) != cone.len() {
            return Err(Violation::Dependent(cone.clone()));
        }
    }
    for i in 0..maximal.len() {
        for j in i + 1..maximal.len() {
            if !meet_in_common_face(fan, &mut ctx, &maximal[i], &maximal[j]) {
                return Err(Violation::BadPair(maximal[i].clone(), maximal[j].clone()));
            }
        }
    }
    Ok(())
}

#[derive(Default)]
struct SeparationContext {
    ranks: BTreeMap<Vec<usize>, usize>,
    annihilators: BTreeMap<Vec<usize>, SublatticeBasis>,
    pairings: BTreeMap<(Vec<usize>, usize), Vec<BigInt>>,
}

impl SeparationContext {
    fn rank(&mut self, fan: &Fan, indices: &[usize]) -> usize {
        if let Some(&r) = self.ranks.get(indices) {
            return r;
        }
        let r = ray_rank(fan, indices);
        self.ranks.insert(indices.to_vec(), r);
        r
    }

    fn annihilator(&mut self, fan: &Fan, common: &[usize]) -> SublatticeBasis {
        self.annihilators
            .entry(common.to_vec())
            .or_insert_with(|| {
                let rows: Vec<Vec<BigInt>> =
                    common.iter().map(|&i| fan.rays[i].coords().to_vec()).collect();
                SublatticeBasis::from_generators(fan.rank, &rows).annihilator()
            })
            .clone()
    }

    fn pairings_for(
        &mut self,
        fan: &Fan,
        common: &[usize],
        perp: &SublatticeBasis,
        ray: usize,
    ) -> Vec<BigInt> {
        self.pairings
            .entry((common.to_vec(), ray))
            .or_insert_with(|| pairings(perp, fan.rays[ray].coords()))
            .clone()
    }
}

fn ray_rank(fan: &Fan, indices: &[usize]) -> usize {
    if indices.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<BigInt>> =
        indices.iter().map(|&i| fan.rays[i].coords().to_vec()).collect();
    IntMatrix::from_rows(&rows).rank()
}

/// Two simplicial cones meet in the common face spanned by their shared rays
/// iff a linear functional vanishes on the shared rays and strictly separates
/// the remaining generators. Both directions are standard for simplicial
/// cones, so a single exact feasibility problem decides the pair.
fn meet_in_common_face(
    fan: &Fan,
    ctx: &mut SeparationContext,
    s: &[usize],
    t: &[usize],
) -> bool {
    if s == t {
        return true;
    }
    let common: Vec<usize> = s.iter().filter(|i| t.binary_search(i).is_ok()).copied().collect();
    let mut union: Vec<usize> = s.to_vec();
    union.extend(t.iter().filter(|i| s.binary_search(i).is_err()));
    union.sort_unstable();
    if ctx.rank(fan, &union) == union.len() {
        // Independent union: both cones are faces of one simplex cone.
        return true;
    }
    let perp = ctx.annihilator(fan, &common);
    if perp.rank() == 0 {
        // No functional vanishes on the common span besides zero, so the
        // strict separation required for distinct cones is impossible.
        return false;
    }
    if perp.rank() == 1 {
        // One separating direction up to sign: a sign scan replaces the
        // feasibility solve.
        let mut forward = true;
        let mut backward = true;
        for &i in s.iter().filter(|i| common.binary_search(i).is_err()) {
            let x = &ctx.pairings_for(fan, &common, &perp, i)[0];
            forward &= x > &BigInt::zero();
            backward &= x < &BigInt::zero();
        }
        for &i in t.iter().filter(|i| common.binary_search(i).is_err()) {
            let x = &ctx.pairings_for(fan, &common, &perp, i)[0];
            forward &= x < &BigInt::zero();
            backward &= x > &BigInt::zero();
        }
        return forward || backward;
    }
    let mut sys = System::new(perp.rank());
    for &i in s.iter().filter(|i| common.binary_search(i).is_err()) {
        sys.add_ge(ctx.pairings_for(fan, &common, &perp, i), BigInt::one());
    }
    for &i in t.iter().filter(|i| common.binary_search(i).is_err()) {
        sys.add_le(ctx.pairings_for(fan, &common, &perp, i), -BigInt::one());
    }
    sys.solve().is_some()
}

fn pairings(basis: &SublatticeBasis, v: &[BigInt]) -> Vec<BigInt> {
    basis.basis().iter().map(|w| w.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Image of a fan under a linear map given as a matrix (columns index the
/// source lattice). Image rays are primitivized; rays or cones whose images
/// coincide are merged; the image collection is then validated as a fan.
pub fn apply_lattice_map(fan: &Fan, map: &IntMatrix) -> Result<Fan, FanError> {
    assert_eq!(map.cols(), fan.rank(), "map domain does not match fan rank");
    let new_rank = map.rows();
    let mut image_rays: Vec<Ray> = Vec::new();
    let mut image_index: Vec<usize> = Vec::with_capacity(fan.rays.len());
    for (index, ray) in fan.rays.iter().enumerate() {
        let image = map.mul_vec(ray.coords());
        let primitive =
            Ray::primitivized(image).ok_or(FanError::ZeroImageRay { index })?;
        let pos = image_rays.iter().position(|r| *r == primitive).unwrap_or_else(|| {
            image_rays.push(primitive.clone());
            image_rays.len() - 1
        });
        image_index.push(pos);
    }
    let cones: BTreeSet<Vec<usize>> = fan
        .cones
        .iter()
        .map(|c| {
            let mut mapped: Vec<usize> = c.iter().map(|&i| image_index[i]).collect();
            mapped.sort_unstable();
            mapped.dedup();
            mapped
        })
        .collect();
    // Subset closure survives the index map: a subset of an image cone is the
    // image of a subcone.
    debug_assert!(cones
        .iter()
        .all(|c| (0..c.len()).all(|k| {
            let mut face = c.clone();
            face.remove(k);
            cones.contains(&face)
        })));
    let image = Fan { rank: new_rank, rays: image_rays, cones };
    match validate_cone_collection(&image) {
        Ok(()) => Ok(image),
        Err(Violation::Dependent(cone)) => Err(FanError::ImageNotFan {
            detail: format!("image cone {cone:?} has linearly dependent generators"),
        }),
        Err(Violation::BadPair(a, b)) => Err(FanError::ImageNotFan {
            detail: format!("image cones {a:?} and {b:?} do not meet in a common face"),
        }),
    }
}
