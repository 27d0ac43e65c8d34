//! Acceptance gate: one check per shipped guarantee, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance`.

use homtoric::{
    character_lattice, classify, complement_components, expected_cone_count, fan_equal,
    is_projective, make_fan, property_report, property_report_from_parts, punctured_fan,
    quotient_fan, run_roundtrip, strictly_positive_in_span, GroupSizes, IntMatrix,
    nonneg_nonzero_in_span, RejectionReason, RoundtripConfig, SublatticeBasis, SubgroupSpec,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::panic;
use std::time::{Duration, Instant};

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let mut failed: Vec<String> = Vec::new();
    let secs = Duration::from_secs;

    check("1", secs(1), &mut failed, criterion_1_diagonal_subtorus_example);
    check("2", secs(1), &mut failed, criterion_2_quadric_cone_example);
    check("3", secs(1), &mut failed, criterion_3_projective_product);
    check("4", secs(60), &mut failed, criterion_4_roundtrip_500);
    check("5a", secs(1), &mut failed, criterion_5a_affine_factor_rejected);
    check("5b", secs(1), &mut failed, criterion_5b_blowup_rejected);
    check("5c", secs(1), &mut failed, criterion_5c_overlattice_rejected);
    check("6", secs(10), &mut failed, criterion_6_cone_count_conservation);
    check("7", secs(1), &mut failed, criterion_7_complement_dimensions);
    check("8", secs(30), &mut failed, criterion_8_stiemke_exclusivity);
    check("9", secs(30), &mut failed, criterion_9_normal_form_identities);
    check("10", secs(1), &mut failed, criterion_10_order_two_golden);

    let _ = panic::take_hook();
    if !failed.is_empty() {
        eprintln!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}

fn check(label: &str, bound: Duration, failed: &mut Vec<String>, body: fn()) {
    let start = Instant::now();
    match panic::catch_unwind(body) {
        Ok(()) if start.elapsed() <= bound => {
            println!("[criterion {label}] PASS ({:.2?})", start.elapsed());
        }
        Ok(()) => {
            println!(
                "[criterion {label}] FAIL: exceeded time bound {bound:?} (took {:.2?})",
                start.elapsed()
            );
            failed.push(label.to_string());
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic without message".to_string());
            println!("[criterion {label}] FAIL: {message}");
            failed.push(label.to_string());
        }
    }
}

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn big_rows(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| big(r)).collect()
}

fn probe(lattice: &SublatticeBasis, vectors: &[[i64; 4]], expect_member: bool) {
    for v in vectors {
        let got = lattice.membership(&big(v)).is_some();
        assert_eq!(got, expect_member, "membership of {v:?} should be {expect_member}");
    }
}

/// Diagonal one-parameter subtorus of the 2x2-block torus: vanishing
/// characters (1,-1), characters on the total space sum to zero.
fn criterion_1_diagonal_subtorus_example() {
    let sizes = GroupSizes::new(vec![2, 2]).unwrap();
    let subgroup = SubgroupSpec::new(2, &big_rows(&[&[1, -1]]));
    let ms = character_lattice(&sizes, &subgroup);
    let members = [
        [0, 0, 0, 0],
        [1, -1, 0, 0],
        [1, 0, -1, 0],
        [1, 0, 0, -1],
        [0, 1, -1, 0],
        [2, -1, -1, 0],
        [3, 1, -2, -2],
        [5, -5, 7, -7],
        [1, 1, 1, -3],
        [-2, -2, 2, 2],
    ];
    let outsiders = [
        [1, 0, 0, 0],
        [1, 1, 1, 1],
        [2, 0, 0, -1],
        [0, 0, 0, 5],
        [1, -1, 1, 0],
        [3, 3, -3, -2],
        [7, 0, 0, -6],
        [0, 2, -1, 0],
        [-1, -1, -1, 2],
        [4, -4, 4, -3],
    ];
    for v in &members {
        assert_eq!(v.iter().sum::<i64>(), 0);
    }
    for v in &outsiders {
        assert_ne!(v.iter().sum::<i64>(), 0);
    }
    probe(&ms, &members, true);
    probe(&ms, &outsiders, false);

    let report = property_report_from_parts(&sizes, &subgroup);
    assert!(!report.projective);
    assert!(!report.quasiaffine);
    assert!(!report.has_nonconstant_regular_functions);
    assert_eq!(report.dimension, 3);
    assert_eq!(report.class_group.to_string(), "Z");
}

/// Antidiagonal subtorus: vanishing characters (1,1), block sums agree;
/// the quotient is quasiaffine with a checkable positive character.
fn criterion_2_quadric_cone_example() {
    let sizes = GroupSizes::new(vec![2, 2]).unwrap();
    let subgroup = SubgroupSpec::new(2, &big_rows(&[&[1, 1]]));
    let ms = character_lattice(&sizes, &subgroup);
    let members = [
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [1, 1, 1, 1],
        [1, 1, 2, 0],
        [2, 0, 1, 1],
        [3, -1, 1, 1],
        [0, 0, 0, 0],
        [5, 5, 10, 0],
        [-1, 1, 0, 0],
        [2, 3, 4, 1],
    ];
    let outsiders = [
        [1, 0, 0, 0],
        [1, 1, 1, 0],
        [0, 0, 0, 1],
        [2, 2, 1, 0],
        [1, 2, 0, 0],
        [-1, 0, 1, 1],
        [0, 3, 1, 1],
        [4, 0, 0, 5],
        [1, 1, -1, 0],
        [6, 1, 3, 3],
    ];
    for v in &members {
        assert_eq!(v[0] + v[1], v[2] + v[3]);
    }
    for v in &outsiders {
        assert_ne!(v[0] + v[1], v[2] + v[3]);
    }
    probe(&ms, &members, true);
    probe(&ms, &outsiders, false);

    let witness = strictly_positive_in_span(&ms).expect("quasiaffine witness exists");
    assert!(ms.membership(&witness).is_some(), "witness lies in the lattice");
    assert!(witness.iter().all(|x| x.is_positive()), "witness is strictly positive");
    let report = property_report_from_parts(&sizes, &subgroup);
    assert!(report.quasiaffine);
    assert_eq!(report.dimension, 3);
}

/// Quotient by the whole torus matches the directly built product of a
/// projective line and a projective plane; projectivity and the existence
/// of a torus fixed point agree.
fn criterion_3_projective_product() {
    let sizes = GroupSizes::new(vec![2, 3]).unwrap();
    let subgroup = SubgroupSpec::whole_torus(2);
    let q = quotient_fan(&sizes, &subgroup);

    let rays = big_rows(&[
        &[1, 0, 0],
        &[-1, 0, 0],
        &[0, 1, 0],
        &[0, 0, 1],
        &[0, -1, -1],
    ]);
    let cones = vec![
        vec![0, 2, 3],
        vec![0, 2, 4],
        vec![0, 3, 4],
        vec![1, 2, 3],
        vec![1, 2, 4],
        vec![1, 3, 4],
    ];
    let direct = make_fan(3, rays, cones).unwrap();
    assert!(fan_equal(&q.fan, &direct), "quotient equals the direct product fan");

    let certificate = classify(&q.fan).expect("product fan is recognized");
    assert!(is_projective(&certificate));
    let report = property_report(&certificate);
    assert!(report.projective);
    assert!(report.has_torus_fixed_point);
    assert_eq!(report.projective, report.has_torus_fixed_point);
}

/// 500 sampled constructions all classify back to their input data, with
/// every certificate re-verified against the constructed fan.
fn criterion_4_roundtrip_500() {
    let config =
        RoundtripConfig { trials: 500, max_blocks: 3, max_block_size: 4, seed: 0x00C0_FFEE };
    let report = run_roundtrip(&config);
    assert_eq!(report.outcomes.len(), 500);
    for outcome in &report.outcomes {
        assert!(outcome.ok, "trial {} failed: {}", outcome.index, outcome.message);
    }
}

fn criterion_5a_affine_factor_rejected() {
    let fan = make_fan(
        2,
        big_rows(&[&[1, 0], &[-1, 0], &[0, 1]]),
        vec![vec![0, 2], vec![1, 2]],
    )
    .unwrap();
    let rejection = classify(&fan).expect_err("line times affine line is rejected");
    assert!(rejection.witness_holds(&fan), "witness re-validates");
    assert_eq!(rejection.reason, RejectionReason::NonfacesDontPartition);
}

fn criterion_5b_blowup_rejected() {
    let fan = make_fan(
        2,
        big_rows(&[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]]),
        vec![vec![0, 3], vec![1, 3], vec![1, 2], vec![0, 2]],
    )
    .unwrap();
    let rejection = classify(&fan).expect_err("blown-up plane is rejected");
    assert!(rejection.witness_holds(&fan), "witness re-validates");
    assert!(
        matches!(
            rejection.reason,
            RejectionReason::ExtraCone | RejectionReason::NonfacesDontPartition
        ),
        "expected EXTRA_CONE or NONFACES_DONT_PARTITION, got {}",
        rejection.reason.code()
    );
}

fn criterion_5c_overlattice_rejected() {
    let fan =
        make_fan(2, big_rows(&[&[1, 0], &[1, 4]]), vec![vec![0], vec![1]]).unwrap();
    let rejection = classify(&fan).expect_err("index-four overlattice is rejected");
    assert!(rejection.witness_holds(&fan), "witness re-validates");
    assert_eq!(rejection.reason, RejectionReason::OverlatticeConditionFailed);
}

/// All ordered size vectors with total dimension <= 12, parts >= 2.
fn all_size_vectors(max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let used: usize = prefix.iter().sum();
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for next in 2..=(max_total - used) {
            let mut ext = prefix.clone();
            ext.push(next);
            stack.push(ext);
        }
    }
    out
}

fn criterion_6_cone_count_conservation() {
    let vectors = all_size_vectors(12);
    assert_eq!(vectors.len(), 232);
    for sizes_vec in vectors {
        let d: usize = sizes_vec.iter().sum();
        let m = sizes_vec.len();
        let sizes = GroupSizes::new(sizes_vec).unwrap();
        let expected = expected_cone_count(&sizes);

        let base = punctured_fan(&sizes);
        assert_eq!(base.rays().len(), d);
        assert_eq!(BigInt::from(base.cone_count()), expected);

        let mut subgroups =
            vec![SubgroupSpec::whole_torus(m), SubgroupSpec::trivial(m)];
        if d <= 10 {
            subgroups.push(SubgroupSpec::new(m, &[vec![BigInt::one(); m]]));
        }
        for subgroup in subgroups {
            let q = quotient_fan(&sizes, &subgroup);
            assert_eq!(q.fan.rays().len(), d);
            assert_eq!(BigInt::from(q.fan.cone_count()), expected);
        }
    }
}

fn criterion_7_complement_dimensions() {
    for sizes_vec in all_size_vectors(12) {
        let d: usize = sizes_vec.iter().sum();
        let sizes = GroupSizes::new(sizes_vec.clone()).unwrap();
        let components = complement_components(&sizes);
        assert_eq!(components.len(), sizes_vec.len());
        for (j, (block, dim)) in components.iter().enumerate() {
            assert_eq!(*block, j + 1);
            // Block size recoverable from the component dimension.
            assert_eq!(sizes_vec[j], d - dim);
        }
    }
}

fn criterion_8_stiemke_exclusivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57EE_517E);
    for _ in 0..200 {
        let dim = rng.random_range(1..=8usize);
        let n_gens = rng.random_range(0..=dim);
        let gens: Vec<Vec<BigInt>> = (0..n_gens)
            .map(|_| (0..dim).map(|_| BigInt::from(rng.random_range(-4i64..=4))).collect())
            .collect();
        let lattice = SublatticeBasis::from_generators(dim, &gens);
        let positive = strictly_positive_in_span(&lattice);
        let blocking = nonneg_nonzero_in_span(&lattice.annihilator());
        assert!(
            positive.is_some() != blocking.is_some(),
            "exactly one side of the alternative must hold (dim {dim}, gens {gens:?})"
        );
    }
}

fn criterion_9_normal_form_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4E0F_0F4E);
    for _ in 0..1000 {
        let rows = rng.random_range(1..=6usize);
        let cols = rng.random_range(1..=6usize);
        let m = IntMatrix::from_fn(rows, cols, |_, _| {
            BigInt::from(rng.random_range(-9i64..=9))
        });

        let (h, u) = m.hermite_normal_form();
        assert_eq!(u.mul(&m), h);
        assert!(u.det().abs().is_one());
        assert!(hermite_shape_ok(&h));

        let (d, ul, vr) = m.smith_normal_form();
        assert_eq!(ul.mul(&m).mul(&vr), d);
        assert!(ul.det().abs().is_one());
        assert!(vr.det().abs().is_one());
        let diag = m.smith_diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }
}

fn hermite_shape_ok(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows() {
        match (0..h.cols()).find(|&j| !h.at(i, j).is_zero()) {
            None => seen_zero_row = true,
            Some(j) => {
                if seen_zero_row
                    || last_pivot.is_some_and(|p| j <= p)
                    || h.at(i, j).is_negative()
                {
                    return false;
                }
                for above in 0..i {
                    if h.at(above, j).is_negative() || h.at(above, j) >= h.at(i, j) {
                        return false;
                    }
                }
                last_pivot = Some(j);
            }
        }
    }
    true
}

/// Order-two quotient of the punctured plane: rays (1,0) and (1,2), no
/// full-dimensional cone, class group of order two, quasiaffine, and
/// recognition recovers the construction exactly.
fn criterion_10_order_two_golden() {
    let sizes = GroupSizes::new(vec![2]).unwrap();
    let subgroup = SubgroupSpec::new(1, &big_rows(&[&[2]]));
    let q = quotient_fan(&sizes, &subgroup);

    let canonical = q.fan.canonical_form();
    let coords: Vec<Vec<BigInt>> =
        canonical.rays().iter().map(|r| r.coords().to_vec()).collect();
    assert_eq!(coords, big_rows(&[&[1, 0], &[1, 2]]));
    assert!(!q.fan.has_full_dim_cone());

    let report = property_report_from_parts(&sizes, &subgroup);
    assert_eq!(report.class_group.to_string(), "Z/2");
    assert!(report.quasiaffine);

    let certificate = classify(&q.fan).expect("recognized");
    assert_eq!(certificate.sizes.sizes(), &[2]);
    assert_eq!(certificate.subgroup.relations().basis(), &[big(&[2])]);
}
