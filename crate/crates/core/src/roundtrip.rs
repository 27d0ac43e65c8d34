//! Randomized construct-then-recognize self-test: build quotient fans from
//! sampled sizes and subgroups, run recognition on the result, and compare
//! the reconstruction against the input data.

use crate::cox::{quotient_fan, GroupSizes, SubgroupSpec};
use crate::homogeneity::classify;
use crate::lattice::quotient_invariants;
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct RoundtripConfig {
    pub trials: usize,
    pub max_blocks: usize,
    pub max_block_size: usize,
    pub seed: u64,
}

impl Default for RoundtripConfig {
    fn default() -> Self {
        RoundtripConfig { trials: 20, max_blocks: 3, max_block_size: 4, seed: 0 }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TrialOutcome {
    pub index: usize,
    pub sizes: Vec<usize>,
    pub subgroup_generators: Vec<Vec<i64>>,
    pub ok: bool,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RoundtripReport {
    pub outcomes: Vec<TrialOutcome>,
}

impl RoundtripReport {
    pub fn all_ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.ok)
    }

    pub fn failure_count(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.ok).count()
    }
}

/// Checks one constructed quotient against its recognition result. The
/// recovered blocks come back in canonical order, so sizes are compared as
/// multisets and the subgroup through permutation-invariant data.
fn check_roundtrip(sizes: &GroupSizes, subgroup: &SubgroupSpec) -> Result<(), String> {
    let q = quotient_fan(sizes, subgroup);
    let cert = classify(&q.fan).map_err(|r| format!("construction rejected: {r}"))?;

    let mut expected = sizes.sizes().to_vec();
    expected.sort_unstable();
    let mut recovered = cert.sizes.sizes().to_vec();
    recovered.sort_unstable();
    if expected != recovered {
        return Err(format!("sizes {recovered:?} differ from input {expected:?}"));
    }

    let a_in = subgroup.relations();
    let a_out = cert.subgroup.relations();
    if a_in.rank() != a_out.rank() {
        return Err(format!(
            "subgroup rank {} differs from input {}",
            a_out.rank(),
            a_in.rank()
        ));
    }
    let inv_in = quotient_invariants(a_in);
    let inv_out = quotient_invariants(a_out);
    if inv_in != inv_out {
        return Err(format!("class group {inv_out} differs from input {inv_in}"));
    }

    let rebuilt = quotient_fan(&cert.sizes, &cert.subgroup);
    if rebuilt.fan.rank() != q.fan.rank() || rebuilt.fan.cone_count() != q.fan.cone_count() {
        return Err("rebuilt quotient has different fan shape".into());
    }
    Ok(())
}

pub fn run_roundtrip(config: &RoundtripConfig) -> RoundtripReport {
    assert!(config.max_blocks >= 1 && config.max_block_size >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut outcomes = Vec::with_capacity(config.trials);
    for index in 0..config.trials {
        let m = rng.random_range(1..=config.max_blocks);
        let sizes_vec: Vec<usize> =
            (0..m).map(|_| rng.random_range(2..=config.max_block_size)).collect();
        let n_gens = rng.random_range(0..=m);
        let gens: Vec<Vec<i64>> = (0..n_gens)
            .map(|_| (0..m).map(|_| rng.random_range(-3..=3)).collect())
            .collect();

        let sizes = GroupSizes::new(sizes_vec.clone()).expect("sampled sizes are valid");
        let gen_rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let subgroup = SubgroupSpec::new(m, &gen_rows);

        let result = check_roundtrip(&sizes, &subgroup);
        outcomes.push(TrialOutcome {
            index,
            sizes: sizes_vec,
            subgroup_generators: gens,
            ok: result.is_ok(),
            message: result.err().unwrap_or_else(|| "ok".into()),
        });
    }
    RoundtripReport { outcomes }
}
