//! Command-line front end: stable JSON documents for fans, certificates,
//! property reports, and the randomized round-trip suite.
//!
//! Exit codes: 0 success, 1 recognition rejection (or round-trip failures),
//! 2 malformed input.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use homtoric::{
    classify, make_fan, property_report_from_parts, punctured_fan, quotient_fan,
    run_roundtrip, Fan, FanError, GroupSizes, HomogeneityCertificate, IntMatrix,
    PropertyReport, Rejection, RejectionWitness, RoundtripConfig, RoundtripReport,
    SubgroupSpec,
};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "homtoric",
    version,
    about = "Fans of quotients of products of punctured affine spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coordinate fan of the punctured product for the given
    /// block sizes.
    Build {
        /// Comma-separated block sizes, e.g. "2,3"; every size >= 2.
        #[arg(long)]
        sizes: String,
    },
    /// Build the quotient fan for block sizes and subgroup relations, with
    /// its construction certificate.
    Quotient {
        /// Comma-separated block sizes, e.g. "2,3"; every size >= 2.
        #[arg(long)]
        sizes: String,
        /// Vanishing-character generators: entries comma-separated,
        /// generators separated by ';', e.g. "1,-1;0,2". Omit for the
        /// whole-torus subgroup (no relations).
        #[arg(long, default_value = "")]
        relations: String,
    },
    /// Recognize a fan document; print a certificate or a rejection.
    Classify {
        /// Path to a fan document.
        fan: PathBuf,
    },
    /// Report geometric properties of a fan document (classified first) or
    /// of an explicit certificate document.
    Properties {
        /// Path to a fan document.
        fan: Option<PathBuf>,
        /// Path to a certificate document (group_sizes + subgroup_relations).
        #[arg(long, conflicts_with = "fan")]
        cert: Option<PathBuf>,
    },
    /// Check a fan document against the fan invariants.
    Validate {
        /// Path to a fan document.
        fan: PathBuf,
    },
    /// Randomized construct-then-recognize self-test.
    Roundtrip {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Largest number of blocks to sample.
        #[arg(long = "max-m", default_value_t = 3)]
        max_m: usize,
        /// Largest block size to sample.
        #[arg(long = "max-n", default_value_t = 4)]
        max_n: usize,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub group_sizes: Vec<usize>,
    pub subgroup_relations: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_assignment: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identification: Option<Vec<Vec<i64>>>,
}

#[derive(Serialize)]
struct QuotientDocument {
    fan: FanDocument,
    certificate: CertificateDocument,
}

#[derive(Serialize)]
struct ClassGroupDocument {
    /// Invariant factors: 0 stands for a free factor, k >= 2 for a cyclic
    /// factor of order k.
    invariant_factors: Vec<i64>,
    display: String,
}

#[derive(Serialize)]
struct PropertyDocument {
    quasiprojective: bool,
    affine: bool,
    projective: bool,
    quasiaffine: bool,
    has_nonconstant_regular_functions: bool,
    has_torus_fixed_point: bool,
    dimension: usize,
    class_group: ClassGroupDocument,
    acting_groups: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct RejectionDocument {
    reason: String,
    detail: String,
    witness: Value,
}

#[derive(Serialize)]
struct ValidationDocument {
    valid: bool,
    rank: usize,
    ray_count: usize,
    cone_count: usize,
    maximal_cone_count: usize,
    has_full_dim_cone: bool,
}

#[derive(Serialize)]
struct RoundtripDocument {
    trials: usize,
    seed: u64,
    max_m: usize,
    max_n: usize,
    failures: usize,
    outcomes: Vec<OutcomeDocument>,
}

#[derive(Serialize)]
struct OutcomeDocument {
    index: usize,
    sizes: Vec<usize>,
    subgroup_generators: Vec<Vec<i64>>,
    ok: bool,
    message: String,
}

enum Failure {
    /// Malformed input: diagnostics to stderr, exit 2.
    Invalid(String),
    /// Domain rejection: document to stdout, exit 1.
    Rejected(RejectionDocument),
    /// Invalid fan in `validate`: document to stdout, exit 2.
    InvalidFanReport(Value),
    /// Round-trip failures: document to stdout, exit 1.
    FailedTrials(RoundtripDocument),
}

fn invalid(message: impl Display) -> Failure {
    Failure::Invalid(message.to_string())
}

/// Entry point shared by the binary and the tests. Writes one JSON document
/// to `out` on every path that produces a result, diagnostics to `err`, and
/// returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut argv = vec!["homtoric".to_string()];
    argv.extend(args.iter().cloned());
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    let result = match cli.command {
        Command::Build { sizes } => cmd_build(&sizes),
        Command::Quotient { sizes, relations } => cmd_quotient(&sizes, &relations),
        Command::Classify { fan } => cmd_classify(&fan),
        Command::Properties { fan, cert } => cmd_properties(fan.as_deref(), cert.as_deref()),
        Command::Validate { fan } => cmd_validate(&fan),
        Command::Roundtrip { trials, seed, max_m, max_n } => {
            cmd_roundtrip(trials, seed, max_m, max_n)
        }
    };
    match result {
        Ok(document) => {
            emit(out, &document);
            0
        }
        Err(Failure::Invalid(message)) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
        Err(Failure::Rejected(rejection)) => {
            emit(out, &serde_json::to_value(&rejection).expect("serializable"));
            1
        }
        Err(Failure::InvalidFanReport(report)) => {
            emit(out, &report);
            2
        }
        Err(Failure::FailedTrials(report)) => {
            emit(out, &serde_json::to_value(&report).expect("serializable"));
            1
        }
    }
}

fn emit(out: &mut dyn Write, document: &Value) {
    let rendered = serde_json::to_string_pretty(document).expect("serializable");
    let _ = writeln!(out, "{rendered}");
}

fn parse_sizes(text: &str) -> Result<GroupSizes, Failure> {
    let mut sizes = Vec::new();
    for part in text.split(',') {
        let trimmed = part.trim();
        let size: usize = trimmed
            .parse()
            .map_err(|_| invalid(format!("size {trimmed:?} is not a positive integer")))?;
        sizes.push(size);
    }
    GroupSizes::new(sizes).map_err(invalid)
}

fn parse_relations(text: &str, m: usize) -> Result<SubgroupSpec, Failure> {
    let mut generators: Vec<Vec<BigInt>> = Vec::new();
    if !text.trim().is_empty() {
        for (gi, gen_text) in text.split(';').enumerate() {
            let mut generator = Vec::new();
            for part in gen_text.split(',') {
                let trimmed = part.trim();
                let entry: i64 = trimmed.parse().map_err(|_| {
                    invalid(format!("relation entry {trimmed:?} is not an integer"))
                })?;
                generator.push(BigInt::from(entry));
            }
            if generator.len() != m {
                return Err(invalid(format!(
                    "generator {gi} has {} entries, expected {m}",
                    generator.len()
                )));
            }
            generators.push(generator);
        }
    }
    Ok(SubgroupSpec::new(m, &generators))
}

fn to_i64(x: &BigInt) -> Result<i64, Failure> {
    i64::try_from(x).map_err(|_| invalid(format!("integer {x} exceeds the supported range")))
}

fn rows_to_i64(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>, Failure> {
    rows.iter().map(|r| r.iter().map(to_i64).collect()).collect()
}

fn matrix_to_i64(m: &IntMatrix) -> Result<Vec<Vec<i64>>, Failure> {
    rows_to_i64(&m.row_vecs())
}

/// Canonicalizes and serializes a fan together with the permutation that
/// carried old ray indices to emitted ones.
fn fan_to_document(fan: &Fan) -> Result<(FanDocument, Vec<usize>), Failure> {
    let (canonical, perm) = fan.canonical_form_with_perm();
    let rays = rows_to_i64(
        &canonical.rays().iter().map(|r| r.coords().to_vec()).collect::<Vec<_>>(),
    )?;
    let document = FanDocument {
        rank: canonical.rank(),
        rays,
        maximal_cones: canonical.maximal_cones(),
    };
    Ok((document, perm))
}

fn document_to_fan(document: &FanDocument) -> Result<Fan, FanError> {
    let rays: Vec<Vec<BigInt>> = document
        .rays
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    make_fan(document.rank, rays, document.maximal_cones.clone())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn certificate_to_document(
    certificate: &HomogeneityCertificate,
) -> Result<CertificateDocument, Failure> {
    Ok(CertificateDocument {
        group_sizes: certificate.sizes.sizes().to_vec(),
        subgroup_relations: rows_to_i64(certificate.subgroup.relations().basis())?,
        ray_assignment: Some(certificate.ray_assignment.clone()),
        identification: Some(matrix_to_i64(&certificate.identification)?),
    })
}

fn witness_to_value(witness: &RejectionWitness) -> Value {
    match witness {
        RejectionWitness::DeficientSpan { achieved_rank } => {
            json!({ "kind": "deficient_span", "achieved_rank": achieved_rank })
        }
        RejectionWitness::EmptyFan => json!({ "kind": "empty_fan" }),
        RejectionWitness::UncoveredRay { ray } => {
            json!({ "kind": "uncovered_ray", "ray": ray })
        }
        RejectionWitness::OverlappingNonfaces { a, b } => {
            json!({ "kind": "overlapping_nonfaces", "a": a, "b": b })
        }
        RejectionWitness::SmallGroup { group } => {
            json!({ "kind": "small_group", "group": group })
        }
        RejectionWitness::MissingCone { groups, cone } => {
            json!({ "kind": "missing_cone", "groups": groups, "cone": cone })
        }
        RejectionWitness::ExtraCone { groups, cone } => {
            json!({ "kind": "extra_cone", "groups": groups, "cone": cone })
        }
        RejectionWitness::ViolatingRelation { groups, relation } => json!({
            "kind": "violating_relation",
            "groups": groups,
            "relation": relation.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
        RejectionWitness::UnreachablePoint { groups, point } => json!({
            "kind": "unreachable_point",
            "groups": groups,
            "point": point.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
        RejectionWitness::DependentCone { cone } => {
            json!({ "kind": "dependent_cone", "cone": cone })
        }
    }
}

fn rejection_to_document(rejection: &Rejection) -> RejectionDocument {
    RejectionDocument {
        reason: rejection.reason.code().to_string(),
        detail: rejection.detail.clone(),
        witness: witness_to_value(&rejection.witness),
    }
}

fn report_to_document(report: &PropertyReport) -> Result<PropertyDocument, Failure> {
    let factors: Vec<i64> =
        report.class_group.factors.iter().map(to_i64).collect::<Result<_, _>>()?;
    Ok(PropertyDocument {
        quasiprojective: report.quasiprojective,
        affine: report.affine,
        projective: report.projective,
        quasiaffine: report.quasiaffine,
        has_nonconstant_regular_functions: report.has_nonconstant_regular_functions,
        has_torus_fixed_point: report.has_torus_fixed_point,
        dimension: report.dimension,
        class_group: ClassGroupDocument {
            invariant_factors: factors,
            display: report.class_group.to_string(),
        },
        acting_groups: report.acting_groups.clone(),
    })
}

fn cmd_build(sizes_text: &str) -> Result<Value, Failure> {
    let sizes = parse_sizes(sizes_text)?;
    let fan = punctured_fan(&sizes);
    let (document, _) = fan_to_document(&fan)?;
    Ok(serde_json::to_value(&document).expect("serializable"))
}

fn cmd_quotient(sizes_text: &str, relations_text: &str) -> Result<Value, Failure> {
    let sizes = parse_sizes(sizes_text)?;
    let subgroup = parse_relations(relations_text, sizes.count())?;
    let presentation = quotient_fan(&sizes, &subgroup);
    let (fan_document, perm) = fan_to_document(&presentation.fan)?;
    let ray_assignment: Vec<usize> =
        presentation.ray_of_coordinate.iter().map(|&old| perm[old]).collect();
    let rank = presentation.fan.rank();
    let certificate = CertificateDocument {
        group_sizes: sizes.sizes().to_vec(),
        subgroup_relations: rows_to_i64(subgroup.relations().basis())?,
        ray_assignment: Some(ray_assignment),
        identification: Some(matrix_to_i64(&IntMatrix::identity(rank))?),
    };
    let document = QuotientDocument { fan: fan_document, certificate };
    Ok(serde_json::to_value(&document).expect("serializable"))
}

fn cmd_classify(path: &Path) -> Result<Value, Failure> {
    let document: FanDocument = read_json(path)?;
    let fan = match document_to_fan(&document) {
        Ok(fan) => fan,
        Err(FanError::NotSimplicial { cone }) => {
            // A dependent listed cone is a legitimate recognition verdict,
            // not a malformed document.
            return Err(Failure::Rejected(RejectionDocument {
                reason: "NOT_SIMPLICIAL".to_string(),
                detail: format!("cone {cone:?} has linearly dependent generators"),
                witness: json!({ "kind": "dependent_cone", "cone": cone }),
            }));
        }
        Err(e) => return Err(invalid(e)),
    };
    match classify(&fan) {
        Ok(certificate) => {
            let document = certificate_to_document(&certificate)?;
            Ok(serde_json::to_value(&document).expect("serializable"))
        }
        Err(rejection) => Err(Failure::Rejected(rejection_to_document(&rejection))),
    }
}

fn cmd_properties(fan_path: Option<&Path>, cert_path: Option<&Path>) -> Result<Value, Failure> {
    let report = match (fan_path, cert_path) {
        (Some(path), None) => {
            let document: FanDocument = read_json(path)?;
            let fan = document_to_fan(&document).map_err(invalid)?;
            let certificate = classify(&fan)
                .map_err(|rejection| Failure::Rejected(rejection_to_document(&rejection)))?;
            homtoric::property_report(&certificate)
        }
        (None, Some(path)) => {
            let document: CertificateDocument = read_json(path)?;
            let sizes = GroupSizes::new(document.group_sizes.clone()).map_err(invalid)?;
            let m = sizes.count();
            for (gi, row) in document.subgroup_relations.iter().enumerate() {
                if row.len() != m {
                    return Err(invalid(format!(
                        "subgroup_relations[{gi}] has {} entries, expected {m}",
                        row.len()
                    )));
                }
            }
            let rows: Vec<Vec<BigInt>> = document
                .subgroup_relations
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let subgroup = SubgroupSpec::new(m, &rows);
            property_report_from_parts(&sizes, &subgroup)
        }
        _ => return Err(invalid("pass exactly one of a fan path or --cert")),
    };
    let document = report_to_document(&report)?;
    Ok(serde_json::to_value(&document).expect("serializable"))
}

fn cmd_validate(path: &Path) -> Result<Value, Failure> {
    let document: FanDocument = read_json(path)?;
    match document_to_fan(&document) {
        Ok(fan) => {
            let report = ValidationDocument {
                valid: true,
                rank: fan.rank(),
                ray_count: fan.rays().len(),
                cone_count: fan.cone_count(),
                maximal_cone_count: fan.maximal_cones().len(),
                has_full_dim_cone: fan.has_full_dim_cone(),
            };
            Ok(serde_json::to_value(&report).expect("serializable"))
        }
        Err(e) => {
            let rendered = e.to_string();
            let detail =
                rendered.strip_prefix(&format!("{}: ", e.code())).unwrap_or(&rendered).to_string();
            Err(Failure::InvalidFanReport(json!({
                "valid": false,
                "error": e.code(),
                "detail": detail,
            })))
        }
    }
}

fn cmd_roundtrip(trials: usize, seed: u64, max_m: usize, max_n: usize) -> Result<Value, Failure> {
    if max_m < 1 {
        return Err(invalid("--max-m must be at least 1"));
    }
    if max_n < 2 {
        return Err(invalid("--max-n must be at least 2"));
    }
    let config = RoundtripConfig { trials, max_blocks: max_m, max_block_size: max_n, seed };
    let report = run_roundtrip(&config);
    let document = roundtrip_to_document(&report, &config);
    if report.all_ok() {
        Ok(serde_json::to_value(&document).expect("serializable"))
    } else {
        Err(Failure::FailedTrials(document))
    }
}

fn roundtrip_to_document(report: &RoundtripReport, config: &RoundtripConfig) -> RoundtripDocument {
    RoundtripDocument {
        trials: config.trials,
        seed: config.seed,
        max_m: config.max_blocks,
        max_n: config.max_block_size,
        failures: report.failure_count(),
        outcomes: report
            .outcomes
            .iter()
            .map(|o| OutcomeDocument {
                index: o.index,
                sizes: o.sizes.clone(),
                subgroup_generators: o.subgroup_generators.clone(),
                ok: o.ok,
                message: o.message.clone(),
            })
            .collect(),
    }
}
