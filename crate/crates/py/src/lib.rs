//! Python bindings: fans, recognition certificates, and property reports.
//!
//! Recognition rejections surface as `ValueError` with a "CODE: detail"
//! message; malformed constructor arguments do the same.

use num_bigint::BigInt;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

fn to_i64(x: &BigInt) -> PyResult<i64> {
    i64::try_from(x)
        .map_err(|_| PyOverflowError::new_err(format!("integer {x} exceeds the supported range")))
}

fn rows_to_i64(rows: &[Vec<BigInt>]) -> PyResult<Vec<Vec<i64>>> {
    rows.iter().map(|r| r.iter().map(to_i64).collect()).collect()
}

fn rows_to_bigint(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn value_error(message: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(message.to_string())
}

/// Rational polyhedral fan with primitive ray generators, simplicial cones,
/// and pairwise face-compatible maximal cones.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Fan {
    inner: homtoric::Fan,
}

#[pymethods]
impl Fan {
    #[new]
    fn new(rank: usize, rays: Vec<Vec<i64>>, maximal_cones: Vec<Vec<usize>>) -> PyResult<Self> {
        let rays = rows_to_bigint(&rays);
        let inner = homtoric::make_fan(rank, rays, maximal_cones).map_err(value_error)?;
        Ok(Fan { inner })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn rays(&self) -> PyResult<Vec<Vec<i64>>> {
        let rows: Vec<Vec<BigInt>> =
            self.inner.rays().iter().map(|r| r.coords().to_vec()).collect();
        rows_to_i64(&rows)
    }

    #[getter]
    fn maximal_cones(&self) -> Vec<Vec<usize>> {
        self.inner.maximal_cones()
    }

    fn cone_count(&self) -> usize {
        self.inner.cone_count()
    }

    fn has_full_dim_cone(&self) -> bool {
        self.inner.has_full_dim_cone()
    }

    /// The same fan with rays sorted and cones renumbered accordingly.
    fn canonical(&self) -> Fan {
        let (fan, _) = self.inner.canonical_form_with_perm();
        Fan { inner: fan }
    }

    fn __eq__(&self, other: &Fan) -> bool {
        homtoric::fan_equal(&self.inner, &other.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Fan(rank={}, rays={}, maximal_cones={})",
            self.inner.rank(),
            self.inner.rays().len(),
            self.inner.maximal_cones().len()
        )
    }
}

/// Proof that a fan is the quotient fan of a punctured product: block
/// sizes, the subgroup's vanishing characters, the ray assignment, and a
/// unimodular identification with the freshly built quotient fan.
///
/// Instances come from `classify` or `quotient`; they are not constructed
/// directly.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Certificate {
    inner: homtoric::HomogeneityCertificate,
}

#[pymethods]
impl Certificate {
    #[getter]
    fn group_sizes(&self) -> Vec<usize> {
        self.inner.sizes.sizes().to_vec()
    }

    #[getter]
    fn subgroup_relations(&self) -> PyResult<Vec<Vec<i64>>> {
        rows_to_i64(self.inner.subgroup.relations().basis())
    }

    #[getter]
    fn ray_assignment(&self) -> Vec<usize> {
        self.inner.ray_assignment.clone()
    }

    #[getter]
    fn identification(&self) -> PyResult<Vec<Vec<i64>>> {
        rows_to_i64(&self.inner.identification.row_vecs())
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(group_sizes={:?}, subgroup_relations={:?})",
            self.inner.sizes.sizes(),
            self.inner.subgroup.relations().basis()
        )
    }
}

/// Geometric properties of the quotient described by a certificate.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct PropertyReport {
    inner: homtoric::PropertyReport,
}

#[pymethods]
impl PropertyReport {
    #[getter]
    fn quasiprojective(&self) -> bool {
        self.inner.quasiprojective
    }

    #[getter]
    fn affine(&self) -> bool {
        self.inner.affine
    }

    #[getter]
    fn projective(&self) -> bool {
        self.inner.projective
    }

    #[getter]
    fn quasiaffine(&self) -> bool {
        self.inner.quasiaffine
    }

    #[getter]
    fn has_nonconstant_regular_functions(&self) -> bool {
        self.inner.has_nonconstant_regular_functions
    }

    #[getter]
    fn has_torus_fixed_point(&self) -> bool {
        self.inner.has_torus_fixed_point
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension
    }

    /// Invariant factors of the divisor class group: 0 per free factor,
    /// k >= 2 per cyclic factor of order k.
    #[getter]
    fn class_group_factors(&self) -> PyResult<Vec<i64>> {
        self.inner.class_group.factors.iter().map(to_i64).collect()
    }

    /// Human-readable class group, e.g. "Z/2 + Z^2".
    #[getter]
    fn class_group(&self) -> String {
        self.inner.class_group.to_string()
    }

    #[getter]
    fn acting_groups(&self) -> Vec<Vec<String>> {
        self.inner.acting_groups.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "PropertyReport(projective={}, quasiaffine={}, dimension={}, class_group={})",
            self.inner.projective,
            self.inner.quasiaffine,
            self.inner.dimension,
            self.inner.class_group
        )
    }
}

fn parse_parts(
    sizes: Vec<usize>,
    relations: Vec<Vec<i64>>,
) -> PyResult<(homtoric::GroupSizes, homtoric::SubgroupSpec)> {
    let sizes = homtoric::GroupSizes::new(sizes).map_err(value_error)?;
    let m = sizes.count();
    for (gi, row) in relations.iter().enumerate() {
        if row.len() != m {
            return Err(value_error(format!(
                "relation {gi} has {} entries, expected {m}",
                row.len()
            )));
        }
    }
    let rows = rows_to_bigint(&relations);
    let subgroup = homtoric::SubgroupSpec::new(m, &rows);
    Ok((sizes, subgroup))
}

/// Coordinate fan of the product of punctured affine spaces with the given
/// block sizes.
#[pyfunction]
fn build_fan(sizes: Vec<usize>) -> PyResult<Fan> {
    let sizes = homtoric::GroupSizes::new(sizes).map_err(value_error)?;
    Ok(Fan { inner: homtoric::punctured_fan(&sizes) })
}

/// Quotient fan for the given block sizes and subgroup relations, together
/// with its recognition certificate.
#[pyfunction]
#[pyo3(signature = (sizes, relations=Vec::new()))]
fn quotient(sizes: Vec<usize>, relations: Vec<Vec<i64>>) -> PyResult<(Fan, Certificate)> {
    let (sizes, subgroup) = parse_parts(sizes, relations)?;
    let presentation = homtoric::quotient_fan(&sizes, &subgroup);
    let fan = Fan { inner: presentation.fan.clone() };
    let certificate = homtoric::classify(&presentation.fan)
        .map_err(|rejection| value_error(format!("constructed fan failed recognition: {rejection}")))?;
    Ok((fan, Certificate { inner: certificate }))
}

/// Recognize a fan as a quotient of a punctured product. Raises ValueError
/// with a "CODE: detail" message if the fan is not of that shape.
#[pyfunction]
fn classify(fan: &Fan) -> PyResult<Certificate> {
    match homtoric::classify(&fan.inner) {
        Ok(certificate) => Ok(Certificate { inner: certificate }),
        Err(rejection) => Err(value_error(rejection)),
    }
}

/// Inclusion-minimal ray sets spanning no cone of the fan.
#[pyfunction]
fn minimal_nonfaces(fan: &Fan) -> Vec<Vec<usize>> {
    homtoric::minimal_nonfaces(&fan.inner)
}

/// Check a certificate against a fan by rebuilding the quotient and
/// transporting it through the identification.
#[pyfunction]
fn verify_certificate(fan: &Fan, certificate: &Certificate) -> bool {
    homtoric::verify_certificate(&fan.inner, &certificate.inner)
}

/// Geometric properties of the quotient a certificate describes.
#[pyfunction]
fn property_report(certificate: &Certificate) -> PropertyReport {
    PropertyReport { inner: homtoric::property_report(&certificate.inner) }
}

/// Geometric properties straight from block sizes and subgroup relations,
/// without building a fan.
#[pyfunction]
#[pyo3(signature = (sizes, relations=Vec::new()))]
fn property_report_from_parts(
    sizes: Vec<usize>,
    relations: Vec<Vec<i64>>,
) -> PyResult<PropertyReport> {
    let (sizes, subgroup) = parse_parts(sizes, relations)?;
    Ok(PropertyReport { inner: homtoric::property_report_from_parts(&sizes, &subgroup) })
}

/// Equality up to renumbering rays and cones.
#[pyfunction]
fn fan_equal(a: &Fan, b: &Fan) -> bool {
    homtoric::fan_equal(&a.inner, &b.inner)
}

/// Randomized construct-then-recognize self-test. Returns the failure
/// messages; an empty list means every trial round-tripped.
#[pyfunction]
#[pyo3(signature = (trials, seed, max_m=3, max_n=4))]
fn run_roundtrip(trials: usize, seed: u64, max_m: usize, max_n: usize) -> PyResult<Vec<String>> {
    if max_m < 1 {
        return Err(value_error("max_m must be at least 1"));
    }
    if max_n < 2 {
        return Err(value_error("max_n must be at least 2"));
    }
    let config = homtoric::RoundtripConfig {
        trials,
        max_blocks: max_m,
        max_block_size: max_n,
        seed,
    };
    let report = homtoric::run_roundtrip(&config);
    Ok(report
        .outcomes
        .iter()
        .filter(|o| !o.ok)
        .map(|o| format!("trial {}: {}", o.index, o.message))
        .collect())
}

#[pymodule]
fn homtoric_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Fan>()?;
    m.add_class::<Certificate>()?;
    m.add_class::<PropertyReport>()?;
    m.add_function(wrap_pyfunction!(build_fan, m)?)?;
    m.add_function(wrap_pyfunction!(quotient, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_nonfaces, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(property_report, m)?)?;
    m.add_function(wrap_pyfunction!(property_report_from_parts, m)?)?;
    m.add_function(wrap_pyfunction!(fan_equal, m)?)?;
    m.add_function(wrap_pyfunction!(run_roundtrip, m)?)?;
    Ok(())
}
