//! Python bindings for the qldpc toolkit.
//!
//! Field symbols cross the boundary as plain integers in `0..q2`, syndromes
//! as lists of 0/1 integers, and priors as per-symbol lists of floats.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qldpc::channel::DepolarizingChannel;
use qldpc::decoder::{
    cbp_linear_decode, reference_vector_bp, ArithmeticMode, DecodeOutcome, DecoderConfig,
    LlrBpDecoder, Schedule,
};
use qldpc::galois::{FieldElement, FieldTables};
use qldpc::harness::{BddSpec, DecoderBackend, StopRule, SweepConfig, WILSON_Z95};
use qldpc::stabilizer::{BinaryMatrix, CheckMatrix, DecodeClass, RowSpan};

fn err(e: qldpc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fe(tables: &FieldTables, value: u8) -> PyResult<FieldElement> {
    if (value as usize) < tables.q2() {
        Ok(FieldElement(value))
    } else {
        Err(PyValueError::new_err(format!(
            "symbol {} out of range for q2 = {}",
            value,
            tables.q2()
        )))
    }
}

fn fe_vec(tables: &FieldTables, values: &[u8]) -> PyResult<Vec<FieldElement>> {
    values.iter().map(|&v| fe(tables, v)).collect()
}

// returned as u16 so Python sees lists of ints, not bytes
type Grid = Vec<Vec<u16>>;

fn raw(values: &[FieldElement]) -> Vec<u16> {
    values.iter().map(|e| e.0 as u16).collect()
}

fn bits(values: &[u8]) -> Vec<u16> {
    values.iter().map(|&b| b as u16).collect()
}

fn parse_schedule(s: &str) -> PyResult<Schedule> {
    match s {
        "parallel" => Ok(Schedule::Parallel),
        "serial" => Ok(Schedule::Serial),
        _ => Err(PyValueError::new_err(format!(
            "unknown schedule '{s}' (parallel, serial)"
        ))),
    }
}

fn parse_arith(s: &str) -> PyResult<ArithmeticMode> {
    match s {
        "exact" => Ok(ArithmeticMode::Exact),
        "table" => Ok(ArithmeticMode::LookupTable),
        _ => Err(PyValueError::new_err(format!(
            "unknown arithmetic mode '{s}' (exact, table)"
        ))),
    }
}

fn parse_backend(s: &str) -> PyResult<DecoderBackend> {
    match s {
        "llr" => Ok(DecoderBackend::Llr),
        "cbp" => Ok(DecoderBackend::Cbp),
        "reference" => Ok(DecoderBackend::Reference),
        _ => Err(PyValueError::new_err(format!(
            "unknown decoder backend '{s}' (llr, cbp, reference)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn build_config(
    t_max: usize,
    schedule: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    epsilon_0: Option<f64>,
    bit_width: Option<u32>,
    arith: &str,
) -> PyResult<DecoderConfig> {
    let config = DecoderConfig {
        t_max,
        schedule: parse_schedule(schedule)?,
        alpha,
        beta,
        epsilon_0,
        bit_width,
        mode: parse_arith(arith)?,
    };
    config.validate().map_err(err)?;
    Ok(config)
}

fn check_syndrome_bits(z: &[u8]) -> PyResult<()> {
    if let Some(&bad) = z.iter().find(|&&b| b > 1) {
        return Err(PyValueError::new_err(format!(
            "syndrome entries must be 0 or 1, got {bad}"
        )));
    }
    Ok(())
}

fn grid_to_binary(rows: &[Vec<u8>]) -> PyResult<BinaryMatrix> {
    BinaryMatrix::from_rows(rows).map_err(err)
}

fn binary_to_grid(m: &BinaryMatrix) -> Grid {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u16).collect())
        .collect()
}

/// Arithmetic tables for GF(q) and GF(q²), q = 2^l.
#[pyclass(name = "FieldTables", frozen, module = "qldpc_py")]
struct PyFieldTables {
    inner: FieldTables,
}

#[pymethods]
impl PyFieldTables {
    /// Build tables for extension degree l (1..=4). Pass both `poly_q` and
    /// `poly_q2` (as polynomial bit masks) to override the default primitive
    /// polynomials.
    #[new]
    #[pyo3(signature = (l, poly_q = None, poly_q2 = None))]
    fn new(l: usize, poly_q: Option<u64>, poly_q2: Option<u64>) -> PyResult<Self> {
        let inner = match (poly_q, poly_q2) {
            (None, None) => FieldTables::new(l),
            (Some(pq), Some(pq2)) => FieldTables::with_polynomials(l, pq, pq2),
            _ => {
                return Err(PyValueError::new_err(
                    "pass both poly_q and poly_q2, or neither",
                ))
            }
        }
        .map_err(err)?;
        Ok(PyFieldTables { inner })
    }

    #[getter]
    fn l(&self) -> usize {
        self.inner.l()
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    #[getter]
    fn q2(&self) -> usize {
        self.inner.q2()
    }

    /// The fixed primitive element ω of GF(q²).
    #[getter]
    fn omega(&self) -> u8 {
        self.inner.omega().0
    }

    #[getter]
    fn poly_q(&self) -> u64 {
        self.inner.poly_q()
    }

    #[getter]
    fn poly_q2(&self) -> u64 {
        self.inner.poly_q2()
    }

    fn add(&self, a: u8, b: u8) -> PyResult<u8> {
        let t = &self.inner;
        Ok(t.add(fe(t, a)?, fe(t, b)?).0)
    }

    fn mul(&self, a: u8, b: u8) -> PyResult<u8> {
        let t = &self.inner;
        Ok(t.mul(fe(t, a)?, fe(t, b)?).0)
    }

    fn div(&self, a: u8, b: u8) -> PyResult<u8> {
        let t = &self.inner;
        Ok(t.div(fe(t, a)?, fe(t, b)?).map_err(err)?.0)
    }

    fn pow(&self, a: u8, e: i64) -> PyResult<u8> {
        let t = &self.inner;
        Ok(t.pow(fe(t, a)?, e).0)
    }

    /// Conjugation x ↦ x^q.
    fn conj(&self, a: u8) -> PyResult<u8> {
        let t = &self.inner;
        Ok(t.conj(fe(t, a)?).0)
    }

    /// Trace of GF(q) onto GF(2); the argument is a GF(q) value in 0..q.
    fn subfield_trace(&self, v: u8) -> PyResult<u8> {
        if (v as usize) < self.inner.q() {
            Ok(self.inner.subfield_trace(v))
        } else {
            Err(PyValueError::new_err(format!(
                "subfield value {} out of range for q = {}",
                v,
                self.inner.q()
            )))
        }
    }

    /// GF(q) values with trace 0.
    fn trace_kernel(&self) -> Vec<u16> {
        bits(&self.inner.trace_kernel())
    }

    /// The GF(q) value x with embed(x) == v, or None if v is not in the subfield.
    fn unembed_subfield(&self, v: u8) -> PyResult<Option<u8>> {
        let t = &self.inner;
        Ok(t.unembed_subfield(fe(t, v)?))
    }

    /// Commutation bit ⟨η, ξ⟩ of two single-symbol operators.
    fn scalar_commutation(&self, eta: u8, xi: u8) -> PyResult<u8> {
        let t = &self.inner;
        Ok(t.scalar_commutation(fe(t, eta)?, fe(t, xi)?))
    }

    /// Symplectic inner product of two GF(q²) vectors (a bit).
    fn symplectic_ip(&self, u: Vec<u8>, v: Vec<u8>) -> PyResult<u8> {
        let t = &self.inner;
        t.symplectic_ip(&fe_vec(t, &u)?, &fe_vec(t, &v)?).map_err(err)
    }

    /// Hermitian inner product Σ u_i v_i^q as a GF(q²) symbol.
    fn hermitian_ip(&self, u: Vec<u8>, v: Vec<u8>) -> PyResult<u8> {
        let t = &self.inner;
        Ok(t.hermitian_ip(&fe_vec(t, &u)?, &fe_vec(t, &v)?).map_err(err)?.0)
    }

    /// Symbols that commute with nonzero η (0 included).
    fn commuting_class(&self, eta: u8) -> PyResult<Vec<u16>> {
        let t = &self.inner;
        let eta = fe(t, eta)?;
        if eta.is_zero() {
            return Err(PyValueError::new_err("classes are defined for nonzero eta"));
        }
        Ok(raw(t.commuting_class(eta)))
    }

    /// Symbols that anticommute with nonzero η.
    fn anticommuting_class(&self, eta: u8) -> PyResult<Vec<u16>> {
        let t = &self.inner;
        let eta = fe(t, eta)?;
        if eta.is_zero() {
            return Err(PyValueError::new_err("classes are defined for nonzero eta"));
        }
        Ok(raw(t.anticommuting_class(eta)))
    }

    fn __repr__(&self) -> String {
        format!("FieldTables(l={})", self.inner.l())
    }
}

/// Sparse check matrix over GF(q²).
#[pyclass(name = "CheckMatrix", frozen, module = "qldpc_py")]
struct PyCheckMatrix {
    inner: CheckMatrix,
}

#[pymethods]
impl PyCheckMatrix {
    /// Build from sparse rows: a list of [(column, symbol), ...] per check.
    #[new]
    fn new(l: usize, num_symbols: usize, rows: Vec<Vec<(usize, u8)>>) -> PyResult<Self> {
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(n, v)| (n, FieldElement(v)))
                    .collect()
            })
            .collect();
        Ok(PyCheckMatrix {
            inner: CheckMatrix::new(l, num_symbols, rows).map_err(err)?,
        })
    }

    /// Parse the text format produced by `to_text`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyCheckMatrix {
            inner: qldpc::stabilizer::parse_check_matrix(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyCheckMatrix {
            inner: qldpc::stabilizer::read_check_matrix(path).map_err(err)?,
        })
    }

    fn to_text(&self, tables: PyRef<'_, PyFieldTables>) -> String {
        qldpc::stabilizer::format_check_matrix(&tables.inner, &self.inner)
    }

    fn save(&self, tables: PyRef<'_, PyFieldTables>, path: &str) -> PyResult<()> {
        qldpc::stabilizer::write_check_matrix(&tables.inner, &self.inner, path).map_err(err)
    }

    #[getter]
    fn l(&self) -> usize {
        self.inner.l()
    }

    #[getter]
    fn num_checks(&self) -> usize {
        self.inner.num_checks()
    }

    #[getter]
    fn num_symbols(&self) -> usize {
        self.inner.num_symbols()
    }

    /// Fraction of nonzero entries, κ.
    #[getter]
    fn row_density(&self) -> f64 {
        self.inner.row_density()
    }

    /// Sparse row m as [(column, symbol), ...].
    fn row(&self, m: usize) -> PyResult<Vec<(usize, u8)>> {
        if m >= self.inner.num_checks() {
            return Err(PyValueError::new_err(format!(
                "row {} out of range for {} checks",
                m,
                self.inner.num_checks()
            )));
        }
        Ok(self
            .inner
            .row(m)
            .iter()
            .map(|&(n, v)| (n as usize, v.0))
            .collect())
    }

    fn rows(&self) -> Vec<Vec<(usize, u8)>> {
        (0..self.inner.num_checks())
            .map(|m| {
                self.inner
                    .row(m)
                    .iter()
                    .map(|&(n, v)| (n as usize, v.0))
                    .collect()
            })
            .collect()
    }

    fn dense_row(&self, m: usize) -> PyResult<Vec<u16>> {
        if m >= self.inner.num_checks() {
            return Err(PyValueError::new_err(format!(
                "row {} out of range for {} checks",
                m,
                self.inner.num_checks()
            )));
        }
        Ok(raw(&self.inner.dense_row(m)))
    }

    /// Syndrome bits of an error vector.
    fn syndrome(&self, tables: PyRef<'_, PyFieldTables>, error: Vec<u8>) -> PyResult<Vec<u16>> {
        let t = &tables.inner;
        Ok(bits(&self.inner.syndrome(t, &fe_vec(t, &error)?).map_err(err)?))
    }

    /// GF(2) rank of the binary expansion of the rows.
    fn rank(&self, tables: PyRef<'_, PyFieldTables>) -> PyResult<usize> {
        Ok(RowSpan::new(&tables.inner, &self.inner).map_err(err)?.rank())
    }

    /// Number of logical symbols N - rank/l, or None when rank is not a
    /// multiple of l.
    fn num_logical(&self, tables: PyRef<'_, PyFieldTables>) -> PyResult<Option<usize>> {
        let span = RowSpan::new(&tables.inner, &self.inner).map_err(err)?;
        if span.rank() % self.inner.l() == 0 {
            Ok(Some(self.inner.num_symbols() - span.rank() / self.inner.l()))
        } else {
            Ok(None)
        }
    }

    /// Whether every pair of rows commutes symplectically.
    fn is_self_orthogonal(&self, tables: PyRef<'_, PyFieldTables>) -> bool {
        self.inner.validate_self_orthogonal(&tables.inner).is_ok()
    }

    /// Classify an estimate against the true error: one of "converged_exact",
    /// "degenerate_success", "logical_error", "detected_failure".
    fn classify(
        &self,
        tables: PyRef<'_, PyFieldTables>,
        estimate: Vec<u8>,
        error: Vec<u8>,
    ) -> PyResult<String> {
        let t = &tables.inner;
        let span = RowSpan::new(t, &self.inner).map_err(err)?;
        let class = qldpc::stabilizer::classify(
            t,
            &self.inner,
            &span,
            &fe_vec(t, &estimate)?,
            &fe_vec(t, &error)?,
        )
        .map_err(err)?;
        Ok(match class {
            DecodeClass::ConvergedExact => "converged_exact",
            DecodeClass::DegenerateSuccess => "degenerate_success",
            DecodeClass::LogicalError => "logical_error",
            DecodeClass::DetectedFailure => "detected_failure",
        }
        .to_string())
    }

    fn __repr__(&self) -> String {
        format!(
            "CheckMatrix(l={}, checks={}, symbols={})",
            self.inner.l(),
            self.inner.num_checks(),
            self.inner.num_symbols()
        )
    }
}

/// Result of one decoding run.
#[pyclass(name = "DecodeOutcome", frozen, module = "qldpc_py")]
struct PyDecodeOutcome {
    /// Estimated error, one symbol per column.
    #[pyo3(get)]
    e_hat: Vec<u16>,
    /// The estimate reproduces the input syndrome.
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    iterations_used: usize,
    /// Final per-symbol beliefs (LLR of zero against each nonzero class).
    #[pyo3(get)]
    gamma: Vec<Vec<f64>>,
    /// Per-iteration (iteration, hard_decision, syndrome_matched) when traced.
    #[pyo3(get)]
    trace: Option<Vec<(usize, Vec<u16>, bool)>>,
}

#[pymethods]
impl PyDecodeOutcome {
    fn __repr__(&self) -> String {
        format!(
            "DecodeOutcome(converged={}, iterations_used={})",
            self.converged, self.iterations_used
        )
    }
}

fn outcome_to_py(o: DecodeOutcome) -> PyDecodeOutcome {
    PyDecodeOutcome {
        e_hat: raw(&o.e_hat),
        converged: o.converged,
        iterations_used: o.iterations_used,
        gamma: o.gamma,
        trace: o.trace.map(|steps| {
            steps
                .into_iter()
                .map(|s| (s.iteration, raw(&s.hard_decision), s.syndrome_matched))
                .collect()
        }),
    }
}

/// One sweep point: counters plus rate helpers.
#[pyclass(name = "PointResult", frozen, module = "qldpc_py")]
struct PyPointResult {
    inner: qldpc::harness::PointResult,
}

#[pymethods]
impl PyPointResult {
    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon
    }

    #[getter]
    fn trials(&self) -> u64 {
        self.inner.trials
    }

    #[getter]
    fn converged_exact(&self) -> u64 {
        self.inner.converged_exact
    }

    #[getter]
    fn degenerate_successes(&self) -> u64 {
        self.inner.degenerate_successes
    }

    #[getter]
    fn logical_errors(&self) -> u64 {
        self.inner.logical_errors
    }

    #[getter]
    fn detected_failures(&self) -> u64 {
        self.inner.detected_failures
    }

    #[getter]
    fn total_iterations(&self) -> u64 {
        self.inner.total_iterations
    }

    #[getter]
    fn wall_time(&self) -> f64 {
        self.inner.wall_time
    }

    /// Logical errors plus detected failures.
    fn error_count(&self) -> u64 {
        self.inner.error_count()
    }

    /// Logical error rate.
    fn ler(&self) -> f64 {
        self.inner.ler()
    }

    /// 95% Wilson interval for the logical error rate.
    fn ler_interval(&self) -> (f64, f64) {
        self.inner.ler_interval()
    }

    fn mean_iterations(&self) -> f64 {
        self.inner.mean_iterations()
    }

    fn __repr__(&self) -> String {
        format!(
            "PointResult(epsilon={}, trials={}, ler={})",
            self.inner.epsilon,
            self.inner.trials,
            self.inner.ler()
        )
    }
}

/// All points of one Monte Carlo sweep.
#[pyclass(name = "SweepResult", frozen, module = "qldpc_py")]
struct PySweepResult {
    inner: qldpc::harness::SweepResult,
}

#[pymethods]
impl PySweepResult {
    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn points(&self) -> Vec<PyPointResult> {
        self.inner
            .points
            .iter()
            .map(|&p| PyPointResult { inner: p })
            .collect()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    /// Combine with a sweep of the same points from disjoint trial ranges.
    fn merge(&self, other: PyRef<'_, PySweepResult>) -> PyResult<PySweepResult> {
        Ok(PySweepResult {
            inner: self.inner.merge(&other.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "SweepResult(seed={}, points={})",
            self.inner.seed,
            self.inner.points.len()
        )
    }
}

/// Decode one syndrome with priors from a uniform depolarizing rate.
/// `decoder` is one of "llr", "cbp", "reference".
#[pyfunction]
#[pyo3(signature = (tables, matrix, syndrome, epsilon_0, *, decoder = "llr", t_max = 10,
    schedule = "parallel", alpha = None, beta = None, bit_width = None, arith = "exact",
    early_stop = true, record_trace = false))]
#[allow(clippy::too_many_arguments)]
fn decode(
    tables: PyRef<'_, PyFieldTables>,
    matrix: PyRef<'_, PyCheckMatrix>,
    syndrome: Vec<u8>,
    epsilon_0: f64,
    decoder: &str,
    t_max: usize,
    schedule: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    bit_width: Option<u32>,
    arith: &str,
    early_stop: bool,
    record_trace: bool,
) -> PyResult<PyDecodeOutcome> {
    let t = &tables.inner;
    let h = &matrix.inner;
    check_syndrome_bits(&syndrome)?;
    let config = build_config(t_max, schedule, alpha, beta, Some(epsilon_0), bit_width, arith)?;
    let n = h.num_symbols();
    let out = match parse_backend(decoder)? {
        DecoderBackend::Llr => {
            let llrs = qldpc::channel::init_llrs(t, epsilon_0, n).map_err(err)?;
            LlrBpDecoder::new(t, h, config)
                .map_err(err)?
                .run(&syndrome, &llrs, early_stop, record_trace)
                .map_err(err)?
        }
        DecoderBackend::Cbp => {
            let llrs = qldpc::channel::init_llrs(t, epsilon_0, n).map_err(err)?;
            cbp_linear_decode(t, h, &syndrome, &llrs, t_max, early_stop, record_trace)
                .map_err(err)?
        }
        DecoderBackend::Reference => {
            let probs = qldpc::channel::init_probs(t, epsilon_0, n).map_err(err)?;
            reference_vector_bp(t, h, &syndrome, &probs, t_max, early_stop, record_trace)
                .map_err(err)?
        }
    };
    Ok(outcome_to_py(out))
}

/// Monte Carlo logical-error-rate sweep over channel rates.
#[pyfunction]
#[pyo3(signature = (tables, matrix, epsilons, *, seed = 0, backend = "llr",
    min_logical_errors = 100, min_trials = 10_000, max_trials = 1_000_000,
    batch_size = 10_000, trial_offset = 0, t_max = 10, schedule = "parallel",
    alpha = None, beta = None, epsilon_0 = None, bit_width = None, arith = "exact"))]
#[allow(clippy::too_many_arguments)]
fn run_sweep(
    tables: PyRef<'_, PyFieldTables>,
    matrix: PyRef<'_, PyCheckMatrix>,
    epsilons: Vec<f64>,
    seed: u64,
    backend: &str,
    min_logical_errors: u64,
    min_trials: u64,
    max_trials: u64,
    batch_size: u64,
    trial_offset: u64,
    t_max: usize,
    schedule: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    epsilon_0: Option<f64>,
    bit_width: Option<u32>,
    arith: &str,
) -> PyResult<PySweepResult> {
    let config = build_config(t_max, schedule, alpha, beta, epsilon_0, bit_width, arith)?;
    let sweep = SweepConfig {
        seed,
        backend: parse_backend(backend)?,
        stop: StopRule {
            min_logical_errors,
            min_trials,
            max_trials,
        },
        batch_size,
        trial_offset,
    };
    let inner = qldpc::harness::run_sweep(&tables.inner, &matrix.inner, &epsilons, &config, &sweep)
        .map_err(err)?;
    Ok(PySweepResult { inner })
}

/// Decode every error pattern up to `weight_limit`; returns rows of
/// (weight, total, corrected, fraction).
#[pyfunction]
#[pyo3(signature = (tables, matrix, weight_limit, epsilon_0, *, backend = "llr", t_max = 10,
    schedule = "parallel", alpha = None, beta = None, bit_width = None, arith = "exact"))]
#[allow(clippy::too_many_arguments)]
fn audit(
    tables: PyRef<'_, PyFieldTables>,
    matrix: PyRef<'_, PyCheckMatrix>,
    weight_limit: usize,
    epsilon_0: f64,
    backend: &str,
    t_max: usize,
    schedule: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    bit_width: Option<u32>,
    arith: &str,
) -> PyResult<Vec<(usize, u64, u64, f64)>> {
    let config = build_config(t_max, schedule, alpha, beta, None, bit_width, arith)?;
    let report = qldpc::harness::decode_all_syndromes(
        &tables.inner,
        &matrix.inner,
        &config,
        parse_backend(backend)?,
        epsilon_0,
        weight_limit,
    )
    .map_err(err)?;
    Ok(report
        .per_weight
        .iter()
        .map(|w| (w.weight, w.total, w.corrected, w.gamma()))
        .collect())
}

/// Bounded-distance reference curve for a code of length n and radius t;
/// `gamma[j]` is the corrected fraction at weight j, padded with 1.0 up to t.
#[pyfunction]
fn bdd_curve(n: usize, t: usize, gamma: Vec<f64>, epsilons: Vec<f64>) -> PyResult<Vec<f64>> {
    let spec = BddSpec::new(n, t, gamma).map_err(err)?;
    Ok(qldpc::harness::bdd_curve(&spec, &epsilons))
}

/// Map a binary-channel rate to the matched depolarizing rate 1.5·ε_b.
#[pyfunction]
fn convert_rate(epsilon_b: f64) -> PyResult<f64> {
    qldpc::harness::convert_rate(epsilon_b).map_err(err)
}

/// Wilson score interval for a binomial proportion.
#[pyfunction]
#[pyo3(signature = (successes, trials, z = WILSON_Z95))]
fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    qldpc::harness::wilson_interval(successes, trials, z)
}

/// Per-symbol prior LLRs for a uniform depolarizing rate.
#[pyfunction]
fn init_llrs(tables: PyRef<'_, PyFieldTables>, epsilon_0: f64, n: usize) -> PyResult<Vec<Vec<f64>>> {
    qldpc::channel::init_llrs(&tables.inner, epsilon_0, n).map_err(err)
}

/// Per-symbol prior probabilities for a uniform depolarizing rate.
#[pyfunction]
fn init_probs(tables: PyRef<'_, PyFieldTables>, epsilon_0: f64, n: usize) -> PyResult<Vec<Vec<f64>>> {
    qldpc::channel::init_probs(&tables.inner, epsilon_0, n).map_err(err)
}

/// Draw one channel error; (seed, point_index, trial) address the same
/// counter-mode stream the sweep harness uses, so trials can be replayed.
#[pyfunction]
#[pyo3(signature = (tables, epsilon, n, *, seed = 0, point_index = 0, trial = 0))]
fn sample_error(
    tables: PyRef<'_, PyFieldTables>,
    epsilon: f64,
    n: usize,
    seed: u64,
    point_index: usize,
    trial: u64,
) -> PyResult<Vec<u16>> {
    let channel = DepolarizingChannel::new(&tables.inner, epsilon, seed).map_err(err)?;
    let mut rng = channel.trial_rng(point_index, trial);
    Ok(raw(&channel.sample_error(n, &mut rng)))
}

/// Binary circulant matrix with ones at the given 1-indexed positions.
#[pyfunction]
fn circulant(n: usize, positions: Vec<usize>) -> PyResult<Grid> {
    Ok(binary_to_grid(
        &BinaryMatrix::circulant(n, &positions).map_err(err)?,
    ))
}

/// Bicycle construction: [C | C^T] with `deleted_rows` (1-indexed) removed.
#[pyfunction]
fn bicycle(
    n: usize,
    row_weight: usize,
    generator_positions: Vec<usize>,
    deleted_rows: Vec<usize>,
) -> PyResult<Grid> {
    Ok(binary_to_grid(
        &qldpc::stabilizer::bicycle_construct(n, row_weight, &generator_positions, &deleted_rows)
            .map_err(err)?,
    ))
}

/// Lift a binary matrix to a GF(q²) check matrix with entries ω^0.
#[pyfunction]
fn to_check_matrix(l: usize, rows: Vec<Vec<u8>>) -> PyResult<PyCheckMatrix> {
    Ok(PyCheckMatrix {
        inner: qldpc::stabilizer::binary_to_check_matrix(l, &grid_to_binary(&rows)?)
            .map_err(err)?,
    })
}

/// Stack ω^j-scaled copies of a base matrix into a self-orthogonal code.
#[pyfunction]
fn css_extend(
    tables: PyRef<'_, PyFieldTables>,
    base: PyRef<'_, PyCheckMatrix>,
) -> PyResult<PyCheckMatrix> {
    Ok(PyCheckMatrix {
        inner: qldpc::stabilizer::css_extend(&tables.inner, &base.inner).map_err(err)?,
    })
}

/// css_extend with a distinct binary matrix per ω^j layer (2l blocks).
#[pyfunction]
fn generalized_css_extend(
    tables: PyRef<'_, PyFieldTables>,
    blocks: Vec<Vec<Vec<u8>>>,
) -> PyResult<PyCheckMatrix> {
    let mats = blocks
        .iter()
        .map(|b| grid_to_binary(b))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(PyCheckMatrix {
        inner: qldpc::stabilizer::generalized_css_extend(&tables.inner, &mats).map_err(err)?,
    })
}

/// Hypergraph product of two binary matrices; returns (H_X, H_Z).
#[pyfunction]
fn hypergraph_product(
    h1: Vec<Vec<u8>>,
    h2: Vec<Vec<u8>>,
) -> PyResult<(Grid, Grid)> {
    let (hx, hz) =
        qldpc::stabilizer::hypergraph_product(&grid_to_binary(&h1)?, &grid_to_binary(&h2)?)
            .map_err(err)?;
    Ok((binary_to_grid(&hx), binary_to_grid(&hz)))
}

/// Parse an error vector ("z3 0 z1 ..." or IXYZ at l=1).
#[pyfunction]
fn parse_error_vector(tables: PyRef<'_, PyFieldTables>, text: &str) -> PyResult<Vec<u16>> {
    Ok(raw(
        &qldpc::stabilizer::parse_error_vector(&tables.inner, text).map_err(err)?,
    ))
}

/// Format an error vector in the text format `parse_error_vector` reads.
#[pyfunction]
fn format_error_vector(tables: PyRef<'_, PyFieldTables>, values: Vec<u8>) -> PyResult<String> {
    let t = &tables.inner;
    Ok(qldpc::stabilizer::format_error_vector(t, &fe_vec(t, &values)?))
}

/// Parse a syndrome of 0/1 characters.
#[pyfunction]
fn parse_syndrome(text: &str) -> PyResult<Vec<u16>> {
    Ok(bits(&qldpc::stabilizer::parse_syndrome(text).map_err(err)?))
}

#[pymodule]
fn qldpc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFieldTables>()?;
    m.add_class::<PyCheckMatrix>()?;
    m.add_class::<PyDecodeOutcome>()?;
    m.add_class::<PyPointResult>()?;
    m.add_class::<PySweepResult>()?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(bdd_curve, m)?)?;
    m.add_function(wrap_pyfunction!(convert_rate, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_interval, m)?)?;
    m.add_function(wrap_pyfunction!(init_llrs, m)?)?;
    m.add_function(wrap_pyfunction!(init_probs, m)?)?;
    m.add_function(wrap_pyfunction!(sample_error, m)?)?;
    m.add_function(wrap_pyfunction!(circulant, m)?)?;
    m.add_function(wrap_pyfunction!(bicycle, m)?)?;
    m.add_function(wrap_pyfunction!(to_check_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(css_extend, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_css_extend, m)?)?;
    m.add_function(wrap_pyfunction!(hypergraph_product, m)?)?;
    m.add_function(wrap_pyfunction!(parse_error_vector, m)?)?;
    m.add_function(wrap_pyfunction!(format_error_vector, m)?)?;
    m.add_function(wrap_pyfunction!(parse_syndrome, m)?)?;
    m.add("WILSON_Z95", WILSON_Z95)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
