//! Monte Carlo experiment driver plus exhaustive capability audits, analytic
//! bounded-distance reference curves, and physical-rate conversion.

use crate::channel::{init_llrs, init_probs, DepolarizingChannel};
use crate::decoder::{cbp_linear_decode, reference_vector_bp, DecoderConfig, LlrBpDecoder};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTables};
use crate::stabilizer::{classify, CheckMatrix, RowSpan};
use itertools::Itertools;
use rayon::prelude::*;
use std::time::Instant;

/// 97.5th normal percentile, for two-sided 95% intervals.
pub const WILSON_Z95: f64 = 1.959963984540054;

const AUDIT_ENUMERATION_LIMIT: u128 = 10_000_000;

/// Which decoder a sweep or audit drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderBackend {
    #[default]
    Llr,
    Cbp,
    Reference,
}

/// Stop criterion per sweep point: run until both floors are met, capped by
/// `max_trials`. Evaluated at batch boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct StopRule {
    pub min_logical_errors: u64,
    pub min_trials: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_logical_errors: 100,
            min_trials: 10_000,
            max_trials: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PointResult {
    pub epsilon: f64,
    pub trials: u64,
    pub converged_exact: u64,
    pub degenerate_successes: u64,
    pub logical_errors: u64,
    pub detected_failures: u64,
    pub total_iterations: u64,
    pub wall_time: f64,
}

impl PointResult {
    fn empty(epsilon: f64) -> Self {
        PointResult {
            epsilon,
            trials: 0,
            converged_exact: 0,
            degenerate_successes: 0,
            logical_errors: 0,
            detected_failures: 0,
            total_iterations: 0,
            wall_time: 0.0,
        }
    }

    /// Headline failure count: falsely matched plus unmatched at the
    /// iteration cap.
    pub fn error_count(&self) -> u64 {
        self.logical_errors + self.detected_failures
    }

    pub fn ler(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.error_count() as f64 / self.trials as f64
        }
    }

    pub fn ler_interval(&self) -> (f64, f64) {
        wilson_interval(self.error_count(), self.trials, WILSON_Z95)
    }

    pub fn mean_iterations(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.total_iterations as f64 / self.trials as f64
        }
    }

    pub fn merge(&self, other: &PointResult) -> Result<PointResult> {
        if self.epsilon != other.epsilon {
            return Err(Error::InvalidArgument(format!(
                "cannot merge points at different rates {} and {}",
                self.epsilon, other.epsilon
            )));
        }
        Ok(PointResult {
            epsilon: self.epsilon,
            trials: self.trials + other.trials,
            converged_exact: self.converged_exact + other.converged_exact,
            degenerate_successes: self.degenerate_successes + other.degenerate_successes,
            logical_errors: self.logical_errors + other.logical_errors,
            detected_failures: self.detected_failures + other.detected_failures,
            total_iterations: self.total_iterations + other.total_iterations,
            wall_time: self.wall_time + other.wall_time,
        })
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepResult {
    pub seed: u64,
    pub points: Vec<PointResult>,
}

impl SweepResult {
    /// Pools two runs of the same configuration over disjoint trial ranges.
    pub fn merge(&self, other: &SweepResult) -> Result<SweepResult> {
        if self.seed != other.seed || self.points.len() != other.points.len() {
            return Err(Error::InvalidArgument(
                "sweep results stem from different configurations".into(),
            ));
        }
        let points = self
            .points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| a.merge(b))
            .collect::<Result<_>>()?;
        Ok(SweepResult {
            seed: self.seed,
            points,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "epsilon,trials,logical_errors,detected_failures,degenerate_successes,ler,ler_ci_lo,ler_ci_hi,mean_iters\n",
        );
        for p in &self.points {
            let (lo, hi) = p.ler_interval();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                p.epsilon,
                p.trials,
                p.logical_errors,
                p.detected_failures,
                p.degenerate_successes,
                p.ler(),
                lo,
                hi,
                p.mean_iterations()
            ));
        }
        out
    }
}

/// Sweep controls. `trial_offset` shifts the global trial indices so that
/// disjoint ranges of the same seed can be pooled with `SweepResult::merge`.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub backend: DecoderBackend,
    pub stop: StopRule,
    pub batch_size: u64,
    pub trial_offset: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            backend: DecoderBackend::Llr,
            stop: StopRule::default(),
            batch_size: 1000,
            trial_offset: 0,
        }
    }
}

// fallback prior rate so an exactly-noiseless channel still yields finite
// priors
const MIN_PRIOR_RATE: f64 = 1e-12;

struct TrialOutcome {
    exact: bool,
    degenerate: bool,
    logical: bool,
    detected: bool,
    iterations: u64,
}

fn decode_and_classify(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    span: &RowSpan,
    llr_decoder: &LlrBpDecoder,
    backend: DecoderBackend,
    config: &DecoderConfig,
    priors_llr: &[Vec<f64>],
    priors_prob: &[Vec<f64>],
    error: &[FieldElement],
) -> Result<TrialOutcome> {
    let z = matrix.syndrome(tables, error)?;
    let out = match backend {
        DecoderBackend::Llr => llr_decoder.decode(&z, priors_llr)?,
        DecoderBackend::Cbp => {
            cbp_linear_decode(tables, matrix, &z, priors_llr, config.t_max, true, false)?
        }
        DecoderBackend::Reference => {
            reference_vector_bp(tables, matrix, &z, priors_prob, config.t_max, true, false)?
        }
    };
    let class = classify(tables, matrix, span, &out.e_hat, error)?;
    use crate::stabilizer::DecodeClass::*;
    Ok(TrialOutcome {
        exact: class == ConvergedExact,
        degenerate: class == DegenerateSuccess,
        logical: class == LogicalError,
        detected: class == DetectedFailure,
        iterations: out.iterations_used as u64,
    })
}

/// Runs the Monte Carlo sweep over the given channel rates.
///
/// Trials are independent and indexed globally; batch boundaries are the only
/// stop-rule decision points, so the outcome is bit-identical for a given
/// seed and configuration regardless of parallelism.
pub fn run_sweep(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    epsilons: &[f64],
    decoder: &DecoderConfig,
    sweep: &SweepConfig,
) -> Result<SweepResult> {
    decoder.validate()?;
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("no channel rates given".into()));
    }
    let span = RowSpan::new(tables, matrix)?;
    let llr_decoder = LlrBpDecoder::new(tables, matrix, decoder.clone())?;
    let n = matrix.num_symbols();
    let batch = sweep.batch_size.max(1);
    let mut points = Vec::with_capacity(epsilons.len());
    for (idx, &eps) in epsilons.iter().enumerate() {
        let started = Instant::now();
        let channel = DepolarizingChannel::new(tables, eps, sweep.seed)?;
        let eps0 = decoder.epsilon_0.unwrap_or(eps.max(MIN_PRIOR_RATE));
        let priors_llr = init_llrs(tables, eps0, n)?;
        let priors_prob = init_probs(tables, eps0, n)?;
        let mut point = PointResult::empty(eps);
        while point.trials < sweep.stop.max_trials {
            let count = batch.min(sweep.stop.max_trials - point.trials);
            let outcomes: Vec<TrialOutcome> = (0..count)
                .into_par_iter()
                .map(|k| {
                    let trial = sweep.trial_offset + point.trials + k;
                    let mut rng = channel.trial_rng(idx, trial);
                    let error = channel.sample_error(n, &mut rng);
                    decode_and_classify(
                        tables,
                        matrix,
                        &span,
                        &llr_decoder,
                        sweep.backend,
                        decoder,
                        &priors_llr,
                        &priors_prob,
                        &error,
                    )
                })
                .collect::<Result<_>>()?;
            for o in &outcomes {
                point.trials += 1;
                point.converged_exact += o.exact as u64;
                point.degenerate_successes += o.degenerate as u64;
                point.logical_errors += o.logical as u64;
                point.detected_failures += o.detected as u64;
                point.total_iterations += o.iterations;
            }
            if point.error_count() >= sweep.stop.min_logical_errors
                && point.trials >= sweep.stop.min_trials
            {
                break;
            }
        }
        point.wall_time = started.elapsed().as_secs_f64();
        points.push(point);
    }
    Ok(SweepResult {
        seed: sweep.seed,
        points,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct WeightCoverage {
    pub weight: usize,
    pub total: u64,
    pub corrected: u64,
}

impl WeightCoverage {
    /// Corrected fraction γ_w.
    pub fn gamma(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.corrected as f64 / self.total as f64
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CoverageReport {
    pub weight_limit: usize,
    pub per_weight: Vec<WeightCoverage>,
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for j in 1..=k {
        c = c.saturating_mul((n - k + j) as u128) / j as u128;
    }
    c
}

/// Decodes the syndrome of every error of weight ≤ `weight_limit` and
/// reports the corrected fraction per weight.
pub fn decode_all_syndromes(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    decoder: &DecoderConfig,
    backend: DecoderBackend,
    epsilon_0: f64,
    weight_limit: usize,
) -> Result<CoverageReport> {
    decoder.validate()?;
    let n = matrix.num_symbols();
    let q2 = tables.q2();
    let mut workload: u128 = 0;
    for w in 0..=weight_limit {
        workload = workload
            .saturating_add(binomial_u128(n, w).saturating_mul((q2 as u128 - 1).pow(w as u32)));
    }
    if workload > AUDIT_ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            size: workload,
            limit: AUDIT_ENUMERATION_LIMIT,
        });
    }
    let span = RowSpan::new(tables, matrix)?;
    let llr_decoder = LlrBpDecoder::new(tables, matrix, decoder.clone())?;
    let priors_llr = init_llrs(tables, epsilon_0, n)?;
    let priors_prob = init_probs(tables, epsilon_0, n)?;
    let mut per_weight = Vec::with_capacity(weight_limit + 1);
    for w in 0..=weight_limit {
        let supports: Vec<Vec<usize>> = (0..n).combinations(w).collect();
        let tallies: Vec<(u64, u64)> = supports
            .par_iter()
            .map(|support| {
                let mut error = vec![FieldElement::ZERO; n];
                let mut values = vec![1usize; w];
                let mut total = 0u64;
                let mut corrected = 0u64;
                loop {
                    for (&pos, &v) in support.iter().zip(&values) {
                        error[pos] = FieldElement(v as u8);
                    }
                    let outcome = decode_and_classify(
                        tables,
                        matrix,
                        &span,
                        &llr_decoder,
                        backend,
                        decoder,
                        &priors_llr,
                        &priors_prob,
                        &error,
                    )?;
                    total += 1;
                    corrected += (outcome.exact || outcome.degenerate) as u64;
                    // odometer over the nonzero values
                    let mut carry = true;
                    for v in values.iter_mut() {
                        *v += 1;
                        if *v == q2 {
                            *v = 1;
                        } else {
                            carry = false;
                            break;
                        }
                    }
                    if carry {
                        break;
                    }
                }
                Ok((total, corrected))
            })
            .collect::<Result<_>>()?;
        let (total, corrected) = tallies
            .iter()
            .fold((0, 0), |(t, c), &(dt, dc)| (t + dt, c + dc));
        per_weight.push(WeightCoverage {
            weight: w,
            total,
            corrected,
        });
    }
    Ok(CoverageReport {
        weight_limit,
        per_weight,
    })
}

/// Bounded-distance reference curve parameters: corrected fractions
/// γ_0..γ_t, defaulting to 1 where omitted.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BddSpec {
    pub n: usize,
    pub t: usize,
    pub gamma: Vec<f64>,
}

impl BddSpec {
    pub fn new(n: usize, t: usize, gamma: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("empty block length".into()));
        }
        if gamma.len() > t + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} corrected fractions given for radius {t}",
                gamma.len()
            )));
        }
        if gamma.iter().any(|g| !(0.0..=1.0).contains(g)) {
            return Err(Error::InvalidArgument(
                "corrected fractions must lie in [0, 1]".into(),
            ));
        }
        let mut gamma = gamma;
        gamma.resize(t + 1, 1.0);
        Ok(BddSpec { n, t, gamma })
    }
}

/// Residual error probability of bounded-distance decoding with partial
/// coverage: 1 − Σ_j γ_j C(N,j) ε^j (1−ε)^{N−j}.
pub fn bdd_curve(spec: &BddSpec, epsilons: &[f64]) -> Vec<f64> {
    epsilons
        .iter()
        .map(|&eps| {
            let mut covered = 0.0;
            let mut coeff = 1.0f64;
            for j in 0..=spec.t {
                if j > 0 {
                    coeff = coeff * (spec.n - j + 1) as f64 / j as f64;
                }
                covered += spec.gamma[j]
                    * coeff
                    * eps.powi(j as i32)
                    * (1.0 - eps).powi((spec.n - j) as i32);
            }
            1.0 - covered
        })
        .collect()
}

/// Converts a binary-symbol flip rate to the matched depolarizing rate
/// ε = 3ε_b/2.
pub fn convert_rate(epsilon_b: f64) -> Result<f64> {
    if !(0.0..=2.0 / 3.0).contains(&epsilon_b) {
        return Err(Error::InvalidArgument(format!(
            "binary rate {epsilon_b} outside [0, 2/3]"
        )));
    }
    Ok(1.5 * epsilon_b)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let zz = z * z;
    let denom = 1.0 + zz / n;
    let center = (p + zz / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + zz / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
