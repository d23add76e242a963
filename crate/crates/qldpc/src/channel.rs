//! Depolarizing error model over GF(q²) and decoder initialization vectors.

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTables};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Memoryless channel: each symbol independently takes any fixed nonzero
/// value with probability ε/(q²−1) and stays zero with probability 1−ε.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DepolarizingChannel {
    epsilon: f64,
    q2: usize,
    seed: u64,
}

impl DepolarizingChannel {
    pub fn new(tables: &FieldTables, epsilon: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidArgument(format!(
                "error rate {epsilon} outside [0, 1)"
            )));
        }
        Ok(DepolarizingChannel {
            epsilon,
            q2: tables.q2(),
            seed,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for one (sweep point, trial) pair, so a trial's
    /// draws do not depend on scheduling or on other trials.
    pub fn trial_rng(&self, point_index: usize, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((point_index as u64) << 48) | trial);
        rng
    }

    pub fn sample_error(&self, n: usize, rng: &mut impl Rng) -> Vec<FieldElement> {
        (0..n)
            .map(|_| {
                if rng.random_bool(self.epsilon) {
                    FieldElement(rng.random_range(1..self.q2) as u8)
                } else {
                    FieldElement::ZERO
                }
            })
            .collect()
    }
}

/// Uniform initial LLR vectors: every entry ln((1−ε₀)(q²−1)/ε₀).
pub fn init_llrs(tables: &FieldTables, epsilon_0: f64, n: usize) -> Result<Vec<Vec<f64>>> {
    if !(epsilon_0 > 0.0 && epsilon_0 < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "initialization rate {epsilon_0} outside (0, 1)"
        )));
    }
    let value = ((1.0 - epsilon_0) * (tables.q2() - 1) as f64 / epsilon_0).ln();
    Ok(vec![vec![value; tables.q2() - 1]; n])
}

/// Probability-domain counterpart of `init_llrs` for the vector decoders.
pub fn init_probs(tables: &FieldTables, epsilon_0: f64, n: usize) -> Result<Vec<Vec<f64>>> {
    if !(epsilon_0 > 0.0 && epsilon_0 < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "initialization rate {epsilon_0} outside (0, 1)"
        )));
    }
    let mut p = vec![epsilon_0 / (tables.q2() - 1) as f64; tables.q2()];
    p[0] = 1.0 - epsilon_0;
    Ok(vec![p; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::{lambda_eta, ArithmeticMode};

    #[test]
    fn zero_rate_never_flips_a_symbol() {
        let t = FieldTables::new(1).unwrap();
        let ch = DepolarizingChannel::new(&t, 0.0, 11).unwrap();
        let mut rng = ch.trial_rng(0, 0);
        let e = ch.sample_error(1000, &mut rng);
        assert!(e.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn empirical_rate_and_symbol_balance_match_the_model() {
        let t = FieldTables::new(1).unwrap();
        let ch = DepolarizingChannel::new(&t, 0.1, 12).unwrap();
        let mut rng = ch.trial_rng(0, 0);
        let n = 1_000_000usize;
        let e = ch.sample_error(n, &mut rng);
        let nonzero = e.iter().filter(|x| !x.is_zero()).count();
        let frac = nonzero as f64 / n as f64;
        assert!((frac - 0.1).abs() < 1e-3, "nonzero fraction {frac}");
        let mut counts = [0usize; 4];
        for x in &e {
            counts[x.index()] += 1;
        }
        let sigma = (nonzero as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for &c in &counts[1..] {
            assert!((c as f64 - nonzero as f64 / 3.0).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn near_one_rate_flips_nearly_everything() {
        let t = FieldTables::new(2).unwrap();
        let ch = DepolarizingChannel::new(&t, 0.9999, 13).unwrap();
        let mut rng = ch.trial_rng(0, 0);
        let e = ch.sample_error(100_000, &mut rng);
        let nonzero = e.iter().filter(|x| !x.is_zero()).count();
        assert!(nonzero >= 99_800);
    }

    #[test]
    fn trial_streams_are_reproducible_and_independent() {
        let t = FieldTables::new(1).unwrap();
        let ch = DepolarizingChannel::new(&t, 0.3, 99).unwrap();
        let a = ch.sample_error(64, &mut ch.trial_rng(2, 7));
        let b = ch.sample_error(64, &mut ch.trial_rng(2, 7));
        assert_eq!(a, b);
        let c = ch.sample_error(64, &mut ch.trial_rng(2, 8));
        assert_ne!(a, c);
        let d = ch.sample_error(64, &mut ch.trial_rng(3, 7));
        assert_ne!(a, d);
    }

    #[test]
    fn rate_outside_the_unit_interval_is_rejected() {
        let t = FieldTables::new(1).unwrap();
        assert!(DepolarizingChannel::new(&t, 1.0, 0).is_err());
        assert!(DepolarizingChannel::new(&t, -0.1, 0).is_err());
        assert!(init_llrs(&t, 0.0, 1).is_err());
        assert!(init_llrs(&t, 1.0, 1).is_err());
    }

    #[test]
    fn initial_llrs_match_closed_forms() {
        let t2 = FieldTables::new(1).unwrap();
        let llrs = init_llrs(&t2, 0.02, 3).unwrap();
        assert_eq!(llrs.len(), 3);
        for row in &llrs {
            assert_eq!(row.len(), 3);
            for &v in row {
                assert!((v - 147f64.ln()).abs() < 1e-12);
                assert!((v - 4.9904).abs() < 1e-4);
            }
        }
        let t4 = FieldTables::new(2).unwrap();
        let llrs = init_llrs(&t4, 5e-3, 1).unwrap();
        for &v in &llrs[0] {
            assert!((v - 2985f64.ln()).abs() < 1e-12);
            assert!((v - 8.0014).abs() < 1e-4);
        }
        // the symmetry point gives a flat prior
        for (l, q2) in [(1usize, 4.0f64), (2, 16.0)] {
            let t = FieldTables::new(l).unwrap();
            let llrs = init_llrs(&t, (q2 - 1.0) / q2, 1).unwrap();
            assert!(llrs[0].iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn probability_and_llr_initializations_agree() {
        let t = FieldTables::new(2).unwrap();
        let llrs = init_llrs(&t, 0.07, 1).unwrap();
        let probs = init_probs(&t, 0.07, 1).unwrap();
        let sum: f64 = probs[0].iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for i in 0..15 {
            let idx = t.pow(t.omega(), i as i64).index();
            assert!(((probs[0][0] / probs[0][idx]).ln() - llrs[0][i]).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_initialization_gives_one_scalar_message_for_every_eta() {
        let t = FieldTables::new(2).unwrap();
        let llrs = init_llrs(&t, 0.02, 1).unwrap();
        let reference = lambda_eta(&t, FieldElement::ONE, &llrs[0], ArithmeticMode::Exact).unwrap();
        for v in 2..t.q2() {
            let eta = FieldElement(v as u8);
            let lam = lambda_eta(&t, eta, &llrs[0], ArithmeticMode::Exact).unwrap();
            assert!((lam - reference).abs() < 1e-12);
        }
    }
}
