//! Decoders: the scalar-message log-domain BP decoder, a vector-message
//! nonbinary BP used as a correctness oracle, and classical nonbinary BP on
//! the condensed linear form of a stacked check matrix.

pub mod arith;
mod cbp;
mod llr;
mod reference;

pub use arith::{
    box_minus, box_plus, box_sum, jacobian_f, lambda_eta, quantize, saturate, ArithmeticMode,
    LLR_SATURATION,
};
pub use cbp::{cbp_linear_decode, SyndromeDigitMap};
pub use llr::LlrBpDecoder;
pub use reference::reference_vector_bp;

use crate::error::{Error, Result};
use crate::galois::FieldElement;

/// Message-passing order within one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    #[default]
    Parallel,
    Serial,
}

/// Knobs of the LLR-BP decoder. At most one of `alpha` (normalization,
/// divides check messages) and `beta` (offset, shrinks their magnitude) may
/// be active.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct DecoderConfig {
    pub t_max: usize,
    pub schedule: Schedule,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Fixed initialization rate used in place of the channel rate when set.
    pub epsilon_0: Option<f64>,
    /// Message bit width k: sign plus k-1 significand bits.
    pub bit_width: Option<u32>,
    pub mode: ArithmeticMode,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            t_max: 10,
            schedule: Schedule::Parallel,
            alpha: None,
            beta: None,
            epsilon_0: None,
            bit_width: None,
            mode: ArithmeticMode::Exact,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.t_max == 0 {
            return bad("t_max must be at least 1".into());
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a.is_finite()) {
                return bad(format!("alpha must be positive and finite, got {a}"));
            }
        }
        if let Some(b) = self.beta {
            if !(b > 0.0 && b.is_finite()) {
                return bad(format!("beta must be positive and finite, got {b}"));
            }
        }
        if self.alpha.is_some() && self.beta.is_some() {
            return bad("normalization and offset cannot be combined".into());
        }
        if let Some(e0) = self.epsilon_0 {
            if !(e0 > 0.0 && e0 < 1.0) {
                return bad(format!("epsilon_0 must lie in (0, 1), got {e0}"));
            }
        }
        if let Some(k) = self.bit_width {
            if !(3..=53).contains(&k) {
                return bad(format!("bit width must lie in 3..=53, got {k}"));
            }
        }
        Ok(())
    }
}

/// Snapshot of one iteration, for trajectory plots.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TraceStep {
    pub iteration: usize,
    pub hard_decision: Vec<FieldElement>,
    pub gamma: Vec<Vec<f64>>,
    pub syndrome_matched: bool,
}

/// Result of one decoding run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DecodeOutcome {
    pub e_hat: Vec<FieldElement>,
    /// The returned estimate reproduces the input syndrome.
    pub converged: bool,
    pub iterations_used: usize,
    /// Final per-symbol beliefs Γ_n (LLR of zero against ζ^i).
    pub gamma: Vec<Vec<f64>>,
    pub trace: Option<Vec<TraceStep>>,
}

/// Beliefs closer than this are treated as tied, so that decisions do not
/// depend on the arithmetic route that produced them.
pub(crate) const DECISION_TOLERANCE: f64 = 1e-9;

/// Hard decision: 0 when every belief is positive, otherwise the class ζ^i
/// of the smallest belief, near-ties broken toward the smallest i.
pub(crate) fn hard_decision(
    tables: &crate::galois::FieldTables,
    gamma: &[f64],
) -> FieldElement {
    let mn = gamma.iter().copied().fold(f64::INFINITY, f64::min);
    if mn > DECISION_TOLERANCE {
        return FieldElement::ZERO;
    }
    let best = gamma
        .iter()
        .position(|&g| g <= mn + DECISION_TOLERANCE)
        .unwrap_or(0);
    tables.pow(tables.omega(), best as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldTables;

    #[test]
    fn config_validation() {
        assert!(DecoderConfig::default().validate().is_ok());
        let mut c = DecoderConfig::default();
        c.t_max = 0;
        assert!(c.validate().is_err());
        let mut c = DecoderConfig::default();
        c.alpha = Some(1.2);
        c.beta = Some(0.5);
        assert!(c.validate().is_err());
        let mut c = DecoderConfig::default();
        c.alpha = Some(-1.0);
        assert!(c.validate().is_err());
        let mut c = DecoderConfig::default();
        c.bit_width = Some(2);
        assert!(c.validate().is_err());
        let mut c = DecoderConfig::default();
        c.epsilon_0 = Some(0.0);
        assert!(c.validate().is_err());
        let mut c = DecoderConfig::default();
        c.beta = Some(2.75);
        c.epsilon_0 = Some(5e-3);
        c.bit_width = Some(6);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn hard_decision_rule() {
        let t = FieldTables::new(1).unwrap();
        assert_eq!(hard_decision(&t, &[0.5, 2.0, 1.0]), FieldElement::ZERO);
        // zero belief is not strictly positive: decide the argmin class
        assert_eq!(hard_decision(&t, &[0.0, 2.0, 1.0]), FieldElement::ONE);
        assert_eq!(hard_decision(&t, &[3.0, -1.0, 1.0]), t.omega());
        // tie between classes 1 and 2 goes to the smaller exponent
        let om2 = t.mul(t.omega(), t.omega());
        assert_eq!(hard_decision(&t, &[3.0, -1.0, -1.0]), t.omega());
        assert_eq!(hard_decision(&t, &[3.0, 1.0, -1.0]), om2);
    }
}
