//! Scalar log-domain primitives: the Jacobian logarithm, the tanh rule and
//! its inverse, belief quantization to a scalar LLR per check entry, and
//! bit-width truncation of messages.

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTables};

/// Messages are clamped to this magnitude before entering λ or ⊞.
pub const LLR_SATURATION: f64 = 1e6;

const TABLE_STEP: f64 = std::f64::consts::LN_2 / 64.0;
const TABLE_INPUT_CUTOFF: f64 = 8.0;

/// How the Jacobian correction term is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    #[default]
    Exact,
    /// Correction quantized to a 64-cell grid over [0, ln 2]; inputs beyond
    /// 8 give zero correction.
    LookupTable,
}

fn correction(d: f64, mode: ArithmeticMode) -> f64 {
    match mode {
        ArithmeticMode::Exact => (-d).exp().ln_1p(),
        ArithmeticMode::LookupTable => {
            if d > TABLE_INPUT_CUTOFF {
                0.0
            } else {
                ((-d).exp().ln_1p() / TABLE_STEP).round() * TABLE_STEP
            }
        }
    }
}

/// f(x, y) = ln(e^x + e^y) = max(x, y) + ln(1 + e^-|x-y|).
pub fn jacobian_f(x: f64, y: f64, mode: ArithmeticMode) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == lo {
        return hi + correction(0.0, mode);
    }
    let d = hi - lo;
    if d.is_infinite() {
        return hi;
    }
    hi + correction(d, mode)
}

/// x ⊞ y = 2 tanh⁻¹(tanh(x/2) tanh(y/2)), computed as
/// ln(1 + e^{x+y}) − ln(e^x + e^y) via f.
pub fn box_plus(x: f64, y: f64, mode: ArithmeticMode) -> f64 {
    if x.is_infinite() {
        if y.is_infinite() {
            return if (x > 0.0) == (y > 0.0) {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        return if x > 0.0 { y } else { -y };
    }
    if y.is_infinite() {
        return if y > 0.0 { x } else { -x };
    }
    jacobian_f(0.0, x + y, mode) - jacobian_f(x, y, mode)
}

/// k-ary tanh rule; the empty combination is the identity +∞.
pub fn box_sum(terms: impl IntoIterator<Item = f64>, mode: ArithmeticMode) -> f64 {
    terms
        .into_iter()
        .fold(f64::INFINITY, |acc, t| box_plus(acc, t, mode))
}

fn ln_tanh_half(a: f64) -> f64 {
    if a == 0.0 {
        f64::NEG_INFINITY
    } else {
        (-(-a).exp_m1()).ln() - (-a).exp().ln_1p()
    }
}

/// x ⊟ y = 2 tanh⁻¹(tanh(x/2) / tanh(y/2)): removes the contribution y from
/// the combination x. Defined for |x| < |y|, y ≠ 0; outside that region the
/// result saturates in magnitude. Always evaluated exactly: the quantized
/// table covers only the ln(1 + e^-d) correction of f.
pub fn box_minus(x: f64, y: f64) -> f64 {
    let sign = if (x < 0.0) != (y < 0.0) { -1.0 } else { 1.0 };
    if y.is_infinite() {
        return if y > 0.0 { x } else { -x };
    }
    if x.is_infinite() {
        return sign * LLR_SATURATION;
    }
    let delta = ln_tanh_half(x.abs()) - ln_tanh_half(y.abs());
    if delta >= 0.0 {
        return sign * LLR_SATURATION;
    }
    let e = delta.exp();
    sign * (e.ln_1p() - (-delta.exp_m1()).ln())
}

/// λ_η(γ): the LLR of the binary variable ⟨e, η⟩ given per-class beliefs γ,
/// ln((1 + Σ_{⟨ζ^i,η⟩=0} e^{−γ^(i)}) / (Σ_{⟨ζ^i,η⟩=1} e^{−γ^(i)})),
/// evaluated as two f-chains.
pub fn lambda_eta(
    tables: &FieldTables,
    eta: FieldElement,
    gamma: &[f64],
    mode: ArithmeticMode,
) -> Result<f64> {
    if eta.is_zero() {
        return Err(Error::InvalidArgument(
            "belief quantization requires a nonzero check entry".into(),
        ));
    }
    debug_assert_eq!(gamma.len(), tables.q2() - 1);
    let mut num = 0.0;
    for &i in tables.commuting_exponents(eta) {
        num = jacobian_f(num, -gamma[i as usize], mode);
    }
    let mut den = f64::NEG_INFINITY;
    for &i in tables.anticommuting_exponents(eta) {
        den = jacobian_f(den, -gamma[i as usize], mode);
    }
    Ok(num - den)
}

pub fn saturate(x: f64) -> f64 {
    x.clamp(-LLR_SATURATION, LLR_SATURATION)
}

/// Truncates the significand to k−1 stored bits (sign and exponent are kept
/// as is), emulating a (−1)^{b0} × 1.(b1…b_{k−1}) × 2^exp message format.
pub fn quantize(x: f64, k: u32) -> f64 {
    if !x.is_finite() || k >= 53 {
        return x;
    }
    let drop = 52 - (k - 1) as u64;
    f64::from_bits(x.to_bits() & !((1u64 << drop) - 1))
}
