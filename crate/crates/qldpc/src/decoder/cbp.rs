//! BP on the unstacked base matrix of a stacked-form code, with GF(q²)
//! syndrome digits reconstructed from the binary syndrome bits.

use crate::decoder::reference::{belief_to_llrs, normalized, prob_hard_decision};
use crate::decoder::{DecodeOutcome, TraceStep};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTables};
use crate::stabilizer::CheckMatrix;

/// Bijection between a Hermitian syndrome digit s ∈ GF(q²) and the 2l binary
/// syndrome bits the stacked rows ω^i·H̃ produce for it.
pub struct SyndromeDigitMap {
    bits_per_digit: usize,
    forward: Vec<Vec<u8>>,
    inverse: Vec<FieldElement>,
}

impl SyndromeDigitMap {
    pub fn new(tables: &FieldTables) -> Result<Self> {
        let q = tables.q();
        let q2 = tables.q2();
        let width = 2 * tables.l();
        let om = tables.omega();
        let divisor = tables.add(tables.pow(om, 2), tables.pow(om, 2 * q as i64));
        let mut forward = Vec::with_capacity(q2);
        let mut inverse = vec![None; q2];
        for value in 0..q2 {
            let s = FieldElement(value as u8);
            let mut bits = Vec::with_capacity(width);
            for i in 0..width {
                // bit for block i: tr((ω^{iq}·s + ω^i·s^q) / (ω² + ω^{2q}))
                let num = tables.add(
                    tables.mul(tables.pow(om, (i * q) as i64), s),
                    tables.mul(tables.pow(om, i as i64), tables.conj(s)),
                );
                let ratio = tables.div(num, divisor)?;
                let v = tables.unembed_subfield(ratio).ok_or_else(|| {
                    Error::InvalidArgument(
                        "syndrome digit map left the base subfield".into(),
                    )
                })?;
                bits.push(tables.subfield_trace(v));
            }
            let packed = bits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &b)| acc | ((b as usize) << i));
            if inverse[packed].is_some() {
                return Err(Error::InvalidArgument(
                    "syndrome digit map is not injective".into(),
                ));
            }
            inverse[packed] = Some(s);
            forward.push(bits);
        }
        Ok(SyndromeDigitMap {
            bits_per_digit: width,
            forward,
            inverse: inverse.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn bits_per_digit(&self) -> usize {
        self.bits_per_digit
    }

    /// Binary syndrome bits of digit s, ordered by stacked block index.
    pub fn to_bits(&self, s: FieldElement) -> &[u8] {
        &self.forward[s.index()]
    }

    /// Digit whose stacked syndrome bits are `bits`.
    pub fn from_bits(&self, bits: &[u8]) -> Result<FieldElement> {
        if bits.len() != self.bits_per_digit {
            return Err(Error::LengthMismatch {
                left: bits.len(),
                right: self.bits_per_digit,
            });
        }
        let mut packed = 0usize;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::InvalidArgument(format!(
                    "syndrome bit {b} is not binary"
                )));
            }
            packed |= (b as usize) << i;
        }
        Ok(self.inverse[packed])
    }
}

/// Recovers the base rows H̃ of a matrix in stacked form [H̃; ωH̃; …],
/// verifying every block.
fn recover_base(tables: &FieldTables, matrix: &CheckMatrix) -> Result<usize> {
    let width = 2 * tables.l();
    let m = matrix.num_checks();
    if m == 0 || m % width != 0 {
        return Err(Error::NotStackedForm(format!(
            "{m} checks do not split into {width} equal blocks"
        )));
    }
    let m_tilde = m / width;
    let om = tables.omega();
    for i in 0..width {
        let scale = tables.pow(om, i as i64);
        for mt in 0..m_tilde {
            let base_row = matrix.row(mt);
            let row = matrix.row(i * m_tilde + mt);
            let matches = row.len() == base_row.len()
                && row
                    .iter()
                    .zip(base_row)
                    .all(|(&(n, v), &(n0, v0))| n == n0 && v == tables.mul(scale, v0));
            if !matches {
                return Err(Error::NotStackedForm(format!(
                    "row {} is not ω^{} times base row {}",
                    i * m_tilde + mt + 1,
                    i,
                    mt + 1
                )));
            }
        }
    }
    Ok(m_tilde)
}

fn convolve(tables: &FieldTables, a: &[f64], b: &[f64]) -> Vec<f64> {
    let q2 = tables.q2();
    let mut out = vec![0.0; q2];
    for u in 0..q2 {
        if a[u] == 0.0 {
            continue;
        }
        for v in 0..q2 {
            let s = tables.add(FieldElement(u as u8), FieldElement(v as u8));
            out[s.index()] += a[u] * b[v];
        }
    }
    out
}

/// BP over the GF(q²) constraints Σ_n e_n·H̃_mn^q = z̃_m of a stacked-form
/// matrix, driven by the binary syndrome z.
pub fn cbp_linear_decode(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    z: &[u8],
    init_llrs: &[Vec<f64>],
    t_max: usize,
    early_stop: bool,
    record_trace: bool,
) -> Result<DecodeOutcome> {
    let q2 = tables.q2();
    let n_count = matrix.num_symbols();
    if z.len() != matrix.num_checks() {
        return Err(Error::LengthMismatch {
            left: z.len(),
            right: matrix.num_checks(),
        });
    }
    if init_llrs.len() != n_count {
        return Err(Error::LengthMismatch {
            left: init_llrs.len(),
            right: n_count,
        });
    }
    let m_tilde = recover_base(tables, matrix)?;
    let map = SyndromeDigitMap::new(tables)?;
    let width = map.bits_per_digit();
    let z_digits: Vec<FieldElement> = (0..m_tilde)
        .map(|mt| {
            let bits: Vec<u8> = (0..width).map(|i| z[i * m_tilde + mt]).collect();
            map.from_bits(&bits)
        })
        .collect::<Result<_>>()?;

    let om = tables.omega();
    let priors: Vec<Vec<f64>> = init_llrs
        .iter()
        .map(|g| {
            if g.len() != q2 - 1 {
                return Err(Error::LengthMismatch {
                    left: g.len(),
                    right: q2 - 1,
                });
            }
            let mut p = vec![0.0; q2];
            p[0] = 1.0;
            for (i, &gi) in g.iter().enumerate() {
                p[tables.pow(om, i as i64).index()] = (-gi).exp();
            }
            Ok(normalized(p))
        })
        .collect::<Result<_>>()?;

    // Hermitian edge coefficients conj(H̃_mn)
    let rows: Vec<Vec<(u32, FieldElement)>> = (0..m_tilde)
        .map(|mt| {
            matrix
                .row(mt)
                .iter()
                .map(|&(n, v)| (n, tables.conj(v)))
                .collect()
        })
        .collect();
    let mut var_edges = vec![Vec::new(); n_count];
    for (mt, row) in rows.iter().enumerate() {
        for (pos, &(n, _)) in row.iter().enumerate() {
            var_edges[n as usize].push((mt, pos));
        }
    }

    let mut qmsg: Vec<Vec<Vec<f64>>> = rows
        .iter()
        .map(|row| row.iter().map(|&(n, _)| priors[n as usize].clone()).collect())
        .collect();
    let mut rmsg: Vec<Vec<Vec<f64>>> = rows
        .iter()
        .map(|row| vec![vec![1.0 / q2 as f64; q2]; row.len()])
        .collect();

    let mut beliefs = priors.clone();
    let mut e_hat = vec![FieldElement::ZERO; n_count];
    let mut trace = record_trace.then(Vec::new);
    let mut converged = false;
    let mut iterations_used = 0;

    let mut delta0 = vec![0.0; q2];
    delta0[0] = 1.0;

    for t in 1..=t_max {
        for (mt, row) in rows.iter().enumerate() {
            let w = row.len();
            // distributions of the scaled contributions c_mn·e_n
            let scaled: Vec<Vec<f64>> = (0..w)
                .map(|pos| {
                    let c = row[pos].1;
                    let mut d = vec![0.0; q2];
                    for v in 0..q2 {
                        d[tables.mul(FieldElement(v as u8), c).index()] += qmsg[mt][pos][v];
                    }
                    d
                })
                .collect();
            let mut prefix = Vec::with_capacity(w + 1);
            prefix.push(delta0.clone());
            for d in &scaled {
                let next = convolve(tables, prefix.last().unwrap(), d);
                prefix.push(next);
            }
            let mut suffix = vec![delta0.clone(); w + 1];
            for pos in (0..w).rev() {
                suffix[pos] = convolve(tables, &scaled[pos], &suffix[pos + 1]);
            }
            for pos in 0..w {
                let rest = convolve(tables, &prefix[pos], &suffix[pos + 1]);
                let c = row[pos].1;
                let r: Vec<f64> = (0..q2)
                    .map(|xi| {
                        let own = tables.mul(FieldElement(xi as u8), c);
                        rest[tables.add(z_digits[mt], own).index()]
                    })
                    .collect();
                rmsg[mt][pos] = normalized(r);
            }
        }
        for n in 0..n_count {
            let edges = &var_edges[n];
            for (k, &(mt, pos)) in edges.iter().enumerate() {
                let mut out = priors[n].clone();
                for (k2, &(mt2, pos2)) in edges.iter().enumerate() {
                    if k2 == k {
                        continue;
                    }
                    for v in 0..q2 {
                        out[v] *= rmsg[mt2][pos2][v];
                    }
                }
                qmsg[mt][pos] = normalized(out);
            }
            let mut b = priors[n].clone();
            for &(mt, pos) in edges {
                for v in 0..q2 {
                    b[v] *= rmsg[mt][pos][v];
                }
            }
            beliefs[n] = normalized(b);
            e_hat[n] = prob_hard_decision(tables, &beliefs[n]);
        }
        let matched = (0..m_tilde).all(|mt| {
            let digit = rows[mt]
                .iter()
                .fold(FieldElement::ZERO, |acc, &(n, c)| {
                    tables.add(acc, tables.mul(e_hat[n as usize], c))
                });
            digit == z_digits[mt]
        });
        iterations_used = t;
        converged = matched;
        if let Some(steps) = trace.as_mut() {
            steps.push(TraceStep {
                iteration: t,
                hard_decision: e_hat.clone(),
                gamma: beliefs.iter().map(|b| belief_to_llrs(tables, b)).collect(),
                syndrome_matched: matched,
            });
        }
        if matched && early_stop {
            break;
        }
    }

    Ok(DecodeOutcome {
        e_hat,
        converged,
        iterations_used,
        gamma: beliefs.iter().map(|b| belief_to_llrs(tables, b)).collect(),
        trace,
    })
}
