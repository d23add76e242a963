//! Vector-message nonbinary BP in the probability domain, with brute-force
//! check nodes and a class-wise post average. Serves as a correctness oracle
//! for the scalar log-domain decoder.

use crate::decoder::{DecodeOutcome, TraceStep};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTables};
use crate::stabilizer::CheckMatrix;

const CHECK_ENUMERATION_LIMIT: u128 = 1_000_000;

pub(crate) fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let sum: f64 = v.iter().sum();
    if sum > 0.0 {
        for x in &mut v {
            *x /= sum;
        }
    }
    v
}

/// Hard decision in the probability domain: the same rule as the log-domain
/// decoder, applied to the equivalent LLRs.
pub(crate) fn prob_hard_decision(tables: &FieldTables, belief: &[f64]) -> FieldElement {
    crate::decoder::hard_decision(tables, &belief_to_llrs(tables, belief))
}

pub(crate) fn belief_to_llrs(tables: &FieldTables, belief: &[f64]) -> Vec<f64> {
    (0..tables.q2() - 1)
        .map(|i| {
            let p = belief[tables.pow(tables.omega(), i as i64).index()];
            (belief[0] / p).ln()
        })
        .collect()
}

/// Generalized standard nonbinary BP (probability vectors on edges,
/// brute-force configuration sums at the checks, class-wise post average on
/// the check-to-variable messages).
pub fn reference_vector_bp(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    z: &[u8],
    init_probs: &[Vec<f64>],
    t_max: usize,
    early_stop: bool,
    record_trace: bool,
) -> Result<DecodeOutcome> {
    let q2 = tables.q2();
    let m_count = matrix.num_checks();
    let n_count = matrix.num_symbols();
    if z.len() != m_count {
        return Err(Error::LengthMismatch {
            left: z.len(),
            right: m_count,
        });
    }
    if init_probs.len() != n_count {
        return Err(Error::LengthMismatch {
            left: init_probs.len(),
            right: n_count,
        });
    }
    for m in 0..m_count {
        let w = matrix.row(m).len();
        let mut size: u128 = 1;
        for _ in 1..w {
            size = size.saturating_mul(q2 as u128);
        }
        if size > CHECK_ENUMERATION_LIMIT {
            return Err(Error::EnumerationTooLarge {
                size,
                limit: CHECK_ENUMERATION_LIMIT,
            });
        }
    }

    let priors: Vec<Vec<f64>> = init_probs
        .iter()
        .map(|p| {
            if p.len() != q2 {
                return Err(Error::LengthMismatch {
                    left: p.len(),
                    right: q2,
                });
            }
            Ok(normalized(p.clone()))
        })
        .collect::<Result<_>>()?;

    // variable-to-check and check-to-variable distributions per edge
    let mut qmsg: Vec<Vec<Vec<f64>>> = (0..m_count)
        .map(|m| {
            matrix
                .row(m)
                .iter()
                .map(|&(n, _)| priors[n as usize].clone())
                .collect()
        })
        .collect();
    let mut rmsg: Vec<Vec<Vec<f64>>> = (0..m_count)
        .map(|m| vec![vec![1.0 / q2 as f64; q2]; matrix.row(m).len()])
        .collect();
    let mut var_edges = vec![Vec::new(); n_count];
    for m in 0..m_count {
        for (pos, &(n, _)) in matrix.row(m).iter().enumerate() {
            var_edges[n as usize].push((m, pos));
        }
    }

    let mut beliefs: Vec<Vec<f64>> = priors.clone();
    let mut e_hat = vec![FieldElement::ZERO; n_count];
    let mut trace = record_trace.then(Vec::new);
    let mut converged = false;
    let mut iterations_used = 0;

    for t in 1..=t_max {
        // check step: brute-force parity-split masses of the other neighbors
        for m in 0..m_count {
            let row = matrix.row(m);
            for pos in 0..row.len() {
                let others: Vec<usize> = (0..row.len()).filter(|&p| p != pos).collect();
                let mut mass = [0.0f64; 2];
                let mut config = vec![0usize; others.len()];
                loop {
                    let mut prob = 1.0;
                    let mut parity = 0u8;
                    for (slot, &p) in config.iter().zip(&others) {
                        let value = FieldElement(*slot as u8);
                        prob *= qmsg[m][p][*slot];
                        parity ^= tables.scalar_commutation(value, row[p].1);
                    }
                    mass[parity as usize] += prob;
                    // odometer
                    let mut carry = true;
                    for slot in config.iter_mut() {
                        *slot += 1;
                        if *slot == q2 {
                            *slot = 0;
                        } else {
                            carry = false;
                            break;
                        }
                    }
                    if carry {
                        break;
                    }
                }
                let eta = row[pos].1;
                let raw: Vec<f64> = (0..q2)
                    .map(|v| {
                        let b = tables.scalar_commutation(FieldElement(v as u8), eta);
                        mass[(z[m] ^ b) as usize]
                    })
                    .collect();
                // post average: replace each entry by its commute-class mean
                let comm_mean = (raw[0]
                    + tables
                        .commuting_class(eta)
                        .iter()
                        .skip(1)
                        .map(|&x| raw[x.index()])
                        .sum::<f64>())
                    / (q2 as f64 / 2.0);
                let anti_mean = tables
                    .anticommuting_class(eta)
                    .iter()
                    .map(|&x| raw[x.index()])
                    .sum::<f64>()
                    / (q2 as f64 / 2.0);
                let averaged: Vec<f64> = (0..q2)
                    .map(|v| {
                        if tables.scalar_commutation(FieldElement(v as u8), eta) == 0 {
                            comm_mean
                        } else {
                            anti_mean
                        }
                    })
                    .collect();
                rmsg[m][pos] = normalized(averaged);
            }
        }
        // variable step: leave-one-out products, then beliefs
        for n in 0..n_count {
            let edges = &var_edges[n];
            for (k, &(m, pos)) in edges.iter().enumerate() {
                let mut out = priors[n].clone();
                for (k2, &(m2, pos2)) in edges.iter().enumerate() {
                    if k2 == k {
                        continue;
                    }
                    for v in 0..q2 {
                        out[v] *= rmsg[m2][pos2][v];
                    }
                }
                qmsg[m][pos] = normalized(out);
            }
            let mut b = priors[n].clone();
            for &(m, pos) in edges {
                for v in 0..q2 {
                    b[v] *= rmsg[m][pos][v];
                }
            }
            beliefs[n] = normalized(b);
            e_hat[n] = prob_hard_decision(tables, &beliefs[n]);
        }
        let matched = matrix.syndrome(tables, &e_hat)? == z;
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
