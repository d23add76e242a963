//! Scalar-message log-domain BP with binary syndromes.

use crate::decoder::arith::{box_plus, box_sum, lambda_eta, quantize, saturate};
use crate::decoder::{hard_decision, DecodeOutcome, DecoderConfig, Schedule, TraceStep};
use crate::error::{Error, Result};
use crate::galois::FieldTables;
use crate::stabilizer::CheckMatrix;

/// Log-domain BP decoder bound to one code. Instances are immutable; all
/// per-run state lives on the call stack, so one instance may serve many
/// concurrent trials.
pub struct LlrBpDecoder<'a> {
    tables: &'a FieldTables,
    matrix: &'a CheckMatrix,
    config: DecoderConfig,
    // per variable: (check index, position of this variable in that row)
    var_edges: Vec<Vec<(u32, u32)>>,
}

impl<'a> LlrBpDecoder<'a> {
    pub fn new(
        tables: &'a FieldTables,
        matrix: &'a CheckMatrix,
        config: DecoderConfig,
    ) -> Result<LlrBpDecoder<'a>> {
        config.validate()?;
        if tables.l() != matrix.l() {
            return Err(Error::InvalidConfig(format!(
                "field tables are for l = {} but the code needs l = {}",
                tables.l(),
                matrix.l()
            )));
        }
        let mut var_edges = vec![Vec::new(); matrix.num_symbols()];
        for m in 0..matrix.num_checks() {
            for (pos, &(n, _)) in matrix.row(m).iter().enumerate() {
                var_edges[n as usize].push((m as u32, pos as u32));
            }
        }
        Ok(LlrBpDecoder {
            tables,
            matrix,
            config,
            var_edges,
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    pub fn matrix(&self) -> &CheckMatrix {
        self.matrix
    }

    /// Decodes with early stopping and no trace recording.
    pub fn decode(&self, z: &[u8], init_llrs: &[Vec<f64>]) -> Result<DecodeOutcome> {
        self.run(z, init_llrs, true, false)
    }

    /// Full-control entry point. With `early_stop` unset, all T_max
    /// iterations execute even after the syndrome matches, which is needed
    /// when converged beliefs (not only decisions) are of interest.
    pub fn run(
        &self,
        z: &[u8],
        init_llrs: &[Vec<f64>],
        early_stop: bool,
        record_trace: bool,
    ) -> Result<DecodeOutcome> {
        let m_count = self.matrix.num_checks();
        let n_count = self.matrix.num_symbols();
        let width = self.tables.q2() - 1;
        if z.len() != m_count {
            return Err(Error::LengthMismatch {
                left: z.len(),
                right: m_count,
            });
        }
        if init_llrs.len() != n_count {
            return Err(Error::LengthMismatch {
                left: init_llrs.len(),
                right: n_count,
            });
        }
        for row in init_llrs {
            if row.len() != width {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: width,
                });
            }
        }

        let priors: Vec<Vec<f64>> = init_llrs
            .iter()
            .map(|row| row.iter().map(|&v| self.store(saturate(v))).collect())
            .collect();
        let mut lambda: Vec<Vec<f64>> = (0..m_count)
            .map(|m| {
                self.matrix
                    .row(m)
                    .iter()
                    .map(|&(n, h)| {
                        Ok(self.store(saturate(lambda_eta(
                            self.tables,
                            h,
                            &priors[n as usize],
                            self.config.mode,
                        )?)))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let mut delta: Vec<Vec<f64>> = lambda.iter().map(|r| vec![0.0; r.len()]).collect();
        let mut gamma: Vec<Vec<f64>> = vec![vec![0.0; width]; n_count];

        let mut trace = record_trace.then(Vec::new);
        let mut e_hat = vec![crate::galois::FieldElement::ZERO; n_count];
        let mut converged = false;
        let mut iterations_used = 0;
        for t in 1..=self.config.t_max {
            match self.config.schedule {
                Schedule::Parallel => {
                    self.parallel_iteration(z, &priors, &mut lambda, &mut delta, &mut gamma)?
                }
                Schedule::Serial => {
                    self.serial_iteration(z, &priors, &mut lambda, &mut delta, &mut gamma)?
                }
            }
            for n in 0..n_count {
                e_hat[n] = hard_decision(self.tables, &gamma[n]);
            }
            let matched = self.matrix.syndrome(self.tables, &e_hat)? == z;
            iterations_used = t;
            converged = matched;
            if let Some(steps) = trace.as_mut() {
                steps.push(TraceStep {
                    iteration: t,
                    hard_decision: e_hat.clone(),
                    gamma: gamma.clone(),
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
            gamma,
            trace,
        })
    }

    fn store(&self, x: f64) -> f64 {
        match self.config.bit_width {
            Some(k) => quantize(x, k),
            None => x,
        }
    }

    fn shape(&self, mut d: f64) -> f64 {
        if let Some(a) = self.config.alpha {
            d /= a;
        }
        if let Some(b) = self.config.beta {
            d = d.signum() * (d.abs() - b).max(0.0);
        }
        self.store(saturate(d))
    }

    fn check_sign(&self, z: &[u8], m: usize) -> f64 {
        if z[m] == 1 {
            -1.0
        } else {
            1.0
        }
    }

    fn update_variable(
        &self,
        n: usize,
        priors: &[Vec<f64>],
        lambda: &mut [Vec<f64>],
        delta: &[Vec<f64>],
        gamma: &mut [Vec<f64>],
    ) -> Result<()> {
        let g = &mut gamma[n];
        g.copy_from_slice(&priors[n]);
        for &(m, pos) in &self.var_edges[n] {
            let d = delta[m as usize][pos as usize];
            let (_, h) = self.matrix.row(m as usize)[pos as usize];
            for &i in self.tables.anticommuting_exponents(h) {
                g[i as usize] += d;
            }
        }
        for v in g.iter_mut() {
            *v = self.store(saturate(*v));
        }
        for &(m, pos) in &self.var_edges[n] {
            let (_, h) = self.matrix.row(m as usize)[pos as usize];
            let lam = lambda_eta(self.tables, h, g, self.config.mode)?
                - delta[m as usize][pos as usize];
            lambda[m as usize][pos as usize] = self.store(saturate(lam));
        }
        Ok(())
    }

    fn parallel_iteration(
        &self,
        z: &[u8],
        priors: &[Vec<f64>],
        lambda: &mut [Vec<f64>],
        delta: &mut [Vec<f64>],
        gamma: &mut [Vec<f64>],
    ) -> Result<()> {
        for m in 0..self.matrix.num_checks() {
            let lams = &lambda[m];
            let w = lams.len();
            // leave-one-out combinations from prefix and suffix sums; the
            // total-minus-one form Ω ⊟ λ loses all precision once a message
            // sits near zero
            let mut suffix = vec![f64::INFINITY; w + 1];
            for pos in (0..w).rev() {
                suffix[pos] = box_plus(lams[pos], suffix[pos + 1], self.config.mode);
            }
            let sign = self.check_sign(z, m);
            let mut prefix = f64::INFINITY;
            for pos in 0..w {
                let others = box_plus(prefix, suffix[pos + 1], self.config.mode);
                delta[m][pos] = self.shape(sign * others);
                prefix = box_plus(prefix, lams[pos], self.config.mode);
            }
        }
        for n in 0..self.matrix.num_symbols() {
            self.update_variable(n, priors, lambda, delta, gamma)?;
        }
        Ok(())
    }

    fn serial_iteration(
        &self,
        z: &[u8],
        priors: &[Vec<f64>],
        lambda: &mut [Vec<f64>],
        delta: &mut [Vec<f64>],
        gamma: &mut [Vec<f64>],
    ) -> Result<()> {
        for n in 0..self.matrix.num_symbols() {
            for &(m, pos) in &self.var_edges[n] {
                let m = m as usize;
                let others = box_sum(
                    lambda[m]
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != pos as usize)
                        .map(|(_, &v)| v),
                    self.config.mode,
                );
                delta[m][pos as usize] = self.shape(self.check_sign(z, m) * others);
            }
            self.update_variable(n, priors, lambda, delta, gamma)?;
        }
        Ok(())
    }
}
