//! Sparse check matrices of stabilizer codes over GF(q²), syndrome maps,
//! code constructions and the success/failure classification of decoder
//! outputs.

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTables};

mod construct;
mod io;

pub use construct::{
    bicycle_construct, binary_to_check_matrix, css_extend, generalized_css_extend,
    hypergraph_product, BinaryMatrix,
};
pub use io::{
    format_check_matrix, format_error_vector, parse_binary_matrix, parse_check_matrix,
    parse_error_vector, parse_syndrome, read_binary_matrix, read_check_matrix,
    read_error_vector, read_syndrome, write_check_matrix,
};

/// Sparse check matrix over GF(q²) with row and column adjacency views.
#[derive(Debug, Clone)]
pub struct CheckMatrix {
    l: usize,
    q2: usize,
    num_symbols: usize,
    // per check: (column, entry), sorted by column; entries are nonzero
    rows: Vec<Vec<(u32, FieldElement)>>,
    // per symbol: (check, entry)
    cols: Vec<Vec<(u32, FieldElement)>>,
}

impl CheckMatrix {
    pub fn new(
        l: usize,
        num_symbols: usize,
        rows: Vec<Vec<(usize, FieldElement)>>,
    ) -> Result<CheckMatrix> {
        if !(crate::galois::MIN_EXTENSION_DEGREE..=crate::galois::MAX_EXTENSION_DEGREE)
            .contains(&l)
        {
            return Err(Error::UnsupportedExtensionDegree(l));
        }
        let q2 = 1usize << (2 * l);
        let mut sorted_rows = Vec::with_capacity(rows.len());
        let mut cols = vec![Vec::new(); num_symbols];
        for (m, row) in rows.into_iter().enumerate() {
            let mut entries = Vec::with_capacity(row.len());
            for (n, value) in row {
                if n >= num_symbols {
                    return Err(Error::ColumnOutOfRange {
                        column: n + 1,
                        max: num_symbols,
                    });
                }
                if value.index() >= q2 {
                    return Err(Error::ElementOutOfRange {
                        value: value.index(),
                        size: q2,
                    });
                }
                if value.is_zero() {
                    continue;
                }
                entries.push((n as u32, value));
            }
            entries.sort_by_key(|&(n, _)| n);
            for pair in entries.windows(2) {
                if pair[0].0 == pair[1].0 {
                    return Err(Error::DuplicateColumn {
                        row: m + 1,
                        column: pair[0].0 as usize + 1,
                    });
                }
            }
            for &(n, value) in &entries {
                cols[n as usize].push((m as u32, value));
            }
            sorted_rows.push(entries);
        }
        Ok(CheckMatrix {
            l,
            q2,
            num_symbols,
            rows: sorted_rows,
            cols,
        })
    }

    pub fn from_dense(l: usize, dense: &[Vec<FieldElement>]) -> Result<CheckMatrix> {
        let num_symbols = dense.first().map_or(0, |r| r.len());
        let rows = dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(n, &v)| (n, v))
                    .collect()
            })
            .collect();
        CheckMatrix::new(l, num_symbols, rows)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn q2(&self) -> usize {
        self.q2
    }

    pub fn num_checks(&self) -> usize {
        self.rows.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn row(&self, m: usize) -> &[(u32, FieldElement)] {
        &self.rows[m]
    }

    pub fn col(&self, n: usize) -> &[(u32, FieldElement)] {
        &self.cols[n]
    }

    pub fn dense_row(&self, m: usize) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.num_symbols];
        for &(n, v) in &self.rows[m] {
            out[n as usize] = v;
        }
        out
    }

    /// Mean row weight divided by the block length.
    pub fn row_density(&self) -> f64 {
        if self.rows.is_empty() || self.num_symbols == 0 {
            return 0.0;
        }
        let total: usize = self.rows.iter().map(|r| r.len()).sum();
        total as f64 / (self.rows.len() as f64 * self.num_symbols as f64)
    }

    fn ensure_field(&self, tables: &FieldTables) -> Result<()> {
        if tables.l() != self.l {
            return Err(Error::InvalidArgument(format!(
                "field tables are for l = {} but the matrix needs l = {}",
                tables.l(),
                self.l
            )));
        }
        Ok(())
    }

    /// Binary syndrome z with z_m = ⟨e, H_m⟩.
    pub fn syndrome(&self, tables: &FieldTables, error: &[FieldElement]) -> Result<Vec<u8>> {
        self.ensure_field(tables)?;
        if error.len() != self.num_symbols {
            return Err(Error::LengthMismatch {
                left: error.len(),
                right: self.num_symbols,
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter().fold(0u8, |acc, &(n, h)| {
                    acc ^ tables.scalar_commutation(error[n as usize], h)
                })
            })
            .collect())
    }

    /// Checks ⟨H_a, H_b⟩ = 0 for every pair of rows and reports the first
    /// offending pair.
    pub fn validate_self_orthogonal(&self, tables: &FieldTables) -> Result<()> {
        self.ensure_field(tables)?;
        for a in 0..self.rows.len() {
            let dense_a = self.dense_row(a);
            for b in a..self.rows.len() {
                let mut acc = 0u8;
                for &(n, h) in &self.rows[b] {
                    acc ^= tables.scalar_commutation(dense_a[n as usize], h);
                }
                if acc != 0 {
                    return Err(Error::OrthogonalityViolation {
                        row_a: a + 1,
                        row_b: b + 1,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Expands a GF(q²) vector to its 2lN-bit form: per coordinate the l bits of
/// the ω component followed by the l bits of the ω^q component.
pub fn binary_expand(tables: &FieldTables, v: &[FieldElement]) -> Vec<u64> {
    let l = tables.l();
    let width = 2 * l * v.len();
    let mut bits = vec![0u64; width.div_ceil(64).max(1)];
    for (n, &u) in v.iter().enumerate() {
        let (x_part, z_part) = tables.split(u);
        let base = 2 * l * n;
        for b in 0..l {
            if x_part >> b & 1 == 1 {
                bits[(base + b) / 64] |= 1u64 << ((base + b) % 64);
            }
            if z_part >> b & 1 == 1 {
                bits[(base + l + b) / 64] |= 1u64 << ((base + l + b) % 64);
            }
        }
    }
    bits
}

/// GF(2) row space of the binary expansion of the check rows, in reduced
/// form with cached pivots for fast membership tests.
pub struct RowSpan {
    width: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn leading_bit(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn xor_in(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

impl RowSpan {
    pub fn new(tables: &FieldTables, matrix: &CheckMatrix) -> Result<RowSpan> {
        matrix.ensure_field(tables)?;
        let width = 2 * tables.l() * matrix.num_symbols();
        let mut span = RowSpan {
            width,
            basis: Vec::new(),
            pivots: Vec::new(),
        };
        for m in 0..matrix.num_checks() {
            let expanded = binary_expand(tables, &matrix.dense_row(m));
            span.insert(expanded);
        }
        Ok(span)
    }

    fn insert(&mut self, mut row: Vec<u64>) {
        self.reduce(&mut row);
        if let Some(pivot) = leading_bit(&row) {
            self.basis.push(row);
            self.pivots.push(pivot);
        }
    }

    fn reduce(&self, row: &mut [u64]) {
        for (basis_row, &pivot) in self.basis.iter().zip(&self.pivots) {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                xor_in(row, basis_row);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Membership of v (as a GF(q²) vector) in the GF(2) row span.
    pub fn contains(&self, tables: &FieldTables, v: &[FieldElement]) -> Result<bool> {
        let mut expanded = binary_expand(tables, v);
        if 2 * tables.l() * v.len() != self.width {
            return Err(Error::LengthMismatch {
                left: 2 * tables.l() * v.len(),
                right: self.width,
            });
        }
        self.reduce(&mut expanded);
        Ok(leading_bit(&expanded).is_none())
    }
}

/// Outcome classes of a decoding trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum DecodeClass {
    /// The estimate equals the actual error.
    ConvergedExact,
    /// The estimate differs from the error by a stabilizer (row span) element.
    DegenerateSuccess,
    /// The residual commutes with every check but is not a stabilizer.
    LogicalError,
    /// The estimate does not reproduce the syndrome.
    DetectedFailure,
}

impl DecodeClass {
    pub fn is_success(self) -> bool {
        matches!(
            self,
            DecodeClass::ConvergedExact | DecodeClass::DegenerateSuccess
        )
    }
}

/// Classifies a decoder estimate against the actual error.
pub fn classify(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    span: &RowSpan,
    estimate: &[FieldElement],
    error: &[FieldElement],
) -> Result<DecodeClass> {
    if estimate.len() != error.len() {
        return Err(Error::LengthMismatch {
            left: estimate.len(),
            right: error.len(),
        });
    }
    let residual: Vec<FieldElement> = estimate
        .iter()
        .zip(error)
        .map(|(&a, &b)| tables.add(a, b))
        .collect();
    if residual.iter().all(|r| r.is_zero()) {
        return Ok(DecodeClass::ConvergedExact);
    }
    if span.contains(tables, &residual)? {
        return Ok(DecodeClass::DegenerateSuccess);
    }
    if matrix.syndrome(tables, &residual)?.iter().all(|&z| z == 0) {
        return Ok(DecodeClass::LogicalError);
    }
    Ok(DecodeClass::DetectedFailure)
}
