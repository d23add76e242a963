//! Code constructions: CSS extensions of binary or GF(q²) bases, bicycle
//! circulants and the hypergraph product.

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FieldTables};
use crate::stabilizer::CheckMatrix;

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BinaryMatrix {
        let words = cols.div_ceil(64).max(1);
        BinaryMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<BinaryMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = BinaryMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: cols,
                });
            }
            for (c, &bit) in row.iter().enumerate() {
                m.set(r, c, bit != 0);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        let word = &mut self.data[r * self.words + c / 64];
        if bit {
            *word |= 1u64 << (c % 64);
        } else {
            *word &= !(1u64 << (c % 64));
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_bits(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &BinaryMatrix) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for ra in 0..self.rows {
            for ca in 0..self.cols {
                if !self.get(ra, ca) {
                    continue;
                }
                for rb in 0..other.rows {
                    for cb in 0..other.cols {
                        if other.get(rb, cb) {
                            out.set(ra * other.rows + rb, ca * other.cols + cb, true);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.rows != other.rows {
            return Err(Error::LengthMismatch {
                left: self.rows,
                right: other.rows,
            });
        }
        let mut out = BinaryMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            for c in 0..other.cols {
                if other.get(r, c) {
                    out.set(r, self.cols + c, true);
                }
            }
        }
        Ok(out)
    }

    /// Removes the listed rows (1-indexed).
    pub fn delete_rows(&self, deleted: &[usize]) -> Result<BinaryMatrix> {
        let mut keep = vec![true; self.rows];
        for &d in deleted {
            if d == 0 || d > self.rows {
                return Err(Error::InvalidArgument(format!(
                    "deleted row {d} outside 1..={}",
                    self.rows
                )));
            }
            if !keep[d - 1] {
                return Err(Error::InvalidArgument(format!("row {d} deleted twice")));
            }
            keep[d - 1] = false;
        }
        let mut out = BinaryMatrix::zeros(self.rows - deleted.len(), self.cols);
        let mut dst = 0;
        for r in 0..self.rows {
            if keep[r] {
                out.data[dst * self.words..(dst + 1) * self.words]
                    .copy_from_slice(self.row_words(r));
                dst += 1;
            }
        }
        Ok(out)
    }

    /// Circulant with ones of row r at positions `(p - 1 + r) mod n`
    /// (positions 1-indexed, rows shifted by r - 1).
    pub fn circulant(n: usize, positions: &[usize]) -> Result<BinaryMatrix> {
        let mut m = BinaryMatrix::zeros(n, n);
        for &p in positions {
            if p == 0 || p > n {
                return Err(Error::InvalidArgument(format!(
                    "generator position {p} outside 1..={n}"
                )));
            }
        }
        for r in 0..n {
            for &p in positions {
                let c = (p - 1 + r) % n;
                if m.get(r, c) {
                    return Err(Error::InvalidArgument(format!(
                        "generator position {p} repeated"
                    )));
                }
                m.set(r, c, true);
            }
        }
        Ok(m)
    }

    /// First row pair (1-indexed) with odd overlap between self and other,
    /// if any: a witness that self·otherᵀ ≠ O over GF(2).
    pub fn odd_overlap_pair(&self, other: &BinaryMatrix) -> Option<(usize, usize)> {
        for a in 0..self.rows {
            for b in 0..other.rows {
                let parity = self
                    .row_words(a)
                    .iter()
                    .zip(other.row_words(b))
                    .fold(0u32, |acc, (&x, &y)| acc ^ (x & y).count_ones());
                if parity & 1 == 1 {
                    return Some((a + 1, b + 1));
                }
            }
        }
        None
    }
}

impl std::fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Lifts a binary matrix into a GF(q²) check matrix with 0/1 entries.
pub fn binary_to_check_matrix(l: usize, m: &BinaryMatrix) -> Result<CheckMatrix> {
    let rows = (0..m.rows())
        .map(|r| {
            m.row_bits(r)
                .into_iter()
                .map(|c| (c, FieldElement::ONE))
                .collect()
        })
        .collect();
    CheckMatrix::new(l, m.cols(), rows)
}

fn hermitian_offender(
    tables: &FieldTables,
    base: &CheckMatrix,
) -> Option<(usize, usize)> {
    for a in 0..base.num_checks() {
        let dense_a = base.dense_row(a);
        for b in a..base.num_checks() {
            let mut acc = FieldElement::ZERO;
            for &(n, h) in base.row(b) {
                acc = tables.add(acc, tables.mul(dense_a[n as usize], tables.conj(h)));
            }
            if !acc.is_zero() {
                return Some((a + 1, b + 1));
            }
        }
    }
    None
}

/// CSS extension: stacks ω^i · base for i = 0..2l-1. The base must be
/// Hermitian self-orthogonal over GF(q²) (for a binary base this is the
/// even-overlap condition H̃H̃ᵀ = O).
pub fn css_extend(tables: &FieldTables, base: &CheckMatrix) -> Result<CheckMatrix> {
    base.ensure_field(tables)?;
    if let Some((row_a, row_b)) = hermitian_offender(tables, base) {
        return Err(Error::OrthogonalityViolation { row_a, row_b });
    }
    let l = tables.l();
    let mut rows = Vec::with_capacity(2 * l * base.num_checks());
    for i in 0..2 * l {
        let scale = tables.pow(tables.omega(), i as i64);
        for m in 0..base.num_checks() {
            rows.push(
                base.row(m)
                    .iter()
                    .map(|&(n, h)| (n as usize, tables.mul(scale, h)))
                    .collect(),
            );
        }
    }
    let out = CheckMatrix::new(l, base.num_symbols(), rows)?;
    out.validate_self_orthogonal(tables)?;
    Ok(out)
}

/// Generalized CSS extension: stacks ω^i · H^(i) for 2l binary blocks.
/// Blocks must be pairwise Euclidean orthogonal over GF(2) (i ≠ j only;
/// a block need not be orthogonal to itself).
pub fn generalized_css_extend(
    tables: &FieldTables,
    blocks: &[BinaryMatrix],
) -> Result<CheckMatrix> {
    let l = tables.l();
    if blocks.len() != 2 * l {
        return Err(Error::InvalidArgument(format!(
            "expected {} blocks for l = {l}, got {}",
            2 * l,
            blocks.len()
        )));
    }
    let cols = blocks[0].cols();
    for b in blocks {
        if b.cols() != cols {
            return Err(Error::LengthMismatch {
                left: b.cols(),
                right: cols,
            });
        }
    }
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.rows();
            Some(o)
        })
        .collect();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            if let Some((a, b)) = blocks[i].odd_overlap_pair(&blocks[j]) {
                return Err(Error::OrthogonalityViolation {
                    row_a: offsets[i] + a,
                    row_b: offsets[j] + b,
                });
            }
        }
    }
    let mut rows = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let scale = tables.pow(tables.omega(), i as i64);
        for r in 0..block.rows() {
            rows.push(
                block
                    .row_bits(r)
                    .into_iter()
                    .map(|c| (c, scale))
                    .collect(),
            );
        }
    }
    let out = CheckMatrix::new(l, cols, rows)?;
    out.validate_self_orthogonal(tables)?;
    Ok(out)
}

/// Bicycle construction: circulant C of size N/2 from 1-indexed generator
/// positions, H̃ = [C | Cᵀ], then 1-indexed row deletion. The result always
/// satisfies H̃H̃ᵀ = O because circulants commute with their transposes.
pub fn bicycle_construct(
    n: usize,
    row_weight: usize,
    generator_positions: &[usize],
    deleted_rows: &[usize],
) -> Result<BinaryMatrix> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "block length {n} must be positive and even"
        )));
    }
    if row_weight != 2 * generator_positions.len() {
        return Err(Error::InvalidArgument(format!(
            "row weight {row_weight} does not match 2 x {} generator positions",
            generator_positions.len()
        )));
    }
    let half = n / 2;
    let c = BinaryMatrix::circulant(half, generator_positions)?;
    let stacked = c.hstack(&c.transpose())?;
    let h = stacked.delete_rows(deleted_rows)?;
    if let Some((row_a, row_b)) = h.odd_overlap_pair(&h) {
        return Err(Error::OrthogonalityViolation { row_a, row_b });
    }
    Ok(h)
}

/// Hypergraph product of two binary matrices:
/// H_X = [H1 ⊗ I_{n2} | I_{m1} ⊗ H2ᵀ], H_Z = [I_{n1} ⊗ H2 | H1ᵀ ⊗ I_{m2}].
pub fn hypergraph_product(
    h1: &BinaryMatrix,
    h2: &BinaryMatrix,
) -> Result<(BinaryMatrix, BinaryMatrix)> {
    if h1.rows() == 0 || h1.cols() == 0 || h2.rows() == 0 || h2.cols() == 0 {
        return Err(Error::InvalidArgument(
            "hypergraph product inputs must be nonempty".into(),
        ));
    }
    let hx = h1
        .kron(&BinaryMatrix::identity(h2.cols()))
        .hstack(&BinaryMatrix::identity(h1.rows()).kron(&h2.transpose()))?;
    let hz = BinaryMatrix::identity(h1.cols())
        .kron(h2)
        .hstack(&h1.transpose().kron(&BinaryMatrix::identity(h2.rows())))?;
    if let Some((row_a, row_b)) = hx.odd_overlap_pair(&hz) {
        return Err(Error::OrthogonalityViolation { row_a, row_b });
    }
    Ok((hx, hz))
}
