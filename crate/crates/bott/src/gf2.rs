//! Dense bit-matrix algebra over Z2: adjacency matrices, rank, the
//! characteristic-matrix map A -> I + A^t, and the three matrix operations
//! that mirror relabeling, local complementation and slides on digraphs.

use crate::digraph::{BitIter, Digraph, Permutation};
use crate::error::{Error, Result};

/// A matrix over Z2 with up to 16 columns, one `u16` per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    bits: Vec<u16>,
}

/// A sorted set of distinct indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(mut members: Vec<usize>) -> Result<IndexSet> {
        members.sort_unstable();
        for pair in members.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateIndex(pair[0]));
            }
        }
        Ok(IndexSet { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl GF2Matrix {
    pub fn zero(rows: usize, cols: usize) -> GF2Matrix {
        assert!(cols <= 16, "column count exceeds bit width");
        GF2Matrix { rows, cols, bits: vec![0; rows] }
    }

    pub fn identity(n: usize) -> GF2Matrix {
        let mut m = GF2Matrix::zero(n, n);
        for i in 0..n {
            m.bits[i] = 1 << i;
        }
        m
    }

    /// Builds a matrix from row bit masks; bits at or beyond `cols` must be
    /// zero.
    pub fn from_rows(rows: Vec<u16>, cols: usize) -> Result<GF2Matrix> {
        if cols > 16 {
            return Err(Error::Shape(format!("{cols} columns exceed bit width 16")));
        }
        let width: u16 = if cols == 16 { !0 } else { (1u16 << cols) - 1 };
        for (i, &r) in rows.iter().enumerate() {
            if r & !width != 0 {
                return Err(Error::Shape(format!("row {i} has bits beyond column {cols}")));
            }
        }
        Ok(GF2Matrix { rows: rows.len(), cols, bits: rows })
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u16 {
        self.bits[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i] & (1 << j) != 0
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.bits[i] |= 1 << j;
        } else {
            self.bits[i] &= !(1 << j);
        }
    }

    pub fn column(&self, j: usize) -> u16 {
        let mut c = 0u16;
        for i in 0..self.rows {
            c |= ((self.bits[i] >> j) & 1) << i;
        }
        c
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> GF2Matrix {
        assert!(self.rows <= 16);
        let mut t = GF2Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in BitIter(self.bits[i]) {
                t.bits[j] |= 1 << i;
            }
        }
        t
    }

    /// Rank over Z2 by row reduction on a copy.
    pub fn rank(&self) -> usize {
        rank_of_rows(&mut self.bits.clone())
    }

    /// Determinant over Z2: 1 iff the matrix is square and nonsingular.
    pub fn det(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        Ok(self.rank() == self.rows)
    }

    /// True iff every principal minor (nonempty S, rows = cols = S) has
    /// determinant 1. Exhausts subsets in increasing cardinality, exiting on
    /// the first failure.
    pub fn all_principal_minors_one(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        for size in 1..=n {
            // Gosper's hack walks the size-subsets of {0..n} in order
            let mut mask: u32 = (1 << size) - 1;
            while mask < (1u32 << n) {
                if !self.principal_minor(mask as u16) {
                    return Ok(false);
                }
                let c = mask & mask.wrapping_neg();
                let r = mask + c;
                mask = (((r ^ mask) >> 2) / c) | r;
            }
        }
        Ok(true)
    }

    fn principal_minor(&self, subset: u16) -> bool {
        let mut sub: Vec<u16> = Vec::with_capacity(subset.count_ones() as usize);
        for i in BitIter(subset) {
            let mut packed = 0u16;
            for (jj, j) in BitIter(subset).enumerate() {
                packed |= ((self.bits[i] >> j) & 1) << jj;
            }
            sub.push(packed);
        }
        let size = sub.len();
        rank_of_rows(&mut sub) == size
    }

    /// Conjugation by a permutation matrix: entry (i, j) moves to
    /// (p(i), p(j)). Matches `Digraph::relabel` on adjacency matrices.
    pub fn conjugate(&self, p: &Permutation) -> Result<GF2Matrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        if p.n() != self.rows {
            return Err(Error::Shape(format!(
                "permutation on {} elements against a {}x{} matrix",
                p.n(),
                self.rows,
                self.cols
            )));
        }
        let mut out = GF2Matrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in BitIter(self.bits[i]) {
                out.bits[p.image(i)] |= 1 << p.image(j);
            }
        }
        Ok(out)
    }

    /// For every column j with entry (k, j) = 1, adds column k; row-wise,
    /// row k is added to each row with a 1 in column k. Matches
    /// `Digraph::local_complement` on adjacency matrices.
    pub fn local_complement(&self, k: usize) -> Result<GF2Matrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        if k >= self.rows {
            return Err(Error::Range { index: k, n: self.rows });
        }
        for i in 0..self.rows {
            if self.get(i, i) {
                return Err(Error::Diagonal { i });
            }
        }
        let mut out = self.clone();
        let rk = out.bits[k];
        for i in 0..self.rows {
            if i != k && self.get(i, k) {
                out.bits[i] ^= rk;
            }
        }
        Ok(out)
    }

    /// Left-multiplies the row block indexed by `idx` by the invertible
    /// matrix `c`; other rows are unchanged. Requires the columns indexed by
    /// `idx` to be pairwise equal. Matches a sequence of slides (and sibling
    /// swaps) on adjacency matrices.
    pub fn transform_row_block(&self, idx: &IndexSet, c: &GF2Matrix) -> Result<GF2Matrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let l = idx.len();
        if c.rows != l || c.cols != l {
            return Err(Error::Shape(format!(
                "coefficient matrix is {}x{} for a block of {} rows",
                c.rows, c.cols, l
            )));
        }
        if let Some(&max) = idx.members().last() {
            if max >= self.rows {
                return Err(Error::Range { index: max, n: self.rows });
            }
        }
        let first = match idx.members().first() {
            Some(&f) => f,
            None => return Ok(self.clone()),
        };
        for &j in &idx.members()[1..] {
            if self.column(j) != self.column(first) {
                return Err(Error::ColumnMismatch { i: first, j });
            }
        }
        if c.rank() < l {
            return Err(Error::Singular);
        }
        let mut out = self.clone();
        for (m, &row_index) in idx.members().iter().enumerate() {
            let mut acc = 0u16;
            for (k, &source) in idx.members().iter().enumerate() {
                if c.get(m, k) {
                    acc ^= self.bits[source];
                }
            }
            out.bits[row_index] = acc;
        }
        Ok(out)
    }
}

fn rank_of_rows(rows: &mut [u16]) -> usize {
    let mut rank = 0;
    for col in 0..16 {
        let bit = 1u16 << col;
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && *row & bit != 0 {
                *row ^= lead;
            }
        }
        rank += 1;
    }
    rank
}

impl std::fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GF2Matrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The adjacency matrix of a digraph under its native labeling.
pub fn adjacency_matrix(d: &Digraph) -> GF2Matrix {
    let n = d.n();
    GF2Matrix { rows: n, cols: n, bits: (0..n).map(|v| d.row(v)).collect() }
}

/// The characteristic matrix I + A^t of an adjacency matrix. Every acyclic
/// adjacency matrix maps to a matrix all of whose principal minors are 1.
pub fn characteristic_matrix(a: &GF2Matrix) -> Result<GF2Matrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", a.rows, a.cols)));
    }
    for i in 0..a.rows {
        if a.get(i, i) {
            return Err(Error::Diagonal { i });
        }
    }
    let mut out = a.transpose();
    for i in 0..a.rows {
        out.bits[i] ^= 1 << i;
    }
    Ok(out)
}
