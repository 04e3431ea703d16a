//! Dense bit-packed 0/1 matrices and exact integer matrices.
//!
//! Rows are stored as whole 64-bit words, most significant bit first: column
//! `c` of a row lives in word `c / 64` at bit `63 - c % 64`. Bits past the last
//! column of a row are always zero, so word-wise equality is entrywise equality
//! and popcounts never see padding.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD_BITS)
}

#[inline]
fn mask(col: usize) -> u64 {
    1u64 << (WORD_BITS - 1 - col % WORD_BITS)
}

/// ORs `len` bits of `src` (starting at its column 0) into `dst` starting at
/// column `offset`. Relies on the padding of `src` being zero.
fn or_bits_at(dst: &mut [u64], offset: usize, src: &[u64], len: usize) {
    let shift = offset % WORD_BITS;
    let base = offset / WORD_BITS;
    for (w, &word) in src.iter().take(words_for(len)).enumerate() {
        if word == 0 {
            continue;
        }
        let q = base + w;
        if shift == 0 {
            dst[q] |= word;
        } else {
            dst[q] |= word >> shift;
            let spill = word << (WORD_BITS - shift);
            if spill != 0 {
                dst[q + 1] |= spill;
            }
        }
    }
}

/// Calls `f` with the column index of every set bit in a packed row.
#[inline]
pub(crate) fn for_each_one(row: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &word) in row.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            let lz = w.leading_zeros() as usize;
            f(wi * WORD_BITS + lz);
            w &= !(1u64 << (WORD_BITS - 1 - lz));
        }
    }
}

#[inline]
pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn checked_shape(context: &'static str, rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension {
            context,
            expected: (1, 1),
            found: (rows, cols),
        });
    }
    match rows.checked_mul(words_for(cols)) {
        Some(_) => Ok(()),
        None => Err(Error::Capacity {
            context,
            bits: rows as u128 * cols as u128,
            limit: usize::MAX as u64,
        }),
    }
}

/// A fixed-length packed bit vector (one matrix row or column).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] & mask(i) != 0
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        if value {
            self.words[i / WORD_BITS] |= mask(i);
        } else {
            self.words[i / WORD_BITS] &= !mask(i);
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense 0/1 matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        checked_shape("zeros", rows, cols)?;
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        })
    }

    /// `I_m`.
    pub fn identity(m: usize) -> Result<Self> {
        let mut out = Self::zeros(m, m)?;
        for i in 0..m {
            out.set(i, i, true);
        }
        Ok(out)
    }

    /// `J_{m,l}`.
    pub fn ones(m: usize, l: usize) -> Result<Self> {
        let mut out = Self::zeros(m, l)?;
        let full = l / WORD_BITS;
        let rem = l % WORD_BITS;
        for i in 0..m {
            let row = out.row_words_mut(i);
            row[..full].fill(u64::MAX);
            if rem != 0 {
                row[full] = !(u64::MAX >> rem);
            }
        }
        Ok(out)
    }

    /// `K_m`, ones on the antidiagonal.
    pub fn exchange(m: usize) -> Result<Self> {
        let mut out = Self::zeros(m, m)?;
        for i in 0..m {
            out.set(i, m - 1 - i, true);
        }
        Ok(out)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut out = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Builds a matrix from rows of 0/1 values; any nonzero byte counts as 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut out = Self::zeros(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension {
                    context: "from_rows",
                    expected: (rows.len(), cols),
                    found: (i, row.len()),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Wraps raw packed rows. Fails if any padding bit is set or the length is off.
    pub fn from_words(rows: usize, cols: usize, bits: Vec<u64>) -> Result<Self> {
        checked_shape("from_words", rows, cols)?;
        let stride = words_for(cols);
        if bits.len() != rows * stride {
            return Err(Error::Dimension {
                context: "from_words",
                expected: (rows, stride),
                found: (bits.len() / stride.max(1), bits.len() % stride.max(1)),
            });
        }
        let rem = cols % WORD_BITS;
        if rem != 0 {
            let pad = u64::MAX >> rem;
            if (0..rows).any(|i| bits[i * stride + stride - 1] & pad != 0) {
                return Err(Error::Layout("padding bits must be zero"));
            }
        }
        Ok(Self {
            rows,
            cols,
            stride,
            bits,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Number of 64-bit words per stored row.
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.bits[i * self.stride + j / WORD_BITS] & mask(j) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "entry ({i},{j}) out of range"
        );
        let w = &mut self.bits[i * self.stride + j / WORD_BITS];
        if value {
            *w |= mask(j);
        } else {
            *w &= !mask(j);
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        let v = self.get(i, j);
        self.set(i, j, !v);
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn row(&self, i: usize) -> Result<BitVector> {
        if i >= self.rows {
            return Err(Error::Index {
                index: i,
                len: self.rows,
            });
        }
        Ok(BitVector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        })
    }

    /// Column `j` as a bit vector of length `rows`.
    pub fn column(&self, j: usize) -> Result<BitVector> {
        if j >= self.cols {
            return Err(Error::Index {
                index: j,
                len: self.cols,
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn row_sum(&self, i: usize) -> u32 {
        self.row_words(i).iter().map(|w| w.count_ones()).sum()
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.rows).map(|i| self.row_sum(i)).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        let mut sums = vec![0u32; self.cols];
        for i in 0..self.rows {
            for_each_one(self.row_words(i), |j| sums[j] += 1);
        }
        sums
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn diagonal_is_zero(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self.get(i, i))
    }

    pub fn for_each_one_in_row(&self, i: usize, f: impl FnMut(usize)) {
        for_each_one(self.row_words(i), f);
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows).expect("shape already validated");
        for i in 0..self.rows {
            for_each_one(self.row_words(i), |j| {
                out.bits[j * out.stride + i / WORD_BITS] |= mask(i);
            });
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let rows = self.rows.checked_mul(other.rows);
        let cols = self.cols.checked_mul(other.cols);
        let (rows, cols) = match (rows, cols) {
            (Some(r), Some(c)) => (r, c),
            _ => {
                return Err(Error::Capacity {
                    context: "kron",
                    bits: (self.rows as u128 * other.rows as u128)
                        * (self.cols as u128 * other.cols as u128),
                    limit: usize::MAX as u64,
                })
            }
        };
        let mut out = Self::zeros(rows, cols)?;
        for i1 in 0..self.rows {
            let a_row = self.row_words(i1);
            for i2 in 0..other.rows {
                let b_row = other.row_words(i2);
                let dst = i1 * other.rows + i2;
                let dst_row = &mut out.bits[dst * out.stride..(dst + 1) * out.stride];
                for_each_one(a_row, |j1| {
                    or_bits_at(dst_row, j1 * other.cols, b_row, other.cols)
                });
            }
        }
        Ok(out)
    }

    /// The first `rows / s` rows.
    pub fn alpha(&self, s: usize) -> Result<Self> {
        self.alpha_block(s, 0)
    }

    /// Row block `block` of the `s` equal row blocks; `alpha_block(s, 0) == alpha(s)`.
    pub fn alpha_block(&self, s: usize, block: usize) -> Result<Self> {
        if s == 0 || self.rows % s != 0 {
            return Err(Error::Divisibility {
                rows: self.rows,
                factor: s,
            });
        }
        if block >= s {
            return Err(Error::Index {
                index: block,
                len: s,
            });
        }
        Ok(self.row_range(block * (self.rows / s)..(block + 1) * (self.rows / s)))
    }

    pub(crate) fn row_range(&self, rows: Range<usize>) -> Self {
        Self {
            rows: rows.len(),
            cols: self.cols,
            stride: self.stride,
            bits: self.bits[rows.start * self.stride..rows.end * self.stride].to_vec(),
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&Self]) -> Result<Self> {
        let grid: Vec<Vec<Block<'_>>> = parts.iter().map(|m| vec![Block::Matrix(m)]).collect();
        BlockLayout::grid(&grid)?.assemble()
    }

    /// Concatenates matrices with equal row counts side by side.
    pub fn hstack(parts: &[&Self]) -> Result<Self> {
        let row: Vec<Block<'_>> = parts.iter().map(|m| Block::Matrix(m)).collect();
        BlockLayout::grid(&[row])?.assemble()
    }

    pub fn to_int(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for_each_one(self.row_words(i), |j| out.data[i * self.cols + j] = 1);
        }
        out
    }

    /// Exact integer product; each entry is `popcount(row_i(self) & col_j(other))`.
    pub fn mul(&self, other: &Self) -> Result<IntMatrix> {
        let product = self.product_rows(other)?;
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for (i, row) in product.enumerate() {
            out.data[i * other.cols..(i + 1) * other.cols].copy_from_slice(&row);
        }
        Ok(out)
    }

    /// Streams the rows of `self * other` without holding the full product.
    pub fn product_rows<'a>(&'a self, other: &Self) -> Result<ProductRows<'a>> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                context: "mul",
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        Ok(ProductRows {
            left: self,
            right_t: other.transpose(),
            next: 0,
            end: self.rows,
        })
    }
}

/// Iterator over the rows of a binary product, see [`BinaryMatrix::product_rows`].
pub struct ProductRows<'a> {
    left: &'a BinaryMatrix,
    right_t: BinaryMatrix,
    next: usize,
    end: usize,
}

impl ProductRows<'_> {
    /// Restricts the iterator to a range of output rows.
    pub fn restrict(mut self, rows: Range<usize>) -> Self {
        self.next = rows.start.min(self.left.rows);
        self.end = rows.end.min(self.left.rows);
        self
    }

    /// Entry `(i, j)` of the product.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        and_popcount(self.left.row_words(i), self.right_t.row_words(j))
    }

    pub fn row(&self, i: usize) -> Vec<u32> {
        let a = self.left.row_words(i);
        (0..self.right_t.rows)
            .map(|j| and_popcount(a, self.right_t.row_words(j)))
            .collect()
    }
}

impl Iterator for ProductRows<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.next >= self.end {
            return None;
        }
        let row = self.row(self.next);
        self.next += 1;
        Some(row)
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols > 4096 {
            return write!(f, "  ({} ones)", self.count_ones());
        }
        for i in 0..self.rows {
            f.write_str("  ")?;
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Exact nonnegative integer matrix (row-major `u32`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn filled(rows: usize, cols: usize, value: u32) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                context: "mul",
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension {
                context: "add",
                expected: self.shape(),
                found: other.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, factor: u32) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// `self + factor * other` for a binary `other` of the same shape.
    pub fn add_scaled(&self, other: &BinaryMatrix, factor: u32) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension {
                context: "add_scaled",
                expected: self.shape(),
                found: other.shape(),
            });
        }
        let mut out = self.clone();
        for i in 0..other.rows() {
            other.for_each_one_in_row(i, |j| out.data[i * self.cols + j] += factor);
        }
        Ok(out)
    }

    /// Whether every entry equals `value`.
    pub fn is_constant(&self, value: u32) -> bool {
        self.data.iter().all(|&a| a == value)
    }

    /// Entries that differ from `value`, in row-major order.
    pub fn mismatches(&self, value: u32) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(move |(_, &a)| a != value)
            .map(move |(idx, &a)| (idx / self.cols, idx % self.cols, a))
    }
}

impl From<&BinaryMatrix> for IntMatrix {
    fn from(m: &BinaryMatrix) -> Self {
        m.to_int()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(64) {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// One block of a [`BlockLayout::grid`]: either a source matrix or a zero block.
#[derive(Debug, Clone, Copy)]
pub enum Block<'a> {
    Matrix(&'a BinaryMatrix),
    Zero { rows: usize, cols: usize },
}

impl Block<'_> {
    fn shape(&self) -> (usize, usize) {
        match self {
            Block::Matrix(m) => m.shape(),
            Block::Zero { rows, cols } => (*rows, *cols),
        }
    }
}

/// A cell of a block layout: the target span it covers and its source.
#[derive(Debug, Clone)]
pub struct Cell<'a> {
    pub rows: Range<usize>,
    pub cols: Range<usize>,
    /// `None` is an all-zero block.
    pub source: Option<&'a BinaryMatrix>,
}

/// Rectangular grid of blocks that tiles a target matrix.
#[derive(Debug, Clone)]
pub struct BlockLayout<'a> {
    cells: Vec<Cell<'a>>,
}

impl<'a> BlockLayout<'a> {
    pub fn from_cells(cells: Vec<Cell<'a>>) -> Self {
        Self { cells }
    }

    /// Lays out a grid of blocks, deriving spans from the block shapes.
    pub fn grid<R: AsRef<[Block<'a>]>>(grid: &[R]) -> Result<Self> {
        let mut cells = Vec::new();
        let mut r0 = 0;
        for row in grid {
            let row = row.as_ref();
            let height = row
                .first()
                .ok_or(Error::Layout("empty block row"))?
                .shape()
                .0;
            let mut c0 = 0;
            for block in row {
                let (h, w) = block.shape();
                if h != height {
                    return Err(Error::Layout("blocks in one block-row differ in height"));
                }
                let source = match block {
                    Block::Matrix(m) => Some(*m),
                    Block::Zero { .. } => None,
                };
                cells.push(Cell {
                    rows: r0..r0 + h,
                    cols: c0..c0 + w,
                    source,
                });
                c0 += w;
            }
            r0 += height;
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[Cell<'a>] {
        &self.cells
    }

    /// Checks that the spans form an exact grid and returns its extent.
    fn validate(&self) -> Result<(usize, usize)> {
        fn partition(spans: &mut Vec<Range<usize>>) -> Result<usize> {
            spans.sort_by_key(|r| (r.start, r.end));
            spans.dedup();
            let mut end = 0;
            for span in spans.iter() {
                if span.start != end {
                    return Err(Error::Layout(if span.start < end {
                        "spans overlap"
                    } else {
                        "spans leave a gap"
                    }));
                }
                if span.is_empty() {
                    return Err(Error::Layout("empty span"));
                }
                end = span.end;
            }
            Ok(end)
        }
        if self.cells.is_empty() {
            return Err(Error::Layout("no cells"));
        }
        let mut row_spans: Vec<_> = self.cells.iter().map(|c| c.rows.clone()).collect();
        let mut col_spans: Vec<_> = self.cells.iter().map(|c| c.cols.clone()).collect();
        let rows = partition(&mut row_spans)?;
        let cols = partition(&mut col_spans)?;
        if row_spans.len() * col_spans.len() != self.cells.len() {
            return Err(Error::Layout("cells do not form a complete grid"));
        }
        let mut seen: Vec<(usize, usize)> = self
            .cells
            .iter()
            .map(|c| (c.rows.start, c.cols.start))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.cells.len() {
            return Err(Error::Layout("cells overlap"));
        }
        for cell in &self.cells {
            if let Some(src) = cell.source {
                if src.shape() != (cell.rows.len(), cell.cols.len()) {
                    return Err(Error::Dimension {
                        context: "assemble",
                        expected: (cell.rows.len(), cell.cols.len()),
                        found: src.shape(),
                    });
                }
            }
        }
        Ok((rows, cols))
    }

    pub fn assemble(&self) -> Result<BinaryMatrix> {
        let (rows, cols) = self.validate()?;
        let mut out = BinaryMatrix::zeros(rows, cols)?;
        for cell in &self.cells {
            let Some(src) = cell.source else { continue };
            for (k, i) in cell.rows.clone().enumerate() {
                let dst = out.row_words_mut(i);
                or_bits_at(dst, cell.cols.start, src.row_words(k), src.cols());
            }
        }
        Ok(out)
    }
}

/// Free-function form of [`BlockLayout::assemble`].
pub fn assemble(layout: &BlockLayout<'_>) -> Result<BinaryMatrix> {
    layout.assemble()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(rows).unwrap()
    }

    fn naive_mul(a: &BinaryMatrix, b: &BinaryMatrix) -> Vec<Vec<u32>> {
        (0..a.rows())
            .map(|i| {
                (0..b.cols())
                    .map(|j| {
                        (0..a.cols())
                            .filter(|&l| a.get(i, l) && b.get(l, j))
                            .count() as u32
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn constructors() {
        assert_eq!(BinaryMatrix::identity(1).unwrap(), m(&[&[1]]));
        assert_eq!(BinaryMatrix::identity(2).unwrap(), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(BinaryMatrix::ones(1, 1).unwrap(), m(&[&[1]]));
        assert_eq!(
            BinaryMatrix::ones(2, 3).unwrap(),
            m(&[&[1, 1, 1], &[1, 1, 1]])
        );
        assert_eq!(BinaryMatrix::exchange(1).unwrap(), m(&[&[1]]));
        assert_eq!(BinaryMatrix::exchange(2).unwrap(), m(&[&[0, 1], &[1, 0]]));
        assert_eq!(
            BinaryMatrix::exchange(3).unwrap(),
            m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
        );
        let j = BinaryMatrix::ones(5, 130).unwrap();
        assert!(j.row_sums().iter().all(|&s| s == 130));
        assert!(j.col_sums().iter().all(|&s| s == 5));
    }

    #[test]
    fn zero_dimensions_rejected() {
        assert!(matches!(
            BinaryMatrix::identity(0),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            BinaryMatrix::ones(0, 3),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            BinaryMatrix::ones(3, 0),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            BinaryMatrix::exchange(0),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn identity_is_left_neutral() {
        let x = m(&[&[1, 0, 1, 1], &[0, 0, 1, 0], &[1, 1, 1, 0]]);
        let prod = BinaryMatrix::identity(3).unwrap().mul(&x).unwrap();
        assert_eq!(prod, x.to_int());
    }

    #[test]
    fn exchange_is_an_involution() {
        for size in 1..=64 {
            let k = BinaryMatrix::exchange(size).unwrap();
            assert_eq!(
                k.mul(&k).unwrap(),
                BinaryMatrix::identity(size).unwrap().to_int()
            );
        }
    }

    #[test]
    fn kron_examples() {
        let j21 = BinaryMatrix::ones(2, 1).unwrap();
        let k2 = BinaryMatrix::exchange(2).unwrap();
        let jk = j21.kron(&k2).unwrap();
        assert_eq!(jk, m(&[&[0, 1], &[1, 0], &[0, 1], &[1, 0]]));
        let x = m(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(BinaryMatrix::identity(1).unwrap().kron(&x).unwrap(), x);
        // J_{2,1} ⊗ K_2 ⊗ J_{1,2} expanded by hand.
        let p1 = jk.kron(&BinaryMatrix::ones(1, 2).unwrap()).unwrap();
        assert_eq!(
            p1,
            m(&[&[0, 0, 1, 1], &[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 1, 0, 0]])
        );
        let first_half = p1.alpha(2).unwrap();
        assert_eq!(first_half, m(&[&[0, 0, 1, 1], &[1, 1, 0, 0]]));
        let square = p1.mul(&p1).unwrap();
        assert!(square.is_constant(1));
    }

    #[test]
    fn kron_across_word_boundaries() {
        let a = BinaryMatrix::from_fn(3, 5, |i, j| (i + 2 * j) % 3 == 0).unwrap();
        let b = BinaryMatrix::from_fn(4, 27, |i, j| (i * 7 + j) % 5 < 2).unwrap();
        let k = a.kron(&b).unwrap();
        assert_eq!(k.shape(), (12, 135));
        for i in 0..12 {
            for j in 0..135 {
                assert_eq!(
                    k.get(i, j),
                    a.get(i / 4, j / 27) && b.get(i % 4, j % 27),
                    "({i},{j})"
                );
            }
        }
    }

    #[test]
    fn alpha_cases() {
        let j43 = BinaryMatrix::ones(4, 3).unwrap();
        assert_eq!(j43.alpha(2).unwrap(), BinaryMatrix::ones(2, 3).unwrap());
        assert_eq!(j43.alpha(1).unwrap(), j43);
        assert_eq!(
            j43.alpha(3),
            Err(Error::Divisibility { rows: 4, factor: 3 })
        );
        let x = BinaryMatrix::from_fn(6, 4, |i, j| i == j || i == j + 2).unwrap();
        assert_eq!(x.alpha_block(3, 2).unwrap(), x.row_range(4..6));
        assert!(matches!(x.alpha_block(3, 3), Err(Error::Index { .. })));
    }

    #[test]
    fn columns() {
        let c = BinaryMatrix::identity(3).unwrap().column(0).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), [true, false, false]);
        let c = BinaryMatrix::exchange(2).unwrap().column(1).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), [true, false]);
        let ones = BinaryMatrix::ones(70, 3).unwrap();
        assert_eq!(ones.column(2).unwrap().count_ones(), 70);
        assert!(matches!(
            ones.column(3),
            Err(Error::Index { index: 3, len: 3 })
        ));
    }

    #[test]
    fn mul_shape_mismatch() {
        let a = BinaryMatrix::ones(2, 3).unwrap();
        assert!(matches!(a.mul(&a), Err(Error::Dimension { .. })));
    }

    #[test]
    fn assemble_grids() {
        let one = BinaryMatrix::identity(1).unwrap();
        let layout = BlockLayout::grid(&[
            [Block::Matrix(&one), Block::Zero { rows: 1, cols: 1 }],
            [Block::Zero { rows: 1, cols: 1 }, Block::Matrix(&one)],
        ])
        .unwrap();
        assert_eq!(
            assemble(&layout).unwrap(),
            BinaryMatrix::identity(2).unwrap()
        );

        let a = BinaryMatrix::from_fn(3, 70, |i, j| (i + j) % 4 == 1).unwrap();
        let z = Block::Zero { rows: 3, cols: 70 };
        let diag = BlockLayout::grid(&[[Block::Matrix(&a), z], [z, Block::Matrix(&a)]]).unwrap();
        assert_eq!(
            diag.assemble().unwrap(),
            BinaryMatrix::identity(2).unwrap().kron(&a).unwrap()
        );
    }

    #[test]
    fn assemble_rejects_bad_layouts() {
        let one = BinaryMatrix::identity(1).unwrap();
        let gap = BlockLayout::from_cells(vec![
            Cell {
                rows: 0..1,
                cols: 0..1,
                source: Some(&one),
            },
            Cell {
                rows: 0..1,
                cols: 2..3,
                source: None,
            },
        ]);
        assert_eq!(gap.assemble(), Err(Error::Layout("spans leave a gap")));
        let overlap = BlockLayout::from_cells(vec![
            Cell {
                rows: 0..2,
                cols: 0..1,
                source: None,
            },
            Cell {
                rows: 1..2,
                cols: 1..2,
                source: Some(&one),
            },
        ]);
        assert!(matches!(overlap.assemble(), Err(Error::Layout(_))));
        let missing = BlockLayout::from_cells(vec![
            Cell {
                rows: 0..1,
                cols: 0..1,
                source: Some(&one),
            },
            Cell {
                rows: 1..2,
                cols: 1..2,
                source: Some(&one),
            },
        ]);
        assert_eq!(
            missing.assemble(),
            Err(Error::Layout("cells do not form a complete grid"))
        );
        let wrong_shape = BlockLayout::from_cells(vec![Cell {
            rows: 0..2,
            cols: 0..1,
            source: Some(&one),
        }]);
        assert!(matches!(
            wrong_shape.assemble(),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn from_words_rejects_dirty_padding() {
        assert!(BinaryMatrix::from_words(1, 3, vec![0b111 << 61]).is_ok());
        assert_eq!(
            BinaryMatrix::from_words(1, 3, vec![1]),
            Err(Error::Layout("padding bits must be zero"))
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
            (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
                proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
                    BinaryMatrix::from_fn(r, c, |i, j| bits[i * c + j]).unwrap()
                })
            })
        }

        fn with_rows(rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
            (1..=max_cols).prop_flat_map(move |c| {
                proptest::collection::vec(any::<bool>(), rows * c).prop_map(move |bits| {
                    BinaryMatrix::from_fn(rows, c, |i, j| bits[i * c + j]).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn popcount_product_matches_naive(a in matrix(64, 64), seed in any::<u64>()) {
                let cols = 1 + (seed % 64) as usize;
                let b = BinaryMatrix::from_fn(a.cols(), cols, |i, j| (i as u64 * 31 + j as u64 * 17 + seed) % 3 == 0).unwrap();
                let fast = a.mul(&b).unwrap();
                let slow = naive_mul(&a, &b);
                for i in 0..a.rows() {
                    prop_assert_eq!(fast.row(i), &slow[i][..]);
                }
            }

            #[test]
            fn mixed_product_law(
                (a, b, c, d) in (1usize..=8, 1usize..=8, 1usize..=8, 1usize..=8, 1usize..=8, 1usize..=8)
                    .prop_flat_map(|(p, q, r, m, n, o)| (sized(p, q), sized(m, n), sized(q, r), sized(n, o))),
            ) {
                let lhs = a.kron(&b).unwrap().mul(&c.kron(&d).unwrap()).unwrap();
                let ac = a.mul(&c).unwrap();
                let bd = b.mul(&d).unwrap();
                prop_assert_eq!(lhs.shape(), (ac.rows() * bd.rows(), ac.cols() * bd.cols()));
                for i in 0..lhs.rows() {
                    for j in 0..lhs.cols() {
                        let expect = ac.get(i / bd.rows(), j / bd.cols()) * bd.get(i % bd.rows(), j % bd.cols());
                        prop_assert_eq!(lhs.get(i, j), expect);
                    }
                }
            }

            #[test]
            fn alpha_undoes_vertical_repetition(x in matrix(64, 80), s in 1usize..=8) {
                let stacked = BinaryMatrix::ones(s, 1).unwrap().kron(&x).unwrap();
                prop_assert_eq!(stacked.alpha(s).unwrap(), x);
            }

            #[test]
            fn transpose_is_involutive(x in matrix(70, 70)) {
                prop_assert_eq!(x.transpose().transpose(), x.clone());
                for j in 0..x.cols() {
                    prop_assert_eq!(x.column(j).unwrap(), x.transpose().row(j).unwrap());
                }
            }

            #[test]
            fn four_block_grid_matches_cellwise_form(
                a in with_rows(3, 4).prop_filter("square", |m| m.cols() == 3),
                b in with_rows(3, 5),
                seed in any::<u64>(),
            ) {
                // c: b.cols() x 3, p: b.cols() x b.cols()
                let w = b.cols();
                let c = BinaryMatrix::from_fn(w, 3, |i, j| (seed >> ((i * 3 + j) % 64)) & 1 == 1).unwrap();
                let p = BinaryMatrix::from_fn(w, w, |i, j| (seed >> ((i * 5 + j * 3 + 7) % 64)) & 1 == 1).unwrap();
                let i2 = BinaryMatrix::identity(2).unwrap();
                let k2 = BinaryMatrix::exchange(2).unwrap();
                let (ia, ib, kc, kp) = (i2.kron(&a).unwrap(), i2.kron(&b).unwrap(), k2.kron(&c).unwrap(), k2.kron(&p).unwrap());
                let kron_form = BlockLayout::grid(&[
                    [Block::Matrix(&ia), Block::Matrix(&ib)],
                    [Block::Matrix(&kc), Block::Matrix(&kp)],
                ]).unwrap().assemble().unwrap();
                let za = Block::Zero { rows: 3, cols: 3 };
                let zb = Block::Zero { rows: 3, cols: w };
                let zc = Block::Zero { rows: w, cols: 3 };
                let zp = Block::Zero { rows: w, cols: w };
                let cell_form = BlockLayout::grid(&[
                    [Block::Matrix(&a), za, Block::Matrix(&b), zb],
                    [za, Block::Matrix(&a), zb, Block::Matrix(&b)],
                    [zc, Block::Matrix(&c), zp, Block::Matrix(&p)],
                    [Block::Matrix(&c), zc, Block::Matrix(&p), zp],
                ]).unwrap().assemble().unwrap();
                prop_assert_eq!(kron_form, cell_form);
            }
        }

        fn sized(rows: usize, cols: usize) -> impl Strategy<Value = BinaryMatrix> {
            proptest::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| {
                BinaryMatrix::from_fn(rows, cols, |i, j| bits[i * cols + j]).unwrap()
            })
        }
    }
}
