//! Dense bit matrices over the two-element field.
//!
//! Rows are packed into `u64` words. Every linear solve in the crate (closed
//! morphism spaces, semi-extension, homotopy inverses) goes through
//! [`BitMatrix::solve`], which is deterministic: free variables are set to
//! zero.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. Any nonzero byte counts as 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from a list of `(row, col)` positions holding 1.
    /// Repeated positions cancel in pairs.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch {
                    expected: rows.max(cols),
                    found: r.max(c),
                });
            }
            m.toggle(r, c);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let bit = 1u64 << (c % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    /// Positions holding 1, in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (0..self.cols).filter(move |&c| self.get(r, c)).map(move |c| (r, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(Self { data, ..*self })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (dst, src) = (r * out.stride, k * other.stride);
                    for w in 0..out.stride {
                        out.data[dst + w] ^= other.data[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| x[c] && self.get(r, c))
                    .count()
                    % 2
                    == 1
            })
            .collect())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    fn row_xor(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.stride, src * self.stride);
        for w in 0..self.stride {
            let v = self.data[s + w];
            self.data[d + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// Reduces `self` in place to reduced row echelon form and returns the
    /// pivot column of each nonzero row, in order.
    fn rref_in_place(&mut self, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, p);
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.row_xor(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place(self.cols).len()
    }

    /// Solves `self · x = b`. Returns `None` when the system is inconsistent.
    /// Free variables are fixed to zero, so the answer is reproducible.
    pub fn solve(&self, b: &[bool]) -> Result<Option<Vec<bool>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for (r, &bit) in b.iter().enumerate() {
            aug.data[r * aug.stride..r * aug.stride + self.stride]
                .copy_from_slice(&self.data[r * self.stride..(r + 1) * self.stride]);
            if bit {
                aug.set(r, self.cols, true);
            }
        }
        let pivots = aug.rref_in_place(self.cols);
        // Any row below the pivot rows with a 1 in the last column is 0 = 1.
        if (pivots.len()..self.rows).any(|r| aug.get(r, self.cols)) {
            return Ok(None);
        }
        let mut x = vec![false; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Ok(Some(x))
    }

    /// A basis of the kernel `{x : self · x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<bool>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![false; self.cols];
                v[free] = true;
                for (r, &pc) in pivots.iter().enumerate() {
                    if m.get(r, free) {
                        v[pc] = true;
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Solves `a · x = b` over the two-element field; see [`BitMatrix::solve`].
pub fn solve_linear(a: &BitMatrix, b: &[bool]) -> Result<Option<Vec<bool>>> {
    a.solve(b)
}

pub fn rank(a: &BitMatrix) -> usize {
    a.rank()
}
