//! Bit vectors and matrices over GF(2).
//!
//! Positions are 1-based in the public API, matching mode and qubit labels.
//! Storage packs bit 1 into the most significant bit of the first word, so the
//! derived ordering is lexicographic on the bit string and, for `len <= 64`,
//! [`BitVector::to_index`] is the computational-basis index with bit 1 as the
//! most significant digit.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set0(i);
            }
        }
        v
    }

    /// Vector of length `len` with ones at the given 1-based positions.
    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for p in positions {
            v.set(p, true);
        }
        v
    }

    /// Basis-state label: bit 1 is the most significant binary digit of `index`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= WORD, "from_index supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = index << (WORD - len);
        }
        v
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.len <= WORD, "to_index supports at most 64 bits");
        if self.len == 0 {
            0
        } else {
            self.words[0] >> (WORD - self.len)
        }
    }

    pub fn unit(len: usize, position: usize) -> Self {
        Self::from_positions(len, [position])
    }

    pub fn ones_vector(len: usize) -> Self {
        Self::from_positions(len, 1..=len)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn check(&self, i: usize) {
        assert!(
            i >= 1 && i <= self.len,
            "bit index {i} out of range 1..={}",
            self.len
        );
    }

    #[inline]
    pub(crate) fn get0(&self, i: usize) -> bool {
        (self.words[i / WORD] >> (WORD - 1 - i % WORD)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set0(&mut self, i: usize) {
        self.words[i / WORD] |= 1 << (WORD - 1 - i % WORD);
    }

    #[inline]
    pub(crate) fn flip0(&mut self, i: usize) {
        self.words[i / WORD] ^= 1 << (WORD - 1 - i % WORD);
    }

    pub fn get(&self, i: usize) -> bool {
        self.check(i);
        self.get0(i - 1)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.check(i);
        let mask = 1u64 << (WORD - 1 - (i - 1) % WORD);
        let w = &mut self.words[(i - 1) / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.check(i);
        self.flip0(i - 1);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// 1-based positions of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let lead = rest.leading_zeros() as usize;
                rest &= !(1u64 << (WORD - 1 - lead));
                Some(wi * WORD + lead + 1)
            })
        })
    }

    /// Parity of the bitwise AND.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn and_weight(&self, other: &BitVector) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Sub-vector at the given 1-based positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(positions.len());
        for (k, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set0(k);
            }
        }
        out
    }

    /// Writes `values` into the given 1-based positions.
    pub fn scatter(&mut self, positions: &[usize], values: &BitVector) {
        assert_eq!(positions.len(), values.len());
        for (k, &p) in positions.iter().enumerate() {
            self.set(p, values.get0(k));
        }
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.ones() {
            out.set0(i - 1);
        }
        for i in other.ones() {
            out.set0(self.len + i - 1);
        }
        out
    }

    /// Drops the given 1-based positions.
    pub fn remove_positions(&self, positions: &[usize]) -> BitVector {
        let keep: Vec<usize> = (1..=self.len).filter(|p| !positions.contains(p)).collect();
        self.select(&keep)
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(
            self.len, rhs.len,
            "xor of bit vectors with different lengths"
        );
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitAnd for &BitVector {
    type Output = BitVector;
    fn bitand(self, rhs: &BitVector) -> BitVector {
        assert_eq!(self.len, rhs.len);
        BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&rhs.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }
}

impl BitOr for &BitVector {
    type Output = BitVector;
    fn bitor(self, rhs: &BitVector) -> BitVector {
        assert_eq!(self.len, rhs.len);
        BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&rhs.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get0(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits: Result<Vec<bool>> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(crate::error::parse_err(0, format!("bad bit {other:?}"))),
            })
            .collect();
        Ok(BitVector::from_bools(&bits?))
    }
}

/// Dense GF(2) matrix stored as rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 1..=n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                actual: bad.len(),
            });
        }
        Ok(BitMatrix { rows, cols })
    }

    pub fn from_columns(columns: &[BitVector], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    actual: c.len(),
                });
            }
            for i in c.ones() {
                m.set(i, j + 1, true);
            }
        }
        Ok(m)
    }

    /// Rows given as strings of `0`/`1`, e.g. `["1000", "1100"]`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows: Vec<BitVector> = rows.iter().map(|r| r.parse()).collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, BitVector::len);
        Self::from_rows(rows, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i - 1].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut c = BitVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set0(i);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (1..=self.cols).map(|j| self.column(j)).collect()
    }

    pub fn column_weight(&self, j: usize) -> usize {
        self.rows.iter().filter(|r| r.get(j)).count()
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            rows: self.columns(),
            cols: self.nrows(),
        }
    }

    /// `(m x)_i = sum_j m[i,j] x_j mod 2`.
    pub fn matvec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(x) {
                out.set0(i);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if other.nrows() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: other.nrows(),
            });
        }
        let mut out = BitMatrix::zeros(self.nrows(), other.ncols());
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones() {
                out.rows[i] ^= other.row(k);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form; returns the reduced matrix (zero rows
    /// dropped) and its 1-based pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get0(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get0(c) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(c + 1);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (
            BitMatrix {
                rows,
                cols: self.cols,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space: one vector per free column, with the free
    /// variable set to one and the pivot variables solved for.
    pub fn kernel(&self) -> Vec<BitVector> {
        let (reduced, pivots) = self.rref();
        (1..=self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = BitVector::unit(self.cols, free);
                for (row, &p) in reduced.rows.iter().zip(&pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.nrows();
        if n != self.cols {
            return None;
        }
        let mut aug: Vec<BitVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&BitVector::unit(n, i + 1)))
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| aug[i].get0(c))?;
            aug.swap(c, p);
            let pivot_row = aug[c].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != c && row.get0(c) {
                    *row ^= &pivot_row;
                }
            }
        }
        let right: Vec<usize> = (n + 1..=2 * n).collect();
        Some(BitMatrix {
            rows: aug.iter().map(|r| r.select(&right)).collect(),
            cols: n,
        })
    }

    /// Sub-matrix keeping the listed 1-based columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: self.rows.iter().map(|r| r.select(cols)).collect(),
            cols: cols.len(),
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: rows.iter().map(|&i| self.rows[i - 1].clone()).collect(),
            cols: self.cols,
        }
    }

    /// Top-left `r x c` block.
    pub fn truncate(&self, r: usize, c: usize) -> BitMatrix {
        let cols: Vec<usize> = (1..=c).collect();
        BitMatrix {
            rows: self.rows[..r].iter().map(|row| row.select(&cols)).collect(),
            cols: c,
        }
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for (k, r) in self.rows.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

/// `gf2_kernel`: free-variable basis of the null space.
pub fn gf2_kernel(m: &BitMatrix) -> Vec<BitVector> {
    m.kernel()
}

pub fn gf2_matvec(m: &BitMatrix, x: &BitVector) -> Result<BitVector> {
    m.matvec(x)
}

/// Rank of a set of vectors (all of the same length).
pub fn span_rank(vectors: &[BitVector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    BitMatrix {
        rows: vectors.to_vec(),
        cols: first.len(),
    }
    .rank()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[BitVector], v: &BitVector) -> bool {
    let mut with = basis.to_vec();
    with.push(v.clone());
    span_rank(&with) == span_rank(basis)
}

/// Iterates all `n`-bit vectors of weight `k`, as sorted 1-based position lists,
/// in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n {
        Some((1..=k).collect())
    } else {
        None
    };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // advance
        let next = {
            let mut c = out.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - (k - 1 - i) {
                    c[i] += 1;
                    for j in i + 1..k {
                        c[j] = c[j - 1] + 1;
                    }
                    break Some(c);
                }
            }
        };
        current = next;
        Some(out)
    })
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_msb_first() {
        let v: BitVector = "0110".parse().unwrap();
        assert_eq!(v.to_index(), 6);
        assert_eq!(BitVector::from_index(4, 6), v);
        assert!(v.get(2) && v.get(3) && !v.get(1));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn ones_across_word_boundary() {
        let v = BitVector::from_positions(130, [1, 64, 65, 128, 130]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![1, 64, 65, 128, 130]);
        assert_eq!(v.weight(), 5);
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a: BitVector = "0011".parse().unwrap();
        let b: BitVector = "0100".parse().unwrap();
        assert!(a < b);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(gf2_kernel(&BitMatrix::identity(3)).is_empty());
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let m = BitMatrix::from_strs(&["11"]).unwrap();
        assert_eq!(gf2_kernel(&m), vec!["11".parse().unwrap()]);
    }

    #[test]
    fn matvec_zero_and_mismatch() {
        let m = BitMatrix::from_strs(&["101", "011"]).unwrap();
        assert!(m.matvec(&BitVector::zeros(3)).unwrap().is_zero());
        assert!(m.matvec(&BitVector::zeros(2)).is_err());
    }

    #[test]
    fn inverse_of_lower_triangular() {
        let a = BitMatrix::from_strs(&["1000", "1100", "1110", "1111"]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), BitMatrix::identity(4));
        assert!(BitMatrix::from_strs(&["11", "11"])
            .unwrap()
            .inverse()
            .is_none());
    }

    #[test]
    fn combinations_count_and_order() {
        let all: Vec<_> = combinations(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![1, 2]);
        assert_eq!(all[9], vec![4, 5]);
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(binomial(16, 2), 120);
    }
}
