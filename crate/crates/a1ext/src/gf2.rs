//! Exact linear algebra over the two-element field.
//!
//! Matrices store bit-packed rows (one `u64` word per 64 columns), so
//! elimination steps are word-wide XORs. Everything here is deterministic:
//! pivoting is leftmost column, topmost row, and `solve` sets free
//! coordinates to zero.

use std::fmt;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Bit vector over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    data: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            data: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.data[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.data[i / WORD] |= mask;
        } else {
            self.data[i / WORD] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Parity of the bitwise AND with `other`.
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.data.iter().zip(&other.data) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.data.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * WORD + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (w, &word) in self.data.iter().enumerate() {
            if word != 0 {
                return Some(w * WORD + word.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// Result of reduced row echelon form: the reduced matrix and its pivot
/// columns in strictly increasing order.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: F2Matrix,
    pub pivots: Vec<usize>,
}

/// Dense matrix over F2 with bit-packed rows. Vectors are columns; a matrix
/// acts on the left, so `m.apply(&v)` is the image of `v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        F2Matrix {
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

    /// Build from `(row, col)` positions of the nonzero entries.
    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize)]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for &(r, c) in entries {
            m.set(r, c, true);
        }
        m
    }

    /// Stack the given vectors as the rows of a matrix.
    pub fn from_rows(cols: usize, rows: &[F2Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.set_row(i, v);
        }
        m
    }

    /// Place the given vectors as the columns of a matrix.
    pub fn from_columns(rows: usize, cols: &[F2Vector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for i in v.support() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % WORD);
        if value {
            self.data[r * self.stride + c / WORD] |= mask;
        } else {
            self.data[r * self.stride + c / WORD] &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> F2Vector {
        assert!(r < self.rows);
        F2Vector {
            len: self.cols,
            data: self.data[r * self.stride..(r + 1) * self.stride].to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &F2Vector) {
        assert!(r < self.rows && v.len() == self.cols);
        self.data[r * self.stride..(r + 1) * self.stride].copy_from_slice(&v.data);
    }

    pub fn column(&self, c: usize) -> F2Vector {
        assert!(c < self.cols);
        let mut v = F2Vector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_row_from(&mut self, dst: usize, src: usize) {
        let (dst_off, src_off) = (dst * self.stride, src * self.stride);
        for w in 0..self.stride {
            let x = self.data[src_off + w];
            self.data[dst_off + w] ^= x;
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

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = F2Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let row_off = r * self.stride;
            let out_off = r * out.stride;
            for k in 0..self.cols {
                if self.data[row_off + k / WORD] >> (k % WORD) & 1 == 1 {
                    let rhs_off = k * rhs.stride;
                    for w in 0..rhs.stride {
                        out.data[out_off + w] ^= rhs.data[rhs_off + w];
                    }
                }
            }
        }
        out
    }

    /// Image of the column vector `v` under `self`.
    pub fn apply(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(self.cols, v.len());
        let mut out = F2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            let off = r * self.stride;
            for w in 0..self.stride {
                acc ^= self.data[off + w] & v.data[w];
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn add(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a ^= b;
        }
        out
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let off = r * self.stride;
            for w in 0..self.stride {
                let mut bits = self.data[off + w];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    out.set(w * WORD + b, r, true);
                    bits &= bits - 1;
                }
            }
        }
        out
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols);
        let mut out = F2Matrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    /// Reduced row echelon form; row space is preserved and pivot columns
    /// come back strictly increasing.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pivot = (r..m.rows).find(|&i| m.get(i, c));
            let Some(p) = pivot else { continue };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row_from(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis for the kernel `{v : self * v = 0}`, one vector per row, in
    /// ascending free-column order. Row count is `cols - rank`.
    pub fn kernel_basis(&self) -> F2Matrix {
        let Rref { reduced, pivots } = self.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !pivot_set[c]).collect();
        let mut out = F2Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if reduced.get(i, f) {
                    out.set(k, p, true);
                }
            }
        }
        out
    }

    /// Solve `self * x = b`. Returns the solution with free coordinates set
    /// to zero, or `None` when `b` is outside the column space.
    pub fn solve(&self, b: &F2Vector) -> Option<F2Vector> {
        assert_eq!(b.len(), self.rows);
        let sols = self.solve_matrix(&F2Matrix::from_columns(self.rows, &[b.clone()]))?;
        Some(sols.column(0))
    }

    /// Solve `self * X = B` column by column; `None` if any column fails.
    pub fn solve_matrix(&self, b: &F2Matrix) -> Option<F2Matrix> {
        assert_eq!(b.rows, self.rows);
        // Augmented elimination: [self | B] reduced together.
        let mut aug = F2Matrix::zeros(self.rows, self.cols + b.cols);
        for r in 0..self.rows {
            for w in 0..self.stride {
                aug.data[r * aug.stride + w] = self.data[r * self.stride + w];
            }
            for c in 0..b.cols {
                if b.get(r, c) {
                    aug.set(r, self.cols + c, true);
                }
            }
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == aug.rows {
                break;
            }
            let Some(p) = (r..aug.rows).find(|&i| aug.get(i, c)) else {
                continue;
            };
            aug.swap_rows(r, p);
            for i in 0..aug.rows {
                if i != r && aug.get(i, c) {
                    aug.xor_row_from(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        // Rows past the pivot count must have empty left part and empty
        // right part, otherwise the system is inconsistent.
        for i in pivots.len()..aug.rows {
            for c in 0..self.cols {
                debug_assert!(!aug.get(i, c));
            }
            for c in 0..b.cols {
                if aug.get(i, self.cols + c) {
                    return None;
                }
            }
        }
        let mut x = F2Matrix::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                if aug.get(i, self.cols + c) {
                    x.set(p, c, true);
                }
            }
        }
        Some(x)
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Option<F2Matrix> {
        assert_eq!(self.rows, self.cols);
        let x = self.solve_matrix(&F2Matrix::identity(self.rows))?;
        if self.mul(&x) == F2Matrix::identity(self.rows) {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Deterministic xorshift source for randomized checks.
    pub struct XorShift(u64);

    impl XorShift {
        pub fn new(seed: u64) -> Self {
            XorShift(seed.max(1))
        }

        pub fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }

        pub fn bit(&mut self) -> bool {
            self.next() & 1 == 1
        }
    }

    fn random_matrix(rng: &mut XorShift, rows: usize, cols: usize) -> F2Matrix {
        let mut m = F2Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.bit() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Independent rank oracle: plain Gaussian elimination on a bool grid,
    /// no shared code with the bit-packed path.
    fn naive_rank(m: &F2Matrix) -> usize {
        let mut grid: Vec<Vec<bool>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            if let Some(p) = (rank..m.rows()).find(|&r| grid[r][c]) {
                grid.swap(rank, p);
                for r in 0..m.rows() {
                    if r != rank && grid[r][c] {
                        for k in 0..m.cols() {
                            grid[r][k] ^= grid[rank][k];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn rref_identity() {
        let id = F2Matrix::identity(3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_rank_one() {
        let m = F2Matrix::from_entries(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0]);
        assert!(r.reduced.get(0, 0) && r.reduced.get(0, 1));
        assert!(!r.reduced.get(1, 0) && !r.reduced.get(1, 1));
    }

    #[test]
    fn rref_rank_matches_independent_elimination() {
        let mut rng = XorShift::new(0x9e3779b97f4a7c15);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 20, 20);
            assert_eq!(m.rank(), naive_rank(&m));
        }
    }

    #[test]
    fn rref_idempotent_and_transpose_rank() {
        let mut rng = XorShift::new(42);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 17, 23);
            let r = m.rref();
            let rr = r.reduced.rref();
            assert_eq!(rr.reduced, r.reduced);
            assert_eq!(rr.pivots, r.pivots);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn kernel_zero_matrix() {
        let m = F2Matrix::zeros(2, 3);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 3);
        assert_eq!(k.rank(), 3);
    }

    #[test]
    fn kernel_identity_empty() {
        let k = F2Matrix::identity(4).kernel_basis();
        assert_eq!(k.rows(), 0);
    }

    #[test]
    fn kernel_explicit_enumeration() {
        // Oracle first: enumerate all 8 vectors of F2^3.
        let m = F2Matrix::from_entries(2, 3, &[(0, 0), (0, 1), (1, 1), (1, 2)]);
        let mut killed = Vec::new();
        for bits in 0..8u32 {
            let v = F2Vector::from_support(
                3,
                &(0..3).filter(|&i| bits >> i & 1 == 1).collect::<Vec<_>>(),
            );
            if m.apply(&v).is_zero() && !v.is_zero() {
                killed.push(v);
            }
        }
        assert_eq!(killed, vec![F2Vector::from_support(3, &[0, 1, 2])]);

        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0), killed[0]);
    }

    #[test]
    fn kernel_rows_killed_and_counted() {
        let mut rng = XorShift::new(7);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 11, 19);
            let k = m.kernel_basis();
            assert_eq!(k.rows() + m.rank(), m.cols());
            assert_eq!(k.rank(), k.rows());
            for i in 0..k.rows() {
                assert!(m.apply(&k.row(i)).is_zero());
            }
        }
    }

    #[test]
    fn solve_identity() {
        let m = F2Matrix::identity(5);
        let b = F2Vector::from_support(5, &[1, 3]);
        assert_eq!(m.solve(&b), Some(b));
    }

    #[test]
    fn solve_pivot_first_convention() {
        let m = F2Matrix::from_entries(1, 2, &[(0, 0), (0, 1)]);
        let b = F2Vector::unit(1, 0);
        let x = m.solve(&b).unwrap();
        assert_eq!(x, F2Vector::from_support(2, &[0]));
    }

    #[test]
    fn solve_random_by_substitution() {
        let mut rng = XorShift::new(0xabcdef);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 10, 12);
            // Make the right side solvable by construction.
            let mut x0 = F2Vector::zeros(12);
            for i in 0..12 {
                if rng.bit() {
                    x0.set(i, true);
                }
            }
            let b = m.apply(&x0);
            let x = m.solve(&b).expect("consistent system");
            assert_eq!(m.apply(&x), b);
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = F2Matrix::from_entries(2, 1, &[(0, 0), (1, 0)]);
        let b = F2Vector::unit(2, 0);
        assert_eq!(m.solve(&b), None);
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = XorShift::new(0x1234);
        let mut found = 0;
        while found < 5 {
            let m = random_matrix(&mut rng, 8, 8);
            if m.is_invertible() {
                let inv = m.inverse().unwrap();
                assert_eq!(m.mul(&inv), F2Matrix::identity(8));
                assert_eq!(inv.mul(&m), F2Matrix::identity(8));
                found += 1;
            }
        }
    }
}
