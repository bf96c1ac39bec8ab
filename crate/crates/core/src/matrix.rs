//! Dense exact linear algebra over `F_p`.
//!
//! Everything here is plain Gaussian elimination; at desk scale (the largest
//! system assembled anywhere is a few thousand rows at p = 13) that is far
//! from the bottleneck, and exactness is the whole point.

use crate::{Error, Result};

/// Dense matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    pub rows: usize,
    pub cols: usize,
    p: u64,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        let data = rows.into_iter().flatten().map(|x| x % p).collect();
        FpMatrix {
            rows: r,
            cols: c,
            p,
            data,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major copy, the JSON serialization shape for matrices.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = (*d + a * b) % self.p;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} cols, vector has {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * b) % self.p)
            })
            .collect())
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let mut out = self.clone();
        for (d, &s) in out.data.iter_mut().zip(&other.data) {
            *d = (*d + s) % self.p;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sub".into()));
        }
        let mut out = self.clone();
        for (d, &s) in out.data.iter_mut().zip(&other.data) {
            *d = (*d + self.p - s) % self.p;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FpMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// In-place reduction to reduced row-echelon form; returns the pivot
    /// columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self[(r, col)] != 0) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = crate::context::mod_inv(self[(row, col)], p);
            for j in col..self.cols {
                self[(row, j)] = self[(row, j)] * inv % p;
            }
            for r in 0..self.rows {
                if r != row && self[(r, col)] != 0 {
                    let f = self[(r, col)];
                    for j in col..self.cols {
                        let s = self[(row, j)] * f % p;
                        self[(r, j)] = (self[(r, j)] + p - s) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : A v = 0}` as a [`Subspace`] of `F_p^cols`.
    pub fn kernel_basis(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_row: std::collections::HashMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_row.contains_key(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (&pc, &pr) in &pivot_row {
                v[pc] = (self.p - m[(pr, free)]) % self.p;
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.p, self.cols, basis)
    }

    /// Row space of the matrix.
    pub fn row_space(&self) -> Subspace {
        Subspace::from_vectors(
            self.p,
            self.cols,
            (0..self.rows).map(|i| self.row(i).to_vec()).collect(),
        )
    }

    /// Column space (image of `v -> A v`).
    pub fn image_basis(&self) -> Subspace {
        self.transpose().row_space()
    }

    /// One solution of `A x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, rhs has {}",
                self.rows,
                b.len()
            )));
        }
        let mut aug = FpMatrix::zero(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i] % self.p;
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u64; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)];
        }
        Ok(Some(x))
    }
}

impl std::ops::Index<(usize, usize)> for FpMatrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A subspace of `F_p^n`, stored as a row-reduced basis matrix. The reduced
/// form is canonical, so subspace equality is matrix equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub ambient_dim: usize,
    basis: FpMatrix,
}

impl Subspace {
    pub fn from_vectors(p: u64, ambient_dim: usize, vectors: Vec<Vec<u64>>) -> Self {
        let mut m = if vectors.is_empty() {
            FpMatrix::zero(p, 0, ambient_dim)
        } else {
            FpMatrix::from_rows(p, vectors)
        };
        let pivots = m.rref();
        let dim = pivots.len();
        let mut basis = FpMatrix::zero(p, dim, ambient_dim);
        for i in 0..dim {
            for j in 0..ambient_dim {
                basis[(i, j)] = m[(i, j)];
            }
        }
        Subspace { ambient_dim, basis }
    }

    pub fn zero(p: u64, ambient_dim: usize) -> Self {
        Self::from_vectors(p, ambient_dim, vec![])
    }

    pub fn full(p: u64, ambient_dim: usize) -> Self {
        let id = FpMatrix::identity(p, ambient_dim);
        Self::from_vectors(p, ambient_dim, (0..ambient_dim).map(|i| id.row(i).to_vec()).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn p(&self) -> u64 {
        self.basis.p
    }

    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        (0..self.basis.rows).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let mut rows = self.basis_rows();
        rows.push(v.to_vec());
        Subspace::from_vectors(self.p(), self.ambient_dim, rows).dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|v| self.contains(v))
    }

    /// Span of the union.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch("subspace sum".into()));
        }
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Ok(Subspace::from_vectors(self.p(), self.ambient_dim, rows))
    }

    /// Intersection, via the kernel of the stacked system: pairs `(x, y)` of
    /// coordinate vectors with `x B_A - y B_B = 0` project to the common
    /// vectors `x B_A`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch("subspace intersection".into()));
        }
        let p = self.p();
        let (da, db) = (self.dim(), other.dim());
        // Columns of the stacked system are the coordinates (x, y).
        let mut m = FpMatrix::zero(p, self.ambient_dim, da + db);
        for j in 0..da {
            for i in 0..self.ambient_dim {
                m[(i, j)] = self.basis[(j, i)];
            }
        }
        for j in 0..db {
            for i in 0..self.ambient_dim {
                m[(i, da + j)] = (p - other.basis[(j, i)]) % p;
            }
        }
        let ker = m.kernel_basis();
        let vectors = ker
            .basis_rows()
            .iter()
            .map(|xy| {
                let mut v = vec![0u64; self.ambient_dim];
                for (j, &coef) in xy[..da].iter().enumerate() {
                    for i in 0..self.ambient_dim {
                        v[i] = (v[i] + coef * self.basis[(j, i)]) % p;
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::from_vectors(p, self.ambient_dim, vectors))
    }

    /// Codimension of `self` inside `b`; errors unless `self` is contained
    /// in `b`.
    pub fn codim_in(&self, b: &Subspace) -> Result<usize> {
        if self.ambient_dim != b.ambient_dim {
            return Err(Error::DimensionMismatch("codim".into()));
        }
        if !b.contains_subspace(self) {
            return Err(Error::NotASubspace);
        }
        Ok(b.dim() - self.dim())
    }

    /// Image of the subspace under a linear map (vectors as columns).
    pub fn apply(&self, m: &FpMatrix) -> Result<Subspace> {
        let vectors = self
            .basis_rows()
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_vectors(self.p(), m.rows, vectors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, p: u64, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix::from_rows(
            p,
            (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_and_zero_ranks() {
        let id = FpMatrix::identity(5, 4);
        assert_eq!(id.rank(), 4);
        assert_eq!(id.kernel_basis().dim(), 0);
        let z = FpMatrix::zero(5, 3, 5);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().dim(), 5);
    }

    #[test]
    fn transpose_rank_oracle() {
        // rank(A) = rank(A^T), computed by two independent eliminations.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 5, 20, 20);
            assert_eq!(a.rank(), a.transpose().rank());
        }
    }

    #[test]
    fn rank_nullity_and_kernel_annihilation() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for p in [3u64, 7, 13] {
            for _ in 0..10 {
                let rows = rng.gen_range(1..12);
                let cols = rng.gen_range(1..12);
                let a = random_matrix(&mut rng, p, rows, cols);
                let ker = a.kernel_basis();
                assert_eq!(a.rank() + ker.dim(), cols);
                for v in ker.basis_rows() {
                    assert!(a.mul_vec(&v).unwrap().iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn rref_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        let mut a = random_matrix(&mut rng, 7, 9, 6);
        a.rref();
        let before = a.clone();
        a.rref();
        assert_eq!(a, before);
    }

    #[test]
    fn solve_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 11, 8, 6);
            let x: Vec<u64> = (0..6).map(|_| rng.gen_range(0..11)).collect();
            let b = a.mul_vec(&x).unwrap();
            let sol = a.solve(&b).unwrap().expect("consistent system");
            assert_eq!(a.mul_vec(&sol).unwrap(), b);
        }
    }

    #[test]
    fn solve_reports_inconsistent() {
        // x = 0 and x = 1 simultaneously.
        let a = FpMatrix::from_rows(5, vec![vec![1], vec![1]]);
        assert!(a.solve(&[0, 1]).unwrap().is_none());
        assert!(a.solve(&[0]).is_err());
    }

    #[test]
    fn subspace_codim_trivial_cases() {
        let p = 5;
        let full = Subspace::full(p, 4);
        let zero = Subspace::zero(p, 4);
        assert_eq!(full.codim_in(&full).unwrap(), 0);
        assert_eq!(zero.codim_in(&full).unwrap(), 4);
        let line = Subspace::from_vectors(p, 4, vec![vec![1, 2, 3, 4]]);
        assert!(full.codim_in(&line).is_err());
    }

    #[test]
    fn grassmann_identity() {
        // dim(A ∩ B) = dim A + dim B - dim(A + B) on random 3-dim subspaces
        // of F_5^4.
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for _ in 0..25 {
            let a = random_matrix(&mut rng, 5, 3, 4).row_space();
            let b = random_matrix(&mut rng, 5, 3, 4).row_space();
            let cap = a.intersect(&b).unwrap();
            let sum = a.sum(&b).unwrap();
            assert_eq!(cap.dim() + sum.dim(), a.dim() + b.dim());
            for v in cap.basis_rows() {
                assert!(a.contains(&v) && b.contains(&v));
            }
        }
    }

    #[test]
    fn image_basis_matches_column_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(135);
        let a = random_matrix(&mut rng, 7, 6, 9);
        let img = a.image_basis();
        assert_eq!(img.dim(), a.rank());
        for _ in 0..10 {
            let x: Vec<u64> = (0..9).map(|_| rng.gen_range(0..7)).collect();
            assert!(img.contains(&a.mul_vec(&x).unwrap()));
        }
    }
}
