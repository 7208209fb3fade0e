//! Dense linear algebra over `F_p`: row reduction, kernels, solving and
//! subspace arithmetic. Every graded piece in this crate is at most a few
//! dozen dimensions, so dense storage is the right trade-off.

use crate::field::Fp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    f: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(f: Fp, rows: usize, cols: usize) -> Self {
        Matrix {
            f,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(f: Fp, n: usize) -> Self {
        let mut m = Matrix::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_rows(f: Fp, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(f, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(f: Fp, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(f, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.f;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.f;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.f;
        Matrix {
            f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.f;
        Matrix {
            f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.f, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            f: self.f,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.f;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : A v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = self.f;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `A x = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let f = self.f;
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Inverse of a square matrix, if invertible.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.f, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// A subspace of `F_p^n`, stored as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    f: Fp,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(f: Fp, ambient: usize) -> Self {
        Subspace {
            f,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(f: Fp, ambient: usize) -> Self {
        Subspace::span(f, ambient, (0..ambient).map(|i| unit(ambient, i)))
    }

    pub fn span<I: IntoIterator<Item = Vec<u32>>>(f: Fp, ambient: usize, vectors: I) -> Self {
        let rows: Vec<Vec<u32>> = vectors.into_iter().collect();
        if rows.is_empty() || ambient == 0 {
            return Subspace::zero(f, ambient);
        }
        let mut m = Matrix::from_rows(f, ambient, &rows);
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace {
            f,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Reduces `v` against the echelon basis; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.f;
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                for (wj, &rj) in w.iter_mut().zip(row) {
                    *wj = f.sub(*wj, f.mul(c, rj));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(|&c| c == 0)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::span(
            self.f,
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let f = self.f;
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(f, self.ambient);
        }
        // a in self, b in other, a - b = 0
        let cols: Vec<Vec<u32>> = self
            .basis
            .iter()
            .cloned()
            .chain(
                other
                    .basis
                    .iter()
                    .map(|v| v.iter().map(|&c| f.neg(c)).collect()),
            )
            .collect();
        let m = Matrix::from_cols(f, self.ambient, &cols);
        let k = self.dim();
        let vecs = m.kernel().into_iter().map(|coef| {
            let mut v = vec![0; self.ambient];
            for (c, row) in coef[..k].iter().zip(&self.basis) {
                for (vj, &rj) in v.iter_mut().zip(row) {
                    *vj = f.add(*vj, f.mul(*c, rj));
                }
            }
            v
        });
        Subspace::span(f, self.ambient, vecs)
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, map: &Matrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient);
        Subspace::span(
            self.f,
            map.rows(),
            self.basis.iter().map(|v| map.mul_vec(v)),
        )
    }

    /// Enumerates one representative per line (projective point) of the
    /// subspace, each normalized so that its first nonzero coordinate is 1.
    /// Returns `None` if there would be more than `cap` of them.
    pub fn projective_points(&self, cap: usize) -> Option<Vec<Vec<u32>>> {
        let f = self.f;
        let d = self.dim();
        if d == 0 {
            return Some(Vec::new());
        }
        let p = f.p() as u128;
        let count = (p.pow(d as u32) - 1) / (p - 1);
        if count > cap as u128 {
            return None;
        }
        let mut out = Vec::with_capacity(count as usize);
        // coefficient vectors whose first nonzero entry is 1
        for lead in 0..d {
            let free = d - lead - 1;
            let total = (f.p() as usize).pow(free as u32);
            for idx in 0..total {
                let mut coef = vec![0u32; d];
                coef[lead] = 1;
                let mut rest = idx;
                for c in coef.iter_mut().skip(lead + 1) {
                    *c = (rest % f.p() as usize) as u32;
                    rest /= f.p() as usize;
                }
                let mut v = vec![0; self.ambient];
                for (c, row) in coef.iter().zip(&self.basis) {
                    if *c == 0 {
                        continue;
                    }
                    for (vj, &rj) in v.iter_mut().zip(row) {
                        *vj = f.add(*vj, f.mul(*c, rj));
                    }
                }
                out.push(normalize(f, v));
            }
        }
        Some(out)
    }
}

pub fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Scales a vector so that its first nonzero entry is 1.
pub fn normalize(f: Fp, mut v: Vec<u32>) -> Vec<u32> {
    if let Some(&lead) = v.iter().find(|&&c| c != 0) {
        let inv = f.inv(lead);
        for c in v.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    v
}

pub fn add_vec(f: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn scale_vec(f: Fp, c: u32, a: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn is_zero_vec(v: &[u32]) -> bool {
    v.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = f5();
        let m = Matrix::from_rows(f, 3, &[vec![1, 2, 3], vec![2, 4, 2]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&k[0])));
    }

    #[test]
    fn projective_points_of_plane() {
        let f = f5();
        let s = Subspace::full(f, 2);
        let pts = s.projective_points(100).unwrap();
        assert_eq!(pts.len(), 6);
        assert!(s.projective_points(5).is_none());
    }

    #[test]
    fn intersection_dimension() {
        let f = f5();
        let a = Subspace::span(f, 3, [vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(f, 3, [vec![0, 1, 0], vec![0, 0, 1]]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[0, 3, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(rows in proptest::collection::vec(proptest::collection::vec(0u32..5, 4), 1..5)) {
            let f = f5();
            let m = Matrix::from_rows(f, 4, &rows);
            let k = m.kernel();
            prop_assert_eq!(k.len() + m.rank(), 4);
            for v in &k {
                prop_assert!(is_zero_vec(&m.mul_vec(v)));
            }
        }

        #[test]
        fn solve_agrees_with_span(rows in proptest::collection::vec(proptest::collection::vec(0u32..5, 3), 1..4), b in proptest::collection::vec(0u32..5, 3)) {
            let f = f5();
            // columns of A are the given vectors
            let a = Matrix::from_cols(f, 3, &rows);
            let span = Subspace::span(f, 3, rows.clone());
            match a.solve(&b) {
                Some(x) => prop_assert_eq!(a.mul_vec(&x), b.clone()),
                None => prop_assert!(!span.contains(&b)),
            }
        }
    }
}
