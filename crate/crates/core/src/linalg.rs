//! Dense exact linear algebra.
//!
//! Elimination only ever divides by units, so the same routines serve the
//! rationals and the local ring: over `Q` they are ordinary Gaussian
//! elimination, over `R` an entry lying in `m` is never chosen as a pivot.

use num_traits::{One, Zero};

use crate::coeff::{Scalar, Q};

/// Row-major dense matrix. Rows are codomain coordinates, columns domain
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<C: Scalar> {
    ctx: C::Ctx,
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> Matrix<C> {
    pub fn zeros(ctx: C::Ctx, rows: usize, cols: usize) -> Self {
        Matrix { ctx, rows, cols, data: vec![C::zero_in(ctx); rows * cols] }
    }

    pub fn identity(ctx: C::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, C::one_in(ctx));
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(ctx: C::Ctx, rows: usize, columns: &[Vec<C>]) -> Self {
        let mut m = Self::zeros(ctx, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_rows(ctx: C::Ctx, cols: usize, rows: &[Vec<C>]) -> Self {
        let mut m = Self::zeros(ctx, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length mismatch");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: C) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<D: Scalar>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix { ctx, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn residue(&self) -> Matrix<Q> {
        self.map((), |x| x.residue_q())
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc: Option<C> = None;
                for (a, b) in self.row(i).iter().zip(v) {
                    if a.is_zero_elem() || b.is_zero_elem() {
                        continue;
                    }
                    let p = a.times(b);
                    acc = Some(match acc {
                        Some(s) => s.plus(&p),
                        None => p,
                    });
                }
                acc.unwrap_or_else(|| C::zero_in(self.ctx))
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<C>) -> Matrix<C> {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero_elem() {
                        let v = out.get(i, j).plus(&a.times(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero_elem)
    }

    /// Solves `self * x = b` by elimination with unit pivots. Free unknowns
    /// are set to zero. Returns the solution together with the residual
    /// equations that had no unit pivot (each entry is the right-hand side
    /// left over after elimination); over `Q` a nonzero residual means the
    /// system is inconsistent, over `R` it lies in `m` when the residue system
    /// is consistent.
    pub fn solve(&self, b: &[C]) -> (Vec<C>, Vec<C>) {
        assert_eq!(b.len(), self.rows);
        let ctx = self.ctx;
        let mut rows: Vec<Vec<C>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = eliminate(&mut rows, self.cols);
        let mut x = vec![C::zero_in(ctx); self.cols];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = rows[ri][self.cols].clone();
        }
        // rows after the pivot rows carry the unsatisfied remainder
        let mut residual = Vec::new();
        for row in rows.iter().skip(pivots.len()) {
            let mut r = row[self.cols].clone();
            for (j, a) in row[..self.cols].iter().enumerate() {
                if !a.is_zero_elem() && !x[j].is_zero_elem() {
                    r = r.minus(&a.times(&x[j]));
                }
            }
            residual.push(r);
        }
        // pivot rows may still carry non-unit entries in free columns; those
        // free unknowns are zero so the pivot values stand.
        (x, residual)
    }

    /// Inverse of a matrix whose residue is invertible.
    pub fn inverse(&self) -> Option<Matrix<C>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let ctx = self.ctx;
        let mut rows: Vec<Vec<C>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { C::one_in(ctx) } else { C::zero_in(ctx) }));
                r
            })
            .collect();
        let pivots = eliminate(&mut rows, n);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Some(Matrix { ctx, rows: n, cols: n, data })
    }
}

/// Reduced row-echelon elimination on the first `ncols` columns of `rows`
/// (extra columns ride along). Pivots are units; each pivot is scaled to one
/// and cleared from every other row. Returns pivot columns in row order.
pub fn eliminate<C: Scalar>(rows: &mut [Vec<C>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c].unit()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].inverse().expect("unit pivot");
        let width = rows[r].len();
        for x in rows[r].iter_mut() {
            if !x.is_zero_elem() {
                *x = x.times(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_elem() {
                continue;
            }
            let factor = row[c].clone();
            for j in 0..width {
                if !pivot_row[j].is_zero_elem() {
                    row[j] = row[j].minus(&factor.times(&pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn rank(m: &Matrix<Q>) -> usize {
    let mut rows: Vec<Vec<Q>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    eliminate(&mut rows, m.cols()).len()
}

/// A subspace of `Q^n` held as a reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| unit_vector(ambient, i)).collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Q>>) -> Self {
        let mut rows: Vec<Vec<Q>> = vectors.into_iter().collect();
        for r in &rows {
            assert_eq!(r.len(), ambient, "vector length mismatch");
        }
        let pivots = eliminate(&mut rows, ambient);
        rows.truncate(pivots.len());
        Subspace { ambient, basis: rows, pivots }
    }

    /// Null space of `m`, as a subspace of its domain.
    pub fn kernel(m: &Matrix<Q>) -> Self {
        let mut rows: Vec<Vec<Q>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        let pivots = eliminate(&mut rows, m.cols());
        let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
        let vectors = free.iter().map(|&f| {
            let mut v = vec![Q::zero(); m.cols()];
            v[f] = Q::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[ri][f].clone();
            }
            v
        });
        Subspace::span(m.cols(), vectors.collect::<Vec<_>>())
    }

    /// Column space of `m`, as a subspace of its codomain.
    pub fn image(m: &Matrix<Q>) -> Self {
        Subspace::span(m.rows(), (0..m.cols()).map(|j| m.column(j)).collect::<Vec<_>>())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots; their unit vectors span a complement.
    pub fn free_coords(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Remainder of `v` after clearing the pivot coordinates with the basis.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= &f * x;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of a member with respect to the echelon basis.
    pub fn coords<C: Scalar>(&self, v: &[C]) -> Vec<C> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned().collect::<Vec<_>>())
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{q, RingElem, RingSpec};

    fn mq(rows: &[&[i64]]) -> Matrix<Q> {
        let cols = rows[0].len();
        Matrix::from_rows((), cols, &rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_and_image_dimensions() {
        let m = mq(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let k = Subspace::kernel(&m);
        assert_eq!(k.dim(), 2);
        for v in k.basis() {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert_eq!(Subspace::image(&m).dim(), 1);
    }

    #[test]
    fn reduce_projects_along_span() {
        let s = Subspace::span(3, vec![vec![q(1), q(1), q(0)]]);
        assert_eq!(s.reduce(&[q(2), q(5), q(1)]), vec![q(0), q(3), q(1)]);
        assert_eq!(s.free_coords(), vec![1, 2]);
    }

    #[test]
    fn solve_over_local_ring_never_divides_by_lambda() {
        let spec = RingSpec::local(3).unwrap();
        let l = RingElem::lambda(spec);
        let one = RingElem::one(spec);
        // [[l, 1], [1, 0]] is invertible over R
        let m = Matrix::from_rows(spec, 2, &[vec![l.clone(), one.clone()], vec![one.clone(), RingElem::zero(spec)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(spec, 2));
        // [[l]] is not
        assert!(Matrix::from_rows(spec, 1, &[vec![l.clone()]]).inverse().is_none());
        let (x, res) = Matrix::from_rows(spec, 1, &[vec![l.clone()]]).solve(std::slice::from_ref(&l));
        assert!(x[0].is_zero());
        assert_eq!(res, vec![l]);
    }

    #[test]
    fn solve_consistent_rational_system() {
        let m = mq(&[&[2, 1], &[1, 3]]);
        let (x, res) = m.solve(&[q(3), q(4)]);
        assert!(res.is_empty());
        assert_eq!(m.mul_vec(&x), vec![q(3), q(4)]);
    }
}
