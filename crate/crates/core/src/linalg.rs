//! Exact integer matrices and their normal forms.
//!
//! Conventions used throughout the crate:
//!
//! * Subgroup generators are **columns**. A lattice `L ⊆ Z^n` is stored as a
//!   column Hermite normal form: lower triangular, positive pivots, and every
//!   entry left of a pivot reduced into `[0, pivot)`. This form is unique, so
//!   two lattices are equal exactly when their stored matrices are equal.
//! * Pivot choice is deterministic (smallest nonzero absolute value, ties by
//!   lowest row then lowest column), which makes the Smith transforms
//!   reproducible across runs.

use std::fmt;
use std::ops::Index;

use num_traits::Zero;

use crate::scalar::IntScalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn diagonal_matrix(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    /// Builds a matrix from row-major data. Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Builds a `rows × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column has the wrong length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(self.rows, &cols)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        negate = !negate;
                    }
                    None => return T::zero(),
                }
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j).clone() * pivot.clone()
                        - m.get(i, k).clone() * m.get(k, j).clone())
                        / prev.clone();
                    m.set(i, j, v);
                }
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        if negate {
            -d
        } else {
            d
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for j in 0..self.cols {
            let s = self.get(source, j).clone();
            if s.is_zero() {
                continue;
            }
            let idx = target * self.cols + j;
            self.data[idx] = self.data[idx].clone() + factor.clone() * s;
        }
    }

    /// `col[target] += factor * col[source]`
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for i in 0..self.rows {
            let s = self.get(i, source).clone();
            if s.is_zero() {
                continue;
            }
            let idx = i * self.cols + target;
            self.data[idx] = self.data[idx].clone() + factor.clone() * s;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -self.data[idx].clone();
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = -self.data[idx].clone();
        }
    }

    /// Converts every entry to another scalar type.
    pub fn map<U: IntScalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal, `d_1 | d_2 | ...`, all `d_i ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntScalar> Smith<T> {
    /// Nonzero diagonal entries of `d`, i.e. the invariant factors including units.
    pub fn invariant_factors(&self) -> Vec<T> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

fn smallest_pivot<T: IntScalar>(d: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = d.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form<T: IntScalar>(a: &Matrix<T>) -> Smith<T> {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(r);
    let mut v = Matrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = smallest_pivot(&d, t) else {
                return Smith { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(&p);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..c {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(&p);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &T::one());
                    u.add_row_multiple(t, i, &T::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { u, d, v }
}

/// `a · u = h` with `u` unimodular and `h` in column Hermite normal form.
/// The first `rank` columns of `h` are nonzero; the rest are zero, and the
/// matching columns of `u` span the integer kernel of `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hermite<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    pub rank: usize,
}

pub fn hermite_normal_form<T: IntScalar>(a: &Matrix<T>) -> Hermite<T> {
    let (r, c) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = Matrix::identity(c);
    let mut pc = 0;
    for i in 0..r {
        if pc == c {
            break;
        }
        loop {
            let mut best: Option<(usize, T)> = None;
            for j in pc..c {
                let v = h.get(i, j);
                if !v.is_zero() {
                    let a = v.abs();
                    if best.as_ref().map_or(true, |(_, b)| a < *b) {
                        best = Some((j, a));
                    }
                }
            }
            let Some((j, _)) = best else { break };
            h.swap_cols(pc, j);
            u.swap_cols(pc, j);
            let p = h.get(i, pc).clone();
            let mut done = true;
            for j in pc + 1..c {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = -h.get(i, j).div_floor(&p);
                h.add_col_multiple(j, pc, &q);
                u.add_col_multiple(j, pc, &q);
                done &= h.get(i, j).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(i, pc).is_zero() {
            continue;
        }
        if h.get(i, pc).is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        let p = h.get(i, pc).clone();
        for j in 0..pc {
            let q = -h.get(i, j).div_floor(&p);
            if !q.is_zero() {
                h.add_col_multiple(j, pc, &q);
                u.add_col_multiple(j, pc, &q);
            }
        }
        pc += 1;
    }
    Hermite { h, u, rank: pc }
}

/// Column HNF of the full-rank lattice spanned by `gens` together with
/// `diag(moduli)`. Every intermediate entry below the active row is kept
/// reduced modulo its row modulus, so no coefficient growth occurs.
///
/// Returns the square `n × n` basis, `n = moduli.len()`. All moduli must be positive.
pub fn hnf_mod<T: IntScalar>(gens: &[Vec<T>], moduli: &[T]) -> Matrix<T> {
    let n = moduli.len();
    debug_assert!(moduli.iter().all(|m| m.is_positive()));
    let mut work: Vec<Vec<T>> = gens
        .iter()
        .map(|g| {
            debug_assert_eq!(g.len(), n);
            g.iter().zip(moduli).map(|(x, m)| x.mod_floor(m)).collect::<Vec<T>>()
        })
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .collect();
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        let mut pivot = vec![T::zero(); n];
        pivot[i] = moduli[i].clone();
        for col in work.iter_mut() {
            if col[i].is_zero() {
                continue;
            }
            let eg = pivot[i].extended_gcd(&col[i]);
            let a = pivot[i].clone() / eg.gcd.clone();
            let b = col[i].clone() / eg.gcd.clone();
            let mut new_pivot = Vec::with_capacity(n);
            let mut new_col = Vec::with_capacity(n);
            for k in 0..n {
                if k < i {
                    new_pivot.push(T::zero());
                    new_col.push(T::zero());
                    continue;
                }
                let p = pivot[k].clone();
                let c = col[k].clone();
                let mut np = eg.x.clone() * p.clone() + eg.y.clone() * c.clone();
                let mut nc = b.clone() * p - a.clone() * c;
                if k > i {
                    np = np.mod_floor(&moduli[k]);
                    nc = nc.mod_floor(&moduli[k]);
                }
                new_pivot.push(np);
                new_col.push(nc);
            }
            pivot = new_pivot;
            *col = new_col;
        }
        if pivot[i].is_negative() {
            for (k, v) in pivot.iter_mut().enumerate() {
                *v = -v.clone();
                if k > i {
                    *v = v.mod_floor(&moduli[k]);
                }
            }
        }
        for (k, v) in pivot.into_iter().enumerate() {
            h.set(k, i, v);
        }
        work.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    reduce_lower(&mut h);
    h
}

/// Reduces every entry left of a pivot into `[0, pivot)` for a square
/// lower-triangular matrix with positive diagonal.
fn reduce_lower<T: IntScalar>(h: &mut Matrix<T>) {
    let n = h.rows();
    for k in 0..n {
        let p = h.get(k, k).clone();
        for j in 0..k {
            let q = -h.get(k, j).div_floor(&p);
            if !q.is_zero() {
                h.add_col_multiple(j, k, &q);
            }
        }
    }
}

/// Solves `h · x = b` for square lower-triangular `h` with nonzero diagonal.
/// Returns `None` when the solution is not integral, i.e. `b` is not in the
/// lattice spanned by the columns of `h`.
pub fn solve_lower<T: IntScalar>(h: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    let n = h.rows();
    let mut x: Vec<T> = Vec::with_capacity(n);
    for i in 0..n {
        let mut rem = b[i].clone();
        for (j, xj) in x.iter().enumerate() {
            rem = rem - h.get(i, j).clone() * xj.clone();
        }
        let (q, r) = rem.div_rem(h.get(i, i));
        if !r.is_zero() {
            return None;
        }
        x.push(q);
    }
    Some(x)
}

/// Exact inverse of a unimodular matrix, or `None` if `|det| ≠ 1`.
pub fn inverse_unimodular<T: IntScalar>(u: &Matrix<T>) -> Option<Matrix<T>> {
    if u.rows() != u.cols() {
        return None;
    }
    let hnf = hermite_normal_form(u);
    if hnf.h == Matrix::identity(u.rows()) {
        Some(hnf.u)
    } else {
        None
    }
}

/// Integer kernel basis of `a` (as columns), via the unimodular HNF transform.
pub fn kernel_basis<T: IntScalar>(a: &Matrix<T>) -> Vec<Vec<T>> {
    let hnf = hermite_normal_form(a);
    (hnf.rank..a.cols()).map(|j| hnf.u.column(j)).collect()
}

/// Whether `v` lies in the column span of `a`, by exact solving against the HNF.
pub fn in_column_span<T: IntScalar>(a: &Matrix<T>, v: &[T]) -> bool {
    let hnf = hermite_normal_form(a);
    let mut rem = v.to_vec();
    let mut row = 0;
    for j in 0..hnf.rank {
        while row < a.rows() && hnf.h.get(row, j).is_zero() {
            if !rem[row].is_zero() {
                return false;
            }
            row += 1;
        }
        let p = hnf.h.get(row, j).clone();
        let (q, r) = rem[row].div_rem(&p);
        if !r.is_zero() {
            return false;
        }
        for i in row..a.rows() {
            rem[i] = rem[i].clone() - q.clone() * hnf.h.get(i, j).clone();
        }
        row += 1;
    }
    rem.iter().all(Zero::is_zero)
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn smith_of_identity_is_identity() {
        let a = m(vec![vec![1, 0], vec![0, 1]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u, a);
        assert_eq!(s.d, a);
        assert_eq!(s.v, a);
    }

    #[test]
    fn smith_two_four_six_eight() {
        let a = m(vec![vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, m(vec![vec![2, 0], vec![0, 4]]));
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.u.determinant().abs(), 1);
        assert_eq!(s.v.determinant().abs(), 1);
    }

    #[test]
    fn smith_of_zero_row() {
        let a = Matrix::<i64>::zeros(1, 3);
        let s = smith_normal_form(&a);
        assert!(s.d.is_zero());
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    }

    #[test]
    fn hermite_identity() {
        let a = m(vec![vec![1, 0], vec![0, 1]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h.h, a);
        assert_eq!(h.rank, 2);
    }

    #[test]
    fn hermite_index_one_lattice() {
        // columns (2,0), (0,3), (1,1)
        let a = m(vec![vec![2, 0, 1], vec![0, 3, 1]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h.rank, 2);
        assert_eq!(*h.h.get(0, 0) * *h.h.get(1, 1), 1);
        assert_eq!(a.mul(&h.u), h.h);
        assert!(in_column_span(&a, &[1, 0]));
        assert!(in_column_span(&a, &[0, 1]));
    }

    #[test]
    fn hermite_diag_two_two() {
        let a = m(vec![vec![2, 0], vec![0, 2]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h.h, a);
        assert!(!in_column_span(&a, &[1, 0]));
        assert!(in_column_span(&a, &[2, 4]));
    }

    #[test]
    fn hermite_kernel() {
        let a = m(vec![vec![1, 2, 3]]);
        let ker = kernel_basis(&a);
        assert_eq!(ker.len(), 2);
        for k in ker {
            assert_eq!(a.mul_vec(&k), vec![0]);
        }
    }

    #[test]
    fn modular_hnf_matches_general_hnf() {
        let gens = vec![vec![4, 2, 1], vec![6, 0, 3]];
        let moduli = vec![12, 4, 6];
        let modular = hnf_mod(&gens, &moduli);
        let mut cols = gens.clone();
        cols.push(vec![12, 0, 0]);
        cols.push(vec![0, 4, 0]);
        cols.push(vec![0, 0, 6]);
        let general = hermite_normal_form(&Matrix::from_columns(3, &cols));
        let square = Matrix::from_columns(3, &general.h.columns()[..3]);
        assert_eq!(modular, square);
    }

    #[test]
    fn determinant_bareiss() {
        let a = m(vec![vec![0, 2, 1], vec![1, 1, 0], vec![3, 0, 2]]);
        assert_eq!(a.determinant(), 0 * (2) - 2 * (2) + 1 * (-3));
        let b: Matrix<BigInt> = a.map(|x| BigInt::from(*x));
        assert_eq!(b.determinant(), BigInt::from(-7));
    }

    #[test]
    fn unimodular_inverse() {
        let u = m(vec![vec![2, 1], vec![1, 1]]);
        let inv = inverse_unimodular(&u).unwrap();
        assert_eq!(u.mul(&inv), Matrix::identity(2));
        assert!(inverse_unimodular(&m(vec![vec![2, 0], vec![0, 1]])).is_none());
    }
}
