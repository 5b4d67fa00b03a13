//! Dense matrices over a [`Field`] and exact Gaussian elimination.
//!
//! Elimination always takes the first nonzero entry of a column as pivot and
//! never swaps columns, so reported pivot columns refer to the input.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
    field: Field,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<u32> = self.row(i).iter().map(|e| e.index()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Elem;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Elem::ZERO; rows * cols], field: field.clone() }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Elem::ONE;
        }
        m
    }

    /// Row-major construction; every entry is checked against `field`.
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        for &e in &data {
            field.check(e)?;
        }
        Ok(Mat { rows, cols, data, field: field.clone() })
    }

    /// Row-major construction from integers mapped into the prime subfield.
    pub fn from_ints(field: &Field, rows: usize, cols: usize, vals: &[i64]) -> Mat {
        assert_eq!(vals.len(), rows * cols, "entry count");
        let data = vals.iter().map(|&v| field.from_int(v)).collect();
        Mat { rows, cols, data, field: field.clone() }
    }

    /// Column vector.
    pub fn column(field: &Field, entries: Vec<Elem>) -> Mat {
        let rows = entries.len();
        Mat { rows, cols: 1, data: entries, field: field.clone() }
    }

    /// Row vector.
    pub fn row_vector(field: &Field, entries: Vec<Elem>) -> Mat {
        let cols = entries.len();
        Mat { rows: 1, cols, data: entries, field: field.clone() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.data.iter().filter(|e| !e.is_zero()).count()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    fn same_field(&self, other: &Mat) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn same_dims(&self, other: &Mat) -> Result<()> {
        self.same_field(other)?;
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch { expected: self.dims(), found: other.dims() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.same_dims(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Mat { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.same_dims(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Mat { data, ..self.clone() })
    }

    pub fn scale(&self, c: Elem) -> Mat {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Mat { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: other.dims(),
            });
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(l, j)));
                }
            }
        }
        Ok(out)
    }

    /// `A * v` for a vector given as a slice.
    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut base = self.clone();
        let mut acc = Mat::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn hstack(parts: &[&Mat]) -> Result<Mat> {
        let first = parts.first().ok_or_else(|| Error::Internal("empty hstack".into()))?;
        let rows = first.rows;
        let mut cols = 0;
        for p in parts {
            first.same_field(p)?;
            if p.rows != rows {
                return Err(Error::DimensionMismatch { expected: (rows, p.cols), found: p.dims() });
            }
            cols += p.cols;
        }
        let mut out = Mat::zeros(&first.field, rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, off + j, p.get(i, j));
                }
            }
            off += p.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&Mat]) -> Result<Mat> {
        let first = parts.first().ok_or_else(|| Error::Internal("empty vstack".into()))?;
        let cols = first.cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            first.same_field(p)?;
            if p.cols != cols {
                return Err(Error::DimensionMismatch { expected: (p.rows, cols), found: p.dims() });
            }
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        Ok(Mat { rows, cols, data, field: first.field.clone() })
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    /// Contiguous block `rows r0..r0+h`, `cols c0..c0+w`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Mat {
        let mut out = Mat::zeros(&self.field, h, w);
        for i in 0..h {
            for j in 0..w {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    /// Submatrix at the intersection of the given rows and columns
    /// (0-based, strictly increasing).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Mat> {
        check_selection(rows, self.rows, "row")?;
        check_selection(cols, self.cols, "column")?;
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        Ok(Mat { rows: rows.len(), cols: cols.len(), data, field: self.field.clone() })
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&self.field, &mut m.data, self.rows, self.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut scratch = self.data.clone();
        rank_in_place(&self.field, &mut scratch, self.rows, self.cols)
    }

    pub fn det(&self) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return Ok(Elem::ZERO);
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let piv = a[c * n + c];
            det = f.mul(det, piv);
            let inv = f.inv(piv)?;
            for r in c + 1..n {
                let factor = f.mul(a[r * n + c], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[c * n + j]));
                }
            }
        }
        Ok(det)
    }

    /// Basis of `{ k : self * k = 0 }` as column vectors, one per free column.
    pub fn right_kernel(&self) -> Vec<Mat> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Elem::ZERO; self.cols];
            v[free] = Elem::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            basis.push(Mat::column(f, v));
        }
        basis
    }

    /// Some `X` with `self * X = rhs`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve_right(&self, rhs: &Mat) -> Result<Option<Mat>> {
        self.same_field(rhs)?;
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch { expected: (self.rows, rhs.cols), found: rhs.dims() });
        }
        let aug = Mat::hstack(&[self, rhs])?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(&self.field, self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(row, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    /// Some `X` with `X * self = rhs`, or `None` when `rhs` leaves the row space.
    pub fn solve_left(&self, rhs: &Mat) -> Result<Option<Mat>> {
        Ok(self.transpose().solve_right(&rhs.transpose())?.map(|x| x.transpose()))
    }

    pub fn inverse(&self) -> Result<Option<Mat>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rank() < self.rows {
            return Ok(None);
        }
        self.solve_right(&Mat::identity(&self.field, self.rows))
    }
}

fn check_selection(idx: &[usize], bound: usize, what: &str) -> Result<()> {
    for w in idx.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::BadIndex(format!("{what} indices not strictly increasing")));
        }
    }
    if let Some(&last) = idx.last() {
        if last >= bound {
            return Err(Error::BadIndex(format!("{what} index {last} out of range (< {bound})")));
        }
    }
    Ok(())
}

/// Reduces a row-major buffer to reduced row echelon form; returns pivot columns.
pub(crate) fn rref_in_place(f: &Field, a: &mut [Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prow = 0;
    for c in 0..cols {
        if prow == rows {
            break;
        }
        let Some(p) = (prow..rows).find(|&r| !a[r * cols + c].is_zero()) else {
            continue;
        };
        if p != prow {
            for j in 0..cols {
                a.swap(p * cols + j, prow * cols + j);
            }
        }
        let inv = f.inv(a[prow * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            a[prow * cols + j] = f.mul(a[prow * cols + j], inv);
        }
        for r in 0..rows {
            if r == prow {
                continue;
            }
            let factor = a[r * cols + c];
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                a[r * cols + j] = f.sub(a[r * cols + j], f.mul(factor, a[prow * cols + j]));
            }
        }
        pivots.push(c);
        prow += 1;
    }
    pivots
}

/// Rank by forward elimination only. Destroys the buffer.
pub(crate) fn rank_in_place(f: &Field, a: &mut [Elem], rows: usize, cols: usize) -> usize {
    let mut prow = 0;
    for c in 0..cols {
        if prow == rows {
            break;
        }
        let Some(p) = (prow..rows).find(|&r| !a[r * cols + c].is_zero()) else {
            continue;
        };
        if p != prow {
            for j in c..cols {
                a.swap(p * cols + j, prow * cols + j);
            }
        }
        let inv = f.inv(a[prow * cols + c]).expect("pivot is nonzero");
        for r in prow + 1..rows {
            let v = a[r * cols + c];
            if v.is_zero() {
                continue;
            }
            let factor = f.mul(v, inv);
            for j in c..cols {
                a[r * cols + j] = f.sub(a[r * cols + j], f.mul(factor, a[prow * cols + j]));
            }
        }
        prow += 1;
    }
    prow
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    /// Cofactor expansion along the first row; independent of elimination.
    fn cofactor_det(m: &Mat) -> Elem {
        let f = m.field().clone();
        let n = m.rows();
        if n == 0 {
            return Elem::ONE;
        }
        let mut acc = Elem::ZERO;
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = cofactor_det(&m.submatrix(&rows, &cols).unwrap());
            let term = f.mul(m.get(0, j), minor);
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Mat::identity(&gf(2), 3).rank(), 3);
        assert_eq!(Mat::from_ints(&gf(2), 2, 2, &[1, 1, 1, 1]).rank(), 1);
        assert_eq!(Mat::from_ints(&gf(5), 2, 2, &[1, 2, 2, 4]).rank(), 1);
        assert_eq!(Mat::zeros(&gf(3), 0, 4).rank(), 0);
    }

    #[test]
    fn det_examples() {
        assert_eq!(Mat::identity(&gf(3), 2).det().unwrap(), Elem::ONE);
        assert_eq!(Mat::from_ints(&gf(3), 2, 2, &[1, 1, 1, 1]).det().unwrap(), Elem::ZERO);
        let f5 = gf(5);
        assert_eq!(Mat::from_ints(&f5, 2, 2, &[1, 2, 3, 4]).det().unwrap(), f5.from_int(3));
        assert!(Mat::zeros(&f5, 2, 3).det().is_err());
    }

    #[test]
    fn det_matches_cofactor_exhaustively_at_2x2() {
        for p in [2, 3] {
            let f = gf(p);
            let q = p as i64;
            for code in 0..q.pow(4) {
                let vals: Vec<i64> = (0..4).map(|i| (code / q.pow(i)) % q).collect();
                let m = Mat::from_ints(&f, 2, 2, &vals);
                assert_eq!(m.det().unwrap(), cofactor_det(&m));
                assert_eq!(m.det().unwrap().is_zero(), m.rank() < 2);
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let f2 = gf(2);
        assert!(Mat::identity(&f2, 2).right_kernel().is_empty());
        assert_eq!(Mat::zeros(&f2, 2, 2).right_kernel().len(), 2);
        let k = Mat::from_ints(&f2, 1, 2, &[1, 1]).right_kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], Mat::from_ints(&f2, 2, 1, &[1, 1]));
    }

    #[test]
    fn submatrix_semantics() {
        let f = gf(7);
        let m = Mat::from_ints(&f, 3, 2, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(m.submatrix(&[0, 1, 2], &[0, 1]).unwrap(), m);
        assert_eq!(
            Mat::identity(&f, 2).submatrix(&[0], &[0]).unwrap(),
            Mat::from_ints(&f, 1, 1, &[1])
        );
        assert_eq!(m.submatrix(&[0, 2], &[1]).unwrap(), Mat::from_ints(&f, 2, 1, &[2, 6]));
        assert!(m.submatrix(&[2, 1], &[0]).is_err());
        assert!(m.submatrix(&[3], &[0]).is_err());
    }

    #[test]
    fn ring_basics_and_solve() {
        let f = gf(5);
        let a = Mat::from_ints(&f, 2, 2, &[1, 2, 3, 4]);
        assert_eq!(a.mul(&Mat::identity(&f, 2)).unwrap(), a);
        assert_eq!(a.pow(0).unwrap(), Mat::identity(&f, 2));
        assert_eq!(a.pow(3).unwrap(), a.mul(&a).unwrap().mul(&a).unwrap());
        let v = Mat::from_ints(&f, 1, 2, &[3, 4]);
        assert_eq!(Mat::identity(&f, 2).solve_left(&v).unwrap().unwrap(), v);
        let sing = Mat::from_ints(&f, 2, 2, &[1, 2, 2, 4]);
        assert!(sing.solve_left(&Mat::from_ints(&f, 1, 2, &[1, 0])).unwrap().is_none());
        let inv = a.inverse().unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Mat::identity(&f, 2));
        assert!(a.mul(&Mat::zeros(&f, 3, 1)).is_err());
        assert_eq!(a.add(&Mat::zeros(&gf(7), 2, 2)), Err(Error::FieldMismatch));
    }

    fn arb_mat(p: u64, max_dim: usize) -> impl Strategy<Value = Mat> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p as i64, r * c)
                .prop_map(move |vals| Mat::from_ints(&gf(p), r, c, &vals))
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in arb_mat(3, 5)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_mat(5, 5)) {
            let k = m.right_kernel();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul(v).unwrap().is_zero());
            }
            if !k.is_empty() {
                let basis = Mat::hstack(&k.iter().collect::<Vec<_>>()).unwrap();
                prop_assert_eq!(basis.rank(), k.len());
            }
        }

        #[test]
        fn submatrix_rank_bounded(m in arb_mat(2, 5), mask in 0u32..1024) {
            let rows: Vec<usize> = (0..m.rows()).filter(|i| mask >> i & 1 == 1).collect();
            let cols: Vec<usize> = (0..m.cols()).filter(|j| mask >> (5 + j) & 1 == 1).collect();
            let s = m.submatrix(&rows, &cols).unwrap();
            prop_assert!(s.rank() <= m.rank());
        }

        #[test]
        fn det_matches_cofactor(n in 3usize..=4, p in prop::sample::select(vec![2u64, 3]),
                                vals in proptest::collection::vec(0i64..3, 16)) {
            let m = Mat::from_ints(&gf(p), n, n, &vals[..n * n]);
            prop_assert_eq!(m.det().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn det_is_multiplicative(a in proptest::collection::vec(0i64..7, 9),
                                 b in proptest::collection::vec(0i64..7, 9)) {
            let f = gf(7);
            let a = Mat::from_ints(&f, 3, 3, &a);
            let b = Mat::from_ints(&f, 3, 3, &b);
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), f.mul(a.det().unwrap(), b.det().unwrap()));
        }
    }
}
