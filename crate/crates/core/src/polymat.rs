//! Polynomial matrices `G(s) = G_0 + G_1 s + ... + G_d s^d` over a [`Field`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matrix::Mat;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMat {
    n: usize,
    k: usize,
    coeffs: Vec<Mat>,
    field: Field,
}

impl PolyMat {
    /// Builds from coefficient matrices `G_0..G_d`; trailing zero
    /// coefficients are dropped.
    pub fn new(field: &Field, n: usize, k: usize, coeffs: Vec<Mat>) -> Result<PolyMat> {
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
            if c.dims() != (n, k) {
                return Err(Error::DimensionMismatch { expected: (n, k), found: c.dims() });
            }
        }
        let mut g = PolyMat { n, k, coeffs, field: field.clone() };
        g.trim();
        Ok(g)
    }

    pub fn zero(field: &Field, n: usize, k: usize) -> PolyMat {
        PolyMat { n, k, coeffs: vec![Mat::zeros(field, n, k)], field: field.clone() }
    }

    pub fn constant(m: &Mat) -> PolyMat {
        PolyMat { n: m.rows(), k: m.cols(), coeffs: vec![m.clone()], field: m.field().clone() }
    }

    /// Builds from a row-major grid of polynomial entries.
    pub fn from_entries(field: &Field, n: usize, k: usize, entries: &[Poly]) -> Result<PolyMat> {
        if entries.len() != n * k {
            return Err(Error::DimensionMismatch { expected: (n, k), found: (entries.len(), 1) });
        }
        let d = entries.iter().filter_map(Poly::degree).max().unwrap_or(0);
        let mut coeffs = vec![Mat::zeros(field, n, k); d + 1];
        for (idx, p) in entries.iter().enumerate() {
            for (t, &c) in p.coeffs().iter().enumerate() {
                field.check(c)?;
                coeffs[t].set(idx / k, idx % k, c);
            }
        }
        PolyMat::new(field, n, k, coeffs)
    }

    /// A single column from its coefficient vectors `v_0..v_d`.
    pub fn from_vectors(field: &Field, n: usize, vs: &[Vec<Elem>]) -> Result<PolyMat> {
        let mut coeffs = Vec::with_capacity(vs.len().max(1));
        for v in vs {
            coeffs.push(Mat::from_vec(field, n, 1, v.clone())?);
        }
        if coeffs.is_empty() {
            coeffs.push(Mat::zeros(field, n, 1));
        }
        PolyMat::new(field, n, 1, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Mat::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Mat::zeros(&self.field, self.n, self.k));
        }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Mat] {
        &self.coeffs
    }

    /// Coefficient of `s^t`; zero beyond the degree.
    pub fn coeff(&self, t: usize) -> Mat {
        self.coeffs.get(t).cloned().unwrap_or_else(|| Mat::zeros(&self.field, self.n, self.k))
    }

    /// Largest exponent with a nonzero coefficient (0 for the zero matrix).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.get(i, j)).collect())
    }

    pub fn column(&self, j: usize) -> PolyMat {
        let coeffs = self.coeffs.iter().map(|c| c.block(0, j, self.n, 1)).collect();
        let mut g = PolyMat { n: self.n, k: 1, coeffs, field: self.field.clone() };
        g.trim();
        g
    }

    /// Coefficient vectors `v_0..v_d` of column `j`.
    pub fn column_vectors(&self, j: usize) -> Vec<Vec<Elem>> {
        self.coeffs.iter().map(|c| c.col(j)).collect()
    }

    pub fn from_columns(field: &Field, n: usize, cols: &[PolyMat]) -> Result<PolyMat> {
        let d = cols.iter().map(PolyMat::degree).max().unwrap_or(0);
        let k = cols.len();
        let mut coeffs = vec![Mat::zeros(field, n, k); d + 1];
        for (j, c) in cols.iter().enumerate() {
            if c.n != n || c.k != 1 {
                return Err(Error::DimensionMismatch { expected: (n, 1), found: (c.n, c.k) });
            }
            if &c.field != field {
                return Err(Error::FieldMismatch);
            }
            for (t, m) in c.coeffs.iter().enumerate() {
                coeffs[t].put(0, j, m);
            }
        }
        PolyMat::new(field, n, k, coeffs)
    }

    /// Total number of nonzero entries over all coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().map(Mat::weight).sum()
    }

    pub fn add(&self, o: &PolyMat) -> Result<PolyMat> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        let d = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..d).map(|t| self.coeff(t).add(&o.coeff(t))).collect::<Result<Vec<_>>>()?;
        PolyMat::new(&self.field, self.n, self.k, coeffs)
    }

    pub fn mul(&self, o: &PolyMat) -> Result<PolyMat> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if self.k != o.n {
            return Err(Error::DimensionMismatch { expected: (self.k, o.k), found: (o.n, o.k) });
        }
        let d = self.degree() + o.degree();
        let mut coeffs = vec![Mat::zeros(&self.field, self.n, o.k); d + 1];
        for (a, ga) in self.coeffs.iter().enumerate() {
            if ga.is_zero() {
                continue;
            }
            for (b, gb) in o.coeffs.iter().enumerate() {
                coeffs[a + b] = coeffs[a + b].add(&ga.mul(gb)?)?;
            }
        }
        PolyMat::new(&self.field, self.n, o.k, coeffs)
    }

    /// `G(s) u(s)` for a `k x 1` polynomial vector.
    pub fn mul_vec(&self, u: &PolyMat) -> Result<PolyMat> {
        if u.k != 1 {
            return Err(Error::DimensionMismatch { expected: (self.k, 1), found: (u.n, u.k) });
        }
        self.mul(u)
    }

    /// Keeps the coefficients of `s^0..s^j`.
    pub fn truncate(&self, j: usize) -> PolyMat {
        let mut g = self.clone();
        g.coeffs.truncate(j + 1);
        g.trim();
        g
    }

    pub fn column_degrees(&self) -> Result<Vec<usize>> {
        (0..self.k)
            .map(|j| {
                (0..self.coeffs.len())
                    .rev()
                    .find(|&t| (0..self.n).any(|i| !self.coeffs[t].get(i, j).is_zero()))
                    .ok_or(Error::ZeroColumn(j))
            })
            .collect()
    }

    /// `G_inf`: column `j` is the coefficient of `s^{delta_j}` in column `j`.
    pub fn high_order_matrix(&self) -> Result<Mat> {
        let degs = self.column_degrees()?;
        let mut m = Mat::zeros(&self.field, self.n, self.k);
        for (j, &d) in degs.iter().enumerate() {
            for i in 0..self.n {
                m.set(i, j, self.coeffs[d].get(i, j));
            }
        }
        Ok(m)
    }

    pub fn is_minimal(&self) -> bool {
        self.high_order_matrix().is_ok_and(|h| h.rank() == self.k)
    }

    /// All `k x k` minors, rows taken in lexicographic order.
    pub fn minors(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        let mut rows: Vec<usize> = (0..self.k).collect();
        if self.k > self.n {
            return out;
        }
        loop {
            let grid: Vec<Vec<Poly>> = rows
                .iter()
                .map(|&i| (0..self.k).map(|j| self.entry(i, j)).collect())
                .collect();
            out.push(poly_det(&self.field, &grid));
            if !next_combination(&mut rows, self.n) {
                break;
            }
        }
        out
    }

    fn nonzero_minors(&self) -> Result<Vec<Poly>> {
        let minors = self.minors();
        if minors.iter().all(Poly::is_zero) {
            return Err(Error::RankDeficient);
        }
        Ok(minors)
    }

    /// Maximal degree of a `k x k` minor.
    pub fn code_degree(&self) -> Result<usize> {
        Ok(self.nonzero_minors()?.iter().filter_map(Poly::degree).max().unwrap_or(0))
    }

    /// True iff the gcd of all maximal minors is a nonzero constant.
    pub fn minors_gcd_is_unit(&self) -> Result<bool> {
        let g = self
            .nonzero_minors()?
            .iter()
            .fold(Poly::zero(), |acc, m| acc.gcd(&self.field, m));
        Ok(g.degree() == Some(0))
    }

    /// Column reduction to a minimal generator matrix of the same column space.
    pub fn minimalize(&self) -> Result<PolyMat> {
        self.nonzero_minors()?;
        let f = self.field.clone();
        let mut cols: Vec<PolyMat> = (0..self.k).map(|j| self.column(j)).collect();
        loop {
            let g = PolyMat::from_columns(&f, self.n, &cols)?;
            let degs = g.column_degrees().map_err(|_| Error::RankDeficient)?;
            let hom = g.high_order_matrix()?;
            let kernel = hom.right_kernel();
            let Some(a) = kernel.first() else {
                return Ok(g);
            };
            let support: Vec<usize> = (0..self.k).filter(|&j| !a.get(j, 0).is_zero()).collect();
            let top = *support.iter().max_by_key(|&&j| (degs[j], j)).expect("kernel vector is nonzero");
            let mut acc = PolyMat::zero(&f, self.n, 1);
            for &j in &support {
                let shift = degs[top] - degs[j];
                let term = cols[j].scale(a.get(j, 0)).shift(shift);
                acc = acc.add(&term)?;
            }
            if acc.is_zero() {
                return Err(Error::RankDeficient);
            }
            cols[top] = acc;
        }
    }

    /// Entry-wise `s^{delta_j} p(1/s)` using each column's own degree.
    pub fn reverse(&self) -> Result<PolyMat> {
        if !self.is_minimal() {
            return Err(Error::NotMinimal);
        }
        if !self.minors_gcd_is_unit()? {
            return Err(Error::NotSummand);
        }
        let degs = self.column_degrees()?;
        let d = self.degree();
        let mut coeffs = vec![Mat::zeros(&self.field, self.n, self.k); d + 1];
        for (j, &dj) in degs.iter().enumerate() {
            for t in 0..=dj {
                for i in 0..self.n {
                    coeffs[dj - t].set(i, j, self.coeffs[t].get(i, j));
                }
            }
        }
        PolyMat::new(&self.field, self.n, self.k, coeffs)
    }

    pub fn scale(&self, e: Elem) -> PolyMat {
        let coeffs = self.coeffs.iter().map(|c| c.scale(e)).collect();
        let mut g = PolyMat { coeffs, ..self.clone() };
        g.trim();
        g
    }

    /// Multiplication by `s^d`.
    pub fn shift(&self, d: usize) -> PolyMat {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Mat::zeros(&self.field, self.n, self.k); d];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyMat { coeffs, ..self.clone() }
    }

    /// For a minimal `G`, finds polynomial `a` with `G a = v`, or `None` when
    /// `v` is not in the column space over `F[s]`.
    ///
    /// By the predictable-degree property any solution has
    /// `deg a_j <= deg v - delta_j`, so one linear solve decides membership.
    pub fn solve_combination(&self, v: &PolyMat) -> Result<Option<PolyMat>> {
        if self.field != v.field {
            return Err(Error::FieldMismatch);
        }
        if v.n != self.n || v.k != 1 {
            return Err(Error::DimensionMismatch { expected: (self.n, 1), found: (v.n, v.k) });
        }
        if !self.is_minimal() {
            return Err(Error::NotMinimal);
        }
        let f = &self.field;
        if v.is_zero() {
            return Ok(Some(PolyMat::zero(f, self.k, 1)));
        }
        let dv = v.degree();
        let degs = self.column_degrees()?;
        // unknowns: coefficients a_{j,t} for t = 0..=dv - delta_j
        let mut unknowns = Vec::new();
        for (j, &dj) in degs.iter().enumerate() {
            if dj <= dv {
                for t in 0..=dv - dj {
                    unknowns.push((j, t));
                }
            }
        }
        let eqs = (dv + 1) * self.n;
        let mut sys = Mat::zeros(f, eqs, unknowns.len());
        for (col, &(j, t)) in unknowns.iter().enumerate() {
            for (e, g) in self.coeffs.iter().enumerate() {
                if t + e > dv {
                    break;
                }
                for i in 0..self.n {
                    sys.set((t + e) * self.n + i, col, g.get(i, j));
                }
            }
        }
        let mut rhs = Mat::zeros(f, eqs, 1);
        for (t, c) in v.coeffs.iter().enumerate() {
            for i in 0..self.n {
                rhs.set(t * self.n + i, 0, c.get(i, 0));
            }
        }
        let Some(x) = sys.solve_right(&rhs)? else {
            return Ok(None);
        };
        let mut coeffs = vec![Mat::zeros(f, self.k, 1); dv + 1];
        for (col, &(j, t)) in unknowns.iter().enumerate() {
            coeffs[t].set(j, 0, x.get(col, 0));
        }
        Ok(Some(PolyMat::new(f, self.k, 1, coeffs)?))
    }
}

/// Determinant of a square grid of polynomials by cofactor expansion.
pub(crate) fn poly_det(f: &Field, grid: &[Vec<Poly>]) -> Poly {
    let n = grid.len();
    match n {
        0 => return Poly::one(),
        1 => return grid[0][0].clone(),
        _ => {}
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if grid[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = grid[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = grid[0][j].mul(f, &poly_det(f, &minor));
        acc = if j % 2 == 0 { acc.add(f, &term) } else { acc.sub(f, &term) };
    }
    acc
}

/// Advances `idx` to the next strictly increasing selection from `0..n`.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let l = idx.len();
    for i in (0..l).rev() {
        if idx[i] < n - l + i {
            idx[i] += 1;
            for t in i + 1..l {
                idx[t] = idx[t - 1] + 1;
            }
            return true;
        }
    }
    false
}
