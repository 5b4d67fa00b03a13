//! Block lower-triangular Toeplitz matrices `T_j`, trivial rank deficiency,
//! and exhaustive MDP / sMDS certification.
//!
//! Row and column indices of [`SubmatrixIndex`] are 1-based, matching the
//! usual notation for `T_j`. Block size is `(n-k) x k`; entry `(i, j)` of
//! `T_j` is structurally zero iff `j > ceil(i/(n-k)) k`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use crate::convcode::CodeParams;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matrix::{rank_in_place, Mat};
use crate::polymat::next_combination;

/// `T_j` built from `F_0..F_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Toeplitz {
    blocks: Vec<Mat>,
    dense: Mat,
}

impl Toeplitz {
    pub fn new(blocks: &[Mat]) -> Result<Toeplitz> {
        let first = blocks.first().ok_or_else(|| Error::InvalidParams("no blocks".into()))?;
        let (p, k) = first.dims();
        for b in blocks {
            if b.field() != first.field() {
                return Err(Error::FieldMismatch);
            }
            if b.dims() != (p, k) {
                return Err(Error::DimensionMismatch { expected: (p, k), found: b.dims() });
            }
        }
        let nb = blocks.len();
        let mut dense = Mat::zeros(first.field(), nb * p, nb * k);
        for s in 0..nb {
            for t in 0..=s {
                dense.put(s * p, t * k, &blocks[s - t]);
            }
        }
        Ok(Toeplitz { blocks: blocks.to_vec(), dense })
    }

    pub fn j(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    pub fn dense(&self) -> &Mat {
        &self.dense
    }

    /// The selected submatrix.
    pub fn submatrix(&self, idx: &SubmatrixIndex) -> Result<Mat> {
        let rows: Vec<usize> = idx.rows.iter().map(|&i| i.wrapping_sub(1)).collect();
        let cols: Vec<usize> = idx.cols.iter().map(|&j| j.wrapping_sub(1)).collect();
        self.dense.submatrix(&rows, &cols)
    }
}

/// Rows `i_1 < .. < i_{l+c}` and columns `j_1 < .. < j_l`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubmatrixIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub c: usize,
}

impl SubmatrixIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<SubmatrixIndex> {
        if cols.is_empty() || rows.len() < cols.len() {
            return Err(Error::BadIndex(format!("{} rows for {} columns", rows.len(), cols.len())));
        }
        for sel in [&rows, &cols] {
            if sel[0] == 0 || sel.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::BadIndex("indices must be 1-based and strictly increasing".into()));
            }
        }
        let c = rows.len() - cols.len();
        Ok(SubmatrixIndex { rows, cols, c })
    }

    pub fn l(&self) -> usize {
        self.cols.len()
    }

    /// Checks the index fits `T_j` for `params` and `c <= n-k-1`.
    pub fn check(&self, params: &CodeParams, j: usize) -> Result<()> {
        let (p, k) = (params.p(), params.k);
        if self.c >= p {
            return Err(Error::BadIndex(format!("surplus {} exceeds n-k-1 = {}", self.c, p - 1)));
        }
        if *self.rows.last().expect("nonempty") > (j + 1) * p || *self.cols.last().expect("nonempty") > (j + 1) * k {
            return Err(Error::BadIndex(format!("index outside T_{j}")));
        }
        Ok(())
    }

    /// Square index on rows `i_{1+c}..i_{l+c}`.
    pub fn bottom_square(&self) -> SubmatrixIndex {
        SubmatrixIndex { rows: self.rows[self.c..].to_vec(), cols: self.cols.clone(), c: 0 }
    }
}

/// Largest column that can be nonzero in row `i` (1-based).
fn col_limit(params: &CodeParams, i: usize) -> usize {
    i.div_ceil(params.p()) * params.k
}

pub fn is_structural_zero(params: &CodeParams, i: usize, j: usize) -> bool {
    j > col_limit(params, i)
}

/// Trivially rank deficient: `j_t > ceil(i_{t+c}/(n-k)) k` for some `t`.
pub fn is_trd(idx: &SubmatrixIndex, params: &CodeParams) -> bool {
    idx.cols.iter().enumerate().any(|(t, &j)| j > col_limit(params, idx.rows[t + idx.c]))
}

/// Indeterminate (1-based) at entry `(i, j)` of `T_j`, or `None` for a
/// structural zero. Repeated Toeplitz blocks share indeterminates.
pub fn indeterminate(params: &CodeParams, i: usize, j: usize) -> Option<usize> {
    let (p, k) = (params.p(), params.k);
    let (bi, bj) = ((i - 1) / p, (j - 1) / k);
    if bj > bi {
        return None;
    }
    let (s, t) = ((i - 1) % p + 1, (j - 1) % k + 1);
    Some((bi - bj) * p * k + (s - 1) * k + t)
}

/// Decides whether the selected submatrix is rank deficient for every
/// assignment of its indeterminates, by evaluating at `trials` random points
/// of `big`. One-sided: "not identically deficient" answers are certain.
pub fn symbolic_zero_oracle<R: RngCore>(
    idx: &SubmatrixIndex,
    params: &CodeParams,
    trials: usize,
    big: &Field,
    rng: &mut R,
) -> bool {
    let count = idx.rows.last().map_or(0, |&i| i.div_ceil(params.p())) * params.p() * params.k;
    let (h, w) = (idx.rows.len(), idx.l());
    let mut buf = vec![Elem::ZERO; h * w];
    for _ in 0..trials {
        let values: Vec<Elem> = (0..=count).map(|_| big.random(rng)).collect();
        for (a, &i) in idx.rows.iter().enumerate() {
            for (b, &j) in idx.cols.iter().enumerate() {
                buf[a * w + b] = indeterminate(params, i, j).map_or(Elem::ZERO, |x| values[x]);
            }
        }
        if rank_in_place(big, &mut buf, h, w) == w {
            return false;
        }
    }
    true
}

/// Largest `l` for surplus `c` with `rows` rows and `cols` columns available.
fn l_max(rows: usize, cols: usize, c: usize) -> usize {
    rows.saturating_sub(c).min(cols)
}

/// Every `(l+c) x l` index of `T_j`: `l` ascending, then rows, then columns,
/// each in lexicographic order.
pub struct SubmatrixIter {
    nrows: usize,
    ncols: usize,
    c: usize,
    l: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    done: bool,
}

impl SubmatrixIter {
    fn start(&mut self, l: usize) {
        self.l = l;
        if l == 0 || l > l_max(self.nrows, self.ncols, self.c) {
            self.done = true;
            return;
        }
        self.rows = (0..l + self.c).collect();
        self.cols = (0..l).collect();
    }
}

impl Iterator for SubmatrixIter {
    type Item = SubmatrixIndex;

    fn next(&mut self) -> Option<SubmatrixIndex> {
        if self.done {
            return None;
        }
        let item = SubmatrixIndex {
            rows: self.rows.iter().map(|i| i + 1).collect(),
            cols: self.cols.iter().map(|j| j + 1).collect(),
            c: self.c,
        };
        if !next_combination(&mut self.cols, self.ncols) {
            if next_combination(&mut self.rows, self.nrows) {
                self.cols = (0..self.l).collect();
            } else {
                self.start(self.l + 1);
            }
        }
        Some(item)
    }
}

pub fn enumerate_submatrices(params: &CodeParams, j: usize, c: usize) -> SubmatrixIter {
    let mut it = SubmatrixIter {
        nrows: (j + 1) * params.p(),
        ncols: (j + 1) * params.k,
        c,
        l: 0,
        rows: Vec::new(),
        cols: Vec::new(),
        done: false,
    };
    it.start(1);
    it
}

fn binom(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of `(l+c) x l` indices with rows in `1..=nrows` and columns in
/// `1..=ncols`, over all admissible `l`.
pub fn count_all(nrows: usize, ncols: usize, c: usize) -> u128 {
    (1..=l_max(nrows, ncols, c)).map(|l| binom(nrows, l + c) * binom(ncols, l)).sum()
}

/// Number of indices that are not trivially rank deficient, by dynamic
/// programming over `(i_{t+c}, j_t)` pairs.
pub fn count_non_trd(params: &CodeParams, nrows: usize, ncols: usize, c: usize) -> u128 {
    let lm = l_max(nrows, ncols, c);
    if lm == 0 {
        return 0;
    }
    let (r, w) = (nrows, ncols);
    let limit: Vec<usize> = (1..=r).map(|i| col_limit(params, i).min(w)).collect();
    // dp[i][j]: ways with current pair at (row i+1, col j+1)
    let mut dp = vec![vec![0u128; w]; r];
    for (i, row) in dp.iter_mut().enumerate() {
        row[..limit[i]].fill(binom(i, c));
    }
    let mut total: u128 = dp.iter().flatten().sum();
    for _ in 2..=lm {
        // pre[i][j] = sum of dp over rows < i and cols < j
        let mut pre = vec![vec![0u128; w + 1]; r + 1];
        for i in 0..r {
            for j in 0..w {
                pre[i + 1][j + 1] = dp[i][j] + pre[i][j + 1] + pre[i + 1][j] - pre[i][j];
            }
        }
        let mut next = vec![vec![0u128; w]; r];
        for i in 0..r {
            for j in 0..limit[i] {
                next[i][j] = pre[i][j];
            }
        }
        dp = next;
        total += dp.iter().flatten().sum::<u128>();
    }
    total
}

/// Calls `visit(rows, cols)` (1-based) for every non-trivially-rank-deficient
/// index in enumeration order, stopping when `visit` returns `false`.
pub fn for_each_non_trd<V>(params: &CodeParams, nrows: usize, ncols: usize, c: usize, mut visit: V)
where
    V: FnMut(&[usize], &[usize]) -> bool,
{
    fn cols_rec<V: FnMut(&[usize], &[usize]) -> bool>(
        limits: &[usize],
        ncols: usize,
        rows: &[usize],
        cols: &mut Vec<usize>,
        visit: &mut V,
    ) -> bool {
        let t = cols.len();
        let l = limits.len();
        if t == l {
            return visit(rows, cols);
        }
        let lo = cols.last().map_or(1, |&x| x + 1);
        let hi = limits[t].min(ncols - (l - t - 1));
        for j in lo..=hi {
            cols.push(j);
            let go_on = cols_rec(limits, ncols, rows, cols, visit);
            cols.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    for l in 1..=l_max(nrows, ncols, c) {
        let mut rows0: Vec<usize> = (0..l + c).collect();
        let mut cols = Vec::with_capacity(l);
        loop {
            let rows: Vec<usize> = rows0.iter().map(|i| i + 1).collect();
            let limits: Vec<usize> = (0..l).map(|t| col_limit(params, rows[t + c])).collect();
            if limits.iter().enumerate().all(|(t, &b)| b > t)
                && !cols_rec(&limits, ncols, &rows, &mut cols, &mut visit)
            {
                return;
            }
            if !next_combination(&mut rows0, nrows) {
                break;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Mdp,
    Smds,
}

/// Configuration for certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertOptions {
    /// Refuse when more than this many non-trivially-deficient indices exist.
    pub ceiling: u128,
}

impl Default for CertOptions {
    fn default() -> CertOptions {
        CertOptions { ceiling: 10_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub property: Property,
    pub holds: bool,
    /// First failing index in enumeration order.
    pub witness: Option<SubmatrixIndex>,
    /// Rank checks performed.
    pub scanned: u128,
    /// Indices skipped as trivially rank deficient.
    pub pruned: u128,
}

/// Checks every non-TRD `(l+c) x l` index of the top `nrows` rows of `T`
/// for full column rank.
pub(crate) fn scan_full_rank(
    t: &Toeplitz,
    params: &CodeParams,
    nrows: usize,
    c: usize,
    property: Property,
    opts: &CertOptions,
) -> Result<Certificate> {
    let ncols = t.dense.cols();
    let todo = count_non_trd(params, nrows, ncols, c);
    if todo > opts.ceiling {
        return Err(Error::Infeasible { cost: todo, budget: opts.ceiling });
    }
    let f = t.dense.field();
    let mut scanned: u128 = 0;
    let mut witness = None;
    let mut buf = Vec::new();
    for_each_non_trd(params, nrows, ncols, c, |rows, cols| {
        scanned += 1;
        buf.clear();
        for &i in rows {
            let row = t.dense.row(i - 1);
            buf.extend(cols.iter().map(|&j| row[j - 1]));
        }
        if rank_in_place(f, &mut buf, rows.len(), cols.len()) < cols.len() {
            witness = Some(SubmatrixIndex { rows: rows.to_vec(), cols: cols.to_vec(), c });
            return false;
        }
        true
    });
    Ok(Certificate {
        property,
        holds: witness.is_none(),
        witness,
        scanned,
        pruned: count_all(nrows, ncols, c) - todo,
    })
}

fn check_blocks(blocks: &[Mat], params: &CodeParams, want: usize) -> Result<Toeplitz> {
    if blocks.len() != want {
        return Err(Error::InvalidParams(format!("expected {want} blocks, got {}", blocks.len())));
    }
    let t = Toeplitz::new(blocks)?;
    let dims = blocks[0].dims();
    if dims != (params.p(), params.k) {
        return Err(Error::DimensionMismatch { expected: (params.p(), params.k), found: dims });
    }
    Ok(t)
}

/// Every non-TRD square submatrix of `T_L` has full rank.
pub fn certify_mdp(blocks: &[Mat], params: &CodeParams, opts: &CertOptions) -> Result<Certificate> {
    let t = check_blocks(blocks, params, params.l + 1)?;
    scan_full_rank(&t, params, t.dense.rows(), 0, Property::Mdp, opts)
}

/// Every non-TRD `(l + n-k-r) x l` submatrix of `T_M` has full column rank.
/// When `r = 0` this is the MDP condition on the same blocks.
pub fn certify_smds(blocks: &[Mat], params: &CodeParams, opts: &CertOptions) -> Result<Certificate> {
    let t = check_blocks(blocks, params, params.m + 1)?;
    let c = if params.r == 0 { 0 } else { params.p() - params.r };
    scan_full_rank(&t, params, t.dense.rows(), c, Property::Smds, opts)
}
