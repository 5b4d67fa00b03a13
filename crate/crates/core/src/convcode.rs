//! Convolutional codes: parameters, generator-matrix codes and exhaustive
//! distance oracles.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matrix::Mat;
use crate::polymat::PolyMat;

/// `(n, k, delta)` with the derived constants used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    /// `floor(delta/k) + floor(delta/(n-k))`
    pub l: usize,
    /// `floor(delta/k) + ceil(delta/(n-k))`
    pub m: usize,
    /// `delta mod (n-k)`
    pub r: usize,
    /// `delta mod k`
    pub r_prime: usize,
    /// Generalized Singleton bound.
    pub singleton: usize,
}

impl CodeParams {
    pub fn new(n: usize, k: usize, delta: usize) -> Result<CodeParams> {
        if k == 0 || k >= n {
            return Err(Error::InvalidParams(format!("need 0 < k < n, got n={n} k={k}")));
        }
        let nk = n - k;
        Ok(CodeParams {
            n,
            k,
            delta,
            l: delta / k + delta / nk,
            m: delta / k + delta.div_ceil(nk),
            r: delta % nk,
            r_prime: delta % k,
            singleton: nk * (delta / k + 1) + delta + 1,
        })
    }

    /// `n - k`.
    pub fn p(&self) -> usize {
        self.n - self.k
    }

    /// Upper bound `(n-k)(j+1)+1` on the `j`th column distance.
    pub fn col_bound(&self, j: usize) -> usize {
        self.p() * (j + 1) + 1
    }

    /// `ceil(M k / n)`.
    pub fn xbar(&self) -> usize {
        (self.m * self.k).div_ceil(self.n)
    }
}

/// Enumeration limits for the exhaustive oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Cap on enumerated message prefixes or graph edges.
    pub messages: u128,
    /// Cap on state-graph vertices.
    pub states: u128,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { messages: 1 << 26, states: 1 << 20 }
    }
}

impl Budget {
    pub fn check_messages(&self, cost: u128) -> Result<()> {
        if cost > self.messages {
            return Err(Error::Infeasible { cost, budget: self.messages });
        }
        Ok(())
    }

    pub fn check_states(&self, states: u128, edges: u128) -> Result<()> {
        if states > self.states {
            return Err(Error::Infeasible { cost: states, budget: self.states });
        }
        self.check_messages(edges)
    }
}

/// `q^e`, saturating.
pub fn pow_cost(q: u32, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

/// Hamming weight of a polynomial vector: nonzero entries summed over all
/// coefficients.
pub fn weight(v: &PolyMat) -> usize {
    v.weight()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCode {
    params: CodeParams,
    g: PolyMat,
}

impl ConvCode {
    /// Wraps a minimal generator matrix of a direct summand.
    pub fn new(g: PolyMat) -> Result<ConvCode> {
        let (n, k) = (g.rows(), g.cols());
        if !g.is_minimal() {
            g.code_degree()?;
            return Err(Error::NotMinimal);
        }
        if !g.minors_gcd_is_unit()? {
            return Err(Error::NotSummand);
        }
        let delta: usize = g.column_degrees()?.iter().sum();
        let cd = g.code_degree()?;
        if cd != delta {
            return Err(Error::Internal(format!("code degree {cd} != column degree sum {delta}")));
        }
        Ok(ConvCode { params: CodeParams::new(n, k, delta)?, g })
    }

    /// As [`ConvCode::new`], additionally requiring the stated parameters.
    pub fn with_params(params: CodeParams, g: PolyMat) -> Result<ConvCode> {
        if (g.rows(), g.cols()) != (params.n, params.k) {
            return Err(Error::DimensionMismatch {
                expected: (params.n, params.k),
                found: (g.rows(), g.cols()),
            });
        }
        let c = ConvCode::new(g)?;
        if c.params.delta != params.delta {
            return Err(Error::DegreeMismatch { expected: params.delta, found: c.params.delta });
        }
        Ok(c)
    }

    /// Rejection-samples a code with the given column degrees.
    pub fn random<R: RngCore>(
        field: &Field,
        n: usize,
        k: usize,
        col_degrees: &[usize],
        rng: &mut R,
        tries: usize,
    ) -> Result<ConvCode> {
        if col_degrees.len() != k {
            return Err(Error::InvalidParams(format!("{} column degrees for k={k}", col_degrees.len())));
        }
        let d = col_degrees.iter().copied().max().unwrap_or(0);
        for _ in 0..tries {
            let mut coeffs = vec![Mat::zeros(field, n, k); d + 1];
            for (j, &dj) in col_degrees.iter().enumerate() {
                for c in coeffs.iter_mut().take(dj + 1) {
                    for i in 0..n {
                        c.set(i, j, field.random(rng));
                    }
                }
            }
            let g = PolyMat::new(field, n, k, coeffs)?;
            if g.column_degrees().ok().as_deref() != Some(col_degrees) {
                continue;
            }
            if let Ok(c) = ConvCode::new(g) {
                return Ok(c);
            }
        }
        Err(Error::FieldTooSmall { retries: tries })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn generator(&self) -> &PolyMat {
        &self.g
    }

    pub fn field(&self) -> &Field {
        self.g.field()
    }

    pub fn column_degrees(&self) -> Vec<usize> {
        self.g.column_degrees().expect("validated at construction")
    }

    pub fn encode(&self, u: &PolyMat) -> Result<PolyMat> {
        self.g.mul_vec(u)
    }

    /// Membership test for a polynomial vector.
    pub fn contains(&self, v: &PolyMat) -> Result<bool> {
        Ok(self.g.solve_combination(v)?.is_some())
    }

    /// True iff both generator matrices span the same module.
    pub fn same_code(&self, other: &ConvCode) -> Result<bool> {
        if self.params != other.params || self.field() != other.field() {
            return Ok(false);
        }
        for j in 0..self.params.k {
            if !self.contains(&other.g.column(j))? || !other.contains(&self.g.column(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn column_distance_cost(&self, j: usize) -> u128 {
        pow_cost(self.field().q(), (j + 1) * self.params.k)
    }

    /// Exact `j`th column distance by enumerating message prefixes.
    pub fn column_distance(&self, j: usize, budget: &Budget) -> Result<usize> {
        budget.check_messages(self.column_distance_cost(j))?;
        let f = self.field();
        let blocks: Vec<Mat> = (0..=j).map(|i| self.g.coeff(i)).collect();
        Ok(prefix_distance(f, &blocks, false, j))
    }

    pub fn column_distance_profile(&self, jmax: usize, budget: &Budget) -> Result<Vec<usize>> {
        budget.check_messages(self.column_distance_cost(jmax))?;
        (0..=jmax).map(|j| self.column_distance(j, budget)).collect()
    }

    /// Exact free distance by a shortest closed walk in the encoder state graph.
    pub fn free_distance(&self, budget: &Budget) -> Result<usize> {
        let f = self.field().clone();
        let q = f.q();
        let (n, k, delta) = (self.params.n, self.params.k, self.params.delta);
        budget.check_states(pow_cost(q, delta), pow_cost(q, delta + k))?;
        let degs = self.column_degrees();
        let mut offset = Vec::with_capacity(k);
        let mut acc = 0;
        for &d in &degs {
            offset.push(acc);
            acc += d;
        }
        // taps[j][i] = column j of G_i
        let taps: Vec<Vec<Vec<Elem>>> = (0..k)
            .map(|j| (0..=degs[j]).map(|i| self.g.coeff(i).col(j)).collect())
            .collect();
        let step = |state: &[Elem], u: &[Elem]| -> (Vec<Elem>, usize) {
            let mut v = vec![Elem::ZERO; n];
            for j in 0..k {
                for (i, tap) in taps[j].iter().enumerate() {
                    let x = if i == 0 { u[j] } else { state[offset[j] + i - 1] };
                    if x.is_zero() {
                        continue;
                    }
                    for (vr, &g) in v.iter_mut().zip(tap) {
                        *vr = f.add(*vr, f.mul(g, x));
                    }
                }
            }
            let mut next = vec![Elem::ZERO; delta];
            for j in 0..k {
                if degs[j] == 0 {
                    continue;
                }
                next[offset[j]] = u[j];
                for i in 1..degs[j] {
                    next[offset[j] + i] = state[offset[j] + i - 1];
                }
            }
            (next, v.iter().filter(|e| !e.is_zero()).count())
        };
        min_closed_walk(&f, delta, k, self.params.singleton + 1, step).ok_or_else(|| {
            Error::Internal(format!("free distance exceeds {}", self.params.singleton))
        })
    }

    pub fn is_mdp(&self, budget: &Budget) -> Result<bool> {
        let l = self.params.l;
        Ok(self.column_distance(l, budget)? == self.params.col_bound(l))
    }

    pub fn is_mds(&self, budget: &Budget) -> Result<bool> {
        Ok(self.free_distance(budget)? == self.params.singleton)
    }

    pub fn is_smds(&self, budget: &Budget) -> Result<bool> {
        Ok(self.column_distance(self.params.m, budget)? == self.params.singleton)
    }
}

/// Every vector of `F^len` in enumeration order (coordinate 0 varies fastest).
pub fn all_vectors(f: &Field, len: usize) -> Vec<Vec<Elem>> {
    let q = f.q() as usize;
    let total = q.checked_pow(len as u32).expect("vector space too large");
    (0..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let e = Elem::from_index((idx % q) as u32);
                    idx /= q;
                    e
                })
                .collect()
        })
        .collect()
}

/// Nonzero vectors whose first nonzero coordinate is one.
pub fn normalized_vectors(f: &Field, len: usize) -> Vec<Vec<Elem>> {
    all_vectors(f, len)
        .into_iter()
        .filter(|v| v.iter().find(|e| !e.is_zero()) == Some(&Elem::ONE))
        .collect()
}

fn wt(v: &[Elem]) -> usize {
    v.iter().filter(|e| !e.is_zero()).count()
}

/// Minimum over `u_0 != 0, u_1, .., u_j` of `sum_t wt(sum_i H_i u_{t-i})`,
/// plus `wt(u_t)` when `with_inputs`. Scaling `u` by a unit preserves the
/// weight, so `u_0` ranges over normalized vectors only.
pub(crate) fn prefix_distance(f: &Field, blocks: &[Mat], with_inputs: bool, j: usize) -> usize {
    let k = blocks[0].cols();
    let rows = blocks[0].rows();
    let all = all_vectors(f, k);
    let first: Vec<usize> = (0..all.len())
        .filter(|&i| all[i].iter().find(|e| !e.is_zero()) == Some(&Elem::ONE))
        .collect();
    // images[i][u] = H_i * u
    let images: Vec<Vec<Vec<Elem>>> =
        blocks.iter().map(|h| all.iter().map(|u| h.mul_vec(u)).collect()).collect();
    let input_wt: Vec<usize> = all.iter().map(|u| wt(u)).collect();
    let trivial = (j + 1) * (rows + if with_inputs { k } else { 0 }) + 1;

    struct Search<'a> {
        f: &'a Field,
        images: &'a [Vec<Vec<Elem>>],
        input_wt: &'a [usize],
        with_inputs: bool,
        j: usize,
        hist: Vec<usize>,
        best: usize,
    }

    impl Search<'_> {
        fn go(&mut self, t: usize, acc: usize, choices: &[usize], all: &[usize]) {
            for &u in choices {
                let mut v = self.images[0][u].clone();
                for i in 1..=t.min(self.images.len() - 1) {
                    let past = self.hist[t - i];
                    for (a, &b) in v.iter_mut().zip(&self.images[i][past]) {
                        *a = self.f.add(*a, b);
                    }
                }
                let mut w = acc + wt(&v);
                if self.with_inputs {
                    w += self.input_wt[u];
                }
                if w >= self.best {
                    continue;
                }
                if t == self.j {
                    self.best = w;
                    continue;
                }
                self.hist.push(u);
                self.go(t + 1, w, all, all);
                self.hist.pop();
            }
        }
    }

    let everything: Vec<usize> = (0..all.len()).collect();
    let mut s = Search {
        f,
        images: &images,
        input_wt: &input_wt,
        with_inputs,
        j,
        hist: Vec::with_capacity(j + 1),
        best: trivial,
    };
    s.go(0, 0, &first, &everything);
    s.best
}

/// Shortest nonempty closed walk at the zero state of a graph on `F^dim`
/// whose first edge carries a nonzero input. Walks of weight `>= cap` are
/// discarded; `None` means nothing lighter than `cap` exists.
pub(crate) fn min_closed_walk<S>(f: &Field, dim: usize, k: usize, cap: usize, step: S) -> Option<usize>
where
    S: Fn(&[Elem], &[Elem]) -> (Vec<Elem>, usize),
{
    let q = f.q() as usize;
    let nstates = q.pow(dim as u32);
    let encode = |x: &[Elem]| x.iter().rev().fold(0usize, |acc, e| acc * q + e.index() as usize);
    let decode = |mut idx: usize| -> Vec<Elem> {
        (0..dim)
            .map(|_| {
                let e = Elem::from_index((idx % q) as u32);
                idx /= q;
                e
            })
            .collect()
    };
    let inputs = all_vectors(f, k);
    let zero = vec![Elem::ZERO; dim];
    let mut dist = vec![usize::MAX; nstates];
    let mut heap = BinaryHeap::new();
    let mut best = cap;
    for u in normalized_vectors(f, k) {
        let (next, w) = step(&zero, &u);
        let idx = encode(&next);
        if idx == 0 {
            best = best.min(w);
        } else if w < dist[idx] && w < best {
            dist[idx] = w;
            heap.push(Reverse((w, idx)));
        }
    }
    while let Some(Reverse((d, idx))) = heap.pop() {
        if d >= best {
            break;
        }
        if d > dist[idx] {
            continue;
        }
        let x = decode(idx);
        for u in &inputs {
            let (next, w) = step(&x, u);
            let nd = d + w;
            if nd >= best {
                continue;
            }
            let ni = encode(&next);
            if ni == 0 {
                best = nd;
            } else if nd < dist[ni] {
                dist[ni] = nd;
                heap.push(Reverse((nd, ni)));
            }
        }
    }
    (best < cap).then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pm(f: &Field, n: usize, k: usize, entries: &[&[i64]]) -> PolyMat {
        let ps: Vec<Poly> = entries
            .iter()
            .map(|e| Poly::from_coeffs(e.iter().map(|&x| f.from_int(x)).collect()))
            .collect();
        PolyMat::from_entries(f, n, k, &ps).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = CodeParams::new(3, 1, 1).unwrap();
        assert_eq!((p.l, p.m, p.r, p.r_prime, p.singleton, p.col_bound(1)), (1, 2, 1, 0, 6, 5));
        let p = CodeParams::new(2, 1, 2).unwrap();
        assert_eq!((p.l, p.m, p.r, p.singleton), (4, 4, 0, 6));
        let p = CodeParams::new(5, 2, 0).unwrap();
        assert_eq!((p.l, p.m, p.r, p.singleton), (0, 0, 0, 4));
        let p = CodeParams::new(4, 2, 1).unwrap();
        assert_eq!((p.l, p.m, p.r, p.r_prime, p.xbar()), (0, 1, 1, 1, 1));
        let p = CodeParams::new(4, 1, 2).unwrap();
        assert_eq!((p.l, p.m, p.r, p.r_prime, p.singleton), (2, 3, 2, 0, 12));
        assert!(CodeParams::new(2, 2, 1).is_err());
        assert!(CodeParams::new(2, 0, 1).is_err());
    }

    #[test]
    fn params_invariants_small_grid() {
        for n in 2..8 {
            for k in 1..n {
                for d in 0..12 {
                    let p = CodeParams::new(n, k, d).unwrap();
                    assert!(p.r < n - k && p.r_prime < k);
                    assert_eq!(p.r == 0, p.l == p.m);
                    if p.r != 0 {
                        assert_eq!(p.m, p.l + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn weight_examples() {
        let f = Field::prime(3).unwrap();
        assert_eq!(weight(&PolyMat::zero(&f, 3, 1)), 0);
        assert_eq!(weight(&pm(&f, 3, 1, &[&[], &[1], &[]])), 1);
        assert_eq!(weight(&pm(&f, 2, 1, &[&[1], &[0, 1]])), 2);
    }

    #[test]
    fn construction_checks() {
        let f = Field::prime(2).unwrap();
        assert_eq!(ConvCode::new(pm(&f, 2, 1, &[&[0, 1], &[0, 0, 1]])), Err(Error::NotSummand));
        let nonmin = pm(&f, 2, 2, &[&[0, 1], &[1, 1], &[0, 1], &[0, 1]]);
        assert_eq!(ConvCode::new(nonmin), Err(Error::NotMinimal));
        let c = ConvCode::new(pm(&f, 2, 1, &[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(c.params().delta, 1);
        let p = CodeParams::new(2, 1, 2).unwrap();
        assert!(matches!(ConvCode::with_params(p, c.generator().clone()), Err(Error::DegreeMismatch { .. })));
    }

    /// Reference implementation: enumerate every prefix and take the minimum.
    fn naive_column_distance(c: &ConvCode, j: usize) -> usize {
        let f = c.field();
        let k = c.params().k;
        let msgs = all_vectors(f, (j + 1) * k);
        let mut best = usize::MAX;
        for m in msgs {
            if m[..k].iter().all(|e| e.is_zero()) {
                continue;
            }
            let vs: Vec<Vec<Elem>> = m.chunks(k).map(|ch| ch.to_vec()).collect();
            let u = PolyMat::from_vectors(f, k, &vs).unwrap();
            let v = c.encode(&u).unwrap().truncate(j);
            best = best.min(v.weight());
        }
        best
    }

    /// Reference free distance: minimum weight over all messages of degree
    /// below `horizon` with `u_0 != 0`.
    fn naive_free_distance(c: &ConvCode, horizon: usize) -> usize {
        let f = c.field();
        let k = c.params().k;
        let mut best = usize::MAX;
        for m in all_vectors(f, horizon * k) {
            if m[..k].iter().all(|e| e.is_zero()) {
                continue;
            }
            let vs: Vec<Vec<Elem>> = m.chunks(k).map(|ch| ch.to_vec()).collect();
            let u = PolyMat::from_vectors(f, k, &vs).unwrap();
            best = best.min(c.encode(&u).unwrap().weight());
        }
        best
    }

    #[test]
    fn distances_match_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let budget = Budget::default();
        for (p, n, k, degs) in [(2, 3, 1, vec![1]), (3, 3, 1, vec![1]), (2, 3, 2, vec![1, 1]), (2, 2, 1, vec![2])] {
            let f = Field::prime(p).unwrap();
            for _ in 0..6 {
                let c = ConvCode::random(&f, n, k, &degs, &mut rng, 100).unwrap();
                for j in 0..3 {
                    assert_eq!(c.column_distance(j, &budget).unwrap(), naive_column_distance(&c, j));
                }
                assert_eq!(c.free_distance(&budget).unwrap(), naive_free_distance(&c, 5));
            }
        }
    }

    #[test]
    fn block_code_free_distance_is_first_column_distance() {
        let f = Field::prime(5).unwrap();
        let g = PolyMat::constant(&Mat::from_ints(&f, 3, 1, &[1, 2, 3]));
        let c = ConvCode::new(g).unwrap();
        let b = Budget::default();
        assert_eq!(c.column_distance(0, &b).unwrap(), 3);
        assert_eq!(c.free_distance(&b).unwrap(), 3);
        assert!(c.is_mdp(&b).unwrap() && c.is_mds(&b).unwrap() && c.is_smds(&b).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let f = Field::new(2, 8).unwrap();
        let g = pm(&f, 2, 1, &[&[1, 1], &[1]]);
        let c = ConvCode::new(g).unwrap();
        let tiny = Budget { messages: 1000, states: 10 };
        assert!(matches!(c.column_distance(3, &tiny), Err(Error::Infeasible { .. })));
        assert!(matches!(c.free_distance(&tiny), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn membership_and_same_code() {
        let f = Field::prime(3).unwrap();
        let c = ConvCode::new(pm(&f, 3, 1, &[&[1, 1], &[1, 2], &[2]])).unwrap();
        let u = pm(&f, 1, 1, &[&[2, 1, 1]]);
        let v = c.encode(&u).unwrap();
        assert!(c.contains(&v).unwrap());
        assert!(!c.contains(&pm(&f, 3, 1, &[&[1], &[], &[]])).unwrap());
        let scaled = ConvCode::new(c.generator().scale(f.from_int(2))).unwrap();
        assert!(c.same_code(&scaled).unwrap());
    }
}
