//! Input-state-output systems `x' = Ax + Bu`, `y = Cx + Du` and the code
//! they represent.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use crate::convcode::{min_closed_walk, normalized_vectors, pow_cost, prefix_distance, all_vectors, Budget, CodeParams, ConvCode};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::matrix::Mat;
use crate::polymat::PolyMat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    a: Mat,
    b: Mat,
    c: Mat,
    d: Mat,
    params: CodeParams,
}

/// Inputs, states and outputs of one run from the zero state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub inputs: Vec<Vec<Elem>>,
    /// `x_0..x_{d+1}`.
    pub states: Vec<Vec<Elem>>,
    pub outputs: Vec<Vec<Elem>>,
}

impl Trajectory {
    /// Starts and ends in the zero state.
    pub fn is_finite_weight(&self) -> bool {
        self.states.last().is_none_or(|x| x.iter().all(|e| e.is_zero()))
    }

    /// `sum_t (y_t, u_t) s^t` with outputs stacked above inputs.
    pub fn codeword(&self, f: &Field) -> Result<PolyMat> {
        let vs: Vec<Vec<Elem>> = self
            .outputs
            .iter()
            .zip(&self.inputs)
            .map(|(y, u)| y.iter().chain(u).copied().collect())
            .collect();
        let n = self.outputs.first().map_or(0, Vec::len) + self.inputs.first().map_or(0, Vec::len);
        PolyMat::from_vectors(f, n, &vs)
    }

    /// `wt(y) + wt(u)` over the whole run.
    pub fn weight(&self) -> usize {
        self.outputs.iter().chain(&self.inputs).flatten().filter(|e| !e.is_zero()).count()
    }
}

fn wt(v: &[Elem]) -> usize {
    v.iter().filter(|e| !e.is_zero()).count()
}

fn add_into(f: &Field, acc: &mut [Elem], v: &[Elem]) {
    for (a, &b) in acc.iter_mut().zip(v) {
        *a = f.add(*a, b);
    }
}

impl Realization {
    /// Checks `A: d x d`, `B: d x k`, `C: p x d`, `D: p x k` over one field.
    pub fn new(a: Mat, b: Mat, c: Mat, d: Mat) -> Result<Realization> {
        let f = d.field();
        for m in [&a, &b, &c] {
            if m.field() != f {
                return Err(Error::FieldMismatch);
            }
        }
        let (p, k) = d.dims();
        let delta = a.rows();
        let expect = [(&a, (delta, delta)), (&b, (delta, k)), (&c, (p, delta))];
        for (m, dims) in expect {
            if m.dims() != dims {
                return Err(Error::DimensionMismatch { expected: dims, found: m.dims() });
            }
        }
        let params = CodeParams::new(p + k, k, delta)?;
        Ok(Realization { a, b, c, d, params })
    }

    /// Uniform entries, rejected until reachable and observable.
    pub fn random_minimal<R: RngCore>(
        field: &Field,
        params: &CodeParams,
        rng: &mut R,
        tries: usize,
    ) -> Result<Realization> {
        let (dl, k, p) = (params.delta, params.k, params.p());
        let rand_mat = |rows: usize, cols: usize, rng: &mut R| {
            let data = (0..rows * cols).map(|_| field.random(rng)).collect();
            Mat::from_vec(field, rows, cols, data).expect("dims")
        };
        for _ in 0..tries {
            let a = rand_mat(dl, dl, rng);
            let b = rand_mat(dl, k, rng);
            let c = rand_mat(p, dl, rng);
            let d = rand_mat(p, k, rng);
            let r = Realization::new(a, b, c, d)?;
            if r.is_minimal() {
                return Ok(r);
            }
        }
        Err(Error::FieldTooSmall { retries: tries })
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn c(&self) -> &Mat {
        &self.c
    }

    pub fn d(&self) -> &Mat {
        &self.d
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn field(&self) -> &Field {
        self.d.field()
    }

    /// Returns a copy with one matrix replaced; used to build perturbations.
    pub fn with_matrices(&self, a: Mat, b: Mat, c: Mat, d: Mat) -> Result<Realization> {
        Realization::new(a, b, c, d)
    }

    pub fn is_reachable(&self) -> bool {
        is_reachable(&self.a, &self.b)
    }

    pub fn is_observable(&self) -> bool {
        is_observable(&self.a, &self.c)
    }

    pub fn is_minimal(&self) -> bool {
        self.is_reachable() && self.is_observable()
    }

    /// `F_0 = D`, `F_i = C A^{i-1} B`.
    pub fn markov(&self, count: usize) -> Vec<Mat> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(self.d.clone());
        let mut ab = self.b.clone();
        for _ in 1..count {
            out.push(self.c.mul(&ab).expect("dims"));
            ab = self.a.mul(&ab).expect("dims");
        }
        out
    }

    pub fn run(&self, inputs: &[Vec<Elem>]) -> Result<Trajectory> {
        let f = self.field();
        let k = self.params.k;
        let mut x = vec![Elem::ZERO; self.params.delta];
        let mut states = vec![x.clone()];
        let mut outputs = Vec::with_capacity(inputs.len());
        for u in inputs {
            if u.len() != k {
                return Err(Error::DimensionMismatch { expected: (k, 1), found: (u.len(), 1) });
            }
            for &e in u {
                f.check(e)?;
            }
            let mut y = self.c.mul_vec(&x);
            add_into(f, &mut y, &self.d.mul_vec(u));
            let mut nx = self.a.mul_vec(&x);
            add_into(f, &mut nx, &self.b.mul_vec(u));
            outputs.push(y);
            x = nx;
            states.push(x.clone());
        }
        Ok(Trajectory { inputs: inputs.to_vec(), states, outputs })
    }

    /// Appends at most `delta` inputs that steer the state reached after
    /// `prefix` back to zero; returns only the appended inputs.
    pub fn drive_to_zero(&self, prefix: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
        if !self.is_reachable() {
            return Err(Error::NotReachable);
        }
        let f = self.field();
        let (dl, k) = (self.params.delta, self.params.k);
        let x = self.run(prefix)?.states.pop().expect("x_0 always present");
        if x.iter().all(|e| e.is_zero()) {
            return Ok(Vec::new());
        }
        // A^e x + sum_i A^{e-1-i} B w_i = 0, smallest e first.
        let xcol = Mat::column(f, x);
        for e in 1..=dl {
            let mut blocks = Vec::with_capacity(e);
            let mut apow = Mat::identity(f, dl);
            for _ in 0..e {
                blocks.push(apow.mul(&self.b)?);
                apow = self.a.mul(&apow)?;
            }
            blocks.reverse();
            let ctrl = Mat::hstack(&blocks.iter().collect::<Vec<_>>())?;
            let rhs = apow.mul(&xcol)?.scale(f.neg(Elem::ONE));
            if let Some(w) = ctrl.solve_right(&rhs)? {
                return Ok((0..e).map(|i| w.col(0)[i * k..(i + 1) * k].to_vec()).collect());
            }
        }
        Err(Error::Internal("reachable pair failed to reach zero within delta steps".into()))
    }

    /// The represented code; its codewords are the finite-weight trajectories.
    pub fn code(&self) -> Result<ConvCode> {
        code_from_realization(self)
    }

    pub fn column_distance_cost(&self, j: usize) -> u128 {
        pow_cost(self.field().q(), (j + 1) * self.params.k)
    }

    /// Minimum of `sum_{t<=j} wt(y_t) + wt(u_t)` over runs with `u_0 != 0`,
    /// by simulating the state recursion.
    pub fn column_distance(&self, j: usize, budget: &Budget) -> Result<usize> {
        budget.check_messages(self.column_distance_cost(j))?;
        let f = self.field();
        let inputs = all_vectors(f, self.params.k);
        let first = normalized_vectors(f, self.params.k);
        let bu: Vec<Vec<Elem>> = inputs.iter().map(|u| self.b.mul_vec(u)).collect();
        let du: Vec<Vec<Elem>> = inputs.iter().map(|u| self.d.mul_vec(u)).collect();
        let first_idx: Vec<usize> = (0..inputs.len()).filter(|&i| first.contains(&inputs[i])).collect();
        let all_idx: Vec<usize> = (0..inputs.len()).collect();
        let uw: Vec<usize> = inputs.iter().map(|u| wt(u)).collect();
        let mut best = (j + 1) * self.params.n + 1;
        let zero = vec![Elem::ZERO; self.params.delta];
        self.dfs(f, &zero, 0, 0, j, &first_idx, &all_idx, &bu, &du, &uw, &mut best);
        Ok(best)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        f: &Field,
        x: &[Elem],
        t: usize,
        acc: usize,
        j: usize,
        choices: &[usize],
        all: &[usize],
        bu: &[Vec<Elem>],
        du: &[Vec<Elem>],
        uw: &[usize],
        best: &mut usize,
    ) {
        let cx = self.c.mul_vec(x);
        let ax = self.a.mul_vec(x);
        for &u in choices {
            let mut y = cx.clone();
            add_into(f, &mut y, &du[u]);
            let w = acc + wt(&y) + uw[u];
            if w >= *best {
                continue;
            }
            if t == j {
                *best = w;
                continue;
            }
            let mut nx = ax.clone();
            add_into(f, &mut nx, &bu[u]);
            self.dfs(f, &nx, t + 1, w, j, all, all, bu, du, uw, best);
        }
    }

    /// Minimum weight of a nonzero finite-weight trajectory.
    pub fn free_distance(&self, budget: &Budget) -> Result<usize> {
        let f = self.field().clone();
        let (dl, k) = (self.params.delta, self.params.k);
        budget.check_states(pow_cost(f.q(), dl), pow_cost(f.q(), dl + k))?;
        let step = |x: &[Elem], u: &[Elem]| -> (Vec<Elem>, usize) {
            let mut y = self.c.mul_vec(x);
            add_into(&f, &mut y, &self.d.mul_vec(u));
            let mut nx = self.a.mul_vec(x);
            add_into(&f, &mut nx, &self.b.mul_vec(u));
            (nx, wt(&y) + wt(u))
        };
        min_closed_walk(&f, dl, k, self.params.singleton + 1, step).ok_or_else(|| {
            Error::Internal(format!("free distance exceeds {}", self.params.singleton))
        })
    }
}

/// Column distance read off Markov blocks: `y = T_j u`, weight `wt(y)+wt(u)`.
pub fn markov_column_distance(blocks: &[Mat], j: usize, budget: &Budget) -> Result<usize> {
    let first = blocks.first().ok_or_else(|| Error::InvalidParams("no Markov blocks".into()))?;
    if blocks.len() <= j {
        return Err(Error::InvalidParams(format!("need {} blocks, have {}", j + 1, blocks.len())));
    }
    let f = first.field();
    budget.check_messages(pow_cost(f.q(), (j + 1) * first.cols()))?;
    Ok(prefix_distance(f, &blocks[..=j], true, j))
}

fn krylov(a: &Mat, b: &Mat) -> Mat {
    let dl = a.rows();
    let mut blocks = Vec::with_capacity(dl);
    let mut cur = b.clone();
    for _ in 0..dl {
        blocks.push(cur.clone());
        cur = a.mul(&cur).expect("dims");
    }
    if blocks.is_empty() {
        return Mat::zeros(a.field(), 0, b.cols());
    }
    Mat::hstack(&blocks.iter().collect::<Vec<_>>()).expect("dims")
}

/// `rank [B AB ... A^{d-1} B] = d`.
pub fn is_reachable(a: &Mat, b: &Mat) -> bool {
    a.rows() == 0 || krylov(a, b).rank() == a.rows()
}

/// `rank [C; CA; ...; CA^{d-1}] = d`.
pub fn is_observable(a: &Mat, c: &Mat) -> bool {
    a.rows() == 0 || krylov(&a.transpose(), &c.transpose()).rank() == a.rows()
}

/// Minimal polynomial basis of the kernel of
/// `P(s) = [sI - A, 0, -B; -C, I, -D]`, projected onto `(y, u)`, made
/// minimal and reversed.
pub fn code_from_realization(r: &Realization) -> Result<ConvCode> {
    if !r.is_minimal() {
        return Err(Error::NotMinimalRealization);
    }
    let f = r.field();
    let params = *r.params();
    let (dl, n, k, p) = (params.delta, params.n, params.k, params.p());
    let w = dl + n;
    let h = dl + p;
    let neg = |m: &Mat| m.scale(f.neg(Elem::ONE));
    let mut p0 = Mat::zeros(f, h, w);
    p0.put(0, 0, &neg(&r.a));
    p0.put(0, dl + p, &neg(&r.b));
    p0.put(dl, 0, &neg(&r.c));
    p0.put(dl, dl, &Mat::identity(f, p));
    p0.put(dl, dl + p, &neg(&r.d));
    let mut p1 = Mat::zeros(f, h, w);
    p1.put(0, 0, &Mat::identity(f, dl));

    let mut chosen: Vec<Vec<Vec<Elem>>> = Vec::new();
    let mut leads: Vec<Vec<Elem>> = Vec::new();
    for e in 0..=2 * dl {
        // coefficient of s^t in P(s) w(s) is P0 w_t + P1 w_{t-1}
        let mut sys = Mat::zeros(f, (e + 2) * h, (e + 1) * w);
        for t in 0..=e {
            sys.put(t * h, t * w, &p0);
            sys.put((t + 1) * h, t * w, &p1);
        }
        for v in sys.right_kernel() {
            let col = v.col(0);
            let lead = col[e * w..].to_vec();
            let mut trial = leads.clone();
            trial.push(lead.clone());
            let flat: Vec<Elem> = trial.iter().flatten().copied().collect();
            if Mat::from_vec(f, trial.len(), w, flat)?.rank() == trial.len() {
                leads.push(lead);
                chosen.push(col.chunks(w).map(<[Elem]>::to_vec).collect());
                if chosen.len() == k {
                    break;
                }
            }
        }
        if chosen.len() == k {
            break;
        }
    }
    if chosen.len() < k {
        return Err(Error::Internal(format!(
            "kernel basis reached {} of {k} vectors by degree {}",
            chosen.len(),
            2 * dl
        )));
    }
    let cols: Vec<PolyMat> = chosen
        .iter()
        .map(|vs| {
            let proj: Vec<Vec<Elem>> = vs.iter().map(|x| x[dl..].to_vec()).collect();
            PolyMat::from_vectors(f, n, &proj)
        })
        .collect::<Result<_>>()?;
    let gc = PolyMat::from_columns(f, n, &cols)?.minimalize()?;
    let code = ConvCode::new(gc.reverse()?)?;
    if code.params().delta != dl {
        return Err(Error::DegreeMismatch { expected: dl, found: code.params().delta });
    }
    Ok(code)
}
