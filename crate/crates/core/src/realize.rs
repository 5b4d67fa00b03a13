//! Hankel matrices of Markov parameters, the minimal partial realization
//! degree, completion of the last block `F_M`, and construction of a
//! minimal realization from `F_0..F_M`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use crate::convcode::{CodeParams, ConvCode};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lsys::Realization;
use crate::matrix::Mat;
use crate::toeplitz::{certify_smds, scan_full_rank, CertOptions, Property, Toeplitz};

/// Markov parameters `F_0..F_M`, each `(n-k) x k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovSeq {
    blocks: Vec<Mat>,
}

impl MarkovSeq {
    pub fn new(blocks: Vec<Mat>) -> Result<MarkovSeq> {
        let first = blocks.first().ok_or_else(|| Error::InvalidParams("empty Markov sequence".into()))?;
        for b in &blocks {
            if b.field() != first.field() {
                return Err(Error::FieldMismatch);
            }
            if b.dims() != first.dims() {
                return Err(Error::DimensionMismatch { expected: first.dims(), found: b.dims() });
            }
        }
        if first.rows() == 0 || first.cols() == 0 {
            return Err(Error::InvalidParams("blocks must be nonempty".into()));
        }
        Ok(MarkovSeq { blocks })
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    /// Index of the last block.
    pub fn m(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `n - k`.
    pub fn p(&self) -> usize {
        self.blocks[0].rows()
    }

    pub fn k(&self) -> usize {
        self.blocks[0].cols()
    }

    pub fn field(&self) -> &Field {
        self.blocks[0].field()
    }

    /// `F_{x,y}`: block `(s, t)` is `F_{s+t-1}`, `1 <= s <= x`, `1 <= t <= y`.
    pub fn hankel(&self, x: usize, y: usize) -> Result<Mat> {
        if x + y > self.blocks.len() {
            return Err(Error::InvalidParams(format!(
                "F_{{{x},{y}}} needs F_{} but sequence ends at F_{}",
                x + y - 1,
                self.m()
            )));
        }
        let (p, k) = (self.p(), self.k());
        let mut h = Mat::zeros(self.field(), x * p, y * k);
        for s in 0..x {
            for t in 0..y {
                h.put(s * p, t * k, &self.blocks[s + t + 1]);
            }
        }
        Ok(h)
    }

    fn hankel_rank(&self, x: usize, y: usize) -> usize {
        if x == 0 || y == 0 {
            return 0;
        }
        self.hankel(x, y).expect("within range").rank()
    }

    /// `sum_{x=1}^{M} rank F_{x,M+1-x} - sum_{x=1}^{M-1} rank F_{x,M-x}`.
    pub fn minimal_degree(&self) -> usize {
        let m = self.m();
        let plus: usize = (1..=m).map(|x| self.hankel_rank(x, m + 1 - x)).sum();
        let minus: usize = (1..m).map(|x| self.hankel_rank(x, m - x)).sum();
        plus - minus
    }

    /// Hankel rows `(x, s)` (block `x >= 1`, row `s` within the block) that
    /// are independent of all earlier rows truncated to width `(M+1-x)k`,
    /// with the coefficients expressing each dependent row.
    fn row_structure(&self) -> Result<RowStructure> {
        let (m, p, k) = (self.m(), self.p(), self.k());
        let f = self.field();
        let mut indep: Vec<(usize, usize)> = Vec::new();
        let mut deps = Vec::new();
        for x in 1..=m {
            let width = (m + 1 - x) * k;
            for s in 0..p {
                let row = self.hankel_row(x, s, width);
                let coeffs = if indep.is_empty() {
                    if row.iter().all(|e| e.is_zero()) { Some(Vec::new()) } else { None }
                } else {
                    let basis = self.rows_matrix(&indep, width)?;
                    basis.solve_left(&Mat::row_vector(f, row))?.map(|a| a.row(0).to_vec())
                };
                match coeffs {
                    Some(a) => deps.push(((x, s), a)),
                    None => indep.push((x, s)),
                }
            }
        }
        Ok(RowStructure { indep, deps })
    }

    fn hankel_row(&self, x: usize, s: usize, width: usize) -> Vec<Elem> {
        let k = self.k();
        (0..width).map(|c| self.blocks[x + c / k].get(s, c % k)).collect()
    }

    fn rows_matrix(&self, rows: &[(usize, usize)], width: usize) -> Result<Mat> {
        let data: Vec<Elem> = rows.iter().flat_map(|&(x, s)| self.hankel_row(x, s, width)).collect();
        Mat::from_vec(self.field(), rows.len(), width, data)
    }
}

struct RowStructure {
    indep: Vec<(usize, usize)>,
    /// Dependent row and its coefficients over the independent rows found
    /// before it.
    deps: Vec<((usize, usize), Vec<Elem>)>,
}

/// `ceil(M k / n)`, with the identities that hold when `r >= 1`.
pub fn xbar(params: &CodeParams) -> Result<usize> {
    let xb = params.xbar();
    if params.r >= 1 {
        if params.delta / params.p() + 1 != xb {
            return Err(Error::Internal(format!("floor(delta/(n-k)) != xbar - 1 at {params:?}")));
        }
        if (params.m - xb) * params.k != params.delta - params.r_prime {
            return Err(Error::Internal(format!("(M - xbar) k != delta - r' at {params:?}")));
        }
    }
    Ok(xb)
}

/// Checks the Hankel rank identities implied by an MDP prefix; returns one
/// line per violation.
pub fn check_fm1(seq: &MarkovSeq, params: &CodeParams) -> Vec<String> {
    let mut out = Vec::new();
    let (m, p, k) = (params.m, params.p(), params.k);
    if seq.m() != m {
        out.push(format!("sequence ends at F_{} but M = {m}", seq.m()));
        return out;
    }
    for x in 1..m {
        let got = seq.hankel_rank(x, m - x);
        let want = (x * p).min((m - x) * k);
        if got != want {
            out.push(format!("rank F_{{{x},{}}} = {got}, expected {want}", m - x));
        }
    }
    let xb = params.xbar();
    for x in (1..=m).filter(|&x| x != xb) {
        let got = seq.hankel_rank(x, m + 1 - x);
        let want = (x * p).min((m + 1 - x) * k);
        if got != want {
            out.push(format!("rank F_{{{x},{}}} = {got}, expected {want}", m + 1 - x));
        }
    }
    if m >= 1 {
        let deg = seq.minimal_degree();
        let reduced = seq.hankel_rank(xb, m + 1 - xb);
        if deg != reduced {
            out.push(format!("degree formula gives {deg} but rank F_{{{xb},{}}} = {reduced}", m + 1 - xb));
        }
    }
    out
}

/// Extends a certified prefix `F_0..F_L` by a block `F_M` so that the
/// degree formula gives `delta` and the sMDS condition holds. Requires
/// `r >= 1`.
pub fn complete_fm<R: RngCore>(
    prefix: &[Mat],
    params: &CodeParams,
    rng: &mut R,
    retries: usize,
    opts: &CertOptions,
) -> Result<MarkovSeq> {
    let (m, p, k, r, dl) = (params.m, params.p(), params.k, params.r, params.delta);
    if r == 0 {
        return Err(Error::InvalidParams("completion needs delta mod (n-k) >= 1".into()));
    }
    if prefix.len() != params.l + 1 {
        return Err(Error::InvalidParams(format!("expected {} blocks, got {}", params.l + 1, prefix.len())));
    }
    let f = prefix[0].field().clone();
    let xb = xbar(params)?;

    // top r rows of F_M: sample until every non-TRD square inside the top
    // M(n-k)+r rows of T_M has full rank
    let mut blocks: Vec<Mat> = prefix.to_vec();
    blocks.push(Mat::zeros(&f, p, k));
    let mut found = false;
    for _ in 0..retries {
        for s in 0..r {
            for t in 0..k {
                blocks[m].set(s, t, f.random(rng));
            }
        }
        let tm = Toeplitz::new(&blocks)?;
        if scan_full_rank(&tm, params, m * p + r, 0, Property::Smds, opts)?.holds {
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::FieldTooSmall { retries });
    }

    // bottom n-k-r rows of F_M as combinations fixed by F_{xbar, M-xbar}
    let width = (m - xb) * k;
    if width > 0 {
        let seq = MarkovSeq::new(blocks.clone())?;
        let h = seq.hankel(xb, m - xb)?;
        let mut chosen: Vec<usize> = Vec::new();
        for row in 0..dl {
            let mut trial = chosen.clone();
            trial.push(row);
            if h.submatrix(&trial, &(0..width).collect::<Vec<_>>())?.rank() == trial.len() {
                chosen = trial;
                if chosen.len() == width {
                    break;
                }
            }
        }
        if chosen.len() != width {
            return Err(Error::Internal(format!(
                "top {dl} rows of F_{{{xb},{}}} have rank {} < {width}",
                m - xb,
                chosen.len()
            )));
        }
        let sel = h.submatrix(&chosen, &(0..width).collect::<Vec<_>>())?;
        // row rho of F_{xbar, .} continues with row rho % p of F_{rho/p + M + 1 - xbar}
        let ext = |rho: usize| blocks[rho / p + m + 1 - xb].row(rho % p).to_vec();
        let ext_rows: Vec<Vec<Elem>> = chosen.iter().map(|&rho| ext(rho)).collect();
        for s in r..p {
            let rho = (xb - 1) * p + s;
            let target = Mat::row_vector(&f, h.row(rho).to_vec());
            let alpha = sel
                .solve_left(&target)?
                .ok_or_else(|| Error::Internal("chosen Hankel block is singular".into()))?;
            for t in 0..k {
                let v = ext_rows
                    .iter()
                    .zip(alpha.row(0))
                    .fold(Elem::ZERO, |acc, (row, &a)| f.add(acc, f.mul(a, row[t])));
                blocks[m].set(s, t, v);
            }
        }
    }

    let seq = MarkovSeq::new(blocks)?;
    let rank = seq.hankel_rank(xb, m + 1 - xb);
    if rank != dl {
        return Err(Error::Internal(format!("rank F_{{{xb},{}}} = {rank}, expected {dl}", m + 1 - xb)));
    }
    if !certify_smds(seq.blocks(), params, opts)?.holds {
        return Err(Error::Internal("completed sequence fails the sMDS condition".into()));
    }
    Ok(seq)
}

/// A realization of state dimension `delta` whose first `M+1` Markov
/// parameters are `seq`. The state is indexed by the independent Hankel
/// rows; `B` holds their first blocks and `A` shifts each row one block.
pub fn partial_realization(seq: &MarkovSeq, delta: usize) -> Result<Realization> {
    let deg = seq.minimal_degree();
    if deg != delta {
        return Err(Error::DegreeMismatch { expected: delta, found: deg });
    }
    let f = seq.field().clone();
    let (m, p, k) = (seq.m(), seq.p(), seq.k());
    let rs = seq.row_structure()?;
    if rs.indep.len() != delta {
        return Err(Error::Internal(format!(
            "{} independent Hankel rows for degree {delta}",
            rs.indep.len()
        )));
    }
    let pos = |key: (usize, usize)| rs.indep.iter().position(|&x| x == key);
    let dep = |key: (usize, usize)| -> Vec<Elem> {
        rs.deps.iter().find(|(kk, _)| *kk == key).map(|(_, a)| a.clone()).expect("row classified")
    };
    // coefficients over the first |a| independent rows, padded to delta
    let padded = |a: Vec<Elem>| {
        let mut v = a;
        v.resize(delta, Elem::ZERO);
        v
    };

    let mut a = Mat::zeros(&f, delta, delta);
    let mut b = Mat::zeros(&f, delta, k);
    for (row, &(x, s)) in rs.indep.iter().enumerate() {
        for t in 0..k {
            b.set(row, t, seq.blocks[x].get(s, t));
        }
        if x == m {
            continue;
        }
        let coeffs = match pos((x + 1, s)) {
            Some(i) => {
                let mut e = vec![Elem::ZERO; delta];
                e[i] = Elem::ONE;
                e
            }
            None => padded(dep((x + 1, s))),
        };
        for (col, &v) in coeffs.iter().enumerate() {
            a.set(row, col, v);
        }
    }
    let mut c = Mat::zeros(&f, p, delta);
    if m >= 1 {
        for s in 0..p {
            let coeffs = match pos((1, s)) {
                Some(i) => {
                    let mut e = vec![Elem::ZERO; delta];
                    e[i] = Elem::ONE;
                    e
                }
                None => padded(dep((1, s))),
            };
            for (col, &v) in coeffs.iter().enumerate() {
                c.set(s, col, v);
            }
        }
    }
    Realization::new(a, b, c, seq.blocks[0].clone())
}

/// Markov parameters match `seq` and the realization is minimal.
pub fn verify_realization(r: &Realization, seq: &MarkovSeq) -> bool {
    if r.field() != seq.field() || (r.params().p(), r.params().k) != (seq.p(), seq.k()) {
        return false;
    }
    r.markov(seq.blocks.len()) == seq.blocks && r.is_reachable() && r.is_observable()
}

/// First `count` Markov parameters of the input/output system whose
/// finite-weight trajectories are the codewords: the power series of
/// `G_y(s) G_u(s)^{-1}` where `G_y` holds the top `n-k` rows of the
/// generator and `G_u` the bottom `k`.
pub fn markov_from_code(code: &ConvCode, count: usize) -> Result<Vec<Mat>> {
    let g = code.generator();
    let f = code.field();
    let (n, k) = (code.params().n, code.params().k);
    let p = n - k;
    let gy: Vec<Mat> = g.coeffs().iter().map(|c| c.block(0, 0, p, k)).collect();
    let gu: Vec<Mat> = g.coeffs().iter().map(|c| c.block(p, 0, k, k)).collect();
    let u0inv = gu[0].inverse()?.ok_or_else(|| {
        Error::InvalidParams("input rows of the generator are singular at s = 0".into())
    })?;
    let at = |v: &[Mat], t: usize, rows: usize| v.get(t).cloned().unwrap_or_else(|| Mat::zeros(f, rows, k));
    let mut inv: Vec<Mat> = vec![u0inv.clone()];
    for t in 1..count {
        let mut acc = Mat::zeros(f, k, k);
        for i in 1..=t {
            acc = acc.add(&at(&gu, i, k).mul(&inv[t - i])?)?;
        }
        inv.push(u0inv.mul(&acc)?.scale(f.neg(Elem::ONE)));
    }
    (0..count)
        .map(|t| {
            let mut acc = Mat::zeros(f, p, k);
            for i in 0..=t {
                acc = acc.add(&at(&gy, i, p).mul(&inv[t - i])?)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Realization whose represented code equals `code`.
pub fn realization_from_code(code: &ConvCode) -> Result<Realization> {
    let params = code.params();
    let count = params.m.max(2 * params.delta) + 1;
    let seq = MarkovSeq::new(markov_from_code(code, count)?)?;
    let r = partial_realization(&seq, params.delta)?;
    if !verify_realization(&r, &seq) {
        return Err(Error::Internal("realization of code data failed verification".into()));
    }
    if !r.code()?.same_code(code)? {
        return Err(Error::Internal("realization represents a different code".into()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toeplitz::certify_mdp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalars(f: &Field, v: &[i64]) -> MarkovSeq {
        MarkovSeq::new(v.iter().map(|&x| Mat::from_ints(f, 1, 1, &[x])).collect()).unwrap()
    }

    #[test]
    fn hankel_shapes() {
        let f = Field::prime(7).unwrap();
        let seq = scalars(&f, &[0, 1, 2, 3]);
        assert_eq!(seq.hankel(1, 1).unwrap(), Mat::from_ints(&f, 1, 1, &[1]));
        assert_eq!(seq.hankel(1, 2).unwrap(), Mat::from_ints(&f, 1, 2, &[1, 2]));
        assert_eq!(seq.hankel(2, 1).unwrap(), Mat::from_ints(&f, 2, 1, &[1, 2]));
        assert_eq!(seq.hankel(2, 2).unwrap(), Mat::from_ints(&f, 2, 2, &[1, 2, 2, 3]));
        assert!(seq.hankel(3, 2).is_err());
    }

    #[test]
    fn minimal_degree_examples() {
        let f = Field::prime(5).unwrap();
        assert_eq!(scalars(&f, &[3, 0, 0, 0]).minimal_degree(), 0);
        assert_eq!(scalars(&f, &[0, 1, 1]).minimal_degree(), 1);
        assert_eq!(scalars(&f, &[4]).minimal_degree(), 0);
        // 1, 0, 1, 0: needs two states
        assert_eq!(scalars(&f, &[0, 1, 0, 1, 0]).minimal_degree(), 2);
    }

    #[test]
    fn xbar_examples() {
        assert_eq!(xbar(&CodeParams::new(3, 1, 1).unwrap()).unwrap(), 1);
        assert_eq!(xbar(&CodeParams::new(4, 2, 1).unwrap()).unwrap(), 1);
        for n in 2..9 {
            for k in 1..n {
                for d in 0..15 {
                    xbar(&CodeParams::new(n, k, d).unwrap()).unwrap();
                }
            }
        }
    }

    #[test]
    fn scalar_partial_realization() {
        let f = Field::prime(7).unwrap();
        let seq = scalars(&f, &[0, 1, 3]);
        let r = partial_realization(&seq, 1).unwrap();
        assert_eq!(r.a(), &Mat::from_ints(&f, 1, 1, &[3]));
        assert_eq!(r.b(), &Mat::from_ints(&f, 1, 1, &[1]));
        assert_eq!(r.c(), &Mat::from_ints(&f, 1, 1, &[1]));
        assert!(verify_realization(&r, &seq));
        assert!(matches!(partial_realization(&seq, 2), Err(Error::DegreeMismatch { .. })));
        let trivial = scalars(&f, &[2, 0, 0]);
        let r0 = partial_realization(&trivial, 0).unwrap();
        assert_eq!(r0.a().dims(), (0, 0));
        assert!(verify_realization(&r0, &trivial));
    }

    #[test]
    fn verify_rejects_perturbation_and_padding() {
        let f = Field::prime(7).unwrap();
        let seq = scalars(&f, &[0, 1, 3]);
        let r = partial_realization(&seq, 1).unwrap();
        let mut d = r.d().clone();
        d.set(0, 0, f.from_int(1));
        let bad = Realization::new(r.a().clone(), r.b().clone(), r.c().clone(), d).unwrap();
        assert!(!verify_realization(&bad, &seq));
        let padded = Realization::new(
            Mat::from_ints(&f, 2, 2, &[3, 0, 0, 1]),
            Mat::from_ints(&f, 2, 1, &[1, 0]),
            Mat::from_ints(&f, 1, 2, &[1, 1]),
            r.d().clone(),
        )
        .unwrap();
        assert_eq!(padded.markov(3), seq.blocks().to_vec());
        assert!(!verify_realization(&padded, &seq));
    }

    #[test]
    fn realization_roundtrip_on_random_minimal_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (q, n, k, dl) in [(5, 3, 1, 2), (3, 4, 2, 3), (4, 5, 2, 2), (7, 2, 1, 3)] {
            let f = Field::new(if q == 4 { 2 } else { q }, if q == 4 { 2 } else { 1 }).unwrap();
            let params = CodeParams::new(n, k, dl).unwrap();
            for _ in 0..10 {
                let r = Realization::random_minimal(&f, &params, &mut rng, 200).unwrap();
                let count = 2 * dl + 1;
                let seq = MarkovSeq::new(r.markov(count)).unwrap();
                assert_eq!(seq.minimal_degree(), dl);
                let r2 = partial_realization(&seq, dl).unwrap();
                assert!(verify_realization(&r2, &seq));
                assert_eq!(r2.markov(count + 3), r.markov(count + 3));
            }
        }
    }

    #[test]
    fn completion_for_311() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = Field::prime(5).unwrap();
        let params = CodeParams::new(3, 1, 1).unwrap();
        let opts = CertOptions::default();
        let mut done = 0;
        while done < 10 {
            let prefix: Vec<Mat> = (0..=params.l)
                .map(|_| Mat::from_vec(&f, 2, 1, vec![f.random(&mut rng), f.random(&mut rng)]).unwrap())
                .collect();
            if !certify_mdp(&prefix, &params, &opts).unwrap().holds {
                continue;
            }
            let seq = complete_fm(&prefix, &params, &mut rng, 64, &opts).unwrap();
            assert_eq!(seq.minimal_degree(), 1);
            assert!(check_fm1(&seq, &params).is_empty());
            assert_eq!(&seq.blocks()[..2], &prefix[..]);
            done += 1;
        }
    }

    #[test]
    fn code_realization_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = Field::prime(3).unwrap();
        for (n, k, dl) in [(3, 1, 1), (4, 2, 2), (3, 2, 2)] {
            let params = CodeParams::new(n, k, dl).unwrap();
            for _ in 0..5 {
                let r = Realization::random_minimal(&f, &params, &mut rng, 200).unwrap();
                let code = r.code().unwrap();
                let back = realization_from_code(&code).unwrap();
                assert!(back.code().unwrap().same_code(&code).unwrap());
                assert_eq!(back.markov(2 * dl + 2), r.markov(2 * dl + 2));
            }
        }
    }
}
