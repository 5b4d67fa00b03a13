//! Randomized search for codes with certified MDP and sMDS Toeplitz data,
//! turned into a realization and a generator matrix.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convcode::{pow_cost, Budget, CodeParams, ConvCode};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::lsys::{code_from_realization, Realization};
use crate::matrix::Mat;
use crate::realize::{check_fm1, complete_fm, partial_realization, verify_realization, MarkovSeq};
use crate::toeplitz::{certify_mdp, certify_smds, CertOptions, Certificate};

/// Field `GF(p^m)` named by characteristic and extension degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
}

impl FieldSpec {
    pub fn q(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn build(&self) -> Result<Field> {
        Field::new(self.p, self.m)
    }
}

/// `GF(2^m)` for `q` in 4..=256.
pub fn default_ladder() -> Vec<FieldSpec> {
    (2..=8).map(|m| FieldSpec { p: 2, m }).collect()
}

/// `GF(p^m)` for every `p^m <= max(256, p)`.
pub fn char_ladder(p: u64) -> Vec<FieldSpec> {
    let cap = 256u64.max(p);
    let mut out = Vec::new();
    let mut m = 1;
    while p.pow(m) <= cap {
        out.push(FieldSpec { p, m });
        m += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    On,
    Off,
    /// Run each oracle only when its cost fits the budget.
    Auto,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub params: CodeParams,
    pub ladder: Vec<FieldSpec>,
    pub trials: usize,
    pub seed: u64,
    pub cert: CertOptions,
    pub oracle: OracleMode,
    pub budget: Budget,
    /// Resampling budget for the top rows of `F_M`.
    pub completion_retries: usize,
}

impl SearchConfig {
    pub fn new(params: CodeParams) -> SearchConfig {
        SearchConfig {
            params,
            ladder: default_ladder(),
            trials: 100,
            seed: 0,
            cert: CertOptions::default(),
            oracle: OracleMode::Auto,
            budget: Budget::default(),
            completion_retries: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ladder.is_empty() {
            return Err(Error::InvalidParams("empty field ladder".into()));
        }
        if self.ladder.windows(2).any(|w| w[0].q() >= w[1].q()) {
            return Err(Error::InvalidParams("field ladder must strictly increase".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Oracle distances; `None` marks a skipped oracle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Distances {
    pub dcol_l: Option<usize>,
    pub dcol_m: Option<usize>,
    pub dfree: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub field: Field,
    pub seq: MarkovSeq,
    pub realization: Realization,
    pub code: ConvCode,
    pub mdp: Certificate,
    pub smds: Certificate,
    pub distances: Distances,
    /// Trials run over all fields, including the successful one.
    pub trials: usize,
    /// Trials whose prefix failed MDP certification.
    pub mdp_failures: usize,
    /// Trials where the top rows of `F_M` could not be completed.
    pub completion_failures: usize,
}

pub fn search(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let params = config.params;
    let (p, k) = (params.p(), params.k);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut trials, mut mdp_failures, mut completion_failures) = (0, 0, 0);
    for rung in &config.ladder {
        let f = rung.build()?;
        for _ in 0..config.trials {
            trials += 1;
            let prefix: Vec<Mat> = (0..=params.l)
                .map(|_| {
                    let data = (0..p * k).map(|_| f.random(&mut rng)).collect();
                    Mat::from_vec(&f, p, k, data)
                })
                .collect::<Result<_>>()?;
            let mdp = certify_mdp(&prefix, &params, &config.cert)?;
            if !mdp.holds {
                mdp_failures += 1;
                continue;
            }
            let seq = if params.r == 0 {
                MarkovSeq::new(prefix)?
            } else {
                match complete_fm(&prefix, &params, &mut rng, config.completion_retries, &config.cert) {
                    Ok(seq) => seq,
                    Err(Error::FieldTooSmall { .. }) => {
                        completion_failures += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                }
            };
            let smds = certify_smds(seq.blocks(), &params, &config.cert)?;
            if !smds.holds {
                return Err(Error::Internal("completed sequence fails the sMDS condition".into()));
            }
            let deg = seq.minimal_degree();
            if deg != params.delta {
                return Err(Error::Internal(format!("minimal degree {deg}, expected {}", params.delta)));
            }
            if let Some(v) = check_fm1(&seq, &params).into_iter().next() {
                return Err(Error::Internal(v));
            }
            let realization = partial_realization(&seq, params.delta)?;
            if !verify_realization(&realization, &seq) {
                return Err(Error::Internal("partial realization failed verification".into()));
            }
            let code = code_from_realization(&realization)?;
            let distances = run_oracles(&code, config.oracle, &config.budget)?;
            check_distances(&params, &distances)?;
            return Ok(SearchResult {
                field: f,
                seq,
                realization,
                code,
                mdp,
                smds,
                distances,
                trials,
                mdp_failures,
                completion_failures,
            });
        }
    }
    Err(Error::SearchExhausted { trials })
}

/// Column distances at `L` and `M` and the free distance, as `mode` and
/// `budget` allow.
pub fn run_oracles(code: &ConvCode, mode: OracleMode, budget: &Budget) -> Result<Distances> {
    let params = code.params();
    let q = code.field().q();
    let run_col = |j: usize| -> Result<Option<usize>> {
        match mode {
            OracleMode::Off => Ok(None),
            OracleMode::On => code.column_distance(j, budget).map(Some),
            OracleMode::Auto => {
                if budget.check_messages(code.column_distance_cost(j)).is_ok() {
                    code.column_distance(j, budget).map(Some)
                } else {
                    Ok(None)
                }
            }
        }
    };
    let dfree = match mode {
        OracleMode::Off => None,
        OracleMode::On => Some(code.free_distance(budget)?),
        OracleMode::Auto => {
            let fits = budget
                .check_states(pow_cost(q, params.delta), pow_cost(q, params.delta + params.k))
                .is_ok();
            if fits { Some(code.free_distance(budget)?) } else { None }
        }
    };
    Ok(Distances { dcol_l: run_col(params.l)?, dcol_m: run_col(params.m)?, dfree })
}

fn check_distances(params: &CodeParams, d: &Distances) -> Result<()> {
    let expect = [
        ("d_L^c", d.dcol_l, params.col_bound(params.l)),
        ("d_M^c", d.dcol_m, params.singleton),
        ("d_free", d.dfree, params.singleton),
    ];
    for (name, got, want) in expect {
        if let Some(v) = got {
            if v != want {
                return Err(Error::Internal(format!("{name} = {v}, expected {want}")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladders() {
        let d: Vec<u64> = default_ladder().iter().map(FieldSpec::q).collect();
        assert_eq!(d, [4, 8, 16, 32, 64, 128, 256]);
        let c: Vec<u64> = char_ladder(3).iter().map(FieldSpec::q).collect();
        assert_eq!(c, [3, 9, 27, 81, 243]);
        let big: Vec<u64> = char_ladder(257).iter().map(FieldSpec::q).collect();
        assert_eq!(big, [257]);
    }

    #[test]
    fn config_validation() {
        let mut c = SearchConfig::new(CodeParams::new(3, 1, 1).unwrap());
        assert!(c.validate().is_ok());
        c.trials = 0;
        assert!(c.validate().is_err());
        c.trials = 1;
        c.ladder = alloc::vec![FieldSpec { p: 2, m: 3 }, FieldSpec { p: 2, m: 2 }];
        assert!(c.validate().is_err());
        c.ladder.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn search_311() {
        let c = SearchConfig::new(CodeParams::new(3, 1, 1).unwrap());
        let res = search(&c).unwrap();
        assert_eq!(res.distances, Distances { dcol_l: Some(5), dcol_m: Some(6), dfree: Some(6) });
        assert!(res.mdp.holds && res.smds.holds);
        assert_eq!(*res.code.params(), c.params);
    }

    #[test]
    fn search_is_deterministic() {
        let mut c = SearchConfig::new(CodeParams::new(4, 2, 1).unwrap());
        c.seed = 9;
        let a = search(&c).unwrap();
        let b = search(&c).unwrap();
        assert_eq!(a.seq, b.seq);
        assert_eq!(a.realization, b.realization);
        assert_eq!(a.code.generator(), b.code.generator());
        assert_eq!(a.trials, b.trials);
    }

    #[test]
    fn search_r_zero_uses_prefix() {
        let c = SearchConfig::new(CodeParams::new(2, 1, 2).unwrap());
        let res = search(&c).unwrap();
        assert_eq!(res.seq.m(), c.params.l);
        assert_eq!(res.completion_failures, 0);
    }

    #[test]
    fn exhausted_ladder() {
        let mut c = SearchConfig::new(CodeParams::new(3, 1, 1).unwrap());
        c.ladder = alloc::vec![FieldSpec { p: 2, m: 1 }];
        c.trials = 5;
        assert_eq!(search(&c).unwrap_err(), Error::SearchExhausted { trials: 5 });
    }
}
