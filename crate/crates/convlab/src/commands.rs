//! The `search`, `certify`, `convert` and `distances` commands.

use std::fs;
use std::path::Path;

use convlab_core::lsys::{code_from_realization, markov_column_distance};
use convlab_core::realize::{partial_realization, realization_from_code, verify_realization, markov_from_code};
use convlab_core::search::{self, char_ladder, default_ladder, run_oracles, OracleMode, SearchConfig};
use convlab_core::toeplitz::{certify_mdp, certify_smds, CertOptions};
use convlab_core::{Budget, CodeParams, ConvCode, Error, Mat, Realization};

use crate::format::{self, Document};
use crate::{report, CliError, Status};

/// Text for stdout and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMode {
    Mdp,
    Smds,
    Distances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Code,
    Realization,
}

#[derive(Debug, Clone)]
pub struct SearchOpts<'a> {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub char_p: Option<u64>,
    pub seed: u64,
    pub trials: usize,
    pub oracle: OracleMode,
    pub report: Option<&'a Path>,
    pub out: Option<&'a str>,
}

pub fn load(path: &Path) -> Result<Document, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    format::parse(&text).map_err(|source| CliError::Parse { path: shown, source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn search(opts: &SearchOpts) -> Result<Outcome, CliError> {
    let params = CodeParams::new(opts.n, opts.k, opts.delta)?;
    let mut config = SearchConfig::new(params);
    if let Some(p) = opts.char_p {
        if p < 2 {
            return Err(CliError::Usage(format!("characteristic {p} is not a prime")));
        }
        config.ladder = char_ladder(p);
    } else {
        config.ladder = default_ladder();
    }
    config.seed = opts.seed;
    config.trials = opts.trials;
    config.oracle = opts.oracle;
    let res = search::search(&config)?;
    let text = report::search(&config, &res);
    if let Some(path) = opts.report {
        write(path, &text)?;
    }
    if let Some(prefix) = opts.out {
        write(Path::new(&format!("{prefix}.code")), &format::write_code(&res.code))?;
        write(Path::new(&format!("{prefix}.real")), &format::write_realization(&res.realization))?;
        write(Path::new(&format!("{prefix}.markov")), &format::write_markov(&res.seq))?;
    }
    Ok(Outcome { text, status: Status::True })
}

/// `F_0..F_{count-1}` of the document's input/output system.
fn markov_blocks(doc: &Document, count: usize) -> Result<Vec<Mat>, CliError> {
    match doc {
        Document::Code(c) => Ok(markov_from_code(c, count)?),
        Document::Realization(r) => Ok(r.markov(count)),
        Document::Markov { seq, .. } => {
            if seq.blocks().len() < count {
                return Err(CliError::Usage(format!(
                    "need F_0..F_{} but the file ends at F_{}",
                    count - 1,
                    seq.m()
                )));
            }
            Ok(seq.blocks()[..count].to_vec())
        }
    }
}

fn realization_of(doc: &Document) -> Result<Realization, CliError> {
    match doc {
        Document::Code(c) => Ok(realization_from_code(c)?),
        Document::Realization(r) => Ok(r.clone()),
        Document::Markov { seq, params } => {
            let r = partial_realization(seq, params.delta)?;
            if !verify_realization(&r, seq) {
                return Err(Error::Internal("partial realization failed verification".into()).into());
            }
            Ok(r)
        }
    }
}

fn code_of(doc: &Document) -> Result<ConvCode, CliError> {
    match doc {
        Document::Code(c) => Ok(c.clone()),
        other => Ok(code_from_realization(&realization_of(other)?)?),
    }
}

pub fn certify(path: &Path, mode: CertMode) -> Result<Outcome, CliError> {
    let doc = load(path)?;
    let params = *doc.params();
    let opts = CertOptions::default();
    let (text, holds) = match mode {
        CertMode::Mdp => {
            let c = certify_mdp(&markov_blocks(&doc, params.l + 1)?, &params, &opts)?;
            (report::certificate(&c), c.holds)
        }
        CertMode::Smds => {
            let c = certify_smds(&markov_blocks(&doc, params.m + 1)?, &params, &opts)?;
            (report::certificate(&c), c.holds)
        }
        CertMode::Distances => {
            let d = run_oracles(&code_of(&doc)?, OracleMode::On, &Budget::default())?;
            let holds = d.dcol_l == Some(params.col_bound(params.l))
                && d.dcol_m == Some(params.singleton)
                && d.dfree == Some(params.singleton);
            (report::distances(&params, &d), holds)
        }
    };
    Ok(Outcome { text, status: if holds { Status::True } else { Status::False } })
}

/// `d_0^c..d_jmax^c` computed on the document's own representation.
fn profile(doc: &Document, jmax: usize, budget: &Budget) -> Result<Vec<usize>, CliError> {
    match doc {
        Document::Code(c) => Ok(c.column_distance_profile(jmax, budget)?),
        Document::Realization(r) => Ok((0..=jmax).map(|j| r.column_distance(j, budget)).collect::<Result<_, _>>()?),
        Document::Markov { .. } => {
            let blocks = markov_blocks(doc, jmax + 1)?;
            Ok((0..=jmax).map(|j| markov_column_distance(&blocks, j, budget)).collect::<Result<_, _>>()?)
        }
    }
}

fn profile_cost(doc: &Document, jmax: usize) -> u128 {
    let p = doc.params();
    convlab_core::convcode::pow_cost(doc.field().q(), (jmax + 1) * p.k)
}

pub fn convert(path: &Path, target: Target) -> Result<Outcome, CliError> {
    let doc = load(path)?;
    let out = match target {
        Target::Code => Document::Code(code_of(&doc)?),
        Target::Realization => Document::Realization(realization_of(&doc)?),
    };
    let budget = Budget::default();
    let jmax = doc.params().m;
    if budget.check_messages(profile_cost(&doc, jmax)).is_ok() {
        let before = profile(&doc, jmax, &budget)?;
        let after = profile(&out, jmax, &budget)?;
        if before != after {
            return Err(Error::Internal(format!("column distances changed from {before:?} to {after:?}")).into());
        }
    }
    Ok(Outcome { text: out.to_text(), status: Status::True })
}

pub fn distances(path: &Path, jmax: Option<usize>) -> Result<Outcome, CliError> {
    let doc = load(path)?;
    let jmax = jmax.unwrap_or(doc.params().m);
    let budget = Budget::default();
    let prof = profile(&doc, jmax, &budget)?;
    let dfree = match &doc {
        Document::Code(c) => c.free_distance(&budget)?,
        other => realization_of(other)?.free_distance(&budget)?,
    };
    let mut text: String = prof.iter().enumerate().map(|(j, &v)| report::dcol(j, Some(v))).collect();
    text.push_str(&report::dfree(Some(dfree)));
    Ok(Outcome { text, status: Status::True })
}
