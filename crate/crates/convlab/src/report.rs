//! Stable line-oriented reports.
//!
//! ```text
//! cert <MDP|sMDS> <true|false>
//! witness rows <i_1 ...> cols <j_1 ...>     (only when false)
//! counts scanned=<n> pruned=<n>
//! dcol <j> <value|skipped>
//! dfree <value|skipped>
//! ```

use std::fmt::Write as _;

use convlab_core::search::{Distances, SearchConfig, SearchResult};
use convlab_core::{CodeParams, Certificate, Property};

pub fn certificate(c: &Certificate) -> String {
    let mut out = String::new();
    let name = match c.property {
        Property::Mdp => "MDP",
        Property::Smds => "sMDS",
    };
    writeln!(out, "cert {name} {}", c.holds).unwrap();
    if let Some(w) = &c.witness {
        writeln!(out, "witness rows {} cols {}", join(&w.rows), join(&w.cols)).unwrap();
    }
    writeln!(out, "counts scanned={} pruned={}", c.scanned, c.pruned).unwrap();
    out
}

pub fn dcol(j: usize, v: Option<usize>) -> String {
    format!("dcol {j} {}\n", opt(v))
}

pub fn dfree(v: Option<usize>) -> String {
    format!("dfree {}\n", opt(v))
}

pub fn distances(params: &CodeParams, d: &Distances) -> String {
    let mut out = dcol(params.l, d.dcol_l);
    if params.m != params.l {
        out.push_str(&dcol(params.m, d.dcol_m));
    }
    out.push_str(&dfree(d.dfree));
    out
}

pub fn search(config: &SearchConfig, res: &SearchResult) -> String {
    let mut out = String::new();
    let p = &config.params;
    writeln!(out, "search {} {} {}", p.n, p.k, p.delta).unwrap();
    writeln!(out, "seed {}", config.seed).unwrap();
    let f = &res.field;
    writeln!(out, "field {} {}", f.p(), f.m()).unwrap();
    writeln!(
        out,
        "trials total={} mdp_failures={} completion_failures={}",
        res.trials, res.mdp_failures, res.completion_failures
    )
    .unwrap();
    out.push_str(&certificate(&res.mdp));
    out.push_str(&certificate(&res.smds));
    out.push_str(&distances(p, &res.distances));
    out
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "skipped".to_string(), |v| v.to_string())
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}
