use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Contradiction, Error, PropResult, Result};
use crate::graph::GraphVar;
use crate::scheduler::{ArcScores, Store};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Heuristic {
    #[serde(rename = "removeMaxRC")]
    RemoveMaxRc,
    #[serde(rename = "enforceMaxRC")]
    EnforceMaxRc,
    #[serde(rename = "removeMaxMC")]
    RemoveMaxMc,
    #[serde(rename = "sparse")]
    Sparse,
    #[serde(rename = "enforceSparse")]
    EnforceSparse,
}

impl Heuristic {
    pub const ALL: [Heuristic; 5] =
        [Heuristic::RemoveMaxRc, Heuristic::EnforceMaxRc, Heuristic::RemoveMaxMc, Heuristic::Sparse, Heuristic::EnforceSparse];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::RemoveMaxRc => "removeMaxRC",
            Heuristic::EnforceMaxRc => "enforceMaxRC",
            Heuristic::RemoveMaxMc => "removeMaxMC",
            Heuristic::Sparse => "sparse",
            Heuristic::EnforceSparse => "enforceSparse",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Heuristic::ALL.iter().copied().find(|h| h.name().eq_ignore_ascii_case(s)).ok_or_else(|| {
            let names: Vec<&str> = Heuristic::ALL.iter().map(|h| h.name()).collect();
            format!("unknown heuristic '{s}' (expected one of: {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Enforce(usize, usize),
    Remove(usize, usize),
    /// Keep only `keep` among the successors of `node`; the negation removes
    /// `keep`.
    SplitSuccessors { node: usize, keep: Vec<usize> },
}

impl Decision {
    pub fn apply(&self, gv: &mut GraphVar) -> PropResult {
        match self {
            Decision::Enforce(u, v) => gv.enforce_arc(*u, *v).map(drop),
            Decision::Remove(u, v) => gv.remove_arc(*u, *v).map(drop),
            Decision::SplitSuccessors { node, keep } => {
                let drop_list: Vec<usize> =
                    gv.succ(*node).iter().map(|&v| v as usize).filter(|v| !keep.contains(v)).collect();
                for v in drop_list {
                    gv.remove_arc(*node, v)?;
                }
                Ok(())
            }
        }
    }

    pub fn apply_negation(&self, gv: &mut GraphVar) -> PropResult {
        match self {
            Decision::Enforce(u, v) => gv.remove_arc(*u, *v).map(drop),
            Decision::Remove(u, v) => gv.enforce_arc(*u, *v).map(drop),
            Decision::SplitSuccessors { node, keep } => {
                for &v in keep {
                    gv.remove_arc(*node, v)?;
                }
                if gv.out_degree(*node) == 0 {
                    return Err(Contradiction);
                }
                Ok(())
            }
        }
    }
}

/// Highest score among free arcs of `list`, lowest (tail, head) on ties.
fn argmax(gv: &GraphVar, list: &[(usize, usize, f64)]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for &(u, v, s) in list {
        if !gv.has_arc(u, v) || gv.is_mandatory(u, v) {
            continue;
        }
        let better = match best {
            None => true,
            Some((bu, bv, bs)) => s > bs || (s == bs && (u, v) < (bu, bv)),
        };
        if better {
            best = Some((u, v, s));
        }
    }
    best.map(|(u, v, _)| (u, v))
}

fn scores<'s>(st: &'s Store<'_>) -> Option<&'s ArcScores> {
    st.scores.preferred()
}

pub fn heuristic_remove_max_rc(st: &Store<'_>) -> Result<Decision> {
    let sc = scores(st).ok_or(Error::NoDecision)?;
    argmax(&st.gv, &sc.solution).map(|(u, v)| Decision::Remove(u, v)).ok_or(Error::NoDecision)
}

pub fn heuristic_enforce_max_rc(st: &Store<'_>) -> Result<Decision> {
    let sc = scores(st).ok_or(Error::NoDecision)?;
    argmax(&st.gv, &sc.solution).map(|(u, v)| Decision::Enforce(u, v)).ok_or(Error::NoDecision)
}

pub fn heuristic_remove_max_mc(st: &Store<'_>) -> Result<Decision> {
    let sc = scores(st).ok_or(Error::NoDecision)?;
    argmax(&st.gv, &sc.others).map(|(u, v)| Decision::Remove(u, v)).ok_or(Error::NoDecision)
}

/// Node selection shared by both sparse heuristics. Returns the node and
/// its successors with their shared-successor counts, ordered by count
/// descending then id.
pub fn sparse_choice(gv: &GraphVar) -> Option<(usize, Vec<(usize, usize)>)> {
    let n = gv.n();
    let free: Vec<usize> = (0..n).filter(|&u| u != gv.end() && gv.mandatory_succ(u).is_empty()).collect();
    let min_deg = free.iter().map(|&u| gv.out_degree(u)).min()?;
    let xs: Vec<usize> = free.into_iter().filter(|&u| gv.out_degree(u) == min_deg).collect();
    let mut in_x = vec![false; n];
    for &x in &xs {
        in_x[x] = true;
    }
    let count = |y: usize| gv.pred(y).iter().filter(|&&z| in_x[z as usize]).count();
    let mut best: Option<(usize, usize)> = None;
    for &x in &xs {
        let score: usize = gv.succ(x).iter().map(|&y| count(y as usize)).sum();
        if best.is_none_or(|(_, bs)| score > bs) {
            best = Some((x, score));
        }
    }
    let (x, _) = best?;
    let mut succ: Vec<(usize, usize)> = gv.succ(x).iter().map(|&y| (y as usize, count(y as usize))).collect();
    succ.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Some((x, succ))
}

pub fn heuristic_sparse(st: &Store<'_>) -> Result<Decision> {
    let (x, succ) = sparse_choice(&st.gv).ok_or(Error::NoDecision)?;
    if succ.len() <= 2 {
        return Ok(Decision::Enforce(x, succ[0].0));
    }
    let mut keep: Vec<usize> = succ[..succ.len() / 2].iter().map(|&(y, _)| y).collect();
    keep.sort_unstable();
    Ok(Decision::SplitSuccessors { node: x, keep })
}

pub fn heuristic_enforce_sparse(st: &Store<'_>) -> Result<Decision> {
    let (x, succ) = sparse_choice(&st.gv).ok_or(Error::NoDecision)?;
    Ok(Decision::Enforce(x, succ[0].0))
}

/// Next decision for `h`. Score-based heuristics fall back to
/// [`Heuristic::EnforceSparse`] when they have no candidate left.
pub fn decide(h: Heuristic, st: &Store<'_>) -> Result<Decision> {
    let first = match h {
        Heuristic::RemoveMaxRc => heuristic_remove_max_rc(st),
        Heuristic::EnforceMaxRc => heuristic_enforce_max_rc(st),
        Heuristic::RemoveMaxMc => heuristic_remove_max_mc(st),
        Heuristic::Sparse => heuristic_sparse(st),
        Heuristic::EnforceSparse => heuristic_enforce_sparse(st),
    };
    match first {
        Err(Error::NoDecision) if !st.gv.is_instantiated() => heuristic_enforce_sparse(st),
        other => other,
    }
}
