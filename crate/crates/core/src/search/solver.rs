use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::heuristics::{decide, Decision, Heuristic};
use crate::cost::{HeldKarp, HungarianProp, TreeMode, TrivialLb};
use crate::instance::Instance;
use crate::scheduler::{Outcome, PropagatorStats, Scheduler, Store, INFINITE};
use crate::structural::{AllDifferent, Arborescence, Degree, Direction, NoCycle, Positions, ReducedPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelConfig {
    Basic,
    Arb,
    Pos,
    Ad,
    Bst,
    All,
}

impl ModelConfig {
    pub const ALL: [ModelConfig; 6] =
        [ModelConfig::Basic, ModelConfig::Arb, ModelConfig::Pos, ModelConfig::Ad, ModelConfig::Bst, ModelConfig::All];

    pub fn name(self) -> &'static str {
        match self {
            ModelConfig::Basic => "basic",
            ModelConfig::Arb => "arb",
            ModelConfig::Pos => "pos",
            ModelConfig::Ad => "ad",
            ModelConfig::Bst => "bst",
            ModelConfig::All => "all",
        }
    }

    fn has(self, part: ModelConfig) -> bool {
        self == part || self == ModelConfig::All
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relax {
    Tree,
    Map,
    Both,
}

impl Relax {
    pub const ALL: [Relax; 3] = [Relax::Tree, Relax::Map, Relax::Both];

    pub fn name(self) -> &'static str {
        match self {
            Relax::Tree => "tree",
            Relax::Map => "map",
            Relax::Both => "both",
        }
    }
}

macro_rules! named_enum_parse {
    ($t:ty, $what:literal) => {
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t>::ALL.iter().copied().find(|x| x.name().eq_ignore_ascii_case(s)).ok_or_else(|| {
                    let names: Vec<&str> = <$t>::ALL.iter().map(|x| x.name()).collect();
                    format!(concat!("unknown ", $what, " '{}' (expected one of: {})"), s, names.join(", "))
                })
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

named_enum_parse!(ModelConfig, "model");
named_enum_parse!(Relax, "relaxation");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Search for a path of cost at most the given bound.
    Prove(i64),
    /// Minimize, tightening the bound after each incumbent.
    Optimize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveConfig {
    pub mode: Mode,
    pub heuristic: Heuristic,
    pub model: ModelConfig,
    pub relax: Relax,
    #[serde(skip)]
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            mode: Mode::Optimize,
            heuristic: Heuristic::EnforceSparse,
            model: ModelConfig::Basic,
            relax: Relax::Tree,
            time_limit: None,
            node_limit: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    /// Prove mode found a path within the bound.
    Proven,
    /// Optimize mode exhausted the tree with an incumbent.
    Optimal,
    /// The tree was exhausted without a path within the bound.
    Infeasible,
    TimeLimit,
    NodeLimit,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Proven => "Proven",
            Status::Optimal => "Optimal",
            Status::Infeasible => "Infeasible",
            Status::TimeLimit => "TimeLimit",
            Status::NodeLimit => "NodeLimit",
        }
    }

    pub fn is_limit(self) -> bool {
        matches!(self, Status::TimeLimit | Status::NodeLimit)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub status: Status,
    pub objective: Option<i64>,
    pub path: Option<Vec<usize>>,
    pub nodes: u64,
    pub time_s: f64,
    pub root_lb: i64,
    pub propagators: Vec<PropagatorStats>,
}

/// Registers the propagators of `cfg` on a fresh scheduler.
pub fn build_model(st: &mut Store<'_>, model: ModelConfig, relax: Relax) -> Scheduler {
    let (n, s, e) = (st.gv.n(), st.gv.start(), st.gv.end());
    let mut sched = Scheduler::new();
    sched.add(Box::new(Degree));
    sched.add(Box::new(NoCycle::new(&mut st.gv)));
    sched.add(Box::new(TrivialLb));
    if model.has(ModelConfig::Arb) {
        sched.add(Box::new(Arborescence::new(Direction::Forward)));
        sched.add(Box::new(Arborescence::new(Direction::Backward)));
    }
    if model.has(ModelConfig::Pos) {
        sched.add(Box::new(Positions::new(&mut st.gv)));
    }
    if model.has(ModelConfig::Ad) {
        sched.add(Box::new(AllDifferent::new(n)));
    }
    if model.has(ModelConfig::Bst) {
        sched.add(Box::new(ReducedPath));
    }
    if relax != Relax::Map {
        sched.add(Box::new(HeldKarp::new(n, TreeMode::Mst)));
        if model.has(ModelConfig::Bst) {
            sched.add(Box::new(HeldKarp::new(n, TreeMode::Bst)));
        }
    }
    if relax != Relax::Tree {
        sched.add(Box::new(HungarianProp::new(n, s, e)));
    }
    sched
}

fn extract_path(st: &Store<'_>) -> Option<Vec<usize>> {
    let gv = &st.gv;
    let mut path = vec![gv.start()];
    let mut cur = gv.start();
    while cur != gv.end() {
        let next = *gv.mandatory_succ(cur).first()? as usize;
        path.push(next);
        cur = next;
        if path.len() > gv.n() {
            return None;
        }
    }
    (path.len() == gv.n()).then_some(path)
}

enum Stage {
    Left,
    Right,
}

struct Frame {
    decision: Decision,
    stage: Stage,
}

/// Depth-first branch-and-bound. Left branches apply the decision, right
/// branches its negation.
pub fn solve(inst: &Instance, cfg: &SolveConfig) -> SearchResult {
    let start = Instant::now();
    let ub0 = match cfg.mode {
        Mode::Prove(ub) => ub,
        Mode::Optimize => INFINITE,
    };
    let mut st = Store::new(inst, ub0);
    let mut sched = build_model(&mut st, cfg.model, cfg.relax);
    let mut nodes: u64 = 1;
    let mut incumbent: Option<(i64, Vec<usize>)> = None;
    let mut stack: Vec<Frame> = Vec::new();
    let mut limit: Option<Status> = None;

    let mut ok = sched.run_fixpoint(&mut st) == Outcome::Fixpoint;
    let root_lb = st.lb();

    'search: loop {
        if ok {
            if st.gv.is_instantiated() {
                if let Some(path) = extract_path(&st) {
                    let cost = inst.path_cost(&path).unwrap_or(INFINITE);
                    if cost <= st.ub {
                        match cfg.mode {
                            Mode::Prove(_) => {
                                incumbent = Some((cost, path));
                                break 'search;
                            }
                            Mode::Optimize => {
                                st.ub = cost - 1;
                                incumbent = Some((cost, path));
                            }
                        }
                    }
                }
                ok = false;
                continue;
            }
            let decision = match decide(cfg.heuristic, &st) {
                Ok(d) => d,
                Err(_) => {
                    ok = false;
                    continue;
                }
            };
            if nodes.is_multiple_of(64) {
                if let Some(tl) = cfg.time_limit {
                    if start.elapsed() >= tl {
                        limit = Some(Status::TimeLimit);
                        break 'search;
                    }
                }
            }
            if cfg.node_limit.is_some_and(|nl| nodes >= nl) {
                limit = Some(Status::NodeLimit);
                break 'search;
            }
            st.gv.push_world();
            nodes += 1;
            ok = decision.apply(&mut st.gv).is_ok() && sched.run_fixpoint(&mut st) == Outcome::Fixpoint;
            if !ok {
                st.gv.clear_events();
            }
            stack.push(Frame { decision, stage: Stage::Left });
        } else {
            loop {
                let Some(frame) = stack.last_mut() else { break 'search };
                st.gv.pop_world();
                match frame.stage {
                    Stage::Left => {
                        frame.stage = Stage::Right;
                        st.gv.push_world();
                        nodes += 1;
                        ok = frame.decision.apply_negation(&mut st.gv).is_ok()
                            && sched.run_fixpoint(&mut st) == Outcome::Fixpoint;
                        if !ok {
                            st.gv.clear_events();
                        }
                        continue 'search;
                    }
                    Stage::Right => {
                        stack.pop();
                    }
                }
            }
        }
    }

    let status = match (limit, cfg.mode, &incumbent) {
        (Some(l), _, _) => l,
        (None, Mode::Prove(_), Some(_)) => Status::Proven,
        (None, Mode::Optimize, Some(_)) => Status::Optimal,
        (None, _, None) => Status::Infeasible,
    };
    let (objective, path) = match incumbent {
        Some((c, p)) => (Some(c), Some(p)),
        None => (None, None),
    };
    SearchResult {
        status,
        objective,
        path,
        nodes,
        time_s: start.elapsed().as_secs_f64(),
        root_lb,
        propagators: sched.stats().to_vec(),
    }
}
