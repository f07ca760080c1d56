//! Match driver: rounds, matches, experiments, performance runs, traces
//! and the script REPL.

mod experiment;
mod perf;
mod repl;
mod trace;

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use logibot_engine::{KnowledgeBase, Limits};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use experiment::{run_experiment, ExperimentReport, PairingRow, PAIRINGS};
pub use perf::{measure_performance, PerfReport, TickTiming};
pub use repl::Repl;
pub use trace::{parse_trace, replay, write_trace, ReplayOutcome, TRACE_HEADER};

use crate::rules::{default_stack, validate_stack, Report, RuleError, RulePackage};
use crate::runtime::{
    new_blackboard, Blackboard, Brain, LifecycleRecord, MindConfig, MindTemplate, NativeBaseline,
};
use crate::sim::{Event, GameConfig, Intent, MapDefinition, MapError, RoundOutcome, Team, WorldState};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error("package validation failed:\n{0}")]
    Validation(Report),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {error}")]
    Io { path: String, error: std::io::Error },
    #[error("trace: {0}")]
    Trace(String),
}

impl HarnessError {
    /// Validation problems (exit code 1) as opposed to runtime failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            HarnessError::Map(_)
                | HarnessError::Rules(_)
                | HarnessError::Validation(_)
                | HarnessError::Config(_)
                | HarnessError::Trace(_)
        )
    }
}

/// Who controls a team.
#[derive(Clone, Debug)]
pub enum Controller {
    Native,
    Scripted(Vec<RulePackage>),
}

impl Controller {
    /// `native`, `empty` (scripted with no packages), `scripted` (the
    /// default stack for `map`) or `scripted:PKG,PKG,...`.
    pub fn parse(spec: &str, map: &str) -> Result<Controller, HarnessError> {
        match spec.trim() {
            "native" => Ok(Controller::Native),
            "empty" => Ok(Controller::Scripted(Vec::new())),
            "scripted" => Ok(Controller::Scripted(default_stack(map))),
            s => match s.strip_prefix("scripted:") {
                Some(list) => Ok(Controller::Scripted(RulePackage::resolve_list(list)?)),
                None => Err(HarnessError::Config(format!(
                    "unknown controller {s:?} (expected native, empty, scripted or scripted:PKGS)"
                ))),
            },
        }
    }

    pub fn is_native(&self) -> bool {
        matches!(self, Controller::Native)
    }
}

/// Everything needed to reproduce a match, and the trace header payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchConfig {
    /// Fixture name or path to a map file.
    pub map: String,
    pub rounds: u32,
    pub matches: u32,
    pub ct: String,
    pub t: String,
    pub seed: u64,
    pub ct_size: usize,
    pub t_size: usize,
    pub busy_cadence: u32,
    pub max_steps: u64,
    pub max_choice_points: usize,
    pub game: GameConfig,
}

impl Default for MatchConfig {
    fn default() -> Self {
        let limits = Limits::default();
        MatchConfig {
            map: "warehouse".into(),
            rounds: 12,
            matches: 10,
            ct: "native".into(),
            t: "native".into(),
            seed: 42,
            ct_size: 5,
            t_size: 5,
            busy_cadence: 5,
            max_steps: limits.max_steps,
            max_choice_points: limits.max_choice_points,
            game: GameConfig::default(),
        }
    }
}

impl MatchConfig {
    pub fn mind_config(&self) -> MindConfig {
        MindConfig {
            limits: Limits {
                max_steps: self.max_steps,
                max_choice_points: self.max_choice_points,
            },
            busy_cadence: self.busy_cadence,
            timing: false,
        }
    }

    pub fn load_map(&self) -> Result<MapDefinition, HarnessError> {
        if let Some(m) = MapDefinition::fixture(&self.map) {
            return Ok(m);
        }
        Ok(MapDefinition::load(Path::new(&self.map))?)
    }

    /// Map, controllers and templates, checked once for many matches.
    pub fn prepare(&self) -> Result<Prepared, HarnessError> {
        if self.rounds == 0 || self.matches == 0 {
            return Err(HarnessError::Config("rounds and matches must be at least 1".into()));
        }
        if self.ct_size + self.t_size == 0 {
            return Err(HarnessError::Config("no bots".into()));
        }
        let map = Arc::new(self.load_map()?);
        let side = |spec: &str| -> Result<Side, HarnessError> {
            let controller = Controller::parse(spec, &map.name)?;
            let template = match &controller {
                Controller::Native => None,
                Controller::Scripted(pkgs) => {
                    let report = validate_stack(pkgs);
                    if report.has_errors() {
                        return Err(HarnessError::Validation(report));
                    }
                    Some(MindTemplate::new(pkgs)?)
                }
            };
            Ok(Side { controller, template })
        };
        let (ct, t) = (side(&self.ct)?, side(&self.t)?);
        Ok(Prepared {
            map,
            game: Arc::new(self.game.clone()),
            ct,
            t,
            config: self.clone(),
        })
    }
}

pub struct Side {
    pub controller: Controller,
    pub template: Option<MindTemplate>,
}

/// A checked configuration, shareable between match threads.
pub struct Prepared {
    pub map: Arc<MapDefinition>,
    pub game: Arc<GameConfig>,
    pub ct: Side,
    pub t: Side,
    pub config: MatchConfig,
}

impl Prepared {
    pub fn new_match(&self, seed: u64) -> Match {
        Match::new(self, seed, self.config.mind_config())
    }

    pub fn run(&self, seed: u64, perf: bool) -> MatchResult {
        let mut mind = self.config.mind_config();
        mind.timing = perf;
        let mut m = Match::new(self, seed, mind);
        m.perf = perf;
        for _ in 0..self.config.rounds {
            m.play_round();
        }
        m.into_result()
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchCounts {
    pub ct_wins: u32,
    pub t_wins: u32,
    pub ct_goal: u32,
    pub t_goal: u32,
}

impl MatchCounts {
    pub fn add(&mut self, o: &RoundOutcome) {
        let goal = u32::from(o.goal_fulfilled);
        match o.winner {
            Team::Ct => {
                self.ct_wins += 1;
                self.ct_goal += goal;
            }
            Team::T => {
                self.t_wins += 1;
                self.t_goal += goal;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RoundResult {
    pub round: u32,
    pub outcome: RoundOutcome,
    /// Ticks played in the round.
    pub ticks: u32,
    pub events: Vec<Event>,
    pub actions: Vec<LifecycleRecord>,
    pub diagnostics: Vec<String>,
    pub timings: Vec<TickTiming>,
}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub seed: u64,
    pub rounds: Vec<RoundResult>,
    pub counts: MatchCounts,
}

impl MatchResult {
    pub fn trace_lines(&self) -> impl Iterator<Item = String> + '_ {
        self.rounds.iter().flat_map(|r| r.events.iter().map(|e| e.to_string()))
    }

    pub fn action_lines(&self) -> impl Iterator<Item = String> + '_ {
        self.rounds.iter().flat_map(|r| r.actions.iter().map(|a| a.to_string()))
    }

    pub fn diagnostics(&self) -> impl Iterator<Item = &String> + '_ {
        self.rounds.iter().flat_map(|r| r.diagnostics.iter())
    }

    pub fn timings(&self) -> impl Iterator<Item = &TickTiming> + '_ {
        self.rounds.iter().flat_map(|r| r.timings.iter())
    }
}

/// A match in progress: the world, one brain per bot and a blackboard per
/// team. Bots `0..ct_size` are CT, the rest T.
pub struct Match {
    pub world: WorldState,
    pub brains: Vec<Box<dyn Brain>>,
    pub boards: [Blackboard; 2],
    pub perf: bool,
    seed: u64,
    results: Vec<RoundResult>,
    counts: MatchCounts,
}

impl Match {
    fn new(p: &Prepared, seed: u64, mind: MindConfig) -> Match {
        let c = &p.config;
        let world = WorldState::new(p.map.clone(), p.game.clone(), c.ct_size, c.t_size, seed);
        let boards = [new_blackboard(), new_blackboard()];
        let snapshot = Arc::new(world.clone());
        let brains = (0..c.ct_size + c.t_size)
            .map(|id| {
                let (side, board) = if id < c.ct_size { (&p.ct, &boards[0]) } else { (&p.t, &boards[1]) };
                let brain: Box<dyn Brain> = match &side.template {
                    None => Box::new(NativeBaseline::new(id)),
                    Some(t) => Box::new(t.instantiate(id, &snapshot, board.clone(), mind)),
                };
                brain
            })
            .collect();
        Match {
            world,
            brains,
            boards,
            perf: false,
            seed,
            results: Vec::new(),
            counts: MatchCounts::default(),
        }
    }

    /// A match with hand-built brains, e.g. for scenario tests.
    pub fn with_brains(world: WorldState, brains: Vec<Box<dyn Brain>>, boards: [Blackboard; 2], seed: u64) -> Match {
        Match {
            world,
            brains,
            boards,
            perf: false,
            seed,
            results: Vec::new(),
            counts: MatchCounts::default(),
        }
    }

    pub fn rounds(&self) -> &[RoundResult] {
        &self.results
    }

    pub fn counts(&self) -> MatchCounts {
        self.counts
    }

    /// Plays one full round and returns its result.
    pub fn play_round(&mut self) -> &RoundResult {
        self.play_round_observed(|_, _| {})
    }

    /// Like [`Match::play_round`], calling `watch` with each tick's world
    /// before the bots decide, and with the new intents.
    pub fn play_round_observed(&mut self, mut watch: impl FnMut(&WorldState, &[Intent])) -> &RoundResult {
        let mut events = self.world.start_round();
        for board in &self.boards {
            *board.borrow_mut() = KnowledgeBase::new();
        }
        let mut snap = Arc::new(self.world.clone());
        for b in &mut self.brains {
            b.begin_round(&snap);
            b.take_reasoning_time();
        }
        let mut actions = Vec::new();
        let mut timings = Vec::new();
        // a round can only run past its clock through a bug; stop anyway
        let limit = snap.config.round_ticks + snap.config.buy_ticks + 1;
        let outcome = loop {
            if let Some(o) = snap.check_win() {
                break o;
            }
            if snap.tick > limit {
                break crate::sim::classify(
                    crate::sim::Cause::TimeExpired,
                    snap.alive_count(Team::Ct),
                    snap.alive_count(Team::T),
                );
            }
            let start = self.perf.then(Instant::now);
            let intents: Vec<Intent> = self.brains.iter_mut().map(|b| b.decide(&snap, &mut actions)).collect();
            watch(&snap, &intents);
            let step_start = self.perf.then(Instant::now);
            let (next, ev) = snap.step(&intents);
            let step_ns = step_start.map(|s| s.elapsed().as_nanos() as u64);
            let next = Arc::new(next);
            for b in &mut self.brains {
                b.observe(snap.match_tick, &next, &ev, &mut actions);
            }
            if let (Some(start), Some(step_ns)) = (start, step_ns) {
                let reasoning: u64 = self.brains.iter_mut().map(|b| b.take_reasoning_time().as_nanos() as u64).sum();
                timings.push(TickTiming {
                    reasoning_ns: reasoning,
                    step_ns,
                    total_ns: start.elapsed().as_nanos() as u64,
                });
            }
            events.extend(ev);
            snap = next;
        };
        let mut world = Arc::try_unwrap(snap).unwrap_or_else(|a| (*a).clone());
        events.extend(world.finish_round(&outcome));
        let ticks = world.tick;
        self.world = world;
        self.counts.add(&outcome);
        let diagnostics = self.brains.iter_mut().flat_map(|b| b.take_diagnostics()).collect();
        self.results.push(RoundResult {
            round: self.world.round,
            outcome,
            ticks,
            events,
            actions,
            diagnostics,
            timings,
        });
        self.results.last().expect("just pushed")
    }

    pub fn into_result(self) -> MatchResult {
        MatchResult {
            seed: self.seed,
            rounds: self.results,
            counts: self.counts,
        }
    }
}

/// Prepares `config` and plays one match with `seed`.
pub fn run_match(config: &MatchConfig, seed: u64) -> Result<MatchResult, HarnessError> {
    Ok(config.prepare()?.run(seed, false))
}
