//! Bot minds: the per-tick reasoning driver for scripted and native bots.

use std::cell::RefCell;
use std::collections::HashSet;
use std::rc::Rc;
use std::sync::Arc;
use std::time::Duration;

use logibot_engine::{EngineError, KnowledgeBase, Limits, PredKey, Solution, Term, LIST_LIBRARY};

use super::action::{Lifecycle, LifecycleRecord};
use super::natives::{register_all, AgentHost, Blackboard, PendingAction};
use crate::rules::{RuleError, RulePackage};
use crate::sim::{bot_name, BotId, Event, Intent, Team, WorldState};

/// Clauses every scripted mind starts with.
pub const RUNTIME_PRELUDE: &str = "and(A, B) :- call(A), call(B).\n";

/// Runtime-owned memory predicates, cleared at round start.
pub const ROUND_SCOPED: &[(&str, usize)] = &[("bought_this_round", 1)];

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MindConfig {
    /// Budget for each proof (reasoning, motivation or continuation).
    pub limits: Limits,
    /// Reasoning period in round ticks while an action is active.
    pub busy_cadence: u32,
    /// Measure wall time spent proving goals.
    pub timing: bool,
}

impl Default for MindConfig {
    fn default() -> Self {
        MindConfig {
            limits: Limits::default(),
            busy_cadence: 5,
            timing: false,
        }
    }
}

/// Anything that controls one bot.
pub trait Brain {
    fn bot(&self) -> BotId;

    /// Resets per-round state. Called after the world's round has started.
    fn begin_round(&mut self, world: &Arc<WorldState>);

    /// Motivations, reasoning and the low-level intent for this tick.
    fn decide(&mut self, world: &Arc<WorldState>, log: &mut Vec<LifecycleRecord>) -> Intent;

    /// Completion checks against the world after the step of `tick`.
    fn observe(
        &mut self,
        tick: u64,
        after: &Arc<WorldState>,
        events: &[Event],
        log: &mut Vec<LifecycleRecord>,
    );

    fn take_diagnostics(&mut self) -> Vec<String> {
        Vec::new()
    }

    fn as_scripted(&mut self) -> Option<&mut ScriptedMind> {
        None
    }

    /// Proof time since the last call (zero unless timing is on).
    fn take_reasoning_time(&mut self) -> Duration {
        Duration::ZERO
    }
}

pub fn new_blackboard() -> Blackboard {
    Rc::new(RefCell::new(KnowledgeBase::new()))
}

/// A knowledge base with natives, prelude and packages loaded; cloning it
/// is cheap, so one template serves every bot of a team.
#[derive(Clone)]
pub struct MindTemplate {
    kb: KnowledgeBase<AgentHost>,
    packages: Vec<String>,
}

impl MindTemplate {
    /// Natives and prelude only.
    pub fn empty() -> Self {
        let mut kb = KnowledgeBase::new();
        register_all(&mut kb).expect("natives register on an empty base");
        kb.consult(RUNTIME_PRELUDE).expect("prelude parses");
        kb.consult(LIST_LIBRARY).expect("list library parses");
        for (name, arity) in ROUND_SCOPED {
            kb.declare_dynamic(PredKey::new(*name, *arity)).expect("not a native");
        }
        MindTemplate {
            kb,
            packages: Vec::new(),
        }
    }

    pub fn new(packages: &[RulePackage]) -> Result<Self, RuleError> {
        let mut t = MindTemplate::empty();
        t.load(packages)?;
        Ok(t)
    }

    /// Loads packages in level order (stable within a level). On error the
    /// template is unchanged.
    pub fn load(&mut self, packages: &[RulePackage]) -> Result<(), RuleError> {
        let mut kb = self.kb.clone();
        let mut ordered: Vec<&RulePackage> = packages.iter().collect();
        ordered.sort_by_key(|p| p.level);
        for p in &ordered {
            p.load_into(&mut kb)?;
        }
        self.kb = kb;
        self.packages.extend(ordered.iter().map(|p| p.name.clone()));
        Ok(())
    }

    pub fn packages(&self) -> &[String] {
        &self.packages
    }

    pub fn kb(&self) -> &KnowledgeBase<AgentHost> {
        &self.kb
    }

    pub fn instantiate(
        &self,
        bot: BotId,
        world: &Arc<WorldState>,
        blackboard: Blackboard,
        config: MindConfig,
    ) -> ScriptedMind {
        ScriptedMind {
            lifecycle: Lifecycle::new(bot),
            prover: Prover {
                kb: self.kb.clone(),
                host: AgentHost::new(world.clone(), bot, blackboard),
                config,
                diagnostics: Vec::new(),
                reported: HashSet::new(),
                reasoning: Duration::ZERO,
                last_steps: 0,
            },
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Proof {
    Success,
    Failure,
    Error,
}

struct Prover {
    kb: KnowledgeBase<AgentHost>,
    host: AgentHost,
    config: MindConfig,
    diagnostics: Vec<String>,
    reported: HashSet<String>,
    reasoning: Duration,
    last_steps: u64,
}

impl Prover {
    fn prove(&mut self, goal: &Term, what: &str) -> Proof {
        #[cfg(not(target_arch = "wasm32"))]
        let start = self.config.timing.then(std::time::Instant::now);
        let mut stream = self.kb.solve_with_limits(goal, self.config.limits);
        let result = stream.next_solution(&mut self.kb, &mut self.host);
        self.last_steps = stream.steps();
        drop(stream);
        #[cfg(not(target_arch = "wasm32"))]
        if let Some(start) = start {
            self.reasoning += start.elapsed();
        }
        match result {
            Ok(Some(_)) => Proof::Success,
            Ok(None) => Proof::Failure,
            Err(e) => {
                self.report(what, &e);
                Proof::Error
            }
        }
    }

    /// Records a diagnostic; identical messages are logged once per mind.
    fn report(&mut self, what: &str, e: &EngineError) {
        let msg = format!("{what}: {e}");
        if self.reported.insert(msg.clone()) {
            self.diagnostics.push(format!(
                "tick={} bot={} diagnostic={msg}",
                self.host.world.match_tick,
                bot_name(self.host.bot)
            ));
        }
    }
}

/// A bot driven by rule packages.
pub struct ScriptedMind {
    lifecycle: Lifecycle<Term>,
    prover: Prover,
}

impl ScriptedMind {
    pub fn team(&self) -> Team {
        self.prover.host.world.bots[self.bot()].team
    }

    pub fn lifecycle(&self) -> &Lifecycle<Term> {
        &self.lifecycle
    }

    pub fn kb(&self) -> &KnowledgeBase<AgentHost> {
        &self.prover.kb
    }

    pub fn kb_mut(&mut self) -> &mut KnowledgeBase<AgentHost> {
        &mut self.prover.kb
    }

    /// Resolution steps used by the most recent proof.
    pub fn last_steps(&self) -> u64 {
        self.prover.last_steps
    }

    /// Loads more packages into this mind only; atomic like
    /// [`MindTemplate::load`].
    pub fn load_rule_packages(&mut self, packages: &[RulePackage]) -> Result<(), RuleError> {
        let mut kb = self.prover.kb.clone();
        let mut ordered: Vec<&RulePackage> = packages.iter().collect();
        ordered.sort_by_key(|p| p.level);
        for p in ordered {
            p.load_into(&mut kb)?;
        }
        self.prover.kb = kb;
        Ok(())
    }

    /// Rebinds the perception natives to `world`.
    pub fn bind_perception(&mut self, world: &Arc<WorldState>) {
        self.prover.host.world = world.clone();
        self.prover.host.active = self.lifecycle.active().map(|a| a.spec.kind());
    }

    /// Runs an ad-hoc query against the bound world, returning up to `max`
    /// solutions and the actions the proof requested. Requested actions are
    /// not queued.
    pub fn query(
        &mut self,
        text: &str,
        max: usize,
    ) -> Result<(Vec<Solution>, Vec<PendingAction>), EngineError> {
        let mut stream = self.prover.kb.query(text)?;
        let mut out = Vec::new();
        let result = loop {
            if out.len() >= max {
                break Ok(());
            }
            match stream.next_solution(&mut self.prover.kb, &mut self.prover.host) {
                Ok(Some(s)) => out.push(s),
                Ok(None) => break Ok(()),
                Err(e) => break Err(e),
            }
        };
        let started = std::mem::take(&mut self.prover.host.started);
        result.map(|()| (out, started))
    }

    fn enqueue_started(&mut self, tick: u64, log: &mut Vec<LifecycleRecord>) -> Vec<u64> {
        let started = std::mem::take(&mut self.prover.host.started);
        let world = self.prover.host.world.clone();
        started
            .into_iter()
            .map(|p| self.lifecycle.start(tick, &world, p.spec, p.motivation, p.continuation, log))
            .collect()
    }

    /// Proves `do_reasoning(Bot)` once against the bound world and queues
    /// every action the proof started, even if it later failed.
    pub fn tick_reason(&mut self, log: &mut Vec<LifecycleRecord>) -> Vec<u64> {
        let goal = Term::compound("do_reasoning", vec![Term::atom(&bot_name(self.bot()))]);
        self.prover.prove(&goal, "do_reasoning");
        self.enqueue_started(self.prover.host.world.match_tick, log)
    }

    /// Evaluates the active action's motivation (and those of actions
    /// promoted behind interrupted ones).
    pub fn check_motivations(&mut self, log: &mut Vec<LifecycleRecord>) {
        let tick = self.prover.host.world.match_tick;
        let prover = &mut self.prover;
        self.lifecycle.check_motivations(tick, log, |goal| {
            let ok = prover.prove(goal, "motivation") == Proof::Success;
            // actions started from inside a motivation proof are dropped
            prover.host.started.clear();
            ok
        });
        self.prover.host.active = self.lifecycle.active().map(|a| a.spec.kind());
    }
}

impl Brain for ScriptedMind {
    fn bot(&self) -> BotId {
        self.prover.host.bot
    }

    fn begin_round(&mut self, world: &Arc<WorldState>) {
        self.lifecycle.clear();
        self.bind_perception(world);
        for (name, arity) in ROUND_SCOPED {
            let head = Term::compound(name, (0..*arity as u32).map(Term::var).collect());
            self.prover.kb.retract_all(&head).expect("round-scoped predicates are dynamic");
        }
    }

    fn decide(&mut self, world: &Arc<WorldState>, log: &mut Vec<LifecycleRecord>) -> Intent {
        self.bind_perception(world);
        if !world.bots[self.bot()].alive() {
            return Intent::Idle;
        }
        self.check_motivations(log);
        let cadence = self.prover.config.busy_cadence.max(1);
        if self.lifecycle.is_idle() || world.tick.is_multiple_of(cadence) {
            self.tick_reason(log);
            self.check_motivations(log);
        }
        self.lifecycle.intent(world, log)
    }

    fn observe(
        &mut self,
        tick: u64,
        after: &Arc<WorldState>,
        events: &[Event],
        log: &mut Vec<LifecycleRecord>,
    ) {
        self.prover.host.world = after.clone();
        let Some(done) = self.lifecycle.settle(tick, after, events, log) else {
            return;
        };
        if let Some(goal) = &done.continuation {
            self.bind_perception(after);
            if self.prover.prove(goal, "continuation") == Proof::Failure {
                let msg = format!("continuation of action {} failed", done.id);
                self.prover.diagnostics.push(format!(
                    "tick={tick} bot={} diagnostic={msg}",
                    bot_name(self.bot())
                ));
            }
            // stamped with the completion tick so the log stays ordered
            self.enqueue_started(tick, log);
        }
    }

    fn take_diagnostics(&mut self) -> Vec<String> {
        std::mem::take(&mut self.prover.diagnostics)
    }

    fn take_reasoning_time(&mut self) -> Duration {
        std::mem::take(&mut self.prover.reasoning)
    }

    fn as_scripted(&mut self) -> Option<&mut ScriptedMind> {
        Some(self)
    }
}
