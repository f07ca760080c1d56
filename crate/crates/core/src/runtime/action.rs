//! High-level actions: lifecycle, queueing and low-level controllers.

use std::collections::VecDeque;
use std::fmt;

use crate::sim::{bot_name, BotId, Event, Intent, WorldState, Weapon, WpId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Goto,
    Attack,
    LiberateHostages,
    Guard,
    BuyWeapon,
    Wait,
}

impl ActionKind {
    pub const ALL: [ActionKind; 6] = [
        ActionKind::Goto,
        ActionKind::Attack,
        ActionKind::LiberateHostages,
        ActionKind::Guard,
        ActionKind::BuyWeapon,
        ActionKind::Wait,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Goto => "goto",
            ActionKind::Attack => "attack",
            ActionKind::LiberateHostages => "liberate_hostages",
            ActionKind::Guard => "guard",
            ActionKind::BuyWeapon => "buy_weapon",
            ActionKind::Wait => "wait",
        }
    }

    pub fn from_name(s: &str) -> Option<ActionKind> {
        ActionKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// What an action does, with its resolved arguments.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ActionSpec {
    Goto(WpId),
    Attack(BotId),
    LiberateHostages,
    Guard(WpId),
    Buy(Weapon),
    Wait(u32),
}

impl ActionSpec {
    pub fn kind(&self) -> ActionKind {
        match self {
            ActionSpec::Goto(_) => ActionKind::Goto,
            ActionSpec::Attack(_) => ActionKind::Attack,
            ActionSpec::LiberateHostages => ActionKind::LiberateHostages,
            ActionSpec::Guard(_) => ActionKind::Guard,
            ActionSpec::Buy(_) => ActionKind::BuyWeapon,
            ActionSpec::Wait(_) => ActionKind::Wait,
        }
    }

    /// `kind(args)` as written in the lifecycle log.
    pub fn render(&self, world: &WorldState) -> String {
        let args = match self {
            ActionSpec::Goto(w) | ActionSpec::Guard(w) => world.map.name_of(*w).to_string(),
            ActionSpec::Attack(b) => bot_name(*b),
            ActionSpec::LiberateHostages => String::new(),
            ActionSpec::Buy(w) => w.name().to_string(),
            ActionSpec::Wait(n) => n.to_string(),
        };
        format!("{}({args})", self.kind().name())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ActionStatus {
    Running,
    Completed,
    Interrupted,
    Failed,
}

/// A running bot task. `G` is how goals are represented: logic terms for
/// scripted minds, a small enum for the native baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct HighLevelAction<G> {
    pub id: u64,
    pub owner: BotId,
    pub spec: ActionSpec,
    /// `None` reads as `true`.
    pub motivation: Option<G>,
    pub continuation: Option<G>,
    pub status: ActionStatus,
    /// Ticks this action has been active (controller calls).
    pub active_ticks: u32,
    /// Ticks spent guarding at the guard waypoint.
    pub guarded_ticks: u32,
    /// Last tick whose motivation check this action passed.
    pub checked_tick: Option<u64>,
    pub rendered: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LifecycleEvent {
    Started,
    Interrupted,
    Completed,
    Failed,
}

impl LifecycleEvent {
    pub fn name(self) -> &'static str {
        match self {
            LifecycleEvent::Started => "started",
            LifecycleEvent::Interrupted => "interrupted",
            LifecycleEvent::Completed => "completed",
            LifecycleEvent::Failed => "failed",
        }
    }
}

/// One line of the action log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LifecycleRecord {
    pub tick: u64,
    pub bot: BotId,
    pub action_id: u64,
    pub event: LifecycleEvent,
    pub action: String,
}

impl fmt::Display for LifecycleRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tick={} bot={} event={} action={}",
            self.tick,
            bot_name(self.bot),
            self.event.name(),
            self.action
        )
    }
}

/// The active action (front) and the FIFO queue behind it.
#[derive(Clone, Debug)]
pub struct Lifecycle<G> {
    owner: BotId,
    queue: VecDeque<HighLevelAction<G>>,
    next_id: u64,
}

impl<G: Clone> Lifecycle<G> {
    pub fn new(owner: BotId) -> Self {
        Lifecycle {
            owner,
            queue: VecDeque::new(),
            next_id: 1,
        }
    }

    pub fn active(&self) -> Option<&HighLevelAction<G>> {
        self.queue.front()
    }

    pub fn queued(&self) -> impl Iterator<Item = &HighLevelAction<G>> {
        self.queue.iter()
    }

    pub fn is_idle(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn start(
        &mut self,
        tick: u64,
        world: &WorldState,
        spec: ActionSpec,
        motivation: Option<G>,
        continuation: Option<G>,
        log: &mut Vec<LifecycleRecord>,
    ) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        let rendered = spec.render(world);
        log.push(LifecycleRecord {
            tick,
            bot: self.owner,
            action_id: id,
            event: LifecycleEvent::Started,
            action: rendered.clone(),
        });
        self.queue.push_back(HighLevelAction {
            id,
            owner: self.owner,
            spec,
            motivation,
            continuation,
            status: ActionStatus::Running,
            active_ticks: 0,
            guarded_ticks: 0,
            checked_tick: None,
            rendered,
        });
        id
    }

    fn finish(&mut self, tick: u64, status: ActionStatus, log: &mut Vec<LifecycleRecord>) -> HighLevelAction<G> {
        let mut a = self.queue.pop_front().expect("active action");
        a.status = status;
        let event = match status {
            ActionStatus::Completed => LifecycleEvent::Completed,
            ActionStatus::Interrupted => LifecycleEvent::Interrupted,
            _ => LifecycleEvent::Failed,
        };
        log.push(LifecycleRecord {
            tick,
            bot: self.owner,
            action_id: a.id,
            event,
            action: a.rendered.clone(),
        });
        a
    }

    /// Checks the active action's motivation, promoting queued actions past
    /// every interrupted one. Actions already checked this tick are not
    /// re-evaluated.
    pub fn check_motivations(
        &mut self,
        tick: u64,
        log: &mut Vec<LifecycleRecord>,
        mut holds: impl FnMut(&G) -> bool,
    ) {
        while let Some(a) = self.queue.front_mut() {
            if a.checked_tick == Some(tick) {
                return;
            }
            let keep = a.motivation.as_ref().is_none_or(&mut holds);
            if keep {
                a.checked_tick = Some(tick);
                return;
            }
            self.finish(tick, ActionStatus::Interrupted, log);
        }
    }

    /// Low-level intent for this tick from the active action. Actions whose
    /// controller cannot proceed fail here and the next one is tried.
    pub fn intent(&mut self, world: &WorldState, log: &mut Vec<LifecycleRecord>) -> Intent {
        while let Some(a) = self.queue.front_mut() {
            match control(a, world) {
                Some(intent) => return intent,
                None => {
                    self.finish(world.match_tick, ActionStatus::Failed, log);
                }
            }
        }
        Intent::Idle
    }

    /// Updates the active action against the post-step world. Returns the
    /// finished action when it completed, so its continuation can run.
    pub fn settle(
        &mut self,
        tick: u64,
        after: &WorldState,
        events: &[Event],
        log: &mut Vec<LifecycleRecord>,
    ) -> Option<HighLevelAction<G>> {
        if !after.bots[self.owner].alive() {
            while !self.queue.is_empty() {
                self.finish(tick, ActionStatus::Failed, log);
            }
            return None;
        }
        let a = self.queue.front()?;
        let status = outcome(a, after, events)?;
        let done = self.finish(tick, status, log);
        (status == ActionStatus::Completed).then_some(done)
    }

    /// Drops everything without logging (round reset).
    pub fn clear(&mut self) {
        self.queue.clear();
    }
}

/// Next waypoint toward `target` from wherever the bot is, or `None` when
/// it is already there.
pub fn step_toward(world: &WorldState, bot: BotId, target: WpId) -> Option<WpId> {
    let pos = world.bots[bot].pos;
    let graph = world.map.graph();
    match pos.node() {
        Some(here) => graph.next_hop(here, target),
        None => {
            let len = world.edge_len(&pos);
            let ahead = graph.distance(pos.to, target).map(|d| d + len - pos.progress);
            let back = graph.distance(pos.from, target).map(|d| d + pos.progress);
            match (ahead, back) {
                (Some(a), Some(b)) if b < a => Some(pos.from),
                (Some(_), _) => Some(pos.to),
                (None, Some(_)) => Some(pos.from),
                (None, None) => None,
            }
        }
    }
}

fn move_or_idle(world: &WorldState, bot: BotId, target: WpId) -> Option<Intent> {
    if world.bots[bot].pos.node() == Some(target) {
        return Some(Intent::Idle);
    }
    step_toward(world, bot, target).map(Intent::Move)
}

/// The per-tick controller. `None` means the action cannot proceed.
fn control<G>(a: &mut HighLevelAction<G>, world: &WorldState) -> Option<Intent> {
    a.active_ticks += 1;
    let me = a.owner;
    match a.spec {
        ActionSpec::Goto(w) => move_or_idle(world, me, w),
        ActionSpec::Attack(t) => {
            if !world.bots[t].alive() {
                return Some(Intent::Idle);
            }
            let (mine, theirs) = (world.bot_waypoint(me), world.bot_waypoint(t));
            let d = world.bot_distance(me, t);
            if !world.map.visible(mine, theirs) || d > world.config.view_range_mm {
                return move_or_idle(world, me, theirs);
            }
            if d > world.config.engage_range_mm {
                if let Some(next) = step_toward(world, me, theirs) {
                    return Some(Intent::Advance(next, t));
                }
            }
            Some(Intent::Attack(t))
        }
        ActionSpec::LiberateHostages => world.bots[me].pos.node().map(|_| Intent::Interact),
        ActionSpec::Guard(w) => {
            if world.bots[me].pos.node() == Some(w) {
                a.guarded_ticks += 1;
                Some(Intent::Turn(world.bots[me].facing + world.config.turn_deg))
            } else {
                move_or_idle(world, me, w)
            }
        }
        ActionSpec::Buy(w) => Some(Intent::Buy(w)),
        ActionSpec::Wait(_) => Some(Intent::Idle),
    }
}

/// Terminal status reached by the step just taken, if any.
fn outcome<G>(a: &HighLevelAction<G>, after: &WorldState, events: &[Event]) -> Option<ActionStatus> {
    let me = a.owner;
    let by_me = |kind: &str| events.iter().any(|e| e.bot == Some(me) && e.kind == kind);
    match a.spec {
        ActionSpec::Goto(w) => (after.bots[me].pos.node() == Some(w)).then_some(ActionStatus::Completed),
        ActionSpec::Attack(t) => {
            if !after.bots[t].alive() {
                Some(ActionStatus::Completed)
            } else if after.bots[me].ammo <= 0 {
                Some(ActionStatus::Failed)
            } else {
                None
            }
        }
        ActionSpec::LiberateHostages => Some(if after.followers(me).next().is_some() {
            ActionStatus::Completed
        } else {
            ActionStatus::Failed
        }),
        ActionSpec::Guard(_) => {
            (a.guarded_ticks >= after.config.guard_ticks).then_some(ActionStatus::Completed)
        }
        ActionSpec::Buy(_) => {
            if by_me("buy") {
                Some(ActionStatus::Completed)
            } else {
                Some(ActionStatus::Failed)
            }
        }
        ActionSpec::Wait(n) => (a.active_ticks >= n.max(1)).then_some(ActionStatus::Completed),
    }
}
