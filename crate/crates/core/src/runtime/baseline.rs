//! The native baseline bot: a finite-state controller making the same
//! decisions as the shipped `baseline` rule package.

use std::sync::Arc;

use super::action::{ActionSpec, Lifecycle, LifecycleRecord};
use super::mind::Brain;
use crate::sim::{bot_name, BotId, Event, HostageLoc, Intent, Phase, Tag, Team, Weapon, WorldState, WpId};

/// Goals of native actions: motivations and continuations.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NativeGoal {
    /// No enemy is in view while the bot has ammunition.
    Calm,
    /// The target is alive and in view.
    Engaged(BotId),
    Liberate,
    Guard(WpId),
}

fn engaged(w: &WorldState, b: BotId) -> bool {
    w.bots[b].ammo > 0 && visible_enemies(w, b).next().is_some()
}

fn visible_enemies(w: &WorldState, b: BotId) -> impl Iterator<Item = BotId> + '_ {
    let team = w.bots[b].team;
    (0..w.bots.len()).filter(move |&e| w.bots[e].team != team && w.in_fov(b, e))
}

fn holds(w: &WorldState, b: BotId, goal: NativeGoal) -> bool {
    match goal {
        NativeGoal::Calm => !engaged(w, b),
        NativeGoal::Engaged(e) => {
            w.bots[e].alive() && w.bots[e].team != w.bots[b].team && w.in_fov(b, e)
        }
        NativeGoal::Liberate | NativeGoal::Guard(_) => true,
    }
}

/// Nearest visible enemy by distance, ties to the smaller name.
pub fn nearest_visible_enemy(w: &WorldState, b: BotId) -> Option<BotId> {
    if w.bots[b].ammo <= 0 {
        return None;
    }
    visible_enemies(w, b).min_by_key(|&e| (w.bot_distance(b, e), bot_name(e)))
}

/// Nearest of `candidates` by path cost from the bot, ties to the smaller
/// waypoint name.
fn nearest(w: &WorldState, b: BotId, candidates: impl Iterator<Item = WpId>) -> Option<WpId> {
    let here = w.bot_waypoint(b);
    candidates
        .filter_map(|x| w.map.path_cost(here, x).map(|c| (c, w.map.name_of(x), x)))
        .min()
        .map(|(_, _, x)| x)
}

pub fn nearest_tagged(w: &WorldState, b: BotId, tag: Tag) -> Option<WpId> {
    nearest(w, b, w.map.tagged(tag))
}

pub fn nearest_free_hostage(w: &WorldState, b: BotId) -> Option<WpId> {
    nearest(
        w,
        b,
        w.hostages.iter().filter_map(|h| match h.loc {
            HostageLoc::At(at) => Some(at),
            _ => None,
        }),
    )
}

type Plan = (ActionSpec, Option<NativeGoal>, Option<NativeGoal>);

pub struct NativeBaseline {
    bot: BotId,
    lifecycle: Lifecycle<NativeGoal>,
    bought_round: Option<u32>,
    last_guard: Option<(u32, WpId)>,
}

impl NativeBaseline {
    pub fn new(bot: BotId) -> Self {
        NativeBaseline {
            bot,
            lifecycle: Lifecycle::new(bot),
            bought_round: None,
            last_guard: None,
        }
    }

    pub fn lifecycle(&self) -> &Lifecycle<NativeGoal> {
        &self.lifecycle
    }

    fn plan(&mut self, w: &WorldState) -> Option<Plan> {
        let b = self.bot;
        if w.phase == Phase::Buy {
            let price = w.config.weapon(Weapon::Rifle).price;
            if self.bought_round == Some(w.round) || w.bots[b].money < price {
                return None;
            }
            self.bought_round = Some(w.round);
            return Some((ActionSpec::Buy(Weapon::Rifle), None, None));
        }
        if let Some(e) = nearest_visible_enemy(w, b) {
            return Some((ActionSpec::Attack(e), Some(NativeGoal::Engaged(e)), None));
        }
        let calm = Some(NativeGoal::Calm);
        if w.bots[b].team == Team::Ct {
            if w.followers(b).next().is_some() {
                let zone = nearest_tagged(w, b, Tag::RescueZone)?;
                return Some((ActionSpec::Goto(zone), calm, None));
            }
            if let Some(h) = nearest_free_hostage(w, b) {
                return Some((ActionSpec::Goto(h), calm, Some(NativeGoal::Liberate)));
            }
            return Some((ActionSpec::Wait(4), calm, None));
        }
        match self.next_guard_point(w) {
            Some(g) => {
                self.last_guard = Some((w.round, g));
                Some((ActionSpec::Goto(g), calm, Some(NativeGoal::Guard(g))))
            }
            None => Some((ActionSpec::Wait(4), calm, None)),
        }
    }

    fn next_guard_point(&self, w: &WorldState) -> Option<WpId> {
        match self.last_guard {
            Some((r, prev)) if r == w.round => {
                let mut ambush: Vec<WpId> = w.map.tagged(Tag::AmbushPoint).collect();
                ambush.sort_by(|a, b| w.map.name_of(*a).cmp(w.map.name_of(*b)));
                let prev = w.map.name_of(prev);
                ambush
                    .iter()
                    .copied()
                    .find(|&x| w.map.name_of(x) > prev)
                    .or_else(|| ambush.first().copied())
            }
            _ => nearest_tagged(w, self.bot, Tag::HostagePoint),
        }
    }

    fn check(&mut self, w: &WorldState, log: &mut Vec<LifecycleRecord>) {
        let b = self.bot;
        self.lifecycle.check_motivations(w.match_tick, log, |g| holds(w, b, *g));
    }
}

impl Brain for NativeBaseline {
    fn bot(&self) -> BotId {
        self.bot
    }

    fn begin_round(&mut self, _world: &Arc<WorldState>) {
        self.lifecycle.clear();
    }

    fn decide(&mut self, world: &Arc<WorldState>, log: &mut Vec<LifecycleRecord>) -> Intent {
        let w: &WorldState = world;
        if !w.bots[self.bot].alive() {
            return Intent::Idle;
        }
        self.check(w, log);
        if self.lifecycle.is_idle() {
            if let Some((spec, m, c)) = self.plan(w) {
                self.lifecycle.start(w.match_tick, w, spec, m, c, log);
            }
            self.check(w, log);
        }
        self.lifecycle.intent(w, log)
    }

    fn observe(
        &mut self,
        tick: u64,
        after: &Arc<WorldState>,
        events: &[Event],
        log: &mut Vec<LifecycleRecord>,
    ) {
        let Some(done) = self.lifecycle.settle(tick, after, events, log) else {
            return;
        };
        let next = match done.continuation {
            Some(NativeGoal::Liberate) => (ActionSpec::LiberateHostages, None),
            Some(NativeGoal::Guard(g)) => (ActionSpec::Guard(g), Some(NativeGoal::Calm)),
            _ => return,
        };
        self.lifecycle.start(tick, after, next.0, next.1, None, log);
    }
}
