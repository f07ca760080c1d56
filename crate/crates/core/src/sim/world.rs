//! World state and the fixed-step game rules.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::geom::{angle_diff, bearing, distance, lerp, turn_toward, Point};
use super::map::{MapDefinition, Tag, WpId};
use super::rng::SplitMix64;

pub type BotId = usize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Team {
    Ct,
    T,
}

impl Team {
    pub fn name(self) -> &'static str {
        match self {
            Team::Ct => "ct",
            Team::T => "t",
        }
    }

    pub fn from_name(s: &str) -> Option<Team> {
        match s {
            "ct" => Some(Team::Ct),
            "t" => Some(Team::T),
            _ => None,
        }
    }

    pub fn other(self) -> Team {
        match self {
            Team::Ct => Team::T,
            Team::T => Team::Ct,
        }
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weapon {
    Pistol,
    Rifle,
}

impl Weapon {
    pub const ALL: [Weapon; 2] = [Weapon::Pistol, Weapon::Rifle];

    pub fn name(self) -> &'static str {
        match self {
            Weapon::Pistol => "pistol",
            Weapon::Rifle => "rifle",
        }
    }

    pub fn from_name(s: &str) -> Option<Weapon> {
        Weapon::ALL.into_iter().find(|w| w.name() == s)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeaponStats {
    /// Hit probability at point blank, in parts per million.
    pub accuracy_ppm: u32,
    pub damage: i32,
    pub ammo: i32,
    pub price: i64,
}

/// Tunable game constants. Lengths in millimetres, time in ticks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GameConfig {
    pub tick_ms: u32,
    pub round_ticks: u32,
    pub buy_ticks: u32,
    pub speed_mm: i64,
    pub turn_deg: i64,
    pub fov_half_deg: i64,
    pub view_range_mm: i64,
    pub hearing_range_mm: i64,
    /// Attackers close to this distance before firing when they can.
    pub engage_range_mm: i64,
    pub max_health: i32,
    pub start_money: i64,
    pub max_money: i64,
    pub win_award: i64,
    pub loss_award: i64,
    pub kill_award: i64,
    pub guard_ticks: u32,
    pub pistol: WeaponStats,
    pub rifle: WeaponStats,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            tick_ms: 250,
            round_ticks: 360,
            buy_ticks: 20,
            speed_mm: 1250,
            turn_deg: 45,
            fov_half_deg: 60,
            view_range_mm: 40_000,
            hearing_range_mm: 15_000,
            engage_range_mm: 20_000,
            max_health: 100,
            start_money: 1000,
            max_money: 16_000,
            win_award: 3000,
            loss_award: 1400,
            kill_award: 300,
            guard_ticks: 60,
            pistol: WeaponStats {
                accuracy_ppm: 600_000,
                damage: 15,
                ammo: 48,
                price: 0,
            },
            rifle: WeaponStats {
                accuracy_ppm: 800_000,
                damage: 25,
                ammo: 90,
                price: 800,
            },
        }
    }
}

impl GameConfig {
    pub fn weapon(&self, w: Weapon) -> &WeaponStats {
        match w {
            Weapon::Pistol => &self.pistol,
            Weapon::Rifle => &self.rifle,
        }
    }
}

/// Where a bot is: at `from` when `progress == 0`, otherwise `progress`
/// millimetres along the edge `from -> to`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    pub from: WpId,
    pub to: WpId,
    pub progress: i64,
}

impl Position {
    pub fn at(w: WpId) -> Self {
        Position {
            from: w,
            to: w,
            progress: 0,
        }
    }

    pub fn node(&self) -> Option<WpId> {
        (self.progress == 0).then_some(self.from)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BotState {
    pub id: BotId,
    pub name: String,
    pub team: Team,
    pub pos: Position,
    pub facing: i64,
    pub health: i32,
    pub weapon: Weapon,
    pub ammo: i32,
    pub money: i64,
    /// Changed position during the last step.
    pub moved: bool,
}

impl BotState {
    pub fn alive(&self) -> bool {
        self.health > 0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HostageLoc {
    At(WpId),
    /// Following `leader`; `trail` is the node the hostage currently
    /// occupies, one node behind the leader.
    Following { leader: BotId, trail: WpId },
    Rescued,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostageState {
    pub name: String,
    pub loc: HostageLoc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Buy,
    Play,
    Over,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Buy => "buy",
            Phase::Play => "play",
            Phase::Over => "over",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cause {
    HostagesRescued,
    TeamEliminatedT,
    TeamEliminatedCt,
    TimeExpired,
}

impl Cause {
    pub fn name(self) -> &'static str {
        match self {
            Cause::HostagesRescued => "hostages_rescued",
            Cause::TeamEliminatedT => "team_eliminated_T",
            Cause::TeamEliminatedCt => "team_eliminated_CT",
            Cause::TimeExpired => "time_expired",
        }
    }

    pub fn winner(self) -> Team {
        match self {
            Cause::HostagesRescued | Cause::TeamEliminatedT => Team::Ct,
            Cause::TeamEliminatedCt | Cause::TimeExpired => Team::T,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub winner: Team,
    pub cause: Cause,
    /// Objective achieved without wiping out the other team.
    pub goal_fulfilled: bool,
}

/// What a bot tries to do during one step.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Intent {
    Idle,
    /// Move toward an adjacent waypoint (or either end of the current edge).
    Move(WpId),
    /// Move like `Move` while keeping the facing turned toward a bot.
    Advance(WpId, BotId),
    /// Turn toward the target, then shoot if it is in view.
    Attack(BotId),
    /// Pick up free hostages here, or release own followers if none.
    Interact,
    Buy(Weapon),
    /// Turn toward an absolute heading.
    Turn(i64),
}

/// One trace event. `tick` counts ticks since the start of the match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub tick: u64,
    pub bot: Option<BotId>,
    pub kind: &'static str,
    pub payload: String,
}

/// Trace line: `tick;bot;event;payload`, with `-` for world events.
impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bot = self.bot.map(bot_name).unwrap_or_else(|| "-".to_string());
        write!(f, "{};{bot};{};{}", self.tick, self.kind, self.payload)
    }
}

#[derive(Clone, Debug)]
pub struct WorldState {
    pub map: Arc<MapDefinition>,
    pub config: Arc<GameConfig>,
    pub bots: Vec<BotState>,
    pub hostages: Vec<HostageState>,
    pub round: u32,
    /// Ticks elapsed in the current round.
    pub tick: u32,
    pub match_tick: u64,
    pub phase: Phase,
    pub rng: SplitMix64,
}

pub fn bot_name(id: BotId) -> String {
    format!("b{}", id + 1)
}

impl WorldState {
    /// A match with `ct` counter-terrorists (ids `b1..`) followed by `t`
    /// terrorists. Call [`WorldState::start_round`] before stepping.
    pub fn new(
        map: Arc<MapDefinition>,
        config: Arc<GameConfig>,
        ct: usize,
        t: usize,
        seed: u64,
    ) -> Self {
        let mut bots = Vec::with_capacity(ct + t);
        for id in 0..ct + t {
            let team = if id < ct { Team::Ct } else { Team::T };
            bots.push(BotState {
                id,
                name: bot_name(id),
                team,
                pos: Position::at(0),
                facing: 0,
                health: 0,
                weapon: Weapon::Pistol,
                ammo: 0,
                money: config.start_money,
                moved: false,
            });
        }
        WorldState {
            hostages: Vec::new(),
            map,
            config,
            bots,
            round: 0,
            tick: 0,
            match_tick: 0,
            phase: Phase::Over,
            rng: SplitMix64::new(seed),
        }
    }

    /// Respawns everyone and resets hostages. Survivors keep their weapon;
    /// everyone gets a full magazine.
    pub fn start_round(&mut self) -> Vec<Event> {
        self.round += 1;
        self.tick = 0;
        self.phase = if self.config.buy_ticks > 0 { Phase::Buy } else { Phase::Play };
        let mut events = vec![self.event(None, "round_start", format!("round={}", self.round))];
        let spawns_ct: Vec<WpId> = self.map.tagged(Tag::SpawnCt).collect();
        let spawns_t: Vec<WpId> = self.map.tagged(Tag::SpawnT).collect();
        let mut counts = [0usize; 2];
        for i in 0..self.bots.len() {
            let (list, k) = match self.bots[i].team {
                Team::Ct => (&spawns_ct, 0),
                Team::T => (&spawns_t, 1),
            };
            let spawn = list[counts[k] % list.len()];
            counts[k] += 1;
            let facing = self.map.graph().neighbours(spawn).first().and_then(|&(n, _)| {
                bearing(self.map.pos(spawn), self.map.pos(n))
            });
            let config = self.config.clone();
            let b = &mut self.bots[i];
            if !b.alive() {
                b.weapon = Weapon::Pistol;
            }
            b.ammo = config.weapon(b.weapon).ammo;
            b.health = config.max_health;
            b.pos = Position::at(spawn);
            b.facing = facing.unwrap_or(0);
            b.moved = false;
            let payload = format!("at={}", self.map.name_of(spawn));
            events.push(self.event(Some(i), "spawn", payload));
        }
        self.hostages = self
            .map
            .hostages
            .iter()
            .map(|h| HostageState {
                name: h.name.clone(),
                loc: HostageLoc::At(h.waypoint),
            })
            .collect();
        events
    }

    fn event(&self, bot: Option<BotId>, kind: &'static str, payload: String) -> Event {
        Event {
            tick: self.match_tick,
            bot,
            kind,
            payload,
        }
    }

    pub fn bot_by_name(&self, name: &str) -> Option<BotId> {
        let n: usize = name.strip_prefix('b')?.parse().ok()?;
        (n >= 1 && n <= self.bots.len() && bot_name(n - 1) == name).then(|| n - 1)
    }

    pub fn hostage_by_name(&self, name: &str) -> Option<usize> {
        self.hostages.iter().position(|h| h.name == name)
    }

    pub fn edge_len(&self, pos: &Position) -> i64 {
        if pos.from == pos.to {
            0
        } else {
            self.map.graph().edge_cost(pos.from, pos.to).unwrap_or(0)
        }
    }

    /// Coordinates of a bot.
    pub fn bot_point(&self, id: BotId) -> Point {
        let pos = &self.bots[id].pos;
        match pos.node() {
            Some(w) => self.map.pos(w),
            None => lerp(
                self.map.pos(pos.from),
                self.map.pos(pos.to),
                pos.progress,
                self.edge_len(pos),
            ),
        }
    }

    /// The waypoint a bot counts as standing at: its node, or the nearer
    /// end of its edge (the start on an exact tie).
    pub fn bot_waypoint(&self, id: BotId) -> WpId {
        let pos = &self.bots[id].pos;
        if pos.progress * 2 <= self.edge_len(pos) {
            pos.from
        } else {
            pos.to
        }
    }

    pub fn bot_distance(&self, a: BotId, b: BotId) -> i64 {
        distance(self.bot_point(a), self.bot_point(b))
    }

    pub fn alive_count(&self, team: Team) -> usize {
        self.bots.iter().filter(|b| b.team == team && b.alive()).count()
    }

    pub fn team_size(&self, team: Team) -> usize {
        self.bots.iter().filter(|b| b.team == team).count()
    }

    pub fn round_time_left(&self) -> u32 {
        self.config.round_ticks.saturating_sub(self.tick)
    }

    pub fn buy_ticks_left(&self) -> u32 {
        self.config.buy_ticks.saturating_sub(self.tick)
    }

    /// Field-of-view test: facing cone, view range and waypoint line of
    /// sight. Not symmetric.
    pub fn in_fov(&self, observer: BotId, target: BotId) -> bool {
        if observer == target {
            return false;
        }
        let (o, t) = (&self.bots[observer], &self.bots[target]);
        if !o.alive() || !t.alive() {
            return false;
        }
        let (po, pt) = (self.bot_point(observer), self.bot_point(target));
        if distance(po, pt) > self.config.view_range_mm {
            return false;
        }
        if let Some(dir) = bearing(po, pt) {
            if angle_diff(o.facing, dir) > self.config.fov_half_deg {
                return false;
            }
        }
        self.map.visible(self.bot_waypoint(observer), self.bot_waypoint(target))
    }

    /// Hostages currently following `leader`.
    pub fn followers(&self, leader: BotId) -> impl Iterator<Item = usize> + '_ {
        self.hostages.iter().enumerate().filter_map(move |(i, h)| match h.loc {
            HostageLoc::Following { leader: l, .. } if l == leader => Some(i),
            _ => None,
        })
    }

    pub fn rescued_count(&self) -> usize {
        self.hostages.iter().filter(|h| h.loc == HostageLoc::Rescued).count()
    }

    /// Shoots once. Preconditions are checked here; a violated one gives a
    /// failure event and consumes no randomness.
    pub fn resolve_attack(&mut self, attacker: BotId, target: BotId) -> Vec<Event> {
        let fail = |w: &Self, reason: &str| {
            vec![w.event(Some(attacker), "attack_failed", format!("target={} reason={reason}", bot_name(target)))]
        };
        if target >= self.bots.len() {
            return fail(self, "no_such_bot");
        }
        if !self.bots[attacker].alive() {
            return fail(self, "attacker_dead");
        }
        if !self.bots[target].alive() {
            return fail(self, "target_dead");
        }
        if self.bots[attacker].team == self.bots[target].team {
            return fail(self, "same_team");
        }
        if self.bots[attacker].ammo <= 0 {
            return fail(self, "no_ammo");
        }
        if !self.in_fov(attacker, target) {
            return fail(self, "not_in_view");
        }
        let stats = *self.config.weapon(self.bots[attacker].weapon);
        let range = self.config.view_range_mm;
        let d = self.bot_distance(attacker, target);
        let p = hit_probability_ppm(stats.accuracy_ppm, d, range);
        self.bots[attacker].ammo -= 1;
        let hit = self.rng.below(1_000_000) < p;
        let mut events = Vec::new();
        if !hit {
            events.push(self.event(Some(attacker), "miss", format!("target={}", bot_name(target))));
            return events;
        }
        let victim = &mut self.bots[target];
        victim.health = (victim.health - stats.damage).max(0);
        let left = victim.health;
        events.push(self.event(
            Some(attacker),
            "hit",
            format!("target={} damage={} health={left}", bot_name(target), stats.damage),
        ));
        if left == 0 {
            let award = self.config.kill_award;
            let max = self.config.max_money;
            let a = &mut self.bots[attacker];
            a.money = (a.money + award).min(max);
            events.push(self.event(Some(attacker), "kill", format!("target={}", bot_name(target))));
            // the victim's hostages stay where they are
            for h in &mut self.hostages {
                if let HostageLoc::Following { leader, trail } = h.loc {
                    if leader == target {
                        h.loc = HostageLoc::At(trail);
                    }
                }
            }
        }
        events
    }

    /// Advances the world by one tick. `intents[i]` belongs to bot `i`;
    /// missing entries mean idle. Dead bots' intents are ignored.
    ///
    /// Order: purchases, hostage interaction, movement and turning, attacks
    /// in ascending bot id, rescues, clock.
    pub fn step(&self, intents: &[Intent]) -> (WorldState, Vec<Event>) {
        let mut w = self.clone();
        let mut events = Vec::new();
        let n = w.bots.len();
        let intent = |i: usize| intents.get(i).copied().unwrap_or(Intent::Idle);
        for b in &mut w.bots {
            b.moved = false;
        }
        if w.phase == Phase::Over {
            return (w, events);
        }
        let playing = w.phase == Phase::Play;

        for i in 0..n {
            if let Intent::Buy(weapon) = intent(i) {
                if w.bots[i].alive() {
                    events.extend(w.buy(i, weapon));
                }
            }
        }
        if playing {
            for i in 0..n {
                if intent(i) == Intent::Interact && w.bots[i].alive() {
                    events.extend(w.interact(i));
                }
            }
            for i in 0..n {
                if !w.bots[i].alive() {
                    continue;
                }
                match intent(i) {
                    Intent::Move(to) => events.extend(w.move_bot(i, to, None)),
                    Intent::Advance(to, t) => events.extend(w.move_bot(i, to, (t < n).then_some(t))),
                    Intent::Turn(heading) => {
                        let b = &mut w.bots[i];
                        b.facing = turn_toward(b.facing, heading, w.config.turn_deg);
                    }
                    Intent::Attack(t) if t < n => {
                        if let Some(dir) = bearing(w.bot_point(i), w.bot_point(t)) {
                            let b = &mut w.bots[i];
                            b.facing = turn_toward(b.facing, dir, w.config.turn_deg);
                        }
                    }
                    _ => {}
                }
            }
            for i in 0..n {
                if let Intent::Attack(t) = intent(i) {
                    // a bot killed earlier in this pass does not shoot
                    if w.bots[i].alive() {
                        events.extend(w.resolve_attack(i, t));
                    }
                }
            }
            events.extend(w.rescue());
        }
        w.tick += 1;
        w.match_tick += 1;
        if w.phase == Phase::Buy && w.tick >= w.config.buy_ticks {
            w.phase = Phase::Play;
        }
        (w, events)
    }

    fn buy(&mut self, i: BotId, weapon: Weapon) -> Vec<Event> {
        let stats = *self.config.weapon(weapon);
        let reason = if self.phase != Phase::Buy {
            Some("not_buy_phase")
        } else if self.bots[i].money < stats.price {
            Some("no_money")
        } else {
            None
        };
        if let Some(reason) = reason {
            return vec![self.event(Some(i), "buy_failed", format!("weapon={} reason={reason}", weapon.name()))];
        }
        let b = &mut self.bots[i];
        b.money -= stats.price;
        b.weapon = weapon;
        b.ammo = stats.ammo;
        let money = b.money;
        vec![self.event(Some(i), "buy", format!("weapon={} money={money}", weapon.name()))]
    }

    fn interact(&mut self, i: BotId) -> Vec<Event> {
        let Some(here) = self.bots[i].pos.node() else {
            return vec![self.event(Some(i), "interact_failed", "reason=not_at_waypoint".into())];
        };
        let mut events = Vec::new();
        let free: Vec<usize> = (0..self.hostages.len())
            .filter(|&h| self.hostages[h].loc == HostageLoc::At(here))
            .collect();
        if !free.is_empty() {
            for h in free {
                self.hostages[h].loc = HostageLoc::Following {
                    leader: i,
                    trail: here,
                };
                let payload = format!("hostage={} at={}", self.hostages[h].name, self.map.name_of(here));
                events.push(self.event(Some(i), "hostage_follow", payload));
            }
            return events;
        }
        let mine: Vec<usize> = self.followers(i).collect();
        for h in mine {
            self.hostages[h].loc = HostageLoc::At(here);
            let payload = format!("hostage={} at={}", self.hostages[h].name, self.map.name_of(here));
            events.push(self.event(Some(i), "hostage_release", payload));
        }
        if events.is_empty() {
            events.push(self.event(Some(i), "interact_failed", "reason=no_hostage".into()));
        }
        events
    }

    fn move_bot(&mut self, i: BotId, target: WpId, aim: Option<BotId>) -> Vec<Event> {
        let pos = self.bots[i].pos;
        let graph = self.map.graph();
        // orient the edge so that we travel from `from` to `to`
        let (from, to, progress, len) = match pos.node() {
            Some(here) if here == target => return Vec::new(),
            Some(here) => match graph.edge_cost(here, target) {
                Some(len) => (here, target, 0, len),
                None => return self.bad_move(i, target),
            },
            None => {
                let len = self.edge_len(&pos);
                if target == pos.to {
                    (pos.from, pos.to, pos.progress, len)
                } else if target == pos.from {
                    (pos.to, pos.from, len - pos.progress, len)
                } else {
                    return self.bad_move(i, target);
                }
            }
        };
        let advanced = progress + self.config.speed_mm;
        let heading = match aim {
            Some(t) => bearing(self.bot_point(i), self.bot_point(t)),
            None => bearing(self.map.pos(from), self.map.pos(to)),
        };
        let turn = self.config.turn_deg;
        let b = &mut self.bots[i];
        if let Some(h) = heading {
            b.facing = turn_toward(b.facing, h, turn);
        }
        b.moved = true;
        if advanced < len {
            b.pos = Position {
                from,
                to,
                progress: advanced,
            };
            return Vec::new();
        }
        b.pos = Position::at(to);
        for h in &mut self.hostages {
            if let HostageLoc::Following { leader, trail } = &mut h.loc {
                if *leader == i {
                    *trail = from;
                }
            }
        }
        vec![self.event(Some(i), "arrive", format!("at={}", self.map.name_of(to)))]
    }

    fn bad_move(&self, i: BotId, target: WpId) -> Vec<Event> {
        let name = self.map.waypoints.get(target).map_or("?", |w| w.name.as_str());
        vec![self.event(Some(i), "bad_intent", format!("move={name}"))]
    }

    fn rescue(&mut self) -> Vec<Event> {
        let mut events = Vec::new();
        for i in 0..self.bots.len() {
            let b = &self.bots[i];
            if b.team != Team::Ct || !b.alive() {
                continue;
            }
            let Some(here) = b.pos.node() else { continue };
            if !self.map.has_tag(here, Tag::RescueZone) {
                continue;
            }
            let mine: Vec<usize> = self.followers(i).collect();
            for h in mine {
                self.hostages[h].loc = HostageLoc::Rescued;
                let payload = format!("hostage={} at={}", self.hostages[h].name, self.map.name_of(here));
                events.push(self.event(Some(i), "hostage_rescued", payload));
            }
        }
        events
    }

    /// Round result, if the round is decided. Only meaningful in the play
    /// phase. Elimination needs the team to have had members.
    pub fn check_win(&self) -> Option<RoundOutcome> {
        if self.phase != Phase::Play {
            return None;
        }
        let cts = self.alive_count(Team::Ct);
        let ts = self.alive_count(Team::T);
        let cause = if !self.hostages.is_empty() && self.rescued_count() == self.hostages.len() {
            Cause::HostagesRescued
        } else if self.team_size(Team::T) > 0 && ts == 0 {
            Cause::TeamEliminatedT
        } else if self.team_size(Team::Ct) > 0 && cts == 0 {
            Cause::TeamEliminatedCt
        } else if self.tick >= self.config.round_ticks {
            Cause::TimeExpired
        } else {
            return None;
        };
        Some(classify(cause, cts, ts))
    }

    /// Ends the round: pays the awards and freezes the world.
    pub fn finish_round(&mut self, outcome: &RoundOutcome) -> Vec<Event> {
        self.phase = Phase::Over;
        let (win, loss, max) = (self.config.win_award, self.config.loss_award, self.config.max_money);
        for b in &mut self.bots {
            let award = if b.team == outcome.winner { win } else { loss };
            b.money = (b.money + award).min(max);
        }
        vec![self.event(
            None,
            "round_end",
            format!(
                "round={} winner={} cause={} goal_fulfilled={}",
                self.round,
                outcome.winner,
                outcome.cause.name(),
                outcome.goal_fulfilled
            ),
        )]
    }
}

/// Labels a decided round given the survivors on each side.
pub fn classify(cause: Cause, cts_alive: usize, ts_alive: usize) -> RoundOutcome {
    let goal_fulfilled = match cause {
        Cause::HostagesRescued => ts_alive >= 1,
        Cause::TimeExpired => cts_alive >= 1,
        Cause::TeamEliminatedT | Cause::TeamEliminatedCt => false,
    };
    RoundOutcome {
        winner: cause.winner(),
        cause,
        goal_fulfilled,
    }
}

/// `accuracy × max(0, 1 − distance/range)`, in parts per million.
pub fn hit_probability_ppm(accuracy_ppm: u32, distance: i64, range: i64) -> u64 {
    if range <= 0 || distance >= range {
        return 0;
    }
    (accuracy_ppm as u64 * (range - distance.max(0)) as u64) / range as u64
}
