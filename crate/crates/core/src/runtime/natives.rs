//! Perception, action and blackboard natives bound to an [`AgentHost`].

use std::cell::RefCell;
use std::rc::Rc;
use std::sync::Arc;

use logibot_engine::{EngineError, KnowledgeBase, PredKey, Result, Term, VarId};

use super::action::{ActionKind, ActionSpec};
use crate::sim::{bot_name, BotId, HostageLoc, Tag, Weapon, WorldState, WpId};

pub type Blackboard = Rc<RefCell<KnowledgeBase<()>>>;

/// An action requested by a proof, queued once the proof returns.
#[derive(Clone, Debug, PartialEq)]
pub struct PendingAction {
    pub spec: ActionSpec,
    pub motivation: Option<Term>,
    pub continuation: Option<Term>,
}

/// State visible to natives while one mind proves goals.
pub struct AgentHost {
    pub world: Arc<WorldState>,
    pub bot: BotId,
    pub active: Option<ActionKind>,
    pub started: Vec<PendingAction>,
    pub blackboard: Blackboard,
}

impl AgentHost {
    pub fn new(world: Arc<WorldState>, bot: BotId, blackboard: Blackboard) -> Self {
        AgentHost {
            world,
            bot,
            active: None,
            started: Vec::new(),
            blackboard,
        }
    }
}

type Rows = Result<Box<dyn Iterator<Item = Vec<Term>>>>;

fn rows(v: Vec<Vec<Term>>) -> Rows {
    Ok(Box::new(v.into_iter()))
}

fn bot_term(id: BotId) -> Term {
    Term::atom(&bot_name(id))
}

fn wp_term(w: &WorldState, id: WpId) -> Term {
    Term::atom(w.map.name_of(id))
}

/// Which values an argument admits: any (unbound) or a list of candidates
/// (empty when the atom names nothing).
fn bots(w: &WorldState, t: &Term) -> Result<Vec<BotId>> {
    match t {
        Term::Var(_) => Ok((0..w.bots.len()).collect()),
        Term::Atom(a) => Ok(w.bot_by_name(a.as_str()).into_iter().collect()),
        _ => Err(EngineError::type_error("bot", t)),
    }
}

fn living(w: &WorldState, t: &Term) -> Result<Vec<BotId>> {
    Ok(bots(w, t)?.into_iter().filter(|&b| w.bots[b].alive()).collect())
}

fn waypoints(w: &WorldState, t: &Term) -> Result<Vec<WpId>> {
    match t {
        Term::Var(_) => Ok((0..w.map.len()).collect()),
        Term::Atom(a) => Ok(w.map.waypoint(a.as_str()).into_iter().collect()),
        _ => Err(EngineError::type_error("waypoint", t)),
    }
}

fn check_int(t: &Term) -> Result<()> {
    match t {
        Term::Var(_) | Term::Int(_) => Ok(()),
        _ => Err(EngineError::type_error("integer", t)),
    }
}

fn check_atom(t: &Term) -> Result<()> {
    match t {
        Term::Var(_) | Term::Atom(_) => Ok(()),
        _ => Err(EngineError::type_error("atom", t)),
    }
}

/// Registers a nondeterministic perception native over the host's world.
fn perceive<F>(kb: &mut KnowledgeBase<AgentHost>, name: &str, arity: usize, f: F) -> Result<()>
where
    F: Fn(&WorldState, BotId, &[Term]) -> Result<Vec<Vec<Term>>> + Send + Sync + 'static,
{
    kb.register_nondet(name, arity, move |host, args| rows(f(&host.world, host.bot, args)?))
}

/// `name(Bot, Value)` over living bots.
fn attribute<F>(kb: &mut KnowledgeBase<AgentHost>, name: &str, value: F) -> Result<()>
where
    F: Fn(&WorldState, BotId) -> Term + Send + Sync + 'static,
{
    perceive(kb, name, 2, move |w, _, a| {
        Ok(living(w, &a[0])?.into_iter().map(|b| vec![bot_term(b), value(w, b)]).collect())
    })
}

fn register_perception(kb: &mut KnowledgeBase<AgentHost>) -> Result<()> {
    perceive(kb, "bot_in_fov", 2, |w, _, a| {
        let (xs, ys) = (living(w, &a[0])?, living(w, &a[1])?);
        let mut out = Vec::new();
        for &x in &xs {
            for &y in &ys {
                if w.in_fov(x, y) {
                    out.push(vec![bot_term(x), bot_term(y)]);
                }
            }
        }
        Ok(out)
    })?;
    perceive(kb, "visible_enemy", 2, |w, _, a| {
        let (xs, ys) = (living(w, &a[0])?, living(w, &a[1])?);
        let mut out = Vec::new();
        for &x in &xs {
            for &y in &ys {
                if w.bots[x].team != w.bots[y].team && w.in_fov(x, y) {
                    out.push(vec![bot_term(x), bot_term(y)]);
                }
            }
        }
        Ok(out)
    })?;
    perceive(kb, "bot_alive", 1, |w, _, a| {
        Ok(living(w, &a[0])?.into_iter().map(|b| vec![bot_term(b)]).collect())
    })?;
    perceive(kb, "team", 2, |w, _, a| {
        check_atom(&a[1])?;
        Ok(bots(w, &a[0])?
            .into_iter()
            .map(|b| vec![bot_term(b), Term::atom(w.bots[b].team.name())])
            .collect())
    })?;
    attribute(kb, "health", |w, b| Term::int(w.bots[b].health as i64))?;
    attribute(kb, "ammo", |w, b| Term::int(w.bots[b].ammo as i64))?;
    attribute(kb, "money", |w, b| Term::int(w.bots[b].money))?;
    attribute(kb, "weapon", |w, b| Term::atom(w.bots[b].weapon.name()))?;
    perceive(kb, "at_waypoint", 2, |w, _, a| {
        check_atom(&a[1])?;
        Ok(living(w, &a[0])?
            .into_iter()
            .map(|b| vec![bot_term(b), wp_term(w, w.bot_waypoint(b))])
            .collect())
    })?;
    perceive(kb, "hostage_at", 2, |w, _, a| {
        check_atom(&a[0])?;
        let wps = waypoints(w, &a[1])?;
        Ok(w.hostages
            .iter()
            .filter_map(|h| match h.loc {
                HostageLoc::At(at) if wps.contains(&at) => {
                    Some(vec![Term::atom(&h.name), wp_term(w, at)])
                }
                _ => None,
            })
            .collect())
    })?;
    perceive(kb, "hostage_following", 2, |w, _, a| {
        check_atom(&a[0])?;
        let leaders = bots(w, &a[1])?;
        Ok(w.hostages
            .iter()
            .filter_map(|h| match h.loc {
                HostageLoc::Following { leader, .. } if leaders.contains(&leader) => {
                    Some(vec![Term::atom(&h.name), bot_term(leader)])
                }
                _ => None,
            })
            .collect())
    })?;
    perceive(kb, "hear_footsteps", 2, |w, _, a| {
        let (xs, ys) = (living(w, &a[0])?, living(w, &a[1])?);
        let graph = w.map.graph();
        let range = w.config.hearing_range_mm;
        let mut out = Vec::new();
        for &x in &xs {
            for &y in &ys {
                if w.bots[x].team == w.bots[y].team || !w.bots[y].moved {
                    continue;
                }
                let d = graph.distance(w.bot_waypoint(x), w.bot_waypoint(y));
                if d.is_some_and(|d| d <= range) {
                    out.push(vec![bot_term(x), bot_term(y)]);
                }
            }
        }
        Ok(out)
    })?;
    perceive(kb, "round_time_left", 1, |w, _, a| {
        check_int(&a[0])?;
        Ok(vec![vec![Term::int(w.round_time_left() as i64)]])
    })?;
    perceive(kb, "buy_ticks_left", 1, |w, _, a| {
        check_int(&a[0])?;
        Ok(vec![vec![Term::int(w.buy_ticks_left() as i64)]])
    })?;
    perceive(kb, "round", 1, |w, _, a| {
        check_int(&a[0])?;
        Ok(vec![vec![Term::int(w.round as i64)]])
    })?;
    perceive(kb, "game_phase", 1, |w, _, a| {
        check_atom(&a[0])?;
        Ok(vec![vec![Term::atom(w.phase.name())]])
    })?;
    perceive(kb, "waypoint_tag", 2, |w, _, a| {
        check_atom(&a[1])?;
        let tags: Vec<Tag> = match &a[1] {
            Term::Atom(t) => Tag::from_name(t.as_str()).into_iter().collect(),
            _ => Tag::ALL.to_vec(),
        };
        let mut out = Vec::new();
        for wp in waypoints(w, &a[0])? {
            for &tag in &tags {
                if w.map.has_tag(wp, tag) {
                    out.push(vec![wp_term(w, wp), Term::atom(tag.name())]);
                }
            }
        }
        Ok(out)
    })?;
    perceive(kb, "path_cost", 3, |w, _, a| {
        check_int(&a[2])?;
        let (xs, ys) = (waypoints(w, &a[0])?, waypoints(w, &a[1])?);
        let mut out = Vec::new();
        for &x in &xs {
            for &y in &ys {
                if let Some(c) = w.map.path_cost(x, y) {
                    out.push(vec![wp_term(w, x), wp_term(w, y), Term::int(c)]);
                }
            }
        }
        Ok(out)
    })?;
    perceive(kb, "distance", 3, |w, _, a| {
        check_int(&a[2])?;
        let (xs, ys) = (living(w, &a[0])?, living(w, &a[1])?);
        let mut out = Vec::new();
        for &x in &xs {
            for &y in &ys {
                out.push(vec![bot_term(x), bot_term(y), Term::int(w.bot_distance(x, y))]);
            }
        }
        Ok(out)
    })?;
    perceive(kb, "weapon_price", 2, |w, _, a| {
        check_atom(&a[0])?;
        check_int(&a[1])?;
        Ok([Weapon::Pistol, Weapon::Rifle]
            .into_iter()
            .map(|wp| vec![Term::atom(wp.name()), Term::int(w.config.weapon(wp).price)])
            .collect())
    })?;
    kb.register_nondet("current_action", 2, |host, a| {
        check_atom(&a[1])?;
        let me = host.bot;
        let mine = bots(&host.world, &a[0])?.contains(&me);
        rows(match host.active {
            Some(kind) if mine => vec![vec![bot_term(me), Term::atom(kind.name())]],
            _ => vec![],
        })
    })?;
    Ok(())
}

/// Splits a trailing pack argument into motivation and continuation.
pub fn unpack(pack: &Term) -> Result<(Option<Term>, Option<Term>)> {
    if let Term::Var(_) = pack {
        return Err(EngineError::instantiation("action motivation"));
    }
    if pack.is_functor("andThen", 1) {
        return Ok((None, Some(compact(&pack.args()[0]))));
    }
    if pack.is_functor(",", 2) && pack.args()[1].is_functor("andThen", 1) {
        let m = compact(&pack.args()[0]);
        let c = compact(&pack.args()[1].args()[0]);
        return Ok((Some(m), Some(c)));
    }
    Ok((Some(compact(pack)), None))
}

/// Resolves the acting bot: must be the mind's own bot and alive.
/// `Ok(None)` makes the native fail.
fn owner(host: &AgentHost, t: &Term, name: &str, arity: usize) -> Result<Option<BotId>> {
    let id = match t {
        Term::Var(_) => return Err(EngineError::instantiation(format!("{name}/{arity} bot"))),
        Term::Atom(a) => match host.world.bot_by_name(a.as_str()) {
            Some(id) => id,
            None => return Ok(None),
        },
        _ => return Err(EngineError::type_error("bot", t)),
    };
    if id != host.bot {
        return Err(EngineError::permission("command another bot with", &PredKey::new(name, arity)));
    }
    Ok(host.world.bots[id].alive().then_some(id))
}

/// Parses action arguments for `kind`. `Ok(None)` fails the call (names
/// that exist in no world object).
fn action_spec(w: &WorldState, kind: ActionKind, args: &[Term]) -> Result<Option<ActionSpec>> {
    let atom = |t: &Term, what: &str| -> Result<String> {
        match t {
            Term::Atom(a) => Ok(a.as_str().to_string()),
            Term::Var(_) => Err(EngineError::instantiation(format!("{} {what}", kind.name()))),
            _ => Err(EngineError::type_error(what, t)),
        }
    };
    let want = match kind {
        ActionKind::LiberateHostages => 0,
        _ => 1,
    };
    if args.len() != want {
        return Err(EngineError::type_error(
            format!("{} argument list of length {want}", kind.name()),
            &Term::list(args.to_vec()),
        ));
    }
    Ok(match kind {
        ActionKind::Goto => w.map.waypoint(&atom(&args[0], "waypoint")?).map(ActionSpec::Goto),
        ActionKind::Guard => w.map.waypoint(&atom(&args[0], "waypoint")?).map(ActionSpec::Guard),
        ActionKind::Attack => w.bot_by_name(&atom(&args[0], "bot")?).map(ActionSpec::Attack),
        ActionKind::LiberateHostages => Some(ActionSpec::LiberateHostages),
        ActionKind::BuyWeapon => {
            let name = atom(&args[0], "weapon")?;
            Some(ActionSpec::Buy(
                Weapon::from_name(&name).ok_or_else(|| EngineError::type_error("weapon", &args[0]))?,
            ))
        }
        ActionKind::Wait => match &args[0] {
            Term::Int(n) if *n >= 0 => Some(ActionSpec::Wait(u32::try_from(*n).unwrap_or(u32::MAX))),
            Term::Var(_) => return Err(EngineError::instantiation("wait ticks")),
            t => return Err(EngineError::type_error("non-negative integer", t)),
        },
    })
}

fn request(
    host: &mut AgentHost,
    name: &str,
    arity: usize,
    kind: ActionKind,
    bot: &Term,
    args: &[Term],
    pack: Option<&Term>,
) -> Result<bool> {
    if owner(host, bot, name, arity)?.is_none() {
        return Ok(false);
    }
    let (motivation, continuation) = match pack {
        Some(p) => unpack(p)?,
        None => (None, None),
    };
    let Some(spec) = action_spec(&host.world, kind, args)? else {
        return Ok(false);
    };
    host.started.push(PendingAction {
        spec,
        motivation,
        continuation,
    });
    Ok(true)
}

fn register_action(kb: &mut KnowledgeBase<AgentHost>, name: &'static str, kind: ActionKind, arities: &[usize]) -> Result<()> {
    let base = match kind {
        ActionKind::LiberateHostages => 1,
        _ => 2,
    };
    for &arity in arities {
        kb.register_det(name, arity, move |host, a| {
            let pack = (arity > base).then(|| &a[base]);
            let ok = request(host, name, arity, kind, &a[0], &a[1..base], pack)?;
            Ok(ok.then(|| a.to_vec()))
        })?;
    }
    Ok(())
}

fn register_actions(kb: &mut KnowledgeBase<AgentHost>) -> Result<()> {
    register_action(kb, "action_goto", ActionKind::Goto, &[2, 3])?;
    register_action(kb, "action_kill", ActionKind::Attack, &[2, 3])?;
    register_action(kb, "action_liberate_hostages", ActionKind::LiberateHostages, &[1, 2])?;
    register_action(kb, "action_guard", ActionKind::Guard, &[2, 3])?;
    register_action(kb, "action_buy", ActionKind::BuyWeapon, &[2, 3])?;
    register_action(kb, "action_wait", ActionKind::Wait, &[2, 3])?;
    for arity in [3, 4] {
        kb.register_det("start_action", arity, move |host, a| {
            let kind = match &a[1] {
                Term::Atom(k) => ActionKind::from_name(k.as_str())
                    .ok_or_else(|| EngineError::type_error("action kind", &a[1]))?,
                Term::Var(_) => return Err(EngineError::instantiation("start_action kind")),
                t => return Err(EngineError::type_error("action kind", t)),
            };
            let args = a[2]
                .list_items()
                .ok_or_else(|| EngineError::type_error("list", &a[2]))?;
            let pack = (arity == 4).then(|| &a[3]);
            let ok = request(host, "start_action", arity, kind, &a[0], &args, pack)?;
            Ok(ok.then(|| a.to_vec()))
        })?;
    }
    Ok(())
}

fn register_blackboard(kb: &mut KnowledgeBase<AgentHost>) -> Result<()> {
    kb.register_det("team_assert", 1, |host, a| {
        if !a[0].is_ground() {
            return Err(EngineError::instantiation("team_assert needs a ground fact"));
        }
        host.blackboard
            .borrow_mut()
            .assert_term(&a[0], logibot_engine::Position::Back)?;
        Ok(Some(a.to_vec()))
    })?;
    kb.register_det("team_retract", 1, |host, a| {
        let found = host.blackboard.borrow_mut().retract(&a[0])?;
        Ok(found.then(|| a.to_vec()))
    })?;
    kb.register_nondet("team_fact", 1, |host, a| {
        let facts = host.blackboard.borrow().matching_facts(&a[0]);
        rows(facts.into_iter().map(|f| vec![f]).collect())
    })?;
    Ok(())
}

/// Every native the runtime provides, for validators and docs.
pub fn native_keys() -> Vec<PredKey> {
    let mut kb = KnowledgeBase::new();
    register_all(&mut kb).expect("natives register on an empty base");
    let mut keys: Vec<PredKey> = kb.native_keys().cloned().collect();
    keys.sort();
    keys
}

/// Registers perception, action and blackboard natives.
pub fn register_all(kb: &mut KnowledgeBase<AgentHost>) -> Result<()> {
    register_perception(kb)?;
    register_actions(kb)?;
    register_blackboard(kb)
}

/// Renumbers the variables of a stored goal from zero, so later proofs of
/// it do not inherit the creating proof's variable numbering.
pub fn compact(goal: &Term) -> Term {
    fn go(t: &Term, map: &mut Vec<(VarId, u32)>) -> Term {
        match t {
            Term::Var(v) => {
                let id = match map.iter().find(|(old, _)| old == v) {
                    Some(&(_, new)) => new,
                    None => {
                        let new = map.len() as u32;
                        map.push((*v, new));
                        new
                    }
                };
                Term::var(id)
            }
            Term::Compound(c) => {
                Term::compound_from(c.functor.clone(), c.args.iter().map(|a| go(a, map)).collect())
            }
            other => other.clone(),
        }
    }
    go(goal, &mut Vec::new())
}
