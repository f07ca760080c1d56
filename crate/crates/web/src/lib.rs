//! Browser bindings. Each exported function has a plain Rust twin that
//! returns `Result<String, String>`, so the logic is testable natively.

use std::sync::Arc;

use logibot::harness::{run_experiment, MatchConfig, Repl};
use logibot::rules::{default_stack, validate_stack, RulePackage};
use logibot::sim::{HostageLoc, MapDefinition, WorldState};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct MapView {
    name: String,
    waypoints: Vec<WaypointView>,
    edges: Vec<[usize; 2]>,
    walls: Vec<[i64; 4]>,
}

#[derive(Serialize)]
struct WaypointView {
    name: String,
    x: i64,
    y: i64,
    tags: Vec<String>,
}

#[derive(Serialize)]
struct BotView {
    name: String,
    team: String,
    x: i64,
    y: i64,
    facing: i64,
    health: i32,
}

#[derive(Serialize)]
struct Frame {
    tick: u32,
    phase: String,
    bots: Vec<BotView>,
    /// Positions of hostages not yet rescued.
    hostages: Vec<[i64; 2]>,
    events: Vec<String>,
}

#[derive(Serialize)]
struct Playback {
    map: MapView,
    frames: Vec<Frame>,
    outcome: String,
    actions: Vec<String>,
}

fn map_view(m: &MapDefinition) -> MapView {
    MapView {
        name: m.name.clone(),
        waypoints: m
            .waypoints
            .iter()
            .map(|w| WaypointView {
                name: w.name.clone(),
                x: w.pos.x,
                y: w.pos.y,
                tags: w.tags.iter().map(|t| t.name().to_string()).collect(),
            })
            .collect(),
        edges: m.edges.iter().map(|e| [e.a, e.b]).collect(),
        walls: m.walls.iter().map(|w| [w.a.x, w.a.y, w.b.x, w.b.y]).collect(),
    }
}

fn frame(w: &WorldState) -> Frame {
    Frame {
        tick: w.tick,
        phase: w.phase.name().to_string(),
        bots: (0..w.bots.len())
            .map(|i| {
                let b = &w.bots[i];
                let p = w.bot_point(i);
                BotView {
                    name: b.name.clone(),
                    team: b.team.name().to_string(),
                    x: p.x,
                    y: p.y,
                    facing: b.facing,
                    health: b.health,
                }
            })
            .collect(),
        hostages: w
            .hostages
            .iter()
            .filter_map(|h| match h.loc {
                HostageLoc::At(n) | HostageLoc::Following { trail: n, .. } => {
                    let p = w.map.pos(n);
                    Some([p.x, p.y])
                }
                HostageLoc::Rescued => None,
            })
            .collect(),
        events: Vec::new(),
    }
}

/// Plays one round and returns the map plus a frame per tick as JSON.
pub fn round_playback(map: &str, ct: &str, t: &str, seed: u64) -> Result<String, String> {
    let config = MatchConfig {
        map: map.into(),
        ct: ct.into(),
        t: t.into(),
        rounds: 1,
        matches: 1,
        ..MatchConfig::default()
    };
    let prepared = config.prepare().map_err(|e| e.to_string())?;
    let mut game = prepared.new_match(seed);
    let mut frames = Vec::new();
    let mut ticks = Vec::new();
    let round = game
        .play_round_observed(|w, _| {
            frames.push(frame(w));
            ticks.push(w.match_tick);
        })
        .clone();
    frames.push(frame(&game.world));
    // a step's events carry the tick it started from; show them on the
    // frame after it
    let end = frames.len() - 1;
    for e in &round.events {
        let at = ticks.iter().position(|&t| t == e.tick);
        let i = match (e.kind, at) {
            ("round_start" | "spawn", Some(i)) => i,
            (_, Some(i)) => i + 1,
            (_, None) => end,
        };
        frames[i].events.push(e.to_string());
    }
    let o = &round.outcome;
    let playback = Playback {
        map: map_view(&prepared.map),
        frames,
        outcome: format!(
            "{} win ({}{})",
            o.winner.name().to_uppercase(),
            o.cause.name(),
            if o.goal_fulfilled { ", goal fulfilled" } else { "" }
        ),
        actions: round.actions.iter().map(|a| a.to_string()).collect(),
    };
    serde_json::to_string(&playback).map_err(|e| e.to_string())
}

/// Both win tables for a small experiment.
pub fn experiment_tables(map: &str, matches: u32, rounds: u32, seed: u64) -> Result<String, String> {
    let config = MatchConfig {
        map: map.into(),
        matches,
        rounds,
        seed,
        ..MatchConfig::default()
    };
    run_experiment(&config).map(|r| r.to_text()).map_err(|e| e.to_string())
}

fn stack(map: &str, packages: &str) -> Result<Vec<RulePackage>, String> {
    let packages = if packages.trim().is_empty() {
        default_stack(map)
    } else {
        RulePackage::resolve_list(packages).map_err(|e| e.to_string())?
    };
    let report = validate_stack(&packages);
    if report.has_errors() {
        return Err(report.to_string());
    }
    Ok(packages)
}

/// A query loop over a fresh round of `map`.
#[wasm_bindgen]
pub struct Playground {
    repl: Repl,
}

impl Playground {
    pub fn open(map: &str, packages: &str, seed: u64) -> Result<Playground, String> {
        let m = MapDefinition::fixture(map).ok_or_else(|| format!("unknown map {map}"))?;
        let packages = stack(map, packages)?;
        let repl = Repl::new(Arc::new(m), &packages, seed).map_err(|e| e.to_string())?;
        Ok(Playground { repl })
    }

    /// Answers for a query or a `:command`.
    pub fn ask(&mut self, line: &str) -> String {
        self.repl.eval(line).unwrap_or_else(|| "bye".to_string())
    }
}

#[wasm_bindgen]
impl Playground {
    #[wasm_bindgen(constructor)]
    pub fn new(map: &str, packages: &str, seed: u32) -> Result<Playground, JsError> {
        Playground::open(map, packages, u64::from(seed)).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = query)]
    pub fn query(&mut self, line: &str) -> String {
        self.ask(line)
    }
}

#[wasm_bindgen(js_name = playRound)]
pub fn play_round(map: &str, ct: &str, t: &str, seed: u32) -> Result<String, JsError> {
    round_playback(map, ct, t, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = experiment)]
pub fn experiment(map: &str, matches: u32, rounds: u32, seed: u32) -> Result<String, JsError> {
    experiment_tables(map, matches, rounds, u64::from(seed)).map_err(|e| JsError::new(&e))
}
