#![allow(dead_code)]

pub mod oracles;
pub mod schedule;

use std::sync::Arc;

use logibot::harness::Match;
use logibot::rules::{parse_indicator, Level, RulePackage, SourceFile};
use logibot::runtime::{new_blackboard, Brain, MindConfig, MindTemplate, ScriptedMind};
use logibot::sim::{GameConfig, MapDefinition, WorldState};

pub fn pkg(name: &str, level: Level, text: &str, dynamic: &[&str]) -> RulePackage {
    RulePackage {
        name: name.into(),
        level,
        files: vec![SourceFile {
            name: format!("{name}.pl"),
            text: text.into(),
        }],
        entry: Vec::new(),
        dynamic: dynamic.iter().map(|d| parse_indicator(d).unwrap()).collect(),
    }
}

/// Four waypoints on a line, 10 m apart: spawn and rescue zone at `a`,
/// the hostage and the T spawn at `d`.
pub const LINE_MAP: &str = r#"
name = "line"
[[waypoint]]
id = "a"
x = 0.0
y = 0.0
tags = ["spawn_ct", "rescue_zone"]
[[waypoint]]
id = "b"
x = 10.0
y = 0.0
[[waypoint]]
id = "c"
x = 20.0
y = 0.0
[[waypoint]]
id = "d"
x = 30.0
y = 0.0
tags = ["spawn_t", "hostage_point"]
[[edge]]
a = "a"
b = "b"
[[edge]]
a = "b"
b = "c"
[[edge]]
a = "c"
b = "d"
[[hostage]]
id = "h1"
waypoint = "d"
"#;

pub fn line_map() -> Arc<MapDefinition> {
    Arc::new(MapDefinition::parse(LINE_MAP).unwrap())
}

pub fn warehouse() -> Arc<MapDefinition> {
    Arc::new(MapDefinition::fixture("warehouse").unwrap())
}

/// A started round with `ct` CTs and `t` Ts.
pub fn world(map: Arc<MapDefinition>, ct: usize, t: usize, seed: u64) -> Arc<WorldState> {
    let mut w = WorldState::new(map, Arc::new(GameConfig::default()), ct, t, seed);
    w.start_round();
    Arc::new(w)
}

/// One scripted mind for bot 0 of `world` running `packages`.
pub fn mind(world: &Arc<WorldState>, bot: usize, packages: &[RulePackage]) -> ScriptedMind {
    let t = MindTemplate::new(packages).unwrap();
    t.instantiate(bot, world, new_blackboard(), MindConfig::default())
}

/// A match where every bot runs the same package stack; rounds are not
/// started yet.
pub fn scripted_match(map: Arc<MapDefinition>, ct: usize, t: usize, packages: &[RulePackage], seed: u64) -> Match {
    let world = WorldState::new(map, Arc::new(GameConfig::default()), ct, t, seed);
    let snap = Arc::new(world.clone());
    let template = MindTemplate::new(packages).unwrap();
    let boards = [new_blackboard(), new_blackboard()];
    let brains: Vec<Box<dyn Brain>> = (0..ct + t)
        .map(|b| {
            let board = boards[usize::from(b >= ct)].clone();
            Box::new(template.instantiate(b, &snap, board, MindConfig::default())) as Box<dyn Brain>
        })
        .collect();
    Match::with_brains(world, brains, boards, seed)
}
