//! Deterministic waypoint-graph hostage-rescue game.

pub mod geom;
pub mod map;
pub mod rng;
pub mod world;

pub use geom::Point;
pub use map::{MapDefinition, MapError, MapSpec, NavGraph, PathResult, Tag, Visibility, Wall, WpId};
pub use rng::SplitMix64;
pub use world::{
    bot_name, classify, hit_probability_ppm, BotId, BotState, Cause, Event, GameConfig,
    HostageLoc, HostageState, Intent, Phase, Position, RoundOutcome, Team, Weapon, WeaponStats,
    WorldState,
};
