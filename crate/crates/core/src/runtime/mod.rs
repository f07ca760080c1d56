//! Agent runtime: minds, actions and the natives that connect rule
//! packages to the game.

pub mod action;
pub mod baseline;
pub mod mind;
pub mod natives;

pub use action::{
    step_toward, ActionKind, ActionSpec, ActionStatus, HighLevelAction, Lifecycle, LifecycleEvent,
    LifecycleRecord,
};
pub use baseline::{NativeBaseline, NativeGoal};
pub use mind::{new_blackboard, Brain, MindConfig, MindTemplate, ScriptedMind, ROUND_SCOPED, RUNTIME_PRELUDE};
pub use natives::{compact, native_keys, register_all, unpack, AgentHost, Blackboard, PendingAction};
