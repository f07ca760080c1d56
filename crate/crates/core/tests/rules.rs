mod common;

use std::path::Path;
use std::sync::Arc;

use common::{mind, pkg, warehouse};
use logibot::rules::{
    default_stack, validate_package, validate_stack, FindingKind, Level, RulePackage,
};
use logibot::runtime::{new_blackboard, MindConfig, MindTemplate};
use logibot::sim::{GameConfig, Position, WorldState};

fn shipped(name: &str) -> RulePackage {
    RulePackage::shipped(name).unwrap()
}

#[test]
fn baseline_alone_is_valid() {
    let r = validate_package(&shipped("baseline"), &[]);
    assert!(r.is_clean(), "{r}");
}

#[test]
fn full_stack_is_clean() {
    let r = validate_stack(&default_stack("warehouse"));
    assert!(r.is_clean(), "{r}");
    let r = validate_stack(&default_stack("airplane"));
    assert!(r.is_clean(), "{r}");
}

#[test]
fn tactics_need_the_map_type_rules() {
    let r = validate_package(&shipped("warehouse_tactics"), &[shipped("baseline")]);
    assert!(r.has_errors());
    assert!(r.mentions(FindingKind::Undefined, "objective_waypoint/2"), "{r}");
}

#[test]
fn undeclared_memory_is_a_warning() {
    let scout = pkg(
        "scout",
        Level::MapSpecific,
        "map_reasoning(B) :- \\+ scout_done(B), assert(scout_done(B)), action_goto(B, vent).\n",
        &[],
    );
    let r = validate_package(&scout, &[shipped("baseline"), shipped("cs_rules")]);
    assert!(r.mentions(FindingKind::UndeclaredDynamic, "scout_done/1"), "{r}");
    assert!(!r.has_errors(), "{r}");

    let declared = pkg("scout", Level::MapSpecific, &scout.files[0].text, &["scout_done/1"]);
    assert!(validate_package(&declared, &[shipped("baseline"), shipped("cs_rules")]).is_clean());
}

#[test]
fn arity_mismatches_and_parse_errors() {
    let wrong = pkg("w", Level::MapSpecific, "map_reasoning(B) :- danger_low(B, high).\n", &[]);
    let r = validate_package(&wrong, &[shipped("baseline"), shipped("cs_rules")]);
    assert!(r.mentions(FindingKind::ArityMismatch, "danger_low/2"), "{r}");

    let broken = pkg("b", Level::MapSpecific, "map_reasoning(B) :- (.\n", &[]);
    let r = validate_package(&broken, &[shipped("baseline")]);
    assert!(r.findings.iter().any(|f| f.kind == FindingKind::Parse), "{r}");
}

#[test]
fn listing_predicates_resolve_after_full_load() {
    let r = validate_stack(&default_stack("warehouse"));
    assert!(r.is_clean());
    let w = common::world(warehouse(), 5, 5, 1);
    let mut m = mind(&w, 0, &default_stack("warehouse"));
    for q in [
        "danger_low(b1)",
        "not_in_danger(b1)",
        "objective_waypoint(b1, W)",
    ] {
        let (sols, _) = m.query(q, 1).unwrap();
        assert_eq!(sols.len(), 1, "{q}");
    }
}

#[test]
fn shipped_manifests_load_from_disk() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/packages");
    for name in ["baseline", "cs_rules", "warehouse_tactics"] {
        let p = RulePackage::load(&root.join(name).join("manifest.toml")).unwrap();
        assert_eq!(p, shipped(name));
    }
    assert!(RulePackage::load(&root.join("nope/manifest.toml")).is_err());
    assert!(RulePackage::shipped("nope").is_err());
}

fn tally_with(votes: &[(&str, &str)]) -> String {
    let w = common::world(warehouse(), 5, 5, 1);
    let board = new_blackboard();
    let template = MindTemplate::new(&default_stack("warehouse")).unwrap();
    let mut m = template.instantiate(0, &w, board, MindConfig::default());
    for (bot, tactic) in votes {
        m.query(&format!("team_assert(vote({bot}, {tactic}))"), 1).unwrap();
    }
    let (sols, _) = m.query("tally(T)", 1).unwrap();
    sols[0].get("T").unwrap().to_string()
}

#[test]
fn plurality_tally() {
    let votes = [("b1", "rush"), ("b2", "flank"), ("b3", "rush"), ("b4", "flank"), ("b5", "rush")];
    assert_eq!(tally_with(&votes), "rush");
    let votes = [("b1", "flank"), ("b2", "flank"), ("b3", "rush"), ("b4", "flank"), ("b5", "rush")];
    assert_eq!(tally_with(&votes), "flank");
}

#[test]
fn tied_tally_takes_the_smaller_name() {
    let votes = [("b1", "rush"), ("b2", "rush"), ("b3", "flank"), ("b4", "flank")];
    assert_eq!(tally_with(&votes), "flank");
    let votes = [("b1", "zigzag"), ("b2", "ambush"), ("b3", "rush")];
    assert_eq!(tally_with(&votes), "ambush");
}

#[test]
fn tactics_never_weaken_safety_predicates() {
    let map = warehouse();
    let lower = MindTemplate::new(&[shipped("baseline"), shipped("cs_rules")]).unwrap();
    let full = MindTemplate::new(&default_stack("warehouse")).unwrap();
    let spots = ["road", "vent", "hall", "front_door", "catwalk", "office", "storage"];
    for seed in 0..30u64 {
        let mut w = WorldState::new(map.clone(), Arc::new(GameConfig::default()), 2, 2, seed);
        w.start_round();
        for b in 0..4 {
            let k = (seed as usize * 7 + b * 3) % spots.len();
            w.bots[b].pos = Position::at(map.waypoint(spots[k]).unwrap());
            w.bots[b].facing = (seed as i64 * 41 + b as i64 * 90) % 360;
            w.bots[b].health = 20 + ((seed as i32 * 13 + b as i32 * 29) % 81);
        }
        let w = Arc::new(w);
        for b in 0..4 {
            let goal = format!("danger_low(b{})", b + 1);
            let mut a = lower.instantiate(b, &w, new_blackboard(), MindConfig::default());
            let mut c = full.instantiate(b, &w, new_blackboard(), MindConfig::default());
            let before = !a.query(&goal, 1).unwrap().0.is_empty();
            let after = !c.query(&goal, 1).unwrap().0.is_empty();
            assert!(!before || after, "{goal} seed {seed}");
        }
    }
}
