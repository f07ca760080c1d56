//! Randomized action/motivation schedules and a queue model to check
//! them against.

use std::collections::HashMap;
use std::sync::Arc;

use logibot::rules::Level;
use logibot::runtime::{Brain, LifecycleEvent, LifecycleRecord};
use logibot_engine::{Position as At, Term};
use proptest::prelude::*;

use super::{line_map, mind, pkg, world};

pub const SCHEDULE: &str = "\
do_reasoning(B) :- \\+ started, assert(started), plan(P), start_each(B, P).
start_each(_, []).
start_each(B, [K-N|T]) :- action_wait(B, N, (ok(K), andThen(cont(K)))), start_each(B, T).
cont(K) :- assert(ran(K)).
";

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
pub enum Ev {
    Started,
    Interrupted,
    Completed,
}

/// Independent model of the queue: each tick, interrupt leading actions
/// whose flag is down, then run the front one.
pub fn model(waits: &[u32], ok: &[Vec<bool>]) -> (Vec<(usize, usize, Ev)>, Vec<u32>) {
    let mut out: Vec<(usize, usize, Ev)> = (0..waits.len()).map(|k| (0, k, Ev::Started)).collect();
    let mut queue: std::collections::VecDeque<(usize, u32)> = (0..waits.len()).map(|k| (k, 0)).collect();
    let mut ran = vec![0; waits.len()];
    for (t, flags) in ok.iter().enumerate() {
        while let Some(&(k, _)) = queue.front() {
            if flags[k] {
                break;
            }
            out.push((t, k, Ev::Interrupted));
            queue.pop_front();
        }
        if let Some(front) = queue.front_mut() {
            front.1 += 1;
            if front.1 >= waits[front.0].max(1) {
                out.push((t, front.0, Ev::Completed));
                ran[front.0] += 1;
                queue.pop_front();
            }
        }
    }
    (out, ran)
}

pub fn run_schedule(waits: &[u32], ok: &[Vec<bool>]) -> (Vec<(usize, usize, Ev)>, Vec<u32>) {
    let w = world(line_map(), 1, 0, 1);
    let plan: Vec<String> = waits.iter().enumerate().map(|(k, n)| format!("{k}-{n}")).collect();
    let program = format!("{SCHEDULE}plan([{}]).\n", plan.join(", "));
    let mut m = mind(&w, 0, &[pkg("s", Level::Game, &program, &["started/0", "ok/1", "ran/1"])]);
    let start = w.match_tick;
    let mut snap = w;
    let mut log: Vec<LifecycleRecord> = Vec::new();
    for flags in ok {
        m.kb_mut().retract_all(&Term::compound("ok", vec![Term::var(0)])).unwrap();
        for (k, &up) in flags.iter().enumerate() {
            if up {
                m.kb_mut().assert_term(&Term::compound("ok", vec![Term::int(k as i64)]), At::Back).unwrap();
            }
        }
        let intent = m.decide(&snap, &mut log);
        let (next, events) = snap.step(&[intent]);
        let next = Arc::new(next);
        m.observe(snap.match_tick, &next, &events, &mut log);
        snap = next;
    }
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut out = Vec::new();
    for r in &log {
        let ev = match r.event {
            LifecycleEvent::Started => {
                let k = ids.len();
                ids.insert(r.action_id, k);
                Ev::Started
            }
            LifecycleEvent::Interrupted => Ev::Interrupted,
            LifecycleEvent::Completed => Ev::Completed,
            LifecycleEvent::Failed => panic!("wait never fails"),
        };
        out.push(((r.tick - start) as usize, ids[&r.action_id], ev));
    }
    let ran = (0..waits.len())
        .map(|k| m.kb().matching_facts(&Term::compound("ran", vec![Term::int(k as i64)])).len() as u32)
        .collect();
    (out, ran)
}

pub fn schedule() -> impl Strategy<Value = (Vec<u32>, Vec<Vec<bool>>)> {
    proptest::collection::vec(0u32..5, 1..6).prop_flat_map(|waits| {
        let k = waits.len();
        let ticks = waits.iter().map(|n| n.max(&1)).sum::<u32>() as usize + 2;
        let flags = proptest::collection::vec(proptest::collection::vec(proptest::bool::weighted(0.85), k), ticks);
        (Just(waits), flags)
    })
}
