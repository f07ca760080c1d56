//! Reasoning-time measurement against an all-native reference run.

use std::fmt;

use serde::Serialize;

use super::{HarnessError, MatchConfig};

/// Wall-clock split of one tick, in nanoseconds. `reasoning_ns` covers
/// proofs of scripted minds (reasoning, motivations, continuations);
/// `total_ns` covers the whole tick including both.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TickTiming {
    pub reasoning_ns: u64,
    pub step_ns: u64,
    pub total_ns: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerfReport {
    pub map: String,
    pub bots: usize,
    pub rounds: u32,
    pub ticks: usize,
    pub median_reasoning_ms: f64,
    pub p95_reasoning_ms: f64,
    /// Reasoning time over total tick time.
    pub reasoning_share: f64,
    pub total_ms: f64,
    pub native_total_ms: f64,
    /// Relative extra wall time per tick versus the all-native run.
    pub native_delta: f64,
    #[serde(skip)]
    pub samples: Vec<TickTiming>,
}

/// Nearest-rank percentile of sorted values.
fn percentile(sorted: &[u64], p: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn ms(ns: u64) -> f64 {
    ns as f64 / 1e6
}

impl PerfReport {
    pub fn from_samples(config: &MatchConfig, samples: Vec<TickTiming>, native: &[TickTiming]) -> Self {
        let mut reasoning: Vec<u64> = samples.iter().map(|s| s.reasoning_ns).collect();
        reasoning.sort_unstable();
        let total: u64 = samples.iter().map(|s| s.total_ns).sum();
        let spent: u64 = reasoning.iter().sum();
        let native_total: u64 = native.iter().map(|s| s.total_ns).sum();
        let per_tick = |sum: u64, n: usize| sum as f64 / n.max(1) as f64;
        let native_tick = per_tick(native_total, native.len());
        PerfReport {
            map: config.map.clone(),
            bots: config.ct_size + config.t_size,
            rounds: config.rounds,
            ticks: samples.len(),
            median_reasoning_ms: ms(percentile(&reasoning, 50.0)),
            p95_reasoning_ms: ms(percentile(&reasoning, 95.0)),
            reasoning_share: if total == 0 { 0.0 } else { spent as f64 / total as f64 },
            total_ms: ms(total),
            native_total_ms: ms(native_total),
            native_delta: if native_tick == 0.0 {
                0.0
            } else {
                per_tick(total, samples.len()) / native_tick - 1.0
            },
            samples,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for PerfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "map {}, {} bots, {} rounds, {} ticks", self.map, self.bots, self.rounds, self.ticks)?;
        writeln!(f, "reasoning per tick: median {:.3} ms, p95 {:.3} ms", self.median_reasoning_ms, self.p95_reasoning_ms)?;
        writeln!(f, "reasoning share of wall time: {:.2}%", self.reasoning_share * 100.0)?;
        writeln!(
            f,
            "wall time: {:.1} ms (all-native run {:.1} ms, delta per tick {:+.1}%)",
            self.total_ms,
            self.native_total_ms,
            self.native_delta * 100.0
        )
    }
}

/// Plays one match of `config` with timing on, then the same match with
/// both teams native, and compares.
pub fn measure_performance(config: &MatchConfig) -> Result<PerfReport, HarnessError> {
    let scripted = config.prepare()?.run(config.seed, true);
    let native_config = MatchConfig {
        ct: "native".into(),
        t: "native".into(),
        ..config.clone()
    };
    let native = native_config.prepare()?.run(config.seed, true);
    let native: Vec<TickTiming> = native.timings().copied().collect();
    Ok(PerfReport::from_samples(config, scripted.timings().copied().collect(), &native))
}
