//! Trace files and replay.
//!
//! ```text
//! # logibot-trace 1
//! # config {"map":"warehouse",...}
//! # seed 42
//! 0;-;round_start;round=1
//! ...
//! ```

use std::fmt;

use super::{HarnessError, MatchConfig, MatchResult};

pub const TRACE_HEADER: &str = "# logibot-trace";
const TRACE_VERSION: u32 = 1;

pub fn write_trace(config: &MatchConfig, result: &MatchResult) -> String {
    let mut out = format!(
        "{TRACE_HEADER} {TRACE_VERSION}\n# config {}\n# seed {}\n",
        serde_json::to_string(config).expect("config serializes"),
        result.seed
    );
    for line in result.trace_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Header fields and event lines of a trace file.
pub fn parse_trace(text: &str) -> Result<(MatchConfig, u64, Vec<&str>), HarnessError> {
    let bad = |m: &str| HarnessError::Trace(m.to_string());
    let mut lines = text.lines();
    let version = lines
        .next()
        .and_then(|l| l.strip_prefix(TRACE_HEADER))
        .ok_or_else(|| bad("missing '# logibot-trace' header"))?
        .trim();
    if version != TRACE_VERSION.to_string() {
        return Err(HarnessError::Trace(format!(
            "trace format version {version} is not supported by this build (expects {TRACE_VERSION})"
        )));
    }
    let config = lines
        .next()
        .and_then(|l| l.strip_prefix("# config "))
        .ok_or_else(|| bad("missing '# config' line"))?;
    let config: MatchConfig =
        serde_json::from_str(config).map_err(|e| HarnessError::Trace(format!("bad config: {e}")))?;
    let seed = lines
        .next()
        .and_then(|l| l.strip_prefix("# seed "))
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| bad("missing '# seed' line"))?;
    Ok((config, seed, lines.filter(|l| !l.is_empty()).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayOutcome {
    Clean { events: usize },
    Diverged {
        /// 1-based event line (header excluded).
        line: usize,
        tick: Option<u64>,
        expected: Option<String>,
        actual: Option<String>,
    },
}

impl fmt::Display for ReplayOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayOutcome::Clean { events } => write!(f, "clean: {events} events reproduced"),
            ReplayOutcome::Diverged {
                line,
                tick,
                expected,
                actual,
            } => {
                let tick = tick.map_or("?".to_string(), |t| t.to_string());
                writeln!(f, "diverged at event {line} (tick {tick})")?;
                writeln!(f, "  trace:  {}", expected.as_deref().unwrap_or("<end>"))?;
                write!(f, "  replay: {}", actual.as_deref().unwrap_or("<end>"))
            }
        }
    }
}

fn tick_of(line: &str) -> Option<u64> {
    line.split(';').next()?.parse().ok()
}

/// Re-runs the match recorded in `text` and compares event by event.
pub fn replay(text: &str) -> Result<ReplayOutcome, HarnessError> {
    let (config, seed, recorded) = parse_trace(text)?;
    let result = config.prepare()?.run(seed, false);
    let fresh: Vec<String> = result.trace_lines().collect();
    for i in 0..recorded.len().max(fresh.len()) {
        let (a, b) = (recorded.get(i).copied(), fresh.get(i).map(String::as_str));
        if a != b {
            let tick = match (a.and_then(tick_of), b.and_then(tick_of)) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            return Ok(ReplayOutcome::Diverged {
                line: i + 1,
                tick,
                expected: a.map(str::to_string),
                actual: b.map(str::to_string),
            });
        }
    }
    Ok(ReplayOutcome::Clean { events: fresh.len() })
}
