//! The four-pairing experiment: total and goal-fulfilled round wins.

use std::fmt::Write as _;

use serde::Serialize;

use super::{HarnessError, MatchConfig, MatchCounts};

/// Row order of both tables: (CT controller, T controller).
pub const PAIRINGS: [(&str, &str); 4] = [
    ("native", "native"),
    ("scripted", "native"),
    ("native", "scripted"),
    ("scripted", "scripted"),
];

#[derive(Clone, Debug, Serialize)]
pub struct PairingRow {
    pub ct: String,
    pub t: String,
    pub seeds: Vec<u64>,
    pub matches: Vec<MatchCounts>,
    pub mean_ct_wins: f64,
    pub mean_t_wins: f64,
    pub mean_ct_goal: f64,
    pub mean_t_goal: f64,
}

impl PairingRow {
    fn new(ct: &str, t: &str, seeds: Vec<u64>, matches: Vec<MatchCounts>) -> Self {
        let n = matches.len().max(1) as f64;
        let mean = |f: fn(&MatchCounts) -> u32| matches.iter().map(|m| f64::from(f(m))).sum::<f64>() / n;
        PairingRow {
            ct: ct.to_string(),
            t: t.to_string(),
            mean_ct_wins: mean(|m| m.ct_wins),
            mean_t_wins: mean(|m| m.t_wins),
            mean_ct_goal: mean(|m| m.ct_goal),
            mean_t_goal: mean(|m| m.t_goal),
            seeds,
            matches,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub map: String,
    pub rounds: u32,
    pub matches_per_pairing: u32,
    pub seed: u64,
    pub rows: Vec<PairingRow>,
}

impl ExperimentReport {
    /// Both tables as aligned text, means to one decimal.
    pub fn to_text(&self) -> String {
        let scale = format!(
            "mean round wins per match over {} matches of {} rounds, map {}",
            self.matches_per_pairing, self.rounds, self.map
        );
        let mut s = String::new();
        self.table(&mut s, "Table 1: total team victories", &scale, |r| (r.mean_ct_wins, r.mean_t_wins));
        s.push('\n');
        self.table(&mut s, "Table 2: goal-fulfilled team victories", &scale, |r| {
            (r.mean_ct_goal, r.mean_t_goal)
        });
        s
    }

    fn table(&self, s: &mut String, title: &str, scale: &str, pick: fn(&PairingRow) -> (f64, f64)) {
        let _ = writeln!(s, "{title} ({scale})");
        let _ = writeln!(s, "{:<10} {:<10} {:>6} {:>6}", "CTs AI", "Ts AI", "CTs", "Ts");
        for r in &self.rows {
            let (ct, t) = pick(r);
            let _ = writeln!(s, "{:<10} {:<10} {:>6.1} {:>6.1}", r.ct, r.t, ct, t);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per match with the raw counts.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["pairing", "ct", "t", "match", "seed", "ct_wins", "t_wins", "ct_goal", "t_goal"])
            .expect("in-memory write");
        for (p, r) in self.rows.iter().enumerate() {
            for (i, (m, seed)) in r.matches.iter().zip(&r.seeds).enumerate() {
                w.write_record([
                    p.to_string(),
                    r.ct.clone(),
                    r.t.clone(),
                    i.to_string(),
                    seed.to_string(),
                    m.ct_wins.to_string(),
                    m.t_wins.to_string(),
                    m.ct_goal.to_string(),
                    m.t_goal.to_string(),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Goal-fulfilled counts never exceed total counts, match by match.
    pub fn subset_holds(&self) -> bool {
        self.rows.iter().all(|r| {
            r.matches.iter().all(|m| m.ct_goal <= m.ct_wins && m.t_goal <= m.t_wins)
                && r.mean_ct_goal <= r.mean_ct_wins
                && r.mean_t_goal <= r.mean_t_wins
        })
    }
}

fn run_all(jobs: &[(usize, u64)], prepared: &[super::Prepared]) -> Vec<MatchCounts> {
    let run = |&(p, seed): &(usize, u64)| prepared[p].run(seed, false).counts;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.iter().map(run).collect()
    }
}

/// Runs every pairing for `base.matches` matches. Match `m` of pairing
/// `p` uses seed `base.seed + p + m`. The `ct`/`t` fields of `base` are
/// ignored.
pub fn run_experiment(base: &MatchConfig) -> Result<ExperimentReport, HarnessError> {
    let prepared = PAIRINGS
        .iter()
        .map(|(ct, t)| {
            MatchConfig {
                ct: ct.to_string(),
                t: t.to_string(),
                ..base.clone()
            }
            .prepare()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, u64)> = (0..PAIRINGS.len())
        .flat_map(|p| (0..base.matches).map(move |m| (p, base.seed + p as u64 + u64::from(m))))
        .collect();
    let counts = run_all(&jobs, &prepared);
    let per = base.matches as usize;
    let rows = PAIRINGS
        .iter()
        .enumerate()
        .map(|(p, (ct, t))| {
            let seeds = jobs[p * per..(p + 1) * per].iter().map(|j| j.1).collect();
            PairingRow::new(ct, t, seeds, counts[p * per..(p + 1) * per].to_vec())
        })
        .collect();
    Ok(ExperimentReport {
        map: prepared[0].map.name.clone(),
        rounds: base.rounds,
        matches_per_pairing: base.matches,
        seed: base.seed,
        rows,
    })
}
