//! Interactive query loop against a package stack and a live world.

use std::io::{self, BufRead, Write};
use std::sync::Arc;

use crate::rules::RulePackage;
use crate::runtime::{new_blackboard, Brain, MindConfig, MindTemplate, NativeBaseline, ScriptedMind};
use crate::sim::{bot_name, GameConfig, MapDefinition, WorldState};

use super::HarnessError;

const HELP: &str = "\
queries: any goal, e.g. visible_enemy(b1, E) or do_reasoning(b1)
:bot NAME     ask as another bot (default b1)
:step N       advance the world N ticks with native bots
:world        show bot positions and the phase
:help         this text
;             next answer (anything else stops)
:quit         leave";

const MAX_ANSWERS: usize = 20;

/// One scripted mind per bot over a shared world. Queries never queue
/// actions; the actions a proof requests are listed instead.
pub struct Repl {
    world: Arc<WorldState>,
    minds: Vec<ScriptedMind>,
    natives: Vec<NativeBaseline>,
    current: usize,
}

impl Repl {
    pub fn new(map: Arc<MapDefinition>, packages: &[RulePackage], seed: u64) -> Result<Repl, HarnessError> {
        let template = MindTemplate::new(packages)?;
        let mut world = WorldState::new(map, Arc::new(GameConfig::default()), 5, 5, seed);
        world.start_round();
        let world = Arc::new(world);
        let boards = [new_blackboard(), new_blackboard()];
        let minds = (0..world.bots.len())
            .map(|b| template.instantiate(b, &world, boards[usize::from(b >= 5)].clone(), MindConfig::default()))
            .collect();
        let mut natives: Vec<NativeBaseline> = (0..world.bots.len()).map(NativeBaseline::new).collect();
        for n in &mut natives {
            n.begin_round(&world);
        }
        Ok(Repl {
            world,
            minds,
            natives,
            current: 0,
        })
    }

    /// Handles one input line. `None` means quit.
    pub fn eval(&mut self, line: &str) -> Option<String> {
        let line = line.trim();
        if line.is_empty() {
            return Some(String::new());
        }
        if let Some(cmd) = line.strip_prefix(':') {
            let mut parts = cmd.split_whitespace();
            return match (parts.next(), parts.next()) {
                (Some("quit" | "q"), _) => None,
                (Some("help"), _) => Some(HELP.to_string()),
                (Some("bot"), Some(name)) => Some(match self.world.bot_by_name(name) {
                    Some(b) => {
                        self.current = b;
                        format!("asking as {name}")
                    }
                    None => format!("no bot named {name}"),
                }),
                (Some("step"), n) => Some(match n.unwrap_or("1").parse::<u32>() {
                    Ok(n) => self.step(n),
                    Err(_) => "usage: :step N".to_string(),
                }),
                (Some("world"), _) => Some(self.describe()),
                _ => Some(format!("unknown command :{cmd} (try :help)")),
            };
        }
        Some(self.ask(line).join("\n"))
    }

    /// Answers to a query, one per entry, followed by `% would start`
    /// notes for the actions the first proof requested.
    fn ask(&mut self, line: &str) -> Vec<String> {
        let text = line.strip_suffix('.').unwrap_or(line);
        let mind = &mut self.minds[self.current];
        mind.bind_perception(&self.world);
        match mind.query(text, MAX_ANSWERS) {
            Err(e) => vec![format!("error: {e}")],
            Ok((answers, actions)) => {
                let mut out: Vec<String> = if answers.is_empty() {
                    vec!["false.".to_string()]
                } else {
                    answers.iter().map(|s| format!("{s}.")).collect()
                };
                for a in actions {
                    out.push(format!("% would start {}", a.spec.render(&self.world)));
                }
                out
            }
        }
    }

    fn step(&mut self, n: u32) -> String {
        let mut log = Vec::new();
        for _ in 0..n {
            if self.world.check_win().is_some() {
                break;
            }
            let intents: Vec<_> = self.natives.iter_mut().map(|b| b.decide(&self.world, &mut log)).collect();
            let (next, events) = self.world.step(&intents);
            let next = Arc::new(next);
            let tick = self.world.match_tick;
            for b in &mut self.natives {
                b.observe(tick, &next, &events, &mut log);
            }
            self.world = next;
        }
        match self.world.check_win() {
            Some(o) => format!("tick {}: round over, {} wins ({})", self.world.tick, o.winner, o.cause.name()),
            None => format!("tick {} ({})", self.world.tick, self.world.phase.name()),
        }
    }

    fn describe(&self) -> String {
        let w = &self.world;
        let mut lines = vec![format!("round {} tick {} phase {}", w.round, w.tick, w.phase.name())];
        for (i, b) in w.bots.iter().enumerate() {
            lines.push(format!(
                "{} {} at {} health {} ammo {}",
                bot_name(i),
                b.team,
                w.map.name_of(w.bot_waypoint(i)),
                b.health,
                b.ammo
            ));
        }
        lines.join("\n")
    }

    /// Reads lines until end of input or `:quit`. Answers come one at a
    /// time: `;` asks for the next, anything else stops.
    pub fn run(&mut self, input: impl BufRead, mut output: impl Write) -> io::Result<()> {
        writeln!(output, "logibot query loop; :help for commands")?;
        let mut lines = input.lines();
        loop {
            write!(output, "?- ")?;
            output.flush()?;
            let Some(line) = lines.next() else { break };
            let line = line?;
            if line.trim().starts_with(':') || line.trim().is_empty() {
                match self.eval(&line) {
                    None => break,
                    Some(reply) if reply.is_empty() => {}
                    Some(reply) => writeln!(output, "{reply}")?,
                }
                continue;
            }
            let reply = self.ask(line.trim());
            let answers = reply.iter().filter(|l| !l.starts_with('%')).count();
            for (i, l) in reply.iter().enumerate() {
                if i + 1 < answers {
                    write!(output, "{} ", l.trim_end_matches('.'))?;
                    output.flush()?;
                    match lines.next() {
                        Some(Ok(more)) if more.trim() == ";" => continue,
                        Some(Err(e)) => return Err(e),
                        _ => {
                            writeln!(output, ".")?;
                            break;
                        }
                    }
                }
                writeln!(output, "{l}")?;
            }
        }
        writeln!(output)
    }
}
