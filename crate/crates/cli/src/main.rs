use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logibot::harness::{
    measure_performance, replay, run_experiment, write_trace, HarnessError, MatchConfig, MatchResult, Repl,
    ReplayOutcome,
};
use logibot::rules::{default_stack, validate_package, validate_stack, RulePackage};

#[derive(Parser)]
#[command(name = "logibot", version, about = "Logic-scripted bots on a hostage-rescue simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play matches and print the round counts.
    Run(RunArgs),
    /// Run the four controller pairings and print both win tables.
    Experiment(ExperimentArgs),
    /// Re-run a trace file and report the first divergence.
    Replay { trace: PathBuf },
    /// Check rule package manifests; later packages see the earlier ones.
    Validate(ValidateArgs),
    /// Interactive query loop against a package stack.
    Repl(ReplArgs),
}

#[derive(Args, Clone)]
struct MatchArgs {
    /// TOML file with match settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fixture name or map file.
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    rounds: Option<u32>,
    #[arg(long)]
    matches: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ct_size: Option<usize>,
    #[arg(long)]
    t_size: Option<usize>,
}

impl MatchArgs {
    fn resolve(&self) -> Result<MatchConfig, Failure> {
        let mut c = match &self.config {
            Some(p) => {
                let text = read(p)?;
                toml::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", p.display())))?
            }
            None => MatchConfig::default(),
        };
        if let Some(v) = &self.map {
            c.map = v.clone();
        }
        if let Some(v) = self.rounds {
            c.rounds = v;
        }
        if let Some(v) = self.matches {
            c.matches = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.ct_size {
            c.ct_size = v;
        }
        if let Some(v) = self.t_size {
            c.t_size = v;
        }
        Ok(c)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: MatchArgs,
    /// CT controller: native, empty, scripted or scripted:PKG,PKG
    #[arg(long)]
    ct: Option<String>,
    /// T controller, same forms as --ct.
    #[arg(long)]
    t: Option<String>,
    /// Write traces, action logs, counts and a JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also time reasoning against an all-native run of the first match.
    #[arg(long)]
    perf: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    common: MatchArgs,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write tables.txt, experiment.json and counts.csv here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Manifest paths or shipped package names.
    #[arg(required = true)]
    manifests: Vec<String>,
    /// Packages assumed loaded before the checked ones, comma-separated.
    #[arg(long, default_value = "")]
    on: String,
}

#[derive(Args)]
struct ReplArgs {
    #[arg(long, default_value = "warehouse")]
    map: String,
    /// Comma-separated packages; the map's default stack when omitted.
    #[arg(long)]
    packages: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: String) -> Self {
        Failure { code: 1, message }
    }

    fn runtime(message: String) -> Self {
        Failure { code: 2, message }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure {
            code: if e.is_validation() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::runtime(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("{}: {e}", dir.display())))
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut config = args.common.resolve()?;
    if let Some(v) = args.ct {
        config.ct = v;
    }
    if let Some(v) = args.t {
        config.t = v;
    }
    let prepared = config.prepare()?;
    let results: Vec<MatchResult> = (0..config.matches)
        .map(|m| prepared.run(config.seed + u64::from(m), false))
        .collect();

    println!(
        "{} ({}) vs {} ({}) on {}, {} rounds per match",
        config.ct, config.ct_size, config.t, config.t_size, prepared.map.name, config.rounds
    );
    println!("{:<6} {:>6} {:>6} {:>6} {:>6} {:>6}", "match", "seed", "CTs", "Ts", "CT goal", "T goal");
    let mut csv = String::from("match,seed,ct_wins,t_wins,ct_goal,t_goal\n");
    for (i, r) in results.iter().enumerate() {
        let c = r.counts;
        println!("{:<6} {:>6} {:>6} {:>6} {:>7} {:>6}", i, r.seed, c.ct_wins, c.t_wins, c.ct_goal, c.t_goal);
        let _ = writeln!(csv, "{i},{},{},{},{},{}", r.seed, c.ct_wins, c.t_wins, c.ct_goal, c.t_goal);
    }
    let diagnostics: usize = results.iter().map(|r| r.diagnostics().count()).sum();
    if diagnostics > 0 {
        eprintln!("{diagnostics} reasoning diagnostics (see the action logs with --out)");
    }

    let perf = if args.perf { Some(measure_performance(&config)?) } else { None };
    if let Some(p) = &perf {
        print!("{p}");
    }

    if let Some(dir) = &args.out {
        create_dir(dir)?;
        for (i, r) in results.iter().enumerate() {
            write(dir, &format!("match-{i}.trace"), &write_trace(&config, r))?;
            let mut log: String = r.action_lines().map(|l| l + "\n").collect();
            for d in r.diagnostics() {
                let _ = writeln!(log, "# {d}");
            }
            write(dir, &format!("match-{i}.actions"), &log)?;
        }
        write(dir, "counts.csv", &csv)?;
        let rounds: Vec<_> = results
            .iter()
            .map(|r| {
                serde_json::json!({
                    "seed": r.seed,
                    "counts": r.counts,
                    "rounds": r.rounds.iter().map(|x| serde_json::json!({
                        "round": x.round,
                        "winner": x.outcome.winner,
                        "cause": x.outcome.cause.name(),
                        "goal_fulfilled": x.outcome.goal_fulfilled,
                        "ticks": x.ticks,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        let report = serde_json::json!({ "config": config, "matches": rounds });
        write(dir, "report.json", &serde_json::to_string_pretty(&report).expect("serializes"))?;
        if let Some(p) = &perf {
            write(dir, "perf.json", &p.to_json())?;
        }
    }
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<(), Failure> {
    let config = args.common.resolve()?;
    let report = run_experiment(&config)?;
    match args.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
    }
    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write(dir, "tables.txt", &report.to_text())?;
        write(dir, "experiment.json", &report.to_json())?;
        write(dir, "counts.csv", &report.to_csv())?;
    }
    if !report.subset_holds() {
        return Err(Failure::runtime("goal-fulfilled counts exceed total counts".into()));
    }
    Ok(())
}

fn replay_trace(path: &Path) -> Result<(), Failure> {
    let text = read(path)?;
    let outcome = replay(&text)?;
    println!("{outcome}");
    match outcome {
        ReplayOutcome::Clean { .. } => Ok(()),
        ReplayOutcome::Diverged { .. } => Err(Failure::validation("replay diverged".into())),
    }
}

fn validate(args: ValidateArgs) -> Result<(), Failure> {
    let bad = |e: logibot::rules::RuleError| Failure::validation(e.to_string());
    let earlier = RulePackage::resolve_list(&args.on).map_err(bad)?;
    let checked = args
        .manifests
        .iter()
        .map(|m| RulePackage::resolve(m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(bad)?;
    let report = if earlier.is_empty() {
        validate_stack(&checked)
    } else {
        let mut findings = Vec::new();
        let mut loaded = earlier;
        for p in checked {
            findings.extend(validate_package(&p, &loaded).findings);
            loaded.push(p);
        }
        logibot::rules::Report { findings }
    };
    print!("{report}");
    if report.has_errors() {
        Err(Failure::validation(format!("{} finding(s)", report.findings.len())))
    } else {
        Ok(())
    }
}

fn repl(args: ReplArgs) -> Result<(), Failure> {
    let config = MatchConfig {
        map: args.map,
        ..MatchConfig::default()
    };
    let map = Arc::new(config.load_map()?);
    let packages = match &args.packages {
        Some(list) => RulePackage::resolve_list(list).map_err(|e| Failure::validation(e.to_string()))?,
        None => default_stack(&map.name),
    };
    let report = validate_stack(&packages);
    if report.has_errors() {
        return Err(Failure::validation(format!("package validation failed:\n{report}")));
    }
    let mut r = Repl::new(map, &packages, args.seed)?;
    r.run(io::stdin().lock(), io::stdout().lock())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Experiment(a) => experiment(a),
        Command::Replay { trace } => replay_trace(&trace),
        Command::Validate(a) => validate(a),
        Command::Repl(a) => repl(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
