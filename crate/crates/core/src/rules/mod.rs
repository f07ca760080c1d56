//! Rule packages: manifests, loading and the package validator.

mod validate;

use std::fmt;
use std::path::{Path, PathBuf};

use logibot_engine::{parse_program, Clause, EngineError, KnowledgeBase, PredKey};
use serde::Deserialize;
use thiserror::Error;

pub use validate::{validate_package, validate_stack, Finding, FindingKind, Report};

use crate::runtime::AgentHost;

/// Generality level. Packages load in this order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Game,
    MapType,
    MapSpecific,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Game => "game",
            Level::MapType => "map_type",
            Level::MapSpecific => "map_specific",
        }
    }
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("package {package}, file {file}: {error}")]
    Parse {
        package: String,
        file: String,
        error: EngineError,
    },
    #[error("package {package}: {error}")]
    Load { package: String, error: EngineError },
    #[error("manifest {path}: {message}")]
    Manifest { path: String, message: String },
    #[error("{path}: {error}")]
    Io { path: String, error: std::io::Error },
    #[error("unknown package {0}")]
    Unknown(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    name: String,
    level: Level,
    files: Vec<String>,
    #[serde(default)]
    entry: Vec<String>,
    #[serde(default)]
    dynamic: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceFile {
    pub name: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulePackage {
    pub name: String,
    pub level: Level,
    pub files: Vec<SourceFile>,
    pub entry: Vec<PredKey>,
    pub dynamic: Vec<PredKey>,
}

/// Parses `name/arity`.
pub fn parse_indicator(s: &str) -> Option<PredKey> {
    let (name, arity) = s.trim().rsplit_once('/')?;
    let arity = arity.trim().parse().ok()?;
    let name = name.trim();
    (!name.is_empty()).then(|| PredKey::new(name, arity))
}

pub fn indicator(k: &PredKey) -> String {
    format!("{}/{}", k.name.as_str(), k.arity)
}

macro_rules! shipped {
    ($($name:literal => [$($file:literal),*]),* $(,)?) => {
        /// Packages bundled with the library: `(name, manifest, files)`.
        const SHIPPED: &[(&str, &str, &[(&str, &str)])] = &[
            $((
                $name,
                include_str!(concat!("../../assets/packages/", $name, "/manifest.toml")),
                &[$(($file, include_str!(concat!("../../assets/packages/", $name, "/", $file)))),*],
            )),*
        ];
    };
}

shipped! {
    "baseline" => ["baseline.pl"],
    "cs_rules" => ["cs_rules.pl"],
    "warehouse_tactics" => ["warehouse_tactics.pl"],
}

/// Names of the bundled packages, most general first.
pub fn shipped_names() -> Vec<&'static str> {
    SHIPPED.iter().map(|(n, _, _)| *n).collect()
}

impl RulePackage {
    /// Builds a package from manifest text and a lookup for its files.
    pub fn from_manifest(
        manifest: &str,
        origin: &str,
        mut read: impl FnMut(&str) -> Result<String, RuleError>,
    ) -> Result<RulePackage, RuleError> {
        let bad = |message: String| RuleError::Manifest {
            path: origin.to_string(),
            message,
        };
        let m: ManifestFile = toml::from_str(manifest).map_err(|e| bad(e.message().to_string()))?;
        let keys = |list: &[String]| -> Result<Vec<PredKey>, RuleError> {
            list.iter()
                .map(|s| parse_indicator(s).ok_or_else(|| bad(format!("bad predicate indicator {s:?}"))))
                .collect()
        };
        let entry = keys(&m.entry)?;
        let dynamic = keys(&m.dynamic)?;
        if m.level == Level::Game && !entry.contains(&PredKey::new("do_reasoning", 1)) {
            return Err(bad("a game-level package must list do_reasoning/1 as an entry".into()));
        }
        let files = m
            .files
            .iter()
            .map(|f| Ok(SourceFile { name: f.clone(), text: read(f)? }))
            .collect::<Result<_, RuleError>>()?;
        Ok(RulePackage {
            name: m.name,
            level: m.level,
            files,
            entry,
            dynamic,
        })
    }

    /// A bundled package by name.
    pub fn shipped(name: &str) -> Result<RulePackage, RuleError> {
        let (_, manifest, files) = SHIPPED
            .iter()
            .find(|(n, _, _)| *n == name)
            .ok_or_else(|| RuleError::Unknown(name.to_string()))?;
        RulePackage::from_manifest(manifest, name, |f| {
            files
                .iter()
                .find(|(n, _)| *n == f)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| RuleError::Io {
                    path: format!("{name}/{f}"),
                    error: std::io::ErrorKind::NotFound.into(),
                })
        })
    }

    /// Reads a manifest file; its `files` are relative to its directory.
    pub fn load(path: &Path) -> Result<RulePackage, RuleError> {
        let io = |p: &Path, error| RuleError::Io {
            path: p.display().to_string(),
            error,
        };
        let text = std::fs::read_to_string(path).map_err(|e| io(path, e))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
        RulePackage::from_manifest(&text, &path.display().to_string(), |f| {
            let p = dir.join(f);
            std::fs::read_to_string(&p).map_err(|e| io(&p, e))
        })
    }

    /// A package name, or a manifest path when the name contains a path
    /// separator or ends in `.toml`.
    pub fn resolve(spec: &str) -> Result<RulePackage, RuleError> {
        if spec.ends_with(".toml") || spec.contains('/') || spec.contains('\\') {
            RulePackage::load(Path::new(spec))
        } else {
            RulePackage::shipped(spec)
        }
    }

    /// Resolves a comma-separated package list.
    pub fn resolve_list(specs: &str) -> Result<Vec<RulePackage>, RuleError> {
        specs
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(RulePackage::resolve)
            .collect()
    }

    /// Clauses of every file, in file then source order.
    pub fn clauses(&self) -> Result<Vec<Clause>, RuleError> {
        let mut out = Vec::new();
        for f in &self.files {
            let parsed = parse_program(&f.text).map_err(|error| RuleError::Parse {
                package: self.name.clone(),
                file: f.name.clone(),
                error,
            })?;
            out.extend(parsed.into_iter().map(Clause::from));
        }
        Ok(out)
    }

    /// Declares the package's dynamic predicates and appends its clauses.
    pub fn load_into(&self, kb: &mut KnowledgeBase<AgentHost>) -> Result<(), RuleError> {
        let clauses = self.clauses()?;
        let fail = |error| RuleError::Load {
            package: self.name.clone(),
            error,
        };
        for k in &self.dynamic {
            kb.declare_dynamic(k.clone()).map_err(fail)?;
        }
        kb.add_clauses(clauses).map_err(fail)?;
        Ok(())
    }
}

impl fmt::Display for RulePackage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.level.name())
    }
}

/// The package stack used for "scripted" controllers on a map: the game
/// level rules, the hostage-rescue rules, and map tactics when shipped.
pub fn default_stack(map: &str) -> Vec<RulePackage> {
    let mut names = vec!["baseline", "cs_rules"];
    if map == "warehouse" {
        names.push("warehouse_tactics");
    }
    names
        .into_iter()
        .map(|n| RulePackage::shipped(n).expect("shipped package"))
        .collect()
}
