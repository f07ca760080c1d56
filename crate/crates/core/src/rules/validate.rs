//! Static checks over a package stack: every called predicate must be
//! defined, and every asserted predicate declared dynamic.

use std::collections::BTreeSet;
use std::fmt;

use logibot_engine::{is_builtin, parse_program, PredKey, Term, LIST_LIBRARY};

use super::{indicator, RulePackage};
use crate::runtime::{native_keys, ROUND_SCOPED, RUNTIME_PRELUDE};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FindingKind {
    Parse,
    Undefined,
    ArityMismatch,
    UndeclaredDynamic,
}

impl FindingKind {
    pub fn is_error(self) -> bool {
        !matches!(self, FindingKind::UndeclaredDynamic)
    }

    pub fn name(self) -> &'static str {
        match self {
            FindingKind::Parse => "parse error",
            FindingKind::Undefined => "undefined",
            FindingKind::ArityMismatch => "arity mismatch",
            FindingKind::UndeclaredDynamic => "warning: undeclared dynamic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub package: String,
    pub kind: FindingKind,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.package, self.kind.name(), self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.kind.is_error())
    }

    pub fn mentions(&self, kind: FindingKind, key: &str) -> bool {
        self.findings
            .iter()
            .any(|f| f.kind == kind && f.message.split_whitespace().any(|w| w == key))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.findings.is_empty() {
            return writeln!(f, "ok");
        }
        for x in &self.findings {
            writeln!(f, "{x}")?;
        }
        Ok(())
    }
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Use {
    Call,
    Modify,
}

/// Arity of the trailing goal-pack argument of action natives.
fn pack_position(name: &str, arity: usize) -> Option<usize> {
    let base = match name {
        "action_liberate_hostages" => 1,
        "action_goto" | "action_kill" | "action_guard" | "action_buy" | "action_wait" => 2,
        "start_action" => 3,
        _ => return None,
    };
    (arity == base + 1).then_some(base)
}

fn walk(goal: &Term, out: &mut Vec<(PredKey, Use)>) {
    let Some(key) = goal.pred_key() else { return };
    let args = goal.args();
    match (key.name.as_str(), key.arity) {
        (",", 2) | (";", 2) | ("->", 2) | ("and", 2) => {
            walk(&args[0], out);
            walk(&args[1], out);
        }
        ("\\+", 1) => walk(&args[0], out),
        ("findall", 3) => walk(&args[1], out),
        ("call", n) => {
            if let Some(inner) = args[0].pred_key() {
                let k = PredKey::new(inner.name.clone(), inner.arity + n - 1);
                if n == 1 {
                    walk(&args[0], out);
                } else {
                    out.push((k, Use::Call));
                }
            }
        }
        ("assert" | "asserta" | "assertz" | "retract", 1) => {
            let head = if args[0].is_functor(":-", 2) { &args[0].args()[0] } else { &args[0] };
            if let Some(k) = head.pred_key() {
                out.push((k, Use::Modify));
            }
        }
        _ => {
            if let Some(pos) = pack_position(key.name.as_str(), key.arity) {
                walk_pack(&args[pos], out);
            }
            out.push((key, Use::Call));
        }
    }
}

fn walk_pack(pack: &Term, out: &mut Vec<(PredKey, Use)>) {
    if pack.is_functor("andThen", 1) {
        walk(&pack.args()[0], out);
    } else if pack.is_functor(",", 2) && pack.args()[1].is_functor("andThen", 1) {
        walk(&pack.args()[0], out);
        walk(&pack.args()[1].args()[0], out);
    } else {
        walk(pack, out);
    }
}

struct Known {
    defined: BTreeSet<PredKey>,
    dynamic: BTreeSet<PredKey>,
}

impl Known {
    fn runtime() -> Known {
        let mut defined: BTreeSet<PredKey> = native_keys().into_iter().collect();
        for src in [RUNTIME_PRELUDE, LIST_LIBRARY] {
            for c in parse_program(src).expect("prelude parses") {
                defined.extend(c.head.pred_key());
            }
        }
        let dynamic = ROUND_SCOPED.iter().map(|(n, a)| PredKey::new(*n, *a)).collect();
        Known { defined, dynamic }
    }

    fn knows(&self, k: &PredKey) -> bool {
        is_builtin(k) || self.defined.contains(k) || self.dynamic.contains(k)
    }

    fn same_name(&self, k: &PredKey) -> Option<&PredKey> {
        self.defined.iter().chain(&self.dynamic).find(|d| d.name == k.name)
    }

    /// Adds a package's definitions, recording parse failures in `findings`;
    /// returns the predicate uses found in its clauses.
    fn absorb(&mut self, p: &RulePackage, findings: &mut Vec<Finding>) -> Vec<(PredKey, Use)> {
        let mut uses = Vec::new();
        self.dynamic.extend(p.dynamic.iter().cloned());
        for f in &p.files {
            match parse_program(&f.text) {
                Ok(clauses) => {
                    for c in clauses {
                        self.defined.extend(c.head.pred_key());
                        walk(&c.body, &mut uses);
                    }
                }
                Err(e) => findings.push(Finding {
                    package: p.name.clone(),
                    kind: FindingKind::Parse,
                    message: format!("{}: {e}", f.name),
                }),
            }
        }
        uses
    }
}

fn check(p: &RulePackage, known: &mut Known, findings: &mut Vec<Finding>) {
    let uses = known.absorb(p, findings);
    // memory the package writes itself is covered by the dynamic warning
    let written: BTreeSet<PredKey> =
        uses.iter().filter(|(_, how)| *how == Use::Modify).map(|(k, _)| k.clone()).collect();
    let mut seen = BTreeSet::new();
    let mut add = |kind, message: String| {
        if seen.insert((kind, message.clone())) {
            findings.push(Finding {
                package: p.name.clone(),
                kind,
                message,
            });
        }
    };
    for (k, how) in uses {
        match how {
            Use::Call if !known.knows(&k) && !written.contains(&k) => match known.same_name(&k) {
                Some(other) => add(
                    FindingKind::ArityMismatch,
                    format!("{} called but only {} exists", indicator(&k), indicator(other)),
                ),
                None => add(FindingKind::Undefined, format!("{} is called but never defined", indicator(&k))),
            },
            Use::Modify if !known.dynamic.contains(&k) => add(
                FindingKind::UndeclaredDynamic,
                format!("{} is asserted or retracted but not declared dynamic", indicator(&k)),
            ),
            _ => {}
        }
    }
    for e in &p.entry {
        if !known.defined.contains(e) && !known.dynamic.contains(e) {
            add(FindingKind::Undefined, format!("{} is an entry but never defined", indicator(e)));
        }
    }
}

/// Checks `package` against the packages loaded before it.
pub fn validate_package(package: &RulePackage, earlier: &[RulePackage]) -> Report {
    let mut known = Known::runtime();
    let mut scratch = Vec::new();
    for p in earlier {
        known.absorb(p, &mut scratch);
    }
    let mut findings = Vec::new();
    check(package, &mut known, &mut findings);
    Report { findings }
}

/// Checks every package of a stack, each against those before it (in
/// level order).
pub fn validate_stack(packages: &[RulePackage]) -> Report {
    let mut ordered: Vec<&RulePackage> = packages.iter().collect();
    ordered.sort_by_key(|p| p.level);
    let mut known = Known::runtime();
    let mut findings = Vec::new();
    for p in ordered {
        check(p, &mut known, &mut findings);
    }
    Report { findings }
}
