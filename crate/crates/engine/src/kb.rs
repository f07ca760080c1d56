//! Clause store, native predicate table and the dynamic database.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bindings::Bindings;
use crate::builtins::is_builtin;
use crate::error::{EngineError, Result};
use crate::parser::{parse_program, parse_term, ParsedClause};
use crate::solve::{Limits, Solution, SolutionStream};
use crate::term::{PredKey, Term, VarId};

/// A stored clause. Variables are numbered `0..var_count`.
#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub head: Term,
    pub body: Term,
    pub var_count: u32,
    pub dynamic: bool,
    pub seq: u64,
}

impl Clause {
    /// Builds a clause from terms that may use arbitrary variable ids,
    /// renumbering them densely.
    pub fn from_terms(head: &Term, body: &Term) -> Clause {
        let mut map: HashMap<VarId, VarId> = HashMap::new();
        let head = renumber(head, &mut map);
        let body = renumber(body, &mut map);
        Clause {
            head,
            body,
            var_count: map.len() as u32,
            dynamic: false,
            seq: 0,
        }
    }

    pub fn key(&self) -> PredKey {
        self.head.pred_key().expect("clause head is callable")
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_functor("true", 0)
    }

    /// The clause as a single term, `Head` or `(Head :- Body)`.
    pub fn to_term(&self) -> Term {
        if self.is_fact() {
            self.head.clone()
        } else {
            Term::compound(":-", vec![self.head.clone(), self.body.clone()])
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.", self.to_term())
    }
}

fn renumber(t: &Term, map: &mut HashMap<VarId, VarId>) -> Term {
    match t {
        Term::Var(v) => {
            let next = VarId(map.len() as u32);
            Term::Var(*map.entry(*v).or_insert(next))
        }
        Term::Compound(c) => Term::compound_from(
            c.functor.clone(),
            c.args.iter().map(|a| renumber(a, map)).collect(),
        ),
        other => other.clone(),
    }
}

impl From<ParsedClause> for Clause {
    fn from(p: ParsedClause) -> Self {
        Clause {
            head: p.head,
            body: p.body,
            var_count: p.var_count,
            dynamic: false,
            seq: 0,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Predicate {
    pub clauses: Vec<Arc<Clause>>,
}

pub(crate) type ClauseTable = HashMap<PredKey, Arc<Predicate>>;

/// Where `assert_clause` inserts.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Position {
    Front,
    Back,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NativeMode {
    Deterministic,
    Nondeterministic,
}

/// Answers a deterministic native: `Some(values)` succeeds after unifying
/// `values` with the call's arguments position by position.
pub type DetHandler<H> = dyn Fn(&mut H, &[Term]) -> Result<Option<Vec<Term>>> + Send + Sync;

/// Answers a nondeterministic native with a lazy sequence of argument
/// tuples; the solver pulls the next tuple on backtracking.
pub type NondetHandler<H> =
    dyn Fn(&mut H, &[Term]) -> Result<Box<dyn Iterator<Item = Vec<Term>>>> + Send + Sync;

/// A host-provided predicate. Handlers receive the call's arguments with
/// bindings fully applied.
pub enum Native<H> {
    Det(Arc<DetHandler<H>>),
    Nondet(Arc<NondetHandler<H>>),
}

impl<H> Clone for Native<H> {
    fn clone(&self) -> Self {
        match self {
            Native::Det(f) => Native::Det(f.clone()),
            Native::Nondet(f) => Native::Nondet(f.clone()),
        }
    }
}

impl<H> Native<H> {
    pub fn mode(&self) -> NativeMode {
        match self {
            Native::Det(_) => NativeMode::Deterministic,
            Native::Nondet(_) => NativeMode::Nondeterministic,
        }
    }
}

pub(crate) type NativeTable<H> = HashMap<PredKey, Native<H>>;

/// Clause database plus registered natives.
///
/// `H` is the host context handed to native handlers while solving. The
/// clause table is copy-on-write: an open [`SolutionStream`] keeps the table
/// it was created against, so database updates never change the answers of
/// a stream that is already running.
pub struct KnowledgeBase<H = ()> {
    clauses: Arc<ClauseTable>,
    natives: Arc<NativeTable<H>>,
    generation: u64,
    next_seq: u64,
    limits: Limits,
    output: String,
}

impl<H> Default for KnowledgeBase<H> {
    fn default() -> Self {
        Self::new()
    }
}

impl<H> Clone for KnowledgeBase<H> {
    fn clone(&self) -> Self {
        KnowledgeBase {
            clauses: self.clauses.clone(),
            natives: self.natives.clone(),
            generation: self.generation,
            next_seq: self.next_seq,
            limits: self.limits,
            output: String::new(),
        }
    }
}

impl<H> KnowledgeBase<H> {
    pub fn new() -> Self {
        KnowledgeBase {
            clauses: Arc::new(HashMap::new()),
            natives: Arc::new(HashMap::new()),
            generation: 0,
            next_seq: 0,
            limits: Limits::default(),
            output: String::new(),
        }
    }

    pub fn with_limits(limits: Limits) -> Self {
        KnowledgeBase {
            limits,
            ..Self::new()
        }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
    }

    /// Incremented by every successful assert and retract.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub(crate) fn snapshot(&self) -> (Arc<ClauseTable>, Arc<NativeTable<H>>) {
        (self.clauses.clone(), self.natives.clone())
    }

    pub fn is_native(&self, key: &PredKey) -> bool {
        self.natives.contains_key(key)
    }

    pub fn native_keys(&self) -> impl Iterator<Item = &PredKey> {
        self.natives.keys()
    }

    /// True when `key` has a clause-table entry (possibly with no clauses).
    pub fn is_defined(&self, key: &PredKey) -> bool {
        self.clauses.contains_key(key)
    }

    pub fn predicate_keys(&self) -> Vec<PredKey> {
        let mut keys: Vec<_> = self.clauses.keys().cloned().collect();
        keys.sort();
        keys
    }

    pub fn clauses(&self, key: &PredKey) -> Vec<Arc<Clause>> {
        self.clauses
            .get(key)
            .map(|p| p.clauses.clone())
            .unwrap_or_default()
    }

    fn check_writable(&self, key: &PredKey, action: &str) -> Result<()> {
        if is_builtin(key) || self.natives.contains_key(key) {
            return Err(EngineError::permission(action, key));
        }
        Ok(())
    }

    /// Makes `key` known with no clauses, so calls fail instead of raising
    /// an existence error.
    pub fn declare_dynamic(&mut self, key: PredKey) -> Result<()> {
        self.check_writable(&key, "modify")?;
        Arc::make_mut(&mut self.clauses).entry(key).or_default();
        Ok(())
    }

    /// Adds a host handler for `name/arity`.
    pub fn register_native(&mut self, name: &str, arity: usize, native: Native<H>) -> Result<()> {
        let key = PredKey::new(name, arity);
        if is_builtin(&key) {
            return Err(EngineError::permission("redefine", &key));
        }
        if self.natives.contains_key(&key) || self.clauses.contains_key(&key) {
            return Err(EngineError::DuplicateNative {
                name: name.to_string(),
                arity,
            });
        }
        Arc::make_mut(&mut self.natives).insert(key, native);
        Ok(())
    }

    pub fn register_det<F>(&mut self, name: &str, arity: usize, f: F) -> Result<()>
    where
        F: Fn(&mut H, &[Term]) -> Result<Option<Vec<Term>>> + Send + Sync + 'static,
    {
        self.register_native(name, arity, Native::Det(Arc::new(f)))
    }

    pub fn register_nondet<F>(&mut self, name: &str, arity: usize, f: F) -> Result<()>
    where
        F: Fn(&mut H, &[Term]) -> Result<Box<dyn Iterator<Item = Vec<Term>>>> + Send + Sync + 'static,
    {
        self.register_native(name, arity, Native::Nondet(Arc::new(f)))
    }

    /// Loads program text, appending its clauses in source order. Either
    /// every clause is added or none is.
    pub fn consult(&mut self, src: &str) -> Result<usize> {
        let parsed = parse_program(src)?;
        self.add_clauses(parsed.into_iter().map(Clause::from).collect())
    }

    /// Appends already-read clauses atomically.
    pub fn add_clauses(&mut self, clauses: Vec<Clause>) -> Result<usize> {
        for c in &clauses {
            self.check_writable(&c.key(), "modify")?;
        }
        let n = clauses.len();
        for c in clauses {
            self.insert(c, Position::Back);
        }
        Ok(n)
    }

    fn insert(&mut self, mut clause: Clause, position: Position) {
        clause.seq = self.next_seq;
        self.next_seq += 1;
        let key = clause.key();
        let table = Arc::make_mut(&mut self.clauses);
        let pred = Arc::make_mut(table.entry(key).or_default());
        match position {
            Position::Back => pred.clauses.push(Arc::new(clause)),
            Position::Front => pred.clauses.insert(0, Arc::new(clause)),
        }
    }

    /// Adds a clause at one end of its predicate; marks it dynamic and bumps
    /// the generation.
    pub fn assert_clause(&mut self, mut clause: Clause, position: Position) -> Result<()> {
        self.check_writable(&clause.key(), "modify")?;
        clause.dynamic = true;
        self.insert(clause, position);
        self.generation += 1;
        Ok(())
    }

    /// Asserts `Head` or `(Head :- Body)` given as a term.
    pub fn assert_term(&mut self, term: &Term, position: Position) -> Result<()> {
        let (head, body) = split_clause_term(term)?;
        self.assert_clause(Clause::from_terms(&head, &body), position)
    }

    /// Parses and asserts one clause, e.g. `"visited(wp7)"`.
    pub fn assert_text(&mut self, text: &str, position: Position) -> Result<()> {
        let parsed = parse_term(text)?;
        self.assert_term(&parsed.term, position)
    }

    /// Removes the first clause (in database order) unifying with `pattern`.
    /// Bindings made by the match are kept in `bindings`; `next_var` supplies
    /// fresh variable ids for renaming stored clauses.
    pub(crate) fn retract_with(
        &mut self,
        pattern: &Term,
        bindings: &mut Bindings,
        next_var: &mut u32,
    ) -> Result<bool> {
        let pattern = bindings.resolve(pattern);
        let (head, body) = split_clause_term(&pattern)?;
        let key = head.pred_key().expect("checked callable");
        self.check_writable(&key, "modify")?;
        let Some(pred) = self.clauses.get(&key).cloned() else {
            return Ok(false);
        };
        for clause in pred.clauses.iter() {
            let base = *next_var;
            let stored_head = clause.head.offset_vars(base);
            let stored_body = clause.body.offset_vars(base);
            let mark = bindings.mark();
            if bindings.unify(&head, &stored_head) && bindings.unify(&body, &stored_body) {
                *next_var += clause.var_count;
                let seq = clause.seq;
                let table = Arc::make_mut(&mut self.clauses);
                let live = Arc::make_mut(table.get_mut(&key).expect("present"));
                live.clauses.retain(|c| c.seq != seq);
                self.generation += 1;
                return Ok(true);
            }
            bindings.undo_to(mark);
        }
        Ok(false)
    }

    /// Host-side retract; see [`KnowledgeBase::retract_with`] semantics.
    pub fn retract(&mut self, pattern: &Term) -> Result<bool> {
        let mut bindings = Bindings::new();
        let mut next = pattern.max_var().map(|v| v.0 + 1).unwrap_or(0);
        self.retract_with(pattern, &mut bindings, &mut next)
    }

    /// Removes every clause whose head unifies with `head`; returns how many.
    pub fn retract_all(&mut self, head: &Term) -> Result<usize> {
        let mut n = 0;
        while self.retract(head)? {
            n += 1;
        }
        Ok(n)
    }

    /// Instances of `pattern` obtained by unifying it with each stored fact
    /// of the same predicate, in database order. Rules are skipped.
    pub fn matching_facts(&self, pattern: &Term) -> Vec<Term> {
        let Some(key) = pattern.pred_key() else {
            return Vec::new();
        };
        let Some(pred) = self.clauses.get(&key) else {
            return Vec::new();
        };
        let base = pattern.max_var().map(|v| v.0 + 1).unwrap_or(0);
        let mut out = Vec::new();
        let mut bindings = Bindings::new();
        for clause in pred.clauses.iter().filter(|c| c.is_fact()) {
            let mark = bindings.mark();
            if bindings.unify(pattern, &clause.head.offset_vars(base)) {
                out.push(bindings.resolve(pattern));
            }
            bindings.undo_to(mark);
        }
        out
    }

    /// Starts an enumeration of `goal`'s solutions against the current
    /// clause set.
    pub fn solve(&self, goal: &Term) -> SolutionStream<H> {
        SolutionStream::new(self, goal.clone(), Vec::new(), self.limits)
    }

    pub fn solve_with_limits(&self, goal: &Term, limits: Limits) -> SolutionStream<H> {
        SolutionStream::new(self, goal.clone(), Vec::new(), limits)
    }

    /// Parses `text` as a goal and starts solving it; solutions report the
    /// goal's named variables.
    pub fn query(&self, text: &str) -> Result<SolutionStream<H>> {
        let parsed = parse_term(text)?;
        Ok(SolutionStream::new(
            self,
            parsed.term,
            parsed.var_names,
            self.limits,
        ))
    }

    /// First solution of `goal`, if any.
    pub fn first_solution(&mut self, goal: &Term, host: &mut H) -> Result<Option<Solution>> {
        let mut stream = self.solve(goal);
        stream.next_solution(self, host)
    }

    /// Text written by `write/1` and `nl/0` since the last call.
    pub fn take_output(&mut self) -> String {
        std::mem::take(&mut self.output)
    }

    pub(crate) fn output_mut(&mut self) -> &mut String {
        &mut self.output
    }
}

impl KnowledgeBase<()> {
    /// Collects every solution of a textual query against a host-less base.
    pub fn query_all(&mut self, text: &str) -> Result<Vec<Solution>> {
        let mut stream = self.query(text)?;
        let mut out = Vec::new();
        while let Some(s) = stream.next_solution(self, &mut ())? {
            out.push(s);
        }
        Ok(out)
    }
}

pub(crate) fn split_clause_term(term: &Term) -> Result<(Term, Term)> {
    let (head, body) = if term.is_functor(":-", 2) {
        (term.args()[0].clone(), term.args()[1].clone())
    } else {
        (term.clone(), Term::atom("true"))
    };
    match &head {
        Term::Var(_) => Err(EngineError::instantiation("clause head is unbound")),
        Term::Int(_) => Err(EngineError::type_error("callable", &head)),
        _ => match &body {
            Term::Int(_) => Err(EngineError::type_error("callable", &body)),
            _ => Ok((head, body)),
        },
    }
}
