//! Depth-first SLD resolution with an explicit choice-point stack.
//!
//! Goals are kept in a persistent continuation list so that a choice point
//! can capture "what remains to be proved" in O(1). Cut is implemented by
//! truncating the choice-point stack to the height recorded when the
//! enclosing clause (or `call/1`, condition, negation) was entered.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::iter::Peekable;
use std::sync::Arc;

use crate::arith::eval_arith;
use crate::bindings::Bindings;
use crate::error::{EngineError, ResourceLimit, Result};
use crate::kb::{ClauseTable, KnowledgeBase, Native, NativeTable, Position, Predicate};
use crate::term::{Atom, PredKey, Term, VarId};
use crate::write::format_term;

/// Per-query resource guards.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Goal calls plus clause retries.
    pub max_steps: u64,
    pub max_choice_points: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_steps: 100_000,
            max_choice_points: 10_000,
        }
    }
}

#[derive(Clone)]
enum Goal {
    Call { term: Term, cut_barrier: usize },
    CutTo(usize),
}

struct ContNode {
    goal: Goal,
    next: Cont,
}

type Cont = Option<Arc<ContNode>>;

impl Drop for ContNode {
    // long conjunction chains would otherwise drop recursively
    fn drop(&mut self) {
        let mut next = self.next.take();
        while let Some(node) = next {
            match Arc::try_unwrap(node) {
                Ok(mut inner) => next = inner.next.take(),
                Err(_) => break,
            }
        }
    }
}

fn push(goal: Goal, next: Cont) -> Cont {
    Some(Arc::new(ContNode { goal, next }))
}

enum Alt {
    Clauses {
        goal: Term,
        pred: Arc<Predicate>,
        next: usize,
        cont: Cont,
    },
    Native {
        args: Vec<Term>,
        answers: Peekable<Box<dyn Iterator<Item = Vec<Term>>>>,
        cont: Cont,
    },
    Resume(Cont),
}

struct ChoicePoint {
    trail_mark: usize,
    var_mark: u32,
    alt: Alt,
}

struct Ctx<'a, H> {
    kb: &'a mut KnowledgeBase<H>,
    host: &'a mut H,
    clauses: &'a ClauseTable,
    natives: &'a NativeTable<H>,
}

struct Machine {
    bindings: Bindings,
    cont: Cont,
    choices: Vec<ChoicePoint>,
    next_var: u32,
    steps: u64,
    limits: Limits,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Status {
    Fresh,
    Suspended,
    Exhausted,
}

/// A resumable enumeration of a goal's solutions.
///
/// The stream owns the clause table as it was when the stream was created
/// (the logical update view); asserts and retracts made while it is open,
/// including by the proof itself, affect the knowledge base passed to
/// [`SolutionStream::next_solution`] but not this stream's answers.
pub struct SolutionStream<H> {
    goal: Term,
    var_names: Vec<(String, VarId)>,
    query_vars: Vec<VarId>,
    clauses: Arc<ClauseTable>,
    natives: Arc<NativeTable<H>>,
    snapshot_generation: u64,
    machine: Machine,
    status: Status,
}

/// One answer: the values of the goal's variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    values: Vec<(VarId, Term)>,
    names: Vec<(String, VarId)>,
}

impl Solution {
    pub fn value(&self, var: VarId) -> Option<&Term> {
        self.values.iter().find(|(v, _)| *v == var).map(|(_, t)| t)
    }

    /// Value of a named query variable (only for streams made by
    /// [`KnowledgeBase::query`]).
    pub fn get(&self, name: &str) -> Option<&Term> {
        let id = self.names.iter().find(|(n, _)| n == name)?.1;
        self.value(id)
    }

    pub fn values(&self) -> &[(VarId, Term)] {
        &self.values
    }

    /// `Name = Value` pairs for named variables, in first-appearance order.
    pub fn named(&self) -> Vec<(String, Term)> {
        self.names
            .iter()
            .filter_map(|(n, v)| self.value(*v).map(|t| (n.clone(), t.clone())))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let named = self.named();
        if named.is_empty() {
            return f.write_str("true");
        }
        let parts: Vec<String> = named.iter().map(|(n, t)| format!("{n} = {t}")).collect();
        f.write_str(&parts.join(", "))
    }
}

impl<H> SolutionStream<H> {
    pub(crate) fn new(
        kb: &KnowledgeBase<H>,
        goal: Term,
        var_names: Vec<(String, VarId)>,
        limits: Limits,
    ) -> Self {
        let (clauses, natives) = kb.snapshot();
        let next_var = goal.max_var().map(|v| v.0 + 1).unwrap_or(0);
        let query_vars = goal.variables();
        SolutionStream {
            machine: Machine {
                bindings: Bindings::new(),
                cont: push(
                    Goal::Call {
                        term: goal.clone(),
                        cut_barrier: 0,
                    },
                    None,
                ),
                choices: Vec::new(),
                next_var,
                steps: 0,
                limits,
            },
            goal,
            var_names,
            query_vars,
            clauses,
            natives,
            snapshot_generation: kb.generation(),
            status: Status::Fresh,
        }
    }

    pub fn goal(&self) -> &Term {
        &self.goal
    }

    /// Generation of the knowledge base when the stream was created.
    pub fn snapshot_generation(&self) -> u64 {
        self.snapshot_generation
    }

    pub fn is_exhausted(&self) -> bool {
        self.status == Status::Exhausted
    }

    /// Resolution steps consumed so far.
    pub fn steps(&self) -> u64 {
        self.machine.steps
    }

    pub fn trail_len(&self) -> usize {
        self.machine.bindings.trail_len()
    }

    /// Produces the next solution, or `None` once the stream is exhausted
    /// (and on every call after that). An error ends the stream.
    pub fn next_solution(
        &mut self,
        kb: &mut KnowledgeBase<H>,
        host: &mut H,
    ) -> Result<Option<Solution>> {
        let clauses = self.clauses.clone();
        let natives = self.natives.clone();
        let mut ctx = Ctx {
            kb,
            host,
            clauses: &clauses,
            natives: &natives,
        };
        let found = match self.status {
            Status::Exhausted => return Ok(None),
            Status::Fresh => self.machine.run(&mut ctx, 0),
            Status::Suspended => match self.machine.backtrack(0) {
                Ok(true) => self.machine.run(&mut ctx, 0),
                other => other,
            },
        };
        match found {
            Ok(true) => {
                self.status = Status::Suspended;
                let values = self
                    .query_vars
                    .iter()
                    .map(|v| (*v, self.machine.bindings.resolve(&Term::Var(*v))))
                    .collect();
                Ok(Some(Solution {
                    values,
                    names: self.var_names.clone(),
                }))
            }
            Ok(false) => {
                self.finish();
                Ok(None)
            }
            Err(e) => {
                self.finish();
                Err(e)
            }
        }
    }

    fn finish(&mut self) {
        self.status = Status::Exhausted;
        self.machine.choices.clear();
        self.machine.cont = None;
        self.machine.bindings.undo_to(0);
    }

    /// Drains the stream.
    pub fn collect_all(
        &mut self,
        kb: &mut KnowledgeBase<H>,
        host: &mut H,
    ) -> Result<Vec<Solution>> {
        let mut out = Vec::new();
        while let Some(s) = self.next_solution(kb, host)? {
            out.push(s);
        }
        Ok(out)
    }
}

fn could_match(bindings: &Bindings, goal_args: &[Term], head_args: &[Term]) -> bool {
    goal_args.iter().zip(head_args).all(|(g, h)| {
        let g = bindings.deref(g);
        match (g, h) {
            (Term::Var(_), _) | (_, Term::Var(_)) => true,
            (Term::Atom(a), Term::Atom(b)) => a == b,
            (Term::Int(a), Term::Int(b)) => a == b,
            (Term::Compound(a), Term::Compound(b)) => {
                a.args.len() == b.args.len() && a.functor == b.functor
            }
            _ => false,
        }
    })
}

fn type_name_check(name: &str, t: &Term) -> bool {
    match name {
        "var" => matches!(t, Term::Var(_)),
        "nonvar" => !matches!(t, Term::Var(_)),
        "atom" => matches!(t, Term::Atom(_)),
        "number" | "integer" => matches!(t, Term::Int(_)),
        "atomic" => matches!(t, Term::Atom(_) | Term::Int(_)),
        "compound" => matches!(t, Term::Compound(_)),
        "callable" => t.is_callable(),
        _ => unreachable!(),
    }
}

impl Machine {
    fn count_step(&mut self) -> Result<()> {
        if self.steps >= self.limits.max_steps {
            return Err(EngineError::Resource(ResourceLimit::Steps(self.limits.max_steps)));
        }
        self.steps += 1;
        Ok(())
    }

    fn push_choice(&mut self, trail_mark: usize, var_mark: u32, alt: Alt) -> Result<()> {
        if self.choices.len() >= self.limits.max_choice_points {
            return Err(EngineError::Resource(ResourceLimit::ChoicePoints(
                self.limits.max_choice_points,
            )));
        }
        self.choices.push(ChoicePoint {
            trail_mark,
            var_mark,
            alt,
        });
        Ok(())
    }

    /// Proves the current continuation. `Ok(true)` means a solution was
    /// reached; choice points below `base` are never touched.
    fn run<H>(&mut self, ctx: &mut Ctx<'_, H>, base: usize) -> Result<bool> {
        loop {
            let Some(node) = self.cont.take() else {
                return Ok(true);
            };
            self.cont = node.next.clone();
            let goal = node.goal.clone();
            drop(node);
            if !self.step(goal, ctx)? && !self.backtrack(base)? {
                return Ok(false);
            }
        }
    }

    /// Resumes the most recent alternative above `base`.
    fn backtrack(&mut self, base: usize) -> Result<bool> {
        loop {
            if self.choices.len() <= base {
                return Ok(false);
            }
            let cp = self.choices.pop().expect("non-empty");
            self.bindings.undo_to(cp.trail_mark);
            self.next_var = cp.var_mark;
            match cp.alt {
                Alt::Resume(cont) => {
                    self.cont = cont;
                    return Ok(true);
                }
                Alt::Clauses {
                    goal,
                    pred,
                    next,
                    cont,
                } => {
                    self.count_step()?;
                    if self.try_clauses(goal, pred, next, cont)? {
                        return Ok(true);
                    }
                }
                Alt::Native {
                    args,
                    answers,
                    cont,
                } => {
                    self.count_step()?;
                    if self.try_answers(args, answers, cont)? {
                        return Ok(true);
                    }
                }
            }
        }
    }

    fn next_candidate(&self, pred: &Predicate, goal_args: &[Term], from: usize) -> Option<usize> {
        (from..pred.clauses.len())
            .find(|&i| could_match(&self.bindings, goal_args, pred.clauses[i].head.args()))
    }

    fn try_clauses(
        &mut self,
        goal: Term,
        pred: Arc<Predicate>,
        start: usize,
        cont: Cont,
    ) -> Result<bool> {
        let barrier = self.choices.len();
        let trail_mark = self.bindings.mark();
        let var_mark = self.next_var;
        let goal_args = goal.args();
        let mut current = self.next_candidate(&pred, goal_args, start);
        while let Some(i) = current {
            // look ahead before unifying so a bound goal argument cannot hide
            // a later candidate
            let after = self.next_candidate(&pred, goal_args, i + 1);
            let clause = &pred.clauses[i];
            let base = self.next_var;
            let head = clause.head.offset_vars(base);
            if !self.bindings.unify(&goal, &head) {
                current = after;
                continue;
            }
            self.next_var += clause.var_count;
            if let Some(next) = after {
                self.push_choice(
                    trail_mark,
                    var_mark,
                    Alt::Clauses {
                        goal: goal.clone(),
                        pred: pred.clone(),
                        next,
                        cont: cont.clone(),
                    },
                )?;
            }
            self.cont = if clause.is_fact() {
                cont
            } else {
                push(
                    Goal::Call {
                        term: clause.body.offset_vars(base),
                        cut_barrier: barrier,
                    },
                    cont,
                )
            };
            return Ok(true);
        }
        Ok(false)
    }

    fn try_answers(
        &mut self,
        args: Vec<Term>,
        mut answers: Peekable<Box<dyn Iterator<Item = Vec<Term>>>>,
        cont: Cont,
    ) -> Result<bool> {
        let trail_mark = self.bindings.mark();
        let var_mark = self.next_var;
        while let Some(answer) = answers.next() {
            if answer.len() != args.len() {
                return Err(EngineError::Evaluation(format!(
                    "native answer has {} values for {} arguments",
                    answer.len(),
                    args.len()
                )));
            }
            if args
                .iter()
                .zip(answer.iter())
                .all(|(a, b)| self.bindings.unify(a, b))
            {
                if answers.peek().is_some() {
                    self.push_choice(
                        trail_mark,
                        var_mark,
                        Alt::Native {
                            args,
                            answers,
                            cont: cont.clone(),
                        },
                    )?;
                }
                self.cont = cont;
                return Ok(true);
            }
            self.bindings.undo_to(trail_mark);
        }
        Ok(false)
    }

    fn fresh_var(&mut self) -> Term {
        let v = Term::Var(VarId(self.next_var));
        self.next_var += 1;
        v
    }

    /// Copies `t` replacing every variable by a fresh one (consistently).
    fn copy_fresh(&mut self, t: &Term, map: &mut HashMap<VarId, Term>) -> Term {
        match t {
            Term::Var(v) => {
                if let Some(n) = map.get(v) {
                    return n.clone();
                }
                let n = self.fresh_var();
                map.insert(*v, n.clone());
                n
            }
            Term::Compound(c) => {
                let args = c.args.iter().map(|a| self.copy_fresh(a, map)).collect();
                Term::compound_from(c.functor.clone(), args)
            }
            other => other.clone(),
        }
    }

    /// Executes one goal. `Ok(false)` means the goal failed.
    fn step<H>(&mut self, goal: Goal, ctx: &mut Ctx<'_, H>) -> Result<bool> {
        let (term, cut_barrier) = match goal {
            Goal::CutTo(h) => {
                self.choices.truncate(h);
                return Ok(true);
            }
            Goal::Call { term, cut_barrier } => (term, cut_barrier),
        };
        self.count_step()?;
        let term = self.bindings.deref(&term).clone();
        let (name, args): (Atom, &[Term]) = match &term {
            Term::Var(_) => return Err(EngineError::instantiation("goal is unbound")),
            Term::Int(_) => return Err(EngineError::type_error("callable", &term)),
            Term::Atom(a) => (a.clone(), &[]),
            Term::Compound(c) => (c.functor.clone(), &c.args),
        };
        match (name.as_str(), args.len()) {
            ("true", 0) => Ok(true),
            ("fail", 0) | ("false", 0) => Ok(false),
            ("!", 0) => {
                self.choices.truncate(cut_barrier);
                Ok(true)
            }
            (",", 2) => {
                let rest = push(
                    Goal::Call {
                        term: args[1].clone(),
                        cut_barrier,
                    },
                    self.cont.take(),
                );
                self.cont = push(
                    Goal::Call {
                        term: args[0].clone(),
                        cut_barrier,
                    },
                    rest,
                );
                Ok(true)
            }
            (";", 2) => {
                let lhs = self.bindings.deref(&args[0]).clone();
                if lhs.is_functor("->", 2) {
                    let (c, t) = (lhs.args()[0].clone(), lhs.args()[1].clone());
                    self.if_then_else(c, t, args[1].clone(), cut_barrier)?;
                } else {
                    let cont = self.cont.take();
                    let else_branch = push(
                        Goal::Call {
                            term: args[1].clone(),
                            cut_barrier,
                        },
                        cont.clone(),
                    );
                    self.push_choice(
                        self.bindings.mark(),
                        self.next_var,
                        Alt::Resume(else_branch),
                    )?;
                    self.cont = push(
                        Goal::Call {
                            term: lhs,
                            cut_barrier,
                        },
                        cont,
                    );
                }
                Ok(true)
            }
            ("->", 2) => {
                self.if_then_else(
                    args[0].clone(),
                    args[1].clone(),
                    Term::atom("fail"),
                    cut_barrier,
                )?;
                Ok(true)
            }
            ("\\+", 1) => {
                let h = self.choices.len();
                let cont = self.cont.take();
                self.push_choice(self.bindings.mark(), self.next_var, Alt::Resume(cont))?;
                let tail = push(
                    Goal::CutTo(h),
                    push(
                        Goal::Call {
                            term: Term::atom("fail"),
                            cut_barrier: h,
                        },
                        None,
                    ),
                );
                self.cont = push(
                    Goal::Call {
                        term: args[0].clone(),
                        cut_barrier: h + 1,
                    },
                    tail,
                );
                Ok(true)
            }
            ("call", n) if n >= 1 => {
                let target = self.bindings.deref(&args[0]).clone();
                let target = if n == 1 {
                    target
                } else {
                    match &target {
                        Term::Var(_) => return Err(EngineError::instantiation("call/N: unbound goal")),
                        Term::Atom(a) => Term::compound_from(a.clone(), args[1..].to_vec()),
                        Term::Compound(c) => {
                            let mut all = c.args.to_vec();
                            all.extend_from_slice(&args[1..]);
                            Term::compound_from(c.functor.clone(), all)
                        }
                        Term::Int(_) => return Err(EngineError::type_error("callable", &target)),
                    }
                };
                let barrier = self.choices.len();
                self.cont = push(
                    Goal::Call {
                        term: target,
                        cut_barrier: barrier,
                    },
                    self.cont.take(),
                );
                Ok(true)
            }
            ("findall", 3) => self.findall(&args[0], &args[1], &args[2], ctx),
            ("=", 2) => Ok(self.bindings.unify(&args[0], &args[1])),
            ("\\=", 2) => {
                let mark = self.bindings.mark();
                let unifies = self.bindings.unify(&args[0], &args[1]);
                self.bindings.undo_to(mark);
                Ok(!unifies)
            }
            ("==", 2) | ("\\==", 2) | ("@<", 2) | ("@>", 2) | ("@=<", 2) | ("@>=", 2) => {
                let a = self.bindings.resolve(&args[0]);
                let b = self.bindings.resolve(&args[1]);
                let ord = a.standard_cmp(&b);
                Ok(match name.as_str() {
                    "==" => ord == Ordering::Equal,
                    "\\==" => ord != Ordering::Equal,
                    "@<" => ord == Ordering::Less,
                    "@>" => ord == Ordering::Greater,
                    "@=<" => ord != Ordering::Greater,
                    _ => ord != Ordering::Less,
                })
            }
            ("compare", 3) => {
                let a = self.bindings.resolve(&args[1]);
                let b = self.bindings.resolve(&args[2]);
                let sym = match a.standard_cmp(&b) {
                    Ordering::Less => "<",
                    Ordering::Equal => "=",
                    Ordering::Greater => ">",
                };
                Ok(self.bindings.unify(&args[0], &Term::atom(sym)))
            }
            ("is", 2) => {
                let v = eval_arith(&args[1], &self.bindings)?;
                Ok(self.bindings.unify(&args[0], &Term::Int(v)))
            }
            ("<", 2) | (">", 2) | ("=<", 2) | (">=", 2) | ("=:=", 2) | ("=\\=", 2) => {
                let a = eval_arith(&args[0], &self.bindings)?;
                let b = eval_arith(&args[1], &self.bindings)?;
                Ok(match name.as_str() {
                    "<" => a < b,
                    ">" => a > b,
                    "=<" => a <= b,
                    ">=" => a >= b,
                    "=:=" => a == b,
                    _ => a != b,
                })
            }
            ("assert", 1) | ("assertz", 1) | ("asserta", 1) => {
                let clause = self.bindings.resolve(&args[0]);
                let pos = if name.as_str() == "asserta" {
                    Position::Front
                } else {
                    Position::Back
                };
                ctx.kb.assert_term(&clause, pos)?;
                Ok(true)
            }
            ("retract", 1) => {
                let pattern = args[0].clone();
                ctx.kb
                    .retract_with(&pattern, &mut self.bindings, &mut self.next_var)
            }
            ("var", 1) | ("nonvar", 1) | ("atom", 1) | ("number", 1) | ("integer", 1)
            | ("atomic", 1) | ("compound", 1) | ("callable", 1) => {
                let t = self.bindings.deref(&args[0]);
                Ok(type_name_check(name.as_str(), t))
            }
            ("is_list", 1) => Ok(self.bindings.resolve(&args[0]).list_items().is_some()),
            ("length", 2) => self.length(&args[0], &args[1]),
            ("msort", 2) | ("sort", 2) => {
                let list = self.bindings.resolve(&args[0]);
                let Some(mut items) = list.list_items() else {
                    return Err(EngineError::instantiation("sort: argument is not a proper list"));
                };
                items.sort_by(|a, b| a.standard_cmp(b));
                if name.as_str() == "sort" {
                    items.dedup_by(|a, b| a.standard_cmp(b) == Ordering::Equal);
                }
                Ok(self.bindings.unify(&args[1], &Term::list(items)))
            }
            ("write", 1) | ("writeq", 1) => {
                let t = self.bindings.resolve(&args[0]);
                let text = format_term(&t, name.as_str() == "writeq");
                ctx.kb.output_mut().push_str(&text);
                Ok(true)
            }
            ("nl", 0) => {
                ctx.kb.output_mut().push('\n');
                Ok(true)
            }
            _ => {
                let key = PredKey::new(name.clone(), args.len());
                if let Some(native) = ctx.natives.get(&key) {
                    return self.call_native(native.clone(), args, ctx);
                }
                match ctx.clauses.get(&key) {
                    Some(pred) => {
                        let cont = self.cont.take();
                        self.try_clauses(term.clone(), pred.clone(), 0, cont)
                    }
                    None => Err(EngineError::Existence {
                        name: key.name.to_string(),
                        arity: key.arity,
                    }),
                }
            }
        }
    }

    fn if_then_else(&mut self, cond: Term, then: Term, otherwise: Term, cut_barrier: usize) -> Result<()> {
        let h = self.choices.len();
        let cont = self.cont.take();
        let else_branch = push(
            Goal::Call {
                term: otherwise,
                cut_barrier,
            },
            cont.clone(),
        );
        self.push_choice(self.bindings.mark(), self.next_var, Alt::Resume(else_branch))?;
        let then_branch = push(
            Goal::CutTo(h),
            push(
                Goal::Call {
                    term: then,
                    cut_barrier,
                },
                cont,
            ),
        );
        self.cont = push(
            Goal::Call {
                term: cond,
                cut_barrier: h + 1,
            },
            then_branch,
        );
        Ok(())
    }

    fn call_native<H>(&mut self, native: Native<H>, args: &[Term], ctx: &mut Ctx<'_, H>) -> Result<bool> {
        let resolved: Vec<Term> = args.iter().map(|a| self.bindings.resolve(a)).collect();
        match native {
            Native::Det(f) => match f(ctx.host, &resolved)? {
                None => Ok(false),
                Some(answer) => {
                    if answer.len() != args.len() {
                        return Err(EngineError::Evaluation(format!(
                            "native answer has {} values for {} arguments",
                            answer.len(),
                            args.len()
                        )));
                    }
                    let mark = self.bindings.mark();
                    let ok = resolved
                        .iter()
                        .zip(answer.iter())
                        .all(|(a, b)| self.bindings.unify(a, b));
                    if !ok {
                        self.bindings.undo_to(mark);
                    }
                    Ok(ok)
                }
            },
            Native::Nondet(f) => {
                let answers = f(ctx.host, &resolved)?.peekable();
                let cont = self.cont.take();
                self.try_answers(resolved, answers, cont)
            }
        }
    }

    fn findall<H>(&mut self, template: &Term, goal: &Term, result: &Term, ctx: &mut Ctx<'_, H>) -> Result<bool> {
        let base = self.choices.len();
        let saved = self.cont.take();
        let mark = self.bindings.mark();
        let var_mark = self.next_var;
        self.cont = push(
            Goal::Call {
                term: goal.clone(),
                cut_barrier: base,
            },
            None,
        );
        let mut raw = Vec::new();
        let mut found = self.run(ctx, base)?;
        while found {
            raw.push(self.bindings.resolve(template));
            found = self.backtrack(base)? && self.run(ctx, base)?;
        }
        debug_assert_eq!(self.choices.len(), base);
        self.bindings.undo_to(mark);
        self.next_var = var_mark;
        self.cont = saved;
        let items: Vec<Term> = raw
            .iter()
            .map(|t| {
                let mut map = HashMap::new();
                self.copy_fresh(t, &mut map)
            })
            .collect();
        Ok(self.bindings.unify(result, &Term::list(items)))
    }

    fn length(&mut self, list: &Term, len: &Term) -> Result<bool> {
        let resolved = self.bindings.resolve(list);
        if let Some(items) = resolved.list_items() {
            return Ok(self.bindings.unify(len, &Term::Int(items.len() as i64)));
        }
        match self.bindings.deref(len).clone() {
            Term::Int(n) if n >= 0 => {
                let items: Vec<Term> = (0..n).map(|_| self.fresh_var()).collect();
                Ok(self.bindings.unify(list, &Term::list(items)))
            }
            Term::Int(_) => Ok(false),
            Term::Var(_) => Err(EngineError::instantiation("length/2 on a partial list")),
            other => Err(EngineError::type_error("integer", &other)),
        }
    }
}
