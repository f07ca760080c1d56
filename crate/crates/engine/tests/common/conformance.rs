//! Query/answer conformance cases. Expected answers are hand enumerations
//! of the small programs; each case states how it was derived.
//!
//! Shared by the engine's own test target and the workspace acceptance
//! target through `#[path]`.

#![allow(dead_code)]

use logibot_engine::{EngineError, KnowledgeBase};

#[derive(Debug)]
pub enum Expect {
    /// Every solution, in order, rendered as `Name = Value, ...` (or `true`).
    Answers(&'static [&'static str]),
    Error(ErrorKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Existence,
    Instantiation,
    Type,
    Evaluation,
    Permission,
    Resource,
}

fn kind(e: &EngineError) -> Option<ErrorKind> {
    Some(match e {
        EngineError::Existence { .. } => ErrorKind::Existence,
        EngineError::Instantiation { .. } => ErrorKind::Instantiation,
        EngineError::Type { .. } => ErrorKind::Type,
        EngineError::Evaluation(_) => ErrorKind::Evaluation,
        EngineError::Permission { .. } => ErrorKind::Permission,
        EngineError::Resource(_) => ErrorKind::Resource,
        _ => return None,
    })
}

pub struct Case {
    pub name: &'static str,
    pub program: &'static str,
    pub query: &'static str,
    pub expect: Expect,
}

use Expect::{Answers, Error};

pub const CASES: &[Case] = &[
    // unification
    Case { name: "unify_structural", program: "", query: "f(X, b) = f(a, Y)", expect: Answers(&["X = a, Y = b"]) },
    Case { name: "unify_identity", program: "", query: "X = X", expect: Answers(&["X = _G0"]) },
    Case { name: "occurs_check_direct", program: "", query: "X = f(X)", expect: Answers(&[]) },
    Case { name: "occurs_check_indirect", program: "", query: "f(X, Y) = f(Y, g(X))", expect: Answers(&[]) },
    Case { name: "unify_functor_clash", program: "", query: "f(a) = g(a)", expect: Answers(&[]) },
    Case { name: "unify_arity_clash", program: "", query: "f(a) = f(a, b)", expect: Answers(&[]) },
    Case { name: "unify_shared_variable", program: "", query: "f(X, X) = f(a, Y)", expect: Answers(&["X = a, Y = a"]) },
    Case { name: "not_unifiable", program: "", query: "a \\= b, \\+ a \\= a", expect: Answers(&["true"]) },
    Case { name: "list_unify", program: "", query: "[H|T] = [1, 2, 3]", expect: Answers(&["H = 1, T = [2,3]"]) },
    Case { name: "strict_equality", program: "", query: "X == X, \\+ X == Y, f(a) \\== f(b)", expect: Answers(&["X = _G0, Y = _G1"]) },
    // backtracking order
    Case { name: "grandparent", program: "parent(a,b). parent(b,c). grand(X,Z) :- parent(X,Y), parent(Y,Z).", query: "grand(a, Z)", expect: Answers(&["Z = c"]) },
    Case { name: "clause_order", program: "p(3). p(1). p(2).", query: "p(X)", expect: Answers(&["X = 3", "X = 1", "X = 2"]) },
    Case { name: "leftmost_goal_first", program: "p(1). p(2). q(a). q(b).", query: "p(X), q(Y)", expect: Answers(&["X = 1, Y = a", "X = 1, Y = b", "X = 2, Y = a", "X = 2, Y = b"]) },
    Case { name: "member_style", program: "m(X,'.'(X,_)). m(X,'.'(_,T)) :- m(X,T).", query: "m(X, [1,2])", expect: Answers(&["X = 1", "X = 2"]) },
    Case { name: "recursive_path", program: "e(a,b). e(b,c). e(c,d). path(X,Y) :- e(X,Y). path(X,Y) :- e(X,Z), path(Z,Y).", query: "path(a, W)", expect: Answers(&["W = b", "W = c", "W = d"]) },
    Case { name: "disjunction_order", program: "", query: "(X = 1 ; X = 2 ; X = 3)", expect: Answers(&["X = 1", "X = 2", "X = 3"]) },
    Case { name: "fail_empty", program: "", query: "fail", expect: Answers(&[]) },
    Case { name: "true_once", program: "", query: "true", expect: Answers(&["true"]) },
    // cut
    Case { name: "cut_first", program: "p(1). p(2). first(X) :- p(X), !.", query: "first(X)", expect: Answers(&["X = 1"]) },
    Case { name: "cut_prunes_later_clauses", program: "t(X) :- X = a, !. t(b).", query: "t(Y)", expect: Answers(&["Y = a"]) },
    Case { name: "cut_confined_to_callee", program: "p(1). p(2). q(X) :- p(X), !. r(X, Y) :- p(X), q(Y).", query: "r(X, Y)", expect: Answers(&["X = 1, Y = 1", "X = 2, Y = 1"]) },
    Case { name: "cut_in_call_is_local", program: "p(1). p(2).", query: "p(X), call((p(Y), !))", expect: Answers(&["X = 1, Y = 1", "X = 2, Y = 1"]) },
    Case { name: "cut_in_disjunction_cuts_clause", program: "c(X) :- (X = 1, ! ; X = 2). c(3).", query: "c(X)", expect: Answers(&["X = 1"]) },
    Case { name: "cut_after_failure_branch", program: "m(X) :- X > 5, !, fail. m(_).", query: "m(7)", expect: Answers(&[]) },
    Case { name: "cut_max", program: "max(X, Y, X) :- X >= Y, !. max(_, Y, Y).", query: "max(3, 9, M), max(8, 2, N)", expect: Answers(&["M = 9, N = 8"]) },
    // negation as failure
    Case { name: "naf_no_solution", program: "p(1).", query: "\\+ p(2)", expect: Answers(&["true"]) },
    Case { name: "naf_has_solution", program: "p(1).", query: "\\+ p(1)", expect: Answers(&[]) },
    Case { name: "naf_binds_nothing", program: "p(1).", query: "\\+ \\+ p(X), var(X)", expect: Answers(&["X = _G0"]) },
    Case { name: "naf_cut_is_local", program: "p(1). p(2).", query: "p(X), \\+ (X = 1, !)", expect: Answers(&["X = 2"]) },
    // if-then-else
    Case { name: "ite_then", program: "", query: "(1 < 2 -> X = yes ; X = no)", expect: Answers(&["X = yes"]) },
    Case { name: "ite_else", program: "", query: "(2 < 1 -> X = yes ; X = no)", expect: Answers(&["X = no"]) },
    Case { name: "ite_condition_committed", program: "p(1). p(2).", query: "(p(X) -> Y = X ; Y = none)", expect: Answers(&["X = 1, Y = 1"]) },
    Case { name: "ite_then_backtracks", program: "p(1). p(2).", query: "(true -> p(X) ; X = 0)", expect: Answers(&["X = 1", "X = 2"]) },
    Case { name: "if_then_without_else_fails", program: "", query: "(fail -> true)", expect: Answers(&[]) },
    // assert / retract
    Case { name: "assert_then_retract", program: "", query: "assert(visited(wp7)), retract(visited(W))", expect: Answers(&["W = wp7"]) },
    Case { name: "retract_first_match", program: "p(1). p(2).", query: "retract(p(X))", expect: Answers(&["X = 1"]) },
    Case { name: "retract_missing_fails", program: "q(1).", query: "retract(q(2))", expect: Answers(&[]) },
    Case { name: "retract_rule_not_fact", program: "r(a). r(X) :- s(X). s(b).", query: "retract((r(X) :- s(X))), findall(Y, r(Y), L)", expect: Answers(&["X = _G0, Y = _G1, L = [a,b]"]) },
    Case { name: "logical_update_assert", program: "c(1).", query: "c(X), assert(c(2)), X > 0", expect: Answers(&["X = 1"]) },
    Case { name: "logical_update_retract", program: "c(1). c(2). c(3).", query: "c(X), retract(c(_))", expect: Answers(&["X = 1", "X = 2", "X = 3"]) },
    Case { name: "own_asserts_invisible_to_open_stream", program: "f(0).", query: "assert(f(1)), findall(X, f(X), L)", expect: Answers(&["X = _G0, L = [0]"]) },
    // findall
    Case { name: "findall_order", program: "p(3). p(1). p(2).", query: "findall(X, p(X), L)", expect: Answers(&["X = _G0, L = [3,1,2]"]) },
    Case { name: "findall_empty", program: "p(1).", query: "findall(X, (p(X), X > 5), L)", expect: Answers(&["X = _G0, L = []"]) },
    Case { name: "findall_template", program: "p(1). p(2).", query: "findall(f(X, Y), (p(X), p(Y), X < Y), L)", expect: Answers(&["X = _G0, Y = _G1, L = [f(1,2)]"]) },
    Case { name: "findall_nested_count", program: "v(b1, rush). v(b2, flank). v(b3, rush).", query: "findall(B, v(B, rush), L), length(L, N)", expect: Answers(&["B = _G0, L = [b1,b3], N = 2"]) },
    // arithmetic
    Case { name: "arith_precedence", program: "", query: "X is 2 + 3 * 4", expect: Answers(&["X = 14"]) },
    Case { name: "arith_floor_div", program: "", query: "A is 7 // 2, B is -7 // 2, C is -7 mod 2, D is 7 mod -2", expect: Answers(&["A = 3, B = -4, C = 1, D = -1"]) },
    Case { name: "arith_functions", program: "", query: "X is abs(-4) + min(3, 8) * max(1, 2) - -1", expect: Answers(&["X = 11"]) },
    Case { name: "arith_compare", program: "", query: "1 < 2, 2 =< 2, 3 > 2, 3 >= 3, 4 =:= 2 + 2, 4 =\\= 5", expect: Answers(&["true"]) },
    Case { name: "arith_is_checks", program: "", query: "4 is 2 + 2, \\+ 5 is 2 + 2", expect: Answers(&["true"]) },
    Case { name: "counter_recursion", program: "len([], 0). len([_|T], N) :- len(T, M), N is M + 1.", query: "len([a, b, c, d], N)", expect: Answers(&["N = 4"]) },
    // type checks and term order
    Case { name: "type_checks", program: "", query: "var(X), atom(a), number(3), nonvar(f(X)), \\+ atom(3), \\+ number(a)", expect: Answers(&["X = _G0"]) },
    Case { name: "standard_order", program: "", query: "msort([b, 2, f(a), a, 1], L)", expect: Answers(&["L = [1,2,a,b,f(a)]"]) },
    // errors
    Case { name: "unknown_predicate", program: "", query: "undefined_thing(1)", expect: Error(ErrorKind::Existence) },
    Case { name: "is_unbound", program: "", query: "X is Y + 1", expect: Error(ErrorKind::Instantiation) },
    Case { name: "compare_unbound", program: "", query: "X < 1", expect: Error(ErrorKind::Instantiation) },
    Case { name: "arith_type", program: "", query: "X is foo + 1", expect: Error(ErrorKind::Type) },
    Case { name: "div_zero", program: "", query: "X is 1 // 0", expect: Error(ErrorKind::Evaluation) },
    Case { name: "call_unbound", program: "", query: "call(G)", expect: Error(ErrorKind::Instantiation) },
    Case { name: "call_number", program: "", query: "call(3)", expect: Error(ErrorKind::Type) },
    Case { name: "assert_control", program: "", query: "assert((a, b))", expect: Error(ErrorKind::Permission) },
    Case { name: "retract_builtin", program: "", query: "retract(atom(_))", expect: Error(ErrorKind::Permission) },
    Case { name: "error_after_solutions", program: "p(1). p(x).", query: "p(X), Y is X + 1", expect: Error(ErrorKind::Type) },
    Case { name: "runaway_recursion", program: "loop :- loop.", query: "loop", expect: Error(ErrorKind::Resource) },
];

/// Runs one case; `Err` carries a description of the mismatch.
pub fn run_case(case: &Case) -> Result<(), String> {
    let mut kb = KnowledgeBase::new();
    kb.consult(case.program)
        .map_err(|e| format!("{}: program does not load: {e}", case.name))?;
    let mut stream = kb
        .query(case.query)
        .map_err(|e| format!("{}: query does not parse: {e}", case.name))?;
    let mut got = Vec::new();
    let outcome = loop {
        match stream.next_solution(&mut kb, &mut ()) {
            Ok(Some(s)) => got.push(s.to_string()),
            Ok(None) => break Ok(()),
            Err(e) => break Err(e),
        }
    };
    match (&case.expect, outcome) {
        (Expect::Answers(want), Ok(())) => {
            if got.iter().map(String::as_str).eq(want.iter().copied()) {
                Ok(())
            } else {
                Err(format!("{}: expected {want:?}, got {got:?}", case.name))
            }
        }
        (Expect::Error(want), Err(e)) if kind(&e) == Some(*want) => Ok(()),
        (expect, outcome) => Err(format!(
            "{}: expected {expect:?}, got answers {got:?} then {outcome:?}",
            case.name
        )),
    }
}
