//! A small logic programming engine for embedding in a game host.
//!
//! Supports Edinburgh-syntax Horn clauses over atoms, integers, variables
//! and compound terms, depth-first resolution with cut, negation as failure,
//! if-then-else, `findall/3`, integer arithmetic, a dynamic database with
//! the logical update view, and host-registered native predicates.
//!
//! ```
//! use logibot_engine::KnowledgeBase;
//!
//! let mut kb = KnowledgeBase::new();
//! kb.consult("edge(a, b). edge(b, c). path(X, Y) :- edge(X, Y).
//!             path(X, Z) :- edge(X, Y), path(Y, Z).").unwrap();
//! let answers = kb.query_all("path(a, W)").unwrap();
//! assert_eq!(answers.len(), 2);
//! assert_eq!(answers[1].to_string(), "W = c");
//! ```

mod arith;
mod bindings;
mod builtins;
mod error;
mod kb;
mod ops;
mod parser;
mod solve;
mod term;
mod write;

pub use arith::eval_arith;
pub use bindings::{unify, Bindings};
pub use builtins::{builtin_keys, is_builtin, LIST_LIBRARY};
pub use error::{EngineError, ResourceLimit, Result};
pub use kb::{Clause, DetHandler, KnowledgeBase, Native, NativeMode, NondetHandler, Position};
pub use parser::{parse_program, parse_term, ParsedClause, ParsedTerm};
pub use solve::{Limits, Solution, SolutionStream};
pub use term::{Atom, Compound, PredKey, Term, VarId};
pub use write::format_term;
