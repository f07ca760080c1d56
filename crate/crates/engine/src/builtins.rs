//! Names reserved by control constructs and builtin predicates.

use crate::term::PredKey;

const BUILTINS: &[(&str, usize)] = &[
    ("true", 0),
    ("fail", 0),
    ("false", 0),
    ("!", 0),
    (",", 2),
    (";", 2),
    ("->", 2),
    ("\\+", 1),
    ("call", 1),
    ("call", 2),
    ("call", 3),
    ("call", 4),
    ("call", 5),
    ("call", 6),
    ("findall", 3),
    ("=", 2),
    ("\\=", 2),
    ("==", 2),
    ("\\==", 2),
    ("@<", 2),
    ("@>", 2),
    ("@=<", 2),
    ("@>=", 2),
    ("compare", 3),
    ("is", 2),
    ("<", 2),
    (">", 2),
    ("=<", 2),
    (">=", 2),
    ("=:=", 2),
    ("=\\=", 2),
    ("assert", 1),
    ("asserta", 1),
    ("assertz", 1),
    ("retract", 1),
    ("var", 1),
    ("nonvar", 1),
    ("atom", 1),
    ("number", 1),
    ("integer", 1),
    ("atomic", 1),
    ("compound", 1),
    ("callable", 1),
    ("is_list", 1),
    ("length", 2),
    ("msort", 2),
    ("sort", 2),
    ("write", 1),
    ("writeq", 1),
    ("nl", 0),
];

pub fn is_builtin(key: &PredKey) -> bool {
    BUILTINS
        .iter()
        .any(|(n, a)| *a == key.arity && *n == key.name.as_str())
}

/// Every reserved predicate indicator.
pub fn builtin_keys() -> impl Iterator<Item = PredKey> {
    BUILTINS.iter().map(|(n, a)| PredKey::new(*n, *a))
}

/// Small list library in source form. Not loaded automatically; hosts that
/// want it consult it like any other program.
pub const LIST_LIBRARY: &str = r#"
member(X, [X|_]).
member(X, [_|T]) :- member(X, T).
memberchk(X, L) :- member(X, L), !.
append([], L, L).
append([H|T], L, [H|R]) :- append(T, L, R).
last([X], X) :- !.
last([_|T], X) :- last(T, X).
"#;
